//! On-disk formats: subspace and code files (JSON, self-describing with the
//! tower moduli), the spectrum CSV with its comment header, and the verdict
//! objects every command emits.
//!
//! All integer counts are serialized as decimal strings so files stay exact at
//! any size, maps are ordered, and nothing platform- or timing-dependent is
//! ever written: repeated runs are byte-identical.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use hscat_core::dual::{DualContext, FormSpec};
use hscat_core::gf::FieldTower;
use hscat_core::linalg::{Level, Matrix};
use hscat_core::mrd::{LinearizedPoly, RankMetricCode};
use hscat_core::qcombin::{QIdentityReport, SpectrumReport};
use hscat_core::subspace::{FqSubspace, HyperplaneSpectrum};
use num_bigint::BigUint;

/// Nested coefficient form of one `F_{q^n}` element: `n` tuples of `e` residues.
pub type ElementJson = Vec<Vec<u64>>;

#[derive(Debug, Serialize, Deserialize)]
pub struct SubspaceFile {
    pub p: u64,
    pub e: usize,
    pub n: usize,
    pub r: usize,
    pub fq_modulus: Vec<u64>,
    pub fqn_modulus: Vec<Vec<u64>>,
    /// `F_q`-basis rows, each a length-`r` vector of elements.
    pub basis: Vec<Vec<ElementJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CodeFile {
    pub p: u64,
    pub e: usize,
    pub n: usize,
    pub fq_modulus: Vec<u64>,
    pub fqn_modulus: Vec<Vec<u64>>,
    /// Generators as coefficient vectors `(a_0, …, a_{n-1})`.
    pub generators: Vec<Vec<ElementJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

pub fn build_tower(p: u64, e: usize, n: usize, cap: u64) -> Result<Arc<FieldTower>> {
    FieldTower::with_cap(p, e, n, cap)
        .map(Arc::new)
        .map_err(|e| anyhow::Error::new(e).context("tower construction failed"))
}

fn element_to_json(tower: &FieldTower, x: u32) -> ElementJson {
    tower.element_to_coeffs(x)
}

fn element_from_json(tower: &FieldTower, e: &ElementJson) -> Result<u32> {
    tower
        .element_from_coeffs(e)
        .map_err(|err| anyhow!("bad element in file: {err}"))
}

pub fn subspace_to_file(u: &FqSubspace, provenance: Option<serde_json::Value>) -> SubspaceFile {
    let t = u.tower();
    let basis = u
        .basis()
        .iter_rows()
        .map(|row| row.iter().map(|&x| element_to_json(t, x)).collect())
        .collect();
    SubspaceFile {
        p: t.p(),
        e: t.e(),
        n: t.n(),
        r: u.ambient_r(),
        fq_modulus: t.fq_modulus(),
        fqn_modulus: t.fqn_modulus(),
        basis,
        provenance,
    }
}

pub fn subspace_from_file(f: &SubspaceFile, cap: u64) -> Result<FqSubspace> {
    let tower = build_tower(f.p, f.e, f.n, cap)?;
    if !tower.moduli_match(&f.fq_modulus, &f.fqn_modulus) {
        bail!("file moduli do not match the canonical moduli for (p, e, n)");
    }
    let mut rows = Vec::with_capacity(f.basis.len());
    for row in &f.basis {
        if row.len() != f.r {
            bail!("basis row length {} differs from ambient r = {}", row.len(), f.r);
        }
        let mut v = Vec::with_capacity(f.r);
        for e in row {
            v.push(element_from_json(&tower, e)?);
        }
        rows.push(v);
    }
    FqSubspace::from_fqn_vectors(tower, f.r, &rows)
        .map_err(|e| anyhow::Error::new(e).context("invalid subspace"))
}

pub fn code_to_file(c: &RankMetricCode, provenance: Option<serde_json::Value>) -> CodeFile {
    let t = c.tower();
    let generators = c
        .generator_matrix()
        .iter_rows()
        .map(|row| row.iter().map(|&x| element_to_json(t, x)).collect())
        .collect();
    CodeFile {
        p: t.p(),
        e: t.e(),
        n: t.n(),
        fq_modulus: t.fq_modulus(),
        fqn_modulus: t.fqn_modulus(),
        generators,
        provenance,
    }
}

pub fn code_from_file(f: &CodeFile, cap: u64) -> Result<RankMetricCode> {
    let tower = build_tower(f.p, f.e, f.n, cap)?;
    if !tower.moduli_match(&f.fq_modulus, &f.fqn_modulus) {
        bail!("file moduli do not match the canonical moduli for (p, e, n)");
    }
    let mut gens = Vec::with_capacity(f.generators.len());
    for g in &f.generators {
        if g.len() != f.n {
            bail!("generator must have exactly n = {} coefficients", f.n);
        }
        let mut coeffs = Vec::with_capacity(f.n);
        for e in g {
            coeffs.push(element_from_json(&tower, e)?);
        }
        gens.push(
            LinearizedPoly::new(tower.clone(), coeffs)
                .map_err(|e| anyhow::Error::new(e).context("invalid generator"))?,
        );
    }
    RankMetricCode::new(tower, &gens).map_err(|e| anyhow::Error::new(e).context("invalid code"))
}

// ---------------------------------------------------------------------------
// Spectrum CSV.
// ---------------------------------------------------------------------------

pub fn spectrum_to_csv(s: &HyperplaneSpectrum) -> String {
    let mut out = format!("# r={} n={} q={} k={}\n", s.r, s.n, s.q, s.k);
    out.push_str("i,h_i\n");
    for (i, c) in &s.counts {
        out.push_str(&format!("{},{}\n", i, c));
    }
    out
}

pub fn spectrum_from_csv(text: &str) -> Result<HyperplaneSpectrum> {
    let mut r = None;
    let mut n = None;
    let mut q = None;
    let mut k = None;
    let mut counts = std::collections::BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for tok in rest.split_whitespace() {
                if let Some((key, val)) = tok.split_once('=') {
                    match key {
                        "r" => r = Some(val.parse()?),
                        "n" => n = Some(val.parse()?),
                        "q" => q = Some(val.parse()?),
                        "k" => k = Some(val.parse()?),
                        _ => {}
                    }
                }
            }
            continue;
        }
        if line.starts_with("i,") {
            continue; // header
        }
        let (i, c) = line
            .split_once(',')
            .ok_or_else(|| anyhow!("bad spectrum row: {line}"))?;
        let i: usize = i.trim().parse().context("bad dimension column")?;
        let c: BigUint = c.trim().parse().context("bad count column")?;
        counts.insert(i, c);
    }
    Ok(HyperplaneSpectrum {
        r: r.ok_or_else(|| anyhow!("missing r in spectrum header"))?,
        n: n.ok_or_else(|| anyhow!("missing n in spectrum header"))?,
        q: q.ok_or_else(|| anyhow!("missing q in spectrum header"))?,
        k: k.ok_or_else(|| anyhow!("missing k in spectrum header"))?,
        counts,
    })
}

// ---------------------------------------------------------------------------
// Linear-set dump.
// ---------------------------------------------------------------------------

/// JSON dump of a linear set: normalized point coordinates with their weights.
pub fn linear_set_json(tower: &FieldTower, l: &hscat_core::linset::LinearSet) -> serde_json::Value {
    let points: Vec<Vec<ElementJson>> = l
        .points
        .iter()
        .map(|p| p.iter().map(|&x| element_to_json(tower, x)).collect())
        .collect();
    serde_json::json!({
        "r": l.r,
        "rank": l.rank,
        "points": points,
        "weights": l.weights,
    })
}

// ---------------------------------------------------------------------------
// Verdict objects.
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct TowerInfo {
    pub p: u64,
    pub e: usize,
    pub n: usize,
    pub q: u64,
    pub qn: u64,
}

impl TowerInfo {
    pub fn of(t: &FieldTower) -> Self {
        TowerInfo { p: t.p(), e: t.e(), n: t.n(), q: t.q(), qn: t.qn() }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundInfo {
    /// `rn/(h+1)` as an exact reduced fraction.
    pub numerator: u64,
    pub denominator: u64,
    pub subgeometry_dim: usize,
}

pub fn bound_info(r: usize, n: usize, h: usize) -> BoundInfo {
    let num = (r * n) as u64;
    let den = (h + 1) as u64;
    let g = gcd(num, den);
    BoundInfo { numerator: num / g, denominator: den / g, subgeometry_dim: r }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub index: u64,
    pub intersection_dim: usize,
    /// rref rows of the violating subspace over `F_{q^n}`.
    pub rows: Vec<Vec<ElementJson>>,
}

#[derive(Debug, Serialize)]
pub struct CheckVerdict {
    pub command: &'static str,
    pub tower: TowerInfo,
    pub r: usize,
    pub k: usize,
    pub h: usize,
    pub bound: BoundInfo,
    /// Intersection window `[rn/(h+1)-n, rn/(h+1)-n+h]` when `k = rn/(h+1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection_window: Option<[i64; 2]>,
    pub enumerated_subspaces: String,
    pub scattered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

pub fn matrix_rows_json(tower: &FieldTower, m: &Matrix) -> Vec<Vec<ElementJson>> {
    assert_eq!(m.level, Level::Fqn);
    m.iter_rows()
        .map(|row| row.iter().map(|&x| element_to_json(tower, x)).collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct SpectrumVerdict {
    pub command: &'static str,
    pub tower: TowerInfo,
    pub r: usize,
    pub k: usize,
    pub counts: Vec<(usize, String)>,
    pub total: String,
    pub expected_total: String,
    pub sum_identity_holds: bool,
}

pub fn spectrum_verdict(t: &FieldTower, s: &HyperplaneSpectrum) -> SpectrumVerdict {
    SpectrumVerdict {
        command: "spectrum",
        tower: TowerInfo::of(t),
        r: s.r,
        k: s.k,
        counts: s.counts.iter().map(|(&i, c)| (i, c.to_string())).collect(),
        total: s.total().to_string(),
        expected_total: s.expected_total().to_string(),
        sum_identity_holds: s.sum_identity_holds(),
    }
}

#[derive(Debug, Serialize)]
pub struct DualVerdict {
    pub command: &'static str,
    pub tower: TowerInfo,
    pub source_r: usize,
    pub source_k: usize,
    pub dual_ambient: usize,
    pub dual_dim: usize,
    pub form: String,
    pub inferred_h: Option<usize>,
    pub dual_order: Option<usize>,
    pub guarantee_applies: bool,
}

pub fn form_name(f: &FormSpec) -> String {
    match f {
        FormSpec::Standard => "standard".into(),
        FormSpec::Reversal => "reversal".into(),
        FormSpec::Custom(_) => "custom".into(),
    }
}

/// The provenance block a dual construction writes next to the subspace.
pub fn dual_provenance(tower: &FieldTower, ctx: &DualContext, form: &FormSpec) -> serde_json::Value {
    serde_json::json!({
        "construction": "delsarte-dual",
        "form": form_name(form),
        "projection_rows": matrix_rows_json(tower, &ctx.projection),
        "gamma": matrix_rows_json(tower, &ctx.gamma),
        "gamma_perp": matrix_rows_json(tower, &ctx.gamma_perp),
        "form_matrix": fq_matrix_json(&ctx.form),
        "complement_indices": ctx.complement,
        "guarantee": {
            "h": ctx.guarantee.h,
            "dual_order": ctx.guarantee.dual_order,
            "applies": ctx.guarantee.applies,
        },
    })
}

fn fq_matrix_json(m: &Matrix) -> Vec<Vec<u64>> {
    m.iter_rows()
        .map(|r| r.iter().map(|&x| x as u64).collect())
        .collect()
}

// -- identity reports -------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct IdentityCheckJson {
    pub name: &'static str,
    pub instances: u64,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct QGridJson {
    pub n_max: usize,
    pub q_values: Vec<u64>,
    pub checks: Vec<IdentityCheckJson>,
    pub all_passed: bool,
}

pub fn qgrid_json(r: &QIdentityReport) -> QGridJson {
    QGridJson {
        n_max: r.n_max,
        q_values: r.q_values.clone(),
        checks: r
            .checks
            .iter()
            .map(|c| IdentityCheckJson {
                name: c.name,
                instances: c.instances,
                failures: c.failures.clone(),
                passed: c.passed(),
            })
            .collect(),
        all_passed: r.all_passed(),
    }
}

#[derive(Debug, Serialize)]
pub struct SpectrumReportJson {
    pub r: usize,
    pub n: usize,
    pub q: u64,
    pub s: usize,
    pub k: usize,
    pub st_ok: bool,
    pub vanishing_ok: bool,
    pub beta_spectrum: Vec<String>,
    pub beta_closed: Vec<String>,
    pub beta_ok: bool,
    pub alpha_direct: Vec<String>,
    pub alpha_inverted: Vec<String>,
    pub alpha_ok: bool,
    pub carlitz_ok: bool,
    pub a_direct: String,
    pub a_inverted: String,
    pub a_zero: bool,
    pub a_s: String,
    pub b_s: String,
    pub closed_form: String,
    pub as_bs_ok: bool,
    pub all_passed: bool,
}

pub fn spectrum_report_json(r: &SpectrumReport) -> SpectrumReportJson {
    SpectrumReportJson {
        r: r.r,
        n: r.n,
        q: r.q,
        s: r.s,
        k: r.k,
        st_ok: r.st_ok,
        vanishing_ok: r.vanishing_ok,
        beta_spectrum: r.beta_spectrum.iter().map(|x| x.to_string()).collect(),
        beta_closed: r.beta_closed.iter().map(|x| x.to_string()).collect(),
        beta_ok: r.beta_ok,
        alpha_direct: r.alpha_direct.iter().map(|x| x.to_string()).collect(),
        alpha_inverted: r.alpha_inverted.iter().map(|x| x.to_string()).collect(),
        alpha_ok: r.alpha_ok,
        carlitz_ok: r.carlitz_ok,
        a_direct: r.a_direct.to_string(),
        a_inverted: r.a_inverted.to_string(),
        a_zero: r.a_zero,
        a_s: r.a_s.to_string(),
        b_s: r.b_s.to_string(),
        closed_form: r.closed_form.to_string(),
        as_bs_ok: r.as_bs_ok,
        all_passed: r.all_passed(),
    }
}
