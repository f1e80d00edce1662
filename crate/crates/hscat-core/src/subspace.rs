//! `F_q`-subspaces of `V = F_{q^n}^r`: scatteredness verification, the
//! Gabidulin / subgeometry / direct-sum constructions, the dimension bound and
//! hyperplane-intersection spectra.
//!
//! A subspace is stored by its canonical form — the rref of the flattened
//! `k × rn` basis matrix over `F_q` — together with the `F_{q^n}`-level basis
//! obtained by unflattening the rref rows. Equality of subspaces is equality
//! of canonical data.
//!
//! `h`-dimensional `F_{q^n}`-subspaces are enumerated by canonical rref pivot
//! patterns (streaming, nothing stored), combinations in lexicographic order
//! and free entries as a base-`q^n` odometer with the last free position
//! moving fastest. Violation witnesses always refer to the first violator in
//! this order. Scans accept a `(stride, offset)` pair so callers may partition
//! an enumeration across workers; partial results merge commutatively and the
//! reported witness is independent of the partitioning.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Field;
use crate::gf::{FieldError, FieldTower};
use crate::linalg::{self, Level, LinalgError, Matrix};
use crate::qcombin::gaussian_binomial_int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    BadH { h: usize, r: usize },
    BadParams(&'static str),
    EnumerationTooLarge { needed: BigUint, cap: u64 },
    TowerMismatch,
    NotSpanning,
    ZeroScalar,
    NotMaximum { k: usize, r: usize, n: usize, h: usize },
    SearchExhausted { restarts: u32 },
    Field(FieldError),
    Linalg(LinalgError),
}

impl fmt::Display for SubspaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubspaceError::BadH { h, r } => {
                write!(f, "h = {} outside [1, r-1] for ambient dimension r = {}", h, r)
            }
            SubspaceError::BadParams(msg) => write!(f, "bad parameters: {}", msg),
            SubspaceError::EnumerationTooLarge { needed, cap } => {
                write!(f, "enumeration of {} objects exceeds cap {}", needed, cap)
            }
            SubspaceError::TowerMismatch => write!(f, "subspaces live over different towers"),
            SubspaceError::NotSpanning => write!(f, "subspace does not span its ambient space"),
            SubspaceError::ZeroScalar => write!(f, "scalar must be nonzero"),
            SubspaceError::NotMaximum { k, r, n, h } => write!(
                f,
                "dimension {} is not rn/(h+1) = {}·{}/{} exactly",
                k,
                r,
                n,
                h + 1
            ),
            SubspaceError::SearchExhausted { restarts } => {
                write!(f, "randomized search exhausted after {} restarts", restarts)
            }
            SubspaceError::Field(e) => write!(f, "{}", e),
            SubspaceError::Linalg(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for SubspaceError {}

impl From<FieldError> for SubspaceError {
    fn from(e: FieldError) -> Self {
        SubspaceError::Field(e)
    }
}

impl From<LinalgError> for SubspaceError {
    fn from(e: LinalgError) -> Self {
        SubspaceError::Linalg(e)
    }
}

/// An `F_q`-subspace of `F_{q^n}^r` in canonical form.
#[derive(Debug, Clone)]
pub struct FqSubspace {
    tower: Arc<FieldTower>,
    r: usize,
    /// rref over `F_q` of the flattened basis, `k × rn`.
    canonical: Matrix,
    /// Unflattened canonical rows, `k × r` over `F_{q^n}`.
    basis: Matrix,
}

impl PartialEq for FqSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.tower.same_tower(&other.tower) && self.r == other.r && self.canonical == other.canonical
    }
}

impl Eq for FqSubspace {}

impl FqSubspace {
    /// Builds the subspace spanned (over `F_q`) by the given `F_{q^n}`-level
    /// vectors of length `r`. Dependent generators are allowed; the canonical
    /// basis is extracted by rref.
    pub fn from_fqn_vectors(
        tower: Arc<FieldTower>,
        r: usize,
        vectors: &[Vec<u32>],
    ) -> Result<Self, SubspaceError> {
        if r == 0 {
            return Err(SubspaceError::BadParams("ambient dimension must be positive"));
        }
        for v in vectors {
            if v.len() != r {
                return Err(SubspaceError::BadParams("vector length differs from ambient"));
            }
            if v.iter().any(|&x| (x as u64) >= tower.qn()) {
                return Err(SubspaceError::Field(FieldError::BadElement));
            }
        }
        let flat: Vec<Vec<u32>> = vectors.iter().map(|v| linalg::flatten(&tower, v)).collect();
        let m = if flat.is_empty() {
            Matrix::zeros(Level::Fq, 0, r * tower.n())
        } else {
            Matrix::from_rows(Level::Fq, &flat)
        };
        Self::from_flat_matrix(tower, r, &m)
    }

    /// Builds the subspace from rows already flattened to `F_q^{rn}`.
    pub fn from_flat_matrix(
        tower: Arc<FieldTower>,
        r: usize,
        m: &Matrix,
    ) -> Result<Self, SubspaceError> {
        if m.cols() != r * tower.n() {
            return Err(SubspaceError::BadParams("flattened width must be r·n"));
        }
        let canonical = linalg::rref(tower.fq(), m);
        let basis = linalg::unflatten_matrix(&tower, &canonical);
        Ok(FqSubspace { tower, r, canonical, basis })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Ambient `F_{q^n}`-dimension `r`.
    pub fn ambient_r(&self) -> usize {
        self.r
    }

    /// `k = dim_{F_q} U`.
    pub fn dim(&self) -> usize {
        self.canonical.rows()
    }

    /// Canonical rref of the flattened basis over `F_q`.
    pub fn canonical(&self) -> &Matrix {
        &self.canonical
    }

    /// Canonical `F_q`-basis as rows over `F_{q^n}`.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `dim_{F_{q^n}} ⟨U⟩_{F_{q^n}}`: the rank of the basis over the top field.
    pub fn fqn_span_dim(&self) -> usize {
        linalg::rank(self.tower.fqn(), &self.basis)
    }

    /// Whether the `F_{q^n}`-vector `v` lies in `U`.
    pub fn contains_vector(&self, v: &[u32]) -> bool {
        let flat = linalg::flatten(&self.tower, v);
        let m = Matrix::from_rows(Level::Fq, &[flat]);
        linalg::span_contains(self.tower.fq(), &self.canonical, &m).unwrap_or(false)
    }

    /// All `q^k` vectors of `U` (zero included) in deterministic order.
    pub fn iter_vectors(&self) -> SubspaceVectorIter<'_> {
        SubspaceVectorIter {
            sub: self,
            coeffs: vec![0u32; self.dim()],
            done: false,
        }
    }

    /// `λ·U` for a nonzero scalar `λ ∈ F_{q^n}`.
    pub fn scalar_multiple(&self, lambda: u32) -> Result<FqSubspace, SubspaceError> {
        if lambda == 0 {
            return Err(SubspaceError::ZeroScalar);
        }
        let f = self.tower.fqn();
        let rows: Vec<Vec<u32>> = self
            .basis
            .iter_rows()
            .map(|row| row.iter().map(|&x| f.mul(lambda, x)).collect())
            .collect();
        FqSubspace::from_fqn_vectors(self.tower.clone(), self.r, &rows)
    }

    /// Image of `U` under an invertible `F_{q^n}`-matrix acting on row vectors.
    pub fn apply_matrix(&self, a: &Matrix) -> Result<FqSubspace, SubspaceError> {
        let f = self.tower.fqn();
        let rows: Vec<Vec<u32>> = self
            .basis
            .iter_rows()
            .map(|row| linalg::vec_mat(f, row, a))
            .collect();
        FqSubspace::from_fqn_vectors(self.tower.clone(), a.cols(), &rows)
    }

    /// Verifies that `U` is `h`-scattered. A failed verdict carries the first
    /// violating `h`-subspace in enumeration order when one exists, and the
    /// non-spanning reason otherwise (the definition requires `⟨U⟩ = V`).
    pub fn is_h_scattered(&self, h: usize, cap: u64) -> Result<ScatterVerdict, SubspaceError> {
        let total = self.scatter_enumeration_count(h)?;
        if total > BigUint::from(cap) {
            return Err(SubspaceError::EnumerationTooLarge { needed: total, cap });
        }
        let part = self.scatter_scan_part(h, 1, 0)?;
        Ok(conclude_scatter(self, part))
    }

    /// Number of `h`-dimensional `F_{q^n}`-subspaces the scattered check must
    /// visit: the Gaussian binomial `[r choose h]_{q^n}`.
    pub fn scatter_enumeration_count(&self, h: usize) -> Result<BigUint, SubspaceError> {
        if h < 1 || h >= self.r {
            return Err(SubspaceError::BadH { h, r: self.r });
        }
        Ok(gaussian_binomial_int(self.r, h, self.tower.qn()))
    }

    /// Scans the slice `offset, offset+stride, …` of the `h`-subspace
    /// enumeration and reports the first violation inside the slice. The
    /// spanning condition is *not* checked here; drivers check it once.
    pub fn scatter_scan_part(
        &self,
        h: usize,
        stride: u64,
        offset: u64,
    ) -> Result<ScatterScanPart, SubspaceError> {
        if h < 1 || h >= self.r {
            return Err(SubspaceError::BadH { h, r: self.r });
        }
        if stride == 0 {
            return Err(SubspaceError::BadParams("stride must be positive"));
        }
        let k = self.dim();
        let n = self.tower.n();
        let fq = self.tower.fq();
        let fqn = self.tower.fqn();
        let mut en = SubspaceEnum::new(self.tower.qn(), self.r, h);
        let mut scanned = 0u64;
        let mut first_violation = None;
        let mut w = Matrix::zeros(Level::Fqn, h, self.r);
        while let Some(index) = en.next_into(&mut w) {
            if (index % stride) != offset {
                continue;
            }
            scanned += 1;
            let nonpivot: &[usize] = en.nonpivot_cols();
            // residual of each basis row modulo W, flattened to F_q digits
            let mut rows: Vec<Vec<u32>> = Vec::with_capacity(k);
            for u in self.basis.iter_rows() {
                let mut flatrow = Vec::with_capacity(nonpivot.len() * n);
                for &c in nonpivot {
                    let mut val = u[c];
                    for (i, &p) in en.pivots().iter().enumerate() {
                        let coef = u[p];
                        if coef != 0 {
                            val = fqn.sub(val, fqn.mul(coef, w.get(i, c)));
                        }
                    }
                    flatrow.extend(fqn.decode(val));
                }
                rows.push(flatrow);
            }
            let m = Matrix::from_rows(Level::Fq, &rows);
            let inter_dim = k - linalg::rank(fq, &m);
            if inter_dim > h {
                first_violation = Some(ScatterWitness {
                    index,
                    subspace: w.clone(),
                    intersection_dim: inter_dim,
                });
                break;
            }
        }
        Ok(ScatterScanPart { first_violation, scanned })
    }

    /// Exact hyperplane-intersection spectrum: the number `h_i` of hyperplanes
    /// meeting `U` in `F_q`-dimension `i`, for every `i`. Hyperplanes are
    /// enumerated as projective covectors with the first nonzero coordinate
    /// normalized to 1.
    pub fn hyperplane_spectrum(&self, cap: u64) -> Result<HyperplaneSpectrum, SubspaceError> {
        let total = self.hyperplane_count()?;
        if total > BigUint::from(cap) {
            return Err(SubspaceError::EnumerationTooLarge { needed: total, cap });
        }
        let counts = self.hyperplane_scan_part(1, 0)?;
        let mut spectrum = HyperplaneSpectrum {
            r: self.r,
            n: self.tower.n(),
            q: self.tower.q(),
            k: self.dim(),
            counts: BTreeMap::new(),
        };
        for (i, c) in counts {
            spectrum.counts.insert(i, BigUint::from(c));
        }
        Ok(spectrum)
    }

    /// `(q^{rn} - 1)/(q^n - 1)`, the number of hyperplanes.
    pub fn hyperplane_count(&self) -> Result<BigUint, SubspaceError> {
        if self.r < 2 {
            return Err(SubspaceError::BadParams("hyperplane spectrum needs r >= 2"));
        }
        Ok(gaussian_binomial_int(self.r, 1, self.tower.qn()))
    }

    /// Partial spectrum over the covector slice `offset, offset+stride, …`.
    pub fn hyperplane_scan_part(
        &self,
        stride: u64,
        offset: u64,
    ) -> Result<BTreeMap<usize, u64>, SubspaceError> {
        if self.r < 2 {
            return Err(SubspaceError::BadParams("hyperplane spectrum needs r >= 2"));
        }
        if stride == 0 {
            return Err(SubspaceError::BadParams("stride must be positive"));
        }
        let k = self.dim();
        let fq = self.tower.fq();
        let fqn = self.tower.fqn();
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        let mut en = CovectorEnum::new(self.tower.qn(), self.r);
        let mut a = vec![0u32; self.r];
        while let Some(index) = en.next_into(&mut a) {
            if (index % stride) != offset {
                continue;
            }
            // dim(U ∩ ker a) = k − rank of u ↦ Σ a_j u_j over F_q
            let mut rows: Vec<Vec<u32>> = Vec::with_capacity(k);
            for u in self.basis.iter_rows() {
                let mut val = 0u32;
                for (x, &aj) in u.iter().zip(a.iter()) {
                    if aj != 0 && *x != 0 {
                        val = fqn.add(val, fqn.mul(*x, aj));
                    }
                }
                rows.push(fqn.decode(val));
            }
            let m = Matrix::from_rows(Level::Fq, &rows);
            let i = k - linalg::rank(fq, &m);
            *counts.entry(i).or_insert(0) += 1;
        }
        Ok(counts)
    }
}

/// Iterator over all vectors of a subspace (zero first), deterministic order.
pub struct SubspaceVectorIter<'a> {
    sub: &'a FqSubspace,
    coeffs: Vec<u32>,
    done: bool,
}

impl Iterator for SubspaceVectorIter<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let fqn = self.sub.tower.fqn();
        let mut v = vec![0u32; self.sub.r];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let lam = self.sub.tower.embed_fq(c);
                for (slot, &b) in v.iter_mut().zip(self.sub.basis.row(i)) {
                    *slot = fqn.add(*slot, fqn.mul(lam, b));
                }
            }
        }
        // advance the base-q odometer, last coefficient fastest
        let q = self.sub.tower.q();
        let mut i = self.coeffs.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            let next = self.coeffs[i] as u64 + 1;
            if next < q {
                self.coeffs[i] = next as u32;
                break;
            }
            self.coeffs[i] = 0;
        }
        Some(v)
    }
}

/// Outcome of a scattered check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScatterVerdict {
    Scattered { enumerated: u64 },
    NotSpanning { span_dim: usize },
    Violation(ScatterWitness),
}

impl ScatterVerdict {
    pub fn is_scattered(&self) -> bool {
        matches!(self, ScatterVerdict::Scattered { .. })
    }
}

/// The first violating subspace in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScatterWitness {
    /// Position in the global enumeration.
    pub index: u64,
    /// rref rows of the violating `h`-dimensional `F_{q^n}`-subspace.
    pub subspace: Matrix,
    pub intersection_dim: usize,
}

/// Partial result of a strided scattered scan.
#[derive(Debug, Clone)]
pub struct ScatterScanPart {
    pub first_violation: Option<ScatterWitness>,
    pub scanned: u64,
}

/// Merges per-worker scan parts; the reported witness is the one with the
/// smallest enumeration index, independent of the partitioning.
pub fn merge_scatter_parts(parts: Vec<ScatterScanPart>) -> ScatterScanPart {
    let mut scanned = 0;
    let mut best: Option<ScatterWitness> = None;
    for p in parts {
        scanned += p.scanned;
        if let Some(w) = p.first_violation {
            best = match best.take() {
                Some(b) if b.index <= w.index => Some(b),
                _ => Some(w),
            };
        }
    }
    ScatterScanPart { first_violation: best, scanned }
}

/// Turns a merged scan outcome into a verdict: a violation witness wins, the
/// spanning condition decides otherwise.
pub fn conclude_scatter(sub: &FqSubspace, part: ScatterScanPart) -> ScatterVerdict {
    if let Some(w) = part.first_violation {
        return ScatterVerdict::Violation(w);
    }
    let span = sub.fqn_span_dim();
    if span < sub.ambient_r() {
        ScatterVerdict::NotSpanning { span_dim: span }
    } else {
        ScatterVerdict::Scattered { enumerated: part.scanned }
    }
}

/// Merges per-worker spectrum parts by commutative addition.
pub fn merge_spectrum_parts(
    sub: &FqSubspace,
    parts: Vec<BTreeMap<usize, u64>>,
) -> HyperplaneSpectrum {
    let mut counts: BTreeMap<usize, BigUint> = BTreeMap::new();
    for p in parts {
        for (i, c) in p {
            let entry = counts.entry(i).or_insert_with(BigUint::zero);
            *entry += BigUint::from(c);
        }
    }
    HyperplaneSpectrum {
        r: sub.ambient_r(),
        n: sub.tower().n(),
        q: sub.tower().q(),
        k: sub.dim(),
        counts,
    }
}

/// The counts `h_i` of hyperplanes meeting a subspace in `F_q`-dimension `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneSpectrum {
    pub r: usize,
    pub n: usize,
    /// Order of the small field `F_q`.
    pub q: u64,
    /// `dim_{F_q}` of the subspace the spectrum belongs to.
    pub k: usize,
    pub counts: BTreeMap<usize, BigUint>,
}

impl HyperplaneSpectrum {
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `(q^{rn} - 1)/(q^n - 1)`.
    pub fn expected_total(&self) -> BigUint {
        let qn = BigUint::from(self.q).pow((self.n) as u32);
        gaussian_binomial_big(self.r, 1, &qn)
    }

    /// Largest `i` with `h_i > 0`.
    pub fn support_max(&self) -> Option<usize> {
        self.counts
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&i, _)| i)
            .max()
    }

    pub fn support_min(&self) -> Option<usize> {
        self.counts
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&i, _)| i)
            .min()
    }

    /// `Σ_i h_i (q^n - 1) = q^{rn} - 1`, exactly.
    pub fn sum_identity_holds(&self) -> bool {
        let qn = BigUint::from(self.q).pow(self.n as u32);
        let lhs: BigUint = self.total() * (&qn - 1u32);
        let rhs = BigUint::from(self.q).pow((self.r * self.n) as u32) - 1u32;
        lhs == rhs
    }
}

fn gaussian_binomial_big(n: usize, k: usize, q: &BigUint) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 1..=k {
        let num = q.pow((n - k + i) as u32) - 1u32;
        let den = q.pow(i as u32) - 1u32;
        acc = acc * num / den;
    }
    acc
}

// ---------------------------------------------------------------------------
// Enumeration machinery.
// ---------------------------------------------------------------------------

/// Streams all `dim`-dimensional subspaces of `F^cols` (`|F| = order`) as rref
/// matrices, by pivot pattern and a free-entry odometer.
pub struct SubspaceEnum {
    order: u64,
    cols: usize,
    dim: usize,
    pivots: Vec<usize>,
    nonpivot: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u32>,
    index: u64,
    state: EnumState,
}

enum EnumState {
    Fresh,
    Running,
    Done,
}

impl SubspaceEnum {
    pub fn new(order: u64, cols: usize, dim: usize) -> Self {
        assert!(dim >= 1 && dim <= cols);
        let pivots: Vec<usize> = (0..dim).collect();
        let mut en = SubspaceEnum {
            order,
            cols,
            dim,
            pivots,
            nonpivot: Vec::new(),
            free: Vec::new(),
            digits: Vec::new(),
            index: 0,
            state: EnumState::Fresh,
        };
        en.reset_pattern();
        en
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn nonpivot_cols(&self) -> &[usize] {
        &self.nonpivot
    }

    fn reset_pattern(&mut self) {
        self.nonpivot = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        self.free = Vec::new();
        for (i, &p) in self.pivots.iter().enumerate() {
            for &c in &self.nonpivot {
                if c > p {
                    self.free.push((i, c));
                }
            }
        }
        // canonical row-major position order
        self.free.sort_unstable();
        self.digits = vec![0u32; self.free.len()];
    }

    /// Next combination `r choose dim` in lexicographic order; false when done.
    fn next_pattern(&mut self) -> bool {
        let k = self.dim;
        let n = self.cols;
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if self.pivots[i] != i + n - k {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                self.reset_pattern();
                return true;
            }
        }
    }

    /// Advances the free-entry odometer (last position fastest); false when
    /// the pattern is exhausted.
    fn next_digits(&mut self) -> bool {
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            let next = self.digits[i] as u64 + 1;
            if next < self.order {
                self.digits[i] = next as u32;
                return true;
            }
            self.digits[i] = 0;
        }
    }

    /// Writes the current rref matrix into `m` (must be `dim × cols`) and
    /// returns its global index, then advances. `None` when exhausted.
    pub fn next_into(&mut self, m: &mut Matrix) -> Option<u64> {
        match self.state {
            EnumState::Done => return None,
            EnumState::Fresh => self.state = EnumState::Running,
            EnumState::Running => {
                if !self.next_digits() && !self.next_pattern() {
                    self.state = EnumState::Done;
                    return None;
                }
            }
        }
        debug_assert_eq!(m.rows(), self.dim);
        debug_assert_eq!(m.cols(), self.cols);
        for i in 0..self.dim {
            for j in 0..self.cols {
                m.set(i, j, 0);
            }
        }
        for (i, &p) in self.pivots.iter().enumerate() {
            m.set(i, p, 1);
        }
        for (&(i, c), &d) in self.free.iter().zip(self.digits.iter()) {
            m.set(i, c, d);
        }
        let idx = self.index;
        self.index += 1;
        Some(idx)
    }
}

/// Streams the projective covectors `[a_0 : … : a_{r-1}]` with the first
/// nonzero coordinate normalized to 1 (hyperplanes of `F^r`).
pub struct CovectorEnum {
    order: u64,
    r: usize,
    lead: usize,
    digits: Vec<u32>,
    index: u64,
    state: EnumState,
}

impl CovectorEnum {
    pub fn new(order: u64, r: usize) -> Self {
        CovectorEnum {
            order,
            r,
            lead: 0,
            digits: vec![0u32; r.saturating_sub(1)],
            index: 0,
            state: EnumState::Fresh,
        }
    }

    fn advance(&mut self) -> bool {
        // odometer over the r-1-lead free coordinates, last fastest
        let free = self.r - 1 - self.lead;
        let mut i = free;
        loop {
            if i == 0 {
                self.lead += 1;
                if self.lead >= self.r {
                    return false;
                }
                for d in self.digits.iter_mut() {
                    *d = 0;
                }
                return true;
            }
            i -= 1;
            let next = self.digits[i] as u64 + 1;
            if next < self.order {
                self.digits[i] = next as u32;
                return true;
            }
            self.digits[i] = 0;
        }
    }

    /// Writes the current covector into `a` (length `r`), returns its index.
    pub fn next_into(&mut self, a: &mut [u32]) -> Option<u64> {
        match self.state {
            EnumState::Done => return None,
            EnumState::Fresh => self.state = EnumState::Running,
            EnumState::Running => {
                if !self.advance() {
                    self.state = EnumState::Done;
                    return None;
                }
            }
        }
        for slot in a.iter_mut() {
            *slot = 0;
        }
        a[self.lead] = 1;
        let free = self.r - 1 - self.lead;
        for j in 0..free {
            a[self.lead + 1 + j] = self.digits[j];
        }
        let idx = self.index;
        self.index += 1;
        Some(idx)
    }
}

// ---------------------------------------------------------------------------
// Constructions and bounds.
// ---------------------------------------------------------------------------

/// Both branches of the dimension bound: `dim U ≤ rn/(h+1)` unless `U` defines
/// a subgeometry (`dim U = r`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionBound {
    /// `rn/(h+1)` as an exact rational.
    pub bound: BigRational,
    /// Dimension of the subgeometry exception branch.
    pub subgeometry_dim: usize,
}

impl DimensionBound {
    /// Whether a verified `h`-scattered subspace of dimension `k` is consistent
    /// with the bound (either branch).
    pub fn admits(&self, k: usize) -> bool {
        k == self.subgeometry_dim || BigRational::from_integer(k.into()) <= self.bound
    }
}

pub fn dimension_bound(r: usize, n: usize, h: usize) -> Result<DimensionBound, SubspaceError> {
    if h < 1 || h >= r {
        return Err(SubspaceError::BadH { h, r });
    }
    let bound = BigRational::new((r * n).into(), (h + 1).into());
    Ok(DimensionBound { bound, subgeometry_dim: r })
}

/// The subspace `{(x, x^q, …, x^{q^{r-1}}) : x ∈ F_{q^n}}`, or — with
/// `sub_dim` — the span of the images of the first `sub_dim` power-basis
/// elements. Both are `(r-1)`-scattered; the full version has dimension `n`.
pub fn gabidulin_subspace(
    tower: Arc<FieldTower>,
    r: usize,
    sub_dim: Option<usize>,
) -> Result<FqSubspace, SubspaceError> {
    let n = tower.n();
    if r < 1 || n < r {
        return Err(SubspaceError::BadParams("gabidulin needs n >= r >= 1"));
    }
    let d = sub_dim.unwrap_or(n);
    if d < r || d > n {
        return Err(SubspaceError::BadParams("sub_dim must satisfy r <= sub_dim <= n"));
    }
    let rows: Vec<Vec<u32>> = (0..d)
        .map(|j| {
            let b = tower.s_pow(j);
            (0..r).map(|t| tower.frobenius(b, t)).collect()
        })
        .collect();
    let u = FqSubspace::from_fqn_vectors(tower, r, &rows)?;
    debug_assert_eq!(u.dim(), d);
    Ok(u)
}

/// The canonical subgeometry `F_q^r ⊂ F_{q^n}^r` (span of the standard basis).
pub fn subgeometry_subspace(tower: Arc<FieldTower>, r: usize) -> Result<FqSubspace, SubspaceError> {
    if r < 1 {
        return Err(SubspaceError::BadParams("ambient dimension must be positive"));
    }
    let rows: Vec<Vec<u32>> = (0..r)
        .map(|i| {
            let mut v = vec![0u32; r];
            v[i] = 1;
            v
        })
        .collect();
    FqSubspace::from_fqn_vectors(tower, r, &rows)
}

/// Block-diagonal direct sum; the ambient dimension is the sum of the parts'.
/// Every part must span its own ambient space.
pub fn direct_sum(parts: &[FqSubspace]) -> Result<FqSubspace, SubspaceError> {
    let first = parts.first().ok_or(SubspaceError::BadParams("empty direct sum"))?;
    let tower = first.tower().clone();
    let total_r: usize = parts.iter().map(|p| p.ambient_r()).sum();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut off = 0usize;
    for p in parts {
        if !p.tower().same_tower(&tower) {
            return Err(SubspaceError::TowerMismatch);
        }
        if p.fqn_span_dim() < p.ambient_r() {
            return Err(SubspaceError::NotSpanning);
        }
        for row in p.basis().iter_rows() {
            let mut v = vec![0u32; total_r];
            v[off..off + p.ambient_r()].copy_from_slice(row);
            rows.push(v);
        }
        off += p.ambient_r();
    }
    FqSubspace::from_fqn_vectors(tower, total_r, &rows)
}

/// Checks that the spectrum of a maximum `h`-scattered subspace is confined to
/// the window `[rn/(h+1) - n, rn/(h+1) - n + h]`.
pub fn check_intersection_window(
    spec: &HyperplaneSpectrum,
    h: usize,
) -> Result<bool, SubspaceError> {
    let s = h + 1;
    if !(spec.r * spec.n).is_multiple_of(s) || spec.k != (spec.r * spec.n) / s {
        return Err(SubspaceError::NotMaximum { k: spec.k, r: spec.r, n: spec.n, h });
    }
    let lo = spec.k as i64 - spec.n as i64;
    let hi = lo + h as i64;
    Ok(spec
        .counts
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .all(|(&i, _)| (i as i64) >= lo && (i as i64) <= hi))
}

/// The window endpoints `[rn/(h+1) - n, rn/(h+1) - n + h]` (may start below 0;
/// counts of negative dimension are vacuous).
pub fn intersection_window(r: usize, n: usize, h: usize) -> (i64, i64) {
    let lo = (r * n) as i64 / (h + 1) as i64 - n as i64;
    (lo, lo + h as i64)
}

/// Options for the randomized greedy search.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub cap: u64,
    pub restarts: u32,
    pub attempts_per_step: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { cap: crate::DEFAULT_ENUM_CAP, restarts: 32, attempts_per_step: 256 }
    }
}

/// Randomized greedy growth: add random vectors, reject a vector as soon as
/// some `h`-subspace intersection exceeds `h`. Deterministic given the seed.
pub fn search_scattered(
    tower: Arc<FieldTower>,
    r: usize,
    h: usize,
    target_dim: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<FqSubspace, SubspaceError> {
    if h < 1 || h >= r {
        return Err(SubspaceError::BadH { h, r });
    }
    let n = tower.n();
    if target_dim * (h + 1) > r * n {
        return Err(SubspaceError::BadParams("target_dim exceeds rn/(h+1)"));
    }
    // the per-step scan enumerates all h-subspaces; enforce the cap once
    let total = gaussian_binomial_int(r, h, tower.qn());
    if total > BigUint::from(opts.cap) {
        return Err(SubspaceError::EnumerationTooLarge { needed: total, cap: opts.cap });
    }
    let qn = tower.qn();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..opts.restarts {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut current = FqSubspace::from_fqn_vectors(tower.clone(), r, &rows)?;
        let mut stuck = false;
        while current.dim() < target_dim && !stuck {
            stuck = true;
            for _ in 0..opts.attempts_per_step {
                let v: Vec<u32> = (0..r).map(|_| (rng.next_u64() % qn) as u32).collect();
                if v.iter().all(|&x| x == 0) || current.contains_vector(&v) {
                    continue;
                }
                let mut cand_rows = rows.clone();
                cand_rows.push(v);
                let cand = FqSubspace::from_fqn_vectors(tower.clone(), r, &cand_rows)?;
                let part = cand.scatter_scan_part(h, 1, 0)?;
                if part.first_violation.is_none() {
                    rows = cand_rows;
                    current = cand;
                    stuck = false;
                    break;
                }
            }
        }
        if current.dim() == target_dim && current.fqn_span_dim() == r {
            let verdict = current.is_h_scattered(h, opts.cap)?;
            if verdict.is_scattered() {
                return Ok(current);
            }
        }
    }
    Err(SubspaceError::SearchExhausted { restarts: opts.restarts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u64, e: usize, n: usize) -> Arc<FieldTower> {
        Arc::new(FieldTower::new(p, e, n).unwrap())
    }

    const CAP: u64 = 1 << 22;

    #[test]
    fn subspace_enum_counts_match_gaussian_binomial() {
        for (order, cols, dim) in [(2u64, 4usize, 2usize), (3, 3, 1), (4, 3, 2), (8, 2, 1)] {
            let mut en = SubspaceEnum::new(order, cols, dim);
            let mut m = Matrix::zeros(Level::Fqn, dim, cols);
            let mut count = 0u64;
            let mut seen = alloc::collections::BTreeSet::new();
            while en.next_into(&mut m).is_some() {
                count += 1;
                seen.insert(m.clone());
            }
            let expected = gaussian_binomial_int(cols, dim, order);
            assert_eq!(BigUint::from(count), expected);
            assert_eq!(seen.len() as u64, count, "all emitted subspaces distinct");
        }
    }

    #[test]
    fn covector_enum_counts() {
        let mut en = CovectorEnum::new(8, 2);
        let mut a = [0u32; 2];
        let mut count = 0;
        while en.next_into(&mut a).is_some() {
            count += 1;
        }
        assert_eq!(count, 9); // (8^2-1)/(8-1)
    }

    #[test]
    fn standard_basis_spans_and_subgeometry_dims() {
        let t = tower(2, 1, 3);
        let u = subgeometry_subspace(t.clone(), 3).unwrap();
        assert_eq!(u.dim(), 3);
        assert_eq!(u.fqn_span_dim(), 3);
    }

    #[test]
    fn fqn_span_dim_examples() {
        let t = tower(2, 1, 3);
        // inside hyperplane x_2 = 0
        let u = FqSubspace::from_fqn_vectors(t.clone(), 2, &[vec![1, 0], vec![2, 0]]).unwrap();
        assert_eq!(u.fqn_span_dim(), 1);
        let g = gabidulin_subspace(t, 2, None).unwrap();
        assert_eq!(g.fqn_span_dim(), 2);
    }

    #[test]
    fn gabidulin_f8_r2_is_1_scattered_dim_3() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t, 2, None).unwrap();
        assert_eq!(g.dim(), 3);
        assert!(g.is_h_scattered(1, CAP).unwrap().is_scattered());
    }

    #[test]
    fn flattened_line_is_not_scattered_with_line_witness() {
        let t = tower(2, 1, 3);
        // U = flattening of the F_{q^n}-line spanned by (1, s): dim n = 3
        let s = t.s();
        let rows: Vec<Vec<u32>> = (0..3)
            .map(|j| {
                let lam = t.s_pow(j);
                vec![lam, t.fqn().mul(lam, s)]
            })
            .collect();
        let u = FqSubspace::from_fqn_vectors(t.clone(), 2, &rows).unwrap();
        assert_eq!(u.dim(), 3);
        match u.is_h_scattered(1, CAP).unwrap() {
            ScatterVerdict::Violation(w) => {
                assert_eq!(w.intersection_dim, 3);
                // the witness is exactly that line
                let wsub =
                    FqSubspace::from_fqn_vectors(t.clone(), 2, &[w.subspace.row(0).to_vec()])
                        .unwrap();
                let back = FqSubspace::from_fqn_vectors(t, 2, &rows).unwrap();
                // line == span of witness over F_{q^n}: U ⊆ flatten(witness line)
                assert_eq!(wsub.fqn_span_dim(), 1);
                assert_eq!(back.dim(), 3);
            }
            v => panic!("expected violation, got {:?}", v),
        }
    }

    #[test]
    fn canonical_subgeometry_is_2_scattered_in_f8_3() {
        let t = tower(2, 1, 3);
        let u = subgeometry_subspace(t, 3).unwrap();
        assert!(u.is_h_scattered(2, CAP).unwrap().is_scattered());
    }

    #[test]
    fn non_spanning_is_reported_with_reason() {
        let t = tower(2, 1, 3);
        let u = FqSubspace::from_fqn_vectors(t, 2, &[vec![1, 0]]).unwrap();
        assert_eq!(
            u.is_h_scattered(1, CAP).unwrap(),
            ScatterVerdict::NotSpanning { span_dim: 1 }
        );
    }

    #[test]
    fn bad_h_rejected() {
        let t = tower(2, 1, 3);
        let u = subgeometry_subspace(t, 2).unwrap();
        assert!(matches!(u.is_h_scattered(0, CAP), Err(SubspaceError::BadH { .. })));
        assert!(matches!(u.is_h_scattered(2, CAP), Err(SubspaceError::BadH { .. })));
    }

    #[test]
    fn dimension_bound_examples() {
        let b = dimension_bound(2, 3, 1).unwrap();
        assert_eq!(b.bound, BigRational::from_integer(3.into()));
        assert_eq!(b.subgeometry_dim, 2);
        let b = dimension_bound(3, 5, 2).unwrap();
        assert_eq!(b.bound, BigRational::from_integer(5.into()));
        let b = dimension_bound(4, 3, 3).unwrap();
        assert_eq!(b.bound, BigRational::from_integer(3.into()));
        assert!(b.admits(4)); // subgeometry branch
        assert!(!b.admits(5));
        assert!(dimension_bound(2, 3, 2).is_err());
    }

    #[test]
    fn gabidulin_sub_dim_variant() {
        let t = tower(2, 1, 5);
        let u = gabidulin_subspace(t, 3, Some(4)).unwrap();
        assert_eq!(u.dim(), 4);
        assert!(u.is_h_scattered(2, CAP).unwrap().is_scattered());
        // downward scatteredness
        assert!(u.is_h_scattered(1, CAP).unwrap().is_scattered());
    }

    #[test]
    fn gabidulin_bad_params() {
        let t = tower(2, 1, 3);
        assert!(gabidulin_subspace(t.clone(), 4, None).is_err()); // n < r
        assert!(gabidulin_subspace(t.clone(), 2, Some(1)).is_err()); // sub_dim < r
        assert!(gabidulin_subspace(t, 2, Some(4)).is_err()); // sub_dim > n
    }

    #[test]
    fn direct_sum_single_part_unchanged() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t, 2, None).unwrap();
        let s = direct_sum(core::slice::from_ref(&g)).unwrap();
        assert_eq!(s, g);
    }

    #[test]
    fn direct_sum_two_gabidulin_parts_is_maximum_scattered() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t, 2, None).unwrap();
        let s = direct_sum(&[g.clone(), g]).unwrap();
        assert_eq!(s.ambient_r(), 4);
        assert_eq!(s.dim(), 6); // rn/2 = 4·3/2
        assert!(s.is_h_scattered(1, CAP).unwrap().is_scattered());
    }

    #[test]
    fn direct_sum_tower_mismatch() {
        let a = gabidulin_subspace(tower(2, 1, 3), 2, None).unwrap();
        let b = gabidulin_subspace(tower(3, 1, 3), 2, None).unwrap();
        assert_eq!(direct_sum(&[a, b]).unwrap_err(), SubspaceError::TowerMismatch);
    }

    #[test]
    fn gabidulin_spectrum_f8() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t, 2, None).unwrap();
        let spec = g.hyperplane_spectrum(CAP).unwrap();
        assert_eq!(spec.total(), BigUint::from(9u32));
        assert_eq!(spec.counts.get(&1), Some(&BigUint::from(7u32)));
        assert_eq!(spec.counts.get(&0), Some(&BigUint::from(2u32)));
        assert!(spec.sum_identity_holds());
        assert!(check_intersection_window(&spec, 1).unwrap());
    }

    #[test]
    fn subgeometry_spectrum_f8_cubed() {
        let t = tower(2, 1, 3);
        let u = subgeometry_subspace(t, 3).unwrap();
        let spec = u.hyperplane_spectrum(CAP).unwrap();
        assert_eq!(spec.total(), BigUint::from(73u32));
        assert!(spec.support_max().unwrap() <= 2);
        assert!(spec.sum_identity_holds());
    }

    #[test]
    fn window_check_rejects_synthetic_violation() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t, 2, None).unwrap();
        let mut spec = g.hyperplane_spectrum(CAP).unwrap();
        // window for (r=2,n=3,h=1) is [0,1]; plant mass at 2
        spec.counts.insert(2, BigUint::one());
        assert!(!check_intersection_window(&spec, 1).unwrap());
        // and a non-maximum k errors
        let mut bad = spec.clone();
        bad.k = 2;
        assert!(matches!(
            check_intersection_window(&bad, 1),
            Err(SubspaceError::NotMaximum { .. })
        ));
    }

    #[test]
    fn scalar_multiple_preserves_canonical_form_for_subfield_scalars() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t.clone(), 2, None).unwrap();
        assert_eq!(g.scalar_multiple(1).unwrap(), g);
        assert!(g.scalar_multiple(0).is_err());
    }

    #[test]
    fn scalar_multiple_preserves_spectrum() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t.clone(), 2, None).unwrap();
        let spec = g.hyperplane_spectrum(CAP).unwrap();
        let lam = t.s(); // a generator of F_8^*
        let gl = g.scalar_multiple(lam).unwrap();
        assert_eq!(gl.dim(), g.dim());
        let spec2 = gl.hyperplane_spectrum(CAP).unwrap();
        assert_eq!(spec.counts, spec2.counts);
        assert!(gl.is_h_scattered(1, CAP).unwrap().is_scattered());
    }

    #[test]
    fn spectrum_invariant_under_coordinate_permutation() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t.clone(), 2, None).unwrap();
        let spec = g.hyperplane_spectrum(CAP).unwrap();
        // swap the two ambient coordinates
        let perm = Matrix::from_rows(Level::Fqn, &[vec![0, 1], vec![1, 0]]);
        let gp = g.apply_matrix(&perm).unwrap();
        assert_eq!(gp.hyperplane_spectrum(CAP).unwrap().counts, spec.counts);
    }

    #[test]
    fn strided_scan_partition_is_equivalent() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t.clone(), 2, None).unwrap();
        let parts: Vec<_> = (0..4)
            .map(|w| g.hyperplane_scan_part(4, w).unwrap())
            .collect();
        let merged = merge_spectrum_parts(&g, parts);
        assert_eq!(merged.counts, g.hyperplane_spectrum(CAP).unwrap().counts);

        // and for violations: the merged witness equals the serial one
        let line_rows: Vec<Vec<u32>> = (0..3)
            .map(|j| {
                let lam = t.s_pow(j);
                vec![lam, t.fqn().mul(lam, t.s())]
            })
            .collect();
        let u = FqSubspace::from_fqn_vectors(t, 2, &line_rows).unwrap();
        let serial = u.scatter_scan_part(1, 1, 0).unwrap().first_violation.unwrap();
        let parts: Vec<_> = (0..3)
            .map(|w| u.scatter_scan_part(1, 3, w).unwrap())
            .collect();
        let merged = merge_scatter_parts(parts).first_violation.unwrap();
        assert_eq!(serial, merged);
    }

    #[test]
    fn search_scattered_finds_subgeometry_trivially() {
        let t = tower(2, 1, 3);
        let u = search_scattered(t, 3, 2, 3, 42, &SearchOptions::default()).unwrap();
        assert_eq!(u.dim(), 3);
        assert!(u.is_h_scattered(2, CAP).unwrap().is_scattered());
    }

    #[test]
    fn search_scattered_matches_gabidulin_spectrum() {
        let t = tower(2, 1, 3);
        let u = search_scattered(t, 2, 1, 3, 7, &SearchOptions::default()).unwrap();
        let spec = u.hyperplane_spectrum(CAP).unwrap();
        assert_eq!(spec.counts.get(&1), Some(&BigUint::from(7u32)));
        assert_eq!(spec.counts.get(&0), Some(&BigUint::from(2u32)));
    }

    #[test]
    fn search_scattered_deterministic_given_seed() {
        let t = tower(2, 1, 4);
        let a = search_scattered(t.clone(), 2, 1, 4, 99, &SearchOptions::default()).unwrap();
        let b = search_scattered(t, 2, 1, 4, 99, &SearchOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn vector_iteration_counts() {
        let t = tower(2, 1, 3);
        let g = gabidulin_subspace(t, 2, None).unwrap();
        let vecs: Vec<_> = g.iter_vectors().collect();
        assert_eq!(vecs.len(), 8); // q^k = 2^3
        assert_eq!(vecs[0], vec![0, 0]);
        let distinct: alloc::collections::BTreeSet<_> = vecs.into_iter().collect();
        assert_eq!(distinct.len(), 8);
    }

    /// Downward scatteredness on a 2-scattered example: every h-scattered
    /// subspace is i-scattered for i < h.
    #[test]
    fn downward_scatteredness() {
        let t = tower(2, 1, 4);
        let g = gabidulin_subspace(t, 3, None).unwrap();
        assert!(g.is_h_scattered(2, CAP).unwrap().is_scattered());
        assert!(g.is_h_scattered(1, CAP).unwrap().is_scattered());
    }
}
