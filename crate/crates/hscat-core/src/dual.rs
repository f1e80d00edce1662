//! The Delsarte dual of an `F_q`-subspace, realized in explicit coordinates.
//!
//! A `k`-dimensional `U ⊂ Λ = F_{q^n}^r` with `k > r` is re-embedded into
//! `V̄ = F_{q^n}^k` through the surjection `e_i ↦ u_i` (rows of the canonical
//! basis form the projection matrix `P`), which realizes `U` as `(W + Γ)/Γ`
//! with `Γ = ker P` and `W` the `F_q`-span of the standard basis of `V̄`.
//! Given a symmetric invertible form matrix `G` over the embedded `F_q`, the
//! dual is the `F_q`-subspace `(W + Γ^⊥)/Γ^⊥` of `V̄/Γ^⊥ ≅ F_{q^n}^{k-r}`,
//! written out in the quotient coordinates of a greedily chosen standard-basis
//! complement of `Γ^⊥`.
//!
//! The construction demands the hyperplane condition (⋄): every hyperplane of
//! `Λ` meets `U` in dimension `< k-1`; that is exactly what makes `W` and
//! `Γ^⊥` intersect trivially, and it is checked up front.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;
use crate::linalg::{self, Level, Matrix};
use crate::subspace::{FqSubspace, SubspaceError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualError {
    DimensionTooSmall { k: usize, r: usize },
    DiamondViolated { max_hyperplane_dim: usize, k: usize },
    FormSingular,
    Subspace(SubspaceError),
}

impl fmt::Display for DualError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualError::DimensionTooSmall { k, r } => {
                write!(f, "dual needs dim U = k > r, got k = {} and r = {}", k, r)
            }
            DualError::DiamondViolated { max_hyperplane_dim, k } => write!(
                f,
                "a hyperplane meets U in dimension {} >= k-1 = {}",
                max_hyperplane_dim,
                k - 1
            ),
            DualError::FormSingular => {
                write!(f, "form matrix must be symmetric and invertible over the embedded F_q")
            }
            DualError::Subspace(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for DualError {}

impl From<SubspaceError> for DualError {
    fn from(e: SubspaceError) -> Self {
        DualError::Subspace(e)
    }
}

/// Choice of the reflexive form on `W`, always with companion automorphism 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormSpec {
    /// `G = I_k`.
    Standard,
    /// `G` the anti-diagonal permutation matrix.
    Reversal,
    /// A caller-supplied symmetric invertible matrix over `F_q` (validated).
    Custom(Matrix),
}

impl FormSpec {
    /// The `k × k` form matrix over `F_q`.
    pub fn matrix(&self, k: usize) -> Result<Matrix, DualError> {
        match self {
            FormSpec::Standard => Ok(Matrix::identity(Level::Fq, k)),
            FormSpec::Reversal => {
                let mut m = Matrix::zeros(Level::Fq, k, k);
                for i in 0..k {
                    m.set(i, k - 1 - i, 1);
                }
                Ok(m)
            }
            FormSpec::Custom(m) => {
                if m.rows() != k || m.cols() != k {
                    return Err(DualError::FormSingular);
                }
                Ok(m.clone())
            }
        }
    }
}

/// Applicability record for the dual bound: inferred `h` (from `k = rn/(h+1)`)
/// and whether the `n ≥ h+3` hypothesis holds for the scatteredness guarantee
/// of the dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGuarantee {
    /// `h` with `k = rn/(h+1)`, when `k` divides `rn` that way.
    pub h: Option<usize>,
    /// Expected scatteredness order `n - h - 2` of the dual, when defined.
    pub dual_order: Option<usize>,
    /// `n ≥ h + 3`; when false the dual is still returned but the theorem's
    /// guarantee does not apply.
    pub applies: bool,
}

/// Full provenance of a dual construction.
#[derive(Debug, Clone)]
pub struct DualContext {
    /// `k × r` projection, row `i` = `i`-th canonical basis vector of `U`.
    pub projection: Matrix,
    /// `(k-r) × k` basis of `Γ = ker P` over `F_{q^n}`.
    pub gamma: Matrix,
    /// `r × k` basis of `Γ^⊥` w.r.t. `β(x, y) = x·G·yᵗ`.
    pub gamma_perp: Matrix,
    /// The form matrix over `F_q`.
    pub form: Matrix,
    /// Standard-basis indexes spanning the chosen complement of `Γ^⊥`.
    pub complement: Vec<usize>,
    pub guarantee: DualGuarantee,
}

#[derive(Debug, Clone)]
pub struct DualResult {
    /// `Ū`, a `k`-dimensional subspace of `F_{q^n}^{k-r}`.
    pub dual: FqSubspace,
    pub context: DualContext,
}

/// Condition (⋄): every hyperplane of `Λ` meets `U` in `F_q`-dimension `< k-1`.
pub fn check_diamond(u: &FqSubspace, cap: u64) -> Result<bool, DualError> {
    let k = u.dim();
    let r = u.ambient_r();
    if k <= r {
        return Err(DualError::DimensionTooSmall { k, r });
    }
    let spec = u.hyperplane_spectrum(cap)?;
    Ok(spec.support_max().is_none_or(|m| m < k - 1))
}

/// Computes the Delsarte dual `Ū ⊂ F_{q^n}^{k-r}` of `U` with respect to the
/// chosen form. Deterministic given the canonical basis of `U` and the form.
pub fn delsarte_dual(u: &FqSubspace, form: &FormSpec, cap: u64) -> Result<DualResult, DualError> {
    let k = u.dim();
    let r = u.ambient_r();
    if k <= r {
        return Err(DualError::DimensionTooSmall { k, r });
    }
    let spec = u.hyperplane_spectrum(cap)?;
    if let Some(m) = spec.support_max() {
        if m >= k - 1 {
            return Err(DualError::DiamondViolated { max_hyperplane_dim: m, k });
        }
    }
    let tower = u.tower().clone();
    let fqn = tower.fqn();
    let fq = tower.fq();

    // form matrix: symmetric, invertible, entries in the embedded F_q
    let g = form.matrix(k)?;
    for i in 0..k {
        for j in 0..k {
            if g.get(i, j) as u64 >= tower.q() || g.get(i, j) != g.get(j, i) {
                return Err(DualError::FormSingular);
            }
        }
    }
    if linalg::rank(fq, &g) != k {
        return Err(DualError::FormSingular);
    }
    let g_fqn = Matrix::new(Level::Fqn, k, k, g.data().to_vec());

    // embedding: P has the canonical basis as rows; Γ = {x : x·P = 0}
    let p = Matrix::new(Level::Fqn, k, r, u.basis().data().to_vec());
    debug_assert_eq!(linalg::rank(fqn, &p), r, "diamond implies spanning");
    let gamma = linalg::kernel(fqn, &p.transpose());
    debug_assert_eq!(gamma.rows(), k - r);

    // Γ^⊥ w.r.t. β(x,y) = x·G·yᵗ: right kernel of Γ·G (G symmetric)
    let gamma_g = linalg::mat_mul(fqn, &gamma, &g_fqn).expect("shapes agree");
    let gamma_perp = linalg::kernel(fqn, &gamma_g);
    debug_assert_eq!(gamma_perp.rows(), r);

    // W ∩ Γ^⊥ = {0}: what (⋄) buys, asserted before quotienting
    let w_rows: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let mut v = vec![0u32; k];
            v[i] = 1;
            linalg::flatten(&tower, &v)
        })
        .collect();
    let w_flat = Matrix::from_rows(Level::Fq, &w_rows);
    let perp_flat = fq_generators_of_fqn_span(&tower, &gamma_perp);
    let meet = linalg::span_intersect(fq, &w_flat, &perp_flat).expect("same ambient");
    assert_eq!(meet.rows(), 0, "W ∩ Γ^⊥ must be trivial under (⋄)");

    // greedy standard-basis complement of Γ^⊥ in index order
    let mut span = gamma_perp.clone();
    let mut complement = Vec::with_capacity(k - r);
    for j in 0..k {
        if span.rows() == k {
            break;
        }
        let mut e = vec![0u32; k];
        e[j] = 1;
        let em = Matrix::from_rows(Level::Fqn, &[e]);
        if !linalg::span_contains(fqn, &span, &em).expect("same ambient") {
            complement.push(j);
            span = linalg::span_sum(fqn, &span, &em).expect("same ambient");
        }
    }
    assert_eq!(complement.len(), k - r);

    // quotient coordinates: x = y·M with M = [complement rows; Γ^⊥ rows];
    // ρ(x) = first k-r coordinates of x·M^{-1}
    let mut m_rows: Vec<Vec<u32>> = Vec::with_capacity(k);
    for &c in &complement {
        let mut e = vec![0u32; k];
        e[c] = 1;
        m_rows.push(e);
    }
    for row in gamma_perp.iter_rows() {
        m_rows.push(row.to_vec());
    }
    let m = Matrix::from_rows(Level::Fqn, &m_rows);
    let minv = linalg::invert(fqn, &m).expect("complement basis is invertible");

    let dual_rows: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let mut e = vec![0u32; k];
            e[i] = 1;
            let y = linalg::vec_mat(fqn, &e, &minv);
            y[..k - r].to_vec()
        })
        .collect();
    let dual = FqSubspace::from_fqn_vectors(tower.clone(), k - r, &dual_rows)?;
    assert_eq!(dual.dim(), k, "the dual has the same F_q-dimension as U");

    let n = tower.n();
    let rn = r * n;
    let h = if rn.is_multiple_of(k) && rn / k >= 2 { Some(rn / k - 1) } else { None };
    let guarantee = DualGuarantee {
        h,
        dual_order: h.map(|h| n.saturating_sub(h + 2)),
        applies: h.is_some_and(|h| n >= h + 3),
    };

    Ok(DualResult {
        dual,
        context: DualContext { projection: p, gamma, gamma_perp, form: g, complement, guarantee },
    })
}

/// `F_q`-generators of the `F_{q^n}`-span of `m`'s rows, flattened: the rows
/// `s^j · m_i` for all powers of the power-basis generator.
fn fq_generators_of_fqn_span(tower: &crate::gf::FieldTower, m: &Matrix) -> Matrix {
    let fqn = tower.fqn();
    let mut rows = Vec::with_capacity(m.rows() * tower.n());
    for base_row in m.iter_rows() {
        for j in 0..tower.n() {
            let sj = tower.s_pow(j);
            let scaled: Vec<u32> = base_row.iter().map(|&x| fqn.mul(sj, x)).collect();
            rows.push(linalg::flatten(tower, &scaled));
        }
    }
    linalg::rref(tower.fq(), &Matrix::from_rows(Level::Fq, &rows))
}

/// Checks the form-independence of the dual: `φ(x) = x·G_2·G_1^{-1}` must map
/// `W + Γ^{⊥_2}` onto `W + Γ^{⊥_1}` as `F_q`-subspaces of `V̄` (compared before
/// quotienting).
pub fn form_independence_check(
    u: &FqSubspace,
    form1: &FormSpec,
    form2: &FormSpec,
    cap: u64,
) -> Result<bool, DualError> {
    let d1 = delsarte_dual(u, form1, cap)?;
    let d2 = delsarte_dual(u, form2, cap)?;
    let tower = u.tower().clone();
    let fqn = tower.fqn();
    let k = u.dim();

    let g1_inv = linalg::invert(fqn, &as_fqn(&d1.context.form)).map_err(|_| DualError::FormSingular)?;
    let phi = linalg::mat_mul(fqn, &as_fqn(&d2.context.form), &g1_inv).expect("square");

    // F_q-generators of W + Γ^{⊥_i}, flattened
    let w_rows: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let mut v = vec![0u32; k];
            v[i] = 1;
            v
        })
        .collect();
    let gens = |perp: &Matrix, map: Option<&Matrix>| -> Matrix {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for w in &w_rows {
            let v = match map {
                Some(a) => linalg::vec_mat(fqn, w, a),
                None => w.clone(),
            };
            rows.push(linalg::flatten(&tower, &v));
        }
        for base_row in perp.iter_rows() {
            for j in 0..tower.n() {
                let sj = tower.s_pow(j);
                let scaled: Vec<u32> = base_row.iter().map(|&x| fqn.mul(sj, x)).collect();
                let v = match map {
                    Some(a) => linalg::vec_mat(fqn, &scaled, a),
                    None => scaled,
                };
                rows.push(linalg::flatten(&tower, &v));
            }
        }
        linalg::rref(tower.fq(), &Matrix::from_rows(Level::Fq, &rows))
    };

    let image_of_2 = gens(&d2.context.gamma_perp, Some(&phi));
    let target_1 = gens(&d1.context.gamma_perp, None);
    Ok(image_of_2 == target_1)
}

fn as_fqn(m: &Matrix) -> Matrix {
    Matrix::new(Level::Fqn, m.rows(), m.cols(), m.data().to_vec())
}
