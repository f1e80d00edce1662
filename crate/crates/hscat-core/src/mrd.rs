//! Rank-metric codes as `F_{q^n}`-spans of linearized polynomials: rank and
//! minimum distance, the MRD verdict, idealisers, adjoints, the Delsarte dual
//! of a code and the bridge to `(r-1)`-scattered subspaces.
//!
//! A linearized polynomial `f(x) = Σ a_i x^{q^i}` (coefficients modulo
//! `x^{q^n} - x`) is an `F_q`-linear map on `F_{q^n}`; codes here are the
//! `F_{q^n}`-linear ones, stored by the rref over `F_{q^n}` of their `r × n`
//! coefficient matrix. Minimum distance enumerates projective representatives
//! only: rank is invariant under nonzero scalar multiples.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::field::Field;
use crate::gf::FieldTower;
use crate::linalg::{self, Level, Matrix};
use crate::qcombin::gaussian_binomial_int;
use crate::subspace::{CovectorEnum, FqSubspace, SubspaceError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MrdError {
    EnumerationTooLarge { needed: BigUint, cap: u64 },
    /// The generators share a nonzero root, so the evaluation subspace drops
    /// dimension (the code cannot contain invertible maps).
    CommonRoot,
    EmptyCode,
    BadParams(&'static str),
    Subspace(SubspaceError),
}

impl fmt::Display for MrdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MrdError::EnumerationTooLarge { needed, cap } => {
                write!(f, "enumeration of {} codewords exceeds cap {}", needed, cap)
            }
            MrdError::CommonRoot => write!(f, "generators have a common nonzero root"),
            MrdError::EmptyCode => write!(f, "code has no nonzero generator"),
            MrdError::BadParams(m) => write!(f, "bad parameters: {}", m),
            MrdError::Subspace(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for MrdError {}

impl From<SubspaceError> for MrdError {
    fn from(e: SubspaceError) -> Self {
        MrdError::Subspace(e)
    }
}

/// A q-polynomial `Σ_{i<n} a_i x^{q^i}` over `F_{q^n}`.
#[derive(Debug, Clone)]
pub struct LinearizedPoly {
    tower: Arc<FieldTower>,
    coeffs: Vec<u32>,
}

impl PartialEq for LinearizedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.tower.same_tower(&other.tower) && self.coeffs == other.coeffs
    }
}

impl Eq for LinearizedPoly {}

impl LinearizedPoly {
    pub fn new(tower: Arc<FieldTower>, coeffs: Vec<u32>) -> Result<Self, MrdError> {
        if coeffs.len() != tower.n() {
            return Err(MrdError::BadParams("expected exactly n coefficients"));
        }
        if coeffs.iter().any(|&c| (c as u64) >= tower.qn()) {
            return Err(MrdError::BadParams("coefficient out of range"));
        }
        Ok(LinearizedPoly { tower, coeffs })
    }

    /// The monomial `x^{q^i}`.
    pub fn monomial(tower: Arc<FieldTower>, i: usize) -> Self {
        let n = tower.n();
        let mut coeffs = vec![0u32; n];
        coeffs[i % n] = 1;
        LinearizedPoly { tower, coeffs }
    }

    /// The identity map `x`.
    pub fn x(tower: Arc<FieldTower>) -> Self {
        Self::monomial(tower, 0)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn evaluate(&self, x: u32) -> u32 {
        let f = self.tower.fqn();
        let mut acc = 0u32;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                acc = f.add(acc, f.mul(a, self.tower.frobenius(x, i)));
            }
        }
        acc
    }

    pub fn add(&self, other: &LinearizedPoly) -> LinearizedPoly {
        let f = self.tower.fqn();
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        LinearizedPoly { tower: self.tower.clone(), coeffs }
    }

    /// Left scalar multiple `λ·f : x ↦ λ f(x)`.
    pub fn scale(&self, lambda: u32) -> LinearizedPoly {
        let f = self.tower.fqn();
        let coeffs = self.coeffs.iter().map(|&a| f.mul(lambda, a)).collect();
        LinearizedPoly { tower: self.tower.clone(), coeffs }
    }

    /// Composition `self ∘ other` (apply `other` first):
    /// `c_k = Σ_{i+j ≡ k (mod n)} a_i b_j^{q^i}`.
    pub fn compose(&self, other: &LinearizedPoly) -> LinearizedPoly {
        let n = self.tower.n();
        let f = self.tower.fqn();
        let mut coeffs = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = (i + j) % n;
                let t = f.mul(a, self.tower.frobenius(b, i));
                coeffs[k] = f.add(coeffs[k], t);
            }
        }
        LinearizedPoly { tower: self.tower.clone(), coeffs }
    }

    /// Adjoint with respect to `⟨x, y⟩ = Tr(xy)`:
    /// `f̂(x) = Σ a_i^{q^{n-i}} x^{q^{n-i}}`.
    pub fn adjoint(&self) -> LinearizedPoly {
        let n = self.tower.n();
        let mut coeffs = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let m = (n - i) % n;
            coeffs[m] = self.tower.frobenius(a, m);
        }
        LinearizedPoly { tower: self.tower.clone(), coeffs }
    }

    /// Rank of the induced `F_q`-linear map in the power basis.
    pub fn rank(&self) -> usize {
        let n = self.tower.n();
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let img = self.evaluate(self.tower.s_pow(j));
                self.tower.fqn().decode(img)
            })
            .collect();
        linalg::rank(self.tower.fq(), &Matrix::from_rows(Level::Fq, &rows))
    }
}

/// An `F_{q^n}`-linear rank-metric code in canonical (rref) generator form.
#[derive(Debug, Clone)]
pub struct RankMetricCode {
    tower: Arc<FieldTower>,
    /// rref over `F_{q^n}` of the `r × n` coefficient matrix.
    gens: Matrix,
    /// Pivot columns `t_0 < … < t_{r-1}` of the canonical form.
    pivots: Vec<usize>,
}

impl PartialEq for RankMetricCode {
    fn eq(&self, other: &Self) -> bool {
        self.tower.same_tower(&other.tower) && self.gens == other.gens
    }
}

impl Eq for RankMetricCode {}

impl RankMetricCode {
    pub fn new(tower: Arc<FieldTower>, generators: &[LinearizedPoly]) -> Result<Self, MrdError> {
        let rows: Vec<Vec<u32>> = generators.iter().map(|g| g.coeffs.clone()).collect();
        if rows.is_empty() {
            return Err(MrdError::EmptyCode);
        }
        let m = Matrix::from_rows(Level::Fqn, &rows);
        let (gens, pivots) = linalg::rref_with_pivots(tower.fqn(), &m);
        if gens.rows() == 0 {
            return Err(MrdError::EmptyCode);
        }
        Ok(RankMetricCode { tower, gens, pivots })
    }

    /// Builds `⟨x^{q^{e_0}}, x^{q^{e_1}}, …⟩`.
    pub fn from_monomials(tower: Arc<FieldTower>, exps: &[usize]) -> Result<Self, MrdError> {
        let gens: Vec<LinearizedPoly> = exps
            .iter()
            .map(|&e| LinearizedPoly::monomial(tower.clone(), e))
            .collect();
        Self::new(tower, &gens)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// `r = dim_{F_{q^n}} C`.
    pub fn dim(&self) -> usize {
        self.gens.rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical generator coefficient matrix (rref rows).
    pub fn generator_matrix(&self) -> &Matrix {
        &self.gens
    }

    pub fn generators(&self) -> Vec<LinearizedPoly> {
        self.gens
            .iter_rows()
            .map(|r| LinearizedPoly { tower: self.tower.clone(), coeffs: r.to_vec() })
            .collect()
    }

    /// `F_{q^n}`-membership of a polynomial.
    pub fn contains(&self, f: &LinearizedPoly) -> bool {
        let m = Matrix::from_rows(Level::Fqn, core::slice::from_ref(&f.coeffs));
        linalg::span_contains(self.tower.fqn(), &self.gens, &m).unwrap_or(false)
    }

    /// `F_q`-basis of the code inside the `n²`-dimensional coefficient space:
    /// the flattened coefficient vectors of `s^t · f_i`, rref over `F_q`.
    pub fn fq_flat_basis(&self) -> Matrix {
        let fqn = self.tower.fqn();
        let mut rows = Vec::with_capacity(self.dim() * self.tower.n());
        for g in self.gens.iter_rows() {
            for t in 0..self.tower.n() {
                let st = self.tower.s_pow(t);
                let scaled: Vec<u32> = g.iter().map(|&a| fqn.mul(st, a)).collect();
                rows.push(linalg::flatten(&self.tower, &scaled));
            }
        }
        linalg::rref(self.tower.fq(), &Matrix::from_rows(Level::Fq, &rows))
    }

    /// The adjoint code `{f̂ : f ∈ C}`.
    pub fn adjoint(&self) -> RankMetricCode {
        let gens: Vec<LinearizedPoly> = self.generators().iter().map(|g| g.adjoint()).collect();
        RankMetricCode::new(self.tower.clone(), &gens).expect("adjoint preserves dimension")
    }
}

/// Minimum rank distance, enumerating one representative per projective class
/// of nonzero codewords.
pub fn min_distance(code: &RankMetricCode, cap: u64) -> Result<usize, MrdError> {
    let r = code.dim();
    let qn = code.tower.qn();
    let needed = gaussian_binomial_int(r, 1, qn);
    if needed > BigUint::from(cap) {
        return Err(MrdError::EnumerationTooLarge { needed, cap });
    }
    let gens = code.generators();
    let mut en = CovectorEnum::new(qn, r);
    let mut c = vec![0u32; r];
    let mut best = code.tower.n();
    while en.next_into(&mut c).is_some() {
        let mut f = LinearizedPoly {
            tower: code.tower.clone(),
            coeffs: vec![0u32; code.tower.n()],
        };
        for (ci, g) in c.iter().zip(gens.iter()) {
            if *ci != 0 {
                f = f.add(&g.scale(*ci));
            }
        }
        let rk = f.rank();
        debug_assert!(rk > 0, "nonzero codeword has positive rank");
        if rk < best {
            best = rk;
            if best == 1 {
                break;
            }
        }
    }
    Ok(best)
}

/// Singleton-like verdict: `|C| = q^{n(n-d+1)}` ⟺ `d = n - r + 1`.
pub fn is_mrd(code: &RankMetricCode, cap: u64) -> Result<bool, MrdError> {
    let d = min_distance(code, cap)?;
    Ok(d == code.tower.n() - code.dim() + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Idealiser of a code: the solution space of `φ∘f ∈ C` (left) or `f∘φ ∈ C`
/// (right) for every `f` in an `F_q`-basis of `C`.
#[derive(Debug, Clone)]
pub struct IdealiserReport {
    pub side: Side,
    /// `dim_{F_q}` of the idealiser.
    pub dim: usize,
    pub basis: Vec<LinearizedPoly>,
    /// Dimension `n`, closed under composition and every nonzero member
    /// invertible: the three checkable conditions for `≅ F_{q^n}`.
    pub is_field_of_order_qn: bool,
}

pub fn idealiser(code: &RankMetricCode, side: Side) -> IdealiserReport {
    let tower = code.tower.clone();
    let n = tower.n();
    let n2 = n * n;
    let fq = tower.fq();
    let code_flat = code.fq_flat_basis();
    let (code_rref, code_pivots) = linalg::rref_with_pivots(fq, &code_flat);

    // F_q-basis of C as polynomials
    let fqn = tower.fqn();
    let mut code_basis: Vec<LinearizedPoly> = Vec::new();
    for g in code.gens.iter_rows() {
        for t in 0..n {
            let st = tower.s_pow(t);
            let coeffs: Vec<u32> = g.iter().map(|&a| fqn.mul(st, a)).collect();
            code_basis.push(LinearizedPoly { tower: tower.clone(), coeffs });
        }
    }

    // residual of a flattened coefficient vector modulo the code
    let reduce = |v: &mut Vec<u32>| {
        for (i, &p) in code_pivots.iter().enumerate() {
            let c = v[p];
            if c != 0 {
                for (slot, &r) in v.iter_mut().zip(code_rref.row(i)) {
                    *slot = fq.sub(*slot, fq.mul(c, r));
                }
            }
        }
    };

    // unknowns: the n² F_q-digits of φ; one constraint block per basis element
    let mut a = Matrix::zeros(Level::Fq, code_basis.len() * n2, n2);
    for (unit_idx, (m, t)) in (0..n).flat_map(|m| (0..n).map(move |t| (m, t))).enumerate() {
        let mut coeffs = vec![0u32; n];
        coeffs[m] = tower.s_pow(t);
        let unit = LinearizedPoly { tower: tower.clone(), coeffs };
        for (gi, g) in code_basis.iter().enumerate() {
            let h = match side {
                Side::Left => unit.compose(g),
                Side::Right => g.compose(&unit),
            };
            let mut flat = linalg::flatten(&tower, &h.coeffs);
            reduce(&mut flat);
            for (c, &val) in flat.iter().enumerate() {
                a.set(gi * n2 + c, unit_idx, val);
            }
        }
    }
    let basis_digits = linalg::kernel(fq, &a);
    let dim = basis_digits.rows();
    let basis: Vec<LinearizedPoly> = basis_digits
        .iter_rows()
        .map(|row| LinearizedPoly {
            tower: tower.clone(),
            coeffs: linalg::unflatten(&tower, row),
        })
        .collect();

    let mut is_field = dim == n;
    if is_field {
        // closure under composition
        let (ideal_rref, ideal_pivots) = linalg::rref_with_pivots(fq, &basis_digits);
        let member = |f: &LinearizedPoly| -> bool {
            let mut flat = linalg::flatten(&tower, &f.coeffs);
            for (i, &p) in ideal_pivots.iter().enumerate() {
                let c = flat[p];
                if c != 0 {
                    for (slot, &r) in flat.iter_mut().zip(ideal_rref.row(i)) {
                        *slot = fq.sub(*slot, fq.mul(c, r));
                    }
                }
            }
            flat.iter().all(|&x| x == 0)
        };
        'outer: for f in &basis {
            for g in &basis {
                if !member(&f.compose(g)) {
                    is_field = false;
                    break 'outer;
                }
            }
        }
        // every nonzero member invertible
        if is_field {
            let q = tower.q();
            let mut coeffs_odometer = vec![0u32; dim];
            loop {
                // advance odometer
                let mut i = 0;
                loop {
                    if i == dim {
                        break;
                    }
                    let next = coeffs_odometer[i] as u64 + 1;
                    if next < q {
                        coeffs_odometer[i] = next as u32;
                        break;
                    }
                    coeffs_odometer[i] = 0;
                    i += 1;
                }
                if i == dim {
                    break;
                }
                let mut f = LinearizedPoly { tower: tower.clone(), coeffs: vec![0u32; n] };
                for (c, b) in coeffs_odometer.iter().zip(basis.iter()) {
                    if *c != 0 {
                        f = f.add(&b.scale(tower.embed_fq(*c)));
                    }
                }
                if f.rank() != n {
                    is_field = false;
                    break;
                }
            }
        }
    }

    IdealiserReport { side, dim, basis, is_field_of_order_qn: is_field }
}

/// The evaluation subspace `U_C = {(f_1(x), …, f_r(x)) : x ∈ F_{q^n}}` of
/// `F_{q^n}^r`, spanned by the images of the power basis. Errors when the
/// generators share a nonzero root (then `dim U_C < n`).
pub fn code_to_subspace(code: &RankMetricCode) -> Result<FqSubspace, MrdError> {
    let tower = code.tower.clone();
    let n = tower.n();
    let gens = code.generators();
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|j| {
            let x = tower.s_pow(j);
            gens.iter().map(|g| g.evaluate(x)).collect()
        })
        .collect();
    let u = FqSubspace::from_fqn_vectors(tower, code.dim(), &rows)?;
    if u.dim() < n {
        return Err(MrdError::CommonRoot);
    }
    Ok(u)
}

/// Delsarte dual `C^⊥ = {f : b(f, g) = 0 ∀g ∈ C}` with
/// `b(f, g) = Tr(Σ a_i b_i)`, computed as an orthogonal complement in the
/// `n²`-dimensional `F_q` coefficient space and re-expressed with
/// `F_{q^n}`-generators (the dual of an `F_{q^n}`-linear code is one again).
pub fn delsarte_dual_code(code: &RankMetricCode) -> Result<RankMetricCode, MrdError> {
    let tower = code.tower.clone();
    let n = tower.n();
    let fq = tower.fq();
    if code.dim() == n {
        return Err(MrdError::BadParams("dual of the full algebra slice is zero"));
    }
    // Gram matrix of b on the monomial basis: block-diagonal with blocks
    // T[t][u] = Tr(s^{t+u})
    let mut t_block = Matrix::zeros(Level::Fq, n, n);
    for t in 0..n {
        for u in 0..n {
            let v = tower.trace(tower.fqn().mul(tower.s_pow(t), tower.s_pow(u)));
            t_block.set(t, u, tower.as_embedded_fq(v).expect("trace lands in F_q"));
        }
    }
    let mut gram = Matrix::zeros(Level::Fq, n * n, n * n);
    for b in 0..n {
        for t in 0..n {
            for u in 0..n {
                gram.set(b * n + t, b * n + u, t_block.get(t, u));
            }
        }
    }
    let code_flat = code.fq_flat_basis();
    let m = linalg::mat_mul(fq, &code_flat, &gram).expect("shapes agree");
    let dual_flat = linalg::kernel(fq, &m);
    debug_assert_eq!(dual_flat.rows(), n * n - n * code.dim());
    // regroup into F_{q^n} coefficient vectors and take F_{q^n}-generators
    let polys: Vec<LinearizedPoly> = dual_flat
        .iter_rows()
        .map(|row| LinearizedPoly {
            tower: tower.clone(),
            coeffs: linalg::unflatten(&tower, row),
        })
        .collect();
    let dual = RankMetricCode::new(tower, &polys)?;
    debug_assert_eq!(dual.dim(), n - code.dim());
    Ok(dual)
}

/// The dual read off the canonical generator form: with pivots
/// `T = {t_0 < …}`, complement `S = {s_0 < …}` and off-pivot entries
/// `g_{i,j}`, the dual is generated by `h'_i(x) = x^{q^{s_i}} - Σ_j g_{j,s_i} x^{q^{t_j}}`.
pub fn normalized_dual(code: &RankMetricCode) -> Result<RankMetricCode, MrdError> {
    let tower = code.tower.clone();
    let n = tower.n();
    let fqn = tower.fqn();
    if code.dim() == n {
        return Err(MrdError::BadParams("dual of the full algebra slice is zero"));
    }
    let complement: Vec<usize> = (0..n).filter(|c| !code.pivots.contains(c)).collect();
    let gens: Vec<LinearizedPoly> = complement
        .iter()
        .map(|&si| {
            let mut coeffs = vec![0u32; n];
            coeffs[si] = 1;
            for (j, &tj) in code.pivots.iter().enumerate() {
                coeffs[tj] = fqn.neg(code.gens.get(j, si));
            }
            LinearizedPoly { tower: tower.clone(), coeffs }
        })
        .collect();
    RankMetricCode::new(tower, &gens)
}

/// The subspace-level Delsarte dual of `U_C` computed in the coordinates of
/// the code itself: ambient `F_{q^n}^n`, `W` the full Gabidulin subspace
/// `{(x, x^q, …, x^{q^{n-1}})}`, `Γ` cut out by the canonical generator
/// entries, the standard inner product, and the quotient read off the
/// coordinate subspace `Λ' : x_{t_0} = … = x_{t_{r-1}} = 0`. Returns the
/// resulting subspace of `F_{q^n}^{n-r}`.
pub fn evaluation_subspace_dual(code: &RankMetricCode) -> Result<FqSubspace, MrdError> {
    let tower = code.tower.clone();
    let n = tower.n();
    let r = code.dim();
    if r >= n {
        return Err(MrdError::BadParams("the identification needs r < n"));
    }
    let fqn = tower.fqn();
    let complement: Vec<usize> = (0..n).filter(|c| !code.pivots.contains(c)).collect();

    // Γ^⊥ rows: δ^{(i)} with 1 at t_i and g_{i,u} at u ∉ T
    let mut perp_rows: Vec<Vec<u32>> = Vec::with_capacity(r);
    for (i, &ti) in code.pivots.iter().enumerate() {
        let mut row = vec![0u32; n];
        row[ti] = 1;
        for &u in &complement {
            row[u] = code.gens.get(i, u);
        }
        perp_rows.push(row);
    }

    // F_q-generators of ⟨W, Γ^⊥⟩: Gabidulin rows plus s^m·δ^{(i)}
    let mut gen_rows: Vec<Vec<u32>> = Vec::new();
    for j in 0..n {
        let b = tower.s_pow(j);
        let row: Vec<u32> = (0..n).map(|t| tower.frobenius(b, t)).collect();
        gen_rows.push(linalg::flatten(&tower, &row));
    }
    for row in &perp_rows {
        for m in 0..n {
            let sm = tower.s_pow(m);
            let scaled: Vec<u32> = row.iter().map(|&x| fqn.mul(sm, x)).collect();
            gen_rows.push(linalg::flatten(&tower, &scaled));
        }
    }
    let span = linalg::rref(tower.fq(), &Matrix::from_rows(Level::Fq, &gen_rows));

    // Λ' flat: unit vectors in the blocks of the complement coordinates
    let mut lambda_rows: Vec<Vec<u32>> = Vec::with_capacity(complement.len() * n);
    for &u in &complement {
        for d in 0..n {
            let mut v = vec![0u32; n * n];
            v[u * n + d] = 1;
            lambda_rows.push(v);
        }
    }
    let lambda = Matrix::from_rows(Level::Fq, &lambda_rows);
    let meet = linalg::span_intersect(tower.fq(), &span, &lambda).expect("same ambient");

    // extract the complement blocks (ascending) and reassemble
    let rows: Vec<Vec<u32>> = meet
        .iter_rows()
        .map(|row| {
            let mut v = Vec::with_capacity(complement.len() * n);
            for &u in &complement {
                v.extend_from_slice(&row[u * n..(u + 1) * n]);
            }
            v
        })
        .collect();
    let flat = if rows.is_empty() {
        Matrix::zeros(Level::Fq, 0, complement.len() * n)
    } else {
        Matrix::from_rows(Level::Fq, &rows)
    };
    let u = FqSubspace::from_flat_matrix(tower, n - r, &flat)?;
    if u.dim() < n {
        return Err(MrdError::CommonRoot);
    }
    Ok(u)
}
