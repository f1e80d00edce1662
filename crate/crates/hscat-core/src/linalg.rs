//! Exact linear algebra over the two tower levels: reduced row echelon forms,
//! rank, kernels, row-space operations and the flattening of `F_{q^n}^r` into
//! `F_q^{rn}`.
//!
//! A [`Matrix`] is plain row-major data tagged with the tower level its entries
//! live at; the arithmetic comes in through a [`Field`] reference at each call.
//! Canonical subspace representatives are rrefs with zero rows dropped, so row
//! space equality is data equality of rrefs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;
use crate::gf::FieldTower;

/// Which tower level the entries of a matrix belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    /// Entries are `F_q` indexes.
    Fq,
    /// Entries are `F_{q^n}` indexes.
    Fqn,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    AmbientMismatch,
    NotInvertible,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::AmbientMismatch => write!(f, "ambient dimension or field level mismatch"),
            LinalgError::NotInvertible => write!(f, "matrix is not invertible"),
        }
    }
}

impl core::error::Error for LinalgError {}

/// Rectangular matrix with entries stored row-major as field indexes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matrix {
    pub level: Level,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn new(level: Level, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(rows * cols, data.len());
        Matrix { level, rows, cols, data }
    }

    pub fn zeros(level: Level, rows: usize, cols: usize) -> Self {
        Matrix { level, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(level: Level, n: usize) -> Self {
        let mut m = Matrix::zeros(level, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(level: Level, rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Matrix { level, rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols)
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.level, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Vertical stacking; levels and widths must agree.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.level != other.level || self.cols != other.cols {
            return Err(LinalgError::AmbientMismatch);
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { level: self.level, rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }
}

/// In-place Gaussian elimination to reduced row echelon form; returns the
/// pivot columns. Zero rows are dropped, so the result is the canonical
/// representative of the row space.
pub fn rref<F: Field>(field: &F, m: &Matrix) -> Matrix {
    rref_with_pivots(field, m).0
}

pub fn rref_with_pivots<F: Field>(field: &F, m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        // find a pivot in this column
        let mut piv = None;
        for i in row..a.rows {
            if a.get(i, col) != 0 {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        // swap into place
        if p != row {
            for j in 0..a.cols {
                let tmp = a.get(row, j);
                a.set(row, j, a.get(p, j));
                a.set(p, j, tmp);
            }
        }
        // scale pivot row to 1
        let inv = field.inv(a.get(row, col)).expect("pivot is nonzero");
        if inv != 1 {
            for j in col..a.cols {
                a.set(row, j, field.mul(a.get(row, j), inv));
            }
        }
        // eliminate the column everywhere else
        for i in 0..a.rows {
            if i == row {
                continue;
            }
            let c = a.get(i, col);
            if c != 0 {
                for j in col..a.cols {
                    let t = field.mul(c, a.get(row, j));
                    a.set(i, j, field.sub(a.get(i, j), t));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    // drop zero rows
    let mut data = Vec::with_capacity(row * a.cols);
    for i in 0..row {
        data.extend_from_slice(a.row(i));
    }
    (Matrix { level: a.level, rows: row, cols: a.cols, data }, pivots)
}

pub fn rank<F: Field>(field: &F, m: &Matrix) -> usize {
    rref(field, m).rows()
}

/// Basis of the right null space `{x : m·xᵗ = 0}`, one vector per row,
/// canonicalized by rref.
pub fn kernel<F: Field>(field: &F, m: &Matrix) -> Matrix {
    let (r, pivots) = rref_with_pivots(field, m);
    let rank = r.rows();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut rows = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![0u32; m.cols()];
        v[fc] = 1;
        for (i, &pc) in pivots.iter().enumerate().take(rank) {
            // pivot variable = -(entry at the free column)
            v[pc] = field.neg(r.get(i, fc));
        }
        rows.push(v);
    }
    let basis = Matrix::from_rows(m.level, &rows);
    if basis.rows() == 0 {
        Matrix::zeros(m.level, 0, m.cols())
    } else {
        rref(field, &basis)
    }
}

pub fn mat_mul<F: Field>(field: &F, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if a.level != b.level || a.cols() != b.rows() {
        return Err(LinalgError::AmbientMismatch);
    }
    let mut out = Matrix::zeros(a.level, a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let aik = a.get(i, k);
            if aik == 0 {
                continue;
            }
            for j in 0..b.cols() {
                let t = field.mul(aik, b.get(k, j));
                out.set(i, j, field.add(out.get(i, j), t));
            }
        }
    }
    Ok(out)
}

/// Row vector times matrix.
pub fn vec_mat<F: Field>(field: &F, v: &[u32], m: &Matrix) -> Vec<u32> {
    assert_eq!(v.len(), m.rows());
    let mut out = vec![0u32; m.cols()];
    for (k, &vk) in v.iter().enumerate() {
        if vk == 0 {
            continue;
        }
        for (slot, &mkj) in out.iter_mut().zip(m.row(k)) {
            let t = field.mul(vk, mkj);
            *slot = field.add(*slot, t);
        }
    }
    out
}

/// Inverse of a square matrix.
pub fn invert<F: Field>(field: &F, m: &Matrix) -> Result<Matrix, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotInvertible);
    }
    let n = m.rows();
    let mut aug = Matrix::zeros(m.level, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, n + i, 1);
    }
    let (r, pivots) = rref_with_pivots(field, &aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(LinalgError::NotInvertible);
    }
    let mut out = Matrix::zeros(m.level, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, r.get(i, n + j));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Row-space operations (canonical representatives are rrefs).
// ---------------------------------------------------------------------------

/// Canonical sum of two row spaces.
pub fn span_sum<F: Field>(field: &F, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    Ok(rref(field, &a.stack(b)?))
}

/// Canonical intersection of two row spaces, computed through the kernel of
/// the stacked bases.
pub fn span_intersect<F: Field>(field: &F, a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if a.level != b.level || a.cols() != b.cols() {
        return Err(LinalgError::AmbientMismatch);
    }
    if a.is_empty() || b.is_empty() {
        return Ok(Matrix::zeros(a.level, 0, a.cols()));
    }
    // (u, v)·[A; -B] = 0  ⟺  u·A = v·B ∈ A ∩ B
    let mut neg_b = b.clone();
    for i in 0..neg_b.rows() {
        for j in 0..neg_b.cols() {
            neg_b.set(i, j, field.neg(neg_b.get(i, j)));
        }
    }
    let stacked = a.stack(&neg_b)?;
    let left_kernel = kernel(field, &stacked.transpose());
    let mut rows = Vec::new();
    for coeffs in left_kernel.iter_rows() {
        let u = &coeffs[..a.rows()];
        rows.push(vec_mat(field, u, a));
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(a.level, 0, a.cols()));
    }
    Ok(rref(field, &Matrix::from_rows(a.level, &rows)))
}

/// Whether the row space of `a` contains every row of `b`.
pub fn span_contains<F: Field>(field: &F, a: &Matrix, b: &Matrix) -> Result<bool, LinalgError> {
    if a.level != b.level || a.cols() != b.cols() {
        return Err(LinalgError::AmbientMismatch);
    }
    let ra = rank(field, a);
    Ok(rank(field, &a.stack(b)?) == ra)
}

// ---------------------------------------------------------------------------
// Flattening F_{q^n}^r ↔ F_q^{rn}.
// ---------------------------------------------------------------------------

/// Coordinates of an `F_{q^n}`-vector with respect to the power basis
/// `1, s, …, s^{n-1}`, blocked per ambient coordinate.
pub fn flatten(tower: &FieldTower, v: &[u32]) -> Vec<u32> {
    let n = tower.n();
    let mut out = Vec::with_capacity(v.len() * n);
    for &x in v {
        out.extend(tower.fqn().decode(x));
    }
    out
}

/// Inverse of [`flatten`].
pub fn unflatten(tower: &FieldTower, v: &[u32]) -> Vec<u32> {
    let n = tower.n();
    assert_eq!(v.len() % n, 0);
    v.chunks(n).map(|c| tower.fqn().encode(c)).collect()
}

/// Flattens every row of an `F_{q^n}`-level matrix into an `F_q`-level matrix.
pub fn flatten_matrix(tower: &FieldTower, m: &Matrix) -> Matrix {
    assert_eq!(m.level, Level::Fqn);
    let rows: Vec<Vec<u32>> = m.iter_rows().map(|r| flatten(tower, r)).collect();
    if rows.is_empty() {
        Matrix::zeros(Level::Fq, 0, m.cols() * tower.n())
    } else {
        Matrix::from_rows(Level::Fq, &rows)
    }
}

/// Unflattens every row of an `F_q`-level matrix back to `F_{q^n}` level.
pub fn unflatten_matrix(tower: &FieldTower, m: &Matrix) -> Matrix {
    assert_eq!(m.level, Level::Fq);
    let rows: Vec<Vec<u32>> = m.iter_rows().map(|r| unflatten(tower, r)).collect();
    if rows.is_empty() {
        Matrix::zeros(Level::Fqn, 0, m.cols() / tower.n())
    } else {
        Matrix::from_rows(Level::Fqn, &rows)
    }
}
