//! The field tower `F_p ⊂ F_q = F_{p^e} ⊂ F_{q^n}` with exact arithmetic,
//! Frobenius, trace and the subfield embedding.
//!
//! Both defining polynomials are the canonically smallest monic irreducible of
//! their degree (see [`crate::field::smallest_irreducible`]), so a tower is
//! fully determined by `(p, e, n)` and serialized artifacts are reproducible.
//! Towers are immutable and all operations are pure.

use alloc::vec::Vec;
use core::fmt;

use crate::field::{is_irreducible, smallest_irreducible, ExtField, Field, PrimeField};

/// Default ceiling for `|F_{q^n}| = p^{e·n}`. Overridable per tower.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Elements are `u32` indexes; the representation bounds every field at `2^31`.
const REPR_LIMIT: u64 = 1 << 31;

/// `F_q` as an extension of `F_p`.
pub type Fq = ExtField<PrimeField>;
/// `F_{q^n}` as an extension of `F_q`.
pub type Fqn = ExtField<Fq>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    FieldTooLarge { size_log2: u32, cap: u64 },
    DegenerateDegree,
    DivisionByZero,
    BadElement,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{} is not prime", p),
            FieldError::FieldTooLarge { size_log2, cap } => {
                write!(f, "field of ~2^{} elements exceeds cap {}", size_log2, cap)
            }
            FieldError::DegenerateDegree => write!(f, "extension degrees must be at least 1"),
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::BadElement => write!(f, "element coefficients out of range"),
        }
    }
}

impl core::error::Error for FieldError {}

/// The tower `F_p ⊂ F_q ⊂ F_{q^n}` with fixed canonical moduli.
#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u64,
    e: usize,
    n: usize,
    cap: u64,
    fqn: Fqn,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `b^e` if it stays at or below `limit`.
fn checked_pow_capped(b: u64, e: u32, limit: u64) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc.checked_mul(b)?;
        if acc > limit {
            return None;
        }
    }
    Some(acc)
}

impl FieldTower {
    /// Builds the tower for `(p, e, n)` under the default field cap.
    pub fn new(p: u64, e: usize, n: usize) -> Result<Self, FieldError> {
        Self::with_cap(p, e, n, DEFAULT_FIELD_CAP)
    }

    /// Builds the tower with an explicit cap on `|F_{q^n}|`.
    pub fn with_cap(p: u64, e: usize, n: usize, cap: u64) -> Result<Self, FieldError> {
        if e == 0 || n == 0 {
            return Err(FieldError::DegenerateDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let cap = cap.min(REPR_LIMIT);
        let total = (e * n) as u32;
        if checked_pow_capped(p, total, cap).is_none() {
            return Err(FieldError::FieldTooLarge {
                size_log2: total * (64 - p.leading_zeros()),
                cap,
            });
        }
        let fp = PrimeField::new(p);
        let fq_modulus = smallest_irreducible(&fp, e);
        let fq = ExtField::new(fp, e, fq_modulus);
        let fqn_modulus = smallest_irreducible(&fq, n);
        let fqn = ExtField::new(fq, n, fqn_modulus);
        Ok(FieldTower { p, e, n, cap, fqn })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q = p^e`.
    pub fn q(&self) -> u64 {
        self.fqn.base().order()
    }

    /// `q^n = p^{e·n}`.
    pub fn qn(&self) -> u64 {
        self.fqn.order()
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Arithmetic of the middle level `F_q`.
    pub fn fq(&self) -> &Fq {
        self.fqn.base()
    }

    /// Arithmetic of the top level `F_{q^n}`.
    pub fn fqn(&self) -> &Fqn {
        &self.fqn
    }

    /// Defining polynomial of `F_q` over `F_p` as residues, degree-ascending.
    pub fn fq_modulus(&self) -> Vec<u64> {
        self.fq().modulus().iter().map(|&c| c as u64).collect()
    }

    /// Defining polynomial of `F_{q^n}` over `F_q`; each coefficient as its
    /// `F_p` coefficient tuple.
    pub fn fqn_modulus(&self) -> Vec<Vec<u64>> {
        self.fqn
            .modulus()
            .iter()
            .map(|&c| self.fq().decode(c).iter().map(|&x| x as u64).collect())
            .collect()
    }

    /// Two towers are interchangeable iff they share `(p, e, n)`; moduli are
    /// canonical so they agree automatically.
    pub fn same_tower(&self, other: &FieldTower) -> bool {
        self.p == other.p && self.e == other.e && self.n == other.n
    }

    // -- elements ----------------------------------------------------------

    /// Nested coefficient form of an `F_{q^n}` element: `n` tuples of `e`
    /// residues, degree-ascending at both levels.
    pub fn element_to_coeffs(&self, x: u32) -> Vec<Vec<u64>> {
        self.fqn
            .decode(x)
            .iter()
            .map(|&c| self.fq().decode(c).iter().map(|&d| d as u64).collect())
            .collect()
    }

    /// Inverse of [`element_to_coeffs`](Self::element_to_coeffs).
    pub fn element_from_coeffs(&self, coeffs: &[Vec<u64>]) -> Result<u32, FieldError> {
        if coeffs.len() != self.n {
            return Err(FieldError::BadElement);
        }
        let mut digits = Vec::with_capacity(self.n);
        for tuple in coeffs {
            if tuple.len() != self.e || tuple.iter().any(|&c| c >= self.p) {
                return Err(FieldError::BadElement);
            }
            let residues: Vec<u32> = tuple.iter().map(|&c| c as u32).collect();
            digits.push(self.fq().encode(&residues));
        }
        Ok(self.fqn.encode(&digits))
    }

    /// `x^{q^j}`.
    pub fn frobenius(&self, x: u32, j: usize) -> u32 {
        self.fqn.frobenius(x, j)
    }

    /// `Tr_{q^n/q}(x) = x + x^q + … + x^{q^{n-1}}`, landing in the embedded `F_q`.
    pub fn trace(&self, x: u32) -> u32 {
        self.fqn.trace(x)
    }

    /// Embedding `F_q → F_{q^n}` (identity on indexes).
    pub fn embed_fq(&self, a: u32) -> u32 {
        self.fqn.embed(a)
    }

    /// Recognizes elements of the embedded `F_q`.
    pub fn as_embedded_fq(&self, x: u32) -> Option<u32> {
        self.fqn.as_base(x)
    }

    /// Inverse in `F_{q^n}` as a fallible operation.
    pub fn inv(&self, x: u32) -> Result<u32, FieldError> {
        self.fqn.inv(x).ok_or(FieldError::DivisionByZero)
    }

    /// The canonical primitive-looking generator of the power basis: the class
    /// of the variable, i.e. the element `s` with `1, s, …, s^{n-1}` an
    /// `F_q`-basis of `F_{q^n}`.
    pub fn s(&self) -> u32 {
        if self.n == 1 {
            // degenerate extension: the power basis is just {1}
            self.fqn.one()
        } else {
            self.fqn.encode(&{
                let mut d = alloc::vec![0u32; self.n];
                d[1] = 1;
                d
            })
        }
    }

    /// `s^j` for the power basis.
    pub fn s_pow(&self, j: usize) -> u32 {
        self.fqn.pow(self.s(), j as u64)
    }

    /// Validates that a user-supplied modulus matches the canonical one
    /// (used by file loaders to keep artifacts self-describing).
    pub fn moduli_match(&self, fq_mod: &[u64], fqn_mod: &[Vec<u64>]) -> bool {
        self.fq_modulus() == fq_mod && self.fqn_modulus() == fqn_mod
    }
}

/// Irreducibility check re-exported at tower level for file validation.
pub fn poly_is_irreducible_over_fq(tower: &FieldTower, coeffs: &[u32]) -> bool {
    is_irreducible(tower.fq(), coeffs)
}
