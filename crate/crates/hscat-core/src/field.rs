//! Generic exact finite-field arithmetic engine.
//!
//! Field elements are canonical `u32` indexes. For a prime field the index is
//! the residue; for an extension field of degree `d` over a base of order `B`
//! the element with coefficient tuple `(t_0, …, t_{d-1})` (degree-`i`
//! coefficient `t_i`) has index `Σ t_i · B^i`. Ascending index is the canonical
//! element order used everywhere for deterministic enumeration, and the
//! elements of the embedded base field are exactly the indexes `< B`.
//!
//! Extension fields precompute full operation tables while the field order is
//! at most [`TABLE_LIMIT`] and fall back to explicit polynomial arithmetic
//! modulo the defining polynomial above that.

use alloc::vec;
use alloc::vec::Vec;

/// Largest field order for which full `order × order` operation tables are built.
pub const TABLE_LIMIT: u64 = 1 << 10;

/// Exact arithmetic on a finite field whose elements are `u32` indexes.
pub trait Field {
    /// Number of elements.
    fn order(&self) -> u64;

    /// Additive identity (always index 0).
    fn zero(&self) -> u32 {
        0
    }

    /// Multiplicative identity (always index 1).
    fn one(&self) -> u32 {
        1
    }

    fn add(&self, a: u32, b: u32) -> u32;

    fn neg(&self, a: u32) -> u32;

    fn mul(&self, a: u32, b: u32) -> u32;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: u32) -> Option<u32>;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Whether addition coincides with XOR on indexes (characteristic 2).
    fn xor_additive(&self) -> bool {
        false
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// The prime field `F_p`; elements are residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime; this is validated by the caller (tower construction).
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2);
        PrimeField { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p) as u32
    }

    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            (self.p - a as u64) as u32
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p) as u32
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    fn xor_additive(&self) -> bool {
        self.p == 2
    }
}

/// Extension field `base[x]/(modulus)` of degree `deg` over `base`.
#[derive(Debug, Clone)]
pub struct ExtField<F: Field> {
    base: F,
    deg: usize,
    /// Monic defining polynomial, `deg + 1` base-field indexes, degree-ascending.
    modulus: Vec<u32>,
    order: u64,
    xor_add: bool,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    neg_table: Option<Vec<u32>>,
    inv_table: Option<Vec<u32>>,
}

impl<F: Field> ExtField<F> {
    /// Builds the extension; `modulus` must be monic irreducible of degree `deg`
    /// over `base` (validated by the caller) and the order must fit in `u32`.
    pub fn new(base: F, deg: usize, modulus: Vec<u32>) -> Self {
        debug_assert_eq!(modulus.len(), deg + 1);
        debug_assert_eq!(modulus[deg], base.one());
        let order = base.order().pow(deg as u32);
        debug_assert!(order <= u32::MAX as u64 + 1);
        let xor_add = base.xor_additive();
        let mut fld = ExtField {
            base,
            deg,
            modulus,
            order,
            xor_add,
            add_table: None,
            mul_table: None,
            neg_table: None,
            inv_table: None,
        };
        if order <= TABLE_LIMIT {
            let n = order as usize;
            let mut mul = vec![0u32; n * n];
            for a in 0..n as u32 {
                for b in a..n as u32 {
                    let v = fld.mul_raw(a, b);
                    mul[a as usize * n + b as usize] = v;
                    mul[b as usize * n + a as usize] = v;
                }
            }
            let mut inv_t = vec![0u32; n];
            for (a, slot) in inv_t.iter_mut().enumerate().skip(1) {
                *slot = fld.inv_raw(a as u32);
            }
            if !xor_add {
                let mut add = vec![0u32; n * n];
                let mut neg = vec![0u32; n];
                for a in 0..n as u32 {
                    neg[a as usize] = fld.neg_raw(a);
                    for b in a..n as u32 {
                        let v = fld.add_raw(a, b);
                        add[a as usize * n + b as usize] = v;
                        add[b as usize * n + a as usize] = v;
                    }
                }
                fld.add_table = Some(add);
                fld.neg_table = Some(neg);
            }
            fld.mul_table = Some(mul);
            fld.inv_table = Some(inv_t);
        }
        fld
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficient tuple of `a`, degree-ascending, length `deg`.
    pub fn decode(&self, a: u32) -> Vec<u32> {
        let b = self.base.order();
        let mut v = a as u64;
        let mut out = Vec::with_capacity(self.deg);
        for _ in 0..self.deg {
            out.push((v % b) as u32);
            v /= b;
        }
        out
    }

    /// Inverse of [`decode`](Self::decode); ignores trailing zeros beyond `deg`.
    pub fn encode(&self, digits: &[u32]) -> u32 {
        let b = self.base.order();
        let mut acc = 0u64;
        for &d in digits.iter().rev() {
            acc = acc * b + d as u64;
        }
        acc as u32
    }

    /// Embeds a base-field element (identity on indexes).
    pub fn embed(&self, a: u32) -> u32 {
        debug_assert!((a as u64) < self.base.order());
        a
    }

    /// The base-field element equal to `a`, if `a` lies in the embedded base.
    pub fn as_base(&self, a: u32) -> Option<u32> {
        if (a as u64) < self.base.order() {
            Some(a)
        } else {
            None
        }
    }

    /// `a^(B^j)` where `B` is the base-field order: the `j`-th power of the
    /// relative Frobenius. `j` is reduced modulo the extension degree.
    pub fn frobenius(&self, a: u32, j: usize) -> u32 {
        let j = j % self.deg;
        if j == 0 {
            return a;
        }
        let e = self.base.order().pow(j as u32);
        self.pow(a, e)
    }

    /// Trace onto the embedded base field: `Σ_{i<deg} a^(B^i)`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0u32;
        for i in 0..self.deg {
            acc = self.add(acc, self.frobenius(a, i));
        }
        debug_assert!((acc as u64) < self.base.order());
        acc
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let da = self.decode(a);
        let db = self.decode(b);
        let sum: Vec<u32> = da
            .iter()
            .zip(db.iter())
            .map(|(&x, &y)| self.base.add(x, y))
            .collect();
        self.encode(&sum)
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let da = self.decode(a);
        let neg: Vec<u32> = da.iter().map(|&x| self.base.neg(x)).collect();
        self.encode(&neg)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let da = self.decode(a);
        let db = self.decode(b);
        let mut prod = vec![0u32; 2 * self.deg - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = self.base.add(prod[i + j], self.base.mul(x, y));
                }
            }
        }
        // reduce modulo the monic defining polynomial
        for i in (self.deg..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (k, &m) in self.modulus.iter().enumerate().take(self.deg) {
                if m != 0 {
                    let t = self.base.mul(c, m);
                    prod[i - self.deg + k] = self.base.sub(prod[i - self.deg + k], t);
                }
            }
        }
        self.encode(&prod[..self.deg])
    }

    fn inv_raw(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        // a^(order-2); fine at desk scale
        let mut e = self.order - 2;
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }
}

impl<F: Field> Field for ExtField<F> {
    fn order(&self) -> u64 {
        self.order
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.xor_add {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[a as usize * self.order as usize + b as usize]
        } else {
            self.add_raw(a, b)
        }
    }

    fn neg(&self, a: u32) -> u32 {
        if self.xor_add {
            a
        } else if let Some(t) = &self.neg_table {
            t[a as usize]
        } else {
            self.neg_raw(a)
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.mul_table {
            t[a as usize * self.order as usize + b as usize]
        } else {
            self.mul_raw(a, b)
        }
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else if let Some(t) = &self.inv_table {
            Some(t[a as usize])
        } else {
            Some(self.inv_raw(a))
        }
    }

    fn xor_additive(&self) -> bool {
        self.xor_add
    }
}

// ---------------------------------------------------------------------------
// Polynomials over a generic field: just enough for irreducibility testing
// and deterministic modulus selection.
// ---------------------------------------------------------------------------

/// Remainder of `f` modulo a monic `g` (both degree-ascending coefficient slices).
pub fn poly_rem<F: Field>(field: &F, f: &[u32], g: &[u32]) -> Vec<u32> {
    let dg = poly_degree(g).expect("divisor must be nonzero");
    debug_assert_eq!(g[dg], field.one(), "divisor must be monic");
    let mut rem: Vec<u32> = f.to_vec();
    while let Some(dr) = poly_degree(&rem) {
        if dr < dg {
            break;
        }
        let c = rem[dr];
        rem[dr] = 0;
        for (k, &m) in g.iter().enumerate().take(dg) {
            if m != 0 {
                let t = field.mul(c, m);
                rem[dr - dg + k] = field.sub(rem[dr - dg + k], t);
            }
        }
    }
    rem.truncate(dg);
    rem
}

/// Degree of the polynomial, `None` for zero.
pub fn poly_degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

/// Exhaustive irreducibility test for a monic polynomial: searches for a monic
/// divisor of degree `1..=deg/2`.
pub fn is_irreducible<F: Field>(field: &F, f: &[u32]) -> bool {
    let d = match poly_degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let b = field.order();
    for dd in 1..=d / 2 {
        // all monic divisors of degree dd: odometer over dd lower coefficients
        let mut cand = vec![0u32; dd + 1];
        cand[dd] = field.one();
        loop {
            if poly_degree(&poly_rem(field, f, &cand)).is_none() {
                return false;
            }
            // next coefficient tuple in canonical order
            let mut i = 0;
            loop {
                if i == dd {
                    break;
                }
                let next = cand[i] as u64 + 1;
                if next < b {
                    cand[i] = next as u32;
                    break;
                }
                cand[i] = 0;
                i += 1;
            }
            if i == dd {
                break;
            }
        }
    }
    true
}

/// The canonically smallest monic irreducible polynomial of degree `deg`:
/// lower coefficient tuples are tried in ascending canonical element order,
/// the degree-`(deg-1)` coefficient most significant.
pub fn smallest_irreducible<F: Field>(field: &F, deg: usize) -> Vec<u32> {
    let b = field.order();
    let mut coeffs = vec![0u32; deg + 1];
    coeffs[deg] = field.one();
    loop {
        if is_irreducible(field, &coeffs) {
            return coeffs;
        }
        let mut i = 0;
        loop {
            assert!(i < deg, "no irreducible polynomial found (impossible)");
            let next = coeffs[i] as u64 + 1;
            if next < b {
                coeffs[i] = next as u32;
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}
