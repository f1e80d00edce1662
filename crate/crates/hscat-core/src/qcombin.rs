//! Exact q-combinatorics: Gaussian binomials, q-Pochhammer symbols, elementary
//! symmetric evaluations, Carlitz inversion, the q-binomial theorem instances
//! and the hyperplane-spectrum identity pipeline culminating in `A = 0`.
//!
//! Every identity is evaluated exactly over arbitrary-precision rationals at
//! integer values of `q`; at fixed parameters each identity is a fixed rational
//! function, so exact multi-point agreement over the test grid is the
//! verification this module provides. Negative powers of `q` (they enter
//! through `(q^{-n}; q)_s`) make rational scalars unavoidable.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::subspace::HyperplaneSpectrum;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QcombinError {
    /// The spectrum's subspace dimension is not `rn/(h+1)` exactly.
    NotMaximum { k: usize, r: usize, n: usize, h: usize },
    BadH { h: usize, r: usize },
}

impl fmt::Display for QcombinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QcombinError::NotMaximum { k, r, n, h } => write!(
                f,
                "spectrum dimension {} is not rn/(h+1) = {}·{}/{}",
                k,
                r,
                n,
                h + 1
            ),
            QcombinError::BadH { h, r } => {
                write!(f, "h = {} outside [1, r-1] for r = {}", h, r)
            }
        }
    }
}

impl core::error::Error for QcombinError {}

/// `q^e` for possibly negative `e`.
pub fn qpow(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        let num = q.numer().pow(e as u32);
        let den = q.denom().pow(e as u32);
        BigRational::new(num, den)
    } else {
        qpow(q, -e).recip()
    }
}

/// Integer-valued Gaussian binomial `[n choose k]_q` for an integer `q ≥ 2`,
/// the number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial_int(n: usize, k: usize, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::one();
    for i in 1..=k {
        let num = q.pow((n - k + i) as u32) - 1u32;
        let den = q.pow(i as u32) - 1u32;
        acc = acc * num / den; // partial products are themselves q-binomials
    }
    acc
}

/// The Gaussian binomial by its three-branch formula, over exact rationals.
/// At `q = 1` the limit value (the ordinary binomial) is returned.
pub fn qbin(n: usize, k: usize, q: &BigRational) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    if k > n {
        return BigRational::zero();
    }
    if q.is_one() {
        let mut acc = BigRational::one();
        for i in 1..=k {
            acc = acc * BigRational::from_integer(BigInt::from(n - k + i))
                / BigRational::from_integer(BigInt::from(i));
        }
        return acc;
    }
    let mut num = BigRational::one();
    let mut den = BigRational::one();
    for i in 0..k {
        num *= BigRational::one() - qpow(q, (n - i) as i64);
        den *= BigRational::one() - qpow(q, (k - i) as i64);
    }
    num / den
}

/// q-Pochhammer symbol `(a; q)_k = (1-a)(1-aq)…(1-aq^{k-1})`.
pub fn qpochhammer(a: &BigRational, q: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut aq = a.clone();
    for _ in 0..k {
        acc *= BigRational::one() - &aq;
        aq *= q;
    }
    acc
}

/// The `l`-th elementary symmetric polynomial evaluated at `1, q, …, q^k`,
/// computed by the direct product DP (not the closed form, which is what the
/// closed-form identity check compares against).
pub fn sigma_kl(k: usize, l: usize, q: &BigRational) -> BigRational {
    if l > k + 1 {
        return BigRational::zero();
    }
    let mut e = alloc::vec![BigRational::zero(); l + 1];
    e[0] = BigRational::one();
    for i in 0..=k {
        let v = qpow(q, i as i64);
        for j in (1..=l).rev() {
            let t = &e[j - 1] * &v;
            e[j] += t;
        }
    }
    e[l].clone()
}

/// Forward Carlitz transform: `b_k = Σ_{j=0}^k (-1)^j q^{j(j+1)/2 - jk} [k choose j]_q a_j`.
pub fn carlitz_pair(a: &[BigRational], q: &BigRational) -> Vec<BigRational> {
    (0..a.len())
        .map(|k| {
            let mut acc = BigRational::zero();
            for (j, aj) in a.iter().enumerate().take(k + 1) {
                let e = (j * (j + 1) / 2) as i64 - (j * k) as i64;
                let term = qpow(q, e) * qbin(k, j, q) * aj;
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect()
}

/// Inverse Carlitz transform: `a_k = Σ_{j=0}^k (-1)^j q^{j(j-1)/2} [k choose j]_q b_j`.
pub fn carlitz_inverse(b: &[BigRational], q: &BigRational) -> Vec<BigRational> {
    (0..b.len())
        .map(|k| {
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate().take(k + 1) {
                let e = (j * j.saturating_sub(1) / 2) as i64;
                let term = qpow(q, e) * qbin(k, j, q) * bj;
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Identity suite.
// ---------------------------------------------------------------------------

/// One identity family in the verification report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub instances: u64,
    pub failures: Vec<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QIdentityReport {
    pub n_max: usize,
    pub q_values: Vec<u64>,
    pub checks: Vec<IdentityCheck>,
}

impl QIdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Evaluates the product/symmetry/composition identities exactly at every
/// `n ≤ n_max` and `q` in `q_list` (plus fixed rational samples where an
/// identity has free parameters). The report lists any violation; the expected
/// outcome is none.
pub fn verify_qbinomial_theorems(n_max: usize, q_list: &[u64]) -> QIdentityReport {
    let mut checks = Vec::new();

    // [n k][k j] = [n j][n-j k-j]
    let mut c = IdentityCheck { name: "subset-of-subset", instances: 0, failures: Vec::new() };
    for &qi in q_list {
        let q = BigRational::from_integer(qi.into());
        for n in 0..=n_max {
            for k in 0..=n {
                for j in 0..=k {
                    c.instances += 1;
                    let lhs = qbin(n, k, &q) * qbin(k, j, &q);
                    let rhs = qbin(n, j, &q) * qbin(n - j, k - j, &q);
                    if lhs != rhs {
                        c.failures.push(alloc::format!("q={} n={} k={} j={}", qi, n, k, j));
                    }
                }
            }
        }
    }
    checks.push(c);

    // [n k] = [n n-k]
    let mut c = IdentityCheck { name: "symmetry", instances: 0, failures: Vec::new() };
    for &qi in q_list {
        let q = BigRational::from_integer(qi.into());
        for n in 0..=n_max {
            for k in 0..=n {
                c.instances += 1;
                if qbin(n, k, &q) != qbin(n, n - k, &q) {
                    c.failures.push(alloc::format!("q={} n={} k={}", qi, n, k));
                }
            }
        }
    }
    checks.push(c);

    // ∏_{j<n}(1+q^j t) = Σ_j q^{j(j-1)/2} [n j] t^j at sampled t
    let mut c = IdentityCheck { name: "identity", instances: 0, failures: Vec::new() };
    for &qi in q_list {
        let q = BigRational::from_integer(qi.into());
        let samples = [
            rat(1, 1),
            rat(-1, 1),
            rat(2, 1),
            rat(-1, 2),
            rat(3, 7),
            q.clone(),
            -qpow(&q, -1),
        ];
        for n in 0..=n_max {
            for t in &samples {
                c.instances += 1;
                let mut lhs = BigRational::one();
                for j in 0..n {
                    lhs *= BigRational::one() + qpow(&q, j as i64) * t;
                }
                let mut rhs = BigRational::zero();
                for j in 0..=n {
                    rhs += qpow(&q, (j * (j.max(1) - 1) / 2) as i64)
                        * qbin(n, j, &q)
                        * qpow_rat(t, j);
                }
                if lhs != rhs {
                    c.failures.push(alloc::format!("q={} n={} t={}", qi, n, t));
                }
            }
        }
    }
    checks.push(c);

    // q-binomial theorem, both expansions, at sampled (a, b)
    for (name, use_b_weight) in [("q-binomial-theorem-b", true), ("q-binomial-theorem-a", false)] {
        let mut c = IdentityCheck { name, instances: 0, failures: Vec::new() };
        for &qi in q_list {
            let q = BigRational::from_integer(qi.into());
            let pairs = [
                (rat(1, 2), rat(3, 1)),
                (rat(-2, 1), rat(1, 5)),
                (qpow(&q, -3), qpow(&q, 2)),
                (BigRational::zero(), rat(7, 2)),
            ];
            for n in 0..=n_max {
                for (a, b) in &pairs {
                    c.instances += 1;
                    let lhs = qpochhammer(&(a * b), &q, n);
                    let mut rhs = BigRational::zero();
                    for k in 0..=n {
                        let weight = if use_b_weight {
                            qpow_rat(b, k)
                        } else {
                            qpow_rat(a, n - k)
                        };
                        rhs += weight
                            * qbin(n, k, &q)
                            * qpochhammer(a, &q, k)
                            * qpochhammer(b, &q, n - k);
                    }
                    if lhs != rhs {
                        c.failures.push(alloc::format!("q={} n={} a={} b={}", qi, n, a, b));
                    }
                }
            }
        }
        checks.push(c);
    }

    // composition corollaries: the a = q^{-nr/s}, b = q^{nr/s-n} substitutions
    for (name, comp2) in [("pochhammer-composition-1", false), ("pochhammer-composition-2", true)] {
        let mut c = IdentityCheck { name, instances: 0, failures: Vec::new() };
        for &qi in q_list {
            let q = BigRational::from_integer(qi.into());
            for n in 1..=n_max {
                for r in 2..=4usize {
                    for s in 1..=(r * n).min(8) {
                        if (r * n) % s != 0 {
                            continue;
                        }
                        c.instances += 1;
                        let nrs = ((n * r) / s) as i64;
                        let lhs = qpochhammer(&qpow(&q, -(n as i64)), &q, s);
                        let mut sum = BigRational::zero();
                        for j in 0..=s {
                            let weight = if comp2 {
                                qpow(&q, j as i64 * nrs)
                            } else {
                                qpow(&q, j as i64 * (nrs - n as i64))
                            };
                            sum += weight
                                * qbin(s, j, &q)
                                * qpochhammer(&qpow(&q, -nrs), &q, j)
                                * qpochhammer(&qpow(&q, nrs - n as i64), &q, s - j);
                        }
                        let rhs = if comp2 {
                            qpow(&q, -((n * r) as i64)) * sum
                        } else {
                            sum
                        };
                        if lhs != rhs {
                            c.failures.push(alloc::format!("q={} n={} r={} s={}", qi, n, r, s));
                        }
                    }
                }
            }
        }
        checks.push(c);
    }

    // closed form σ_{k,l} = q^{l(l-1)/2} [k+1 l]
    let mut c = IdentityCheck { name: "elementary-symmetric-closed-form", instances: 0, failures: Vec::new() };
    for &qi in q_list {
        let q = BigRational::from_integer(qi.into());
        for k in 0..=n_max.min(8) {
            for l in 0..=k + 1 {
                c.instances += 1;
                let lhs = sigma_kl(k, l, &q);
                let rhs = qpow(&q, (l * (l.max(1) - 1) / 2) as i64) * qbin(k + 1, l, &q);
                if lhs != rhs {
                    c.failures.push(alloc::format!("q={} k={} l={}", qi, k, l));
                }
            }
        }
    }
    checks.push(c);

    QIdentityReport { n_max, q_values: q_list.to_vec(), checks }
}

fn qpow_rat(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

// ---------------------------------------------------------------------------
// Spectrum identities.
// ---------------------------------------------------------------------------

/// Every intermediate of the spectrum identity pipeline, exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub r: usize,
    pub n: usize,
    pub q: u64,
    /// `s = h + 1`.
    pub s: usize,
    pub k: usize,
    /// `Σ_i h_i (q^n - 1) = q^{rn} - 1`.
    pub st_ok: bool,
    /// `h_i = 0` for `i < rn/s - n`.
    pub vanishing_ok: bool,
    /// `β_k` from the spectrum, `k = 0..=s`.
    pub beta_spectrum: Vec<BigInt>,
    /// Closed form `(q^{(r-k)n}-1)·∏_{j<k}(q^{rn/s}-q^j)`, `k = 0..=s-1`.
    pub beta_closed: Vec<BigInt>,
    pub beta_ok: bool,
    /// `α_k = Σ_i h_i (q^n-1) q^{ki}`, `k = 0..=s`.
    pub alpha_direct: Vec<BigInt>,
    /// `α_k = Σ_{j≤k} [k j]_q β_j`.
    pub alpha_inverted: Vec<BigInt>,
    pub alpha_ok: bool,
    /// The Carlitz pair `(α_k, (-1)^k q^{-k(k-1)/2} β_k)` satisfies the inversion.
    pub carlitz_ok: bool,
    /// `A = Σ_i h_i (q^n-1)(q^i - q^{n(r-s)/s})…(q^i - q^{n(r-s)/s+s-1})`.
    pub a_direct: BigInt,
    /// `A = Σ_j (-1)^{s-j} α_j q^{(s-j)n(r-s)/s + (s-j)(s-j-1)/2} [s s-j]_q`.
    pub a_inverted: BigInt,
    pub a_zero: bool,
    /// Triple sums of the final propositions and their shared closed form.
    pub a_s: BigRational,
    pub b_s: BigRational,
    pub closed_form: BigRational,
    pub as_bs_ok: bool,
}

impl SpectrumReport {
    pub fn all_passed(&self) -> bool {
        self.st_ok
            && self.vanishing_ok
            && self.beta_ok
            && self.alpha_ok
            && self.carlitz_ok
            && self.a_zero
            && self.as_bs_ok
    }
}

/// Runs the full identity pipeline on a computed spectrum of a maximum
/// `h`-scattered subspace (`k = rn/(h+1)` is a hard precondition).
pub fn spectrum_identities(
    spec: &HyperplaneSpectrum,
    h: usize,
) -> Result<SpectrumReport, QcombinError> {
    let (r, n) = (spec.r, spec.n);
    if h < 1 || h >= r {
        return Err(QcombinError::BadH { h, r });
    }
    let s = h + 1;
    let rn = r * n;
    if rn % s != 0 || spec.k != rn / s {
        return Err(QcombinError::NotMaximum { k: spec.k, r, n, h });
    }
    let k_dim = rn / s;
    let q = BigInt::from(spec.q);
    let qn = q.pow(n as u32);
    let qn_minus_1: BigInt = &qn - 1;

    let counts: Vec<(usize, BigInt)> = spec
        .counts
        .iter()
        .map(|(&i, c)| (i, BigInt::from(c.clone())))
        .collect();

    // eq st
    let total: BigInt = counts.iter().map(|(_, c)| c).sum();
    let st_ok = &total * &qn_minus_1 == q.pow(rn as u32) - 1;

    // vanishing below rn/s - n
    let vanish_below = k_dim as i64 - n as i64;
    let vanishing_ok = counts
        .iter()
        .all(|(i, c)| c.is_zero() || (*i as i64) >= vanish_below);

    // β_k from the spectrum, k = 0..=s
    let beta_spectrum: Vec<BigInt> = (0..=s)
        .map(|kk| {
            counts
                .iter()
                .map(|(i, c)| {
                    let mut prod = qn_minus_1.clone();
                    for j in 0..kk {
                        prod *= q.pow(*i as u32) - q.pow(j as u32);
                    }
                    c * prod
                })
                .sum()
        })
        .collect();

    // closed form for k = 0..=s-1
    let beta_closed: Vec<BigInt> = (0..s)
        .map(|kk| {
            let mut prod = q.pow(((r - kk) * n) as u32) - 1;
            for j in 0..kk {
                prod *= q.pow(k_dim as u32) - q.pow(j as u32);
            }
            prod
        })
        .collect();
    let beta_ok = beta_spectrum[..s] == beta_closed[..];

    // α_k both ways
    let alpha_direct: Vec<BigInt> = (0..=s)
        .map(|kk| {
            counts
                .iter()
                .map(|(i, c)| c * &qn_minus_1 * q.pow((kk * i) as u32))
                .sum()
        })
        .collect();
    let qr = BigRational::from_integer(q.clone());
    let alpha_inverted: Vec<BigInt> = (0..=s)
        .map(|kk| {
            let mut acc = BigRational::zero();
            for (j, beta) in beta_spectrum.iter().enumerate().take(kk + 1) {
                acc += qbin(kk, j, &qr) * BigRational::from_integer(beta.clone());
            }
            debug_assert!(acc.is_integer());
            acc.to_integer()
        })
        .collect();
    let alpha_ok = alpha_direct == alpha_inverted;

    // Carlitz inversion on (α_k, (-1)^k q^{-k(k-1)/2} β_k)
    let alpha_rat: Vec<BigRational> = alpha_direct
        .iter()
        .map(|a| BigRational::from_integer(a.clone()))
        .collect();
    let b_seq: Vec<BigRational> = beta_spectrum
        .iter()
        .enumerate()
        .map(|(kk, beta)| {
            let sign = if kk % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            sign * qpow(&qr, -((kk * (kk.max(1) - 1) / 2) as i64))
                * BigRational::from_integer(beta.clone())
        })
        .collect();
    let carlitz_ok =
        carlitz_pair(&alpha_rat, &qr) == b_seq && carlitz_inverse(&b_seq, &qr) == alpha_rat;

    // A directly from the definition
    let base_exp = (n * (r - s)) / s; // = k_dim - n ≥ 0
    let a_direct: BigInt = counts
        .iter()
        .map(|(i, c)| {
            let mut prod = qn_minus_1.clone();
            for m in 0..s {
                prod *= q.pow(*i as u32) - q.pow((base_exp + m) as u32);
            }
            c * prod
        })
        .sum();

    // A through the α expansion
    let mut a_inv = BigRational::zero();
    for (j, alpha) in alpha_direct.iter().enumerate() {
        let sj = s - j;
        let e = (sj * base_exp + sj * (sj.max(1) - 1) / 2) as i64;
        let term = qpow(&qr, e)
            * qbin(s, sj, &qr)
            * BigRational::from_integer(alpha.clone());
        if sj.is_multiple_of(2) {
            a_inv += term;
        } else {
            a_inv -= term;
        }
    }
    debug_assert!(a_inv.is_integer());
    let a_inverted = a_inv.to_integer();
    let a_zero = a_direct.is_zero() && a_inverted.is_zero() && a_direct == a_inverted;

    // triple sums a_s, b_s and the closed form q^{nr}(-1)^s (q^{-n}; q)_s
    let nrs = k_dim as i64;
    let mut a_s = BigRational::zero();
    let mut b_s = BigRational::zero();
    for j in 0..=s {
        for kk in 0..=s {
            for t in 0..=s {
                let sk = s - kk;
                let e = nrs * j as i64 - nrs * t as i64
                    + (sk * base_exp) as i64
                    + (sk * (sk.max(1) - 1) / 2) as i64
                    + (t * (t.max(1) - 1) / 2) as i64;
                let mut term = qpow(&qr, e)
                    * qbin(s, kk, &qr)
                    * qbin(kk, j, &qr)
                    * qbin(j, t, &qr);
                if (t + kk) % 2 == 1 {
                    term = -term;
                }
                a_s += qpow(&qr, (n * r) as i64 - (n * j) as i64) * &term;
                b_s += term;
            }
        }
    }
    let sign = if s.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
    let closed_form =
        qpow(&qr, (n * r) as i64) * sign * qpochhammer(&qpow(&qr, -(n as i64)), &qr, s);
    let as_bs_ok = a_s == closed_form && b_s == closed_form;

    Ok(SpectrumReport {
        r,
        n,
        q: spec.q,
        s,
        k: k_dim,
        st_ok,
        vanishing_ok,
        beta_spectrum,
        beta_closed,
        beta_ok,
        alpha_direct,
        alpha_inverted,
        alpha_ok,
        carlitz_ok,
        a_direct,
        a_inverted,
        a_zero,
        a_s,
        b_s,
        closed_form,
        as_bs_ok,
    })
}
