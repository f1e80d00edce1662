//! Linear sets `L_U` of `PG(r-1, q^n)`: point enumeration with weights, the
//! rank-uniqueness and defining-subspace searches for subspaces scattered with
//! respect to lines, and the two-dimensional base cases those proofs lean on.
//!
//! The searches are proofs-by-oracle at desk scale: candidate subspaces `W`
//! with `L_W = L_U` are generated as spans of vectors lying on the fibers of
//! `L_U` — sound because `L_W = L_U` forces every vector of `W` onto a fiber —
//! and explored by a DFS over spans that prunes as soon as a span's linear set
//! escapes `L_U` (supersets only grow the linear set).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Field;
use crate::gf::FieldTower;
use crate::linalg::{self, Level, Matrix};
use crate::subspace::{FqSubspace, SubspaceEnum, SubspaceError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinsetError {
    EnumerationTooLarge { needed: BigUint, cap: u64 },
    CapExceeded { visited: u64, cap: u64 },
    /// The search preconditions demand a subspace scattered w.r.t. lines.
    NotTwoScattered,
    Subspace(SubspaceError),
}

impl fmt::Display for LinsetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinsetError::EnumerationTooLarge { needed, cap } => {
                write!(f, "enumeration of {} vectors exceeds cap {}", needed, cap)
            }
            LinsetError::CapExceeded { visited, cap } => {
                write!(f, "search visited {} spans, cap {}", visited, cap)
            }
            LinsetError::NotTwoScattered => {
                write!(f, "subspace is not scattered with respect to lines")
            }
            LinsetError::Subspace(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for LinsetError {}

impl From<SubspaceError> for LinsetError {
    fn from(e: SubspaceError) -> Self {
        LinsetError::Subspace(e)
    }
}

/// The linear set of a subspace: canonical projective points with weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSet {
    pub r: usize,
    /// `rank = dim_{F_q} U`.
    pub rank: usize,
    /// Canonical representatives (first nonzero coordinate 1), sorted.
    pub points: Vec<Vec<u32>>,
    /// `weights[i] = dim_{F_q}(U ∩ ⟨points[i]⟩_{F_{q^n}})`.
    pub weights: Vec<usize>,
}

impl LinearSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_set(&self) -> BTreeSet<Vec<u32>> {
        self.points.iter().cloned().collect()
    }
}

/// Normalizes a nonzero vector to its canonical projective representative.
fn normalize_point(tower: &FieldTower, v: &[u32]) -> Vec<u32> {
    let f = tower.fqn();
    let lead = v.iter().position(|&x| x != 0).expect("nonzero vector");
    let inv = f.inv(v[lead]).expect("nonzero entry");
    v.iter().map(|&x| f.mul(inv, x)).collect()
}

/// Computes `L_U` exactly by walking the `q^k` vectors of `U` and counting the
/// fiber sizes; the weight `w` of a point satisfies `|fiber ∩ U∖0| = q^w - 1`.
pub fn linear_set(u: &FqSubspace, cap: u64) -> Result<LinearSet, LinsetError> {
    let tower = u.tower().clone();
    let k = u.dim() as u32;
    let needed = BigUint::from(tower.q()).pow(k);
    if needed > BigUint::from(cap) {
        return Err(LinsetError::EnumerationTooLarge { needed, cap });
    }
    let mut fibers: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for v in u.iter_vectors() {
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        *fibers.entry(normalize_point(&tower, &v)).or_insert(0) += 1;
    }
    let q = tower.q();
    let mut points = Vec::with_capacity(fibers.len());
    let mut weights = Vec::with_capacity(fibers.len());
    let mut total: u64 = 0;
    for (p, count) in fibers {
        // count = q^w - 1 exactly
        let mut w = 0usize;
        let mut pw = 1u64;
        while pw - 1 < count {
            pw *= q;
            w += 1;
        }
        assert_eq!(pw - 1, count, "fiber size must be q^w - 1");
        total += count;
        points.push(p);
        weights.push(w);
    }
    // fiber partition of U ∖ {0}
    assert_eq!(total + 1, q.pow(k), "weights partition the nonzero vectors");
    Ok(LinearSet { r: u.ambient_r(), rank: u.dim(), points, weights })
}

/// All subspaces `W` with `L_W = L_U`, found by the exhaustive fiber-span DFS.
/// Precondition: `U` is scattered with respect to lines (2-scattered).
pub fn defining_subspaces(u: &FqSubspace, cap: u64) -> Result<Vec<FqSubspace>, LinsetError> {
    if !u.is_h_scattered(2, cap)?.is_scattered() {
        return Err(LinsetError::NotTwoScattered);
    }
    let target = linear_set(u, cap)?;
    fiber_span_search(u, &target, cap)
}

/// Exhaustive fiber-span search for `W` with `L_W = L_U`; shared by the
/// rank-uniqueness and defining-subspace oracles.
fn fiber_span_search(
    u: &FqSubspace,
    target: &LinearSet,
    cap: u64,
) -> Result<Vec<FqSubspace>, LinsetError> {
    let tower = u.tower().clone();
    let fqn = tower.fqn();
    let r = u.ambient_r();
    let target_points = target.point_set();

    // pool: every nonzero vector of every fiber, deterministic order
    let mut pool: Vec<Vec<u32>> = Vec::new();
    for p in &target.points {
        for lam in 1..tower.qn() as u32 {
            pool.push(p.iter().map(|&x| fqn.mul(lam, x)).collect());
        }
    }

    // the linear set of a span, None when it escapes the target
    let span_points = |m: &Matrix| -> Option<BTreeSet<Vec<u32>>> {
        let sub = FqSubspace::from_flat_matrix(tower.clone(), r, m).expect("valid flat rows");
        let mut pts = BTreeSet::new();
        for v in sub.iter_vectors() {
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let p = normalize_point(&tower, &v);
            if !target_points.contains(&p) {
                return None;
            }
            pts.insert(p);
        }
        Some(pts)
    };

    let zero = Matrix::zeros(Level::Fq, 0, r * tower.n());
    let mut visited: BTreeSet<Matrix> = BTreeSet::new();
    let mut stack: Vec<Matrix> = vec![zero];
    let mut found: BTreeSet<Matrix> = BTreeSet::new();
    while let Some(span) = stack.pop() {
        if visited.contains(&span) {
            continue;
        }
        visited.insert(span.clone());
        if visited.len() as u64 > cap {
            return Err(LinsetError::CapExceeded { visited: visited.len() as u64, cap });
        }
        let Some(pts) = span_points(&span) else { continue };
        if pts == target_points {
            found.insert(span.clone());
        }
        for v in &pool {
            let flat = linalg::flatten(&tower, v);
            let vm = Matrix::from_rows(Level::Fq, &[flat]);
            if linalg::span_contains(tower.fq(), &span, &vm).expect("same ambient") {
                continue;
            }
            let next = linalg::span_sum(tower.fq(), &span, &vm).expect("same ambient");
            if !visited.contains(&next) {
                stack.push(next);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|m| FqSubspace::from_flat_matrix(tower.clone(), r, &m).expect("canonical rows"))
        .collect())
}

/// Rank uniqueness for linear sets scattered w.r.t. lines: every `W` with
/// `L_W = L_U` has `dim W = dim U`.
pub fn check_rank_uniqueness(u: &FqSubspace, cap: u64) -> Result<bool, LinsetError> {
    let all = defining_subspaces(u, cap)?;
    Ok(all.iter().all(|w| w.dim() == u.dim()))
}

/// Report of the base facts about subspaces of a two-dimensional space:
/// a linear set of exactly `q + 1` points forces dimension 2 (part 1), and two
/// subspaces sharing such a linear set and a nonzero vector coincide (part 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoDimBaseReport {
    /// Subspaces scanned exhaustively (all dimensions).
    pub exhaustive_scanned: u64,
    /// How many had a linear set of exactly `q + 1` points.
    pub size_q_plus_1: u64,
    /// Part 1 violations: `|L_U| = q+1` but `dim U ≠ 2`.
    pub part1_violations: u64,
    /// Pairs with equal linear sets of size `q+1` sharing a nonzero vector.
    pub part2_pairs: u64,
    /// Part 2 violations: such a pair with `U ≠ W`.
    pub part2_violations: u64,
    /// Seeded random 2-dimensional samples asserted to have `|L| ∈ {1, q+1}`.
    pub samples_checked: u64,
}

impl TwoDimBaseReport {
    pub fn passed(&self) -> bool {
        self.part1_violations == 0 && self.part2_violations == 0
    }
}

/// Exhaustively scans all `F_q`-subspaces of `F_{q^n}^2` (as flattened
/// subspaces of `F_q^{2n}`) and checks both parts of the two-dimensional
/// proposition; additionally samples `samples` random 2-dimensional subspaces.
pub fn two_dim_base_checks(
    tower: Arc<FieldTower>,
    samples: u64,
    seed: u64,
    cap: u64,
) -> Result<TwoDimBaseReport, LinsetError> {
    let r = 2usize;
    let cols = r * tower.n();
    let q = tower.q();

    // total subspace count of all dimensions
    let mut total = BigUint::from(0u32);
    for d in 1..=cols {
        total += crate::qcombin::gaussian_binomial_int(cols, d, q);
    }
    if total > BigUint::from(cap) {
        return Err(LinsetError::EnumerationTooLarge { needed: total, cap });
    }

    let mut report = TwoDimBaseReport {
        exhaustive_scanned: 0,
        size_q_plus_1: 0,
        part1_violations: 0,
        part2_pairs: 0,
        part2_violations: 0,
        samples_checked: 0,
    };

    // group the q+1-point subspaces by their point set for part 2
    let mut by_pointset: BTreeMap<Vec<Vec<u32>>, Vec<FqSubspace>> = BTreeMap::new();
    for d in 1..=cols {
        let mut en = SubspaceEnum::new(q, cols, d);
        let mut m = Matrix::zeros(Level::Fq, d, cols);
        while en.next_into(&mut m).is_some() {
            report.exhaustive_scanned += 1;
            let u = FqSubspace::from_flat_matrix(tower.clone(), r, &m).expect("valid rows");
            let l = linear_set(&u, cap)?;
            if l.len() as u64 == q + 1 {
                report.size_q_plus_1 += 1;
                if u.dim() != 2 {
                    report.part1_violations += 1;
                }
                by_pointset.entry(l.points.clone()).or_default().push(u);
            }
        }
    }
    for group in by_pointset.values() {
        for (i, a) in group.iter().enumerate() {
            for b in group.iter().skip(i + 1) {
                let meet = linalg::span_intersect(tower.fq(), a.canonical(), b.canonical())
                    .expect("same ambient");
                if meet.rows() > 0 {
                    report.part2_pairs += 1;
                    if a != b {
                        report.part2_violations += 1;
                    }
                }
            }
        }
    }

    // random dim-2 samples: q+1 points when the two generators are
    // F_{q^n}-independent, a single point otherwise
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qn = tower.qn();
    while report.samples_checked < samples {
        let v1: Vec<u32> = (0..r).map(|_| (rng.next_u64() % qn) as u32).collect();
        let v2: Vec<u32> = (0..r).map(|_| (rng.next_u64() % qn) as u32).collect();
        if v1.iter().all(|&x| x == 0) || v2.iter().all(|&x| x == 0) {
            continue;
        }
        let u = FqSubspace::from_fqn_vectors(tower.clone(), r, &[v1.clone(), v2.clone()])?;
        if u.dim() != 2 {
            continue;
        }
        let l = linear_set(&u, cap)?;
        let fqn_rank = u.fqn_span_dim();
        let expected = if fqn_rank == 2 { q + 1 } else { 1 };
        assert_eq!(l.len() as u64, expected);
        report.samples_checked += 1;
    }
    Ok(report)
}
