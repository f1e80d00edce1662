//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Every check is exact (tolerance zero). Criteria that exercise the CLI spawn
//! the real binary; library-level oracles run in-process.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use hscat_core::gf::FieldTower;
use hscat_core::linset;
use hscat_core::qcombin::{self, spectrum_identities};
use hscat_core::subspace::{
    self, check_intersection_window, dimension_bound, gabidulin_subspace, subgeometry_subspace,
    FqSubspace, ScatterVerdict,
};
use hscat_core::dual::{self, FormSpec};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 1 << 22;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hscat")
}

struct Run {
    code: i32,
    stdout: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(bin())
        .args(args)
        .output()
        .expect("binary spawns");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
    }
}

fn run_json(args: &[&str]) -> (i32, serde_json::Value) {
    let r = run(args);
    let v = serde_json::from_str(&r.stdout)
        .unwrap_or_else(|e| panic!("bad JSON from {:?}: {e}\n{}", args, r.stdout));
    (r.code, v)
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hscat-acceptance-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn report(criterion: &str, pass: bool) {
    println!(
        "ACCEPTANCE {}: {}",
        criterion,
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion failed: {criterion}");
}

fn tower(p: u64, e: usize, n: usize) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, e, n).unwrap())
}

/// The (q, r, n) grid of criterion 1.
fn criterion1_grid() -> Vec<(u64, usize, usize)> {
    let mut grid = Vec::new();
    for q in [2u64, 3] {
        for r in [2usize, 3] {
            for n in r..=5 {
                grid.push((q, r, n));
            }
        }
    }
    grid
}

#[test]
fn criterion_01_gabidulin_grid() {
    let dir = tmpdir("c1");
    let mut ok = true;
    for (q, r, n) in criterion1_grid() {
        let file = dir.join(format!("gab-{q}-{r}-{n}.json"));
        let c = run(&[
            "construct", "gabidulin",
            "--p", &q.to_string(), "--e", "1", "--n", &n.to_string(),
            "--r", &r.to_string(), "--out", file.to_str().unwrap(),
        ]);
        ok &= c.code == 0;
        let (code, v) = run_json(&[
            "check", "--file", file.to_str().unwrap(), "--h", &(r - 1).to_string(),
        ]);
        ok &= code == 0;
        ok &= v["scattered"] == serde_json::json!(true);
        ok &= v["k"] == serde_json::json!(n);
    }
    report("criterion 1 (gabidulin grid constructs and checks, dim = n)", ok);
}

#[test]
fn criterion_02_downward_scatteredness() {
    let dir = tmpdir("c2");
    let mut ok = true;
    for (q, r, n) in criterion1_grid() {
        let h = r - 1;
        if h < 2 {
            continue;
        }
        let file = dir.join(format!("gab-{q}-{r}-{n}.json"));
        run(&[
            "construct", "gabidulin",
            "--p", &q.to_string(), "--e", "1", "--n", &n.to_string(),
            "--r", &r.to_string(), "--out", file.to_str().unwrap(),
        ]);
        for i in 1..h {
            let (code, v) = run_json(&[
                "check", "--file", file.to_str().unwrap(), "--h", &i.to_string(),
            ]);
            ok &= code == 0 && v["scattered"] == serde_json::json!(true);
        }
    }
    report("criterion 2 (every h-scattered U passes check for all i < h)", ok);
}

#[test]
fn criterion_03_bound_and_rejections() {
    let mut ok = true;

    // every verified h-scattered subspace of the suite obeys the bound
    let mut verified: Vec<(FqSubspace, usize)> = Vec::new();
    for (q, r, n) in criterion1_grid() {
        let g = gabidulin_subspace(tower(q, 1, n), r, None).unwrap();
        verified.push((g, r - 1));
    }
    let g23 = gabidulin_subspace(tower(2, 1, 3), 2, None).unwrap();
    verified.push((subspace::direct_sum(&[g23.clone(), g23]).unwrap(), 1));
    for (q, r) in [(2u64, 2usize), (2, 3), (3, 3)] {
        verified.push((subgeometry_subspace(tower(q, 1, 3), r).unwrap(), r - 1));
    }
    for (u, h) in &verified {
        let verdict = u.is_h_scattered(*h, CAP).unwrap();
        ok &= verdict.is_scattered();
        let b = dimension_bound(u.ambient_r(), u.tower().n(), *h).unwrap();
        ok &= b.admits(u.dim());
    }

    // 100 seeded random dim-4 subspaces of F_8^2: dim 4 > rn/2 = 3, so all
    // must be rejected, spanning ones with a violating witness
    let t = tower(2, 1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(20260811);
    let mut rejected = 0;
    while rejected < 100 {
        let rows: Vec<Vec<u32>> = (0..4)
            .map(|_| (0..2).map(|_| (rng.next_u64() % 8) as u32).collect())
            .collect();
        let u = FqSubspace::from_fqn_vectors(t.clone(), 2, &rows).unwrap();
        if u.dim() != 4 {
            continue;
        }
        match u.is_h_scattered(1, CAP).unwrap() {
            ScatterVerdict::Scattered { .. } => {
                ok = false;
                break;
            }
            ScatterVerdict::Violation(w) => {
                ok &= w.intersection_dim > 1;
                rejected += 1;
            }
            ScatterVerdict::NotSpanning { span_dim } => {
                ok &= span_dim < 2;
                rejected += 1;
            }
        }
    }
    report("criterion 3 (dimension bound holds; 100 violators rejected with witnesses)", ok);
}

#[test]
fn criterion_04_direct_sum_window_and_a_zero() {
    let dir = tmpdir("c4");
    let mut ok = true;
    let part = dir.join("part.json");
    run(&[
        "construct", "gabidulin", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--out", part.to_str().unwrap(),
    ]);
    let sum = dir.join("sum.json");
    let c = run(&[
        "construct", "direct-sum", part.to_str().unwrap(), part.to_str().unwrap(),
        "--out", sum.to_str().unwrap(),
    ]);
    ok &= c.code == 0;

    let (code, v) = run_json(&["check", "--file", sum.to_str().unwrap(), "--h", "1"]);
    ok &= code == 0 && v["scattered"] == serde_json::json!(true);
    ok &= v["k"] == serde_json::json!(6); // rn/2 = 4·3/2
    ok &= v["intersection_window"] == serde_json::json!([3, 4]);

    let csv = dir.join("sum.csv");
    let r = run(&[
        "spectrum", "--file", sum.to_str().unwrap(), "--format", "csv",
        "--out", csv.to_str().unwrap(),
    ]);
    ok &= r.code == 0;
    let spec = hscat_cli::formats::spectrum_from_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    ok &= spec.total() == num_bigint::BigUint::from(585u32);
    ok &= check_intersection_window(&spec, 1).unwrap();

    let (code, v) = run_json(&[
        "identities", "--spectrum", csv.to_str().unwrap(), "--h", "1",
    ]);
    ok &= code == 0;
    ok &= v["spectrum_report"]["a_direct"] == serde_json::json!("0");
    ok &= v["spectrum_report"]["all_passed"] == serde_json::json!(true);
    report("criterion 4 (direct sum attains rn/2, window [3,4] over 585 hyperplanes, A = 0)", ok);
}

#[test]
fn criterion_05_delsarte_duals() {
    let dir = tmpdir("c5");
    let mut ok = true;

    // (a) q=2, r=2, n=4: dual 1-scattered of dim 4 in F_16^2
    let g4 = dir.join("g4.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "4", "--r", "2",
        "--out", g4.to_str().unwrap()]);
    let d4 = dir.join("d4.json");
    let (code, v) = run_json(&["dual", "--file", g4.to_str().unwrap(), "--form", "standard",
        "--out", d4.to_str().unwrap()]);
    ok &= code == 0;
    ok &= v["dual_ambient"] == serde_json::json!(2) && v["dual_dim"] == serde_json::json!(4);
    ok &= v["source_k"] == v["dual_dim"];
    let (code, v) = run_json(&["check", "--file", d4.to_str().unwrap(), "--h", "1"]);
    ok &= code == 0 && v["scattered"] == serde_json::json!(true);

    // (b) q=2, r=2, n=5: dual 2-scattered of dim 5 in F_32^3, all 1057 planes
    let g5 = dir.join("g5.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "5", "--r", "2",
        "--out", g5.to_str().unwrap()]);
    let d5 = dir.join("d5.json");
    let (code, v) = run_json(&["dual", "--file", g5.to_str().unwrap(), "--form", "standard",
        "--out", d5.to_str().unwrap()]);
    ok &= code == 0;
    ok &= v["dual_ambient"] == serde_json::json!(3) && v["dual_dim"] == serde_json::json!(5);
    ok &= v["source_k"] == v["dual_dim"];
    let (code, v) = run_json(&["check", "--file", d5.to_str().unwrap(), "--h", "2"]);
    ok &= code == 0 && v["scattered"] == serde_json::json!(true);
    ok &= v["enumerated_subspaces"] == serde_json::json!("1057");

    report("criterion 5 (duals: n=4 → 1-scattered dim 4, n=5 → 2-scattered dim 5, dim preserved)", ok);
}

#[test]
fn criterion_06_form_independence() {
    let dir = tmpdir("c6");
    let mut ok = true;
    let g5 = dir.join("g5.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "5", "--r", "2",
        "--out", g5.to_str().unwrap()]);
    for form in ["standard", "reversal"] {
        let d = dir.join(format!("d5-{form}.json"));
        let (code, _) = run_json(&["dual", "--file", g5.to_str().unwrap(), "--form", form,
            "--out", d.to_str().unwrap()]);
        ok &= code == 0;
        let (code, v) = run_json(&["check", "--file", d.to_str().unwrap(), "--h", "2"]);
        ok &= code == 0 && v["scattered"] == serde_json::json!(true);
    }
    // φ(W + Γ^{⊥2}) = W + Γ^{⊥1} exactly, at the pre-quotient level
    let g = gabidulin_subspace(tower(2, 1, 5), 2, None).unwrap();
    ok &= dual::form_independence_check(&g, &FormSpec::Standard, &FormSpec::Reversal, CAP).unwrap();
    report("criterion 6 (identity and reversal forms agree; φ maps W+Γ^⊥2 onto W+Γ^⊥1)", ok);
}

#[test]
fn criterion_07_mrd_bridge() {
    let dir = tmpdir("c7");
    let mut ok = true;
    let code_file = dir.join("gab-code.json");
    run(&["mrd", "make", "--p", "2", "--e", "1", "--n", "5", "--monomials", "0,1",
        "--out", code_file.to_str().unwrap()]);

    let (code, v) = run_json(&["mrd", "distance", "--code", code_file.to_str().unwrap()]);
    ok &= code == 0;
    ok &= v["min_distance"] == serde_json::json!(4); // n - r + 1
    ok &= v["is_mrd"] == serde_json::json!(true);

    let (code, v) = run_json(&["mrd", "idealiser", "--code", code_file.to_str().unwrap(),
        "--side", "left"]);
    ok &= code == 0;
    ok &= v["dim"] == serde_json::json!(5);
    ok &= v["is_field_of_order_qn"] == serde_json::json!(true);

    let sub_file = dir.join("uc.json");
    let (code, _) = run_json(&["mrd", "to-subspace", "--code", code_file.to_str().unwrap(),
        "--out", sub_file.to_str().unwrap()]);
    ok &= code == 0;
    let (code, v) = run_json(&["check", "--file", sub_file.to_str().unwrap(), "--h", "1"]);
    ok &= code == 0 && v["scattered"] == serde_json::json!(true);

    let (code, v) = run_json(&["mrd", "dual", "--code", code_file.to_str().unwrap()]);
    ok &= code == 0 && v["normalized_agrees"] == serde_json::json!(true);

    let (code, v) = run_json(&["mrd", "dual-bridge", "--code", code_file.to_str().unwrap()]);
    ok &= code == 0 && v["matches"] == serde_json::json!(true);

    report("criterion 7 (⟨x, x^q⟩ over F_32: d = 4, MRD, field idealiser, duals agree)", ok);
}

#[test]
fn criterion_08_q_combinatorics() {
    let mut ok = true;

    // qbin(4,2,2) = 35 against the brute-force subspace-count oracle
    let mut spans = BTreeSet::new();
    for a in 1u32..16 {
        for b in 1u32..16 {
            let span: BTreeSet<u32> = [0, a, b, a ^ b].into_iter().collect();
            if span.len() == 4 {
                spans.insert(span);
            }
        }
    }
    ok &= spans.len() == 35;
    let two = num_rational::BigRational::from_integer(2.into());
    ok &= qcombin::qbin(4, 2, &two) == num_rational::BigRational::from_integer(35.into());

    // the identity grid for all n ≤ 8, q ∈ {2,3,4,5}, exactly
    let (code, v) = run_json(&["identities", "--n-max", "8", "--q", "2,3,4,5"]);
    ok &= code == 0 && v["all_passed"] == serde_json::json!(true);

    // Carlitz round-trip on 100 seeded random sequences
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let q3 = num_rational::BigRational::from_integer(3.into());
    for _ in 0..100 {
        let a: Vec<num_rational::BigRational> = (0..6)
            .map(|_| num_rational::BigRational::from_integer(((rng.next_u64() % 4001) as i64 - 2000).into()))
            .collect();
        ok &= qcombin::carlitz_inverse(&qcombin::carlitz_pair(&a, &q3), &q3) == a;
    }

    // spectrum identities on every maximum spectrum computed in criteria 1-5
    let mut maximal: Vec<(FqSubspace, usize)> = Vec::new();
    for (q, r, n) in criterion1_grid() {
        maximal.push((gabidulin_subspace(tower(q, 1, n), r, None).unwrap(), r - 1));
    }
    let g23 = gabidulin_subspace(tower(2, 1, 3), 2, None).unwrap();
    maximal.push((subspace::direct_sum(&[g23.clone(), g23]).unwrap(), 1));
    for n in [4usize, 5] {
        let g = gabidulin_subspace(tower(2, 1, n), 2, None).unwrap();
        let d = dual::delsarte_dual(&g, &FormSpec::Standard, CAP).unwrap();
        let h = d.context.guarantee.dual_order.unwrap();
        maximal.push((d.dual, h));
    }
    for (u, h) in &maximal {
        let spec = u.hyperplane_spectrum(CAP).unwrap();
        let rep = spectrum_identities(&spec, *h).unwrap();
        ok &= rep.all_passed();
        ok &= rep.a_direct == num_bigint::BigInt::from(0);
        ok &= rep.as_bs_ok;
    }

    report("criterion 8 (qbin oracle, identity grid n ≤ 8, Carlitz ×100, A = 0 and a_s = b_s on all maximum spectra)", ok);
}

#[test]
fn criterion_09_linear_sets() {
    let mut ok = true;

    // Gabidulin (2,3,2): 7 points, all weight 1
    let g = gabidulin_subspace(tower(2, 1, 3), 2, None).unwrap();
    let l = linset::linear_set(&g, CAP).unwrap();
    ok &= l.len() == 7 && l.weights.iter().all(|&w| w == 1);
    let dump = hscat_cli::formats::linear_set_json(g.tower(), &l);
    ok &= dump["points"].as_array().unwrap().len() == 7;
    ok &= dump["rank"] == serde_json::json!(3);

    // defining subspaces of the canonical subgeometry = the 7 scalar multiples
    let u = subgeometry_subspace(tower(2, 1, 3), 3).unwrap();
    let found = linset::defining_subspaces(&u, CAP).unwrap();
    let expected: BTreeSet<_> = (1..8u32)
        .map(|lam| u.scalar_multiple(lam).unwrap().canonical().clone())
        .collect();
    let got: BTreeSet<_> = found.iter().map(|w| w.canonical().clone()).collect();
    ok &= expected.len() == 7 && got == expected;

    // exhaustive two-dimensional base case at q=2, n=3: zero violations
    let rep = linset::two_dim_base_checks(tower(2, 1, 3), 50, 9, CAP).unwrap();
    ok &= rep.passed() && rep.exhaustive_scanned == 2824;

    report("criterion 9 (linear sets: Gabidulin points/weights, λU oracle, base-case exhaustive)", ok);
}

/// Runs the CLI portions of criteria 1-9 into `dir` with the given worker
/// count and returns every produced artifact (file bytes and stdout bytes),
/// keyed by a stable name.
fn pipeline(dir: &Path, workers: u32) -> Vec<(String, Vec<u8>)> {
    let w = workers.to_string();
    let mut artifacts: Vec<(String, Vec<u8>)> = Vec::new();
    let mut keep = |name: &str, bytes: Vec<u8>| artifacts.push((name.to_string(), bytes));

    let file = |p: &Path| std::fs::read(p).unwrap();

    // criterion 1/2 representatives (full grid replayed)
    for (q, r, n) in criterion1_grid() {
        let f = dir.join(format!("gab-{q}-{r}-{n}.json"));
        let c = run(&["construct", "gabidulin", "--p", &q.to_string(), "--e", "1",
            "--n", &n.to_string(), "--r", &r.to_string(), "--out", f.to_str().unwrap()]);
        keep(&format!("construct-{q}-{r}-{n}"), c.stdout.into_bytes());
        keep(&format!("construct-{q}-{r}-{n}-file"), file(&f));
        for h in 1..r {
            let v = run(&["check", "--file", f.to_str().unwrap(), "--h", &h.to_string(),
                "--workers", &w]);
            assert_eq!(v.code, 0);
            keep(&format!("check-{q}-{r}-{n}-h{h}"), v.stdout.into_bytes());
        }
    }

    // criterion 3: seeded search construct (the seeded CLI path)
    let sfile = dir.join("search.json");
    let c = run(&["construct", "search", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--h", "1", "--target-dim", "3", "--seed", "7", "--out", sfile.to_str().unwrap()]);
    assert_eq!(c.code, 0);
    keep("construct-search", c.stdout.into_bytes());
    keep("construct-search-file", file(&sfile));

    // criterion 4
    let part = dir.join("part.json");
    run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", "3", "--r", "2",
        "--out", part.to_str().unwrap()]);
    let sum = dir.join("sum.json");
    let c = run(&["construct", "direct-sum", part.to_str().unwrap(), part.to_str().unwrap(),
        "--out", sum.to_str().unwrap()]);
    keep("construct-sum", c.stdout.into_bytes());
    keep("construct-sum-file", file(&sum));
    let v = run(&["check", "--file", sum.to_str().unwrap(), "--h", "1", "--workers", &w]);
    keep("check-sum", v.stdout.into_bytes());
    let csv = dir.join("sum.csv");
    let v = run(&["spectrum", "--file", sum.to_str().unwrap(), "--format", "csv",
        "--workers", &w, "--out", csv.to_str().unwrap()]);
    keep("spectrum-sum-csv", v.stdout.into_bytes());
    keep("spectrum-sum-csv-file", file(&csv));
    let v = run(&["identities", "--spectrum", csv.to_str().unwrap(), "--h", "1"]);
    keep("identities-sum", v.stdout.into_bytes());

    // criteria 5/6
    for (n, forms) in [(4usize, vec!["standard"]), (5, vec!["standard", "reversal"])] {
        let g = dir.join(format!("g{n}.json"));
        run(&["construct", "gabidulin", "--p", "2", "--e", "1", "--n", &n.to_string(),
            "--r", "2", "--out", g.to_str().unwrap()]);
        for form in forms {
            let d = dir.join(format!("d{n}-{form}.json"));
            let v = run(&["dual", "--file", g.to_str().unwrap(), "--form", form,
                "--out", d.to_str().unwrap()]);
            keep(&format!("dual-{n}-{form}"), v.stdout.into_bytes());
            keep(&format!("dual-{n}-{form}-file"), file(&d));
            let h = (n - 3).to_string(); // n - h - 2 with h = 1
            let v = run(&["check", "--file", d.to_str().unwrap(), "--h", &h, "--workers", &w]);
            keep(&format!("check-dual-{n}-{form}"), v.stdout.into_bytes());
        }
    }

    // criterion 7
    let code_file = dir.join("code.json");
    let c = run(&["mrd", "make", "--p", "2", "--e", "1", "--n", "5", "--monomials", "0,1",
        "--out", code_file.to_str().unwrap()]);
    keep("mrd-make", c.stdout.into_bytes());
    keep("mrd-make-file", file(&code_file));
    for sub in ["distance", "check", "dual-bridge"] {
        let v = run(&["mrd", sub, "--code", code_file.to_str().unwrap()]);
        keep(&format!("mrd-{sub}"), v.stdout.into_bytes());
    }
    let v = run(&["mrd", "idealiser", "--code", code_file.to_str().unwrap(), "--side", "left"]);
    keep("mrd-idealiser", v.stdout.into_bytes());
    let dual_code = dir.join("dual-code.json");
    let v = run(&["mrd", "dual", "--code", code_file.to_str().unwrap(),
        "--out", dual_code.to_str().unwrap()]);
    keep("mrd-dual", v.stdout.into_bytes());
    keep("mrd-dual-file", file(&dual_code));
    let uc = dir.join("uc.json");
    let v = run(&["mrd", "to-subspace", "--code", code_file.to_str().unwrap(),
        "--out", uc.to_str().unwrap()]);
    keep("mrd-to-subspace", v.stdout.into_bytes());
    let v = run(&["check", "--file", uc.to_str().unwrap(), "--h", "1", "--workers", &w]);
    keep("check-uc", v.stdout.into_bytes());

    // a failing check: the witness selection must also be worker-independent
    let fat = dir.join("fat.json");
    let template = std::fs::read_to_string(dir.join("gab-2-2-3.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&template).unwrap();
    v["basis"] = serde_json::json!([
        [[[1],[0],[0]], [[0],[0],[0]]],
        [[[0],[1],[0]], [[0],[0],[0]]],
        [[[0],[0],[1]], [[0],[0],[0]]],
        [[[0],[0],[0]], [[1],[0],[0]]]
    ]);
    v["provenance"] = serde_json::json!(null);
    std::fs::write(&fat, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let r = run(&["check", "--file", fat.to_str().unwrap(), "--h", "1", "--workers", &w]);
    assert_eq!(r.code, 3);
    keep("check-violating", r.stdout.into_bytes());

    // criterion 8 identity grid
    let v = run(&["identities", "--n-max", "8", "--q", "2,3,4,5"]);
    keep("identities-grid", v.stdout.into_bytes());

    // criterion 9 artifacts (library level, serialized deterministically)
    let g = gabidulin_subspace(tower(2, 1, 3), 2, None).unwrap();
    let l = linset::linear_set(&g, CAP).unwrap();
    let dump = hscat_cli::formats::linear_set_json(g.tower(), &l);
    keep("linset-gabidulin", serde_json::to_string_pretty(&dump).unwrap().into_bytes());
    let u = subgeometry_subspace(tower(2, 1, 3), 3).unwrap();
    let found = linset::defining_subspaces(&u, CAP).unwrap();
    keep(
        "linset-defining",
        format!("{:?}", found.iter().map(|w| w.canonical().clone()).collect::<Vec<_>>())
            .into_bytes(),
    );
    let rep = linset::two_dim_base_checks(tower(2, 1, 3), 50, 9, CAP).unwrap();
    keep("linset-two-dim-base", format!("{:?}", rep).into_bytes());

    artifacts
}

#[test]
fn criterion_10_determinism_across_worker_counts() {
    let d1 = tmpdir("c10-w1");
    let d4 = tmpdir("c10-w4");
    let a1 = pipeline(&d1, 1);
    let a4 = pipeline(&d4, 4);
    assert_eq!(a1.len(), a4.len());
    let mut ok = true;
    for ((name1, bytes1), (name4, bytes4)) in a1.iter().zip(a4.iter()) {
        assert_eq!(name1, name4);
        if bytes1 != bytes4 {
            println!("  mismatch in artifact {name1}");
            ok = false;
        }
    }
    report("criterion 10 (byte-identical verdicts and files for workers 1 and 4)", ok);
}
