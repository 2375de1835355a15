//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero when any criterion fails. Pass criterion numbers as
//! arguments to run a subset.

use std::panic::{self, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use uutest::eval::{two_sample_ks, two_sample_pvalue};
use uutest::experiments::{run_decision_suite, run_model_row, ModelResult};
use uutest::ks::{check_uniformity_range, ks_statistic_uniform};
use uutest::split::{split_recursive, DEFAULT_MAX_LEAVES};
use uutest::synth::{derive_seed, decision_suite, model_suite};
use uutest::{gcm_points, gl_set, lcm_points, uu_test, Dataset, Dist, DistSpec, Execution, Umm};

const SEED: u64 = 1;
const ALPHA: f64 = 0.01;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---- 1: decision accuracy over the synthetic suite ----

fn decision_accuracy() -> Outcome {
    let rows = decision_suite();
    let results = run_decision_suite(&rows, 20, ALPHA, SEED, Execution::default()).unwrap();
    let mut failing = Vec::new();
    for r in &results {
        let need = if r.reference_accuracy == 100 { 18 } else { 15 };
        if r.correct < need {
            failing.push(format!("{} {}/20 (need {need})", r.name, r.correct));
        }
    }
    let worst = results.iter().map(|r| r.correct).min().unwrap();
    if failing.is_empty() {
        outcome(true, format!("{} rows meet their threshold, lowest {worst}/20", results.len()))
    } else {
        outcome(false, format!("below threshold: {}", failing.join("; ")))
    }
}

// ---- 2, 3: model quality against baselines ----

const MODEL_SEEDS: u64 = 10;

type ModelRuns = Vec<(String, Vec<Option<ModelResult>>)>;

fn model_runs() -> &'static ModelRuns {
    static RUNS: OnceLock<ModelRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        model_suite()
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let runs = (0..MODEL_SEEDS)
                    .map(|s| run_model_row(row, ALPHA, derive_seed(SEED, i as u64, s)).ok())
                    .collect();
                (row.name.to_string(), runs)
            })
            .collect()
    })
}

fn per_row(check: impl Fn(&str, &ModelResult) -> bool) -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, runs) in model_runs() {
        let held = runs
            .iter()
            .filter(|r| r.as_ref().is_some_and(|r| check(name, r)))
            .count();
        if held < 9 {
            pass = false;
        }
        lines.push(format!("{name} {held}/{MODEL_SEEDS}"));
    }
    outcome(pass, lines.join("; "))
}

fn score(r: &ModelResult, model: &str) -> (f64, f64) {
    let s = r.comparison.score(model).unwrap();
    (s.log_likelihood, s.ks_distance)
}

fn likelihood_ordering() -> Outcome {
    per_row(|name, r| {
        let (umm, gauss, unif) = (score(r, "umm").0, score(r, "gaussian").0, score(r, "uniform").0);
        umm > unif && (name == "Gaussian" || umm > gauss)
    })
}

fn ks_ordering() -> Outcome {
    per_row(|name, r| {
        let (umm, gauss) = (score(r, "umm").1, score(r, "gaussian").1);
        if name == "Gaussian" {
            umm < 0.05
        } else {
            umm < 0.03 && umm < gauss
        }
    })
}

// ---- 4: exhaustive search at micro scale ----

fn micro_sample(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.random_range(2..=12);
    match rng.random_range(0..4) {
        0 => (0..n).map(|_| rng.random::<f64>()).collect(),
        1 => (0..n).map(|_| rng.random_range(0..4) as f64).collect(),
        2 => (0..n)
            .map(|i| 10.0 * (i % 2) as f64 + 0.01 * rng.random::<f64>())
            .collect(),
        _ => (0..n)
            .map(|_| 5.0 * rng.random_range(0..3) as f64 + 0.05 * rng.random::<f64>())
            .collect(),
    }
}

fn uniform_on(d: &Dataset, i: usize, j: usize) -> bool {
    let v = d.values();
    check_uniformity_range(d, i, j, v[i], v[j], ALPHA).unwrap().uniform
}

/// Every subset of the GL set of `lo..=hi` that keeps both ends is tried,
/// under every split into a gcm prefix and an lcm suffix. A candidate
/// succeeds when both sides are sufficient and its intermediate interval
/// succeeds in turn.
fn exhaustive(d: &Dataset, lo: usize, hi: usize, depth: usize) -> bool {
    if uniform_on(d, lo, hi) {
        return true;
    }
    if depth >= uutest::uu::DEPTH_MAX || hi <= lo + 1 {
        return false;
    }
    let gl = gl_set(&d.slice(lo, hi).ecdf());
    let pts = gl.points();
    let inner = &pts[1..pts.len() - 1];
    for mask in 0u32..1 << inner.len() {
        let chosen: Vec<_> = (0..inner.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| inner[k])
            .collect();
        for c in 0..=chosen.len() {
            let (g, l) = chosen.split_at(c);
            if !g.iter().all(|p| p.tag.is_gcm()) || !l.iter().all(|p| p.tag.is_lcm()) {
                continue;
            }
            let mut convex = vec![lo];
            convex.extend(g.iter().map(|p| p.index + lo));
            let mut concave: Vec<usize> = l.iter().map(|p| p.index + lo).collect();
            concave.push(hi);
            let mid = (*convex.last().unwrap(), concave[0]);
            if mid == (lo, hi) {
                continue;
            }
            let sufficient = |s: &[usize]| s.windows(2).all(|w| uniform_on(d, w[0], w[1]));
            if sufficient(&convex) && sufficient(&concave) && exhaustive(d, mid.0, mid.1, depth + 1) {
                return true;
            }
        }
    }
    false
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut cases, mut agree, mut multimodal) = (0, 0, 0);
    let mut first_miss = None;
    while cases < 500 {
        let d = match Dataset::from_raw(&micro_sample(&mut rng)) {
            Ok(d) if d.n_unique() >= 2 => d,
            _ => continue,
        };
        cases += 1;
        let want = exhaustive(&d, 0, d.n_unique() - 1, 0);
        let got = uu_test(&d, ALPHA).unwrap().is_unimodal();
        multimodal += usize::from(!want);
        if got == want {
            agree += 1;
        } else if first_miss.is_none() {
            first_miss = Some(format!("{:?} x {:?}", d.values(), d.counts()));
        }
    }
    let mut detail = format!("{agree}/{cases} agree ({multimodal} multimodal by the oracle)");
    if let Some(m) = first_miss {
        detail.push_str(&format!("; first mismatch {m}"));
    }
    outcome(agree == cases, detail)
}

// ---- 5: hull breakpoints against subset enumeration ----

/// Cross product sign of `(b - a) x (c - b)` in integer coordinates.
fn turn(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0)
}

/// Chord through `(a, c)` compared with `p` at `p.0`: positive when `p` lies
/// above it.
fn above(a: (i64, i64), c: (i64, i64), p: (i64, i64)) -> i64 {
    (p.1 - a.1) * (c.0 - a.0) - (c.1 - a.1) * (p.0 - a.0)
}

/// The unique endpoint-preserving subset whose interpolant is strictly
/// convex (`lower`) or concave and nowhere above (resp. below) any point.
fn enumerate_hull(pts: &[(i64, i64)], lower: bool) -> Vec<Vec<usize>> {
    let n = pts.len();
    if n == 1 {
        return vec![vec![0]];
    }
    let sign = if lower { 1 } else { -1 };
    let mut found = Vec::new();
    for mask in 0u32..1 << (n - 2) {
        let mut s = vec![0];
        s.extend((1..n - 1).filter(|k| mask >> (k - 1) & 1 == 1));
        s.push(n - 1);
        let strict = s
            .windows(3)
            .all(|w| sign * turn(pts[w[0]], pts[w[1]], pts[w[2]]) > 0);
        let bounds = s.windows(2).all(|w| {
            (w[0]..=w[1]).all(|k| sign * above(pts[w[0]], pts[w[1]], pts[k]) >= 0)
        });
        if strict && bounds {
            found.push(s);
        }
    }
    found
}

fn hull_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut agree = 0;
    let cases = 500;
    for _ in 0..cases {
        let n = rng.random_range(1..=14);
        let mut xs: Vec<i64> = Vec::new();
        while xs.len() < n {
            let x = rng.random_range(0..60);
            if !xs.contains(&x) {
                xs.push(x);
            }
        }
        xs.sort_unstable();
        let counts: Vec<u64> = (0..n).map(|_| rng.random_range(1..=4)).collect();
        let total: u64 = counts.iter().sum();
        let d = Dataset::from_counts(xs.iter().map(|&x| x as f64).collect(), counts.clone());
        let Ok(d) = d else { continue };
        let mut cum = 0;
        let pts: Vec<(i64, i64)> = xs
            .iter()
            .zip(&counts)
            .map(|(&x, &c)| {
                cum += c as i64;
                (x, cum)
            })
            .collect();
        let e = d.ecdf();
        let as_points = |idx: &[usize]| -> Vec<(f64, f64)> {
            idx.iter()
                .map(|&k| (pts[k].0 as f64, pts[k].1 as f64 / total as f64))
                .collect()
        };
        let g = enumerate_hull(&pts, true);
        let l = enumerate_hull(&pts, false);
        if g.len() == 1 && l.len() == 1 && gcm_points(&e) == as_points(&g[0]) && lcm_points(&e) == as_points(&l[0]) {
            agree += 1;
        }
    }
    outcome(agree == cases, format!("{agree}/{cases} hulls match the unique enumerated subset"))
}

// ---- 6: KS statistics against brute force ----

const GRID: u32 = 1_000_000;

fn grid_point(k: u32) -> f64 {
    k as f64 / GRID as f64
}

/// sup over the grid of |F_n - U| with both one-sided limits of the step
/// function evaluated at each grid point. Data lie on the grid.
fn dense_grid_ks(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let mut below = 0;
    let mut sup: f64 = 0.0;
    for k in 0..=GRID {
        let g = grid_point(k);
        let left = below as f64 / n;
        while below < sorted.len() && sorted[below] <= g {
            below += 1;
        }
        let right = below as f64 / n;
        sup = sup.max((left - g).abs()).max((right - g).abs());
    }
    sup
}

fn brute_two_sample(x: &[f64], y: &[f64]) -> f64 {
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let mut d: f64 = 0.0;
    for &t in x.iter().chain(y) {
        let fx = x.iter().filter(|&&v| v <= t).count() as f64 / nx;
        let fy = y.iter().filter(|&&v| v <= t).count() as f64 / ny;
        d = d.max((fx - fy).abs());
    }
    d
}

fn ks_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut one_ok = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=8);
        let mut raw: Vec<f64> = (0..n).map(|_| grid_point(rng.random_range(0..=GRID))).collect();
        raw.sort_by(f64::total_cmp);
        let Ok(d) = Dataset::from_sorted(&raw) else { continue };
        let got = ks_statistic_uniform(&d, 0.0, 1.0).unwrap();
        let err = (got - dense_grid_ks(&raw)).abs();
        worst = worst.max(err);
        one_ok += usize::from(err <= 1e-9);
    }
    let mut two_ok = 0;
    for _ in 0..200 {
        let (n, m) = (rng.random_range(2..=50), rng.random_range(2..=50));
        // coarse values so the two samples share ties
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0..30) as f64 * 0.5).collect();
        let y: Vec<f64> = (0..m).map(|_| rng.random_range(0..30) as f64 * 0.5).collect();
        let (Ok(dx), Ok(dy)) = (Dataset::from_raw(&x), Dataset::from_raw(&y)) else {
            continue;
        };
        two_ok += usize::from(two_sample_ks(&dx, &dy) == brute_two_sample(&x, &y));
    }
    outcome(
        one_ok == 200 && two_ok == 200,
        format!("one-sample {one_ok}/200 (max error {worst:.1e}), two-sample exact {two_ok}/200"),
    )
}

// ---- 7: affine invariance ----

fn affine_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut same = 0;
    let mut multimodal = 0;
    for i in 0..100u64 {
        let n = rng.random_range(100..1500);
        let spec = if i % 2 == 0 {
            DistSpec::new(Dist::Gaussian { mu: 0.0, sigma: 1.0 }, n)
        } else {
            let gap = rng.random_range(1.0..6.0);
            DistSpec::mixture(vec![
                DistSpec::new(Dist::Gaussian { mu: 0.0, sigma: 1.0 }, n / 2),
                DistSpec::new(Dist::Gaussian { mu: gap, sigma: 1.0 }, n - n / 2),
            ])
        };
        let raw = spec.sample_raw(&mut ChaCha8Rng::seed_from_u64(derive_seed(SEED, 7, i))).unwrap();
        let a = rng.random_range(0.01..100.0);
        let b = rng.random_range(-1000.0..1000.0);
        let moved: Vec<f64> = raw.iter().map(|x| a * x + b).collect();
        let r0 = uu_test(&Dataset::from_raw(&raw).unwrap(), ALPHA).unwrap();
        let r1 = uu_test(&Dataset::from_raw(&moved).unwrap(), ALPHA).unwrap();
        multimodal += usize::from(!r0.is_unimodal());
        same += usize::from(r0.verdict == r1.verdict && r0.s_indices == r1.s_indices);
    }
    outcome(same == 100, format!("{same}/100 identical verdicts and breakpoint indices ({multimodal} multimodal)"))
}

// ---- 8: resampling a fitted model ----

fn generative_check() -> Outcome {
    let mut passed = 0;
    for s in 0..50u64 {
        let spec = DistSpec::new(Dist::Gaussian { mu: 0.0, sigma: 1.0 }, 2000);
        let d = spec.generate(derive_seed(SEED, 8, s)).unwrap();
        let report = uu_test(&d, ALPHA).unwrap();
        if !report.is_unimodal() {
            continue;
        }
        let model = Umm::from_report(&report.s_points, &d).unwrap();
        let drawn = Dataset::from_raw(&model.sample(2000, derive_seed(SEED, 80, s)).unwrap()).unwrap();
        passed += usize::from(two_sample_pvalue(&d, &drawn) > ALPHA);
    }
    outcome(passed >= 45, format!("{passed}/50 resamples pass the two-sample test"))
}

// ---- 9: splitting three clusters ----

fn splitting() -> Outcome {
    let spec = DistSpec::mixture(
        [0.0, 4.0, 8.0]
            .iter()
            .map(|&mu| DistSpec::new(Dist::Gaussian { mu, sigma: 1.0 }, 1000))
            .collect(),
    );
    let mut good = 0;
    let mut notes = Vec::new();
    for s in 0..20u64 {
        let d = spec.generate(derive_seed(SEED, 9, s)).unwrap();
        let tree = split_recursive(&d, ALPHA, DEFAULT_MAX_LEAVES).unwrap();
        let leaves = tree.leaves();
        let mut cuts = tree.cuts();
        cuts.sort_by(f64::total_cmp);
        let ok = leaves.len() == 3
            && leaves.iter().all(|l| l.model.is_some())
            && cuts.len() == 2
            && cuts[0] > 1.5
            && cuts[0] < 2.5
            && cuts[1] > 5.5
            && cuts[1] < 6.5;
        if ok {
            good += 1;
        } else if notes.len() < 3 {
            notes.push(format!("{} leaves, cuts {cuts:.2?}", leaves.len()));
        }
    }
    let mut detail = format!("{good}/20 seeds split into the three clusters");
    if !notes.is_empty() {
        detail.push_str(&format!("; misses: {}", notes.join(", ")));
    }
    outcome(good >= 18, detail)
}

// ---- 10: performance at one million points ----

fn performance() -> Outcome {
    let n = 1_000_000;
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let raw: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
    let mut sorted = raw.clone();
    sorted.sort_by(f64::total_cmp);

    let t = Instant::now();
    let d = Dataset::from_sorted(&sorted).unwrap();
    let r = uu_test(&d, ALPHA).unwrap();
    let sorted_time = t.elapsed();

    let t = Instant::now();
    let d = Dataset::from_raw(&raw).unwrap();
    let r2 = uu_test(&d, ALPHA).unwrap();
    let total_time = t.elapsed();

    let pass = sorted_time < Duration::from_secs(1) && total_time < Duration::from_secs(3) && r == r2;
    outcome(
        pass,
        format!(
            "sorted input {:.3}s, with sort {:.3}s, verdict {:?}",
            sorted_time.as_secs_f64(),
            total_time.as_secs_f64(),
            r.verdict
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "decision accuracy suite", decision_accuracy),
        (2, "log-likelihood ordering", likelihood_ordering),
        (3, "two-sample KS ordering and magnitude", ks_ordering),
        (4, "exhaustive-search equivalence", oracle_equivalence),
        (5, "hull enumeration oracle", hull_oracle),
        (6, "KS brute-force oracles", ks_oracle),
        (7, "affine invariance", affine_invariance),
        (8, "generative resampling", generative_check),
        (9, "three-cluster splitting", splitting),
        (10, "performance at 1e6 points", performance),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {tag} {name} [{:.1}s]: {}",
            took.as_secs_f64(),
            result.detail
        );
        if !result.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
