//! Seeded generators for the benchmark distribution families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution, Exp, Gamma, Normal, StudentT, Triangular, Uniform};
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::uu::Verdict;

const MAX_REJECTIONS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Dist {
    Gaussian { mu: f64, sigma: f64 },
    StudentT { nu: f64 },
    Gamma { shape: f64, scale: f64 },
    Exponential { rate: f64 },
    Cauchy { location: f64, scale: f64 },
    Triangular { low: f64, high: f64, mode: f64 },
    Uniform { a: f64, b: f64 },
    /// Components are concatenated with their own exact counts.
    Mixture { components: Vec<DistSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Keep draws `<= bound`.
    Below,
    /// Keep draws `>= bound`.
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub side: Side,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistSpec {
    #[serde(flatten)]
    pub dist: Dist,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
}

impl DistSpec {
    pub fn new(dist: Dist, n: usize) -> Self {
        DistSpec {
            dist,
            n,
            truncation: None,
        }
    }

    pub fn truncated(mut self, side: Side, bound: f64) -> Self {
        self.truncation = Some(Truncation { side, bound });
        self
    }

    pub fn mixture(components: Vec<DistSpec>) -> Self {
        let n = components.iter().map(|c| c.n).sum();
        DistSpec::new(Dist::Mixture { components }, n)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.n == 0 {
            return bad("sample size must be positive");
        }
        match &self.dist {
            Dist::Gaussian { sigma, .. } if !(*sigma > 0.0) => bad("sigma must be positive"),
            Dist::StudentT { nu } if !(*nu > 0.0) => bad("nu must be positive"),
            Dist::Gamma { shape, scale } if !(*shape > 0.0 && *scale > 0.0) => {
                bad("gamma shape and scale must be positive")
            }
            Dist::Exponential { rate } if !(*rate > 0.0) => bad("rate must be positive"),
            Dist::Cauchy { scale, .. } if !(*scale > 0.0) => bad("scale must be positive"),
            Dist::Triangular { low, high, mode } if !(low < high && low <= mode && mode <= high) => {
                bad("triangular needs low <= mode <= high and low < high")
            }
            Dist::Uniform { a, b } if !(a < b) => bad("uniform needs a < b"),
            Dist::Mixture { components } => {
                if components.len() < 2 {
                    return bad("a mixture needs at least two components");
                }
                if components.iter().map(|c| c.n).sum::<usize>() != self.n {
                    return bad("mixture size must equal the sum of component sizes");
                }
                components.iter().try_for_each(DistSpec::validate)
            }
            _ => Ok(()),
        }
    }

    /// Same distribution with a different size; mixture counts are rescaled
    /// proportionally (largest remainder).
    pub fn with_n(&self, n: usize) -> DistSpec {
        let mut out = self.clone();
        out.n = n;
        if let Dist::Mixture { components } = &mut out.dist {
            let total: usize = components.iter().map(|c| c.n).sum();
            let exact: Vec<f64> = components
                .iter()
                .map(|c| c.n as f64 * n as f64 / total as f64)
                .collect();
            let mut sizes: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
            let mut order: Vec<usize> = (0..sizes.len()).collect();
            order.sort_by(|&i, &j| {
                (exact[j] - exact[j].floor()).total_cmp(&(exact[i] - exact[i].floor()))
            });
            let short = n - sizes.iter().sum::<usize>();
            for &i in order.iter().take(short) {
                sizes[i] += 1;
            }
            for (c, s) in components.iter_mut().zip(sizes) {
                *c = c.with_n(s);
            }
        }
        out
    }

    /// Raw draws in generation order (mixture components concatenated).
    pub fn sample_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.n);
        self.fill(rng, &mut out)?;
        Ok(out)
    }

    fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<f64>) -> Result<()> {
        if let Dist::Mixture { components } = &self.dist {
            let start = out.len();
            for c in components {
                c.fill(rng, out)?;
            }
            if let Some(t) = self.truncation {
                if out[start..].iter().any(|&x| !keeps(t, x)) {
                    return Err(Error::InvalidParameter(
                        "truncate mixture components individually".into(),
                    ));
                }
            }
            return Ok(());
        }
        let mut rejected = 0usize;
        let mut kept = 0usize;
        while kept < self.n {
            let x = self.draw_one(rng);
            if self.truncation.is_none_or(|t| keeps(t, x)) {
                out.push(x);
                kept += 1;
            } else {
                rejected += 1;
                if rejected >= MAX_REJECTIONS {
                    return Err(Error::TruncationFailure(rejected));
                }
            }
        }
        Ok(())
    }

    fn draw_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // Parameters were validated, the constructors cannot fail here.
        match self.dist {
            Dist::Gaussian { mu, sigma } => Normal::new(mu, sigma).unwrap().sample(rng),
            Dist::StudentT { nu } => StudentT::new(nu).unwrap().sample(rng),
            Dist::Gamma { shape, scale } => Gamma::new(shape, scale).unwrap().sample(rng),
            Dist::Exponential { rate } => Exp::new(rate).unwrap().sample(rng),
            Dist::Cauchy { location, scale } => Cauchy::new(location, scale).unwrap().sample(rng),
            Dist::Triangular { low, high, mode } => {
                Triangular::new(low, high, mode).unwrap().sample(rng)
            }
            Dist::Uniform { a, b } => Uniform::new(a, b).unwrap().sample(rng),
            Dist::Mixture { .. } => unreachable!("mixtures are expanded in fill"),
        }
    }

    /// Deterministic sample for `seed`.
    pub fn generate(&self, seed: u64) -> Result<Dataset> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Dataset::from_raw(&self.sample_raw(&mut rng)?)
    }

    /// Draws `train + test` points, shuffles, and splits without replacement.
    pub fn train_test(&self, train: usize, test: usize, seed: u64) -> Result<(Dataset, Dataset)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut all = self.with_n(train + test).sample_raw(&mut rng)?;
        all.shuffle(&mut rng);
        let (a, b) = all.split_at(train);
        Ok((Dataset::from_raw(a)?, Dataset::from_raw(b)?))
    }
}

fn keeps(t: Truncation, x: f64) -> bool {
    match t.side {
        Side::Below => x <= t.bound,
        Side::Above => x >= t.bound,
    }
}

/// SplitMix64 finalizer, used to derive independent per-task seeds.
pub fn derive_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut z = base
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionRow {
    pub name: &'static str,
    pub spec: DistSpec,
    pub expected: Verdict,
    /// Percentage of correct decisions reported for the original method.
    pub reference_accuracy: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRow {
    pub name: &'static str,
    pub spec: DistSpec,
    pub train_n: usize,
    pub test_n: usize,
}

fn gauss(mu: f64, sigma: f64, n: usize) -> DistSpec {
    DistSpec::new(Dist::Gaussian { mu, sigma }, n)
}

/// Student's t(10) plus U(0, 10); the uniform carries this share of the points.
pub const T_UNIFORM_SHARE: f64 = 0.115;
/// U(-10, 5) plus N(3, 1); the uniform carries this share of the points.
pub const UNIFORM_GAUSSIAN_SHARE: f64 = 0.13;
/// First-component share of the N(0,1) + N(3,1) model-quality mixture.
pub const TWO_GAUSSIAN_MAJOR_SHARE: f64 = 0.8;

fn split_counts(n: usize, share: f64) -> (usize, usize) {
    let first = (n as f64 * share).round() as usize;
    (first, n - first)
}

fn t_and_uniform(n: usize) -> DistSpec {
    let (nu, nt) = split_counts(n, T_UNIFORM_SHARE);
    DistSpec::mixture(vec![
        DistSpec::new(Dist::StudentT { nu: 10.0 }, nt),
        DistSpec::new(Dist::Uniform { a: 0.0, b: 10.0 }, nu),
    ])
}

fn uniform_and_gaussian(n: usize) -> DistSpec {
    let (nu, ng) = split_counts(n, UNIFORM_GAUSSIAN_SHARE);
    DistSpec::mixture(vec![
        DistSpec::new(Dist::Uniform { a: -10.0, b: 5.0 }, nu),
        gauss(3.0, 1.0, ng),
    ])
}

/// The fifteen decision-accuracy benchmark rows.
pub fn decision_suite() -> Vec<DecisionRow> {
    use Verdict::{Multimodal as M, Unimodal as U};
    let row = |name, spec, expected, reference_accuracy| DecisionRow {
        name,
        spec,
        expected,
        reference_accuracy,
    };
    vec![
        row("Gaussian", gauss(0.0, 1.0, 2000), U, 100),
        row(
            "Student's t",
            DistSpec::new(Dist::StudentT { nu: 4.0 }, 2000),
            U,
            100,
        ),
        row(
            "Gamma",
            DistSpec::new(Dist::Gamma { shape: 1.0, scale: 2.0 }, 2000),
            U,
            100,
        ),
        row(
            "Exponential",
            DistSpec::new(Dist::Exponential { rate: 3.0 }, 2000),
            U,
            100,
        ),
        row(
            "Cauchy",
            DistSpec::new(Dist::Cauchy { location: 0.0, scale: 1.0 }, 2000),
            U,
            100,
        ),
        row(
            "Triangular",
            DistSpec::new(Dist::Triangular { low: -1.0, high: 1.0, mode: 0.0 }, 3700),
            U,
            100,
        ),
        row(
            "Asymmetric Triangular",
            DistSpec::new(Dist::Triangular { low: -4.0, high: 3.0, mode: 0.0 }, 6500),
            U,
            96,
        ),
        row(
            "Two Gaussians (4, equal sizes)",
            DistSpec::mixture(vec![gauss(0.0, 1.0, 2000), gauss(4.0, 1.0, 2000)]),
            M,
            100,
        ),
        row(
            "Two Gaussians (4, unequal sizes)",
            DistSpec::mixture(vec![gauss(0.0, 1.0, 2000), gauss(4.0, 1.0, 1000)]),
            M,
            100,
        ),
        row(
            "Two Gaussians (4, unequal spread)",
            DistSpec::mixture(vec![gauss(0.0, 1.0, 1000), gauss(4.0, 2.0, 1000)]),
            U,
            100,
        ),
        row(
            "Two Truncated Gaussians",
            DistSpec::mixture(vec![
                gauss(0.0, 1.0, 1000).truncated(Side::Below, 0.0),
                gauss(0.0, 3.0, 1000).truncated(Side::Above, 0.0),
            ]),
            U,
            94,
        ),
        row(
            "Three Gaussians (0, 4, 8)",
            DistSpec::mixture(vec![
                gauss(0.0, 1.0, 1000),
                gauss(4.0, 1.0, 1000),
                gauss(8.0, 1.0, 1000),
            ]),
            M,
            100,
        ),
        row(
            "Three Gaussians (0, 4, 7)",
            DistSpec::mixture(vec![
                gauss(0.0, 1.0, 1000),
                gauss(4.0, 1.0, 1000),
                gauss(7.0, 1.0, 2000),
            ]),
            M,
            100,
        ),
        row("Student's t & Uniform", t_and_uniform(15000), U, 96),
        row("Uniform & Gaussian", uniform_and_gaussian(16000), U, 96),
    ]
}

/// The eight model-quality benchmark rows with train/test sizes.
pub fn model_suite() -> Vec<ModelRow> {
    let row = |name, spec: DistSpec, train_n: usize, test_n: usize| ModelRow {
        name,
        spec: spec.with_n(train_n + test_n),
        train_n,
        test_n,
    };
    let (major, minor) = split_counts(1000, TWO_GAUSSIAN_MAJOR_SHARE);
    vec![
        row("Gaussian", gauss(0.0, 1.0, 1), 650, 2000),
        row("Student's t", DistSpec::new(Dist::StudentT { nu: 4.0 }, 1), 650, 2000),
        row(
            "Gamma",
            DistSpec::new(Dist::Gamma { shape: 1.0, scale: 2.0 }, 1),
            650,
            2000,
        ),
        row(
            "Triangular",
            DistSpec::new(Dist::Triangular { low: -1.0, high: 1.0, mode: 0.0 }, 1),
            12500,
            37000,
        ),
        row(
            "Asymmetric Triangular",
            DistSpec::new(Dist::Triangular { low: -4.0, high: 3.0, mode: 0.0 }, 1),
            2150,
            6500,
        ),
        row(
            "Two Gaussians",
            DistSpec::mixture(vec![gauss(0.0, 1.0, major), gauss(3.0, 1.0, minor)]),
            5850,
            17500,
        ),
        row("Student's t & Uniform", t_and_uniform(1000), 5000, 15000),
        row("Uniform & Gaussian", uniform_and_gaussian(1000), 5300, 16000),
    ]
}
