//! Model-quality evaluation: baseline fits, test-set log-likelihood and the
//! two-sample Kolmogorov-Smirnov distance.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::ks::ks_pvalue;
use crate::umm::{Umm, EPS_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BaselineModel {
    Gaussian { mu: f64, sigma: f64 },
    Uniform { a: f64, b: f64 },
}

/// Maximum-likelihood Gaussian (variance divides by n).
pub fn fit_gaussian(train: &Dataset) -> Result<BaselineModel> {
    let n = train.n_total() as f64;
    let mu = train.mean();
    let var = train
        .values()
        .iter()
        .zip(train.counts())
        .map(|(&x, &c)| c as f64 * (x - mu).powi(2))
        .sum::<f64>()
        / n;
    if !(var > 0.0) {
        return Err(Error::DegenerateData("zero variance".into()));
    }
    Ok(BaselineModel::Gaussian { mu, sigma: var.sqrt() })
}

/// Uniform on the training range.
pub fn fit_uniform(train: &Dataset) -> Result<BaselineModel> {
    if train.n_unique() < 2 {
        return Err(Error::DegenerateData("single support point".into()));
    }
    Ok(BaselineModel::Uniform {
        a: train.min(),
        b: train.max(),
    })
}

impl BaselineModel {
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Gaussian { mu, sigma } => {
                let z = (x - mu) / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
            }
            Self::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Gaussian { mu, sigma } => {
                let z = (x - mu) / sigma;
                -0.5 * z * z - sigma.ln() - 0.5 * (2.0 * PI).ln()
            }
            Self::Uniform { .. } => self.pdf(x).max(EPS_FLOOR).ln(),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        use crate::synth::{Dist, DistSpec};
        use rand::SeedableRng;
        let dist = match *self {
            Self::Gaussian { mu, sigma } => Dist::Gaussian { mu, sigma },
            Self::Uniform { a, b } => Dist::Uniform { a, b },
        };
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be positive".into()));
        }
        DistSpec::new(dist, n).sample_raw(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }
}

pub fn baseline_log_likelihood(m: &BaselineModel, test: &Dataset) -> f64 {
    test.values()
        .iter()
        .zip(test.counts())
        .map(|(&x, &c)| c as f64 * m.ln_pdf(x))
        .sum()
}

/// Largest absolute difference between the ecdfs of `x` and `y`, by a single
/// merge over the two value lists.
pub fn two_sample_ks(x: &Dataset, y: &Dataset) -> f64 {
    let (nx, ny) = (x.n_total() as f64, y.n_total() as f64);
    let (xv, yv) = (x.values(), y.values());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xv.len() || j < yv.len() {
        let t = match (xv.get(i), yv.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        if xv.get(i) == Some(&t) {
            i += 1;
        }
        if yv.get(j) == Some(&t) {
            j += 1;
        }
        let fx = if i == 0 { 0.0 } else { x.cum_count(i - 1) as f64 / nx };
        let fy = if j == 0 { 0.0 } else { y.cum_count(j - 1) as f64 / ny };
        d = d.max((fx - fy).abs());
    }
    d
}

/// Asymptotic p-value of the two-sample statistic, using the effective
/// sample size n·m/(n+m).
pub fn two_sample_pvalue(x: &Dataset, y: &Dataset) -> f64 {
    let (n, m) = (x.n_total() as f64, y.n_total() as f64);
    let ne = (n * m / (n + m)).round().max(1.0) as u64;
    ks_pvalue(two_sample_ks(x, y), ne)
}

/// A fitted model as it appears in a comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Umm(Umm),
    Baseline(BaselineModel),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Umm(_) => "umm",
            Self::Baseline(BaselineModel::Gaussian { .. }) => "gaussian",
            Self::Baseline(BaselineModel::Uniform { .. }) => "uniform",
        }
    }

    pub fn log_likelihood(&self, test: &Dataset) -> f64 {
        match self {
            Self::Umm(m) => m.log_likelihood(test),
            Self::Baseline(m) => baseline_log_likelihood(m, test),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        match self {
            Self::Umm(m) => m.sample(n, seed),
            Self::Baseline(m) => m.sample(n, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelScore {
    pub model: String,
    pub log_likelihood: f64,
    pub ks_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub scores: Vec<ModelScore>,
    pub best_log_likelihood: String,
    pub best_ks: String,
}

impl ModelComparison {
    pub fn score(&self, model: &str) -> Option<&ModelScore> {
        self.scores.iter().find(|s| s.model == model)
    }
}

/// Scores every model on `test` by log-likelihood, and by the two-sample KS
/// distance between `reference` and an equally sized sample drawn from each
/// model with `seed`.
pub fn compare(models: &[Model], test: &Dataset, reference: &Dataset, seed: u64) -> Result<ModelComparison> {
    if models.is_empty() {
        return Err(Error::InvalidParameter("no models to compare".into()));
    }
    let n = reference.n_total() as usize;
    let scores = models
        .iter()
        .map(|m| {
            let drawn = Dataset::from_raw(&m.sample(n, seed)?)?;
            Ok(ModelScore {
                model: m.name().to_string(),
                log_likelihood: m.log_likelihood(test),
                ks_distance: two_sample_ks(reference, &drawn),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best_ll = scores
        .iter()
        .max_by(|a, b| a.log_likelihood.total_cmp(&b.log_likelihood))
        .unwrap();
    let best_ks = scores
        .iter()
        .min_by(|a, b| a.ks_distance.total_cmp(&b.ks_distance))
        .unwrap();
    Ok(ModelComparison {
        best_log_likelihood: best_ll.model.clone(),
        best_ks: best_ks.model.clone(),
        scores,
    })
}
