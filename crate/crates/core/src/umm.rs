//! Uniform Mixture Model: consecutive uniform components on breakpoint
//! intervals, with a piecewise-linear cdf.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Density floor applied to points the model assigns zero density.
pub const EPS_FLOOR: f64 = 1e-12;

const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Umm {
    breakpoints: Vec<f64>,
    weights: Vec<f64>,
    cum: Vec<f64>,
    alpha: f64,
    n_train: u64,
}

/// On-disk form of a [`Umm`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UmmDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub breakpoints: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub n_train: u64,
}

impl Umm {
    pub fn new(breakpoints: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::with_meta(breakpoints, weights, f64::NAN, 0)
    }

    fn with_meta(breakpoints: Vec<f64>, weights: Vec<f64>, alpha: f64, n_train: u64) -> Result<Self> {
        if breakpoints.len() < 2 || weights.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidModel(format!(
                "{} breakpoints for {} weights",
                breakpoints.len(),
                weights.len()
            )));
        }
        if breakpoints.iter().any(|s| !s.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidModel("breakpoints must be finite and strictly increasing".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidModel("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidModel(format!("weights sum to {total}")));
        }
        let mut cum = Vec::with_capacity(weights.len() + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cum.push(acc);
        }
        *cum.last_mut().unwrap() = 1.0;
        Ok(Self {
            breakpoints,
            weights,
            cum,
            alpha,
            n_train,
        })
    }

    /// Weights from counts of `d` on `[s_i, s_{i+1})`, the last interval
    /// closed.
    pub fn from_report(s: &[f64], d: &Dataset) -> Result<Self> {
        if s.len() < 2 {
            return Err(Error::InvalidBreakpoints("need at least two breakpoints".into()));
        }
        if s[0] != d.min() || s[s.len() - 1] != d.max() {
            return Err(Error::InvalidBreakpoints(format!(
                "[{}, {}] does not span the data [{}, {}]",
                s[0],
                s[s.len() - 1],
                d.min(),
                d.max()
            )));
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidBreakpoints("breakpoints must be strictly increasing".into()));
        }
        if let Some(x) = s.iter().find(|&&x| d.index_of(x).is_none()) {
            return Err(Error::InvalidBreakpoints(format!("{x} is not a data value")));
        }
        let values = d.values();
        let n = d.n_total();
        let last = s.len() - 2;
        let weights = s
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let lo = values.partition_point(|&v| v < w[0]);
                let hi = if i == last {
                    values.len()
                } else {
                    values.partition_point(|&v| v < w[1])
                };
                let k = if hi > lo { d.count_between(lo, hi - 1) } else { 0 };
                k as f64 / n as f64
            })
            .collect::<Vec<_>>();
        let total: f64 = weights.iter().sum();
        let weights = weights.into_iter().map(|w| w / total).collect();
        Self::with_meta(s.to_vec(), weights, f64::NAN, n)
    }

    /// Records the significance level used at fit time.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_train(&self) -> u64 {
        self.n_train
    }

    pub fn n_components(&self) -> usize {
        self.weights.len()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
    }

    fn segment(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let i = self.breakpoints.partition_point(|&s| s <= x);
        Some((i - 1).min(self.weights.len() - 1))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self.segment(x) {
            Some(i) => self.weights[i] / (self.breakpoints[i + 1] - self.breakpoints[i]),
            None => 0.0,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let i = self.segment(x).expect("x inside support");
        let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
        (self.cum[i] + self.weights[i] * (x - a) / (b - a)).min(1.0)
    }

    pub fn log_likelihood(&self, test: &Dataset) -> f64 {
        test.values()
            .iter()
            .zip(test.counts())
            .map(|(&x, &c)| c as f64 * self.pdf(x).max(EPS_FLOOR).ln())
            .sum()
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n).map(|_| self.draw(&mut rng)).collect())
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        // first segment whose cumulative weight exceeds u; zero-weight
        // segments are never selected
        let i = self.cum[1..]
            .partition_point(|&c| c <= u)
            .min(self.weights.len() - 1);
        let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let v: f64 = rng.random();
        a + v * (b - a)
    }

    pub fn to_doc(&self) -> UmmDoc {
        UmmDoc {
            kind: "umm".into(),
            breakpoints: self.breakpoints.clone(),
            weights: self.weights.clone(),
            alpha: self.alpha,
            n_train: self.n_train,
        }
    }

    pub fn from_doc(doc: UmmDoc) -> Result<Self> {
        if doc.kind != "umm" {
            return Err(Error::InvalidModel(format!("unexpected model type {:?}", doc.kind)));
        }
        Self::with_meta(doc.breakpoints, doc.weights, doc.alpha, doc.n_train)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: UmmDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(doc)
    }
}

impl Serialize for Umm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Umm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = UmmDoc::deserialize(deserializer)?;
        Umm::from_doc(doc).map_err(serde::de::Error::custom)
    }
}
