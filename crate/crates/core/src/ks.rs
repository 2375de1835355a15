//! One-sample Kolmogorov–Smirnov test of a data subset against the uniform
//! distribution on a given interval.

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Subsets with at most this many observations pass uniformity unconditionally.
pub const N_MIN: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    /// Reported as 1 when the subset is too small to be tested.
    pub p_value: f64,
    pub n: u64,
    pub uniform: bool,
}

/// `sup |F_n - U[a,b]|` over the values of `d` with indices `lo..=hi`.
///
/// Values outside `[a, b]` are clamped onto the interval.
pub fn ks_statistic_range(d: &Dataset, lo: usize, hi: usize, a: f64, b: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::DegenerateInterval(a, b));
    }
    Ok(scan(d, lo, hi, a, b, |_| false))
}

const CHUNK: usize = 4096;

/// Running KS statistic over `lo..=hi`; `stop` is consulted with the partial
/// statistic after every chunk and ends the scan early when it returns true.
fn scan(d: &Dataset, lo: usize, hi: usize, a: f64, b: f64, stop: impl Fn(f64) -> bool) -> f64 {
    let n = d.count_between(lo, hi) as f64;
    let width = b - a;
    let base = if lo == 0 { 0 } else { d.cum_count(lo - 1) };
    let values = &d.values()[lo..=hi];
    let cum = &d.cum()[lo..=hi];
    let mut prev = 0.0;
    let mut stat = 0.0f64;
    for (vs, cs) in values.chunks(CHUNK).zip(cum.chunks(CHUNK)) {
        for (&v, &c) in vs.iter().zip(cs) {
            let u = ((v - a) / width).clamp(0.0, 1.0);
            let here = (c - base) as f64 / n;
            stat = stat.max(here - u).max(u - prev);
            prev = here;
        }
        if stop(stat) {
            break;
        }
    }
    stat.clamp(0.0, 1.0)
}

/// Uniformity verdict of the values with indices `lo..=hi` on their own
/// range. Gives the same answer as [`check_uniformity_range`] but abandons
/// the scan once the partial statistic already rejects.
pub(crate) fn is_uniform_range(d: &Dataset, lo: usize, hi: usize, alpha: f64) -> bool {
    let (a, b) = (d.values()[lo], d.values()[hi]);
    if !(a < b) {
        return false;
    }
    let n = d.count_between(lo, hi);
    if n <= N_MIN {
        return true;
    }
    let rejects = |stat: f64| ks_pvalue(stat, n) <= alpha;
    !rejects(scan(d, lo, hi, a, b, rejects))
}

pub fn ks_statistic_uniform(d: &Dataset, a: f64, b: f64) -> Result<f64> {
    ks_statistic_range(d, 0, d.n_unique() - 1, a, b)
}

/// Complementary Kolmogorov distribution `Q_K(λ) = P(K > λ)`.
///
/// Uses the alternating series for large λ and the Jacobi theta form for
/// small λ, where the alternating series converges poorly.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let w = pi2 / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=64u32 {
            let m = f64::from(2 * k - 1);
            let term = (-m * m * w).exp();
            sum += term;
            if term < 1e-16 * sum.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=100u32 {
            let kf = f64::from(k);
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += sign * term;
            if term < 1e-16 {
                break;
            }
            sign = -sign;
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

/// Asymptotic KS p-value with the `sqrt(n) + 0.12 + 0.11/sqrt(n)` small-sample correction.
pub fn ks_pvalue(stat: f64, n: u64) -> f64 {
    let sn = (n as f64).sqrt();
    kolmogorov_q((sn + 0.12 + 0.11 / sn) * stat)
}

/// Uniformity check of the values with indices `lo..=hi` on `[a, b]`.
pub fn check_uniformity_range(
    d: &Dataset,
    lo: usize,
    hi: usize,
    a: f64,
    b: f64,
    alpha: f64,
) -> Result<KsOutcome> {
    let statistic = ks_statistic_range(d, lo, hi, a, b)?;
    let n = d.count_between(lo, hi);
    if n <= N_MIN {
        return Ok(KsOutcome {
            statistic,
            p_value: 1.0,
            n,
            uniform: true,
        });
    }
    let p_value = ks_pvalue(statistic, n);
    Ok(KsOutcome {
        statistic,
        p_value,
        n,
        uniform: p_value > alpha,
    })
}

/// Uniformity of `d` on `[a, b]` at level `alpha`.
pub fn check_uniformity(d: &Dataset, a: f64, b: f64, alpha: f64) -> Result<KsOutcome> {
    check_uniformity_range(d, 0, d.n_unique() - 1, a, b, alpha)
}

pub(crate) fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}
