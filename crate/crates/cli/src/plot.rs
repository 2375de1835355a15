//! Plot-ready CSV: a fixed-width histogram and the empirical cdf.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

pub const BINS: usize = 50;

/// `x,density` rows at the bin centres of a `BINS`-bin histogram over the
/// data range.
pub fn histogram_csv(values: &[f64]) -> String {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / BINS as f64 } else { 1.0 };
    let mut counts = [0u64; BINS];
    for &v in values {
        let k = (((v - lo) / width) as usize).min(BINS - 1);
        counts[k] += 1;
    }
    let n = values.len() as f64;
    let mut s = String::from("x,density\n");
    for (k, &c) in counts.iter().enumerate() {
        let x = lo + (k as f64 + 0.5) * width;
        let _ = writeln!(s, "{x},{}", c as f64 / (n * width));
    }
    s
}

/// `x,F` rows at every distinct value.
pub fn ecdf_csv(values: &[f64]) -> String {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut s = String::from("x,F\n");
    for (i, &v) in sorted.iter().enumerate() {
        if sorted.get(i + 1) != Some(&v) {
            let _ = writeln!(s, "{v},{}", (i + 1) as f64 / n);
        }
    }
    s
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

/// Writes `<prefix>.hist.csv` and `<prefix>.ecdf.csv`.
pub fn emit(prefix: &Path, values: &[f64]) -> Result<(PathBuf, PathBuf)> {
    let hist = with_suffix(prefix, ".hist.csv");
    let ecdf = with_suffix(prefix, ".ecdf.csv");
    std::fs::write(&hist, histogram_csv(values)).map_err(|e| CliError::io(&hist, e))?;
    std::fs::write(&ecdf, ecdf_csv(values)).map_err(|e| CliError::io(&ecdf, e))?;
    Ok((hist, ecdf))
}
