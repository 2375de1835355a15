//! Benchmark harnesses: decision accuracy over the synthetic suite, and
//! model quality (log-likelihood, two-sample KS) against baselines.

use serde::Serialize;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::eval::{compare, fit_gaussian, fit_uniform, Model, ModelComparison};
use crate::par::{self, Execution};
use crate::synth::{derive_seed, DecisionRow, ModelRow};
use crate::umm::Umm;
use crate::uu::{uu_test, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionResult {
    pub name: String,
    pub expected: Verdict,
    pub reps: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub reference_accuracy: u32,
}

/// Runs every row `reps` times; repetition `r` of row `i` uses seed
/// `derive_seed(seed, i, r)`.
pub fn run_decision_suite(
    rows: &[DecisionRow],
    reps: usize,
    alpha: f64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<DecisionResult>> {
    let tasks: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|i| (0..reps).map(move |r| (i, r)))
        .collect();
    let verdicts = par::map(exec, &tasks, |&(i, r)| {
        let d = rows[i].spec.generate(derive_seed(seed, i as u64, r as u64))?;
        Ok(uu_test(&d, alpha)?.verdict)
    })
    .into_iter()
    .collect::<Result<Vec<Verdict>>>()?;
    Ok(rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let correct = verdicts[i * reps..(i + 1) * reps]
                .iter()
                .filter(|&&v| v == row.expected)
                .count();
            DecisionResult {
                name: row.name.to_string(),
                expected: row.expected,
                reps,
                correct,
                accuracy: if reps == 0 { 0.0 } else { 100.0 * correct as f64 / reps as f64 },
                reference_accuracy: row.reference_accuracy,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelResult {
    pub name: String,
    pub train_n: usize,
    pub test_n: usize,
    pub segments: usize,
    pub comparison: ModelComparison,
}

/// Fits a UMM, a Gaussian and a uniform model to a fresh training sample and
/// scores them on the held-out test sample and on a fresh reference sample of
/// test size.
pub fn run_model_row(row: &ModelRow, alpha: f64, seed: u64) -> Result<ModelResult> {
    let (train, test) = row.spec.train_test(row.train_n, row.test_n, derive_seed(seed, 0, 0))?;
    let report = uu_test(&train, alpha)?;
    if !report.is_unimodal() {
        return Err(Error::DegenerateData(format!(
            "{} training sample was judged multimodal",
            row.name
        )));
    }
    let umm = Umm::from_report(&report.s_points, &train)?.with_alpha(alpha);
    let segments = umm.n_components();
    let models = [
        Model::Umm(umm),
        Model::Baseline(fit_gaussian(&train)?),
        Model::Baseline(fit_uniform(&train)?),
    ];
    let reference: Dataset = row.spec.with_n(row.test_n).generate(derive_seed(seed, 0, 1))?;
    let comparison = compare(&models, &test, &reference, derive_seed(seed, 0, 2))?;
    Ok(ModelResult {
        name: row.name.to_string(),
        train_n: row.train_n,
        test_n: row.test_n,
        segments,
        comparison,
    })
}

/// Row `i` uses seed `derive_seed(seed, i, 0)`.
pub fn run_model_suite(rows: &[ModelRow], alpha: f64, seed: u64, exec: Execution) -> Result<Vec<ModelResult>> {
    let idx: Vec<usize> = (0..rows.len()).collect();
    par::map(exec, &idx, |&i| run_model_row(&rows[i], alpha, derive_seed(seed, i as u64, 0)))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{decision_suite, model_suite};

    #[test]
    fn decision_suite_is_deterministic_across_modes() {
        let rows = &decision_suite()[..2];
        let a = run_decision_suite(rows, 3, 0.01, 5, Execution::Sequential).unwrap();
        let b = run_decision_suite(rows, 3, 0.01, 5, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert!(a.iter().all(|r| r.reps == 3));
    }

    #[test]
    fn model_row_runs() {
        let row = &model_suite()[2];
        let r = run_model_row(row, 0.01, 3).unwrap();
        assert_eq!(r.comparison.scores.len(), 3);
        assert_eq!(r, run_model_row(row, 0.01, 3).unwrap());
    }
}
