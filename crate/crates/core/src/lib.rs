//! Unimodality testing of one-dimensional samples through a piecewise-linear
//! unimodal approximation of the empirical cdf, with the resulting Uniform
//! Mixture Model for density evaluation and sampling.
//!
//! ```
//! use uutest::{uu_test, Dataset, Umm};
//!
//! let raw: Vec<f64> = (0..500).map(|i| (i as f64 * 0.37).sin()).collect();
//! let d = Dataset::from_raw(&raw).unwrap();
//! let report = uu_test(&d, 0.01).unwrap();
//! if report.is_unimodal() {
//!     let model = Umm::from_report(&report.s_points, &d).unwrap();
//!     assert!((model.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
//! }
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod eval;
pub mod experiments;
pub mod hull;
pub mod ks;
pub mod par;
pub mod split;
pub mod synth;
pub mod umm;
pub mod uu;

pub use data::{Dataset, StepEcdf};
pub use error::{Error, Result};
pub use eval::{fit_gaussian, fit_uniform, two_sample_ks, BaselineModel, ModelComparison};
pub use hull::{gcm_points, gl_set, lcm_points, GlPointSet, Tag};
pub use ks::{check_uniformity, ks_pvalue, ks_statistic_uniform, KsOutcome};
pub use par::Execution;
pub use split::{first_cut_point, split_recursive, SplitTree};
pub use synth::{Dist, DistSpec};
pub use umm::Umm;
pub use uu::{uu_test, UuReport, Verdict};
