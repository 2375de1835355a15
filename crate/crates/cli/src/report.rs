//! Report documents written by the commands, in JSON or flattened CSV.

use std::fmt::Write as _;

use serde::Serialize;

use uutest::experiments::DecisionResult;
use uutest::split::SplitTree;
use uutest::{Umm, UuReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub trait Render: Serialize {
    fn csv(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SegmentRow {
    pub a: f64,
    pub b: f64,
    pub n: u64,
    pub ks_p: f64,
}

#[derive(Debug, Serialize)]
pub struct ModelSummary {
    pub breakpoints: Vec<f64>,
    pub weights: Vec<f64>,
}

impl From<&Umm> for ModelSummary {
    fn from(m: &Umm) -> Self {
        Self {
            breakpoints: m.breakpoints().to_vec(),
            weights: m.weights().to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TestReport {
    pub verdict: Verdict,
    pub alpha: f64,
    pub n: u64,
    pub s_points: Vec<f64>,
    pub segments: Vec<SegmentRow>,
    pub cut_hints: Vec<f64>,
    pub model: Option<ModelSummary>,
}

impl TestReport {
    pub fn new(r: &UuReport, model: Option<&Umm>) -> Self {
        Self {
            verdict: r.verdict,
            alpha: r.alpha,
            n: r.n,
            s_points: r.s_points.clone(),
            segments: r
                .segments
                .iter()
                .map(|s| SegmentRow {
                    a: s.a,
                    b: s.b,
                    n: s.n,
                    ks_p: s.ks_p,
                })
                .collect(),
            cut_hints: r.cut_hints.clone(),
            model: model.map(ModelSummary::from),
        }
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Unimodal => "unimodal",
        Verdict::Multimodal => "multimodal",
    }
}

impl Render for TestReport {
    /// One row per segment, or one row per cut hint for multimodal data.
    fn csv(&self) -> String {
        let mut s = String::from("verdict,alpha,n,row,a,b,segment_n,ks_p,weight\n");
        let v = verdict_name(self.verdict);
        let weights = self.model.as_ref().map(|m| m.weights.as_slice()).unwrap_or(&[]);
        for (i, seg) in self.segments.iter().enumerate() {
            let w = weights.get(i).map(|w| w.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{v},{},{},segment,{},{},{},{},{w}",
                self.alpha, self.n, seg.a, seg.b, seg.n, seg.ks_p
            );
        }
        for c in &self.cut_hints {
            let _ = writeln!(s, "{v},{},{},cut,{c},{c},,,", self.alpha, self.n);
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct LeafRow {
    pub a: f64,
    pub b: f64,
    pub n: u64,
    pub status: &'static str,
    pub model: Option<ModelSummary>,
}

#[derive(Debug, Serialize)]
pub struct SplitReport {
    pub alpha: f64,
    pub n: u64,
    pub max_leaves: usize,
    pub cuts: Vec<f64>,
    pub leaves: Vec<LeafRow>,
    pub tree: SplitTree,
}

impl SplitReport {
    pub fn new(tree: SplitTree, alpha: f64, max_leaves: usize) -> Self {
        let mut cuts = tree.cuts();
        cuts.sort_by(f64::total_cmp);
        let leaves = tree
            .leaves()
            .iter()
            .map(|l| LeafRow {
                a: l.a,
                b: l.b,
                n: l.n,
                status: if l.model.is_some() { "unimodal" } else { "unresolved" },
                model: l.model.map(ModelSummary::from),
            })
            .collect();
        Self {
            alpha,
            n: tree.n,
            max_leaves,
            cuts,
            leaves,
            tree,
        }
    }

    pub fn unresolved(&self) -> usize {
        self.leaves.iter().filter(|l| l.status == "unresolved").count()
    }
}

impl Render for SplitReport {
    fn csv(&self) -> String {
        let mut s = String::from("leaf,a,b,n,status,components\n");
        for (i, l) in self.leaves.iter().enumerate() {
            let k = l.model.as_ref().map_or(0, |m| m.weights.len());
            let _ = writeln!(s, "{i},{},{},{},{},{k}", l.a, l.b, l.n, l.status);
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct ScoreRow {
    pub label: String,
    pub model: String,
    pub log_likelihood: f64,
    pub ks_distance: f64,
}

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub n_test: u64,
    pub n_reference: u64,
    pub seed: u64,
    pub scores: Vec<ScoreRow>,
    pub best_log_likelihood: String,
    pub best_ks: String,
}

impl Render for EvalReport {
    fn csv(&self) -> String {
        let mut s = String::from("label,model,log_likelihood,ks_distance\n");
        for r in &self.scores {
            let _ = writeln!(s, "{},{},{},{}", r.label, r.model, r.log_likelihood, r.ks_distance);
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct DecisionBench {
    pub suite: &'static str,
    pub alpha: f64,
    pub seed: u64,
    pub reps: usize,
    pub rows: Vec<DecisionResult>,
}

impl Render for DecisionBench {
    fn csv(&self) -> String {
        let mut s = String::from("row,expected,reps,correct,accuracy,reference_accuracy\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                r.name,
                verdict_name(r.expected),
                r.reps,
                r.correct,
                r.accuracy,
                r.reference_accuracy
            );
        }
        s
    }
}

/// Rows by models matrices; a row whose training sample was judged
/// multimodal has `null` entries and an error message.
#[derive(Debug, Serialize)]
pub struct ModelBench {
    pub suite: &'static str,
    pub alpha: f64,
    pub seed: u64,
    pub models: Vec<&'static str>,
    pub rows: Vec<String>,
    pub segments: Vec<Option<usize>>,
    pub log_likelihood: Vec<Vec<Option<f64>>>,
    pub ks_distance: Vec<Vec<Option<f64>>>,
    pub errors: Vec<Option<String>>,
}

impl Render for ModelBench {
    fn csv(&self) -> String {
        let mut s = String::from("row,model,log_likelihood,ks_distance\n");
        let cell = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, m) in self.models.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{row},{m},{},{}",
                    cell(self.log_likelihood[i][j]),
                    cell(self.ks_distance[i][j])
                );
            }
        }
        s
    }
}
