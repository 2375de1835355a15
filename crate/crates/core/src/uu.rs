//! The unimodality test proper.
//!
//! The search keeps a convex part `S_G`, an intermediate interval `P_I` and a
//! concave part `S_L`. While the data inside `P_I` are not uniform, the GL set
//! of that region is computed, reduced to consistent subsets, and each subset
//! is decomposed; its convex and concave sides are made sufficient by
//! forward/backward repair before recursing on the new intermediate interval.
//!
//! All point sets here are index lists into the values of one [`Dataset`].

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::Result;
use crate::hull::{gcm_indices, gl_from_indices, lcm_indices, GlPoint, GlPointSet, Tag};
use crate::ks::{check_uniformity_range, is_uniform_range, validate_alpha, KsOutcome};
use crate::split;

/// Hard bound on the recursion over intermediate parts.
pub const DEPTH_MAX: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Unimodal,
    Multimodal,
}

/// One linear piece of the fitted piecewise-linear cdf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub n: u64,
    pub ks_stat: f64,
    pub ks_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UuReport {
    pub verdict: Verdict,
    pub alpha: f64,
    pub n: u64,
    /// Breakpoints of the accepted set; empty for multimodal data.
    pub s_points: Vec<f64>,
    /// Positions of `s_points` among the distinct sorted values.
    pub s_indices: Vec<usize>,
    pub segments: Vec<Segment>,
    /// Suggested split locations; empty for unimodal data.
    pub cut_hints: Vec<f64>,
    pub recursion_depth: usize,
}

impl UuReport {
    pub fn is_unimodal(&self) -> bool {
        self.verdict == Verdict::Unimodal
    }
}

/// GL subset whose gcm points (indices `1..=split`) all precede its lcm points.
///
/// `split` is the position of the last gcm point, or 0 when the convex side
/// is missing.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistentSubset {
    pub points: Vec<GlPoint>,
    pub split: usize,
}

/// Convex side, intermediate pair and concave side of a consistent subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub convex: Vec<usize>,
    pub intermediate: (usize, usize),
    pub concave: Vec<usize>,
}

pub(crate) fn interior(points: &[GlPoint]) -> &[GlPoint] {
    &points[1..points.len() - 1]
}

fn retag(p: &GlPoint, tag: Tag) -> GlPoint {
    GlPoint { tag, ..*p }
}

fn assemble(gl: &GlPointSet, inner: Vec<GlPoint>) -> ConsistentSubset {
    let pts = gl.points();
    let mut points = Vec::with_capacity(inner.len() + 2);
    points.push(retag(&pts[0], Tag::Both));
    points.extend(inner);
    points.push(retag(&pts[pts.len() - 1], Tag::Both));
    let split = points[1..points.len() - 1]
        .iter()
        .rposition(|p| p.tag == Tag::Gcm)
        .map_or(0, |i| i + 1);
    ConsistentSubset { points, split }
}

/// The consistent subsets explored for `gl`: `[gl]` itself when it is
/// consistent, otherwise `GL_1`, which drops the gcm points after the first
/// lcm point, and `GL_2`, which drops the lcm points before the last gcm
/// point. A third subset follows when it differs from both: the leading run
/// of lcm-only points and the trailing run of gcm-only points are dropped,
/// and the rest is split where the most points survive. It rescues sets made
/// inconsistent only by stray vertices at the edges of the range.
pub fn consistent_subsets(gl: &GlPointSet) -> Vec<ConsistentSubset> {
    let inner = interior(gl.points());
    if gl.is_consistent() {
        let tagged = inner
            .iter()
            .map(|p| retag(p, if p.tag.is_gcm() { Tag::Gcm } else { Tag::Lcm }))
            .collect();
        return vec![assemble(gl, tagged)];
    }
    let first_l = inner.iter().position(|p| p.tag.is_lcm()).unwrap();
    let last_g = inner.iter().rposition(|p| p.tag.is_gcm()).unwrap();

    let mut drop_late_gcm = Vec::with_capacity(inner.len());
    for (i, p) in inner.iter().enumerate() {
        if i < first_l {
            drop_late_gcm.push(retag(p, Tag::Gcm));
        } else if p.tag.is_lcm() {
            drop_late_gcm.push(retag(p, Tag::Lcm));
        }
    }
    let mut drop_early_lcm = Vec::with_capacity(inner.len());
    for (i, p) in inner.iter().enumerate() {
        if i > last_g {
            drop_early_lcm.push(retag(p, Tag::Lcm));
        } else if p.tag.is_gcm() {
            drop_early_lcm.push(retag(p, Tag::Gcm));
        }
    }
    let mut out = vec![assemble(gl, drop_late_gcm), assemble(gl, drop_early_lcm)];
    let trimmed = assemble(gl, trim_edges(inner));
    if !out.contains(&trimmed) {
        out.push(trimmed);
    }
    out
}

/// `inner` without its leading lcm-only and trailing gcm-only runs.
fn edge_core(inner: &[GlPoint]) -> &[GlPoint] {
    let start = inner.iter().position(|p| p.tag.is_gcm()).unwrap_or(inner.len());
    let end = inner.iter().rposition(|p| p.tag.is_lcm()).map_or(0, |i| i + 1);
    if start >= end {
        return &[];
    }
    &inner[start..end]
}

fn trim_edges(inner: &[GlPoint]) -> Vec<GlPoint> {
    let core = edge_core(inner);
    split_at(core, widest_split(core))
}

/// Split position `k` maximising the gcm points in `inner[..k]` plus the lcm
/// points in `inner[k..]`; the first maximiser wins.
fn widest_split(inner: &[GlPoint]) -> usize {
    let mut score = inner.iter().filter(|p| p.tag.is_lcm()).count();
    let (mut best, mut best_score) = (0, score);
    for (k, p) in inner.iter().enumerate() {
        score = score + usize::from(p.tag.is_gcm()) - usize::from(p.tag.is_lcm());
        if score > best_score {
            (best, best_score) = (k + 1, score);
        }
    }
    best
}

fn split_at(inner: &[GlPoint], k: usize) -> Vec<GlPoint> {
    let gcm = inner[..k].iter().filter(|p| p.tag.is_gcm()).map(|p| retag(p, Tag::Gcm));
    let lcm = inner[k..].iter().filter(|p| p.tag.is_lcm()).map(|p| retag(p, Tag::Lcm));
    gcm.chain(lcm).collect()
}

/// Splits at the last gcm point `s_c`: convex side `s_1..=s_c`, intermediate
/// pair `(s_c, s_{c+1})`, concave side `s_{c+1}..=s_K`.
pub fn decompose(c: &ConsistentSubset) -> Decomposition {
    let idx: Vec<usize> = c.points.iter().map(|p| p.index).collect();
    let s = c.split;
    Decomposition {
        convex: idx[..=s].to_vec(),
        intermediate: (idx[s], idx[s + 1]),
        concave: idx[s + 1..].to_vec(),
    }
}

fn uniform_between(d: &Dataset, i: usize, j: usize, alpha: f64) -> bool {
    is_uniform_range(d, i, j, alpha)
}

/// Searches forward from `p[from]` for the first `p[j]`, `j > from + 1`,
/// with uniform data on `[p[from], p[j]]`. Returns that position in `p`.
pub fn forward_search(p: &[usize], from: usize, d: &Dataset, alpha: f64) -> Option<usize> {
    (from + 2..p.len()).find(|&j| uniform_between(d, p[from], p[j], alpha))
}

/// Drops the last accepted point, then walks back over `accepted` (positions
/// into `p`) for a left endpoint with uniform data up to `p[right]`.
/// Returns the truncated prefix with `right` appended.
pub fn backward_search(
    p: &[usize],
    accepted: &[usize],
    right: usize,
    d: &Dataset,
    alpha: f64,
) -> Option<Vec<usize>> {
    let mut kept = accepted[..accepted.len().saturating_sub(1)].to_vec();
    while let Some(&left) = kept.last() {
        if uniform_between(d, p[left], p[right], alpha) {
            kept.push(right);
            return Some(kept);
        }
        kept.pop();
    }
    None
}

/// Sufficient subset of the ordered index set `p`, keeping its first and
/// last element: every consecutive pair bounds uniform data.
pub fn sufficient(p: &[usize], d: &Dataset, alpha: f64) -> Option<Vec<usize>> {
    let last = p.len().checked_sub(1)?;
    let mut accepted: Vec<usize> = vec![0];
    while let Some(&left) = accepted.last() {
        if left == last {
            break;
        }
        let right = left + 1;
        if uniform_between(d, p[left], p[right], alpha) {
            accepted.push(right);
        } else if let Some(j) = forward_search(p, left, d, alpha) {
            accepted.push(j);
        } else {
            accepted = backward_search(p, &accepted, right, d, alpha)?;
        }
    }
    Some(accepted.into_iter().map(|i| p[i]).collect())
}

/// GL set of the ecdf of the values with indices `lo..=hi`, renormalised to
/// that range. Point indices refer to the whole dataset.
pub fn gl_of_range(d: &Dataset, lo: usize, hi: usize) -> GlPointSet {
    let pts = range_ecdf(d, lo, hi);
    let mut gl = gl_from_indices(&pts, &gcm_indices(&pts), &lcm_indices(&pts));
    gl.offset_indices(lo);
    gl
}

fn range_ecdf(d: &Dataset, lo: usize, hi: usize) -> Vec<(f64, f64)> {
    let base = if lo == 0 { 0 } else { d.cum_count(lo - 1) };
    let n = (d.cum_count(hi) - base) as f64;
    (lo..=hi)
        .map(|i| (d.values()[i], (d.cum_count(i) - base) as f64 / n))
        .collect()
}

/// Accepted state of a successful search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub convex: Vec<usize>,
    pub intermediate: (usize, usize),
    pub concave: Vec<usize>,
    pub depth: usize,
}

impl Solution {
    /// Union of the three parts, sorted and deduplicated.
    pub fn points(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .convex
            .iter()
            .chain([&self.intermediate.0, &self.intermediate.1])
            .chain(&self.concave)
            .copied()
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// One level of the search on the intermediate interval `intermediate`.
pub fn uu_recurse(
    convex: Vec<usize>,
    intermediate: (usize, usize),
    concave: Vec<usize>,
    d: &Dataset,
    alpha: f64,
    depth: usize,
) -> Option<Solution> {
    let (lo, hi) = intermediate;
    if uniform_between(d, lo, hi, alpha) {
        return Some(Solution {
            convex,
            intermediate,
            concave,
            depth,
        });
    }
    if depth >= DEPTH_MAX || hi <= lo + 1 {
        return None;
    }
    let gl = gl_of_range(d, lo, hi);
    for subset in consistent_subsets(&gl) {
        let parts = decompose(&subset);
        if parts.intermediate == intermediate {
            // no interior breakpoints, nothing left to refine
            continue;
        }
        let Some(new_convex) = sufficient(&parts.convex, d, alpha) else {
            continue;
        };
        let Some(new_concave) = sufficient(&parts.concave, d, alpha) else {
            continue;
        };
        let mut merged_convex = convex.clone();
        let skip = usize::from(convex.last() == new_convex.first());
        merged_convex.extend(new_convex.into_iter().skip(skip));
        let mut merged_concave = new_concave;
        merged_concave.extend(concave.iter().filter(|&&i| i != hi));
        if let Some(found) = uu_recurse(
            merged_convex,
            parts.intermediate,
            merged_concave,
            d,
            alpha,
            depth + 1,
        ) {
            return Some(found);
        }
    }
    None
}

/// Core search without report assembly. `None` means multimodal.
pub fn search(d: &Dataset, alpha: f64) -> Result<Option<Solution>> {
    validate_alpha(alpha)?;
    d.require_spread()?;
    let top = (0, d.n_unique() - 1);
    Ok(uu_recurse(Vec::new(), top, Vec::new(), d, alpha, 0))
}

/// Decides unimodality of `d` at significance level `alpha`.
pub fn uu_test(d: &Dataset, alpha: f64) -> Result<UuReport> {
    let found = search(d, alpha)?;
    Ok(match found {
        Some(sol) => {
            let s_indices = sol.points();
            let segments = segments_for(d, &s_indices, alpha)?;
            UuReport {
                verdict: Verdict::Unimodal,
                alpha,
                n: d.n_total(),
                s_points: s_indices.iter().map(|&i| d.values()[i]).collect(),
                s_indices,
                segments,
                cut_hints: Vec::new(),
                recursion_depth: sol.depth,
            }
        }
        None => UuReport {
            verdict: Verdict::Multimodal,
            alpha,
            n: d.n_total(),
            s_points: Vec::new(),
            s_indices: Vec::new(),
            segments: Vec::new(),
            cut_hints: split::cut_hints(d, alpha),
            recursion_depth: 0,
        },
    })
}

/// Per-segment uniformity evidence for consecutive breakpoints.
pub fn segments_for(d: &Dataset, s: &[usize], alpha: f64) -> Result<Vec<Segment>> {
    s.windows(2)
        .map(|w| {
            let (a, b) = (d.values()[w[0]], d.values()[w[1]]);
            let KsOutcome {
                statistic,
                p_value,
                n,
                ..
            } = check_uniformity_range(d, w[0], w[1], a, b, alpha)?;
            Ok(Segment {
                a,
                b,
                n,
                ks_stat: statistic,
                ks_p: p_value,
            })
        })
        .collect()
}
