//! Cut points for multimodal data and recursive splitting into unimodal
//! pieces.
//!
//! A cut is placed in the middle of a valley: a stretch of the data whose
//! density is significantly lower than on either side of it.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::umm::Umm;
use crate::ks::is_uniform_range;
use crate::uu::{uu_test, Verdict};

pub const DEFAULT_MAX_LEAVES: usize = 64;

fn uniform(d: &Dataset, i: usize, j: usize, alpha: f64) -> bool {
    is_uniform_range(d, i, j, alpha)
}

/// Greedy piecewise-linear approximation of the ecdf: each segment starts at
/// the previous breakpoint and extends to the farthest value, found by
/// galloping then bisection, whose data still pass the uniformity test.
pub fn uniform_segments(d: &Dataset, alpha: f64) -> Vec<usize> {
    let last = d.n_unique() - 1;
    let mut s = vec![0];
    let mut i = 0;
    while i < last {
        let (mut good, mut step) = (i + 1, 1);
        let mut bad = None;
        while good < last {
            let j = (i + 2 * step).min(last);
            if uniform(d, i, j, alpha) {
                good = j;
                step *= 2;
            } else {
                bad = Some(j);
                break;
            }
        }
        if let Some(mut bad) = bad {
            while bad - good > 1 {
                let mid = good + (bad - good) / 2;
                if uniform(d, i, mid, alpha) {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
        }
        s.push(good);
        i = good;
    }
    s
}

/// Two-sided critical value of the standard normal at level `alpha`.
fn z_critical(alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 40.0_f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if libm::erfc(mid / std::f64::consts::SQRT_2) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// |z| of the hypothesis that two adjacent blocks share one density, with
/// counts `(m1, m2)` over widths `(w1, w2)`.
fn rate_z(m1: f64, w1: f64, m2: f64, w2: f64) -> f64 {
    let n = m1 + m2;
    let p = w1 / (w1 + w2);
    let var = n * p * (1.0 - p);
    if var <= 0.0 {
        return 0.0;
    }
    (m1 - n * p).abs() / var.sqrt()
}

#[derive(Debug, Clone, Copy)]
struct Block {
    lo: f64,
    hi: f64,
    count: f64,
}

impl Block {
    fn density(&self) -> f64 {
        self.count / (self.hi - self.lo)
    }
}

/// Blocks of [`uniform_segments`] after repeatedly merging the adjacent pair
/// whose densities are least distinguishable, until every adjacent pair
/// differs at level `alpha`.
fn density_blocks(d: &Dataset, alpha: f64) -> Vec<Block> {
    let s = uniform_segments(d, alpha);
    let v = d.values();
    let mut blocks: Vec<Block> = s
        .windows(2)
        .map(|w| Block {
            lo: v[w[0]],
            hi: v[w[1]],
            count: (d.cum_count(w[1]) - d.cum_count(w[0])) as f64,
        })
        .collect();
    let zc = z_critical(alpha);
    loop {
        let weakest = blocks
            .windows(2)
            .enumerate()
            .map(|(k, w)| {
                let (a, b) = (w[0], w[1]);
                (k, rate_z(a.count, a.hi - a.lo, b.count, b.hi - b.lo))
            })
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match weakest {
            Some((k, z)) if z < zc => {
                let b = blocks.remove(k + 1);
                blocks[k].hi = b.hi;
                blocks[k].count += b.count;
            }
            _ => break,
        }
    }
    blocks
}

/// Candidate cut points, ascending: midpoints of interior density blocks
/// that are significantly sparser than both neighbours. Blocks come from the
/// greedy uniform segmentation with indistinguishable neighbours merged.
pub fn cut_hints(d: &Dataset, alpha: f64) -> Vec<f64> {
    if d.n_unique() < 2 {
        return Vec::new();
    }
    let blocks = density_blocks(d, alpha);
    (1..blocks.len().saturating_sub(1))
        .filter(|&k| {
            let dk = blocks[k].density();
            dk < blocks[k - 1].density() && dk < blocks[k + 1].density()
        })
        .map(|k| 0.5 * (blocks[k].lo + blocks[k].hi))
        .collect()
}

/// First cut point of multimodal data, `None` for unimodal data.
pub fn first_cut_point(d: &Dataset, alpha: f64) -> Result<Option<f64>> {
    let report = uu_test(d, alpha)?;
    Ok(match report.verdict {
        Verdict::Unimodal => None,
        Verdict::Multimodal => report.cut_hints.first().copied(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeKind {
    /// Unimodal subset with its fitted model.
    Leaf { model: Umm },
    /// Multimodal subset left unsplit (budget exhausted or no usable cut).
    Unresolved,
    Split {
        cut: f64,
        left: Box<SplitTree>,
        right: Box<SplitTree>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitTree {
    pub a: f64,
    pub b: f64,
    pub n: u64,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub kind: NodeKind,
}

/// Flattened view of a leaf of a [`SplitTree`].
#[derive(Debug, Clone, PartialEq)]
pub struct LeafRef<'a> {
    pub a: f64,
    pub b: f64,
    pub n: u64,
    pub model: Option<&'a Umm>,
}

impl SplitTree {
    pub fn leaves(&self) -> Vec<LeafRef<'_>> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<LeafRef<'a>>) {
        match &self.kind {
            NodeKind::Leaf { model } => out.push(LeafRef {
                a: self.a,
                b: self.b,
                n: self.n,
                model: Some(model),
            }),
            NodeKind::Unresolved => out.push(LeafRef {
                a: self.a,
                b: self.b,
                n: self.n,
                model: None,
            }),
            NodeKind::Split { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// Cut points in ascending order.
    pub fn cuts(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_cuts(&mut out);
        out
    }

    fn collect_cuts(&self, out: &mut Vec<f64>) {
        if let NodeKind::Split { cut, left, right } = &self.kind {
            left.collect_cuts(out);
            out.push(*cut);
            right.collect_cuts(out);
        }
    }

    pub fn unresolved(&self) -> usize {
        self.leaves().iter().filter(|l| l.model.is_none()).count()
    }
}

enum Pending {
    Done(SplitTree),
    Multimodal { data: Dataset, cut: Option<f64> },
}

fn evaluate(d: Dataset, alpha: f64) -> Result<Pending> {
    let report = uu_test(&d, alpha)?;
    Ok(match report.verdict {
        Verdict::Unimodal => Pending::Done(SplitTree {
            a: d.min(),
            b: d.max(),
            n: d.n_total(),
            verdict: Verdict::Unimodal,
            kind: NodeKind::Leaf {
                model: Umm::from_report(&report.s_points, &d)?,
            },
        }),
        Verdict::Multimodal => Pending::Multimodal {
            cut: report.cut_hints.first().copied(),
            data: d,
        },
    })
}

fn unresolved(d: &Dataset) -> SplitTree {
    SplitTree {
        a: d.min(),
        b: d.max(),
        n: d.n_total(),
        verdict: Verdict::Multimodal,
        kind: NodeKind::Unresolved,
    }
}

fn partition(d: &Dataset, cut: f64) -> Option<(Dataset, Dataset)> {
    let k = d.values().partition_point(|&v| v <= cut);
    if k < 2 || d.n_unique() - k < 2 {
        return None;
    }
    Some((d.slice(0, k - 1), d.slice(k, d.n_unique() - 1)))
}

/// Splits `d` at cut points until every leaf is unimodal or `max_leaves`
/// leaves exist. Multimodal subsets are expanded breadth-first, so the leaf
/// budget is spent on the coarsest structure first. Values equal to a cut
/// go to the left child.
pub fn split_recursive(d: &Dataset, alpha: f64, max_leaves: usize) -> Result<SplitTree> {
    if max_leaves < 2 {
        return Err(Error::InvalidParameter("max_leaves must be at least 2".into()));
    }
    d.require_spread()?;
    // Arena of nodes; children are attached once the whole tree is decided.
    let mut nodes: Vec<Option<Pending>> = vec![Some(evaluate(d.clone(), alpha)?)];
    let mut children: Vec<Option<(f64, usize, usize)>> = vec![None];
    let mut leaves = 1usize;
    let mut frontier = std::collections::VecDeque::from([0usize]);
    while let Some(id) = frontier.pop_front() {
        if leaves >= max_leaves {
            break;
        }
        let Some(Pending::Multimodal { data, cut: Some(cut) }) = &nodes[id] else {
            continue;
        };
        let Some((left, right)) = partition(data, *cut) else {
            continue;
        };
        let cut = *cut;
        let l = nodes.len();
        nodes.push(Some(evaluate(left, alpha)?));
        nodes.push(Some(evaluate(right, alpha)?));
        children.push(None);
        children.push(None);
        children[id] = Some((cut, l, l + 1));
        leaves += 1;
        frontier.push_back(l);
        frontier.push_back(l + 1);
    }
    Ok(build(0, &mut nodes, &children))
}

fn build(id: usize, nodes: &mut [Option<Pending>], children: &[Option<(f64, usize, usize)>]) -> SplitTree {
    let pending = nodes[id].take().expect("each node is built once");
    match (pending, children[id]) {
        (Pending::Done(tree), _) => tree,
        (Pending::Multimodal { data, .. }, Some((cut, l, r))) => SplitTree {
            a: data.min(),
            b: data.max(),
            n: data.n_total(),
            verdict: Verdict::Multimodal,
            kind: NodeKind::Split {
                cut,
                left: Box::new(build(l, nodes, children)),
                right: Box::new(build(r, nodes, children)),
            },
        },
        (Pending::Multimodal { data, .. }, None) => unresolved(&data),
    }
}
