//! Greatest convex minorant / least concave majorant breakpoints of an ecdf
//! and the merged, tagged GL point set.
//!
//! Hulls are built on the upper-right corners `(x_i, F(x_i))` of the step
//! function with a single monotone-chain pass, O(n) on sorted input.

use crate::data::StepEcdf;

const COLLINEAR_RTOL: f64 = 1e-12;

/// Membership of a GL point in the gcm and/or lcm breakpoint sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Gcm,
    Lcm,
    Both,
}

impl Tag {
    pub fn is_gcm(self) -> bool {
        matches!(self, Tag::Gcm | Tag::Both)
    }

    pub fn is_lcm(self) -> bool {
        matches!(self, Tag::Lcm | Tag::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlPoint {
    /// Index of the point in the ecdf it was computed from.
    pub index: usize,
    pub x: f64,
    pub f: f64,
    pub tag: Tag,
}

/// Ordered union of gcm and lcm breakpoints.
///
/// `max_g` is the largest gcm abscissa excluding the last point and `min_l`
/// the smallest lcm abscissa excluding the first point. When one side has
/// no interior points these fall back to the first (resp. last) abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct GlPointSet {
    points: Vec<GlPoint>,
    max_g: f64,
    min_l: f64,
}

impl GlPointSet {
    pub fn points(&self) -> &[GlPoint] {
        &self.points
    }

    pub fn max_g(&self) -> f64 {
        self.max_g
    }

    pub fn min_l(&self) -> f64 {
        self.min_l
    }

    /// `max_g < min_l`: every gcm point precedes every lcm point.
    pub fn is_consistent(&self) -> bool {
        self.max_g < self.min_l
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn offset_indices(&mut self, by: usize) {
        for p in &mut self.points {
            p.index += by;
        }
    }
}

/// `> 0` for a counter-clockwise turn o -> a -> b.
fn turn(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let l = (a.0 - o.0) * (b.1 - o.1);
    let r = (a.1 - o.1) * (b.0 - o.0);
    (l - r, COLLINEAR_RTOL * (l.abs() + r.abs()))
}

fn chain(points: &[(f64, f64)], lower: bool) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(64);
    for (i, &p) in points.iter().enumerate() {
        while hull.len() >= 2 {
            let o = points[hull[hull.len() - 2]];
            let a = points[hull[hull.len() - 1]];
            let (cross, tol) = turn(o, a, p);
            let keep = if lower { cross > tol } else { cross < -tol };
            if keep {
                break;
            }
            hull.pop();
        }
        hull.push(i);
    }
    hull
}

/// Indices of the lower convex hull vertices of `points` (sorted by x).
pub fn gcm_indices(points: &[(f64, f64)]) -> Vec<usize> {
    chain(points, true)
}

/// Indices of the upper concave hull vertices of `points` (sorted by x).
pub fn lcm_indices(points: &[(f64, f64)]) -> Vec<usize> {
    chain(points, false)
}

pub fn gcm_points(e: &StepEcdf) -> Vec<(f64, f64)> {
    let pts = e.points();
    gcm_indices(pts).into_iter().map(|i| pts[i]).collect()
}

pub fn lcm_points(e: &StepEcdf) -> Vec<(f64, f64)> {
    let pts = e.points();
    lcm_indices(pts).into_iter().map(|i| pts[i]).collect()
}

/// Merges gcm and lcm vertex index lists (both sorted, sharing endpoints)
/// into a tagged [`GlPointSet`].
pub fn gl_from_indices(points: &[(f64, f64)], g: &[usize], l: &[usize]) -> GlPointSet {
    let mut merged = Vec::with_capacity(g.len() + l.len());
    let (mut i, mut j) = (0, 0);
    while i < g.len() || j < l.len() {
        let (index, tag) = match (g.get(i), l.get(j)) {
            (Some(&a), Some(&b)) if a == b => {
                i += 1;
                j += 1;
                (a, Tag::Both)
            }
            (Some(&a), Some(&b)) if a < b => {
                i += 1;
                (a, Tag::Gcm)
            }
            (Some(_), Some(&b)) => {
                j += 1;
                (b, Tag::Lcm)
            }
            (Some(&a), None) => {
                i += 1;
                (a, Tag::Gcm)
            }
            (None, Some(&b)) => {
                j += 1;
                (b, Tag::Lcm)
            }
            (None, None) => unreachable!(),
        };
        let (x, f) = points[index];
        merged.push(GlPoint { index, x, f, tag });
    }
    // Endpoints belong to both hulls by construction.
    if let Some(first) = merged.first_mut() {
        first.tag = Tag::Both;
    }
    if let Some(last) = merged.last_mut() {
        last.tag = Tag::Both;
    }
    build(merged)
}

fn build(points: Vec<GlPoint>) -> GlPointSet {
    let k = points.len();
    let first_x = points[0].x;
    let last_x = points[k - 1].x;
    let max_g = points[..k - 1]
        .iter()
        .rev()
        .find(|p| p.tag.is_gcm())
        .map_or(first_x, |p| p.x);
    let min_l = points[1..]
        .iter()
        .find(|p| p.tag.is_lcm())
        .map_or(last_x, |p| p.x);
    GlPointSet {
        points,
        max_g,
        min_l,
    }
}

/// Builds a GL set directly from tagged points (first and last forced to `Both`).
pub fn gl_from_tagged(mut points: Vec<GlPoint>) -> GlPointSet {
    assert!(points.len() >= 2, "a GL set needs at least two points");
    points[0].tag = Tag::Both;
    let k = points.len();
    points[k - 1].tag = Tag::Both;
    build(points)
}

/// Merges explicit gcm and lcm point sequences by abscissa.
pub fn gl_union(g: &[(f64, f64)], l: &[(f64, f64)]) -> GlPointSet {
    let mut all: Vec<(f64, f64)> = g.iter().chain(l).copied().collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.dedup_by(|a, b| a.0 == b.0);
    let pos = |x: f64| all.iter().position(|p| p.0 == x).unwrap();
    let gi: Vec<usize> = g.iter().map(|p| pos(p.0)).collect();
    let li: Vec<usize> = l.iter().map(|p| pos(p.0)).collect();
    gl_from_indices(&all, &gi, &li)
}

/// GL set of an ecdf; point indices refer to `e.points()`.
pub fn gl_set(e: &StepEcdf) -> GlPointSet {
    let pts = e.points();
    gl_from_indices(pts, &gcm_indices(pts), &lcm_indices(pts))
}
