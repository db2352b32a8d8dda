//! Contour reduction to straight-line segments: strip-based curve fitting,
//! broken-line reconnection, and short-segment rejection.

use crate::contour::ContourChain;
use crate::error::{Error, Result};
use crate::geom::{axial_angle, Line, Point};
use serde::{Deserialize, Serialize};

/// A straight segment approximating a run of contour pixels.
///
/// `span` is the inclusive index range of the originating chain run;
/// consecutive fitted segments share their boundary index. Merged segments
/// keep the union of their spans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSegment {
    pub p0: Point,
    pub p1: Point,
    pub span: (usize, usize),
}

impl LineSegment {
    pub fn new(p0: Point, p1: Point, span: (usize, usize)) -> Self {
        Self { p0, p1, span }
    }

    pub fn length(&self) -> f64 {
        self.p0.distance(self.p1)
    }

    /// Unit direction from p0 to p1 (orientation is not meaningful; use
    /// [`axial_angle`] for comparisons).
    pub fn direction(&self) -> Point {
        (self.p1 - self.p0).normalized()
    }

    pub fn midpoint(&self) -> Point {
        self.p0.midpoint(self.p1)
    }

    /// Supporting infinite line.
    pub fn line(&self) -> Line {
        Line::through(self.p0, self.p1)
    }

    /// Debug export shape: [x0, y0, x1, y1].
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.p0.x, self.p0.y, self.p1.x, self.p1.y])
    }
}

/// Reduce the chain to maximal straight runs: a run grows while every chain
/// point in it stays within `strip_halfwidth` perpendicular distance of the
/// chord from the run's first to its current last point. Segment endpoints
/// are chain points, so spans stay traceable for valley location.
pub fn fit_polyline(chain: &ContourChain, strip_halfwidth: f64) -> Result<Vec<LineSegment>> {
    if chain.len() < 2 {
        return Err(Error::ChainTooShort { len: chain.len() });
    }
    assert!(strip_halfwidth > 0.0, "strip halfwidth must be positive");

    let n = chain.len();
    let mut segments = Vec::new();
    let mut start = 0usize;
    while start + 1 < n {
        let mut end = start + 1;
        while end + 1 < n && run_fits(chain, start, end + 1, strip_halfwidth) {
            end += 1;
        }
        segments.push(LineSegment::new(
            chain.point(start),
            chain.point(end),
            (start, end),
        ));
        start = end;
    }
    Ok(segments)
}

/// True when every chain point in `[start, end]` lies within `halfwidth`
/// of the chord through the run's endpoints.
fn run_fits(chain: &ContourChain, start: usize, end: usize, halfwidth: f64) -> bool {
    let a = chain.point(start);
    let b = chain.point(end);
    if a == b {
        // Coincident chord endpoints (spur revisits); only a degenerate
        // run fits.
        return false;
    }
    let line = Line::through(a, b);
    (start + 1..end).all(|i| line.distance(chain.point(i)) <= halfwidth)
}

/// Tolerances for merging broken-line fragments.
#[derive(Debug, Clone, Copy)]
pub struct ConnectParams {
    /// Max distance between the nearest endpoints of the two fragments.
    pub gap_max: f64,
    /// Max direction difference, degrees.
    pub angle_max_deg: f64,
    /// Max perpendicular offset of either fragment's endpoints from the
    /// other's supporting line.
    pub offset_max: f64,
}

/// Merge segment fragments that continue each other: nearest endpoints
/// within `gap_max`, directions within `angle_max`, and each endpoint of
/// one within `offset_max` of the other's supporting line. Pairs merge in
/// increasing-gap order until no pair qualifies; a merge spans the two
/// farthest endpoints. Output follows chain order of the merged spans.
pub fn connect_broken(segments: &[LineSegment], params: &ConnectParams) -> Vec<LineSegment> {
    let mut segs: Vec<LineSegment> = segments.to_vec();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if let Some(gap) = merge_gap(&segs[i], &segs[j], params) {
                    let better = match best {
                        None => true,
                        Some((_, _, bg)) => gap < bg,
                    };
                    if better {
                        best = Some((i, j, gap));
                    }
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        let merged = merge_pair(&segs[i], &segs[j]);
        segs.remove(j);
        segs.remove(i);
        segs.push(merged);
    }
    segs.sort_by_key(|s| s.span);
    segs
}

/// Endpoint gap when the pair qualifies for merging, else `None`.
fn merge_gap(a: &LineSegment, b: &LineSegment, params: &ConnectParams) -> Option<f64> {
    let gap = [
        a.p0.distance(b.p0),
        a.p0.distance(b.p1),
        a.p1.distance(b.p0),
        a.p1.distance(b.p1),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    if gap > params.gap_max {
        return None;
    }
    if axial_angle(a.direction(), b.direction()).to_degrees() > params.angle_max_deg {
        return None;
    }
    let la = a.line();
    let lb = b.line();
    let within = |line: &Line, s: &LineSegment| {
        line.distance(s.p0) <= params.offset_max && line.distance(s.p1) <= params.offset_max
    };
    if within(&la, b) && within(&lb, a) {
        Some(gap)
    } else {
        None
    }
}

/// Replacement segment between the two farthest endpoints of the pair.
fn merge_pair(a: &LineSegment, b: &LineSegment) -> LineSegment {
    let pts = [a.p0, a.p1, b.p0, b.p1];
    let mut best = (0, 1, 0.0);
    for i in 0..4 {
        for j in i + 1..4 {
            let d = pts[i].distance(pts[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    LineSegment::new(
        pts[best.0],
        pts[best.1],
        (a.span.0.min(b.span.0), a.span.1.max(b.span.1)),
    )
}

/// Keep segments with Euclidean length at least `min_length`, preserving
/// order.
pub fn filter_short(segments: &[LineSegment], min_length: f64) -> Vec<LineSegment> {
    assert!(min_length >= 0.0);
    segments
        .iter()
        .filter(|s| s.length() >= min_length)
        .copied()
        .collect()
}
