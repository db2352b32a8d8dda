//! Finger-edge grouping: parallel pairs, V-shape pairs between adjacent
//! fingers, inter-finger center lines, valley key points, and the
//! triangle-height selection of the three main key points.

use crate::contour::ContourChain;
use crate::error::{Error, Result};
use crate::geom::{axial_angle, point_segment_distance, Line, Point};
use crate::polyline::LineSegment;
use serde::{Deserialize, Serialize};

/// Two near-parallel segments forming the edges of one finger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub left_edge: LineSegment,
    pub right_edge: LineSegment,
    /// Unit direction along the finger, pointing away from the palm.
    pub axis: Point,
    /// Position of the pair midpoint across the mean finger direction;
    /// pairs sort left-to-right by this key.
    pub order_key: f64,
}

impl ParallelPair {
    pub fn midpoint(&self) -> Point {
        self.left_edge.midpoint().midpoint(self.right_edge.midpoint())
    }
}

/// Classification of the gap between two adjacent fingers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VKind {
    Intersecting,
    Parallel,
}

/// The right edge of finger i paired with the left edge of finger i+1,
/// bounding one inter-finger space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VShapePair {
    pub line_a: LineSegment,
    pub line_b: LineSegment,
    pub kind: VKind,
    /// Unit direction pointing out of the valley toward the fingertips.
    pub outward: Point,
}

/// A valley bottom between two adjacent fingers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyPoint {
    pub position: Point,
    /// Ordinal of the inter-finger valley, 0-based left to right.
    pub valley_index: usize,
}

/// Tolerances for parallel-pair detection.
#[derive(Debug, Clone, Copy)]
pub struct PairParams {
    /// Max direction difference between the two edges, degrees.
    pub angle_tol_deg: f64,
    /// Admissible perpendicular separation as fractions of hand scale.
    pub width_range: (f64, f64),
    /// Min mutual longitudinal overlap as a fraction of the shorter edge.
    pub overlap_min: f64,
}

/// Group segments into finger-edge pairs. Every unordered pair within the
/// angle, width and overlap tolerances is a candidate; with a silhouette
/// mask available, the two edges must additionally face each other with
/// their foreground sides and enclose foreground, which separates true
/// finger pairs from the walls of an inter-finger gap and from palm-arc
/// fragments at the same separation. Each segment joins at most one pair,
/// conflicts resolved greedily in increasing separation order.
/// `hand_scale` is the silhouette bounding-box longer side and
/// `hand_centroid` anchors the away-from-palm orientation of pair axes.
pub fn pair_parallel(
    segments: &[LineSegment],
    hand_scale: f64,
    hand_centroid: Point,
    mask: Option<&crate::raster::BinaryImage>,
    params: &PairParams,
) -> Vec<ParallelPair> {
    assert!(hand_scale > 0.0, "hand scale must be known and positive");

    // Foreground side of each contour segment, resolved once.
    let fg_sides: Vec<Option<Point>> = segments
        .iter()
        .map(|s| mask.and_then(|m| foreground_side(s, m)))
        .collect();

    struct Candidate {
        i: usize,
        j: usize,
        separation: f64,
    }
    let mut candidates = Vec::new();
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            let a = &segments[i];
            let b = &segments[j];
            if axial_angle(a.direction(), b.direction()).to_degrees() > params.angle_tol_deg {
                continue;
            }
            let axis = mean_axis(a, b);
            let across = axis.perp();
            let separation = (b.midpoint() - a.midpoint()).dot(across).abs();
            let (wmin, wmax) = params.width_range;
            if separation < wmin * hand_scale || separation > wmax * hand_scale {
                continue;
            }
            let ia = (axis.dot(a.p0 - hand_centroid), axis.dot(a.p1 - hand_centroid));
            let ib = (axis.dot(b.p0 - hand_centroid), axis.dot(b.p1 - hand_centroid));
            let (a0, a1) = (ia.0.min(ia.1), ia.0.max(ia.1));
            let (b0, b1) = (ib.0.min(ib.1), ib.0.max(ib.1));
            let overlap = (a1.min(b1) - a0.max(b0)).max(0.0);
            if overlap < params.overlap_min * a.length().min(b.length()) {
                continue;
            }
            if let Some(mask) = mask {
                let toward_b = b.midpoint() - a.midpoint();
                if let Some(fa) = fg_sides[i] {
                    if fa.dot(toward_b) < 0.0 {
                        continue;
                    }
                }
                if let Some(fb) = fg_sides[j] {
                    if fb.dot(toward_b) > 0.0 {
                        continue;
                    }
                }
                if !interior_is_foreground(a, b, mask) {
                    continue;
                }
            }
            candidates.push(Candidate { i, j, separation });
        }
    }

    candidates.sort_by(|a, b| {
        a.separation
            .partial_cmp(&b.separation)
            .unwrap()
            .then(a.i.cmp(&b.i))
            .then(a.j.cmp(&b.j))
    });

    let mut used = vec![false; segments.len()];
    let mut raw_pairs = Vec::new();
    for c in &candidates {
        if used[c.i] || used[c.j] {
            continue;
        }
        used[c.i] = true;
        used[c.j] = true;
        raw_pairs.push((segments[c.i], segments[c.j]));
    }
    orient_pairs(raw_pairs, hand_centroid)
}

/// Mean undirected axis of two segments, sign-aligned to the first.
fn mean_axis(a: &LineSegment, b: &LineSegment) -> Point {
    let da = a.direction();
    let mut db = b.direction();
    if da.dot(db) < 0.0 {
        db = -db;
    }
    (da + db).normalized()
}

/// Unit perpendicular pointing toward the segment's foreground side, or
/// `None` when probing is ambiguous (the caller then skips the facing
/// check rather than reject).
fn foreground_side(seg: &LineSegment, mask: &crate::raster::BinaryImage) -> Option<Point> {
    let perp = seg.direction().perp();
    let mut plus = 0i32;
    let mut minus = 0i32;
    for t in [0.25, 0.5, 0.75] {
        let base = seg.p0 + (seg.p1 - seg.p0) * t;
        for d in [2.0, 4.0] {
            let p = base + perp * d;
            let q = base - perp * d;
            plus += mask.get_or_bg(p.x.round() as i64, p.y.round() as i64) as i32;
            minus += mask.get_or_bg(q.x.round() as i64, q.y.round() as i64) as i32;
        }
    }
    match plus.cmp(&minus) {
        std::cmp::Ordering::Greater => Some(perp),
        std::cmp::Ordering::Less => Some(-perp),
        std::cmp::Ordering::Equal => None,
    }
}

/// True when the strip between the two edges is mostly hand: a finger
/// interior, not an inter-finger gap. Samples the connector between the
/// segment midpoints.
fn interior_is_foreground(
    a: &LineSegment,
    b: &LineSegment,
    mask: &crate::raster::BinaryImage,
) -> bool {
    let ma = a.midpoint();
    let mb = b.midpoint();
    let mut hits = 0;
    const TS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
    for t in TS {
        let p = ma + (mb - ma) * t;
        if mask.get_or_bg(p.x.round() as i64, p.y.round() as i64) {
            hits += 1;
        }
    }
    hits * 2 > TS.len()
}

/// Assign outward axes, the left/right role of each edge, and order keys.
/// Left-to-right is defined in hand-intrinsic coordinates: midpoints are
/// projected onto the perpendicular of the mean finger direction, with the
/// finger direction itself anchored to point away from the hand centroid so
/// the ordering survives arbitrary image rotation.
fn orient_pairs(raw: Vec<(LineSegment, LineSegment)>, centroid: Point) -> Vec<ParallelPair> {
    let mut axes = Vec::with_capacity(raw.len());
    for (a, b) in &raw {
        let mut axis = mean_axis(a, b);
        let mid = a.midpoint().midpoint(b.midpoint());
        if axis.dot(mid - centroid) < 0.0 {
            axis = -axis;
        }
        axes.push(axis);
    }
    let mean_dir = axes
        .iter()
        .fold(Point::default(), |acc, &a| acc + a)
        .normalized();
    let across = mean_dir.perp();

    raw.into_iter()
        .zip(axes)
        .map(|((a, b), axis)| {
            let ka = a.midpoint().dot(across);
            let kb = b.midpoint().dot(across);
            let (left_edge, right_edge) = if ka <= kb { (a, b) } else { (b, a) };
            let mid = a.midpoint().midpoint(b.midpoint());
            ParallelPair {
                left_edge,
                right_edge,
                axis,
                order_key: mid.dot(across),
            }
        })
        .collect()
}

/// Tolerance (degrees) below which a V-shape pair counts as parallel.
pub const DEFAULT_PARALLEL_KIND_TOL_DEG: f64 = 3.0;

/// Sort finger pairs left to right and form one V-shape pair per
/// inter-finger space: right edge of pair i with left edge of pair i+1.
pub fn form_vshapes(pairs: &[ParallelPair], parallel_kind_tol_deg: f64) -> Result<Vec<VShapePair>> {
    if pairs.len() < 2 {
        return Err(Error::TooFewFingers { found: pairs.len() });
    }
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.order_key.partial_cmp(&b.order_key).unwrap());

    Ok(sorted
        .windows(2)
        .map(|w| {
            let line_a = w[0].right_edge;
            let line_b = w[1].left_edge;
            let kind = if axial_angle(line_a.direction(), line_b.direction()).to_degrees()
                <= parallel_kind_tol_deg
            {
                VKind::Parallel
            } else {
                VKind::Intersecting
            };
            VShapePair {
                line_a,
                line_b,
                kind,
                outward: (w[0].axis + w[1].axis).normalized(),
            }
        })
        .collect())
}

/// Center line of an inter-finger space: the angle bisector through the
/// intersection point for intersecting pairs, the midline for parallel
/// pairs. The returned direction points into the valley, toward the
/// proximal finger ends.
pub fn center_line(v: &VShapePair) -> Line {
    // Edge directions signed to point distally (out of the valley).
    let da = aligned(v.line_a.direction(), v.outward);
    let db = aligned(v.line_b.direction(), v.outward);
    let into_valley = -(da + db).normalized();

    match v.kind {
        VKind::Intersecting => {
            let la = v.line_a.line();
            let lb = v.line_b.line();
            match la.intersect(&lb) {
                Some(p) => Line::new(p, into_valley),
                // Numerically parallel despite the label; fall back to the
                // midline construction.
                None => midline(v, into_valley),
            }
        }
        VKind::Parallel => midline(v, into_valley),
    }
}

fn aligned(dir: Point, reference: Point) -> Point {
    if dir.dot(reference) < 0.0 {
        -dir
    } else {
        dir
    }
}

fn midline(v: &VShapePair, dir: Point) -> Line {
    let ma = v.line_a.midpoint();
    let foot = v.line_b.line().project(ma);
    Line::new(ma.midpoint(foot), dir)
}

/// Locate the valley bottom: search the contour arc between the proximal
/// ends of the V-shape's source spans for the point nearest the center
/// line, interpolating to sub-pixel where the center line crosses between
/// two chain points.
pub fn locate_key_point(
    center: &Line,
    chain: &ContourChain,
    v: &VShapePair,
    valley_index: usize,
) -> Result<KeyPoint> {
    let n = chain.len();
    if n == 0 {
        return Err(Error::NoValleyArc);
    }
    if v.line_a.span.1 >= n || v.line_b.span.1 >= n {
        return Err(Error::NoValleyArc);
    }

    let ia = proximal_chain_index(chain, &v.line_a, v.outward);
    let ib = proximal_chain_index(chain, &v.line_b, v.outward);

    // Two arcs join the proximal ends on a closed chain; the valley is the
    // short one (the long way goes around the whole hand). Open chains
    // only have the direct index range.
    let (first, len) = if chain.closed {
        let forward = (ib + n - ia) % n + 1;
        let backward = (ia + n - ib) % n + 1;
        if forward <= backward {
            (ia, forward)
        } else {
            (ib, backward)
        }
    } else {
        let lo = ia.min(ib);
        (lo, ia.max(ib) - lo + 1)
    };
    if len == 0 {
        return Err(Error::NoValleyArc);
    }

    let arc: Vec<Point> = (0..len).map(|k| chain.point((first + k) % n)).collect();
    let dists: Vec<f64> = arc.iter().map(|&p| center.signed_distance(p)).collect();

    let mut best = 0usize;
    for (i, d) in dists.iter().enumerate() {
        if d.abs() < dists[best].abs() {
            best = i;
        }
    }
    if dists[best] == 0.0 {
        return Ok(KeyPoint {
            position: arc[best],
            valley_index,
        });
    }

    // Sub-pixel refinement: interpolate where the center line crosses
    // between the best vertex and a straddling neighbor.
    let mut crossing: Option<Point> = None;
    let mut crossing_abs = f64::INFINITY;
    for nb in [best.wrapping_sub(1), best + 1] {
        if nb >= arc.len() || nb == usize::MAX {
            continue;
        }
        if dists[nb].signum() != dists[best].signum() {
            let t = dists[best] / (dists[best] - dists[nb]);
            let p = arc[best] + (arc[nb] - arc[best]) * t;
            if dists[nb].abs() < crossing_abs {
                crossing_abs = dists[nb].abs();
                crossing = Some(p);
            }
        }
    }
    Ok(KeyPoint {
        position: crossing.unwrap_or(arc[best]),
        valley_index,
    })
}

/// Chain index of the segment's proximal endpoint (the end nearer the
/// valley). Merged spans can wrap the chain cut, so the index is recovered
/// by nearest-point search over the span rather than taken from span ends.
fn proximal_chain_index(chain: &ContourChain, seg: &LineSegment, outward: Point) -> usize {
    let proximal = if outward.dot(seg.p0) <= outward.dot(seg.p1) {
        seg.p0
    } else {
        seg.p1
    };
    let mut best_idx = seg.span.0;
    let mut best_d = f64::INFINITY;
    for i in seg.span.0..=seg.span.1.min(chain.len() - 1) {
        let d = chain.point(i).distance(proximal);
        if d < best_d {
            best_d = d;
            best_idx = i;
        }
    }
    best_idx
}

/// Select the three main key points. Three points pass through; from four,
/// the two candidate triangles (P1,P2,P3) and (P2,P3,P4) are compared by
/// height (distance of the middle point from the line through the outer
/// two) and the smaller-height triple wins, which discards the thumb
/// valley. Ties keep (P1,P2,P3).
pub fn select_main_keypoints(points: &[KeyPoint]) -> Result<(KeyPoint, KeyPoint, KeyPoint)> {
    match points.len() {
        3 => Ok((points[0], points[1], points[2])),
        4 => {
            let h1 = triangle_height(points[0].position, points[1].position, points[2].position);
            let h2 = triangle_height(points[1].position, points[2].position, points[3].position);
            if h1 <= h2 {
                Ok((points[0], points[1], points[2]))
            } else {
                Ok((points[1], points[2], points[3]))
            }
        }
        n => Err(Error::WrongKeyPointCount { found: n }),
    }
}

/// Height of the triangle (a, b, c): perpendicular distance of the middle
/// point b from the line through a and c.
pub fn triangle_height(a: Point, b: Point, c: Point) -> f64 {
    if a.distance(c) == 0.0 {
        return b.distance(a);
    }
    Line::through(a, c).distance(b)
}

/// Distance from `p` to the finite segment `s`; used by overlay rendering
/// and a couple of tests.
pub fn segment_distance(p: Point, s: &LineSegment) -> f64 {
    point_segment_distance(p, s.p0, s.p1)
}
