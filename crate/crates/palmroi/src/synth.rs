//! Parameterized synthetic hand renderer with analytic ground truth.
//!
//! Hands are built from an elliptical palm, capsule (stadium) fingers, and
//! circular valley fillets between adjacent fingers. The fillet geometry
//! makes every inter-finger valley bottom an exact analytic point on the
//! silhouette boundary, which is what the key-point and ROI tests measure
//! against. Crease strokes and shading give the palm enough texture for
//! correlation scoring; the whole model lives in hand-local coordinates and
//! is mapped through a global rotation/scale/translation, so ground truth
//! transforms exactly with the image.

use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, Line, Point};
use crate::raster::{BinaryImage, GrayImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// One finger: dimensions as fractions of image height, axis angle in
/// degrees from straight up (positive leans toward +x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingerParams {
    pub length_frac: f64,
    pub width_frac: f64,
    pub angle_deg: f64,
}

/// Full hand description. Fingers are listed left to right; a fifth entry
/// is the thumb. Adjacent axis angles must be non-decreasing (fingers may
/// touch but not cross).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandParams {
    pub fingers: Vec<FingerParams>,
    /// Palm ellipse semi-axes as fractions of image height.
    pub palm_axes: (f64, f64),
    pub rotation_deg: f64,
    pub scale: f64,
    /// Translation in pixels, applied after rotation and scaling.
    pub translation: (f64, f64),
    pub noise_sigma: f64,
    pub texture_seed: u64,
    /// Slit width between adjacent finger edges at base level, fraction of
    /// image height.
    pub base_gap_frac: f64,
    /// Valley fillet radius, fraction of image height.
    pub valley_fillet_frac: f64,
}

impl Default for HandParams {
    /// Open five-finger hand (thumb visible), no transform, no noise.
    fn default() -> Self {
        Self {
            fingers: vec![
                FingerParams { length_frac: 0.1160, width_frac: 0.03125, angle_deg: -14.0 },
                FingerParams { length_frac: 0.1500, width_frac: 0.03750, angle_deg: -5.0 },
                FingerParams { length_frac: 0.1625, width_frac: 0.03960, angle_deg: 3.0 },
                FingerParams { length_frac: 0.1417, width_frac: 0.03750, angle_deg: 11.0 },
                FingerParams { length_frac: 0.1146, width_frac: 0.03540, angle_deg: 60.0 },
            ],
            palm_axes: (0.1333, 0.125),
            rotation_deg: 0.0,
            scale: 1.0,
            translation: (0.0, 0.0),
            noise_sigma: 0.0,
            texture_seed: 1,
            base_gap_frac: 0.0146,
            valley_fillet_frac: 0.0073,
        }
    }
}

impl HandParams {
    /// Four-finger hand with the thumb tucked away.
    pub fn four_fingers() -> Self {
        let mut p = Self::default();
        p.fingers.truncate(4);
        p
    }

    pub fn with_rst(mut self, rotation_deg: f64, scale: f64, translation: (f64, f64)) -> Self {
        self.rotation_deg = rotation_deg;
        self.scale = scale;
        self.translation = translation;
        self
    }

    /// Set the gap angle of valley `idx` (between fingers idx and idx+1)
    /// by rotating finger idx+1 toward its left neighbor.
    pub fn with_gap_angle(mut self, idx: usize, gap_deg: f64) -> Self {
        assert!(idx + 1 < self.fingers.len());
        self.fingers[idx + 1].angle_deg = self.fingers[idx].angle_deg + gap_deg;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fingers.len() == 4 || self.fingers.len() == 5) {
            return Err(Error::InvalidParams(format!(
                "finger count must be 4 or 5, got {}",
                self.fingers.len()
            )));
        }
        for (i, f) in self.fingers.iter().enumerate() {
            if f.length_frac <= 0.0 || f.width_frac <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "finger {i} has non-positive dimensions"
                )));
            }
        }
        for w in self.fingers.windows(2) {
            if w[1].angle_deg < w[0].angle_deg {
                return Err(Error::InvalidParams(format!(
                    "finger axes must be non-decreasing left to right ({} after {})",
                    w[1].angle_deg, w[0].angle_deg
                )));
            }
        }
        if self.palm_axes.0 <= 0.0 || self.palm_axes.1 <= 0.0 {
            return Err(Error::InvalidParams("palm axes must be positive".into()));
        }
        if self.scale <= 0.0 {
            return Err(Error::InvalidParams("scale must be positive".into()));
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::InvalidParams("noise sigma must be non-negative".into()));
        }
        if self.base_gap_frac <= 0.0 || self.valley_fillet_frac <= 0.0 {
            return Err(Error::InvalidParams(
                "base gap and valley fillet must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Analytic truth accompanying a rendered hand.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    /// Valley bottoms, left to right (finger_count - 1 of them).
    pub valley_points: Vec<Point>,
    /// Per finger, left to right: (left edge line, right edge line).
    pub finger_edge_lines: Vec<(Line, Line)>,
    pub silhouette: BinaryImage,
}

/// Rotation-scale-translation map about the image center.
#[derive(Debug, Clone, Copy)]
pub struct Rst {
    rotation: f64,
    scale: f64,
    center: Point,
    translation: Point,
}

impl Rst {
    pub fn new(rotation_deg: f64, scale: f64, center: Point, translation: Point) -> Self {
        Self {
            rotation: rotation_deg.to_radians(),
            scale,
            center,
            translation,
        }
    }

    /// Model point to image coordinates.
    pub fn apply(&self, p: Point) -> Point {
        (p * self.scale).rotated(self.rotation) + self.center + self.translation
    }

    /// Rotate a unit direction.
    pub fn apply_dir(&self, d: Point) -> Point {
        d.rotated(self.rotation)
    }

    /// Image point back to model coordinates.
    pub fn invert(&self, p: Point) -> Point {
        (p - self.center - self.translation).rotated(-self.rotation) / self.scale
    }
}

struct Capsule {
    a: Point,
    b: Point,
    r: f64,
}

struct Web {
    wall_a: Line,
    wall_b: Line,
    sign_a: f64,
    sign_b: f64,
    center: Point,
    radius: f64,
    distal: Point,
    xi_tangent: f64,
    xi_min: f64,
}

struct Stroke {
    pts: Vec<Point>,
    halfwidth: f64,
    depth: f64,
    bbox: (f64, f64, f64, f64),
}

struct HandModel {
    palm_center: Point,
    palm_ax: f64,
    palm_ay: f64,
    capsules: Vec<Capsule>,
    edges: Vec<(Line, Line)>,
    webs: Vec<Web>,
    valleys: Vec<Point>,
    strokes: Vec<Stroke>,
    reject_radius: f64,
}

impl HandModel {
    fn palm_rho2(&self, h: Point) -> f64 {
        let dx = (h.x - self.palm_center.x) / self.palm_ax;
        let dy = (h.y - self.palm_center.y) / self.palm_ay;
        dx * dx + dy * dy
    }

    fn contains(&self, h: Point) -> bool {
        if h.norm() > self.reject_radius {
            return false;
        }
        if self.palm_rho2(h) <= 1.0 {
            return true;
        }
        for c in &self.capsules {
            if point_segment_distance(h, c.a, c.b) <= c.r {
                return true;
            }
        }
        for w in &self.webs {
            if w.wall_a.signed_distance(h) * w.sign_a < 0.0 {
                continue;
            }
            if w.wall_b.signed_distance(h) * w.sign_b < 0.0 {
                continue;
            }
            let rel = h - w.center;
            let xi = rel.dot(w.distal);
            if xi > w.xi_tangent || xi < w.xi_min {
                continue;
            }
            if rel.norm() < w.radius {
                continue;
            }
            return true;
        }
        false
    }

    /// Clean (noise-free) intensity at a model point; background is dark.
    fn intensity(&self, h: Point) -> f64 {
        if !self.contains(h) {
            return 28.0;
        }
        let rho2 = self.palm_rho2(h);
        let mut v = if rho2 <= 1.0 {
            204.0 - 26.0 * rho2.min(1.4)
        } else {
            193.0
        };
        for s in &self.strokes {
            let (x0, y0, x1, y1) = s.bbox;
            if h.x < x0 || h.x > x1 || h.y < y0 || h.y > y1 {
                continue;
            }
            let mut d = f64::INFINITY;
            for w in s.pts.windows(2) {
                d = d.min(point_segment_distance(h, w[0], w[1]));
                if d == 0.0 {
                    break;
                }
            }
            if d < s.halfwidth {
                let t = d / s.halfwidth;
                v -= s.depth * (1.0 - t * t);
            }
        }
        v
    }
}

/// Render a synthetic hand and its exact ground truth.
pub fn generate_hand(params: &HandParams, width: u32, height: u32) -> Result<(GrayImage, GroundTruth)> {
    params.validate()?;
    let model = build_model(params, width, height)?;
    let center = Point::new(width as f64 / 2.0, height as f64 / 2.0);
    let rst = Rst::new(
        params.rotation_deg,
        params.scale,
        center,
        Point::new(params.translation.0, params.translation.1),
    );

    let silhouette = BinaryImage::from_raw(
        width,
        height,
        {
            let mut data = Vec::with_capacity(width as usize * height as usize);
            for y in 0..height {
                for x in 0..width {
                    let h = rst.invert(Point::new(x as f64, y as f64));
                    data.push(model.contains(h));
                }
            }
            data
        },
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(params.texture_seed ^ 0x706c_6d70);
    let noise = if params.noise_sigma > 0.0 {
        Some(Normal::new(0.0, params.noise_sigma).expect("validated sigma"))
    } else {
        None
    };
    let mut data = Vec::with_capacity(width as usize * height as usize);
    for y in 0..height {
        for x in 0..width {
            let h = rst.invert(Point::new(x as f64, y as f64));
            let mut v = model.intensity(h);
            if let Some(n) = &noise {
                v += n.sample(&mut rng);
            }
            data.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    let image = GrayImage::from_raw(width, height, data)?;

    let gt = GroundTruth {
        valley_points: model.valleys.iter().map(|&v| rst.apply(v)).collect(),
        finger_edge_lines: model
            .edges
            .iter()
            .map(|(l, r)| {
                (
                    Line {
                        point: rst.apply(l.point),
                        dir: rst.apply_dir(l.dir),
                    },
                    Line {
                        point: rst.apply(r.point),
                        dir: rst.apply_dir(r.dir),
                    },
                )
            })
            .collect(),
        silhouette,
    };
    Ok((image, gt))
}

fn build_model(params: &HandParams, width: u32, height: u32) -> Result<HandModel> {
    let hf = height as f64;
    let palm_center = Point::new(0.0, 0.1 * hf);
    let palm_ax = params.palm_axes.0 * hf;
    let palm_ay = params.palm_axes.1 * hf;
    let base_gap = params.base_gap_frac * hf;
    let fillet = params.valley_fillet_frac * hf;
    let root_len = 0.046 * hf;
    let web_reach = 0.046 * hf;
    let lift = 0.021 * hf;

    let has_thumb = params.fingers.len() == 5;
    let regular = if has_thumb {
        &params.fingers[..4]
    } else {
        &params.fingers[..]
    };

    // Regular finger bases along the palm top, spaced so inner edges sit
    // base_gap apart, lifted just above the ellipse so the valley fillets
    // stay clear of it.
    let halfwidths: Vec<f64> = regular.iter().map(|f| f.width_frac * hf / 2.0).collect();
    let mut xs = vec![0.0];
    for i in 1..regular.len() {
        xs.push(xs[i - 1] + halfwidths[i - 1] + halfwidths[i] + base_gap);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    for x in &mut xs {
        *x -= mean;
    }
    let ellipse_top = |x: f64| -> f64 {
        let k = 1.0 - (x / palm_ax) * (x / palm_ax);
        palm_center.y - palm_ay * k.max(0.0).sqrt()
    };

    let mut capsules = Vec::new();
    let mut edges = Vec::new();
    let mut axes = Vec::new();
    for (i, f) in regular.iter().enumerate() {
        let theta = f.angle_deg.to_radians();
        let u = Point::new(theta.sin(), -theta.cos());
        let n = u.perp();
        let base = Point::new(xs[i], ellipse_top(xs[i]) - lift);
        let w = halfwidths[i];
        capsules.push(Capsule {
            a: base - u * root_len,
            b: base + u * (f.length_frac * hf),
            r: w,
        });
        edges.push((Line::new(base - n * w, u), Line::new(base + n * w, u)));
        axes.push(u);
    }

    if has_thumb {
        let f = params.fingers[4];
        let theta = f.angle_deg.to_radians();
        let u = Point::new(theta.sin(), -theta.cos());
        let n = u.perp();
        let w = f.width_frac * hf / 2.0;
        let base = palm_center + Point::new(0.85 * palm_ax, -0.15 * palm_ay);
        capsules.push(Capsule {
            a: base - u * root_len,
            b: base + u * (f.length_frac * hf),
            r: w,
        });
        edges.push((Line::new(base - n * w, u), Line::new(base + n * w, u)));
        axes.push(u);
    }

    // Valleys between adjacent regular fingers use a circular fillet whose
    // proximal point is the exact valley bottom.
    let mut webs = Vec::new();
    let mut valleys = Vec::new();
    for i in 0..regular.len() - 1 {
        let wall_a = edges[i].1; // right edge of finger i
        let wall_b = edges[i + 1].0; // left edge of finger i+1
        let ua = axes[i];
        let ub = axes[i + 1];
        let alpha = (params.fingers[i + 1].angle_deg - params.fingers[i].angle_deg).to_radians();
        let distal = (ua + ub).normalized();

        // The valley bottom must clear the palm ellipse or it would not be
        // a silhouette boundary point; the fillet grows as needed until
        // its proximal point sits `clearance` outside the ellipse.
        let clearance = 3.0 * hf / 480.0;
        let (center, radius, bottom) = if alpha >= 0.5f64.to_radians() {
            let apex = wall_a
                .intersect(&wall_b)
                .expect("non-parallel walls intersect");
            let s = (alpha / 2.0).sin();
            let mut depth = fillet * (1.0 - s) / s;
            if let Some(exit) = ray_ellipse_exit(apex, distal, palm_center, palm_ax, palm_ay) {
                depth = depth.max((exit - apex).dot(distal) + clearance);
            }
            let radius = depth * s / (1.0 - s);
            let bottom = apex + distal * depth;
            (bottom + distal * radius, radius, bottom)
        } else {
            // (Near-)parallel slit: the tangent circle radius is half the
            // gap, seated at base level or just clear of the ellipse,
            // whichever is more distal.
            let g = wall_b.distance(wall_a.point);
            let radius = g / 2.0;
            let foot = wall_b.project(wall_a.point);
            let mut bottom = wall_a.point.midpoint(foot);
            if let Some(exit) = ray_ellipse_exit(bottom - distal * (4.0 * palm_ay), distal, palm_center, palm_ax, palm_ay) {
                let lift_needed = (exit - bottom).dot(distal) + clearance;
                if lift_needed > 0.0 {
                    bottom = bottom + distal * lift_needed;
                }
            }
            (bottom + distal * radius, radius, bottom)
        };

        let probe = center - distal * (2.0 * radius + 1.0);
        webs.push(Web {
            wall_a,
            wall_b,
            sign_a: wall_a.signed_distance(probe).signum(),
            sign_b: wall_b.signed_distance(probe).signum(),
            center,
            radius,
            distal,
            xi_tangent: -radius * (alpha / 2.0).sin(),
            xi_min: -(radius + web_reach),
        });
        valleys.push(bottom);
    }

    // The thumb crotch has no fillet: the natural boundary there is the
    // palm ellipse arc, and the valley bottom is where the inter-edge
    // bisector exits the ellipse.
    if has_thumb {
        let wall_a = edges[3].1;
        let wall_b = edges[4].0;
        let distal = (axes[3] + axes[4]).normalized();
        let apex = wall_a
            .intersect(&wall_b)
            .ok_or_else(|| Error::InvalidParams("thumb parallel to index".into()))?;
        let bottom = ray_ellipse_exit(apex, distal, palm_center, palm_ax, palm_ay)
            .ok_or_else(|| Error::InvalidParams("thumb valley leaves the palm".into()))?;
        valleys.push(bottom);
    }

    let mut reject_radius = palm_center.norm() + palm_ax.max(palm_ay);
    for c in &capsules {
        reject_radius = reject_radius.max(c.a.norm() + c.r).max(c.b.norm() + c.r);
    }
    reject_radius += 2.0;

    // Identity-transform fit check: the hand must stay within a 25% margin
    // of the frame (12.5% of each dimension per side).
    let cx = width as f64 / 2.0;
    let cy = height as f64 / 2.0;
    let (x_lo, x_hi) = (0.125 * width as f64, 0.875 * width as f64);
    let (y_lo, y_hi) = (0.125 * height as f64, 0.875 * height as f64);
    let mut extremes = vec![
        palm_center + Point::new(palm_ax, 0.0),
        palm_center - Point::new(palm_ax, 0.0),
        palm_center + Point::new(0.0, palm_ay),
        palm_center - Point::new(0.0, palm_ay),
    ];
    for c in &capsules {
        for p in [c.a, c.b] {
            extremes.push(p + Point::new(c.r, c.r));
            extremes.push(p - Point::new(c.r, c.r));
        }
    }
    for e in &extremes {
        let px = e.x + cx;
        let py = e.y + cy;
        if px < x_lo || px > x_hi || py < y_lo || py > y_hi {
            return Err(Error::InvalidParams(format!(
                "hand extent ({px:.0}, {py:.0}) exceeds the 25% frame margin at identity"
            )));
        }
    }

    let strokes = build_strokes(params, palm_center, palm_ax, palm_ay, hf);

    Ok(HandModel {
        palm_center,
        palm_ax,
        palm_ay,
        capsules,
        edges,
        webs,
        valleys,
        strokes,
        reject_radius,
    })
}

/// Final exit point of the ray `origin + t * dir` (largest t > 0) from
/// the ellipse; `None` when the forward ray never meets it.
fn ray_ellipse_exit(origin: Point, dir: Point, c: Point, ax: f64, ay: f64) -> Option<Point> {
    let ox = (origin.x - c.x) / ax;
    let oy = (origin.y - c.y) / ay;
    let dx = dir.x / ax;
    let dy = dir.y / ay;
    let a = dx * dx + dy * dy;
    let b = 2.0 * (ox * dx + oy * dy);
    let k = ox * ox + oy * oy - 1.0;
    let disc = b * b - 4.0 * a * k;
    if disc < 0.0 || a == 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t = ((-b + sq) / (2.0 * a)).max((-b - sq) / (2.0 * a));
    if t > 0.0 {
        Some(origin + dir * t)
    } else {
        None
    }
}

/// Quadratic Bezier sampled into a polyline.
fn bezier(p0: Point, c: Point, p1: Point, samples: usize) -> Vec<Point> {
    (0..=samples)
        .map(|i| {
            let t = i as f64 / samples as f64;
            let s = 1.0 - t;
            p0 * (s * s) + c * (2.0 * s * t) + p1 * (t * t)
        })
        .collect()
}

fn build_strokes(
    params: &HandParams,
    palm_center: Point,
    palm_ax: f64,
    palm_ay: f64,
    hf: f64,
) -> Vec<Stroke> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.texture_seed);
    let thick = 0.0063 * hf; // ~3 px at 480
    let mut strokes = Vec::new();

    // Principal lines, anchored in ellipse-normalized coordinates with a
    // seeded jitter so different hands differ.
    let anchored = [
        ((-0.76, -0.34), (-0.08, -0.62), (0.78, -0.28), 72.0),
        ((-0.80, 0.02), (-0.12, -0.22), (0.72, 0.22), 64.0),
        ((-0.30, -0.50), (-0.66, 0.10), (-0.36, 0.78), 58.0),
    ];
    let jitter = |rng: &mut ChaCha8Rng| rng.gen_range(-0.05..0.05);
    for &((x0, y0), (cx, cy), (x1, y1), depth) in &anchored {
        let m = |x: f64, y: f64, rng: &mut ChaCha8Rng| {
            palm_center
                + Point::new(
                    (x + jitter(rng)) * palm_ax,
                    (y + jitter(rng)) * palm_ay,
                )
        };
        let p0 = m(x0, y0, &mut rng);
        let c = m(cx, cy, &mut rng);
        let p1 = m(x1, y1, &mut rng);
        strokes.push(make_stroke(bezier(p0, c, p1, 32), thick, depth));
    }

    // A couple of shorter seeded wrinkles.
    for _ in 0..2 {
        let pick = |rng: &mut ChaCha8Rng| {
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r: f64 = rng.gen_range(0.15..0.7);
            palm_center + Point::new(a.cos() * r * palm_ax, a.sin() * r * palm_ay)
        };
        let p0 = pick(&mut rng);
        let p1 = pick(&mut rng);
        let c = p0.midpoint(p1) + Point::new(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
        strokes.push(make_stroke(bezier(p0, c, p1, 24), thick * 0.8, 40.0));
    }
    strokes
}

fn make_stroke(pts: Vec<Point>, halfwidth: f64, depth: f64) -> Stroke {
    let mut bbox = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &pts {
        bbox.0 = bbox.0.min(p.x);
        bbox.1 = bbox.1.min(p.y);
        bbox.2 = bbox.2.max(p.x);
        bbox.3 = bbox.3.max(p.y);
    }
    Stroke {
        pts,
        halfwidth,
        depth,
        bbox: (
            bbox.0 - halfwidth,
            bbox.1 - halfwidth,
            bbox.2 + halfwidth,
            bbox.3 + halfwidth,
        ),
    }
}

/// Gesture classes mirroring the capture protocol the tests emulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GestureClass {
    /// Normal spread, four fingers.
    Open,
    /// Randomized spreads and finger shapes, four or five fingers.
    Varied,
    /// One inter-finger gap closed to at most 2 degrees.
    Closed,
    /// Thumb visible (five fingers, four valleys).
    Thumb,
}

/// Draw hand parameters for a gesture class. RST fields are left at
/// identity; combine with [`HandParams::with_rst`].
pub fn sample_params(class: GestureClass, rng: &mut impl Rng) -> HandParams {
    let mut p = match class {
        GestureClass::Open | GestureClass::Closed => HandParams::four_fingers(),
        GestureClass::Thumb => HandParams::default(),
        GestureClass::Varied => {
            if rng.gen_bool(0.5) {
                HandParams::four_fingers()
            } else {
                HandParams::default()
            }
        }
    };
    // Jitter finger shapes.
    for f in &mut p.fingers {
        f.length_frac *= rng.gen_range(0.9..1.1);
        f.width_frac *= rng.gen_range(0.9..1.08);
    }
    // Re-deal the regular gap angles.
    let gaps: Vec<f64> = match class {
        GestureClass::Open => (0..3).map(|_| rng.gen_range(6.0..11.0)).collect(),
        GestureClass::Varied => (0..3).map(|_| rng.gen_range(4.0..15.0)).collect(),
        GestureClass::Closed => {
            let closed_at = rng.gen_range(0..3usize);
            (0..3)
                .map(|i| {
                    if i == closed_at {
                        rng.gen_range(0.0..2.0)
                    } else {
                        rng.gen_range(5.0..12.0)
                    }
                })
                .collect()
        }
        GestureClass::Thumb => (0..3).map(|_| rng.gen_range(5.0..12.0)).collect(),
    };
    let start = rng.gen_range(-17.0..-11.0);
    p.fingers[0].angle_deg = start;
    for i in 0..3 {
        p.fingers[i + 1].angle_deg = p.fingers[i].angle_deg + gaps[i];
    }
    if p.fingers.len() == 5 {
        p.fingers[4].angle_deg = rng.gen_range(52.0..68.0);
        p.fingers[4].length_frac = rng.gen_range(0.10..0.125);
    }
    p.texture_seed = rng.gen();
    p
}

/// Draw a random rotation/scale/translation triple that keeps the hand in
/// frame for the given scale range and translation fraction.
pub fn sample_rst(
    rng: &mut impl Rng,
    scale_range: (f64, f64),
    translation_frac: f64,
    width: u32,
    height: u32,
) -> (f64, f64, (f64, f64)) {
    let rot = rng.gen_range(0.0..360.0);
    let scale = rng.gen_range(scale_range.0..scale_range.1);
    let tx = rng.gen_range(-translation_frac..translation_frac) * width as f64;
    let ty = rng.gen_range(-translation_frac..translation_frac) * height as f64;
    (rot, scale, (tx, ty))
}

/// Intersection-over-union of two masks of equal dimensions.
pub fn mask_iou(a: &BinaryImage, b: &BinaryImage) -> f64 {
    assert_eq!((a.width(), a.height()), (b.width(), b.height()));
    let mut inter = 0usize;
    let mut union = 0usize;
    for (&x, &y) in a.data().iter().zip(b.data()) {
        if x && y {
            inter += 1;
        }
        if x || y {
            union += 1;
        }
    }
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}
