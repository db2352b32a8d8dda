//! Palm coordinate frame construction and scale-adaptive square ROI
//! extraction, plus the normalized cross-correlation consistency score.

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::grouping::KeyPoint;
use crate::raster::GrayImage;
use serde::{Deserialize, Serialize};

/// Palm-intrinsic coordinate system: origin at the midpoint of K1K3,
/// y-axis along K1 -> K3, x-axis perpendicular pointing into the palm,
/// scale = |K1K3|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PalmFrame {
    pub origin: Point,
    pub x_axis: Point,
    pub y_axis: Point,
    pub scale: f64,
}

/// Extraction parameters and flags recorded with every ROI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoiProvenance {
    pub frame: PalmFrame,
    pub beta: f64,
    pub delta: f64,
    /// Set when any sample fell outside the source image.
    pub out_of_bounds: bool,
}

/// Square palm region resampled to a fixed resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct RoiImage {
    pub side: u32,
    pub data: Vec<u8>,
    pub provenance: RoiProvenance,
}

impl RoiImage {
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.data[y as usize * self.side as usize + x as usize]
    }

    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_raw(self.side, self.side, self.data.clone())
            .expect("side * side buffer by construction")
    }
}

/// Build the palm frame from the outer key points. K2 is unused: the axis
/// runs K1 -> K3 and the hand centroid resolves which perpendicular points
/// into the palm.
pub fn build_frame(k1: &KeyPoint, _k2: &KeyPoint, k3: &KeyPoint, hand_centroid: Point) -> Result<PalmFrame> {
    let dist = k1.position.distance(k3.position);
    if dist < 4.0 {
        return Err(Error::DegenerateFrame { dist });
    }
    let origin = k1.position.midpoint(k3.position);
    let y_axis = (k3.position - k1.position).normalized();
    let mut x_axis = y_axis.perp();
    if x_axis.dot(hand_centroid - origin) < 0.0 {
        x_axis = -x_axis;
    }
    Ok(PalmFrame {
        origin,
        x_axis,
        y_axis,
        scale: dist,
    })
}

/// Extract the palm square: centered at `origin + delta * scale * x_axis`,
/// side `beta * scale`, axes aligned to the frame, resampled to
/// `out_side^2` with bilinear interpolation. Samples outside the image
/// read 0 and set the out-of-bounds flag; more than 25% outside is an
/// error.
pub fn extract_roi(
    img: &GrayImage,
    frame: &PalmFrame,
    beta: f64,
    delta: f64,
    out_side: u32,
) -> Result<RoiImage> {
    if beta <= 0.0 || delta < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "roi factors must satisfy beta > 0, delta >= 0 (got beta={beta}, delta={delta})"
        )));
    }
    if out_side < 16 {
        return Err(Error::InvalidConfig(format!(
            "roi output side must be at least 16 px, got {out_side}"
        )));
    }

    let center = frame.origin + frame.x_axis * (delta * frame.scale);
    let side = beta * frame.scale;
    let n = out_side as usize;

    let mut data = Vec::with_capacity(n * n);
    let mut outside = 0usize;
    for j in 0..n {
        let v = (j as f64 + 0.5) / n as f64 - 0.5;
        for i in 0..n {
            let u = (i as f64 + 0.5) / n as f64 - 0.5;
            let p = center + frame.x_axis * (u * side) + frame.y_axis * (v * side);
            match sample_bilinear(img, p) {
                Some(val) => data.push(val),
                None => {
                    outside += 1;
                    data.push(0);
                }
            }
        }
    }

    let outside_frac = outside as f64 / (n * n) as f64;
    if outside_frac > 0.25 {
        return Err(Error::RoiOutOfImage {
            outside_frac: outside_frac * 100.0,
        });
    }
    Ok(RoiImage {
        side: out_side,
        data,
        provenance: RoiProvenance {
            frame: *frame,
            beta,
            delta,
            out_of_bounds: outside > 0,
        },
    })
}

/// Bilinear sample at continuous coordinates (pixel centers at integers).
/// `None` outside the valid interpolation domain.
fn sample_bilinear(img: &GrayImage, p: Point) -> Option<u8> {
    let (w, h) = (img.width() as f64, img.height() as f64);
    if p.x < 0.0 || p.y < 0.0 || p.x > w - 1.0 || p.y > h - 1.0 {
        return None;
    }
    let x0 = p.x.floor().min(w - 2.0).max(0.0);
    let y0 = p.y.floor().min(h - 2.0).max(0.0);
    let fx = p.x - x0;
    let fy = p.y - y0;
    let (x0, y0) = (x0 as u32, y0 as u32);
    let v00 = img.get(x0, y0) as f64;
    let v10 = img.get(x0 + 1, y0) as f64;
    let v01 = img.get(x0, y0 + 1) as f64;
    let v11 = img.get(x0 + 1, y0 + 1) as f64;
    let v = v00 * (1.0 - fx) * (1.0 - fy)
        + v10 * fx * (1.0 - fy)
        + v01 * (1.0 - fx) * fy
        + v11 * fx * fy;
    Some(v.round().clamp(0.0, 255.0) as u8)
}

/// Zero-mean normalized cross-correlation of two ROIs, in [-1, 1]. Two
/// equal constant rasters score 1; a constant raster against anything
/// different scores 0.
pub fn roi_similarity(a: &RoiImage, b: &RoiImage) -> Result<f64> {
    if a.side != b.side {
        return Err(Error::SideMismatch { a: a.side, b: b.side });
    }
    Ok(ncc(&a.data, &b.data))
}

/// Zero-mean NCC on raw rasters of equal length.
pub fn ncc(a: &[u8], b: &[u8]) -> f64 {
    assert_eq!(a.len(), b.len());
    if a == b {
        return 1.0;
    }
    let n = a.len() as f64;
    let mean_a = a.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mean_b = b.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mut num = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x as f64 - mean_a;
        let dy = y as f64 - mean_b;
        num += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 && vb == 0.0 {
        return if a == b { 1.0 } else { 0.0 };
    }
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    num / (va.sqrt() * vb.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn kp(x: f64, y: f64, i: usize) -> KeyPoint {
        KeyPoint {
            position: Point::new(x, y),
            valley_index: i,
        }
    }

    fn roi_from(data: Vec<u8>, side: u32, frame: PalmFrame) -> RoiImage {
        RoiImage {
            side,
            data,
            provenance: RoiProvenance {
                frame,
                beta: 1.0,
                delta: 0.0,
                out_of_bounds: false,
            },
        }
    }

    fn axis_frame() -> PalmFrame {
        build_frame(
            &kp(0.0, 10.0, 0),
            &kp(1.0, 0.0, 1),
            &kp(0.0, -10.0, 2),
            Point::new(50.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn frame_from_axis_aligned_keypoints() {
        let f = axis_frame();
        assert_eq!(f.origin, Point::new(0.0, 0.0));
        assert_eq!(f.y_axis, Point::new(0.0, -1.0));
        assert_eq!(f.x_axis, Point::new(1.0, 0.0));
        assert_eq!(f.scale, 20.0);
        assert!(f.x_axis.dot(f.y_axis).abs() <= 1e-9);
    }

    #[test]
    fn frame_orientation_follows_centroid() {
        let f = build_frame(
            &kp(0.0, 10.0, 0),
            &kp(1.0, 0.0, 1),
            &kp(0.0, -10.0, 2),
            Point::new(-50.0, 0.0),
        )
        .unwrap();
        assert_eq!(f.x_axis, Point::new(-1.0, 0.0));
    }

    #[test]
    fn degenerate_frame_rejected() {
        let e = build_frame(
            &kp(0.0, 0.0, 0),
            &kp(1.0, 0.0, 1),
            &kp(2.0, 0.0, 2),
            Point::new(0.0, 50.0),
        );
        assert!(matches!(e, Err(Error::DegenerateFrame { .. })));
    }

    #[test]
    fn frame_rotates_with_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let k1 = Point::new(rng.gen_range(-40.0..40.0), rng.gen_range(-40.0..40.0));
            let k3 = Point::new(rng.gen_range(-40.0..40.0), rng.gen_range(-40.0..40.0));
            if k1.distance(k3) < 5.0 {
                continue;
            }
            let centroid = Point::new(rng.gen_range(60.0..90.0), rng.gen_range(60.0..90.0));
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let rot = |p: Point| p.rotated(theta);

            let base = build_frame(&kp(k1.x, k1.y, 0), &kp(0.0, 0.0, 1), &kp(k3.x, k3.y, 2), centroid).unwrap();
            let moved = build_frame(
                &kp(rot(k1).x, rot(k1).y, 0),
                &kp(0.0, 0.0, 1),
                &kp(rot(k3).x, rot(k3).y, 2),
                rot(centroid),
            )
            .unwrap();

            assert!((moved.scale - base.scale).abs() < 1e-6);
            assert!(moved.origin.distance(rot(base.origin)) < 1e-6);
            assert!(moved.y_axis.distance(rot(base.y_axis)) < 1e-6);
            assert!(moved.x_axis.distance(rot(base.x_axis)) < 1e-6);
        }
    }

    #[test]
    fn constant_image_gives_constant_roi() {
        let img = GrayImage::filled(120, 120, 137).unwrap();
        let f = PalmFrame {
            origin: Point::new(60.0, 40.0),
            x_axis: Point::new(0.0, 1.0),
            y_axis: Point::new(1.0, 0.0),
            scale: 30.0,
        };
        let roi = extract_roi(&img, &f, 1.2, 0.35, 32).unwrap();
        assert!(roi.data.iter().all(|&v| v == 137));
        assert!(!roi.provenance.out_of_bounds);
    }

    #[test]
    fn linear_gradient_samples_exactly() {
        // I(x, y) = x is reproduced exactly by bilinear sampling.
        let img = GrayImage::from_fn(200, 200, |x, _| x as u8).unwrap();
        let f = PalmFrame {
            origin: Point::new(100.0, 100.0),
            x_axis: Point::new(0.0, 1.0),
            y_axis: Point::new(1.0, 0.0),
            scale: 64.0,
        };
        let beta = 1.0;
        let delta = 0.25;
        let out_side = 32;
        let roi = extract_roi(&img, &f, beta, delta, out_side).unwrap();
        let center = f.origin + f.x_axis * (delta * f.scale);
        let side = beta * f.scale;
        for j in 0..out_side {
            let v = (j as f64 + 0.5) / out_side as f64 - 0.5;
            for i in 0..out_side {
                let u = (i as f64 + 0.5) / out_side as f64 - 0.5;
                let p = center + f.x_axis * (u * side) + f.y_axis * (v * side);
                let expect = p.x;
                let got = roi.get(i, j) as f64;
                assert!(
                    (got - expect).abs() <= 0.5,
                    "sample ({i},{j}): got {got}, analytic {expect}"
                );
            }
        }
    }

    #[test]
    fn roi_far_outside_image_errors() {
        let img = GrayImage::filled(64, 64, 100).unwrap();
        let f = PalmFrame {
            origin: Point::new(2.0, 2.0),
            x_axis: Point::new(-1.0, 0.0),
            y_axis: Point::new(0.0, -1.0),
            scale: 100.0,
        };
        assert!(matches!(
            extract_roi(&img, &f, 1.2, 0.35, 32),
            Err(Error::RoiOutOfImage { .. })
        ));
    }

    #[test]
    fn partial_overflow_sets_flag() {
        let img = GrayImage::filled(64, 64, 100).unwrap();
        let f = PalmFrame {
            origin: Point::new(10.0, 32.0),
            x_axis: Point::new(1.0, 0.0),
            y_axis: Point::new(0.0, 1.0),
            scale: 30.0,
        };
        // Square centered near the left edge pokes slightly outside.
        let roi = extract_roi(&img, &f, 1.1, 0.0, 32).unwrap();
        assert!(roi.provenance.out_of_bounds);
    }

    #[test]
    fn similarity_identity_and_negation() {
        let f = axis_frame();
        let data: Vec<u8> = (0..64 * 64).map(|i| (i % 251) as u8).collect();
        let a = roi_from(data.clone(), 64, f);
        let b = roi_from(data.iter().map(|&v| 255 - v).collect(), 64, f);
        assert_eq!(roi_similarity(&a, &a).unwrap(), 1.0);
        assert!((roi_similarity(&a, &b).unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn similarity_constant_rasters() {
        let f = axis_frame();
        let a = roi_from(vec![9; 256], 16, f);
        let b = roi_from(vec![9; 256], 16, f);
        let c = roi_from(vec![11; 256], 16, f);
        assert_eq!(roi_similarity(&a, &b).unwrap(), 1.0);
        assert_eq!(roi_similarity(&a, &c).unwrap(), 0.0);
        let d = roi_from(vec![9; 64], 8, f);
        assert!(matches!(
            roi_similarity(&a, &d),
            Err(Error::SideMismatch { a: 16, b: 8 })
        ));
    }

    #[test]
    fn independent_noise_rois_decorrelate() {
        // Monte Carlo: 1000 pairs of uniform-noise 128x128 rasters;
        // |NCC| >= 0.1 should occur in under 1% of pairs.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(202);
        let f = axis_frame();
        let mut big = 0usize;
        const TRIALS: usize = 1000;
        for _ in 0..TRIALS {
            let a: Vec<u8> = (0..128 * 128).map(|_| rng.gen()).collect();
            let b: Vec<u8> = (0..128 * 128).map(|_| rng.gen()).collect();
            let s = roi_similarity(&roi_from(a, 128, f), &roi_from(b, 128, f)).unwrap();
            if s.abs() >= 0.1 {
                big += 1;
            }
        }
        assert!(big <= TRIALS / 100, "{big} of {TRIALS} exceeded 0.1");
    }

    #[test]
    fn two_resolution_scale_invariance() {
        // Analytic scene rendered at 1x and 2x resolution; ROIs taken with
        // frames scaled accordingly must agree closely.
        let scene = |x: f64, y: f64| -> u8 {
            let v = 128.0
                + 60.0 * ((x / 23.0).sin() * (y / 17.0).cos())
                + 40.0 * ((x + y) / 31.0).sin();
            v.clamp(0.0, 255.0) as u8
        };
        let img1 = GrayImage::from_fn(160, 160, |x, y| scene(x as f64, y as f64)).unwrap();
        let img2 = GrayImage::from_fn(320, 320, |x, y| scene(x as f64 / 2.0, y as f64 / 2.0)).unwrap();
        let f1 = PalmFrame {
            origin: Point::new(80.0, 80.0),
            x_axis: Point::new(0.0, 1.0),
            y_axis: Point::new(1.0, 0.0),
            scale: 60.0,
        };
        let f2 = PalmFrame {
            origin: Point::new(160.0, 160.0),
            scale: 120.0,
            ..f1
        };
        let r1 = extract_roi(&img1, &f1, 1.2, 0.2, 128).unwrap();
        let r2 = extract_roi(&img2, &f2, 1.2, 0.2, 128).unwrap();
        let s = roi_similarity(&r1, &r2).unwrap();
        assert!(s >= 0.98, "cross-resolution NCC {s}");
    }
}
