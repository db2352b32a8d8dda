//! End-to-end extraction pipeline: silhouette, contour, finger edges,
//! valley key points, palm frame, ROI, line feature map, with per-stage
//! failure attribution and timing.

use crate::contour::{trace_boundary, ContourChain};
use crate::error::{Error, Result, Stage};
use crate::features::{extract_line_map, LineFeatureMap, ThresholdMode};
use crate::geom::Point;
use crate::grouping::{
    center_line, form_vshapes, locate_key_point, pair_parallel, select_main_keypoints, KeyPoint,
    PairParams, ParallelPair, VShapePair,
};
use crate::polyline::{connect_broken, filter_short, fit_polyline, ConnectParams, LineSegment};
use crate::raster::{BinaryImage, GrayImage};
use crate::roi::{build_frame, extract_roi, PalmFrame, RoiImage};
use crate::segment::{binarize, Polarity};
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Every tunable of the pipeline. Geometry tolerances are resolved against
/// the image diagonal or the hand bounding box where noted, keeping the
/// defaults resolution-independent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub polarity: Polarity,
    /// Strip halfwidth in pixels at a 640x480 (800 px diagonal) image,
    /// scaled by the actual diagonal.
    pub strip_halfwidth: f64,
    /// Broken-line connection: endpoint gap ceiling, px.
    pub gap_max: f64,
    /// Broken-line connection: direction difference ceiling, degrees.
    pub angle_max_deg: f64,
    /// Broken-line connection: perpendicular offset ceiling, px.
    pub offset_max: f64,
    /// Minimum segment length as a fraction of the hand bounding-box
    /// longer side.
    pub min_length_frac: f64,
    /// Parallel pairing: direction tolerance, degrees.
    pub pair_angle_tol_deg: f64,
    /// Parallel pairing: finger width range as fractions of hand scale.
    pub pair_width_range: (f64, f64),
    /// Parallel pairing: minimum mutual overlap fraction.
    pub pair_overlap_min: f64,
    /// V-shape pairs at most this many degrees apart count as parallel.
    pub parallel_kind_tol_deg: f64,
    /// ROI side as a multiple of |K1K3|.
    pub beta: f64,
    /// ROI center offset into the palm as a multiple of |K1K3|.
    pub delta: f64,
    /// ROI output resolution, px.
    pub out_side: u32,
    /// Line-map threshold.
    pub feature_threshold: ThresholdMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            polarity: Polarity::Auto,
            strip_halfwidth: 2.0,
            gap_max: 8.0,
            angle_max_deg: 10.0,
            offset_max: 3.0,
            min_length_frac: 0.15,
            pair_angle_tol_deg: 8.0,
            pair_width_range: (0.035, 0.16),
            pair_overlap_min: 0.4,
            parallel_kind_tol_deg: 3.0,
            beta: 1.2,
            delta: 0.35,
            out_side: 128,
            feature_threshold: ThresholdMode::Percentile(95.0),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let complain = |msg: String| Err(Error::InvalidConfig(msg));
        if self.strip_halfwidth <= 0.0 {
            return complain(format!("strip_halfwidth must be > 0, got {}", self.strip_halfwidth));
        }
        if self.gap_max < 0.0 || self.offset_max < 0.0 {
            return complain("gap_max and offset_max must be >= 0".into());
        }
        if !(0.0..=90.0).contains(&self.angle_max_deg) {
            return complain(format!("angle_max_deg out of [0, 90]: {}", self.angle_max_deg));
        }
        if !(0.0..=1.0).contains(&self.min_length_frac) {
            return complain(format!("min_length_frac out of [0, 1]: {}", self.min_length_frac));
        }
        if !(0.0..=90.0).contains(&self.pair_angle_tol_deg)
            || !(0.0..=90.0).contains(&self.parallel_kind_tol_deg)
        {
            return complain("pairing angle tolerances must be in [0, 90] degrees".into());
        }
        let (wmin, wmax) = self.pair_width_range;
        if !(wmin > 0.0 && wmin < wmax && wmax <= 1.0) {
            return complain(format!("pair_width_range invalid: ({wmin}, {wmax})"));
        }
        if !(0.0..=1.0).contains(&self.pair_overlap_min) {
            return complain(format!("pair_overlap_min out of [0, 1]: {}", self.pair_overlap_min));
        }
        if self.beta <= 0.0 || self.delta < 0.0 {
            return complain(format!("beta must be > 0 and delta >= 0 (got {}, {})", self.beta, self.delta));
        }
        if self.out_side < 16 {
            return complain(format!("out_side must be >= 16, got {}", self.out_side));
        }
        if let ThresholdMode::Percentile(p) = self.feature_threshold {
            if !(p > 0.0 && p < 100.0) {
                return complain(format!("feature percentile out of (0, 100): {p}"));
            }
        }
        Ok(())
    }

    /// Strip halfwidth resolved for an actual image size.
    pub fn resolved_strip_halfwidth(&self, width: u32, height: u32) -> f64 {
        let diag = (width as f64).hypot(height as f64);
        self.strip_halfwidth * diag / 800.0
    }
}

/// Status and measurements of one pipeline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub status: ReportStatus,
    pub key_points: Option<[KeyPoint; 3]>,
    pub frame: Option<PalmFrame>,
    /// Wall-clock per stage, milliseconds, in execution order.
    pub timings_ms: Vec<(Stage, f64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportStatus {
    Ok,
    Error { stage: Stage, code: String, message: String },
}

impl PipelineReport {
    pub fn is_ok(&self) -> bool {
        matches!(self.status, ReportStatus::Ok)
    }

    /// JSON with timings stripped, for byte-level determinism comparisons.
    pub fn to_stable_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status,
            "key_points": self.key_points,
            "frame": self.frame,
        })
    }
}

/// Everything the pipeline computed, including intermediates for debug
/// overlays.
pub struct PipelineOutput {
    pub report: PipelineReport,
    pub roi: Option<RoiImage>,
    pub line_map: Option<LineFeatureMap>,
    pub intermediates: Intermediates,
}

/// Intermediate stage products, present up to the point of failure.
#[derive(Default)]
pub struct Intermediates {
    pub mask: Option<BinaryImage>,
    pub chain: Option<ContourChain>,
    pub fitted: Option<Vec<LineSegment>>,
    pub connected: Option<Vec<LineSegment>>,
    pub long_segments: Option<Vec<LineSegment>>,
    pub pairs: Option<Vec<ParallelPair>>,
    pub vshapes: Option<Vec<VShapePair>>,
    pub center_lines: Option<Vec<crate::geom::Line>>,
    pub all_key_points: Option<Vec<KeyPoint>>,
    pub smoothed: Option<GrayImage>,
}

/// Run the full extraction. Never panics on bad input: every stage error
/// is attributed in the report and the partial intermediates are kept.
pub fn run_pipeline(img: &GrayImage, cfg: &PipelineConfig) -> PipelineOutput {
    let mut inter = Intermediates::default();
    let mut timings: Vec<(Stage, f64)> = Vec::new();

    macro_rules! stage {
        ($stage:expr, $expr:expr) => {{
            let start = Instant::now();
            let out = $expr;
            timings.push(($stage, start.elapsed().as_secs_f64() * 1e3));
            match out {
                Ok(v) => v,
                Err(e) => {
                    return PipelineOutput {
                        report: PipelineReport {
                            status: ReportStatus::Error {
                                stage: $stage,
                                code: e.code().to_string(),
                                message: e.to_string(),
                            },
                            key_points: None,
                            frame: None,
                            timings_ms: timings,
                        },
                        roi: None,
                        line_map: None,
                        intermediates: inter,
                    };
                }
            }
        }};
    }

    let mask = stage!(Stage::Binarize, binarize(img, cfg.polarity));
    inter.mask = Some(mask.clone());
    // Single foreground component is guaranteed non-empty past binarize.
    let hand_scale = mask.bbox_longer_side().unwrap_or(1.0);
    let centroid = mask.centroid().unwrap_or_default();

    let chain = stage!(Stage::TraceBoundary, trace_boundary(&mask));
    inter.chain = Some(chain.clone());

    let halfwidth = cfg.resolved_strip_halfwidth(img.width(), img.height());
    let fitted = stage!(Stage::FitPolyline, fit_polyline(&chain, halfwidth));
    inter.fitted = Some(fitted.clone());

    let connected = stage!(
        Stage::ConnectBroken,
        Ok::<_, Error>(connect_broken(
            &fitted,
            &ConnectParams {
                gap_max: cfg.gap_max,
                angle_max_deg: cfg.angle_max_deg,
                offset_max: cfg.offset_max,
            },
        ))
    );
    inter.connected = Some(connected.clone());

    let long_segments = stage!(
        Stage::FilterShort,
        Ok::<_, Error>(filter_short(&connected, cfg.min_length_frac * hand_scale))
    );
    inter.long_segments = Some(long_segments.clone());

    let pairs = stage!(
        Stage::PairParallel,
        Ok::<_, Error>(pair_parallel(
            &long_segments,
            hand_scale,
            centroid,
            Some(&mask),
            &PairParams {
                angle_tol_deg: cfg.pair_angle_tol_deg,
                width_range: cfg.pair_width_range,
                overlap_min: cfg.pair_overlap_min,
            },
        ))
    );
    inter.pairs = Some(pairs.clone());

    let vshapes = stage!(
        Stage::FormVshapes,
        form_vshapes(&pairs, cfg.parallel_kind_tol_deg)
    );
    inter.vshapes = Some(vshapes.clone());

    let centers = stage!(
        Stage::CenterLine,
        Ok::<_, Error>(vshapes.iter().map(center_line).collect::<Vec<_>>())
    );
    inter.center_lines = Some(centers.clone());

    let key_points = stage!(Stage::LocateKeyPoint, {
        vshapes
            .iter()
            .zip(&centers)
            .enumerate()
            .map(|(idx, (v, c))| locate_key_point(c, &chain, v, idx))
            .collect::<Result<Vec<KeyPoint>>>()
    });
    inter.all_key_points = Some(key_points.clone());

    let (k1, k2, k3) = stage!(Stage::SelectKeypoints, {
        if key_points.len() < 3 {
            Err(Error::TooFewValleys {
                found: key_points.len(),
            })
        } else {
            select_main_keypoints(&key_points)
        }
    });

    let frame = stage!(Stage::BuildFrame, build_frame(&k1, &k2, &k3, centroid));

    let roi = stage!(
        Stage::ExtractRoi,
        extract_roi(img, &frame, cfg.beta, cfg.delta, cfg.out_side)
    );

    // The four line-extraction steps share one timing entry each but are
    // driven by extract_line_map, which cannot fail.
    let start = Instant::now();
    let line_map = extract_line_map(&roi, cfg.feature_threshold);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    for s in [Stage::Smooth, Stage::LineResponse, Stage::ThresholdMap, Stage::Thin] {
        timings.push((s, elapsed / 4.0));
    }

    PipelineOutput {
        report: PipelineReport {
            status: ReportStatus::Ok,
            key_points: Some([k1, k2, k3]),
            frame: Some(frame),
            timings_ms: timings,
        },
        roi: Some(roi),
        line_map: Some(line_map),
        intermediates: inter,
    }
}

/// Hand centroid of a mask; exposed for callers that drive stages manually.
pub fn mask_centroid(mask: &BinaryImage) -> Point {
    mask.centroid().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_hand, HandParams};

    #[test]
    fn config_round_trips_through_json() {
        let cfg = PipelineConfig::default();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: PipelineConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn config_validation_catches_bad_ranges() {
        let mut cfg = PipelineConfig::default();
        cfg.pair_width_range = (0.5, 0.1);
        assert!(cfg.validate().is_err());
        let mut cfg = PipelineConfig::default();
        cfg.out_side = 8;
        assert!(cfg.validate().is_err());
        let mut cfg = PipelineConfig::default();
        cfg.feature_threshold = ThresholdMode::Percentile(100.0);
        assert!(cfg.validate().is_err());
        assert!(PipelineConfig::default().validate().is_ok());
    }

    #[test]
    fn open_hand_runs_clean() {
        let (img, _) = generate_hand(&HandParams::four_fingers(), 640, 480).unwrap();
        let out = run_pipeline(&img, &PipelineConfig::default());
        assert!(out.report.is_ok(), "status {:?}", out.report.status);
        assert!(out.roi.is_some());
        assert!(out.line_map.is_some());
        let kps = out.report.key_points.unwrap();
        assert_eq!(kps.len(), 3);
        assert!(out.report.timings_ms.iter().all(|(_, ms)| *ms >= 0.0));
    }

    #[test]
    fn blank_image_fails_at_binarize() {
        let img = GrayImage::filled(64, 64, 0).unwrap();
        let out = run_pipeline(&img, &PipelineConfig::default());
        match out.report.status {
            ReportStatus::Error { stage, ref code, .. } => {
                assert_eq!(stage, Stage::Binarize);
                assert_eq!(code, "constant_image");
            }
            ref s => panic!("expected binarize failure, got {s:?}"),
        }
        assert!(out.roi.is_none());
    }
}
