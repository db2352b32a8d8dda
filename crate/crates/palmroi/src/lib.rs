//! palmroi: rotation/scale/translation-invariant square palm-print ROI
//! extraction for unconstrained hand images.
//!
//! The pipeline binarizes the hand, traces its outer contour, reduces the
//! contour to straight finger-edge segments, groups them into parallel
//! pairs (one per finger) and V-shape pairs (one per inter-finger space),
//! drops a bisector center line into each valley to locate its bottom key
//! point, anchors a palm coordinate frame on the outer key points, and
//! cuts a square ROI whose size scales with the hand. A four-step line
//! extraction (average, directional masks, threshold, thinning) turns the
//! ROI into a principal-line feature map.
//!
//! Everything is pure: images in, values out, no shared state, safe to run
//! concurrently. The `synth` module renders parameterized hands with
//! analytic ground truth and backs the property and acceptance tests.

pub mod contour;
pub mod error;
pub mod features;
pub mod geom;
pub mod grouping;
pub mod io;
pub mod overlay;
pub mod pipeline;
pub mod polyline;
pub mod raster;
pub mod roi;
pub mod segment;
pub mod synth;

pub use contour::{trace_boundary, ContourChain};
pub use error::{Error, Result, Stage};
pub use features::{
    extract_line_map, line_response, smooth, thin, threshold_map, LineFeatureMap, LineResponse,
    Orientation, ThresholdMode,
};
pub use geom::{Line, Point};
pub use grouping::{
    center_line, form_vshapes, locate_key_point, pair_parallel, select_main_keypoints, KeyPoint,
    PairParams, ParallelPair, VKind, VShapePair,
};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineOutput, PipelineReport, ReportStatus};
pub use polyline::{connect_broken, filter_short, fit_polyline, ConnectParams, LineSegment};
pub use raster::{BinaryImage, GrayImage};
pub use roi::{build_frame, extract_roi, roi_similarity, PalmFrame, RoiImage, RoiProvenance};
pub use segment::{binarize, largest_component, otsu_threshold, Connectivity, Polarity};
pub use synth::{generate_hand, GestureClass, GroundTruth, HandParams};
