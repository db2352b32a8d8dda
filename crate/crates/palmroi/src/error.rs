//! Error types shared by the whole extraction pipeline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Pipeline stages, used for failure attribution in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Binarize,
    TraceBoundary,
    FitPolyline,
    ConnectBroken,
    FilterShort,
    PairParallel,
    FormVshapes,
    CenterLine,
    LocateKeyPoint,
    SelectKeypoints,
    BuildFrame,
    ExtractRoi,
    Smooth,
    LineResponse,
    ThresholdMap,
    Thin,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Stage::Binarize => "binarize",
            Stage::TraceBoundary => "trace_boundary",
            Stage::FitPolyline => "fit_polyline",
            Stage::ConnectBroken => "connect_broken",
            Stage::FilterShort => "filter_short",
            Stage::PairParallel => "pair_parallel",
            Stage::FormVshapes => "form_vshapes",
            Stage::CenterLine => "center_line",
            Stage::LocateKeyPoint => "locate_key_point",
            Stage::SelectKeypoints => "select_keypoints",
            Stage::BuildFrame => "build_frame",
            Stage::ExtractRoi => "extract_roi",
            Stage::Smooth => "smooth",
            Stage::LineResponse => "line_response",
            Stage::ThresholdMap => "threshold_map",
            Stage::Thin => "thin",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("image is constant; no threshold separates two classes")]
    ConstantImage,

    #[error("largest foreground component covers {area} px, below 1% of the {total} px image")]
    NoForeground { area: usize, total: usize },

    #[error("mask has no foreground pixel to trace")]
    EmptyMask,

    #[error("contour chain has {len} points; need at least 2 to fit")]
    ChainTooShort { len: usize },

    #[error("found {found} parallel pairs; need at least 2 fingers to form a V-shape")]
    TooFewFingers { found: usize },

    #[error("found {found} valley key points; need at least 3")]
    TooFewValleys { found: usize },

    #[error("V-shape source spans do not bound a valley arc on the contour")]
    NoValleyArc,

    #[error("expected 3 or 4 valley key points, got {found}")]
    WrongKeyPointCount { found: usize },

    #[error("key points K1 and K3 are {dist:.2} px apart; frame needs at least 4 px")]
    DegenerateFrame { dist: f64 },

    #[error("{outside_frac:.0}% of ROI samples fall outside the image (limit 25%)")]
    RoiOutOfImage { outside_frac: f64 },

    #[error("ROI sides differ: {a} vs {b}")]
    SideMismatch { a: u32, b: u32 },

    #[error("invalid raster dimensions: {0}")]
    BadDimensions(String),

    #[error("invalid hand parameters: {0}")]
    InvalidParams(String),

    #[error("invalid pipeline config: {0}")]
    InvalidConfig(String),

    #[error("unsupported image input: {0}")]
    UnsupportedInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("image codec error: {0}")]
    Image(#[from] image::ImageError),

    #[error("png encode error: {0}")]
    PngEncode(#[from] png::EncodingError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code, recorded in pipeline reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ConstantImage => "constant_image",
            Error::NoForeground { .. } => "no_foreground",
            Error::EmptyMask => "empty_mask",
            Error::ChainTooShort { .. } => "chain_too_short",
            Error::TooFewFingers { .. } => "too_few_fingers",
            Error::TooFewValleys { .. } => "too_few_valleys",
            Error::NoValleyArc => "no_valley_arc",
            Error::WrongKeyPointCount { .. } => "wrong_key_point_count",
            Error::DegenerateFrame { .. } => "degenerate_frame",
            Error::RoiOutOfImage { .. } => "roi_out_of_image",
            Error::SideMismatch { .. } => "side_mismatch",
            Error::BadDimensions(_) => "bad_dimensions",
            Error::InvalidParams(_) => "invalid_params",
            Error::InvalidConfig(_) => "invalid_config",
            Error::UnsupportedInput(_) => "unsupported_input",
            Error::Io(_) => "io",
            Error::Image(_) => "image_codec",
            Error::PngEncode(_) => "png_encode",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
