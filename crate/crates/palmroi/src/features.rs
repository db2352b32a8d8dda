//! Line-map extraction from the ROI: averaging, directional line-detection
//! masks, thresholding, and thinning to a one-pixel skeleton.

use crate::raster::{BinaryImage, GrayImage};
use crate::roi::RoiImage;
use serde::{Deserialize, Serialize};

/// Orientation of the strongest line-mask response at a pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Horizontal,
    Vertical,
    /// 2s on the NE-SW diagonal.
    Diag45,
    /// 2s on the NW-SE diagonal.
    Diag135,
}

/// Signed per-pixel line response with the winning orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineResponse {
    pub width: u32,
    pub height: u32,
    /// Response of the winning mask (the one with max |response|).
    pub values: Vec<i32>,
    pub orientations: Vec<Orientation>,
}

impl LineResponse {
    pub fn get(&self, x: u32, y: u32) -> i32 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    pub fn orientation(&self, x: u32, y: u32) -> Orientation {
        self.orientations[y as usize * self.width as usize + x as usize]
    }
}

/// Thresholding rule for the response raster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// Pixel is a line pixel iff response >= level.
    Absolute(i32),
    /// Percentile (0, 100) of the positive responses (all responses when
    /// none are positive).
    Percentile(f64),
}

/// Thinned line map with the response threshold that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineFeatureMap {
    pub side: u32,
    pub data: BinaryImage,
    pub threshold_used: i32,
}

/// 3x3 box average with edge replication; integer mean truncated toward
/// zero.
pub fn smooth(roi: &RoiImage) -> GrayImage {
    box_mean_3x3(&roi.to_gray())
}

/// 3x3 box average of a grayscale raster (edge replication).
pub fn box_mean_3x3(img: &GrayImage) -> GrayImage {
    GrayImage::from_fn(img.width(), img.height(), |x, y| {
        let mut sum = 0u32;
        for dy in -1..=1i64 {
            for dx in -1..=1i64 {
                sum += img.get_clamped(x as i64 + dx, y as i64 + dy) as u32;
            }
        }
        (sum / 9) as u8
    })
    .expect("same dimensions as input")
}

/// Invert intensities; palm creases are darker than skin, so the line
/// masks run on the inverted ROI to get positive crease responses.
pub fn invert(img: &GrayImage) -> GrayImage {
    GrayImage::from_raw(
        img.width(),
        img.height(),
        img.data().iter().map(|&v| 255 - v).collect(),
    )
    .expect("same dimensions as input")
}

const MASKS: [(Orientation, [[i32; 3]; 3]); 4] = [
    (
        Orientation::Horizontal,
        [[-1, -1, -1], [2, 2, 2], [-1, -1, -1]],
    ),
    (
        Orientation::Vertical,
        [[-1, 2, -1], [-1, 2, -1], [-1, 2, -1]],
    ),
    (
        Orientation::Diag45,
        [[-1, -1, 2], [-1, 2, -1], [2, -1, -1]],
    ),
    (
        Orientation::Diag135,
        [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]],
    ),
];

/// Convolve with the four 3x3 line-detection masks and keep, per pixel,
/// the response of maximal absolute value along with its orientation.
/// Borders replicate edge pixels. Every mask sums to zero, so constant
/// images respond exactly zero.
pub fn line_response(img: &GrayImage) -> LineResponse {
    let (w, h) = (img.width(), img.height());
    let mut values = Vec::with_capacity(w as usize * h as usize);
    let mut orientations = Vec::with_capacity(w as usize * h as usize);
    for y in 0..h {
        for x in 0..w {
            let mut best = 0i32;
            let mut best_orient = Orientation::Horizontal;
            let mut best_abs = -1i64;
            for (orient, mask) in MASKS {
                let mut acc = 0i32;
                for (my, row) in mask.iter().enumerate() {
                    for (mx, &coef) in row.iter().enumerate() {
                        let px = img.get_clamped(x as i64 + mx as i64 - 1, y as i64 + my as i64 - 1);
                        acc += coef * px as i32;
                    }
                }
                if (acc.abs() as i64) > best_abs {
                    best_abs = acc.abs() as i64;
                    best = acc;
                    best_orient = orient;
                }
            }
            values.push(best);
            orientations.push(best_orient);
        }
    }
    LineResponse {
        width: w,
        height: h,
        values,
        orientations,
    }
}

/// Resolve a threshold mode to an absolute response level.
pub fn resolve_threshold(resp: &LineResponse, mode: ThresholdMode) -> i32 {
    match mode {
        ThresholdMode::Absolute(t) => t,
        ThresholdMode::Percentile(p) => {
            assert!(p > 0.0 && p < 100.0, "percentile must be in (0, 100)");
            let mut pos: Vec<i32> = resp.values.iter().copied().filter(|&v| v > 0).collect();
            if pos.is_empty() {
                pos = resp.values.clone();
            }
            pos.sort_unstable();
            let idx = ((p / 100.0) * pos.len() as f64).floor() as usize;
            pos[idx.min(pos.len() - 1)]
        }
    }
}

/// Binary map of pixels whose response is at least the threshold.
pub fn threshold_map(resp: &LineResponse, mode: ThresholdMode) -> BinaryImage {
    let t = resolve_threshold(resp, mode);
    BinaryImage::from_raw(
        resp.width,
        resp.height,
        resp.values.iter().map(|&v| v >= t).collect(),
    )
    .expect("same dimensions as response")
}

/// Zhang-Suen thinning to fixpoint. Deletes only; never adds pixels.
pub fn thin(map: &BinaryImage) -> BinaryImage {
    let mut mask = map.clone();
    loop {
        let removed_a = thin_subiteration(&mut mask, true);
        let removed_b = thin_subiteration(&mut mask, false);
        if removed_a == 0 && removed_b == 0 {
            return mask;
        }
    }
}

/// One Zhang-Suen subiteration; `first` selects the (P2 P4 P6, P4 P6 P8)
/// condition pair, the second pass uses (P2 P4 P8, P2 P6 P8).
fn thin_subiteration(mask: &mut BinaryImage, first: bool) -> usize {
    let (w, h) = (mask.width(), mask.height());
    let mut to_delete = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) {
                continue;
            }
            let n = neighbors(mask, x as i64, y as i64);
            let b: u32 = n.iter().map(|&v| v as u32).sum();
            if !(2..=6).contains(&b) {
                continue;
            }
            let a = transitions(&n);
            if a != 1 {
                continue;
            }
            // n = [P2, P3, P4, P5, P6, P7, P8, P9]
            let (c1, c2) = if first {
                (n[0] && n[2] && n[4], n[2] && n[4] && n[6])
            } else {
                (n[0] && n[2] && n[6], n[0] && n[4] && n[6])
            };
            if !c1 && !c2 {
                to_delete.push((x, y));
            }
        }
    }
    for &(x, y) in &to_delete {
        mask.set(x, y, false);
    }
    to_delete.len()
}

/// P2..P9 clockwise from north.
fn neighbors(mask: &BinaryImage, x: i64, y: i64) -> [bool; 8] {
    [
        mask.get_or_bg(x, y - 1),
        mask.get_or_bg(x + 1, y - 1),
        mask.get_or_bg(x + 1, y),
        mask.get_or_bg(x + 1, y + 1),
        mask.get_or_bg(x, y + 1),
        mask.get_or_bg(x - 1, y + 1),
        mask.get_or_bg(x - 1, y),
        mask.get_or_bg(x - 1, y - 1),
    ]
}

/// Number of 0 -> 1 transitions in the cyclic neighbor sequence.
fn transitions(n: &[bool; 8]) -> u32 {
    let mut count = 0;
    for i in 0..8 {
        if !n[i] && n[(i + 1) % 8] {
            count += 1;
        }
    }
    count
}

/// Full line-extraction chain on a ROI: average, invert (creases are
/// dark), respond, threshold, thin.
pub fn extract_line_map(roi: &RoiImage, mode: ThresholdMode) -> LineFeatureMap {
    let smoothed = smooth(roi);
    let resp = line_response(&invert(&smoothed));
    let threshold_used = resolve_threshold(&resp, mode);
    let map = threshold_map(&resp, ThresholdMode::Absolute(threshold_used));
    LineFeatureMap {
        side: roi.side,
        data: thin(&map),
        threshold_used,
    }
}
