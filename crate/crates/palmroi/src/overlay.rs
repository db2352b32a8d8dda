//! Debug overlay rendering: pipeline intermediates drawn over the source
//! image as RGB rasters, one per stage.

use crate::geom::{Line, Point};
use crate::grouping::{KeyPoint, ParallelPair, VShapePair};
use crate::pipeline::{Intermediates, PipelineOutput};
use crate::polyline::LineSegment;
use crate::raster::{BinaryImage, GrayImage};

/// Simple RGB raster for overlays.
#[derive(Debug, Clone)]
pub struct RgbRaster {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

impl RgbRaster {
    pub fn from_gray(img: &GrayImage) -> Self {
        let mut data = Vec::with_capacity(img.data().len() * 3);
        for &v in img.data() {
            data.extend_from_slice(&[v, v, v]);
        }
        Self {
            width: img.width(),
            height: img.height(),
            data,
        }
    }

    pub fn set(&mut self, x: i64, y: i64, rgb: [u8; 3]) {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return;
        }
        let idx = (y as usize * self.width as usize + x as usize) * 3;
        self.data[idx..idx + 3].copy_from_slice(&rgb);
    }

    pub fn draw_segment(&mut self, a: Point, b: Point, rgb: [u8; 3]) {
        let steps = a.distance(b).ceil().max(1.0) as usize * 2;
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            let p = a + (b - a) * t;
            self.set(p.x.round() as i64, p.y.round() as i64, rgb);
        }
    }

    pub fn draw_line(&mut self, line: &Line, rgb: [u8; 3]) {
        let reach = (self.width + self.height) as f64;
        self.draw_segment(line.point - line.dir * reach, line.point + line.dir * reach, rgb);
    }

    pub fn draw_disc(&mut self, c: Point, radius: f64, rgb: [u8; 3]) {
        let r = radius.ceil() as i64;
        for dy in -r..=r {
            for dx in -r..=r {
                if (dx * dx + dy * dy) as f64 <= radius * radius {
                    self.set(c.x.round() as i64 + dx, c.y.round() as i64 + dy, rgb);
                }
            }
        }
    }

    pub fn save_png(&self, path: &std::path::Path) -> crate::error::Result<()> {
        let buf = image::RgbImage::from_raw(self.width, self.height, self.data.clone())
            .expect("buffer sized by construction");
        buf.save_with_format(path, image::ImageFormat::Png)?;
        Ok(())
    }
}

/// Color cycle used for per-pair coloring (same color for both members of
/// a V-shape pair).
pub const PAIR_COLORS: [[u8; 3]; 6] = [
    [230, 60, 60],
    [60, 170, 230],
    [70, 200, 90],
    [240, 180, 40],
    [200, 90, 220],
    [90, 220, 200],
];

pub fn mask_overlay(img: &GrayImage, mask: &BinaryImage) -> RgbRaster {
    let mut out = RgbRaster::from_gray(img);
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                let v = img.get(x, y);
                out.set(x as i64, y as i64, [v / 2, v / 2 + 100, v / 2]);
            }
        }
    }
    out
}

pub fn chain_overlay(img: &GrayImage, chain: &crate::contour::ContourChain) -> RgbRaster {
    let mut out = RgbRaster::from_gray(img);
    for &(x, y) in &chain.points {
        out.set(x as i64, y as i64, [255, 80, 40]);
    }
    out
}

pub fn segments_overlay(img: &GrayImage, segments: &[LineSegment]) -> RgbRaster {
    let mut out = RgbRaster::from_gray(img);
    for (i, s) in segments.iter().enumerate() {
        out.draw_segment(s.p0, s.p1, PAIR_COLORS[i % PAIR_COLORS.len()]);
    }
    out
}

pub fn pairs_overlay(img: &GrayImage, pairs: &[ParallelPair]) -> RgbRaster {
    let mut out = RgbRaster::from_gray(img);
    for (i, p) in pairs.iter().enumerate() {
        let c = PAIR_COLORS[i % PAIR_COLORS.len()];
        out.draw_segment(p.left_edge.p0, p.left_edge.p1, c);
        out.draw_segment(p.right_edge.p0, p.right_edge.p1, c);
    }
    out
}

pub fn vshapes_overlay(
    img: &GrayImage,
    vshapes: &[VShapePair],
    centers: &[Line],
    key_points: &[KeyPoint],
) -> RgbRaster {
    let mut out = RgbRaster::from_gray(img);
    for (i, v) in vshapes.iter().enumerate() {
        let c = PAIR_COLORS[i % PAIR_COLORS.len()];
        out.draw_segment(v.line_a.p0, v.line_a.p1, c);
        out.draw_segment(v.line_b.p0, v.line_b.p1, c);
    }
    for (i, l) in centers.iter().enumerate() {
        let mut c = PAIR_COLORS[i % PAIR_COLORS.len()];
        c.iter_mut().for_each(|v| *v = v.saturating_add(40));
        out.draw_segment(l.point, l.point + l.dir * 120.0, c);
    }
    for kp in key_points {
        out.draw_disc(kp.position, 3.0, [255, 255, 255]);
        out.draw_disc(kp.position, 1.5, [255, 0, 0]);
    }
    out
}

pub fn frame_overlay(img: &GrayImage, output: &PipelineOutput) -> RgbRaster {
    let mut out = RgbRaster::from_gray(img);
    if let (Some(frame), Some(roi)) = (output.report.frame.as_ref(), output.roi.as_ref()) {
        let p = &roi.provenance;
        let center = frame.origin + frame.x_axis * (p.delta * frame.scale);
        let h = p.beta * frame.scale / 2.0;
        let corners = [
            center + frame.x_axis * h + frame.y_axis * h,
            center + frame.x_axis * h - frame.y_axis * h,
            center - frame.x_axis * h - frame.y_axis * h,
            center - frame.x_axis * h + frame.y_axis * h,
        ];
        for i in 0..4 {
            out.draw_segment(corners[i], corners[(i + 1) % 4], [255, 210, 40]);
        }
        out.draw_segment(frame.origin, frame.origin + frame.y_axis * frame.scale * 0.5, [60, 110, 255]);
        out.draw_segment(frame.origin, frame.origin + frame.x_axis * frame.scale * 0.5, [255, 60, 60]);
    }
    if let Some(kps) = &output.report.key_points {
        for kp in kps {
            out.draw_disc(kp.position, 3.0, [255, 255, 255]);
        }
    }
    out
}

/// Per-stage overlays in pipeline order, named for output files.
pub fn stage_overlays(img: &GrayImage, output: &PipelineOutput) -> Vec<(&'static str, RgbRaster)> {
    let mut overlays = Vec::new();
    let inter: &Intermediates = &output.intermediates;
    if let Some(mask) = &inter.mask {
        overlays.push(("01_binarize", mask_overlay(img, mask)));
    }
    if let Some(chain) = &inter.chain {
        overlays.push(("02_contour", chain_overlay(img, chain)));
    }
    if let Some(segs) = &inter.fitted {
        overlays.push(("03_fit_polyline", segments_overlay(img, segs)));
    }
    if let Some(segs) = &inter.connected {
        overlays.push(("04_connect_broken", segments_overlay(img, segs)));
    }
    if let Some(segs) = &inter.long_segments {
        overlays.push(("05_filter_short", segments_overlay(img, segs)));
    }
    if let Some(pairs) = &inter.pairs {
        overlays.push(("06_pairs", pairs_overlay(img, pairs)));
    }
    if let (Some(vs), Some(cl)) = (&inter.vshapes, &inter.center_lines) {
        let kps = inter.all_key_points.clone().unwrap_or_default();
        overlays.push(("07_vshapes", vshapes_overlay(img, vs, cl, &kps)));
    }
    overlays.push(("08_frame_roi", frame_overlay(img, output)));
    overlays
}
