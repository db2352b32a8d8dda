//! Image file I/O: 8-bit grayscale PNG and binary PGM (P5) inputs, PNG
//! outputs including the 1-bit line-map format.

use crate::error::Result;
use crate::raster::{BinaryImage, GrayImage};
use std::io::BufWriter;
use std::path::Path;

/// Load a grayscale image from PNG or PGM (P5). Color inputs are reduced
/// with luma = round(0.299 R + 0.587 G + 0.114 B).
pub fn load_gray(path: &Path) -> Result<GrayImage> {
    let dynimg = image::open(path)?;
    gray_from_dynamic(dynimg)
}

/// Decode a grayscale image from an in-memory PNG/PGM byte buffer.
pub fn decode_gray(bytes: &[u8]) -> Result<GrayImage> {
    let dynimg = image::load_from_memory(bytes)?;
    gray_from_dynamic(dynimg)
}

fn gray_from_dynamic(dynimg: image::DynamicImage) -> Result<GrayImage> {
    let (w, h) = (dynimg.width(), dynimg.height());
    let data = match dynimg {
        image::DynamicImage::ImageLuma8(g) => g.into_raw(),
        other => {
            let rgb = other.to_rgb8();
            rgb.pixels()
                .map(|p| {
                    let [r, g, b] = p.0;
                    luma(r, g, b)
                })
                .collect()
        }
    };
    GrayImage::from_raw(w, h, data)
}

/// Rec. 601 luma with round-half-up, as used for all color inputs.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64).round() as u8
}

/// Write an 8-bit grayscale PNG.
pub fn save_gray_png(img: &GrayImage, path: &Path) -> Result<()> {
    let buf = image::GrayImage::from_raw(img.width(), img.height(), img.data().to_vec())
        .expect("raster invariant guarantees the buffer length");
    buf.save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

/// Write a binary mask as a 1-bit grayscale PNG (true = white).
pub fn save_mask_png_1bit(mask: &BinaryImage, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), mask.width(), mask.height());
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::One);
    let mut writer = encoder.write_header()?;

    let row_bytes = (mask.width() as usize + 7) / 8;
    let mut packed = vec![0u8; row_bytes * mask.height() as usize];
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                let byte = y as usize * row_bytes + (x as usize) / 8;
                packed[byte] |= 0x80 >> (x % 8);
            }
        }
    }
    writer.write_image_data(&packed)?;
    Ok(())
}

/// PNG bytes for an 8-bit grayscale raster, for byte-level determinism checks.
pub fn encode_gray_png(img: &GrayImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let encoder = image::codecs::png::PngEncoder::new(&mut out);
    image::ImageEncoder::write_image(
        encoder,
        img.data(),
        img.width(),
        img.height(),
        image::ExtendedColorType::L8,
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luma_matches_hand_computed_values() {
        assert_eq!(luma(255, 255, 255), 255);
        assert_eq!(luma(0, 0, 0), 0);
        // 0.299*200 + 0.587*100 + 0.114*50 = 124.2 -> 124
        assert_eq!(luma(200, 100, 50), 124);
        // 0.299*100 + 0.587*200 + 0.114*17 = 149.238 -> 149
        assert_eq!(luma(100, 200, 17), 149);
    }

    #[test]
    fn png_round_trip_gray() {
        let img = GrayImage::from_fn(13, 7, |x, y| (x * 17 + y * 31) as u8).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.png");
        save_gray_png(&img, &path).unwrap();
        let back = load_gray(&path).unwrap();
        assert_eq!(img, back);
    }

    #[test]
    fn color_png_reduces_via_luma() {
        let rgb = image::RgbImage::from_fn(4, 4, |x, _| image::Rgb([x as u8 * 60, 100, 9]));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.png");
        rgb.save(&path).unwrap();
        let g = load_gray(&path).unwrap();
        for x in 0..4u32 {
            assert_eq!(g.get(x, 0), luma(x as u8 * 60, 100, 9));
        }
    }

    #[test]
    fn pgm_p5_input() {
        let mut bytes = b"P5\n6 3\n255\n".to_vec();
        bytes.extend((0..18u8).map(|v| v * 10));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.pgm");
        std::fs::write(&path, &bytes).unwrap();
        let g = load_gray(&path).unwrap();
        assert_eq!((g.width(), g.height()), (6, 3));
        assert_eq!(g.get(2, 1), 80);
    }

    #[test]
    fn one_bit_png_round_trips_through_decoder() {
        let mut m = BinaryImage::empty(11, 5).unwrap();
        m.set(0, 0, true);
        m.set(10, 4, true);
        m.set(3, 2, true);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.png");
        save_mask_png_1bit(&m, &path).unwrap();
        let back = load_gray(&path).unwrap();
        for y in 0..5 {
            for x in 0..11 {
                assert_eq!(back.get(x, y) > 0, m.get(x, y), "pixel ({x},{y})");
            }
        }
    }
}
