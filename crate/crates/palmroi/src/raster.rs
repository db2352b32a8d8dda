//! Raster containers for the pipeline stages: 8-bit grayscale images and
//! boolean foreground masks, both row-major.

use crate::error::{Error, Result};

/// 8-bit grayscale raster (0 = dark, 255 = bright), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl GrayImage {
    /// Build from raw row-major bytes. Dimensions must be at least 1x1 and
    /// match the buffer length.
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadDimensions(format!(
                "gray image must be at least 1x1, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if data.len() != expected {
            return Err(Error::BadDimensions(format!(
                "gray image {width}x{height} needs {expected} bytes, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Image filled with a constant intensity.
    pub fn filled(width: u32, height: u32, value: u8) -> Result<Self> {
        Self::from_raw(width, height, vec![value; width as usize * height as usize])
    }

    /// Build from a per-pixel function of (x, y).
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::from_raw(width, height, data)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: u8) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize] = v;
    }

    /// Clamped lookup: coordinates outside the raster replicate the edge.
    #[inline]
    pub fn get_clamped(&self, x: i64, y: i64) -> u8 {
        let cx = x.clamp(0, self.width as i64 - 1) as u32;
        let cy = y.clamp(0, self.height as i64 - 1) as u32;
        self.get(cx, cy)
    }

    /// 256-bin intensity histogram.
    pub fn histogram(&self) -> [u64; 256] {
        let mut h = [0u64; 256];
        for &v in &self.data {
            h[v as usize] += 1;
        }
        h
    }
}

/// Boolean foreground mask, row-major (`true` = foreground).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn from_raw(width: u32, height: u32, data: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadDimensions(format!(
                "mask must be at least 1x1, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if data.len() != expected {
            return Err(Error::BadDimensions(format!(
                "mask {width}x{height} needs {expected} entries, got {}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn empty(width: u32, height: u32) -> Result<Self> {
        Self::from_raw(width, height, vec![false; width as usize * height as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: bool) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize] = v;
    }

    /// Lookup treating everything outside the raster as background.
    #[inline]
    pub fn get_or_bg(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            false
        } else {
            self.get(x as u32, y as u32)
        }
    }

    /// Number of foreground pixels.
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Foreground centroid, `None` on an empty mask.
    pub fn centroid(&self) -> Option<crate::geom::Point> {
        let mut sx = 0.0;
        let mut sy = 0.0;
        let mut n = 0usize;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    sx += x as f64;
                    sy += y as f64;
                    n += 1;
                }
            }
        }
        if n == 0 {
            None
        } else {
            Some(crate::geom::Point::new(sx / n as f64, sy / n as f64))
        }
    }

    /// Tight foreground bounding box as (x0, y0, x1, y1) inclusive.
    pub fn bounding_box(&self) -> Option<(u32, u32, u32, u32)> {
        let mut bb: Option<(u32, u32, u32, u32)> = None;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    bb = Some(match bb {
                        None => (x, y, x, y),
                        Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
                    });
                }
            }
        }
        bb
    }

    /// Longer side of the foreground bounding box, in pixels.
    pub fn bbox_longer_side(&self) -> Option<f64> {
        self.bounding_box()
            .map(|(x0, y0, x1, y1)| ((x1 - x0 + 1).max(y1 - y0 + 1)) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_dimensions_and_bad_lengths() {
        assert!(GrayImage::from_raw(0, 4, vec![]).is_err());
        assert!(GrayImage::from_raw(2, 2, vec![0; 3]).is_err());
        assert!(BinaryImage::from_raw(3, 0, vec![]).is_err());
    }

    #[test]
    fn bounding_box_and_centroid() {
        let mut m = BinaryImage::empty(8, 8).unwrap();
        m.set(2, 3, true);
        m.set(5, 6, true);
        assert_eq!(m.bounding_box(), Some((2, 3, 5, 6)));
        assert_eq!(m.bbox_longer_side(), Some(4.0));
        let c = m.centroid().unwrap();
        assert_eq!((c.x, c.y), (3.5, 4.5));
    }
}
