//! Grayscale-to-binary conversion and connected-component cleanup: Otsu
//! thresholding, polarity resolution, largest-component selection and hole
//! filling, producing a single clean hand silhouette.

use crate::error::{Error, Result};
use crate::raster::{BinaryImage, GrayImage};

/// Which intensity side of the threshold counts as hand foreground.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    ForegroundBright,
    ForegroundDark,
    /// Treat the side dominating the image border as background and keep
    /// the other side as the hand.
    Auto,
}

/// Pixel connectivity for component labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            Connectivity::Eight => &[
                (1, 0),
                (-1, 0),
                (0, 1),
                (0, -1),
                (1, 1),
                (1, -1),
                (-1, 1),
                (-1, -1),
            ],
        }
    }
}

/// Otsu's threshold: maximizes between-class variance of the split
/// `{<= t, > t}`. Ties break toward the smaller `t`.
pub fn otsu_threshold(img: &GrayImage) -> Result<u8> {
    let hist = img.histogram();
    otsu_from_histogram(&hist)
}

/// Otsu on a prebuilt histogram; exposed so synthetic-histogram tests can
/// drive it without a raster.
pub fn otsu_from_histogram(hist: &[u64; 256]) -> Result<u8> {
    let total: u64 = hist.iter().sum();
    let distinct = hist.iter().filter(|&&c| c > 0).count();
    if distinct <= 1 {
        return Err(Error::ConstantImage);
    }

    let total_f = total as f64;
    let global_sum: f64 = hist
        .iter()
        .enumerate()
        .map(|(v, &c)| v as f64 * c as f64)
        .sum();

    let mut best_t = 0u8;
    let mut best_var = f64::NEG_INFINITY;
    let mut w0 = 0.0;
    let mut sum0 = 0.0;
    for t in 0..=255usize {
        w0 += hist[t] as f64;
        sum0 += t as f64 * hist[t] as f64;
        let w1 = total_f - w0;
        if w0 == 0.0 || w1 == 0.0 {
            continue;
        }
        let mu0 = sum0 / w0;
        let mu1 = (global_sum - sum0) / w1;
        let var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if var > best_var {
            best_var = var;
            best_t = t as u8;
        }
    }
    Ok(best_t)
}

/// Threshold the image and clean up into a single-component, hole-free hand
/// mask. `Auto` polarity treats the intensity side that dominates the image
/// border as background: the hand is the interior object, the border is
/// backdrop.
pub fn binarize(img: &GrayImage, polarity: Polarity) -> Result<BinaryImage> {
    let t = otsu_threshold(img)?;
    let bright = mask_above(img, t);
    let chosen = match polarity {
        Polarity::ForegroundBright => bright,
        Polarity::ForegroundDark => invert(&bright),
        Polarity::Auto => {
            let mut border_bright = 0usize;
            let mut border_total = 0usize;
            let (w, h) = (bright.width(), bright.height());
            for x in 0..w {
                for y in [0, h - 1] {
                    border_total += 1;
                    border_bright += bright.get(x, y) as usize;
                }
            }
            for y in 0..h {
                for x in [0, w - 1] {
                    border_total += 1;
                    border_bright += bright.get(x, y) as usize;
                }
            }
            if 2 * border_bright > border_total {
                invert(&bright)
            } else {
                bright
            }
        }
    };

    let main = largest_component(&chosen, Connectivity::Eight)?;
    let area = main.count();
    let total = main.width() as usize * main.height() as usize;
    if (area as f64) < 0.01 * total as f64 {
        return Err(Error::NoForeground { area, total });
    }
    Ok(fill_holes(&main))
}

/// Keep only the maximal-area component; ties go to the component whose
/// first pixel comes earliest in row-major scan order.
pub fn largest_component(mask: &BinaryImage, connectivity: Connectivity) -> Result<BinaryImage> {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![0u32; w as usize * h as usize];
    let mut next = 0u32;
    let mut best_label = 0u32;
    let mut best_area = 0usize;
    let mut stack = Vec::new();

    for y in 0..h {
        for x in 0..w {
            let idx = y as usize * w as usize + x as usize;
            if !mask.get(x, y) || labels[idx] != 0 {
                continue;
            }
            next += 1;
            let label = next;
            labels[idx] = label;
            stack.push((x, y));
            let mut area = 0usize;
            while let Some((cx, cy)) = stack.pop() {
                area += 1;
                for &(dx, dy) in connectivity.offsets() {
                    let nx = cx as i64 + dx;
                    let ny = cy as i64 + dy;
                    if mask.get_or_bg(nx, ny) {
                        let nidx = ny as usize * w as usize + nx as usize;
                        if labels[nidx] == 0 {
                            labels[nidx] = label;
                            stack.push((nx as u32, ny as u32));
                        }
                    }
                }
            }
            // Strict > keeps the earliest-scanned component on ties.
            if area > best_area {
                best_area = area;
                best_label = label;
            }
        }
    }

    let data = labels.iter().map(|&l| l != 0 && l == best_label).collect();
    BinaryImage::from_raw(w, h, data)
}

/// Fill interior holes: background is flood-filled 4-connected from the
/// border; anything unreached becomes foreground. 4-connected background is
/// the dual of the 8-connected foreground used everywhere else.
pub fn fill_holes(mask: &BinaryImage) -> BinaryImage {
    let (w, h) = (mask.width(), mask.height());
    let mut outside = vec![false; w as usize * h as usize];
    let mut stack = Vec::new();
    let push = |x: u32, y: u32, outside: &mut Vec<bool>, stack: &mut Vec<(u32, u32)>| {
        let idx = y as usize * w as usize + x as usize;
        if !mask.get(x, y) && !outside[idx] {
            outside[idx] = true;
            stack.push((x, y));
        }
    };
    for x in 0..w {
        push(x, 0, &mut outside, &mut stack);
        push(x, h - 1, &mut outside, &mut stack);
    }
    for y in 0..h {
        push(0, y, &mut outside, &mut stack);
        push(w - 1, y, &mut outside, &mut stack);
    }
    while let Some((cx, cy)) = stack.pop() {
        for &(dx, dy) in Connectivity::Four.offsets() {
            let nx = cx as i64 + dx;
            let ny = cy as i64 + dy;
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let idx = ny as usize * w as usize + nx as usize;
            if !mask.get(nx as u32, ny as u32) && !outside[idx] {
                outside[idx] = true;
                stack.push((nx as u32, ny as u32));
            }
        }
    }
    let data = (0..w as usize * h as usize)
        .map(|i| !outside[i])
        .collect();
    BinaryImage::from_raw(w, h, data).expect("dimensions unchanged")
}

fn mask_above(img: &GrayImage, t: u8) -> BinaryImage {
    let data = img.data().iter().map(|&v| v > t).collect();
    BinaryImage::from_raw(img.width(), img.height(), data).expect("same dimensions")
}

fn invert(mask: &BinaryImage) -> BinaryImage {
    let data = mask.data().iter().map(|&v| !v).collect();
    BinaryImage::from_raw(mask.width(), mask.height(), data).expect("same dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive oracle: recompute class statistics from scratch for every
    /// candidate threshold. Independent of the incremental production scan.
    pub fn otsu_oracle(hist: &[u64; 256]) -> Option<u8> {
        let distinct = hist.iter().filter(|&&c| c > 0).count();
        if distinct <= 1 {
            return None;
        }
        let mut best: Option<(u8, f64)> = None;
        for t in 0..=255usize {
            let w0: f64 = hist[..=t].iter().sum::<u64>() as f64;
            let w1: f64 = hist[t + 1..].iter().sum::<u64>() as f64;
            if w0 == 0.0 || w1 == 0.0 {
                continue;
            }
            let mu0: f64 = hist[..=t]
                .iter()
                .enumerate()
                .map(|(v, &c)| v as f64 * c as f64)
                .sum::<f64>()
                / w0;
            let mu1: f64 = hist[t + 1..]
                .iter()
                .enumerate()
                .map(|(v, &c)| (v + t + 1) as f64 * c as f64)
                .sum::<f64>()
                / w1;
            let var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
            match best {
                Some((_, bv)) if var <= bv => {}
                _ => best = Some((t as u8, var)),
            }
        }
        best.map(|(t, _)| t)
    }

    /// Brute-force component labeling by iterated label minimization; used
    /// as the flood-fill oracle.
    pub fn largest_component_oracle(mask: &BinaryImage, conn: Connectivity) -> BinaryImage {
        let (w, h) = (mask.width() as i64, mask.height() as i64);
        let n = (w * h) as usize;
        let mut labels: Vec<usize> = (0..n).collect();
        loop {
            let mut changed = false;
            for y in 0..h {
                for x in 0..w {
                    let idx = (y * w + x) as usize;
                    if !mask.get(x as u32, y as u32) {
                        continue;
                    }
                    for &(dx, dy) in conn.offsets() {
                        let (nx, ny) = (x + dx, y + dy);
                        if nx < 0 || ny < 0 || nx >= w || ny >= h {
                            continue;
                        }
                        if mask.get(nx as u32, ny as u32) {
                            let nidx = (ny * w + nx) as usize;
                            if labels[nidx] < labels[idx] {
                                labels[idx] = labels[nidx];
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut areas = std::collections::HashMap::new();
        for y in 0..h {
            for x in 0..w {
                if mask.get(x as u32, y as u32) {
                    *areas.entry(labels[(y * w + x) as usize]).or_insert(0usize) += 1;
                }
            }
        }
        // Min label of a component is its earliest scan-order pixel, so the
        // tie-break below matches the production rule.
        let best = areas
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(l, _)| l);
        let data = (0..n)
            .map(|i| {
                mask.get((i as i64 % w) as u32, (i as i64 / w) as u32) && Some(labels[i]) == best
            })
            .collect();
        BinaryImage::from_raw(mask.width(), mask.height(), data).unwrap()
    }

    #[test]
    fn otsu_two_level_image_ties_to_smallest() {
        let img = GrayImage::from_raw(2, 2, vec![0, 0, 255, 255]).unwrap();
        assert_eq!(otsu_threshold(&img).unwrap(), 0);
    }

    #[test]
    fn otsu_constant_image_errors() {
        let img = GrayImage::filled(4, 4, 128).unwrap();
        assert!(matches!(otsu_threshold(&img), Err(Error::ConstantImage)));
    }

    #[test]
    fn otsu_bimodal_matches_exhaustive_scan() {
        // Two Gaussian-ish peaks at 50 and 200 with equal mass.
        let mut hist = [0u64; 256];
        for d in -12i32..=12 {
            let w = (144 - d * d) as u64;
            hist[(50 + d) as usize] += w;
            hist[(200 + d) as usize] += w;
        }
        let t = otsu_from_histogram(&hist).unwrap();
        assert_eq!(Some(t), otsu_oracle(&hist));
        assert!((50..=200).contains(&t), "t={t} outside the two modes");
    }

    #[test]
    fn largest_component_empty_is_identity() {
        let m = BinaryImage::empty(5, 5).unwrap();
        let out = largest_component(&m, Connectivity::Eight).unwrap();
        assert_eq!(out.count(), 0);
    }

    #[test]
    fn largest_component_keeps_bigger_block() {
        let mut m = BinaryImage::empty(10, 10).unwrap();
        for y in 0..3 {
            for x in 0..3 {
                m.set(x, y, true);
            }
        }
        for y in 6..8 {
            for x in 6..8 {
                m.set(x, y, true);
            }
        }
        let out = largest_component(&m, Connectivity::Eight).unwrap();
        assert_eq!(out.count(), 9);
        assert!(out.get(1, 1));
        assert!(!out.get(6, 6));
    }

    #[test]
    fn binarize_two_components_keeps_300px_one() {
        // 20x15 = 300 px block vs 10x10 = 100 px block on a 64x64 field.
        let img = GrayImage::from_fn(64, 64, |x, y| {
            let in_big = (4..24).contains(&x) && (4..19).contains(&y);
            let in_small = (40..50).contains(&x) && (40..50).contains(&y);
            if in_big || in_small {
                220
            } else {
                20
            }
        })
        .unwrap();
        let out = binarize(&img, Polarity::ForegroundBright).unwrap();
        assert_eq!(out.count(), 300);
        assert!(out.get(10, 10));
        assert!(!out.get(45, 45));
    }

    #[test]
    fn binarize_single_dot_is_no_foreground() {
        let mut data = vec![0u8; 32 * 32];
        data[5 * 32 + 5] = 255;
        let img = GrayImage::from_raw(32, 32, data).unwrap();
        assert!(matches!(
            binarize(&img, Polarity::ForegroundBright),
            Err(Error::NoForeground { area: 1, .. })
        ));
    }

    #[test]
    fn binarize_fills_holes_and_auto_picks_hand_side() {
        // Dark ring-shaped hand on bright ground: auto must pick the dark
        // side and fill the ring's cavity.
        let img = GrayImage::from_fn(40, 40, |x, y| {
            let dx = x as f64 - 20.0;
            let dy = y as f64 - 20.0;
            let r = (dx * dx + dy * dy).sqrt();
            if (6.0..14.0).contains(&r) {
                30
            } else {
                230
            }
        })
        .unwrap();
        let out = binarize(&img, Polarity::Auto).unwrap();
        // Cavity center got filled.
        assert!(out.get(20, 20));
        // One 8-connected component, no enclosed background.
        assert_eq!(
            largest_component(&out, Connectivity::Eight).unwrap().count(),
            out.count()
        );
        assert_eq!(fill_holes(&out), out);
    }

    #[test]
    fn binarize_two_level_invariant_under_monotone_remap() {
        let img = GrayImage::from_fn(24, 24, |x, y| {
            if (6..18).contains(&x) && (6..18).contains(&y) {
                180
            } else {
                70
            }
        })
        .unwrap();
        let remapped = GrayImage::from_raw(
            24,
            24,
            img.data()
                .iter()
                .map(|&v| if v == 180 { 250 } else { 10 })
                .collect(),
        )
        .unwrap();
        let a = binarize(&img, Polarity::Auto).unwrap();
        let b = binarize(&remapped, Polarity::Auto).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn otsu_matches_oracle_on_random_histograms(counts in prop::collection::vec(0u64..40, 256)) {
            let mut hist = [0u64; 256];
            hist.copy_from_slice(&counts);
            match (otsu_from_histogram(&hist), otsu_oracle(&hist)) {
                (Ok(t), Some(expect)) => prop_assert_eq!(t, expect),
                (Err(Error::ConstantImage), None) => {}
                (got, want) => prop_assert!(false, "mismatch: {:?} vs {:?}", got, want),
            }
        }

        #[test]
        fn largest_component_matches_flood_fill_oracle(
            bits in prop::collection::vec(any::<bool>(), 16 * 16),
            eight in any::<bool>(),
        ) {
            let conn = if eight { Connectivity::Eight } else { Connectivity::Four };
            let mask = BinaryImage::from_raw(16, 16, bits).unwrap();
            let got = largest_component(&mask, conn).unwrap();
            let want = largest_component_oracle(&mask, conn);
            prop_assert_eq!(got, want);
        }
    }
}
