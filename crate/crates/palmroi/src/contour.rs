//! Outer-boundary tracing of the hand silhouette into an ordered pixel chain.

use crate::error::{Error, Result};
use crate::raster::BinaryImage;
use serde::{Deserialize, Serialize};

/// Ordered outer-boundary pixel chain of a single foreground component.
///
/// Points are listed in the order Moore tracing first visits them, so each
/// boundary pixel appears exactly once. Consecutive points are 8-neighbors
/// except where the trace had to re-cross an already recorded pixel
/// (single-pixel spurs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContourChain {
    pub points: Vec<(i32, i32)>,
    pub closed: bool,
}

impl ContourChain {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, idx: usize) -> crate::geom::Point {
        let (x, y) = self.points[idx];
        crate::geom::Point::new(x as f64, y as f64)
    }

    /// Debug export: JSON array of [x, y] pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.points
                .iter()
                .map(|&(x, y)| serde_json::json!([x, y]))
                .collect(),
        )
    }
}

/// Moore neighborhood in clockwise screen order (y grows downward),
/// starting at west.
const MOORE: [(i32, i32); 8] = [
    (-1, 0),  // W
    (-1, -1), // NW
    (0, -1),  // N
    (1, -1),  // NE
    (1, 0),   // E
    (1, 1),   // SE
    (0, 1),   // S
    (-1, 1),  // SW
];

/// Trace the closed outer boundary of the mask's foreground clockwise,
/// starting at the first foreground pixel in scan order (Moore-neighbor
/// tracing, Jacob's stopping criterion). Interior hole boundaries are
/// ignored; the caller is expected to have filled holes already.
pub fn trace_boundary(mask: &BinaryImage) -> Result<ContourChain> {
    let start = first_foreground(mask).ok_or(Error::EmptyMask)?;

    // The start pixel is topmost-leftmost, so its west neighbor is
    // guaranteed background; use it as the initial backtrack.
    let mut current = start;
    let mut backtrack = (start.0 - 1, start.1);

    let mut points = vec![start];
    let mut visited = std::collections::HashSet::new();
    visited.insert(start);

    let mut first_move: Option<(i32, i32)> = None;
    let max_steps = 8 * mask.count() + 8;

    for _ in 0..max_steps {
        // Scan the Moore neighborhood clockwise starting just past the
        // backtrack; remember the last background pixel examined, which
        // becomes the next backtrack (it is always 8-adjacent to the hit).
        let bidx = MOORE
            .iter()
            .position(|&(dx, dy)| (current.0 + dx, current.1 + dy) == backtrack)
            .expect("backtrack is a Moore neighbor of current");
        let mut last_bg = backtrack;
        let mut next: Option<((i32, i32), usize)> = None;
        for k in 1..=8usize {
            let dir = (bidx + k) % 8;
            let (dx, dy) = MOORE[dir];
            let cand = (current.0 + dx, current.1 + dy);
            if mask.get_or_bg(cand.0 as i64, cand.1 as i64) {
                next = Some((cand, dir));
                break;
            }
            last_bg = cand;
        }
        let Some((next_px, dir)) = next else {
            // Isolated pixel: trivially closed.
            return Ok(ContourChain {
                points,
                closed: true,
            });
        };

        // Jacob's criterion: leaving the start pixel along the same first
        // edge again means the boundary walk has completed a full cycle.
        match first_move {
            None => first_move = Some(next_px),
            Some(fm) => {
                if current == start && next_px == fm {
                    return Ok(ContourChain {
                        points,
                        closed: true,
                    });
                }
            }
        }

        // A diagonal step cuts a corner. The elbow pixel after the step
        // direction (its clockwise successor is always one of the two
        // orthogonal elbows) borders the background elbow diagonally, so
        // when foreground it is an outer-boundary pixel the walk would
        // otherwise skip; record it between the two walk pixels.
        if MOORE[dir].0 != 0 && MOORE[dir].1 != 0 {
            let (ex, ey) = MOORE[(dir + 1) % 8];
            let elbow = (current.0 + ex, current.1 + ey);
            if mask.get_or_bg(elbow.0 as i64, elbow.1 as i64) && visited.insert(elbow) {
                points.push(elbow);
            }
        }

        if visited.insert(next_px) {
            points.push(next_px);
        }
        current = next_px;
        backtrack = last_bg;
    }

    // The step cap only trips on masks that violate the single-component
    // precondition; return what was collected as an open chain.
    Ok(ContourChain {
        points,
        closed: false,
    })
}

fn first_foreground(mask: &BinaryImage) -> Option<(i32, i32)> {
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                return Some((x as i32, y as i32));
            }
        }
    }
    None
}

/// Brute-force outer-boundary pixel set: foreground pixels that touch the
/// border-connected background (8-adjacency or image border). Test oracle
/// shared with the acceptance suite.
pub fn boundary_set_oracle(mask: &BinaryImage) -> std::collections::HashSet<(i32, i32)> {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let mut set = std::collections::HashSet::new();
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x as u32, y as u32) {
                continue;
            }
            let mut on_boundary = false;
            for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    if !mask.get_or_bg(x + dx, y + dy) {
                        on_boundary = true;
                    }
                }
            }
            if on_boundary {
                set.insert((x as i32, y as i32));
            }
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::fill_holes;
    use proptest::prelude::*;

    fn mask_from_rows(rows: &[&str]) -> BinaryImage {
        let h = rows.len() as u32;
        let w = rows[0].len() as u32;
        let mut m = BinaryImage::empty(w, h).unwrap();
        for (y, row) in rows.iter().enumerate() {
            for (x, c) in row.chars().enumerate() {
                if c == '1' {
                    m.set(x as u32, y as u32, true);
                }
            }
        }
        m
    }

    #[test]
    fn empty_mask_errors() {
        let m = BinaryImage::empty(4, 4).unwrap();
        assert!(matches!(trace_boundary(&m), Err(Error::EmptyMask)));
    }

    #[test]
    fn single_pixel_chain() {
        let mut m = BinaryImage::empty(3, 3).unwrap();
        m.set(1, 1, true);
        let c = trace_boundary(&m).unwrap();
        assert_eq!(c.points, vec![(1, 1)]);
        assert!(c.closed);
    }

    #[test]
    fn three_by_three_square_clockwise_from_top_left() {
        let m = mask_from_rows(&["11100", "11100", "11100", "00000"]);
        let c = trace_boundary(&m).unwrap();
        assert_eq!(
            c.points,
            vec![
                (0, 0),
                (1, 0),
                (2, 0),
                (2, 1),
                (2, 2),
                (1, 2),
                (0, 2),
                (0, 1)
            ]
        );
        assert!(c.closed);
    }

    #[test]
    fn diagonal_pair_is_fully_traced() {
        let m = mask_from_rows(&["10", "01"]);
        let c = trace_boundary(&m).unwrap();
        let set: std::collections::HashSet<_> = c.points.iter().copied().collect();
        assert_eq!(set, boundary_set_oracle(&m));
        assert!(c.closed);
    }

    #[test]
    fn disk_boundary_matches_per_pixel_scan() {
        let mut m = BinaryImage::empty(50, 50).unwrap();
        for y in 0..50u32 {
            for x in 0..50u32 {
                let dx = x as f64 - 24.0;
                let dy = y as f64 - 24.0;
                if dx * dx + dy * dy <= 20.0 * 20.0 {
                    m.set(x, y, true);
                }
            }
        }
        let c = trace_boundary(&m).unwrap();
        let got: std::collections::HashSet<_> = c.points.iter().copied().collect();
        assert_eq!(got, boundary_set_oracle(&m));
        assert_eq!(got.len(), c.points.len(), "pixels must appear once");
        assert!(c.len() <= m.count());
        assert!(c.closed);
        // Consecutive points are 8-neighbors on a blob without spurs.
        for w in c.points.windows(2) {
            let (ax, ay) = w[0];
            let (bx, by) = w[1];
            assert!((ax - bx).abs() <= 1 && (ay - by).abs() <= 1);
        }
    }

    #[test]
    fn rotating_mask_rotates_chain() {
        let m = mask_from_rows(&[
            "00111000",
            "01111100",
            "11111110",
            "01111100",
            "00110000",
            "00000000",
        ]);
        let w = m.width();
        let h = m.height();
        // Rotate 90 degrees clockwise: (x, y) -> (h - 1 - y, x).
        let mut rot = BinaryImage::empty(h, w).unwrap();
        for y in 0..h {
            for x in 0..w {
                if m.get(x, y) {
                    rot.set(h - 1 - y, x, true);
                }
            }
        }
        let a = trace_boundary(&m).unwrap();
        let b = trace_boundary(&rot).unwrap();
        let mapped: std::collections::HashSet<_> = a
            .points
            .iter()
            .map(|&(x, y)| (h as i32 - 1 - y, x))
            .collect();
        let got: std::collections::HashSet<_> = b.points.iter().copied().collect();
        assert_eq!(mapped, got);
        assert_eq!(a.len(), b.len());
    }

    proptest! {
        /// Random blobs (union of filled disks, holes filled) trace to
        /// exactly the brute-force outer boundary set.
        #[test]
        fn chain_set_equals_boundary_oracle(
            seeds in prop::collection::vec((2u32..28, 2u32..28, 1u32..6), 1..5)
        ) {
            let mut m = BinaryImage::empty(30, 30).unwrap();
            let stamp = |m: &mut BinaryImage, cx: i64, cy: i64, r: i64| {
                for y in 0..30i64 {
                    for x in 0..30i64 {
                        if (x - cx).pow(2) + (y - cy).pow(2) <= r * r {
                            m.set(x as u32, y as u32, true);
                        }
                    }
                }
            };
            // Stamp each disk plus a stroke back to the first disk so the
            // union is one component.
            let (cx0, cy0, _) = seeds[0];
            for &(cx, cy, r) in &seeds {
                stamp(&mut m, cx as i64, cy as i64, r as i64);
                let steps = (cx.abs_diff(cx0)).max(cy.abs_diff(cy0)) as i64;
                for s in 0..=steps {
                    let t = if steps == 0 { 0.0 } else { s as f64 / steps as f64 };
                    let x = cx0 as f64 + t * (cx as f64 - cx0 as f64);
                    let y = cy0 as f64 + t * (cy as f64 - cy0 as f64);
                    stamp(&mut m, x.round() as i64, y.round() as i64, 1);
                }
            }
            let m = fill_holes(&m);
            let chain = trace_boundary(&m).unwrap();
            let got: std::collections::HashSet<_> = chain.points.iter().copied().collect();
            prop_assert_eq!(got, boundary_set_oracle(&m));
            prop_assert!(chain.len() >= 1);
            prop_assert!(chain.len() <= m.count());
        }
    }
}
