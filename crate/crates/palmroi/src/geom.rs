//! Small 2D geometry kit used across the pipeline: points, vectors and
//! infinite lines in sub-pixel image coordinates (x right, y down).

use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A 2D point or vector with `f64` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, i.e. the signed parallelogram area.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction. Zero vectors are returned unchanged.
    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    /// Perpendicular vector: rotates 90 degrees so that `(1,0) -> (0,1)`.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    /// Rotate by `angle` radians about the origin.
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, rhs: f64) -> Point {
        Point::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// An infinite line given by an anchor point and a unit direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub point: Point,
    pub dir: Point,
}

impl Line {
    /// Line through `point` along `dir` (normalized on construction).
    pub fn new(point: Point, dir: Point) -> Self {
        Self {
            point,
            dir: dir.normalized(),
        }
    }

    /// Line through two distinct points.
    pub fn through(a: Point, b: Point) -> Self {
        Self::new(a, b - a)
    }

    /// Signed perpendicular distance of `p`; the sign flips across the line.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.dir.cross(p - self.point)
    }

    pub fn distance(&self, p: Point) -> f64 {
        self.signed_distance(p).abs()
    }

    /// Parameter of the orthogonal projection of `p` (in units of `dir`).
    pub fn project_param(&self, p: Point) -> f64 {
        self.dir.dot(p - self.point)
    }

    /// Foot of the perpendicular from `p`.
    pub fn project(&self, p: Point) -> Point {
        self.point + self.dir * self.project_param(p)
    }

    /// Intersection with another line, `None` when (numerically) parallel.
    pub fn intersect(&self, other: &Line) -> Option<Point> {
        let denom = self.dir.cross(other.dir);
        if denom.abs() < 1e-12 {
            return None;
        }
        let t = (other.point - self.point).cross(other.dir) / denom;
        Some(self.point + self.dir * t)
    }
}

/// Undirected angle between two directions, in `[0, pi/2]`.
pub fn axial_angle(a: Point, b: Point) -> f64 {
    let ua = a.normalized();
    let ub = b.normalized();
    ua.dot(ub).abs().clamp(0.0, 1.0).acos()
}

/// Perpendicular distance from point `p` to the segment `a..b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (p - a).dot(ab) / len2;
    let t = t.clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_signed_distance_flips_sign() {
        let l = Line::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert!(l.signed_distance(Point::new(5.0, 1.0)) > 0.0);
        assert!(l.signed_distance(Point::new(5.0, -1.0)) < 0.0);
        assert_eq!(l.distance(Point::new(3.0, 2.0)), 2.0);
    }

    #[test]
    fn line_intersection() {
        // y = x meets y = 2 - x at (1, 1).
        let a = Line::through(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
        let b = Line::through(Point::new(0.0, 2.0), Point::new(1.0, 1.0));
        let p = a.intersect(&b).unwrap();
        assert!((p.x - 1.0).abs() < 1e-12);
        assert!((p.y - 1.0).abs() < 1e-12);
        // Parallel lines do not intersect.
        let c = Line::new(Point::new(0.0, 1.0), Point::new(1.0, 1.0));
        assert!(a.intersect(&c).is_none());
    }

    #[test]
    fn axial_angle_is_undirected() {
        let a = Point::new(1.0, 0.0);
        let b = Point::new(-1.0, 1e-9);
        assert!(axial_angle(a, b) < 1e-6);
        assert!((axial_angle(a, Point::new(0.0, 1.0)) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn segment_distance_clamps_to_endpoints() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(10.0, 0.0);
        assert_eq!(point_segment_distance(Point::new(-3.0, 4.0), a, b), 5.0);
        assert_eq!(point_segment_distance(Point::new(5.0, 2.0), a, b), 2.0);
    }
}
