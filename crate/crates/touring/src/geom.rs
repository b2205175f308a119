//! Points, regions, closest-point oracles and tour arithmetic.
//!
//! Every region variant exposes a Euclidean closest-point oracle
//! ([`Region::project`]); the rest of the crate is built entirely on top of
//! that oracle plus basic vector arithmetic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// A point in `R^d`, `d >= 1`, all coordinates finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeomError> {
        if coords.is_empty() {
            return Err(GeomError::InvalidPoint("dimension must be >= 1".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::InvalidPoint("non-finite coordinate".into()));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(&self.0, &other.0)
    }

    pub fn sub(&self, other: &Point) -> Vec<f64> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn add_scaled(&self, dir: &[f64], t: f64) -> Point {
        Point(self.0.iter().zip(dir).map(|(a, d)| a + d * t).collect())
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Unit vector in the direction of `a`, or `None` for (near-)zero input.
pub fn unit(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n <= 1e-300 {
        None
    } else {
        Some(a.iter().map(|x| x / n).collect())
    }
}

/// 2D cross product (z-component).
pub fn cross2(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// A region of `R^d`, each variant convex except `Union`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Region {
    Ball { center: Point, radius: f64 },
    Box { min: Point, max: Point },
    /// Strictly convex polygon, vertices counterclockwise, 2D only.
    Polygon { vertices: Vec<Point> },
    Segment { a: Point, b: Point },
    Union { parts: Vec<Region> },
}

impl Region {
    pub fn dim(&self) -> usize {
        match self {
            Region::Ball { center, .. } => center.dim(),
            Region::Box { min, .. } => min.dim(),
            Region::Polygon { vertices } => vertices.first().map_or(0, Point::dim),
            Region::Segment { a, .. } => a.dim(),
            Region::Union { parts } => parts.first().map_or(0, Region::dim),
        }
    }

    pub fn is_union(&self) -> bool {
        matches!(self, Region::Union { .. })
    }

    /// The convex pieces of this region (itself, unless a union).
    pub fn parts(&self) -> &[Region] {
        match self {
            Region::Union { parts } => parts,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<(), GeomError> {
        let check_pt = |p: &Point| -> Result<(), GeomError> {
            if p.dim() != dim {
                return Err(GeomError::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if p.0.iter().any(|c| !c.is_finite()) {
                return Err(GeomError::InvalidPoint("non-finite coordinate".into()));
            }
            Ok(())
        };
        match self {
            Region::Ball { center, radius } => {
                check_pt(center)?;
                if !radius.is_finite() || *radius < 0.0 {
                    return Err(GeomError::InvalidRegion("ball radius must be >= 0".into()));
                }
            }
            Region::Box { min, max } => {
                check_pt(min)?;
                check_pt(max)?;
                if min.0.iter().zip(&max.0).any(|(a, b)| a > b) {
                    return Err(GeomError::InvalidRegion(
                        "box min must be <= max componentwise".into(),
                    ));
                }
            }
            Region::Polygon { vertices } => {
                if dim != 2 {
                    return Err(GeomError::InvalidRegion("polygon regions require d = 2".into()));
                }
                if vertices.len() < 3 {
                    return Err(GeomError::InvalidRegion("polygon needs >= 3 vertices".into()));
                }
                for v in vertices {
                    check_pt(v)?;
                }
                let n = vertices.len();
                for i in 0..n {
                    let a = &vertices[i];
                    let b = &vertices[(i + 1) % n];
                    let c = &vertices[(i + 2) % n];
                    if cross2(&b.sub(a), &c.sub(b)) <= 0.0 {
                        return Err(GeomError::InvalidRegion(
                            "polygon vertices must be strictly convex and counterclockwise".into(),
                        ));
                    }
                }
            }
            Region::Segment { a, b } => {
                check_pt(a)?;
                check_pt(b)?;
            }
            Region::Union { parts } => {
                if parts.is_empty() {
                    return Err(GeomError::InvalidRegion("union must have parts".into()));
                }
                for p in parts {
                    if p.is_union() {
                        return Err(GeomError::InvalidRegion("nested unions not allowed".into()));
                    }
                    p.validate(dim)?;
                }
            }
        }
        Ok(())
    }

    /// Euclidean closest point of a convex region to `p`.
    ///
    /// Panics on `Union` (project each part instead) and on dimension
    /// mismatch; both are programmer errors ruled out by instance validation.
    pub fn project(&self, p: &Point) -> Point {
        assert_eq!(self.dim(), p.dim(), "projection dimension mismatch");
        match self {
            Region::Ball { center, radius } => {
                let d = p.dist(center);
                if d <= *radius {
                    p.clone()
                } else {
                    let dir = p.sub(center);
                    center.add_scaled(&dir, radius / d)
                }
            }
            Region::Box { min, max } => Point(
                p.0.iter()
                    .zip(&min.0)
                    .zip(&max.0)
                    .map(|((x, lo), hi)| x.clamp(*lo, *hi))
                    .collect(),
            ),
            Region::Segment { a, b } => project_segment(a, b, p),
            Region::Polygon { vertices } => project_polygon(vertices, p),
            Region::Union { .. } => panic!("project called on a union region"),
        }
    }

    /// Closest point over all convex parts (handles unions).
    pub fn project_any(&self, p: &Point) -> Point {
        let mut best: Option<(f64, Point)> = None;
        for part in self.parts() {
            let q = part.project(p);
            let d = p.dist(&q);
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                best = Some((d, q));
            }
        }
        best.unwrap().1
    }

    /// Membership up to absolute tolerance `tol` (any part for unions).
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.parts()
            .iter()
            .any(|part| p.dist(&part.project(p)) <= tol)
    }
}

fn project_segment(a: &Point, b: &Point, p: &Point) -> Point {
    let ab = b.sub(a);
    let len2 = dot(&ab, &ab);
    if len2 <= 1e-300 {
        return a.clone();
    }
    let t = (dot(&p.sub(a), &ab) / len2).clamp(0.0, 1.0);
    a.add_scaled(&ab, t)
}

fn project_polygon(vertices: &[Point], p: &Point) -> Point {
    let n = vertices.len();
    let inside = (0..n).all(|i| {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        cross2(&b.sub(a), &p.sub(a)) >= 0.0
    });
    if inside {
        return p.clone();
    }
    // Minimize over edges; ties resolved by lowest edge index.
    let mut best: Option<(f64, Point)> = None;
    for i in 0..n {
        let q = project_segment(&vertices[i], &vertices[(i + 1) % n], p);
        let d = p.dist(&q);
        if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
            best = Some((d, q));
        }
    }
    best.unwrap().1
}

/// Inner/outer radius data for a fat region: an inscribed ball of radius
/// `r_h` and an upper bound on the circumradius-to-inradius ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatMeta {
    pub r_h: f64,
    pub fatness_bound: f64,
}

impl FatMeta {
    pub fn validate(&self) -> Result<(), GeomError> {
        if !(self.r_h > 0.0) || !self.r_h.is_finite() {
            return Err(GeomError::InvalidRegion("FatMeta r_h must be > 0".into()));
        }
        if !(self.fatness_bound >= 1.0) || !self.fatness_bound.is_finite() {
            return Err(GeomError::InvalidRegion("fatness_bound must be >= 1".into()));
        }
        Ok(())
    }

    /// Upper bound on the region's outer radius.
    pub fn outer_radius(&self) -> f64 {
        self.r_h * self.fatness_bound
    }
}

/// An ordered touring problem: visit `regions` in order between `start`
/// and `end`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub dimension: usize,
    pub start: Point,
    pub end: Point,
    pub regions: Vec<(Region, Option<FatMeta>)>,
    /// Caller's declaration that the regions (together with the start and
    /// end points) are pairwise disjoint.
    pub disjoint: bool,
}

impl Instance {
    pub fn new(
        dimension: usize,
        start: Point,
        end: Point,
        regions: Vec<(Region, Option<FatMeta>)>,
        disjoint: bool,
    ) -> Result<Self, GeomError> {
        if dimension == 0 {
            return Err(GeomError::InvalidInstance("dimension must be >= 1".into()));
        }
        for p in [&start, &end] {
            if p.dim() != dimension {
                return Err(GeomError::DimensionMismatch {
                    expected: dimension,
                    got: p.dim(),
                });
            }
        }
        for (r, fat) in &regions {
            r.validate(dimension)?;
            if let Some(f) = fat {
                f.validate()?;
            }
        }
        Ok(Instance {
            dimension,
            start,
            end,
            regions,
            disjoint,
        })
    }

    pub fn n(&self) -> usize {
        self.regions.len()
    }

    pub fn region(&self, i: usize) -> &Region {
        &self.regions[i].0
    }

    pub fn region_list(&self) -> Vec<Region> {
        self.regions.iter().map(|(r, _)| r.clone()).collect()
    }

    /// True when every region is a ball.
    pub fn all_balls(&self) -> bool {
        self.regions
            .iter()
            .all(|(r, _)| matches!(r, Region::Ball { .. }))
    }

    /// True when every region carries fatness data.
    pub fn all_fat(&self) -> bool {
        self.regions.iter().all(|(_, f)| f.is_some())
    }
}

/// A tour: one point per region plus the fixed start and end.
#[derive(Clone, Debug, PartialEq)]
pub struct Tour {
    pub points: Vec<Point>,
    pub length: f64,
}

impl Tour {
    pub fn from_points(points: Vec<Point>) -> Self {
        let length = tour_length(&points);
        Tour { points, length }
    }

    /// Points visiting the regions (excludes start and end).
    pub fn interior(&self) -> &[Point] {
        &self.points[1..self.points.len() - 1]
    }

    /// Check that each interior point lies in its region.
    pub fn is_valid(&self, instance: &Instance, tol: f64) -> bool {
        self.violation(instance, tol).is_none()
    }

    /// Index of the first region whose point is outside it, if any.
    pub fn violation(&self, instance: &Instance, tol: f64) -> Option<usize> {
        if self.points.len() != instance.n() + 2 {
            return Some(0);
        }
        for (i, (region, _)) in instance.regions.iter().enumerate() {
            if !region.contains(&self.points[i + 1], tol) {
                return Some(i);
            }
        }
        None
    }
}

/// Total Euclidean length of a polyline (>= 2 points).
pub fn tour_length(points: &[Point]) -> f64 {
    assert!(points.len() >= 2, "tour length needs at least 2 points");
    points.windows(2).map(|w| w[0].dist(&w[1])).sum()
}
