//! Finite candidate sets for regions.
//!
//! Three constructions:
//!  * [`uniform_boundary_points`] — lattice points on the faces of a working
//!    box, projected onto the region through its closest-point oracle, so
//!    that every boundary point inside the box has a candidate within
//!    `side * eps`.
//!  * [`polygonal_approximation`] — an `O(eps^{-1/2})`-vertex convex polygon
//!    within distance `side * eps` of the region inside the box.
//!  * [`nonuniform_disk_points`] / [`nonuniform_ball_points`] — angular
//!    spacing `max(eps, sqrt(eps) * phi)` away from the axis toward a
//!    neighboring region, concentrating points where two consecutive balls
//!    face each other.

use std::collections::HashSet;
use std::f64::consts::PI;

use thiserror::Error;

use crate::geom::{unit, Point, Region};

#[derive(Debug, Error)]
pub enum DiscretizeError {
    #[error("eps out of range: {0}")]
    EpsOutOfRange(f64),
    #[error("operation requires d = 2, got d = {0}")]
    DimensionUnsupported(usize),
    #[error("coincident centers: nonuniform axis undefined")]
    CoincidentCenters,
    #[error("region variant unsupported here: {0}")]
    UnsupportedRegion(String),
}

/// Axis-aligned hypercube used to localize discretization.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkingBox {
    pub center: Point,
    pub side: f64,
}

impl WorkingBox {
    pub fn new(center: Point, side: f64) -> Self {
        assert!(side > 0.0, "working box side must be positive");
        WorkingBox { center, side }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn min_corner(&self) -> Vec<f64> {
        self.center.0.iter().map(|c| c - self.side / 2.0).collect()
    }

    pub fn max_corner(&self) -> Vec<f64> {
        self.center.0.iter().map(|c| c + self.side / 2.0).collect()
    }

    pub fn contains(&self, p: &Point) -> bool {
        let lo = self.min_corner();
        let hi = self.max_corner();
        p.0.iter()
            .zip(lo.iter().zip(&hi))
            .all(|(x, (l, h))| *x >= *l && *x <= *h)
    }
}

/// A finite discretization of one region with its accuracy budget.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub region_index: usize,
    pub points: Vec<Point>,
    pub eps_i: f64,
}

/// Deduplication by grid hashing at a fixed absolute tolerance.
pub(crate) struct GridDedup {
    seen: HashSet<Vec<i64>>,
    inv_tol: f64,
}

impl GridDedup {
    pub fn new(tol: f64) -> Self {
        GridDedup {
            seen: HashSet::new(),
            inv_tol: 1.0 / tol,
        }
    }

    /// Returns true if the point was new.
    pub fn insert(&mut self, p: &Point) -> bool {
        let key: Vec<i64> = p.0.iter().map(|c| (c * self.inv_tol).round() as i64).collect();
        self.seen.insert(key)
    }
}

pub const DEDUP_TOL: f64 = 1e-9;

/// Count cap enforced by the uniform construction for the constants
/// implemented here: `2d * (ceil(1/eps) + 2)^(d-1) * 2`.
pub fn uniform_count_cap(d: usize, eps: f64) -> usize {
    let per_axis = (1.0 / eps).ceil() as usize + 2;
    2 * d * per_axis.pow(d as u32 - 1) * 2
}

/// Equal spacing via closest-point projection: lattice the box faces with
/// pitch `side * eps` and project every lattice point onto the region.
///
/// Balls in 2D take an equivalent arc-grid shortcut with the same coverage
/// guarantee and never more points than the generic construction.
pub fn uniform_boundary_points(
    region: &Region,
    bbox: &WorkingBox,
    eps: f64,
) -> Result<Vec<Point>, DiscretizeError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(DiscretizeError::EpsOutOfRange(eps));
    }
    if region.is_union() {
        return Err(DiscretizeError::UnsupportedRegion(
            "uniform_boundary_points takes a single convex region".into(),
        ));
    }
    if let Region::Ball { center, radius } = region {
        if bbox.dim() == 2 {
            return Ok(circle_box_points(center, *radius, bbox, bbox.side * eps));
        }
        if *radius == 0.0 {
            return Ok(vec![center.clone()]);
        }
    }
    Ok(project_face_lattice(region, bbox, eps))
}

fn project_face_lattice(region: &Region, bbox: &WorkingBox, eps: f64) -> Vec<Point> {
    let d = bbox.dim();
    let pitch = bbox.side * eps;
    let steps = (1.0 / eps).ceil() as usize; // lattice indices 0..=steps per axis
    let lo = bbox.min_corner();
    let hi = bbox.max_corner();
    let mut dedup = GridDedup::new(DEDUP_TOL);
    let mut out = Vec::new();
    let mut emit = |p: Point| {
        let q = region.project(&p);
        if dedup.insert(&q) {
            out.push(q);
        }
    };
    // Always include the projection of the box center: guarantees a
    // representative on the near side even when the region misses the box.
    emit(bbox.center.clone());
    for axis in 0..d {
        for &fixed in &[lo[axis], hi[axis]] {
            // iterate the (d-1)-dimensional lattice on this face
            let mut idx = vec![0usize; d - 1];
            loop {
                let mut coords = Vec::with_capacity(d);
                let mut k = 0;
                for a in 0..d {
                    if a == axis {
                        coords.push(fixed);
                    } else {
                        coords.push((lo[a] + idx[k] as f64 * pitch).min(hi[a]));
                        k += 1;
                    }
                }
                emit(Point(coords));
                // advance the mixed-radix counter
                let mut done = true;
                for slot in idx.iter_mut() {
                    if *slot < steps {
                        *slot += 1;
                        done = false;
                        break;
                    }
                    *slot = 0;
                }
                if done {
                    break;
                }
            }
        }
    }
    out
}

/// Arc-grid equivalent of the face-lattice construction for a circle.
///
/// Covers (a) the arcs of the circle inside the box at arc pitch
/// `pitch_len`, and (b) the image of the box under the closest-point map
/// (so that projections of face lattice points are represented).
fn circle_box_points(center: &Point, radius: f64, bbox: &WorkingBox, pitch_len: f64) -> Vec<Point> {
    if radius == 0.0 {
        return vec![center.clone()];
    }
    let mut intervals: Vec<(f64, f64)> = Vec::new();

    // angular intervals of the circle inside the box
    let lo = bbox.min_corner();
    let hi = bbox.max_corner();
    let mut breaks: Vec<f64> = Vec::new();
    // intersections with the four box edge lines
    for (axis, bounds) in [(0usize, [lo[0], hi[0]]), (1usize, [lo[1], hi[1]])] {
        for b in bounds {
            let t = (b - center.0[axis]) / radius;
            if t.abs() <= 1.0 {
                let base = t.acos();
                let angles = if axis == 0 {
                    [base, -base]
                } else {
                    // sin phi = t  =>  phi = asin(t), pi - asin(t)
                    let a = t.asin();
                    [a, PI - a]
                };
                for a in angles {
                    breaks.push(a.rem_euclid(2.0 * PI));
                }
            }
        }
    }
    let on_circle = |phi: f64| Point(vec![
        center.0[0] + radius * phi.cos(),
        center.0[1] + radius * phi.sin(),
    ]);
    if breaks.is_empty() {
        if bbox.contains(&on_circle(0.0)) {
            intervals.push((0.0, 2.0 * PI)); // whole circle inside the box
        }
    } else {
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let m = breaks.len();
        for i in 0..m {
            let a = breaks[i];
            let b = if i + 1 < m { breaks[i + 1] } else { breaks[0] + 2.0 * PI };
            let mid = (a + b) / 2.0;
            if bbox.contains(&on_circle(mid)) {
                intervals.push((a, b));
            }
        }
    }

    // image of the box under the closest-point map
    let cx = &center.0;
    let inside_box = bbox.contains(center);
    if inside_box {
        if intervals.is_empty() {
            // box strictly inside the ball: keep the whole circle so the
            // candidate set is never empty for an intersecting region
            intervals.push((0.0, 2.0 * PI));
        }
    } else {
        let corners = [
            [lo[0], lo[1]],
            [hi[0], lo[1]],
            [hi[0], hi[1]],
            [lo[0], hi[1]],
        ];
        let nearest = [cx[0].clamp(lo[0], hi[0]), cx[1].clamp(lo[1], hi[1])];
        let base = (nearest[1] - cx[1]).atan2(nearest[0] - cx[0]);
        let mut lo_a = 0.0f64;
        let mut hi_a = 0.0f64;
        for c in corners {
            let ang = (c[1] - cx[1]).atan2(c[0] - cx[0]);
            // unwrap relative to the direction of the nearest box point
            let mut rel = ang - base;
            while rel > PI {
                rel -= 2.0 * PI;
            }
            while rel < -PI {
                rel += 2.0 * PI;
            }
            lo_a = lo_a.min(rel);
            hi_a = hi_a.max(rel);
        }
        intervals.push((base + lo_a, base + hi_a));
    }

    let dphi = (pitch_len / radius).min(PI / 2.0);
    let mut dedup = GridDedup::new(DEDUP_TOL);
    let mut out = Vec::new();
    for (a, b) in intervals {
        let span = (b - a).min(2.0 * PI);
        let steps = (span / dphi).ceil().max(1.0) as usize;
        for k in 0..=steps {
            let phi = a + span * k as f64 / steps as f64;
            let p = on_circle(phi);
            if dedup.insert(&p) {
                out.push(p);
            }
        }
    }
    if out.is_empty() {
        let p = region_project_ball(center, radius, &bbox.center);
        out.push(p);
    }
    out
}

fn region_project_ball(center: &Point, radius: f64, p: &Point) -> Point {
    let d = p.dist(center);
    if d <= radius || d == 0.0 {
        p.clone()
    } else {
        center.add_scaled(&p.sub(center), radius / d)
    }
}

/// Count cap enforced by [`polygonal_approximation`] for the constants
/// implemented here: `8 * ceil(1/sqrt(eps)) + 8`.
pub fn polygonal_count_cap(eps: f64) -> usize {
    8 * (1.0 / eps.sqrt()).ceil() as usize + 8
}

/// Dilation factor used for the tangent-direction point set: 100x the box
/// diagonal of a unit-side box.
pub const POLYGONAL_DILATION: f64 = 141.42135623730951;

/// Approximate a 2D convex region inside `bbox` by a convex polygon with
/// `O(eps^{-1/2})` vertices whose hull is within `bbox.side * eps` of every
/// point of the region inside the box.
pub fn polygonal_approximation(
    region: &Region,
    bbox: &WorkingBox,
    eps: f64,
) -> Result<Vec<Point>, DiscretizeError> {
    if bbox.dim() != 2 {
        return Err(DiscretizeError::DimensionUnsupported(bbox.dim()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(DiscretizeError::EpsOutOfRange(eps));
    }
    if region.is_union() {
        return Err(DiscretizeError::UnsupportedRegion(
            "polygonal_approximation takes a single convex region".into(),
        ));
    }
    let m = 4 * (1.0 / eps.sqrt()).ceil() as usize;
    let mut dedup = GridDedup::new(DEDUP_TOL);
    let mut pts: Vec<Point> = Vec::new();
    let mut push = |p: Point| {
        if dedup.insert(&p) {
            pts.push(p);
        }
    };
    let boundary = box_boundary_points(bbox, m);
    for s in &boundary {
        // S1: direct projections space points along the boundary of C.
        push(region.project(s));
        // S2: far dilations turn the oracle into a tangent-direction oracle,
        // bounding the normal-angle change between consecutive points.
        let dir = s.sub(&bbox.center);
        let far = bbox.center.add_scaled(&dir, POLYGONAL_DILATION);
        push(region.project(&far));
    }
    // Regions crossing the box boundary: locate the intersection of the
    // region with each box side by ternary + binary search on the side.
    let lo = bbox.min_corner();
    let hi = bbox.max_corner();
    let sides = [
        (Point(vec![lo[0], lo[1]]), Point(vec![hi[0], lo[1]])),
        (Point(vec![hi[0], lo[1]]), Point(vec![hi[0], hi[1]])),
        (Point(vec![hi[0], hi[1]]), Point(vec![lo[0], hi[1]])),
        (Point(vec![lo[0], hi[1]]), Point(vec![lo[0], lo[1]])),
    ];
    for (a, b) in &sides {
        for p in side_intersection_estimates(region, a, b) {
            push(p);
        }
    }
    Ok(convex_hull_ccw(&pts))
}

fn box_boundary_points(bbox: &WorkingBox, m: usize) -> Vec<Point> {
    let lo = bbox.min_corner();
    let hi = bbox.max_corner();
    let corners = [
        [lo[0], lo[1]],
        [hi[0], lo[1]],
        [hi[0], hi[1]],
        [lo[0], hi[1]],
    ];
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let t = 4.0 * k as f64 / m as f64;
        let side = (t.floor() as usize).min(3);
        let f = t - side as usize as f64;
        let a = corners[side];
        let b = corners[(side + 1) % 4];
        out.push(Point(vec![a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f]));
    }
    out
}

/// Estimates of the endpoints of `region ∩ side`, projected into the
/// region, or empty when the side misses the region.
fn side_intersection_estimates(region: &Region, a: &Point, b: &Point) -> Vec<Point> {
    let at = |t: f64| {
        Point(vec![
            a.0[0] + (b.0[0] - a.0[0]) * t,
            a.0[1] + (b.0[1] - a.0[1]) * t,
        ])
    };
    let d = |t: f64| {
        let p = at(t);
        p.dist(&region.project(&p))
    };
    // distance to a convex set is convex along the side: ternary search
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if d(m1) <= d(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t_min = (lo + hi) / 2.0;
    if d(t_min) > 1e-9 {
        return Vec::new();
    }
    // binary search each crossing of the boundary
    let mut out = Vec::new();
    for (mut inside, mut outside) in [(t_min, 0.0), (t_min, 1.0)] {
        if d(outside) <= 1e-12 {
            out.push(region.project(&at(outside)));
            continue;
        }
        for _ in 0..80 {
            let mid = (inside + outside) / 2.0;
            if d(mid) <= 1e-12 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        out.push(region.project(&at(inside)));
    }
    out
}

/// Andrew's monotone chain; returns hull vertices counterclockwise.
pub fn convex_hull_ccw(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<&Point> = points.iter().collect();
    pts.sort_by(|p, q| {
        p.0[0]
            .partial_cmp(&q.0[0])
            .unwrap()
            .then(p.0[1].partial_cmp(&q.0[1]).unwrap())
    });
    pts.dedup_by(|p, q| p.0 == q.0);
    if pts.len() <= 2 {
        return pts.into_iter().cloned().collect();
    }
    let cross = |o: &Point, a: &Point, b: &Point| {
        (a.0[0] - o.0[0]) * (b.0[1] - o.0[1]) - (a.0[1] - o.0[1]) * (b.0[0] - o.0[0])
    };
    fn build<'a>(
        iter: impl Iterator<Item = &'a Point>,
        cross: impl Fn(&Point, &Point, &Point) -> f64,
    ) -> Vec<&'a Point> {
        let mut chain: Vec<&Point> = Vec::new();
        for p in iter {
            while chain.len() >= 2 && cross(chain[chain.len() - 2], chain[chain.len() - 1], p) <= 0.0
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain
    }
    let lower = build(pts.iter().copied(), cross);
    let upper = build(pts.iter().rev().copied(), cross);
    let mut hull: Vec<Point> = lower[..lower.len() - 1].iter().map(|p| (*p).clone()).collect();
    hull.extend(upper[..upper.len() - 1].iter().map(|p| (*p).clone()));
    hull
}

/// Distance from `p` to the convex hull polygon given counterclockwise
/// (0 when inside).
pub fn dist_to_hull(hull: &[Point], p: &Point) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => p.dist(&hull[0]),
        2 => {
            let seg = Region::Segment {
                a: hull[0].clone(),
                b: hull[1].clone(),
            };
            p.dist(&seg.project(p))
        }
        _ => {
            let poly_contains = (0..hull.len()).all(|i| {
                let a = &hull[i];
                let b = &hull[(i + 1) % hull.len()];
                crate::geom::cross2(&b.sub(a), &p.sub(a)) >= -1e-12
            });
            if poly_contains {
                return 0.0;
            }
            (0..hull.len())
                .map(|i| {
                    let seg = Region::Segment {
                        a: hull[i].clone(),
                        b: hull[(i + 1) % hull.len()].clone(),
                    };
                    p.dist(&seg.project(p))
                })
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Angular pitch used for the non-uniform ball discretization:
/// `max(eps, sqrt(eps) * phi)`.
pub fn spacing(phi: f64, eps: f64) -> f64 {
    debug_assert!(phi >= 0.0);
    f64::max(eps, eps.sqrt() * phi)
}

/// Count cap enforced by [`nonuniform_disk_points`] for the implemented
/// constants: `8 * (1/sqrt(eps)) * (ln(1/eps) + 4) + 8`.
pub fn nonuniform_disk_count_cap(eps: f64) -> usize {
    (8.0 * (1.0 / eps.sqrt()) * ((1.0 / eps).ln() + 4.0) + 8.0).ceil() as usize
}

/// Points on the boundary of a disk, angularly spaced by `spacing(phi)`
/// where `phi` is measured from the axis pointing toward `neighbor_center`.
pub fn nonuniform_disk_points(
    center: &Point,
    radius: f64,
    neighbor_center: &Point,
    eps: f64,
) -> Result<Vec<Point>, DiscretizeError> {
    if center.dim() != 2 {
        return Err(DiscretizeError::DimensionUnsupported(center.dim()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(DiscretizeError::EpsOutOfRange(eps));
    }
    let axis = unit(&neighbor_center.sub(center)).ok_or(DiscretizeError::CoincidentCenters)?;
    if radius == 0.0 {
        return Ok(vec![center.clone()]);
    }
    let perp = [-axis[1], axis[0]];
    let at = |phi: f64| {
        Point(vec![
            center.0[0] + radius * (phi.cos() * axis[0] + phi.sin() * perp[0]),
            center.0[1] + radius * (phi.cos() * axis[1] + phi.sin() * perp[1]),
        ])
    };
    let mut angles = vec![0.0f64];
    let mut phi = 0.0f64;
    loop {
        phi += spacing(phi, eps);
        if phi >= PI {
            break;
        }
        angles.push(phi);
    }
    angles.push(PI);
    let mut out = Vec::with_capacity(angles.len() * 2);
    let mut dedup = GridDedup::new(DEDUP_TOL);
    for &a in &angles {
        for s in [1.0, -1.0] {
            let p = at(s * a);
            if dedup.insert(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Count cap enforced by [`nonuniform_ball_points`] for the implemented
/// constants, `d >= 2`.
pub fn nonuniform_ball_count_cap(d: usize, eps: f64) -> usize {
    let scales = (1.0 / eps.sqrt()).log2().ceil().max(1.0) + 1.0;
    let per_scale = 2.0 * d as f64 * (4.0 / eps.sqrt() + 3.0).powi(d as i32 - 1) * 2.0;
    (scales * per_scale + 8.0).ceil() as usize
}

/// Multi-resolution surface points for a ball in `d >= 2` dimensions:
/// doubling spacings `eps, 2eps, ..., sqrt(eps)`, each restricted to the
/// spherical cap where that spacing suffices, realized through the uniform
/// box-face construction projected onto the sphere.
pub fn nonuniform_ball_points(
    center: &Point,
    radius: f64,
    neighbor_center: &Point,
    eps: f64,
) -> Result<Vec<Point>, DiscretizeError> {
    let d = center.dim();
    if d < 2 {
        return Err(DiscretizeError::DimensionUnsupported(d));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(DiscretizeError::EpsOutOfRange(eps));
    }
    let axis = unit(&neighbor_center.sub(center)).ok_or(DiscretizeError::CoincidentCenters)?;
    if radius == 0.0 {
        return Ok(vec![center.clone()]);
    }
    let ball = Region::Ball {
        center: center.clone(),
        radius,
    };
    let sqeps = eps.sqrt();
    let mut scales = Vec::new();
    let mut s = eps;
    while s < sqeps {
        scales.push(s);
        s *= 2.0;
    }
    scales.push(sqeps);

    let near = center.add_scaled(&axis, radius); // phi = 0
    let far = center.add_scaled(&axis, -radius); // phi = pi
    let mut dedup = GridDedup::new(DEDUP_TOL);
    let mut out = Vec::new();
    for p in [near, far] {
        if dedup.insert(&p) {
            out.push(p);
        }
    }
    for &s in &scales {
        let phi_cap = (2.0 * s / sqeps).min(PI);
        let half = radius * phi_cap.min(2.0) * 1.001 + radius * s;
        let cap_center = center.add_scaled(&axis, radius);
        let bbox = WorkingBox::new(cap_center, 2.0 * half);
        let eps_u = (s * radius / bbox.side).min(1.0);
        let pts = uniform_boundary_points(&ball, &bbox, eps_u)?;
        for p in pts {
            // keep only true surface points (interior lattice points carry
            // no coverage and would not scale with the radius)
            if (p.dist(center) - radius).abs() <= 1e-7 * radius.max(1.0) && dedup.insert(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn pt(coords: &[f64]) -> Point {
        Point(coords.to_vec())
    }

    fn unit_box(side: f64) -> WorkingBox {
        WorkingBox::new(pt(&[0.0, 0.0]), side)
    }

    #[test]
    fn spacing_examples() {
        assert_eq!(spacing(0.0, 0.04), 0.04);
        assert!((spacing(1.0, 0.04) - 0.2).abs() < 1e-15);
        assert_eq!(spacing(0.1, 0.04), 0.04);
    }

    #[test]
    fn uniform_ball_coverage() {
        let region = Region::Ball {
            center: pt(&[0.0, 0.0]),
            radius: 1.0,
        };
        let bbox = unit_box(4.0);
        let eps = 1.0 / 8.0;
        let pts = uniform_boundary_points(&region, &bbox, eps).unwrap();
        assert!(pts.len() <= 4 * 9 * 2);
        for k in 0..360 {
            let phi = 2.0 * PI * k as f64 / 360.0;
            let b = pt(&[phi.cos(), phi.sin()]);
            let nearest = pts.iter().map(|p| p.dist(&b)).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 0.5, "gap {nearest} at angle {phi}");
        }
        for p in &pts {
            assert!(region.contains(p, 1e-9));
        }
    }

    #[test]
    fn uniform_point_region_dedupes() {
        let region = Region::Ball {
            center: pt(&[0.3, -0.4]),
            radius: 0.0,
        };
        let pts = uniform_boundary_points(&region, &unit_box(4.0), 0.25).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0], pt(&[0.3, -0.4]));
    }

    #[test]
    fn uniform_ball_outside_box_near_side() {
        let region = Region::Ball {
            center: pt(&[100.0, 0.0]),
            radius: 1.0,
        };
        let pts = uniform_boundary_points(&region, &unit_box(4.0), 0.125).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(p.0[0] <= 100.0, "point {:?} not on the near side", p);
            assert!(region.contains(p, 1e-9));
        }
    }

    #[test]
    fn uniform_generic_matches_arc_guarantee_3d() {
        let region = Region::Ball {
            center: pt(&[0.0, 0.0, 0.0]),
            radius: 1.0,
        };
        let bbox = WorkingBox::new(pt(&[0.0, 0.0, 0.0]), 4.0);
        let eps = 0.1;
        let pts = uniform_boundary_points(&region, &bbox, eps).unwrap();
        assert!(pts.len() <= uniform_count_cap(3, eps));
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if let Some(u) = unit(&v) {
                let b = pt(&[u[0], u[1], u[2]]);
                let nearest = pts.iter().map(|p| p.dist(&b)).fold(f64::INFINITY, f64::min);
                assert!(nearest <= bbox.side * eps + 1e-12);
            }
        }
    }

    #[test]
    fn polygonal_ball_approximation() {
        let region = Region::Ball {
            center: pt(&[0.0, 0.0]),
            radius: 0.3,
        };
        let bbox = unit_box(1.0);
        let eps = 0.01;
        let hull = polygonal_approximation(&region, &bbox, eps).unwrap();
        assert!(hull.len() <= 80, "hull has {} vertices", hull.len());
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let ang: f64 = rng.gen_range(0.0..2.0 * PI);
            let rr: f64 = 0.3 * rng.gen_range(0.0f64..1.0).sqrt();
            let p = pt(&[rr * ang.cos(), rr * ang.sin()]);
            assert!(dist_to_hull(&hull, &p) <= eps + 1e-9);
        }
    }

    #[test]
    fn polygonal_triangle_keeps_vertices() {
        let verts = [pt(&[-0.3, -0.3]), pt(&[0.35, -0.2]), pt(&[0.0, 0.3])];
        let region = Region::Polygon {
            vertices: verts.to_vec(),
        };
        let eps = 0.01;
        let hull = polygonal_approximation(&region, &unit_box(1.0), eps).unwrap();
        for v in &verts {
            assert!(dist_to_hull(&hull, v) <= eps + 1e-9);
        }
    }

    #[test]
    fn polygonal_eps_one_minimum_resolution() {
        let region = Region::Ball {
            center: pt(&[0.0, 0.0]),
            radius: 0.4,
        };
        let hull = polygonal_approximation(&region, &unit_box(1.0), 1.0).unwrap();
        assert!(hull.len() >= 4);
    }

    #[test]
    fn polygonal_crossing_region_covered() {
        // ball sticking out of the box: the in-box part must still be
        // approximated within eps
        let region = Region::Ball {
            center: pt(&[0.45, 0.0]),
            radius: 0.3,
        };
        let eps = 0.01;
        let bbox = unit_box(1.0);
        let hull = polygonal_approximation(&region, &bbox, eps).unwrap();
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let ang: f64 = rng.gen_range(0.0..2.0 * PI);
            let rr: f64 = 0.3 * rng.gen_range(0.0f64..1.0).sqrt();
            let p = pt(&[0.45 + rr * ang.cos(), rr * ang.sin()]);
            if bbox.contains(&p) {
                assert!(dist_to_hull(&hull, &p) <= eps + 1e-9, "point {:?}", p);
            }
        }
    }

    #[test]
    fn nonuniform_disk_counts_and_gap() {
        let eps = 0.04;
        let pts = nonuniform_disk_points(&pt(&[0.0, 0.0]), 1.0, &pt(&[0.0, -5.0]), eps).unwrap();
        let lo = (1.0 / eps.sqrt()) as usize;
        assert!(pts.len() >= lo);
        assert!(pts.len() <= nonuniform_disk_count_cap(eps));
        // max gap near phi = pi is at most spacing(pi) = sqrt(eps)*pi;
        // scan the whole circle against the per-angle guarantee
        for k in 0..2000 {
            let phi = -PI + 2.0 * PI * k as f64 / 2000.0;
            let b = pt(&[phi.sin(), -phi.cos()]); // axis points toward (0,-1)
            let nearest = pts.iter().map(|p| p.dist(&b)).fold(f64::INFINITY, f64::min);
            assert!(
                nearest <= spacing(phi.abs(), eps) + 1e-9,
                "phi {phi} gap {nearest}"
            );
        }
    }

    #[test]
    fn nonuniform_disk_coarse_eps() {
        let pts = nonuniform_disk_points(&pt(&[0.0, 0.0]), 1.0, &pt(&[3.0, 0.0]), 0.99).unwrap();
        assert!(pts.len() <= 16);
        // covers both end regions
        let near = pt(&[1.0, 0.0]);
        let far = pt(&[-1.0, 0.0]);
        assert!(pts.iter().any(|p| p.dist(&near) < 1e-9));
        assert!(pts.iter().any(|p| p.dist(&far) < 1e-9));
    }

    #[test]
    fn nonuniform_disk_mirror_symmetric() {
        let c = pt(&[1.0, 2.0]);
        let nb = pt(&[4.0, 6.0]);
        let pts = nonuniform_disk_points(&c, 1.5, &nb, 0.07).unwrap();
        let axis = unit(&nb.sub(&c)).unwrap();
        // reflect each point across the center axis; must land on the set
        for p in &pts {
            let v = p.sub(&c);
            let along = crate::geom::dot(&v, &axis);
            let refl = [
                2.0 * along * axis[0] - v[0],
                2.0 * along * axis[1] - v[1],
            ];
            let q = c.add_scaled(&refl, 1.0);
            let nearest = pts.iter().map(|r| r.dist(&q)).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-9);
        }
    }

    #[test]
    fn nonuniform_ball_matches_disk_guarantee_2d() {
        let eps = 0.04;
        let c = pt(&[0.0, 0.0]);
        let nb = pt(&[0.0, -5.0]);
        let pts = nonuniform_ball_points(&c, 1.0, &nb, eps).unwrap();
        for k in 0..1000 {
            let phi = -PI + 2.0 * PI * k as f64 / 1000.0;
            let b = pt(&[phi.sin(), -phi.cos()]);
            let nearest = pts.iter().map(|p| p.dist(&b)).fold(f64::INFINITY, f64::min);
            assert!(
                nearest <= 2.0 * spacing(phi.abs(), eps) + 1e-9,
                "phi {phi} gap {nearest}"
            );
        }
    }

    #[test]
    fn nonuniform_ball_3d_monte_carlo_coverage() {
        use rand::prelude::*;
        let eps = 0.04;
        let c = pt(&[0.0, 0.0, 0.0]);
        let nb = pt(&[0.0, 0.0, -4.0]);
        let pts = nonuniform_ball_points(&c, 1.0, &nb, eps).unwrap();
        assert!(pts.len() <= nonuniform_ball_count_cap(3, eps));
        let axis = [0.0, 0.0, -1.0];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10_000 {
            let v: Vec<f64> = (0..3).map(|_| rng.sample::<f64, _>(rand_distr_normal())).collect();
            let Some(u) = unit(&v) else { continue };
            let b = pt(&[u[0], u[1], u[2]]);
            let phi = crate::geom::dot(&u, &axis).clamp(-1.0, 1.0).acos();
            let nearest = pts.iter().map(|p| p.dist(&b)).fold(f64::INFINITY, f64::min);
            assert!(
                nearest <= 2.0 * spacing(phi, eps) + 1e-9,
                "phi {phi} gap {nearest}"
            );
        }
    }

    // small helper: standard normal via Box-Muller-free rand distribution
    fn rand_distr_normal() -> rand::distributions::Uniform<f64> {
        // uniform in [-1,1] is fine for random directions after normalization
        rand::distributions::Uniform::new_inclusive(-1.0, 1.0)
    }

    #[test]
    fn nonuniform_scale_equivariance() {
        let eps = 0.07;
        let c = pt(&[0.0, 0.0]);
        let nb = pt(&[5.0, 0.0]);
        let p1 = nonuniform_disk_points(&c, 1.0, &nb, eps).unwrap();
        let p2 = nonuniform_disk_points(&c, 2.0, &nb, eps).unwrap();
        assert_eq!(p1.len(), p2.len());
        for (a, b) in p1.iter().zip(&p2) {
            for k in 0..2 {
                assert!((2.0 * a.0[k] - b.0[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn halving_eps_never_decreases_counts() {
        let region = Region::Ball {
            center: pt(&[0.2, 0.1]),
            radius: 0.8,
        };
        let bbox = unit_box(4.0);
        let mut eps = 0.5;
        let mut prev = 0usize;
        for _ in 0..6 {
            let n = uniform_boundary_points(&region, &bbox, eps).unwrap().len();
            assert!(n >= prev, "count dropped from {prev} to {n} at eps {eps}");
            prev = n;
            eps /= 2.0;
        }
        let c = pt(&[0.0, 0.0]);
        let nb = pt(&[0.0, 3.0]);
        let mut eps = 0.8;
        let mut prev = 0usize;
        for _ in 0..6 {
            let n = nonuniform_disk_points(&c, 1.0, &nb, eps).unwrap().len();
            assert!(n >= prev);
            prev = n;
            eps /= 2.0;
        }
    }

    #[test]
    fn eps_validation() {
        let region = Region::Ball {
            center: pt(&[0.0, 0.0]),
            radius: 1.0,
        };
        assert!(uniform_boundary_points(&region, &unit_box(1.0), 0.0).is_err());
        assert!(uniform_boundary_points(&region, &unit_box(1.0), -0.5).is_err());
        assert!(
            nonuniform_disk_points(&pt(&[0.0, 0.0]), 1.0, &pt(&[0.0, 0.0]), 0.1).is_err(),
            "coincident centers must be rejected"
        );
    }
}
