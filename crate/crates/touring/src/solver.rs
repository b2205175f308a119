//! Exact dynamic programming over finite candidate sets.
//!
//! [`solve_disjoint_dp`] runs a forward DP with all-pairs transitions
//! between consecutive sets, which is exactly optimal when every tour must
//! pick one point per set. [`solve_intersecting_dp`] handles overlapping
//! regions through successor-based transitions: a candidate that already
//! lies inside the following regions jumps directly to the first region it
//! is *not* inside, visiting the implied intermediate regions in place.
//! [`monotone_transition`] is an optional accelerator for one DP layer when
//! both candidate sets lie on disjoint convex curves in the plane.

use thiserror::Error;

use crate::geom::{Point, Region, Tour};

fn dist(a: &Point, b: &Point) -> f64 {
    a.dist(b)
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("candidate set {0} is empty: no feasible tour")]
    EmptySet(usize),
    #[error("successor precondition violated: point not in region {0}")]
    NotInRegion(usize),
    #[error("region index {0} out of range")]
    IndexOutOfRange(usize),
}

/// Forward DP state: per candidate the best prefix length and the parent
/// candidate index in the previous layer.
#[derive(Clone, Debug)]
pub struct DpTable {
    pub best: Vec<Vec<f64>>,
    pub parent: Vec<Vec<usize>>,
}

/// Exactly optimal tour picking one candidate per set, in order.
///
/// Ties are broken toward the lowest candidate index, so the output is
/// deterministic.
pub fn solve_disjoint_dp(
    sets: &[Vec<Point>],
    start: &Point,
    end: &Point,
) -> Result<Tour, SolverError> {
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(SolverError::EmptySet(i));
        }
    }
    let mut table = DpTable {
        best: Vec::with_capacity(sets.len()),
        parent: Vec::with_capacity(sets.len()),
    };
    let mut prev_pts: &[Point] = std::slice::from_ref(start);
    let mut prev_best: Vec<f64> = vec![0.0];
    for set in sets {
        let mut best = vec![f64::INFINITY; set.len()];
        let mut parent = vec![0usize; set.len()];
        for (i, x) in set.iter().enumerate() {
            for (j, y) in prev_pts.iter().enumerate() {
                let v = prev_best[j] + dist(y, x);
                if v < best[i] {
                    best[i] = v;
                    parent[i] = j;
                }
            }
        }
        table.best.push(best.clone());
        table.parent.push(parent);
        prev_best = best;
        prev_pts = set;
    }
    let mut last = 0usize;
    let mut total = f64::INFINITY;
    for (j, y) in prev_pts.iter().enumerate() {
        let v = prev_best[j] + dist(y, end);
        if v < total {
            total = v;
            last = j;
        }
    }
    let mut picks = vec![0usize; sets.len()];
    let mut cur = last;
    for i in (0..sets.len()).rev() {
        picks[i] = cur;
        cur = table.parent[i][cur];
    }
    let mut points = Vec::with_capacity(sets.len() + 2);
    points.push(start.clone());
    for (i, &k) in picks.iter().enumerate() {
        points.push(sets[i][k].clone());
    }
    points.push(end.clone());
    Ok(Tour::from_points(points))
}

/// Smallest `j > i` with `p` outside region `j`; `regions.len()` when `p`
/// lies inside every remaining region.
pub fn successor(
    p: &Point,
    i: usize,
    regions: &[Region],
    tol: f64,
) -> Result<usize, SolverError> {
    if i >= regions.len() {
        return Err(SolverError::IndexOutOfRange(i));
    }
    if !regions[i].contains(p, tol) {
        return Err(SolverError::NotInRegion(i));
    }
    Ok(next_outside(p, i + 1, regions, tol))
}

fn next_outside(p: &Point, from: usize, regions: &[Region], tol: f64) -> usize {
    (from..regions.len())
        .find(|&j| !regions[j].contains(p, tol))
        .unwrap_or(regions.len())
}

/// Optimal tour over candidates when regions may overlap.
///
/// A candidate `p` in set `i` whose successor is `j` transitions directly
/// to set `j`; the skipped regions `i+1..j` are visited at `p` itself for
/// zero extra length, so the returned tour still lists one point per
/// region.
pub fn solve_intersecting_dp(
    sets: &[Vec<Point>],
    regions: &[Region],
    start: &Point,
    end: &Point,
    tol: f64,
) -> Result<Tour, SolverError> {
    assert_eq!(sets.len(), regions.len(), "one candidate set per region");
    let n = sets.len();
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(SolverError::EmptySet(i));
        }
    }
    // dp[(j, k)] = best prefix ending at candidate k of set j, where the
    // tour has implicitly visited all regions < j's successor chain.
    let mut best: Vec<Vec<f64>> = sets.iter().map(|s| vec![f64::INFINITY; s.len()]).collect();
    // parent: (region, candidate) of the previous explicit stop
    let mut parent: Vec<Vec<Option<(usize, usize)>>> =
        sets.iter().map(|s| vec![None; s.len()]).collect();

    let start_succ = next_outside(start, 0, regions, tol);
    let mut finish = f64::INFINITY;
    let mut finish_at: Option<(usize, usize)> = None;
    if start_succ == n {
        finish = dist(start, end);
    } else {
        for (k, x) in sets[start_succ].iter().enumerate() {
            best[start_succ][k] = dist(start, x);
        }
    }
    for j in 0..n {
        for (k, x) in sets[j].iter().enumerate() {
            let v = best[j][k];
            if !v.is_finite() {
                continue;
            }
            let succ = next_outside(x, j + 1, regions, tol);
            if succ == n {
                let total = v + dist(x, end);
                if total < finish {
                    finish = total;
                    finish_at = Some((j, k));
                }
            } else {
                for (k2, y) in sets[succ].iter().enumerate() {
                    let cand = v + dist(x, y);
                    if cand < best[succ][k2] {
                        best[succ][k2] = cand;
                        parent[succ][k2] = Some((j, k));
                    }
                }
            }
        }
    }
    if !finish.is_finite() {
        // unreachable with nonempty sets, but keep a defined failure mode
        return Err(SolverError::EmptySet(0));
    }
    // reconstruct explicit stops, then fill skipped regions in place
    let mut stops: Vec<(usize, usize)> = Vec::new();
    let mut cur = finish_at;
    while let Some((j, k)) = cur {
        stops.push((j, k));
        cur = parent[j][k];
    }
    stops.reverse();
    let mut points = Vec::with_capacity(n + 2);
    points.push(start.clone());
    let mut next_region = 0usize;
    for &(j, k) in &stops {
        let x = &sets[j][k];
        // regions next_region..j are inside the previous stop (or start)
        let filler = points.last().unwrap().clone();
        while next_region < j {
            points.push(filler.clone());
            next_region += 1;
        }
        points.push(x.clone());
        next_region += 1;
    }
    let filler = points.last().unwrap().clone();
    while next_region < n {
        points.push(filler.clone());
        next_region += 1;
    }
    points.push(end.clone());
    let tour = Tour::from_points(points);
    debug_assert!((tour.length - finish).abs() <= 1e-9 * (1.0 + finish));
    Ok(tour)
}

/// One DP layer: for every `b` in `next`, the minimum over `a_j` in `prev`
/// of `weights[j] + ‖a_j − b‖`.
///
/// When both point sets are in convex position in the plane with disjoint
/// hulls and the induced transition matrix satisfies the quadrangle
/// inequality (checked), the minima are computed by divide-and-conquer
/// row minima; otherwise this falls back to the brute-force scan. Either
/// path returns exactly the brute-force values.
pub fn monotone_transition(prev: &[Point], weights: &[f64], next: &[Point]) -> Vec<f64> {
    assert_eq!(prev.len(), weights.len());
    if next.is_empty() {
        return Vec::new();
    }
    if prev.len() <= 2 || next.len() <= 2 || prev[0].dim() != 2 || next[0].dim() != 2 {
        return brute_transition(prev, weights, next);
    }
    let (Some(a_ord), Some(b_ord)) = (facing_order(prev, next), facing_order(next, prev)) else {
        return brute_transition(prev, weights, next);
    };
    // Weights cancel in the quadrangle inequality, so the check only needs
    // distances. Adjacent cells suffice: the inequality telescopes.
    let m = a_ord.len();
    let n = b_ord.len();
    let d = |j: usize, i: usize| dist(&prev[a_ord[j]], &next[b_ord[i]]);
    for j in 0..m - 1 {
        for i in 0..n - 1 {
            if d(j, i) + d(j + 1, i + 1) > d(j, i + 1) + d(j + 1, i) + 1e-12 {
                return brute_transition(prev, weights, next);
            }
        }
    }
    let cost = |j: usize, i: usize| weights[a_ord[j]] + d(j, i);
    let mut minima = vec![f64::INFINITY; n];
    dc_row_minima(&cost, 0, n, 0, m, &mut minima);
    let mut out = vec![0.0; n];
    for (row, &orig) in b_ord.iter().enumerate() {
        out[orig] = minima[row];
    }
    out
}

fn brute_transition(prev: &[Point], weights: &[f64], next: &[Point]) -> Vec<f64> {
    next.iter()
        .map(|b| {
            prev.iter()
                .zip(weights)
                .map(|(a, w)| w + dist(a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Row minima of a totally monotone matrix by divide and conquer: solve
/// the middle row by scanning its admissible column range, then recurse on
/// the two halves with the range split at the argmin.
fn dc_row_minima(
    cost: &impl Fn(usize, usize) -> f64,
    row_lo: usize,
    row_hi: usize,
    col_lo: usize,
    col_hi: usize,
    out: &mut [f64],
) {
    if row_lo >= row_hi {
        return;
    }
    let mid = (row_lo + row_hi) / 2;
    let mut best = f64::INFINITY;
    let mut arg = col_lo;
    for j in col_lo..col_hi {
        let v = cost(j, mid);
        if v < best {
            best = v;
            arg = j;
        }
    }
    out[mid] = best;
    dc_row_minima(cost, row_lo, mid, col_lo, arg + 1, out);
    dc_row_minima(cost, mid + 1, row_hi, arg, col_hi, out);
}

/// Orders `pts` along their convex hull, starting from the extreme point
/// in the direction of `other`'s centroid, counterclockwise. Returns
/// `None` when the points are not in convex position (duplicates or
/// interior points) so callers can fall back to brute force.
fn facing_order(pts: &[Point], other: &[Point]) -> Option<Vec<usize>> {
    let hull = crate::discretize::convex_hull_ccw(pts);
    if hull.len() != pts.len() {
        return None;
    }
    // map hull vertices back to input indices
    let mut order: Vec<usize> = Vec::with_capacity(pts.len());
    for h in &hull {
        let idx = pts.iter().position(|p| p.0 == h.0)?;
        order.push(idx);
    }
    let cx: f64 = other.iter().map(|p| p.0[0]).sum::<f64>() / other.len() as f64;
    let cy: f64 = other.iter().map(|p| p.0[1]).sum::<f64>() / other.len() as f64;
    let score = |i: usize| {
        let p = &pts[order[i]];
        -((p.0[0] - cx).powi(2) + (p.0[1] - cy).powi(2))
    };
    let m = order.len();
    let best = (0..m).max_by(|&a, &b| score(a).partial_cmp(&score(b)).unwrap())?;
    order.rotate_left(best);
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn pt(coords: &[f64]) -> Point {
        Point(coords.to_vec())
    }

    #[test]
    fn disjoint_dp_forced_line() {
        let sets = vec![
            vec![pt(&[0.0, 0.0])],
            vec![pt(&[1.0, 0.0])],
            vec![pt(&[2.0, 0.0])],
        ];
        let tour = solve_disjoint_dp(&sets, &pt(&[-1.0, 0.0]), &pt(&[3.0, 0.0])).unwrap();
        assert!((tour.length - 4.0).abs() < 1e-12);
        assert_eq!(tour.points.len(), 5);
    }

    #[test]
    fn disjoint_dp_picks_top_row() {
        let sets = vec![
            vec![pt(&[0.0, 1.0]), pt(&[0.0, -1.0])],
            vec![pt(&[2.0, 1.0]), pt(&[2.0, -1.0])],
        ];
        let tour = solve_disjoint_dp(&sets, &pt(&[-1.0, 1.0]), &pt(&[3.0, 1.0])).unwrap();
        assert!((tour.length - 4.0).abs() < 1e-12);
        assert_eq!(tour.points[1], pt(&[0.0, 1.0]));
        assert_eq!(tour.points[2], pt(&[2.0, 1.0]));
    }

    #[test]
    fn disjoint_dp_reflection_example() {
        // one region: x-axis points at pitch 0.01 on [-2, 2]
        let pts: Vec<Point> = (0..=400).map(|k| pt(&[-2.0 + 0.01 * k as f64, 0.0])).collect();
        let tour = solve_disjoint_dp(&[pts], &pt(&[-1.0, 1.0]), &pt(&[1.0, 1.0])).unwrap();
        let opt = 2.0 * 2.0f64.sqrt();
        assert!(tour.length <= opt * (1.0 + 1e-3));
        assert!(tour.length >= opt - 1e-12);
    }

    #[test]
    fn disjoint_dp_empty_set_errors() {
        let sets = vec![vec![pt(&[0.0, 0.0])], vec![]];
        assert!(matches!(
            solve_disjoint_dp(&sets, &pt(&[0.0, 0.0]), &pt(&[1.0, 0.0])),
            Err(SolverError::EmptySet(1))
        ));
    }

    fn ball(c: &[f64], r: f64) -> Region {
        Region::Ball {
            center: pt(c),
            radius: r,
        }
    }

    #[test]
    fn successor_cases() {
        let regions = vec![
            ball(&[0.0, 0.0], 1.0),
            ball(&[0.1, 0.0], 2.0),
            ball(&[0.0, 0.1], 2.0),
            ball(&[10.0, 0.0], 1.0),
        ];
        let p = pt(&[0.0, 0.0]);
        assert_eq!(successor(&p, 0, &regions, 1e-9).unwrap(), 3);
        // disjoint regions -> successor is always i + 1
        let disj = vec![ball(&[0.0, 0.0], 1.0), ball(&[5.0, 0.0], 1.0)];
        assert_eq!(successor(&p, 0, &disj, 1e-9).unwrap(), 1);
        // inside all remaining regions -> sentinel
        let nested = vec![ball(&[0.0, 0.0], 1.0), ball(&[0.0, 0.0], 2.0)];
        assert_eq!(successor(&p, 0, &nested, 1e-9).unwrap(), 2);
        assert!(matches!(
            successor(&pt(&[50.0, 0.0]), 0, &regions, 1e-9),
            Err(SolverError::NotInRegion(0))
        ));
    }

    #[test]
    fn intersecting_matches_disjoint_on_disjoint_input() {
        let regions = vec![ball(&[0.0, 0.0], 1.0), ball(&[5.0, 0.0], 1.0)];
        let sets: Vec<Vec<Point>> = vec![
            vec![pt(&[1.0, 0.0]), pt(&[0.0, 1.0])],
            vec![pt(&[4.0, 0.0]), pt(&[5.0, 1.0])],
        ];
        let s = pt(&[-2.0, 0.0]);
        let e = pt(&[7.0, 0.0]);
        let a = solve_disjoint_dp(&sets, &s, &e).unwrap();
        let b = solve_intersecting_dp(&sets, &regions, &s, &e, 1e-9).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn intersecting_identical_disks_touch_once() {
        let regions = vec![ball(&[0.0, 0.0], 1.0), ball(&[0.0, 0.0], 1.0)];
        let sets: Vec<Vec<Point>> = (0..2)
            .map(|_| {
                (0..64)
                    .map(|k| {
                        let a = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
                        pt(&[a.cos(), a.sin()])
                    })
                    .collect()
            })
            .collect();
        let s = pt(&[-3.0, 0.0]);
        let e = pt(&[3.0, 0.0]);
        let tour = solve_intersecting_dp(&sets, &regions, &s, &e, 1e-9).unwrap();
        // one boundary touch satisfies both constraints: straight line
        assert!((tour.length - 6.0).abs() < 1e-9);
        assert_eq!(tour.points[1], tour.points[2]);
    }

    #[test]
    fn intersecting_skips_when_start_inside() {
        let regions = vec![
            ball(&[0.0, 0.0], 5.0),
            ball(&[0.0, 0.0], 1.0),
            ball(&[10.0, 0.0], 1.0),
        ];
        let sets: Vec<Vec<Point>> = regions
            .iter()
            .map(|r| {
                let Region::Ball { center, radius } = r else { unreachable!() };
                (0..32)
                    .map(|k| {
                        let a = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
                        pt(&[center.0[0] + radius * a.cos(), center.0[1] + radius * a.sin()])
                    })
                    .collect()
            })
            .collect();
        let s = pt(&[0.0, 2.0]); // inside R_1, outside R_2
        let e = pt(&[13.0, 0.0]);
        let skip = solve_intersecting_dp(&sets, &regions, &s, &e, 1e-9).unwrap();
        let plain = solve_disjoint_dp(&sets, &s, &e).unwrap();
        assert!(skip.length <= plain.length + 1e-12);
    }

    #[test]
    fn dp_matches_exhaustive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let layers = rng.gen_range(1..=4);
            let sets: Vec<Vec<Point>> = (0..layers)
                .map(|_| {
                    (0..rng.gen_range(1..=5))
                        .map(|_| pt(&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]))
                        .collect()
                })
                .collect();
            let s = pt(&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]);
            let e = pt(&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]);
            let dp = solve_disjoint_dp(&sets, &s, &e).unwrap();
            let brute = exhaustive_best(&sets, &s, &e);
            assert_eq!(dp.length, brute, "dp must equal exhaustive search exactly");
        }
    }

    fn exhaustive_best(sets: &[Vec<Point>], s: &Point, e: &Point) -> f64 {
        fn rec(sets: &[Vec<Point>], last: &Point, e: &Point, acc: f64, best: &mut f64) {
            match sets.split_first() {
                None => {
                    let total = acc + dist(last, e);
                    if total < *best {
                        *best = total;
                    }
                }
                Some((first, rest)) => {
                    for p in first {
                        rec(rest, p, e, acc + dist(last, p), best);
                    }
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(sets, s, e, 0.0, &mut best);
        best
    }

    #[test]
    fn adding_candidates_never_hurts() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let mut sets: Vec<Vec<Point>> = (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| pt(&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]))
                        .collect()
                })
                .collect();
            let s = pt(&[-6.0, 0.0]);
            let e = pt(&[6.0, 0.0]);
            let before = solve_disjoint_dp(&sets, &s, &e).unwrap().length;
            for set in sets.iter_mut() {
                set.push(pt(&[rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]));
            }
            let after = solve_disjoint_dp(&sets, &s, &e).unwrap().length;
            assert!(after <= before + 1e-12);
        }
    }

    fn arc(center: &[f64], r: f64, a0: f64, a1: f64, n: usize) -> Vec<Point> {
        (0..n)
            .map(|k| {
                let a = a0 + (a1 - a0) * k as f64 / (n - 1) as f64;
                pt(&[center[0] + r * a.cos(), center[1] + r * a.sin()])
            })
            .collect()
    }

    #[test]
    fn monotone_matches_brute_on_arcs() {
        let prev = arc(&[0.0, 0.0], 1.0, -1.0, 1.0, 50);
        let next = arc(&[5.0, 0.0], 1.0, std::f64::consts::PI - 1.0, std::f64::consts::PI + 1.0, 50);
        let weights = vec![0.0; prev.len()];
        let fast = monotone_transition(&prev, &weights, &next);
        let brute = brute_transition(&prev, &weights, &next);
        assert_eq!(fast, brute);
    }

    #[test]
    fn monotone_single_point_prev() {
        let prev = vec![pt(&[0.0, 0.0])];
        let next = arc(&[4.0, 0.0], 1.0, 0.0, 3.0, 10);
        let out = monotone_transition(&prev, &[2.5], &next);
        for (v, b) in out.iter().zip(&next) {
            assert!((v - (2.5 + dist(&prev[0], b))).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_matches_brute_random_weighted() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for trial in 0..200 {
            // two random disjoint circles, random arcs, random weights
            let c1 = [rng.gen_range(-3.0..-1.5), rng.gen_range(-1.0..1.0)];
            let c2 = [rng.gen_range(1.5..3.0), rng.gen_range(-1.0..1.0)];
            let r1: f64 = rng.gen_range(0.2..1.0);
            let r2: f64 = rng.gen_range(0.2..1.0);
            let m = rng.gen_range(3..=40);
            let n = rng.gen_range(3..=40);
            let a0 = rng.gen_range(0.0..6.28);
            let b0 = rng.gen_range(0.0..6.28);
            let prev = arc(&c1, r1, a0, a0 + rng.gen_range(0.5..6.0), m);
            let next = arc(&c2, r2, b0, b0 + rng.gen_range(0.5..6.0), n);
            let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..5.0)).collect();
            let fast = monotone_transition(&prev, &weights, &next);
            let brute = brute_transition(&prev, &weights, &next);
            assert_eq!(fast, brute, "mismatch on trial {trial}");
        }
    }

    #[test]
    fn monotone_nonconvex_falls_back() {
        // a zig-zag set is not in convex position: must still be exact
        let prev = vec![
            pt(&[0.0, 0.0]),
            pt(&[0.5, 1.0]),
            pt(&[1.0, 0.0]),
            pt(&[1.5, 1.0]),
            pt(&[2.0, 0.0]),
        ];
        let next = arc(&[5.0, 0.5], 0.5, 2.0, 4.0, 7);
        let weights = vec![0.3, 0.0, 1.0, 0.2, 0.7];
        let fast = monotone_transition(&prev, &weights, &next);
        let brute = brute_transition(&prev, &weights, &next);
        assert_eq!(fast, brute);
    }
}
