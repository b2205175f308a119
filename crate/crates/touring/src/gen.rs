//! Deterministic instance generators.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{Instance, Point, Region};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("could not place ball {index} after {attempts} attempts; try a larger arena")]
    PlacementFailed { index: usize, attempts: usize },
}

/// How ball radii are drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadiusLaw {
    /// All radii 1.
    Unit,
    /// Uniform in `[min, max]`.
    Uniform { min: f64, max: f64 },
}

impl RadiusLaw {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            RadiusLaw::Unit => 1.0,
            RadiusLaw::Uniform { min, max } => rng.gen_range(min..=max),
        }
    }

    fn max_radius(&self) -> f64 {
        match *self {
            RadiusLaw::Unit => 1.0,
            RadiusLaw::Uniform { max, .. } => max,
        }
    }
}

const PLACEMENT_ATTEMPTS: usize = 1_000_000;

/// Random pairwise-disjoint balls in a box arena sized to make placement
/// easy, visited in generation order. Deterministic under `seed`.
pub fn gen_random_disjoint_balls(
    n: usize,
    d: usize,
    seed: u64,
    law: RadiusLaw,
) -> Result<Instance, GenError> {
    assert!(d >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_max = law.max_radius();
    // density low enough that rejection sampling terminates quickly
    let side = 4.0 * r_max * ((4.0 * n.max(1) as f64).powf(1.0 / d as f64) + 1.0);
    let margin = 0.05 * r_max;
    let sample_point = |rng: &mut ChaCha8Rng| -> Point {
        Point((0..d).map(|_| rng.gen_range(0.0..side)).collect())
    };
    let mut balls: Vec<(Point, f64)> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while balls.len() < n {
        attempts += 1;
        if attempts > PLACEMENT_ATTEMPTS {
            return Err(GenError::PlacementFailed {
                index: balls.len(),
                attempts,
            });
        }
        let c = sample_point(&mut rng);
        let r = law.sample(&mut rng);
        if balls
            .iter()
            .all(|(c2, r2)| c.dist(c2) > r + r2 + margin)
        {
            balls.push((c, r));
        }
    }
    let start = sample_point(&mut rng);
    let end = sample_point(&mut rng);
    let regions = balls
        .into_iter()
        .map(|(center, radius)| (Region::Ball { center, radius }, None))
        .collect();
    Ok(Instance::new(d, start, end, regions, true).expect("generated instance is valid"))
}

/// Grid pitch of the greedy coordinate scan.
const TANGENT_GRID: f64 = 1e-4;

/// The tight construction: disks of radius `1/i` tangent to the x-axis
/// from above, centers `(x_i, 1/i)`, with `x_i` the first grid multiple
/// in `[0, 8]` keeping the disk disjoint from all earlier ones
/// (`|x_i − x_j| ≥ 2√(r_i r_j)` is exactly tangency for disks touching a
/// common line). Start `(0,0)`, end `(8,0)`.
///
/// The visiting order follows the tangent points left to right, so the
/// straight segment from start to end is a valid tour of length 8 and
/// the optimum stays bounded while the radii sum grows like `log n`.
/// (Ordering the disks by size instead would force the tour to shuttle
/// back and forth between interleaved tangent points, inflating the
/// optimum by an order of magnitude.)
pub fn gen_tangent_construction(n: usize) -> Instance {
    assert!(n >= 1);
    let mut xs: Vec<f64> = Vec::with_capacity(n);
    for i in 1..=n {
        let r_i = 1.0 / i as f64;
        // forbidden open intervals around every earlier disk
        let mut intervals: Vec<(f64, f64)> = xs
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                let r_j = 1.0 / (j + 1) as f64;
                let gap = 2.0 * (r_i * r_j).sqrt();
                (xj - gap, xj + gap)
            })
            .collect();
        intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut x = 0.0f64;
        for (lo, hi) in intervals {
            if x > lo - TANGENT_GRID / 2.0 && x < hi {
                // first grid multiple at or past the interval's end
                x = (hi / TANGENT_GRID).ceil() * TANGENT_GRID;
            }
        }
        assert!(x <= 8.0 + 1e-9, "greedy placement left [0, 8]");
        xs.push(x);
    }
    let mut placed: Vec<(f64, f64)> = xs
        .iter()
        .enumerate()
        .map(|(j, &x)| (x, 1.0 / (j + 1) as f64))
        .collect();
    placed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let regions = placed
        .into_iter()
        .map(|(x, r)| {
            (
                Region::Ball {
                    center: Point(vec![x, r]),
                    radius: r,
                },
                None,
            )
        })
        .collect();
    Instance::new(
        2,
        Point(vec![0.0, 0.0]),
        Point(vec![8.0, 0.0]),
        regions,
        true,
    )
    .expect("construction is valid")
}
