//! Desk-scale benchmark grids with CSV output.
//!
//! A suite is a list of `(n, eps, algorithm)` cells. Each cell generates
//! a random disjoint-ball instance from a seed derived deterministically
//! from the cell, solves it, and records one CSV row. Row order follows
//! the suite order, so output is reproducible.

use std::time::Instant;

use crate::approx::{solve_instance, Algorithm, ApproxError};
use crate::certify::dual_certificate;
use crate::gen::{gen_random_disjoint_balls, GenError, RadiusLaw};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
}

#[derive(Clone, Copy, Debug)]
pub struct BenchCell {
    pub n: usize,
    pub eps: f64,
    pub algorithm: Algorithm,
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: usize,
    pub eps: f64,
    pub algorithm: Algorithm,
    pub candidates: usize,
    pub wall_time_ms: f64,
    pub length: f64,
    pub bound: f64,
}

pub const CSV_HEADER: &str = "n,eps,algorithm,candidates,wall_time_ms,length,bound";

/// Run one cell on the seeded random ball instance it names.
pub fn run_cell(cell: &BenchCell, seed: u64) -> Result<BenchRow, BenchError> {
    let instance = gen_random_disjoint_balls(cell.n, 2, seed, RadiusLaw::Unit)?;
    let clock = Instant::now();
    let (tour, counts) = solve_instance(&instance, cell.eps, cell.algorithm)?;
    let wall_time_ms = clock.elapsed().as_secs_f64() * 1e3;
    let bound = dual_certificate(&instance, &tour)
        .map(|c| c.bound)
        .unwrap_or(instance.start.dist(&instance.end));
    Ok(BenchRow {
        n: cell.n,
        eps: cell.eps,
        algorithm: cell.algorithm,
        candidates: counts.map_or(0, |c| c.iter().sum()),
        wall_time_ms,
        length: tour.length,
        bound,
    })
}

pub fn run_grid(cells: &[BenchCell], seed: u64) -> Result<Vec<BenchRow>, BenchError> {
    cells
        .iter()
        .enumerate()
        .map(|(i, cell)| run_cell(cell, seed.wrapping_add(i as u64)))
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.3},{:.9},{:.9}\n",
            row.n, row.eps, row.algorithm, row.candidates, row.wall_time_ms, row.length, row.bound
        ));
    }
    out
}
