//! Approximate shortest tours through an ordered sequence of convex
//! regions.
//!
//! Given a start point, an end point, and regions `R_1, …, R_n` (balls,
//! boxes, convex polygons, segments, or unions of those), the library
//! computes a `(1 + ε)`-approximate shortest path that visits the
//! regions in order, together with machinery to *independently* check
//! the answer: a brute-force oracle, stationarity residuals, and dual
//! lower-bound certificates.
//!
//! # Quick start
//!
//! ```
//! use touring::approx::{solve_instance, Algorithm};
//! use touring::gen::{gen_random_disjoint_balls, RadiusLaw};
//!
//! let instance = gen_random_disjoint_balls(5, 2, 7, RadiusLaw::Unit)?;
//! let (tour, _counts) = solve_instance(&instance, 0.1, Algorithm::Auto)?;
//! assert!(tour.is_valid(&instance, 1e-7));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! # Module map
//!
//! * [`geom`] — points, regions, instances, tours, and the closest-point
//!   projection every algorithm is built on.
//! * [`discretize`] — candidate-point generation: uniform boundary
//!   grids, polygonal approximations of convex bodies, and the
//!   multi-resolution sphere schemes.
//! * [`solver`] — exact dynamic programs over candidate sets, plus the
//!   divide-and-conquer monotone transition.
//! * [`approx`] — the approximation pipelines: trivial, pseudo,
//!   constant-factor, general unions, grouped fat bodies, and the
//!   per-rank schedule for disjoint balls.
//! * [`certify`] — verification that shares no code with the solvers:
//!   reflection residuals, local refinement, dual certificates, and a
//!   brute-force oracle returning two-sided brackets.
//! * [`gen`] — instance generators, including the tangent-disk family
//!   whose radii sum grows like `log n` while the optimum stays at 8.
//! * [`io`], [`svg`], [`bench`] — TOML instance/result files, SVG
//!   rendering, and CSV benchmark grids backing the `touring` CLI.

pub mod approx;
pub mod bench;
pub mod certify;
pub mod discretize;
pub mod gen;
pub mod geom;
pub mod io;
pub mod solver;
pub mod svg;

pub use approx::{solve_balls, solve_convex_unions, solve_fat, solve_instance, Algorithm};
pub use geom::{FatMeta, Instance, Point, Region, Tour};

// Compile every code block in the book as a doctest so the guide can
// never drift from the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }
    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(geometry, "../../../book/src/geometry.md");
    chapter!(discretization, "../../../book/src/discretization.md");
    chapter!(dynamic_programs, "../../../book/src/dynamic-programs.md");
    chapter!(pipelines, "../../../book/src/pipelines.md");
    chapter!(certification, "../../../book/src/certification.md");
    chapter!(files_and_cli, "../../../book/src/files-and-cli.md");
}
