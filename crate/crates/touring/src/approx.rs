//! Approximation schemes for touring ordered regions.
//!
//! The ladder of solvers, from crude to sharp:
//!  * [`trivial_approx`] — project the start onto every region; a
//!    (2n+1)-approximation that seeds everything else.
//!  * [`pseudo_approx`] — discretize inside a box of side `4L` at pitch
//!    parameter `gamma/(16n)` and run the exact DP; guarantees length ≤
//!    OPT + gamma·L whenever OPT ≤ L.
//!  * [`constant_approx`] — repeated pseudo-approximation that squeezes
//!    the bracket `L/B ≤ OPT ≤ L` down to `B ≤ 4` in O(log log n) rounds.
//!  * [`solve_convex_unions`] — the (1+eps) scheme for unions of convex
//!    bodies: constant bound, then one pseudo-approximation at gamma = eps/4.
//!  * [`solve_fat`] / [`solve_fat_grouped`] — packing-aware schemes for
//!    disjoint fat bodies using grouping and per-gap working boxes.
//!  * [`solve_balls`] — disjoint balls with a per-ball accuracy schedule
//!    eps_i that grows with the radius rank, plus dense uniform
//!    discretization for the two largest balls.

use thiserror::Error;

use crate::discretize::{
    nonuniform_ball_points, nonuniform_disk_points, uniform_boundary_points, DiscretizeError,
    GridDedup, WorkingBox, DEDUP_TOL,
};
use crate::geom::{unit, FatMeta, Instance, Point, Region, Tour};
use crate::solver::{solve_disjoint_dp, solve_intersecting_dp, SolverError};

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("eps out of range: {0}")]
    EpsOutOfRange(f64),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("region {0} lacks fatness data")]
    MissingFatMeta(usize),
    #[error("region {0} is not a ball")]
    NotBall(usize),
    #[error("regions {0} and {1} overlap; this solver requires disjoint regions")]
    Overlap(usize, usize),
    #[error("instance is not declared disjoint; this solver requires disjoint regions")]
    NotDisjoint,
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
}

/// Two-sided bracket on the optimum: `l / b ≤ OPT ≤ l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxBracket {
    pub l: f64,
    pub b: f64,
}

/// Grouping of the virtual sequence start, R_1, …, R_n, end into
/// consecutive blocks with one representative and one anchor point each.
///
/// Virtual index 0 is the start, `i` is region `i − 1`, `n + 1` is the end.
#[derive(Clone, Debug)]
pub struct GroupPlan {
    /// Inclusive virtual-index ranges, partitioning `0..=n+1`.
    pub groups: Vec<(usize, usize)>,
    /// Virtual index of each group's representative.
    pub representatives: Vec<usize>,
    /// Inner radius of each representative (0 for the start/end points).
    pub rep_inner_radius: Vec<f64>,
    /// One point inside each representative.
    pub anchors: Vec<Point>,
}

/// Iteration data from [`constant_approx_with_stats`].
#[derive(Clone, Copy, Debug)]
pub struct ConstantStats {
    pub iterations: usize,
    /// Whether a final pseudo-approximation at small gamma was needed to
    /// force the bracket ratio down to 4.
    pub polished: bool,
}

/// Divisor applied to eps when choosing the lattice pitch inside
/// [`solve_fat`]'s per-gap boxes.
pub const FAT_PITCH_DIV: f64 = 16.0;
/// Divisor applied to the per-ball eps_i before non-uniform spacing
/// (d = 2; surface counts grow quadratically in 3D, so the headroom is
/// smaller there).
pub const NONUNIFORM_SAFETY: f64 = 8.0;
pub const NONUNIFORM_SAFETY_3D: f64 = 0.5;
/// Divisor applied to eps for the two largest balls' uniform pitch (d = 2).
pub const TOP_PITCH_DIV: f64 = 256.0;
/// Published constant: a ball of radius rank i ≥ 3 in [`solve_balls`]
/// receives at most `NONUNIFORM_COUNT_C · (1/√eps_i) · ln(1/eps_i)`
/// candidates.
pub const NONUNIFORM_COUNT_C: f64 = 1024.0;
/// Published constant: the two largest balls together receive at most
/// `TOP_BALL_COUNT_C / eps` candidates (d = 2).
pub const TOP_BALL_COUNT_C: f64 = 2048.0;
/// Group size for balls (packing constant n₀ = 3) and the conservative
/// default for general fat bodies.
pub const BALL_GROUP_SIZE: usize = 3;
pub const DEFAULT_FAT_GROUP_SIZE: usize = 8;

/// Which approximation pipeline to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Pick the most specialized pipeline the instance supports.
    Auto,
    /// General unions of convex regions.
    Unions,
    /// Disjoint fat bodies with grouping.
    Fat,
    /// Disjoint balls with the per-rank accuracy schedule.
    Balls,
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "unions" => Ok(Algorithm::Unions),
            "fat" => Ok(Algorithm::Fat),
            "balls" => Ok(Algorithm::Balls),
            other => Err(format!(
                "unknown algorithm {other:?} (expected auto, unions, fat, or balls)"
            )),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Auto => "auto",
            Algorithm::Unions => "unions",
            Algorithm::Fat => "fat",
            Algorithm::Balls => "balls",
        })
    }
}

impl Algorithm {
    /// Resolve `Auto` against an instance: the balls pipeline when every
    /// region is a ball and the instance is declared disjoint, the fat
    /// pipeline when fatness metadata is present throughout and the
    /// instance is declared disjoint, and the general pipeline otherwise.
    pub fn resolve(self, instance: &Instance) -> Algorithm {
        match self {
            Algorithm::Auto => {
                if instance.disjoint && instance.all_balls() {
                    Algorithm::Balls
                } else if instance.disjoint && instance.all_fat() {
                    Algorithm::Fat
                } else {
                    Algorithm::Unions
                }
            }
            fixed => fixed,
        }
    }
}

/// Run the chosen pipeline. Returns the tour and, for the balls
/// pipeline, the per-region candidate counts.
pub fn solve_instance(
    instance: &Instance,
    eps: f64,
    algorithm: Algorithm,
) -> Result<(Tour, Option<Vec<usize>>), ApproxError> {
    match algorithm.resolve(instance) {
        Algorithm::Balls => {
            let report = solve_balls_report(instance, eps)?;
            Ok((report.tour, Some(report.counts)))
        }
        Algorithm::Fat => Ok((solve_fat(instance, eps)?, None)),
        Algorithm::Unions => Ok((solve_convex_unions(instance, eps)?, None)),
        Algorithm::Auto => unreachable!("resolve never returns Auto"),
    }
}

/// The (2n+1)-approximation: visit every region at the projection of the
/// start point.
pub fn trivial_approx(instance: &Instance) -> Tour {
    let mut points = Vec::with_capacity(instance.n() + 2);
    points.push(instance.start.clone());
    for (region, _) in &instance.regions {
        points.push(region.project_any(&instance.start));
    }
    points.push(instance.end.clone());
    Tour::from_points(points)
}

/// Candidate points for one region (each convex part discretized, merged).
fn region_candidates(
    region: &Region,
    bbox: &WorkingBox,
    eps_u: f64,
) -> Result<Vec<Point>, DiscretizeError> {
    let mut dedup = GridDedup::new(DEDUP_TOL);
    let mut out = Vec::new();
    for part in region.parts() {
        for p in uniform_boundary_points(part, bbox, eps_u)? {
            if dedup.insert(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Discretize inside a box of side `4L` centered at the start and solve
/// the exact DP. When OPT ≤ L the result has length ≤ OPT + gamma·L; when
/// L underestimates OPT the tour is still valid but carries no bound.
pub fn pseudo_approx(instance: &Instance, l: f64, gamma: f64) -> Result<Tour, ApproxError> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(ApproxError::ParamOutOfRange(format!("gamma = {gamma}")));
    }
    if !(l > 0.0) || !l.is_finite() {
        return Err(ApproxError::ParamOutOfRange(format!("L = {l}")));
    }
    let n = instance.n();
    if n == 0 {
        return Ok(Tour::from_points(vec![
            instance.start.clone(),
            instance.end.clone(),
        ]));
    }
    let bbox = WorkingBox::new(instance.start.clone(), 4.0 * l);
    let eps_u = (gamma / (16.0 * n as f64)).min(1.0);
    let sets: Vec<Vec<Point>> = instance
        .regions
        .iter()
        .map(|(r, _)| region_candidates(r, &bbox, eps_u))
        .collect::<Result<_, _>>()?;
    let tour = if instance.disjoint {
        solve_disjoint_dp(&sets, &instance.start, &instance.end)?
    } else {
        let regions = instance.region_list();
        solve_intersecting_dp(&sets, &regions, &instance.start, &instance.end, 1e-9)?
    };
    Ok(tour)
}

/// Constant-factor approximation by repeated pseudo-approximation.
///
/// Maintains the bracket `L/B ≤ OPT ≤ L` starting from the trivial tour
/// (`B = 2n+1`), probing at `L/√B` with gamma = 1 each round. Stops once
/// `B ≤ 4`, possibly with one final small-gamma pseudo-approximation when
/// the multiplicative updates stall just above 4.
pub fn constant_approx(instance: &Instance) -> Result<(Tour, ApproxBracket), ApproxError> {
    let (tour, bracket, _) = constant_approx_with_stats(instance)?;
    Ok((tour, bracket))
}

pub fn constant_approx_with_stats(
    instance: &Instance,
) -> Result<(Tour, ApproxBracket, ConstantStats), ApproxError> {
    let n = instance.n();
    let trivial = trivial_approx(instance);
    let mut l = trivial.length;
    let mut b = (2 * n + 1) as f64;
    if l <= 1e-12 {
        // OPT = 0: the start covers everything and equals the end
        return Ok((
            trivial,
            ApproxBracket { l: 0.0, b: 1.0 },
            ConstantStats {
                iterations: 0,
                polished: false,
            },
        ));
    }
    let mut best = trivial;
    let max_iters = ((2 * n + 1) as f64).log2().log2().ceil() as usize + 3;
    let mut iterations = 0;
    while b > 4.0 && iterations < max_iters {
        let probe_l = l / b.sqrt();
        let t = pseudo_approx(instance, probe_l, 1.0)?;
        if t.length < best.length {
            best = t.clone();
        }
        if t.length <= 2.0 * probe_l {
            // OPT could still be anywhere in [L/B, 2L/√B]
            l = 2.0 * l / b.sqrt();
            b = 2.0 * b.sqrt();
        } else {
            // the probe failed, so OPT > L/√B: the lower bound improves
            b = b.sqrt();
        }
        iterations += 1;
    }
    let lower = l / b;
    let mut polished = false;
    if b > 4.0 {
        // The update B ← 2√B has fixed point 4 and can stall slightly
        // above it. One pseudo-approximation at the current upper bound
        // with small gamma lands within (1 + gamma·B)·OPT ≤ 4·OPT.
        let t = pseudo_approx(instance, l, 0.25)?;
        if t.length < best.length {
            best = t;
        }
        polished = true;
    }
    let l_final = l.min(best.length);
    let b_final = (l_final / lower).min(4.0);
    Ok((
        best,
        ApproxBracket {
            l: l_final,
            b: b_final,
        },
        ConstantStats {
            iterations,
            polished,
        },
    ))
}

/// The (1+eps) scheme for ordered unions of convex bodies: constant
/// bracket, then a single pseudo-approximation at gamma = eps/4.
pub fn solve_convex_unions(instance: &Instance, eps: f64) -> Result<Tour, ApproxError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ApproxError::EpsOutOfRange(eps));
    }
    let (coarse, bracket) = constant_approx(instance)?;
    if bracket.l <= 0.0 {
        return Ok(coarse);
    }
    let fine = pseudo_approx(instance, bracket.l, eps / 4.0)?;
    Ok(if fine.length <= coarse.length { fine } else { coarse })
}

/// Splits the virtual sequence (start, regions, end) into
/// `k = max(⌈(n+2)/s⌉, 2)` consecutive groups, picks the minimum-inner-
/// radius representative of each, and chains anchor points by sequential
/// projection.
pub fn group_split(instance: &Instance, s: usize) -> Result<GroupPlan, ApproxError> {
    if s == 0 {
        return Err(ApproxError::ParamOutOfRange("group size 0".into()));
    }
    for (i, (_, meta)) in instance.regions.iter().enumerate() {
        if meta.is_none() {
            return Err(ApproxError::MissingFatMeta(i));
        }
    }
    let n = instance.n();
    let total = n + 2;
    let k = total.div_ceil(s).max(2);
    let chunk = total.div_ceil(k);
    let mut groups = Vec::with_capacity(k);
    let mut lo = 0usize;
    while lo < total {
        let hi = (lo + chunk - 1).min(total - 1);
        groups.push((lo, hi));
        lo = hi + 1;
    }
    let r_of = |v: usize| -> f64 {
        if v == 0 || v == n + 1 {
            0.0
        } else {
            instance.regions[v - 1].1.as_ref().unwrap().r_h
        }
    };
    let last = groups.len() - 1;
    let mut representatives = Vec::with_capacity(groups.len());
    for (g, &(lo, hi)) in groups.iter().enumerate() {
        let rep = if g == 0 {
            0
        } else if g == last {
            n + 1
        } else {
            (lo..=hi)
                .min_by(|&a, &b| r_of(a).partial_cmp(&r_of(b)).unwrap())
                .unwrap()
        };
        representatives.push(rep);
    }
    let rep_inner_radius: Vec<f64> = representatives.iter().map(|&v| r_of(v)).collect();
    let mut anchors = Vec::with_capacity(representatives.len());
    let mut prev = instance.start.clone();
    for &v in &representatives {
        let a = if v == 0 {
            instance.start.clone()
        } else if v == n + 1 {
            instance.end.clone()
        } else {
            instance.region(v - 1).project_any(&prev)
        };
        prev = a.clone();
        anchors.push(a);
    }
    Ok(GroupPlan {
        groups,
        representatives,
        rep_inner_radius,
        anchors,
    })
}

/// Clone of `instance` where every ball lacking fatness data gets the
/// exact meta (inner radius = radius, fatness 1).
fn with_ball_meta(instance: &Instance) -> Instance {
    let mut out = instance.clone();
    for (region, meta) in out.regions.iter_mut() {
        if meta.is_none() {
            if let Region::Ball { radius, .. } = region {
                *meta = Some(FatMeta {
                    r_h: radius.max(1e-12),
                    fatness_bound: 1.0,
                });
            }
        }
    }
    out
}

fn check_ball_disjointness(instance: &Instance) -> Result<(), ApproxError> {
    let balls: Vec<(usize, &Point, f64)> = instance
        .regions
        .iter()
        .enumerate()
        .filter_map(|(i, (r, _))| match r {
            Region::Ball { center, radius } => Some((i, center, *radius)),
            _ => None,
        })
        .collect();
    for a in 0..balls.len() {
        for b in a + 1..balls.len() {
            let (i, ca, ra) = balls[a];
            let (j, cb, rb) = balls[b];
            if ca.dist(cb) < ra + rb - 1e-9 {
                return Err(ApproxError::Overlap(i, j));
            }
        }
    }
    Ok(())
}

/// The grouping scheme for disjoint fat bodies at constant group size:
/// per-gap constant approximations fix working boxes, every region is
/// discretized uniformly inside its gap's box, and one global DP runs
/// over all candidates.
pub fn solve_fat(instance: &Instance, eps: f64) -> Result<Tour, ApproxError> {
    let s = if instance.all_balls() {
        BALL_GROUP_SIZE
    } else {
        DEFAULT_FAT_GROUP_SIZE
    };
    solve_fat_with_group_size(instance, eps, s)
}

pub fn solve_fat_with_group_size(
    instance: &Instance,
    eps: f64,
    group_size: usize,
) -> Result<Tour, ApproxError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ApproxError::EpsOutOfRange(eps));
    }
    if !instance.disjoint {
        return Err(ApproxError::NotDisjoint);
    }
    check_ball_disjointness(instance)?;
    let inst = with_ball_meta(instance);
    for (i, (_, meta)) in inst.regions.iter().enumerate() {
        if meta.is_none() {
            return Err(ApproxError::MissingFatMeta(i));
        }
    }
    let n = inst.n();
    if n == 0 {
        return Ok(Tour::from_points(vec![
            inst.start.clone(),
            inst.end.clone(),
        ]));
    }
    let plan = group_split(&inst, group_size)?;
    let outer_of = |v: usize| -> f64 {
        if v == 0 || v == n + 1 {
            0.0
        } else {
            inst.regions[v - 1].1.as_ref().unwrap().outer_radius()
        }
    };
    let eps_u = (eps / FAT_PITCH_DIV).min(1.0);
    let mut sets: Vec<Vec<Point>> = vec![Vec::new(); n];
    let mut dedups: Vec<GridDedup> = (0..n).map(|_| GridDedup::new(DEDUP_TOL)).collect();
    let add = |j: usize, pts: Vec<Point>, sets: &mut Vec<Vec<Point>>, dedups: &mut Vec<GridDedup>| {
        for p in pts {
            if dedups[j].insert(&p) {
                sets[j].push(p);
            }
        }
    };
    let k = plan.representatives.len();
    for g in 0..k - 1 {
        let v_lo = plan.representatives[g];
        let v_hi = plan.representatives[g + 1];
        let sub_regions: Vec<(Region, Option<FatMeta>)> = (v_lo + 1..v_hi)
            .map(|v| inst.regions[v - 1].clone())
            .collect();
        let sub = Instance {
            dimension: inst.dimension,
            start: plan.anchors[g].clone(),
            end: plan.anchors[g + 1].clone(),
            regions: sub_regions,
            disjoint: true,
        };
        let (_, bracket) = constant_approx(&sub)?;
        let d_approx = bracket.l.max(plan.anchors[g].dist(&plan.anchors[g + 1]));
        let l = d_approx + 4.0 * outer_of(v_lo) + 2.0 * outer_of(v_hi) + 1e-12;
        let bbox = WorkingBox::new(plan.anchors[g].clone(), 2.0 * l);
        // regions strictly inside the gap, plus the two representatives
        // (an internal representative collects candidates from both of
        // its gaps and always keeps its anchor)
        for v in v_lo.max(1)..=v_hi.min(n) {
            let j = v - 1;
            let pts = region_candidates(inst.region(j), &bbox, eps_u)?;
            add(j, pts, &mut sets, &mut dedups);
        }
    }
    for (g, &v) in plan.representatives.iter().enumerate() {
        if v >= 1 && v <= n {
            add(v - 1, vec![plan.anchors[g].clone()], &mut sets, &mut dedups);
        }
    }
    let tour = solve_disjoint_dp(&sets, &inst.start, &inst.end)?;
    Ok(tour)
}

/// Grouping at size ⌈1/eps⌉ with independent subproblems: each gap
/// between consecutive representatives is solved on its own (anchored at
/// the representatives' anchor points) and the pieces are concatenated.
pub fn solve_fat_grouped<F>(
    instance: &Instance,
    eps: f64,
    inner_solver: F,
) -> Result<Tour, ApproxError>
where
    F: Fn(&Instance, f64) -> Result<Tour, ApproxError>,
{
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ApproxError::EpsOutOfRange(eps));
    }
    if !instance.disjoint {
        return Err(ApproxError::NotDisjoint);
    }
    check_ball_disjointness(instance)?;
    let inst = with_ball_meta(instance);
    let n = inst.n();
    if n == 0 {
        return Ok(Tour::from_points(vec![
            inst.start.clone(),
            inst.end.clone(),
        ]));
    }
    let s = (1.0 / eps).ceil() as usize;
    let plan = group_split(&inst, s)?;
    let k = plan.representatives.len();
    let mut points = vec![Point(vec![]); n + 2];
    points[0] = inst.start.clone();
    points[n + 1] = inst.end.clone();
    for (g, &v) in plan.representatives.iter().enumerate() {
        if v >= 1 && v <= n {
            points[v] = plan.anchors[g].clone();
        }
    }
    for g in 0..k - 1 {
        let v_lo = plan.representatives[g];
        let v_hi = plan.representatives[g + 1];
        if v_hi <= v_lo + 1 {
            continue;
        }
        let sub_regions: Vec<(Region, Option<FatMeta>)> = (v_lo + 1..v_hi)
            .map(|v| inst.regions[v - 1].clone())
            .collect();
        let sub = Instance {
            dimension: inst.dimension,
            start: plan.anchors[g].clone(),
            end: plan.anchors[g + 1].clone(),
            regions: sub_regions,
            disjoint: true,
        };
        let sub_tour = inner_solver(&sub, eps)?;
        for (offset, v) in (v_lo + 1..v_hi).enumerate() {
            points[v] = sub_tour.points[offset + 1].clone();
        }
    }
    Ok(Tour::from_points(points))
}

/// Per-ball accuracy schedule: the i-th largest ball (1-based rank) gets
/// eps for ranks 1–2 and `eps · max(i,3)^{2/3} / n^{2/3}` past that.
pub fn eps_schedule(rank: usize, n: usize, eps: f64) -> f64 {
    if rank <= 2 {
        eps
    } else {
        let i = rank.max(3) as f64;
        eps * i.powf(2.0 / 3.0) / (n as f64).powf(2.0 / 3.0)
    }
}

/// Output of [`solve_balls_report`]: the tour plus the per-ball candidate
/// counts, accuracy schedule, and radius ranks used to build it.
#[derive(Clone, Debug)]
pub struct BallsReport {
    pub tour: Tour,
    pub counts: Vec<usize>,
    pub eps_i: Vec<f64>,
    /// 1-based radius rank per region (1 = largest).
    pub rank: Vec<usize>,
}

/// The (1+C·eps) scheme for disjoint balls.
pub fn solve_balls(instance: &Instance, eps: f64) -> Result<Tour, ApproxError> {
    Ok(solve_balls_report(instance, eps)?.tour)
}

pub fn solve_balls_report(instance: &Instance, eps: f64) -> Result<BallsReport, ApproxError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ApproxError::EpsOutOfRange(eps));
    }
    let n = instance.n();
    let mut balls: Vec<(Point, f64)> = Vec::with_capacity(n);
    for (i, (r, _)) in instance.regions.iter().enumerate() {
        match r {
            Region::Ball { center, radius } => balls.push((center.clone(), *radius)),
            _ => return Err(ApproxError::NotBall(i)),
        }
    }
    check_ball_disjointness(instance)?;
    if n == 0 {
        return Ok(BallsReport {
            tour: Tour::from_points(vec![instance.start.clone(), instance.end.clone()]),
            counts: vec![],
            eps_i: vec![],
            rank: vec![],
        });
    }
    // length bound for sizing the dense boxes; only the 2D top-rank
    // branch consumes it, so in higher dimensions the cruder trivial
    // bound avoids a costly constant approximation
    let d = instance.dimension;
    let coarse = if d == 2 {
        solve_fat(instance, 1.0)?
    } else {
        trivial_approx(instance)
    };
    let l = coarse.length.max(instance.start.dist(&instance.end));
    if l <= 1e-12 {
        return Ok(BallsReport {
            tour: coarse,
            counts: vec![1; n],
            eps_i: vec![eps; n],
            rank: (1..=n).collect(),
        });
    }
    // 1-based rank by radius, largest first, ties toward the lower index
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| balls[b].1.partial_cmp(&balls[a].1).unwrap().then(a.cmp(&b)));
    let mut rank = vec![0usize; n];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos + 1;
    }
    let mut sets: Vec<Vec<Point>> = Vec::with_capacity(n);
    let mut eps_i_out = Vec::with_capacity(n);
    for i in 0..n {
        let (center, radius) = &balls[i];
        let eps_i = eps_schedule(rank[i], n, eps);
        eps_i_out.push(eps_i);
        if *radius == 0.0 {
            sets.push(vec![center.clone()]);
            continue;
        }
        if d == 2 && rank[i] <= 2 {
            // dense uniform arc inside a box around the whole action
            let bbox = WorkingBox::new(instance.start.clone(), 4.0 * l);
            let eps_u = (eps / TOP_PITCH_DIV).min(1.0);
            let region = Region::Ball {
                center: center.clone(),
                radius: *radius,
            };
            sets.push(uniform_boundary_points(&region, &bbox, eps_u)?);
            continue;
        }
        let safety = if d == 2 {
            NONUNIFORM_SAFETY
        } else {
            NONUNIFORM_SAFETY_3D
        };
        let eps_eff = (eps_i / safety).clamp(1e-12, 0.99);
        let prev = if i == 0 {
            instance.start.clone()
        } else {
            balls[i - 1].0.clone()
        };
        let next = if i == n - 1 {
            instance.end.clone()
        } else {
            balls[i + 1].0.clone()
        };
        let mut dedup = GridDedup::new(DEDUP_TOL);
        let mut pts = Vec::new();
        for nb in [prev, next] {
            let target = axis_target(center, &nb);
            let new_pts = if d == 2 {
                nonuniform_disk_points(center, *radius, &target, eps_eff)?
            } else {
                nonuniform_ball_points(center, *radius, &target, eps_eff)?
            };
            for p in new_pts {
                if dedup.insert(&p) {
                    pts.push(p);
                }
            }
        }
        sets.push(pts);
    }
    let counts = sets.iter().map(|s| s.len()).collect();
    let tour = solve_disjoint_dp(&sets, &instance.start, &instance.end)?;
    Ok(BallsReport {
        tour,
        counts,
        eps_i: eps_i_out,
        rank,
    })
}

/// A point defining the discretization axis from `center`; falls back to
/// a coordinate direction when the neighbor coincides with the center.
fn axis_target(center: &Point, neighbor: &Point) -> Point {
    if unit(&neighbor.sub(center)).is_some() {
        neighbor.clone()
    } else {
        let mut c = center.0.clone();
        c[0] += 1.0;
        Point(c)
    }
}

/// Index-by-index error decomposition between an optimal tour and a
/// rounded tour with the same endpoints.
///
/// With `o_i = p′_i − p_i`, `u_i = unit(p_{i+1} − p_i)` and
/// `d_i = p′_{i+1} − p′_i`:
/// `extra1(i) = o_i · (u_{i−1} − u_i)` and
/// `extra2(i) = ‖d_i‖ − d_i · u_i`, and the lengths satisfy
/// `Σ‖d_i‖ = OPT + Σ extra1 + Σ extra2` whenever no optimal segment is
/// degenerate.
#[derive(Clone, Debug)]
pub struct RoundingBreakdown {
    /// Per interior index 1..=n.
    pub extra1: Vec<f64>,
    /// Per segment 0..=n.
    pub extra2: Vec<f64>,
    /// Offsets o_i per tour point.
    pub offsets: Vec<Vec<f64>>,
    /// Along-components a_i = d_i · u_i per segment.
    pub along: Vec<f64>,
    /// Indices whose optimal segment has zero length (unit vector
    /// undefined there; the identity is not asserted for these).
    pub degenerate: Vec<usize>,
    pub optimal_length: f64,
    pub rounded_length: f64,
}

impl RoundingBreakdown {
    /// `rounded_length − (optimal_length + Σextra1 + Σextra2)`; zero (to
    /// rounding) when no segment is degenerate.
    pub fn identity_gap(&self) -> f64 {
        let extras: f64 = self.extra1.iter().sum::<f64>() + self.extra2.iter().sum::<f64>();
        self.rounded_length - (self.optimal_length + extras)
    }
}

pub fn rounding_error_decomposition(optimal: &Tour, rounded: &Tour) -> RoundingBreakdown {
    assert_eq!(
        optimal.points.len(),
        rounded.points.len(),
        "tours must be aligned index by index"
    );
    let m = optimal.points.len();
    let mut degenerate = Vec::new();
    let units: Vec<Option<Vec<f64>>> = (0..m - 1)
        .map(|i| {
            let u = unit(&optimal.points[i + 1].sub(&optimal.points[i]));
            if u.is_none() {
                degenerate.push(i);
            }
            u
        })
        .collect();
    let offsets: Vec<Vec<f64>> = (0..m)
        .map(|i| rounded.points[i].sub(&optimal.points[i]))
        .collect();
    let mut extra1 = Vec::with_capacity(m - 2);
    for i in 1..m - 1 {
        let v = match (&units[i - 1], &units[i]) {
            (Some(a), Some(b)) => crate::geom::dot(&offsets[i], a) - crate::geom::dot(&offsets[i], b),
            _ => 0.0,
        };
        extra1.push(v);
    }
    let mut extra2 = Vec::with_capacity(m - 1);
    let mut along = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let d = rounded.points[i + 1].sub(&rounded.points[i]);
        let len = crate::geom::norm(&d);
        let a = match &units[i] {
            Some(u) => crate::geom::dot(&d, u),
            None => len,
        };
        along.push(a);
        extra2.push(len - a);
    }
    RoundingBreakdown {
        extra1,
        extra2,
        offsets,
        along,
        degenerate,
        optimal_length: optimal.length,
        rounded_length: rounded.length,
    }
}
