//! Split Nash equilibrium problems: two games linked by a linear operator
//! from the first game's profile space to the second's.
//!
//! A profile `x` solves the problem when it is a Nash equilibrium of game N
//! and `A x` is a Nash equilibrium of game M.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::game::{
    diagonal_payoff, order_leq_slack, solve_nash, verify_nash, Game, Profile, VerificationReport,
};
use crate::numeric::{grid_points, project_box, sup_distance, BoxSet, SearchBudget};

/// Dense row-major matrix mapping game-N profiles to game-M profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct LinearOperator {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl LinearOperator {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::InvalidOperator("matrix must be nonempty".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidOperator("rows have unequal lengths".into()));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidOperator("entries must be finite".into()));
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A^T y`.
    pub fn apply_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.rows, y.len())?;
        let mut out = vec![0.0; self.cols];
        for (i, yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        Ok(out)
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest eigenvalue of `A^T A` by power iteration.
    pub fn spectral_norm_sq(&self) -> f64 {
        let mut v = vec![1.0 / (self.cols as f64).sqrt(); self.cols];
        let mut lambda = 0.0;
        for _ in 0..200 {
            let av = self.apply(&v).expect("dims");
            let w = self.apply_transpose(&av).expect("dims");
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            lambda = norm;
            v = w.into_iter().map(|x| x / norm).collect();
        }
        lambda
    }
}

impl TryFrom<Vec<Vec<f64>>> for LinearOperator {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<LinearOperator> for Vec<Vec<f64>> {
    fn from(op: LinearOperator) -> Self {
        op.to_rows()
    }
}

pub fn apply_operator(op: &LinearOperator, x: &[f64]) -> Result<Profile> {
    op.apply(x).map(Profile)
}

/// Image range of one output coordinate; `None` ends are infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageRange {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelatednessReport {
    pub holds: bool,
    pub image_ranges: Vec<ImageRange>,
    /// Output coordinates whose image range escapes game M's box.
    pub violating_coordinates: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SplitProblem {
    pub game_n: Game,
    pub game_m: Game,
    pub operator: LinearOperator,
    relatedness: RelatednessReport,
}

impl SplitProblem {
    /// Checks dimensions and records relatedness; an operator that maps
    /// `S_N` outside `S_M` is accepted and flagged in [`Self::relatedness`].
    pub fn new(game_n: Game, game_m: Game, operator: LinearOperator) -> Result<Self> {
        check_dim(game_n.dim(), operator.cols())?;
        check_dim(game_m.dim(), operator.rows())?;
        let relatedness = relatedness_of(&game_n, &game_m, &operator);
        Ok(Self { game_n, game_m, operator, relatedness })
    }

    pub fn relatedness(&self) -> &RelatednessReport {
        &self.relatedness
    }
}

fn scaled(a: f64, bound: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * bound
    }
}

fn relatedness_of(game_n: &Game, game_m: &Game, op: &LinearOperator) -> RelatednessReport {
    let src = game_n.profile_box();
    let dst = game_m.profile_box();
    let mut ranges = Vec::with_capacity(op.rows());
    let mut violating = Vec::new();
    for (i, target) in dst.intervals().iter().enumerate() {
        let (mut lo, mut hi) = (0.0, 0.0);
        for (a, iv) in op.row(i).iter().zip(src.intervals()) {
            let l = scaled(*a, iv.lo());
            let h = scaled(*a, iv.hi().unwrap_or(f64::INFINITY));
            lo += l.min(h);
            hi += l.max(h);
        }
        let inside = lo >= target.lo() && target.hi().is_none_or(|t| hi <= t);
        if !inside {
            violating.push(i);
        }
        ranges.push(ImageRange {
            lo: lo.is_finite().then_some(lo),
            hi: hi.is_finite().then_some(hi),
        });
    }
    RelatednessReport { holds: violating.is_empty(), image_ranges: ranges, violating_coordinates: violating }
}

/// Exact interval-arithmetic test of `A S_N ⊆ S_M` for box strategy sets.
pub fn check_relatedness(problem: &SplitProblem) -> RelatednessReport {
    relatedness_of(&problem.game_n, &problem.game_m, &problem.operator)
}

/// Projected-gradient solution of `min ||A x - y||^2` over `x` in `bounds`.
/// Returns the minimizer and the residual norm `||A x - y||`.
pub fn least_squares_preimage(
    op: &LinearOperator,
    bounds: &BoxSet,
    target: &[f64],
    budget: &SearchBudget,
) -> Result<(Vec<f64>, f64)> {
    check_dim(op.cols(), bounds.dim())?;
    check_dim(op.rows(), target.len())?;
    let lip = 2.0 * op.spectral_norm_sq();
    let mut x = project_box(&vec![0.0; op.cols()], bounds)?;
    if lip > 0.0 {
        let step = 1.0 / lip;
        for _ in 0..budget.max_iterations.saturating_mul(50) {
            let r: Vec<f64> = op.apply(&x)?.iter().zip(target).map(|(a, b)| a - b).collect();
            let g = op.apply_transpose(&r)?;
            let next: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - 2.0 * step * gi).collect();
            let next = project_box(&next, bounds)?;
            let change = sup_distance(&x, &next);
            x = next;
            if change <= 1e-15 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
                break;
            }
        }
    }
    let residual = op
        .apply(&x)?
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok((x, residual))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageWitness {
    pub target: Vec<f64>,
    pub best_preimage: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurjectivityReport {
    pub samples: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub surjective_on_samples: bool,
    pub failures: Vec<PreimageWitness>,
}

/// Samples targets in `S_M` (middle 90% of each truncated coordinate range)
/// and checks each has a preimage in `S_N` up to the tolerance.
pub fn check_surjectivity(problem: &SplitProblem, samples: usize, budget: &SearchBudget) -> Result<SurjectivityReport> {
    let src = problem.game_n.profile_box();
    let dst = problem.game_m.profile_box();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    rng.set_stream(0x5A);
    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    for _ in 0..samples {
        let y: Vec<f64> = dst
            .intervals()
            .iter()
            .map(|iv| {
                let lo = iv.lo();
                let hi = iv.truncated_hi(budget.truncation_cap);
                let pad = 0.05 * (hi - lo);
                if hi - lo > 0.0 {
                    rng.random_range(lo + pad..=hi - pad)
                } else {
                    lo
                }
            })
            .collect();
        let (x, residual) = least_squares_preimage(&problem.operator, &src, &y, budget)?;
        max_residual = max_residual.max(residual);
        if residual > budget.tolerance {
            failures.push(PreimageWitness { target: y, best_preimage: x, residual });
        }
    }
    Ok(SurjectivityReport {
        samples,
        tolerance: budget.tolerance,
        max_residual,
        surjective_on_samples: failures.is_empty(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitVerification {
    pub profile: Vec<f64>,
    pub image: Vec<f64>,
    pub game_n: VerificationReport,
    pub game_m: VerificationReport,
    pub tolerance: f64,
    pub verdict: bool,
}

/// Verifies `x` in game N and `A x` in game M.
///
/// An image outside `S_M` is an error: relatedness fails at this point.
pub fn verify_split_equilibrium(problem: &SplitProblem, x: &[f64], budget: &SearchBudget) -> Result<SplitVerification> {
    let game_n = verify_nash(&problem.game_n, x, budget)?;
    let image = problem.operator.apply(x)?;
    if !problem.game_m.is_feasible(&image) {
        return Err(Error::Infeasible(format!(
            "image {image:?} lies outside the strategy sets of `{}` (relatedness fails here)",
            problem.game_m.name()
        )));
    }
    let game_m = verify_nash(&problem.game_m, &image, budget)?;
    Ok(SplitVerification {
        profile: x.to_vec(),
        verdict: game_n.verdict && game_m.verdict,
        image,
        game_n,
        game_m,
        tolerance: budget.tolerance,
    })
}

/// Nash equilibria of game N whose image passes verification in game M.
pub fn solve_split(problem: &SplitProblem, budget: &SearchBudget) -> Result<Vec<Profile>> {
    Ok(solve_nash(&problem.game_n, budget)?
        .into_iter()
        .filter(|x| verify_split_equilibrium(problem, x, budget).is_ok_and(|r| r.verdict))
        .collect())
}

/// Which side of the problem a witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    N,
    M,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdpWitness {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub lambda: f64,
    /// Side whose vector disjunction failed; `None` for the joint property.
    pub side: Option<Side>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinDominanceWitness {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub lambda: f64,
    pub side: Side,
    pub player: String,
    /// `min(f_i(u_i, w_-i), f_i(v_i, w_-i))`.
    pub min_deviation: f64,
    /// `f_i(w)`.
    pub at_mix: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdpReport {
    pub samples: usize,
    pub tolerance: f64,
    pub joint_failures: Vec<CdpWitness>,
    pub vector_form_failures: Vec<CdpWitness>,
    pub min_dominance_failures: Vec<MinDominanceWitness>,
}

impl CdpReport {
    pub fn joint_holds(&self) -> bool {
        self.joint_failures.is_empty()
    }
}

/// Outcome of one `(u, v, lambda)` replay.
#[derive(Debug, Clone, PartialEq)]
pub struct CdpOutcome {
    /// `F(u, w) <= f(w)`.
    pub n_u: bool,
    /// `F(v, w) <= f(w)`.
    pub n_v: bool,
    /// `G(Au, Aw) <= g(Aw)`.
    pub m_u: bool,
    /// `G(Av, Aw) <= g(Aw)`.
    pub m_v: bool,
    pub min_dominance: Vec<MinDominanceWitness>,
}

impl CdpOutcome {
    pub fn joint(&self) -> bool {
        (self.n_u && self.m_u) || (self.n_v && self.m_v)
    }
}

fn slack_for(values: &[f64], tol: f64) -> Vec<f64> {
    values.iter().map(|v| tol * v.abs().max(1.0)).collect()
}

fn leq_scaled(lhs: &[f64], rhs: &[f64], slack: &[f64]) -> bool {
    lhs.iter().zip(rhs).zip(slack).all(|((a, b), s)| *a <= b + s)
}

#[allow(clippy::too_many_arguments)]
fn side_check(
    game: &Game,
    side: Side,
    u: &[f64],
    v: &[f64],
    w: &[f64],
    lambda: f64,
    tol: f64,
    out: &mut Vec<MinDominanceWitness>,
    orig: (&[f64], &[f64]),
) -> Result<(bool, bool)> {
    let fw = game.utilities(w)?;
    let slack = slack_for(&fw, tol);
    let fu = diagonal_payoff(game, u, w)?;
    let fv = diagonal_payoff(game, v, w)?;
    for (i, p) in game.players().iter().enumerate() {
        let m = fu[i].min(fv[i]);
        if m > fw[i] + slack[i] {
            out.push(MinDominanceWitness {
                u: orig.0.to_vec(),
                v: orig.1.to_vec(),
                lambda,
                side,
                player: p.id.clone(),
                min_deviation: m,
                at_mix: fw[i],
            });
        }
    }
    Ok((leq_scaled(&fu, &fw, &slack), leq_scaled(&fv, &fw, &slack)))
}

/// Evaluates every CDP-related comparison at `w = lambda u + (1 - lambda) v`.
pub fn replay_cdp(problem: &SplitProblem, u: &[f64], v: &[f64], lambda: f64, tol: f64) -> Result<CdpOutcome> {
    let w: Vec<f64> = u.iter().zip(v).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
    let mut min_dominance = Vec::new();
    let (n_u, n_v) = side_check(&problem.game_n, Side::N, u, v, &w, lambda, tol, &mut min_dominance, (u, v))?;
    let op = &problem.operator;
    let (au, av, aw) = (op.apply(u)?, op.apply(v)?, op.apply(&w)?);
    let (m_u, m_v) = side_check(&problem.game_m, Side::M, &au, &av, &aw, lambda, tol, &mut min_dominance, (u, v))?;
    Ok(CdpOutcome { n_u, n_v, m_u, m_v, min_dominance })
}

/// Samples the convexity-direction-preserved property and its pieces.
///
/// Records failures of the joint disjunction, of the per-game vector
/// disjunctions, and of per-component min-dominance (the part that
/// own-concavity guarantees). Only the last is expected to be empty on
/// own-concave games; the others are findings.
pub fn cdp_sample_check(problem: &SplitProblem, samples: usize, budget: &SearchBudget) -> Result<CdpReport> {
    let bx = problem.game_n.profile_box();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    rng.set_stream(0xCD);
    let draws: Vec<(Vec<f64>, Vec<f64>, f64)> = (0..samples)
        .map(|_| {
            let u = crate::game::sample_box(&mut rng, &bx, budget.truncation_cap);
            let v = crate::game::sample_box(&mut rng, &bx, budget.truncation_cap);
            (u, v, rng.random_range(0.0..=1.0))
        })
        .collect();
    let outcomes: Vec<Result<CdpOutcome>> = draws
        .par_iter()
        .map(|(u, v, l)| replay_cdp(problem, u, v, *l, budget.tolerance))
        .collect();

    let mut report = CdpReport {
        samples,
        tolerance: budget.tolerance,
        joint_failures: Vec::new(),
        vector_form_failures: Vec::new(),
        min_dominance_failures: Vec::new(),
    };
    for ((u, v, lambda), outcome) in draws.into_iter().zip(outcomes) {
        let o = outcome?;
        let witness = |side| CdpWitness { u: u.clone(), v: v.clone(), lambda, side };
        if !o.joint() {
            report.joint_failures.push(witness(None));
        }
        if !(o.n_u || o.n_v) {
            report.vector_form_failures.push(witness(Some(Side::N)));
        }
        if !(o.m_u || o.m_v) {
            report.vector_form_failures.push(witness(Some(Side::M)));
        }
        report.min_dominance_failures.extend(o.min_dominance);
    }
    Ok(report)
}

/// Whether `(z, Az)` belongs to `T(x, Ax)`:
/// `F(x, z) <= f(z)` and `G(Ax, Az) <= g(Az)`, each with `tolerance` slack.
pub fn kkm_t_membership(problem: &SplitProblem, x: &[f64], z: &[f64], tolerance: f64) -> Result<bool> {
    let n_ok = order_leq_slack(
        &diagonal_payoff(&problem.game_n, x, z)?,
        &problem.game_n.utilities(z)?,
        tolerance,
    )?;
    if !n_ok {
        return Ok(false);
    }
    let ax = problem.operator.apply(x)?;
    let az = problem.operator.apply(z)?;
    order_leq_slack(
        &diagonal_payoff(&problem.game_m, &ax, &az)?,
        &problem.game_m.utilities(&az)?,
        tolerance,
    )
}

/// Finite grid over which the intersection of the `T` sets is probed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeGrid {
    pub points_per_axis: usize,
    /// Region to grid; defaults to `S_N` truncated at the budget's cap.
    pub bounds: Option<BoxSet>,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        Self { points_per_axis: 8, bounds: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeMember {
    pub z: Vec<f64>,
    pub image: Vec<f64>,
    /// Verdict of exact verification at the budget tolerance.
    pub verified: bool,
    /// Largest sup-distance from a game-N block to that player's best response.
    pub n_distance: f64,
    /// Same for the image in game M.
    pub m_distance: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KkmProbeReport {
    pub points_per_axis: usize,
    pub spacing: Vec<f64>,
    /// Allowed best-response distance in game N: twice the largest spacing.
    pub slack_n: f64,
    /// Allowed best-response distance in game M: `||A||_inf * slack_n`.
    pub slack_m: f64,
    pub members: Vec<ProbeMember>,
}

impl KkmProbeReport {
    pub fn nonempty(&self) -> bool {
        !self.members.is_empty()
    }

    pub fn all_consistent(&self) -> bool {
        self.members.iter().all(|m| m.consistent)
    }
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn block_distance(report: &VerificationReport, x: &[f64], game: &Game) -> f64 {
    report
        .players
        .iter()
        .enumerate()
        .map(|(i, w)| sup_distance(&w.best_block, &x[game.block(i)]))
        .fold(0.0, f64::max)
}

/// Grid points `z` with `(z, Az)` in `T(x, Ax)` for every grid point `x`.
///
/// Each member is cross-checked with [`verify_split_equilibrium`]; it is
/// consistent when every player's best response lies within the slack of
/// its current block (twice the grid spacing, scaled by `||A||_inf` on the
/// game-M side).
pub fn kkm_intersection_probe(problem: &SplitProblem, grid: &ProbeGrid, budget: &SearchBudget) -> Result<KkmProbeReport> {
    let n = grid.points_per_axis.max(2);
    let region = grid.bounds.clone().unwrap_or_else(|| problem.game_n.profile_box());
    check_dim(problem.game_n.dim(), region.dim())?;
    let axes: Vec<Vec<f64>> = region
        .intervals()
        .iter()
        .map(|iv| {
            let lo = iv.lo();
            let hi = iv.truncated_hi(budget.truncation_cap);
            (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
        })
        .collect();
    let spacing: Vec<f64> = axes.iter().map(|a| (a[1] - a[0]).abs()).collect();
    let points = cartesian(&axes);

    let flags: Vec<Result<bool>> = points
        .par_iter()
        .map(|z| {
            for x in &points {
                if !kkm_t_membership(problem, x, z, budget.tolerance)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();

    let slack_n = 2.0 * spacing.iter().copied().fold(0.0, f64::max);
    let slack_m = problem.operator.inf_norm() * slack_n;
    let mut members = Vec::new();
    for (z, flag) in points.iter().zip(flags) {
        if !flag? {
            continue;
        }
        let member = match verify_split_equilibrium(problem, z, budget) {
            Ok(rep) => {
                let n_distance = block_distance(&rep.game_n, z, &problem.game_n);
                let m_distance = block_distance(&rep.game_m, &rep.image, &problem.game_m);
                ProbeMember {
                    z: z.clone(),
                    image: rep.image,
                    verified: rep.verdict,
                    n_distance,
                    m_distance,
                    consistent: n_distance <= slack_n && m_distance <= slack_m,
                }
            }
            Err(_) => ProbeMember {
                z: z.clone(),
                image: problem.operator.apply(z)?,
                verified: false,
                n_distance: f64::INFINITY,
                m_distance: f64::INFINITY,
                consistent: false,
            },
        };
        members.push(member);
    }
    Ok(KkmProbeReport { points_per_axis: n, spacing, slack_n, slack_m, members })
}

/// Uniformly spaced grid points of a box, `step` apart at most.
pub fn box_grid(bounds: &BoxSet, step: f64, cap: f64) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = bounds
        .intervals()
        .iter()
        .map(|iv| grid_points(iv.lo(), iv.truncated_hi(cap), step))
        .collect();
    cartesian(&axes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_utility;
    use crate::numeric::Interval;

    fn quad_game(name: &str, ids: &[&str], targets: &[f64], hi: f64) -> Game {
        let mut b = Game::builder(name);
        for (id, t) in ids.iter().zip(targets) {
            b = b.player(*id, Interval::new(0.0, hi).unwrap(), parse_utility(&format!("-1*({id} - {t})^2")).unwrap());
        }
        b.build().unwrap()
    }

    fn sanity(b: &[f64]) -> SplitProblem {
        SplitProblem::new(
            quad_game("N", &["x1", "x2"], &[1.0, 2.0], 20.0),
            quad_game("M", &["y1", "y2"], b, 20.0),
            LinearOperator::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        )
        .unwrap()
    }

    fn half_line_game(name: &str, k: usize) -> Game {
        let mut b = Game::builder(name);
        for j in 0..k {
            b = b.player(format!("v{j}"), Interval::nonnegative(), parse_utility(&format!("-1*v{j}^2")).unwrap());
        }
        b.build().unwrap()
    }

    #[test]
    fn operator_examples() {
        let a = LinearOperator::from_rows(vec![vec![1.0, 2.0, 1.0], vec![2.0, 1.0, 2.0]]).unwrap();
        assert_eq!(apply_operator(&a, &[1.0, 2.0, 4.0]).unwrap().0, vec![9.0, 12.0]);
        assert_eq!(LinearOperator::identity(3).apply(&[1.5, -2.0, 7.0]).unwrap(), vec![1.5, -2.0, 7.0]);
        assert_eq!(LinearOperator::zeros(2, 3).apply(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0, 0.0]);
        assert!(a.apply(&[1.0]).is_err());
        assert!(LinearOperator::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(LinearOperator::from_rows(vec![vec![f64::NAN]]).is_err());
        // A A^T = [[6, 6], [6, 9]].
        assert!((a.spectral_norm_sq() - (15.0 + 153f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn relatedness_examples() {
        let nonneg = LinearOperator::from_rows(vec![vec![1.0, 2.0, 1.0], vec![2.0, 1.0, 2.0]]).unwrap();
        let p = SplitProblem::new(half_line_game("N", 3), half_line_game("M", 2), nonneg).unwrap();
        assert!(check_relatedness(&p).holds);

        let neg = LinearOperator::from_rows(vec![vec![-1.0]]).unwrap();
        let p = SplitProblem::new(half_line_game("N", 1), half_line_game("M", 1), neg).unwrap();
        let r = check_relatedness(&p);
        assert!(!r.holds);
        assert_eq!(r.image_ranges[0], ImageRange { lo: None, hi: Some(0.0) });
        assert!(!p.relatedness().holds);

        assert!(sanity(&[2.0, 1.0]).relatedness().holds);
    }

    #[test]
    fn surjectivity_examples() {
        let budget = SearchBudget::default();
        let id = SplitProblem::new(
            quad_game("N", &["a"], &[1.0], 10.0),
            quad_game("M", &["b"], &[1.0], 10.0),
            LinearOperator::identity(1),
        )
        .unwrap();
        assert!(check_surjectivity(&id, 50, &budget).unwrap().surjective_on_samples);
        assert!(check_surjectivity(&sanity(&[2.0, 1.0]), 50, &budget).unwrap().surjective_on_samples);

        let a = LinearOperator::from_rows(vec![vec![1.0, 2.0, 1.0], vec![2.0, 1.0, 2.0]]).unwrap();
        let nonneg = BoxSet::uniform(Interval::nonnegative(), 3).unwrap();
        let (_, res) = least_squares_preimage(&a, &nonneg, &[1.0, 0.0], &budget).unwrap();
        assert!(res > 0.1, "{res}");
        let (_, res) = least_squares_preimage(&a, &nonneg, &[9.0, 12.0], &budget).unwrap();
        assert!(res < 1e-6, "{res}");
    }

    #[test]
    fn split_verification_examples() {
        let budget = SearchBudget::default();
        let p = sanity(&[2.0, 1.0]);
        let r = verify_split_equilibrium(&p, &[1.0, 2.0], &budget).unwrap();
        assert!(r.verdict);
        assert_eq!(r.image, vec![2.0, 1.0]);
        let r = verify_split_equilibrium(&p, &[0.0, 0.0], &budget).unwrap();
        assert!(!r.verdict);
        assert!(r.game_n.regrets.iter().all(|e| *e > 0.5));
    }

    #[test]
    fn split_solutions() {
        let budget = SearchBudget::default();
        let sols = solve_split(&sanity(&[2.0, 1.0]), &budget).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sup_distance(&sols[0], &[1.0, 2.0]) < 1e-4);
        assert!(solve_split(&sanity(&[1.0, 2.0]), &budget).unwrap().is_empty());
    }

    #[test]
    fn cdp_trivial_and_convex() {
        let p = sanity(&[2.0, 1.0]);
        let o = replay_cdp(&p, &[3.0, 4.0], &[3.0, 4.0], 0.3, 1e-9).unwrap();
        assert!(o.joint() && o.n_u && o.n_v && o.m_u && o.m_v && o.min_dominance.is_empty());

        let convex = Game::builder("C")
            .player("x", Interval::new(0.0, 4.0).unwrap(), parse_utility("(x - 2)^2").unwrap())
            .build()
            .unwrap();
        let p = SplitProblem::new(convex.clone(), convex, LinearOperator::identity(1)).unwrap();
        let r = cdp_sample_check(&p, 200, &SearchBudget::default()).unwrap();
        assert!(!r.min_dominance_failures.is_empty());
        let w = &r.min_dominance_failures[0];
        let again = replay_cdp(&p, &w.u, &w.v, w.lambda, r.tolerance).unwrap();
        assert!(!again.min_dominance.is_empty());
    }

    #[test]
    fn t_membership_examples() {
        let p = sanity(&[2.0, 1.0]);
        let tol = 1e-9;
        assert!(kkm_t_membership(&p, &[7.0, 3.0], &[7.0, 3.0], tol).unwrap());
        assert!(kkm_t_membership(&p, &[15.0, 0.0], &[1.0, 2.0], tol).unwrap());
        // z far from the equilibrium; x holds player 1's best response.
        assert!(!kkm_t_membership(&p, &[1.0, 2.0], &[12.0, 2.0], tol).unwrap());
    }

    #[test]
    fn probe_on_small_grid() {
        let p = sanity(&[2.0, 1.0]);
        let grid = ProbeGrid {
            points_per_axis: 5,
            bounds: Some(BoxSet::uniform(Interval::new(0.0, 5.0).unwrap(), 2).unwrap()),
        };
        let r = kkm_intersection_probe(&p, &grid, &SearchBudget::default()).unwrap();
        assert!(r.nonempty());
        assert!(r.members.iter().any(|m| sup_distance(&m.z, &[1.0, 2.0]) <= 1.25));
        assert!(r.all_consistent());
    }
}
