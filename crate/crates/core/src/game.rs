//! Noncooperative games over box strategy sets.
//!
//! A [`Game`] fixes a player order that every profile, utility vector and
//! regret vector shares. Profiles are flat real vectors; player `i` owns the
//! coordinates in [`Game::block`]`(i)`.

use std::fmt;
use std::ops::{Deref, Range};
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::expr::{CompiledExpr, UtilityExpr};
use crate::numeric::{
    maximize_1d, projected_gradient_ascent, sup_distance, BoxSet, Interval, SearchBudget,
};

/// Number of random starts used by [`solve_nash`].
pub const NASH_STARTS: usize = 32;
/// Weight kept on the current profile in each damped best-response step.
pub const DAMPING: f64 = 0.5;
const BR_RANDOM_STARTS: usize = 6;
/// A run is abandoned once any coordinate exceeds this multiple of the
/// truncation cap.
pub const DIVERGENCE_FACTOR: f64 = 1e3;

pub type UtilityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A player's payoff as a function of the full profile.
#[derive(Clone)]
pub enum Utility {
    Expr { source: UtilityExpr, compiled: CompiledExpr },
    Closed { label: String, f: UtilityFn },
}

impl Utility {
    pub fn closed(label: impl Into<String>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Utility::Closed { label: label.into(), f: Arc::new(f) }
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            Utility::Expr { compiled, .. } => compiled.eval(x),
            Utility::Closed { f, .. } => {
                let v = f(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFinite { at: x.to_vec(), value: v })
                }
            }
        }
    }

    pub fn expression(&self) -> Option<&UtilityExpr> {
        match self {
            Utility::Expr { source, .. } => Some(source),
            Utility::Closed { .. } => None,
        }
    }
}

impl fmt::Debug for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Utility::Expr { source, .. } => write!(f, "Expr({source})"),
            Utility::Closed { label, .. } => write!(f, "Closed({label})"),
        }
    }
}

/// Utility given as text before it is bound to a game's coordinate names.
pub enum UtilitySpec {
    Expr(UtilityExpr),
    Closed(Utility),
}

impl From<UtilityExpr> for UtilitySpec {
    fn from(e: UtilityExpr) -> Self {
        UtilitySpec::Expr(e)
    }
}

impl From<Utility> for UtilitySpec {
    fn from(u: Utility) -> Self {
        UtilitySpec::Closed(u)
    }
}

#[derive(Debug, Clone)]
pub struct Player {
    pub id: String,
    pub strategy_set: BoxSet,
    pub utility: Utility,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(pub Vec<f64>);

impl Deref for Profile {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Profile {
    fn from(v: Vec<f64>) -> Self {
        Profile(v)
    }
}

impl From<&[f64]> for Profile {
    fn from(v: &[f64]) -> Self {
        Profile(v.to_vec())
    }
}

#[derive(Debug, Clone)]
pub struct Game {
    name: String,
    players: Vec<Player>,
    offsets: Vec<usize>,
    dim: usize,
}

/// Incremental construction of a [`Game`]; expression utilities are bound
/// to coordinate names when [`GameBuilder::build`] runs.
pub struct GameBuilder {
    name: String,
    entries: Vec<(String, BoxSet, UtilitySpec)>,
}

impl GameBuilder {
    /// Adds a player with one coordinate in `interval`.
    pub fn player(self, id: impl Into<String>, interval: Interval, utility: impl Into<UtilitySpec>) -> Self {
        self.player_box(id, BoxSet::new(vec![interval]).expect("one interval"), utility)
    }

    pub fn player_box(mut self, id: impl Into<String>, set: BoxSet, utility: impl Into<UtilitySpec>) -> Self {
        self.entries.push((id.into(), set, utility.into()));
        self
    }

    pub fn build(self) -> Result<Game> {
        if self.entries.is_empty() {
            return Err(Error::InvalidGame("a game needs at least one player".into()));
        }
        let mut names = Vec::new();
        for (k, (id, set, _)) in self.entries.iter().enumerate() {
            if self.entries[..k].iter().any(|(other, _, _)| other == id) {
                return Err(Error::InvalidGame(format!("duplicate player `{id}`")));
            }
            if set.dim() == 1 {
                names.push(id.clone());
            } else {
                names.extend((1..=set.dim()).map(|j| format!("{id}_{j}")));
            }
        }
        let mut players = Vec::with_capacity(self.entries.len());
        let mut offsets = Vec::with_capacity(self.entries.len() + 1);
        let mut dim = 0;
        for (id, set, spec) in self.entries {
            offsets.push(dim);
            dim += set.dim();
            let utility = match spec {
                UtilitySpec::Expr(source) => {
                    let compiled = source.compile(&names)?;
                    Utility::Expr { source, compiled }
                }
                UtilitySpec::Closed(u) => u,
            };
            players.push(Player { id, strategy_set: set, utility });
        }
        offsets.push(dim);
        Ok(Game { name: self.name, players, offsets, dim })
    }
}

impl Game {
    pub fn builder(name: impl Into<String>) -> GameBuilder {
        GameBuilder { name: name.into(), entries: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn player_ids(&self) -> Vec<String> {
        self.players.iter().map(|p| p.id.clone()).collect()
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    /// Length of a profile.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block(&self, player: usize) -> Range<usize> {
        self.offsets[player]..self.offsets[player + 1]
    }

    pub fn player_index(&self, id: &str) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p.id == id)
            .ok_or_else(|| Error::UnknownPlayer(id.to_string()))
    }

    /// The product of all strategy sets.
    pub fn profile_box(&self) -> BoxSet {
        BoxSet::product(self.players.iter().map(|p| &p.strategy_set)).expect("nonempty")
    }

    pub fn is_feasible(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && self
                .players
                .iter()
                .enumerate()
                .all(|(i, p)| p.strategy_set.contains(&x[self.block(i)]))
    }

    pub fn check_feasible(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        for (i, p) in self.players.iter().enumerate() {
            if !p.strategy_set.contains(&x[self.block(i)]) {
                return Err(Error::Infeasible(format!(
                    "block {:?} of player `{}` in game `{}` lies outside its strategy set",
                    &x[self.block(i)],
                    p.id,
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// `f_i(x)`.
    pub fn utility(&self, player: usize, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        self.players[player].utility.eval(x)
    }

    /// `f(x)`, one entry per player.
    pub fn utilities(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        self.players.iter().map(|p| p.utility.eval(x)).collect()
    }

    /// `f_i(z_i, x_{-i})`.
    pub fn deviation_utility(&self, player: usize, z_block: &[f64], x: &[f64]) -> Result<f64> {
        let r = self.block(player);
        check_dim(r.len(), z_block.len())?;
        check_dim(self.dim, x.len())?;
        let mut y = x.to_vec();
        y[r].copy_from_slice(z_block);
        self.players[player].utility.eval(&y)
    }
}

/// Component-wise `u <= v`.
pub fn order_leq(u: &[f64], v: &[f64]) -> Result<bool> {
    check_dim(u.len(), v.len())?;
    Ok(u.iter().zip(v).all(|(a, b)| a <= b))
}

/// `u <= v + slack` component-wise.
pub fn order_leq_slack(u: &[f64], v: &[f64], slack: f64) -> Result<bool> {
    check_dim(u.len(), v.len())?;
    Ok(u.iter().zip(v).all(|(a, b)| *a <= b + slack))
}

/// `F(z, x)`: entry `i` is player `i`'s utility after unilaterally switching
/// to its block of `z` while everyone else plays `x`.
pub fn diagonal_payoff(game: &Game, z: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    check_dim(game.dim(), z.len())?;
    check_dim(game.dim(), x.len())?;
    let mut y = x.to_vec();
    (0..game.num_players())
        .map(|i| {
            let r = game.block(i);
            y[r.clone()].copy_from_slice(&z[r.clone()]);
            let v = game.players[i].utility.eval(&y);
            y[r.clone()].copy_from_slice(&x[r]);
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub block: Vec<f64>,
    pub value: f64,
}

fn player_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn sample_box(rng: &mut impl Rng, set: &BoxSet, cap: f64) -> Vec<f64> {
    set.intervals()
        .iter()
        .map(|iv| {
            let hi = iv.truncated_hi(cap);
            if hi > iv.lo() {
                rng.random_range(iv.lo()..=hi)
            } else {
                iv.lo()
            }
        })
        .collect()
}

/// Maximizes `f_i(., x_{-i})` over player `i`'s strategy set.
///
/// One-dimensional players use [`maximize_1d`]; wider blocks run projected
/// gradient ascent from the current block, the set's (truncated) center and
/// a few seeded random points, keeping the best.
pub fn best_response(game: &Game, player: usize, x: &[f64], budget: &SearchBudget) -> Result<BestResponse> {
    check_dim(game.dim(), x.len())?;
    if player >= game.num_players() {
        return Err(Error::UnknownPlayer(format!("#{player}")));
    }
    let r = game.block(player);
    let set = &game.players[player].strategy_set;
    let utility = &game.players[player].utility;

    if set.dim() == 1 {
        let k = r.start;
        let cell = std::cell::RefCell::new(x.to_vec());
        let err = std::cell::Cell::new(None);
        let f = |s: f64| {
            let mut y = cell.borrow_mut();
            y[k] = s;
            match utility.eval(&y) {
                Ok(v) => v,
                Err(e) => {
                    err.set(Some(e));
                    f64::NAN
                }
            }
        };
        return match maximize_1d(f, set.intervals()[0], budget) {
            Ok((s, v)) => Ok(BestResponse { block: vec![s], value: v }),
            Err(e) => Err(err.take().unwrap_or(e)),
        };
    }

    let cap = budget.truncation_cap;
    let mut starts = vec![x[r.clone()].to_vec()];
    starts.push(
        set.intervals()
            .iter()
            .map(|iv| 0.5 * (iv.lo() + iv.truncated_hi(cap)))
            .collect(),
    );
    let mut rng = player_rng(budget.seed, player as u64 + 1);
    starts.extend((0..BR_RANDOM_STARTS).map(|_| sample_box(&mut rng, set, cap)));

    let mut best: Option<BestResponse> = None;
    for s in starts {
        let f = |b: &[f64]| {
            let mut y = x.to_vec();
            y[r.clone()].copy_from_slice(b);
            utility.eval(&y).unwrap_or(f64::NAN)
        };
        let (block, value) = projected_gradient_ascent(f, set, &s, budget)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(BestResponse { block, value });
        }
    }
    Ok(best.expect("at least one start"))
}

/// Per-player regrets `best response value - current value`, never negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Regrets(pub Vec<f64>);

impl Regrets {
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

fn regrets_with_witnesses(
    game: &Game,
    x: &[f64],
    budget: &SearchBudget,
) -> Result<(Vec<f64>, Vec<f64>, Vec<BestResponse>)> {
    let current = game.utilities(x)?;
    let mut regrets = Vec::with_capacity(game.num_players());
    let mut witnesses = Vec::with_capacity(game.num_players());
    for (i, cur) in current.iter().enumerate() {
        let br = best_response(game, i, x, budget)?;
        // A search that lands below the incumbent means the incumbent is the
        // best point seen.
        let (eps, br) = if br.value < *cur {
            (0.0, BestResponse { block: x[game.block(i)].to_vec(), value: *cur })
        } else {
            (br.value - cur, br)
        };
        regrets.push(eps);
        witnesses.push(br);
    }
    Ok((current, regrets, witnesses))
}

pub fn nash_regrets(game: &Game, x: &[f64], budget: &SearchBudget) -> Result<Regrets> {
    game.check_feasible(x)?;
    Ok(Regrets(regrets_with_witnesses(game, x, budget)?.1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerWitness {
    pub player: String,
    pub current_value: f64,
    pub best_block: Vec<f64>,
    pub best_value: f64,
    pub regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub game: String,
    pub profile: Vec<f64>,
    pub regrets: Vec<f64>,
    pub players: Vec<PlayerWitness>,
    pub tolerance: f64,
    pub verdict: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn max_regret(&self) -> f64 {
        self.regrets.iter().copied().fold(0.0, f64::max)
    }

    /// Players whose regret exceeds the tolerance.
    pub fn failures(&self) -> impl Iterator<Item = &PlayerWitness> {
        self.players.iter().filter(move |p| p.regret > self.tolerance)
    }
}

pub fn verify_nash(game: &Game, x: &[f64], budget: &SearchBudget) -> Result<VerificationReport> {
    game.check_feasible(x)?;
    let (current, regrets, witnesses) = regrets_with_witnesses(game, x, budget)?;
    let players = game
        .players()
        .iter()
        .zip(current)
        .zip(regrets.iter().zip(witnesses))
        .map(|((p, cur), (eps, br))| PlayerWitness {
            player: p.id.clone(),
            current_value: cur,
            best_block: br.block,
            best_value: br.value,
            regret: *eps,
        })
        .collect::<Vec<_>>();
    let verdict = regrets.iter().all(|e| *e <= budget.tolerance);
    let notes = players
        .iter()
        .filter(|p| p.regret > budget.tolerance)
        .map(|p| {
            format!(
                "player `{}` improves by {:.6e} deviating to {:?}",
                p.player, p.regret, p.best_block
            )
        })
        .collect();
    Ok(VerificationReport {
        game: game.name().to_string(),
        profile: x.to_vec(),
        regrets,
        players,
        tolerance: budget.tolerance,
        verdict,
        notes,
    })
}

fn damped_best_response_run(game: &Game, start: Vec<f64>, budget: &SearchBudget) -> Result<Option<Vec<f64>>> {
    let mut x = start;
    let mut next = x.clone();
    for _ in 0..budget.max_iterations {
        for i in 0..game.num_players() {
            let br = best_response(game, i, &x, budget)?;
            for (k, b) in game.block(i).zip(br.block) {
                next[k] = DAMPING * x[k] + (1.0 - DAMPING) * b;
            }
        }
        let change = sup_distance(&x, &next);
        std::mem::swap(&mut x, &mut next);
        if change < budget.tolerance {
            return Ok(Some(x));
        }
        if x.iter().any(|v| v.abs() > DIVERGENCE_FACTOR * budget.truncation_cap) {
            return Ok(None);
        }
    }
    Ok(None)
}

/// Multistart damped simultaneous best-response iteration.
///
/// Runs from [`NASH_STARTS`] seeded random feasible profiles, merges fixed
/// points closer than `10 * tolerance` in start order, and keeps only those
/// that pass [`verify_nash`]. Starts that diverge, stall or hit evaluator
/// errors contribute nothing; an empty result is a finding, not an error.
pub fn solve_nash(game: &Game, budget: &SearchBudget) -> Result<Vec<Profile>> {
    budget.validate()?;
    let bx = game.profile_box();
    let mut rng = player_rng(budget.seed, 0);
    let starts: Vec<Vec<f64>> = (0..NASH_STARTS)
        .map(|_| sample_box(&mut rng, &bx, budget.truncation_cap))
        .collect();
    let ends: Vec<Option<Vec<f64>>> = starts
        .into_par_iter()
        .map(|s| damped_best_response_run(game, s, budget).ok().flatten())
        .collect();

    let mut unique: Vec<Vec<f64>> = Vec::new();
    for p in ends.into_iter().flatten() {
        if !unique.iter().any(|q| sup_distance(q, &p) <= 10.0 * budget.tolerance) {
            unique.push(p);
        }
    }
    Ok(unique
        .into_iter()
        .filter(|p| verify_nash(game, p, budget).is_ok_and(|r| r.verdict))
        .map(Profile)
        .collect())
}

/// Whether `z` lies in `Gamma_N(x)`: no player gains by switching from `z`'s
/// block to `x`'s, i.e. `F(x, z) <= f(z)` up to `tolerance`.
pub fn gamma_membership(game: &Game, x: &[f64], z: &[f64], tolerance: f64) -> Result<bool> {
    let fxz = diagonal_payoff(game, x, z)?;
    let fz = game.utilities(z)?;
    order_leq_slack(&fxz, &fz, tolerance)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavityWitness {
    pub player: String,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub lambda: f64,
    pub opponents: Vec<f64>,
    /// `f_i(lambda u + (1 - lambda) v, x_{-i})`.
    pub mixed_value: f64,
    /// `lambda f_i(u, x_{-i}) + (1 - lambda) f_i(v, x_{-i})`.
    pub chord_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub game: String,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub violations: Vec<ConcavityWitness>,
}

/// Samples own-strategy concavity of every player's utility.
///
/// Unbounded coordinates are sampled up to `truncation_cap`. The slack is
/// `tolerance * max(1, |chord|)` so large utility magnitudes do not trip on
/// rounding.
pub fn concavity_sample_check(game: &Game, samples: usize, budget: &SearchBudget) -> Result<ConcavityReport> {
    let bx = game.profile_box();
    let cap = budget.truncation_cap;
    let mut rng = player_rng(budget.seed, 0xC0C0);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let x = sample_box(&mut rng, &bx, cap);
        for (i, p) in game.players().iter().enumerate() {
            let u = sample_box(&mut rng, &p.strategy_set, cap);
            let v = sample_box(&mut rng, &p.strategy_set, cap);
            let lambda: f64 = rng.random_range(0.0..=1.0);
            let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
            let fu = game.deviation_utility(i, &u, &x)?;
            let fv = game.deviation_utility(i, &v, &x)?;
            let fw = game.deviation_utility(i, &w, &x)?;
            let chord = lambda * fu + (1.0 - lambda) * fv;
            if fw < chord - budget.tolerance * chord.abs().max(1.0) {
                violations.push(ConcavityWitness {
                    player: p.id.clone(),
                    u,
                    v,
                    lambda,
                    opponents: x.clone(),
                    mixed_value: fw,
                    chord_value: chord,
                });
            }
        }
    }
    Ok(ConcavityReport {
        game: game.name().to_string(),
        samples,
        tolerance: budget.tolerance,
        passed: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_utility;

    fn quadratic(a: &[f64]) -> Game {
        let mut b = Game::builder("quadratic");
        for (k, ak) in a.iter().enumerate() {
            let id = format!("x{}", k + 1);
            let e = parse_utility(&format!("-1*({id} - {ak})^2")).unwrap();
            b = b.player(id, Interval::new(0.0, 10.0).unwrap(), e);
        }
        b.build().unwrap()
    }

    fn convex() -> Game {
        Game::builder("convex")
            .player("x", Interval::new(0.0, 4.0).unwrap(), parse_utility("x^2").unwrap())
            .player("y", Interval::new(0.0, 4.0).unwrap(), parse_utility("y^2 + x").unwrap())
            .build()
            .unwrap()
    }

    #[test]
    fn order_examples() {
        assert!(order_leq(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap());
        assert!(!order_leq(&[0.0, 5.0], &[1.0, 2.0]).unwrap());
        assert!(!order_leq(&[1.0, 2.0], &[0.0, 5.0]).unwrap());
        assert!(order_leq(&[0.0, 0.0], &[1.0, 1.0]).unwrap());
        assert!(order_leq(&[0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn builder_rejects_duplicates_and_undeclared() {
        let e = parse_utility("x").unwrap();
        let dup = Game::builder("g")
            .player("x", Interval::nonnegative(), e.clone())
            .player("x", Interval::nonnegative(), e)
            .build();
        assert!(matches!(dup, Err(Error::InvalidGame(_))));
        let bad = Game::builder("g")
            .player("x", Interval::nonnegative(), parse_utility("x*q").unwrap())
            .build();
        assert_eq!(bad.unwrap_err(), Error::UndeclaredVariable { name: "q".into() });
    }

    #[test]
    fn multi_dim_blocks_use_indexed_names() {
        let set = BoxSet::uniform(Interval::new(0.0, 5.0).unwrap(), 2).unwrap();
        let g = Game::builder("g")
            .player_box("p", set, parse_utility("-1*(p_1 - 1)^2 - (p_2 - 3)^2 + q").unwrap())
            .player("q", Interval::new(0.0, 1.0).unwrap(), parse_utility("q*p_1").unwrap())
            .build()
            .unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.block(1), 2..3);
        let br = best_response(&g, 0, &[0.0, 0.0, 0.5], &SearchBudget::default()).unwrap();
        assert!(sup_distance(&br.block, &[1.0, 3.0]) < 1e-4, "{br:?}");
    }

    #[test]
    fn quadratic_dominant_strategies() {
        let g = quadratic(&[1.0, 2.5]);
        let budget = SearchBudget::default();
        assert_eq!(nash_regrets(&g, &[1.0, 2.5], &budget).unwrap().max(), 0.0);
        let r = verify_nash(&g, &[0.0, 2.5], &budget).unwrap();
        assert!(!r.verdict);
        assert!((r.regrets[0] - 1.0).abs() < 1e-9);
        assert_eq!(r.failures().count(), 1);
        let sols = solve_nash(&g, &budget).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sup_distance(&sols[0], &[1.0, 2.5]) < 1e-5);
    }

    #[test]
    fn verify_rejects_infeasible() {
        let g = quadratic(&[1.0]);
        assert!(matches!(
            verify_nash(&g, &[11.0], &SearchBudget::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn gamma_examples() {
        let g = quadratic(&[1.0, 2.0]);
        let tol = 1e-9;
        assert!(gamma_membership(&g, &[3.0, 7.0], &[3.0, 7.0], tol).unwrap());
        assert!(gamma_membership(&g, &[9.0, 0.0], &[1.0, 2.0], tol).unwrap());
        // z = (5, 2): switching player 1 to x_1 = 1 is strictly better.
        assert!(!gamma_membership(&g, &[1.0, 0.0], &[5.0, 2.0], tol).unwrap());
    }

    #[test]
    fn concavity_examples() {
        let budget = SearchBudget::default();
        assert!(concavity_sample_check(&quadratic(&[1.0, 2.0]), 200, &budget).unwrap().passed);
        let r = concavity_sample_check(&convex(), 200, &budget).unwrap();
        assert!(!r.passed);
        let w = &r.violations[0];
        assert!(w.mixed_value < w.chord_value);
    }

    #[test]
    fn diagonal_identity() {
        let g = quadratic(&[1.0, 2.0, 3.0]);
        let x = [0.5, 4.0, 9.0];
        assert_eq!(diagonal_payoff(&g, &x, &x).unwrap(), g.utilities(&x).unwrap());
    }
}
