//! Extended Bertrand duopoly with unequal unit costs.
//!
//! Firm 1 takes the whole market when `p1 < lambda * p2`, firm 2 when
//! `p1 > lambda * p2`, and on the tie line the market splits in proportions
//! `c1 / (c1 + c2)` and `c2 / (c1 + c2)`, where `lambda = c1 / c2`. Profits
//! are discontinuous across the tie line, so equilibria are audited by
//! exhaustive grid search with the tie price injected into every
//! best-response grid.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::grid_points;
use crate::split::LinearOperator;

/// Absolute tolerance for detecting `p1 == lambda * p2`.
pub const TIE_TOLERANCE: f64 = 1e-12;
/// Total demand at or below this counts as no trade in the uniqueness audit;
/// it absorbs rounding on the line where demand reaches zero.
pub const NO_TRADE_DEMAND: f64 = 1e-9;
/// Refinement factor for re-checking grid equilibria far from the cost pair.
pub const REFINEMENT: f64 = 100.0;

/// Total market demand at a price pair.
pub trait Demand: Send + Sync {
    fn total(&self, p1: f64, p2: f64) -> f64;
    /// Prices at and above which each firm sells nothing.
    fn price_caps(&self) -> (f64, f64);
    fn describe(&self) -> String;
}

/// `max(0, d0 - a p1 - b p2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearDemand {
    pub d0: f64,
    pub a: f64,
    pub b: f64,
}

impl Default for LinearDemand {
    fn default() -> Self {
        Self { d0: 10.0, a: 1.0, b: 1.0 }
    }
}

impl Demand for LinearDemand {
    fn total(&self, p1: f64, p2: f64) -> f64 {
        (self.d0 - self.a * p1 - self.b * p2).max(0.0)
    }

    fn price_caps(&self) -> (f64, f64) {
        (self.d0 / self.a, self.d0 / self.b)
    }

    fn describe(&self) -> String {
        format!("max(0, {} - {} p1 - {} p2)", self.d0, self.a, self.b)
    }
}

#[derive(Clone)]
pub struct BertrandModel {
    c1: f64,
    c2: f64,
    lambda: f64,
    demand: Arc<dyn Demand>,
}

impl fmt::Debug for BertrandModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BertrandModel")
            .field("c1", &self.c1)
            .field("c2", &self.c2)
            .field("lambda", &self.lambda)
            .field("demand", &self.demand.describe())
            .finish()
    }
}

impl BertrandModel {
    /// Requires `0 < c1 <= c2` and `0 < demand(c1, c2) < inf`.
    pub fn new(c1: f64, c2: f64, demand: impl Demand + 'static) -> Result<Self> {
        if !(c1 > 0.0 && c2 > 0.0 && c1.is_finite() && c2.is_finite()) {
            return Err(Error::InvalidModel(format!("costs must be positive, got ({c1}, {c2})")));
        }
        if c1 > c2 {
            return Err(Error::InvalidModel(format!("firm 1 cost {c1} exceeds firm 2 cost {c2}")));
        }
        let d = demand.total(c1, c2);
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidModel(format!("demand at cost prices is {d}, must be positive and finite")));
        }
        Ok(Self { c1, c2, lambda: c1 / c2, demand: Arc::new(demand) })
    }

    pub fn linear(c1: f64, c2: f64) -> Result<Self> {
        Self::new(c1, c2, LinearDemand::default())
    }

    pub fn costs(&self) -> (f64, f64) {
        (self.c1, self.c2)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn demand(&self, p1: f64, p2: f64) -> f64 {
        self.demand.total(p1, p2)
    }

    pub fn price_caps(&self) -> (f64, f64) {
        self.demand.price_caps()
    }

    pub fn describe_demand(&self) -> String {
        self.demand.describe()
    }

    /// `[0, min(cap, 5 c2)]` per firm, using the smaller of the two caps.
    pub fn default_price_range(&self) -> (f64, f64) {
        let (a, b) = self.price_caps();
        (0.0, a.min(b).min(5.0 * self.c2))
    }

    /// Price at which firm `firm` ties with the opponent's `opponent_price`.
    pub fn tie_price(&self, firm: Firm, opponent_price: f64) -> f64 {
        match firm {
            Firm::One => self.lambda * opponent_price,
            Firm::Two => opponent_price / self.lambda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Firm {
    One,
    Two,
}

fn check_prices(p1: f64, p2: f64) -> Result<()> {
    if p1 < 0.0 || p2 < 0.0 || p1.is_nan() || p2.is_nan() {
        return Err(Error::InvalidModel(format!("prices must be nonnegative, got ({p1}, {p2})")));
    }
    Ok(())
}

/// Fractions of total demand served by each firm; `(0, 0)` with no demand.
pub fn sales_shares(model: &BertrandModel, p1: f64, p2: f64) -> Result<(f64, f64)> {
    check_prices(p1, p2)?;
    if model.demand(p1, p2) <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let gap = p1 - model.lambda * p2;
    Ok(if gap.abs() <= TIE_TOLERANCE {
        let s1 = model.c1 / (model.c1 + model.c2);
        // c1 <= c2 keeps s1 <= 1/2, so 1 - s1 is exact and the shares sum to 1.
        (s1, 1.0 - s1)
    } else if gap < 0.0 {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    })
}

/// Units sold by each firm.
pub fn sales(model: &BertrandModel, p1: f64, p2: f64) -> Result<(f64, f64)> {
    let (s1, s2) = sales_shares(model, p1, p2)?;
    let d = model.demand(p1, p2);
    Ok((s1 * d, s2 * d))
}

/// `u_j = (p_j - c_j) * share_j * demand`.
pub fn profits(model: &BertrandModel, p1: f64, p2: f64) -> Result<(f64, f64)> {
    let (d1, d2) = sales(model, p1, p2)?;
    Ok(((p1 - model.c1) * d1, (p2 - model.c2) * d2))
}

fn profit_of(model: &BertrandModel, firm: Firm, own: f64, opponent: f64) -> f64 {
    let r = match firm {
        Firm::One => profits(model, own, opponent).map(|u| u.0),
        Firm::Two => profits(model, opponent, own).map(|u| u.1),
    };
    r.unwrap_or(f64::NEG_INFINITY)
}

/// Best price for `firm` among `grid` plus the exact tie price (when it
/// falls inside the grid's range). Ties go to the lower price.
pub fn grid_best_response(model: &BertrandModel, firm: Firm, opponent_price: f64, grid: &[f64]) -> (f64, f64) {
    let lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie = model.tie_price(firm, opponent_price);
    let extra = (tie >= lo && tie <= hi && tie >= 0.0).then_some(tie);
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for p in grid.iter().copied().chain(extra) {
        if p < 0.0 {
            continue;
        }
        let u = profit_of(model, firm, p, opponent_price);
        if u > best.1 || (u == best.1 && p < best.0) {
            best = (p, u);
        }
    }
    best
}

/// Price grid `[lo, hi]` with spacing `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl PriceGrid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || lo < 0.0 || hi < lo || !hi.is_finite() {
            return Err(Error::InvalidModel(format!("bad price grid [{lo}, {hi}] step {step}")));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn points(&self) -> Vec<f64> {
        grid_points(self.lo, self.hi, self.step)
    }

    fn contains(&self, p: f64) -> bool {
        p >= self.lo && p <= self.hi
    }
}

/// Whether neither firm has a tie-augmented grid deviation improving its
/// profit by more than `tolerance`.
pub fn is_grid_equilibrium(model: &BertrandModel, p1: f64, p2: f64, grid: &[f64], tolerance: f64) -> bool {
    let Ok((u1, u2)) = profits(model, p1, p2) else { return false };
    let (_, b1) = grid_best_response(model, Firm::One, p2, grid);
    let (_, b2) = grid_best_response(model, Firm::Two, p1, grid);
    u1 >= b1 - tolerance && u2 >= b2 - tolerance
}

/// All grid equilibria, in ascending `(p1, p2)` order.
///
/// Candidates are the grid square plus the tie points `(lambda p2, p2)` and
/// `(p1, p1 / lambda)` that fall inside the range.
pub fn enumerate_grid_equilibria(model: &BertrandModel, grid: &PriceGrid, tolerance: f64) -> Vec<(f64, f64)> {
    let pts = grid.points();
    let br1: Vec<f64> = pts.par_iter().map(|&p2| grid_best_response(model, Firm::One, p2, &pts).1).collect();
    let br2: Vec<f64> = pts.par_iter().map(|&p1| grid_best_response(model, Firm::Two, p1, &pts).1).collect();

    let mut found: Vec<(f64, f64)> = pts
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &p1)| {
            let mut row = Vec::new();
            for (j, &p2) in pts.iter().enumerate() {
                if let Ok((u1, u2)) = profits(model, p1, p2) {
                    if u1 >= br1[j] - tolerance && u2 >= br2[i] - tolerance {
                        row.push((p1, p2));
                    }
                }
            }
            // Off-grid tie partners of this row's grid price.
            let t2 = model.tie_price(Firm::Two, p1);
            if grid.contains(t2) && is_grid_equilibrium(model, p1, t2, &pts, tolerance) {
                row.push((p1, t2));
            }
            let p2 = p1;
            let t1 = model.tie_price(Firm::One, p2);
            if grid.contains(t1) && is_grid_equilibrium(model, t1, p2, &pts, tolerance) {
                row.push((t1, p2));
            }
            row
        })
        .collect();
    found.sort_by(|a, b| a.partial_cmp(b).expect("finite prices"));
    found.dedup();
    found
}

/// The case of the uniqueness argument that rules a price pair out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProofCase {
    /// `d1 < c1`, `d1 > lambda d2`: firm 2 sells at a loss.
    Sub1_1,
    /// `d1 < c1`, `d1 <= lambda d2`: firm 1 sells at a loss.
    Sub1_2,
    /// `d1 > lambda d2 > c1`: firm 1 can undercut to a positive profit.
    Sub2_1,
    /// `d1 > c1 > lambda d2`: firm 2 sells at a loss.
    Sub2_2,
    /// `d1 > lambda d2 = c1`: firm 2 can raise its price.
    Sub2_3,
    /// `d1 = lambda d2 > c1`: firm 2 gains by cutting slightly below the tie.
    Sub2_4,
    /// `c1 < d1 < lambda d2`: firm 2 can move onto the tie line.
    Sub2_5,
    /// `d1 = c1`, `d2 < c2`, `c1 >= lambda d2`.
    CaseI1,
    /// `d1 = c1`, `d2 < c2`, `c1 < lambda d2`.
    CaseI2,
    /// `d1 = c1`, `d2 > c2`.
    CaseII,
    /// `(c1, c2)` itself.
    Equilibrium,
}

impl fmt::Display for ProofCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProofCase::Sub1_1 => "1.1",
            ProofCase::Sub1_2 => "1.2",
            ProofCase::Sub2_1 => "2.1",
            ProofCase::Sub2_2 => "2.2",
            ProofCase::Sub2_3 => "2.3",
            ProofCase::Sub2_4 => "2.4",
            ProofCase::Sub2_5 => "2.5",
            ProofCase::CaseI1 => "I.1",
            ProofCase::CaseI2 => "I.2",
            ProofCase::CaseII => "II",
            ProofCase::Equilibrium => "equilibrium",
        };
        f.write_str(s)
    }
}

pub fn proof_case(model: &BertrandModel, d1: f64, d2: f64) -> ProofCase {
    let eq = |a: f64, b: f64| (a - b).abs() <= TIE_TOLERANCE;
    let (c1, c2, l) = (model.c1, model.c2, model.lambda);
    let ld2 = l * d2;
    if eq(d1, c1) {
        return if eq(d2, c2) {
            ProofCase::Equilibrium
        } else if d2 > c2 {
            ProofCase::CaseII
        } else if c1 >= ld2 - TIE_TOLERANCE {
            ProofCase::CaseI1
        } else {
            ProofCase::CaseI2
        };
    }
    if d1 < c1 {
        return if d1 > ld2 + TIE_TOLERANCE { ProofCase::Sub1_1 } else { ProofCase::Sub1_2 };
    }
    if eq(d1, ld2) {
        ProofCase::Sub2_4
    } else if d1 < ld2 {
        ProofCase::Sub2_5
    } else if eq(ld2, c1) {
        ProofCase::Sub2_3
    } else if ld2 > c1 {
        ProofCase::Sub2_1
    } else {
        ProofCase::Sub2_2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseTally {
    pub case: String,
    pub grid_points: usize,
    /// Members in this case with positive total demand.
    pub surviving_trading: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumAudit {
    pub costs: (f64, f64),
    pub grid: PriceGrid,
    pub tolerance: f64,
    pub members: Vec<(f64, f64)>,
    /// Members with zero total demand. Nobody sells and no deviation can
    /// help, but demand is flat there, so uniqueness does not apply.
    pub no_trade_members: usize,
    pub contains_cost_pair: bool,
    pub profits_at_cost: (f64, f64),
    /// Largest sup-distance from a member with positive demand to `(c1, c2)`.
    pub max_distance: f64,
    /// Allowed distance: three grid steps.
    pub band: f64,
    /// Trading members outside the band that stop being equilibria on a
    /// grid refined by [`REFINEMENT`]: the profitable deviation lies
    /// strictly inside one grid cell.
    pub resolution_artifacts: Vec<(f64, f64)>,
    /// Trading members outside the band that survive refinement.
    pub unexplained: Vec<(f64, f64)>,
    /// Grid points and surviving members by proof case. Survivors outside the
    /// equilibrium case sit where the improving deviation needs a finer grid.
    pub cases: Vec<CaseTally>,
    pub passed: bool,
}

/// Grid audit of uniqueness of `(c1, c2)`: the cost pair must be a member
/// with zero profits, and every member with positive demand must lie within
/// three steps of it.
pub fn audit_price_equilibria(model: &BertrandModel, grid: &PriceGrid, tolerance: f64) -> EquilibriumAudit {
    let (c1, c2) = model.costs();
    let members = enumerate_grid_equilibria(model, grid, tolerance);
    let trades = |&(a, b): &(f64, f64)| model.demand(a, b) > NO_TRADE_DEMAND;
    let contains = members.iter().any(|&(a, b)| (a - c1).abs() <= TIE_TOLERANCE && (b - c2).abs() <= TIE_TOLERANCE);
    let profits_at_cost = profits(model, c1, c2).unwrap_or((f64::NAN, f64::NAN));
    let max_distance = members
        .iter()
        .filter(|m| trades(m))
        .map(|&(a, b)| (a - c1).abs().max((b - c2).abs()))
        .fold(0.0, f64::max);
    let no_trade_members = members.iter().filter(|m| !trades(m)).count();
    let band = 3.0 * grid.step;
    let far: Vec<(f64, f64)> = members
        .iter()
        .filter(|m| trades(m) && (m.0 - c1).abs().max((m.1 - c2).abs()) > band)
        .copied()
        .collect();
    let (resolution_artifacts, unexplained) = if far.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let fine = PriceGrid { step: grid.step / REFINEMENT, ..*grid }.points();
        far.into_par_iter().partition(|&(a, b)| !is_grid_equilibrium(model, a, b, &fine, tolerance))
    };

    let pts = grid.points();
    let mut tally: std::collections::BTreeMap<ProofCase, (usize, usize)> = Default::default();
    for &p1 in &pts {
        for &p2 in &pts {
            tally.entry(proof_case(model, p1, p2)).or_default().0 += 1;
        }
    }
    for m in members.iter().filter(|m| trades(m)) {
        tally.entry(proof_case(model, m.0, m.1)).or_default().1 += 1;
    }
    let cases = tally
        .into_iter()
        .map(|(case, (n, s))| CaseTally { case: case.to_string(), grid_points: n, surviving_trading: s })
        .collect();

    EquilibriumAudit {
        costs: (c1, c2),
        grid: *grid,
        tolerance,
        passed: contains && profits_at_cost == (0.0, 0.0) && unexplained.is_empty(),
        members,
        no_trade_members,
        contains_cost_pair: contains,
        profits_at_cost,
        max_distance,
        band,
        resolution_artifacts,
        unexplained,
        cases,
    }
}

/// `[[alpha, 1 - beta], [1 - alpha, beta]]`, columns summing to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovPriceMatrix {
    alpha: f64,
    beta: f64,
}

impl MarkovPriceMatrix {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidModel(format!("alpha, beta must lie in [0, 1], got ({alpha}, {beta})")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_identity(&self) -> bool {
        self.alpha == 1.0 && self.beta == 1.0
    }

    pub fn operator(&self) -> LinearOperator {
        LinearOperator::from_rows(vec![
            vec![self.alpha, 1.0 - self.beta],
            vec![1.0 - self.alpha, self.beta],
        ])
        .expect("finite 2x2")
    }
}

pub fn markov_price_transform(m: &MarkovPriceMatrix, p1: f64, p2: f64) -> (f64, f64) {
    (m.alpha * p1 + (1.0 - m.beta) * p2, (1.0 - m.alpha) * p1 + m.beta * p2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovAuditRow {
    pub alpha: f64,
    pub beta: f64,
    pub transformed: (f64, f64),
    /// Grid verdict: `(c1, c2)` and its transform are both grid equilibria.
    pub verdict: bool,
    /// `transform(c1, c2) == (c1, c2)`.
    pub oracle: bool,
    /// What the stated result predicts for this matrix.
    pub claimed: bool,
}

impl MarkovAuditRow {
    pub fn matches_oracle(&self) -> bool {
        self.verdict == self.oracle
    }

    pub fn matches_claim(&self) -> bool {
        self.verdict == self.claimed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovAudit {
    pub costs: (f64, f64),
    pub grid: PriceGrid,
    pub tolerance: f64,
    pub rows: Vec<MarkovAuditRow>,
}

impl MarkovAudit {
    pub fn all_match_oracle(&self) -> bool {
        self.rows.iter().all(MarkovAuditRow::matches_oracle)
    }

    pub fn claim_discrepancies(&self) -> impl Iterator<Item = &MarkovAuditRow> {
        self.rows.iter().filter(|r| !r.matches_claim())
    }
}

/// Checks, for each `(alpha, beta)`, whether `(c1, c2)` is a Markov split
/// equilibrium on the grid, against the fixed-point oracle and against the
/// stated claim (any matrix when `c1 == c2`, only the identity otherwise).
pub fn audit_markov_equilibria(
    model: &BertrandModel,
    alphas_betas: &[(f64, f64)],
    grid: &PriceGrid,
    tolerance: f64,
) -> Result<MarkovAudit> {
    let (c1, c2) = model.costs();
    let pts = grid.points();
    let base = is_grid_equilibrium(model, c1, c2, &pts, tolerance);
    let rows = alphas_betas
        .iter()
        .map(|&(alpha, beta)| {
            let m = MarkovPriceMatrix::new(alpha, beta)?;
            let (q1, q2) = markov_price_transform(&m, c1, c2);
            let verdict = base && q1 >= 0.0 && q2 >= 0.0 && is_grid_equilibrium(model, q1, q2, &pts, tolerance);
            let oracle = (q1 - c1).abs() <= 1e-9 && (q2 - c2).abs() <= 1e-9;
            let claimed = if c1 == c2 { true } else { m.is_identity() };
            Ok(MarkovAuditRow { alpha, beta, transformed: (q1, q2), verdict, oracle, claimed })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarkovAudit { costs: (c1, c2), grid: *grid, tolerance, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m12() -> BertrandModel {
        BertrandModel::linear(1.0, 2.0).unwrap()
    }

    #[test]
    fn model_validation() {
        assert!((m12().lambda() - 0.5).abs() == 0.0);
        assert_eq!(m12().demand(1.0, 2.0), 7.0);
        assert_eq!(BertrandModel::linear(1.0, 1.0).unwrap().lambda(), 1.0);
        assert!(BertrandModel::linear(2.0, 1.0).is_err());
        assert!(BertrandModel::linear(0.0, 1.0).is_err());
        assert!(BertrandModel::linear(6.0, 6.0).is_err());
    }

    #[test]
    fn share_examples() {
        let m = m12();
        let (s1, s2) = sales_shares(&m, 1.0, 2.0).unwrap();
        assert_eq!(s1, 1.0 / 3.0);
        assert!((s2 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(sales_shares(&m, 0.9, 2.0).unwrap(), (1.0, 0.0));
        assert_eq!(sales_shares(&m, 1.1, 2.0).unwrap(), (0.0, 1.0));
        assert_eq!(sales_shares(&m, 6.0, 6.0).unwrap(), (0.0, 0.0));
        assert!(sales_shares(&m, -0.1, 2.0).is_err());
    }

    #[test]
    fn profit_examples() {
        let m = m12();
        assert_eq!(profits(&m, 1.0, 2.0).unwrap(), (0.0, 0.0));
        let (u1, u2) = profits(&m, 0.9, 2.0).unwrap();
        assert!((u1 + 0.71).abs() < 1e-12);
        assert_eq!(u2, 0.0);
        assert_eq!(profits(&m, 5.0, 5.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn best_response_examples() {
        let m = m12();
        let grid = PriceGrid::new(0.0, 5.0, 0.01).unwrap().points();
        assert_eq!(grid_best_response(&m, Firm::One, 2.0, &grid), (1.0, 0.0));
        assert_eq!(grid_best_response(&m, Firm::Two, 1.0, &grid), (2.0, 0.0));
        let high = BertrandModel::linear(3.0, 3.0).unwrap();
        let (_, u) = grid_best_response(&high, Firm::One, 3.0, &[0.0, 1.0, 2.0]);
        assert!(u <= 0.0);
    }

    #[test]
    fn tie_price_is_injected() {
        // Against p2 = 2.01 the only profitable firm-1 price below 1.01 is
        // the tie at 1.005, which is off the grid.
        let m = m12();
        let grid = PriceGrid::new(0.0, 5.0, 0.01).unwrap().points();
        let (p, u) = grid_best_response(&m, Firm::One, 2.01, &grid);
        assert!((p - 1.005).abs() < 1e-12, "{p}");
        assert!(u > 0.0);
    }

    #[test]
    fn markov_transform_examples() {
        let id = MarkovPriceMatrix::new(1.0, 1.0).unwrap();
        assert_eq!(markov_price_transform(&id, 1.3, 2.7), (1.3, 2.7));
        let half = MarkovPriceMatrix::new(0.5, 0.5).unwrap();
        assert_eq!(markov_price_transform(&half, 1.0, 2.0), (1.5, 1.5));
        assert!(MarkovPriceMatrix::new(1.2, 0.0).is_err());
        assert_eq!(half.operator().apply(&[1.0, 2.0]).unwrap(), vec![1.5, 1.5]);
    }

    #[test]
    fn proof_cases_partition() {
        let m = m12();
        assert_eq!(proof_case(&m, 1.0, 2.0), ProofCase::Equilibrium);
        assert_eq!(proof_case(&m, 0.5, 0.5), ProofCase::Sub1_1);
        assert_eq!(proof_case(&m, 0.5, 3.0), ProofCase::Sub1_2);
        assert_eq!(proof_case(&m, 3.0, 4.0), ProofCase::Sub2_1);
        assert_eq!(proof_case(&m, 3.0, 1.0), ProofCase::Sub2_2);
        assert_eq!(proof_case(&m, 3.0, 2.0), ProofCase::Sub2_3);
        assert_eq!(proof_case(&m, 1.5, 3.0), ProofCase::Sub2_4);
        assert_eq!(proof_case(&m, 1.5, 4.0), ProofCase::Sub2_5);
        assert_eq!(proof_case(&m, 1.0, 1.5), ProofCase::CaseI1);
        assert_eq!(proof_case(&m, 1.0, 3.0), ProofCase::CaseII);
    }

    #[test]
    fn transform_can_leave_the_square() {
        let m = MarkovPriceMatrix::new(0.0, 1.0).unwrap();
        assert_eq!(markov_price_transform(&m, 1.0, 1.0), (0.0, 2.0));
    }

    #[test]
    fn markov_audit_small() {
        let m = BertrandModel::linear(1.0, 1.0).unwrap();
        let grid = PriceGrid::new(0.0, 5.0, 0.05).unwrap();
        let a = audit_markov_equilibria(&m, &[(0.4, 0.4), (0.2, 0.7)], &grid, 1e-6).unwrap();
        assert!(a.rows[0].verdict && a.rows[0].oracle && a.rows[0].claimed);
        assert!(!a.rows[1].verdict && !a.rows[1].oracle && a.rows[1].claimed);
        assert!(a.all_match_oracle());
        assert_eq!(a.claim_discrepancies().count(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn shares_conserve(p1 in 0.0..10.0f64, p2 in 0.0..10.0f64, tie in any::<bool>()) {
            let m = m12();
            let p1 = if tie { m.lambda() * p2 } else { p1 };
            let (s1, s2) = sales_shares(&m, p1, p2).unwrap();
            if m.demand(p1, p2) > 0.0 {
                prop_assert_eq!(s1 + s2, 1.0);
            }
        }

        #[test]
        fn transform_preserves_total(a in 0.0..=1.0f64, b in 0.0..=1.0f64, p1 in 0.0..100.0f64, p2 in 0.0..100.0f64) {
            let m = MarkovPriceMatrix::new(a, b).unwrap();
            let (q1, q2) = markov_price_transform(&m, p1, p2);
            prop_assert!((q1 + q2 - (p1 + p2)).abs() <= 1e-12 * (1.0 + p1 + p2));
            // Nonnegative with a preserved sum, so each price stays within
            // [0, 2P] for inputs in [0, P]; [0, P] itself is not preserved.
            prop_assert!(q1 >= 0.0 && q2 >= 0.0);
            prop_assert!(q1.max(q2) <= 2.0 * p1.max(p2) + 1e-12);
        }
    }
}
