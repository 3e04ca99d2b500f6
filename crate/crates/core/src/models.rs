//! Built-in instances with reference answers that can be replayed.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bertrand::{audit_price_equilibria, profits, BertrandModel, LinearDemand, PriceGrid};
use crate::error::{Error, Result};
use crate::expr::parse_utility;
use crate::game::{best_response, nash_regrets, Game};
use crate::numeric::{Interval, SearchBudget};
use crate::split::{LinearOperator, SplitProblem};

/// Identifiers accepted by [`builtin`].
pub const BUILTIN_IDS: &[&str] = &[
    "example-4.1",
    "example-4.1:E1",
    "example-4.1:E2",
    "quadratic-sanity",
    "quadratic-mismatch",
    "bertrand-1-2",
    "bertrand-1-1",
];

#[derive(Debug, Clone)]
pub enum InstanceProblem {
    Split(SplitProblem),
    Game(Game),
    Bertrand(BertrandModel),
}

/// Where a reference value comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Asserted as a reference value.
    Stated { source: String },
    Trivial,
    /// Computed by an independent oracle.
    Derived { oracle: String },
}

type Replay = Arc<dyn Fn(&SearchBudget) -> Result<Vec<f64>> + Send + Sync>;

/// A reference value and the computation that reproduces it.
///
/// When `derived` is present and differs from `claimed`, the claim is a
/// known discrepancy and the replay is expected to match `derived`.
#[derive(Clone)]
pub struct ReferenceClaim {
    pub description: String,
    pub claimed: Vec<f64>,
    pub derived: Option<Vec<f64>>,
    pub provenance: Provenance,
    pub tolerance: f64,
    replay: Replay,
}

impl fmt::Debug for ReferenceClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReferenceClaim")
            .field("description", &self.description)
            .field("claimed", &self.claimed)
            .field("derived", &self.derived)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl ReferenceClaim {
    fn new(
        description: impl Into<String>,
        claimed: Vec<f64>,
        provenance: Provenance,
        tolerance: f64,
        replay: impl Fn(&SearchBudget) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self { description: description.into(), claimed, derived: None, provenance, tolerance, replay: Arc::new(replay) }
    }

    fn with_derived(mut self, derived: Vec<f64>) -> Self {
        self.derived = Some(derived);
        self
    }

    /// The value the replay should reproduce.
    pub fn expected(&self) -> &[f64] {
        self.derived.as_deref().unwrap_or(&self.claimed)
    }

    pub fn replay(&self, budget: &SearchBudget) -> Result<ClaimReplay> {
        let replayed = (self.replay)(budget)?;
        let close = |target: &[f64]| {
            target.len() == replayed.len() && target.iter().zip(&replayed).all(|(a, b)| (a - b).abs() <= self.tolerance)
        };
        Ok(ClaimReplay {
            description: self.description.clone(),
            provenance: self.provenance.clone(),
            claimed: self.claimed.clone(),
            derived: self.derived.clone(),
            matches_oracle: close(self.expected()),
            matches_claim: close(&self.claimed),
            replayed,
            tolerance: self.tolerance,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReplay {
    pub description: String,
    pub provenance: Provenance,
    pub claimed: Vec<f64>,
    pub derived: Option<Vec<f64>>,
    pub replayed: Vec<f64>,
    pub tolerance: f64,
    pub matches_oracle: bool,
    pub matches_claim: bool,
}

impl ClaimReplay {
    /// The oracle reproduced and contradicts the stated value.
    pub fn is_documented_discrepancy(&self) -> bool {
        self.matches_oracle && !self.matches_claim
    }
}

#[derive(Debug, Clone)]
pub struct NamedInstance {
    pub id: String,
    pub problem: InstanceProblem,
    pub claims: Vec<ReferenceClaim>,
}

impl NamedInstance {
    /// Every game contained in the instance.
    pub fn games(&self) -> Vec<&Game> {
        match &self.problem {
            InstanceProblem::Split(p) => vec![&p.game_n, &p.game_m],
            InstanceProblem::Game(g) => vec![g],
            InstanceProblem::Bertrand(_) => vec![],
        }
    }

    pub fn replay_claims(&self, budget: &SearchBudget) -> Result<Vec<ClaimReplay>> {
        self.claims.iter().map(|c| c.replay(budget)).collect()
    }
}

fn stated(source: &str) -> Provenance {
    Provenance::Stated { source: source.into() }
}

fn derived(oracle: &str) -> Provenance {
    Provenance::Derived { oracle: oracle.into() }
}

fn example_games() -> (Game, Game) {
    let half_line = Interval::nonnegative();
    let e1 = Game::builder("E1")
        .player("a", half_line, parse_utility("a*b*c - 4*a^2").expect("valid"))
        .player("b", half_line, parse_utility("a^2*b*c - 0.125*b^4").expect("valid"))
        .player("c", half_line, parse_utility("a^0.5*b^0.5*c^0.5 - 0.5*c").expect("valid"))
        .build()
        .expect("valid game");
    let e2 = Game::builder("E2")
        .player("d", half_line, parse_utility("0.5*d*e - 0.3333333333333333*d^2").expect("valid"))
        .player("e", half_line, parse_utility("48*d^0.5*e - 0.020833333333333332*e^4").expect("valid"))
        .build()
        .expect("valid game");
    (e1, e2)
}

fn example_operator() -> LinearOperator {
    LinearOperator::from_rows(vec![vec![1.0, 2.0, 1.0], vec![2.0, 1.0, 2.0]]).expect("finite")
}

const CANDIDATE: [f64; 3] = [1.0, 2.0, 4.0];
const IMAGE: [f64; 2] = [9.0, 12.0];

fn e1_claims(e1: &Game) -> Vec<ReferenceClaim> {
    let root2 = 2f64.sqrt();
    let g = e1.clone();
    let utilities = ReferenceClaim::new(
        "E1 utilities at (1, 2, 4)",
        vec![4.0, 6.0, 2.0 * root2 - 2.0],
        derived("direct arithmetic"),
        1e-12,
        move |_| g.utilities(&CANDIDATE),
    );
    let g = e1.clone();
    let regrets = ReferenceClaim::new(
        "E1 regrets at the equilibrium candidate (1, 2, 4)",
        vec![0.0, 0.0, 0.0],
        stated("worked example"),
        1e-4,
        move |b| Ok(nash_regrets(&g, &CANDIDATE, b)?.0),
    )
    .with_derived(vec![0.0, 0.0, 3.0 - 2.0 * root2]);
    let g = e1.clone();
    let br_c = ReferenceClaim::new(
        "E1 player c best response against a = 1, b = 2",
        vec![4.0],
        stated("worked example"),
        1e-4,
        move |b| Ok(best_response(&g, 2, &CANDIDATE, b)?.block),
    )
    .with_derived(vec![2.0]);
    vec![utilities, regrets, br_c]
}

fn e2_claims(e2: &Game) -> Vec<ReferenceClaim> {
    let g = e2.clone();
    let utilities = ReferenceClaim::new(
        "E2 utilities at (9, 12)",
        vec![27.0, 1296.0],
        derived("direct arithmetic"),
        1e-9,
        move |_| g.utilities(&IMAGE),
    );
    let g = e2.clone();
    let regrets = ReferenceClaim::new(
        "E2 regrets at (9, 12)",
        vec![0.0, 0.0],
        stated("worked example"),
        1e-6,
        move |b| Ok(nash_regrets(&g, &IMAGE, b)?.0),
    );
    let g = e2.clone();
    let brs = ReferenceClaim::new(
        "E2 best responses at (9, 12)",
        vec![9.0, 12.0],
        stated("worked example"),
        1e-4,
        move |b| Ok(vec![best_response(&g, 0, &IMAGE, b)?.block[0], best_response(&g, 1, &IMAGE, b)?.block[0]]),
    );
    vec![utilities, regrets, brs]
}

/// The two-game example with a 2x3 operator.
pub fn example_4_1() -> NamedInstance {
    let (e1, e2) = example_games();
    let op = example_operator();
    let mut claims = Vec::new();
    let o = op.clone();
    claims.push(ReferenceClaim::new("operator image of (1, 2, 4)", IMAGE.to_vec(), stated("worked example"), 0.0, move |_| {
        o.apply(&CANDIDATE)
    }));
    claims.extend(e1_claims(&e1));
    claims.extend(e2_claims(&e2));
    let problem = SplitProblem::new(e1, e2, op).expect("dimensions agree");
    NamedInstance { id: "example-4.1".into(), problem: InstanceProblem::Split(problem), claims }
}

fn example_game(id: &str) -> NamedInstance {
    let (e1, e2) = example_games();
    let (game, claims) = if id.ends_with("E1") {
        let c = e1_claims(&e1);
        (e1, c)
    } else {
        let c = e2_claims(&e2);
        (e2, c)
    };
    NamedInstance { id: id.into(), problem: InstanceProblem::Game(game), claims }
}

fn quadratic_game(name: &str, prefix: &str, targets: &[f64], hi: f64) -> Result<Game> {
    let set = Interval::new(0.0, hi)?;
    let mut b = Game::builder(name);
    for (k, t) in targets.iter().enumerate() {
        let id = format!("{prefix}{}", k + 1);
        let u = parse_utility(&format!("-1*({id} - {t:?})^2"))?;
        b = b.player(id, set, u);
    }
    b.build()
}

/// Separable quadratics pulling game N toward `a` and game M toward `b`.
/// `a` is a split equilibrium exactly when `matrix * a == b`.
pub fn quadratic_split_instance(a: &[f64], matrix: LinearOperator, b: &[f64]) -> Result<NamedInstance> {
    if matrix.cols() != a.len() {
        return Err(Error::DimensionMismatch { expected: matrix.cols(), found: a.len() });
    }
    if matrix.rows() != b.len() {
        return Err(Error::DimensionMismatch { expected: matrix.rows(), found: b.len() });
    }
    let scale = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    let hi = 10.0 * scale;
    let game_n = quadratic_game("quadratic N", "x", a, hi)?;
    let game_m = quadratic_game("quadratic M", "y", b, hi)?;
    let image = matrix.apply(a)?;
    let consistent = image.iter().zip(b).all(|(p, q)| (p - q).abs() <= 1e-9);
    let problem = SplitProblem::new(game_n, game_m, matrix)?;

    let p = problem.clone();
    let target = a.to_vec();
    let claim = ReferenceClaim::new(
        "the game-N target is a split equilibrium (1 = yes)",
        vec![if consistent { 1.0 } else { 0.0 }],
        derived("dominant strategies: equilibrium iff matrix * a = b"),
        0.0,
        move |budget| {
            let r = crate::split::verify_split_equilibrium(&p, &target, budget);
            Ok(vec![if r.is_ok_and(|r| r.verdict) { 1.0 } else { 0.0 }])
        },
    );
    Ok(NamedInstance { id: "quadratic".into(), problem: InstanceProblem::Split(problem), claims: vec![claim] })
}

/// Bertrand duopoly with demand `max(0, d0 - p1 - p2)`.
pub fn bertrand_instance(c1: f64, c2: f64, d0: f64) -> Result<NamedInstance> {
    let model = BertrandModel::new(c1, c2, LinearDemand { d0, a: 1.0, b: 1.0 })?;
    let mut claims = Vec::new();
    let m = model.clone();
    claims.push(ReferenceClaim::new("quality ratio and demand at cost prices", vec![c1 / c2, d0 - c1 - c2], derived("arithmetic"), 1e-12, move |_| {
        Ok(vec![m.lambda(), m.demand(c1, c2)])
    }));
    let m = model.clone();
    claims.push(ReferenceClaim::new("profits at cost prices", vec![0.0, 0.0], stated("zero-profit identity at cost prices"), 0.0, move |_| {
        let (u1, u2) = profits(&m, c1, c2)?;
        Ok(vec![u1, u2])
    }));
    let m = model.clone();
    claims.push(ReferenceClaim::new(
        "cost pair is the grid equilibrium, up to three grid steps",
        vec![c1, c2],
        stated("uniqueness of the cost-price equilibrium"),
        0.0,
        move |budget| {
            let (lo, hi) = m.default_price_range();
            let grid = PriceGrid::new(lo, hi, budget.grid_step)?;
            let audit = audit_price_equilibria(&m, &grid, budget.tolerance);
            Ok(if audit.passed { vec![c1, c2] } else { vec![f64::NAN, f64::NAN] })
        },
    ));
    Ok(NamedInstance {
        id: format!("bertrand-{c1}-{c2}"),
        problem: InstanceProblem::Bertrand(model),
        claims,
    })
}

fn swap() -> LinearOperator {
    LinearOperator::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).expect("finite")
}

/// Looks up a built-in instance by identifier.
pub fn builtin(id: &str) -> Result<NamedInstance> {
    let mut inst = match id {
        "example-4.1" => example_4_1(),
        "example-4.1:E1" | "example-4.1:E2" => example_game(id),
        "quadratic-sanity" => quadratic_split_instance(&[1.0, 2.0], swap(), &[2.0, 1.0])?,
        "quadratic-mismatch" => quadratic_split_instance(&[1.0, 2.0], swap(), &[3.0, 3.0])?,
        "bertrand-1-2" => bertrand_instance(1.0, 2.0, 10.0)?,
        "bertrand-1-1" => bertrand_instance(1.0, 1.0, 10.0)?,
        other => {
            return Err(Error::InvalidModel(format!(
                "unknown built-in `{other}`; known: {}",
                BUILTIN_IDS.join(", ")
            )))
        }
    };
    inst.id = id.into();
    Ok(inst)
}
