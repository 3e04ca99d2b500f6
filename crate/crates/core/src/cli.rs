//! Command-line front end. [`run`] does all the work so the binary stays a
//! thin wrapper and the commands can be tested in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bertrand::{
    audit_price_equilibria, audit_markov_equilibria, profits, BertrandModel, LinearDemand, PriceGrid, NO_TRADE_DEMAND, REFINEMENT,
};
use crate::error::{Error, Result};
use crate::files::{read_spec, SpecFile};
use crate::game::{solve_nash, verify_nash, Game, VerificationReport};
use crate::models::{builtin, example_4_1, InstanceProblem, BUILTIN_IDS};
use crate::numeric::SearchBudget;
use crate::repeated::{make_repeated_problem, validate_transition_matrix};
use crate::split::{
    cdp_sample_check, kkm_intersection_probe, solve_split, verify_split_equilibrium, ProbeGrid, SplitProblem,
};

/// Verdict true.
pub const EXIT_OK: i32 = 0;
/// Verdict false or unexpected mismatch.
pub const EXIT_FALSE: i32 = 1;
/// Bad input.
pub const EXIT_INPUT: i32 = 2;
/// A stated claim is contradicted by its oracle, as documented.
pub const EXIT_DISCREPANCY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "splitnash", version, about = "Nash and split Nash equilibrium solver and auditor")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Regret tolerance for verdicts.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Coarse scan spacing, also the Bertrand price grid step.
    #[arg(long = "grid-step", global = true, default_value_t = 0.01)]
    pub grid_step: f64,
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "budget-iters", global = true, default_value_t = 500)]
    pub budget_iters: usize,
    /// Truncation of unbounded strategy sets.
    #[arg(long, global = true, default_value_t = 1e3)]
    pub cap: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Leave out wall-clock timing so reruns are byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a profile of a game (built-in id or game file).
    VerifyNash {
        target: String,
        /// Comma-separated profile, e.g. 9,12.
        #[arg(long, allow_hyphen_values = true)]
        profile: String,
    },
    /// Search for Nash equilibria by damped best response from many starts.
    SolveNash { target: String },
    /// Check a profile of game N and its image in game M.
    VerifySplit {
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        profile: String,
    },
    /// Nash equilibria of game N whose image is one of game M.
    SolveSplit { target: String },
    /// Replay a built-in audit.
    Audit(AuditArgs),
    /// Sample the convexity-direction-preserved property.
    CdpCheck {
        target: String,
        /// Pair a single game with itself through this row-stochastic
        /// matrix, given as JSON, e.g. '[[0.5,0.5],[0.5,0.5]]'.
        #[arg(long)]
        transition: Option<String>,
    },
    /// Grid probe of the KKM intersection.
    KkmProbe {
        target: String,
        #[arg(long = "points-per-axis", default_value_t = 8)]
        points_per_axis: usize,
    },
    /// Enumerate grid equilibria of the Bertrand duopoly.
    BertrandEnumerate(BertrandArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AuditId {
    #[value(name = "example-4.1")]
    Example41,
    Bertrand,
    #[value(name = "thm-6.2")]
    Thm62,
    Cdp,
    Kkm,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    pub which: AuditId,
    #[command(flatten)]
    pub bertrand: BertrandArgs,
    /// Markov samples `alpha,beta`; repeatable. Defaults to a 5x5 grid.
    #[arg(long = "alpha-beta")]
    pub alpha_beta: Vec<String>,
    /// Restrict the default Markov samples to alpha = beta.
    #[arg(long = "diagonal-only")]
    pub diagonal_only: bool,
    /// Built-in split instance for the cdp and kkm audits.
    #[arg(long)]
    pub instance: Option<String>,
    #[arg(long = "points-per-axis", default_value_t = 8)]
    pub points_per_axis: usize,
}

#[derive(Debug, Args)]
pub struct BertrandArgs {
    /// Unit costs `c1,c2`.
    #[arg(long)]
    pub costs: Option<String>,
    /// Demand intercept of `max(0, d0 - p1 - p2)`.
    #[arg(long, default_value_t = 10.0)]
    pub d0: f64,
    /// Price range `lo,hi`; defaults to `[0, min(cap, 5 c2)]`.
    #[arg(long)]
    pub range: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub subject: String,
    pub value: bool,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretEntry {
    pub game: String,
    pub player: String,
    pub regret: f64,
    pub best_response: Vec<f64>,
}

/// Machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: String,
    pub instances: Vec<String>,
    pub budget: SearchBudget,
    pub verdicts: Vec<Verdict>,
    pub regrets: Vec<RegretEntry>,
    pub witnesses: Vec<Value>,
    pub notes: Vec<String>,
    pub details: Value,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl ReportFile {
    fn new(command: &str, budget: &SearchBudget) -> Self {
        Self {
            command: command.into(),
            instances: Vec::new(),
            budget: *budget,
            verdicts: Vec::new(),
            regrets: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            details: Value::Null,
            exit_code: EXIT_OK,
            duration_ms: None,
        }
    }

    fn verdict(&mut self, subject: impl Into<String>, value: bool, tolerance: f64) {
        self.verdicts.push(Verdict { subject: subject.into(), value, tolerance });
    }

    fn add_regrets(&mut self, rep: &VerificationReport) {
        for p in &rep.players {
            self.regrets.push(RegretEntry {
                game: rep.game.clone(),
                player: p.player.clone(),
                regret: p.regret,
                best_response: p.best_block.clone(),
            });
        }
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        if !self.instances.is_empty() {
            let _ = writeln!(s, "instances: {}", self.instances.join(", "));
        }
        for r in &self.regrets {
            let _ = writeln!(
                s,
                "regret {}/{} = {:.6e}  best response {}",
                r.game,
                r.player,
                r.regret,
                fmt_point(&r.best_response)
            );
        }
        for v in &self.verdicts {
            let _ = writeln!(s, "[{}] {} (tol {:e})", if v.value { "pass" } else { "FAIL" }, v.subject, v.tolerance);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        if let Some(ms) = self.duration_ms {
            let _ = writeln!(s, "duration: {ms} ms");
        }
        let _ = writeln!(s, "exit: {}", self.exit_code);
        s
    }
}

/// Result of [`run`]: what the binary should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn fmt_point(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
    format!("({})", parts.join(", "))
}

/// Parses `1,2,4`; empty entries are errors.
pub fn parse_reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .enumerate()
        .map(|(i, part)| {
            let part = part.trim();
            part.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidModel(format!("entry {i} of `{text}` is not a real number: `{part}`")))
        })
        .collect()
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64)> {
    match parse_reals(text)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        other => Err(Error::InvalidModel(format!("{what} needs two values, got {}", other.len()))),
    }
}

enum Target {
    Game(Game),
    Split(SplitProblem),
    Bertrand,
}

fn resolve(target: &str) -> Result<Target> {
    if BUILTIN_IDS.contains(&target) {
        return Ok(match builtin(target)?.problem {
            InstanceProblem::Game(g) => Target::Game(g),
            InstanceProblem::Split(p) => Target::Split(p),
            InstanceProblem::Bertrand(_) => Target::Bertrand,
        });
    }
    let path = Path::new(target);
    if !path.exists() {
        return Err(Error::InvalidModel(format!(
            "`{target}` is neither a file nor a built-in ({})",
            BUILTIN_IDS.join(", ")
        )));
    }
    Ok(match read_spec(path)? {
        SpecFile::Game(g) => Target::Game(g.to_game()?),
        SpecFile::Split(s) => Target::Split(s.to_problem()?),
    })
}

fn resolve_game(target: &str, report: &mut ReportFile) -> Result<Game> {
    match resolve(target)? {
        Target::Game(g) => Ok(g),
        Target::Split(p) => {
            report.notes.push(format!("`{target}` is a split problem; using its game N"));
            Ok(p.game_n)
        }
        Target::Bertrand => Err(Error::InvalidModel(format!("`{target}` is a Bertrand model, not a game"))),
    }
}

fn resolve_split(target: &str) -> Result<SplitProblem> {
    match resolve(target)? {
        Target::Split(p) => Ok(p),
        _ => Err(Error::InvalidModel(format!("`{target}` is not a split problem"))),
    }
}

fn note_relatedness(problem: &SplitProblem, report: &mut ReportFile) {
    let r = problem.relatedness();
    if !r.holds {
        report.notes.push(format!(
            "the operator maps game N's strategy sets outside game M's on coordinates {:?}",
            r.violating_coordinates
        ));
    }
}

/// Parses arguments, runs the command and renders the report.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let c = &cli.common;
    let budget = SearchBudget {
        grid_step: c.grid_step,
        max_iterations: c.budget_iters,
        truncation_cap: c.cap,
        tolerance: c.tol,
        seed: c.seed,
    };
    let start = Instant::now();
    let result = budget.validate().and_then(|_| dispatch(&cli.command, &budget, c.samples));
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            return Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") };
        }
    };
    if !c.deterministic {
        report.duration_ms = Some(start.elapsed().as_millis() as u64);
    }
    let rendered = match c.format {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    };
    match &c.out {
        Some(path) => match std::fs::write(path, &rendered) {
            Ok(()) => Outcome {
                code: report.exit_code,
                stdout: String::new(),
                stderr: format!("report written to {}\n", path.display()),
            },
            Err(e) => Outcome {
                code: EXIT_INPUT,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { code: report.exit_code, stdout: rendered, stderr: String::new() },
    }
}

fn dispatch(command: &Command, budget: &SearchBudget, samples: usize) -> Result<ReportFile> {
    match command {
        Command::VerifyNash { target, profile } => cmd_verify_nash(target, profile, budget),
        Command::SolveNash { target } => cmd_solve_nash(target, budget),
        Command::VerifySplit { target, profile } => cmd_verify_split(target, profile, budget),
        Command::SolveSplit { target } => cmd_solve_split(target, budget),
        Command::Audit(a) => cmd_audit(a, budget, samples),
        Command::CdpCheck { target, transition } => cmd_cdp_check(target, transition.as_deref(), budget, samples),
        Command::KkmProbe { target, points_per_axis } => cmd_kkm_probe(target, *points_per_axis, budget),
        Command::BertrandEnumerate(b) => cmd_bertrand(b, budget, "bertrand-enumerate"),
    }
}

fn verdict_code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

pub fn cmd_verify_nash(target: &str, profile: &str, budget: &SearchBudget) -> Result<ReportFile> {
    let mut report = ReportFile::new("verify-nash", budget);
    report.instances.push(target.into());
    let game = resolve_game(target, &mut report)?;
    let x = parse_reals(profile)?;
    game.check_feasible(&x)?;
    let rep = verify_nash(&game, &x, budget)?;
    report.add_regrets(&rep);
    report.verdict(format!("{} is a Nash equilibrium of {}", fmt_point(&x), game.name()), rep.verdict, rep.tolerance);
    for w in rep.failures() {
        report.witnesses.push(serde_json::to_value(w).expect("serializable"));
    }
    report.notes.extend(rep.notes.iter().cloned());
    report.exit_code = verdict_code(rep.verdict);
    report.details = serde_json::to_value(&rep).expect("serializable");
    Ok(report)
}

pub fn cmd_solve_nash(target: &str, budget: &SearchBudget) -> Result<ReportFile> {
    let mut report = ReportFile::new("solve-nash", budget);
    report.instances.push(target.into());
    let game = resolve_game(target, &mut report)?;
    let sols = solve_nash(&game, budget)?;
    for s in &sols {
        report.notes.push(format!("equilibrium {}", fmt_point(s)));
    }
    report.verdict(format!("{} has a verified equilibrium", game.name()), !sols.is_empty(), budget.tolerance);
    report.exit_code = verdict_code(!sols.is_empty());
    report.details = json!({ "solutions": sols });
    Ok(report)
}

pub fn cmd_verify_split(target: &str, profile: &str, budget: &SearchBudget) -> Result<ReportFile> {
    let mut report = ReportFile::new("verify-split", budget);
    report.instances.push(target.into());
    let problem = resolve_split(target)?;
    note_relatedness(&problem, &mut report);
    let x = parse_reals(profile)?;
    problem.game_n.check_feasible(&x)?;
    let rep = verify_split_equilibrium(&problem, &x, budget)?;
    report.add_regrets(&rep.game_n);
    report.add_regrets(&rep.game_m);
    report.verdict(
        format!("{} is a Nash equilibrium of {}", fmt_point(&x), rep.game_n.game),
        rep.game_n.verdict,
        rep.tolerance,
    );
    report.verdict(
        format!("image {} is a Nash equilibrium of {}", fmt_point(&rep.image), rep.game_m.game),
        rep.game_m.verdict,
        rep.tolerance,
    );
    for w in rep.game_n.failures().chain(rep.game_m.failures()) {
        report.witnesses.push(serde_json::to_value(w).expect("serializable"));
    }
    report.exit_code = verdict_code(rep.verdict);
    report.details = serde_json::to_value(&rep).expect("serializable");
    Ok(report)
}

pub fn cmd_solve_split(target: &str, budget: &SearchBudget) -> Result<ReportFile> {
    let mut report = ReportFile::new("solve-split", budget);
    report.instances.push(target.into());
    let problem = resolve_split(target)?;
    note_relatedness(&problem, &mut report);
    let sols = solve_split(&problem, budget)?;
    for s in &sols {
        report.notes.push(format!("split equilibrium {}", fmt_point(s)));
    }
    report.verdict("the split solution set is nonempty", !sols.is_empty(), budget.tolerance);
    report.exit_code = verdict_code(!sols.is_empty());
    report.details = json!({ "solutions": sols });
    Ok(report)
}

fn cmd_audit(args: &AuditArgs, budget: &SearchBudget, samples: usize) -> Result<ReportFile> {
    match args.which {
        AuditId::Example41 => audit_example(budget),
        AuditId::Bertrand => cmd_bertrand(&args.bertrand, budget, "audit bertrand"),
        AuditId::Thm62 => audit_markov(args, budget),
        AuditId::Cdp => audit_cdp(args, budget, samples),
        AuditId::Kkm => {
            let id = args.instance.as_deref().unwrap_or("quadratic-sanity");
            let mut r = cmd_kkm_probe(id, args.points_per_axis, budget)?;
            r.command = "audit kkm".into();
            Ok(r)
        }
    }
}

fn audit_example(budget: &SearchBudget) -> Result<ReportFile> {
    let mut report = ReportFile::new("audit example-4.1", budget);
    let inst = example_4_1();
    report.instances.push(inst.id.clone());
    let replays = inst.replay_claims(budget)?;
    let InstanceProblem::Split(problem) = &inst.problem else { unreachable!("example is a split problem") };
    let n = verify_nash(&problem.game_n, &[1.0, 2.0, 4.0], budget)?;
    let m = verify_nash(&problem.game_m, &[9.0, 12.0], budget)?;
    report.add_regrets(&n);
    report.add_regrets(&m);
    for w in n.failures() {
        report.witnesses.push(serde_json::to_value(w).expect("serializable"));
    }
    for r in &replays {
        report.verdict(format!("replay matches oracle: {}", r.description), r.matches_oracle, r.tolerance);
        if r.is_documented_discrepancy() {
            report.notes.push(format!(
                "discrepancy: {}: stated {}, oracle {}, replayed {}",
                r.description,
                fmt_point(&r.claimed),
                fmt_point(r.derived.as_deref().unwrap_or(&[])),
                fmt_point(&r.replayed)
            ));
        }
    }
    report.exit_code = if replays.iter().any(|r| !r.matches_oracle) {
        EXIT_FALSE
    } else if replays.iter().any(|r| r.is_documented_discrepancy()) {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    };
    report.details = json!({ "claims": replays, "game_n": n, "game_m": m });
    Ok(report)
}

fn bertrand_model(args: &BertrandArgs, costs: (f64, f64)) -> Result<BertrandModel> {
    BertrandModel::new(costs.0, costs.1, LinearDemand { d0: args.d0, a: 1.0, b: 1.0 })
}

fn price_grid(args: &BertrandArgs, model: &BertrandModel, step: f64) -> Result<PriceGrid> {
    let (lo, hi) = match &args.range {
        Some(r) => parse_pair(r, "--range")?,
        None => model.default_price_range(),
    };
    PriceGrid::new(lo, hi, step)
}

fn cmd_bertrand(args: &BertrandArgs, budget: &SearchBudget, command: &str) -> Result<ReportFile> {
    let mut report = ReportFile::new(command, budget);
    let costs = match &args.costs {
        Some(c) => parse_pair(c, "--costs")?,
        None => (1.0, 2.0),
    };
    let model = bertrand_model(args, costs)?;
    let grid = price_grid(args, &model, budget.grid_step)?;
    report.instances.push(format!("bertrand-{}-{}", costs.0, costs.1));
    let audit = audit_price_equilibria(&model, &grid, budget.tolerance);
    report.verdict(
        format!("cost pair {} is a grid equilibrium with zero profits", fmt_point(&[costs.0, costs.1])),
        audit.contains_cost_pair && audit.profits_at_cost == (0.0, 0.0),
        budget.tolerance,
    );
    report.verdict(
        format!(
            "every grid equilibrium with positive demand lies within {} of the cost pair or vanishes on a grid {}x finer",
            audit.band, REFINEMENT
        ),
        audit.unexplained.is_empty(),
        budget.tolerance,
    );
    if !audit.resolution_artifacts.is_empty() {
        report.notes.push(format!(
            "{} member(s) outside the band vanish under refinement, e.g. {}",
            audit.resolution_artifacts.len(),
            fmt_point(&[audit.resolution_artifacts[0].0, audit.resolution_artifacts[0].1])
        ));
    }
    for m in audit.unexplained.iter().take(10) {
        report.witnesses.push(json!({ "unexplained_member": [m.0, m.1] }));
    }
    report.notes.push(format!(
        "{} grid equilibria on [{}, {}] with step {}; farthest trading one at distance {:.6}",
        audit.members.len(),
        grid.lo,
        grid.hi,
        grid.step,
        audit.max_distance
    ));
    if audit.no_trade_members > 0 {
        report.notes.push(format!(
            "{} of them have zero total demand, where demand is flat rather than strictly decreasing; \
             they are excluded from the distance check",
            audit.no_trade_members
        ));
    }
    for t in audit.cases.iter().filter(|t| t.surviving_trading > 0 && t.case != "equilibrium") {
        report.notes.push(format!(
            "{} trading member(s) fall in proof case {}",
            t.surviving_trading, t.case
        ));
    }
    if command == "bertrand-enumerate" {
        let trading = audit.members.iter().filter(|m| model.demand(m.0, m.1) > NO_TRADE_DEMAND);
        for m in trading.take(50) {
            let (u1, u2) = profits(&model, m.0, m.1)?;
            report.notes.push(format!("member {} profits {}", fmt_point(&[m.0, m.1]), fmt_point(&[u1, u2])));
        }
    }
    report.exit_code = verdict_code(audit.passed);
    report.details = serde_json::to_value(&audit).expect("serializable");
    Ok(report)
}

fn markov_samples(args: &AuditArgs) -> Result<Vec<(f64, f64)>> {
    if !args.alpha_beta.is_empty() {
        return args.alpha_beta.iter().map(|s| parse_pair(s, "--alpha-beta")).collect();
    }
    let levels = [0.0, 0.25, 0.5, 0.75, 1.0];
    Ok(if args.diagonal_only {
        levels.iter().map(|&a| (a, a)).collect()
    } else {
        levels.iter().flat_map(|&a| levels.iter().map(move |&b| (a, b))).collect()
    })
}

fn audit_markov(args: &AuditArgs, budget: &SearchBudget) -> Result<ReportFile> {
    let mut report = ReportFile::new("audit thm-6.2", budget);
    let samples = markov_samples(args)?;
    let cost_list = match &args.bertrand.costs {
        Some(c) => vec![parse_pair(c, "--costs")?],
        None => vec![(1.0, 2.0), (1.0, 1.0)],
    };
    let mut audits = Vec::new();
    let mut mismatch = false;
    let mut discrepancy = false;
    for costs in cost_list {
        let model = bertrand_model(&args.bertrand, costs)?;
        let grid = price_grid(&args.bertrand, &model, budget.grid_step)?;
        report.instances.push(format!("bertrand-{}-{}", costs.0, costs.1));
        let audit = audit_markov_equilibria(&model, &samples, &grid, budget.tolerance)?;
        for row in &audit.rows {
            report.verdict(
                format!(
                    "c = {}, alpha = {}, beta = {}: grid verdict {} equals fixed-point oracle",
                    fmt_point(&[costs.0, costs.1]),
                    row.alpha,
                    row.beta,
                    row.verdict
                ),
                row.matches_oracle(),
                budget.tolerance,
            );
            mismatch |= !row.matches_oracle();
            if row.matches_oracle() && !row.matches_claim() {
                discrepancy = true;
                let which = if costs.0 == costs.1 {
                    "equal costs: the cost pair is claimed to survive every matrix"
                } else {
                    "unequal costs: only the identity is claimed to keep the cost pair"
                };
                report.notes.push(format!(
                    "discrepancy ({which}): alpha = {}, beta = {} maps the cost pair to {}, verdict {}",
                    row.alpha,
                    row.beta,
                    fmt_point(&[row.transformed.0, row.transformed.1]),
                    row.verdict
                ));
            }
        }
        audits.push(audit);
    }
    report.exit_code = if mismatch {
        EXIT_FALSE
    } else if discrepancy {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    };
    report.details = json!({ "audits": audits });
    Ok(report)
}

fn cdp_into_report(report: &mut ReportFile, name: &str, problem: &SplitProblem, budget: &SearchBudget, samples: usize) -> Result<bool> {
    let r = cdp_sample_check(problem, samples, budget)?;
    report.verdict(
        format!("{name}: per-player min-dominance holds on {samples} samples"),
        r.min_dominance_failures.is_empty(),
        r.tolerance,
    );
    report.notes.push(format!(
        "{name}: joint disjunction failed on {} of {samples} samples, per-game vector form {} times",
        r.joint_failures.len(),
        r.vector_form_failures.len()
    ));
    for w in r.min_dominance_failures.iter().take(5) {
        report.witnesses.push(serde_json::to_value(w).expect("serializable"));
    }
    for w in r.joint_failures.iter().take(3) {
        report.witnesses.push(serde_json::to_value(w).expect("serializable"));
    }
    let ok = r.min_dominance_failures.is_empty();
    if let Value::Object(m) = &mut report.details {
        m.insert(name.into(), serde_json::to_value(&r).expect("serializable"));
    }
    Ok(ok)
}

fn audit_cdp(args: &AuditArgs, budget: &SearchBudget, samples: usize) -> Result<ReportFile> {
    let mut report = ReportFile::new("audit cdp", budget);
    report.details = json!({});
    let ids: Vec<&str> = match &args.instance {
        Some(id) => vec![id.as_str()],
        None => vec!["example-4.1", "quadratic-sanity", "quadratic-mismatch"],
    };
    let mut ok = true;
    for id in ids {
        let problem = resolve_split(id)?;
        report.instances.push(id.into());
        ok &= cdp_into_report(&mut report, id, &problem, budget, samples)?;
    }
    report.exit_code = verdict_code(ok);
    Ok(report)
}

pub fn cmd_cdp_check(target: &str, transition: Option<&str>, budget: &SearchBudget, samples: usize) -> Result<ReportFile> {
    let mut report = ReportFile::new("cdp-check", budget);
    report.details = json!({});
    report.instances.push(target.into());
    let problem = match transition {
        Some(text) => {
            let rows: Vec<Vec<f64>> = serde_json::from_str(text)
                .map_err(|e| Error::InvalidTransition(format!("--transition is not a JSON matrix: {e}")))?;
            let t = validate_transition_matrix(rows)?;
            let game = resolve_game(target, &mut report)?;
            make_repeated_problem(&game, t)?
        }
        None => resolve_split(target)?,
    };
    let ok = cdp_into_report(&mut report, target, &problem, budget, samples)?;
    report.exit_code = verdict_code(ok);
    Ok(report)
}

pub fn cmd_kkm_probe(target: &str, points_per_axis: usize, budget: &SearchBudget) -> Result<ReportFile> {
    let mut report = ReportFile::new("kkm-probe", budget);
    report.instances.push(target.into());
    let problem = resolve_split(target)?;
    let grid = ProbeGrid { points_per_axis, bounds: None };
    let r = kkm_intersection_probe(&problem, &grid, budget)?;
    report.verdict("the probed intersection is nonempty", r.nonempty(), budget.tolerance);
    report.verdict(
        format!("every member is within slack {:.4} / {:.4} of a split equilibrium", r.slack_n, r.slack_m),
        r.all_consistent(),
        budget.tolerance,
    );
    for m in &r.members {
        report.notes.push(format!(
            "member {} image {} verified {} distances {:.4} / {:.4}",
            fmt_point(&m.z),
            fmt_point(&m.image),
            m.verified,
            m.n_distance,
            m.m_distance
        ));
    }
    report.exit_code = verdict_code(r.nonempty() && r.all_consistent());
    report.details = serde_json::to_value(&r).expect("serializable");
    Ok(report)
}
