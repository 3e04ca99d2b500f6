//! JSON input formats: a single game and a split problem.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::parse_utility;
use crate::game::Game;
use crate::numeric::Interval;
use crate::split::{LinearOperator, SplitProblem};

/// `{lo, hi}` with `hi: null` for an unbounded-above set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategySetSpec {
    pub lo: f64,
    pub hi: Option<f64>,
}

/// One game: parallel lists of player ids, strategy sets and utility
/// expressions written in the player ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub players: Vec<String>,
    pub strategy_sets: Vec<StrategySetSpec>,
    pub utilities: Vec<String>,
}

impl GameSpecFile {
    pub fn to_game(&self) -> Result<Game> {
        let n = self.players.len();
        if self.strategy_sets.len() != n || self.utilities.len() != n {
            return Err(Error::InvalidGame(format!(
                "{n} players but {} strategy sets and {} utilities",
                self.strategy_sets.len(),
                self.utilities.len()
            )));
        }
        let mut b = Game::builder(self.name.clone().unwrap_or_else(|| "game".into()));
        for (i, id) in self.players.iter().enumerate() {
            let s = self.strategy_sets[i];
            let set = Interval::from_parts(s.lo, s.hi)?;
            let u = parse_utility(&self.utilities[i]).map_err(|e| match e {
                Error::Syntax { offset, message } => {
                    Error::InvalidGame(format!("utility of `{id}`: {message} at offset {offset}"))
                }
                other => other,
            })?;
            b = b.player(id.clone(), set, u);
        }
        b.build()
    }
}

/// Two games and the operator from game N's profiles to game M's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpecFile {
    pub game_n: GameSpecFile,
    pub game_m: GameSpecFile,
    pub matrix: Vec<Vec<f64>>,
}

impl SplitSpecFile {
    pub fn to_problem(&self) -> Result<SplitProblem> {
        let op = LinearOperator::from_rows(self.matrix.clone())?;
        SplitProblem::new(self.game_n.to_game()?, self.game_m.to_game()?, op)
    }
}

/// Contents of a spec file; split problems are recognized by `game_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecFile {
    Split(SplitSpecFile),
    Game(GameSpecFile),
}

pub fn read_spec(path: &Path) -> Result<SpecFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidGame(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::InvalidGame(format!("{}: {e}", path.display())))?;
    let parsed = if value.get("game_n").is_some() {
        serde_json::from_value(value).map(SpecFile::Split)
    } else {
        serde_json::from_value(value).map(SpecFile::Game)
    };
    parsed.map_err(|e| Error::InvalidGame(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> GameSpecFile {
        serde_json::from_str(
            r#"{"players": ["d", "e"],
                "strategy_sets": [{"lo": 0, "hi": null}, {"lo": 0, "hi": null}],
                "utilities": ["0.5*d*e - 0.3333333333333333*d^2", "48*d^0.5*e - 0.020833333333333332*e^4"]}"#,
        )
        .unwrap()
    }

    #[test]
    fn game_file_builds() {
        let g = e2().to_game().unwrap();
        assert_eq!(g.player_ids(), vec!["d", "e"]);
        let u = g.utilities(&[9.0, 12.0]).unwrap();
        assert!((u[0] - 27.0).abs() < 1e-9);
    }

    #[test]
    fn game_file_errors() {
        let mut f = e2();
        f.utilities.pop();
        assert!(f.to_game().is_err());
        let mut f = e2();
        f.utilities[0] = "d*q".into();
        assert!(matches!(f.to_game(), Err(Error::UndeclaredVariable { .. })));
        let mut f = e2();
        f.utilities[0] = "d**".into();
        assert!(f.to_game().unwrap_err().to_string().contains("offset 2"));
        let mut f = e2();
        f.strategy_sets[0] = StrategySetSpec { lo: 3.0, hi: Some(1.0) };
        assert!(f.to_game().is_err());
    }

    #[test]
    fn split_file_round_trip() {
        let s = SplitSpecFile { game_n: e2(), game_m: e2(), matrix: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        let text = serde_json::to_string(&s).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        std::fs::write(&path, text).unwrap();
        let SpecFile::Split(back) = read_spec(&path).unwrap() else { panic!() };
        assert_eq!(back, s);
        assert!(back.to_problem().is_ok());
        assert!(read_spec(&dir.path().join("missing.json")).is_err());
    }
}
