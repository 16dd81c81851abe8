//! JSON formats for operators, channels, games and witnesses.
//!
//! Operators are `{spaces: [[label, dim], …], entries: [[re, im], …]}` with
//! entries in row-major order. Channels are
//! `{in_spaces, out_spaces, kraus: [[[re, im], …], …]}`.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::game::{group_win_lose, outcome_operators_single_round, OutcomeOperators, Round, SingleRoundGameSpec};
use crate::operator::{DensityOperator, HermitianOperator};
use crate::scalar::{CMatrix, Real};
use crate::sdp::{DualWitness, WitnessMeta};
use crate::spaces::SpaceList;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub spaces: Vec<(String, usize)>,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub in_spaces: Vec<(String, usize)>,
    pub out_spaces: Vec<(String, usize)>,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GameJson {
    SingleRound {
        sigma: OperatorJson,
        measurement: Vec<OperatorJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        winning: Option<Vec<usize>>,
    },
    Operators {
        r: usize,
        #[serde(rename = "P")]
        p: Vec<OperatorJson>,
        rho: OperatorJson,
        #[serde(rename = "R", default)]
        r_ops: Vec<OperatorJson>,
        /// Required when `r > 1`; a single round defaults to questions on
        /// `rho`'s spaces and answers on the rest.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rounds: Option<Vec<Round>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        winning: Option<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub construction: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(rename = "Y")]
    pub y: OperatorJson,
    #[serde(rename = "Y_blocks", default)]
    pub y_blocks: Vec<OperatorJson>,
    pub value: f64,
}

fn spaces_from(entries: &[(String, usize)]) -> Result<SpaceList> {
    SpaceList::new(entries.iter().cloned())
}

fn spaces_to(s: &SpaceList) -> Vec<(String, usize)> {
    s.iter().map(|e| (e.label.clone(), e.dim)).collect()
}

fn matrix_from<T: Real>(rows: usize, cols: usize, entries: &[[f64; 2]], what: &str) -> Result<CMatrix<T>> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{what}: {} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    if let Some(bad) = entries.iter().position(|e| !e[0].is_finite() || !e[1].is_finite()) {
        return Err(Error::Domain(format!("{what}: entry {bad} is not finite")));
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        let e = entries[i * cols + j];
        Complex::new(T::lit(e[0]), T::lit(e[1]))
    }))
}

fn matrix_to<T: Real>(m: &CMatrix<T>) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push([m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()]);
        }
    }
    out
}

pub fn operator_to_json<T: Real>(op: &HermitianOperator<T>) -> OperatorJson {
    OperatorJson {
        spaces: spaces_to(op.spaces()),
        entries: matrix_to(op.matrix()),
    }
}

pub fn operator_from_json<T: Real>(j: &OperatorJson) -> Result<HermitianOperator<T>> {
    let spaces = spaces_from(&j.spaces)?;
    let d = spaces.total_dim();
    HermitianOperator::new(spaces, matrix_from(d, d, &j.entries, "operator")?)
}

pub fn channel_to_json<T: Real>(ch: &KrausChannel<T>) -> ChannelJson {
    ChannelJson {
        in_spaces: spaces_to(ch.input_spaces()),
        out_spaces: spaces_to(ch.output_spaces()),
        kraus: ch.kraus().iter().map(matrix_to).collect(),
    }
}

pub fn channel_from_json<T: Real>(j: &ChannelJson) -> Result<KrausChannel<T>> {
    let input = spaces_from(&j.in_spaces)?;
    let output = spaces_from(&j.out_spaces)?;
    let (din, dout) = (input.total_dim(), output.total_dim());
    let kraus = j
        .kraus
        .iter()
        .map(|k| matrix_from(dout, din, k, "Kraus operator"))
        .collect::<Result<Vec<_>>>()?;
    KrausChannel::new(input, output, kraus)
}

/// A game file after validation, with its optional winning set.
#[derive(Clone, Debug)]
pub struct LoadedGame<T: Real> {
    pub game: OutcomeOperators<T>,
    pub winning: Option<Vec<usize>>,
}

impl<T: Real> LoadedGame<T> {
    /// The game reduced to lose (0) / win (1). Without a winning set the game
    /// must already have exactly two outcomes.
    pub fn win_lose(&self) -> Result<OutcomeOperators<T>> {
        match &self.winning {
            Some(w) => group_win_lose(&self.game, w),
            None if self.game.num_outcomes() == 2 => Ok(self.game.clone()),
            None => Err(Error::OutcomeCount {
                expected: 2,
                found: self.game.num_outcomes(),
            }),
        }
    }
}

pub fn game_from_json<T: Real>(j: &GameJson) -> Result<LoadedGame<T>> {
    match j {
        GameJson::SingleRound {
            sigma,
            measurement,
            winning,
        } => {
            let sigma = DensityOperator::new(operator_from_json(sigma)?)?;
            let measurement = measurement
                .iter()
                .map(operator_from_json)
                .collect::<Result<Vec<_>>>()?;
            let spec = SingleRoundGameSpec::new(sigma, measurement, winning.clone())?;
            Ok(LoadedGame {
                game: outcome_operators_single_round(&spec)?,
                winning: winning.clone(),
            })
        }
        GameJson::Operators {
            r,
            p,
            rho,
            r_ops,
            rounds,
            winning,
        } => {
            let outcomes = p.iter().map(operator_from_json).collect::<Result<Vec<_>>>()?;
            let rho = operator_from_json::<T>(rho)?;
            let r_ops = r_ops.iter().map(operator_from_json).collect::<Result<Vec<_>>>()?;
            let rounds = match rounds {
                Some(rs) => rs.clone(),
                None if *r == 1 => {
                    let first = outcomes
                        .first()
                        .ok_or_else(|| Error::InconsistentGame("no outcome operators".into()))?;
                    let q = rho.spaces().labels();
                    vec![Round {
                        questions: q.iter().map(|s| s.to_string()).collect(),
                        answers: first
                            .spaces()
                            .without(&q)
                            .labels()
                            .iter()
                            .map(|s| s.to_string())
                            .collect(),
                    }]
                }
                None => {
                    return Err(Error::InconsistentGame(
                        "field `rounds` is required when r > 1".into(),
                    ))
                }
            };
            if rounds.len() != *r {
                return Err(Error::InconsistentGame(format!(
                    "r = {r} but {} rounds are listed",
                    rounds.len()
                )));
            }
            Ok(LoadedGame {
                game: OutcomeOperators::new(rounds, outcomes, rho, r_ops)?,
                winning: winning.clone(),
            })
        }
    }
}

pub fn parse_game<T: Real>(text: &str) -> Result<LoadedGame<T>> {
    game_from_json(&serde_json::from_str::<GameJson>(text)?)
}

/// Serializes a game in operator form.
pub fn game_to_json<T: Real>(g: &OutcomeOperators<T>, winning: Option<Vec<usize>>) -> GameJson {
    GameJson::Operators {
        r: g.r(),
        p: g.outcomes().iter().map(operator_to_json).collect(),
        rho: operator_to_json(g.rho()),
        r_ops: g.r_ops().iter().map(operator_to_json).collect(),
        rounds: Some(g.rounds().to_vec()),
        winning,
    }
}

pub fn witness_to_json<T: Real>(w: &DualWitness<T>) -> WitnessJson {
    WitnessJson {
        construction: w.meta.construction.clone(),
        n: w.meta.n,
        k: w.meta.k,
        values: w.meta.values.clone(),
        y: operator_to_json(w.y()),
        y_blocks: w.y_blocks().iter().map(operator_to_json).collect(),
        value: w.value().as_f64(),
    }
}

pub fn witness_from_json<T: Real>(j: &WitnessJson) -> Result<DualWitness<T>> {
    let y = operator_from_json(&j.y)?;
    let blocks = j
        .y_blocks
        .iter()
        .map(operator_from_json)
        .collect::<Result<Vec<_>>>()?;
    DualWitness::new(
        y,
        blocks,
        WitnessMeta {
            construction: j.construction.clone(),
            n: j.n,
            k: j.k,
            values: j.values.clone(),
        },
    )
}

pub fn parse_witness<T: Real>(text: &str) -> Result<DualWitness<T>> {
    witness_from_json(&serde_json::from_str::<WitnessJson>(text)?)
}
