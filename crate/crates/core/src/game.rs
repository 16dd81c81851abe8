//! Games as outcome operators, their parallel repetition, and strategies.
//!
//! An r-round game is described by PSD operators `P_i` on
//! `Y_1…Y_r ⊗ X_1…X_r` (answers then questions) such that the probability of
//! outcome `i` against a strategy with Choi operator `X` is `⟨P_i, X⟩`.
//! Consistency data `ρ` (on `X_1`) and `R_j` (on `Y_1…Y_{j-1} ⊗ X_1…X_j`)
//! record what the verifier's side forces the outcome operators to sum to.

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::operator::{check_cap, DensityOperator, HermitianOperator};
use crate::scalar::{self, Real};
use crate::spaces::{copy_label, SpaceList};

const CONSISTENCY_TOL: f64 = 1e-9;
const MEASUREMENT_TOL: f64 = 1e-10;

/// Labels of the question and answer spaces exchanged in one round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub questions: Vec<String>,
    pub answers: Vec<String>,
}

impl Round {
    fn all(&self) -> impl Iterator<Item = &str> {
        self.answers.iter().chain(self.questions.iter()).map(String::as_str)
    }

    fn same_as(&self, other: &Round) -> bool {
        let sorted = |v: &[String]| {
            let mut v = v.to_vec();
            v.sort();
            v
        };
        sorted(&self.questions) == sorted(&other.questions) && sorted(&self.answers) == sorted(&other.answers)
    }
}

/// Single-round verifier: an initial state on questions ⊗ memory and a
/// measurement on answers ⊗ memory. Spaces are told apart by label: those
/// shared by the state and the measurement are the memory.
#[derive(Clone, Debug)]
pub struct SingleRoundGameSpec<T: Real> {
    pub sigma: DensityOperator<T>,
    pub measurement: Vec<HermitianOperator<T>>,
    pub winning: Option<Vec<usize>>,
}

impl<T: Real> SingleRoundGameSpec<T> {
    pub fn new(
        sigma: DensityOperator<T>,
        measurement: Vec<HermitianOperator<T>>,
        winning: Option<Vec<usize>>,
    ) -> Result<Self> {
        let spec = Self {
            sigma,
            measurement,
            winning,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// (question labels, memory labels, answer labels).
    pub fn partition(&self) -> Result<(SpaceList, SpaceList, SpaceList)> {
        let first = self
            .measurement
            .first()
            .ok_or_else(|| Error::InconsistentGame("empty measurement".into()))?;
        let meas_labels = first.spaces().labels();
        let memory = self.sigma.spaces().retain(&meas_labels);
        let questions = self.sigma.spaces().without(&meas_labels);
        let answers = first.spaces().without(&memory.labels());
        if questions.is_empty() {
            return Err(Error::InconsistentGame("the state has no question space".into()));
        }
        if answers.is_empty() {
            return Err(Error::InconsistentGame("the measurement has no answer space".into()));
        }
        for s in memory.iter() {
            if first.spaces().dim_of(&s.label)? != s.dim {
                return Err(Error::InconsistentGame(format!(
                    "memory space `{}` has different dimensions in state and measurement",
                    s.label
                )));
            }
        }
        Ok((questions, memory, answers))
    }

    pub fn validate(&self) -> Result<()> {
        let (_, memory, answers) = self.partition()?;
        let meas_space = answers.concat(&memory)?;
        let tol = T::tol(MEASUREMENT_TOL);
        let mut sum = HermitianOperator::zeros(meas_space.clone());
        for (k, q) in self.measurement.iter().enumerate() {
            if !q.spaces().same_set(&meas_space) {
                return Err(Error::InconsistentGame(format!(
                    "measurement operator {k} acts on {} instead of {}",
                    q.spaces(),
                    meas_space
                )));
            }
            let min = q.min_eigenvalue()?;
            if min < -tol {
                return Err(Error::NotPsd {
                    what: format!("measurement operator {k}"),
                    min_eigenvalue: min.as_f64(),
                });
            }
            sum = sum.add(q)?;
        }
        let deviation = sum.distance(&HermitianOperator::identity(meas_space))?;
        if deviation > tol {
            return Err(Error::IncompleteMeasurement {
                deviation: deviation.as_f64(),
            });
        }
        if let Some(w) = &self.winning {
            if let Some(bad) = w.iter().find(|&&i| i >= self.measurement.len()) {
                return Err(Error::InconsistentGame(format!(
                    "winning outcome {bad} out of range for {} outcomes",
                    self.measurement.len()
                )));
            }
        }
        Ok(())
    }
}

/// A game in SDP-ready form.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeOperators<T: Real> {
    rounds: Vec<Round>,
    spaces: SpaceList,
    outcomes: Vec<HermitianOperator<T>>,
    rho: HermitianOperator<T>,
    r_ops: Vec<HermitianOperator<T>>,
}

impl<T: Real> OutcomeOperators<T> {
    /// Validates and stores a game. All operators are aligned to the space
    /// order of the first outcome operator.
    pub fn new(
        rounds: Vec<Round>,
        outcomes: Vec<HermitianOperator<T>>,
        rho: HermitianOperator<T>,
        r_ops: Vec<HermitianOperator<T>>,
    ) -> Result<Self> {
        if rounds.is_empty() {
            return Err(Error::InconsistentGame("a game needs at least one round".into()));
        }
        if r_ops.len() + 1 != rounds.len() {
            return Err(Error::InconsistentGame(format!(
                "{} rounds need {} consistency operators R_j, found {}",
                rounds.len(),
                rounds.len() - 1,
                r_ops.len()
            )));
        }
        let first = outcomes
            .first()
            .ok_or_else(|| Error::InconsistentGame("a game needs at least one outcome".into()))?;
        let spaces = first.spaces().clone();
        let mut round_labels: Vec<&str> = rounds.iter().flat_map(|r| r.all()).collect();
        round_labels.sort();
        let mut space_labels = spaces.labels();
        space_labels.sort();
        if round_labels != space_labels {
            return Err(Error::InconsistentGame(format!(
                "round labels {round_labels:?} do not cover the outcome spaces {spaces}"
            )));
        }
        let mut g = Self {
            rounds,
            spaces,
            outcomes: Vec::new(),
            rho: rho.clone(),
            r_ops: Vec::new(),
        };
        g.outcomes = outcomes
            .iter()
            .map(|p| p.align_to(&g.spaces))
            .collect::<Result<_>>()?;
        g.rho = rho.align_to(&g.dual_space(1))?;
        g.r_ops = r_ops
            .iter()
            .enumerate()
            .map(|(i, r)| r.align_to(&g.dual_space(i + 2)))
            .collect::<Result<_>>()?;
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let tol = T::tol(CONSISTENCY_TOL);
        for (i, p) in self.outcomes.iter().enumerate() {
            let min = p.min_eigenvalue()?;
            if min < -tol {
                return Err(Error::NotPsd {
                    what: format!("outcome operator {i}"),
                    min_eigenvalue: min.as_f64(),
                });
            }
        }
        DensityOperator::new(self.rho.clone())?;
        for (i, r) in self.r_ops.iter().enumerate() {
            let min = r.min_eigenvalue()?;
            if min < -tol {
                return Err(Error::NotPsd {
                    what: format!("consistency operator R_{}", i + 2),
                    min_eigenvalue: min.as_f64(),
                });
            }
        }
        // Tr_{X_j}(R_j) = I_{Y_{j-1}} ⊗ R_{j-1}
        for j in 2..=self.r() {
            let q = self.question_labels(j);
            let lhs = self.consistency(j).partial_trace(&q)?;
            let rhs = self.consistency(j - 1).embed(lhs.spaces())?;
            let dev = lhs.distance(&rhs)?;
            if dev > tol {
                return Err(Error::InconsistentGame(format!(
                    "Tr over round-{j} questions of R_{j} differs from R_{} by {:.3e}",
                    j - 1,
                    dev.as_f64()
                )));
            }
        }
        let sum = self.outcome_sum()?;
        let expected = self.consistency(self.r()).embed(&self.spaces)?;
        let dev = sum.distance(&expected)?;
        if dev > tol {
            return Err(Error::InconsistentGame(format!(
                "outcome operators sum differs from the identity-extended consistency operator by {:.3e}",
                dev.as_f64()
            )));
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.rounds.len()
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    pub fn spaces(&self) -> &SpaceList {
        &self.spaces
    }

    pub fn outcomes(&self) -> &[HermitianOperator<T>] {
        &self.outcomes
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn rho(&self) -> &HermitianOperator<T> {
        &self.rho
    }

    /// `R_2 … R_r`.
    pub fn r_ops(&self) -> &[HermitianOperator<T>] {
        &self.r_ops
    }

    /// `ρ` for `j = 1`, `R_j` otherwise (1-based).
    pub fn consistency(&self, j: usize) -> &HermitianOperator<T> {
        if j == 1 {
            &self.rho
        } else {
            &self.r_ops[j - 2]
        }
    }

    pub fn question_labels(&self, j: usize) -> Vec<&str> {
        self.rounds[j - 1].questions.iter().map(String::as_str).collect()
    }

    pub fn answer_labels(&self, j: usize) -> Vec<&str> {
        self.rounds[j - 1].answers.iter().map(String::as_str).collect()
    }

    /// Space of strategy block `j`: answers and questions of rounds `1..=j`.
    pub fn strategy_space(&self, j: usize) -> SpaceList {
        let mut labels: Vec<&str> = Vec::new();
        for round in &self.rounds[..j] {
            labels.extend(round.all());
        }
        self.spaces.retain(&labels)
    }

    /// Space of dual block `j`: answers of rounds `1..j` and questions of
    /// rounds `1..=j`.
    pub fn dual_space(&self, j: usize) -> SpaceList {
        let mut labels: Vec<&str> = Vec::new();
        for (i, round) in self.rounds[..j].iter().enumerate() {
            labels.extend(round.questions.iter().map(String::as_str));
            if i + 1 < j {
                labels.extend(round.answers.iter().map(String::as_str));
            }
        }
        self.spaces.retain(&labels)
    }

    pub fn outcome_sum(&self) -> Result<HermitianOperator<T>> {
        let mut sum = HermitianOperator::zeros(self.spaces.clone());
        for p in &self.outcomes {
            sum = sum.add(p)?;
        }
        Ok(sum)
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        self.outcomes.iter().all(|p| p.is_diagonal(tol))
            && self.rho.is_diagonal(tol)
            && self.r_ops.iter().all(|r| r.is_diagonal(tol))
    }

    /// `Σ_i w_i P_i`.
    pub fn weighted_sum(&self, weights: &[T]) -> Result<HermitianOperator<T>> {
        if weights.len() != self.outcomes.len() {
            return Err(Error::OutcomeCount {
                expected: self.outcomes.len(),
                found: weights.len(),
            });
        }
        let mut sum = HermitianOperator::zeros(self.spaces.clone());
        for (p, w) in self.outcomes.iter().zip(weights) {
            sum = sum.add(&p.scale(*w))?;
        }
        Ok(sum)
    }

    pub fn cast<U: Real>(&self) -> OutcomeOperators<U> {
        OutcomeOperators {
            rounds: self.rounds.clone(),
            spaces: self.spaces.clone(),
            outcomes: self.outcomes.iter().map(|p| p.cast()).collect(),
            rho: self.rho.cast(),
            r_ops: self.r_ops.iter().map(|r| r.cast()).collect(),
        }
    }
}

/// Strategy blocks: the full Choi operator and its intermediate rounds.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyChoi<T: Real> {
    rounds: Vec<Round>,
    x: HermitianOperator<T>,
    intermediates: Vec<HermitianOperator<T>>,
}

impl<T: Real> StrategyChoi<T> {
    pub fn new(rounds: Vec<Round>, x: HermitianOperator<T>, intermediates: Vec<HermitianOperator<T>>) -> Result<Self> {
        if intermediates.len() + 1 != rounds.len() {
            return Err(Error::InvalidStrategy(format!(
                "{} rounds need {} intermediate blocks, found {}",
                rounds.len(),
                rounds.len() - 1,
                intermediates.len()
            )));
        }
        let s = Self {
            rounds,
            x,
            intermediates,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn r(&self) -> usize {
        self.rounds.len()
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    /// The full strategy operator `X`.
    pub fn x(&self) -> &HermitianOperator<T> {
        &self.x
    }

    pub fn intermediates(&self) -> &[HermitianOperator<T>] {
        &self.intermediates
    }

    /// Block `j` (1-based); block `r` is `X` itself.
    pub fn block(&self, j: usize) -> &HermitianOperator<T> {
        if j == self.r() {
            &self.x
        } else {
            &self.intermediates[j - 1]
        }
    }

    fn validate(&self) -> Result<()> {
        let tol = T::tol(CONSISTENCY_TOL);
        for j in 1..=self.r() {
            let b = self.block(j);
            let min = b.min_eigenvalue()?;
            if min < -tol {
                return Err(Error::NotPsd {
                    what: format!("strategy block {j}"),
                    min_eigenvalue: min.as_f64(),
                });
            }
            let answers: Vec<&str> = self.rounds[j - 1].answers.iter().map(String::as_str).collect();
            let reduced = b.partial_trace(&answers)?;
            let expected = if j == 1 {
                HermitianOperator::identity(reduced.spaces().clone())
            } else {
                self.block(j - 1).embed(reduced.spaces())?
            };
            let dev = reduced.distance(&expected)?;
            if dev > tol {
                return Err(Error::InvalidStrategy(format!(
                    "partial trace of block {j} misses its target by {:.3e}",
                    dev.as_f64()
                )));
            }
        }
        Ok(())
    }
}

/// Outcome operators of a single-round game. With `σ` on questions ⊗ memory
/// and `Q_k` on answers ⊗ memory,
/// `P_k[(a,b),(c,d)] = Σ_{z,z'} Q_k[(a,z'),(c,z)] σ[(d,z),(b,z')]`,
/// which makes `⟨P_k, J(Φ)⟩ = Tr(Q_k (Φ⊗1)(σ))`. The operators sum to
/// `I ⊗ Tr_Z(σ)ᵀ`, so `ρ` is the transposed question marginal.
pub fn outcome_operators_single_round<T: Real>(g: &SingleRoundGameSpec<T>) -> Result<OutcomeOperators<T>> {
    g.validate()?;
    let (questions, memory, answers) = g.partition()?;
    let sigma = g.sigma.align_to(&questions.concat(&memory)?)?;
    let (dx, dz, dy) = (questions.total_dim(), memory.total_dim(), answers.total_dim());
    let spaces = answers.concat(&questions)?;
    check_cap(spaces.total_dim())?;
    let s = sigma.matrix();
    let mut outcomes = Vec::with_capacity(g.measurement.len());
    for q in &g.measurement {
        let q = q.align_to(&answers.concat(&memory)?)?;
        let qm = q.matrix();
        let p = HermitianOperator::from_fn(spaces.clone(), |row, col| {
            let (a, b) = (row / dx, row % dx);
            let (c, d) = (col / dx, col % dx);
            let mut acc = scalar::re(T::zero());
            for z in 0..dz {
                for zp in 0..dz {
                    acc += qm[(a * dz + zp, c * dz + z)] * s[(d * dz + z, b * dz + zp)];
                }
            }
            acc
        })?;
        outcomes.push(p);
    }
    let mem: Vec<&str> = memory.labels();
    let rho = sigma.partial_trace(&mem)?.transpose();
    let round = Round {
        questions: questions.labels().iter().map(|s| s.to_string()).collect(),
        answers: answers.labels().iter().map(|s| s.to_string()).collect(),
    };
    debug_assert_eq!(dy * dx, spaces.total_dim());
    OutcomeOperators::new(vec![round], outcomes, rho, Vec::new())
}

/// Tensor product of `factors` in order.
pub(crate) fn tensor_word<T: Real>(factors: &[&HermitianOperator<T>]) -> Result<HermitianOperator<T>> {
    let mut it = factors.iter();
    let mut acc = (*it.next().expect("non-empty word")).clone();
    for f in it {
        acc = acc.kron(f)?;
    }
    Ok(acc)
}

/// Relabels `op` as belonging to copy `c` of `n`.
pub(crate) fn copy_of<T: Real>(op: &HermitianOperator<T>, c: usize, n: usize) -> Result<HermitianOperator<T>> {
    if n == 1 {
        Ok(op.clone())
    } else {
        op.relabel(|l| copy_label(l, c, n))
    }
}

/// `ops[c]` is the list of per-letter operators already relabeled for copy `c`.
pub(crate) fn copies<T: Real>(ops: &[HermitianOperator<T>], n: usize) -> Result<Vec<Vec<HermitianOperator<T>>>> {
    (0..n)
        .map(|c| ops.iter().map(|o| copy_of(o, c, n)).collect())
        .collect()
}

/// All words of length `n` over `0..t`, first letter most significant.
pub fn words(t: usize, n: usize) -> Vec<Vec<usize>> {
    let total = t.pow(n as u32);
    (0..total)
        .map(|mut x| {
            let mut w = vec![0; n];
            for pos in (0..n).rev() {
                w[pos] = x % t;
                x /= t;
            }
            w
        })
        .collect()
}

/// The game played `n` times in parallel. Outcome `i` of the result is the
/// tuple `words(t, n)[i]`.
pub fn parallel_game<T: Real>(g: &OutcomeOperators<T>, n: usize) -> Result<OutcomeOperators<T>> {
    if n == 0 {
        return Err(Error::Domain("number of repetitions must be positive".into()));
    }
    if n == 1 {
        return Ok(g.clone());
    }
    let total = (g.spaces.total_dim() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > crate::operator::DIM_CAP as u128 {
        return Err(Error::DimensionCap {
            dim: total.min(usize::MAX as u128) as usize,
            cap: crate::operator::DIM_CAP,
        });
    }
    let rounds = g
        .rounds
        .iter()
        .map(|r| Round {
            questions: (0..n)
                .flat_map(|c| r.questions.iter().map(move |l| copy_label(l, c, n)))
                .collect(),
            answers: (0..n)
                .flat_map(|c| r.answers.iter().map(move |l| copy_label(l, c, n)))
                .collect(),
        })
        .collect();
    let per_copy = copies(&g.outcomes, n)?;
    let outcomes = words(g.num_outcomes(), n)
        .iter()
        .map(|w| {
            let f: Vec<&HermitianOperator<T>> = w.iter().enumerate().map(|(c, &i)| &per_copy[c][i]).collect();
            tensor_word(&f)
        })
        .collect::<Result<Vec<_>>>()?;
    let power = |op: &HermitianOperator<T>| -> Result<HermitianOperator<T>> {
        let c = copies(std::slice::from_ref(op), n)?;
        let f: Vec<&HermitianOperator<T>> = c.iter().map(|v| &v[0]).collect();
        tensor_word(&f)
    };
    let rho = power(&g.rho)?;
    let r_ops = g.r_ops.iter().map(power).collect::<Result<Vec<_>>>()?;
    OutcomeOperators::new(rounds, outcomes, rho, r_ops)
}

fn require_two_outcomes<T: Real>(g: &OutcomeOperators<T>) -> Result<()> {
    if g.num_outcomes() != 2 {
        return Err(Error::OutcomeCount {
            expected: 2,
            found: g.num_outcomes(),
        });
    }
    Ok(())
}

/// `Σ_{w ∈ S} P_{w_1} ⊗ … ⊗ P_{w_n}` over binary words `w` accepted by `member`,
/// on the space of `parallel_game(g, n)`.
pub fn monotone_objective<T: Real>(
    g: &OutcomeOperators<T>,
    n: usize,
    member: impl Fn(&[usize]) -> bool,
) -> Result<HermitianOperator<T>> {
    require_two_outcomes(g)?;
    let per_copy = copies(&g.outcomes, n)?;
    let space = {
        let f: Vec<&HermitianOperator<T>> = per_copy.iter().map(|v| &v[0]).collect();
        tensor_word(&f)?.spaces().clone()
    };
    let mut acc = HermitianOperator::zeros(space);
    for w in words(2, n).iter().filter(|w| member(w)) {
        let f: Vec<&HermitianOperator<T>> = w.iter().enumerate().map(|(c, &i)| &per_copy[c][i]).collect();
        acc = acc.add(&tensor_word(&f)?)?;
    }
    Ok(acc)
}

/// Objective for winning at least `k` of `n` parallel repetitions
/// (outcome 1 wins, outcome 0 loses).
pub fn threshold_objective<T: Real>(g: &OutcomeOperators<T>, n: usize, k: usize) -> Result<HermitianOperator<T>> {
    if n == 0 || k > n {
        return Err(Error::Domain(format!("threshold k={k} with n={n}")));
    }
    monotone_objective(g, n, |w| w.iter().sum::<usize>() >= k)
}

/// Objective for the average value `(1/n) Σ_j v_{i_j}` over `n` repetitions.
pub fn value_objective<T: Real>(g: &OutcomeOperators<T>, values: &[T], n: usize) -> Result<HermitianOperator<T>> {
    if values.len() != g.num_outcomes() {
        return Err(Error::OutcomeCount {
            expected: g.num_outcomes(),
            found: values.len(),
        });
    }
    if n == 0 {
        return Err(Error::Domain("number of repetitions must be positive".into()));
    }
    if n == 1 {
        return g.weighted_sum(values);
    }
    let per_copy = copies(&g.outcomes, n)?;
    let inv_n = T::one() / T::lit(n as f64);
    let mut acc: Option<HermitianOperator<T>> = None;
    for w in words(g.num_outcomes(), n) {
        let weight = w.iter().fold(T::zero(), |a, &i| a + values[i]) * inv_n;
        let f: Vec<&HermitianOperator<T>> = w.iter().enumerate().map(|(c, &i)| &per_copy[c][i]).collect();
        let term = tensor_word(&f)?.scale(weight);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("at least one word"))
}

/// Single-round strategy given by a channel from questions to answers.
pub fn strategy_from_channel<T: Real>(ch: &KrausChannel<T>) -> Result<StrategyChoi<T>> {
    for l in ch.input_spaces().labels() {
        if ch.output_spaces().contains(l) {
            return Err(Error::InvalidStrategy(format!(
                "label `{l}` is both a question and an answer space"
            )));
        }
    }
    let round = Round {
        questions: ch.input_spaces().labels().iter().map(|s| s.to_string()).collect(),
        answers: ch.output_spaces().labels().iter().map(|s| s.to_string()).collect(),
    };
    StrategyChoi::new(vec![round], ch.choi(), Vec::new())
}

/// `⟨P_i, X⟩` for every outcome.
pub fn outcome_probabilities<T: Real>(g: &OutcomeOperators<T>, s: &StrategyChoi<T>) -> Result<Vec<T>> {
    if g.r() != s.r() || !g.rounds.iter().zip(&s.rounds).all(|(a, b)| a.same_as(b)) {
        return Err(Error::InvalidStrategy(
            "strategy rounds do not match the game's question and answer spaces".into(),
        ));
    }
    let x = s.x().align_to(&g.spaces)?;
    g.outcomes.iter().map(|p| p.inner(&x)).collect()
}

/// Classical version of the game: every operator dephased.
pub fn dephase_game<T: Real>(g: &OutcomeOperators<T>) -> OutcomeOperators<T> {
    OutcomeOperators {
        rounds: g.rounds.clone(),
        spaces: g.spaces.clone(),
        outcomes: g.outcomes.iter().map(|p| p.dephase()).collect(),
        rho: g.rho.dephase(),
        r_ops: g.r_ops.iter().map(|r| r.dephase()).collect(),
    }
}

/// Two-outcome game: outcome 1 sums the `winning` outcomes, outcome 0 the rest.
pub fn group_win_lose<T: Real>(g: &OutcomeOperators<T>, winning: &[usize]) -> Result<OutcomeOperators<T>> {
    if let Some(bad) = winning.iter().find(|&&i| i >= g.num_outcomes()) {
        return Err(Error::InconsistentGame(format!("winning outcome {bad} out of range")));
    }
    let mut win = HermitianOperator::zeros(g.spaces.clone());
    let mut lose = HermitianOperator::zeros(g.spaces.clone());
    for (i, p) in g.outcomes.iter().enumerate() {
        if winning.contains(&i) {
            win = win.add(p)?;
        } else {
            lose = lose.add(p)?;
        }
    }
    OutcomeOperators::new(g.rounds.clone(), vec![lose, win], g.rho.clone(), g.r_ops.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hedging;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hedging_identity_strategy() {
        let g = hedging::game();
        let p = cos2_pi8();
        let s = strategy_from_channel(&KrausChannel::identity(
            SpaceList::single("X", 2).unwrap(),
            SpaceList::single("Y", 2).unwrap(),
        )
        .unwrap())
        .unwrap();
        let probs = outcome_probabilities(&g, &s).unwrap();
        assert_abs_diff_eq!(probs[1], p, epsilon = 1e-14);
        assert_abs_diff_eq!(probs[0], 1.0 - p, epsilon = 1e-14);
    }

    fn cos2_pi8() -> f64 {
        (std::f64::consts::PI / 8.0).cos().powi(2)
    }

    #[test]
    fn hedging_outcomes_sum_to_identity_times_half() {
        let g = hedging::game();
        let sum = g.outcome_sum().unwrap();
        let expected = HermitianOperator::identity(g.spaces().clone()).scale(0.5);
        assert!(sum.distance(&expected).unwrap() < 1e-15);
        assert!(g.rho().distance(&HermitianOperator::identity(SpaceList::single("X", 2).unwrap()).scale(0.5)).unwrap() < 1e-15);
    }

    #[test]
    fn words_are_lexicographic() {
        assert_eq!(words(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(words(3, 1).len(), 3);
    }

    #[test]
    fn threshold_and_value_objectives() {
        let g = hedging::game();
        let p = g.outcomes();
        let g2 = parallel_game(&g, 2).unwrap();
        let t = threshold_objective(&g, 2, 1).unwrap();
        let o = g2.outcomes();
        let manual = o[1].add(&o[2]).unwrap().add(&o[3]).unwrap();
        assert!(t.distance(&manual).unwrap() < 1e-15);
        let t0 = threshold_objective(&g, 1, 0).unwrap();
        assert!(t0.distance(&g.outcome_sum().unwrap()).unwrap() < 1e-15);
        let v1 = value_objective(&g, &[0.0, 1.0], 1).unwrap();
        assert!(v1.distance(&p[1]).unwrap() < 1e-15);
        let v2 = value_objective(&g, &[0.0, 1.0], 2).unwrap();
        let manual = o[1].add(&o[2]).unwrap().scale(0.5).add(&o[3]).unwrap();
        assert!(v2.distance(&manual).unwrap() < 1e-15);
        assert!(threshold_objective(&g, 2, 3).is_err());
    }

    #[test]
    fn parallel_of_one_is_identity() {
        let g = hedging::game();
        assert_eq!(parallel_game(&g, 1).unwrap(), g);
    }

    #[test]
    fn strategy_chain_is_checked() {
        let sp = SpaceList::new([("Y", 2), ("X", 2)]).unwrap();
        let bad = HermitianOperator::<f64>::identity(sp);
        let round = Round {
            questions: vec!["X".into()],
            answers: vec!["Y".into()],
        };
        assert!(StrategyChoi::new(vec![round.clone()], bad.clone(), vec![]).is_err());
        assert!(StrategyChoi::new(vec![round], bad.scale(0.5), vec![]).is_ok());
    }

    #[test]
    fn grouping_keeps_consistency() {
        let g = hedging::game();
        let g2 = parallel_game(&g, 2).unwrap();
        let grouped = group_win_lose(&g2, &[1, 2, 3]).unwrap();
        assert_eq!(grouped.num_outcomes(), 2);
        assert!(grouped.outcomes()[1].distance(&threshold_objective(&g, 2, 1).unwrap()).unwrap() < 1e-15);
    }
}
