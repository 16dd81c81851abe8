//! Standard-form Hermitian SDPs, compilation of strategy problems, and dual
//! witnesses.
//!
//! A problem is `maximize Σ_b ⟨C_b, X_b⟩` (or minimize) over PSD blocks
//! subject to scalar equalities `Σ_b ⟨F_ib, X_b⟩ = rhs_i`. Its dual, for the
//! maximizing sense, is `minimize rhsᵀy` subject to `Σ_i y_i F_ib − C_b ⪰ 0`.

mod solver;
mod sparse;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::OutcomeOperators;
use crate::operator::{check_cap, min_eigenvalue_raw, HermitianOperator};
use crate::scalar::{self, CMatrix, Real};
use crate::spaces::SpaceList;

pub use solver::{solve, solve_with, SolverOptions};
pub use sparse::{basis_coordinates, from_basis_coordinates, hermitian_basis, SparseHermitian};

use sparse::{embed_sparse, trace_sparse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub name: String,
    pub spaces: SpaceList,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.spaces.total_dim()
    }
}

/// One scalar equality `Σ_b ⟨F_b, X_b⟩ = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T: Real> {
    pub name: String,
    pub terms: Vec<(usize, SparseHermitian<T>)>,
    pub rhs: T,
}

/// A strictly feasible starting pair: primal blocks and dual multipliers
/// whose slack is positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialPoint<T: Real> {
    pub x: Vec<CMatrix<T>>,
    pub y: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem<T: Real> {
    pub blocks: Vec<Block>,
    pub objective: Vec<HermitianOperator<T>>,
    pub constraints: Vec<Constraint<T>>,
    pub sense: Sense,
    pub initial: Option<InitialPoint<T>>,
}

impl<T: Real> SdpProblem<T> {
    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.blocks.len() {
            return Err(Error::InvalidProblem(format!(
                "{} objective blocks for {} variable blocks",
                self.objective.len(),
                self.blocks.len()
            )));
        }
        for (b, c) in self.blocks.iter().zip(&self.objective) {
            check_cap(b.dim())?;
            if c.dim() != b.dim() {
                return Err(Error::InvalidProblem(format!(
                    "objective for block `{}` has dimension {}, expected {}",
                    b.name,
                    c.dim(),
                    b.dim()
                )));
            }
        }
        for con in &self.constraints {
            if !con.rhs.is_finite() {
                return Err(Error::InvalidProblem(format!("constraint `{}` has a non-finite rhs", con.name)));
            }
            for (b, f) in &con.terms {
                let block = self.blocks.get(*b).ok_or_else(|| {
                    Error::InvalidProblem(format!("constraint `{}` refers to block {b}", con.name))
                })?;
                if f.dim != block.dim() {
                    return Err(Error::InvalidProblem(format!(
                        "constraint `{}` has a {}-dim coefficient on block `{}` of dimension {}",
                        con.name,
                        f.dim,
                        block.name,
                        block.dim()
                    )));
                }
                for &(i, j, v) in &f.entries {
                    let w = f.entries.iter().find(|e| e.0 == j && e.1 == i).map(|e| e.2);
                    let ok = match w {
                        Some(w) => scalar::modulus(w.conj() - v) <= T::tol(1e-12),
                        None => false,
                    };
                    if !ok {
                        return Err(Error::InvalidProblem(format!(
                            "constraint `{}` has a non-Hermitian coefficient on block `{}`",
                            con.name, block.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// `Σ_b ⟨C_b, X_b⟩`.
    pub fn objective_value(&self, x: &[CMatrix<T>]) -> T {
        self.objective
            .iter()
            .zip(x)
            .fold(T::zero(), |a, (c, xb)| a + crate::operator::hs_inner(c.matrix(), xb))
    }

    /// `𝒜(X)`.
    pub fn apply_constraints(&self, x: &[CMatrix<T>]) -> Vec<T> {
        self.constraints
            .iter()
            .map(|c| c.terms.iter().fold(T::zero(), |a, (b, f)| a + f.inner(&x[*b])))
            .collect()
    }

    /// `𝒜*(y)` per block.
    pub fn adjoint(&self, y: &[T]) -> Vec<CMatrix<T>> {
        let mut out: Vec<CMatrix<T>> = self.blocks.iter().map(|b| DMatrix::zeros(b.dim(), b.dim())).collect();
        for (c, yi) in self.constraints.iter().zip(y) {
            for (b, f) in &c.terms {
                f.add_to(&mut out[*b], *yi);
            }
        }
        out
    }

    /// Dual slack `𝒜*(y) − C` (maximize) or `C − 𝒜*(y)` (minimize).
    pub fn dual_slack(&self, y: &[T]) -> Vec<CMatrix<T>> {
        let a = self.adjoint(y);
        a.into_iter()
            .zip(&self.objective)
            .map(|(ay, c)| match self.sense {
                Sense::Maximize => ay - c.matrix(),
                Sense::Minimize => c.matrix() - ay,
            })
            .collect()
    }

    pub fn dual_objective(&self, y: &[T]) -> T {
        self.constraints.iter().zip(y).fold(T::zero(), |a, (c, yi)| a + c.rhs * *yi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    NumericalFailure,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct SolveReport<T: Real> {
    pub status: SolveStatus,
    pub primal_value: T,
    pub dual_value: T,
    /// `|primal_value − dual_value|`.
    pub gap: T,
    pub primal_blocks: Vec<HermitianOperator<T>>,
    pub dual_multipliers: Vec<T>,
    pub iterations: usize,
    pub primal_infeasibility: T,
    pub dual_infeasibility: T,
    pub tol: f64,
    pub detail: String,
}

/// Provenance of a dual witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessMeta {
    pub construction: String,
    pub n: usize,
    pub k: Option<usize>,
    pub values: Option<Vec<f64>>,
}

impl WitnessMeta {
    pub fn new(construction: &str, n: usize) -> Self {
        Self {
            construction: construction.to_string(),
            n,
            k: None,
            values: None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }
}

/// Candidate dual solution `(Y, Y_2, …, Y_r)`. Its value `Tr(Y)` bounds the
/// primal optimum once feasibility has been checked.
#[derive(Clone, Debug, PartialEq)]
pub struct DualWitness<T: Real> {
    y: HermitianOperator<T>,
    y_blocks: Vec<HermitianOperator<T>>,
    pub meta: WitnessMeta,
}

impl<T: Real> DualWitness<T> {
    pub fn new(y: HermitianOperator<T>, y_blocks: Vec<HermitianOperator<T>>, meta: WitnessMeta) -> Result<Self> {
        Ok(Self { y, y_blocks, meta })
    }

    pub fn r(&self) -> usize {
        self.y_blocks.len() + 1
    }

    pub fn y(&self) -> &HermitianOperator<T> {
        &self.y
    }

    /// `Y_2 … Y_r`.
    pub fn y_blocks(&self) -> &[HermitianOperator<T>] {
        &self.y_blocks
    }

    /// Block `j`, 1-based, with `Y_1 = Y`.
    pub fn block(&self, j: usize) -> &HermitianOperator<T> {
        if j == 1 {
            &self.y
        } else {
            &self.y_blocks[j - 2]
        }
    }

    pub fn blocks(&self) -> Vec<&HermitianOperator<T>> {
        std::iter::once(&self.y).chain(self.y_blocks.iter()).collect()
    }

    pub fn value(&self) -> T {
        self.y.trace()
    }

    pub(crate) fn from_blocks(mut blocks: Vec<HermitianOperator<T>>, meta: WitnessMeta) -> Self {
        let y = blocks.remove(0);
        Self {
            y,
            y_blocks: blocks,
            meta,
        }
    }
}

fn check_objective<T: Real>(g: &OutcomeOperators<T>, objective: &HermitianOperator<T>) -> Result<HermitianOperator<T>> {
    check_cap(g.spaces().total_dim())?;
    objective.align_to(g.spaces())
}

/// Primal strategy problem: maximize `⟨C, X_r⟩` over strategies
/// `Tr_{Y_1}(X_1) = I`, `Tr_{Y_j}(X_j) = X_{j−1} ⊗ I_{X_j}`.
/// Constraint `j` is scalarized over the Hermitian basis of the dual space
/// of round `j`, so the multipliers are the coordinates of the dual blocks.
pub fn compile_primal<T: Real>(g: &OutcomeOperators<T>, objective: &HermitianOperator<T>) -> Result<SdpProblem<T>> {
    let c = check_objective(g, objective)?;
    let r = g.r();
    let blocks: Vec<Block> = (1..=r)
        .map(|j| Block {
            name: format!("X{j}"),
            spaces: g.strategy_space(j),
        })
        .collect();
    let mut constraints = Vec::new();
    for j in 1..=r {
        let ds = g.dual_space(j);
        let prev = if j > 1 { Some(g.strategy_space(j - 1)) } else { None };
        for (idx, b) in hermitian_basis::<T>(ds.total_dim()).into_iter().enumerate() {
            let mut terms = vec![(j - 1, embed_sparse(&b, &ds, &blocks[j - 1].spaces))];
            let rhs = if j == 1 {
                b.inner(&CMatrix::identity(b.dim, b.dim))
            } else {
                let t = trace_sparse(&b, &ds, prev.as_ref().unwrap());
                if t.nnz() > 0 {
                    terms.push((j - 2, t.scaled(-T::one())));
                }
                T::zero()
            };
            constraints.push(Constraint {
                name: format!("round {j} basis {idx}"),
                terms,
                rhs,
            });
        }
    }
    let mut objective_blocks: Vec<HermitianOperator<T>> =
        blocks.iter().map(|b| HermitianOperator::zeros(b.spaces.clone())).collect();
    objective_blocks[r - 1] = c;
    let mut p = SdpProblem {
        blocks,
        objective: objective_blocks,
        constraints,
        sense: Sense::Maximize,
        initial: None,
    };
    let (xs, ys) = slater_points(g, objective)?;
    p.initial = Some(InitialPoint {
        x: xs.into_iter().map(|x| x.into_matrix()).collect(),
        y: witness_multipliers(&DualWitness::from_blocks(ys, WitnessMeta::new("slater", 1))),
    });
    p.validate()?;
    Ok(p)
}

/// Dual strategy problem in standard form: minimize `Tr(Y_1)` with slack
/// blocks `S_j = Y_j ⊗ I_{Y_j} − Tr_{X_{j+1}}(Y_{j+1})` and
/// `S_r = Y_r ⊗ I_{Y_r} − C`. The `Y` blocks are PSD variables when `C` is
/// PSD (every feasible dual point then has PSD blocks); otherwise each is a
/// difference of two PSD variables.
pub fn compile_dual<T: Real>(g: &OutcomeOperators<T>, objective: &HermitianOperator<T>) -> Result<SdpProblem<T>> {
    let c = check_objective(g, objective)?;
    let r = g.r();
    let split = c.min_eigenvalue()? < -T::tol(1e-10);
    let mut blocks = Vec::new();
    // y_index[j-1] = (plus block, optional minus block); s_index[j-1] = slack block
    let mut y_index = Vec::new();
    for j in 1..=r {
        let plus = blocks.len();
        blocks.push(Block {
            name: if split { format!("Y{j}+") } else { format!("Y{j}") },
            spaces: g.dual_space(j),
        });
        let minus = if split {
            blocks.push(Block {
                name: format!("Y{j}-"),
                spaces: g.dual_space(j),
            });
            Some(plus + 1)
        } else {
            None
        };
        y_index.push((plus, minus));
    }
    let s_index: Vec<usize> = (1..=r)
        .map(|j| {
            blocks.push(Block {
                name: format!("S{j}"),
                spaces: g.strategy_space(j),
            });
            blocks.len() - 1
        })
        .collect();
    let mut constraints = Vec::new();
    for j in 1..=r {
        let ss = g.strategy_space(j);
        let ds = g.dual_space(j);
        for (idx, b) in hermitian_basis::<T>(ss.total_dim()).into_iter().enumerate() {
            let mut terms = Vec::new();
            let on_y = trace_sparse(&b, &ss, &ds);
            let (plus, minus) = y_index[j - 1];
            if on_y.nnz() > 0 {
                if let Some(m) = minus {
                    terms.push((m, on_y.scaled(-T::one())));
                }
                terms.push((plus, on_y));
            }
            if j < r {
                let next = g.dual_space(j + 1);
                let on_next = embed_sparse(&b, &ss, &next).scaled(-T::one());
                let (np, nm) = y_index[j];
                if let Some(m) = nm {
                    terms.push((m, on_next.scaled(-T::one())));
                }
                terms.push((np, on_next));
            }
            terms.push((s_index[j - 1], b.scaled(-T::one())));
            let rhs = if j == r { b.inner(c.matrix()) } else { T::zero() };
            constraints.push(Constraint {
                name: format!("round {j} basis {idx}"),
                terms,
                rhs,
            });
        }
    }
    let mut objective_blocks: Vec<HermitianOperator<T>> =
        blocks.iter().map(|b| HermitianOperator::zeros(b.spaces.clone())).collect();
    let (p1, m1) = y_index[0];
    objective_blocks[p1] = HermitianOperator::identity(blocks[p1].spaces.clone());
    if let Some(m) = m1 {
        objective_blocks[m] = HermitianOperator::identity(blocks[m].spaces.clone()).scale(-T::one());
    }
    let p = SdpProblem {
        blocks,
        objective: objective_blocks,
        constraints,
        sense: Sense::Minimize,
        initial: None,
    };
    p.validate()?;
    Ok(p)
}

/// Strictly feasible primal blocks `X_j = I / Π_{i≤j} dim Y_i` and dual blocks
/// `Y_r = (‖C‖+1) I`, `Y_j = 2 dim(X_{j+1}) · (scale of Y_{j+1})`; every dual
/// inequality then holds with margin at least one.
pub fn slater_points<T: Real>(
    g: &OutcomeOperators<T>,
    objective: &HermitianOperator<T>,
) -> Result<(Vec<HermitianOperator<T>>, Vec<HermitianOperator<T>>)> {
    let c = check_objective(g, objective)?;
    let r = g.r();
    let mut primal = Vec::with_capacity(r);
    let mut denom = 1usize;
    for j in 1..=r {
        let answers: usize = g.answer_labels(j).iter().map(|l| g.spaces().dim_of(l).unwrap()).product();
        denom *= answers;
        primal.push(HermitianOperator::identity(g.strategy_space(j)).scale(T::one() / T::lit(denom as f64)));
    }
    let mut scales = vec![T::zero(); r];
    scales[r - 1] = c.norm()? + T::one();
    for j in (1..r).rev() {
        let qdim: usize = g.question_labels(j + 1).iter().map(|l| g.spaces().dim_of(l).unwrap()).product();
        scales[j - 1] = T::lit(2.0 * qdim as f64) * scales[j];
    }
    let dual = (1..=r)
        .map(|j| HermitianOperator::identity(g.dual_space(j)).scale(scales[j - 1]))
        .collect();
    Ok((primal, dual))
}

/// Dual multipliers of [`compile_primal`] corresponding to a witness.
pub fn witness_multipliers<T: Real>(w: &DualWitness<T>) -> Vec<T> {
    w.blocks()
        .iter()
        .flat_map(|b| basis_coordinates(b.matrix()))
        .collect()
}

/// Dual blocks encoded by the multipliers of [`compile_primal`].
pub fn witness_from_multipliers<T: Real>(g: &OutcomeOperators<T>, y: &[T], meta: WitnessMeta) -> Result<DualWitness<T>> {
    let mut blocks = Vec::with_capacity(g.r());
    let mut offset = 0;
    for j in 1..=g.r() {
        let ds = g.dual_space(j);
        let d = ds.total_dim();
        let coords = y.get(offset..offset + d * d).ok_or_else(|| {
            Error::DimensionMismatch(format!("{} multipliers are too few for the dual blocks", y.len()))
        })?;
        blocks.push(HermitianOperator::new(ds, from_basis_coordinates(d, coords))?);
        offset += d * d;
    }
    if offset != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} multipliers for {offset} dual coordinates",
            y.len()
        )));
    }
    Ok(DualWitness::from_blocks(blocks, meta))
}

/// Per-constraint results of a dual feasibility check.
#[derive(Clone, Debug, Serialize)]
pub struct DualFeasibility {
    pub feasible: bool,
    /// `(constraint name, min eigenvalue)` in chain order; the last one is
    /// `Y_r ⊗ I − C`.
    pub constraints: Vec<(String, f64)>,
    /// Minimum eigenvalue of each witness block.
    pub block_min_eigenvalues: Vec<f64>,
    pub value: f64,
    pub tol: f64,
}

/// The operators whose positivity makes `w` dual feasible, in chain order.
pub fn dual_constraint_operators<T: Real>(
    g: &OutcomeOperators<T>,
    objective: &HermitianOperator<T>,
    w: &DualWitness<T>,
) -> Result<Vec<(String, HermitianOperator<T>)>> {
    let c = check_objective(g, objective)?;
    let r = g.r();
    if w.r() != r {
        return Err(Error::DimensionMismatch(format!(
            "witness has {} blocks, the game has {r} rounds",
            w.r()
        )));
    }
    let blocks: Vec<HermitianOperator<T>> = (1..=r)
        .map(|j| w.block(j).align_to(&g.dual_space(j)))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(r);
    for j in 1..=r {
        let ss = g.strategy_space(j);
        let lifted = blocks[j - 1].embed(&ss)?;
        let (name, op) = if j < r {
            let q = g.question_labels(j + 1);
            let t = blocks[j].partial_trace(&q)?.align_to(&ss)?;
            (format!("Y{j} ⊗ I − Tr(Y{})", j + 1), lifted.sub(&t)?)
        } else {
            (format!("Y{j} ⊗ I − C"), lifted.sub(&c)?)
        };
        out.push((name, op));
    }
    Ok(out)
}

/// Checks every dual inequality of the strategy problem for `objective`.
pub fn check_dual_feasibility<T: Real>(
    g: &OutcomeOperators<T>,
    objective: &HermitianOperator<T>,
    w: &DualWitness<T>,
    tol: f64,
) -> Result<DualFeasibility> {
    let ops = dual_constraint_operators(g, objective, w)?;
    let mut constraints = Vec::with_capacity(ops.len());
    let mut feasible = true;
    for (name, op) in ops {
        let m = op.min_eigenvalue()?.as_f64();
        feasible &= m >= -tol;
        constraints.push((name, m));
    }
    let block_min_eigenvalues = w
        .blocks()
        .iter()
        .map(|b| b.min_eigenvalue().map(|x| x.as_f64()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualFeasibility {
        feasible,
        constraints,
        block_min_eigenvalues,
        value: w.value().as_f64(),
        tol,
    })
}

/// Makes a (nearly) feasible witness feasible by adding multiples of the
/// identity, last constraint first. Each added `δ I` on `Y_{j+1}` costs
/// `δ · dim X_{j+1}` on the preceding constraint, which `Y_j` absorbs.
pub fn restore_feasibility<T: Real>(
    g: &OutcomeOperators<T>,
    objective: &HermitianOperator<T>,
    w: &DualWitness<T>,
) -> Result<DualWitness<T>> {
    let r = g.r();
    let c = check_objective(g, objective)?;
    let mut blocks: Vec<HermitianOperator<T>> = (1..=r)
        .map(|j| w.block(j).align_to(&g.dual_space(j)))
        .collect::<Result<_>>()?;
    let last = blocks[r - 1].embed(&g.strategy_space(r))?.sub(&c)?;
    let mut shift = scalar::max(T::zero(), -last.min_eigenvalue()?);
    blocks[r - 1] = blocks[r - 1].add(&HermitianOperator::identity(g.dual_space(r)).scale(shift))?;
    for j in (1..r).rev() {
        // blocks[j] already carries its shift, so the trace term below
        // includes the `δ · dim X_{j+1}` it costs here
        let ss = g.strategy_space(j);
        let q = g.question_labels(j + 1);
        let t = blocks[j].partial_trace(&q)?.align_to(&ss)?;
        let op = blocks[j - 1].embed(&ss)?.sub(&t)?;
        shift = scalar::max(T::zero(), -op.min_eigenvalue()?);
        blocks[j - 1] = blocks[j - 1].add(&HermitianOperator::identity(g.dual_space(j)).scale(shift))?;
    }
    let mut meta = w.meta.clone();
    if !meta.construction.ends_with("+restored") {
        meta.construction.push_str("+restored");
    }
    Ok(DualWitness::from_blocks(blocks, meta))
}

/// Solution of a strategy problem together with its dual witness.
#[derive(Clone, Debug)]
pub struct Optimum<T: Real> {
    pub report: SolveReport<T>,
    /// Witness read off the multipliers and lifted to exact feasibility;
    /// present when the solver reports an optimum.
    pub witness: Option<DualWitness<T>>,
}

/// Maximizes `⟨objective, X_r⟩` over strategies for `g` and extracts a
/// feasible dual witness.
pub fn optimize<T: Real>(
    g: &OutcomeOperators<T>,
    objective: &HermitianOperator<T>,
    opts: &SolverOptions,
    meta: WitnessMeta,
) -> Result<Optimum<T>> {
    let p = compile_primal(g, objective)?;
    let report = solve_with(&p, opts)?;
    let witness = if report.status == SolveStatus::Optimal {
        let raw = witness_from_multipliers(g, &report.dual_multipliers, meta)?;
        Some(restore_feasibility(g, objective, &raw)?)
    } else {
        None
    };
    Ok(Optimum { report, witness })
}

/// Primal and dual objective values of a feasible pair, with weak duality
/// asserted.
pub fn check_weak_duality<T: Real>(p: &SdpProblem<T>, primal: &[CMatrix<T>], dual: &[T]) -> Result<(T, T)> {
    const FEAS: f64 = 1e-8;
    const SLACK: f64 = 1e-7;
    if primal.len() != p.blocks.len() || dual.len() != p.constraints.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} primal blocks and {} multipliers for a problem with {} blocks and {} constraints",
            primal.len(),
            dual.len(),
            p.blocks.len(),
            p.constraints.len()
        )));
    }
    let tol = T::tol(FEAS);
    for (b, x) in p.blocks.iter().zip(primal) {
        let drift = scalar::max_abs(&(x - x.adjoint()));
        if drift > tol {
            return Err(Error::InfeasiblePoint {
                constraint: format!("block `{}` is not Hermitian", b.name),
                residual: drift.as_f64(),
            });
        }
        let m = min_eigenvalue_raw(&scalar::hermitian_part(x))?;
        if m < -tol {
            return Err(Error::InfeasiblePoint {
                constraint: format!("block `{}` ⪰ 0", b.name),
                residual: m.as_f64(),
            });
        }
    }
    for (c, v) in p.constraints.iter().zip(p.apply_constraints(primal)) {
        let res = scalar::abs(v - c.rhs);
        if res > tol * scalar::max(T::one(), scalar::abs(c.rhs)) {
            return Err(Error::InfeasiblePoint {
                constraint: c.name.clone(),
                residual: res.as_f64(),
            });
        }
    }
    for (b, z) in p.blocks.iter().zip(p.dual_slack(dual)) {
        let m = min_eigenvalue_raw(&z)?;
        if m < -tol {
            return Err(Error::InfeasiblePoint {
                constraint: format!("dual slack on block `{}` ⪰ 0", b.name),
                residual: m.as_f64(),
            });
        }
    }
    let pv = p.objective_value(primal);
    let dv = p.dual_objective(dual);
    let violated = match p.sense {
        Sense::Maximize => pv > dv + T::lit(SLACK),
        Sense::Minimize => dv > pv + T::lit(SLACK),
    };
    if violated {
        return Err(Error::WeakDualityViolated {
            primal: pv.as_f64(),
            dual: dv.as_f64(),
        });
    }
    Ok((pv, dv))
}
