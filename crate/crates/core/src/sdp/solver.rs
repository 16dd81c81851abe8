//! Dense primal-dual interior-point method over the Hermitian PSD cone.
//!
//! HKM search direction with a Mehrotra predictor-corrector. The problem is
//! always solved in maximizing form; a minimizing objective is negated on the
//! way in and the values and multipliers are mapped back on the way out.

use nalgebra::{Cholesky, DMatrix, DVector};

use super::{SdpProblem, Sense, SolveReport, SolveStatus, SparseHermitian};
use crate::error::{Error, Result};
use crate::operator::{hs_inner, HermitianOperator};
use crate::scalar::{self, CMatrix, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 200,
        }
    }
}

pub fn solve<T: Real>(p: &SdpProblem<T>, tol: f64) -> Result<SolveReport<T>> {
    solve_with(p, &SolverOptions { tol, ..Default::default() })
}

const STEP_FRACTION: f64 = 0.95;

pub fn solve_with<T: Real>(p: &SdpProblem<T>, opts: &SolverOptions) -> Result<SolveReport<T>> {
    if !(1e-10..=1e-2).contains(&opts.tol) {
        return Err(Error::InvalidTolerance(opts.tol));
    }
    p.validate()?;
    let sign = match p.sense {
        Sense::Maximize => T::one(),
        Sense::Minimize => -T::one(),
    };
    let c: Vec<CMatrix<T>> = p.objective.iter().map(|o| o.matrix().map(|z| z * sign)).collect();
    let ws = Workspace::new(p, c);
    let tol = T::tol(opts.tol);

    let (mut x, mut y, mut z) = ws.starting_point(p, sign);
    let nu = T::lit(ws.total_dim as f64);
    let b_norm = ws.b.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt();
    let c_norm = ws.c.iter().fold(T::zero(), |a, m| a + scalar::frobenius(m).powi(2)).sqrt();

    let mut status = SolveStatus::IterationLimit;
    let mut detail = String::new();
    let mut iterations = 0;
    let (mut pinf, mut dinf) = (T::zero(), T::zero());
    for iter in 0..=opts.max_iter {
        iterations = iter;
        let ax = p.apply_constraints(&x);
        let rp: Vec<T> = ws.b.iter().zip(&ax).map(|(b, a)| *b - *a).collect();
        let aty = p.adjoint(&y);
        let rd: Vec<CMatrix<T>> = (0..ws.nb).map(|b| &ws.c[b] - &aty[b] + &z[b]).collect();
        let pobj = obj(&ws.c, &x);
        let dobj = dot(&ws.b, &y);
        let rp_norm = norm(&rp);
        let rd_norm = rd.iter().fold(T::zero(), |a, m| a + scalar::frobenius(m).powi(2)).sqrt();
        pinf = rp_norm / (T::one() + b_norm);
        dinf = rd_norm / (T::one() + c_norm);
        let xz = x.iter().zip(&z).fold(T::zero(), |a, (xb, zb)| a + hs_inner(xb, zb));
        let mu = xz / nu;
        let gap = scalar::abs(pobj - dobj) / scalar::max(T::one(), scalar::abs(pobj));
        let comp = xz / scalar::max(T::one(), scalar::abs(pobj));
        if !(pobj.is_finite() && dobj.is_finite() && mu.is_finite()) {
            status = SolveStatus::NumericalFailure;
            detail = "non-finite iterate".into();
            break;
        }
        if pinf <= tol && dinf <= tol && gap <= tol && comp <= tol {
            status = SolveStatus::Optimal;
            break;
        }
        // normalized rays: y with 𝒜*y ⪰ 0 and bᵀy < 0, or X with 𝒜X = 0 and ⟨C,X⟩ > 0
        if dobj < T::zero() {
            let cert: T = (0..ws.nb)
                .map(|b| scalar::frobenius(&(&ws.c[b] - &rd[b])))
                .fold(T::zero(), |a, v| a + v * v)
                .sqrt();
            if cert / -dobj < tol && iter > 0 {
                status = SolveStatus::Infeasible;
                detail = "primal infeasible: dual ray found".into();
                break;
            }
        }
        if pobj > T::zero() && iter > 0 {
            let ax_norm = norm(&ax);
            if ax_norm / pobj < tol {
                status = SolveStatus::Infeasible;
                detail = "dual infeasible: primal ray found (unbounded objective)".into();
                break;
            }
        }
        if iter == opts.max_iter {
            break;
        }

        let (lx, w) = match ws.factor(&x, &z) {
            Some(f) => f,
            None => {
                status = SolveStatus::NumericalFailure;
                detail = "iterate lost positive definiteness".into();
                break;
            }
        };
        let m = ws.schur(p, &x, &w);
        let chol = match Cholesky::new(m.clone()) {
            Some(ch) => ch,
            None => match Cholesky::new(regularize(&m)) {
                Some(ch) => ch,
                None => {
                    status = SolveStatus::NumericalFailure;
                    detail = "Schur complement is singular".into();
                    break;
                }
            },
        };
        let xrdw: Vec<CMatrix<T>> = (0..ws.nb).map(|b| &x[b] * &rd[b] * &w[b]).collect();
        let base_rhs: Vec<T> = {
            let a_xrdw = p.apply_constraints(&xrdw.iter().map(scalar::hermitian_part).collect::<Vec<_>>());
            a_xrdw.iter().zip(&rp).map(|(a, r)| *a - *r).collect()
        };

        // predictor
        let target: Vec<CMatrix<T>> = x.iter().map(|xb| xb.map(|v| -v)).collect();
        let (dxa, _, dza) = ws.direction(p, &chol, &base_rhs, &target, &x, &w, &rd);
        let ap = max_step(&lx, &dxa);
        let lz = match chol_all(&z) {
            Some(l) => l,
            None => {
                status = SolveStatus::NumericalFailure;
                detail = "dual slack lost positive definiteness".into();
                break;
            }
        };
        let ad = max_step(&lz, &dza);
        let ap1 = scalar::min(T::one(), ap);
        let ad1 = scalar::min(T::one(), ad);
        let mu_aff = (0..ws.nb).fold(T::zero(), |acc, b| {
            acc + hs_inner(&(&x[b] + &dxa[b] * scalar::re(ap1)), &(&z[b] + &dza[b] * scalar::re(ad1)))
        }) / nu;
        let ratio = scalar::max(T::zero(), scalar::min(T::one(), mu_aff / mu));
        let sigma = ratio * ratio * ratio;

        // corrector
        let target: Vec<CMatrix<T>> = (0..ws.nb)
            .map(|b| {
                let second = scalar::hermitian_part(&(&dxa[b] * &dza[b] * &w[b]));
                &w[b] * scalar::re(sigma * mu) - &x[b] - second
            })
            .collect();
        let (dx, dy, dz) = ws.direction(p, &chol, &base_rhs, &target, &x, &w, &rd);
        let frac = T::lit(STEP_FRACTION);
        let ap = scalar::min(T::one(), frac * max_step(&lx, &dx));
        let ad = scalar::min(T::one(), frac * max_step(&lz, &dz));
        if ap < T::lit(1e-12) && ad < T::lit(1e-12) {
            status = SolveStatus::NumericalFailure;
            detail = format!("step length collapsed at iteration {iter}");
            break;
        }
        for b in 0..ws.nb {
            x[b] = scalar::hermitian_part(&(&x[b] + &dx[b] * scalar::re(ap)));
            z[b] = scalar::hermitian_part(&(&z[b] + &dz[b] * scalar::re(ad)));
        }
        for (yi, di) in y.iter_mut().zip(&dy) {
            *yi += *di * ad;
        }
    }

    let pobj = obj(&ws.c, &x) * sign;
    let dobj = dot(&ws.b, &y) * sign;
    let primal_blocks = p
        .blocks
        .iter()
        .zip(&x)
        .map(|(b, xb)| HermitianOperator::from_parts(b.spaces.clone(), xb.clone()))
        .collect();
    if status == SolveStatus::IterationLimit {
        detail = format!("no convergence within {} iterations", opts.max_iter);
    }
    Ok(SolveReport {
        status,
        primal_value: pobj,
        dual_value: dobj,
        gap: scalar::abs(pobj - dobj),
        primal_blocks,
        dual_multipliers: y.into_iter().map(|v| v * sign).collect(),
        iterations,
        primal_infeasibility: pinf,
        dual_infeasibility: dinf,
        tol: opts.tol,
        detail,
    })
}

struct Workspace<T: Real> {
    nb: usize,
    dims: Vec<usize>,
    total_dim: usize,
    c: Vec<CMatrix<T>>,
    b: Vec<T>,
    /// per block: (constraint index, coefficient)
    by_block: Vec<Vec<(usize, SparseHermitian<T>)>>,
    dense_schur: Vec<bool>,
}

impl<T: Real> Workspace<T> {
    fn new(p: &SdpProblem<T>, c: Vec<CMatrix<T>>) -> Self {
        let nb = p.blocks.len();
        let dims: Vec<usize> = p.blocks.iter().map(|b| b.dim()).collect();
        let mut by_block: Vec<Vec<(usize, SparseHermitian<T>)>> = vec![Vec::new(); nb];
        for (i, con) in p.constraints.iter().enumerate() {
            for (b, f) in &con.terms {
                by_block[*b].push((i, f.clone()));
            }
        }
        let dense_schur = by_block
            .iter()
            .zip(&dims)
            .map(|(terms, &d)| {
                let nnz: usize = terms.iter().map(|(_, f)| f.nnz()).sum();
                let sparse_cost = (nnz * nnz) as f64;
                let dense_cost = terms.len() as f64 * (d * d * d) as f64 + (nnz * terms.len()) as f64;
                dense_cost < sparse_cost
            })
            .collect();
        Self {
            nb,
            total_dim: dims.iter().sum(),
            dims,
            c,
            b: p.constraints.iter().map(|c| c.rhs).collect(),
            by_block,
            dense_schur,
        }
    }

    fn starting_point(&self, p: &SdpProblem<T>, sign: T) -> (Vec<CMatrix<T>>, Vec<T>, Vec<CMatrix<T>>) {
        if let Some(init) = &p.initial {
            let y: Vec<T> = init.y.iter().map(|v| *v * sign).collect();
            let aty = p.adjoint(&y);
            let z: Vec<CMatrix<T>> = (0..self.nb).map(|b| &aty[b] - &self.c[b]).collect();
            let ok = init.x.len() == self.nb
                && init.x.iter().all(|xb| Cholesky::new(xb.clone()).is_some())
                && z.iter().all(|zb| Cholesky::new(zb.clone()).is_some());
            if ok {
                return (init.x.clone(), y, z);
            }
        }
        // identity start scaled as in SDPT3
        let n = T::lit(self.total_dim as f64);
        let ten = T::lit(10.0);
        let mut xi = scalar::max(ten, n.sqrt());
        let mut eta = scalar::max(ten, n.sqrt());
        let mut a_norms = vec![T::zero(); self.b.len()];
        for terms in &self.by_block {
            for (i, f) in terms {
                a_norms[*i] += f.entries.iter().fold(T::zero(), |a, e| a + e.2.re * e.2.re + e.2.im * e.2.im);
            }
        }
        for (i, a2) in a_norms.iter().enumerate() {
            let an = a2.sqrt();
            xi = scalar::max(xi, n * (T::one() + scalar::abs(self.b[i])) / (T::one() + an));
            eta = scalar::max(eta, an);
        }
        for cb in &self.c {
            eta = scalar::max(eta, scalar::frobenius(cb));
        }
        let x = self.dims.iter().map(|&d| CMatrix::<T>::identity(d, d) * scalar::re(xi)).collect();
        let z = self.dims.iter().map(|&d| CMatrix::<T>::identity(d, d) * scalar::re(eta)).collect();
        (x, vec![T::zero(); self.b.len()], z)
    }

    /// Cholesky factors of `X` and the inverse of `Z`.
    fn factor(&self, x: &[CMatrix<T>], z: &[CMatrix<T>]) -> Option<(Vec<CMatrix<T>>, Vec<CMatrix<T>>)> {
        let lx = chol_all(x)?;
        let mut w = Vec::with_capacity(self.nb);
        for zb in z {
            let ch = Cholesky::new(zb.clone())?;
            w.push(scalar::hermitian_part(&ch.inverse()));
        }
        Some((lx, w))
    }

    /// `M_ij = Σ_b Re Tr(A_ib X_b A_jb W_b)`.
    fn schur(&self, p: &SdpProblem<T>, x: &[CMatrix<T>], w: &[CMatrix<T>]) -> DMatrix<T> {
        let m = p.constraints.len();
        let mut out = DMatrix::<T>::zeros(m, m);
        for b in 0..self.nb {
            let terms = &self.by_block[b];
            let (xb, wb) = (&x[b], &w[b]);
            if self.dense_schur[b] {
                for (j, aj) in terms {
                    let g = xb * aj.to_dense() * wb;
                    for (i, ai) in terms {
                        if i > j {
                            continue;
                        }
                        let v = ai.entries.iter().fold(T::zero(), |acc, &(r, s, a)| {
                            let q = g[(s, r)];
                            acc + a.re * q.re - a.im * q.im
                        });
                        out[(*i, *j)] += v;
                    }
                }
            } else {
                for (ii, (i, ai)) in terms.iter().enumerate() {
                    for (j, aj) in &terms[ii..] {
                        let mut acc = T::zero();
                        for &(r, s, v) in &ai.entries {
                            for &(t, u, wv) in &aj.entries {
                                let prod = v * xb[(s, t)] * wv * wb[(u, r)];
                                acc += prod.re;
                            }
                        }
                        let (lo, hi) = if i <= j { (*i, *j) } else { (*j, *i) };
                        out[(lo, hi)] += acc;
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                out[(i, j)] = out[(j, i)];
            }
        }
        out
    }

    /// Solves for `dy` with `M dy = 𝒜(target) + base_rhs`, then
    /// `dZ = 𝒜*(dy) − Rd` and `dX = target − sym(X dZ W)`.
    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        p: &SdpProblem<T>,
        chol: &Cholesky<T, nalgebra::Dyn>,
        base_rhs: &[T],
        target: &[CMatrix<T>],
        x: &[CMatrix<T>],
        w: &[CMatrix<T>],
        rd: &[CMatrix<T>],
    ) -> (Vec<CMatrix<T>>, Vec<T>, Vec<CMatrix<T>>) {
        let sym_target: Vec<CMatrix<T>> = target.iter().map(scalar::hermitian_part).collect();
        let at = p.apply_constraints(&sym_target);
        let rhs = DVector::from_iterator(at.len(), at.iter().zip(base_rhs).map(|(a, b)| *a + *b));
        let dy: Vec<T> = chol.solve(&rhs).iter().copied().collect();
        let atdy = p.adjoint(&dy);
        let dz: Vec<CMatrix<T>> = (0..self.nb).map(|b| &atdy[b] - &rd[b]).collect();
        let dx: Vec<CMatrix<T>> = (0..self.nb)
            .map(|b| &sym_target[b] - scalar::hermitian_part(&(&x[b] * &dz[b] * &w[b])))
            .collect();
        (dx, dy, dz)
    }
}

fn chol_all<T: Real>(m: &[CMatrix<T>]) -> Option<Vec<CMatrix<T>>> {
    m.iter()
        .map(|b| Cholesky::new(b.clone()).map(|c| c.l()))
        .collect()
}

/// Largest `α` with `L L† + α D ⪰ 0`, or a large number when unbounded.
fn max_step<T: Real>(l: &[CMatrix<T>], d: &[CMatrix<T>]) -> T {
    let mut best = T::lit(1e30);
    for (lb, db) in l.iter().zip(d) {
        let Some(t) = lb.solve_lower_triangular(db) else {
            return T::zero();
        };
        let Some(s) = lb.solve_lower_triangular(&t.adjoint()) else {
            return T::zero();
        };
        let sym = scalar::hermitian_part(&s);
        let lmin = match crate::operator::min_eigenvalue_raw(&sym) {
            Ok(v) => v,
            Err(_) => return T::zero(),
        };
        if lmin < T::zero() {
            best = scalar::min(best, -T::one() / lmin);
        }
    }
    best
}

fn regularize<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let scale = (0..m.nrows()).fold(T::zero(), |a, i| scalar::max(a, m[(i, i)]));
    let eps = scale * T::default_epsilon() * T::lit(1e2);
    let mut r = m.clone();
    for i in 0..m.nrows() {
        r[(i, i)] += eps;
    }
    r
}

fn obj<T: Real>(c: &[CMatrix<T>], x: &[CMatrix<T>]) -> T {
    c.iter().zip(x).fold(T::zero(), |a, (cb, xb)| a + hs_inner(cb, xb))
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
