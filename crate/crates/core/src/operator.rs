//! Hermitian operators on labeled tensor-product spaces.

use std::ops::Deref;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::scalar::{self, CMatrix, Cx, Real};
use crate::spaces::{strides, SpaceList};

/// Largest total dimension any single operator may have.
pub const DIM_CAP: usize = 256;

/// A dense Hermitian matrix tagged with the ordered spaces it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T: Real> {
    spaces: SpaceList,
    m: CMatrix<T>,
}

/// Relative Hermiticity drift that is silently symmetrized away.
const HERMITIAN_DRIFT: f64 = 1e-12;

impl<T: Real> HermitianOperator<T> {
    /// Wraps `m`, symmetrizing away drift up to 1e-12 (relative to the
    /// largest entry) and rejecting anything larger.
    pub fn new(spaces: SpaceList, m: CMatrix<T>) -> Result<Self> {
        let d = spaces.total_dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but spaces {} have total dimension {d}",
                m.nrows(),
                m.ncols(),
                spaces
            )));
        }
        let drift = scalar::max_abs(&(&m - m.adjoint()));
        let scale = scalar::max(T::one(), scalar::max_abs(&m));
        if !(drift <= T::tol(HERMITIAN_DRIFT) * scale) {
            return Err(Error::NotHermitian {
                drift: drift.as_f64(),
            });
        }
        Ok(Self {
            spaces,
            m: scalar::hermitian_part(&m),
        })
    }

    /// Symmetrizes without checking. Only for products known to be Hermitian
    /// up to rounding.
    pub(crate) fn from_parts(spaces: SpaceList, m: CMatrix<T>) -> Self {
        debug_assert_eq!(m.nrows(), spaces.total_dim());
        Self {
            spaces,
            m: scalar::hermitian_part(&m),
        }
    }

    pub fn from_fn(spaces: SpaceList, f: impl Fn(usize, usize) -> Cx<T>) -> Result<Self> {
        let d = spaces.total_dim();
        Self::new(spaces, DMatrix::from_fn(d, d, f))
    }

    pub fn zeros(spaces: SpaceList) -> Self {
        let d = spaces.total_dim();
        Self {
            spaces,
            m: DMatrix::zeros(d, d),
        }
    }

    pub fn identity(spaces: SpaceList) -> Self {
        let d = spaces.total_dim();
        Self {
            spaces,
            m: DMatrix::identity(d, d),
        }
    }

    pub fn from_diagonal(spaces: SpaceList, diag: &[T]) -> Result<Self> {
        let d = spaces.total_dim();
        if diag.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} diagonal entries for dimension {d}",
                diag.len()
            )));
        }
        let mut m = DMatrix::zeros(d, d);
        for (i, x) in diag.iter().enumerate() {
            m[(i, i)] = scalar::re(*x);
        }
        Ok(Self { spaces, m })
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` onto the (unnormalized) vector `psi`.
    pub fn pure(spaces: SpaceList, psi: &[Cx<T>]) -> Result<Self> {
        let d = spaces.total_dim();
        if psi.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for dimension {d}",
                psi.len()
            )));
        }
        let m = DMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj());
        Ok(Self { spaces, m })
    }

    pub fn spaces(&self) -> &SpaceList {
        &self.spaces
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.m[(i, i)].re)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            spaces: self.spaces.clone(),
            m: self.m.map(|z| z * s),
        }
    }

    /// `self + other`, aligning `other` to this operator's space order.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let o = other.align_to(&self.spaces)?;
        Ok(Self {
            spaces: self.spaces.clone(),
            m: &self.m + &o.m,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    /// Hilbert-Schmidt inner product `Tr(self · other)`, aligning orders.
    pub fn inner(&self, other: &Self) -> Result<T> {
        let o = other.align_to(&self.spaces)?;
        Ok(hs_inner(&self.m, &o.m))
    }

    /// Tensor product; `other`'s spaces follow this operator's.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let spaces = self.spaces.concat(&other.spaces)?;
        check_cap(spaces.total_dim())?;
        Ok(Self {
            spaces,
            m: self.m.kronecker(&other.m),
        })
    }

    /// Traces out the listed spaces.
    pub fn partial_trace(&self, traced: &[&str]) -> Result<Self> {
        for l in traced {
            if !self.spaces.contains(l) {
                return Err(Error::UnknownLabel(l.to_string()));
            }
        }
        let kept = self.spaces.without(traced);
        Ok(Self {
            m: partial_trace_raw(&self.m, &self.spaces, traced),
            spaces: kept,
        })
    }

    /// Traces out every space except the listed ones, which keep this
    /// operator's relative order.
    pub fn reduce_to(&self, kept: &[&str]) -> Result<Self> {
        for l in kept {
            if !self.spaces.contains(l) {
                return Err(Error::UnknownLabel(l.to_string()));
            }
        }
        let traced: Vec<String> = self
            .spaces
            .iter()
            .filter(|s| !kept.contains(&s.label.as_str()))
            .map(|s| s.label.clone())
            .collect();
        let traced: Vec<&str> = traced.iter().map(String::as_str).collect();
        self.partial_trace(&traced)
    }

    /// Reorders the tensor factors. Conjugation by a permutation matrix, so
    /// entries move without arithmetic.
    pub fn permute(&self, order: &[&str]) -> Result<Self> {
        let target = self.spaces.reordered(order)?;
        Ok(Self {
            m: permute_raw(&self.m, &self.spaces, &target),
            spaces: target,
        })
    }

    /// Permutes to the order of `target`, which must hold the same spaces.
    pub fn align_to(&self, target: &SpaceList) -> Result<Self> {
        if self.spaces == *target {
            return Ok(self.clone());
        }
        if !self.spaces.same_set(target) {
            return Err(Error::DimensionMismatch(format!(
                "operator on {} cannot be aligned to {}",
                self.spaces, target
            )));
        }
        self.permute(&target.labels())
    }

    /// Tensors with the identity on every space of `target` missing here,
    /// then orders the result like `target`.
    pub fn embed(&self, target: &SpaceList) -> Result<Self> {
        for s in self.spaces.iter() {
            if target.dim_of(&s.label)? != s.dim {
                return Err(Error::DimensionMismatch(format!(
                    "space `{}` has dimension {} but target expects {}",
                    s.label,
                    s.dim,
                    target.dim_of(&s.label)?
                )));
            }
        }
        let missing = target.without(&self.spaces.labels());
        let full = self.kron(&Self::identity(missing))?;
        full.align_to(target)
    }

    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        Ok(Self {
            spaces: self.spaces.relabeled(f)?,
            m: self.m.clone(),
        })
    }

    /// Appends `suffix` to every label.
    pub fn with_suffix(&self, suffix: &str) -> Result<Self> {
        self.relabel(|l| format!("{l}{suffix}"))
    }

    /// Transpose in the computational basis (equal to entrywise conjugation).
    pub fn transpose(&self) -> Self {
        Self {
            spaces: self.spaces.clone(),
            m: self.m.transpose(),
        }
    }

    /// Eigenvalues (unsorted) and eigenvectors as columns.
    pub fn eigen(&self) -> Result<(Vec<T>, CMatrix<T>)> {
        eigen_raw(&self.m)
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        let mut v = self.eigen()?.0;
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Ok(v)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        min_eigenvalue_raw(&self.m)
    }

    pub fn max_eigenvalue(&self) -> Result<T> {
        Ok(-min_eigenvalue_raw(&self.m.map(|z| -z))?)
    }

    pub fn is_psd(&self, tol: T) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    /// Spectral norm.
    pub fn norm(&self) -> Result<T> {
        let (vals, _) = self.eigen()?;
        Ok(vals.into_iter().fold(T::zero(), |a, x| scalar::max(a, scalar::abs(x))))
    }

    /// Applies `f` to the eigenvalues.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let (vals, vecs) = self.eigen()?;
        let d = self.dim();
        let mut scaled = vecs.clone();
        for (j, v) in vals.iter().enumerate() {
            let s = f(*v);
            for i in 0..d {
                scaled[(i, j)] *= s;
            }
        }
        Ok(Self::from_parts(
            self.spaces.clone(),
            &scaled * vecs.adjoint(),
        ))
    }

    /// Square root of a PSD operator; eigenvalues within `tol` below zero are
    /// clipped, anything more negative is an error.
    pub fn sqrt_psd(&self, tol: T) -> Result<Self> {
        let min = self.min_eigenvalue()?;
        if min < -tol {
            return Err(Error::NotPsd {
                what: "operator".into(),
                min_eigenvalue: min.as_f64(),
            });
        }
        self.map_spectrum(|x| scalar::max(x, T::zero()).sqrt())
    }

    /// Zeroes every off-diagonal entry.
    pub fn dephase(&self) -> Self {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = scalar::re(self.m[(i, i)].re);
        }
        Self {
            spaces: self.spaces.clone(),
            m,
        }
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || scalar::modulus(self.m[(i, j)]) <= tol))
    }

    pub fn max_abs_entry(&self) -> T {
        scalar::max_abs(&self.m)
    }

    /// Largest entrywise distance to `other` after aligning space orders.
    pub fn distance(&self, other: &Self) -> Result<T> {
        let o = other.align_to(&self.spaces)?;
        Ok(scalar::max_abs(&(&self.m - &o.m)))
    }

    /// Converts to another precision.
    pub fn cast<U: Real>(&self) -> HermitianOperator<U> {
        HermitianOperator {
            spaces: self.spaces.clone(),
            m: self
                .m
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))),
        }
    }
}

/// A positive semidefinite operator of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T: Real>(HermitianOperator<T>);

/// Tolerance for PSD and trace checks on density operators.
const DENSITY_TOL: f64 = 1e-10;

impl<T: Real> DensityOperator<T> {
    pub fn new(op: HermitianOperator<T>) -> Result<Self> {
        let tol = T::tol(DENSITY_TOL);
        let min = op.min_eigenvalue()?;
        if min < -tol {
            return Err(Error::NotPsd {
                what: "density operator".into(),
                min_eigenvalue: min.as_f64(),
            });
        }
        let tr = op.trace();
        if scalar::abs(tr - T::one()) > tol {
            return Err(Error::NotNormalized {
                what: "density operator".into(),
                trace: tr.as_f64(),
            });
        }
        Ok(Self(op))
    }

    /// Normalized pure state.
    pub fn pure(spaces: SpaceList, psi: &[Cx<T>]) -> Result<Self> {
        let norm2 = psi
            .iter()
            .fold(T::zero(), |a, z| a + z.re * z.re + z.im * z.im);
        if norm2 <= T::zero() {
            return Err(Error::Domain("zero state vector".into()));
        }
        let s = norm2.sqrt();
        let v: Vec<Cx<T>> = psi.iter().map(|z| z.unscale(s)).collect();
        Self::new(HermitianOperator::pure(spaces, &v)?)
    }

    pub fn maximally_mixed(spaces: SpaceList) -> Self {
        let d = spaces.total_dim();
        Self(HermitianOperator::identity(spaces).scale(T::one() / T::lit(d as f64)))
    }

    pub fn as_operator(&self) -> &HermitianOperator<T> {
        &self.0
    }

    pub fn into_operator(self) -> HermitianOperator<T> {
        self.0
    }
}

impl<T: Real> Deref for DensityOperator<T> {
    type Target = HermitianOperator<T>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

pub fn kron<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<HermitianOperator<T>> {
    a.kron(b)
}

pub fn partial_trace<T: Real>(a: &HermitianOperator<T>, traced: &[&str]) -> Result<HermitianOperator<T>> {
    a.partial_trace(traced)
}

pub fn permute_systems<T: Real>(a: &HermitianOperator<T>, order: &[&str]) -> Result<HermitianOperator<T>> {
    a.permute(order)
}

pub fn min_eigenvalue<T: Real>(a: &HermitianOperator<T>) -> Result<T> {
    a.min_eigenvalue()
}

pub fn is_psd<T: Real>(a: &HermitianOperator<T>, tol: T) -> Result<bool> {
    a.is_psd(tol)
}

pub fn dephase<T: Real>(a: &HermitianOperator<T>) -> HermitianOperator<T> {
    a.dephase()
}

/// Fidelity `‖√p √q‖₁ = Tr √(√p q √p)` of two PSD operators.
pub fn fidelity<T: Real>(p: &HermitianOperator<T>, q: &HermitianOperator<T>) -> Result<T> {
    let tol = T::tol(DENSITY_TOL);
    let q = q.align_to(p.spaces())?;
    for (what, op) in [("first argument", p), ("second argument", &q)] {
        let min = op.min_eigenvalue()?;
        if min < -tol {
            return Err(Error::NotPsd {
                what: format!("fidelity {what}"),
                min_eigenvalue: min.as_f64(),
            });
        }
    }
    let sp = p.sqrt_psd(tol)?;
    let inner = &sp.m * &q.m * &sp.m;
    let (vals, _) = eigen_raw(&scalar::hermitian_part(&inner))?;
    Ok(vals
        .into_iter()
        .fold(T::zero(), |a, x| a + scalar::max(x, T::zero()).sqrt()))
}

pub(crate) fn check_cap(dim: usize) -> Result<()> {
    if dim > DIM_CAP {
        Err(Error::DimensionCap { dim, cap: DIM_CAP })
    } else {
        Ok(())
    }
}

/// `Re Tr(a b)` for Hermitian `a`, `b`.
pub(crate) fn hs_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    // Tr(ab) = Σ_ij a_ij b_ji = Σ_ij a_ij conj(b_ij) for Hermitian b
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc + x.re * y.re + x.im * y.im)
}

pub(crate) fn eigen_raw<T: Real>(m: &CMatrix<T>) -> Result<(Vec<T>, CMatrix<T>)> {
    let eig = m
        .clone()
        .try_symmetric_eigen(T::default_epsilon(), 100_000)
        .ok_or(Error::EigenFailure)?;
    let vals = eig.eigenvalues.iter().copied().collect();
    Ok((vals, eig.eigenvectors))
}

pub(crate) fn min_eigenvalue_raw<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if m.nrows() == 0 {
        return Ok(T::zero());
    }
    let (vals, _) = eigen_raw(m)?;
    Ok(vals.into_iter().fold(T::max_value().unwrap(), scalar::min))
}

/// For each flat index, the flat index into the kept and traced subspaces.
fn split_indices(spaces: &SpaceList, traced: &[&str]) -> (Vec<usize>, Vec<usize>) {
    let dims = spaces.dims();
    let st = strides(&dims);
    let is_traced: Vec<bool> = spaces
        .iter()
        .map(|s| traced.contains(&s.label.as_str()))
        .collect();
    let kept_dims: Vec<usize> = dims.iter().zip(&is_traced).filter(|(_, t)| !**t).map(|(d, _)| *d).collect();
    let tr_dims: Vec<usize> = dims.iter().zip(&is_traced).filter(|(_, t)| **t).map(|(d, _)| *d).collect();
    let kst = strides(&kept_dims);
    let tst = strides(&tr_dims);
    let n = spaces.total_dim();
    let mut kept = vec![0; n];
    let mut tr = vec![0; n];
    for idx in 0..n {
        let (mut ki, mut ti, mut kpos, mut tpos) = (0, 0, 0, 0);
        for (f, &d) in dims.iter().enumerate() {
            let digit = (idx / st[f]) % d;
            if is_traced[f] {
                ti += digit * tst[tpos];
                tpos += 1;
            } else {
                ki += digit * kst[kpos];
                kpos += 1;
            }
        }
        kept[idx] = ki;
        tr[idx] = ti;
    }
    (kept, tr)
}

pub(crate) fn partial_trace_raw<T: Real>(m: &CMatrix<T>, spaces: &SpaceList, traced: &[&str]) -> CMatrix<T> {
    let (kept, tr) = split_indices(spaces, traced);
    let kept_dim = spaces.without(traced).total_dim();
    let tr_dim = spaces.retain(traced).total_dim();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); tr_dim];
    for (idx, t) in tr.iter().enumerate() {
        groups[*t].push(idx);
    }
    let mut out = DMatrix::zeros(kept_dim, kept_dim);
    for g in &groups {
        for &i in g {
            for &j in g {
                out[(kept[i], kept[j])] += m[(i, j)];
            }
        }
    }
    out
}

/// Index map taking flat indices in `from` to flat indices in `to`.
pub(crate) fn permutation_map(from: &SpaceList, to: &SpaceList) -> Vec<usize> {
    let dims = from.dims();
    let st = strides(&dims);
    let tst = strides(&to.dims());
    let pos_in_to: Vec<usize> = from
        .iter()
        .map(|s| to.position(&s.label).expect("same label set"))
        .collect();
    (0..from.total_dim())
        .map(|idx| {
            dims.iter()
                .enumerate()
                .map(|(f, &d)| ((idx / st[f]) % d) * tst[pos_in_to[f]])
                .sum()
        })
        .collect()
}

pub(crate) fn permute_raw<T: Real>(m: &CMatrix<T>, from: &SpaceList, to: &SpaceList) -> CMatrix<T> {
    let p = permutation_map(from, to);
    let d = m.nrows();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(p[i], p[j])] = m[(i, j)];
        }
    }
    out
}
