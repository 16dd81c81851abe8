//! Sparse Hermitian coefficient matrices and the orthonormal Hermitian basis.

use nalgebra::DMatrix;

use crate::scalar::{self, CMatrix, Cx, Real};
use crate::spaces::{strides, SpaceList};

/// Hermitian matrix stored as `(row, col, value)` triplets; both triangles
/// are present.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitian<T: Real> {
    pub dim: usize,
    pub entries: Vec<(usize, usize, Cx<T>)>,
}

impl<T: Real> SparseHermitian<T> {
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn from_dense(m: &CMatrix<T>) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if z.re != T::zero() || z.im != T::zero() {
                    entries.push((i, j, z));
                }
            }
        }
        Self {
            dim: m.nrows(),
            entries,
        }
    }

    pub fn to_dense(&self) -> CMatrix<T> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        self.add_to(&mut m, T::one());
        m
    }

    /// `m += s · self`.
    pub fn add_to(&self, m: &mut CMatrix<T>, s: T) {
        for &(a, b, v) in &self.entries {
            m[(a, b)] += v * s;
        }
    }

    /// `Re Tr(self · x)`.
    pub fn inner(&self, x: &CMatrix<T>) -> T {
        self.entries.iter().fold(T::zero(), |acc, &(a, b, v)| {
            let w = x[(b, a)];
            acc + v.re * w.re - v.im * w.im
        })
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(a, b, v)| (a, b, v * s)).collect(),
        }
    }

    /// Merges duplicate positions and drops zeros.
    pub(crate) fn compress(mut self) -> Self {
        self.entries.sort_by_key(|&(a, b, _)| (a, b));
        let mut out: Vec<(usize, usize, Cx<T>)> = Vec::with_capacity(self.entries.len());
        for (a, b, v) in self.entries {
            match out.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += v,
                _ => out.push((a, b, v)),
            }
        }
        out.retain(|e| e.2.re != T::zero() || e.2.im != T::zero());
        Self {
            dim: self.dim,
            entries: out,
        }
    }
}

/// Orthonormal basis of Hermitian `d×d` matrices under `⟨A,B⟩ = Tr(AB)`:
/// `E_aa`, `(E_ab+E_ba)/√2` and `i(E_ab−E_ba)/√2` for `a < b`.
pub fn hermitian_basis<T: Real>(d: usize) -> Vec<SparseHermitian<T>> {
    let h = T::one() / T::lit(2.0).sqrt();
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in a..d {
            if a == b {
                out.push(SparseHermitian {
                    dim: d,
                    entries: vec![(a, a, scalar::re(T::one()))],
                });
            } else {
                out.push(SparseHermitian {
                    dim: d,
                    entries: vec![(a, b, scalar::re(h)), (b, a, scalar::re(h))],
                });
                out.push(SparseHermitian {
                    dim: d,
                    entries: vec![(a, b, scalar::cx(T::zero(), h)), (b, a, scalar::cx(T::zero(), -h))],
                });
            }
        }
    }
    out
}

/// Coordinates of a Hermitian matrix in [`hermitian_basis`].
pub fn basis_coordinates<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    hermitian_basis::<T>(m.nrows()).iter().map(|b| b.inner(m)).collect()
}

/// Inverse of [`basis_coordinates`].
pub fn from_basis_coordinates<T: Real>(d: usize, y: &[T]) -> CMatrix<T> {
    let mut m = DMatrix::zeros(d, d);
    for (b, c) in hermitian_basis::<T>(d).iter().zip(y) {
        b.add_to(&mut m, *c);
    }
    m
}

/// Maps flat indices of `sub` (a subset of `full`'s factors) and of the
/// complement to flat indices of `full`: `map[s][c]`.
pub(crate) fn embedding_map(sub: &SpaceList, full: &SpaceList) -> Vec<Vec<usize>> {
    let rest = full.without(&sub.labels());
    let fdims = full.dims();
    let fst = strides(&fdims);
    let sdims = sub.dims();
    let sst = strides(&sdims);
    let rdims = rest.dims();
    let rst = strides(&rdims);
    let sub_pos: Vec<usize> = sub.iter().map(|s| full.position(&s.label).unwrap()).collect();
    let rest_pos: Vec<usize> = rest.iter().map(|s| full.position(&s.label).unwrap()).collect();
    (0..sub.total_dim())
        .map(|s| {
            let base: usize = sdims
                .iter()
                .enumerate()
                .map(|(f, &d)| ((s / sst[f]) % d) * fst[sub_pos[f]])
                .sum();
            (0..rest.total_dim())
                .map(|c| {
                    base + rdims
                        .iter()
                        .enumerate()
                        .map(|(f, &d)| ((c / rst[f]) % d) * fst[rest_pos[f]])
                        .sum::<usize>()
                })
                .collect()
        })
        .collect()
}

/// `m ⊗ I` on the remaining factors of `full`, in `full`'s order.
pub(crate) fn embed_sparse<T: Real>(m: &SparseHermitian<T>, sub: &SpaceList, full: &SpaceList) -> SparseHermitian<T> {
    let map = embedding_map(sub, full);
    let reps = full.total_dim() / sub.total_dim();
    let mut entries = Vec::with_capacity(m.nnz() * reps);
    for &(a, b, v) in &m.entries {
        for c in 0..reps {
            entries.push((map[a][c], map[b][c], v));
        }
    }
    SparseHermitian {
        dim: full.total_dim(),
        entries,
    }
}

/// Partial trace of `m` (on `full`) down to `kept`.
pub(crate) fn trace_sparse<T: Real>(m: &SparseHermitian<T>, full: &SpaceList, kept: &SpaceList) -> SparseHermitian<T> {
    let map = embedding_map(kept, full);
    let mut inv = vec![(0usize, 0usize); full.total_dim()];
    for (s, row) in map.iter().enumerate() {
        for (c, &f) in row.iter().enumerate() {
            inv[f] = (s, c);
        }
    }
    let mut entries = Vec::new();
    for &(a, b, v) in &m.entries {
        let (sa, ca) = inv[a];
        let (sb, cb) = inv[b];
        if ca == cb {
            entries.push((sa, sb, v));
        }
    }
    SparseHermitian {
        dim: kept.total_dim(),
        entries,
    }
    .compress()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HermitianOperator;

    #[test]
    fn basis_is_orthonormal() {
        let basis = hermitian_basis::<f64>(3);
        assert_eq!(basis.len(), 9);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let ip = a.inner(&b.to_dense());
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let m = HermitianOperator::<f64>::from_fn(SpaceList::single("A", 3).unwrap(), |i, j| {
            nalgebra::Complex::new((i + 2 * j) as f64, i as f64 - j as f64)
        });
        // not Hermitian: imaginary part antisymmetric but real part not symmetric
        assert!(m.is_err());
        let m = DMatrix::from_fn(3, 3, |i: usize, j: usize| {
            nalgebra::Complex::new((i + j) as f64, i as f64 - j as f64)
        });
        let back = from_basis_coordinates(3, &basis_coordinates(&m));
        assert!(scalar::max_abs(&(back - &m)) < 1e-14);
    }

    #[test]
    fn sparse_embed_and_trace_match_dense() {
        let full = SpaceList::new([("A", 2), ("B", 3), ("C", 2)]).unwrap();
        let sub = SpaceList::new([("A", 2), ("C", 2)]).unwrap();
        let basis = hermitian_basis::<f64>(4);
        for b in &basis {
            let dense = HermitianOperator::new(sub.clone(), b.to_dense()).unwrap();
            let e = dense.embed(&full).unwrap();
            assert!(scalar::max_abs(&(embed_sparse(b, &sub, &full).to_dense() - e.matrix())) < 1e-15);
            let t = e.reduce_to(&["A", "C"]).unwrap();
            let ts = trace_sparse(&embed_sparse(b, &sub, &full), &full, &sub);
            assert!(scalar::max_abs(&(ts.to_dense() - t.matrix())) < 1e-14);
        }
    }
}
