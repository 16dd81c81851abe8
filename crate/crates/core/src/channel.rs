//! Quantum channels in Kraus form.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::operator::{check_cap, permute_raw, DensityOperator, HermitianOperator};
use crate::scalar::{self, CMatrix, Real};
use crate::spaces::SpaceList;

/// Trace-preserving completely positive map `Φ(ρ) = Σ K ρ K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel<T: Real> {
    input: SpaceList,
    output: SpaceList,
    kraus: Vec<CMatrix<T>>,
}

const TP_TOL: f64 = 1e-10;

impl<T: Real> KrausChannel<T> {
    pub fn new(input: SpaceList, output: SpaceList, kraus: Vec<CMatrix<T>>) -> Result<Self> {
        let (din, dout) = (input.total_dim(), output.total_dim());
        if kraus.is_empty() {
            return Err(Error::DimensionMismatch("channel has no Kraus operators".into()));
        }
        for k in &kraus {
            if k.nrows() != dout || k.ncols() != din {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, expected {dout}x{din}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        let mut sum = DMatrix::zeros(din, din);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let deviation = scalar::max_abs(&(sum - CMatrix::<T>::identity(din, din)));
        if deviation > T::tol(TP_TOL) {
            return Err(Error::NotTracePreserving {
                deviation: deviation.as_f64(),
            });
        }
        Ok(Self { input, output, kraus })
    }

    /// The identity map between two spaces of equal total dimension.
    pub fn identity(input: SpaceList, output: SpaceList) -> Result<Self> {
        let d = input.total_dim();
        if output.total_dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "identity channel from {input} to {output}"
            )));
        }
        Self::new(input, output, vec![CMatrix::identity(d, d)])
    }

    pub fn unitary(input: SpaceList, output: SpaceList, u: CMatrix<T>) -> Result<Self> {
        Self::new(input, output, vec![u])
    }

    /// Completely dephasing channel on `spaces`.
    pub fn dephasing(spaces: SpaceList) -> Self {
        let d = spaces.total_dim();
        let kraus = (0..d)
            .map(|i| {
                let mut k = DMatrix::zeros(d, d);
                k[(i, i)] = Complex::new(T::one(), T::zero());
                k
            })
            .collect();
        Self {
            input: spaces.clone(),
            output: spaces,
            kraus,
        }
    }

    /// `self ⊗ other`, inputs and outputs concatenated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let input = self.input.concat(&other.input)?;
        let output = self.output.concat(&other.output)?;
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.kronecker(b));
            }
        }
        Ok(Self { input, output, kraus })
    }

    pub fn input_spaces(&self) -> &SpaceList {
        &self.input
    }

    pub fn output_spaces(&self) -> &SpaceList {
        &self.output
    }

    pub fn kraus(&self) -> &[CMatrix<T>] {
        &self.kraus
    }

    /// Choi operator `Σ Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|` on output ⊗ input. Input labels
    /// that clash with an output label get a trailing `'`.
    pub fn choi(&self) -> HermitianOperator<T> {
        let (din, dout) = (self.input.total_dim(), self.output.total_dim());
        let d = din * dout;
        let mut j = DMatrix::zeros(d, d);
        for k in &self.kraus {
            // vec(K)[(y, i)] = K[y, i]; J = Σ vec(K) vec(K)†
            let v: Vec<Complex<T>> = (0..d).map(|idx| k[(idx / din, idx % din)]).collect();
            for a in 0..d {
                if v[a] == Complex::new(T::zero(), T::zero()) {
                    continue;
                }
                for b in 0..d {
                    j[(a, b)] += v[a] * v[b].conj();
                }
            }
        }
        let input = self
            .input
            .relabeled(|l| {
                if self.output.contains(l) {
                    format!("{l}'")
                } else {
                    l.to_string()
                }
            })
            .expect("relabeling keeps labels distinct");
        let spaces = self
            .output
            .concat(&input)
            .expect("clashing labels were renamed");
        HermitianOperator::from_parts(spaces, j)
    }

    /// `(Φ ⊗ 1)(rho)` where `acted` names, in order, the factors of `rho`
    /// matched to this channel's input spaces. When input and output have the
    /// same number of factors the outputs take the acted positions; otherwise
    /// they are inserted where the first acted factor was.
    pub fn apply(&self, rho: &HermitianOperator<T>, acted: &[&str]) -> Result<HermitianOperator<T>> {
        if acted.len() != self.input.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} acted spaces for a channel with {} inputs",
                acted.len(),
                self.input.len()
            )));
        }
        for (l, s) in acted.iter().zip(self.input.iter()) {
            let d = rho.spaces().dim_of(l)?;
            if d != s.dim {
                return Err(Error::DimensionMismatch(format!(
                    "space `{l}` has dimension {d}, channel input `{}` has {}",
                    s.label, s.dim
                )));
            }
        }
        let rest = rho.spaces().without(acted);
        let mut front: Vec<&str> = acted.to_vec();
        front.extend(rest.labels());
        let r = rho.permute(&front)?;
        let out_front = self.output.concat(&rest)?;
        check_cap(out_front.total_dim())?;
        let drest = rest.total_dim();
        let id = CMatrix::<T>::identity(drest, drest);
        let dout = out_front.total_dim();
        let mut acc = DMatrix::zeros(dout, dout);
        for k in &self.kraus {
            let kk = k.kronecker(&id);
            acc += &kk * r.matrix() * kk.adjoint();
        }
        // place the outputs back among the untouched factors
        let mut order: Vec<String> = Vec::new();
        let outs: Vec<String> = self.output.labels().iter().map(|s| s.to_string()).collect();
        let same_count = outs.len() == acted.len();
        let mut first = true;
        for s in rho.spaces().iter() {
            if let Some(p) = acted.iter().position(|a| *a == s.label) {
                if same_count {
                    order.push(outs[p].clone());
                } else if first {
                    order.extend(outs.iter().cloned());
                }
                first = false;
            } else {
                order.push(s.label.clone());
            }
        }
        if !same_count && first {
            order.extend(outs.iter().cloned());
        }
        let order_refs: Vec<&str> = order.iter().map(String::as_str).collect();
        let target = out_front.reordered(&order_refs)?;
        Ok(HermitianOperator::from_parts(
            target.clone(),
            permute_raw(&acc, &out_front, &target),
        ))
    }
}

pub fn choi<T: Real>(ch: &KrausChannel<T>) -> HermitianOperator<T> {
    ch.choi()
}

pub fn apply_channel<T: Real>(
    ch: &KrausChannel<T>,
    rho: &DensityOperator<T>,
    acted: &[&str],
) -> Result<DensityOperator<T>> {
    DensityOperator::new(ch.apply(rho, acted)?)
}
