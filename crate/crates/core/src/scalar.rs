//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All operator algebra, the SDP engine and the certificate constructions are
//! written against [`Real`], which is implemented for `f32` and `f64`. The
//! crate root exposes `f64` aliases for everyday use.

use nalgebra::{Complex, DMatrix, RealField};
use num_traits::ToPrimitive;

/// Real field usable as the base of the complex operator algebra.
pub trait Real: RealField + Copy + ToPrimitive {
    /// Converts an `f64` literal into this precision.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Widens to `f64` (used for reporting and serialization).
    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// An absolute tolerance that is meaningful at this precision: the
    /// requested value, floored at a small multiple of machine epsilon.
    #[inline]
    fn tol(requested: f64) -> Self {
        let floor = Self::default_epsilon() * Self::lit(1.0e3);
        let req = Self::lit(requested);
        if req > floor {
            req
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type Cx<T> = Complex<T>;

/// Dense complex matrix over `T`.
pub type CMatrix<T> = DMatrix<Complex<T>>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Absolute value without the `Signed`/`ComplexField` method ambiguity.
#[inline]
pub(crate) fn abs<T: Real>(x: T) -> T {
    if x < T::zero() {
        -x
    } else {
        x
    }
}

#[inline]
pub(crate) fn max<T: Real>(a: T, b: T) -> T {
    if a > b {
        a
    } else {
        b
    }
}

#[inline]
pub(crate) fn min<T: Real>(a: T, b: T) -> T {
    if a < b {
        a
    } else {
        b
    }
}

/// Modulus of a complex number.
#[inline]
pub(crate) fn modulus<T: Real>(z: Cx<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Largest entrywise modulus of a matrix.
pub(crate) fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| max(acc, modulus(*z)))
}

/// Frobenius norm of a matrix.
pub(crate) fn frobenius<T: Real>(m: &CMatrix<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
        .sqrt()
}

/// `(m + m†)/2`.
pub(crate) fn hermitian_part<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = T::lit(0.5);
    let adj = m.adjoint();
    (m + adj).map(|z| z * half)
}
