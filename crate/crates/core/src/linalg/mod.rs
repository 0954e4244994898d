//! Sparse storage and a symmetric/Hermitian envelope factorization.

mod envelope;
mod ordering;
mod sparse;

pub use envelope::EnvelopeLdl;
pub use ordering::reverse_cuthill_mckee;
pub use sparse::{CsrMatrix, TripletBuilder};

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};

/// Vector entries: `f64` and `Complex64`.
pub trait Field:
    Copy
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + AddAssign
    + SubAssign
    + Mul<f64, Output = Self>
    + std::fmt::Debug
    + 'static
{
    fn zero() -> Self;
    fn abs_sq(self) -> f64;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn abs_sq(self) -> f64 {
        self * self
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
}

/// Matrix entries.
pub trait Scalar: Field + Mul<Self, Output = Self> + Div<Self, Output = Self> + PartialEq {
    fn conj(self) -> Self;
    fn from_real(x: f64) -> Self;
    fn re(self) -> f64;
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn re(self) -> f64 {
        self
    }
}

impl Scalar for Complex64 {
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
}

/// A vector type that a matrix with entries `S` can act on.
pub trait Acts<S>: Field + Mul<S, Output = Self> {}
impl Acts<f64> for f64 {}
impl Acts<f64> for Complex64 {}
impl Acts<Complex64> for Complex64 {}
