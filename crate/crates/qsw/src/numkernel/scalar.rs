use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use num_complex::Complex64 as C64;

/// The two element types the dense kernels run on.
pub(crate) trait Scalar:
    Copy
    + Default
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
    + SubAssign
{
    fn conj(self) -> Self;
    fn abs_sqr(self) -> f64;
    fn from_re(x: f64) -> Self;
    fn to_c64(self) -> C64;
    /// `x/|x|`, or one for zero.
    fn phase(self) -> Self;
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn abs_sqr(self) -> f64 {
        self * self
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
    fn phase(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

impl Scalar for C64 {
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn from_re(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    fn to_c64(self) -> C64 {
        self
    }
    fn phase(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            self / r
        }
    }
}
