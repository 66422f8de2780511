//! Scalar abstraction shared by every routine in the crate.
//!
//! All linear algebra is generic over a real field `T` (in practice `f32` or
//! `f64`); matrices carry `Complex<T>` entries.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar usable by the dense kernels.
///
/// `RealField` supplies the arithmetic nalgebra needs; the num-traits
/// conversions are used for constants and for serialization through `f64`.
pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossless for `f64`, rounding for `f32`.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Unit roundoff of the storage format.
    fn machine_epsilon() -> Self {
        if std::mem::size_of::<Self>() == 4 {
            Self::lit(f32::EPSILON as f64)
        } else {
            Self::lit(f64::EPSILON)
        }
    }

    fn infinity() -> Self {
        Self::lit(f64::INFINITY)
    }

    fn is_finite_value(self) -> bool {
        self.as_f64().is_finite()
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;

pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{iφ}`.
pub(crate) fn cis<T: Real>(phi: T) -> Complex<T> {
    Complex::new(phi.cos(), phi.sin())
}

/// Principal argument in `(-π, π]`; a value numerically at `-π` maps to `π`.
pub fn principal_arg<T: Real>(z: Complex<T>) -> T {
    let a = z.im.atan2(z.re);
    if a <= -T::pi() {
        T::pi()
    } else {
        a
    }
}
