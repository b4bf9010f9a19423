//! Scalar abstractions.
//!
//! Two layers of traits are used throughout the crate:
//!
//! * [`Scalar`] is a field: the four operations, negation and exact
//!   conversion from machine numbers. Coefficient construction and the
//!   three-term recurrence only need this, so they also run over exact
//!   rationals.
//! * [`Real`] adds ordering and the transcendental functions needed for
//!   root finding, curve tracing and quadrature. It is implemented for
//!   `f64` and for the multiprecision [`Ap`].

mod ap;

pub use ap::{with_precision, working_precision, Ap, Precision};

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{FromPrimitive, Num};

/// A field with exact conversions from machine integers and floats.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync {}

impl<T> Scalar for T where T: Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync {}

/// An ordered real scalar with the elementary transcendental functions.
///
/// Values created without an explicit precision (constants, `from_f64`,
/// `zero()`) take the precision of the current thread's working context
/// (see [`with_precision`]); `f64` ignores the context.
pub trait Real: Scalar + PartialOrd + Display {
    /// Significand bits of this value.
    fn precision_bits(&self) -> u32;
    /// Unit roundoff at the current working precision.
    fn epsilon() -> Self;
    fn pi() -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn hypot(&self, other: &Self) -> Self;
    fn gamma(&self) -> Self;
    fn floor(&self) -> Self;
    fn is_finite(&self) -> bool;
    /// Integer value of an integral scalar (after `floor`), saturating.
    fn to_i64(&self) -> i64;
    /// Decimal scientific notation with `digits` significant digits.
    fn to_decimal(&self, digits: usize) -> String;

    fn powi(&self, k: i32) -> Self {
        let mut base = if k < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    fn powf(&self, e: &Self) -> Self {
        (self.ln() * e.clone()).exp()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Machine constant in the working precision.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

/// Exact rational constant `num/den` in the working precision.
#[inline]
pub fn ratio<T: Scalar>(num: i64, den: i64) -> T {
    T::from_i64(num).expect("integer") / T::from_i64(den).expect("integer")
}

impl Real for f64 {
    fn precision_bits(&self) -> u32 {
        f64::MANTISSA_DIGITS
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn hypot(&self, other: &Self) -> Self {
        f64::hypot(*self, *other)
    }
    fn gamma(&self) -> Self {
        libm::tgamma(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_i64(&self) -> i64 {
        *self as i64
    }
    fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.clamp(1, 17);
        format!("{:.*e}", digits - 1, self)
    }
}

/// Modulus of a complex number without intermediate overflow.
pub fn cabs<T: Real>(z: &Complex<T>) -> T {
    z.re.hypot(&z.im)
}

/// Principal argument in `(-pi, pi]`.
pub fn carg<T: Real>(z: &Complex<T>) -> T {
    z.im.atan2(&z.re)
}

pub fn cexp<T: Real>(z: &Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    Complex::new(m.clone() * z.im.cos(), m * z.im.sin())
}

/// Principal logarithm.
pub fn cln<T: Real>(z: &Complex<T>) -> Complex<T> {
    Complex::new(cabs(z).ln(), carg(z))
}

/// Principal square root.
pub fn csqrt<T: Real>(z: &Complex<T>) -> Complex<T> {
    let m = cabs(z);
    if m == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let half = lit::<T>(0.5);
    let re = ((m.clone() + z.re.clone()) * half.clone()).sqrt();
    let im = ((m - z.re.clone()) * half).sqrt();
    if z.im < T::zero() {
        Complex::new(re, -im)
    } else {
        Complex::new(re, im)
    }
}

/// `ln(1 + u) - u`, accurate for small `|u|` where the direct form cancels.
pub fn log1p_minus_id<T: Real>(u: &Complex<T>) -> Complex<T> {
    if cabs(u) > lit::<T>(0.25) {
        return cln(&(Complex::new(T::one(), T::zero()) + u.clone())) - u.clone();
    }
    // -u^2/2 + u^3/3 - u^4/4 + ...
    let eps = T::epsilon();
    let mut power = u.clone() * u.clone();
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut k: i64 = 2;
    loop {
        let sign = if k % 2 == 0 { -T::one() } else { T::one() };
        let term = power.clone() * (sign / T::from_i64(k).unwrap());
        sum = sum + term.clone();
        if cabs(&term) <= eps.clone() * cabs(&sum) || k > 4096 {
            break;
        }
        power = power * u.clone();
        k += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log1p_minus_id_matches_direct_form_away_from_zero() {
        for &(re, im) in &[(0.1, 0.05), (-0.2, 0.1), (0.5, -0.3), (0.01, 0.0)] {
            let u = Complex::new(re, im);
            let direct = cln(&(Complex::new(1.0, 0.0) + u)) - u;
            let series = log1p_minus_id(&u);
            assert!((direct - series).norm() < 1e-15, "{u}");
        }
    }

    #[test]
    fn log1p_minus_id_keeps_relative_accuracy_near_zero() {
        let u = Complex::new(1e-9, 2e-9);
        let v = log1p_minus_id(&u);
        let lead = -(u * u) / 2.0;
        assert!(((v - lead) / lead).norm() < 1e-8);
    }

    #[test]
    fn csqrt_principal_branch() {
        let z = csqrt(&Complex::new(-4.0, 0.0));
        assert!((z - Complex::new(0.0, 2.0)).norm() < 1e-15);
        let z = csqrt(&Complex::new(0.0, -2.0));
        assert!((z - Complex::new(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn powi_handles_negative_exponents() {
        assert_eq!(2.0f64.powi(10), 1024.0);
        assert_eq!(Real::powi(&2.0f64, -2), 0.25);
    }
}
