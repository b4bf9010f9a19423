use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, Zero};
use rug::float::Constant;
use rug::Float;

use super::Real;
use crate::error::{Error, Result};

/// Working precision in significand bits; never below 64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Config(format!(
                "precision of {bits} bits is below the minimum of {} bits",
                Self::MIN_BITS
            )));
        }
        Ok(Precision(bits))
    }

    /// `max(128, ceil(3.5 n))`: the coefficients of `L_n(nz)` span roughly
    /// `e^n` and the root finder needs headroom beyond that.
    pub fn for_degree(n: usize) -> Self {
        let bits = (7 * n as u64).div_ceil(2).max(128);
        Precision(bits.min(u32::MAX as u64) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Number of decimal digits used when serializing at this precision.
    pub fn decimal_digits(self) -> usize {
        (self.0 as f64 * 0.301).ceil() as usize + 2
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(128)
    }
}

thread_local! {
    static WORKING: Cell<u32> = const { Cell::new(128) };
}

/// Precision used for values created on this thread without an explicit
/// precision.
pub fn working_precision() -> Precision {
    Precision(WORKING.with(Cell::get))
}

struct Restore(u32);

impl Drop for Restore {
    fn drop(&mut self) {
        WORKING.with(|w| w.set(self.0));
    }
}

/// Runs `f` with `prec` as the thread's working precision.
pub fn with_precision<R>(prec: Precision, f: impl FnOnce() -> R) -> R {
    let _restore = Restore(WORKING.with(|w| w.replace(prec.0)));
    f()
}

/// Arbitrary-precision real backed by MPFR.
///
/// Binary operations round to the larger of the two operand precisions.
#[derive(Clone, Debug)]
pub struct Ap(Float);

impl Ap {
    pub fn with_prec(x: f64, prec: Precision) -> Self {
        Ap(Float::with_val(prec.0, x))
    }

    pub fn from_i64_prec(x: i64, prec: Precision) -> Self {
        Ap(Float::with_val(prec.0, x))
    }

    /// Parses a decimal literal, rounding once at `prec`.
    pub fn parse(s: &str, prec: Precision) -> Result<Self> {
        let parsed = Float::parse(s.trim())
            .map_err(|e| Error::InvalidParameter(format!("cannot parse `{s}` as a number: {e}")))?;
        let v = Float::with_val(prec.0, parsed);
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("`{s}` is not finite")));
        }
        Ok(Ap(v))
    }

    /// The same value rounded (or zero-extended) to `prec`.
    pub fn at(&self, prec: Precision) -> Self {
        Ap(Float::with_val(prec.0, &self.0))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }
}

impl From<Float> for Ap {
    fn from(f: Float) -> Self {
        Ap(f)
    }
}

fn wp() -> u32 {
    WORKING.with(Cell::get)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, $op:tt) => {
        impl $tr<Ap> for Ap {
            type Output = Ap;
            fn $m(self, rhs: Ap) -> Ap {
                let p = self.0.prec().max(rhs.0.prec());
                Ap(Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl<'a> $tr<&'a Ap> for Ap {
            type Output = Ap;
            fn $m(self, rhs: &'a Ap) -> Ap {
                let p = self.0.prec().max(rhs.0.prec());
                Ap(Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Ap> for &'a Ap {
            type Output = Ap;
            fn $m(self, rhs: &'b Ap) -> Ap {
                let p = self.0.prec().max(rhs.0.prec());
                Ap(Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl $atr<Ap> for Ap {
            fn $am(&mut self, rhs: Ap) {
                let p = self.0.prec().max(rhs.0.prec());
                self.0 = Float::with_val(p, &self.0 $op &rhs.0);
            }
        }
        impl<'a> $atr<&'a Ap> for Ap {
            fn $am(&mut self, rhs: &'a Ap) {
                let p = self.0.prec().max(rhs.0.prec());
                self.0 = Float::with_val(p, &self.0 $op &rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);
binop!(Mul, mul, MulAssign, mul_assign, *);
binop!(Div, div, DivAssign, div_assign, /);

impl Rem for Ap {
    type Output = Ap;
    fn rem(self, rhs: Ap) -> Ap {
        let p = self.0.prec().max(rhs.0.prec());
        let q = Float::with_val(p, &self.0 / &rhs.0).trunc();
        Ap(Float::with_val(p, &self.0 - &(q * &rhs.0)))
    }
}

impl Neg for Ap {
    type Output = Ap;
    fn neg(self) -> Ap {
        Ap(-self.0)
    }
}

impl Neg for &Ap {
    type Output = Ap;
    fn neg(self) -> Ap {
        Ap(Float::with_val(self.0.prec(), -&self.0))
    }
}

impl PartialEq for Ap {
    fn eq(&self, other: &Ap) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Ap {
    fn partial_cmp(&self, other: &Ap) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Zero for Ap {
    fn zero() -> Ap {
        Ap(Float::with_val(wp(), 0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Ap {
    fn one() -> Ap {
        Ap(Float::with_val(wp(), 1))
    }
}

impl Num for Ap {
    type FromStrRadixErr = Error;
    fn from_str_radix(s: &str, radix: u32) -> Result<Ap> {
        let parsed = Float::parse_radix(s.trim(), radix as i32)
            .map_err(|e| Error::InvalidParameter(format!("cannot parse `{s}`: {e}")))?;
        Ok(Ap(Float::with_val(wp(), parsed)))
    }
}

impl FromPrimitive for Ap {
    fn from_i64(n: i64) -> Option<Ap> {
        Some(Ap(Float::with_val(wp().max(64), n)))
    }
    fn from_u64(n: u64) -> Option<Ap> {
        Some(Ap(Float::with_val(wp().max(64), n)))
    }
    fn from_f64(x: f64) -> Option<Ap> {
        x.is_finite().then(|| Ap(Float::with_val(wp().max(53), x)))
    }
}

impl fmt::Display for Ap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Real for Ap {
    fn precision_bits(&self) -> u32 {
        self.0.prec()
    }
    fn epsilon() -> Ap {
        let p = wp();
        Ap(Float::with_val(p, Float::i_exp(1, 1 - p as i32)))
    }
    fn pi() -> Ap {
        Ap(Float::with_val(wp(), Constant::Pi))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn abs(&self) -> Ap {
        Ap(self.0.clone().abs())
    }
    fn sqrt(&self) -> Ap {
        Ap(self.0.clone().sqrt())
    }
    fn exp(&self) -> Ap {
        Ap(self.0.clone().exp())
    }
    fn ln(&self) -> Ap {
        Ap(self.0.clone().ln())
    }
    fn sin(&self) -> Ap {
        Ap(self.0.clone().sin())
    }
    fn cos(&self) -> Ap {
        Ap(self.0.clone().cos())
    }
    fn atan2(&self, x: &Ap) -> Ap {
        let p = self.0.prec().max(x.0.prec());
        Ap(Float::with_val(p, &self.0).atan2(&x.0))
    }
    fn hypot(&self, other: &Ap) -> Ap {
        let p = self.0.prec().max(other.0.prec());
        Ap(Float::with_val(p, &self.0).hypot(&other.0))
    }
    fn gamma(&self) -> Ap {
        Ap(self.0.clone().gamma())
    }
    fn floor(&self) -> Ap {
        Ap(self.0.clone().floor())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn to_i64(&self) -> i64 {
        let v = self.0.to_f64();
        if v >= i64::MAX as f64 {
            i64::MAX
        } else if v <= i64::MIN as f64 {
            i64::MIN
        } else {
            v as i64
        }
    }
    fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }
}
