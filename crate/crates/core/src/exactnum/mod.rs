//! Exact rational arithmetic and guaranteed rectangle enclosures.
//!
//! Every enclosure carries exact rational endpoints. Arithmetic on endpoints is
//! exact; callers that iterate (series evaluation, Taylor sums) round endpoints
//! outward onto a dyadic grid with [`RealEnclosure::round_out`] to keep the
//! numerators from growing without bound. Outward rounding only ever widens an
//! enclosure, so containment is preserved.

mod algebraic;
mod complex;
mod constants;
mod dyadic;
mod real;

pub use algebraic::{point_enclosure, AlgebraicPoint, Base, PointForm, QuadraticNumber};
pub use complex::ComplexEnclosure;
pub use constants::{enclose_pi, enclose_sqrt3, exp_enclosure, exp_enclosure_rounded};
pub use real::RealEnclosure;

pub(crate) use dyadic::DyadicRect;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnclosureError {
    #[error("lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvertedBounds { lo: Rational, hi: Rational },
    #[error("divisor enclosure contains zero")]
    DivisorContainsZero,
    #[error("Taylor remainder diverges: sup|z| = {sup_abs} is not below terms + 2 = {limit}")]
    RemainderDiverges { sup_abs: Rational, limit: u64 },
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// Largest multiple of `2^-bits` that is `<= x`.
pub fn floor_to_grid(x: &Rational, bits: u32) -> Rational {
    if x.denom().is_one() {
        return x.clone();
    }
    let scale = pow2(bits);
    let scaled = x.numer() * &scale;
    Rational::new(scaled.div_floor(x.denom()), scale)
}

/// Smallest multiple of `2^-bits` that is `>= x`.
pub fn ceil_to_grid(x: &Rational, bits: u32) -> Rational {
    if x.denom().is_one() {
        return x.clone();
    }
    let scale = pow2(bits);
    let scaled = x.numer() * &scale;
    Rational::new(scaled.div_ceil(x.denom()), scale)
}

/// A rational `s` on the `2^-bits` grid with `s <= sqrt(x)`. Requires `x >= 0`.
pub fn sqrt_lower(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of negative rational");
    let scale = pow2(bits);
    let n = (x * Rational::from_integer(&scale * &scale)).floor().to_integer();
    Rational::new(n.sqrt(), scale)
}

/// A rational `s` on the `2^-bits` grid with `s >= sqrt(x)`. Requires `x >= 0`.
pub fn sqrt_upper(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of negative rational");
    let scale = pow2(bits);
    let n = (x * Rational::from_integer(&scale * &scale)).ceil().to_integer();
    let mut r = n.sqrt();
    if &r * &r < n {
        r += 1;
    }
    Rational::new(r, scale)
}

/// Decimal rendering of a rational, truncated toward zero after `digits`
/// fractional digits. Used for display only.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (a.numer() * &scale) / a.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits));
    }
    s
}

/// Decimal rendering rounded toward −∞ (`floor = true`) or +∞, so that a
/// displayed `[lo, hi]` still brackets the exact endpoints.
pub fn to_decimal_directed(x: &Rational, digits: usize, floor: bool) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = x.numer() * &scale;
    let q = if floor {
        scaled.div_floor(x.denom())
    } else {
        -(-scaled).div_floor(x.denom())
    };
    to_decimal(&Rational::new(q, scale), digits)
}

/// Lossy conversion for diagnostics and non-rigorous comparisons.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
