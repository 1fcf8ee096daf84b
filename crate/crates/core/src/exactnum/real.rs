use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{ceil_to_grid, floor_to_grid, EnclosureError, Rational};

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealEnclosure {
    lo: Rational,
    hi: Rational,
}

impl RealEnclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, EnclosureError> {
        if lo > hi {
            return Err(EnclosureError::InvertedBounds { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub(crate) fn new_unchecked(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn one() -> Self {
        Self::point(Rational::one())
    }

    /// Symmetric interval `[-r, r]`. Requires `r >= 0`.
    pub fn symmetric(r: Rational) -> Self {
        assert!(!r.is_negative());
        Self::new_unchecked(-r.clone(), r)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// `true` when `other` lies entirely inside `self`.
    pub fn contains_enclosure(&self, other: &RealEnclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RealEnclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &RealEnclosure) -> RealEnclosure {
        Self::new_unchecked(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    /// `sup |x|` over the interval.
    pub fn abs_sup(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    /// `inf |x|` over the interval; zero when the interval straddles zero.
    pub fn abs_inf(&self) -> Rational {
        if self.contains_zero() {
            Rational::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> RealEnclosure {
        Self::new_unchecked(self.abs_inf(), self.abs_sup())
    }

    pub fn scale(&self, c: &Rational) -> RealEnclosure {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Self::new_unchecked(b, a)
        } else {
            Self::new_unchecked(a, b)
        }
    }

    /// Squaring that knows both factors are the same quantity, so `[-1,1]^2 = [0,1]`.
    pub fn square(&self) -> RealEnclosure {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Self::new_unchecked(Rational::zero(), a.max(b))
        } else if a <= b {
            Self::new_unchecked(a, b)
        } else {
            Self::new_unchecked(b, a)
        }
    }

    /// Integer power with the tight monotone formula per parity.
    pub fn powi(&self, e: u32) -> RealEnclosure {
        if e == 0 {
            return Self::one();
        }
        let lo_e = num_traits::pow(self.lo.clone(), e as usize);
        let hi_e = num_traits::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 {
            return Self::new_unchecked(lo_e, hi_e);
        }
        if self.contains_zero() {
            Self::new_unchecked(Rational::zero(), lo_e.max(hi_e))
        } else if lo_e <= hi_e {
            Self::new_unchecked(lo_e, hi_e)
        } else {
            Self::new_unchecked(hi_e, lo_e)
        }
    }

    pub fn recip(&self) -> Result<RealEnclosure, EnclosureError> {
        if self.contains_zero() {
            return Err(EnclosureError::DivisorContainsZero);
        }
        Ok(Self::new_unchecked(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &RealEnclosure) -> Result<RealEnclosure, EnclosureError> {
        Ok(self * &other.recip()?)
    }

    /// Widen both endpoints by `r >= 0`.
    pub fn inflate(&self, r: &Rational) -> RealEnclosure {
        Self::new_unchecked(&self.lo - r, &self.hi + r)
    }

    /// Round endpoints outward onto the `2^-bits` grid.
    pub fn round_out(&self, bits: u32) -> RealEnclosure {
        Self::new_unchecked(floor_to_grid(&self.lo, bits), ceil_to_grid(&self.hi, bits))
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<Rational> for RealEnclosure {
    fn from(x: Rational) -> Self {
        Self::point(x)
    }
}

impl Neg for &RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        RealEnclosure::new_unchecked(-self.hi.clone(), -self.lo.clone())
    }
}

impl Add for &RealEnclosure {
    type Output = RealEnclosure;
    fn add(self, rhs: &RealEnclosure) -> RealEnclosure {
        RealEnclosure::new_unchecked(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &RealEnclosure {
    type Output = RealEnclosure;
    fn sub(self, rhs: &RealEnclosure) -> RealEnclosure {
        RealEnclosure::new_unchecked(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Mul for &RealEnclosure {
    type Output = RealEnclosure;
    fn mul(self, rhs: &RealEnclosure) -> RealEnclosure {
        if self.is_point() {
            return rhs.scale(&self.lo);
        }
        if rhs.is_point() {
            return self.scale(&rhs.lo);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        RealEnclosure::new_unchecked(lo, hi)
    }
}

macro_rules! forward_owned_binop {
    ($ty:ty, $tr:ident, $m:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty {
                (&self).$m(rhs)
            }
        }
    };
}
pub(crate) use forward_owned_binop;

forward_owned_binop!(RealEnclosure, Add, add);
forward_owned_binop!(RealEnclosure, Sub, sub);
forward_owned_binop!(RealEnclosure, Mul, mul);

impl Neg for RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        -&self
    }
}
