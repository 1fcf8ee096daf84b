use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::real::forward_owned_binop;
use super::{sqrt_lower, sqrt_upper, EnclosureError, Rational, RealEnclosure};

/// Axis-aligned rectangle `re x im` in the complex plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexEnclosure {
    pub re: RealEnclosure,
    pub im: RealEnclosure,
}

impl ComplexEnclosure {
    pub fn new(re: RealEnclosure, im: RealEnclosure) -> Self {
        Self { re, im }
    }

    pub fn point(re: Rational, im: Rational) -> Self {
        Self::new(RealEnclosure::point(re), RealEnclosure::point(im))
    }

    pub fn from_real(re: RealEnclosure) -> Self {
        Self::new(re, RealEnclosure::zero())
    }

    pub fn zero() -> Self {
        Self::from_real(RealEnclosure::zero())
    }

    pub fn one() -> Self {
        Self::from_real(RealEnclosure::one())
    }

    pub fn i() -> Self {
        Self::new(RealEnclosure::zero(), RealEnclosure::one())
    }

    pub fn contains(&self, re: &Rational, im: &Rational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    pub fn intersects(&self, other: &ComplexEnclosure) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn contains_enclosure(&self, other: &ComplexEnclosure) -> bool {
        self.re.contains_enclosure(&other.re) && self.im.contains_enclosure(&other.im)
    }

    pub fn is_point(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    /// Larger of the two side lengths.
    pub fn max_width(&self) -> Rational {
        self.re.width().max(self.im.width())
    }

    pub fn conj(&self) -> ComplexEnclosure {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, c: &Rational) -> ComplexEnclosure {
        Self::new(self.re.scale(c), self.im.scale(c))
    }

    pub fn scale_real(&self, c: &RealEnclosure) -> ComplexEnclosure {
        Self::new(&self.re * c, &self.im * c)
    }

    /// Enclosure of `|z|^2` using tight squares of each component.
    pub fn norm_sq(&self) -> RealEnclosure {
        &self.re.square() + &self.im.square()
    }

    pub fn square(&self) -> ComplexEnclosure {
        let re = &self.re.square() - &self.im.square();
        let im = (&self.re * &self.im).scale(&Rational::from_integer(2.into()));
        Self::new(re, im)
    }

    /// Binary powering by repeated squaring.
    pub fn powi(&self, e: u32) -> ComplexEnclosure {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn powi_rounded(&self, e: u32, bits: u32) -> ComplexEnclosure {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).round_out(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.square().round_out(bits);
            }
        }
        result
    }

    /// `1/z = conj(z) / |z|^2`.
    pub fn recip(&self) -> Result<ComplexEnclosure, EnclosureError> {
        let inv_norm = self.norm_sq().recip()?;
        Ok(self.conj().scale_real(&inv_norm))
    }

    pub fn div(&self, other: &ComplexEnclosure) -> Result<ComplexEnclosure, EnclosureError> {
        if other.contains_zero() {
            return Err(EnclosureError::DivisorContainsZero);
        }
        Ok(self * &other.recip()?)
    }

    /// Widen both components by `r`, which must bound `|error|`.
    pub fn inflate(&self, r: &Rational) -> ComplexEnclosure {
        Self::new(self.re.inflate(r), self.im.inflate(r))
    }

    pub fn round_out(&self, bits: u32) -> ComplexEnclosure {
        Self::new(self.re.round_out(bits), self.im.round_out(bits))
    }

    /// `sup (|Re z| + |Im z|)` over the rectangle; exact.
    pub fn l1_sup(&self) -> Rational {
        self.re.abs_sup() + self.im.abs_sup()
    }

    /// A rational upper bound for `sup |z|` over the rectangle.
    pub fn abs_sup_bound(&self, bits: u32) -> Rational {
        let a = self.re.abs_sup();
        let b = self.im.abs_sup();
        sqrt_upper(&(&a * &a + &b * &b), bits)
    }

    /// A rational lower bound for `inf |z|` over the rectangle.
    ///
    /// The infimum of `|z|` over a rectangle is the distance from the origin to
    /// the rectangle, `sqrt(dx^2 + dy^2)` where `dx` (resp. `dy`) is zero when
    /// the real (resp. imaginary) interval straddles zero and otherwise the
    /// smaller endpoint magnitude. The square root is rounded down.
    pub fn abs_inf_bound(&self, bits: u32) -> Rational {
        let dx = self.re.abs_inf();
        let dy = self.im.abs_inf();
        let d2 = &dx * &dx + &dy * &dy;
        if d2.is_zero() {
            return Rational::zero();
        }
        let s = sqrt_lower(&d2, bits);
        // never worse than the larger axis distance, which is exact
        s.max(dx.max(dy))
    }

    pub fn abs_enclosure(&self, bits: u32) -> RealEnclosure {
        RealEnclosure::new_unchecked(self.abs_inf_bound(bits), self.abs_sup_bound(bits))
    }
}

impl fmt::Display for ComplexEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

impl From<RealEnclosure> for ComplexEnclosure {
    fn from(re: RealEnclosure) -> Self {
        Self::from_real(re)
    }
}

impl Neg for &ComplexEnclosure {
    type Output = ComplexEnclosure;
    fn neg(self) -> ComplexEnclosure {
        ComplexEnclosure::new(-&self.re, -&self.im)
    }
}

impl Neg for ComplexEnclosure {
    type Output = ComplexEnclosure;
    fn neg(self) -> ComplexEnclosure {
        -&self
    }
}

impl Add for &ComplexEnclosure {
    type Output = ComplexEnclosure;
    fn add(self, rhs: &ComplexEnclosure) -> ComplexEnclosure {
        ComplexEnclosure::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ComplexEnclosure {
    type Output = ComplexEnclosure;
    fn sub(self, rhs: &ComplexEnclosure) -> ComplexEnclosure {
        ComplexEnclosure::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ComplexEnclosure {
    type Output = ComplexEnclosure;
    fn mul(self, rhs: &ComplexEnclosure) -> ComplexEnclosure {
        if rhs.im.is_point() && rhs.im.lo().is_zero() {
            return self.scale_real(&rhs.re);
        }
        if self.im.is_point() && self.im.lo().is_zero() {
            return rhs.scale_real(&self.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        ComplexEnclosure::new(re, im)
    }
}

forward_owned_binop!(ComplexEnclosure, Add, add);
forward_owned_binop!(ComplexEnclosure, Sub, sub);
forward_owned_binop!(ComplexEnclosure, Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn one_plus_i_to_the_fourth() {
        let z = ComplexEnclosure::point(rat_int(1), rat_int(1));
        let w = z.powi(4);
        assert!(w.contains(&rat_int(-4), &rat_int(0)));
        assert!(w.is_point());
    }

    #[test]
    fn reciprocal_of_gaussian_rational_is_exact() {
        // 1/(1+i) = (1-i)/2
        let z = ComplexEnclosure::point(rat_int(1), rat_int(1));
        let r = z.recip().unwrap();
        assert_eq!(r, ComplexEnclosure::point(rat(1, 2), rat(-1, 2)));
    }

    #[test]
    fn division_by_enclosure_of_zero_fails() {
        let z = ComplexEnclosure::new(
            RealEnclosure::new(rat(-1, 2), rat(1, 2)).unwrap(),
            RealEnclosure::new(rat(-1, 2), rat(1, 2)).unwrap(),
        );
        assert_eq!(ComplexEnclosure::one().div(&z), Err(EnclosureError::DivisorContainsZero));
    }

    #[test]
    fn magnitude_infimum_is_distance_to_rectangle() {
        let z = ComplexEnclosure::new(
            RealEnclosure::new(rat_int(3), rat_int(5)).unwrap(),
            RealEnclosure::new(rat_int(4), rat_int(6)).unwrap(),
        );
        assert_eq!(z.abs_inf_bound(30), rat_int(5));
        let straddle = ComplexEnclosure::new(
            RealEnclosure::new(rat_int(-1), rat_int(1)).unwrap(),
            RealEnclosure::new(rat_int(2), rat_int(3)).unwrap(),
        );
        assert_eq!(straddle.abs_inf_bound(30), rat_int(2));
        assert_eq!(ComplexEnclosure::zero().abs_inf_bound(30), rat_int(0));
    }

    fn member() -> impl Strategy<Value = (ComplexEnclosure, Rational, Rational)> {
        (
            (-200i64..200, -200i64..200, 0i64..40, 0i64..40, 0i64..=10, 0i64..=10),
            1i64..20,
        )
            .prop_map(|((a, b, wa, wb, ta, tb), d)| {
                let re = RealEnclosure::new(rat(a, d), rat(a + wa, d)).unwrap();
                let im = RealEnclosure::new(rat(b, d), rat(b + wb, d)).unwrap();
                let x = rat(a, d) + rat(wa * ta, 10 * d);
                let y = rat(b, d) + rat(wb * tb, 10 * d);
                (ComplexEnclosure::new(re, im), x, y)
            })
    }

    proptest! {
        #[test]
        fn rectangle_arithmetic_contains_pointwise_results(
            (z, x, y) in member(),
            (w, u, v) in member(),
            e in 0u32..5,
        ) {
            // (x + iy)(u + iv)
            let pr = &x * &u - &y * &v;
            let pi = &x * &v + &y * &u;
            prop_assert!((&z * &w).contains(&pr, &pi));
            prop_assert!((&z + &w).contains(&(&x + &u), &(&y + &v)));
            let sq = z.square();
            prop_assert!(sq.contains(&(&x * &x - &y * &y), &(rat_int(2) * &x * &y)));
            let mut pw = (rat_int(1), rat_int(0));
            for _ in 0..e {
                pw = (&pw.0 * &x - &pw.1 * &y, &pw.0 * &y + &pw.1 * &x);
            }
            prop_assert!(z.powi(e).contains(&pw.0, &pw.1));
            prop_assert!(z.powi_rounded(e, 20).contains(&pw.0, &pw.1));
            if w.excludes_zero() && !w.norm_sq().contains_zero() {
                let n = &u * &u + &v * &v;
                let qr = (&x * &u + &y * &v) / &n;
                let qi = (&y * &u - &x * &v) / &n;
                prop_assert!(z.div(&w).unwrap().contains(&qr, &qi));
            }
            let n2 = &x * &x + &y * &y;
            let lb = z.abs_inf_bound(40);
            prop_assert!(&lb * &lb <= n2);
            let ub = z.abs_sup_bound(40);
            prop_assert!(&ub * &ub >= n2);
        }
    }
}
