//! Rectangles with endpoints on a fixed dyadic grid, stored as scaled integers.
//!
//! Used by the inner loops of series and Taylor evaluation: each operation is
//! computed exactly at scale `2^(2·bits)` and rounded outward once, avoiding
//! the gcd reductions of general rational arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;

use super::{pow2, ComplexEnclosure, Rational, RealEnclosure};

fn floor_div(x: &BigInt, d: &BigInt) -> BigInt {
    x.div_floor(d)
}

fn ceil_div(x: &BigInt, d: &BigInt) -> BigInt {
    -(-x).div_floor(d)
}

/// `[lo, hi]·2^-bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DyadicInterval {
    lo: BigInt,
    hi: BigInt,
}

/// Endpoints of an interval product at scale `2^(2·bits)`.
fn product_bounds(a: &DyadicInterval, b: &DyadicInterval) -> (BigInt, BigInt) {
    let p = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DyadicRect {
    bits: u32,
    scale: BigInt,
    re: DyadicInterval,
    im: DyadicInterval,
}

impl DyadicRect {
    /// Smallest grid rectangle containing `c`.
    pub(crate) fn from_enclosure(c: &ComplexEnclosure, bits: u32) -> Self {
        let scale = pow2(bits);
        let conv = |r: &RealEnclosure| DyadicInterval {
            lo: floor_div(&(r.lo().numer() * &scale), r.lo().denom()),
            hi: ceil_div(&(r.hi().numer() * &scale), r.hi().denom()),
        };
        Self {
            bits,
            re: conv(&c.re),
            im: conv(&c.im),
            scale,
        }
    }

    pub(crate) fn point(x: &Rational, bits: u32) -> Self {
        Self::from_enclosure(&ComplexEnclosure::point(x.clone(), Rational::from_integer(0.into())), bits)
    }

    pub(crate) fn to_enclosure(&self) -> ComplexEnclosure {
        let conv = |i: &DyadicInterval| {
            RealEnclosure::new_unchecked(
                Rational::new(i.lo.clone(), self.scale.clone()),
                Rational::new(i.hi.clone(), self.scale.clone()),
            )
        };
        ComplexEnclosure::new(conv(&self.re), conv(&self.im))
    }

    /// `self·o + c`, rounded outward once per component.
    pub(crate) fn mul_add(&self, o: &DyadicRect, c: &DyadicRect) -> DyadicRect {
        debug_assert_eq!(self.bits, o.bits);
        debug_assert_eq!(self.bits, c.bits);
        let (rr_lo, rr_hi) = product_bounds(&self.re, &o.re);
        let (ii_lo, ii_hi) = product_bounds(&self.im, &o.im);
        let (ri_lo, ri_hi) = product_bounds(&self.re, &o.im);
        let (ir_lo, ir_hi) = product_bounds(&self.im, &o.re);
        let re = DyadicInterval {
            lo: floor_div(&(rr_lo - ii_hi), &self.scale) + &c.re.lo,
            hi: ceil_div(&(rr_hi - ii_lo), &self.scale) + &c.re.hi,
        };
        let im = DyadicInterval {
            lo: floor_div(&(ri_lo + ir_lo), &self.scale) + &c.im.lo,
            hi: ceil_div(&(ri_hi + ir_hi), &self.scale) + &c.im.hi,
        };
        DyadicRect {
            bits: self.bits,
            scale: self.scale.clone(),
            re,
            im,
        }
    }

    /// `self / j`, rounded outward.
    pub(crate) fn div_int(&self, j: u64) -> DyadicRect {
        let j = BigInt::from(j);
        let conv = |i: &DyadicInterval| DyadicInterval {
            lo: floor_div(&i.lo, &j),
            hi: ceil_div(&i.hi, &j),
        };
        DyadicRect {
            bits: self.bits,
            scale: self.scale.clone(),
            re: conv(&self.re),
            im: conv(&self.im),
        }
    }

    pub(crate) fn add_real_int(&self, n: i64) -> DyadicRect {
        let shift = BigInt::from(n) * &self.scale;
        let mut out = self.clone();
        out.re.lo += &shift;
        out.re.hi += &shift;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn negative_endpoints_round_outward() {
        let c = ComplexEnclosure::point(rat(-1, 3), rat(1, 3));
        let d = DyadicRect::from_enclosure(&c, 8).to_enclosure();
        assert!(d.contains_enclosure(&c));
        assert!(d.max_width() <= rat(1, 256));
        let halved = DyadicRect::from_enclosure(&ComplexEnclosure::point(rat(-1, 256), rat_int(0)), 8).div_int(2);
        assert!(halved.to_enclosure().contains(&rat(-1, 512), &rat_int(0)));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-500i64..500, 1i64..60).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn mul_add_contains_exact_result(
            a in small(), b in small(), c in small(), d in small(), e in small(), w in 0i64..50,
        ) {
            let x = ComplexEnclosure::point(a.clone(), b.clone());
            let y = ComplexEnclosure::new(
                RealEnclosure::new(c.clone().min(d.clone()), c.clone().max(d.clone())).unwrap(),
                RealEnclosure::point(e.clone()),
            );
            let z = ComplexEnclosure::point(rat(w, 7), rat_int(0));
            let exact = &(&x * &y) + &z;
            let fast = DyadicRect::from_enclosure(&x, 40)
                .mul_add(&DyadicRect::from_enclosure(&y, 40), &DyadicRect::from_enclosure(&z, 40));
            let encl = fast.to_enclosure();
            prop_assert!(encl.contains_enclosure(&exact));
            let slack = rat(1, 1 << 30);
            prop_assert!(encl.re.width() <= exact.re.width() + &slack);
            prop_assert!(fast.div_int(3).to_enclosure().contains_enclosure(&exact.scale(&rat(1, 3))));
        }
    }
}
