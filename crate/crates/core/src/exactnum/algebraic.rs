use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{enclose_sqrt3, rat_int, ComplexEnclosure, Rational, RealEnclosure};

/// The elliptic base point ζ: `i` or `ρ = e^{2πi/3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    I,
    Rho,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::I => "i",
            Base::Rho => "rho",
        }
    }
}

/// An element `a + b·ζ` of `Q(ζ)`, with `ζ^2 = -1` for `i` and `ζ^2 = -1 - ζ` for `ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    base: Base,
    a: Rational,
    b: Rational,
}

impl QuadraticNumber {
    pub fn new(base: Base, a: Rational, b: Rational) -> Self {
        Self { base, a, b }
    }

    pub fn from_rational(base: Base, a: Rational) -> Self {
        Self::new(base, a, Rational::zero())
    }

    pub fn generator(base: Base) -> Self {
        Self::new(base, Rational::zero(), Rational::one())
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Rational part `a`.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of ζ.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.base, other.base);
        Self::new(self.base, &self.a + &other.a, &self.b + &other.b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.base, other.base);
        Self::new(self.base, &self.a - &other.a, &self.b - &other.b)
    }

    pub fn add_rational(&self, c: &Rational) -> Self {
        Self::new(self.base, &self.a + c, self.b.clone())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.base, -self.a.clone(), -self.b.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.base, other.base);
        let ac = &self.a * &other.a;
        let bd = &self.b * &other.b;
        let cross = &self.a * &other.b + &self.b * &other.a;
        match self.base {
            Base::I => Self::new(self.base, ac - bd, cross),
            Base::Rho => Self::new(self.base, ac - &bd, cross - bd),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::from_rational(self.base, Rational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Galois conjugate (complex conjugate).
    pub fn conj(&self) -> Self {
        match self.base {
            Base::I => Self::new(self.base, self.a.clone(), -self.b.clone()),
            // conj(ρ) = -1 - ρ
            Base::Rho => Self::new(self.base, &self.a - &self.b, -self.b.clone()),
        }
    }

    /// Field norm, equal to `|x|^2`.
    pub fn norm(&self) -> Rational {
        match self.base {
            Base::I => &self.a * &self.a + &self.b * &self.b,
            Base::Rho => &self.a * &self.a - &self.a * &self.b + &self.b * &self.b,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Self::new(self.base, &c.a / &n, &c.b / &n))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    /// Exact real part (both bases have rational real part: `Re ρ = -1/2`).
    pub fn re(&self) -> Rational {
        match self.base {
            Base::I => self.a.clone(),
            Base::Rho => &self.a - &self.b / rat_int(2),
        }
    }

    /// Imaginary part as `c·Im ζ`; returns `c`.
    pub fn im_over_im_zeta(&self) -> &Rational {
        &self.b
    }

    /// Rectangle enclosure; exact for `Q(i)`, uses a √3 enclosure for `Q(ρ)`.
    pub fn enclose(&self, bits: u32) -> ComplexEnclosure {
        match self.base {
            Base::I => ComplexEnclosure::point(self.a.clone(), self.b.clone()),
            Base::Rho => {
                let im = enclose_sqrt3(bits).scale(&(&self.b / rat_int(2)));
                ComplexEnclosure::new(RealEnclosure::point(self.re()), im)
            }
        }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.base.name();
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})·{}", self.b, z),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {} ({})·{}", self.a, sign, self.b.abs(), z)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointForm {
    /// τ = ζ
    Base,
    /// τ = -1/(ζ + k)
    Inverted,
}

/// A point `ζ` or `-1/(ζ + k)` of the upper half plane, stored exactly.
///
/// Negative shifts occur as relocation targets `-1/(ζ + k - N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicPoint {
    pub base: Base,
    pub shift: i64,
    pub form: PointForm,
}

impl AlgebraicPoint {
    pub fn base_point(base: Base) -> Self {
        Self {
            base,
            shift: 0,
            form: PointForm::Base,
        }
    }

    pub fn inverted(base: Base, shift: i64) -> Self {
        Self {
            base,
            shift,
            form: PointForm::Inverted,
        }
    }

    /// `ζ + k`, the automorphy factor `cζ + d` of `S·T^k`.
    pub fn zeta_plus_shift(&self) -> QuadraticNumber {
        QuadraticNumber::generator(self.base).add_rational(&rat_int(self.shift))
    }

    /// The point as an exact element of `Q(ζ)`.
    pub fn exact(&self) -> QuadraticNumber {
        match self.form {
            PointForm::Base => QuadraticNumber::generator(self.base),
            PointForm::Inverted => self
                .zeta_plus_shift()
                .inv()
                .expect("ζ + k is never zero")
                .neg(),
        }
    }

    /// Imaginary part, exact up to the factor `Im ζ` (1 for `i`, √3/2 for `ρ`).
    pub fn im_over_im_zeta(&self) -> Rational {
        self.exact().im_over_im_zeta().clone()
    }

    pub fn enclose(&self, bits: u32) -> ComplexEnclosure {
        point_enclosure(self, bits)
    }
}

/// Enclosure of the point `p`. Base-`i` points are exact Gaussian rationals.
pub fn point_enclosure(p: &AlgebraicPoint, bits: u32) -> ComplexEnclosure {
    assert!(bits >= 8);
    p.exact().enclose(bits)
}

impl fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.form {
            PointForm::Base => write!(f, "{}", self.base.name()),
            PointForm::Inverted => match self.shift {
                0 => write!(f, "-1/{}", self.base.name()),
                k if k > 0 => write!(f, "-1/({}+{})", self.base.name(), k),
                k => write!(f, "-1/({}{})", self.base.name(), k),
            },
        }
    }
}
