//! Fundamental domains, candidate zeros and the transformation rules used to
//! move a point into the region where its q-series converges fast.

use std::fmt;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::evaluate::{evaluate_at, EvalError, EvalParams};
use crate::exactnum::{
    rat, rat_int, AlgebraicPoint, Base, ComplexEnclosure, EnclosureError, PointForm, QuadraticNumber, Rational,
};
use crate::qseries::{check_level, QSeriesError, SeriesId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point enclosure {0} does not lie strictly in the upper half plane")]
    NotUpperHalfPlane(String),
    #[error("relocation needs a point -1/(zeta+k), got {0}")]
    NotInverted(AlgebraicPoint),
    #[error("shift {shift} outside 0..={max}")]
    ShiftOutOfRange { shift: i64, max: i64 },
    #[error(transparent)]
    Level(#[from] QSeriesError),
}

/// Integer matrix `[[a, b], [c, d]]` acting by Möbius transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2 { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Matrix2 = Matrix2 { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Matrix2 = Matrix2 { a: 1, b: 1, c: 0, d: 1 };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { a, b, c, d }
    }

    pub fn t_pow(k: i64) -> Self {
        Self::new(1, k, 0, 1)
    }

    /// `S·Tᵏ = [[0, −1], [1, k]]`, sending `τ` to `−1/(τ + k)`.
    pub fn st_pow(k: i64) -> Self {
        Self::S.mul(&Self::t_pow(k))
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// `cτ + d`.
    pub fn automorphy_factor(&self, tau: &ComplexEnclosure) -> ComplexEnclosure {
        &tau.scale(&rat_int(self.c)) + &ComplexEnclosure::point(rat_int(self.d), Rational::from_integer(0.into()))
    }

    pub fn automorphy_factor_exact(&self, tau: &QuadraticNumber) -> QuadraticNumber {
        let c = QuadraticNumber::from_rational(tau.base(), rat_int(self.c));
        c.mul(tau).add_rational(&rat_int(self.d))
    }

    /// `(aτ + b)/(cτ + d)` in rectangle arithmetic.
    pub fn apply(&self, tau: &ComplexEnclosure) -> Result<ComplexEnclosure, EnclosureError> {
        let num = &tau.scale(&rat_int(self.a)) + &ComplexEnclosure::point(rat_int(self.b), rat_int(0));
        num.div(&self.automorphy_factor(tau))
    }

    pub fn apply_exact(&self, tau: &QuadraticNumber) -> Option<QuadraticNumber> {
        let a = QuadraticNumber::from_rational(tau.base(), rat_int(self.a));
        let num = a.mul(tau).add_rational(&rat_int(self.b));
        num.div(&self.automorphy_factor_exact(tau))
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Right coset representative of `Γ₀(N)` in `SL₂(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub matrix: Matrix2,
    /// `Some(k)` for `S·Tᵏ`, `None` for the identity.
    pub shift: Option<i64>,
}

/// `Id` and `S·Tᵏ` for `k = 0..N−1`.
pub fn coset_reps(level: u32) -> Result<Vec<CosetRep>, GeometryError> {
    check_level(level)?;
    let mut reps = vec![CosetRep {
        matrix: Matrix2::IDENTITY,
        shift: None,
    }];
    reps.extend((0..level as i64).map(|k| CosetRep {
        matrix: Matrix2::st_pow(k),
        shift: Some(k),
    }));
    Ok(reps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainMembership {
    Inside,
    Outside,
    BoundaryUndecided,
}

/// Membership in `F_Γ = {−1/2 ≤ x < 1/2, x² + y² ≥ 1}`, decided only when
/// every point of the enclosure gives the same answer.
pub fn in_f_gamma(tau: &ComplexEnclosure) -> Result<DomainMembership, GeometryError> {
    if !tau.im.lo().is_positive() {
        return Err(GeometryError::NotUpperHalfPlane(tau.to_string()));
    }
    let half = rat(1, 2);
    let left = tri(tau.re.lo() >= &-&half, tau.re.hi() < &-&half);
    let right = tri(tau.re.hi() < &half, tau.re.lo() >= &half);
    let norm = tau.norm_sq();
    let outer = tri(norm.lo() >= &Rational::one(), norm.hi() < &Rational::one());
    let conds = [left, right, outer];
    Ok(if conds.contains(&Some(false)) {
        DomainMembership::Outside
    } else if conds.iter().all(|c| *c == Some(true)) {
        DomainMembership::Inside
    } else {
        DomainMembership::BoundaryUndecided
    })
}

fn tri(surely: bool, surely_not: bool) -> Option<bool> {
    match (surely, surely_not) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    }
}

/// The level-1 form that vanishes at the candidates of level `N`.
pub fn control_form(level: u32) -> Result<SeriesId, GeometryError> {
    check_level(level)?;
    Ok(match level {
        2 | 5 => SeriesId::E6,
        _ => SeriesId::E4,
    })
}

pub fn control_base(level: u32) -> Result<Base, GeometryError> {
    Ok(if control_form(level)? == SeriesId::E6 { Base::I } else { Base::Rho })
}

/// The only points of `F_N` where `Ẽ_N` can vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pub level: u32,
    pub control: SeriesId,
    pub base: Base,
    pub points: Vec<AlgebraicPoint>,
    /// Listed points equal to an earlier one, as `(listed, kept)`.
    pub aliases: Vec<(AlgebraicPoint, AlgebraicPoint)>,
}

/// `ζ` and `−1/(ζ + k)` for `k = 1..N−1`. For `ζ = ρ`, `−1/(ρ + 1) = ρ`
/// exactly, so that point is recorded as an alias instead of listed twice.
pub fn candidate_zeros(level: u32) -> Result<CandidateSet, GeometryError> {
    let control = control_form(level)?;
    let base = control_base(level)?;
    let mut points = vec![AlgebraicPoint::base_point(base)];
    let mut aliases = Vec::new();
    for k in 1..level as i64 {
        let p = AlgebraicPoint::inverted(base, k);
        match points.iter().find(|q| q.exact() == p.exact()) {
            Some(&q) => aliases.push((p, q)),
            None => points.push(p),
        }
    }
    Ok(CandidateSet {
        level,
        control,
        base,
        points,
        aliases,
    })
}

/// `Ẽ_N(target) = multiplier · Ẽ_N(source)` with
/// `source = −1/(ζ+k)`, `target = −1/(ζ+k−N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRelocation {
    pub source: AlgebraicPoint,
    pub target: AlgebraicPoint,
    pub multiplier: QuadraticNumber,
}

impl PointRelocation {
    pub fn multiplier_enclosure(&self, bits: u32) -> ComplexEnclosure {
        self.multiplier.enclose(bits)
    }

    /// Recovers `Ẽ_N(source)` from an enclosure of `Ẽ_N(target)`.
    pub fn pull_back(&self, target_value: &ComplexEnclosure, bits: u32) -> ComplexEnclosure {
        let inv = self.multiplier.inv().expect("multiplier is a ratio of nonzero numbers");
        (&inv.enclose(bits) * target_value).round_out(bits)
    }
}

pub fn relocate(p: &AlgebraicPoint, level: u32) -> Result<PointRelocation, GeometryError> {
    check_level(level)?;
    if p.form != PointForm::Inverted {
        return Err(GeometryError::NotInverted(*p));
    }
    let n = level as i64;
    if !(0..n).contains(&p.shift) {
        return Err(GeometryError::ShiftOutOfRange {
            shift: p.shift,
            max: n - 1,
        });
    }
    let target = AlgebraicPoint::inverted(p.base, p.shift - n);
    let multiplier = target
        .zeta_plus_shift()
        .pow(2)
        .div(&p.zeta_plus_shift().pow(2))
        .expect("ζ + k is never zero");
    Ok(PointRelocation {
        source: *p,
        target,
        multiplier,
    })
}

/// `Ẽ_N(−1/(Nτ)) + N·τ²·Ẽ_N(τ)`, which vanishes identically.
pub fn fricke_residual(level: u32, tau: &ComplexEnclosure, params: &EvalParams) -> Result<ComplexEnclosure, EvalError> {
    let id = SeriesId::etilde(level).map_err(|e| EvalError::InvalidParams(e.to_string()))?;
    let n = rat_int(level as i64);
    let w = -tau.scale(&n).recip()?.round_out(params.bits + 4);
    let at_w = evaluate_at(id, &w, params)?;
    let at_tau = evaluate_at(id, tau, params)?;
    Ok(&at_w + &(&tau.square().scale(&n) * &at_tau))
}
