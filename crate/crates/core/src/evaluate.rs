//! Rigorous evaluation of q-series at points of the upper half plane.
//!
//! A value is the partial sum `Σ_{n≤m} aₙ qⁿ` in rectangle arithmetic, with
//! both components widened by a proven bound on `|Σ_{n>m} aₙ qⁿ|`. The bound
//! uses `|aₙ| ≤ C·nᵖ` and `|qⁿ| ≤ rⁿ` where `r = sup(|Re q| + |Im q|)` is read
//! off exact rational endpoints.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{
    ceil_to_grid, enclose_pi, DyadicRect, exp_enclosure_rounded, rat, rat_int, AlgebraicPoint, ComplexEnclosure,
    EnclosureError, Rational,
};
use crate::geometry::Matrix2;
use crate::qseries::{series, SeriesId, SeriesKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("q-region violated: sup(|Re q|+|Im q|) = {r} exceeds r_max = {r_max}; relocate the point first")]
    RegionViolation { r: Rational, r_max: Rational },
    #[error("tail majorant diverges for r = {r}")]
    TailDiverges { r: Rational },
    #[error("{0} is not a level-1 modular form of weight 4 or 6")]
    NotLevelOneForm(SeriesId),
    #[error("matrix {0} is not unimodular")]
    NotUnimodular(Matrix2),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Enclosure(#[from] EnclosureError),
}

/// Asserts `|aₙ| ≤ C·nᵖ` for every `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientBound {
    pub c: Rational,
    pub p: u32,
}

/// `σ₁(n) ≤ n(n+1)/2 ≤ n²`, `σ₃(n) ≤ n⁴`, `σ₅(n) ≤ n⁶`; for `Ẽ_N` both
/// `σ₁(n)` and `N·σ₁(n/N)` are at most `N·σ₁(n)`, giving `C = 24(N+1)/(N−1)`.
pub fn coefficient_bound(id: SeriesId) -> CoefficientBound {
    match id.kind() {
        SeriesKind::E2 => CoefficientBound { c: rat_int(24), p: 2 },
        SeriesKind::E4 => CoefficientBound { c: rat_int(240), p: 4 },
        SeriesKind::E6 => CoefficientBound { c: rat_int(504), p: 6 },
        SeriesKind::Etilde => {
            let n = id.level().unwrap() as i64;
            CoefficientBound {
                c: rat(24 * (n + 1), n - 1),
                p: 2,
            }
        }
    }
}

fn ratio_majorant(p: u32, n: usize, r: &Rational) -> Rational {
    // r·((n+2)/(n+1))^p bounds term(k+1)/term(k) for all k ≥ n+1
    r * num_traits::pow(rat(n as i64 + 2, n as i64 + 1), p as usize)
}

/// Upper bound on `Σ_{n>m} C·nᵖ·rⁿ` for `0 ≤ r < 1`.
///
/// With `θ(k) = r·((k+2)/(k+1))ᵖ`, the ratio of consecutive majorant terms
/// past `k` is at most `θ(k)`. Starting at the first `k ≥ m` with `θ(k) < 1`,
/// the bound is the explicit sum over `m < n ≤ k` plus the geometric tail
/// `C·(k+1)ᵖ·r^{k+1}/(1 − θ(k))`. When `θ(m) < 1` this is the plain
/// geometric majorant.
pub fn tail_bound(bound: &CoefficientBound, m: usize, r: &Rational) -> Result<Rational, EvalError> {
    if r.is_negative() || *r >= Rational::one() {
        return Err(EvalError::TailDiverges { r: r.clone() });
    }
    if r.is_zero() {
        return Ok(Rational::zero());
    }
    let term = |n: usize| -> Rational {
        &bound.c * Rational::from_integer(BigInt::from(n).pow(bound.p)) * num_traits::pow(r.clone(), n)
    };
    let mut k = m;
    let mut explicit = Rational::zero();
    loop {
        let theta = ratio_majorant(bound.p, k, r);
        if theta < Rational::one() {
            return Ok(explicit + term(k + 1) / (Rational::one() - theta));
        }
        k += 1;
        explicit += term(k);
    }
}

/// Evaluation controls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalParams {
    /// Highest retained power of q.
    pub m: usize,
    /// Endpoint grid `2^-bits` for outward rounding and constant enclosures.
    pub bits: u32,
    /// Taylor degree for `exp`.
    pub exp_terms: u32,
    /// Largest admissible `sup(|Re q| + |Im q|)`.
    pub r_max: Rational,
}

impl Default for EvalParams {
    fn default() -> Self {
        Self {
            m: 64,
            bits: 128,
            exp_terms: 64,
            r_max: rat(9, 10),
        }
    }
}

impl EvalParams {
    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.r_max.is_positive() && self.r_max < Rational::one()) {
            return Err(EvalError::InvalidParams(format!("r_max = {} must lie in (0, 1)", self.r_max)));
        }
        if self.bits < 8 {
            return Err(EvalError::InvalidParams("bits must be at least 8".into()));
        }
        if self.exp_terms == 0 {
            return Err(EvalError::InvalidParams("exp_terms must be positive".into()));
        }
        Ok(())
    }

    /// Next round of escalation: `m`, `bits` and `exp_terms` doubled.
    pub fn doubled(&self) -> Self {
        Self {
            m: self.m * 2,
            bits: self.bits * 2,
            exp_terms: self.exp_terms * 2,
            r_max: self.r_max.clone(),
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_r_max(mut self, r_max: Rational) -> Self {
        self.r_max = r_max;
        self
    }
}

/// Enclosure of `q = e^{2πiτ}`.
pub fn q_enclosure(tau: &ComplexEnclosure, params: &EvalParams) -> Result<ComplexEnclosure, EvalError> {
    let two_pi = enclose_pi(params.bits + 4).scale(&rat_int(2));
    // 2πiτ = 2π(−Im τ + i·Re τ)
    let z = ComplexEnclosure::new(-(&two_pi * &tau.im), &two_pi * &tau.re).round_out(params.bits + 4);
    Ok(exp_enclosure_rounded(&z, params.exp_terms, params.bits + 4)?)
}

/// Full evaluation record.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: ComplexEnclosure,
    pub q: ComplexEnclosure,
    /// `sup(|Re q| + |Im q|)`.
    pub r: Rational,
    /// Radius added to each component for the discarded terms.
    pub tail: Rational,
}

/// Partial sum plus tail for a q-enclosure already inside the region.
pub fn evaluate_q(id: SeriesId, q: &ComplexEnclosure, params: &EvalParams) -> Result<Evaluation, EvalError> {
    params.validate()?;
    let r = q.l1_sup();
    if r > params.r_max {
        return Err(EvalError::RegionViolation {
            r,
            r_max: params.r_max.clone(),
        });
    }
    let coeffs = series(id, params.m);
    let qd = DyadicRect::from_enclosure(q, params.bits);
    let mut acc = DyadicRect::point(coeffs.coeff(params.m), params.bits);
    for n in (0..params.m).rev() {
        acc = qd.mul_add(&acc, &DyadicRect::point(coeffs.coeff(n), params.bits));
    }
    let acc = acc.to_enclosure();
    // the majorant is increasing in r, so a coarser upper bound for r is sound
    let r_coarse = ceil_to_grid(&r, 64);
    let r_tail = if r_coarse < Rational::one() { r_coarse } else { r.clone() };
    let tail = ceil_to_grid(&tail_bound(&coefficient_bound(id), params.m, &r_tail)?, params.bits);
    Ok(Evaluation {
        value: acc.inflate(&tail),
        q: q.clone(),
        r,
        tail,
    })
}

pub fn evaluate_detailed(id: SeriesId, tau: &ComplexEnclosure, params: &EvalParams) -> Result<Evaluation, EvalError> {
    params.validate()?;
    let q = q_enclosure(tau, params)?;
    evaluate_q(id, &q, params)
}

/// Sound enclosure of the series `id` at `τ`.
pub fn evaluate_at(id: SeriesId, tau: &ComplexEnclosure, params: &EvalParams) -> Result<ComplexEnclosure, EvalError> {
    Ok(evaluate_detailed(id, tau, params)?.value)
}

pub fn evaluate_at_point(id: SeriesId, p: &AlgebraicPoint, params: &EvalParams) -> Result<ComplexEnclosure, EvalError> {
    evaluate_at(id, &p.enclose(params.bits + 4), params)
}

/// `(cτ + d)^k · f(τ)`, the value of the weight-`k` level-1 form `f` at `γτ`.
pub fn transport_level1(
    id: SeriesId,
    gamma: &Matrix2,
    base_value: &ComplexEnclosure,
    tau: &ComplexEnclosure,
) -> Result<ComplexEnclosure, EvalError> {
    if !matches!(id.kind(), SeriesKind::E4 | SeriesKind::E6) {
        return Err(EvalError::NotLevelOneForm(id));
    }
    if gamma.det() != 1 {
        return Err(EvalError::NotUnimodular(*gamma));
    }
    let factor = gamma.automorphy_factor(tau);
    Ok(&factor.powi(id.weight()) * base_value)
}
