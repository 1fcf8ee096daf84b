//! ZERO / NONZERO decisions at the candidate points.
//!
//! At a candidate the control form (`E₆` at images of `i`, `E₄` at images of
//! `ρ`) vanishes exactly, so the relation collapses to
//! `Ẽ_N^L · cofactor(Ẽ_N, F) = 0` with `F` the other level-1 form. An
//! enclosure of the cofactor that excludes 0 proves `Ẽ_N = 0`; an enclosure of
//! `Ẽ_N` that excludes 0 proves the opposite.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::evaluate::{evaluate_at, transport_level1, EvalError, EvalParams};
use crate::exactnum::{rat, rat_int, to_decimal, AlgebraicPoint, ComplexEnclosure, PointForm, Rational};
use crate::geometry::{candidate_zeros, control_form, fricke_residual, relocate, GeometryError, Matrix2, PointRelocation};
use crate::graded::{
    discover_relation_default, divergence_from_printed, sturm_order, verify_relation, GradedError, GradedMonomial,
    RelationPoly, RelationTerm, TermDivergence, DEFAULT_MARGIN,
};
use crate::qseries::{prefetch, series, QSeries, SeriesId};

/// Doublings of `m`, `bits` and `exp_terms` tried after the first attempt.
pub const ESCALATION_ROUNDS: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("control form {got} does not vanish at the level-{level} candidates (expected {expected})")]
    ControlMismatch { level: u32, expected: SeriesId, got: SeriesId },
    #[error("{point} is not a level-{level} candidate")]
    NotACandidate { level: u32, point: AlgebraicPoint },
    #[error("both Ẽ_{level} and the cofactor exclude 0 at {point}; the enclosures are inconsistent")]
    Contradiction { level: u32, point: AlgebraicPoint },
    #[error("discovered level-{level} relation fails at q^{exponent}")]
    RelationFails { level: u32, exponent: usize },
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `coeff · Ẽ_N^etilde_power · F^other_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorTerm {
    pub coeff: Rational,
    pub etilde_power: u32,
    pub other_power: u32,
}

/// The relation with the control-form terms removed, written as
/// `Ẽ_N^leading_power · Σ cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredEquation {
    pub level: u32,
    pub control: SeriesId,
    pub other: SeriesId,
    pub leading_power: u32,
    /// Monic leading term first.
    pub cofactor: Vec<CofactorTerm>,
    /// Terms carrying a positive power of the control form.
    pub dropped: Vec<RelationTerm>,
}

impl FactoredEquation {
    pub fn cofactor_degree(&self) -> u32 {
        self.cofactor.iter().map(|t| t.etilde_power).max().unwrap_or(0)
    }

    /// Coefficient of `Ẽ^etilde_power·F^other_power` in the cofactor.
    pub fn coeff(&self, etilde_power: u32, other_power: u32) -> Rational {
        self.cofactor
            .iter()
            .find(|t| t.etilde_power == etilde_power && t.other_power == other_power)
            .map_or_else(Rational::zero, |t| t.coeff.clone())
    }

    /// The relation this factorization came from.
    pub fn reconstruct(&self) -> RelationPoly {
        let other_is_e4 = self.other == SeriesId::E4;
        let mut terms: Vec<RelationTerm> = self
            .cofactor
            .iter()
            .skip(1)
            .map(|t| RelationTerm {
                etilde_power: t.etilde_power + self.leading_power,
                monomial: if other_is_e4 {
                    GradedMonomial::new(t.other_power, 0)
                } else {
                    GradedMonomial::new(0, t.other_power)
                },
                coeff: -t.coeff.clone(),
            })
            .collect();
        terms.extend(self.dropped.iter().cloned());
        RelationPoly::new(self.level, terms).expect("terms come from a valid relation")
    }

    /// Enclosure of the cofactor given enclosures of `Ẽ_N` and `F`.
    pub fn evaluate(&self, etilde: &ComplexEnclosure, other: &ComplexEnclosure, bits: u32) -> ComplexEnclosure {
        self.cofactor.iter().fold(ComplexEnclosure::zero(), |acc, t| {
            let term = (&etilde.powi_rounded(t.etilde_power, bits) * &other.powi_rounded(t.other_power, bits))
                .scale(&t.coeff);
            (&acc + &term).round_out(bits)
        })
    }
}

impl fmt::Display for FactoredEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.level;
        match self.leading_power {
            0 => write!(f, "(")?,
            1 => write!(f, "Ẽ{n}·(")?,
            l => write!(f, "Ẽ{n}^{l}·(")?,
        }
        for (k, t) in self.cofactor.iter().enumerate() {
            let neg = t.coeff < Rational::zero();
            if k > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let c = if neg { -t.coeff.clone() } else { t.coeff.clone() };
            let mut factors = Vec::new();
            if !c.is_one() {
                factors.push(format!("({c})"));
            }
            match t.other_power {
                0 => {}
                1 => factors.push(self.other.to_string()),
                p => factors.push(format!("{}^{p}", self.other)),
            }
            match t.etilde_power {
                0 => {}
                1 => factors.push(format!("Ẽ{n}")),
                p => factors.push(format!("Ẽ{n}^{p}")),
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("·"))?;
        }
        write!(f, ") = 0 where {} = 0", self.control)
    }
}

pub fn build_factored(rel: &RelationPoly, control: SeriesId) -> Result<FactoredEquation, CertifyError> {
    let level = rel.level();
    let expected = control_form(level)?;
    if control != expected {
        return Err(CertifyError::ControlMismatch {
            level,
            expected,
            got: control,
        });
    }
    let other = if control == SeriesId::E6 { SeriesId::E4 } else { SeriesId::E6 };
    let control_power = |m: &GradedMonomial| if control == SeriesId::E6 { m.e6 } else { m.e4 };
    let other_power = |m: &GradedMonomial| if control == SeriesId::E6 { m.e4 } else { m.e6 };

    let (dropped, kept): (Vec<RelationTerm>, Vec<RelationTerm>) =
        rel.terms().iter().cloned().partition(|t| control_power(&t.monomial) > 0);
    let leading_power = kept.iter().map(|t| t.etilde_power).min().unwrap_or(level + 1);

    let mut cofactor = vec![CofactorTerm {
        coeff: Rational::one(),
        etilde_power: level + 1 - leading_power,
        other_power: 0,
    }];
    for t in kept.iter().rev() {
        cofactor.push(CofactorTerm {
            coeff: -t.coeff.clone(),
            etilde_power: t.etilde_power - leading_power,
            other_power: other_power(&t.monomial),
        });
    }
    Ok(FactoredEquation {
        level,
        control,
        other,
        leading_power,
        cofactor,
        dropped,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Zero,
    Nonzero,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Zero => "ZERO",
            Verdict::Nonzero => "NONZERO",
            Verdict::Undecided => "UNDECIDED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub point: AlgebraicPoint,
    pub level: u32,
    pub verdict: Verdict,
    pub etilde: ComplexEnclosure,
    pub cofactor: ComplexEnclosure,
    /// Enclosure of the non-control form at the point.
    pub other_form: ComplexEnclosure,
    /// Parameters of the attempt that produced the verdict.
    pub params: EvalParams,
    /// Attempts made, starting at 1.
    pub rounds: u32,
    pub relocation: Option<PointRelocation>,
    pub narrative: String,
}

impl Certificate {
    pub fn relocated(&self) -> bool {
        self.relocation.is_some()
    }
}

fn factored_cache() -> &'static Mutex<HashMap<u32, Arc<(RelationPoly, FactoredEquation)>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<(RelationPoly, FactoredEquation)>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Discovered relation and its factorization at the level's candidates.
pub fn factored_equation(level: u32) -> Result<Arc<(RelationPoly, FactoredEquation)>, CertifyError> {
    if let Some(hit) = factored_cache().lock().unwrap().get(&level) {
        return Ok(Arc::clone(hit));
    }
    let rel = discover_relation_default(level)?;
    let factored = build_factored(&rel, control_form(level)?)?;
    let entry = Arc::new((rel, factored));
    factored_cache().lock().unwrap().insert(level, Arc::clone(&entry));
    Ok(entry)
}

/// `Ẽ_N` at `p`, moving the point by [`relocate`] when it is out of region.
pub fn etilde_at(
    level: u32,
    p: &AlgebraicPoint,
    params: &EvalParams,
) -> Result<(ComplexEnclosure, Option<PointRelocation>), CertifyError> {
    let id = SeriesId::etilde(level).map_err(GeometryError::from)?;
    match evaluate_at(id, &p.enclose(params.bits + 4), params) {
        Ok(v) => Ok((v, None)),
        Err(EvalError::RegionViolation { .. }) if p.form == PointForm::Inverted => {
            let r = relocate(p, level)?;
            let at_target = evaluate_at(id, &r.target.enclose(params.bits + 4), params)?;
            Ok((r.pull_back(&at_target, params.bits), Some(r)))
        }
        Err(e) => Err(e.into()),
    }
}

/// A level-1 form at `p`, transported from its value at the base point.
pub fn level1_at(form: SeriesId, p: &AlgebraicPoint, params: &EvalParams) -> Result<ComplexEnclosure, CertifyError> {
    let zeta = AlgebraicPoint::base_point(p.base).enclose(params.bits + 4);
    let base_value = evaluate_at(form, &zeta, params)?;
    let gamma = match p.form {
        PointForm::Base => Matrix2::IDENTITY,
        PointForm::Inverted => Matrix2::st_pow(p.shift),
    };
    Ok(transport_level1(form, &gamma, &base_value, &zeta)?.round_out(params.bits))
}

fn attempt(
    factored: &FactoredEquation,
    p: &AlgebraicPoint,
    params: &EvalParams,
    rounds: u32,
) -> Result<Certificate, CertifyError> {
    let level = factored.level;
    let (etilde, relocation) = etilde_at(level, p, params)?;
    let other_form = level1_at(factored.other, p, params)?;
    let cofactor = factored.evaluate(&etilde, &other_form, params.bits);
    let (verdict, narrative) = match (cofactor.excludes_zero(), etilde.excludes_zero()) {
        (true, true) => return Err(CertifyError::Contradiction { level, point: *p }),
        (true, false) => (
            Verdict::Zero,
            format!(
                "cofactor excludes 0 (|cofactor| >= {}), so Ẽ{level} vanishes exactly",
                to_decimal(&cofactor.abs_inf_bound(64), 6)
            ),
        ),
        (false, true) => (
            Verdict::Nonzero,
            format!(
                "Ẽ{level} enclosure excludes 0 (|Ẽ{level}| >= {})",
                to_decimal(&etilde.abs_inf_bound(64), 6)
            ),
        ),
        (false, false) => (Verdict::Undecided, "neither enclosure excludes 0".to_string()),
    };
    Ok(Certificate {
        point: *p,
        level,
        verdict,
        etilde,
        cofactor,
        other_form,
        params: params.clone(),
        rounds,
        relocation,
        narrative,
    })
}

fn is_candidate(level: u32, p: &AlgebraicPoint) -> Result<bool, CertifyError> {
    let set = candidate_zeros(level)?;
    let exact = p.exact();
    Ok(set.points.iter().chain(set.aliases.iter().map(|(a, _)| a)).any(|q| q.exact() == exact))
}

/// Certifies `p` with the given factorization, escalating on UNDECIDED.
pub fn certify_with(
    factored: &FactoredEquation,
    p: &AlgebraicPoint,
    params: &EvalParams,
) -> Result<Certificate, CertifyError> {
    if !is_candidate(factored.level, p)? {
        return Err(CertifyError::NotACandidate {
            level: factored.level,
            point: *p,
        });
    }
    let mut params = params.clone();
    let mut cert = attempt(factored, p, &params, 1)?;
    for round in 2..=ESCALATION_ROUNDS + 1 {
        if cert.verdict != Verdict::Undecided {
            break;
        }
        params = params.doubled();
        cert = attempt(factored, p, &params, round)?;
    }
    Ok(cert)
}

pub fn certify_point(level: u32, p: &AlgebraicPoint, params: &EvalParams) -> Result<Certificate, CertifyError> {
    let entry = factored_equation(level)?;
    certify_with(&entry.1, p, params)
}

/// Everything established for one level.
#[derive(Clone, Debug)]
pub struct Report {
    pub level: u32,
    pub relation: RelationPoly,
    pub verified_order: usize,
    pub sturm_order: usize,
    pub divergence: Vec<TermDivergence>,
    pub factored: FactoredEquation,
    pub certificates: Vec<Certificate>,
    pub zeros: Vec<AlgebraicPoint>,
}

impl Report {
    pub fn undecided(&self) -> Vec<AlgebraicPoint> {
        self.certificates
            .iter()
            .filter(|c| c.verdict == Verdict::Undecided)
            .map(|c| c.point)
            .collect()
    }
}

pub fn certify_all(level: u32, params: &EvalParams) -> Result<Report, CertifyError> {
    let entry = factored_equation(level)?;
    let (relation, factored) = (&entry.0, &entry.1);
    let sturm = sturm_order(level)?;
    let verified_order = sturm + DEFAULT_MARGIN;
    let check = verify_relation(relation, verified_order);
    if let Some(m) = check.mismatch {
        return Err(CertifyError::RelationFails {
            level,
            exponent: m.exponent,
        });
    }
    let set = candidate_zeros(level)?;
    let etilde = SeriesId::etilde(level).map_err(GeometryError::from)?;
    prefetch(&[etilde, SeriesId::E4, SeriesId::E6], &[params.m]);
    let certificates = set
        .points
        .par_iter()
        .map(|p| certify_with(factored, p, params))
        .collect::<Result<Vec<_>, _>>()?;
    let zeros = certificates
        .iter()
        .filter(|c| c.verdict == Verdict::Zero)
        .map(|c| c.point)
        .collect();
    Ok(Report {
        level,
        relation: relation.clone(),
        verified_order,
        sturm_order: sturm,
        divergence: divergence_from_printed(relation),
        factored: factored.clone(),
        certificates,
        zeros,
    })
}

/// Points sampled for the Fricke check.
pub fn fricke_samples() -> Vec<ComplexEnclosure> {
    vec![
        ComplexEnclosure::i(),
        ComplexEnclosure::point(rat(1, 4), rat_int(1)),
        ComplexEnclosure::point(rat(-1, 3), rat(6, 5)),
    ]
}

#[derive(Clone, Debug)]
pub struct FrickeSample {
    pub tau: ComplexEnclosure,
    pub residual: ComplexEnclosure,
}

#[derive(Clone, Debug)]
pub struct CuspReport {
    pub level: u32,
    pub constant_term: Rational,
    pub fricke: Vec<FrickeSample>,
}

impl CuspReport {
    pub fn constant_term_is_one(&self) -> bool {
        self.constant_term.is_one()
    }

    pub fn fricke_holds(&self) -> bool {
        self.fricke.iter().all(|s| s.residual.contains_zero())
    }

    pub fn passed(&self) -> bool {
        self.constant_term_is_one() && self.fricke_holds()
    }
}

/// Value at `i∞` from the given expansion plus the Fricke residuals.
pub fn cusp_check_series(level: u32, etilde: &QSeries, params: &EvalParams) -> Result<CuspReport, CertifyError> {
    let fricke = fricke_samples()
        .into_iter()
        .map(|tau| {
            let residual = fricke_residual(level, &tau, params)?;
            Ok(FrickeSample { tau, residual })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(CuspReport {
        level,
        constant_term: etilde.constant_term().clone(),
        fricke,
    })
}

pub fn cusp_check(level: u32, params: &EvalParams) -> Result<CuspReport, CertifyError> {
    let id = SeriesId::etilde(level).map_err(GeometryError::from)?;
    cusp_check_series(level, &series(id, params.m), params)
}

/// Certified lower bound on `|cofactor|` at each ZERO verdict.
pub fn second_factor_separation(level: u32, params: &EvalParams) -> Result<Vec<(AlgebraicPoint, Rational)>, CertifyError> {
    Ok(separation_from(&certify_all(level, params)?))
}

pub fn separation_from(report: &Report) -> Vec<(AlgebraicPoint, Rational)> {
    report
        .certificates
        .iter()
        .filter(|c| c.verdict == Verdict::Zero)
        .map(|c| (c.point, c.cofactor.abs_inf_bound(64)))
        .collect()
}
