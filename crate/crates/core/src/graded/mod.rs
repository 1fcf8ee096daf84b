//! The graded ring `C[E₄, E₆]` of level-1 modular forms and the monic
//! relation satisfied by `Ẽ_N` over it:
//!
//! `Ẽ_N^{N+1} = Σ_{i=0}^{N-1} Σ_{4a+6b = 2(N+1-i)} c_{i,a,b} · Ẽ_N^i · E₄^a · E₆^b`.

mod linear;

pub use linear::{exact_linear_solve, LinearSolution};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{rat, Rational};
use crate::qseries::{check_level, series, QSeries, QSeriesError, SeriesId};

/// Default number of coefficients checked beyond the Sturm order.
pub const DEFAULT_MARGIN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error(transparent)]
    Level(#[from] QSeriesError),
    #[error("no relation exists: the coefficient system is inconsistent at order {order}")]
    NoRelation { order: usize },
    #[error("relation not unique at order {order}: rank {rank} < {unknowns} unknowns")]
    NotUnique { order: usize, rank: usize, unknowns: usize },
    #[error("term Ẽ^{power}·{monomial} has weight {weight}, expected {expected}")]
    InhomogeneousTerm {
        power: u32,
        monomial: GradedMonomial,
        weight: u32,
        expected: u32,
    },
    #[error("order {order} is below the Sturm order {sturm} for level {level}")]
    InsufficientOrder { level: u32, order: usize, sturm: usize },
}

/// `E₄^a · E₆^b`, of weight `4a + 6b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedMonomial {
    pub e4: u32,
    pub e6: u32,
}

impl GradedMonomial {
    pub const ONE: GradedMonomial = GradedMonomial { e4: 0, e6: 0 };

    pub fn new(e4: u32, e6: u32) -> Self {
        Self { e4, e6 }
    }

    pub fn weight(&self) -> u32 {
        4 * self.e4 + 6 * self.e6
    }

    pub fn is_one(&self) -> bool {
        self.e4 == 0 && self.e6 == 0
    }
}

impl fmt::Display for GradedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.e4 {
            0 => {}
            1 => parts.push("E4".to_string()),
            a => parts.push(format!("E4^{a}")),
        }
        match self.e6 {
            0 => {}
            1 => parts.push("E6".to_string()),
            b => parts.push(format!("E6^{b}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// All monomials of the given weight, in descending powers of `E₄`.
pub fn monomial_basis(weight: u32) -> Vec<GradedMonomial> {
    if weight % 2 == 1 {
        return Vec::new();
    }
    (0..=weight / 4)
        .rev()
        .filter(|a| (weight - 4 * a) % 6 == 0)
        .map(|a| GradedMonomial::new(a, (weight - 4 * a) / 6))
        .collect()
}

/// Number of initial coefficients that determine a weight `2(N+1)` form on
/// `Γ₀(N)`: `⌈k·[SL₂(Z):Γ₀(N)]/12⌉` with index `N + 1` for prime `N`.
pub fn sturm_order(level: u32) -> Result<usize, GradedError> {
    let n = check_level(level)? as usize;
    let weight = 2 * (n + 1);
    Ok((weight * (n + 1)).div_ceil(12))
}

/// One summand `coeff · Ẽ_N^power · monomial` of the right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm {
    pub etilde_power: u32,
    pub monomial: GradedMonomial,
    pub coeff: Rational,
}

/// `Ẽ_N^{N+1} = Σ terms`; the leading term is implicit with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationPoly {
    level: u32,
    terms: Vec<RelationTerm>,
}

impl RelationPoly {
    /// Validates weight homogeneity; terms are sorted into canonical order and
    /// zero coefficients dropped.
    pub fn new(level: u32, terms: Vec<RelationTerm>) -> Result<Self, GradedError> {
        check_level(level)?;
        let expected = 2 * (level + 1);
        let mut terms: Vec<RelationTerm> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        for t in &terms {
            let weight = 2 * t.etilde_power + t.monomial.weight();
            if weight != expected || t.etilde_power > level {
                return Err(GradedError::InhomogeneousTerm {
                    power: t.etilde_power,
                    monomial: t.monomial,
                    weight,
                    expected,
                });
            }
        }
        terms.sort_by(|a, b| {
            a.etilde_power
                .cmp(&b.etilde_power)
                .then(b.monomial.e4.cmp(&a.monomial.e4))
        });
        Ok(Self { level, terms })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn terms(&self) -> &[RelationTerm] {
        &self.terms
    }

    /// Sum of the right-hand coefficients. Every series involved has constant
    /// term 1, so a valid relation has coefficient sum exactly 1.
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.iter().map(|t| &t.coeff).sum()
    }

    pub fn coeff_of(&self, etilde_power: u32, monomial: GradedMonomial) -> Rational {
        self.terms
            .iter()
            .find(|t| t.etilde_power == etilde_power && t.monomial == monomial)
            .map_or_else(Rational::zero, |t| t.coeff.clone())
    }

    /// The right-hand side as a q-series to `order`.
    pub fn rhs_series(&self, order: usize) -> QSeries {
        let powers = FormPowers::new(self.level, order);
        let mut total = QSeries::zero(order);
        for t in &self.terms {
            let product = powers
                .etilde(t.etilde_power)
                .mul(&powers.e4(t.monomial.e4))
                .mul(&powers.e6(t.monomial.e6));
            total = &total + &product.scale(&t.coeff);
        }
        total
    }

    pub fn lhs_series(&self, order: usize) -> QSeries {
        series(SeriesId::etilde(self.level).unwrap(), order).pow(self.level + 1)
    }
}

impl fmt::Display for RelationPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ẽ{}^{} =", self.level, self.level + 1)?;
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " +")?;
            }
            write!(f, " ({})", t.coeff)?;
            if !t.monomial.is_one() {
                write!(f, "·{}", t.monomial)?;
            }
            match t.etilde_power {
                0 => {}
                1 => write!(f, "·Ẽ{}", self.level)?,
                p => write!(f, "·Ẽ{}^{}", self.level, p)?,
            }
        }
        Ok(())
    }
}

/// Cached powers of `Ẽ_N`, `E₄`, `E₆` at a fixed order.
struct FormPowers {
    etilde: Vec<QSeries>,
    e4: Vec<QSeries>,
    e6: Vec<QSeries>,
}

impl FormPowers {
    fn new(level: u32, order: usize) -> Self {
        let max_e4 = ((level + 1) / 2) as usize;
        let max_e6 = ((level + 1) / 3) as usize;
        let chain = |id: SeriesId, n: usize| {
            let base = series(id, order);
            let mut out = vec![QSeries::one(order)];
            for k in 0..n {
                out.push(out[k].mul(&base));
            }
            out
        };
        Self {
            etilde: chain(SeriesId::etilde(level).unwrap(), level as usize + 1),
            e4: chain(SeriesId::E4, max_e4),
            e6: chain(SeriesId::E6, max_e6),
        }
    }

    fn etilde(&self, p: u32) -> &QSeries {
        &self.etilde[p as usize]
    }

    fn e4(&self, p: u32) -> &QSeries {
        &self.e4[p as usize]
    }

    fn e6(&self, p: u32) -> &QSeries {
        &self.e6[p as usize]
    }
}

/// The relations as tabulated in the literature. The level-7 entry reproduces
/// the tabulated `30/2401` for `E₄²·Ẽ₇⁴`, which fails the constant-term check.
pub fn printed_relation(level: u32) -> Result<RelationPoly, GradedError> {
    let t = |p: u32, a: u32, b: u32, c: Rational| RelationTerm {
        etilde_power: p,
        monomial: GradedMonomial::new(a, b),
        coeff: c,
    };
    let seven7 = 7i64.pow(7);
    let terms = match check_level(level)? {
        2 => vec![t(0, 0, 1, rat(1, 4)), t(1, 1, 0, rat(3, 4))],
        3 => vec![
            t(0, 2, 0, rat(1, 27)),
            t(1, 0, 1, rat(8, 27)),
            t(2, 1, 0, rat(2, 3)),
        ],
        5 => vec![
            t(0, 0, 2, rat(1, 3125)),
            t(1, 1, 1, rat(24, 3125)),
            t(2, 2, 0, rat(9, 125)),
            t(3, 0, 1, rat(8, 25)),
            t(4, 1, 0, rat(3, 5)),
        ],
        7 => vec![
            t(0, 4, 0, rat(1, seven7)),
            t(1, 2, 1, rat(48, seven7)),
            t(2, 0, 2, rat(64, 64827)),
            t(2, 3, 0, rat(92, 453789)),
            t(3, 1, 1, rat(32, 2401)),
            t(4, 2, 0, rat(30, 2401)),
            t(5, 0, 1, rat(16, 49)),
            t(6, 1, 0, rat(4, 7)),
        ],
        _ => unreachable!(),
    };
    RelationPoly::new(level, terms)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Coefficientwise comparison of both sides of a relation.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub level: u32,
    pub order: usize,
    pub sturm_order: usize,
    pub lhs: QSeries,
    pub rhs: QSeries,
    pub mismatch: Option<Mismatch>,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }

    /// Checking fewer coefficients than the Sturm order proves nothing.
    pub fn below_sturm(&self) -> bool {
        self.order < self.sturm_order
    }
}

/// Expands both sides of `rel` to `order` and compares them exactly.
pub fn verify_relation(rel: &RelationPoly, order: usize) -> VerificationReport {
    let lhs = rel.lhs_series(order);
    let rhs = rel.rhs_series(order);
    let mismatch = lhs.first_difference(&rhs).map(|n| Mismatch {
        exponent: n,
        lhs: lhs.coeff(n).clone(),
        rhs: rhs.coeff(n).clone(),
    });
    VerificationReport {
        level: rel.level,
        order,
        sturm_order: sturm_order(rel.level).unwrap(),
        lhs,
        rhs,
        mismatch,
    }
}

/// The unknowns `(i, monomial)` of the relation ansatz, in canonical order.
pub fn relation_ansatz(level: u32) -> Vec<(u32, GradedMonomial)> {
    (0..level)
        .flat_map(|i| {
            monomial_basis(2 * (level + 1 - i))
                .into_iter()
                .map(move |m| (i, m))
        })
        .collect()
}

/// Solves for the relation coefficients by matching `order + 1` q-expansion
/// coefficients of `Ẽ_N^{N+1}` against every product `Ẽ_N^i·E₄^a·E₆^b` of
/// weight `2(N+1)` with `i < N`.
pub fn discover_relation(level: u32, order: usize) -> Result<RelationPoly, GradedError> {
    let sturm = sturm_order(level)?;
    if order < sturm {
        return Err(GradedError::InsufficientOrder { level, order, sturm });
    }
    let powers = FormPowers::new(level, order);
    let ansatz = relation_ansatz(level);
    let columns: Vec<QSeries> = ansatz
        .iter()
        .map(|(i, m)| powers.etilde(*i).mul(&powers.e4(m.e4)).mul(&powers.e6(m.e6)))
        .collect();
    let matrix: Vec<Vec<Rational>> = (0..=order)
        .map(|n| columns.iter().map(|c| c.coeff(n).clone()).collect())
        .collect();
    let rhs = powers.etilde(level + 1).coeffs().to_vec();
    match exact_linear_solve(&matrix, &rhs) {
        LinearSolution::Unique(x) => {
            let terms = ansatz
                .into_iter()
                .zip(x)
                .map(|((i, m), c)| RelationTerm {
                    etilde_power: i,
                    monomial: m,
                    coeff: c,
                })
                .collect();
            RelationPoly::new(level, terms)
        }
        LinearSolution::Inconsistent => Err(GradedError::NoRelation { order }),
        LinearSolution::Underdetermined { rank, unknowns } => {
            Err(GradedError::NotUnique { order, rank, unknowns })
        }
    }
}

/// [`discover_relation`] at `sturm_order(N) + DEFAULT_MARGIN`.
pub fn discover_relation_default(level: u32) -> Result<RelationPoly, GradedError> {
    discover_relation(level, sturm_order(level)? + DEFAULT_MARGIN)
}

/// A coefficient on which two relations disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermDivergence {
    pub etilde_power: u32,
    pub monomial: GradedMonomial,
    pub printed: Rational,
    pub discovered: Rational,
}

/// Terms where the tabulated relation differs from `discovered`.
pub fn divergence_from_printed(discovered: &RelationPoly) -> Vec<TermDivergence> {
    let printed = printed_relation(discovered.level).expect("level already validated");
    let mut keys: BTreeMap<(u32, std::cmp::Reverse<u32>, u32), ()> = BTreeMap::new();
    for t in printed.terms().iter().chain(discovered.terms()) {
        keys.insert((t.etilde_power, std::cmp::Reverse(t.monomial.e4), t.monomial.e6), ());
    }
    keys.into_keys()
        .filter_map(|(p, std::cmp::Reverse(a), b)| {
            let m = GradedMonomial::new(a, b);
            let pc = printed.coeff_of(p, m);
            let dc = discovered.coeff_of(p, m);
            (pc != dc).then_some(TermDivergence {
                etilde_power: p,
                monomial: m,
                printed: pc,
                discovered: dc,
            })
        })
        .collect()
}

/// `1 − coefficient sum`: zero for any relation that can hold.
pub fn constant_term_deficit(rel: &RelationPoly) -> Rational {
    Rational::one() - rel.coefficient_sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;
    use crate::qseries::SUPPORTED_LEVELS;

    #[test]
    fn monomial_bases() {
        assert_eq!(monomial_basis(4), vec![GradedMonomial::new(1, 0)]);
        assert_eq!(
            monomial_basis(12),
            vec![GradedMonomial::new(3, 0), GradedMonomial::new(0, 2)]
        );
        assert!(monomial_basis(2).is_empty());
        assert_eq!(monomial_basis(0), vec![GradedMonomial::ONE]);
        // dim M_k for k = 24 is 3
        assert_eq!(monomial_basis(24).len(), 3);
    }

    #[test]
    fn sturm_orders() {
        assert_eq!(sturm_order(2).unwrap(), 2);
        assert_eq!(sturm_order(3).unwrap(), 3);
        assert_eq!(sturm_order(5).unwrap(), 6);
        assert_eq!(sturm_order(7).unwrap(), 11);
        assert!(sturm_order(11).is_err());
    }

    #[test]
    fn printed_coefficient_sums() {
        for level in [2, 3, 5] {
            assert_eq!(printed_relation(level).unwrap().coefficient_sum(), rat_int(1));
        }
        let seven = printed_relation(7).unwrap();
        assert_eq!(seven.coefficient_sum(), rat(20568681, 22235661));
        assert_eq!(constant_term_deficit(&seven), rat(180, 2401));
    }

    #[test]
    fn printed_low_levels_verify() {
        let report = verify_relation(&printed_relation(2).unwrap(), 30);
        assert!(report.holds());
        assert!(!report.below_sturm());
    }

    #[test]
    fn perturbed_relation_fails_at_constant_term() {
        let mut terms = printed_relation(2).unwrap().terms().to_vec();
        terms[0].coeff = rat(1, 3);
        let rel = RelationPoly::new(2, terms).unwrap();
        let report = verify_relation(&rel, 10);
        let m = report.mismatch.unwrap();
        assert_eq!(m.exponent, 0);
        assert_eq!(m.lhs, rat_int(1));
        assert_eq!(m.rhs, rat(13, 12));
    }

    #[test]
    fn printed_level_seven_fails_at_order_zero() {
        let report = verify_relation(&printed_relation(7).unwrap(), 0);
        assert!(!report.holds());
        assert!(report.below_sturm());
        assert_eq!(report.mismatch.unwrap().rhs, rat(2221, 2401));
    }

    #[test]
    fn inhomogeneous_terms_rejected() {
        let bad = RelationTerm {
            etilde_power: 1,
            monomial: GradedMonomial::new(0, 1),
            coeff: rat_int(1),
        };
        assert!(matches!(
            RelationPoly::new(2, vec![bad]),
            Err(GradedError::InhomogeneousTerm { weight: 8, expected: 6, .. })
        ));
    }

    #[test]
    fn discovered_relations() {
        assert_eq!(discover_relation_default(2).unwrap(), printed_relation(2).unwrap());
        assert_eq!(discover_relation_default(3).unwrap(), printed_relation(3).unwrap());
        assert_eq!(discover_relation_default(5).unwrap(), printed_relation(5).unwrap());
        let seven = discover_relation_default(7).unwrap();
        assert_eq!(seven.coefficient_sum(), rat_int(1));
        // frozen from an independent sympy Gauss-Jordan solve at order 59
        assert_eq!(seven.coeff_of(4, GradedMonomial::new(2, 0)), rat(30, 343));
        assert_eq!(seven.coeff_of(0, GradedMonomial::new(1, 2)), rat_int(0));
        let div = divergence_from_printed(&seven);
        assert_eq!(div.len(), 1);
        assert_eq!(div[0].printed, rat(30, 2401));
        assert_eq!(div[0].discovered, rat(30, 343));
    }

    #[test]
    fn discovery_stable_under_higher_order() {
        for level in SUPPORTED_LEVELS {
            let base = discover_relation_default(level).unwrap();
            let sturm = sturm_order(level).unwrap();
            assert_eq!(discover_relation(level, sturm + 45).unwrap(), base);
        }
    }

    #[test]
    fn order_below_sturm_rejected() {
        assert!(matches!(
            discover_relation(7, 5),
            Err(GradedError::InsufficientOrder { sturm: 11, .. })
        ));
    }

    #[test]
    fn level_five_solution_vector() {
        let five = discover_relation_default(5).unwrap();
        let got: Vec<Rational> = five.terms().iter().map(|t| t.coeff.clone()).collect();
        assert_eq!(
            got,
            vec![rat(1, 3125), rat(24, 3125), rat(9, 125), rat(8, 25), rat(3, 5)]
        );
    }

    #[test]
    fn ansatz_sizes() {
        assert_eq!(relation_ansatz(2).len(), 2);
        assert_eq!(relation_ansatz(3).len(), 3);
        assert_eq!(relation_ansatz(5).len(), 6);
        assert_eq!(relation_ansatz(7).len(), 9);
    }
}
