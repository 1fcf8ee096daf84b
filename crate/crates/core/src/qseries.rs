//! Truncated q-expansions with exact rational coefficients.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{rat_int, Rational};

/// Levels for which `Ẽ_N` is supported.
pub const SUPPORTED_LEVELS: [u32; 4] = [2, 3, 5, 7];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QSeriesError {
    #[error("unsupported level {0}; expected one of 2, 3, 5, 7")]
    UnsupportedLevel(u32),
    #[error("unknown series name {0:?}")]
    UnknownSeries(String),
}

pub fn check_level(n: u32) -> Result<u32, QSeriesError> {
    if SUPPORTED_LEVELS.contains(&n) {
        Ok(n)
    } else {
        Err(QSeriesError::UnsupportedLevel(n))
    }
}

/// `σ_k(n) = Σ_{d | n} d^k`.
pub fn sigma(k: u32, n: u64) -> BigUint {
    assert!(n >= 1, "sigma is defined for n >= 1");
    let mut total = BigUint::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigUint::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigUint::from(e).pow(k);
            }
        }
        d += 1;
    }
    total
}

/// `σ_k(n)` for `n = 0..=max` by a divisor sieve; entry 0 is zero.
pub fn sigma_table(k: u32, max: usize) -> Vec<BigUint> {
    let mut table = vec![BigUint::zero(); max + 1];
    for d in 1..=max {
        let dk = BigUint::from(d).pow(k);
        let mut m = d;
        while m <= max {
            table[m] += &dk;
            m += d;
        }
    }
    table
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesKind {
    E2,
    E4,
    E6,
    Etilde,
}

/// Names one of the series `E₂, E₄, E₆, Ẽ_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesId {
    kind: SeriesKind,
    level: u32,
}

impl SeriesId {
    pub const E2: SeriesId = SeriesId { kind: SeriesKind::E2, level: 1 };
    pub const E4: SeriesId = SeriesId { kind: SeriesKind::E4, level: 1 };
    pub const E6: SeriesId = SeriesId { kind: SeriesKind::E6, level: 1 };

    pub fn etilde(level: u32) -> Result<SeriesId, QSeriesError> {
        Ok(SeriesId {
            kind: SeriesKind::Etilde,
            level: check_level(level)?,
        })
    }

    /// Every series id: `E₂, E₄, E₆` and `Ẽ_N` for each supported level.
    pub fn all() -> Vec<SeriesId> {
        let mut ids = vec![SeriesId::E2, SeriesId::E4, SeriesId::E6];
        ids.extend(SUPPORTED_LEVELS.iter().map(|&n| SeriesId::etilde(n).unwrap()));
        ids
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    /// `Some(N)` for `Ẽ_N`, `None` for the level-1 series.
    pub fn level(&self) -> Option<u32> {
        match self.kind {
            SeriesKind::Etilde => Some(self.level),
            _ => None,
        }
    }

    pub fn weight(&self) -> u32 {
        match self.kind {
            SeriesKind::E2 | SeriesKind::Etilde => 2,
            SeriesKind::E4 => 4,
            SeriesKind::E6 => 6,
        }
    }
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SeriesKind::E2 => write!(f, "E2"),
            SeriesKind::E4 => write!(f, "E4"),
            SeriesKind::E6 => write!(f, "E6"),
            SeriesKind::Etilde => write!(f, "Etilde{}", self.level),
        }
    }
}

impl FromStr for SeriesId {
    type Err = QSeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E2" => Ok(SeriesId::E2),
            "E4" => Ok(SeriesId::E4),
            "E6" => Ok(SeriesId::E6),
            _ => {
                let level = s
                    .strip_prefix("Etilde")
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| QSeriesError::UnknownSeries(s.to_string()))?;
                SeriesId::etilde(level)
            }
        }
    }
}

/// `Σ_{n=0}^{order} a_n q^n` with exact rational `a_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds a series from `order + 1` coefficients. Panics on an empty vector.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-series keeps at least the constant term");
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Rational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Self::new(self.coeffs[..=order].to_vec())
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let order = self.order().min(other.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut result = QSeries::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `f(q) ↦ f(q^N)`, keeping the original order.
    pub fn substitute_qn(&self, n: usize) -> QSeries {
        assert!(n >= 1, "substitute_qn needs N >= 1");
        let order = self.order();
        let mut out = vec![Rational::zero(); order + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            let target = k * n;
            if target > order {
                break;
            }
            out[target] = c.clone();
        }
        Self::new(out)
    }

    /// First exponent at which two series differ, up to the common order.
    pub fn first_difference(&self, other: &QSeries) -> Option<usize> {
        let order = self.order().min(other.order());
        (0..=order).find(|&n| self.coeffs[n] != other.coeffs[n])
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}q", c)?,
                _ => write!(f, "{}q^{}", c, n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        QSeries::new((0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect())
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        QSeries::new((0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect())
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

fn level_one(order: usize, k: u32, factor: i64) -> QSeries {
    let table = sigma_table(k, order);
    let f = BigInt::from(factor);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Rational::one());
    for s in table.into_iter().skip(1) {
        coeffs.push(Rational::from_integer(&f * BigInt::from(s)));
    }
    QSeries::new(coeffs)
}

/// `E₂ = 1 − 24 Σ σ₁(n) qⁿ`.
pub fn series_e2(order: usize) -> QSeries {
    level_one(order, 1, -24)
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ`.
pub fn series_e4(order: usize) -> QSeries {
    level_one(order, 3, 240)
}

/// `E₆ = 1 − 504 Σ σ₅(n) qⁿ`.
pub fn series_e6(order: usize) -> QSeries {
    level_one(order, 5, -504)
}

/// `Ẽ_N = (N·E₂(q^N) − E₂(q))/(N − 1)`, computed termwise:
/// `a_n = 24/(N−1)·(σ₁(n) − N·σ₁(n/N))`, the second term only when `N | n`.
pub fn series_etilde(level: u32, order: usize) -> Result<QSeries, QSeriesError> {
    let n_level = check_level(level)? as usize;
    let table = sigma_table(1, order);
    let factor = Rational::new(BigInt::from(24), BigInt::from(n_level - 1));
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Rational::one());
    for n in 1..=order {
        let mut s = BigInt::from(table[n].clone());
        if n % n_level == 0 {
            s -= BigInt::from(n_level) * BigInt::from(table[n / n_level].clone());
        }
        coeffs.push(&factor * Rational::from_integer(s));
    }
    Ok(QSeries::new(coeffs))
}

/// Uncached constructor for any series id.
pub fn build_series(id: SeriesId, order: usize) -> QSeries {
    match id.kind {
        SeriesKind::E2 => series_e2(order),
        SeriesKind::E4 => series_e4(order),
        SeriesKind::E6 => series_e6(order),
        SeriesKind::Etilde => series_etilde(id.level, order).expect("SeriesId levels are validated"),
    }
}

type SeriesCache = RwLock<HashMap<(SeriesId, usize), Arc<QSeries>>>;

fn cache() -> &'static SeriesCache {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized series for `(id, order)`.
pub fn series(id: SeriesId, order: usize) -> Arc<QSeries> {
    if let Some(s) = cache().read().unwrap().get(&(id, order)) {
        return Arc::clone(s);
    }
    let built = Arc::new(build_series(id, order));
    let mut w = cache().write().unwrap();
    Arc::clone(w.entry((id, order)).or_insert(built))
}

/// Populate the cache ahead of a parallel phase.
pub fn prefetch(ids: &[SeriesId], orders: &[usize]) {
    for &id in ids {
        for &order in orders {
            series(id, order);
        }
    }
}
