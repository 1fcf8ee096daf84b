use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::dyadic::DyadicRect;
use super::{pow2, rat_int, sqrt_lower, sqrt_upper, ComplexEnclosure, EnclosureError, Rational, RealEnclosure};

/// Enclosure of `arctan(1/x)` from the alternating Taylor series, of width at most `2^-bits`.
fn arctan_recip(x: u64, bits: u32) -> RealEnclosure {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let tol = Rational::new(BigInt::one(), pow2(bits));
    let mut sum = Rational::zero();
    let mut x_pow = x.clone(); // x^(2k+1)
    let mut k: u64 = 0;
    loop {
        let term = Rational::new(BigInt::one(), BigInt::from(2 * k + 1) * &x_pow);
        if term <= tol {
            // the true value lies between S_k and S_k +/- term
            let other = if k % 2 == 0 { &sum + &term } else { &sum - &term };
            return if other >= sum {
                RealEnclosure::new_unchecked(sum, other)
            } else {
                RealEnclosure::new_unchecked(other, sum)
            };
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        x_pow *= &x2;
        k += 1;
    }
}

fn pi_cache() -> &'static Mutex<HashMap<u32, RealEnclosure>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, RealEnclosure>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of π of width at most `2^-bits`, from Machin's formula
/// `π = 16 arctan(1/5) - 4 arctan(1/239)`.
pub fn enclose_pi(bits: u32) -> RealEnclosure {
    assert!(bits >= 8, "enclose_pi needs at least 8 bits");
    if let Some(hit) = pi_cache().lock().unwrap().get(&bits) {
        return hit.clone();
    }
    let a = arctan_recip(5, bits + 6);
    let b = arctan_recip(239, bits + 6);
    let pi = (&a.scale(&rat_int(16)) - &b.scale(&rat_int(4))).round_out(bits + 2);
    pi_cache().lock().unwrap().insert(bits, pi.clone());
    pi
}

/// Enclosure of √3 of width at most `2^-bits`.
pub fn enclose_sqrt3(bits: u32) -> RealEnclosure {
    assert!(bits >= 8, "enclose_sqrt3 needs at least 8 bits");
    let three = rat_int(3);
    RealEnclosure::new_unchecked(sqrt_lower(&three, bits), sqrt_upper(&three, bits))
}

/// Enclosure of `e^z` from the degree-`terms` Taylor polynomial in exact
/// rectangle arithmetic, inflated by the remainder majorant
/// `s^(terms+1)/(terms+1)! * 1/(1 - s/(terms+2))` with `s >= sup|z|`.
pub fn exp_enclosure(z: &ComplexEnclosure, terms: u32) -> Result<ComplexEnclosure, EnclosureError> {
    exp_impl(z, terms, None)
}

/// As [`exp_enclosure`], rounding intermediate endpoints outward to `2^-bits`.
pub fn exp_enclosure_rounded(
    z: &ComplexEnclosure,
    terms: u32,
    bits: u32,
) -> Result<ComplexEnclosure, EnclosureError> {
    exp_impl(z, terms, Some(bits))
}

fn exp_impl(z: &ComplexEnclosure, terms: u32, bits: Option<u32>) -> Result<ComplexEnclosure, EnclosureError> {
    let s = z.abs_sup_bound(bits.unwrap_or(64).max(32));
    let limit = terms as u64 + 2;
    if s >= rat_int(limit as i64) {
        return Err(EnclosureError::RemainderDiverges { sup_abs: s, limit });
    }

    // Horner: 1 + z(1 + z/2(1 + z/3(...)))
    let acc = match bits {
        Some(b) => {
            let zd = DyadicRect::from_enclosure(z, b);
            let zero = DyadicRect::point(&Rational::zero(), b);
            let mut acc = DyadicRect::point(&Rational::one(), b);
            for j in (1..=terms).rev() {
                acc = zd.mul_add(&acc, &zero).div_int(j as u64).add_real_int(1);
            }
            acc.to_enclosure()
        }
        None => {
            let mut acc = ComplexEnclosure::one();
            for j in (1..=terms).rev() {
                let step = (z * &acc).scale(&Rational::new(BigInt::one(), BigInt::from(j)));
                acc = &ComplexEnclosure::one() + &step;
            }
            acc
        }
    };

    let mut remainder = num_traits::pow(s.clone(), terms as usize + 1);
    let mut fact = BigInt::one();
    for j in 2..=(terms as u64 + 1) {
        fact *= j;
    }
    remainder /= Rational::from_integer(fact);
    remainder /= Rational::one() - s / rat_int(limit as i64);
    let remainder = match bits {
        Some(b) => super::ceil_to_grid(&remainder, b),
        None => remainder,
    };
    Ok(acc.inflate(&remainder))
}
