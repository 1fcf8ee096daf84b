//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines reach stdout directly.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use etilde::certify::{certify_all, cusp_check, separation_from, Verdict};
use etilde::evaluate::{coefficient_bound, evaluate_at, q_enclosure, tail_bound, EvalError, EvalParams};
use etilde::exactnum::{rat, rat_int, to_decimal, to_f64, AlgebraicPoint, Base, ComplexEnclosure, Rational};
use etilde::geometry::{candidate_zeros, fricke_residual, relocate};
use etilde::graded::{
    constant_term_deficit, discover_relation, divergence_from_printed, printed_relation, sturm_order, verify_relation,
    DEFAULT_MARGIN,
};
use etilde::qseries::{series, SeriesId, SUPPORTED_LEVELS};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    for level in [2, 3, 5] {
        let order = sturm_order(level).unwrap() + DEFAULT_MARGIN;
        let report = verify_relation(&printed_relation(level).unwrap(), order);
        pass &= report.holds();
        notes.push(format!("N={level} to q^{order} {}", if report.holds() { "ok" } else { "mismatch" }));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(5);
    outcome(pass, format!("{}; {}", notes.join(", "), secs(elapsed)))
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for level in [2, 3, 5] {
        let order = sturm_order(level).unwrap() + DEFAULT_MARGIN;
        let same = discover_relation(level, order).unwrap() == printed_relation(level).unwrap();
        pass &= same;
        notes.push(format!("N={level} {}", if same { "matches" } else { "differs" }));
    }
    let rel7 = discover_relation(7, sturm_order(7).unwrap() + DEFAULT_MARGIN).unwrap();
    let sum_one = rel7.coefficient_sum().is_one();
    let holds = verify_relation(&rel7, 200).holds();
    let divergence = divergence_from_printed(&rel7);
    let deficit = constant_term_deficit(&printed_relation(7).unwrap());
    pass &= sum_one && holds && !divergence.is_empty() && deficit == rat(180, 2401);
    let diverging: Vec<String> = divergence
        .iter()
        .map(|d| format!("{}·Ẽ^{}: printed {} vs {}", d.monomial, d.etilde_power, d.printed, d.discovered))
        .collect();
    notes.push(format!(
        "N=7 sum 1: {sum_one}, verified to q^200: {holds}, printed deficit {deficit}, divergent [{}]",
        diverging.join("; ")
    ));
    outcome(pass, notes.join(", "))
}

fn criterion_3() -> Outcome {
    let expected: [(u32, Vec<AlgebraicPoint>); 4] = [
        (2, vec![AlgebraicPoint::inverted(Base::I, 1)]),
        (3, vec![AlgebraicPoint::inverted(Base::Rho, 2)]),
        (5, vec![AlgebraicPoint::inverted(Base::I, 2), AlgebraicPoint::inverted(Base::I, 3)]),
        (7, vec![AlgebraicPoint::inverted(Base::Rho, 3), AlgebraicPoint::inverted(Base::Rho, 5)]),
    ];
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for (level, zeros) in expected {
        match certify_all(level, &EvalParams::default()) {
            Ok(report) => {
                let others_nonzero = report
                    .certificates
                    .iter()
                    .filter(|c| !zeros.contains(&c.point))
                    .all(|c| c.verdict == Verdict::Nonzero);
                let ok = report.zeros == zeros && others_nonzero && report.undecided().is_empty();
                pass &= ok;
                let sep = separation_from(&report)
                    .iter()
                    .map(|(_, s)| to_decimal(s, 4))
                    .collect::<Vec<_>>()
                    .join("/");
                let list: Vec<String> = report.zeros.iter().map(|p| p.to_string()).collect();
                notes.push(format!("N={level} zeros {{{}}} sep {sep}", list.join(", ")));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("N={level} error {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    outcome(pass, format!("{}; {}", notes.join(", "), secs(elapsed)))
}

fn criterion_4() -> Outcome {
    let params = EvalParams::default();
    let tol = rat(1, 10_000_000_000);
    let e6_i = evaluate_at(SeriesId::E6, &ComplexEnclosure::i(), &params).unwrap();
    let rho = AlgebraicPoint::base_point(Base::Rho).enclose(params.bits + 4);
    let e4_rho = evaluate_at(SeriesId::E4, &rho, &params).unwrap();
    let pass = [&e6_i, &e4_rho].iter().all(|v| v.contains_zero() && v.max_width() < tol);
    outcome(
        pass,
        format!(
            "width E6(i) {:.3e}, E4(rho) {:.3e}",
            to_f64(&e6_i.max_width()),
            to_f64(&e4_rho.max_width())
        ),
    )
}

fn criterion_5() -> Outcome {
    let params = EvalParams::default();
    let tol = rat(1, 100_000_000);
    let e4_i = evaluate_at(SeriesId::E4, &ComplexEnclosure::i(), &params).unwrap();
    let rho = AlgebraicPoint::base_point(Base::Rho).enclose(params.bits + 4);
    let e6_rho = evaluate_at(SeriesId::E6, &rho, &params).unwrap();
    let pass = [&e4_i, &e6_rho]
        .iter()
        .all(|v| v.re.lo() > &rat_int(1) && v.im.contains_zero() && v.im.width() < tol);
    outcome(
        pass,
        format!(
            "inf Re E4(i) {}, inf Re E6(rho) {}",
            to_decimal(e4_i.re.lo(), 12),
            to_decimal(e6_rho.re.lo(), 12)
        ),
    )
}

const TAIL_HORIZON: usize = 5000;
const TAIL_CASES: usize = 1000;
// r is drawn as k/2^R_BITS; the tail sum is kept as upward-rounded fixed point at 2^-FIX_BITS
const R_BITS: u32 = 20;
const FIX_BITS: u32 = 24;

fn abs_coeffs(id: SeriesId, order: usize) -> Vec<u128> {
    series(id, order)
        .coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_integer().abs().to_u128().unwrap()
        })
        .collect()
}

/// Upper bound, in units of 2^-FIX_BITS, for Σ_{m<n≤5000} |aₙ| r^{n−m−1}, by
/// Horner from the far end with every product rounded up.
fn scaled_tail_upper(abs: &[u128], m: usize, k: u128) -> u128 {
    let mut acc: u128 = 0;
    for a in abs[m + 1..=TAIL_HORIZON].iter().rev() {
        let carried = acc.checked_mul(k).unwrap().div_ceil(1 << R_BITS);
        acc = (a << FIX_BITS).checked_add(carried).unwrap();
    }
    acc
}

fn criterion_6() -> Outcome {
    let k_max = (9u128 << R_BITS) / 10;
    let results: Vec<(SeriesId, usize)> = SeriesId::all()
        .into_par_iter()
        .map(|id| {
            let abs = abs_coeffs(id, TAIL_HORIZON);
            let bound = coefficient_bound(id);
            let mut rng = ChaCha8Rng::seed_from_u64(0x7a11 + id.weight() as u64 + id.level().unwrap_or(1) as u64);
            let mut failures = 0;
            for _ in 0..TAIL_CASES {
                let m = rng.gen_range(0..=200usize);
                let k = rng.gen_range(1..=k_max);
                let r = Rational::new(BigInt::from(k), BigInt::one() << R_BITS);
                let tail = tail_bound(&bound, m, &r).unwrap();
                let upper = Rational::new(BigInt::from(scaled_tail_upper(&abs, m, k)), BigInt::one() << FIX_BITS);
                if upper * num_traits::pow(r, m + 1) > tail {
                    failures += 1;
                }
            }
            (id, failures)
        })
        .collect();
    let failures: usize = results.iter().map(|(_, f)| f).sum();
    outcome(
        failures == 0,
        format!(
            "{} cases per series over {} series, {failures} violations",
            TAIL_CASES,
            results.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut violations = Vec::new();
    for id in SeriesId::all() {
        let bound = coefficient_bound(id);
        let coeffs = series(id, 2000);
        for n in 1..=2000usize {
            let majorant = &bound.c * Rational::from_integer(BigInt::from(n).pow(bound.p));
            if coeffs.coeff(n).abs() > majorant {
                violations.push(format!("{id} at n={n}"));
                break;
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("all series, n <= 2000; violations: {}", violations.len()),
    )
}

// Non-rigorous high-precision oracle: fixed point with ORACLE_BITS fractional bits.
const ORACLE_BITS: u32 = 720;
const ENCLOSURE_CASES: usize = 1000;

#[derive(Clone)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn mul(&self, o: &Fx) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> ORACLE_BITS,
            im: (&self.re * &o.im + &self.im * &o.re) >> ORACLE_BITS,
        }
    }
}

fn fx_from(x: &Rational) -> BigInt {
    (x.numer() << ORACLE_BITS) / x.denom()
}

/// π from the Gauss–Legendre iteration.
fn oracle_pi() -> BigInt {
    let one = BigInt::one() << ORACLE_BITS;
    let sqrt = |x: &BigInt| (x << ORACLE_BITS).sqrt();
    let mut a = one.clone();
    let mut b = sqrt(&(&one >> 1));
    let mut t = &one >> 2;
    let mut p = BigInt::one();
    for _ in 0..12 {
        let next_a = (&a + &b) >> 1;
        b = sqrt(&((&a * &b) >> ORACLE_BITS));
        let d = &a - &next_a;
        t -= (&p * &d * &d) >> ORACLE_BITS;
        a = next_a;
        p <<= 1;
    }
    let s = &a + &b;
    ((&s * &s) >> ORACLE_BITS) * &one / (t << 2)
}

fn oracle_exp(z: &Fx) -> Fx {
    let one = BigInt::one() << ORACLE_BITS;
    let mut sum = Fx {
        re: one.clone(),
        im: BigInt::zero(),
    };
    let mut term = sum.clone();
    let eps = BigInt::one() << 4;
    for n in 1u32.. {
        term = term.mul(z);
        term.re /= n;
        term.im /= n;
        sum.re += &term.re;
        sum.im += &term.im;
        if n > 8 && term.re.abs() < eps && term.im.abs() < eps {
            break;
        }
    }
    sum
}

fn to_rational(x: &BigInt) -> Rational {
    Rational::new(x.clone(), BigInt::one() << ORACLE_BITS)
}

/// Number of terms after which C·nᵖ·|q|ⁿ is far below the oracle resolution.
fn oracle_terms(abs_q: f64) -> usize {
    let target = -(ORACLE_BITS as f64 + 40.0) * std::f64::consts::LN_2;
    let mut n = 64usize;
    while 6.0 * (n as f64).ln() + 7.0 + (n as f64) * abs_q.ln() > target {
        n += 64;
    }
    n
}

fn criterion_8() -> Outcome {
    let params = EvalParams::default();
    let ids = SeriesId::all();
    let pi = oracle_pi();
    let max_terms = oracle_terms(0.9);
    let coeffs: Vec<Vec<BigInt>> = ids
        .iter()
        .map(|&id| series(id, max_terms).coeffs().iter().map(|c| c.to_integer()).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut points = Vec::with_capacity(ENCLOSURE_CASES);
    while points.len() < ENCLOSURE_CASES {
        let tau = ComplexEnclosure::point(
            rat(rng.gen_range(-500..=500), 1000),
            rat(rng.gen_range(15..=1500), 1000),
        );
        let q = q_enclosure(&tau, &params).unwrap();
        if q.l1_sup() <= params.r_max {
            points.push(tau);
        }
    }

    let results: Vec<(usize, usize)> = points
        .par_iter()
        .map(|tau| {
            let two_pi: BigInt = &pi << 1;
            let z = Fx {
                re: -((&two_pi * fx_from(tau.im.lo())) >> ORACLE_BITS as usize),
                im: (&two_pi * fx_from(tau.re.lo())) >> ORACLE_BITS,
            };
            let q = oracle_exp(&z);
            let abs_q = (q.re.to_f64().unwrap().hypot(q.im.to_f64().unwrap())) / 2f64.powi(ORACLE_BITS as i32);
            let terms = oracle_terms(abs_q).min(max_terms);
            let mut powers = Vec::with_capacity(terms + 1);
            powers.push(Fx {
                re: BigInt::one() << ORACLE_BITS,
                im: BigInt::zero(),
            });
            for n in 1..=terms {
                powers.push(powers[n - 1].mul(&q));
            }
            let mut inside = 0;
            let mut errors = 0;
            for (id, a) in ids.iter().zip(&coeffs) {
                let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
                for (c, p) in a.iter().zip(&powers) {
                    if c.sign() != Sign::NoSign {
                        re += c * &p.re;
                        im += c * &p.im;
                    }
                }
                match evaluate_at(*id, tau, &params) {
                    Ok(v) if v.contains(&to_rational(&re), &to_rational(&im)) => inside += 1,
                    _ => errors += 1,
                }
            }
            (inside, errors)
        })
        .collect();
    let inside: usize = results.iter().map(|r| r.0).sum();
    let outside: usize = results.iter().map(|r| r.1).sum();
    outcome(
        outside == 0,
        format!(
            "{ENCLOSURE_CASES} points x {} series: {inside} inside, {outside} outside or failed",
            ids.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    // direct evaluation is attempted up to r = 19/20 so that out-of-default-region
    // candidates such as -1/(rho+5) can be compared with their relocated value
    let params = EvalParams::default().with_r_max(rat(19, 20));
    let mut pass = true;
    let mut compared = Vec::new();
    for level in SUPPORTED_LEVELS {
        let id = SeriesId::etilde(level).unwrap();
        for p in candidate_zeros(level).unwrap().points.iter().filter(|p| p.shift > 0) {
            let r = relocate(p, level).unwrap();
            let direct = evaluate_at(id, &p.enclose(params.bits + 4), &params);
            let moved = evaluate_at(id, &r.target.enclose(params.bits + 4), &params);
            match (direct, moved) {
                (Ok(d), Ok(t)) => {
                    let ok = d.intersects(&r.pull_back(&t, params.bits));
                    pass &= ok;
                    compared.push(format!("N={level} {p}{}", if ok { "" } else { " MISMATCH" }));
                }
                (Err(EvalError::RegionViolation { .. }), _) | (_, Err(EvalError::RegionViolation { .. })) => {}
                (Err(e), _) | (_, Err(e)) => {
                    pass = false;
                    compared.push(format!("N={level} {p} error {e}"));
                }
            }
        }
    }
    let mut fricke = 0;
    for level in SUPPORTED_LEVELS {
        for tau in etilde::certify::fricke_samples() {
            let ok = fricke_residual(level, &tau, &EvalParams::default()).is_ok_and(|r| r.contains_zero());
            pass &= ok;
            fricke += usize::from(ok);
        }
    }
    let rho5 = compared.iter().any(|s| s.starts_with("N=7 -1/(rho+5)"));
    pass &= rho5;
    outcome(
        pass,
        format!(
            "{} direct/relocated pairs intersect ({}); Fricke residual contains 0 at {fricke}/12 samples",
            compared.len(),
            compared.join(", ")
        ),
    )
}

fn criterion_10() -> Outcome {
    let params = EvalParams::default();
    let mut pass = true;
    for level in SUPPORTED_LEVELS {
        let constant = series(SeriesId::etilde(level).unwrap(), 0).constant_term().clone();
        pass &= constant.is_one();
        pass &= cusp_check(level, &params).is_ok_and(|r| r.constant_term_is_one());
    }
    outcome(pass, "constant term of Ẽ_N is 1 for N = 2, 3, 5, 7")
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("identity verification", criterion_1),
        ("relation discovery", criterion_2),
        ("zero certification", criterion_3),
        ("known level-1 zeros", criterion_4),
        ("base-point bounds", criterion_5),
        ("tail-bound soundness", criterion_6),
        ("coefficient-bound soundness", criterion_7),
        ("enclosure soundness", criterion_8),
        ("transformation consistency", criterion_9),
        ("cusp behavior", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        println!(
            "criterion {} [{name}]: {} ({}) [{}]",
            k + 1,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            secs(start.elapsed())
        );
        failed += usize::from(!result.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
