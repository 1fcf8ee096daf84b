//! Point syntax: `i`, `rho`, `base:i`, `inv:rho+5`, `inv:i-1`, or an exact
//! rational `x+yi` such as `1/4+3/2i` or `-0.5+1.25i`.

use std::fmt;

use etilde::exactnum::{AlgebraicPoint, Base, ComplexEnclosure, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSpec {
    Algebraic(AlgebraicPoint),
    Rational { re: Rational, im: Rational },
}

impl PointSpec {
    pub fn enclose(&self, bits: u32) -> ComplexEnclosure {
        match self {
            PointSpec::Algebraic(p) => p.enclose(bits),
            PointSpec::Rational { re, im } => ComplexEnclosure::point(re.clone(), im.clone()),
        }
    }
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSpec::Algebraic(p) => write!(f, "{p}"),
            PointSpec::Rational { re, im } => write!(f, "{re} + ({im})i"),
        }
    }
}

fn parse_base(s: &str) -> Option<Base> {
    match s {
        "i" => Some(Base::I),
        "rho" => Some(Base::Rho),
        _ => None,
    }
}

fn parse_inverted(s: &str) -> Result<AlgebraicPoint, String> {
    let (name, shift) = match s.find(['+', '-']) {
        Some(at) => {
            let shift: i64 = s[at..]
                .trim_start_matches('+')
                .parse()
                .map_err(|_| format!("bad shift in `{s}`"))?;
            (&s[..at], shift)
        }
        None => (s, 0),
    };
    let base = parse_base(name).ok_or_else(|| format!("unknown base `{name}` (expected i or rho)"))?;
    Ok(AlgebraicPoint::inverted(base, shift))
}

fn parse_rational_point(s: &str) -> Result<PointSpec, String> {
    let body = s
        .strip_suffix('i')
        .ok_or_else(|| format!("rational point `{s}` must end in i, as in 1/4+3/2i"))?;
    // the sign separating the parts is the last + or - that is not leading
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(k, _)| k)
        .last()
        .ok_or_else(|| format!("rational point `{s}` needs both parts, as in 0+2i"))?;
    let re = parse_rational(&body[..split])?;
    let im_text = body[split..].trim_start_matches('+');
    let im = match im_text {
        "" | "-" => return Err(format!("missing imaginary part in `{s}`")),
        t => parse_rational(t)?,
    };
    if im <= Rational::from_integer(0.into()) {
        return Err(format!("`{s}` is not in the upper half plane"));
    }
    Ok(PointSpec::Rational { re, im })
}

pub fn parse_point(s: &str) -> Result<PointSpec, String> {
    let s = s.trim();
    if let Some(base) = parse_base(s) {
        return Ok(PointSpec::Algebraic(AlgebraicPoint::base_point(base)));
    }
    if let Some(rest) = s.strip_prefix("base:") {
        let base = parse_base(rest).ok_or_else(|| format!("unknown base `{rest}` (expected i or rho)"))?;
        return Ok(PointSpec::Algebraic(AlgebraicPoint::base_point(base)));
    }
    if let Some(rest) = s.strip_prefix("inv:") {
        return parse_inverted(rest).map(PointSpec::Algebraic);
    }
    parse_rational_point(s)
}

/// Parses `n`, `n/d` or a decimal `n.ddd`, exactly.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a rational number");
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let x = Rational::new(n, BigInt::from(10).pow(frac.len() as u32));
        return Ok(if neg { -x } else { x });
    }
    Ok(Rational::from_integer(s.parse().map_err(|_| bad())?))
}
