//! Certificate JSON. Objects are `serde_json::Map`s, which keep keys sorted,
//! so rendering is canonical and a parse/render round trip is byte-identical.
//! Rationals are `["numerator", "denominator"]` decimal strings.

use serde_json::{json, Value};

use etilde::certify::{Certificate, Report};
use etilde::evaluate::EvalParams;
use etilde::exactnum::{AlgebraicPoint, ComplexEnclosure, PointForm, Rational};
use etilde::graded::RelationPoly;

pub fn rational(x: &Rational) -> Value {
    json!([x.numer().to_string(), x.denom().to_string()])
}

pub fn enclosure(c: &ComplexEnclosure) -> Value {
    json!({
        "re": [rational(c.re.lo()), rational(c.re.hi())],
        "im": [rational(c.im.lo()), rational(c.im.hi())],
    })
}

pub fn point(p: &AlgebraicPoint) -> Value {
    json!({
        "base": p.base.name(),
        "k": p.shift,
        "form": match p.form {
            PointForm::Base => "BASE",
            PointForm::Inverted => "INVERTED",
        },
        "label": p.to_string(),
    })
}

pub fn params(p: &EvalParams) -> Value {
    json!({
        "m": p.m,
        "bits": p.bits,
        "exp_terms": p.exp_terms,
        "r_max": rational(&p.r_max),
    })
}

pub fn relation(rel: &RelationPoly) -> Value {
    Value::Array(
        rel.terms()
            .iter()
            .map(|t| {
                json!({
                    "etilde_power": t.etilde_power,
                    "e4": t.monomial.e4,
                    "e6": t.monomial.e6,
                    "coeff": rational(&t.coeff),
                })
            })
            .collect(),
    )
}

pub fn certificate(c: &Certificate) -> Value {
    json!({
        "point": point(&c.point),
        "verdict": c.verdict.as_str(),
        "etilde": enclosure(&c.etilde),
        "cofactor": enclosure(&c.cofactor),
        "relocated": c.relocated(),
        "relocation_target": c.relocation.as_ref().map(|r| point(&r.target)),
        "params": params(&c.params),
        "rounds": c.rounds,
        "narrative": c.narrative,
    })
}

pub fn report(r: &Report) -> Value {
    json!({
        "level": r.level,
        "relation": relation(&r.relation),
        "verified_order": r.verified_order,
        "sturm_order": r.sturm_order,
        "divergence_from_printed": r.divergence.iter().map(|d| json!({
            "etilde_power": d.etilde_power,
            "e4": d.monomial.e4,
            "e6": d.monomial.e6,
            "printed": rational(&d.printed),
            "discovered": rational(&d.discovered),
        })).collect::<Vec<_>>(),
        "factored": r.factored.to_string(),
        "candidates": r.certificates.iter().map(certificate).collect::<Vec<_>>(),
        "zeros": r.zeros.iter().map(point).collect::<Vec<_>>(),
    })
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are always serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use etilde::exactnum::{rat, Base};

    #[test]
    fn rationals_are_string_pairs() {
        assert_eq!(rational(&rat(-3, 4)), json!(["-3", "4"]));
    }

    #[test]
    fn point_fields() {
        let v = point(&AlgebraicPoint::inverted(Base::Rho, 5));
        assert_eq!(v["base"], "rho");
        assert_eq!(v["k"], 5);
        assert_eq!(v["form"], "INVERTED");
    }

    #[test]
    fn keys_render_sorted() {
        let s = render(&params(&EvalParams::default()));
        let bits = s.find("\"bits\"").unwrap();
        let m = s.find("\"m\"").unwrap();
        assert!(bits < m);
    }
}
