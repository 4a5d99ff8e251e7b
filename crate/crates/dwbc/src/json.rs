//! JSON and text forms of the core types.
//!
//! Polynomials serialize as an array of `{"coeff": "num/den", "exps": {...}}`
//! in canonical descending order, complex numbers as `re+imj` strings.

use dwbc_core::operator::Residual;
use dwbc_core::scalar::Rational;
use dwbc_core::{Complex64, LaurentPoly, Monomial, RationalFunction, Spectral, UniPoly, VarId};
use serde_json::{json, Map, Value};

pub fn poly(p: &LaurentPoly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .rev()
            .map(|(m, c)| {
                let exps: Map<String, Value> = m.iter().map(|(v, e)| (v.to_string(), json!(e))).collect();
                json!({ "coeff": format!("{}/{}", c.numer(), c.denom()), "exps": exps })
            })
            .collect(),
    )
}

pub fn parse_poly(v: &Value) -> Result<LaurentPoly, String> {
    let terms = v.as_array().ok_or("polynomial must be an array")?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let coeff: Rational = t["coeff"]
            .as_str()
            .ok_or("term lacks a coeff string")?
            .parse()
            .map_err(|e| format!("bad coefficient: {e}"))?;
        let exps = t["exps"].as_object().ok_or("term lacks an exps object")?;
        let mut pairs = Vec::with_capacity(exps.len());
        for (name, e) in exps {
            let var: VarId = name.parse().map_err(|e| format!("{e}"))?;
            let e = e.as_i64().ok_or("exponent must be an integer")?;
            pairs.push((var, i32::try_from(e).map_err(|_| "exponent out of range")?));
        }
        out.push((Monomial::from_pairs(pairs), coeff));
    }
    Ok(LaurentPoly::from_terms(out))
}

pub fn ratfunc_text(r: &RationalFunction) -> String {
    let num = r.numerator_laurent();
    if *r.denom() == UniPoly::one() {
        return num.to_string();
    }
    format!("({num}) / ({})", r.denominator_laurent())
}

pub fn ratfunc(r: &RationalFunction) -> Value {
    json!({
        "text": ratfunc_text(r),
        "num": poly(&r.numerator_laurent()),
        "den": poly(&r.denominator_laurent()),
    })
}

pub fn complex_text(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}j", z.re, -z.im)
    } else {
        format!("{}+{}j", z.re, z.im)
    }
}

/// Parses `re`, `imj` or `re±imj`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    let bad = || format!("bad complex literal `{s}`");
    let Some(body) = s.strip_suffix('j') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => t.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        None => Ok(Complex64::new(0.0, imag(body)?)),
        Some(i) => Ok(Complex64::new(body[..i].parse().map_err(|_| bad())?, imag(&body[i..])?)),
    }
}

pub fn residual(r: &Residual) -> Value {
    json!({
        "exact": r.exact,
        "zero": r.is_zero,
        "max_abs": r.max_abs,
        "scale": r.scale,
        "relative": r.relative(),
    })
}

pub fn points(ps: &[Spectral<Complex64>]) -> Value {
    Value::Array(ps.iter().map(|p| json!(complex_text(*p.exp()))).collect())
}

pub fn symbolic_points(ps: &[Spectral<LaurentPoly>]) -> Value {
    Value::Array(ps.iter().map(|p| json!(p.exp().to_string())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_roundtrip() {
        let p: LaurentPoly = "3/2*u1^2*w1^-1*q^3 - q + 7".parse().unwrap();
        let v = poly(&p);
        assert_eq!(v[0]["exps"]["u1"], json!(2));
        assert_eq!(parse_poly(&v).unwrap(), p);
        assert_eq!(parse_poly(&poly(&LaurentPoly::zero())).unwrap(), LaurentPoly::zero());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5-0.25j").unwrap(), Complex64::new(1.5, -0.25));
        assert_eq!(parse_complex("2j").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-3").unwrap(), Complex64::new(-3.0, 0.0));
        assert_eq!(parse_complex("1e-3+2E+1j").unwrap(), Complex64::new(1e-3, 20.0));
        assert_eq!(parse_complex("-j").unwrap(), Complex64::new(0.0, -1.0));
        assert!(parse_complex("1+2i").is_err());
        let z = Complex64::new(0.1, -1e-17);
        assert_eq!(parse_complex(&complex_text(z)).unwrap(), z);
    }

    #[test]
    fn ratfunc_text_drops_unit_denominator() {
        let p: LaurentPoly = "q + 1".parse().unwrap();
        assert_eq!(
            ratfunc_text(&RationalFunction::from_laurent(&p).unwrap()),
            p.to_string()
        );
        let r = RationalFunction::from_laurent(&"q - q^-1".parse().unwrap()).unwrap();
        assert!(ratfunc_text(&r).contains(") / ("));
    }
}
