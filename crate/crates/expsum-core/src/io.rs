//! File formats for polynomials, rational functions, and quadratic forms,
//! plus JSON rendering of exact sum values.
//!
//! A polynomial document is `{"n_vars": n, "terms": [{"coef": c, "exps":
//! [e_1, ..., e_n]}, ...]}`; a rational function is `{"num": ..., "den":
//! ...}` (a bare polynomial is accepted as well); a symmetric form is
//! `{"n": n, "matrix": [[...], ...]}`.

use crate::census::QuadraticForm;
use crate::cyclotomic::CycloElement;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ratfunc::RationalFunc;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermDoc {
    pub coef: i64,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyDoc {
    pub n_vars: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AmplitudeDoc {
    Rational { num: PolyDoc, den: PolyDoc },
    Poly(PolyDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormDoc {
    pub n: usize,
    pub matrix: Vec<Vec<i64>>,
}

impl PolyDoc {
    pub fn to_poly(&self) -> Result<MultiPoly> {
        MultiPoly::from_terms(
            self.n_vars,
            self.terms.iter().map(|t| (t.coef, t.exps.clone())),
        )
    }

    pub fn from_poly(p: &MultiPoly) -> PolyDoc {
        PolyDoc {
            n_vars: p.n_vars(),
            terms: p
                .terms()
                .map(|(e, c)| TermDoc {
                    coef: c,
                    exps: e.clone(),
                })
                .collect(),
        }
    }
}

impl AmplitudeDoc {
    pub fn to_rational(&self) -> Result<RationalFunc> {
        match self {
            AmplitudeDoc::Poly(p) => Ok(RationalFunc::from_poly(p.to_poly()?)),
            AmplitudeDoc::Rational { num, den } => {
                RationalFunc::new(num.to_poly()?, den.to_poly()?)
            }
        }
    }
}

impl FormDoc {
    pub fn to_form(&self) -> Result<QuadraticForm> {
        if self.matrix.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "declared n = {} but matrix has {} rows",
                self.n,
                self.matrix.len()
            )));
        }
        QuadraticForm::new(self.matrix.clone())
    }
}

/// Parse an amplitude (polynomial or rational function) from JSON text.
/// Diagnostics keep serde_json's line/column information.
pub fn parse_amplitude(text: &str) -> Result<RationalFunc> {
    let doc: AmplitudeDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    doc.to_rational()
}

/// Parse a symmetric quadratic form from JSON text.
pub fn parse_form(text: &str) -> Result<QuadraticForm> {
    let doc: FormDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    doc.to_form()
}

/// JSON rendering of an exact cyclotomic value: conductor (as p, m for
/// prime powers), canonical coefficients, and the complex embedding with
/// 12 significant digits.
pub fn cyclo_to_json(v: &CycloElement) -> serde_json::Value {
    let q = v.conductor();
    let mut body = serde_json::Map::new();
    if let Some((p, m)) = prime_power_split(q) {
        body.insert("p".into(), p.into());
        body.insert("m".into(), m.into());
    }
    body.insert("conductor".into(), q.into());
    body.insert(
        "coeffs".into(),
        serde_json::Value::Array(
            v.coeffs()
                .iter()
                .map(|&c| serde_json::Value::String(c.to_string()))
                .collect(),
        ),
    );
    let emb = v.embed_complex();
    body.insert("embedding_re".into(), format!("{:.11e}", emb.re).into());
    body.insert("embedding_im".into(), format!("{:.11e}", emb.im).into());
    serde_json::Value::Object(body)
}

/// Split q into (p, m) when q is a prime power.
pub fn prime_power_split(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    let mut q0 = q;
    while p * p <= q0 {
        if q0 % p == 0 {
            let mut m = 0;
            while q0 % p == 0 {
                q0 /= p;
                m += 1;
            }
            return if q0 == 1 { Some((p, m)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_polynomial() {
        let f = parse_amplitude(r#"{"n_vars": 1, "terms": [{"coef": 1, "exps": [2]}]}"#).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.num().eval_exact(&[3]), 9);
    }

    #[test]
    fn parse_rational() {
        let f = parse_amplitude(
            r#"{"num": {"n_vars": 1, "terms": [{"coef": 1, "exps": [0]}]},
                "den": {"n_vars": 1, "terms": [{"coef": 1, "exps": [1]}]}}"#,
        )
        .unwrap();
        assert!(!f.is_polynomial());
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse_amplitude("{ not json").unwrap_err();
        match err {
            Error::InvalidInput(msg) => assert!(msg.contains("line"), "got: {msg}"),
            other => panic!("unexpected error {other:?}"),
        }
        // wrong exponent arity
        let err =
            parse_amplitude(r#"{"n_vars": 2, "terms": [{"coef": 1, "exps": [1]}]}"#).unwrap_err();
        assert!(matches!(err, Error::VarCountMismatch { .. }));
    }

    #[test]
    fn parse_form_validates_symmetry() {
        let ok = parse_form(r#"{"n": 2, "matrix": [[1, 2], [2, 1]]}"#);
        assert!(ok.is_ok());
        let bad = parse_form(r#"{"n": 2, "matrix": [[1, 2], [3, 1]]}"#);
        assert!(bad.is_err());
        let bad = parse_form(r#"{"n": 3, "matrix": [[1, 2], [2, 1]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn cyclo_json_has_prime_power_fields() {
        let v = CycloElement::root_of_unity(9, 1).scalar_mul(2);
        let j = cyclo_to_json(&v);
        assert_eq!(j["p"], 3);
        assert_eq!(j["m"], 2);
        assert_eq!(j["coeffs"][1], "2");
    }

    #[test]
    fn prime_power_split_cases() {
        assert_eq!(prime_power_split(9), Some((3, 2)));
        assert_eq!(prime_power_split(7), Some((7, 1)));
        assert_eq!(prime_power_split(15), None);
        assert_eq!(prime_power_split(1), None);
    }
}
