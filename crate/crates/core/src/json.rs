//! JSON forms of polynomials, Weyl elements and boundary-module elements.
//!
//! Coefficients are written as decimal strings `num`/`den` so that they keep
//! arbitrary precision. Terms are emitted in canonical order, which makes the
//! output byte-for-byte reproducible.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{normalize, AlgebraError, Monomial, OrbitVariable, Polynomial, Rational};
use crate::orbits::{ModelError, OrbitModel};
use crate::weyl::{DElement, DKey, WeylElement, WeylKey};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("monomial {0:?} is not normal ordered (positions before momenta)")]
    NotNormalOrdered(Vec<i32>),
    #[error("index {0} is not allowed in this slot")]
    WrongSign(i32),
    #[error("unknown alphabet tag {0:?}")]
    Alphabet(String),
    #[error("hbar exponent {0} is below -1")]
    HbarExponent(i32),
}

/// Serde adapter storing a rational as `"n/d"` (or `"n"`).
pub mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub fn parse_rational(text: &str) -> Result<Rational, JsonError> {
    let bad = || JsonError::Rational(text.to_string());
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn split_coefficient(c: &Rational) -> (String, String) {
    (c.numer().to_string(), c.denom().to_string())
}

fn join_coefficient(num: &str, den: &str) -> Result<Rational, JsonError> {
    parse_rational(&format!("{num}/{den}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialTerm {
    pub mono: Vec<i32>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub terms: Vec<PolynomialTerm>,
}

impl PolynomialJson {
    pub fn from_polynomial(p: &Polynomial) -> Self {
        PolynomialJson {
            terms: p
                .terms()
                .map(|(m, c)| {
                    let (num, den) = split_coefficient(c);
                    PolynomialTerm { mono: m.indices(), num, den }
                })
                .collect(),
        }
    }

    /// Rebuilds the polynomial, taking gradings from `model`. Monomials may be
    /// listed in any order; reordering signs are applied.
    pub fn to_polynomial(&self, model: &OrbitModel) -> Result<Polynomial, JsonError> {
        let mut p = Polynomial::zero();
        for t in &self.terms {
            let vars = variables(model, &t.mono)?;
            let c = join_coefficient(&t.num, &t.den)?;
            if let Some((m, s)) = normalize(&vars)? {
                p.add_term(m, if s < 0 { -c } else { c });
            }
        }
        Ok(p)
    }
}

fn variables(model: &OrbitModel, indices: &[i32]) -> Result<Vec<OrbitVariable>, JsonError> {
    indices.iter().map(|&k| model.variable(k).map_err(JsonError::from)).collect()
}

fn sorted_monomial(model: &OrbitModel, indices: &[i32]) -> Result<Option<(Monomial, i32)>, JsonError> {
    Ok(normalize(&variables(model, indices)?)?)
}

pub fn polynomial_to_json(p: &Polynomial) -> String {
    serde_json::to_string(&PolynomialJson::from_polynomial(p)).expect("serialize polynomial")
}

pub fn polynomial_from_json(text: &str, model: &OrbitModel) -> Result<Polynomial, JsonError> {
    let form: PolynomialJson = serde_json::from_str(text)?;
    form.to_polynomial(model)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylTerm {
    /// Positions (positive indices) followed by momenta (negative indices).
    pub mono: Vec<i32>,
    pub hbar: i32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylJson {
    /// `"+"` or `"-"` when the element belongs to one end of a cobordism.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<String>,
    pub terms: Vec<WeylTerm>,
}

impl WeylJson {
    pub fn from_element(w: &WeylElement, alphabet: Option<&str>) -> Self {
        WeylJson {
            alphabet: alphabet.map(str::to_string),
            terms: w
                .terms()
                .map(|(k, c)| {
                    let (num, den) = split_coefficient(c);
                    let mut mono = k.q.indices();
                    mono.extend(k.p.indices());
                    WeylTerm { mono, hbar: k.hbar, num, den }
                })
                .collect(),
        }
    }

    pub fn to_element(&self, model: &OrbitModel) -> Result<WeylElement, JsonError> {
        if let Some(a) = &self.alphabet {
            if a != "+" && a != "-" {
                return Err(JsonError::Alphabet(a.clone()));
            }
        }
        let mut w = WeylElement::zero();
        for t in &self.terms {
            if t.hbar < -1 {
                return Err(JsonError::HbarExponent(t.hbar));
            }
            let cut = t.mono.iter().position(|&k| k < 0).unwrap_or(t.mono.len());
            if t.mono[cut..].iter().any(|&k| k > 0) {
                return Err(JsonError::NotNormalOrdered(t.mono.clone()));
            }
            let c = join_coefficient(&t.num, &t.den)?;
            let (Some((q, sq)), Some((p, sp))) =
                (sorted_monomial(model, &t.mono[..cut])?, sorted_monomial(model, &t.mono[cut..])?)
            else {
                continue;
            };
            let c = if sq * sp < 0 { -c } else { c };
            w.add_term(WeylKey { hbar: t.hbar, q, p }, c);
        }
        Ok(w)
    }
}

pub fn weyl_to_json(w: &WeylElement, alphabet: Option<&str>) -> String {
    serde_json::to_string(&WeylJson::from_element(w, alphabet)).expect("serialize weyl element")
}

pub fn weyl_from_json(text: &str, model: &OrbitModel) -> Result<WeylElement, JsonError> {
    let form: WeylJson = serde_json::from_str(text)?;
    form.to_element(model)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DTerm {
    /// Positive indices of `q^-` variables.
    pub minus: Vec<i32>,
    /// Negative indices of `p^+` variables.
    pub plus: Vec<i32>,
    pub hbar: i32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DElementJson {
    pub terms: Vec<DTerm>,
}

impl DElementJson {
    pub fn from_element(x: &DElement) -> Self {
        DElementJson {
            terms: x
                .terms()
                .map(|(k, c)| {
                    let (num, den) = split_coefficient(c);
                    DTerm { minus: k.minus.indices(), plus: k.plus.indices(), hbar: k.hbar, num, den }
                })
                .collect(),
        }
    }

    /// `minus_model` grades the `q^-` variables, `plus_model` the `p^+`.
    pub fn to_element(
        &self,
        minus_model: &OrbitModel,
        plus_model: &OrbitModel,
    ) -> Result<DElement, JsonError> {
        let mut x = DElement::zero();
        for t in &self.terms {
            if let Some(&k) = t.minus.iter().find(|&&k| k <= 0) {
                return Err(JsonError::WrongSign(k));
            }
            if let Some(&k) = t.plus.iter().find(|&&k| k >= 0) {
                return Err(JsonError::WrongSign(k));
            }
            let c = join_coefficient(&t.num, &t.den)?;
            let (Some((minus, s1)), Some((plus, s2))) =
                (sorted_monomial(minus_model, &t.minus)?, sorted_monomial(plus_model, &t.plus)?)
            else {
                continue;
            };
            let c = if s1 * s2 < 0 { -c } else { c };
            x.add_term(DKey { hbar: t.hbar, minus, plus }, c);
        }
        Ok(x)
    }
}

pub fn delement_to_json(x: &DElement) -> String {
    serde_json::to_string(&DElementJson::from_element(x)).expect("serialize boundary element")
}

pub fn delement_from_json(
    text: &str,
    minus_model: &OrbitModel,
    plus_model: &OrbitModel,
) -> Result<DElement, JsonError> {
    let form: DElementJson = serde_json::from_str(text)?;
    form.to_element(minus_model, plus_model)
}

/// Human-readable rendering of a coefficient for aligned tables.
pub fn format_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else if c.is_negative() {
        format!("-{}/{}", -c.numer(), c.denom())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    #[test]
    fn polynomial_schema_matches_documented_form() {
        let model = OrbitModel::circle();
        let p = polynomial_from_json(
            r#"{"terms":[{"mono":[1,-2,1],"num":"1","den":"2"},{"mono":[-1,1],"num":"3","den":"1"}]}"#,
            &model,
        )
        .unwrap();
        assert_eq!(p.len(), 2);
        let text = polynomial_to_json(&p);
        assert_eq!(
            text,
            r#"{"terms":[{"mono":[-1,1],"num":"3","den":"1"},{"mono":[-2,1,1],"num":"1","den":"2"}]}"#
        );
        assert_eq!(polynomial_from_json(&text, &model).unwrap(), p);
    }

    #[test]
    fn rejects_bad_variables_and_garbage() {
        let h = OrbitModel::hyperbolic(2, 1).unwrap();
        let err = polynomial_from_json(r#"{"terms":[{"mono":[2,-2],"num":"1","den":"1"}]}"#, &h);
        assert!(matches!(err, Err(JsonError::Model(ModelError::BadOrbit(2)))));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational("-6/4").unwrap(), rational(-3, 2));
    }

    #[test]
    fn weyl_json_requires_normal_order() {
        let model = OrbitModel::circle();
        let ok = weyl_from_json(r#"{"terms":[{"mono":[1,-1],"hbar":-1,"num":"1","den":"1"}]}"#, &model);
        assert!(ok.is_ok());
        let bad = weyl_from_json(r#"{"terms":[{"mono":[-1,1],"hbar":0,"num":"1","den":"1"}]}"#, &model);
        assert!(matches!(bad, Err(JsonError::NotNormalOrdered(_))));
        let low = weyl_from_json(r#"{"terms":[{"mono":[],"hbar":-2,"num":"1","den":"1"}]}"#, &model);
        assert!(matches!(low, Err(JsonError::HbarExponent(-2))));
    }
}
