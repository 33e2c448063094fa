//! JSON documents describing differentials.
//!
//! Rational form:
//! `{"numerator": [[re, im], ...], "denominator": [...], "poles": [{"at": "inf" | [re, im], "order": n}]}`
//! with ascending coefficients. `denominator` defaults to `[[1, 0]]`;
//! `poles`, when present, must agree with the computed pole list.
//!
//! Laurent form: `{"order": n, "sqrt_coeffs": [[k, re, im], ...]}` where `k`
//! is the (half-integer) exponent of `z` in `sqrt(q)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numeric::Poly;

use super::{Form, LaurentModel, PoleLocation, QuadraticDifferential};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Symbol(String),
    Point([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleSpec {
    pub at: PointSpec,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalDoc {
    pub numerator: Vec<[f64; 2]>,
    #[serde(default = "unit_poly")]
    pub denominator: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<PoleSpec>>,
}

fn unit_poly() -> Vec<[f64; 2]> {
    vec![[1.0, 0.0]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaurentDoc {
    pub order: u32,
    pub sqrt_coeffs: Vec<[f64; 3]>,
}

/// Either document shape.
#[derive(Debug, Clone, PartialEq)]
pub enum DifferentialDoc {
    Rational(RationalDoc),
    Laurent(LaurentDoc),
}

fn schema(e: serde_json::Error) -> Error {
    Error::Schema(e.to_string())
}

fn poly_of(cs: &[[f64; 2]]) -> Poly {
    Poly::new(cs.iter().map(|c| C64::new(c[0], c[1])).collect())
}

impl DifferentialDoc {
    pub fn from_value(v: Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema("differential must be a JSON object".into()))?;
        if obj.contains_key("order") || obj.contains_key("sqrt_coeffs") {
            serde_json::from_value(v).map(Self::Laurent).map_err(schema)
        } else {
            serde_json::from_value(v).map(Self::Rational).map_err(schema)
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(text).map_err(schema)?)
    }

    pub fn to_value(&self) -> Value {
        match self {
            Self::Rational(r) => serde_json::to_value(r),
            Self::Laurent(l) => serde_json::to_value(l),
        }
        .expect("plain data serializes")
    }

    pub fn build(&self) -> Result<QuadraticDifferential> {
        match self {
            Self::Rational(doc) => {
                let q = QuadraticDifferential::rational(
                    poly_of(&doc.numerator),
                    poly_of(&doc.denominator),
                )?;
                if let Some(declared) = &doc.poles {
                    check_declared(&q, declared)?;
                }
                Ok(q)
            }
            Self::Laurent(doc) => {
                let mut terms = Vec::with_capacity(doc.sqrt_coeffs.len());
                for &[k, re, im] in &doc.sqrt_coeffs {
                    let twice = 2.0 * k;
                    if twice.fract() != 0.0 || twice.abs() > 1e6 {
                        return Err(Error::Schema(format!(
                            "exponent {k} is not a half-integer"
                        )));
                    }
                    terms.push((twice as i32, C64::new(re, im)));
                }
                Ok(QuadraticDifferential::laurent(LaurentModel::new(
                    doc.order, terms,
                )?))
            }
        }
    }

    /// Document describing `q` (poles listed for rational forms).
    pub fn describe(q: &QuadraticDifferential) -> Self {
        let pair = |c: &C64| [c.re, c.im];
        match q.form() {
            Form::RationalSphere {
                numerator,
                denominator,
            } => Self::Rational(RationalDoc {
                numerator: numerator.coeffs().iter().map(pair).collect(),
                denominator: denominator.coeffs().iter().map(pair).collect(),
                poles: Some(
                    q.poles()
                        .iter()
                        .map(|p| PoleSpec {
                            at: match p.at {
                                PoleLocation::Infinity => PointSpec::Symbol("inf".into()),
                                PoleLocation::Finite(z) => PointSpec::Point([z.re, z.im]),
                            },
                            order: p.order,
                        })
                        .collect(),
                ),
            }),
            Form::LaurentModel(m) => Self::Laurent(LaurentDoc {
                order: m.order(),
                sqrt_coeffs: m
                    .terms()
                    .iter()
                    .map(|&(e, c)| [e as f64 / 2.0, c.re, c.im])
                    .collect(),
            }),
        }
    }
}

fn check_declared(q: &QuadraticDifferential, declared: &[PoleSpec]) -> Result<()> {
    let mut seen = vec![false; q.poles().len()];
    for spec in declared {
        let at = match &spec.at {
            PointSpec::Symbol(s) if s == "inf" => PoleLocation::Infinity,
            PointSpec::Symbol(s) => {
                return Err(Error::Schema(format!(
                    "pole location \"{s}\" must be \"inf\" or [re, im]"
                )))
            }
            PointSpec::Point([re, im]) => PoleLocation::Finite(C64::new(*re, *im)),
        };
        let idx = q.find_pole(at).ok_or_else(|| {
            Error::InvalidInput(format!("declared pole at {at:?} is not a pole of q"))
        })?;
        let actual = q.poles()[idx].order;
        if actual != spec.order {
            return Err(Error::InvalidInput(format!(
                "declared pole at {at:?} has order {}, but q has order {actual}",
                spec.order
            )));
        }
        seen[idx] = true;
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidInput(format!(
            "pole {:?} of order {} is missing from the declared list",
            q.poles()[i].at,
            q.poles()[i].order
        )));
    }
    Ok(())
}

/// Parses either document shape into a differential.
pub fn parse_differential(text: &str) -> Result<QuadraticDifferential> {
    DifferentialDoc::parse(text)?.build()
}
