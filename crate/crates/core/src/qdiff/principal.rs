use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Poly, Series};

use super::{Form, Mobius, QuadraticDifferential};

/// Truncated Laurent data of `sqrt(q)` at a pole in a chart `t`:
/// `sqrt(q) = t^{-n/2} (c_0 + c_1 t + ...)`, principal branch at `c_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtLaurent {
    pub order: u32,
    pub coeffs: Vec<C64>,
}

impl SqrtLaurent {
    /// Coefficient of `t^{-1}` (zero for odd order).
    pub fn residue_coeff(&self) -> Option<C64> {
        if self.order % 2 == 1 {
            return Some(C64::new(0.0, 0.0));
        }
        self.coeffs.get((self.order / 2 - 1) as usize).copied()
    }
}

/// Polynomial `P` with `sqrt(q) = t^{-n/2}(P(t) + t^m g(t)) dt`, where
/// `m = n/2` for even and `(n-1)/2` for odd order. Defined up to a global
/// sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalPart {
    pub pole_order: u32,
    pub coefficients: Vec<C64>,
}

/// Degree of the principal part at a pole of order `n >= 3`.
pub fn principal_degree(n: u32) -> usize {
    if n % 2 == 0 {
        ((n - 2) / 2) as usize
    } else {
        ((n - 3) / 2) as usize
    }
}

impl PrincipalPart {
    pub fn new(pole_order: u32, coefficients: Vec<C64>) -> Result<Self> {
        if pole_order < 3 {
            return Err(Error::NotHigherOrder {
                order: pole_order,
                what: "a principal part",
            });
        }
        let deg = principal_degree(pole_order);
        if coefficients.len() != deg + 1 {
            return Err(Error::InvalidInput(format!(
                "principal part at a pole of order {pole_order} has degree {deg}, got {} coefficients",
                coefficients.len()
            )));
        }
        if coefficients[0].norm() == 0.0 {
            return Err(Error::InvalidInput("principal part constant term is zero".into()));
        }
        Ok(Self {
            pole_order,
            coefficients,
        })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// The residue coefficient `a` (top coefficient at even order, zero at
    /// odd order).
    pub fn residue(&self) -> C64 {
        if self.pole_order % 2 == 0 {
            *self.coefficients.last().unwrap()
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            pole_order: self.pole_order,
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }

    /// Representative of the sign class with `Re c_0 > 0` (or `Re c_0 = 0`
    /// and `Im c_0 > 0`); used for serialization.
    pub fn canonical(&self) -> Self {
        let c0 = self.coefficients[0];
        if c0.re > 0.0 || (c0.re == 0.0 && c0.im > 0.0) {
            self.clone()
        } else {
            self.negated()
        }
    }

    /// Equality up to the global sign, coefficientwise within `tol`.
    pub fn equivalent(&self, other: &Self, tol: f64) -> bool {
        if self.pole_order != other.pole_order || self.coefficients.len() != other.coefficients.len()
        {
            return false;
        }
        let close = |s: f64| {
            self.coefficients
                .iter()
                .zip(&other.coefficients)
                .all(|(a, b)| (a - b * s).norm() <= tol * (1.0 + a.norm()))
        };
        close(1.0) || close(-1.0)
    }
}

const SERIES_TOL: f64 = 1e-10;

fn valuation_tol(p: &Poly) -> usize {
    let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    p.coeffs()
        .iter()
        .position(|c| c.norm() > SERIES_TOL * scale)
        .unwrap_or(p.coeffs().len())
}

/// `sum_k p_k num^k den^{deg - k}`: the polynomial `p(num/den) den^deg`.
fn compose(p: &Poly, num: &Poly, den: &Poly) -> Poly {
    let deg = p.degree();
    p.coeffs()
        .iter()
        .enumerate()
        .fold(Poly::constant(C64::new(0.0, 0.0)), |acc, (k, &c)| {
            acc.add(&num.pow(k).mul(&den.pow(deg - k)).scale(c))
        })
}

/// Laurent coefficients of `sqrt(q)` at the pole centred by `chart`, with
/// `len` terms.
pub fn sqrt_laurent(
    q: &QuadraticDifferential,
    pole: usize,
    chart: &Mobius,
    len: usize,
) -> Result<SqrtLaurent> {
    let p = q.pole(pole)?;
    if !chart.centres(p.at) {
        return Err(Error::InvalidInput(format!(
            "chart does not vanish at pole #{pole}"
        )));
    }
    match q.form() {
        Form::LaurentModel(m) => {
            if *chart != Mobius::identity() {
                return Err(Error::InvalidInput(
                    "Laurent models are expanded in their own coordinate only".into(),
                ));
            }
            let n = m.order() as i32;
            let coeffs = (0..len as i32).map(|j| m.coeff(-n + 2 * j)).collect();
            Ok(SqrtLaurent {
                order: m.order(),
                coeffs,
            })
        }
        Form::RationalSphere {
            numerator,
            denominator,
        } => {
            let num = Poly::new(vec![-chart.b, chart.d]);
            let den = Poly::new(vec![chart.a, -chart.c]);
            let nt = compose(numerator, &num, &den);
            let dt = compose(denominator, &num, &den);
            let e = denominator.degree() as i32 - numerator.degree() as i32 - 4;
            let vn = valuation_tol(&nt);
            let vd = valuation_tol(&dt);
            let vden = if chart.a.norm() > 0.0 { 0 } else { 1 };
            let total = vn as i32 - vd as i32 + e * vden;
            if total >= 0 {
                return Err(Error::ZeroAtPole);
            }
            let n = (-total) as u32;
            if n != p.order {
                return Err(Error::InsufficientExpansion(format!(
                    "expansion sees a pole of order {n}, expected {}",
                    p.order
                )));
            }
            let sn = Series::from_poly_shifted(&nt, vn, len);
            let sd = Series::from_poly_shifted(&dt, vd, len);
            let sden = Series::from_poly_shifted(&den, vden as usize, len)
                .powi(e)
                .ok_or_else(|| Error::InsufficientExpansion("chart factor vanishes".into()))?;
            let det = chart.det();
            let h = sn
                .div(&sd)
                .ok_or_else(|| Error::InsufficientExpansion("denominator series vanishes".into()))?
                .mul(&sden)
                .scale(det * det);
            let h0 = h.coeffs[0];
            if !(h0.norm() > 1e-300) || !h0.is_finite() {
                return Err(Error::InsufficientExpansion(format!(
                    "leading coefficient {h0} underflows"
                )));
            }
            let root = h
                .sqrt()
                .ok_or_else(|| Error::InsufficientExpansion("square root failed".into()))?;
            if root.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InsufficientExpansion("non-finite coefficient".into()));
            }
            Ok(SqrtLaurent {
                order: n,
                coeffs: root.coeffs,
            })
        }
    }
}

/// Principal part of `sqrt(q)` at a pole in the given chart.
pub fn principal_part(
    q: &QuadraticDifferential,
    pole: usize,
    chart: &Mobius,
) -> Result<PrincipalPart> {
    let order = q.pole(pole)?.order;
    if order < 3 {
        return Err(Error::NotHigherOrder {
            order,
            what: "a principal part",
        });
    }
    let deg = principal_degree(order);
    let lau = sqrt_laurent(q, pole, chart, deg + 3)?;
    PrincipalPart::new(order, lau.coeffs[..=deg].to_vec())
        .map_err(|_| Error::InsufficientExpansion("vanishing constant term".into()))
}
