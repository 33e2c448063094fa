use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Poly;

use super::chart::Mobius;

/// Where a pole sits on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PoleLocation {
    Finite(C64),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub at: C64,
    pub order: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub at: PoleLocation,
    pub order: u32,
}

/// Local model given directly by the Laurent terms of `sqrt(q)`:
/// `sqrt(q) = sum c_k t^k` where each exponent `k` is a half-integer,
/// stored doubled (`twice_exp = 2k`).
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentModel {
    order: u32,
    terms: Vec<(i32, C64)>,
    // integer-exponent terms of q itself
    q_terms: Vec<(i32, C64)>,
}

impl LaurentModel {
    /// Validates the shape: the lowest exponent is `-n/2` with a nonzero
    /// coefficient and all exponents share its parity.
    pub fn new(order: u32, terms: Vec<(i32, C64)>) -> Result<Self> {
        if order < 2 {
            return Err(Error::PoleOrderTooSmall(order));
        }
        let lead = -(order as i32);
        let mut merged: Vec<(i32, C64)> = Vec::new();
        for (e, c) in terms {
            if e < lead {
                return Err(Error::InvalidInput(format!(
                    "exponent {} below -n/2 = {}",
                    e as f64 / 2.0,
                    lead as f64 / 2.0
                )));
            }
            if (e - lead) % 2 != 0 {
                return Err(Error::InvalidInput(format!(
                    "exponent {} has the wrong parity for a pole of order {order}",
                    e as f64 / 2.0
                )));
            }
            match merged.iter_mut().find(|(k, _)| *k == e) {
                Some(slot) => slot.1 += c,
                None => merged.push((e, c)),
            }
        }
        merged.sort_by_key(|(e, _)| *e);
        match merged.first() {
            Some(&(e, c)) if e == lead && c.norm() > 0.0 => {}
            _ => {
                return Err(Error::InvalidInput(
                    "the z^(-n/2) coefficient of sqrt(q) must be nonzero".into(),
                ))
            }
        }
        let mut q_terms: Vec<(i32, C64)> = Vec::new();
        for &(e1, c1) in &merged {
            for &(e2, c2) in &merged {
                let e = (e1 + e2) / 2;
                match q_terms.iter_mut().find(|(k, _)| *k == e) {
                    Some(slot) => slot.1 += c1 * c2,
                    None => q_terms.push((e, c1 * c2)),
                }
            }
        }
        q_terms.sort_by_key(|(e, _)| *e);
        Ok(Self {
            order,
            terms: merged,
            q_terms,
        })
    }

    /// The normal form `(z^{-n/2} + a/z)^2 dz^2` for even `n`, or
    /// `z^{-n} dz^2` for odd `n` (where `a` is ignored).
    pub fn normal_form(order: u32, a: C64) -> Result<Self> {
        let n = order as i32;
        let mut terms = vec![(-n, C64::new(1.0, 0.0))];
        if order % 2 == 0 && a.norm() > 0.0 {
            terms.push((-2, a));
        }
        Self::new(order, terms)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `(2k, c_k)` pairs in increasing exponent order.
    pub fn terms(&self) -> &[(i32, C64)] {
        &self.terms
    }

    /// Coefficient of `t^{e/2}` in `sqrt(q)`.
    pub fn coeff(&self, twice_exp: i32) -> C64 {
        self.terms
            .iter()
            .find(|(e, _)| *e == twice_exp)
            .map(|t| t.1)
            .unwrap_or_default()
    }

    fn eval_q(&self, t: C64) -> C64 {
        self.q_terms.iter().map(|&(e, c)| c * t.powi(e)).sum()
    }

    /// `t^n q(t)` as a polynomial; its nonzero roots are the zeros of q.
    fn cleared_sqrt_poly(&self) -> Poly {
        let lead = -(self.order as i32);
        let top = self.terms.last().map(|t| t.0).unwrap_or(lead);
        let mut coeffs = vec![C64::new(0.0, 0.0); ((top - lead) / 2 + 1) as usize];
        for &(e, c) in &self.terms {
            coeffs[((e - lead) / 2) as usize] += c;
        }
        Poly::new(coeffs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    /// `q(z) = numerator(z) / denominator(z)` on the Riemann sphere.
    RationalSphere { numerator: Poly, denominator: Poly },
    LaurentModel(LaurentModel),
}

/// A meromorphic quadratic differential `q(z) dz^2` with cached zeros and
/// poles.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticDifferential {
    form: Form,
    zeros: Vec<Zero>,
    poles: Vec<Pole>,
}

const ROOT_CLUSTER: f64 = 1e-6;

impl QuadraticDifferential {
    /// Builds `numerator/denominator dz^2` on the sphere.
    ///
    /// The pole at infinity has order `deg N - deg D + 4`. A zero at infinity
    /// (negative value) or a common root of numerator and denominator is
    /// rejected.
    pub fn rational(numerator: Poly, denominator: Poly) -> Result<Self> {
        if numerator.is_zero() {
            return Err(Error::InvalidInput("numerator is identically zero".into()));
        }
        if denominator.is_zero() {
            return Err(Error::InvalidInput("denominator is identically zero".into()));
        }
        let zeros: Vec<Zero> = numerator
            .roots(ROOT_CLUSTER)
            .into_iter()
            .map(|r| Zero {
                at: r.at,
                order: r.multiplicity,
            })
            .collect();
        let mut poles: Vec<Pole> = denominator
            .roots(ROOT_CLUSTER)
            .into_iter()
            .map(|r| Pole {
                at: PoleLocation::Finite(r.at),
                order: r.multiplicity,
            })
            .collect();
        for z in &zeros {
            for p in &poles {
                if let PoleLocation::Finite(pa) = p.at {
                    if (pa - z.at).norm() < 1e-8 * (1.0 + pa.norm()) {
                        return Err(Error::InvalidInput(format!(
                            "numerator and denominator share the root {}",
                            z.at
                        )));
                    }
                }
            }
        }
        let inf_order = numerator.degree() as i64 - denominator.degree() as i64 + 4;
        if inf_order < 0 {
            return Err(Error::InvalidInput(format!(
                "q has a zero of order {} at infinity; place it in a finite chart",
                -inf_order
            )));
        }
        if inf_order > 0 {
            poles.push(Pole {
                at: PoleLocation::Infinity,
                order: inf_order as u32,
            });
        }
        let qd = Self {
            form: Form::RationalSphere {
                numerator,
                denominator,
            },
            zeros,
            poles,
        };
        debug_assert_eq!(qd.degree_defect(), Some(0));
        Ok(qd)
    }

    /// Polynomial differential `p(z) dz^2` from ascending real coefficients.
    pub fn polynomial_real(coeffs: &[f64]) -> Result<Self> {
        Self::rational(
            Poly::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect()),
            Poly::constant(C64::new(1.0, 0.0)),
        )
    }

    pub fn laurent(model: LaurentModel) -> Self {
        let zeros = model
            .cleared_sqrt_poly()
            .roots(ROOT_CLUSTER)
            .into_iter()
            .filter(|r| r.at.norm() > 0.0)
            .map(|r| Zero {
                at: r.at,
                order: 2 * r.multiplicity,
            })
            .collect();
        let poles = vec![Pole {
            at: PoleLocation::Finite(C64::new(0.0, 0.0)),
            order: model.order,
        }];
        Self {
            form: Form::LaurentModel(model),
            zeros,
            poles,
        }
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn pole(&self, idx: usize) -> Result<&Pole> {
        self.poles
            .get(idx)
            .ok_or_else(|| Error::InvalidInput(format!("no pole #{idx}")))
    }

    /// Index of the pole at the given location, if any.
    pub fn find_pole(&self, at: PoleLocation) -> Option<usize> {
        self.poles.iter().position(|p| match (p.at, at) {
            (PoleLocation::Infinity, PoleLocation::Infinity) => true,
            (PoleLocation::Finite(a), PoleLocation::Finite(b)) => {
                (a - b).norm() < 1e-8 * (1.0 + a.norm())
            }
            _ => false,
        })
    }

    /// `(sum of zero orders) - (sum of pole orders) + 4` for sphere forms;
    /// zero whenever the bookkeeping holds. `None` for local models.
    pub fn degree_defect(&self) -> Option<i64> {
        match self.form {
            Form::RationalSphere { .. } => {
                let z: i64 = self.zeros.iter().map(|z| z.order as i64).sum();
                let p: i64 = self.poles.iter().map(|p| p.order as i64).sum();
                Some(z - p + 4)
            }
            Form::LaurentModel(_) => None,
        }
    }

    /// `q(z)` in the native coordinate.
    pub fn eval(&self, z: C64) -> C64 {
        match &self.form {
            Form::RationalSphere {
                numerator,
                denominator,
            } => numerator.eval(z) / denominator.eval(z),
            Form::LaurentModel(m) => m.eval_q(z),
        }
    }

    /// The finite singular points (zeros and finite poles).
    pub fn finite_singularities(&self) -> Vec<C64> {
        let mut v: Vec<C64> = self.zeros.iter().map(|z| z.at).collect();
        v.extend(self.poles.iter().filter_map(|p| match p.at {
            PoleLocation::Finite(a) => Some(a),
            PoleLocation::Infinity => None,
        }));
        v
    }

    /// The standard chart centred at a pole: `t = z - p`, or `t = 1/z` at
    /// infinity.
    pub fn default_chart(&self, pole: usize) -> Result<Mobius> {
        Ok(match self.pole(pole)?.at {
            PoleLocation::Finite(p) => Mobius::translate_to_origin(p),
            PoleLocation::Infinity => Mobius::inversion(),
        })
    }

    /// `q` expressed in the chart `t`: `q(z(t)) (dz/dt)^2`.
    pub fn eval_in_chart(&self, chart: &Mobius, t: C64) -> C64 {
        let z = chart.from_chart(t);
        let dz = chart.dz_dt(t);
        self.eval(z) * dz * dz
    }

    /// Zeros of `q` mapped into the chart coordinate (zeros sent to infinity
    /// by the chart are dropped).
    pub fn zeros_in_chart(&self, chart: &Mobius) -> Vec<C64> {
        self.zeros
            .iter()
            .map(|z| chart.to_chart(z.at))
            .filter(|t| t.is_finite())
            .collect()
    }

    /// Poles other than `except`, mapped into the chart.
    pub fn other_poles_in_chart(&self, chart: &Mobius, except: usize) -> Vec<C64> {
        self.poles
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != except)
            .filter_map(|(_, p)| match p.at {
                PoleLocation::Finite(a) => Some(chart.to_chart(a)),
                PoleLocation::Infinity => Some(chart.image_of_infinity()),
            })
            .filter(|t| t.is_finite())
            .collect()
    }

    /// Multiplies the differential by a complex constant.
    pub fn scaled(&self, s: C64) -> Result<Self> {
        match &self.form {
            Form::RationalSphere {
                numerator,
                denominator,
            } => Self::rational(numerator.scale(s), denominator.clone()),
            Form::LaurentModel(m) => {
                let r = s.sqrt();
                Ok(Self::laurent(LaurentModel::new(
                    m.order,
                    m.terms.iter().map(|&(e, c)| (e, c * r)).collect(),
                )?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_dz2_has_order_five_pole_at_infinity() {
        let q = QuadraticDifferential::polynomial_real(&[0.0, 1.0]).unwrap();
        assert_eq!(q.zeros().len(), 1);
        assert_eq!(
            q.poles(),
            &[Pole {
                at: PoleLocation::Infinity,
                order: 5
            }]
        );
        assert_eq!(q.degree_defect(), Some(0));
    }

    #[test]
    fn bookkeeping_with_finite_poles() {
        // (z^2 - 1) / z^3
        let num = Poly::new(vec![C64::new(-1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        let den = Poly::monomial(C64::new(1.0, 0.0), 3);
        let q = QuadraticDifferential::rational(num, den).unwrap();
        assert_eq!(q.poles().len(), 2);
        assert_eq!(q.degree_defect(), Some(0));
        assert!(q.poles().iter().any(|p| p.order == 3));
    }

    #[test]
    fn rejects_zero_at_infinity_and_cancellation() {
        let den = Poly::monomial(C64::new(1.0, 0.0), 5);
        assert!(QuadraticDifferential::rational(Poly::constant(C64::new(1.0, 0.0)), den).is_err());
        let p = Poly::new(vec![C64::new(-1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(QuadraticDifferential::rational(p.clone(), p).is_err());
    }

    #[test]
    fn laurent_model_shape_checks() {
        assert!(LaurentModel::new(6, vec![(-5, C64::new(1.0, 0.0))]).is_err());
        assert!(LaurentModel::new(6, vec![(-6, C64::new(0.0, 0.0))]).is_err());
        let m = LaurentModel::normal_form(6, C64::new(0.3, 0.1)).unwrap();
        let q = QuadraticDifferential::laurent(m);
        // zeros where z^{-3} = -a/z, i.e. z^2 = -1/a
        assert_eq!(q.zeros().len(), 2);
        for z in q.zeros() {
            assert!(q.eval(z.at).norm() < 1e-10);
        }
        let z = C64::new(0.4, 0.2);
        let s = z.powi(-3) + C64::new(0.3, 0.1) / z;
        assert!((q.eval(z) - s * s).norm() < 1e-10 * s.norm_sqr());
    }
}
