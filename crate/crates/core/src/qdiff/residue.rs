//! Residues of `sqrt(q)` at poles, by Laurent expansion or contour quadrature.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

use super::principal::sqrt_laurent;
use super::{Form, Mobius, QuadraticDifferential};

/// The `t^{-1}` coefficient of a branch of `sqrt(q)`, defined up to sign.
///
/// `value` is stored in the canonical sign class: `Re > 0`, or `Re = 0` and
/// `Im >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residue {
    pub value: C64,
}

impl Residue {
    pub fn new(value: C64) -> Self {
        let canonical = if value.re > 0.0 || (value.re == 0.0 && value.im >= 0.0) {
            value
        } else {
            -value
        };
        // -0.0 would otherwise leak into serialized output
        Self {
            value: C64::new(canonical.re + 0.0, canonical.im + 0.0),
        }
    }

    pub fn zero() -> Self {
        Self::new(C64::new(0.0, 0.0))
    }

    /// The loop integral of the same branch of `sqrt(q)`: `2 pi i * value`.
    pub fn loop_integral(&self) -> C64 {
        C64::new(0.0, 2.0 * PI) * self.value
    }

    /// Agreement with `other` up to sign, within absolute tolerance `tol`.
    pub fn matches(&self, other: C64, tol: f64) -> bool {
        (self.value - other).norm() <= tol || (self.value + other).norm() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueOptions {
    /// Contour radius in the pole chart. `None` picks half the distance to
    /// the nearest other singular point.
    pub radius: Option<f64>,
    /// Chart override; `None` uses [`QuadraticDifferential::default_chart`].
    pub chart: Option<Mobius>,
    /// Relative tolerance for the contour route's node doubling.
    pub tol: f64,
}

impl Default for ResidueOptions {
    fn default() -> Self {
        Self {
            radius: None,
            chart: None,
            tol: 1e-12,
        }
    }
}

/// A way of evaluating the residue at an even-order pole.
pub trait ResidueMethod: Named + Send + Sync {
    /// Returns the `t^{-1}` coefficient of some branch of `sqrt(q)`.
    fn evaluate(
        &self,
        q: &QuadraticDifferential,
        pole: usize,
        chart: &Mobius,
        opts: &ResidueOptions,
    ) -> Result<C64>;
}

/// Reads the coefficient off a truncated Laurent expansion.
pub struct LaurentRoute;

impl Named for LaurentRoute {
    fn name(&self) -> &'static str {
        "laurent"
    }
}

impl ResidueMethod for LaurentRoute {
    fn evaluate(
        &self,
        q: &QuadraticDifferential,
        pole: usize,
        chart: &Mobius,
        _opts: &ResidueOptions,
    ) -> Result<C64> {
        let n = q.pole(pole)?.order;
        let lau = sqrt_laurent(q, pole, chart, (n / 2) as usize + 1)?;
        lau.residue_coeff()
            .ok_or_else(|| Error::InsufficientExpansion("series too short".into()))
    }
}

/// Periodic trapezoid rule for `(1/2 pi i) \oint sqrt(q_t) dt` on a circle,
/// with the branch continued node to node.
pub struct ContourRoute;

impl Named for ContourRoute {
    fn name(&self) -> &'static str {
        "contour"
    }
}

/// Half the distance from the chart origin to the nearest other singular
/// point, or 1 when there is none.
pub fn default_radius(q: &QuadraticDifferential, pole: usize, chart: &Mobius) -> f64 {
    q.zeros_in_chart(chart)
        .into_iter()
        .chain(q.other_poles_in_chart(chart, pole))
        .map(|t| t.norm())
        .fold(f64::INFINITY, f64::min)
        .min(2.0)
        * 0.5
}

/// Checks that the disk of radius `r` in the chart contains no other
/// singular point of `q`.
pub fn check_disk(q: &QuadraticDifferential, pole: usize, chart: &Mobius, r: f64) -> Result<()> {
    let zeros = q.zeros_in_chart(chart);
    let band = 1e-9 * r;
    if zeros.iter().any(|t| (t.norm() - r).abs() <= band) {
        return Err(Error::ZeroOnContour { radius: r });
    }
    let inside = zeros.iter().filter(|t| t.norm() < r).count();
    if inside > 0 {
        return Err(Error::ZerosInsideContour { count: inside, radius: r });
    }
    if q
        .other_poles_in_chart(chart, pole)
        .iter()
        .any(|t| t.norm() <= r + band)
    {
        return Err(Error::InvalidInput(format!(
            "another pole lies within radius {r} of the chart origin"
        )));
    }
    Ok(())
}

/// Branch of `sqrt(v)` closest to `prev`.
pub fn continue_sqrt(v: C64, prev: C64) -> C64 {
    let s = v.sqrt();
    if (s - prev).norm() <= (s + prev).norm() {
        s
    } else {
        -s
    }
}

fn contour_sum(q: &QuadraticDifferential, chart: &Mobius, r: f64, nodes: usize) -> C64 {
    let h = 2.0 * PI / nodes as f64;
    let mut prev = q.eval_in_chart(chart, C64::new(r, 0.0)).sqrt();
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..nodes {
        let t = C64::from_polar(r, k as f64 * h);
        let s = continue_sqrt(q.eval_in_chart(chart, t), prev);
        prev = s;
        acc += s * t;
    }
    // dt = i t dθ; dividing by 2πi leaves the mean of s·t
    acc * h / (2.0 * PI)
}

impl ResidueMethod for ContourRoute {
    fn evaluate(
        &self,
        q: &QuadraticDifferential,
        pole: usize,
        chart: &Mobius,
        opts: &ResidueOptions,
    ) -> Result<C64> {
        let r = opts.radius.unwrap_or_else(|| default_radius(q, pole, chart));
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidInput(format!("contour radius {r} must be positive")));
        }
        check_disk(q, pole, chart, r)?;
        let mut nodes = 256;
        let mut last = contour_sum(q, chart, r, nodes);
        while nodes < 1 << 20 {
            nodes *= 2;
            let next = contour_sum(q, chart, r, nodes);
            let scale = next.norm().max(1e-300);
            let done = (next - last).norm() <= opts.tol * scale.max(1.0);
            last = next;
            if done {
                return Ok(last);
            }
        }
        Ok(last)
    }
}

/// All residue routes, keyed by name.
pub fn residue_registry() -> Registry<dyn ResidueMethod> {
    let mut reg: Registry<dyn ResidueMethod> = Registry::new("residue method");
    reg.register(Box::new(LaurentRoute));
    reg.register(Box::new(ContourRoute));
    reg
}

fn chart_for(q: &QuadraticDifferential, pole: usize, opts: &ResidueOptions) -> Result<Mobius> {
    match (opts.chart, q.form()) {
        (Some(c), _) => Ok(c),
        (None, Form::LaurentModel(_)) => Ok(Mobius::identity()),
        (None, _) => q.default_chart(pole),
    }
}

/// Residue by the named method.
pub fn residue_with(
    q: &QuadraticDifferential,
    pole: usize,
    method: &str,
    opts: &ResidueOptions,
) -> Result<Residue> {
    let order = q.pole(pole)?.order;
    if order < 2 {
        return Err(Error::PoleOrderTooSmall(order));
    }
    let reg = residue_registry();
    let route = reg.get(method)?;
    if order % 2 == 1 {
        return Ok(Residue::zero());
    }
    let chart = chart_for(q, pole, opts)?;
    route.evaluate(q, pole, &chart, opts).map(Residue::new)
}

/// Residue from the Laurent expansion in the default chart.
pub fn residue(q: &QuadraticDifferential, pole: usize) -> Result<Residue> {
    residue_with(q, pole, "laurent", &ResidueOptions::default())
}
