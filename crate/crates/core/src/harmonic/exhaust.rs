use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{solve_partially_free_with, SolveOptions};
use super::grid::{sup_norm, CylinderGrid};
use crate::error::{Error, Result};
use crate::foliation::collapsing_value;
use crate::format::CsvTable;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustionRow {
    pub i: u32,
    /// Modulus `L_i = ln(R_out / R_in)`.
    pub modulus: f64,
    /// `c_i = max |f_i|` on the fixed circle.
    pub boundary_max: f64,
    /// Sup of `|psi_i|` on the free circle.
    pub free_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustionReport {
    pub a: C64,
    pub order: u32,
    pub delta: f64,
    pub rows: Vec<ExhaustionRow>,
}

impl ExhaustionReport {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["i", "modulus", "boundary_max", "free_sup"]);
        for r in &self.rows {
            t.push_floats(&[r.i as f64, r.modulus, r.boundary_max, r.free_sup]);
        }
        t
    }
}

#[derive(Debug, Clone)]
pub struct ExhaustionOptions {
    /// Axial nodes per unit modulus.
    pub nodes_per_unit: f64,
    pub ntheta: usize,
    pub solve: SolveOptions,
}

impl Default for ExhaustionOptions {
    fn default() -> Self {
        Self {
            nodes_per_unit: 64.0,
            ntheta: 128,
            solve: SolveOptions::spectral(),
        }
    }
}

/// Exhaustion of the punctured disk `0 < |z| < delta` by the annuli
/// `delta / i <= |z| <= delta`, `i = 2, 4, 8, ... <= i_max`. In the
/// quotient coordinate `w = z^{n/2}` each becomes the round annulus
/// `R_in <= |w| <= R_out` with `R_in = (delta / i)^{n/2}`,
/// `R_out = delta^{n/2}`, identified with the cylinder of length
/// `(n/2) ln i` through `w = R_in e^{x - i theta}`. The collapsing function
/// `Im(1/w^2 + a/w)` is imposed on the inner circle `x = 0` and the outer
/// circle is left free.
pub fn exhaustion_experiment(
    a: C64,
    n: u32,
    delta: f64,
    i_max: u32,
    opts: &ExhaustionOptions,
) -> Result<ExhaustionReport> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidInput(format!("pole order {n} must be even and at least 4")));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidInput(format!("delta = {delta} must be positive")));
    }
    if i_max < 4 {
        return Err(Error::ExhaustionTooShort(i_max as usize));
    }
    let half = n as f64 / 2.0;
    let steps: Vec<u32> = std::iter::successors(Some(2u32), |i| i.checked_mul(2))
        .take_while(|&i| i <= i_max)
        .collect();
    let rows = steps
        .par_iter()
        .map(|&i| {
            let r_in = (delta / i as f64).powf(half);
            let modulus = half * (i as f64).ln();
            let nx = ((modulus * opts.nodes_per_unit).ceil() as usize + 1).max(8);
            let grid = CylinderGrid::new(modulus, nx, opts.ntheta)?;
            let f: Vec<f64> = (0..grid.ntheta)
                .map(|j| collapsing_value(a, C64::from_polar(r_in, -grid.theta(j))))
                .collect::<Result<_>>()?;
            let field = solve_partially_free_with(&grid, &f, &opts.solve)?;
            Ok(ExhaustionRow {
                i,
                modulus,
                boundary_max: sup_norm(&f),
                free_sup: sup_norm(field.row(grid.nx - 1)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExhaustionReport {
        a,
        order: n,
        delta,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_mode_two_without_residue() {
        let opts = ExhaustionOptions {
            nodes_per_unit: 32.0,
            ntheta: 64,
            ..Default::default()
        };
        let r = exhaustion_experiment(C64::new(0.0, 0.0), 4, 0.5, 8, &opts).unwrap();
        assert_eq!(r.rows.iter().map(|r| r.i).collect::<Vec<_>>(), vec![2, 4, 8]);
        for row in &r.rows {
            let r_in = (0.5 / row.i as f64).powi(2);
            assert!((row.boundary_max - r_in.powi(-2)).abs() < 1e-9 * row.boundary_max);
            // mode 2 transported to the free end: c / cosh(2 L)
            let expect = row.boundary_max / (2.0 * row.modulus).cosh();
            assert!((row.free_sup - expect).abs() < 0.03 * expect, "{row:?} {expect}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let o = ExhaustionOptions::default();
        let a = C64::new(0.3, 0.0);
        assert!(matches!(exhaustion_experiment(a, 6, 0.5, 3, &o), Err(Error::ExhaustionTooShort(3))));
        assert!(exhaustion_experiment(a, 5, 0.5, 8, &o).is_err());
        assert!(exhaustion_experiment(a, 6, -1.0, 8, &o).is_err());
    }
}
