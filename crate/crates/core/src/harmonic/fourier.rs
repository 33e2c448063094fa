use rayon::prelude::*;
use serde::Serialize;

use super::field::{solve_dirichlet_with, SolveOptions};
use super::grid::{mean, sup_norm, CylinderGrid};
use crate::error::{Error, Result};
use crate::format::CsvTable;

/// `sinh(a) / sinh(b)` for `0 <= a <= b`, `b > 0`, without overflow.
fn sinh_ratio(a: f64, b: f64) -> f64 {
    (a - b).exp() * (-(-2.0 * a).exp_m1()) / (-(-2.0 * b).exp_m1())
}

/// Exact harmonic extension of `M cos(n theta)` to both ends of `[0, L]`:
/// `((sinh nx + sinh n(L - x)) / sinh nL) M cos(n theta)`.
pub fn fourier_solution(n: u32, amplitude: f64, length: f64, x: f64, theta: f64) -> Result<f64> {
    if n == 0 || !(length > 0.0) {
        return Err(Error::InvalidInput(format!(
            "mode {n} on length {length}: need n >= 1 and L > 0"
        )));
    }
    let k = n as f64;
    let profile = sinh_ratio(k * x, k * length) + sinh_ratio(k * (length - x), k * length);
    Ok(profile * amplitude * (k * theta).cos())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub length: f64,
    pub midline_max: f64,
    /// `midline_max / (M e^{-L/2})`
    pub ratio: f64,
    pub dtheta_max: f64,
    pub dtheta_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub amplitude: f64,
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `ln midline_max` against `L`.
    pub slope: f64,
    pub dtheta_slope: f64,
    /// Largest ratio, the smallest constant `K` that works for every `L`.
    pub k: f64,
    pub dtheta_k: f64,
}

impl DecayReport {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["L", "midline_max", "ratio", "dtheta_max", "dtheta_ratio"]);
        for r in &self.rows {
            t.push_floats(&[r.length, r.midline_max, r.ratio, r.dtheta_max, r.dtheta_ratio]);
        }
        t
    }
}

fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Dirichlet problem with the same zero-mean data `f` at both ends for each
/// length; records the sup of `|h|` and `|d h / d theta|` on the midline.
pub fn decay_experiment(
    f: &[f64],
    lengths: &[f64],
    resolution: (usize, usize),
    opts: &SolveOptions,
) -> Result<DecayReport> {
    let (nx, ntheta) = resolution;
    if f.len() != ntheta {
        return Err(Error::GridMismatch(format!(
            "{} boundary samples for ntheta = {ntheta}",
            f.len()
        )));
    }
    let amplitude = sup_norm(f);
    let m = mean(f);
    if m.abs() > 1e-12 * amplitude.max(1.0) {
        return Err(Error::NonzeroMean(m));
    }
    if lengths.len() < 2 {
        return Err(Error::InvalidInput("decay needs at least two lengths".into()));
    }
    let rows: Vec<DecayRow> = lengths
        .par_iter()
        .map(|&length| {
            let grid = CylinderGrid::new(length, nx, ntheta)?;
            let field = solve_dirichlet_with(&grid, f, f, opts)?;
            let mid = field.midline();
            let midline_max = sup_norm(&mid);
            let h = grid.htheta();
            let dtheta_max = (0..ntheta)
                .map(|j| ((mid[(j + 1) % ntheta] - mid[(j + ntheta - 1) % ntheta]) / (2.0 * h)).abs())
                .fold(0.0, f64::max);
            let env = amplitude * (-length / 2.0).exp();
            Ok(DecayRow {
                length,
                midline_max,
                ratio: midline_max / env,
                dtheta_max,
                dtheta_ratio: dtheta_max / env,
            })
        })
        .collect::<Result<_>>()?;
    let ls: Vec<f64> = rows.iter().map(|r| r.length).collect();
    let lm: Vec<f64> = rows.iter().map(|r| r.midline_max.ln()).collect();
    let ld: Vec<f64> = rows.iter().map(|r| r.dtheta_max.ln()).collect();
    Ok(DecayReport {
        amplitude,
        slope: fit_slope(&ls, &lm),
        dtheta_slope: fit_slope(&ls, &ld),
        k: rows.iter().map(|r| r.ratio).fold(0.0, f64::max),
        dtheta_k: rows.iter().map(|r| r.dtheta_ratio).fold(0.0, f64::max),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::grid::BoundaryData;

    #[test]
    fn oracle_values() {
        assert!((fourier_solution(2, 1.5, 3.0, 0.0, 0.4).unwrap() - 1.5 * 0.8f64.cos()).abs() < 1e-15);
        let mid = fourier_solution(1, 1.0, 4.0, 2.0, 0.0).unwrap();
        assert!((mid - 1.0 / 2f64.cosh()).abs() < 1e-15);
        assert!((mid - 0.2658).abs() < 1e-4);
        let v = fourier_solution(3, 1.0, 6.0, 3.0, 0.0).unwrap();
        assert!((v - 1.0 / 9f64.cosh()).abs() < 1e-18);
        assert!((v - 2.47e-4).abs() < 1e-6);
        let far = fourier_solution(1, 1.0, 2000.0, 1000.0, 0.0).unwrap();
        assert!(far.is_finite() && far < 1e-300);
        assert!(fourier_solution(0, 1.0, 1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn cos_decay_ratio_tends_to_two() {
        let f = BoundaryData::cos_mode(1, 1.0).sample(64);
        let r = decay_experiment(&f, &[2.0, 4.0, 6.0, 8.0], (129, 64), &SolveOptions::spectral()).unwrap();
        for row in &r.rows {
            let exact = 1.0 / (row.length / 2.0).cosh();
            assert!((row.midline_max - exact).abs() < 5e-3 * exact, "{row:?}");
        }
        assert!((r.rows[3].ratio - 2.0).abs() < 0.01);
        assert!((r.slope + 0.5).abs() < 0.05);
    }

    #[test]
    fn mode_two_decays_faster() {
        let f = BoundaryData::cos_mode(2, 1.0).sample(32);
        let r = decay_experiment(&f, &[2.0, 4.0, 6.0, 8.0], (65, 32), &SolveOptions::spectral()).unwrap();
        assert!((r.slope + 1.0).abs() < 0.05, "{}", r.slope);
    }

    #[test]
    fn rejects_nonzero_mean() {
        let f = BoundaryData {
            constant: 0.1,
            ..BoundaryData::cos_mode(1, 1.0)
        }
        .sample(32);
        assert!(matches!(
            decay_experiment(&f, &[2.0, 4.0], (33, 32), &SolveOptions::default()),
            Err(Error::NonzeroMean(_))
        ));
    }
}
