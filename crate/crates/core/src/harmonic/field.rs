use serde::Serialize;

use super::grid::CylinderGrid;
use super::patch::{patch_energy, Patch};
use super::solver::{solver_registry, CylinderProblem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundarySpec {
    /// `top` at `x = 0`, `bottom` at `x = L`.
    Dirichlet { top: Vec<f64>, bottom: Vec<f64> },
    /// `fixed` at `x = 0`, free at `x = L`.
    PartiallyFree { fixed: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub solver: String,
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            solver: "pcg".into(),
            tol: 1e-10,
        }
    }
}

impl SolveOptions {
    pub fn spectral() -> Self {
        Self {
            solver: "spectral".into(),
            ..Self::default()
        }
    }
}

/// Discrete harmonic function on a cylinder grid; `values` are x-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicField {
    pub grid: CylinderGrid,
    pub values: Vec<f64>,
    pub boundary: BoundarySpec,
    pub residual: f64,
    pub iterations: usize,
    pub energy: f64,
}

impl HarmonicField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let nt = self.grid.ntheta;
        &self.values[i * nt..(i + 1) * nt]
    }

    pub fn patch(&self) -> Patch {
        Patch::cylinder(&self.grid)
    }

    /// Values at `x = L / 2`; for even `nx` the mean of the two central rows.
    pub fn midline(&self) -> Vec<f64> {
        let nx = self.grid.nx;
        if nx % 2 == 1 {
            self.row(nx / 2).to_vec()
        } else {
            let (a, b) = (self.row(nx / 2 - 1), self.row(nx / 2));
            a.iter().zip(b).map(|(p, q)| 0.5 * (p + q)).collect()
        }
    }
}

fn solve(grid: &CylinderGrid, boundary: BoundarySpec, opts: &SolveOptions) -> Result<HarmonicField> {
    let reg = solver_registry();
    let solver = reg.get(&opts.solver)?;
    let problem = match &boundary {
        BoundarySpec::Dirichlet { top, bottom } => CylinderProblem {
            grid,
            top,
            bottom: Some(bottom),
        },
        BoundarySpec::PartiallyFree { fixed } => CylinderProblem {
            grid,
            top: fixed,
            bottom: None,
        },
    };
    let sol = solver.solve(&problem, opts.tol)?;
    let energy = patch_energy(&Patch::cylinder(grid), &sol.values)?;
    Ok(HarmonicField {
        grid: *grid,
        values: sol.values,
        boundary,
        residual: sol.residual,
        iterations: sol.iterations,
        energy,
    })
}

pub fn solve_dirichlet(grid: &CylinderGrid, f_top: &[f64], f_bottom: &[f64]) -> Result<HarmonicField> {
    solve_dirichlet_with(grid, f_top, f_bottom, &SolveOptions::default())
}

pub fn solve_dirichlet_with(
    grid: &CylinderGrid,
    f_top: &[f64],
    f_bottom: &[f64],
    opts: &SolveOptions,
) -> Result<HarmonicField> {
    grid.check_samples("top boundary", f_top)?;
    grid.check_samples("bottom boundary", f_bottom)?;
    solve(
        grid,
        BoundarySpec::Dirichlet {
            top: f_top.to_vec(),
            bottom: f_bottom.to_vec(),
        },
        opts,
    )
}

pub fn solve_partially_free(grid: &CylinderGrid, f_fixed: &[f64]) -> Result<HarmonicField> {
    solve_partially_free_with(grid, f_fixed, &SolveOptions::default())
}

pub fn solve_partially_free_with(grid: &CylinderGrid, f_fixed: &[f64], opts: &SolveOptions) -> Result<HarmonicField> {
    grid.check_samples("fixed boundary", f_fixed)?;
    solve(
        grid,
        BoundarySpec::PartiallyFree {
            fixed: f_fixed.to_vec(),
        },
        opts,
    )
}

/// Max-norm difference between the partially free solution on `[0, L]` and
/// the Dirichlet solution on the doubled cylinder `[0, 2L]` with `f_fixed`
/// at both ends, restricted to `[0, L]`.
pub fn verify_doubling(grid: &CylinderGrid, f_fixed: &[f64], opts: &SolveOptions) -> Result<f64> {
    let free = solve_partially_free_with(grid, f_fixed, opts)?;
    let doubled = solve_dirichlet_with(&grid.doubled(), f_fixed, f_fixed, opts)?;
    compare_restricted(&free, &doubled)
}

/// Max-norm difference of `short` and the first `short.nx` rows of `long`.
pub fn compare_restricted(short: &HarmonicField, long: &HarmonicField) -> Result<f64> {
    let (a, b) = (&short.grid, &long.grid);
    if a.ntheta != b.ntheta || b.nx < a.nx || (a.hx() - b.hx()).abs() > 1e-12 * a.hx() {
        return Err(Error::GridMismatch(format!(
            "{}x{} on length {} does not embed in {}x{} on length {}",
            a.nx, a.ntheta, a.length, b.nx, b.ntheta, b.length
        )));
    }
    Ok(short
        .values
        .iter()
        .zip(&long.values)
        .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

/// Dirichlet energy `sum |grad h|^2` times cell area, without a factor 1/2.
pub fn energy(field: &HarmonicField) -> f64 {
    field.energy
}
