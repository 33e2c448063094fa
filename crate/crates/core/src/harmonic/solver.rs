use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::grid::CylinderGrid;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

/// Laplace problem on a cylinder: Dirichlet data `top` at `x = 0`, and
/// either Dirichlet data `bottom` at `x = L` or a free (Neumann) end.
#[derive(Debug, Clone, Copy)]
pub struct CylinderProblem<'a> {
    pub grid: &'a CylinderGrid,
    pub top: &'a [f64],
    pub bottom: Option<&'a [f64]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
    pub iterations: usize,
    /// `|b - A u| / |b|` over the unknown rows.
    pub residual: f64,
}

/// Linear solver for the 5-point cylinder Laplacian.
pub trait CylinderSolver: Named + Send + Sync {
    fn solve(&self, problem: &CylinderProblem, tol: f64) -> Result<Solution>;
}

impl CylinderProblem<'_> {
    fn free(&self) -> bool {
        self.bottom.is_none()
    }

    fn last_row(&self) -> usize {
        if self.free() {
            self.grid.nx - 1
        } else {
            self.grid.nx - 2
        }
    }

    /// Field that carries the boundary data and vanishes elsewhere.
    fn boundary_field(&self) -> Vec<f64> {
        let g = self.grid;
        let mut u = vec![0.0; g.len()];
        u[..g.ntheta].copy_from_slice(self.top);
        if let Some(b) = self.bottom {
            u[(g.nx - 1) * g.ntheta..].copy_from_slice(b);
        }
        u
    }

    /// `out = A u` on the unknown rows, zero on the Dirichlet rows. The free
    /// row uses the reflected ghost node and is scaled by 1/2 so that `A` is
    /// symmetric.
    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let g = self.grid;
        let nt = g.ntheta;
        let cx = 1.0 / (g.hx() * g.hx());
        let ct = 1.0 / (g.htheta() * g.htheta());
        let last = self.last_row();
        let free = self.free();
        out.par_chunks_mut(nt).enumerate().for_each(|(i, row)| {
            if i == 0 || i > last {
                row.fill(0.0);
                return;
            }
            let c = &u[i * nt..(i + 1) * nt];
            let up = &u[(i - 1) * nt..i * nt];
            let free_row = free && i == g.nx - 1;
            for j in 0..nt {
                let left = c[(j + nt - 1) % nt];
                let right = c[(j + 1) % nt];
                let ang = ct * (2.0 * c[j] - left - right);
                row[j] = if free_row {
                    cx * (c[j] - up[j]) + 0.5 * ang
                } else {
                    let down = u[(i + 1) * nt + j];
                    cx * (2.0 * c[j] - up[j] - down) + ang
                };
            }
        });
    }

    fn diagonal(&self, i: usize) -> f64 {
        let g = self.grid;
        let cx = 1.0 / (g.hx() * g.hx());
        let ct = 1.0 / (g.htheta() * g.htheta());
        if self.free() && i == g.nx - 1 {
            cx + ct
        } else {
            2.0 * (cx + ct)
        }
    }

    fn rhs(&self) -> Vec<f64> {
        let ub = self.boundary_field();
        let mut b = vec![0.0; ub.len()];
        self.apply(&ub, &mut b);
        b.iter_mut().for_each(|v| *v = -*v);
        b
    }

    /// Relative residual of the full field `u` (boundary rows included).
    pub fn relative_residual(&self, u: &[f64]) -> f64 {
        let b = self.rhs();
        let mut au = vec![0.0; u.len()];
        let mut interior = u.to_vec();
        let nt = self.grid.ntheta;
        interior[..nt].fill(0.0);
        if !self.free() {
            let n = interior.len();
            interior[n - nt..].fill(0.0);
        }
        self.apply(&interior, &mut au);
        let r: Vec<f64> = b.iter().zip(&au).map(|(b, a)| b - a).collect();
        let nb = dot(&b, &b, nt).sqrt();
        if nb == 0.0 {
            dot(&r, &r, nt).sqrt()
        } else {
            dot(&r, &r, nt).sqrt() / nb
        }
    }

    fn validate(&self) -> Result<()> {
        self.grid.check_samples("top boundary", self.top)?;
        if let Some(b) = self.bottom {
            self.grid.check_samples("bottom boundary", b)?;
        }
        Ok(())
    }
}

/// Row-chunked dot product with a fixed summation order.
fn dot(a: &[f64], b: &[f64], chunk: usize) -> f64 {
    let partial: Vec<f64> = a
        .par_chunks(chunk)
        .zip(b.par_chunks(chunk))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partial.iter().sum()
}

/// Conjugate gradients with the Jacobi (diagonal) preconditioner,
/// iteration cap `50 nx ntheta`.
pub struct Pcg;

impl Named for Pcg {
    fn name(&self) -> &'static str {
        "pcg"
    }
}

impl CylinderSolver for Pcg {
    fn solve(&self, p: &CylinderProblem, tol: f64) -> Result<Solution> {
        p.validate()?;
        let g = p.grid;
        let nt = g.ntheta;
        let n = g.len();
        let b = p.rhs();
        let nb = dot(&b, &b, nt).sqrt();
        let mut x = vec![0.0; n];
        let finish = |x: Vec<f64>, iterations: usize| {
            let mut values = p.boundary_field();
            let last = p.last_row();
            values[nt..(last + 1) * nt].copy_from_slice(&x[nt..(last + 1) * nt]);
            let residual = p.relative_residual(&values);
            Solution {
                values,
                iterations,
                residual,
            }
        };
        if nb == 0.0 {
            return Ok(finish(x, 0));
        }
        let inv_diag: Vec<f64> = (0..g.nx)
            .map(|i| if i == 0 || i > p.last_row() { 0.0 } else { 1.0 / p.diagonal(i) })
            .collect();
        let precondition = |r: &[f64], z: &mut [f64]| {
            z.par_chunks_mut(nt).enumerate().for_each(|(i, row)| {
                let d = inv_diag[i];
                for (zj, rj) in row.iter_mut().zip(&r[i * nt..(i + 1) * nt]) {
                    *zj = d * rj;
                }
            });
        };
        let mut r = b.clone();
        let mut z = vec![0.0; n];
        precondition(&r, &mut z);
        let mut d = z.clone();
        let mut ad = vec![0.0; n];
        let mut rz = dot(&r, &z, nt);
        let cap = 50 * g.nx * g.ntheta;
        let mut rel = 1.0;
        for it in 1..=cap {
            p.apply(&d, &mut ad);
            let alpha = rz / dot(&d, &ad, nt);
            x.par_iter_mut().zip(&d).for_each(|(xi, di)| *xi += alpha * di);
            r.par_iter_mut().zip(&ad).for_each(|(ri, ai)| *ri -= alpha * ai);
            rel = dot(&r, &r, nt).sqrt() / nb;
            if rel <= tol {
                return Ok(finish(x, it));
            }
            precondition(&r, &mut z);
            let rz_new = dot(&r, &z, nt);
            let beta = rz_new / rz;
            rz = rz_new;
            d.par_iter_mut().zip(&z).for_each(|(di, zi)| *di = zi + beta * *di);
        }
        Err(Error::NonConvergence {
            iterations: cap,
            residual: rel,
        })
    }
}

/// Direct solver: FFT in the angle, one tridiagonal (Thomas) solve per
/// angular mode.
pub struct Spectral;

impl Named for Spectral {
    fn name(&self) -> &'static str {
        "spectral"
    }
}

fn thomas(diag: &[f64], off: f64, rhs: &mut [C64]) {
    let m = rhs.len();
    let mut c = vec![0.0; m];
    let mut denom = diag[0];
    c[0] = off / denom;
    rhs[0] /= denom;
    for i in 1..m {
        denom = diag[i] - off * c[i - 1];
        c[i] = off / denom;
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
    }
    for i in (0..m - 1).rev() {
        rhs[i] = rhs[i] - c[i] * rhs[i + 1];
    }
}

impl CylinderSolver for Spectral {
    fn solve(&self, p: &CylinderProblem, _tol: f64) -> Result<Solution> {
        p.validate()?;
        let g = p.grid;
        let nt = g.ntheta;
        let cx = 1.0 / (g.hx() * g.hx());
        let ct = 1.0 / (g.htheta() * g.htheta());
        let last = p.last_row();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(nt);
        let inv = planner.plan_fft_inverse(nt);
        let transform = |f: &[f64]| {
            let mut buf: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
            fwd.process(&mut buf);
            buf
        };
        let top = transform(p.top);
        let bottom = p.bottom.map(transform);
        let m = last;
        let columns: Vec<Vec<C64>> = (0..nt)
            .into_par_iter()
            .map(|k| {
                let mu = ct * (2.0 - 2.0 * (2.0 * PI * k as f64 / nt as f64).cos());
                let diag: Vec<f64> = (1..=last)
                    .map(|i| {
                        if p.free() && i == g.nx - 1 {
                            cx + 0.5 * mu
                        } else {
                            2.0 * cx + mu
                        }
                    })
                    .collect();
                let mut rhs = vec![C64::new(0.0, 0.0); m];
                rhs[0] += cx * top[k];
                if let Some(b) = &bottom {
                    rhs[m - 1] += cx * b[k];
                }
                thomas(&diag, -cx, &mut rhs);
                rhs
            })
            .collect();
        let mut values = p.boundary_field();
        values[nt..(last + 1) * nt]
            .par_chunks_mut(nt)
            .enumerate()
            .for_each(|(r, row)| {
                let mut buf: Vec<C64> = columns.iter().map(|col| col[r]).collect();
                inv.process(&mut buf);
                for (v, b) in row.iter_mut().zip(&buf) {
                    *v = b.re / nt as f64;
                }
            });
        let residual = p.relative_residual(&values);
        Ok(Solution {
            values,
            iterations: 1,
            residual,
        })
    }
}

pub fn solver_registry() -> Registry<dyn CylinderSolver> {
    let mut reg: Registry<dyn CylinderSolver> = Registry::new("cylinder solver");
    reg.register(Box::new(Pcg)).register(Box::new(Spectral));
    reg
}
