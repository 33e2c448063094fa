use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::grid::CylinderGrid;
use crate::error::{Error, Result};

/// Holomorphic map from the computational coordinate `zeta = u + i v` to the
/// chart `z` in which Hopf coefficients are reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartMap {
    /// `z = zeta`
    Identity,
    /// `z = exp(zeta)`
    Exp,
    /// `z = r exp(-zeta)`
    Annulus { r: f64 },
}

impl ChartMap {
    pub fn z(&self, zeta: C64) -> C64 {
        match *self {
            Self::Identity => zeta,
            Self::Exp => zeta.exp(),
            Self::Annulus { r } => r * (-zeta).exp(),
        }
    }

    pub fn dz(&self, zeta: C64) -> C64 {
        match *self {
            Self::Identity => C64::new(1.0, 0.0),
            Self::Exp => zeta.exp(),
            Self::Annulus { r } => -r * (-zeta).exp(),
        }
    }
}

/// Uniform grid in a conformal coordinate `zeta`, optionally periodic in
/// `v`. Node `(i, j)` sits at `origin + i hu + i j hv`; values are i-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Patch {
    pub origin: C64,
    pub hu: f64,
    pub hv: f64,
    pub nu: usize,
    pub nv: usize,
    pub periodic_v: bool,
    pub map: ChartMap,
}

impl Patch {
    pub fn cartesian(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Self {
        Self {
            origin: C64::new(x.0, y.0),
            hu: (x.1 - x.0) / (nx - 1) as f64,
            hv: (y.1 - y.0) / (ny - 1) as f64,
            nu: nx,
            nv: ny,
            periodic_v: false,
            map: ChartMap::Identity,
        }
    }

    /// Polar sector `r in [r.0, r.1]`, `arg in [theta.0, theta.1]`, sampled
    /// uniformly in `(ln r, arg)`.
    pub fn log_polar(r: (f64, f64), theta: (f64, f64), ns: usize, nt: usize) -> Self {
        let (s0, s1) = (r.0.ln(), r.1.ln());
        Self {
            origin: C64::new(s0, theta.0),
            hu: (s1 - s0) / (ns - 1) as f64,
            hv: (theta.1 - theta.0) / (nt - 1) as f64,
            nu: ns,
            nv: nt,
            periodic_v: false,
            map: ChartMap::Exp,
        }
    }

    /// The cylinder itself, `zeta = x + i theta`.
    pub fn cylinder(grid: &CylinderGrid) -> Self {
        Self {
            origin: C64::new(0.0, 0.0),
            hu: grid.hx(),
            hv: grid.htheta(),
            nu: grid.nx,
            nv: grid.ntheta,
            periodic_v: true,
            map: ChartMap::Identity,
        }
    }

    /// The cylinder viewed as the round annulus `w = r_out exp(-(x + i theta))`.
    pub fn annulus(grid: &CylinderGrid, r_out: f64) -> Self {
        Self {
            map: ChartMap::Annulus { r: r_out },
            ..Self::cylinder(grid)
        }
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zeta(&self, i: usize, j: usize) -> C64 {
        self.origin + C64::new(i as f64 * self.hu, j as f64 * self.hv)
    }

    pub fn z(&self, i: usize, j: usize) -> C64 {
        self.map.z(self.zeta(i, j))
    }

    pub fn sample<F: Fn(C64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.nu)
            .flat_map(|i| (0..self.nv).map(move |j| (i, j)))
            .map(|(i, j)| f(self.z(i, j)))
            .collect()
    }

    fn check(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}x{} patch",
                values.len(),
                self.nu,
                self.nv
            )));
        }
        Ok(())
    }
}

/// Dirichlet energy (no factor 1/2) of the piecewise-linear interpolant,
/// trapezoid weights on the non-periodic sides.
pub fn patch_energy(patch: &Patch, values: &[f64]) -> Result<f64> {
    patch.check(values)?;
    let (nu, nv) = (patch.nu, patch.nv);
    let at = |i: usize, j: usize| values[i * nv + j];
    let area = patch.hu * patch.hv;
    let mut e = 0.0;
    for i in 0..nu {
        let wu = if i == 0 || i == nu - 1 { 0.5 } else { 1.0 };
        for j in 0..nv {
            let wv = if !patch.periodic_v && (j == 0 || j == nv - 1) { 0.5 } else { 1.0 };
            if i + 1 < nu {
                let d = (at(i + 1, j) - at(i, j)) / patch.hu;
                e += wv * d * d * area;
            }
            if j + 1 < nv || patch.periodic_v {
                let d = (at(i, (j + 1) % nv) - at(i, j)) / patch.hv;
                e += wu * d * d * area;
            }
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfNode {
    pub i: usize,
    pub j: usize,
    pub z: C64,
    /// Coefficient of `dz^2` in `-4 (dh/dz)^2 dz^2`.
    pub value: C64,
    /// `|d/d(zeta bar)|` of `dh/d(zeta)`; `None` where the stencil leaves the patch.
    pub defect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteHopf {
    pub nodes: Vec<HopfNode>,
}

impl DiscreteHopf {
    pub fn max_defect(&self) -> f64 {
        self.nodes.iter().filter_map(|n| n.defect).fold(0.0, f64::max)
    }
}

/// Hopf differential `-4 (dh/dz)^2 dz^2` by central differences at every
/// interior node.
pub fn hopf_on(patch: &Patch, values: &[f64]) -> Result<DiscreteHopf> {
    patch.check(values)?;
    let (nu, nv) = (patch.nu, patch.nv);
    let at = |i: usize, j: usize| values[i * nv + j];
    let jrange = |margin: usize| {
        if patch.periodic_v {
            0..nv
        } else {
            margin..nv - margin
        }
    };
    let wrap = |j: usize, d: isize| (j as isize + d).rem_euclid(nv as isize) as usize;
    let dzeta = |i: usize, j: usize| {
        let hu = (at(i + 1, j) - at(i - 1, j)) / (2.0 * patch.hu);
        let hv = (at(i, wrap(j, 1)) - at(i, wrap(j, -1))) / (2.0 * patch.hv);
        0.5 * C64::new(hu, -hv)
    };
    let mut grad = vec![C64::new(0.0, 0.0); values.len()];
    for i in 1..nu - 1 {
        for j in jrange(1) {
            grad[i * nv + j] = dzeta(i, j);
        }
    }
    let mut nodes = Vec::new();
    for i in 1..nu - 1 {
        for j in jrange(1) {
            let zeta = patch.zeta(i, j);
            let dz = patch.map.dz(zeta);
            let g = grad[i * nv + j];
            let inner_u = i >= 2 && i + 2 < nu;
            let inner_v = patch.periodic_v || (j >= 2 && j + 2 < nv);
            let defect = (inner_u && inner_v).then(|| {
                let gu = (grad[(i + 1) * nv + j] - grad[(i - 1) * nv + j]) / (2.0 * patch.hu);
                let gv = (grad[i * nv + wrap(j, 1)] - grad[i * nv + wrap(j, -1)]) / (2.0 * patch.hv);
                (0.5 * (gu + C64::i() * gv)).norm()
            });
            nodes.push(HopfNode {
                i,
                j,
                z: patch.map.z(zeta),
                value: -4.0 * (g / dz) * (g / dz),
                defect,
            });
        }
    }
    Ok(DiscreteHopf { nodes })
}
