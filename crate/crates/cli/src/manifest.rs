//! Run manifests and the settings resolved from manifest plus flags.
//!
//! ```json
//! {
//!   "differential": {"numerator": [[-1, 0], [0, 0], [1, 0]]},
//!   "params": {},
//!   "out": "results",
//!   "tolerances": {"quadrature": 1e-8, "solver": 1e-10, "compat": 1e-2},
//!   "resolution": [129, 64],
//!   "svg": true
//! }
//! ```
//!
//! `differential` is either an inline document or a path to one, resolved
//! relative to the manifest. Unknown keys are rejected everywhere.

use std::fs;
use std::path::{Path, PathBuf};

use folia::qdiff::io::DifferentialDoc;
use folia::qdiff::QuadraticDifferential;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const DEFAULT_TOL_QUADRATURE: f64 = 1e-8;
pub const DEFAULT_TOL_SOLVER: f64 = 1e-10;
pub const DEFAULT_TOL_COMPAT: f64 = 1e-2;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceDoc {
    pub quadrature: Option<f64>,
    pub solver: Option<f64>,
    pub compat: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub differential: Option<Value>,
    pub params: Option<Value>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: ToleranceDoc,
    pub resolution: Option<[usize; 2]>,
    pub svg: Option<bool>,
}

impl Manifest {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(format!("manifest: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub quadrature: f64,
    pub solver: f64,
    pub compat: f64,
}

/// Flag values that override the manifest.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub tol_quadrature: Option<f64>,
    pub tol_solver: Option<f64>,
    pub tol_compat: Option<f64>,
    pub svg: Option<bool>,
    pub resolution: Option<(usize, usize)>,
}

/// Everything a command needs besides its own parameters.
#[derive(Debug, Clone)]
pub struct Context {
    base_dir: PathBuf,
    differential: Option<Value>,
    params: Value,
    pub out: Option<PathBuf>,
    pub tol: Tolerances,
    pub resolution: Option<(usize, usize)>,
    pub svg: bool,
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Schema(format!("tolerance {name} = {v} must be positive")))
    }
}

impl Context {
    pub fn resolve(manifest: Manifest, base_dir: PathBuf, flags: Overrides) -> CliResult<Self> {
        let t = &manifest.tolerances;
        let tol = Tolerances {
            quadrature: positive(
                "quadrature",
                flags.tol_quadrature.or(t.quadrature).unwrap_or(DEFAULT_TOL_QUADRATURE),
            )?,
            solver: positive("solver", flags.tol_solver.or(t.solver).unwrap_or(DEFAULT_TOL_SOLVER))?,
            compat: positive("compat", flags.tol_compat.or(t.compat).unwrap_or(DEFAULT_TOL_COMPAT))?,
        };
        let out = flags
            .out
            .or_else(|| manifest.out.map(|p| if p.is_relative() { base_dir.join(p) } else { p }));
        Ok(Self {
            base_dir,
            differential: manifest.differential,
            params: manifest.params.unwrap_or_else(|| Value::Object(Default::default())),
            out,
            tol,
            resolution: flags.resolution.or(manifest.resolution.map(|[a, b]| (a, b))),
            svg: flags.svg.or(manifest.svg).unwrap_or(true),
        })
    }

    /// Command parameters, validated against `T`.
    pub fn params<T: DeserializeOwned>(&self, command: &str) -> CliResult<T> {
        serde_json::from_value(self.params.clone())
            .map_err(|e| CliError::Schema(format!("params for {command}: {e}")))
    }

    pub fn has_params(&self) -> bool {
        self.params.as_object().is_some_and(|m| !m.is_empty())
    }

    pub fn differential(&self) -> CliResult<QuadraticDifferential> {
        let doc = match &self.differential {
            None => return Err(CliError::Schema("manifest has no differential".into())),
            Some(Value::String(p)) => {
                let path = self.base_dir.join(p);
                let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                DifferentialDoc::parse(&text)?
            }
            Some(v) => DifferentialDoc::from_value(v.clone())?,
        };
        Ok(doc.build()?)
    }

    pub fn resolution_or(&self, default: (usize, usize)) -> (usize, usize) {
        self.resolution.unwrap_or(default)
    }
}

/// Parses `NX,NT`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("resolution '{s}' is not of the form NX,NT"))?;
    let nx = a.trim().parse().map_err(|_| format!("bad NX '{a}'"))?;
    let nt = b.trim().parse().map_err(|_| format!("bad NT '{b}'"))?;
    Ok((nx, nt))
}
