//! One function per subcommand. Each returns a JSON summary plus the files
//! to write into the output directory.

use std::f64::consts::PI;

use folia::foliation::{
    distinguished_points, strip_decomposition, trace_trajectory, transverse_measure_with, Arc, Kind,
    TraceLimits,
};
use folia::format::{to_json, CsvTable};
use folia::harmonic::{
    decay_experiment, encode_folh, exhaustion_experiment, field_csv, solve_dirichlet_with,
    solve_partially_free_with, sup_norm, BoundaryData, CylinderGrid, ExhaustionOptions, SolveOptions,
};
use folia::numeric::quadrature::Adaptive;
use folia::qdiff::residue::{default_radius, residue_with};
use folia::qdiff::{
    check_compatibility, principal_part, Form, Mobius, PoleLocation, QuadraticDifferential,
    ResidueOptions,
};
use folia::rtree::{
    build_pole_leafspace, enumerate_expansions, catalan, mf_dimension, ExpansionType, LeafSpaceData,
};
use folia::shear::{periods_csv, shear_skeleton, strip_periods, ShearVector, TrustRegion};
use folia::shear::generic_strip_count;
use num_complex::Complex64 as C64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::manifest::Context;
use crate::plots;

#[derive(Debug, Default)]
pub struct Output {
    pub summary: Value,
    pub files: Vec<(String, Vec<u8>)>,
    /// Set when the run completed but its verdict is negative; the front
    /// end exits with the domain-error code after writing the files.
    pub failure: Option<String>,
}

impl Output {
    fn new(summary: Value) -> Self {
        Self {
            summary,
            ..Self::default()
        }
    }

    fn file(&mut self, name: &str, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), bytes.into()));
    }

    fn json(&mut self, name: &str, v: &Value) -> CliResult<()> {
        let mut s = to_json(v)?;
        s.push('\n');
        self.file(name, s);
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PoleArg {
    Index(usize),
    Symbol(String),
    Point([f64; 2]),
}

impl Default for PoleArg {
    fn default() -> Self {
        PoleArg::Index(0)
    }
}

impl PoleArg {
    fn resolve(&self, q: &QuadraticDifferential) -> CliResult<usize> {
        let found = match self {
            PoleArg::Index(i) => {
                q.pole(*i)?;
                Some(*i)
            }
            PoleArg::Symbol(s) if s == "inf" || s == "infinity" => q.find_pole(PoleLocation::Infinity),
            PoleArg::Symbol(s) => {
                return Err(CliError::Schema(format!("pole '{s}': expected an index, \"inf\" or [re, im]")))
            }
            PoleArg::Point([re, im]) => q.find_pole(PoleLocation::Finite(C64::new(*re, *im))),
        };
        found.ok_or_else(|| folia::Error::InvalidInput(format!("no pole at {self:?}")).into())
    }
}

fn pole_chart(q: &QuadraticDifferential, pole: usize) -> CliResult<Mobius> {
    Ok(match q.form() {
        Form::LaurentModel(_) => Mobius::identity(),
        Form::RationalSphere { .. } => q.default_chart(pole)?,
    })
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn location(q: &QuadraticDifferential, pole: usize) -> Value {
    match q.poles()[pole].at {
        PoleLocation::Infinity => json!("inf"),
        PoleLocation::Finite(c) => json!(pair(c)),
    }
}

fn horizontal() -> Kind {
    Kind::Horizontal
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceParams {
    start: [f64; 2],
    #[serde(default = "horizontal")]
    kind: Kind,
    /// `+1` or `-1`; both directions when absent.
    orientation: Option<f64>,
    max_length: Option<f64>,
    max_steps: Option<usize>,
}

pub fn trace(ctx: &Context) -> CliResult<Output> {
    let p: TraceParams = ctx.params("trace")?;
    let q = ctx.differential()?;
    let orientations = match p.orientation {
        None => vec![1.0, -1.0],
        Some(o) if o == 1.0 || o == -1.0 => vec![o],
        Some(o) => return Err(CliError::Schema(format!("orientation {o} must be 1 or -1"))),
    };
    let mut limits = TraceLimits::default();
    if let Some(l) = p.max_length {
        limits.max_length = l;
    }
    if let Some(s) = p.max_steps {
        limits.max_steps = s;
    }
    let start = C64::new(p.start[0], p.start[1]);
    let legs = orientations
        .iter()
        .map(|&o| trace_trajectory(&q, start, p.kind, o, &limits))
        .collect::<folia::Result<Vec<_>>>()?;

    let mut csv = CsvTable::new(["leg", "re", "im"]);
    for (k, leg) in legs.iter().enumerate() {
        for z in &leg.points {
            csv.push(vec![k.to_string(), folia::format::fmt_f64(z.re), folia::format::fmt_f64(z.im)]);
        }
    }
    let legs_json: Vec<Value> = legs
        .iter()
        .zip(&orientations)
        .map(|(leg, o)| {
            json!({
                "orientation": o,
                "termination": leg.termination,
                "natural_parameter": leg.natural_parameter,
                "drift": leg.drift,
                "points": leg.points.len(),
                "end": pair(*leg.points.last().unwrap_or(&start)),
            })
        })
        .collect();
    let summary = json!({"command": "trace", "kind": p.kind, "start": p.start, "legs": legs_json});
    let mut out = Output::new(summary.clone());
    out.json("trace.json", &summary)?;
    out.file("trace.csv", csv.render());
    if ctx.svg {
        out.file("trace.svg", plots::trace_scene(&q, start, &legs).render());
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

pub fn decompose(ctx: &Context) -> CliResult<Output> {
    let _: NoParams = ctx.params("decompose")?;
    let q = ctx.differential()?;
    let sk = strip_decomposition(&q)?;
    let periods = strip_periods(&q, &sk)?;
    let mut skeleton = sk.to_json();
    skeleton["zeros"] = json!(q.zeros().iter().map(|z| pair(z.at)).collect::<Vec<_>>());
    let summary = json!({
        "command": "decompose",
        "strip_count": sk.strips.len(),
        "half_plane_count": sk.half_planes.len(),
        "widths": sk.strips.iter().map(|s| s.width).collect::<Vec<_>>(),
        "skeleton": skeleton,
    });
    let mut out = Output::new(summary.clone());
    out.json("skeleton.json", &summary)?;
    out.file("periods.csv", periods_csv(&periods).render());
    if ctx.svg {
        out.file("decompose.svg", plots::decompose_scene(&q, &sk).render());
    }
    Ok(out)
}

fn laurent() -> String {
    "laurent".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResidueParams {
    #[serde(default)]
    pole: PoleArg,
    #[serde(default = "laurent")]
    method: String,
    radius: Option<f64>,
}

pub fn residue(ctx: &Context) -> CliResult<Output> {
    let p: ResidueParams = ctx.params("residue")?;
    let q = ctx.differential()?;
    let pole = p.pole.resolve(&q)?;
    let opts = ResidueOptions {
        radius: p.radius,
        tol: ctx.tol.quadrature,
        ..ResidueOptions::default()
    };
    let res = residue_with(&q, pole, &p.method, &opts)?;
    let order = q.poles()[pole].order;
    let principal = if order >= 3 {
        let pp = principal_part(&q, pole, &pole_chart(&q, pole)?)?;
        json!(pp.coefficients.iter().map(|c| pair(*c)).collect::<Vec<_>>())
    } else {
        Value::Null
    };
    let summary = json!({
        "command": "residue",
        "pole": pole,
        "location": location(&q, pole),
        "order": order,
        "method": p.method,
        "residue": pair(res.value),
        "loop_integral": pair(res.loop_integral()),
        "principal_part": principal,
    });
    let mut out = Output::new(summary.clone());
    out.json("residue.json", &summary)?;
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompatParams {
    #[serde(default)]
    pole: PoleArg,
    /// Radius of the sink circle in the pole chart.
    radius: Option<f64>,
    /// Arc measures supplied directly instead of being measured.
    local_params: Option<Vec<f64>>,
}

pub fn compat(ctx: &Context) -> CliResult<Output> {
    let p: CompatParams = ctx.params("compat")?;
    let q = ctx.differential()?;
    let pole = p.pole.resolve(&q)?;
    let chart = pole_chart(&q, pole)?;
    let (measures, angles) = match p.local_params {
        Some(m) => (m, Value::Null),
        None => {
            let radius = p.radius.unwrap_or_else(|| default_radius(&q, pole, &chart));
            let dp = distinguished_points(&q, pole, radius)?;
            let quad = Adaptive {
                rel_tol: ctx.tol.quadrature,
                abs_tol: 1e-3 * ctx.tol.quadrature,
                ..Adaptive::default()
            };
            let k = dp.angles.len();
            let measures = (0..k)
                .map(|j| {
                    let from = dp.angles[j];
                    let to = if j + 1 < k { dp.angles[j + 1] } else { dp.angles[0] + 2.0 * PI };
                    let arc = Arc::ChartCircle {
                        chart: dp.chart,
                        radius,
                        from,
                        to,
                    };
                    transverse_measure_with(&q, &arc, &quad)
                })
                .collect::<folia::Result<Vec<_>>>()?;
            (measures, json!(dp.angles))
        }
    };
    let pp = principal_part(&q, pole, &chart)?;
    let c = check_compatibility(&pp, &measures, ctx.tol.compat)?;
    let summary = json!({
        "command": "compat",
        "pole": pole,
        "order": pp.pole_order,
        "angles": angles,
        "local_params": measures,
        "alternating_sum": c.alternating_sum,
        "target": c.target,
        "residual": c.residual,
        "compatible": c.compatible,
    });
    let mut out = Output::new(summary.clone());
    out.json("compat.json", &summary)?;
    if !c.compatible {
        out.failure = Some(format!(
            "incompatible: alternating sum of arc measures {} differs from 2 pi Re(residue) = {} beyond tolerance {}",
            c.alternating_sum, c.target, ctx.tol.compat
        ));
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case", deny_unknown_fields)]
enum LeafSpaceParams {
    Positive {
        tau: f64,
        diagonals: Vec<(usize, usize)>,
        lengths: Vec<f64>,
        a0: f64,
        a_last: f64,
    },
    Zero {
        #[serde(default)]
        diagonals: Option<Vec<(usize, usize)>>,
        #[serde(default)]
        lengths: Vec<f64>,
        root_length: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
enum TreeParams {
    Enumerate {
        valence: usize,
    },
    Expansion {
        valence: usize,
        diagonals: Vec<(usize, usize)>,
        lengths: Vec<f64>,
    },
    Leafspace {
        order: u32,
        data: LeafSpaceParams,
    },
}

pub fn tree(ctx: &Context) -> CliResult<Output> {
    let p: TreeParams = ctx.params("tree")?;
    match p {
        TreeParams::Enumerate { valence } => {
            let types = enumerate_expansions(valence)?;
            let list: Vec<Value> = types
                .iter()
                .map(|t| {
                    json!({
                        "diagonals": t.diagonals(),
                        "splits": t.splits(),
                        "parameter_dimension": t.parameter_dimension(),
                    })
                })
                .collect();
            let summary = json!({
                "command": "tree",
                "mode": "enumerate",
                "valence": valence,
                "count": types.len(),
                "catalan": catalan(valence.saturating_sub(2)),
                "types": list,
            });
            let mut out = Output::new(summary.clone());
            out.json("tree.json", &summary)?;
            Ok(out)
        }
        TreeParams::Expansion {
            valence,
            diagonals,
            lengths,
        } => {
            let t = ExpansionType::from_diagonals(valence, &diagonals)?;
            let tree = t.to_tree(&lengths)?;
            let summary = json!({
                "command": "tree",
                "mode": "expansion",
                "parameter_dimension": t.parameter_dimension(),
                "tree": tree.to_json(),
            });
            let mut out = Output::new(summary.clone());
            out.json("tree.json", &summary)?;
            out.file("tree.dot", tree.to_dot());
            if ctx.svg {
                out.file("tree.svg", plots::tree_scene(&tree, "metric expansion").render());
            }
            Ok(out)
        }
        TreeParams::Leafspace { order, data } => {
            let data = match data {
                LeafSpaceParams::Positive {
                    tau,
                    diagonals,
                    lengths,
                    a0,
                    a_last,
                } => LeafSpaceData::Positive {
                    tau,
                    expansion: ExpansionType::from_diagonals(order as usize, &diagonals)?,
                    lengths,
                    a0,
                    a_last,
                },
                LeafSpaceParams::Zero {
                    diagonals,
                    lengths,
                    root_length,
                } => {
                    let expansion = if order > 3 {
                        Some(ExpansionType::from_diagonals(
                            order as usize - 1,
                            diagonals.as_deref().unwrap_or(&[]),
                        )?)
                    } else if diagonals.is_some_and(|d| !d.is_empty()) {
                        return Err(CliError::Schema("order 3 leaf space takes no diagonals".into()));
                    } else {
                        None
                    };
                    LeafSpaceData::Zero {
                        expansion,
                        lengths,
                        root_length,
                    }
                }
            };
            let ls = build_pole_leafspace(order, &data)?;
            let mut leaf = serde_json::to_value(&ls)?;
            leaf["fundamental_domain"] = ls.fundamental_domain.to_json();
            let summary = json!({"command": "tree", "mode": "leafspace", "leaf_space": leaf});
            let mut out = Output::new(summary.clone());
            out.json("tree.json", &summary)?;
            out.file("tree.dot", ls.fundamental_domain.to_dot());
            if ctx.svg {
                out.file(
                    "tree.svg",
                    plots::tree_scene(&ls.fundamental_domain, "pole leaf space").render(),
                );
            }
            Ok(out)
        }
    }
}

fn pcg() -> String {
    "pcg".into()
}

fn spectral() -> String {
    "spectral".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveParams {
    length: f64,
    top: BoundaryData,
    /// Free end when absent.
    bottom: Option<BoundaryData>,
    #[serde(default = "pcg")]
    solver: String,
}

pub fn solve(ctx: &Context) -> CliResult<Output> {
    let p: SolveParams = ctx.params("solve")?;
    let (nx, nt) = ctx.resolution_or((65, 64));
    let grid = CylinderGrid::new(p.length, nx, nt)?;
    let opts = SolveOptions {
        solver: p.solver.clone(),
        tol: ctx.tol.solver,
    };
    let top = p.top.sample(nt);
    let field = match &p.bottom {
        Some(b) => solve_dirichlet_with(&grid, &top, &b.sample(nt), &opts)?,
        None => solve_partially_free_with(&grid, &top, &opts)?,
    };
    let summary = json!({
        "command": "solve",
        "length": p.length,
        "resolution": [nx, nt],
        "boundary": if p.bottom.is_some() { "dirichlet" } else { "partially_free" },
        "solver": p.solver,
        "iterations": field.iterations,
        "residual": field.residual,
        "energy": field.energy,
        "midline_max": sup_norm(&field.midline()),
        "end_max": sup_norm(field.row(nx - 1)),
    });
    let mut out = Output::new(summary.clone());
    out.json("solve.json", &summary)?;
    out.file("field.csv", field_csv(&field).render());
    out.file("field.folh", encode_folh(&grid, &field.values));
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecayParams {
    boundary: BoundaryData,
    lengths: Vec<f64>,
    #[serde(default = "spectral")]
    solver: String,
}

pub fn decay(ctx: &Context) -> CliResult<Output> {
    let p: DecayParams = ctx.params("decay")?;
    let (nx, nt) = ctx.resolution_or((129, 64));
    let f = p.boundary.sample(nt);
    let opts = SolveOptions {
        solver: p.solver.clone(),
        tol: ctx.tol.solver,
    };
    let report = decay_experiment(&f, &p.lengths, (nx, nt), &opts)?;
    let summary = json!({
        "command": "decay",
        "resolution": [nx, nt],
        "solver": p.solver,
        "amplitude": report.amplitude,
        "slope": report.slope,
        "k": report.k,
        "dtheta_slope": report.dtheta_slope,
        "dtheta_k": report.dtheta_k,
        "rows": report.rows,
    });
    let mut out = Output::new(summary.clone());
    out.json("decay.json", &summary)?;
    out.file("decay.csv", report.to_csv().render());
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExhaustParams {
    a: [f64; 2],
    order: u32,
    delta: f64,
    i_max: u32,
    nodes_per_unit: Option<f64>,
    #[serde(default = "spectral")]
    solver: String,
}

pub fn exhaust(ctx: &Context) -> CliResult<Output> {
    let p: ExhaustParams = ctx.params("exhaust")?;
    let defaults = ExhaustionOptions::default();
    let opts = ExhaustionOptions {
        nodes_per_unit: p.nodes_per_unit.unwrap_or(defaults.nodes_per_unit),
        ntheta: ctx.resolution.map_or(defaults.ntheta, |r| r.1),
        solve: SolveOptions {
            solver: p.solver.clone(),
            tol: ctx.tol.solver,
        },
    };
    let report = exhaustion_experiment(C64::new(p.a[0], p.a[1]), p.order, p.delta, p.i_max, &opts)?;
    let summary = json!({
        "command": "exhaust",
        "a": p.a,
        "order": p.order,
        "delta": p.delta,
        "ntheta": opts.ntheta,
        "nodes_per_unit": opts.nodes_per_unit,
        "rows": report.rows,
    });
    let mut out = Output::new(summary.clone());
    out.json("exhaust.json", &summary)?;
    out.file("exhaust.csv", report.to_csv().render());
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShearParams {
    shear: Vec<f64>,
    trust_factor: Option<f64>,
}

pub fn shear(ctx: &Context) -> CliResult<Output> {
    let p: ShearParams = ctx.params("shear")?;
    let q = ctx.differential()?;
    let sk = strip_decomposition(&q)?;
    let trust = p
        .trust_factor
        .map_or_else(TrustRegion::default, |factor| TrustRegion { factor });
    let before = strip_periods(&q, &sk)?;
    let after = shear_skeleton(&q, &sk, &ShearVector(p.shear.clone()), trust)?;
    let summary = json!({
        "command": "shear",
        "shear": p.shear,
        "trust_factor": trust.factor,
        "before": before,
        "after": after,
    });
    let mut out = Output::new(summary.clone());
    out.json("shear.json", &summary)?;
    out.file("periods.csv", periods_csv(&before).render());
    out.file("sheared.csv", periods_csv(&after).render());
    Ok(out)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsParams {
    pub genus: Option<u32>,
    pub orders: Option<Vec<u32>>,
}

pub fn dims(ctx: &Context, flags: DimsParams) -> CliResult<Output> {
    let p: DimsParams = if ctx.has_params() { ctx.params("dims")? } else { DimsParams::default() };
    let genus = flags
        .genus
        .or(p.genus)
        .ok_or_else(|| CliError::Usage("dims needs a genus (--g or params.genus)".into()))?;
    let orders = flags
        .orders
        .or(p.orders)
        .ok_or_else(|| CliError::Usage("dims needs pole orders (--orders or params.orders)".into()))?;
    let d = mf_dimension(genus, &orders)?;
    let strips = generic_strip_count(genus, &orders)?;
    let mut summary = serde_json::to_value(&d)?;
    summary["strip_count"] = json!(strips);
    let mut out = Output::new(summary.clone());
    out.json("dims.json", &summary)?;
    Ok(out)
}
