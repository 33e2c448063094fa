//! Front end for the folia toolkit: manifests, subcommands, output files
//! and SVG plots.

pub mod commands;
pub mod error;
pub mod manifest;
pub mod plots;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use crate::commands::{DimsParams, Output};
use crate::error::{CliError, CliResult};
use crate::manifest::{parse_resolution, Context, Manifest, Overrides};

fn parse_switch(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(format!("expected 'on' or 'off', got '{s}'")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "folia", version, about = "Quadratic differentials, foliations and harmonic maps")]
pub struct Cli {
    /// JSON manifest with the differential and command parameters.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Directory for result files; nothing is written without one.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Quadrature tolerance [default: 1e-8].
    #[arg(long, global = true)]
    pub tol_quadrature: Option<f64>,
    /// Linear solver tolerance [default: 1e-10].
    #[arg(long, global = true)]
    pub tol_solver: Option<f64>,
    /// Relative tolerance of the compatibility check [default: 1e-2].
    #[arg(long, global = true)]
    pub tol_compat: Option<f64>,
    /// Emit SVG plots (on/off) [default: on].
    #[arg(long, global = true, value_parser = parse_switch)]
    pub svg: Option<bool>,
    /// Cylinder grid as NX,NT.
    #[arg(long, global = true, value_parser = parse_resolution)]
    pub resolution: Option<(usize, usize)>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace a horizontal or vertical leaf through a point.
    Trace,
    /// Strip and half-plane decomposition of the horizontal foliation.
    Decompose,
    /// Residue and principal part at a pole.
    Residue,
    /// Compatibility of arc measures with the residue at a pole.
    Compat,
    /// Planar expansions, metric trees and pole leaf spaces.
    Tree,
    /// Harmonic function on a flat cylinder.
    Solve,
    /// Midline decay of harmonic functions with mean-zero data.
    Decay,
    /// Exhaustion of a punctured disk by annuli with a free outer end.
    Exhaust,
    /// Strip periods before and after a shear.
    Shear,
    /// Dimension counts for a genus and list of pole orders.
    Dims {
        #[arg(long)]
        g: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<u32>>,
    },
}

/// Result of a full invocation: what to print and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("FOLIA_NUM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("FOLIA_NUM_THREADS='{v}' is not a positive integer")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<(Output, Option<PathBuf>)> {
    configure_threads()?;
    let (manifest, base) = match &cli.manifest {
        Some(p) => (
            Manifest::load(p)?,
            p.parent().map(PathBuf::from).unwrap_or_default(),
        ),
        None => (Manifest::default(), PathBuf::from(".")),
    };
    let ctx = Context::resolve(
        manifest,
        base,
        Overrides {
            out: cli.out,
            tol_quadrature: cli.tol_quadrature,
            tol_solver: cli.tol_solver,
            tol_compat: cli.tol_compat,
            svg: cli.svg,
            resolution: cli.resolution,
        },
    )?;
    let out = match cli.command {
        Command::Trace => commands::trace(&ctx),
        Command::Decompose => commands::decompose(&ctx),
        Command::Residue => commands::residue(&ctx),
        Command::Compat => commands::compat(&ctx),
        Command::Tree => commands::tree(&ctx),
        Command::Solve => commands::solve(&ctx),
        Command::Decay => commands::decay(&ctx),
        Command::Exhaust => commands::exhaust(&ctx),
        Command::Shear => commands::shear(&ctx),
        Command::Dims { g, orders } => commands::dims(&ctx, DimsParams { genus: g, orders }),
    }?;
    Ok((out, ctx.out))
}

fn write_files(dir: &PathBuf, out: &Output) -> CliResult<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut names = Vec::new();
    for (name, bytes) in &out.files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        names.push(name.clone());
    }
    Ok(names)
}

fn finish(out: Output, dir: Option<PathBuf>) -> CliResult<Run> {
    let written = match &dir {
        Some(d) => write_files(d, &out)?,
        None => Vec::new(),
    };
    let mut summary = out.summary;
    if let Some(obj) = summary.as_object_mut() {
        obj.insert("files".into(), json!(written));
    }
    let mut stdout = folia::format::to_json(&summary)?;
    stdout.push('\n');
    Ok(match out.failure {
        Some(msg) => Run {
            code: 2,
            stdout,
            stderr: format!("error: {msg}\n"),
        },
        None => Run {
            code: 0,
            stdout,
            stderr: String::new(),
        },
    })
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Run {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Run {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli).and_then(|(out, dir)| finish(out, dir)) {
        Ok(r) => r,
        Err(e) => Run {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
