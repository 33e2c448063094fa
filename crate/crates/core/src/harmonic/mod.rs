//! Finite-difference harmonic functions on flat cylinders of circumference
//! `2 pi`: Dirichlet and partially free problems, the doubling identity,
//! the exact Fourier solution and its decay, Dirichlet energy (the
//! convention `E = sum |grad h|^2`, no factor 1/2), Hopf differentials and
//! the exhaustion of a punctured pole neighbourhood.

mod dump;
mod exhaust;
mod field;
mod fourier;
mod grid;
mod patch;
mod solver;

pub use dump::{decode_folh, encode_folh, field_csv, FOLH_MAGIC, FOLH_VERSION};
pub use exhaust::{exhaustion_experiment, ExhaustionOptions, ExhaustionReport, ExhaustionRow};
pub use field::{
    compare_restricted, energy, solve_dirichlet, solve_dirichlet_with, solve_partially_free,
    solve_partially_free_with, verify_doubling, BoundarySpec, HarmonicField, SolveOptions,
};
pub use fourier::{decay_experiment, fourier_solution, DecayReport, DecayRow};
pub use grid::{mean, sup_norm, BoundaryData, CylinderGrid};
pub use patch::{hopf_on, patch_energy, ChartMap, DiscreteHopf, HopfNode, Patch};
pub use solver::{solver_registry, CylinderProblem, CylinderSolver, Pcg, Solution, Spectral};

/// Hopf differential of a cylinder field in the coordinate `x + i theta`.
pub fn hopf(field: &HarmonicField) -> DiscreteHopf {
    hopf_on(&field.patch(), &field.values).expect("field values match its grid")
}
