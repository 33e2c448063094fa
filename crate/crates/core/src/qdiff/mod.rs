//! Meromorphic quadratic differentials and their pole-local invariants.

mod chart;
mod compat;
mod differential;
pub mod io;
mod principal;
pub mod residue;

pub use chart::Mobius;
pub use compat::{check_compatibility, compat_space_dimension, total_space_dimension, Compatibility};
pub use differential::{Form, LaurentModel, Pole, PoleLocation, QuadraticDifferential, Zero};
pub use principal::{principal_part, sqrt_laurent, PrincipalPart, SqrtLaurent};
pub use residue::{residue, residue_registry, Residue, ResidueMethod, ResidueOptions};

/// Index of a pole in [`QuadraticDifferential::poles`].
pub type PoleRef = usize;
