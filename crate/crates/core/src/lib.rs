//! Computational toolkit for meromorphic quadratic differentials with
//! higher-order poles.
//!
//! The crate is organised by subject:
//!
//! * [`qdiff`]: differentials, local charts at poles, residues, principal
//!   parts and the compatibility identity between residues and the
//!   transverse measures of the horizontal foliation.
//! * [`foliation`]: trajectory tracing, transverse measures, distinguished
//!   points on sink-disk boundaries and strip/half-plane decompositions.
//! * [`rtree`]: metric trees, planar metric expansions, leaf spaces of pole
//!   neighbourhoods, equivariant gluing and dimension counts.
//! * [`harmonic`]: finite-difference harmonic functions on flat cylinders,
//!   the partially free problem and its doubling, spectral decay and Hopf
//!   differentials.
//! * [`shear`]: strip periods and the shear action on them.
//!
//! Interchangeable algorithms (linear solvers for the cylinder problems,
//! residue evaluation routes) sit behind object-safe traits and are looked
//! up by name through a [`registry::Registry`].

pub mod error;
pub mod foliation;
pub mod format;
pub mod harmonic;
pub mod numeric;
pub mod qdiff;
pub mod registry;
pub mod rtree;
pub mod shear;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
