//! Metric trees dual to measured foliations: leaf spaces at poles, planar
//! metric expansions, equivariant gluing and dimension counts.

mod dims;
mod expansion;
mod glue;
mod leafspace;
mod tree;

pub use dims::{mf_dimension, surface_with_boundary_dimension, MfDimension};
pub use expansion::{catalan, enumerate_expansions, ExpansionType};
pub use glue::glue_trees;
pub use leafspace::{axis_length, build_pole_leafspace, LeafSpaceCase, LeafSpaceData, PoleLeafSpace};
pub use tree::{Edge, MetricTree, Ray, ZAction};
