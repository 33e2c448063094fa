//! Horizontal and vertical foliations of `q`: trajectories, transverse
//! measures, distinguished points at poles and strip decompositions.

mod collapse;
mod distinguished;
mod measure;
pub mod path;
mod skeleton;
mod trajectory;

pub use collapse::collapsing_value;
pub use distinguished::{distinguished_points, DistinguishedPoints};
pub use measure::{transverse_measure, transverse_measure_with, Arc, Curve};
pub use skeleton::{
    separatrix_graph, strip_decomposition, FoliationSkeleton, HalfPlane, Separatrix,
    SeparatrixGraph, Strip,
};
pub use trajectory::{trace_from, trace_trajectory, Kind, Termination, TraceLimits, Trajectory};
