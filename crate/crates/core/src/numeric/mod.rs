//! Numerical building blocks shared by the geometric modules.

pub mod ode;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod series;

pub use poly::Poly;
pub use series::Series;
