use serde::Serialize;

use crate::error::{Error, Result};

/// Dimension of the space of measured foliations with poles of the given
/// orders, with the count split along the pole-neighbourhood boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MfDimension {
    pub genus: u32,
    pub orders: Vec<u32>,
    pub chi: i64,
    pub boundary_dimension: i64,
    pub pole_dimensions: Vec<i64>,
    pub shared_measures: i64,
    pub identity_holds: bool,
    pub note: Option<String>,
}

/// `6g - 6 + 3b`, the dimension of measured foliations on a genus-`g`
/// surface with `b` boundary components.
pub fn surface_with_boundary_dimension(genus: u32, boundaries: usize) -> i64 {
    6 * genus as i64 - 6 + 3 * boundaries as i64
}

pub fn mf_dimension(genus: u32, orders: &[u32]) -> Result<MfDimension> {
    if let Some(&n) = orders.iter().find(|&&n| n < 3) {
        return Err(Error::NotHigherOrder {
            order: n,
            what: "measured foliation dimension",
        });
    }
    let k = orders.len() as i64;
    let chi = 6 * genus as i64 - 6 + orders.iter().map(|&n| n as i64 + 1).sum::<i64>();
    let boundary_dimension = surface_with_boundary_dimension(genus, orders.len());
    let pole_dimensions: Vec<i64> = orders.iter().map(|&n| n as i64 - 1).collect();
    let identity_holds = boundary_dimension + pole_dimensions.iter().sum::<i64>() - k == chi;
    let note = (genus < 2).then(|| format!("genus {genus} is outside the range g >= 2"));
    Ok(MfDimension {
        genus,
        orders: orders.to_vec(),
        chi,
        boundary_dimension,
        pole_dimensions,
        shared_measures: k,
        identity_holds,
        note,
    })
}
