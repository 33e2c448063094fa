use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::PrincipalPart;

/// Outcome of comparing local parameters against a principal part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Compatibility {
    pub compatible: bool,
    pub residual: f64,
    /// `sum_j (-1)^j mu_j` starting at the first listed arc.
    pub alternating_sum: f64,
    /// `2 pi Re(a)` for the stored sign of the residue.
    pub target: f64,
}

/// Tests `sum_j (-1)^j mu_j = 2 pi Re(a)` up to the sign/starting-arc
/// ambiguity.
///
/// `rel_tol` is relative to `max(2 pi |Re a|, sum_j mu_j)`.
pub fn check_compatibility(
    p: &PrincipalPart,
    local_params: &[f64],
    rel_tol: f64,
) -> Result<Compatibility> {
    let n = p.pole_order as usize;
    if local_params.len() != n - 2 {
        return Err(Error::LocalParamCount {
            got: local_params.len(),
            expected: n - 2,
        });
    }
    if let Some(&m) = local_params.iter().find(|m| !(**m >= 0.0)) {
        return Err(Error::NegativeMeasure(m));
    }
    let alternating_sum: f64 = local_params
        .iter()
        .enumerate()
        .map(|(j, m)| if j % 2 == 0 { *m } else { -*m })
        .sum();
    let target = 2.0 * PI * p.residue().re;
    if n % 2 == 1 {
        return Ok(Compatibility {
            compatible: true,
            residual: 0.0,
            alternating_sum,
            target,
        });
    }
    // shifting the starting arc by one flips the sign, as does negating P
    let residual = (alternating_sum - target)
        .abs()
        .min((alternating_sum + target).abs());
    let scale = target.abs().max(local_params.iter().sum());
    Ok(Compatibility {
        compatible: residual <= rel_tol * scale,
        residual,
        alternating_sum,
        target,
    })
}

/// `sum (n_i - 1)`: real dimension of the compatible principal parts.
pub fn compat_space_dimension(pole_orders: &[u32]) -> Result<u64> {
    if pole_orders.is_empty() {
        return Err(Error::EmptyOrders);
    }
    pole_orders.iter().try_fold(0u64, |acc, &n| {
        if n < 3 {
            Err(Error::NotHigherOrder {
                order: n,
                what: "the compatible principal part count",
            })
        } else {
            Ok(acc + (n - 1) as u64)
        }
    })
}

/// `6g - 6 + 2 sum n_i`.
pub fn total_space_dimension(genus: u32, pole_orders: &[u32]) -> Result<i64> {
    compat_space_dimension(pole_orders)?;
    let s: i64 = pole_orders.iter().map(|&n| n as i64).sum();
    Ok(6 * genus as i64 - 6 + 2 * s)
}
