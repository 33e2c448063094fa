use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Local collapsing function `Im(1/w^2 + a/w)` of the quotient model.
pub fn collapsing_value(a: C64, w: C64) -> Result<f64> {
    if w.norm() == 0.0 {
        return Err(Error::CollapsingAtPole);
    }
    let r = w.inv();
    Ok((r * r + a * r).im)
}
