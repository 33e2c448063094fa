//! Embedded Dormand–Prince 5(4) stepper with step-size control, for
//! autonomous systems.
//!
//! The caller owns the integration loop; this keeps event handling
//! (branch tracking, escape tests, crossings) outside the stepper.

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Differences between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub y: [f64; N],
    pub h_used: f64,
    pub h_next: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepUnderflow {
    pub h: f64,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (coef, k) in terms {
        for i in 0..N {
            out[i] += h * coef * k[i];
        }
    }
    out
}

impl DormandPrince {
    pub fn new(rtol: f64) -> Self {
        Self {
            rtol,
            atol: rtol,
            h_min: 1e-14,
        }
    }

    /// Takes one accepted step of at most `h_max`, starting from trial size
    /// `h`, shrinking until the local error estimate is within tolerance.
    ///
    /// Only the components listed in `controlled` enter the error norm.
    pub fn step<const N: usize, F>(
        &self,
        f: &mut F,
        y: &[f64; N],
        mut h: f64,
        h_max: f64,
        controlled: usize,
    ) -> Result<Step<N>, StepUnderflow>
    where
        F: FnMut(&[f64; N]) -> [f64; N],
    {
        h = h.min(h_max);
        let k1 = f(y);
        loop {
            if h < self.h_min {
                return Err(StepUnderflow { h });
            }
            let k2 = f(&axpy(y, h, &[(A21, &k1)]));
            let k3 = f(&axpy(y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(&axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(&axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(&axpy(
                y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ));
            let y5 = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(&y5);
            let mut err = 0.0_f64;
            for i in 0..controlled.min(N) {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y5[i].abs());
                err = err.max((e / sc).abs());
            }
            let finite = y5.iter().all(|v| v.is_finite()) && err.is_finite();
            if finite && err <= 1.0 {
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                return Ok(Step {
                    y: y5,
                    h_used: h,
                    h_next: (h * factor).min(h_max),
                });
            }
            let factor = if finite {
                (0.9 * err.powf(-0.25)).clamp(0.1, 0.5)
            } else {
                0.25
            };
            h *= factor;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_rotation() {
        let dp = DormandPrince::new(1e-11);
        let mut y = [1.0, 0.0];
        let mut h = 0.1;
        let mut t = 0.0;
        let mut f = |y: &[f64; 2]| [-y[1], y[0]];
        while t < std::f64::consts::PI {
            let st = dp
                .step(&mut f, &y, h, std::f64::consts::PI - t, 2)
                .unwrap();
            y = st.y;
            t += st.h_used;
            h = st.h_next;
        }
        assert!((y[0] + 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
    }
}
