//! Gauss–Legendre rules and a globally adaptive bisection driver.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule15() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

/// Applies the 15-point rule on `[a, b]`.
pub fn gl15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> C64 {
    let (x, w) = rule15();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(w)
        .map(|(&xi, &wi)| f(mid + half * xi) * wi)
        .sum::<C64>()
        * half
}

#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for Adaptive {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_depth: 48,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: C64,
    pub error: f64,
}

impl Adaptive {
    /// Integrates a complex-valued function over `[a, b]` by recursive
    /// bisection, comparing each panel against the sum of its halves.
    pub fn integrate<F: FnMut(f64) -> C64>(&self, mut f: F, a: f64, b: f64) -> Quad {
        if a == b {
            return Quad {
                value: C64::new(0.0, 0.0),
                error: 0.0,
            };
        }
        let whole = gl15(&mut f, a, b);
        let mut stack = vec![(a, b, whole, 0u32)];
        let mut value = C64::new(0.0, 0.0);
        let mut error = 0.0;
        let scale = whole.norm();
        let span = (b - a).abs();
        while let Some((lo, hi, est, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let left = gl15(&mut f, lo, mid);
            let right = gl15(&mut f, mid, hi);
            let refined = left + right;
            let diff = (refined - est).norm();
            let frac = (hi - lo).abs() / span;
            let budget = (self.abs_tol * frac).max(self.rel_tol * scale * frac);
            if diff <= budget || depth >= self.max_depth {
                value += refined;
                error += diff;
            } else {
                stack.push((mid, hi, right, depth + 1));
                stack.push((lo, mid, left, depth + 1));
            }
        }
        Quad { value, error }
    }

    pub fn integrate_real<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        self.integrate(|t| C64::new(f(t), 0.0), a, b).value.re
    }
}

/// Trapezoidal rule for a `2π`-periodic integrand, exponentially accurate for
/// analytic integrands.
pub fn periodic_trapezoid<F: FnMut(f64) -> C64>(mut f: F, n: usize) -> C64 {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<C64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(15);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(28)).sum();
        assert!((s - 2.0 / 29.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let q = Adaptive::default();
        let v = q.integrate_real(|x| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0);
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10, "{v}");
    }

    #[test]
    fn trapezoid_on_circle() {
        let v = periodic_trapezoid(|t| C64::new(t.cos().powi(2), 0.0), 32);
        assert!((v.re - std::f64::consts::PI).abs() < 1e-14);
    }
}
