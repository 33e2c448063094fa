use num_complex::Complex64 as C64;

use super::Poly;

/// Truncated complex power series `a_0 + a_1 t + ... + a_{N-1} t^{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub coeffs: Vec<C64>,
}

impl Series {
    pub fn zeros(len: usize) -> Self {
        Self {
            coeffs: vec![C64::new(0.0, 0.0); len],
        }
    }

    pub fn one(len: usize) -> Self {
        let mut s = Self::zeros(len);
        s.coeffs[0] = C64::new(1.0, 0.0);
        s
    }

    /// Truncates (or zero-pads) a polynomial to `len` terms, after dropping
    /// its first `shift` coefficients.
    pub fn from_poly_shifted(p: &Poly, shift: usize, len: usize) -> Self {
        let mut s = Self::zeros(len);
        for (k, slot) in s.coeffs.iter_mut().enumerate() {
            if let Some(&c) = p.coeffs().get(k + shift) {
                *slot = c;
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        let mut out = Series::zeros(n);
        for i in 0..n {
            for j in 0..(n - i) {
                out.coeffs[i + j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn recip(&self) -> Option<Series> {
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 || !a0.is_finite() {
            return None;
        }
        let n = self.len();
        let mut b = Series::zeros(n);
        b.coeffs[0] = a0.inv();
        for k in 1..n {
            let acc: C64 = (1..=k).map(|j| self.coeffs[j] * b.coeffs[k - j]).sum();
            b.coeffs[k] = -acc / a0;
        }
        Some(b)
    }

    pub fn div(&self, other: &Series) -> Option<Series> {
        other.recip().map(|r| self.mul(&r))
    }

    /// Square root with the principal branch at the constant term.
    pub fn sqrt(&self) -> Option<Series> {
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 || !a0.is_finite() {
            return None;
        }
        let n = self.len();
        let mut b = Series::zeros(n);
        b.coeffs[0] = a0.sqrt();
        for k in 1..n {
            let acc: C64 = (1..k).map(|j| b.coeffs[j] * b.coeffs[k - j]).sum();
            b.coeffs[k] = (self.coeffs[k] - acc) / (b.coeffs[0] * 2.0);
        }
        Some(b)
    }

    /// Integer power, negative exponents through [`Series::recip`].
    pub fn powi(&self, e: i32) -> Option<Series> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut out = Series::one(self.len());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn sqrt_of_one_plus_t_squared() {
        // (1 + t^2)^{1/2} = 1 + t^2/2 - t^4/8 + ...
        let s = Series {
            coeffs: vec![r(1.0), r(0.0), r(1.0), r(0.0), r(0.0)],
        };
        let q = s.sqrt().unwrap();
        let want = [1.0, 0.0, 0.5, 0.0, -0.125];
        for (c, w) in q.coeffs.iter().zip(want) {
            assert!((c - r(w)).norm() < 1e-15);
        }
        let back = q.mul(&q);
        for (a, b) in back.coeffs.iter().zip(&s.coeffs) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn recip_geometric() {
        let s = Series {
            coeffs: vec![r(1.0), r(-1.0), r(0.0), r(0.0)],
        };
        let inv = s.recip().unwrap();
        assert!(inv.coeffs.iter().all(|c| (c - r(1.0)).norm() < 1e-15));
        assert!(Series::zeros(3).recip().is_none());
    }
}
