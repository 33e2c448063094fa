use num_complex::Complex64 as C64;

/// Dense complex polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub at: C64,
    pub multiplicity: u32,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * z^k`.
    pub fn monomial(c: C64, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::constant(C64::new(0.0, 0.0));
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, k: usize| p.coeffs.get(k).copied().unwrap_or_default();
        Poly::new((0..n).map(|k| get(self, k) + get(other, k)).collect())
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::constant(C64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// Order of vanishing at the origin (the index of the first nonzero
    /// coefficient). The zero polynomial reports its length.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| c.norm() != 0.0)
            .unwrap_or(self.coeffs.len())
    }

    /// Product of `(z - r)` over the given roots, scaled by `lead`.
    pub fn from_roots(lead: C64, roots: &[C64]) -> Poly {
        roots.iter().fold(Poly::constant(lead), |acc, &r| {
            acc.mul(&Poly::new(vec![-r, C64::new(1.0, 0.0)]))
        })
    }

    /// All roots with multiplicity, by Aberth–Ehrlich iteration followed by
    /// clustering of nearly coincident roots.
    ///
    /// Roots closer than `cluster_tol * (1 + |root|)` are merged and reported
    /// once with the combined multiplicity.
    pub fn roots(&self, cluster_tol: f64) -> Vec<Root> {
        let v = self.valuation();
        let mut out = Vec::new();
        if v > 0 && !self.is_zero() {
            out.push(Root {
                at: C64::new(0.0, 0.0),
                multiplicity: v as u32,
            });
        }
        let reduced = Poly::new(self.coeffs[v.min(self.coeffs.len() - 1)..].to_vec());
        let n = reduced.degree();
        if n == 0 {
            return out;
        }
        let raw = aberth(&reduced);
        let mut used = vec![false; n];
        for i in 0..n {
            if used[i] {
                continue;
            }
            used[i] = true;
            let mut members = vec![raw[i]];
            for j in (i + 1)..n {
                if !used[j] && (raw[j] - raw[i]).norm() < cluster_tol * (1.0 + raw[i].norm()) {
                    used[j] = true;
                    members.push(raw[j]);
                }
            }
            let mean = members.iter().sum::<C64>() / members.len() as f64;
            out.push(Root {
                at: mean,
                multiplicity: members.len() as u32,
            });
        }
        out
    }
}

fn aberth(p: &Poly) -> Vec<C64> {
    let n = p.degree();
    let lead = p.leading();
    let monic: Vec<C64> = p.coeffs.iter().map(|&c| c / lead).collect();
    let dp = p.derivative();
    // Cauchy bound for the initial circle.
    let bound = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            C64::from_polar(0.5 * bound, ang)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let pv = p.eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let repulsion: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}
