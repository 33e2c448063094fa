//! One line per acceptance criterion: `PASS`/`FAIL`, runtime and the
//! measured quantities. Exits nonzero if a criterion fails that is not in
//! `KNOWN_UNATTAINABLE`.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use folia::foliation::{distinguished_points, strip_decomposition};
use folia::harmonic::{
    exhaustion_experiment, fourier_solution, hopf_on, decay_experiment, solve_dirichlet, verify_doubling,
    BoundaryData, CylinderGrid, ExhaustionOptions, Patch, SolveOptions,
};
use folia::qdiff::{LaurentModel, QuadraticDifferential};
use folia::rtree::{
    axis_length, build_pole_leafspace, catalan, enumerate_expansions, mf_dimension, LeafSpaceData,
};
use folia::shear::{apply_shear, strip_periods, ShearVector, TrustRegion};
use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

/// (z^3 - z) dz^2 has the horizontal saddle connection [-1, 0].
const KNOWN_UNATTAINABLE: &[u32] = &[4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_distinguished_points() -> Outcome {
    let q = QuadraticDifferential::laurent(LaurentModel::new(5, vec![(-5, C64::new(1.0, 0.0))]).unwrap());
    let d = match distinguished_points(&q, 0, 1.0) {
        Ok(d) => d,
        Err(e) => return outcome(false, e.to_string()),
    };
    let want = [PI / 3.0, PI, 5.0 * PI / 3.0];
    let err = if d.angles.len() == 3 {
        d.angles.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    outcome(err <= 1e-3, format!("{} points, max angular error {err:.3e}", d.angles.len()))
}

fn c2_compatibility() -> Outcome {
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for n in [4u32, 6, 8] {
        for a in [C64::new(0.3, 0.0), C64::new(0.3, 0.1), C64::new(-0.5, 0.0)] {
            let q = QuadraticDifferential::laurent(LaurentModel::normal_form(n, a).unwrap());
            let radius = 0.5 * a.norm().powf(-1.0 / (n as f64 / 2.0 - 1.0));
            let d = match distinguished_points(&q, 0, radius.min(1.0)) {
                Ok(d) => d,
                Err(e) => return outcome(false, format!("n={n} a={a}: {e}")),
            };
            let target = 2.0 * PI * a.re;
            let s = d.alternating_sum();
            let rel = (s - target).abs().min((s + target).abs()) / target.abs();
            if rel > worst {
                worst = rel;
                detail = format!("n={n} a={a}");
            }
        }
    }
    outcome(worst <= 1e-2, format!("max relative deviation {worst:.3e} ({detail})"))
}

fn z2_minus_one() -> QuadraticDifferential {
    QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap()
}

fn c3_strip_decomposition() -> Outcome {
    match strip_decomposition(&z2_minus_one()) {
        Ok(sk) => {
            let width = sk.strips.first().map_or(f64::NAN, |s| s.width);
            let err = (width - FRAC_PI_2).abs();
            outcome(
                sk.strips.len() == 1 && sk.half_planes.len() == 4 && err <= 1e-4,
                format!(
                    "{} strip(s), {} half-planes, width error {err:.3e}",
                    sk.strips.len(),
                    sk.half_planes.len()
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn c4_strip_count_law() -> Outcome {
    let corpus: [(&str, &[f64]); 3] = [
        ("z", &[0.0, 1.0]),
        ("z^2-1", &[-1.0, 0.0, 1.0]),
        ("z^3-z", &[0.0, -1.0, 0.0, 1.0]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, coeffs) in corpus {
        let q = QuadraticDifferential::polynomial_real(coeffs).unwrap();
        let chi: i64 = q.poles().iter().map(|p| p.order as i64 + 1).sum::<i64>() - 6;
        match strip_decomposition(&q) {
            Ok(sk) => {
                let ok = sk.strips.len() as i64 == chi;
                pass &= ok;
                parts.push(format!("{name}: {} of {chi}", sk.strips.len()));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: expected {chi}, {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn max_fourier_error(n: u32, length: f64, res: usize) -> f64 {
    let g = CylinderGrid::new(length, res, res).unwrap();
    let f = BoundaryData::cos_mode(n, 1.0).sample(res);
    let h = solve_dirichlet(&g, &f, &f).unwrap();
    let mut err = 0.0f64;
    for i in 0..g.nx {
        for j in 0..g.ntheta {
            let exact = fourier_solution(n, 1.0, length, g.x(i), g.theta(j)).unwrap();
            err = err.max((h.at(i, j) - exact).abs());
        }
    }
    err
}

fn c5_fourier_oracle() -> Outcome {
    let cases: Vec<(u32, f64)> = [1u32, 2, 3].iter().flat_map(|&n| [2.0, 4.0, 6.0].map(|l| (n, l))).collect();
    let errs: Vec<(u32, f64, f64, f64)> = cases
        .par_iter()
        .map(|&(n, l)| (n, l, max_fourier_error(n, l, 256), max_fourier_error(n, l, 512)))
        .collect();
    let e256 = errs.iter().map(|e| e.2).fold(0.0, f64::max);
    let e512 = errs.iter().map(|e| e.3).fold(0.0, f64::max);
    let order = errs
        .iter()
        .map(|&(_, l, a, b)| (a / b).ln() / ((l / 255.0) / (l / 511.0)).ln())
        .fold(f64::INFINITY, f64::min);
    outcome(
        e256 <= 5e-3 && e512 <= 1.5e-3 && order >= 1.8,
        format!("max error {e256:.3e} at 256, {e512:.3e} at 512, min observed order {order:.3}"),
    )
}

fn c6_decay() -> Outcome {
    const K: f64 = 2.0;
    let f = BoundaryData {
        constant: 0.0,
        cos: vec![(1, 1.0), (3, 0.5)],
        sin: vec![],
    }
    .sample(128);
    let r = match decay_experiment(&f, &[2.0, 4.0, 6.0, 8.0], (257, 128), &SolveOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    outcome(
        r.k <= K && r.dtheta_k <= K && r.slope <= -0.45 && r.dtheta_slope <= -0.45,
        format!(
            "K = {K}: max ratio {:.4}, derivative {:.4}; slopes {:.4}, {:.4}",
            r.k, r.dtheta_k, r.slope, r.dtheta_slope
        ),
    )
}

fn c7_doubling() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let g = CylinderGrid::new(2.0, 65, 64).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let data = BoundaryData {
            constant: 0.0,
            cos: (1..=5).map(|k| (k, rng.gen_range(-1.0..1.0))).collect(),
            sin: (1..=5).map(|k| (k, rng.gen_range(-1.0..1.0))).collect(),
        };
        match verify_doubling(&g, &data.sample(64), &SolveOptions::default()) {
            Ok(r) => worst = worst.max(r),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(worst <= 1e-8, format!("max residual {worst:.3e} over 10 data"))
}

fn c8_hopf() -> Outcome {
    let p = Patch::cartesian((0.0, 1.0), (0.0, 1.0), 33, 33);
    let h = hopf_on(&p, &p.sample(|z| z.im)).unwrap();
    let exact = h.nodes.iter().all(|n| n.value == C64::new(1.0, 0.0));
    let s = Patch::log_polar((0.5, 1.5), (-0.9 * PI, 0.9 * PI), 256, 256);
    let h = hopf_on(&s, &s.sample(|z| (2.0 / 3.0 * z.powf(1.5)).im)).unwrap();
    let rel = h
        .nodes
        .iter()
        .map(|n| (n.value - n.z).norm() / n.z.norm())
        .fold(0.0, f64::max);
    outcome(
        exact && rel <= 0.02,
        format!("Im z exact: {exact}; z^(3/2) max relative error {rel:.3e}"),
    )
}

fn c9_exhaustion() -> Outcome {
    let r = match exhaustion_experiment(C64::new(0.3, 0.0), 6, 0.5, 32, &ExhaustionOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let at = |i: u32| r.rows.iter().find(|row| row.i == i).expect("row");
    let ref_sup = at(8).free_sup;
    let envelope = r
        .rows
        .iter()
        .all(|row| row.free_sup <= 2.0 * ref_sup && row.free_sup >= 0.5 * ref_sup);
    let growth = r
        .rows
        .iter()
        .filter(|row| row.i > 8)
        .map(|row| (row.boundary_max / at(8).boundary_max / (row.i as f64 / 8.0).powi(6) - 1.0).abs())
        .fold(0.0, f64::max);
    let sups: Vec<String> = r.rows.iter().map(|row| format!("{:.4}", row.free_sup)).collect();
    outcome(
        envelope && growth <= 0.1,
        format!("free sups [{}], c_i growth deviation {growth:.3e}", sups.join(", ")),
    )
}

fn c10_trees() -> Outcome {
    let mut notes = Vec::new();
    let counts = (3..=9).all(|v| {
        let ours = common::expansion_split_sets(&enumerate_expansions(v).unwrap());
        let oracle = common::planar_split_sets(v);
        ours.len() as u64 == catalan(v - 2) && ours == oracle
    });
    notes.push(format!("Catalan/oracle {counts}"));
    let dims = (3..=10u32).all(|n| {
        let exp = enumerate_expansions(n as usize).unwrap().remove(0);
        let lengths = vec![0.3; n as usize - 3];
        let tau = axis_length(&exp, &lengths, 0.4, 0.1).unwrap();
        let data = LeafSpaceData::Positive {
            tau,
            expansion: exp,
            lengths,
            a0: 0.4,
            a_last: 0.1,
        };
        build_pole_leafspace(n, &data).map_or(false, |ls| ls.parameter_dimension == (n as usize - 3) + 1)
    });
    notes.push(format!("leaf-space dims {dims}"));
    let mut identity = true;
    for g in 2..=5 {
        for k in 1..=4usize {
            for base in 3..=8u32 {
                let orders: Vec<u32> = (0..k as u32).map(|i| 3 + (base - 3 + i) % 6).collect();
                identity &= mf_dimension(g, &orders).map_or(false, |d| d.identity_holds);
            }
        }
    }
    notes.push(format!("dimension identity {identity}"));
    outcome(counts && dims && identity, notes.join(", "))
}

fn c11_shear() -> Outcome {
    let q = z2_minus_one();
    let p = match strip_decomposition(&q).and_then(|sk| strip_periods(&q, &sk)) {
        Ok(p) => p,
        Err(e) => return outcome(false, e.to_string()),
    };
    let tr = TrustRegion::default();
    let before = (p[0].period - C64::new(0.0, FRAC_PI_2)).norm();
    let sheared = apply_shear(&p, &ShearVector(vec![1.7]), tr).unwrap();
    let after = (sheared[0].period - C64::new(1.7, FRAC_PI_2)).norm();
    let widths = sheared[0].width == p[0].width && sheared[0].period.im == p[0].period.im;
    let mut rng = StdRng::seed_from_u64(11);
    let additive = (0..100).all(|_| {
        let (s, t): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let two = apply_shear(&apply_shear(&p, &ShearVector(vec![s]), tr).unwrap(), &ShearVector(vec![t]), tr);
        let one = apply_shear(&p, &ShearVector(vec![s + t]), tr);
        two.unwrap() == one.unwrap()
    });
    outcome(
        before <= 1e-6 && after <= 1e-6 && widths && additive,
        format!("period error {before:.3e}, sheared {after:.3e}; widths exact {widths}; additive {additive}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, Duration, fn() -> Outcome); 11] = [
        (1, Duration::from_secs(1), c1_distinguished_points),
        (2, Duration::from_secs(10), c2_compatibility),
        (3, Duration::from_secs(5), c3_strip_decomposition),
        (4, Duration::from_secs(30), c4_strip_count_law),
        (5, Duration::from_secs(120), c5_fourier_oracle),
        (6, Duration::from_secs(120), c6_decay),
        (7, Duration::from_secs(60), c7_doubling),
        (8, Duration::from_secs(60), c8_hopf),
        (9, Duration::from_secs(300), c9_exhaustion),
        (10, Duration::from_secs(30), c10_trees),
        (11, Duration::from_secs(5), c11_shear),
    ];
    let mut unexpected = false;
    for (id, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        println!(
            "criterion {id:>2}: {} ({:.2} s of {} s) {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
        if !pass && !KNOWN_UNATTAINABLE.contains(&id) {
            unexpected = true;
        }
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
