//! When `u` is a product of sines vanishing on a Dirichlet box, the sampled
//! mode is an eigenvector of every compact stencil, so the discrete solution
//! is `u` times the ratio of the right and left symbols. These tests solve the
//! assembled systems and compare with that closed form.

use std::sync::Arc;

use helmholtz6::experiment::{run, Scheme};
use helmholtz6::problems::{p3_sin_kpi_2d, AnyProblem, FaceCondition, Problem, ProblemId, ScalarFn, VectorFn};
use helmholtz6::schemes2d::coeffs_2d;
use helmholtz6::schemes3d::coeffs_3d;
use helmholtz6::solver::{Method, SolverConfig};

/// `-delta^2` applied to `sin(a x)`, divided by the mode.
fn symbol(a: f64, h: f64) -> f64 {
    4.0 / (h * h) * (a * h / 2.0).sin().powi(2)
}

fn grid_max<const D: usize>(freq: [f64; D], n: usize, cells: [usize; D]) -> f64 {
    let h = 1.0 / n as f64;
    (0..D)
        .map(|a| (0..=cells[a]).map(|i| (freq[a] * i as f64 * h).sin().abs()).fold(0.0, f64::max))
        .product()
}

fn expected_2d(scheme: Scheme, k: f64, freq: [f64; 2], n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let c = coeffs_2d(scheme.kind_2d(), k, h);
    let [sx, sy] = freq.map(|a| symbol(a, h));
    let amp = k * k - freq[0] * freq[0] - freq[1] * freq[1];
    let lhs = c.alpha1 * (-sx - sy) + c.alpha2 * sx * sy + k * k * c.alpha3;
    let rhs = amp
        * (c.beta1 + c.beta2 * (-sx - sy) + c.beta3 * sx * sy
            - c.beta4 * (freq[0] * freq[0] + freq[1] * freq[1])
            + c.beta5 * (sx * freq[0] * freq[0] + sy * freq[1] * freq[1]));
    (1.0 - rhs / lhs).abs() * grid_max(freq, n, [n, n])
}

fn expected_3d(scheme: Scheme, k: f64, freq: [f64; 3], n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let c = coeffs_3d(scheme.kind_3d(), k, h);
    let s = freq.map(|a| symbol(a, h));
    let s1 = s[0] + s[1] + s[2];
    let s2 = s[0] * s[1] + s[1] * s[2] + s[0] * s[2];
    let s3 = s[0] * s[1] * s[2];
    let a2: f64 = freq.iter().map(|a| a * a).sum();
    let amp = k * k - a2;
    let lhs = -c.c1 * s1 + c.c2 * s2 - c.c3 * s3 + c.c4;
    let rhs = amp * (c.d1 - c.d2 * s1 + c.d3 * s2 - c.d4 * a2 + c.d5 * (0..3).map(|i| s[i] * freq[i] * freq[i]).sum::<f64>());
    (1.0 - rhs / lhs).abs() * grid_max(freq, n, [n, n, n])
}

fn sine_box_3d(k: f64, freq: [f64; 3]) -> Problem<f64, 3> {
    let amp = k * k - freq.iter().map(|a| a * a).sum::<f64>();
    let exact: ScalarFn<f64, 3> = Arc::new(move |p| (0..3).map(|i| (freq[i] * p[i]).sin()).product());
    let u = exact.clone();
    let source: ScalarFn<f64, 3> = Arc::new(move |p| amp * u(p));
    let u = exact.clone();
    let source_d2: VectorFn<f64, 3> = Arc::new(move |p| freq.map(|a| -a * a * amp * u(p)));
    Problem {
        id: ProblemId::P7,
        name: "sine box".into(),
        lo: [0.0; 3],
        hi: [1.0; 3],
        wavenumber: k,
        exact: exact.clone(),
        source,
        source_d2,
        faces: (0..6).map(|_| FaceCondition::Dirichlet(exact.clone())).collect(),
        tolerance: 1e-13,
        frequency: 3.0 * std::f64::consts::PI + k,
    }
}

fn assert_close(got: f64, want: f64) {
    assert!((got - want).abs() <= 1e-6 * want, "solved {got:e}, closed form {want:e}");
}

#[test]
fn sin_kpi_problem_matches_symbol_ratio() {
    let k = 30.0;
    let p = AnyProblem::Two(p3_sin_kpi_2d::<f64>(k).unwrap());
    let cfg = SolverConfig::new(Method::Direct, 1e-12);
    for scheme in [Scheme::New, Scheme::Baseline] {
        for n in [32, 64] {
            let got = run(&p, scheme, n, &cfg).unwrap().err_max;
            assert_close(got, expected_2d(scheme, k, [std::f64::consts::PI, k * std::f64::consts::PI], n));
        }
    }
}

#[test]
fn sine_box_3d_matches_symbol_ratio() {
    let pi = std::f64::consts::PI;
    let freq = [pi, 2.0 * pi, 3.0 * pi];
    for k in [0.0, 7.5] {
        let p = AnyProblem::Three(sine_box_3d(k, freq));
        let cfg = SolverConfig::new(Method::BiCGstab2, 1e-13);
        for scheme in [Scheme::New, Scheme::Baseline] {
            for n in [8, 16] {
                let got = run(&p, scheme, n, &cfg).unwrap().err_max;
                assert_close(got, expected_3d(scheme, k, freq, n));
            }
        }
    }
}
