//! Reference computations used only by the test suites.
#![allow(dead_code)]

use gfp_core::kernel::kernel_k;
use gfp_core::QuadratureSpec;
use statrs::distribution::{ContinuousCDF, Normal};

/// Mehler kernel in its textbook form
/// (1−e^{−2t})^{−N/2} exp(−(e^{−2t}(|x|²+|y|²) − 2e^{−t}x·y)/(2(1−e^{−2t}))).
pub fn mehler_textbook(t: f64, x: &[f64], y: &[f64]) -> f64 {
    let q = -(-2.0 * t).exp_m1();
    let xx: f64 = x.iter().map(|v| v * v).sum();
    let yy: f64 = y.iter().map(|v| v * v).sum();
    let xy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let num = (-2.0 * t).exp() * (xx + yy) - 2.0 * (-t).exp() * xy;
    q.powf(-0.5 * x.len() as f64) * (-num / (2.0 * q)).exp()
}

/// K_σ(x, y) by the trapezoid rule on a uniform grid of `nodes` points in
/// v = ln t over [ln(r²/3000), ln 60], plus ∫_60^∞ t^{−σ/2−1} dt.
pub fn kernel_log_grid(sigma: f64, x: &[f64], y: &[f64], nodes: usize) -> f64 {
    let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    let t_hi: f64 = 60.0;
    let v0 = (r2 / 3000.0).ln();
    let v1 = t_hi.ln();
    let h = (v1 - v0) / (nodes - 1) as f64;
    let f = |v: f64| {
        let t = v.exp();
        mehler_textbook(t, x, y) * (-0.5 * sigma * v).exp()
    };
    let mut sum = 0.5 * (f(v0) + f(v1));
    for i in 1..nodes - 1 {
        sum += f(v0 + i as f64 * h);
    }
    sum * h + 2.0 / sigma * t_hi.powf(-0.5 * sigma)
}

pub fn normal_cdf(t: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(t)
}

pub fn gauss_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// ∫_a^b ∫_c^d K_s(x, y) dγ(y) dγ(x) by the tensor trapezoid rule on
/// `n + 1` nodes per axis, together with the same rule on every other node.
/// The intervals must be separated.
pub fn interaction_trapezoid(
    s: f64,
    (a, b): (f64, f64),
    (c, d): (f64, f64),
    n: usize,
) -> (f64, f64) {
    assert!(n.is_multiple_of(2));
    let spec = QuadratureSpec::default();
    let hx = (b - a) / n as f64;
    let hy = (d - c) / n as f64;
    let w = |i: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
    let mut fine = 0.0;
    let mut coarse = 0.0;
    for i in 0..=n {
        let x = a + i as f64 * hx;
        let mut row_f = 0.0;
        let mut row_c = 0.0;
        for j in 0..=n {
            let y = c + j as f64 * hy;
            let v = kernel_k(s, &[x], &[y], &spec).unwrap().value * gauss_density(y);
            row_f += w(j) * v;
            if i % 2 == 0 && j % 2 == 0 {
                let wc = if j == 0 || j == n { 0.5 } else { 1.0 };
                row_c += wc * v;
            }
        }
        fine += w(i) * row_f * gauss_density(x);
        if i % 2 == 0 {
            let wc = if i == 0 || i == n { 0.5 } else { 1.0 };
            coarse += wc * row_c * gauss_density(x);
        }
    }
    (fine * hx * hy, coarse * 4.0 * hx * hy)
}
