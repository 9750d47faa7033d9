use std::f64::consts::PI;

/// Gauss–Hermite rule for the standard Gaussian measure γ₁:
/// Σ wᵢ f(xᵢ) ≈ ∫ f dγ₁, with Σ wᵢ = 1.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Roots of the physicists' Hermite polynomial by Newton iteration on
    /// the orthonormal recurrence, rescaled to the probabilists' convention.
    /// The recurrence is renormalised on the fly so large orders do not
    /// overflow near the outermost roots.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut roots = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        let nu = 2.0 * nf + 1.0;
        for i in 0..m {
            // Tricomi's asymptotic guess: z ≈ √ν cos(θ/2) with
            // θ − sin θ = π(4⌊n/2⌋ − 4k + 3)/ν, k = ⌊n/2⌋ − i, so i = 0 is the largest root.
            let mut z = if 2 * i + 1 == n {
                0.0
            } else {
                let rhs = PI * (4.0 * i as f64 + 3.0) / nu;
                let mut theta = 0.5 * PI;
                for _ in 0..60 {
                    let step = (theta - theta.sin() - rhs) / (1.0 - theta.cos());
                    theta -= step;
                    if step.abs() < 1e-15 {
                        break;
                    }
                }
                nu.sqrt() * (0.5 * theta).cos()
            };
            let mut log_pp = 0.0;
            for _ in 0..100 {
                let (p, pp, log_scale) = hermite_orthonormal(n, z);
                log_pp = pp.abs().ln() + log_scale;
                let dz = p / pp;
                z -= dz;
                if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                    let (_, pp, log_scale) = hermite_orthonormal(n, z);
                    log_pp = pp.abs().ln() + log_scale;
                    break;
                }
            }
            roots[i] = z;
            let w = (2f64.ln() - 2.0 * log_pp).exp() / PI.sqrt();
            weights[i] = w;
            roots[n - 1 - i] = -z;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            roots[n / 2] = 0.0;
        }
        let mut nodes: Vec<f64> = roots.iter().map(|z| z * 2f64.sqrt()).collect();
        nodes.reverse();
        weights.reverse();
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Orthonormal physicists' Hermite value p_n(z) and derivative √(2n) p_{n−1}(z),
/// both multiplied by e^{−log_scale}.
fn hermite_orthonormal(n: usize, z: f64) -> (f64, f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    let mut log_scale = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
        if p1.abs() > 1e150 {
            p1 *= 1e-150;
            p2 *= 1e-150;
            log_scale += 150.0 * 10f64.ln();
        }
    }
    (p1, (2.0 * n as f64).sqrt() * p2, log_scale)
}
