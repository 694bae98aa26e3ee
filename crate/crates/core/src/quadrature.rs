//! Panel quadrature for circle integrals with an integrable logarithmic
//! singularity at θ = 0.
//!
//! The rule covers [0, π]: geometric grading (ratio 1/2, 40 levels) from
//! π/8 down into the singularity, uniform panels on [π/8, π] sized to the
//! highest Fourier mode present, Gauss–Legendre order 16 on every panel.
//! Integrands on the full circle with the symmetry f(2π−θ) = f(θ) fold
//! onto this rule with weight 2.

use std::sync::OnceLock;

const GL_ORDER: usize = 16;
const GRADING_LEVELS: usize = 40;
const GRADING_START: f64 = std::f64::consts::PI / 8.0;

/// Gauss–Legendre nodes and weights on (−1, 1), order 16, computed by
/// Newton iteration on P₁₆.
fn gl16() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static CACHE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    CACHE.get_or_init(|| {
        let n = GL_ORDER;
        let mut x = [0.0; GL_ORDER];
        let mut w = [0.0; GL_ORDER];
        for i in 0..(n + 1) / 2 {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..64 {
                let (mut p0, mut p1) = (1.0f64, 0.0f64);
                for j in 0..n {
                    let p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
                }
                dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
                let step = p0 / dp;
                z -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
            w[n - 1 - i] = w[i];
        }
        (x, w)
    })
}

/// A flattened panel rule: evaluate the integrand at `nodes`, dot with
/// `weights`.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    fn from_panels(panels: &[(f64, f64)]) -> Self {
        let (xs, ws) = gl16();
        let mut nodes = Vec::with_capacity(panels.len() * GL_ORDER);
        let mut weights = Vec::with_capacity(panels.len() * GL_ORDER);
        for &(a, b) in panels {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for i in 0..GL_ORDER {
                nodes.push(mid + half * xs[i]);
                weights.push(half * ws[i]);
            }
        }
        PanelRule { nodes, weights }
    }

    /// Rule on [0, π] graded into θ = 0, resolving oscillations up to
    /// e^{i k_max θ}.
    pub fn circle_kernel_rule(k_max: usize) -> Self {
        let mut panels = Vec::new();
        let eps = GRADING_START * 0.5f64.powi(GRADING_LEVELS as i32);
        panels.push((0.0, eps));
        for j in (0..GRADING_LEVELS).rev() {
            let hi = GRADING_START * 0.5f64.powi(j as i32);
            panels.push((0.5 * hi, hi));
        }
        // uniform tail with panel width * k_max <= 4
        let span = std::f64::consts::PI - GRADING_START;
        let max_width = if k_max == 0 {
            GRADING_START
        } else {
            (4.0 / k_max as f64).min(GRADING_START)
        };
        let m = (span / max_width).ceil() as usize;
        for i in 0..m {
            let a = GRADING_START + span * i as f64 / m as f64;
            let b = GRADING_START + span * (i + 1) as f64 / m as f64;
            panels.push((a, b));
        }
        Self::from_panels(&panels)
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}
