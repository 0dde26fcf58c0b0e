//! Shared test oracles.

#![allow(dead_code)]

use avqa_core::regressor::{rbf, Hyperparams, Scaler, SvrModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A small epsilon-SVR problem with a well-conditioned kernel.
pub struct SvrInstance {
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub probes: Vec<Vec<f64>>,
    pub hyperparams: Hyperparams,
}

pub fn svr_instance(seed: u64) -> SvrInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(4..=20);
    let d = rng.random_range(1..=5);
    let point = |rng: &mut ChaCha8Rng| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
    let rows: Vec<Vec<f64>> = (0..n).map(|_| point(&mut rng)).collect();
    let probes: Vec<Vec<f64>> = (0..5).map(|_| point(&mut rng)).collect();
    let targets = rows
        .iter()
        .map(|r| r.iter().map(|v| (2.0 * v).sin()).sum::<f64>() + rng.random_range(-0.2..0.2))
        .collect();

    // Raise gamma until every kernel row is diagonally dominant, so the
    // smallest eigenvalue is at least 0.5 (Gershgorin) and the fixed-budget
    // oracle converges.
    let scaled = Scaler::fit(&rows).unwrap().apply_all(&rows).unwrap();
    let mut gamma = 0.25;
    while max_off_diagonal_row_sum(&scaled, gamma) >= 0.5 {
        gamma *= 1.5;
    }
    let hyperparams = Hyperparams::new(rng.random_range(5.0..20.0), rng.random_range(0.01..0.1), gamma).unwrap();
    SvrInstance {
        rows,
        targets,
        probes,
        hyperparams,
    }
}

fn max_off_diagonal_row_sum(rows: &[Vec<f64>], gamma: f64) -> f64 {
    (0..rows.len())
        .map(|i| {
            (0..rows.len())
                .filter(|&j| j != i)
                .map(|j| rbf(&rows[i], &rows[j], gamma).unwrap())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

pub struct QpSolution {
    pub beta: Vec<f64>,
    pub bias: f64,
    /// Maximization-form dual objective.
    pub objective: f64,
}

/// Brute-force projected gradient on the doubled epsilon-SVR dual
/// `min 0.5 z'Qz + p'z, 0 <= z <= C, sum(alpha) = sum(alpha*)`.
///
/// Each step projects onto the box intersected with the hyperplane by
/// solving for the multiplier `lambda` in `z = clip(v - lambda s)`. At a fixed
/// point every free variable satisfies `s_t G_t = -lambda / step`, so the
/// bias of the decision function is `lambda / step`.
pub fn qp_oracle(gram: &[f64], y: &[f64], c: f64, eps: f64, iterations: usize, step: f64) -> QpSolution {
    let n = y.len();
    let mut alpha = vec![0.0; n];
    let mut alpha_star = vec![0.0; n];
    let mut beta = vec![0.0; n];
    let mut kb = vec![0.0; n];
    let mut lambda = 0.0;
    let (mut va, mut vs) = (vec![0.0; n], vec![0.0; n]);
    for _ in 0..iterations {
        for i in 0..n {
            let row = &gram[i * n..(i + 1) * n];
            kb[i] = row.iter().zip(&beta).map(|(k, b)| k * b).sum();
        }
        for i in 0..n {
            va[i] = alpha[i] - step * (kb[i] + eps - y[i]);
            vs[i] = alpha_star[i] - step * (-kb[i] + eps + y[i]);
        }
        lambda = multiplier(&va, &vs, c, lambda);
        for i in 0..n {
            alpha[i] = (va[i] - lambda).clamp(0.0, c);
            alpha_star[i] = (vs[i] + lambda).clamp(0.0, c);
            beta[i] = alpha[i] - alpha_star[i];
        }
    }
    for i in 0..n {
        let row = &gram[i * n..(i + 1) * n];
        kb[i] = row.iter().zip(&beta).map(|(k, b)| k * b).sum();
    }
    let objective = (0..n)
        .map(|i| -0.5 * beta[i] * kb[i] + y[i] * beta[i] - eps * (alpha[i] + alpha_star[i]))
        .sum();
    QpSolution {
        beta,
        bias: lambda / step,
        objective,
    }
}

/// Root of the decreasing piecewise-linear
/// `h(l) = sum clip(va - l) - sum clip(vs + l)`, by Newton steps from a warm
/// start, safeguarded by bisection.
fn multiplier(va: &[f64], vs: &[f64], c: f64, start: f64) -> f64 {
    let h = |l: f64| {
        let mut sum = 0.0;
        let mut free = 0usize;
        for (&a, &s) in va.iter().zip(vs) {
            let (x, y) = (a - l, s + l);
            sum += x.clamp(0.0, c) - y.clamp(0.0, c);
            free += usize::from(x > 0.0 && x < c) + usize::from(y > 0.0 && y < c);
        }
        (sum, free)
    };
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut l = start;
    for _ in 0..200 {
        let (val, free) = h(l);
        if val == 0.0 {
            return l;
        }
        if val > 0.0 {
            lo = l;
        } else {
            hi = l;
        }
        let newton = if free > 0 { l + val / free as f64 } else { f64::NAN };
        let next = if newton > lo && newton < hi {
            newton
        } else if lo.is_finite() && hi.is_finite() {
            0.5 * (lo + hi)
        } else if val > 0.0 {
            l + l.abs().max(1.0)
        } else {
            l - l.abs().max(1.0)
        };
        if next == l || next == lo || next == hi {
            return l;
        }
        l = next;
    }
    l
}

/// Kernel matrix of standardized rows.
pub fn gram(rows: &[Vec<f64>], gamma: f64) -> Vec<f64> {
    rows.iter()
        .flat_map(|a| rows.iter().map(move |b| rbf(a, b, gamma).unwrap()))
        .collect()
}

/// Midranks (ties share the average of their positions, 1-based).
pub fn midranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let below = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Pearson correlation from the textbook covariance formula.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

/// Oracle decision value at raw input `x`, using the model's scaler.
pub fn oracle_prediction(model: &SvrModel, scaled: &[Vec<f64>], o: &QpSolution, x: &[f64]) -> f64 {
    let z = model.scaler.apply(x).unwrap();
    let gamma = model.hyperparams.gamma;
    scaled
        .iter()
        .zip(&o.beta)
        .map(|(r, b)| b * rbf(r, &z, gamma).unwrap())
        .sum::<f64>()
        + o.bias
}
