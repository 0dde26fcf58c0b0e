//! Sequential minimal optimization for the epsilon-SVR dual.
//!
//! The dual is solved in its doubled form over `z = (alpha, alpha*)`:
//! minimize `0.5 z'Qz + p'z` subject to `0 <= z <= C` and `s'z = 0`, with
//! `s = (+1, -1)`, `Q_tu = s_t s_u K(t mod n, u mod n)` and
//! `p = (eps - y, eps + y)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Replaces a non-positive curvature in the pair update.
const TAU: f64 = 1e-12;
/// Updates between entries of the objective trace.
pub const TRACE_EVERY: usize = 100;

#[derive(Clone, Debug)]
pub(crate) struct DualSolution {
    /// `alpha_i - alpha*_i` per training row.
    pub beta: Vec<f64>,
    pub bias: f64,
    /// Dual objective in maximization form.
    pub objective: f64,
    pub iterations: usize,
    pub kkt_violation: f64,
    pub converged: bool,
    pub trace: Vec<f64>,
}

pub(crate) struct Problem<'a> {
    /// Row-major `n x n` kernel matrix.
    pub gram: &'a [f64],
    pub targets: &'a [f64],
    pub c: f64,
    pub epsilon: f64,
}

pub(crate) fn solve(problem: &Problem<'_>, tol: f64, max_iter: usize, seed: u64) -> DualSolution {
    let Problem {
        gram,
        targets: y,
        c,
        epsilon,
    } = *problem;
    let n = y.len();
    let l = 2 * n;
    let sign = |t: usize| if t < n { 1.0 } else { -1.0 };
    let q = |t: usize, u: usize| sign(t) * sign(u) * gram[(t % n) * n + u % n];
    let p: Vec<f64> = (0..l)
        .map(|t| if t < n { epsilon - y[t] } else { epsilon + y[t - n] })
        .collect();

    let mut a = vec![0.0; l];
    let mut g = p.clone();
    let mut order: Vec<usize> = (0..l).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let in_up = |a: &[f64], t: usize| if t < n { a[t] < c } else { a[t] > 0.0 };
    let in_low = |a: &[f64], t: usize| if t < n { a[t] > 0.0 } else { a[t] < c };
    let objective = |a: &[f64], g: &[f64]| -0.5 * (0..l).map(|t| a[t] * (g[t] + p[t])).sum::<f64>();

    let mut trace = Vec::new();
    let mut iterations = 0;
    let (violation, converged) = loop {
        // Maximal violating pair; ties go to the earlier index in `order`.
        let (mut up, mut low) = (None, None);
        let (mut gmax, mut gmin) = (f64::NEG_INFINITY, f64::INFINITY);
        for &t in &order {
            let v = -sign(t) * g[t];
            if in_up(&a, t) && v > gmax {
                gmax = v;
                up = Some(t);
            }
            if in_low(&a, t) && v < gmin {
                gmin = v;
                low = Some(t);
            }
        }
        let (Some(i), Some(j)) = (up, low) else {
            break (0.0, true);
        };
        let violation = gmax - gmin;
        if violation <= tol {
            break (violation, true);
        }
        if iterations >= max_iter {
            break (violation, false);
        }

        let (old_i, old_j) = (a[i], a[j]);
        let (qii, qjj, qij) = (q(i, i), q(j, j), q(i, j));
        if sign(i) != sign(j) {
            let quad = Some(qii + qjj + 2.0 * qij).filter(|&v| v > 0.0).unwrap_or(TAU);
            let delta = (-g[i] - g[j]) / quad;
            let diff = a[i] - a[j];
            a[i] += delta;
            a[j] += delta;
            if diff > 0.0 {
                if a[j] < 0.0 {
                    a[j] = 0.0;
                    a[i] = diff;
                }
            } else if a[i] < 0.0 {
                a[i] = 0.0;
                a[j] = -diff;
            }
            if diff > 0.0 {
                if a[i] > c {
                    a[i] = c;
                    a[j] = c - diff;
                }
            } else if a[j] > c {
                a[j] = c;
                a[i] = c + diff;
            }
        } else {
            let quad = Some(qii + qjj - 2.0 * qij).filter(|&v| v > 0.0).unwrap_or(TAU);
            let delta = (g[i] - g[j]) / quad;
            let sum = a[i] + a[j];
            a[i] -= delta;
            a[j] += delta;
            if sum > c {
                if a[i] > c {
                    a[i] = c;
                    a[j] = sum - c;
                }
                if a[j] > c {
                    a[j] = c;
                    a[i] = sum - c;
                }
            } else {
                if a[j] < 0.0 {
                    a[j] = 0.0;
                    a[i] = sum;
                }
                if a[i] < 0.0 {
                    a[i] = 0.0;
                    a[j] = sum;
                }
            }
        }

        let (di, dj) = (a[i] - old_i, a[j] - old_j);
        for (t, gt) in g.iter_mut().enumerate() {
            *gt += q(t, i) * di + q(t, j) * dj;
        }
        iterations += 1;
        if iterations % TRACE_EVERY == 0 {
            trace.push(objective(&a, &g));
        }
    };

    DualSolution {
        beta: (0..n).map(|i| a[i] - a[i + n]).collect(),
        bias: -rho(&a, &g, c, n),
        objective: objective(&a, &g),
        iterations,
        kkt_violation: violation,
        converged,
        trace,
    }
}

/// Offset `rho` of the decision function `f(x) = sum beta K - rho`: the mean
/// of `s_t G_t` over free variables, else the midpoint of the bounds implied
/// by the variables at their limits.
fn rho(a: &[f64], g: &[f64], c: f64, n: usize) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum) = (0usize, 0.0);
    for (t, (&at, &gt)) in a.iter().zip(g).enumerate() {
        let positive = t < n;
        let yg = if positive { gt } else { -gt };
        if at >= c {
            if positive {
                lb = lb.max(yg);
            } else {
                ub = ub.min(yg);
            }
        } else if at <= 0.0 {
            if positive {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum += yg;
        }
    }
    if free > 0 {
        sum / free as f64
    } else {
        0.5 * (ub + lb)
    }
}
