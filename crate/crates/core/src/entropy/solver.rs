//! Log-barrier interior-point solver for graph entropy.
//!
//! Primal: minimise `f(x) = -(1/n) sum ln x_v` subject to `sum_{v in C} x_v <= 1`
//! for every maximal clique `C`. For weights `q >= 0` on the cliques with
//! `sum q = 1` and `sigma_v = sum_{C ∋ v} q_C`, the dual value
//! `ln n + (1/n) sum ln sigma_v` is a lower bound on the minimum, so the
//! barrier multipliers `q_C ∝ 1/(t s_C)` certify the optimality gap.

use std::f64::consts::LN_2;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::UndirectedGraph;
use crate::error::{Error, Result};
use crate::limits::Limits;

pub const DEFAULT_TOL: f64 = 1e-6;

const MAX_OUTER: usize = 80;
const MAX_NEWTON: usize = 100;
const T_GROWTH: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    /// Entropy in bits, the objective at `x_star`.
    #[serde(rename = "H")]
    pub h: f64,
    /// A feasible point of the clique polytope attaining `h`.
    pub x_star: Vec<f64>,
    /// Certified gap `h - lower` in bits.
    pub gap: f64,
    /// Dual lower bound on the entropy in bits.
    pub lower: f64,
    pub newton_steps: usize,
}

/// `H(G)` within `tol` bits, certified by a dual bound.
pub fn graph_entropy(g: &UndirectedGraph, tol: f64) -> Result<EntropyResult> {
    graph_entropy_with(g, tol, Limits::global())
}

pub fn graph_entropy_with(g: &UndirectedGraph, tol: f64, limits: &Limits) -> Result<EntropyResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Range(format!("tolerance must be positive, got {tol}")));
    }
    if g.n() == 0 {
        return Err(Error::Range("graph entropy needs at least one vertex".into()));
    }
    let cliques = g.maximal_cliques_with(limits)?;
    Barrier::new(g.n(), cliques).solve(tol)
}

struct Barrier {
    n: usize,
    cliques: Vec<Vec<usize>>,
    /// Cliques containing each vertex.
    member_of: Vec<Vec<usize>>,
}

impl Barrier {
    fn new(n: usize, cliques: Vec<Vec<usize>>) -> Barrier {
        let mut member_of = vec![Vec::new(); n];
        for (i, c) in cliques.iter().enumerate() {
            for &v in c {
                member_of[v].push(i);
            }
        }
        Barrier { n, cliques, member_of }
    }

    fn slacks(&self, x: &[f64]) -> Vec<f64> {
        self.cliques.iter().map(|c| 1.0 - c.iter().map(|&v| x[v]).sum::<f64>()).collect()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        -x.iter().map(|v| v.ln()).sum::<f64>() / self.n as f64
    }

    /// `t f(x) - sum ln s_C`, infinite outside the interior.
    fn penalised(&self, x: &[f64], t: f64) -> f64 {
        if x.iter().any(|&v| v <= 0.0) {
            return f64::INFINITY;
        }
        let s = self.slacks(x);
        if s.iter().any(|&v| v <= 0.0) {
            return f64::INFINITY;
        }
        t * self.objective(x) - s.iter().map(|v| v.ln()).sum::<f64>()
    }

    /// Dual lower bound (nats) from the barrier multipliers at `x`.
    fn dual_bound(&self, x: &[f64], t: f64) -> f64 {
        let lambda: Vec<f64> = self.slacks(x).iter().map(|s| 1.0 / (t * s)).collect();
        let total: f64 = lambda.iter().sum();
        let mean_log_sigma = (0..self.n)
            .map(|v| (self.member_of[v].iter().map(|&c| lambda[c]).sum::<f64>() / total).ln())
            .sum::<f64>()
            / self.n as f64;
        (self.n as f64).ln() + mean_log_sigma
    }

    /// Newton's method on the barrier problem for fixed `t`; returns steps taken.
    fn center(&self, x: &mut Vec<f64>, t: f64) -> Result<usize> {
        let n = self.n;
        let nf = n as f64;
        for step in 0..MAX_NEWTON {
            let s = self.slacks(x);
            let mut grad = DVector::<f64>::zeros(n);
            let mut hess = DMatrix::<f64>::zeros(n, n);
            for v in 0..n {
                grad[v] = -t / (nf * x[v]);
                hess[(v, v)] = t / (nf * x[v] * x[v]);
            }
            for (c, clique) in self.cliques.iter().enumerate() {
                let inv = 1.0 / s[c];
                let inv2 = inv * inv;
                for &u in clique {
                    grad[u] += inv;
                    for &w in clique {
                        hess[(u, w)] += inv2;
                    }
                }
            }
            let chol = hess
                .cholesky()
                .ok_or_else(|| Error::Convergence("barrier Hessian lost positive definiteness".into()))?;
            let dx = chol.solve(&(-&grad));
            let slope = grad.dot(&dx);
            if -slope / 2.0 <= 1e-12 {
                return Ok(step);
            }
            let f0 = self.penalised(x, t);
            let mut alpha = 1.0;
            loop {
                let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, d)| a + alpha * d).collect();
                if self.penalised(&trial, t) <= f0 + 0.25 * alpha * slope {
                    *x = trial;
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-16 {
                    // rounding floor: the point is as central as f64 allows
                    return Ok(step);
                }
            }
        }
        Ok(MAX_NEWTON)
    }

    fn solve(&self, tol: f64) -> Result<EntropyResult> {
        let omega = self.cliques.iter().map(Vec::len).max().unwrap_or(1);
        let mut x = vec![1.0 / (omega as f64 + 1.0); self.n];
        let mut t = 1.0;
        let mut steps = 0;
        let mut last_gap = f64::INFINITY;
        for _ in 0..MAX_OUTER {
            steps += self.center(&mut x, t)?;
            let primal = self.objective(&x);
            let dual = self.dual_bound(&x, t);
            last_gap = (primal - dual).max(0.0) / LN_2;
            if last_gap <= tol {
                return Ok(EntropyResult {
                    h: primal / LN_2,
                    x_star: x,
                    gap: last_gap,
                    lower: dual / LN_2,
                    newton_steps: steps,
                });
            }
            t *= T_GROWTH;
        }
        Err(Error::Convergence(format!(
            "entropy gap {last_gap:.3e} above tolerance {tol:.3e} after {MAX_OUTER} barrier rounds"
        )))
    }
}
