//! Spectral certificate for set-pair discrepancy.
//!
//! With `M = A - (J - I)/2` and `N` vertices, for all vertex sets `S, T`
//!
//! ```text
//! e(S,T) - |S||T|/2 = 1_S^T M 1_T - |S ∩ T|/2
//! ```
//!
//! so `|e(S,T) - |S||T|/2| <= ‖M‖·N + N/2`. The norm `‖M‖` is estimated by
//! power iteration on `M²`, whose top eigenvalue is `‖M‖²` whatever the sign
//! of the dominant eigenvalue of `M`.

use super::Graph;
use crate::error::{invalid, Result};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

const MAX_ITERATIONS: usize = 10_000;
const RELATIVE_TOLERANCE: f64 = 1e-9;
const PERTURBATION_SEED: u64 = 0x5eed_5bec_7a1b_0001;

/// Result of the power iteration behind [`spectral_discrepancy_bound`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    /// `sqrt(θ)` for the final Rayleigh quotient `θ` of `M²`.
    pub spectral_norm_estimate: f64,
    pub iterations: usize,
    /// `‖M²x − θx‖` for the final unit iterate `x`.
    pub residual: f64,
    /// `sqrt(θ + residual)`.
    pub certified_bound: f64,
    pub converged: bool,
}

impl SpectralReport {
    /// Upper bound on `|e(S,T) − |S||T|/2|` over all pairs of vertex sets in
    /// a graph with `vertex_count` vertices.
    pub fn discrepancy_bound(&self, vertex_count: usize) -> f64 {
        let n = vertex_count as f64;
        self.certified_bound * n + n / 2.0
    }
}

/// Estimates `‖A − (J − I)/2‖` and derives a discrepancy certificate.
///
/// Iteration starts from the all-ones vector plus a fixed-seed perturbation
/// and stops when the residual drops below `1e-9·θ` or after 10 000 steps.
/// A non-converged run is reported as such with its residual folded into
/// `certified_bound`.
pub fn spectral_discrepancy_bound(g: &Graph) -> Result<SpectralReport> {
    let n = g.vertex_count();
    if n < 2 {
        return invalid("spectral bound needs at least two vertices");
    }
    let m = dense_shifted(g);
    let mut rng = rng::seeded(PERTURBATION_SEED);
    let mut x: Vec<f64> = (0..n).map(|_| 1.0 + 1e-3 * rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut x);

    let mut tmp = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        matvec(&m, n, &x, &mut tmp);
        matvec(&m, n, &tmp, &mut y);
        theta = dot(&x, &y);
        residual = x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| (yi - theta * xi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual < RELATIVE_TOLERANCE * theta.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        std::mem::swap(&mut x, &mut y);
        if normalize(&mut x) == 0.0 {
            // M²x vanished, so M = 0 on the iterate; nothing larger remains.
            theta = 0.0;
            residual = 0.0;
            converged = true;
            break;
        }
    }
    let theta = theta.max(0.0);
    Ok(SpectralReport {
        spectral_norm_estimate: theta.sqrt(),
        iterations,
        residual,
        certified_bound: (theta + residual).sqrt(),
        converged,
    })
}

/// Dense row-major `A − (J − I)/2`.
fn dense_shifted(g: &Graph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut m = vec![-0.5; n * n];
    for v in 0..n {
        m[v * n + v] = 0.0;
        for u in g.neighbors(v) {
            m[v * n + u] = 0.5;
        }
    }
    m
}

fn matvec(m: &[f64], n: usize, x: &[f64], out: &mut [f64]) {
    let row = |(i, o): (usize, &mut f64)| *o = dot(&m[i * n..(i + 1) * n], x);
    if n >= 256 {
        out.par_iter_mut().enumerate().for_each(row);
    } else {
        out.iter_mut().enumerate().for_each(row);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}
