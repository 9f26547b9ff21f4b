//! One-dimensional quadrature on the unit interval.
//!
//! Every possibilistic indicator is an integral over the level parameter
//! `γ ∈ [0, 1]`, so the whole crate funnels through [`UnitQuadrature`].
//! Gauss–Legendre nodes are obtained by the Golub–Welsch eigenvalue method;
//! rules are cached per `(rule, node_count)` since they are requested from
//! solver inner loops.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadRule {
    GaussLegendre,
    CompositeSimpson,
}

/// Shared configuration for all γ-integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub node_count: usize,
    pub rule: QuadRule,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            node_count: 64,
            rule: QuadRule::GaussLegendre,
            tolerance: 1e-9,
        }
    }
}

impl QuadratureConfig {
    pub fn new(node_count: usize, rule: QuadRule, tolerance: f64) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::InvalidInput(format!(
                "quadrature node count must be >= 2, got {node_count}"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidInput(format!(
                "quadrature tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(Self {
            node_count,
            rule,
            tolerance,
        })
    }

    /// Integrate `g` over `[0, 1]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        let rule = unit_rule(self.rule, self.node_count);
        rule.integrate(g)
    }
}

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct UnitQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl UnitQuadrature {
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        // fixed summation order so concurrent callers agree bit-for-bit
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

static RULE_CACHE: Lazy<Mutex<HashMap<(QuadRule, usize), Arc<UnitQuadrature>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached rule lookup; builds the rule on first use.
pub fn unit_rule(rule: QuadRule, n: usize) -> Arc<UnitQuadrature> {
    let mut cache = RULE_CACHE.lock().unwrap();
    cache
        .entry((rule, n))
        .or_insert_with(|| {
            Arc::new(match rule {
                QuadRule::GaussLegendre => gauss_legendre_unit(n),
                QuadRule::CompositeSimpson => composite_simpson_unit(n),
            })
        })
        .clone()
}

/// Nodes and weights of a symmetric tridiagonal Jacobi matrix: eigenvalues
/// are the nodes, `mu0 * v0^2` the weights.
fn golub_welsch(offdiag: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = offdiag.len() + 1;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (k, &b) in offdiag.iter().enumerate() {
        m[(k, k + 1)] = b;
        m[(k + 1, k)] = b;
    }
    let eig = m.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

fn gauss_legendre_unit(n: usize) -> UnitQuadrature {
    // recurrence coefficients for Legendre polynomials on [-1, 1]
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let (nodes, weights) = golub_welsch(&offdiag, 2.0);
    UnitQuadrature {
        nodes: nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: weights.iter().map(|w| 0.5 * w).collect(),
    }
}

fn composite_simpson_unit(n: usize) -> UnitQuadrature {
    // n is interpreted as the node count; force an odd count >= 3
    let n = if n % 2 == 0 { n + 1 } else { n.max(3) };
    let h = 1.0 / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let weights: Vec<f64> = (0..n)
        .map(|i| {
            let c = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    UnitQuadrature { nodes, weights }
}

/// Gauss–Hermite nodes/weights for the standard normal density
/// (probabilists' convention): weights sum to 1, nodes have mean 0.
pub fn gauss_hermite_standard_normal(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 1 {
        return (vec![0.0], vec![1.0]);
    }
    let offdiag: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    golub_welsch(&offdiag, 1.0)
}
