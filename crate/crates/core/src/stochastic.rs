//! Finite discrete random variables: the probabilistic risk carriers.

use crate::error::{Error, Result};
use crate::quad::gauss_hermite_standard_normal;

const PROB_SUM_TOL: f64 = 1e-12;

/// A finite list of `(value, probability)` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRandomVariable {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteRandomVariable {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution(
                "distribution needs at least one atom".into(),
            ));
        }
        let mut total = 0.0;
        for &(x, p) in &atoms {
            if !x.is_finite() {
                return Err(Error::InvalidDistribution(format!("non-finite value {x}")));
            }
            if !(p >= 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "negative probability {p} at value {x}"
                )));
            }
            total += p;
        }
        // out-of-tolerance inputs are rejected, not renormalized
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1 within {PROB_SUM_TOL}"
            )));
        }
        Ok(Self { atoms })
    }

    pub fn degenerate(value: f64) -> Self {
        Self {
            atoms: vec![(value, 1.0)],
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// `Σᵢ pᵢ h(xᵢ)`.
    pub fn expectation<F: Fn(f64) -> f64>(&self, h: F) -> f64 {
        self.atoms.iter().map(|&(x, p)| p * h(x)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expectation(|x| x)
    }

    /// `M[(X − r)²]`.
    pub fn second_moment_about(&self, r: f64) -> f64 {
        self.expectation(|x| (x - r) * (x - r))
    }

    /// Smallest and largest atom values.
    pub fn value_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &(x, _) in &self.atoms {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        (lo, hi)
    }

    pub fn is_degenerate(&self) -> bool {
        let (lo, hi) = self.value_range();
        lo == hi
    }
}

/// Gauss–Hermite discretization of `N(μ, σ²)`; preserves the mean exactly
/// and the variance to quadrature accuracy for `n ≥ 2`.
pub fn discretize_normal(mu: f64, sigma: f64, n: usize) -> Result<DiscreteRandomVariable> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "standard deviation must be non-negative, got {sigma}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidDistribution(
            "node count must be positive".into(),
        ));
    }
    if sigma == 0.0 {
        return Ok(DiscreteRandomVariable::degenerate(mu));
    }
    let (nodes, weights) = gauss_hermite_standard_normal(n);
    let total: f64 = weights.iter().sum();
    let atoms = nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| (mu + sigma * x, w / total))
        .collect();
    DiscreteRandomVariable::new(atoms)
}
