//! Possibilistic, probabilistic and mixed expected utilities: the
//! objective-function kernels of all four allocation models.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, WeightingFunction};
use crate::quad::QuadratureConfig;
use crate::stochastic::DiscreteRandomVariable;

/// An n-dimensional utility evaluator.
#[derive(Clone)]
pub struct MultiUtility {
    arity: usize,
    eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl fmt::Debug for MultiUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiUtility(arity: {})", self.arity)
    }
}

impl MultiUtility {
    pub fn new<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(arity: usize, eval: F) -> Self {
        Self {
            arity,
            eval: Arc::new(eval),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn evaluate(&self, args: &[f64]) -> f64 {
        debug_assert_eq!(args.len(), self.arity);
        (self.eval)(args)
    }
}

/// `E(f, u(A⃗)) = ½ ∫₀¹ [u(a⃗(γ)) + u(b⃗(γ))] f(γ) dγ` with `a⃗`/`b⃗`
/// stacking lower/upper endpoints componentwise.
pub fn possibilistic_eu(
    f: &WeightingFunction,
    u: &MultiUtility,
    fuzzy: &[FuzzyNumber],
    q: &QuadratureConfig,
) -> Result<f64> {
    if u.arity() != fuzzy.len() {
        return Err(Error::ArityMismatch {
            expected: u.arity(),
            actual: fuzzy.len(),
        });
    }
    f.ensure_valid(q)?;
    let n = fuzzy.len();
    Ok(q.integrate(|g| {
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for a in fuzzy {
            lo.push(a.lower(g));
            hi.push(a.upper(g));
        }
        0.5 * (u.evaluate(&lo) + u.evaluate(&hi)) * f.evaluate(g)
    }))
}

/// Probabilistic expected utility `M(u(X⃗))` over the product of atom lists;
/// random components are treated as independent.
pub fn probabilistic_eu(u: &MultiUtility, randoms: &[DiscreteRandomVariable]) -> Result<f64> {
    if u.arity() != randoms.len() {
        return Err(Error::ArityMismatch {
            expected: u.arity(),
            actual: randoms.len(),
        });
    }
    let mut args = vec![0.0; randoms.len()];
    Ok(product_expectation(u, randoms, &mut args, 0, 0))
}

fn product_expectation(
    u: &MultiUtility,
    randoms: &[DiscreteRandomVariable],
    args: &mut Vec<f64>,
    fixed: usize,
    depth: usize,
) -> f64 {
    if depth == randoms.len() {
        return u.evaluate(args);
    }
    let mut acc = 0.0;
    for &(x, p) in randoms[depth].atoms() {
        args[fixed + depth] = x;
        acc += p * product_expectation(u, randoms, args, fixed, depth + 1);
    }
    acc
}

/// Mixed expected utility
/// `E(f, u(A⃗, X⃗)) = ½ ∫₀¹ [M(u(a⃗(γ), X⃗)) + M(u(b⃗(γ), X⃗))] f(γ) dγ`:
/// fuzzy arguments come first, frozen at their endpoint vectors, with the
/// probabilistic expectation taken inside the γ-integral.
pub fn mixed_eu(
    f: &WeightingFunction,
    u: &MultiUtility,
    fuzzy: &[FuzzyNumber],
    randoms: &[DiscreteRandomVariable],
    q: &QuadratureConfig,
) -> Result<f64> {
    if u.arity() != fuzzy.len() + randoms.len() {
        return Err(Error::ArityMismatch {
            expected: u.arity(),
            actual: fuzzy.len() + randoms.len(),
        });
    }
    if fuzzy.is_empty() {
        return probabilistic_eu(u, randoms);
    }
    f.ensure_valid(q)?;
    let n = fuzzy.len();
    Ok(q.integrate(|g| {
        let mut args = vec![0.0; n + randoms.len()];
        for (i, a) in fuzzy.iter().enumerate() {
            args[i] = a.lower(g);
        }
        let at_lower = product_expectation(u, randoms, &mut args, n, 0);
        for (i, a) in fuzzy.iter().enumerate() {
            args[i] = a.upper(g);
        }
        let at_upper = product_expectation(u, randoms, &mut args, n, 0);
        0.5 * (at_lower + at_upper) * f.evaluate(g)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{covariance, expected_value, variance};
    use approx::assert_abs_diff_eq;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn f2g() -> WeightingFunction {
        WeightingFunction::power(1.0).unwrap()
    }

    #[test]
    fn identity_reduces_to_expected_value() {
        let a = FuzzyNumber::triangular(0.3, 0.1, 0.25).unwrap();
        let ident = MultiUtility::new(1, |x| x[0]);
        let eu = possibilistic_eu(&f2g(), &ident, &[a.clone()], &q()).unwrap();
        assert_abs_diff_eq!(eu, expected_value(&f2g(), &a, &q()).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn constant_utility_yields_constant() {
        let a = FuzzyNumber::triangular(0.3, 0.1, 0.25).unwrap();
        let c = MultiUtility::new(1, |_| 7.25);
        assert_abs_diff_eq!(
            possibilistic_eu(&f2g(), &c, &[a], &q()).unwrap(),
            7.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn covariance_as_expected_utility() {
        let a = FuzzyNumber::triangular(0.1, 0.4, 0.2).unwrap();
        let b = FuzzyNumber::trapezoidal(-0.2, 0.3, 0.5, 0.1).unwrap();
        let ea = expected_value(&f2g(), &a, &q()).unwrap();
        let eb = expected_value(&f2g(), &b, &q()).unwrap();
        let u = MultiUtility::new(2, move |x| (x[0] - ea) * (x[1] - eb));
        let eu = possibilistic_eu(&f2g(), &u, &[a.clone(), b.clone()], &q()).unwrap();
        assert_abs_diff_eq!(eu, covariance(&f2g(), &a, &b, &q()).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn squared_deviation_yields_variance() {
        let a = FuzzyNumber::triangular(0.1, 0.4, 0.2).unwrap();
        let ea = expected_value(&f2g(), &a, &q()).unwrap();
        let u = MultiUtility::new(1, move |x| (x[0] - ea) * (x[0] - ea));
        let eu = possibilistic_eu(&f2g(), &u, &[a.clone()], &q()).unwrap();
        assert_abs_diff_eq!(eu, variance(&f2g(), &a, &q()).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn arity_mismatch_rejected() {
        let a = FuzzyNumber::point(0.0);
        let u = MultiUtility::new(2, |x| x[0] + x[1]);
        assert!(matches!(
            possibilistic_eu(&f2g(), &u, &[a], &q()),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn mixed_with_no_fuzzy_is_probabilistic() {
        let x = DiscreteRandomVariable::new(vec![(0.05, 0.5), (0.11, 0.5)]).unwrap();
        let u = MultiUtility::new(1, |a| (a[0] - 0.02) * (a[0] - 0.02));
        let mixed = mixed_eu(&f2g(), &u, &[], &[x.clone()], &q()).unwrap();
        let prob = probabilistic_eu(&u, &[x]).unwrap();
        assert_abs_diff_eq!(mixed, prob, epsilon = 1e-15);
        assert_abs_diff_eq!(prob, 0.0045, epsilon = 1e-15);
    }

    #[test]
    fn mixed_with_degenerate_randoms_is_possibilistic() {
        let a = FuzzyNumber::triangular(0.3, 0.1, 0.25).unwrap();
        let y = DiscreteRandomVariable::degenerate(0.4);
        let u2 = MultiUtility::new(2, |v| (v[0] + v[1]).sin());
        let mixed = mixed_eu(&f2g(), &u2, &[a.clone()], &[y], &q()).unwrap();
        let u1 = MultiUtility::new(1, |v| (v[0] + 0.4).sin());
        let poss = possibilistic_eu(&f2g(), &u1, &[a], &q()).unwrap();
        assert_abs_diff_eq!(mixed, poss, epsilon = 1e-13);
    }

    #[test]
    fn mixed_projection_onto_random_component() {
        let a = FuzzyNumber::point(0.0);
        let x = DiscreteRandomVariable::new(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let u = MultiUtility::new(2, |v| v[1]);
        assert_abs_diff_eq!(
            mixed_eu(&f2g(), &u, &[a], &[x], &q()).unwrap(),
            0.0,
            epsilon = 1e-13
        );
    }
}
