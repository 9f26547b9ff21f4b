//! Utility functions with derivatives, the Arrow–Pratt index and the
//! "more risk-averse" comparison.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A `C²` utility, increasing and concave on its domain of validity.
#[derive(Clone)]
pub enum UtilityFunction {
    /// `u(w) = −e^{−λw}`, constant absolute risk aversion λ.
    Cara { lambda: f64 },
    /// `u(w) = w^{1−ρ}/(1−ρ)` on `w > 0`, constant relative risk aversion ρ.
    Crra { rho: f64 },
    /// `u(w) = ln w` on `w > 0`.
    Log,
    /// `u(w) = w − b w²` on `w < 1/(2b)` so that `u′ > 0`.
    Quadratic { b: f64 },
    Custom {
        u: Evaluator,
        du: Evaluator,
        ddu: Evaluator,
        /// open interval of validity
        domain: (f64, f64),
    },
}

impl fmt::Debug for UtilityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cara { lambda } => write!(f, "Cara({lambda})"),
            Self::Crra { rho } => write!(f, "Crra({rho})"),
            Self::Log => write!(f, "Log"),
            Self::Quadratic { b } => write!(f, "Quadratic({b})"),
            Self::Custom { domain, .. } => write!(f, "Custom(domain: {domain:?})"),
        }
    }
}

impl PartialEq for UtilityFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Cara { lambda: a }, Self::Cara { lambda: b }) => a == b,
            (Self::Crra { rho: a }, Self::Crra { rho: b }) => a == b,
            (Self::Log, Self::Log) => true,
            (Self::Quadratic { b: a }, Self::Quadratic { b }) => a == b,
            _ => false,
        }
    }
}

impl UtilityFunction {
    pub fn cara(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidUtility(format!(
                "CARA parameter must be positive, got {lambda}"
            )));
        }
        Ok(Self::Cara { lambda })
    }

    pub fn crra(rho: f64) -> Result<Self> {
        if !(rho > 0.0) || rho == 1.0 {
            return Err(Error::InvalidUtility(format!(
                "CRRA parameter must be positive and != 1, got {rho}"
            )));
        }
        Ok(Self::Crra { rho })
    }

    pub fn log() -> Self {
        Self::Log
    }

    pub fn quadratic(b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::InvalidUtility(format!(
                "quadratic parameter must be positive, got {b}"
            )));
        }
        Ok(Self::Quadratic { b })
    }

    pub fn custom<U, D, D2>(u: U, du: D, ddu: D2, domain: (f64, f64)) -> Self
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::Custom {
            u: Arc::new(u),
            du: Arc::new(du),
            ddu: Arc::new(ddu),
            domain,
        }
    }

    /// Open interval on which the function is valid (u′ > 0, u″ < 0).
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::Cara { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Self::Crra { .. } | Self::Log => (0.0, f64::INFINITY),
            Self::Quadratic { b } => (f64::NEG_INFINITY, 1.0 / (2.0 * b)),
            Self::Custom { domain, .. } => *domain,
        }
    }

    pub fn contains(&self, w: f64) -> bool {
        let (lo, hi) = self.domain();
        w > lo && w < hi
    }

    fn check_domain(&self, w: f64) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            let (lo, hi) = self.domain();
            Err(Error::UtilityDomain { wealth: w, lo, hi })
        }
    }

    /// `u(w)` without the domain check; callers must have validated `w`.
    pub fn value_unchecked(&self, w: f64) -> f64 {
        match self {
            Self::Cara { lambda } => -(-lambda * w).exp(),
            Self::Crra { rho } => w.powf(1.0 - rho) / (1.0 - rho),
            Self::Log => w.ln(),
            Self::Quadratic { b } => w - b * w * w,
            Self::Custom { u, .. } => u(w),
        }
    }

    /// `u′(w)` without the domain check.
    pub fn deriv_unchecked(&self, w: f64) -> f64 {
        match self {
            Self::Cara { lambda } => lambda * (-lambda * w).exp(),
            Self::Crra { rho } => w.powf(-rho),
            Self::Log => 1.0 / w,
            Self::Quadratic { b } => 1.0 - 2.0 * b * w,
            Self::Custom { du, .. } => du(w),
        }
    }

    /// `u″(w)` without the domain check.
    pub fn second_deriv_unchecked(&self, w: f64) -> f64 {
        match self {
            Self::Cara { lambda } => -lambda * lambda * (-lambda * w).exp(),
            Self::Crra { rho } => -rho * w.powf(-rho - 1.0),
            Self::Log => -1.0 / (w * w),
            Self::Quadratic { b } => -2.0 * b,
            Self::Custom { ddu, .. } => ddu(w),
        }
    }

    pub fn value(&self, w: f64) -> Result<f64> {
        self.check_domain(w)?;
        Ok(self.value_unchecked(w))
    }

    pub fn deriv(&self, w: f64) -> Result<f64> {
        self.check_domain(w)?;
        Ok(self.deriv_unchecked(w))
    }

    pub fn second_deriv(&self, w: f64) -> Result<f64> {
        self.check_domain(w)?;
        Ok(self.second_deriv_unchecked(w))
    }

    /// Arrow–Pratt index `r_u(w) = −u″(w)/u′(w)`.
    pub fn arrow_pratt(&self, w: f64) -> Result<f64> {
        self.check_domain(w)?;
        Ok(-self.second_deriv_unchecked(w) / self.deriv_unchecked(w))
    }
}

/// `u1` is more risk-averse than `u2` iff `r_{u1}(w) ≥ r_{u2}(w)` at every
/// grid point.
pub fn more_risk_averse(
    u1: &UtilityFunction,
    u2: &UtilityFunction,
    grid: &[f64],
) -> Result<bool> {
    if grid.is_empty() {
        return Err(Error::InvalidInput(
            "risk-aversion comparison grid is empty".into(),
        ));
    }
    for &w in grid {
        let r1 = u1.arrow_pratt(w)?;
        let r2 = u2.arrow_pratt(w)?;
        if r1 < r2 - 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct DerivativeReport {
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Check `u′` against finite differences of `u`, `u″` against finite
/// differences of `u′`, and the sign conditions `u′ > 0`, `u″ < 0`.
pub fn check_derivatives(u: &UtilityFunction, grid: &[f64]) -> Result<DerivativeReport> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("derivative check grid is empty".into()));
    }
    let mut failures = Vec::new();
    for &w in grid {
        u.value(w)?; // domain check
        let h = 1e-6 * (1.0 + w.abs());
        if !(u.contains(w - h) && u.contains(w + h)) {
            continue; // too close to the domain boundary for a central difference
        }
        let du = u.deriv_unchecked(w);
        let ddu = u.second_deriv_unchecked(w);
        if !(du > 0.0) {
            failures.push(format!("u'({w}) = {du} is not positive"));
        }
        if !(ddu < 0.0) {
            failures.push(format!("u''({w}) = {ddu} is not negative"));
        }
        let fd1 = (u.value_unchecked(w + h) - u.value_unchecked(w - h)) / (2.0 * h);
        let fd2 = (u.deriv_unchecked(w + h) - u.deriv_unchecked(w - h)) / (2.0 * h);
        let scale1 = du.abs().max(1e-8);
        let scale2 = ddu.abs().max(1e-8);
        if ((fd1 - du) / scale1).abs() > 1e-5 {
            failures.push(format!(
                "u'({w}) = {du} disagrees with finite difference {fd1}"
            ));
        }
        if ((fd2 - ddu) / scale2).abs() > 1e-5 {
            failures.push(format!(
                "u''({w}) = {ddu} disagrees with finite difference {fd2}"
            ));
        }
    }
    Ok(DerivativeReport {
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn arrow_pratt_families() {
        let cara = UtilityFunction::cara(2.0).unwrap();
        assert_abs_diff_eq!(cara.arrow_pratt(-3.0).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cara.arrow_pratt(10.0).unwrap(), 2.0, epsilon = 1e-12);

        let crra = UtilityFunction::crra(3.0).unwrap();
        assert_abs_diff_eq!(crra.arrow_pratt(2.0).unwrap(), 1.5, epsilon = 1e-12);

        let log = UtilityFunction::log();
        assert_abs_diff_eq!(log.arrow_pratt(4.0).unwrap(), 0.25, epsilon = 1e-12);

        let quad = UtilityFunction::quadratic(0.1).unwrap();
        // r = 2b/(1 - 2bw)
        assert_abs_diff_eq!(quad.arrow_pratt(1.0).unwrap(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn domain_enforcement() {
        let log = UtilityFunction::log();
        assert!(matches!(
            log.value(-1.0),
            Err(Error::UtilityDomain { .. })
        ));
        let quad = UtilityFunction::quadratic(0.1).unwrap();
        assert!(quad.value(5.0).is_err()); // 1/(2b) = 5 is the boundary
        assert!(quad.value(4.9).is_ok());
    }

    #[test]
    fn more_risk_averse_comparisons() {
        let grid = [1.0, 2.0, 5.0];
        let c2 = UtilityFunction::cara(2.0).unwrap();
        let c1 = UtilityFunction::cara(1.0).unwrap();
        assert!(more_risk_averse(&c2, &c1, &grid).unwrap());
        assert!(more_risk_averse(&c1, &c1, &grid).unwrap());

        // indices 1 vs 3 at w=1 and 1 vs 0.3 at w=10 cross
        let crra3 = UtilityFunction::crra(3.0).unwrap();
        assert!(!more_risk_averse(&c1, &crra3, &[1.0, 10.0]).unwrap());
        assert!(!more_risk_averse(&crra3, &c1, &[1.0, 10.0]).unwrap());
    }

    #[test]
    fn more_risk_averse_rejects_empty_grid() {
        let c = UtilityFunction::cara(1.0).unwrap();
        assert!(more_risk_averse(&c, &c, &[]).is_err());
    }

    #[test]
    fn derivative_checks() {
        let grid = [0.0, 1.0, 2.0];
        let c = UtilityFunction::cara(1.0).unwrap();
        assert!(check_derivatives(&c, &grid).unwrap().passed);

        let quad = UtilityFunction::quadratic(0.05).unwrap();
        assert!(check_derivatives(&quad, &grid).unwrap().passed);

        // deliberately wrong second derivative
        let bad = UtilityFunction::custom(
            |w: f64| -(-w).exp(),
            |w: f64| (-w).exp(),
            |w: f64| -0.5 * (-w).exp(),
            (f64::NEG_INFINITY, f64::INFINITY),
        );
        let rep = check_derivatives(&bad, &grid).unwrap();
        assert!(!rep.passed);
        assert!(rep.failures.iter().any(|m| m.contains("u''")));
    }
}
