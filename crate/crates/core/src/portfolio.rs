//! The four two-asset allocation models: objective construction, exact
//! maximization in α, closed-form approximations and comparative statics.
//!
//! Wealth after the period is `w + y + α(x − r)` where `x` is the risky
//! return, `y` the (optional) background component, `w = w0(1+r)` the
//! risk-free future wealth and `α` the amount allocated to the risky asset.
//! Depending on the model the risks are fuzzy numbers or discrete random
//! variables, and the objective is a possibilistic or mixed expected utility.

use crate::error::{Error, Result};
use crate::expected_utility::{mixed_eu, possibilistic_eu, MultiUtility};
use crate::fuzzy::{covariance, expected_value, linear_combination, variance, FuzzyNumber, WeightingFunction};
use crate::quad::QuadratureConfig;
use crate::stochastic::DiscreteRandomVariable;
use crate::utility::{more_risk_averse, UtilityFunction};

const DERIV_TOL: f64 = 1e-10;
const DEGENERATE_TOL: f64 = 1e-15;

/// Market data: initial wealth, risk-free return and the implied future
/// risk-free wealth `w = w0(1+r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketSpec {
    pub w0: f64,
    pub r: f64,
    pub w: f64,
}

impl MarketSpec {
    pub fn from_initial_wealth(w0: f64, r: f64) -> Result<Self> {
        if !w0.is_finite() || !r.is_finite() {
            return Err(Error::InvalidInput("market data must be finite".into()));
        }
        Ok(Self {
            w0,
            r,
            w: w0 * (1.0 + r),
        })
    }

    /// Build from the future wealth; `w0` is back-computed.
    pub fn from_future_wealth(w: f64, r: f64) -> Result<Self> {
        if !w.is_finite() || !r.is_finite() {
            return Err(Error::InvalidInput("market data must be finite".into()));
        }
        if r == -1.0 {
            return Err(Error::InvalidInput(
                "cannot back-compute w0 when r = -1".into(),
            ));
        }
        Ok(Self {
            w0: w / (1.0 + r),
            r,
            w,
        })
    }
}

/// A risk component: possibilistic or probabilistic.
#[derive(Debug, Clone, PartialEq)]
pub enum Risk {
    Fuzzy(FuzzyNumber),
    Random(DiscreteRandomVariable),
}

impl Risk {
    /// Smallest and largest attainable values.
    pub fn value_range(&self) -> (f64, f64) {
        match self {
            Risk::Fuzzy(a) => a.support(),
            Risk::Random(x) => x.value_range(),
        }
    }
}

/// Which of the four models a spec instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    /// Fuzzy investment risk, no background risk.
    M1,
    /// Fuzzy investment risk, fuzzy background risk.
    M2,
    /// Fuzzy investment risk, random background risk.
    M3,
    /// Random investment risk, fuzzy background risk.
    M4,
}

/// A fully validated allocation problem.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    tag: ModelTag,
    market: MarketSpec,
    investment: Risk,
    background: Option<Risk>,
    weighting: WeightingFunction,
    utility: UtilityFunction,
    quadrature: QuadratureConfig,
}

impl ModelSpec {
    pub fn new(
        tag: ModelTag,
        market: MarketSpec,
        investment: Risk,
        background: Option<Risk>,
        weighting: WeightingFunction,
        utility: UtilityFunction,
        quadrature: QuadratureConfig,
    ) -> Result<Self> {
        match (tag, &investment, &background) {
            (ModelTag::M1, Risk::Fuzzy(_), None) => {}
            (ModelTag::M2, Risk::Fuzzy(_), Some(Risk::Fuzzy(_))) => {}
            (ModelTag::M3, Risk::Fuzzy(_), Some(Risk::Random(_))) => {}
            (ModelTag::M4, Risk::Random(_), Some(Risk::Fuzzy(_))) => {}
            _ => {
                return Err(Error::InvalidInput(format!(
                    "risk kinds do not match model {tag:?}: {tag:?} requires {}",
                    match tag {
                        ModelTag::M1 => "a fuzzy investment risk and no background risk",
                        ModelTag::M2 => "fuzzy investment and fuzzy background risks",
                        ModelTag::M3 => "a fuzzy investment risk and a random background risk",
                        ModelTag::M4 => "a random investment risk and a fuzzy background risk",
                    }
                )))
            }
        }
        let spec = Self {
            tag,
            market,
            investment,
            background,
            weighting,
            utility,
            quadrature,
        };
        // α = 0 must be feasible: w plus the background support lies in the
        // utility domain
        spec.check_wealth_domain(0.0)?;
        Ok(spec)
    }

    pub fn tag(&self) -> ModelTag {
        self.tag
    }
    pub fn market(&self) -> &MarketSpec {
        &self.market
    }
    pub fn investment(&self) -> &Risk {
        &self.investment
    }
    pub fn background(&self) -> Option<&Risk> {
        self.background.as_ref()
    }
    pub fn weighting(&self) -> &WeightingFunction {
        &self.weighting
    }
    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }
    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quadrature
    }

    /// Same problem with another utility.
    pub fn with_utility(&self, utility: UtilityFunction) -> Result<Self> {
        Self::new(
            self.tag,
            self.market,
            self.investment.clone(),
            self.background.clone(),
            self.weighting.clone(),
            utility,
            self.quadrature,
        )
    }

    /// Same problem at another future wealth.
    pub fn with_future_wealth(&self, w: f64) -> Result<Self> {
        Self::new(
            self.tag,
            MarketSpec::from_future_wealth(w, self.market.r)?,
            self.investment.clone(),
            self.background.clone(),
            self.weighting.clone(),
            self.utility.clone(),
            self.quadrature,
        )
    }

    /// Same problem with the background component removed (model becomes M1
    /// or, for M4, keeps the random investment with a zero fuzzy background).
    pub fn without_background(&self) -> Result<Self> {
        match self.tag {
            ModelTag::M1 => Ok(self.clone()),
            ModelTag::M2 | ModelTag::M3 => Self::new(
                ModelTag::M1,
                self.market,
                self.investment.clone(),
                None,
                self.weighting.clone(),
                self.utility.clone(),
                self.quadrature,
            ),
            ModelTag::M4 => Self::new(
                ModelTag::M4,
                self.market,
                self.investment.clone(),
                Some(Risk::Fuzzy(FuzzyNumber::point(0.0))),
                self.weighting.clone(),
                self.utility.clone(),
                self.quadrature,
            ),
        }
    }

    /// Scale every risk about its mean by `epsilon`, shrinking (or
    /// stretching) widths while preserving means.
    pub fn with_scaled_risks(&self, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "risk scale must be non-negative, got {epsilon}"
            )));
        }
        let scale = |risk: &Risk| -> Result<Risk> {
            match risk {
                Risk::Fuzzy(a) => {
                    let mean = expected_value(&self.weighting, a, &self.quadrature)?;
                    let scaled = linear_combination(&[
                        (epsilon, a.clone()),
                        (1.0, FuzzyNumber::point((1.0 - epsilon) * mean)),
                    ])?;
                    Ok(Risk::Fuzzy(scaled))
                }
                Risk::Random(x) => {
                    let mean = x.mean();
                    let atoms = x
                        .atoms()
                        .iter()
                        .map(|&(v, p)| (mean + epsilon * (v - mean), p))
                        .collect();
                    Ok(Risk::Random(DiscreteRandomVariable::new(atoms)?))
                }
            }
        };
        Self::new(
            self.tag,
            self.market,
            scale(&self.investment)?,
            self.background.as_ref().map(&scale).transpose()?,
            self.weighting.clone(),
            self.utility.clone(),
            self.quadrature,
        )
    }

    fn background_range(&self) -> (f64, f64) {
        self.background
            .as_ref()
            .map(|b| b.value_range())
            .unwrap_or((0.0, 0.0))
    }

    /// Reachable wealth at allocation `alpha` (an interval, since wealth is
    /// monotone in each risk value).
    fn wealth_range(&self, alpha: f64) -> (f64, f64) {
        let (x_lo, x_hi) = self.investment.value_range();
        let (y_lo, y_hi) = self.background_range();
        let r = self.market.r;
        let e_lo = (alpha * (x_lo - r)).min(alpha * (x_hi - r));
        let e_hi = (alpha * (x_lo - r)).max(alpha * (x_hi - r));
        (self.market.w + y_lo + e_lo, self.market.w + y_hi + e_hi)
    }

    /// All quadrature nodes / atoms must land strictly inside the utility
    /// domain; the error names the offending wealth.
    fn check_wealth_domain(&self, alpha: f64) -> Result<()> {
        let (w_lo, w_hi) = self.wealth_range(alpha);
        let (d_lo, d_hi) = self.utility.domain();
        if w_lo <= d_lo {
            return Err(Error::UtilityDomain {
                wealth: w_lo,
                lo: d_lo,
                hi: d_hi,
            });
        }
        if w_hi >= d_hi {
            return Err(Error::UtilityDomain {
                wealth: w_hi,
                lo: d_lo,
                hi: d_hi,
            });
        }
        Ok(())
    }

    /// Open interval of allocations for which every reachable wealth stays
    /// inside the utility domain. Always contains 0 for a valid spec.
    pub fn feasible_alpha_interval(&self) -> (f64, f64) {
        let (d_lo, d_hi) = self.utility.domain();
        let (x_lo, x_hi) = self.investment.value_range();
        let (y_lo, y_hi) = self.background_range();
        let r = self.market.r;
        let mut a_lo = f64::NEG_INFINITY;
        let mut a_hi = f64::INFINITY;
        for &x in &[x_lo, x_hi] {
            for &y in &[y_lo, y_hi] {
                // d_lo < w + y + α(x − r) < d_hi
                let c = x - r;
                let base = self.market.w + y;
                if c > 0.0 {
                    a_lo = a_lo.max((d_lo - base) / c);
                    a_hi = a_hi.min((d_hi - base) / c);
                } else if c < 0.0 {
                    a_lo = a_lo.max((d_hi - base) / c);
                    a_hi = a_hi.min((d_lo - base) / c);
                }
                // c == 0: wealth does not depend on α at this corner
            }
        }
        (a_lo, a_hi)
    }

    /// The possibilistic/probabilistic indicators entering the closed-form
    /// approximations.
    pub fn indicator_snapshot(&self) -> Result<IndicatorSnapshot> {
        let f = &self.weighting;
        let q = &self.quadrature;
        let r = self.market.r;
        let mut snap = IndicatorSnapshot::default();
        match &self.investment {
            Risk::Fuzzy(a) => {
                snap.fuzzy_return_mean = Some(expected_value(f, a, q)?);
                snap.fuzzy_return_variance = Some(variance(f, a, q)?);
                if let Some(Risk::Fuzzy(b)) = &self.background {
                    snap.background_covariance = Some(covariance(f, a, b, q)?);
                }
            }
            Risk::Random(x) => {
                snap.random_return_mean = Some(x.mean());
                snap.random_return_second_moment = Some(x.second_moment_about(r));
            }
        }
        match &self.background {
            Some(Risk::Fuzzy(b)) => {
                snap.background_fuzzy_mean = Some(expected_value(f, b, q)?);
            }
            Some(Risk::Random(y)) => {
                snap.background_random_mean = Some(y.mean());
            }
            None => {}
        }
        Ok(snap)
    }

    /// Denominator of the approximation formula; near-zero means the risky
    /// asset is (essentially) riskless at the bond rate.
    fn approx_denominator(&self, snap: &IndicatorSnapshot) -> f64 {
        match self.tag {
            ModelTag::M1 | ModelTag::M2 | ModelTag::M3 => {
                let e = snap.fuzzy_return_mean.unwrap();
                let v = snap.fuzzy_return_variance.unwrap();
                v + (e - self.market.r) * (e - self.market.r)
            }
            ModelTag::M4 => snap.random_return_second_moment.unwrap(),
        }
    }
}

/// Indicators feeding the approximation formulas; only the fields relevant
/// to the model at hand are populated.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IndicatorSnapshot {
    /// `E(f, A)` when the investment risk is fuzzy.
    pub fuzzy_return_mean: Option<f64>,
    /// `Var(f, A)` when the investment risk is fuzzy.
    pub fuzzy_return_variance: Option<f64>,
    /// `M(X)` when the investment risk is random.
    pub random_return_mean: Option<f64>,
    /// `M[(X − r)²]` when the investment risk is random.
    pub random_return_second_moment: Option<f64>,
    /// `E(f, B)` when the background risk is fuzzy.
    pub background_fuzzy_mean: Option<f64>,
    /// `M(Y)` when the background risk is random.
    pub background_random_mean: Option<f64>,
    /// `Cov(f, A, B)` when both risks are fuzzy.
    pub background_covariance: Option<f64>,
}

/// Objective value `K(α, w)`: a possibilistic expected utility for the
/// fully fuzzy models, a mixed expected utility when one component is
/// random.
pub fn objective(m: &ModelSpec, alpha: f64) -> Result<f64> {
    m.check_wealth_domain(alpha)?;
    let w = m.market.w;
    let r = m.market.r;
    let u = m.utility.clone();
    match (&m.investment, &m.background) {
        (Risk::Fuzzy(a), None) => {
            let v = MultiUtility::new(1, move |x| u.value_unchecked(w + alpha * (x[0] - r)));
            possibilistic_eu(&m.weighting, &v, std::slice::from_ref(a), &m.quadrature)
        }
        (Risk::Fuzzy(a), Some(Risk::Fuzzy(b))) => {
            let v = MultiUtility::new(2, move |x| {
                u.value_unchecked(w + x[1] + alpha * (x[0] - r))
            });
            possibilistic_eu(&m.weighting, &v, &[a.clone(), b.clone()], &m.quadrature)
        }
        (Risk::Fuzzy(a), Some(Risk::Random(y))) => {
            let v = MultiUtility::new(2, move |x| {
                u.value_unchecked(w + x[1] + alpha * (x[0] - r))
            });
            mixed_eu(
                &m.weighting,
                &v,
                std::slice::from_ref(a),
                std::slice::from_ref(y),
                &m.quadrature,
            )
        }
        (Risk::Random(x), Some(Risk::Fuzzy(b))) => {
            // fuzzy argument (background) first, random return second
            let v = MultiUtility::new(2, move |args| {
                u.value_unchecked(w + args[0] + alpha * (args[1] - r))
            });
            mixed_eu(
                &m.weighting,
                &v,
                std::slice::from_ref(b),
                std::slice::from_ref(x),
                &m.quadrature,
            )
        }
        _ => unreachable!("validated in ModelSpec::new"),
    }
}

/// Analytic `∂K/∂α`: the integrand differentiated under the integral.
pub fn objective_derivative(m: &ModelSpec, alpha: f64) -> Result<f64> {
    m.check_wealth_domain(alpha)?;
    let w = m.market.w;
    let r = m.market.r;
    let u = m.utility.clone();
    match (&m.investment, &m.background) {
        (Risk::Fuzzy(a), None) => {
            let v = MultiUtility::new(1, move |x| {
                u.deriv_unchecked(w + alpha * (x[0] - r)) * (x[0] - r)
            });
            possibilistic_eu(&m.weighting, &v, std::slice::from_ref(a), &m.quadrature)
        }
        (Risk::Fuzzy(a), Some(Risk::Fuzzy(b))) => {
            let v = MultiUtility::new(2, move |x| {
                u.deriv_unchecked(w + x[1] + alpha * (x[0] - r)) * (x[0] - r)
            });
            possibilistic_eu(&m.weighting, &v, &[a.clone(), b.clone()], &m.quadrature)
        }
        (Risk::Fuzzy(a), Some(Risk::Random(y))) => {
            let v = MultiUtility::new(2, move |x| {
                u.deriv_unchecked(w + x[1] + alpha * (x[0] - r)) * (x[0] - r)
            });
            mixed_eu(
                &m.weighting,
                &v,
                std::slice::from_ref(a),
                std::slice::from_ref(y),
                &m.quadrature,
            )
        }
        (Risk::Random(x), Some(Risk::Fuzzy(b))) => {
            let v = MultiUtility::new(2, move |args| {
                u.deriv_unchecked(w + args[0] + alpha * (args[1] - r)) * (args[1] - r)
            });
            mixed_eu(
                &m.weighting,
                &v,
                std::slice::from_ref(b),
                std::slice::from_ref(x),
                &m.quadrature,
            )
        }
        _ => unreachable!("validated in ModelSpec::new"),
    }
}

/// Result of the exact maximization plus the closed-form approximation.
#[derive(Debug, Clone)]
pub struct Solution {
    pub alpha_exact: f64,
    pub alpha_approx: f64,
    pub objective_at_exact: f64,
    pub derivative_at_exact: f64,
    pub indicators: IndicatorSnapshot,
    pub iterations: usize,
    pub bracket: (f64, f64),
    /// Constant objective (riskless risky asset at the bond rate); α = 0 by
    /// convention.
    pub degenerate: bool,
}

/// Maximize the objective by bracketing the root of `∂K/∂α` (outward
/// doubling from 0) followed by bisection. The objective is concave, so the
/// derivative is decreasing and any sign change brackets the optimum.
pub fn solve_exact(m: &ModelSpec) -> Result<Solution> {
    let indicators = m.indicator_snapshot()?;
    if m.approx_denominator(&indicators) < DEGENERATE_TOL {
        return Ok(Solution {
            alpha_exact: 0.0,
            alpha_approx: 0.0,
            objective_at_exact: objective(m, 0.0)?,
            derivative_at_exact: objective_derivative(m, 0.0)?,
            indicators,
            iterations: 0,
            bracket: (0.0, 0.0),
            degenerate: true,
        });
    }

    let (a_lo, a_hi) = m.feasible_alpha_interval();
    let mut iterations = 0usize;
    let d0 = objective_derivative(m, 0.0)?;

    let (bracket, alpha_exact) = if d0.abs() <= 1e-13 {
        ((0.0, 0.0), 0.0)
    } else {
        let (lo, hi, dlo) = if d0 > 0.0 {
            let (b, _db) = bracket_outward(m, 0.0, d0, a_hi, 1.0, &mut iterations)?;
            (0.0, b, d0)
        } else {
            let (b, db) = bracket_outward(m, 0.0, d0, a_lo, -1.0, &mut iterations)?;
            (b, 0.0, db)
        };
        let root = bisect(m, lo, hi, dlo, &mut iterations)?;
        ((lo, hi), root)
    };

    let alpha_approx = approximate_allocation(m)?.alpha;
    Ok(Solution {
        alpha_exact,
        alpha_approx,
        objective_at_exact: objective(m, alpha_exact)?,
        derivative_at_exact: objective_derivative(m, alpha_exact)?,
        indicators,
        iterations,
        bracket,
        degenerate: false,
    })
}

/// Walk outward from 0 in direction `dir` (+1 right, -1 left) with doubling
/// steps until the derivative changes sign, approaching a finite feasible
/// boundary geometrically.
fn bracket_outward(
    m: &ModelSpec,
    start: f64,
    d_start: f64,
    limit: f64,
    dir: f64,
    iterations: &mut usize,
) -> Result<(f64, f64)> {
    let want_sign = d_start.signum();
    let mut a = start;
    let mut step = 1.0;
    for _ in 0..200 {
        *iterations += 1;
        let mut cand = a + dir * step;
        if limit.is_finite() && (cand - limit) * dir >= 0.0 {
            cand = a + 0.5 * (limit - a);
            if (limit - cand).abs() <= 1e-12 * (1.0 + limit.abs()) {
                return Err(Error::NoInteriorOptimum(format!(
                    "derivative keeps the sign of {d_start} up to the utility-domain \
                     boundary at alpha = {limit}"
                )));
            }
        }
        // shrink toward `a` if rounding pushed the candidate out of domain
        let mut d_cand = objective_derivative(m, cand);
        let mut shrink = 0;
        while d_cand.is_err() && shrink < 60 {
            cand = 0.5 * (a + cand);
            d_cand = objective_derivative(m, cand);
            shrink += 1;
        }
        let d_cand = d_cand?;
        if d_cand * want_sign < 0.0 {
            return Ok((cand, d_cand));
        }
        // an exact zero is either a genuine stationary point or the
        // derivative underflowing on its way to an asymptote; probe ahead
        // to tell them apart
        if d_cand == 0.0 {
            let probe_at = cand + dir * step.max(1.0);
            let probe = if limit.is_finite() && (probe_at - limit) * dir >= 0.0 {
                objective_derivative(m, cand + 0.5 * (limit - cand))
            } else {
                objective_derivative(m, probe_at)
            };
            if !matches!(probe, Ok(p) if p * want_sign > 0.0 || p == 0.0) {
                return Ok((cand, d_cand));
            }
        }
        a = cand;
        step *= 2.0;
    }
    Err(Error::NoInteriorOptimum(format!(
        "derivative never changes sign (still {want_sign:+} signed after 200 expansions)"
    )))
}

/// Bisection on the decreasing derivative; `d(lo) ≥ 0 ≥ d(hi)`.
fn bisect(m: &ModelSpec, mut lo: f64, mut hi: f64, d_lo: f64, iterations: &mut usize) -> Result<f64> {
    debug_assert!(d_lo >= 0.0);
    for _ in 0..200 {
        *iterations += 1;
        let mid = 0.5 * (lo + hi);
        let d_mid = objective_derivative(m, mid)?;
        if d_mid == 0.0 {
            return Ok(mid);
        }
        if d_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-14 * (1.0 + mid.abs()) {
            break;
        }
    }
    let root = 0.5 * (lo + hi);
    let d_root = objective_derivative(m, root)?;
    if d_root.abs() > DERIV_TOL.max(1e-9 * (1.0 + d_root.abs())) && (hi - lo) > 1e-10 {
        return Err(Error::Solver(format!(
            "bisection stalled: |dK/dα| = {} at α = {root}",
            d_root.abs()
        )));
    }
    Ok(root)
}

/// Closed-form approximate allocation with the indicators it used.
#[derive(Debug, Clone)]
pub struct ApproxSolution {
    pub alpha: f64,
    pub indicators: IndicatorSnapshot,
}

/// First-order Taylor approximation of the optimal allocation:
/// `-u'(w)/u''(w) · (mean excess)/(denominator)` minus a background
/// correction where the model has one.
pub fn approximate_allocation(m: &ModelSpec) -> Result<ApproxSolution> {
    let indicators = m.indicator_snapshot()?;
    let denom = m.approx_denominator(&indicators);
    if denom < DEGENERATE_TOL {
        return Err(Error::Degenerate(
            "approximation denominator vanishes: the risky asset carries no risk premium \
             and no spread"
                .into(),
        ));
    }
    let w = m.market().w;
    let risk_tolerance = -m.utility.deriv(w)? / m.utility.second_deriv(w)?;
    let r = m.market.r;
    let alpha = match m.tag {
        ModelTag::M1 | ModelTag::M2 | ModelTag::M3 => {
            let excess = indicators.fuzzy_return_mean.unwrap() - r;
            let base = risk_tolerance * excess / denom;
            base + background_correction(m, &indicators, denom)
        }
        ModelTag::M4 => {
            let excess = indicators.random_return_mean.unwrap() - r;
            risk_tolerance * excess / denom + background_correction(m, &indicators, denom)
        }
    };
    Ok(ApproxSolution { alpha, indicators })
}

fn background_correction(m: &ModelSpec, snap: &IndicatorSnapshot, denom: f64) -> f64 {
    let r = m.market.r;
    match m.tag {
        ModelTag::M1 => 0.0,
        ModelTag::M2 => {
            let cov = snap.background_covariance.unwrap();
            let e_b = snap.background_fuzzy_mean.unwrap();
            let excess = snap.fuzzy_return_mean.unwrap() - r;
            -(cov + e_b * excess) / denom
        }
        ModelTag::M3 => {
            let m_y = snap.background_random_mean.unwrap();
            let excess = snap.fuzzy_return_mean.unwrap() - r;
            -(m_y * excess) / denom
        }
        ModelTag::M4 => {
            let e_b = snap.background_fuzzy_mean.unwrap();
            let excess = snap.random_return_mean.unwrap() - r;
            -(e_b * excess) / denom
        }
    }
}

/// Difference between the approximate allocation with the background risk
/// and the one without it, in closed form.
pub fn background_adjustment(m: &ModelSpec) -> Result<f64> {
    if m.tag == ModelTag::M1 {
        return Err(Error::InvalidInput(
            "background adjustment is undefined for a model without background risk".into(),
        ));
    }
    let indicators = m.indicator_snapshot()?;
    let denom = m.approx_denominator(&indicators);
    if denom < DEGENERATE_TOL {
        return Err(Error::Degenerate(
            "approximation denominator vanishes".into(),
        ));
    }
    Ok(background_correction(m, &indicators, denom))
}

/// Prediction of the ordering between the background-inclusive and the
/// background-free approximate allocations, with the signed condition value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingCondition {
    /// True iff the allocation with background risk is predicted ≤ the one
    /// without it.
    pub background_leq: bool,
    pub condition_value: f64,
}

/// The division-free ordering conditions: for a fuzzy background,
/// `Cov(f,A,B) + E(f,B)(E(f,A) − r) ≥ 0`; for a random background,
/// `M(Y)(E(f,A) − r) ≥ 0`.
pub fn ordering_condition(m: &ModelSpec) -> Result<OrderingCondition> {
    let snap = m.indicator_snapshot()?;
    let r = m.market.r;
    let condition_value = match m.tag {
        ModelTag::M2 => {
            let excess = snap.fuzzy_return_mean.unwrap() - r;
            snap.background_covariance.unwrap() + snap.background_fuzzy_mean.unwrap() * excess
        }
        ModelTag::M3 => {
            let excess = snap.fuzzy_return_mean.unwrap() - r;
            snap.background_random_mean.unwrap() * excess
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "ordering condition is defined for models with a fuzzy investment risk and \
                 a background component, not {:?}",
                m.tag
            )))
        }
    };
    Ok(OrderingCondition {
        background_leq: condition_value >= 0.0,
        condition_value,
    })
}

/// Allocations of two agents facing the same problem with different
/// utilities, the more risk-averse one first.
#[derive(Debug, Clone)]
pub struct ComparativeReport {
    pub alpha_approx_1: f64,
    pub alpha_approx_2: f64,
    pub approx_ordering_holds: bool,
    /// `None` when the exact problem has no interior optimum.
    pub alpha_exact_1: Option<f64>,
    pub alpha_exact_2: Option<f64>,
    pub exact_ordering_holds: Option<bool>,
}

/// Checks that a more risk-averse agent allocates no more to the risky
/// asset, both in the closed-form approximation and at the exact optimum.
pub fn risk_aversion_comparative(m1: &ModelSpec, m2: &ModelSpec) -> Result<ComparativeReport> {
    let same = m1.tag == m2.tag
        && m1.market == m2.market
        && m1.investment == m2.investment
        && m1.background == m2.background
        && m1.weighting == m2.weighting;
    if !same {
        return Err(Error::InvalidInput(
            "comparative statics requires two specs identical except for the utility".into(),
        ));
    }
    let grid = comparison_wealth_grid(m1, m2);
    if !more_risk_averse(&m1.utility, &m2.utility, &grid)? {
        return Err(Error::InvalidInput(
            "first utility is not more risk-averse than the second on the validation grid"
                .into(),
        ));
    }
    let a1 = approximate_allocation(m1)?.alpha;
    let a2 = approximate_allocation(m2)?.alpha;
    let exact = |spec: &ModelSpec| -> Result<Option<f64>> {
        match solve_exact(spec) {
            Ok(sol) => Ok(Some(sol.alpha_exact)),
            Err(Error::NoInteriorOptimum(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let e1 = exact(m1)?;
    let e2 = exact(m2)?;
    Ok(ComparativeReport {
        alpha_approx_1: a1,
        alpha_approx_2: a2,
        approx_ordering_holds: a1 <= a2 + 1e-12,
        alpha_exact_1: e1,
        alpha_exact_2: e2,
        exact_ordering_holds: match (e1, e2) {
            (Some(x1), Some(x2)) => Some(x1 <= x2 + 1e-9),
            _ => None,
        },
    })
}

fn comparison_wealth_grid(m1: &ModelSpec, m2: &ModelSpec) -> Vec<f64> {
    let w = m1.market.w;
    let mut grid: Vec<f64> = [0.5 * w, w, 2.0 * w, w + 1.0, w - 1.0]
        .into_iter()
        .filter(|&x| m1.utility.contains(x) && m2.utility.contains(x))
        .collect();
    if grid.is_empty() {
        grid.push(w);
    }
    grid
}

/// One row of a wealth sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub w: f64,
    pub alpha_exact: f64,
    pub alpha_approx: f64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Arrow–Pratt index decreasing across the wealth grid.
    pub dara: bool,
    /// Indices `i` where `alpha_approx[i] < alpha_approx[i-1]` despite DARA.
    pub monotonicity_violations: Vec<usize>,
}

/// Re-solve the problem at each wealth level; under decreasing absolute
/// risk aversion the approximate allocation must be non-decreasing.
pub fn wealth_sweep(m: &ModelSpec, wealth_grid: &[f64]) -> Result<SweepReport> {
    if wealth_grid.is_empty() {
        return Err(Error::InvalidInput("wealth grid is empty".into()));
    }
    let mut rows = Vec::with_capacity(wealth_grid.len());
    for &w in wealth_grid {
        let spec = m.with_future_wealth(w).map_err(|e| {
            Error::InvalidInput(format!("wealth sweep at w = {w}: {e}"))
        })?;
        let sol = solve_exact(&spec)
            .map_err(|e| Error::Solver(format!("wealth sweep at w = {w}: {e}")))?;
        rows.push(SweepRow {
            w,
            alpha_exact: sol.alpha_exact,
            alpha_approx: sol.alpha_approx,
        });
    }
    let dara = {
        let mut sorted: Vec<f64> = wealth_grid.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let indices: Result<Vec<f64>> = sorted.iter().map(|&w| m.utility.arrow_pratt(w)).collect();
        match indices {
            Ok(ix) => ix.windows(2).all(|p| p[1] <= p[0] + 1e-12),
            Err(_) => false,
        }
    };
    let mut monotonicity_violations = Vec::new();
    if dara {
        for i in 1..rows.len() {
            if rows[i].w > rows[i - 1].w && rows[i].alpha_approx < rows[i - 1].alpha_approx - 1e-12
            {
                monotonicity_violations.push(i);
            }
        }
    }
    Ok(SweepReport {
        rows,
        dara,
        monotonicity_violations,
    })
}
