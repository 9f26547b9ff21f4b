//! Possibilistic indicators of fuzzy numbers and two-asset portfolio choice
//! with background risk.
//!
//! The crate represents fuzzy numbers by their nested γ-level intervals,
//! computes f-weighted possibilistic indicators (mean, variance, covariance)
//! and possibilistic/mixed expected utilities, and solves four allocation
//! problems between a risk-free bond and a risky asset, with the risks
//! modelled as fuzzy numbers, discrete random variables, or a mix of the
//! two. Each problem is solved exactly (bracketing plus bisection on the
//! concave objective's derivative) and via a closed-form first-order
//! approximation expressed through the Arrow–Pratt index and the risk
//! indicators.

pub mod error;
pub mod expected_utility;
pub mod fuzzy;
pub mod portfolio;
pub mod quad;
pub mod stochastic;
pub mod utility;

pub use error::{Error, Result};
pub use expected_utility::{mixed_eu, possibilistic_eu, probabilistic_eu, MultiUtility};
pub use fuzzy::{
    covariance, expected_value, linear_combination, validate_weighting, variance, FuzzyNumber,
    LevelRow, WeightingFunction, WeightingReport,
};
pub use portfolio::{
    approximate_allocation, background_adjustment, objective, objective_derivative,
    ordering_condition, risk_aversion_comparative, solve_exact, wealth_sweep, ApproxSolution,
    ComparativeReport, IndicatorSnapshot, MarketSpec, ModelSpec, ModelTag, OrderingCondition,
    Risk, Solution, SweepReport, SweepRow,
};
pub use quad::{QuadRule, QuadratureConfig};
pub use stochastic::{discretize_normal, DiscreteRandomVariable};
pub use utility::{check_derivatives, more_risk_averse, DerivativeReport, UtilityFunction};
