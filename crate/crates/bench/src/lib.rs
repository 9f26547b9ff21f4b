//! Shared fixtures for the criterion benchmarks.

use fuzzyfolio::*;

pub fn weighting() -> WeightingFunction {
    WeightingFunction::power(1.0).unwrap()
}

pub fn quadrature() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// M1 scenario whose investment support straddles the bond rate, so the
/// exact solver runs its full bracket-and-bisect path.
pub fn straddling_m1() -> ModelSpec {
    ModelSpec::new(
        ModelTag::M1,
        MarketSpec::from_initial_wealth(1.0, 0.02).unwrap(),
        Risk::Fuzzy(FuzzyNumber::triangular(0.03, 0.2, 0.2).unwrap()),
        None,
        weighting(),
        UtilityFunction::cara(2.0).unwrap(),
        quadrature(),
    )
    .unwrap()
}

/// M3 scenario: fuzzy investment plus discrete random background.
pub fn mixed_m3() -> ModelSpec {
    ModelSpec::new(
        ModelTag::M3,
        MarketSpec::from_initial_wealth(1.0, 0.02).unwrap(),
        Risk::Fuzzy(FuzzyNumber::triangular(0.03, 0.2, 0.2).unwrap()),
        Some(Risk::Random(
            DiscreteRandomVariable::new(vec![(-0.05, 0.25), (0.0, 0.5), (0.05, 0.25)]).unwrap(),
        )),
        weighting(),
        UtilityFunction::cara(2.0).unwrap(),
        quadrature(),
    )
    .unwrap()
}
