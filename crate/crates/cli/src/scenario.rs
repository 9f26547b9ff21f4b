//! Scenario file schema and conversion into validated model specs.

use std::path::Path;

use fuzzyfolio::{
    discretize_normal, validate_weighting, DiscreteRandomVariable, Error as CoreError,
    FuzzyNumber, LevelRow, MarketSpec, ModelSpec, ModelTag, QuadRule, QuadratureConfig, Risk,
    UtilityFunction, WeightingFunction,
};
use serde::{Deserialize, Serialize};

/// Command-level failure with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2: the input could not be parsed or validated.
    Validation(String),
    /// Exit code 3: the model is well-formed but the solver or a degenerate
    /// configuration rejected it.
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Solver(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Degenerate(_) | CoreError::Solver(_) | CoreError::NoInteriorOptimum(_) => {
                CliError::Solver(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelName {
    M1,
    M2,
    M3,
    M4,
}

impl ModelName {
    pub fn tag(self) -> ModelTag {
        match self {
            ModelName::M1 => ModelTag::M1,
            ModelName::M2 => ModelTag::M2,
            ModelName::M3 => ModelTag::M3,
            ModelName::M4 => ModelTag::M4,
        }
    }
}

/// Market block; exactly one of `w0` (initial wealth) and `w` (future
/// wealth) must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Market {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelRowLit {
    pub gamma: f64,
    pub lower: f64,
    pub upper: f64,
}

/// A risk component literal: fuzzy (triangular, trapezoidal, point,
/// sampled) or probabilistic (discrete atoms, discretized normal).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RiskLiteral {
    Triangular {
        center: f64,
        left_width: f64,
        right_width: f64,
    },
    Trapezoidal {
        core_left: f64,
        core_right: f64,
        left_width: f64,
        right_width: f64,
    },
    Point(f64),
    Sampled(Vec<LevelRowLit>),
    Discrete(Vec<(f64, f64)>),
    Normal {
        mu: f64,
        sigma: f64,
        #[serde(default = "default_normal_nodes")]
        n: usize,
    },
}

fn default_normal_nodes() -> usize {
    8
}

impl RiskLiteral {
    pub fn is_fuzzy(&self) -> bool {
        matches!(
            self,
            RiskLiteral::Triangular { .. }
                | RiskLiteral::Trapezoidal { .. }
                | RiskLiteral::Point(_)
                | RiskLiteral::Sampled(_)
        )
    }

    pub fn build(&self) -> Result<Risk, CliError> {
        Ok(match self {
            RiskLiteral::Triangular {
                center,
                left_width,
                right_width,
            } => Risk::Fuzzy(FuzzyNumber::triangular(*center, *left_width, *right_width)?),
            RiskLiteral::Trapezoidal {
                core_left,
                core_right,
                left_width,
                right_width,
            } => Risk::Fuzzy(FuzzyNumber::trapezoidal(
                *core_left,
                *core_right,
                *left_width,
                *right_width,
            )?),
            RiskLiteral::Point(v) => Risk::Fuzzy(FuzzyNumber::point(*v)),
            RiskLiteral::Sampled(rows) => Risk::Fuzzy(FuzzyNumber::sampled(
                rows.iter()
                    .map(|r| LevelRow {
                        gamma: r.gamma,
                        lower: r.lower,
                        upper: r.upper,
                    })
                    .collect(),
            )?),
            RiskLiteral::Discrete(atoms) => {
                Risk::Random(DiscreteRandomVariable::new(atoms.clone())?)
            }
            RiskLiteral::Normal { mu, sigma, n } => {
                Risk::Random(discretize_normal(*mu, *sigma, *n)?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Weighting {
    Uniform,
    /// `f(γ) = (n+1)γⁿ`.
    Power(f64),
    /// `f(γ) = slope·γ + intercept`; validated for normality before use.
    Linear { slope: f64, intercept: f64 },
}

impl Default for Weighting {
    fn default() -> Self {
        Weighting::Power(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Utility {
    Cara { lambda: f64 },
    Crra { rho: f64 },
    Log,
    Quadratic { b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleName {
    GaussLegendre,
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Sweep {
    Wealth(Vec<f64>),
    RiskScale(Vec<f64>),
}

/// A complete scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: ModelName,
    pub market: Market,
    pub investment: RiskLiteral,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<RiskLiteral>,
    /// Alternative encoding of the investment risk (other kind), used by
    /// `compare` to instantiate additional models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub investment_alt: Option<RiskLiteral>,
    /// Alternative encoding of the background risk, as above.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background_alt: Option<RiskLiteral>,
    #[serde(default)]
    pub weighting: Weighting,
    pub utility: Utility,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<Quadrature>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

/// Command-line overrides applied on top of scenario defaults.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub nodes: Option<usize>,
    pub tolerance: Option<f64>,
}

impl Scenario {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("scenario parse error: {e}")))
    }

    pub fn market_spec(&self) -> Result<MarketSpec, CliError> {
        match (self.market.w0, self.market.w) {
            (Some(w0), None) => Ok(MarketSpec::from_initial_wealth(w0, self.market.r)?),
            (None, Some(w)) => Ok(MarketSpec::from_future_wealth(w, self.market.r)?),
            (Some(_), Some(_)) => Err(CliError::Validation(
                "market must give exactly one of w0 and w, not both".into(),
            )),
            (None, None) => Err(CliError::Validation(
                "market must give one of w0 (initial wealth) or w (future wealth)".into(),
            )),
        }
    }

    pub fn quadrature_config(&self, ov: &Overrides) -> Result<QuadratureConfig, CliError> {
        let defaults = QuadratureConfig::default();
        let file = self.quadrature.unwrap_or(Quadrature {
            nodes: None,
            rule: None,
            tolerance: None,
        });
        let nodes = ov.nodes.or(file.nodes).unwrap_or(defaults.node_count);
        let rule = match file.rule.unwrap_or(RuleName::GaussLegendre) {
            RuleName::GaussLegendre => QuadRule::GaussLegendre,
            RuleName::Simpson => QuadRule::CompositeSimpson,
        };
        let tolerance = ov
            .tolerance
            .or(file.tolerance)
            .unwrap_or(defaults.tolerance);
        Ok(QuadratureConfig::new(nodes, rule, tolerance)?)
    }

    pub fn weighting_function(&self, q: &QuadratureConfig) -> Result<WeightingFunction, CliError> {
        match &self.weighting {
            Weighting::Uniform => Ok(WeightingFunction::Uniform),
            Weighting::Power(n) => Ok(WeightingFunction::power(*n)?),
            Weighting::Linear { slope, intercept } => {
                let (a, b) = (*slope, *intercept);
                let f = WeightingFunction::custom(move |g| a * g + b);
                let report = validate_weighting(&f, 64, q)?;
                if !report.is_valid() {
                    return Err(CliError::Validation(format!(
                        "weighting f(γ) = {a}·γ + {b} is invalid: non_negative={}, \
                         weakly_monotone={}, integral={} (must be 1)",
                        report.non_negative, report.weakly_monotone, report.integral
                    )));
                }
                Ok(f)
            }
        }
    }

    pub fn utility_function(&self) -> Result<UtilityFunction, CliError> {
        Ok(match self.utility {
            Utility::Cara { lambda } => UtilityFunction::cara(lambda)?,
            Utility::Crra { rho } => UtilityFunction::crra(rho)?,
            Utility::Log => UtilityFunction::log(),
            Utility::Quadratic { b } => UtilityFunction::quadratic(b)?,
        })
    }

    /// Build the scenario's own model.
    pub fn build_model(&self, ov: &Overrides) -> Result<ModelSpec, CliError> {
        let q = self.quadrature_config(ov)?;
        let f = self.weighting_function(&q)?;
        let background = self.background.as_ref().map(|b| b.build()).transpose()?;
        Ok(ModelSpec::new(
            self.model.tag(),
            self.market_spec()?,
            self.investment.build()?,
            background,
            f,
            self.utility_function()?,
            q,
        )?)
    }

    /// Build a specific model tag from whichever risk encodings are
    /// available (primary literals first, `*_alt` as fallback).
    pub fn build_model_for(
        &self,
        tag: ModelTag,
        ov: &Overrides,
    ) -> Result<Option<ModelSpec>, CliError> {
        let pick = |want_fuzzy: bool, a: Option<&RiskLiteral>, b: Option<&RiskLiteral>| {
            a.filter(|l| l.is_fuzzy() == want_fuzzy)
                .or_else(|| b.filter(|l| l.is_fuzzy() == want_fuzzy))
                .cloned()
        };
        let inv_fuzzy = pick(
            true,
            Some(&self.investment),
            self.investment_alt.as_ref(),
        );
        let inv_random = pick(
            false,
            Some(&self.investment),
            self.investment_alt.as_ref(),
        );
        let bg_fuzzy = pick(true, self.background.as_ref(), self.background_alt.as_ref());
        let bg_random = pick(false, self.background.as_ref(), self.background_alt.as_ref());

        let (investment, background) = match tag {
            ModelTag::M1 => (inv_fuzzy, None),
            ModelTag::M2 => match (inv_fuzzy, bg_fuzzy) {
                (Some(i), Some(b)) => (Some(i), Some(b)),
                _ => (None, None),
            },
            ModelTag::M3 => match (inv_fuzzy, bg_random) {
                (Some(i), Some(b)) => (Some(i), Some(b)),
                _ => (None, None),
            },
            ModelTag::M4 => match (inv_random, bg_fuzzy) {
                (Some(i), Some(b)) => (Some(i), Some(b)),
                _ => (None, None),
            },
        };
        let Some(investment) = investment else {
            return Ok(None);
        };
        if tag != ModelTag::M1 && background.is_none() {
            return Ok(None);
        }
        let q = self.quadrature_config(ov)?;
        let f = self.weighting_function(&q)?;
        Ok(Some(ModelSpec::new(
            tag,
            self.market_spec()?,
            investment.build()?,
            background.map(|b| b.build()).transpose()?,
            f,
            self.utility_function()?,
            q,
        )?))
    }
}
