//! Fuzzy numbers as γ-level interval families, linear arithmetic on them,
//! and the f-weighted possibilistic indicators (mean, variance, covariance).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;

/// Weighting function `f: [0,1] → R`, non-negative, weakly increasing,
/// with unit integral.
#[derive(Clone)]
pub enum WeightingFunction {
    /// `f(γ) = (n+1) γ^n`, `n ≥ 0`. `power(1)` is the classical `f(γ) = 2γ`.
    Power(f64),
    /// `f ≡ 1`.
    Uniform,
    /// User-supplied evaluator; validated on use.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for WeightingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(n) => write!(f, "Power({n})"),
            Self::Uniform => write!(f, "Uniform"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl PartialEq for WeightingFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Power(a), Self::Power(b)) => a == b,
            (Self::Uniform, Self::Uniform) => true,
            // custom evaluators are never considered equal
            _ => false,
        }
    }
}

/// Outcome of the normality/monotonicity check on a weighting function.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightingReport {
    pub non_negative: bool,
    pub weakly_monotone: bool,
    pub integral: f64,
    pub normalized: bool,
}

impl WeightingReport {
    pub fn is_valid(&self) -> bool {
        self.non_negative && self.weakly_monotone && self.normalized
    }
}

impl WeightingFunction {
    pub fn power(n: f64) -> Result<Self> {
        if !(n >= 0.0) {
            return Err(Error::InvalidWeighting(format!(
                "power exponent must be non-negative, got {n}"
            )));
        }
        Ok(Self::Power(n))
    }

    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn evaluate(&self, gamma: f64) -> f64 {
        match self {
            Self::Power(n) => (n + 1.0) * gamma.powf(*n),
            Self::Uniform => 1.0,
            Self::Custom(f) => f(gamma),
        }
    }

    /// Built-in families are valid by construction; only custom evaluators
    /// need the grid check before use.
    pub(crate) fn ensure_valid(&self, q: &QuadratureConfig) -> Result<()> {
        if let Self::Custom(_) = self {
            let report = validate_weighting(self, 64, q)?;
            if !report.is_valid() {
                return Err(Error::InvalidWeighting(format!(
                    "custom weighting fails validation: non_negative={}, \
                     weakly_monotone={}, integral={}",
                    report.non_negative, report.weakly_monotone, report.integral
                )));
            }
        }
        Ok(())
    }
}

/// Non-negativity and weak monotonicity on a uniform grid, plus the
/// normality condition `∫₀¹ f = 1` checked by quadrature.
pub fn validate_weighting(
    f: &WeightingFunction,
    grid_size: usize,
    q: &QuadratureConfig,
) -> Result<WeightingReport> {
    if grid_size < 2 {
        return Err(Error::InvalidInput(format!(
            "weighting validation grid must have >= 2 points, got {grid_size}"
        )));
    }
    let mut non_negative = true;
    let mut weakly_monotone = true;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..grid_size {
        let gamma = i as f64 / (grid_size - 1) as f64;
        let v = f.evaluate(gamma);
        if !(v >= 0.0) {
            non_negative = false;
        }
        if v < prev - 1e-12 {
            weakly_monotone = false;
        }
        prev = v;
    }
    let integral = q.integrate(|g| f.evaluate(g));
    Ok(WeightingReport {
        non_negative,
        weakly_monotone,
        integral,
        normalized: (integral - 1.0).abs() <= q.tolerance,
    })
}

/// One grid row of a sampled fuzzy number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRow {
    pub gamma: f64,
    pub lower: f64,
    pub upper: f64,
}

/// A fuzzy number, represented by its nested γ-level intervals
/// `[a₁(γ), a₂(γ)]`.
#[derive(Debug, Clone, PartialEq)]
pub enum FuzzyNumber {
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
    /// Endpoints interpolated piecewise-linearly between rows; the grid
    /// must include γ=0 and γ=1.
    Sampled(Vec<LevelRow>),
}

impl FuzzyNumber {
    pub fn triangular(center: f64, left_width: f64, right_width: f64) -> Result<Self> {
        if !(left_width >= 0.0) || !(right_width >= 0.0) {
            return Err(Error::InvalidFuzzyNumber(format!(
                "triangular widths must be non-negative, got ({left_width}, {right_width})"
            )));
        }
        if !center.is_finite() {
            return Err(Error::InvalidFuzzyNumber("center must be finite".into()));
        }
        Ok(Self::Triangular {
            center,
            left_width,
            right_width,
        })
    }

    pub fn trapezoidal(
        core_left: f64,
        core_right: f64,
        left_width: f64,
        right_width: f64,
    ) -> Result<Self> {
        if core_left > core_right {
            return Err(Error::InvalidFuzzyNumber(format!(
                "trapezoidal core must satisfy core_left <= core_right, got [{core_left}, {core_right}]"
            )));
        }
        if !(left_width >= 0.0) || !(right_width >= 0.0) {
            return Err(Error::InvalidFuzzyNumber(format!(
                "trapezoidal widths must be non-negative, got ({left_width}, {right_width})"
            )));
        }
        // a core with no interior collapses to a triangular number
        if core_left == core_right {
            return Self::triangular(core_left, left_width, right_width);
        }
        Ok(Self::Trapezoidal {
            core_left,
            core_right,
            left_width,
            right_width,
        })
    }

    pub fn point(value: f64) -> Self {
        Self::Point(value)
    }

    pub fn sampled(mut rows: Vec<LevelRow>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidFuzzyNumber(
                "sampled fuzzy number needs at least 2 rows".into(),
            ));
        }
        rows.sort_by(|a, b| a.gamma.partial_cmp(&b.gamma).unwrap());
        if rows.first().unwrap().gamma != 0.0 || rows.last().unwrap().gamma != 1.0 {
            return Err(Error::InvalidFuzzyNumber(
                "sampled grid must include gamma=0 and gamma=1".into(),
            ));
        }
        for w in rows.windows(2) {
            if w[0].gamma == w[1].gamma {
                return Err(Error::InvalidFuzzyNumber(format!(
                    "duplicate gamma {} in sampled grid",
                    w[0].gamma
                )));
            }
            // nestedness between consecutive rows
            if w[1].lower < w[0].lower - 1e-12 || w[1].upper > w[0].upper + 1e-12 {
                return Err(Error::InvalidFuzzyNumber(format!(
                    "level sets not nested between gamma {} and {}",
                    w[0].gamma, w[1].gamma
                )));
            }
        }
        for r in &rows {
            if r.lower > r.upper {
                return Err(Error::InvalidFuzzyNumber(format!(
                    "lower endpoint exceeds upper at gamma {}",
                    r.gamma
                )));
            }
            if !r.lower.is_finite() || !r.upper.is_finite() {
                return Err(Error::InvalidFuzzyNumber("endpoints must be finite".into()));
            }
        }
        Ok(Self::Sampled(rows))
    }

    /// Lower endpoint `a₁(γ)`. Assumes `γ ∈ [0, 1]`.
    pub fn lower(&self, gamma: f64) -> f64 {
        match self {
            Self::Triangular {
                center, left_width, ..
            } => center - left_width * (1.0 - gamma),
            Self::Trapezoidal {
                core_left,
                left_width,
                ..
            } => core_left - left_width * (1.0 - gamma),
            Self::Point(c) => *c,
            Self::Sampled(rows) => interp(rows, gamma, |r| r.lower),
        }
    }

    /// Upper endpoint `a₂(γ)`. Assumes `γ ∈ [0, 1]`.
    pub fn upper(&self, gamma: f64) -> f64 {
        match self {
            Self::Triangular {
                center, right_width, ..
            } => center + right_width * (1.0 - gamma),
            Self::Trapezoidal {
                core_right,
                right_width,
                ..
            } => core_right + right_width * (1.0 - gamma),
            Self::Point(c) => *c,
            Self::Sampled(rows) => interp(rows, gamma, |r| r.upper),
        }
    }

    /// The γ-level set `[a₁(γ), a₂(γ)]`.
    pub fn level_set(&self, gamma: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::GammaOutOfRange(gamma));
        }
        Ok((self.lower(gamma), self.upper(gamma)))
    }

    /// The support `[a₁(0), a₂(0)]`.
    pub fn support(&self) -> (f64, f64) {
        (self.lower(0.0), self.upper(0.0))
    }

    pub fn is_point(&self) -> bool {
        let (lo, hi) = self.support();
        lo == hi
    }
}

fn interp(rows: &[LevelRow], gamma: f64, pick: impl Fn(&LevelRow) -> f64) -> f64 {
    let idx = rows.partition_point(|r| r.gamma < gamma);
    if idx == 0 {
        return pick(&rows[0]);
    }
    if idx >= rows.len() {
        return pick(&rows[rows.len() - 1]);
    }
    let (lo, hi) = (&rows[idx - 1], &rows[idx]);
    if hi.gamma == gamma {
        return pick(hi);
    }
    let t = (gamma - lo.gamma) / (hi.gamma - lo.gamma);
    pick(lo) + t * (pick(hi) - pick(lo))
}

/// Endpoint form used for closed-form linear arithmetic: every built-in
/// shape is a trapezoid, possibly with an empty core or zero widths.
#[derive(Clone, Copy)]
struct Trapezoid {
    core_left: f64,
    core_right: f64,
    left_width: f64,
    right_width: f64,
}

impl Trapezoid {
    fn of(a: &FuzzyNumber) -> Option<Self> {
        match *a {
            FuzzyNumber::Triangular {
                center,
                left_width,
                right_width,
            } => Some(Self {
                core_left: center,
                core_right: center,
                left_width,
                right_width,
            }),
            FuzzyNumber::Trapezoidal {
                core_left,
                core_right,
                left_width,
                right_width,
            } => Some(Self {
                core_left,
                core_right,
                left_width,
                right_width,
            }),
            FuzzyNumber::Point(c) => Some(Self {
                core_left: c,
                core_right: c,
                left_width: 0.0,
                right_width: 0.0,
            }),
            FuzzyNumber::Sampled(_) => None,
        }
    }

    fn scale(self, lambda: f64) -> Self {
        if lambda >= 0.0 {
            Self {
                core_left: lambda * self.core_left,
                core_right: lambda * self.core_right,
                left_width: lambda * self.left_width,
                right_width: lambda * self.right_width,
            }
        } else {
            // negative scaling reflects: endpoints swap
            Self {
                core_left: lambda * self.core_right,
                core_right: lambda * self.core_left,
                left_width: -lambda * self.right_width,
                right_width: -lambda * self.left_width,
            }
        }
    }

    fn add(self, other: Self) -> Self {
        Self {
            core_left: self.core_left + other.core_left,
            core_right: self.core_right + other.core_right,
            left_width: self.left_width + other.left_width,
            right_width: self.right_width + other.right_width,
        }
    }

    fn into_fuzzy(self) -> Result<FuzzyNumber> {
        if self.left_width == 0.0 && self.right_width == 0.0 && self.core_left == self.core_right {
            return Ok(FuzzyNumber::Point(self.core_left));
        }
        FuzzyNumber::trapezoidal(
            self.core_left,
            self.core_right,
            self.left_width,
            self.right_width,
        )
    }
}

/// `Σ λᵢ Aᵢ` with the level-set endpoint rules: sums add matching endpoints,
/// non-negative scalars scale in place, negative scalars scale and swap.
pub fn linear_combination(terms: &[(f64, FuzzyNumber)]) -> Result<FuzzyNumber> {
    if terms.is_empty() {
        return Err(Error::InvalidInput(
            "linear combination needs at least one term".into(),
        ));
    }
    let closed_form: Option<Vec<Trapezoid>> = terms
        .iter()
        .map(|(lambda, a)| Trapezoid::of(a).map(|t| t.scale(*lambda)))
        .collect();
    if let Some(parts) = closed_form {
        let mut acc = parts[0];
        for p in &parts[1..] {
            acc = acc.add(*p);
        }
        return acc.into_fuzzy();
    }

    // at least one sampled operand: evaluate on the union of all grids
    let mut gammas: Vec<f64> = vec![0.0, 1.0];
    for (_, a) in terms {
        if let FuzzyNumber::Sampled(rows) = a {
            gammas.extend(rows.iter().map(|r| r.gamma));
        }
    }
    gammas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    gammas.dedup();

    let rows: Vec<LevelRow> = gammas
        .into_iter()
        .map(|gamma| {
            let mut lower = 0.0;
            let mut upper = 0.0;
            for (lambda, a) in terms {
                let (lo, hi) = (a.lower(gamma), a.upper(gamma));
                if *lambda >= 0.0 {
                    lower += lambda * lo;
                    upper += lambda * hi;
                } else {
                    lower += lambda * hi;
                    upper += lambda * lo;
                }
            }
            LevelRow {
                gamma,
                lower,
                upper,
            }
        })
        .collect();
    if rows
        .iter()
        .all(|r| r.lower == rows[0].lower && r.upper == rows[0].upper && r.lower == r.upper)
    {
        return Ok(FuzzyNumber::Point(rows[0].lower));
    }
    FuzzyNumber::sampled(rows)
}

/// `E(f, A) = ½ ∫₀¹ (a₁(γ)+a₂(γ)) f(γ) dγ`.
pub fn expected_value(f: &WeightingFunction, a: &FuzzyNumber, q: &QuadratureConfig) -> Result<f64> {
    f.ensure_valid(q)?;
    Ok(q.integrate(|g| 0.5 * (a.lower(g) + a.upper(g)) * f.evaluate(g)))
}

/// `Var(f, A) = ½ ∫₀¹ [(a₁(γ)−E)² + (a₂(γ)−E)²] f(γ) dγ`.
pub fn variance(f: &WeightingFunction, a: &FuzzyNumber, q: &QuadratureConfig) -> Result<f64> {
    if a.is_point() {
        f.ensure_valid(q)?;
        return Ok(0.0);
    }
    let e = expected_value(f, a, q)?;
    Ok(q.integrate(|g| {
        let d1 = a.lower(g) - e;
        let d2 = a.upper(g) - e;
        0.5 * (d1 * d1 + d2 * d2) * f.evaluate(g)
    }))
}

/// `Cov(f, A, B) = ½ ∫₀¹ [(a₁−E_A)(b₁−E_B) + (a₂−E_A)(b₂−E_B)] f dγ`.
pub fn covariance(
    f: &WeightingFunction,
    a: &FuzzyNumber,
    b: &FuzzyNumber,
    q: &QuadratureConfig,
) -> Result<f64> {
    let ea = expected_value(f, a, q)?;
    let eb = expected_value(f, b, q)?;
    Ok(q.integrate(|g| {
        let p1 = (a.lower(g) - ea) * (b.lower(g) - eb);
        let p2 = (a.upper(g) - ea) * (b.upper(g) - eb);
        0.5 * (p1 + p2) * f.evaluate(g)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn f2g() -> WeightingFunction {
        WeightingFunction::power(1.0).unwrap()
    }

    #[test]
    fn level_set_endpoints() {
        let a = FuzzyNumber::triangular(1.0, 0.6, 0.6).unwrap();
        assert_eq!(a.level_set(0.0).unwrap(), (0.4, 1.6));
        let p = FuzzyNumber::point(3.0);
        assert_eq!(p.level_set(0.3).unwrap(), (3.0, 3.0));
        let a = FuzzyNumber::triangular(0.08, 0.03, 0.03).unwrap();
        let (lo, hi) = a.level_set(0.5).unwrap();
        assert_abs_diff_eq!(lo, 0.065, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 0.095, epsilon = 1e-15);
    }

    #[test]
    fn level_set_rejects_gamma_outside_unit_interval() {
        let a = FuzzyNumber::triangular(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            a.level_set(1.5),
            Err(Error::GammaOutOfRange(_))
        ));
        assert!(a.level_set(-0.01).is_err());
    }

    #[test]
    fn linear_combination_closed_forms() {
        let a = FuzzyNumber::triangular(1.0, 0.2, 0.2).unwrap();
        let b = FuzzyNumber::triangular(2.0, 0.3, 0.3).unwrap();
        let s = linear_combination(&[(1.0, a.clone()), (1.0, b)]).unwrap();
        assert_eq!(s, FuzzyNumber::triangular(3.0, 0.5, 0.5).unwrap());

        let c = FuzzyNumber::triangular(1.0, 0.2, 0.4).unwrap();
        let neg = linear_combination(&[(-1.0, c)]).unwrap();
        assert_eq!(neg, FuzzyNumber::triangular(-1.0, 0.4, 0.2).unwrap());

        let zero = linear_combination(&[(0.0, a)]).unwrap();
        assert_eq!(zero, FuzzyNumber::Point(0.0));
    }

    #[test]
    fn linear_combination_with_sampled_operand() {
        let rows = vec![
            LevelRow { gamma: 0.0, lower: -1.0, upper: 1.0 },
            LevelRow { gamma: 1.0, lower: 0.0, upper: 0.0 },
        ];
        let s = FuzzyNumber::sampled(rows).unwrap();
        let t = FuzzyNumber::triangular(0.0, 1.0, 1.0).unwrap();
        let sum = linear_combination(&[(1.0, s), (1.0, t)]).unwrap();
        let (lo, hi) = sum.level_set(0.5).unwrap();
        assert_abs_diff_eq!(lo, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn expected_value_closed_forms() {
        let a = FuzzyNumber::triangular(1.0, 0.6, 0.6).unwrap();
        assert_abs_diff_eq!(expected_value(&f2g(), &a, &q()).unwrap(), 1.0, epsilon = 1e-12);

        // E = center + (right - left)/6 under f(γ)=2γ
        let b = FuzzyNumber::triangular(0.0, 0.0, 6.0).unwrap();
        assert_abs_diff_eq!(expected_value(&f2g(), &b, &q()).unwrap(), 1.0, epsilon = 1e-12);

        let p = FuzzyNumber::point(-2.5);
        assert_abs_diff_eq!(
            expected_value(&WeightingFunction::Uniform, &p, &q()).unwrap(),
            -2.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn variance_closed_forms() {
        let p = FuzzyNumber::point(4.0);
        assert_abs_diff_eq!(variance(&f2g(), &p, &q()).unwrap(), 0.0, epsilon = 1e-15);

        // Var = w²/6 for symmetric triangular under f(γ)=2γ
        let a = FuzzyNumber::triangular(1.0, 0.6, 0.6).unwrap();
        assert_abs_diff_eq!(variance(&f2g(), &a, &q()).unwrap(), 0.06, epsilon = 1e-12);

        let b = FuzzyNumber::triangular(0.08, 0.03, 0.03).unwrap();
        assert_abs_diff_eq!(variance(&f2g(), &b, &q()).unwrap(), 0.00015, epsilon = 1e-15);
    }

    #[test]
    fn covariance_closed_forms() {
        let a = FuzzyNumber::triangular(0.0, 1.0, 1.0).unwrap();
        let b = FuzzyNumber::triangular(0.0, 2.0, 2.0).unwrap();
        assert_abs_diff_eq!(
            covariance(&f2g(), &a, &b, &q()).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-12
        );

        // Cov with a fuzzy point vanishes
        let p = FuzzyNumber::point(7.0);
        assert_abs_diff_eq!(covariance(&f2g(), &a, &p, &q()).unwrap(), 0.0, epsilon = 1e-12);

        // Cov(A, A) = Var(A)
        assert_abs_diff_eq!(
            covariance(&f2g(), &a, &a, &q()).unwrap(),
            variance(&f2g(), &a, &q()).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn weighting_validation() {
        let ok = validate_weighting(&f2g(), 64, &q()).unwrap();
        assert!(ok.is_valid());
        let ok = validate_weighting(&WeightingFunction::Uniform, 64, &q()).unwrap();
        assert!(ok.is_valid());

        let bad = WeightingFunction::custom(|g| 3.0 * g);
        let rep = validate_weighting(&bad, 64, &q()).unwrap();
        assert!(!rep.is_valid());
        assert_abs_diff_eq!(rep.integral, 1.5, epsilon = 1e-12);
    }

    #[test]
    fn trapezoidal_core_collapse() {
        let t = FuzzyNumber::trapezoidal(1.0, 1.0, 0.5, 0.5).unwrap();
        assert_eq!(t, FuzzyNumber::triangular(1.0, 0.5, 0.5).unwrap());
    }

    #[test]
    fn sampled_rejects_non_nested_grid() {
        let rows = vec![
            LevelRow { gamma: 0.0, lower: 0.0, upper: 1.0 },
            LevelRow { gamma: 1.0, lower: -1.0, upper: 0.5 },
        ];
        assert!(FuzzyNumber::sampled(rows).is_err());
    }
}
