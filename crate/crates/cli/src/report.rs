//! Report structures shared by the table and JSON output paths.

use fuzzyfolio::{IndicatorSnapshot, SweepReport};
use serde::Serialize;

/// Format with 10 significant digits for the human-readable table.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..10).contains(&exp) {
        return format!("{x:.9e}");
    }
    let prec = (9 - exp).max(0) as usize;
    format!("{x:.prec$}")
}

#[derive(Debug, Clone, Serialize)]
pub struct IndicatorsOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzzy_return_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzzy_return_variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_return_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_return_second_moment: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub background_fuzzy_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub background_random_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub background_covariance: Option<f64>,
}

impl From<IndicatorSnapshot> for IndicatorsOut {
    fn from(s: IndicatorSnapshot) -> Self {
        Self {
            fuzzy_return_mean: s.fuzzy_return_mean,
            fuzzy_return_variance: s.fuzzy_return_variance,
            random_return_mean: s.random_return_mean,
            random_return_second_moment: s.random_return_second_moment,
            background_fuzzy_mean: s.background_fuzzy_mean,
            background_random_mean: s.background_random_mean,
            background_covariance: s.background_covariance,
        }
    }
}

impl IndicatorsOut {
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        let mut rows = Vec::new();
        let mut push = |name, v: Option<f64>| {
            if let Some(v) = v {
                rows.push((name, v));
            }
        };
        push("E(f,A)", self.fuzzy_return_mean);
        push("Var(f,A)", self.fuzzy_return_variance);
        push("M(X)", self.random_return_mean);
        push("M[(X-r)^2]", self.random_return_second_moment);
        push("E(f,B)", self.background_fuzzy_mean);
        push("M(Y)", self.background_random_mean);
        push("Cov(f,A,B)", self.background_covariance);
        rows
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderingOut {
    /// Predicted: allocation with background ≤ allocation without it.
    pub background_leq: bool,
    pub condition_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOut {
    pub model: String,
    pub alpha_exact: Option<f64>,
    pub alpha_approx: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective_at_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivative_at_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<(f64, f64)>,
    pub degenerate: bool,
    pub indicators: IndicatorsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub background_adjustment: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<OrderingOut>,
    pub notes: Vec<String>,
}

impl SolveOut {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let mut row = |name: &str, value: String| {
            out.push_str(&format!("{name:<28} {value}\n"));
        };
        row("model", self.model.clone());
        match self.alpha_exact {
            Some(a) => row("alpha_exact", sig10(a)),
            None => row("alpha_exact", "n/a".into()),
        }
        row("alpha_approx", sig10(self.alpha_approx));
        if let Some(g) = self.gap {
            row("gap", sig10(g));
        }
        if let Some(v) = self.objective_at_exact {
            row("objective_at_exact", sig10(v));
        }
        if let Some(v) = self.derivative_at_exact {
            row("derivative_at_exact", sig10(v));
        }
        if let Some(v) = self.iterations {
            row("iterations", v.to_string());
        }
        if let Some((lo, hi)) = self.bracket {
            row("bracket", format!("[{}, {}]", sig10(lo), sig10(hi)));
        }
        row("degenerate", self.degenerate.to_string());
        for (name, v) in self.indicators.rows() {
            row(name, sig10(v));
        }
        if let Some(v) = self.background_adjustment {
            row("background_adjustment", sig10(v));
        }
        if let Some(o) = &self.ordering {
            row("ordering: background_leq", o.background_leq.to_string());
            row("ordering: condition_value", sig10(o.condition_value));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndicatorsReport {
    pub model: String,
    pub indicators: IndicatorsOut,
    pub weighting_integral: f64,
    pub notes: Vec<String>,
}

impl IndicatorsReport {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<28} {}\n", "model", self.model));
        for (name, v) in self.indicators.rows() {
            out.push_str(&format!("{name:<28} {}\n", sig10(v)));
        }
        out.push_str(&format!(
            "{:<28} {}\n",
            "weighting_integral",
            sig10(self.weighting_integral)
        ));
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub model: String,
    pub alpha_exact: Option<f64>,
    pub alpha_approx: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub background_adjustment: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_value: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub notes: Vec<String>,
}

impl CompareReport {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<6} {:>22} {:>22} {:>22} {:>22}\n",
            "model", "alpha_exact", "alpha_approx", "bg_adjustment", "condition_value"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<6} {:>22} {:>22} {:>22} {:>22}\n",
                r.model,
                r.alpha_exact.map(sig10).unwrap_or_else(|| "n/a".into()),
                sig10(r.alpha_approx),
                r.background_adjustment
                    .map(sig10)
                    .unwrap_or_else(|| "-".into()),
                r.condition_value.map(sig10).unwrap_or_else(|| "-".into()),
            ));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WealthSweepRowOut {
    pub w: f64,
    pub alpha_exact: f64,
    pub alpha_approx: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleSweepRowOut {
    pub scale: f64,
    pub alpha_exact: Option<f64>,
    pub alpha_approx: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_gap: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOut {
    Wealth {
        rows: Vec<WealthSweepRowOut>,
        dara: bool,
        monotonicity_violations: Vec<usize>,
    },
    RiskScale {
        rows: Vec<ScaleSweepRowOut>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReportOut {
    pub model: String,
    pub sweep: SweepOut,
    pub notes: Vec<String>,
}

impl SweepReportOut {
    pub fn from_wealth(model: String, r: &SweepReport, notes: Vec<String>) -> Self {
        Self {
            model,
            sweep: SweepOut::Wealth {
                rows: r
                    .rows
                    .iter()
                    .map(|row| WealthSweepRowOut {
                        w: row.w,
                        alpha_exact: row.alpha_exact,
                        alpha_approx: row.alpha_approx,
                    })
                    .collect(),
                dara: r.dara,
                monotonicity_violations: r.monotonicity_violations.clone(),
            },
            notes,
        }
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("model: {}\n", self.model));
        match &self.sweep {
            SweepOut::Wealth {
                rows,
                dara,
                monotonicity_violations,
            } => {
                out.push_str(&format!(
                    "{:>22} {:>22} {:>22}\n",
                    "w", "alpha_exact", "alpha_approx"
                ));
                for r in rows {
                    out.push_str(&format!(
                        "{:>22} {:>22} {:>22}\n",
                        sig10(r.w),
                        sig10(r.alpha_exact),
                        sig10(r.alpha_approx)
                    ));
                }
                out.push_str(&format!("dara: {dara}\n"));
                out.push_str(&format!(
                    "monotonicity_violations: {monotonicity_violations:?}\n"
                ));
            }
            SweepOut::RiskScale { rows } => {
                out.push_str(&format!(
                    "{:>22} {:>22} {:>22} {:>22}\n",
                    "scale", "alpha_exact", "alpha_approx", "relative_gap"
                ));
                for r in rows {
                    out.push_str(&format!(
                        "{:>22} {:>22} {:>22} {:>22}\n",
                        sig10(r.scale),
                        r.alpha_exact.map(sig10).unwrap_or_else(|| "n/a".into()),
                        sig10(r.alpha_approx),
                        r.relative_gap.map(sig10).unwrap_or_else(|| "-".into()),
                    ));
                }
            }
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}
