#![allow(dead_code)]

use fuzzyfolio::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn f2g() -> WeightingFunction {
    WeightingFunction::power(1.0).unwrap()
}

pub fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

pub fn random_weighting(rng: &mut ChaCha8Rng) -> WeightingFunction {
    match rng.gen_range(0..5) {
        0 => WeightingFunction::Uniform,
        n => WeightingFunction::power((n - 1) as f64).unwrap(),
    }
}

/// Random triangular or trapezoidal shape with centers in `center ± 2` and
/// widths drawn from `width_range`.
pub fn random_fuzzy(rng: &mut ChaCha8Rng, center: f64, width_range: (f64, f64)) -> FuzzyNumber {
    let (w_lo, w_hi) = width_range;
    let c = center + rng.gen_range(-2.0..2.0);
    let lw = rng.gen_range(w_lo..w_hi);
    let rw = rng.gen_range(w_lo..w_hi);
    if rng.gen_bool(0.5) {
        FuzzyNumber::triangular(c, lw, rw).unwrap()
    } else {
        let half_core = rng.gen_range(0.0..0.5 * (w_hi - w_lo).max(1e-3));
        FuzzyNumber::trapezoidal(c - half_core, c + half_core, lw, rw).unwrap()
    }
}

/// Shift a fuzzy number so its possibilistic mean equals `target` under
/// `(f, q)`; exact for triangular/trapezoidal shapes.
pub fn shift_to_mean(
    a: &FuzzyNumber,
    target: f64,
    f: &WeightingFunction,
    q: &QuadratureConfig,
) -> FuzzyNumber {
    let e = expected_value(f, a, q).unwrap();
    linear_combination(&[(1.0, a.clone()), (1.0, FuzzyNumber::point(target - e))]).unwrap()
}

/// Random discrete variable with `k` atoms, values in `value ± spread`.
pub fn random_discrete(rng: &mut ChaCha8Rng, value: f64, spread: f64) -> DiscreteRandomVariable {
    let k = rng.gen_range(2..=4);
    let mut raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = raw.iter().sum();
    for p in &mut raw {
        *p /= s;
    }
    let head: f64 = raw[..k - 1].iter().sum();
    raw[k - 1] = 1.0 - head;
    let atoms = raw
        .into_iter()
        .map(|p| (value + rng.gen_range(-spread..spread), p))
        .collect();
    DiscreteRandomVariable::new(atoms).unwrap()
}

/// Shift a discrete variable so its mean equals `target`.
pub fn shift_discrete_to_mean(x: &DiscreteRandomVariable, target: f64) -> DiscreteRandomVariable {
    let d = target - x.mean();
    DiscreteRandomVariable::new(x.atoms().iter().map(|&(v, p)| (v + d, p)).collect()).unwrap()
}

/// Random M1 scenario with a CARA utility and an investment support that
/// straddles `r`, so the exact problem has an interior optimum. The mean
/// excess return is `excess_frac` of the smaller support margin.
pub fn straddling_m1(rng: &mut ChaCha8Rng, excess_frac_max: f64) -> ModelSpec {
    let r = rng.gen_range(0.0..0.04);
    let market = MarketSpec::from_initial_wealth(rng.gen_range(0.8..1.5), r).unwrap();
    let f = f2g();
    let q = quad();
    let a0 = random_fuzzy(rng, 0.0, (0.1, 0.4));
    let e0 = expected_value(&f, &a0, &q).unwrap();
    let (lo, hi) = a0.support();
    let margin = (e0 - lo).min(hi - e0);
    let excess = rng.gen_range(-excess_frac_max..excess_frac_max) * margin;
    let a = shift_to_mean(&a0, r + excess, &f, &q);
    ModelSpec::new(
        ModelTag::M1,
        market,
        Risk::Fuzzy(a),
        None,
        f,
        UtilityFunction::cara(rng.gen_range(0.5..3.0)).unwrap(),
        q,
    )
    .unwrap()
}

/// Random scenario with quadratic utility, sized so the optimum and every
/// reachable wealth stay inside the `u' > 0` region. Valid for all four
/// model tags.
pub fn quadratic_scenario(rng: &mut ChaCha8Rng, tag: ModelTag) -> ModelSpec {
    let b = rng.gen_range(0.02..0.08);
    let u = UtilityFunction::quadratic(b).unwrap();
    let r = rng.gen_range(0.0..0.04);
    let market = MarketSpec::from_initial_wealth(1.0, r).unwrap();
    let f = f2g();
    let q = quad();
    let w = market.w;
    let risk_tol = -u.deriv(w).unwrap() / u.second_deriv(w).unwrap();
    let alpha_target = rng.gen_range(-1.5..1.5);

    let investment = if tag == ModelTag::M4 {
        let spread = rng.gen_range(0.05..0.25);
        let x0 = random_discrete(rng, r, spread);
        let var = x0.expectation(|v| (v - x0.mean()) * (v - x0.mean()));
        let mut excess = alpha_target * var / risk_tol;
        for _ in 0..3 {
            excess = alpha_target * (var + excess * excess) / risk_tol;
        }
        Risk::Random(shift_discrete_to_mean(&x0, r + excess))
    } else {
        let a0 = random_fuzzy(rng, 0.0, (0.05, 0.3));
        let var = variance(&f, &a0, &q).unwrap();
        let mut excess = alpha_target * var / risk_tol;
        for _ in 0..3 {
            excess = alpha_target * (var + excess * excess) / risk_tol;
        }
        Risk::Fuzzy(shift_to_mean(&a0, r + excess, &f, &q))
    };

    let background = match tag {
        ModelTag::M1 => None,
        ModelTag::M2 | ModelTag::M4 => Some(Risk::Fuzzy(
            FuzzyNumber::triangular(
                rng.gen_range(-0.04..0.04),
                rng.gen_range(0.0..0.05),
                rng.gen_range(0.0..0.05),
            )
            .unwrap(),
        )),
        ModelTag::M3 => {
            let center = rng.gen_range(-0.04..0.04);
            Some(Risk::Random(random_discrete(rng, center, 0.05)))
        }
    };

    ModelSpec::new(tag, market, investment, background, f, u, q).unwrap()
}
