//! Seeded randomized property suite behind the `selftest` subcommand.

use fuzzyfolio::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct SelftestOutcome {
    pub passed: usize,
    pub failed: usize,
}

fn random_fuzzy(rng: &mut ChaCha8Rng) -> FuzzyNumber {
    let c = rng.gen_range(-2.0..2.0);
    let lw = rng.gen_range(0.0..1.0);
    let rw = rng.gen_range(0.0..1.0);
    if rng.gen_bool(0.5) {
        FuzzyNumber::triangular(c, lw, rw).unwrap()
    } else {
        let half = rng.gen_range(0.0..0.5);
        FuzzyNumber::trapezoidal(c - half, c + half, lw, rw).unwrap()
    }
}

fn shift_to_mean(
    a: &FuzzyNumber,
    target: f64,
    f: &WeightingFunction,
    q: &QuadratureConfig,
) -> FuzzyNumber {
    let e = expected_value(f, a, q).unwrap();
    linear_combination(&[(1.0, a.clone()), (1.0, FuzzyNumber::point(target - e))]).unwrap()
}

fn check(name: &str, ok: bool, detail: String, outcome: &mut SelftestOutcome) {
    if ok {
        outcome.passed += 1;
        println!("selftest {name}: PASS — {detail}");
    } else {
        outcome.failed += 1;
        println!("selftest {name}: FAIL — {detail}");
    }
}

pub fn run(seed: u64) -> SelftestOutcome {
    let mut outcome = SelftestOutcome {
        passed: 0,
        failed: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = WeightingFunction::power(1.0).unwrap();
    let q = QuadratureConfig::default();

    // closed-form indicators under f(γ) = 2γ
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (c, l, r) = (
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
        );
        let tri = FuzzyNumber::triangular(c, l, r).unwrap();
        let e = expected_value(&f, &tri, &q).unwrap();
        worst = worst.max((e - (c + (r - l) / 6.0)).abs());
        let sym = FuzzyNumber::triangular(c, l, l).unwrap();
        worst = worst.max((variance(&f, &sym, &q).unwrap() - l * l / 6.0).abs());
    }
    check(
        "closed-forms",
        worst <= 1e-9,
        format!("worst gap {worst:.3e} (tol 1e-9)"),
        &mut outcome,
    );

    // product-moment identities
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_fuzzy(&mut rng);
        let b = random_fuzzy(&mut rng);
        let ea = expected_value(&f, &a, &q).unwrap();
        let eb = expected_value(&f, &b, &q).unwrap();
        let prod = MultiUtility::new(2, |x| x[0] * x[1]);
        let lhs = possibilistic_eu(&f, &prod, &[a.clone(), b.clone()], &q).unwrap();
        let rhs = covariance(&f, &a, &b, &q).unwrap() + ea * eb;
        worst = worst.max((lhs - rhs).abs());
    }
    check(
        "product-moments",
        worst <= 1e-10,
        format!("worst gap {worst:.3e} (tol 1e-10)"),
        &mut outcome,
    );

    // degenerate-background collapse chain
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let r = rng.gen_range(0.0..0.04);
        let market = MarketSpec::from_initial_wealth(1.0, r).unwrap();
        let a0 = random_fuzzy(&mut rng);
        let a = shift_to_mean(&a0, r + rng.gen_range(-0.02..0.02), &f, &q);
        let u = UtilityFunction::cara(rng.gen_range(0.5..3.0)).unwrap();
        let m1 = ModelSpec::new(
            ModelTag::M1,
            market,
            Risk::Fuzzy(a.clone()),
            None,
            f.clone(),
            u.clone(),
            q,
        )
        .unwrap();
        let m2 = ModelSpec::new(
            ModelTag::M2,
            market,
            Risk::Fuzzy(a),
            Some(Risk::Fuzzy(FuzzyNumber::point(0.0))),
            f.clone(),
            u,
            q,
        )
        .unwrap();
        let s1 = solve_exact(&m1).unwrap();
        let s2 = solve_exact(&m2).unwrap();
        worst = worst
            .max((s1.alpha_exact - s2.alpha_exact).abs())
            .max((s1.alpha_approx - s2.alpha_approx).abs());
    }
    check(
        "collapse-chain",
        worst <= 1e-10,
        format!("worst gap {worst:.3e} (tol 1e-10)"),
        &mut outcome,
    );

    // quadratic-utility exactness across all four models
    let mut worst = 0.0f64;
    for tag in [ModelTag::M1, ModelTag::M2, ModelTag::M3, ModelTag::M4] {
        for _ in 0..10 {
            let m = quadratic_scenario(&mut rng, tag);
            let sol = solve_exact(&m).unwrap();
            let budget = 1e-7 * (1.0 + sol.alpha_exact.abs());
            worst = worst.max((sol.alpha_exact - sol.alpha_approx).abs() / budget);
        }
    }
    check(
        "quadratic-exactness",
        worst <= 1.0,
        format!("worst gap at {:.1}% of the 1e-7·(1+|α|) budget", 100.0 * worst),
        &mut outcome,
    );

    outcome
}

fn quadratic_scenario(rng: &mut ChaCha8Rng, tag: ModelTag) -> ModelSpec {
    let f = WeightingFunction::power(1.0).unwrap();
    let q = QuadratureConfig::default();
    let b = rng.gen_range(0.02..0.08);
    let u = UtilityFunction::quadratic(b).unwrap();
    let r = rng.gen_range(0.0..0.04);
    let market = MarketSpec::from_initial_wealth(1.0, r).unwrap();
    let w = market.w;
    let risk_tol = -u.deriv(w).unwrap() / u.second_deriv(w).unwrap();
    let alpha_target = rng.gen_range(-1.5..1.5);

    let investment = if tag == ModelTag::M4 {
        let spread = rng.gen_range(0.05..0.2);
        let x0 = DiscreteRandomVariable::new(vec![(r - spread, 0.5), (r + spread, 0.5)]).unwrap();
        let var = x0.expectation(|v| (v - x0.mean()) * (v - x0.mean()));
        let mut excess = alpha_target * var / risk_tol;
        for _ in 0..3 {
            excess = alpha_target * (var + excess * excess) / risk_tol;
        }
        let d = r + excess - x0.mean();
        Risk::Random(
            DiscreteRandomVariable::new(x0.atoms().iter().map(|&(v, p)| (v + d, p)).collect())
                .unwrap(),
        )
    } else {
        let a0 = FuzzyNumber::triangular(
            0.0,
            rng.gen_range(0.05..0.3),
            rng.gen_range(0.05..0.3),
        )
        .unwrap();
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
        ModelTag::M3 => Some(Risk::Random(
            DiscreteRandomVariable::new(vec![
                (rng.gen_range(-0.08..0.0), 0.5),
                (rng.gen_range(0.0..0.08), 0.5),
            ])
            .unwrap(),
        )),
    };
    ModelSpec::new(tag, market, investment, background, f, u, q).unwrap()
}
