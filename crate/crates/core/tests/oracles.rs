//! Deterministic checks against independently computed values.

use heavytail_cs::catoni::{bound_point, failure_budget, BoundScan};
use heavytail_cs::dubins_savage::{ds_a, ds_tail_bound, ds_width, ds_width_profile, ds_width_without_offset};
use heavytail_cs::harness::distributions::student_t_abs_moment;
use heavytail_cs::quadrature::{integrate, QuadOptions};
use heavytail_cs::{CatoniConfig, CatoniState, DistributionSpec, DsConfig, DsState, LambdaSchedule, PrefixSums, Sign};
use statrs::function::beta::beta;
use statrs::function::gamma::gamma;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Plain Kahan summation, kept separate from the crate's own summation.
fn kahan(values: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

#[test]
fn prefix_sums_after_a_million_steps_match_batch() {
    let n = 1_000_000u64;
    for p in [1.5, 2.0] {
        let s = LambdaSchedule::power_law(1.0, p).unwrap();
        let mut ps = PrefixSums::new(p).unwrap();
        for _ in 0..n {
            ps.extend(&s).unwrap();
        }
        // smallest terms first
        let lambdas: Vec<f64> = (1..=n).rev().map(|t| (t as f64).powf(-1.0 / p)).collect();
        let s1 = kahan(lambdas.iter().copied());
        let sp = kahan(lambdas.iter().map(|l| l.powf(p)));
        assert!((ps.sum_lambda() - s1).abs() <= 1e-12 * s1, "p = {p}");
        assert!((ps.sum_lambda_p() - sp).abs() <= 1e-12 * sp, "p = {p}");
    }
}

#[test]
fn power_law_sums_grow_harmonically() {
    let n = 1_000_000u64;
    for (c, p) in [(1.0, 2.0), (2.0, 1.5), (0.5, 1.1)] {
        let ps = PrefixSums::from_schedule(&LambdaSchedule::power_law(c, p).unwrap(), p, n).unwrap();
        let ln_n = (n as f64).ln();
        let target = c.powf(p);
        // the raw ratio to log n still carries the γ / log n offset at this n
        let raw = ps.sum_lambda_p() / ln_n;
        assert!(((raw - target) / target - EULER_GAMMA / ln_n).abs() < 1e-3);
        let corrected = ps.sum_lambda_p() / (ln_n + EULER_GAMMA);
        assert!((corrected / target - 1.0).abs() < 0.02);
    }
}

#[test]
fn width_bound_formula_at_ten_thousand() {
    let cfg = CatoniConfig::new(2.0, 1.0, 0.05).unwrap();
    let n = 10_000u64;
    let s1: f64 = kahan((1..=n).map(|i| (i as f64).powf(-0.5)));
    let s2: f64 = kahan((1..=n).map(|i| 1.0 / i as f64));
    // t = 1/2: Σλ²(1 + 1/t) = 3 H_n
    let expected = 4.0 * 1.1 * (0.5 * 3.0 * s2 + (2.0f64 / 0.05).ln()) / s1;
    let point = bound_point(&cfg, n).unwrap();
    assert!(point.condition_holds);
    assert!((point.width_bound.unwrap() - expected).abs() < 1e-12 * expected);
}

#[test]
fn bound_rate_is_log_over_power() {
    for p in [1.5, 2.0] {
        let cfg = CatoniConfig::new(p, 1.0, 0.05).unwrap();
        let mut ratios = Vec::new();
        for point in BoundScan::new(&cfg).take(1_000_000) {
            let point = point.unwrap();
            let n = point.n as f64;
            if point.n >= 1000 && point.n.is_power_of_two() || point.n == 1_000_000 {
                let log_term = (2.0f64 / 0.05).ln();
                let b = 4.0 * 1.1 * (cfg.c_p() * point.sum_weighted + log_term) / point.sum_lambda;
                ratios.push(b / (n.ln() * n.powf(-(p - 1.0) / p)));
            }
        }
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(lo > 0.0 && hi / lo < 3.0, "p = {p}: {lo} .. {hi}");
    }
}

#[test]
fn condition_stays_true_once_reached() {
    let cfg = CatoniConfig::new(2.0, 1.0, 0.05).unwrap();
    let mut first = None;
    for point in BoundScan::new(&cfg).take(1_000_000) {
        let point = point.unwrap();
        match (point.condition_holds, first) {
            (true, None) => first = Some(point.n),
            (false, Some(n0)) => panic!("condition true at {n0} but false at {}", point.n),
            _ => {}
        }
    }
    assert!(first.is_some());
}

#[test]
fn failure_budget_is_finite_for_power_law() {
    let cfg = CatoniConfig::new(2.0, 1.0, 0.05).unwrap();
    let budget = failure_budget(&cfg, 2_000_000).unwrap();
    let total = budget.total.unwrap();
    assert!(total.is_finite() && total > budget.partial_sum);
    // κ = C v c^p (1 + 1/t) = 1.5: the n-th term is α e^{-1.5 H_n}
    let first: f64 = 0.05 * (-1.5f64).exp();
    assert!(budget.partial_sum > first);
}

#[test]
fn ds_examples() {
    let cfg = DsConfig::new(2.0, 1.0, 0.05, 1.0).unwrap();
    assert!((ds_a(&cfg) - 39.0).abs() < 1e-12);
    assert!((ds_tail_bound(39.0, 1.0, 2.0).unwrap() - 0.025).abs() < 1e-15);
    assert_eq!(ds_tail_bound(0.0, 1.0, 1.5).unwrap(), 1.0);
    let s = LambdaSchedule::ds_optimal(2.0, 39.0, 1.0, 1.0).unwrap();
    assert!((s.lambda_at(1).unwrap() - 39f64.sqrt()).abs() < 1e-14);

    let mut unit = DsState::with_schedule(&cfg, LambdaSchedule::custom(vec![1.0]).unwrap());
    unit.update(0.0).unwrap();
    let ci = unit.interval(&cfg).unwrap();
    assert!((ci.lower + 40.0).abs() < 1e-12 && (ci.upper - 40.0).abs() < 1e-12);

    // optimal schedule: λ₁ = √39, radius (39 + 39) / √39
    assert!((ds_width(&cfg, 1).unwrap() - 4.0 * 39f64.sqrt()).abs() < 1e-12);
    assert!(ds_width_without_offset(&cfg, 1).unwrap() < ds_width(&cfg, 1).unwrap());

    let tight = DsConfig::new(2.0, 1.0, 0.01, 1.0).unwrap();
    let loose = DsConfig::new(2.0, 1.0, 0.1, 1.0).unwrap();
    assert!((ds_a(&tight) / ds_a(&loose) - 199.0 / 19.0).abs() < 1e-12);
}

#[test]
fn ds_width_alpha_scaling() {
    for p in [1.5, 2.0] {
        let widths: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&a| ds_width(&DsConfig::new(p, 1.0, a, 1.0).unwrap(), 100_000).unwrap())
            .collect();
        let target = 10f64.powf(1.0 / p);
        for w in widths.windows(2) {
            assert!((w[1] / w[0] / target - 1.0).abs() < 0.10, "p = {p}");
        }
    }
}

#[test]
fn ds_to_catoni_ratio_grows_as_alpha_shrinks() {
    let n = 100_000;
    let ratios: Vec<f64> = [0.1, 0.01, 0.001]
        .iter()
        .map(|&a| {
            let ds = ds_width(&DsConfig::new(2.0, 1.0, a, 1.0).unwrap(), n).unwrap();
            let cat = bound_point(&CatoniConfig::new(2.0, 1.0, a).unwrap(), n).unwrap().width_bound.unwrap();
            ds / cat
        })
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
}

#[test]
fn single_observation_supermartingale() {
    let cfg = CatoniConfig::new(1.5, 2.0, 0.05).unwrap();
    let mut s = CatoniState::new(&cfg);
    let empty = s.supermartingale(&cfg, Sign::Plus, 0.3, 0.3, false).unwrap();
    assert_eq!(empty.value, 1.0);
    s.update(&cfg, 1.7).unwrap();
    let m = s.supermartingale(&cfg, Sign::Plus, 0.3, 0.3, false).unwrap();
    let phi = cfg.influence().eval(1.4);
    assert!((m.value - (phi - cfg.c_p() * 2.0).exp()).abs() < 1e-14);
    let huge = {
        let mut h = CatoniState::new(&cfg);
        for _ in 0..10_000 {
            h.update(&cfg, 1e6).unwrap();
        }
        h.supermartingale(&cfg, Sign::Plus, 0.0, 0.0, false).unwrap()
    };
    assert!(huge.overflowed && huge.value.is_infinite() && huge.log_value.is_finite());
}

#[test]
fn gaussian_and_two_point_moments() {
    let g = DistributionSpec::gaussian(3.0, 2.0).unwrap();
    assert!((g.true_vp(2.0).unwrap() - 4.0).abs() < 1e-12);
    // E|Z| = sqrt(2/π)
    assert!((g.true_vp(1.0 + 1e-12).unwrap() / 2.0 - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-9);
    let tp = DistributionSpec::two_point([-1.0, 1.0], [0.5, 0.5]).unwrap();
    for p in [1.1, 1.5, 2.0] {
        assert!((tp.true_vp(p).unwrap() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn student_t_closed_form_matches_quadrature() {
    for (df, p) in [(1.8, 1.5), (3.0, 2.0), (2.5, 1.2)] {
        let norm = gamma((df + 1.0) / 2.0) / ((df * std::f64::consts::PI).sqrt() * gamma(df / 2.0));
        let density = |x: f64| 2.0 * norm * (1.0 + x * x / df).powf(-(df + 1.0) / 2.0);
        let head = integrate(|x| x.powf(p) * density(x), 0.0, 1.0, QuadOptions::default()).unwrap();
        // on [1, ∞) put x = u^{-1/(df-p)}, which flattens the algebraic tail
        let k = 1.0 / (df - p);
        let tail = integrate(
            |u| {
                let x = u.powf(-k);
                x.powf(p) * density(x) * k * u.powf(-k - 1.0)
            },
            0.0,
            1.0,
            QuadOptions::default(),
        )
        .unwrap();
        let q = heavytail_cs::quadrature::Quadrature {
            value: head.value + tail.value,
            error: head.error + tail.error,
            segments: head.segments + tail.segments,
        };
        let closed = student_t_abs_moment(df, p);
        assert!((closed - q.value).abs() < 1e-8 * closed, "df = {df}, p = {p}: {closed} vs {} ± {}", q.value, q.error);
    }
    // ν = 3, p = 2: variance ν/(ν-2) = 3
    assert!((student_t_abs_moment(3.0, 2.0) - 3.0).abs() < 1e-12);
}

/// Upper half in closed form via a Beta function, lower half by Simpson's rule.
fn pareto_moment_oracle(shape: f64, scale: f64, p: f64) -> f64 {
    let mu = shape * scale / (shape - 1.0);
    let front = shape * scale.powf(shape) * mu.powf(p - shape);
    let upper = beta(shape - p, p + 1.0);
    let (a, b) = (scale / mu, 1.0);
    let k = 200_000;
    let h = (b - a) / k as f64;
    let g = |u: f64| (1.0 - u).powf(p) * u.powf(-shape - 1.0);
    let mut acc = g(a) + g(b);
    for i in 1..k {
        acc += g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    front * (upper + acc * h / 3.0)
}

#[test]
fn pareto_moment_matches_beta_oracle_and_monte_carlo() {
    let d = DistributionSpec::centered_pareto(1.9, 1.0).unwrap();
    let v = d.true_vp(1.5).unwrap();
    let oracle = pareto_moment_oracle(1.9, 1.0, 1.5);
    assert!((v - oracle).abs() < 1e-8 * oracle, "{v} vs {oracle}");
    assert!((DistributionSpec::centered_pareto(2.5, 3.0).unwrap().true_vp(2.0).unwrap()
        - pareto_moment_oracle(2.5, 3.0, 2.0))
    .abs()
        < 1e-7);

    // |X - μ|^{1.5} has infinite variance here, so the standard error below
    // is itself noisy; the seed is fixed.
    let xs = d.sample_stream(2024, 10_000_000).unwrap();
    let vals: Vec<f64> = xs.iter().map(|x| x.abs().powf(1.5)).collect();
    let n = vals.len() as f64;
    let mean = kahan(vals.iter().copied()) / n;
    let sd = (kahan(vals.iter().map(|y| (y - mean).powi(2))) / (n - 1.0)).sqrt();
    assert!((mean - v).abs() <= 3.0 * sd / n.sqrt(), "MC {mean} vs {v}");
}

#[test]
fn sample_stream_basics() {
    let tp = DistributionSpec::two_point([-1.0, 1.0], [0.5, 0.5]).unwrap();
    assert!(tp.sample_stream(1, 1000).unwrap().iter().all(|&x| x == -1.0 || x == 1.0));
    let g = DistributionSpec::gaussian(0.0, 1.0).unwrap();
    let xs = g.sample_stream(77, 1_000_000).unwrap();
    assert!((kahan(xs.iter().copied()) / 1e6).abs() < 4.0 / 1000.0);
    assert_eq!(xs, g.sample_stream(77, 1_000_000).unwrap());
    assert_ne!(xs[..10], g.sample_stream(78, 10).unwrap()[..]);
}

/// Target: log-log slope of the certified width over n in [1e3, 1e6] equals
/// −(p−1)/p within 0.05. The oracle is an OLS fit on 61 log-spaced points of
/// the exact profile.
#[test]
fn ds_width_log_log_slope() {
    const TOL: f64 = 0.05;
    let mut report = Vec::new();
    for p in [2.0, 1.5] {
        let cfg = DsConfig::new(p, 1.0, 0.05, 1.0).unwrap();
        let profile = ds_width_profile(&cfg, 1_000_000).unwrap();
        let pts: Vec<(f64, f64)> = (0..=60)
            .map(|k| {
                let n = 10f64.powf(3.0 + k as f64 / 20.0).round() as usize;
                ((n as f64).ln(), profile[n - 1].ln())
            })
            .collect();
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (mx / pts.len() as f64, my / pts.len() as f64);
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        let slope = sxy / sxx;
        report.push((p, slope, -(p - 1.0) / p));
    }
    let ok = report.iter().all(|&(_, slope, target)| (slope - target).abs() <= TOL);
    assert!(ok, "(p, slope, target) = {report:?}, tolerance {TOL}");
}
