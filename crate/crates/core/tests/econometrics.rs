use enerinvest::data::synth::{generate_panel, PanelDgp};
use enerinvest::data::{load_panel, ColumnSchema, PanelDataset, Variable};
use enerinvest::econometrics::*;
use enerinvest::par::{self, Execution};
use enerinvest::stats::ks_uniform;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture() -> PanelDataset {
    let file = std::fs::File::open(enerinvest::fixture_dir().join("panel_fixture.csv")).unwrap();
    load_panel(file, &ColumnSchema::default()).unwrap()
}

/// Dummy-variable regression: regressors, one dummy per country, one per year
/// after the first. Solved by column-pivoted QR on the full dummy design rather
/// than on demeaned data.
fn lsdv(dataset: &PanelDataset, spec: &RegressionSpec) -> Vec<f64> {
    let n = dataset.len();
    let k = spec.regressors.len();
    let (nc, nt) = (dataset.n_countries(), dataset.n_years());
    let cols = k + nc + nt - 1;
    let mut x = DMatrix::<f64>::zeros(n, cols);
    let regressors: Vec<Vec<f64>> = spec.regressors.iter().map(|r| r.values(dataset).unwrap()).collect();
    let countries = dataset.country_ids();
    let years = dataset.year_ids();
    for i in 0..n {
        for (j, r) in regressors.iter().enumerate() {
            x[(i, j)] = r[i];
        }
        x[(i, k + countries[i])] = 1.0;
        if years[i] > 0 {
            x[(i, k + nc + years[i] - 1)] = 1.0;
        }
    }
    let y = DVector::from_vec(spec.dependent.values(dataset).unwrap());
    let qr = x.qr();
    let beta = qr.r().solve_upper_triangular(&(qr.q().transpose() * y)).unwrap();
    beta.iter().take(k).copied().collect()
}

fn random_coefficients(rng: &mut ChaCha8Rng) -> [f64; 5] {
    std::array::from_fn(|_| {
        let magnitude = rng.random_range(0.5..2.0);
        if rng.random_bool(0.5) { magnitude } else { -magnitude }
    })
}

#[test]
fn within_estimator_matches_dummy_variable_regression() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let spec = RegressionSpec::baseline(Term::level(Variable::GdpGrowth));
    for _ in 0..200 {
        let dgp = PanelDgp::new(rng.random_range(5..=15), rng.random_range(5..=14), random_coefficients(&mut rng));
        let ds = generate_panel(&dgp, &mut rng);
        let fe = fit_fe(&ds, &spec).unwrap();
        let oracle = lsdv(&ds, &spec);
        for (a, b) in fe.coefficients.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-8 * b.abs(), "{a} vs {b}");
        }
    }
}

#[test]
fn noiseless_panel_recovers_planted_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut dgp = PanelDgp::new(12, 10, [0.8, -0.05, 0.02, 0.1, -3.0]);
    dgp.noise_sd = 0.0;
    let ds = generate_panel(&dgp, &mut rng);
    let fe = fit_fe(&ds, &RegressionSpec::baseline(Term::level(Variable::GdpGrowth))).unwrap();
    for (b, truth) in fe.coefficients.iter().zip(dgp.coefficients) {
        assert!((b - truth).abs() < 1e-9, "{b} vs {truth}");
    }
}

#[test]
fn cluster_and_classical_share_point_estimates() {
    let ds = fixture();
    let spec = RegressionSpec::baseline(Term::level(Variable::GdpGrowth));
    let a = fit_fe(&ds, &spec).unwrap();
    let b = fit_fe(&ds, &spec.clone().with_se(SeKind::ClusterByCountry)).unwrap();
    assert_eq!(a.coefficients, b.coefficients);
    assert_eq!(b.t_degrees_freedom, ds.n_countries() - 1);
}

#[test]
fn collinear_regressors_are_named() {
    let ds = fixture();
    let dup = ds.with_column(Variable::TechIndex, &ds.column(Variable::PolicyIndex)).unwrap();
    let spec = RegressionSpec::baseline(Term::level(Variable::GdpGrowth));
    match fit_fe(&dup, &spec) {
        Err(EconometricsError::Collinear(names)) => assert!(names.iter().any(|n| n.contains("index")), "{names:?}"),
        other => panic!("expected a collinearity error, got {other:?}"),
    }
}

#[test]
fn fixture_sign_patterns() {
    let ds = fixture();
    let expected = [
        [1.0, 1.0, 1.0, 1.0, -1.0],
        [-1.0, -1.0, -1.0, -1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0, -1.0],
    ];
    for (dep, signs) in RegressionSpec::baseline_outcomes().into_iter().zip(expected) {
        let fit = fit_fe(&ds, &RegressionSpec::baseline(dep)).unwrap();
        for ((b, s), name) in fit.coefficients.iter().zip(signs).zip(&fit.names) {
            assert_eq!(b.signum(), s, "{dep}: {name} = {b}");
        }
        assert!(fit.p_values[0] < 0.01, "{dep}: investment p = {}", fit.p_values[0]);
    }
}

#[test]
fn random_effects_is_consistent_under_its_assumptions() {
    let coefficients = [1.0, 0.0, 0.0, 0.0, 0.0];
    let spec = RegressionSpec::baseline(Term::level(Variable::GdpGrowth)).with_fixed_effects(true, false);
    let estimates = par::replicate(Execution::default(), 200, 31, |_, rng| {
        let mut dgp = PanelDgp::new(15, 14, coefficients);
        dgp.year_effect_sd = 0.0;
        fit_re(&generate_panel(&dgp, rng), &spec).unwrap().coefficients[0]
    });
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    assert!((mean - 1.0).abs() <= 0.02, "mean RE estimate {mean}");
}

#[test]
fn random_effects_rejects_year_effects() {
    let ds = fixture();
    let spec = RegressionSpec::baseline(Term::level(Variable::GdpGrowth));
    assert!(matches!(fit_re(&ds, &spec), Err(EconometricsError::InvalidSpec(_))));
}

#[test]
fn hausman_separates_designs() {
    let spec = RegressionSpec::new(Term::level(Variable::GdpGrowth), vec![Term::log(Variable::Investment)]).unwrap();
    let run = |dgp: PanelDgp, seed: u64| {
        par::replicate(Execution::default(), 500, seed, |_, rng| {
            hausman(&generate_panel(&dgp, rng), &spec).unwrap().2.p_value < 0.05
        })
        .into_iter()
        .filter(|r| *r)
        .count() as f64
            / 500.0
    };
    let size = run(PanelDgp::random_effects_design(), 41);
    assert!((size - 0.05).abs() <= 0.03, "size {size}");
    let power = run(PanelDgp::correlated_effects_design(), 43);
    assert!(power > 0.90, "power {power}");
}

#[test]
fn placebo_is_reproducible_and_uniform_under_the_null() {
    let spec = RegressionSpec::baseline(Term::level(Variable::GdpGrowth));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ds = generate_panel(&PanelDgp::new(10, 10, [0.0, 0.02, 0.01, 0.05, -2.0]), &mut rng);
    let a = placebo_test_with(Execution::Sequential, &ds, &spec, 150, 7).unwrap();
    let b = placebo_test_with(Execution::default(), &ds, &spec, 150, 7).unwrap();
    assert_eq!(a, b);
    assert!(placebo_test(&ds, &spec, 99, 7).is_err());

    let p_values = par::replicate(Execution::default(), 200, 19, |_, rng| {
        let ds = generate_panel(&PanelDgp::new(10, 8, [0.0, 0.02, 0.01, 0.05, -2.0]), rng);
        let seed = rng.random();
        placebo_test_with(Execution::Sequential, &ds, &spec, 100, seed).unwrap().p_value
    });
    let ks = ks_uniform(&p_values);
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn semi_elasticity_examples() {
    let close = |a: f64, b: f64| (a - b).abs() <= 5e-4;
    assert!(close(semi_elasticity(0.285, RelativeChange::Fraction(0.10)).unwrap(), 0.027));
    assert!(close(semi_elasticity(0.285, RelativeChange::Doubling).unwrap(), 0.198));
    assert!(close(semi_elasticity(0.358, RelativeChange::Fraction(0.10)).unwrap(), 0.034));
    assert!(semi_elasticity(0.3, RelativeChange::Fraction(-1.0)).is_err());
}

#[test]
fn regression_tables_round_trip_shape() {
    let ds = fixture();
    let fits: Vec<_> = RegressionSpec::baseline_outcomes()
        .into_iter()
        .map(|d| (d.to_string(), fit_fe(&ds, &RegressionSpec::baseline(d)).unwrap()))
        .collect();
    let cols: Vec<(&str, &RegressionResult)> = fits.iter().map(|(n, r)| (n.as_str(), r)).collect();
    let text = regression_table_text(&cols);
    assert!(text.contains("log(investment)") && text.contains("Standard errors in parentheses"));
    let csv = regression_table_csv(&cols);
    assert_eq!(csv.lines().count(), 1 + 3 * (5 + 3));
}
