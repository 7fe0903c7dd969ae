use enerinvest::ablation::*;
use enerinvest::par::Execution;

fn table(name: &str) -> Vec<AblationRecord> {
    parse_ablation_csv(&std::fs::read_to_string(enerinvest::fixture_dir().join(name)).unwrap()).unwrap()
}

fn study() -> AblationStudy {
    AblationStudy::load(&enerinvest::fixture_dir().join("ablation_study.toml")).unwrap().0
}

fn record(label: &str, co2: f64, effectiveness: f64) -> AblationRecord {
    AblationRecord { label: label.into(), npv: 1.0, irr: 5.0, co2_reduction: co2, effectiveness }
}

#[test]
fn table6_npv_reductions() {
    let report = run_ablation_fixture(&table("table6.csv"), None).unwrap();
    assert_eq!(report.full.label, "Full Framework");
    for (label, expected) in
        [("w/o Carbon Pricing", 31.3), ("w/o Green Finance", 24.3), ("w/o Technology Support", 28.2)]
    {
        let got = report.reduction(label).unwrap().npv;
        assert!((got - expected).abs() <= 0.1, "{label}: {got}");
    }
    assert_eq!(report.ranking.first().unwrap().0, "Carbon Pricing Only");
}

#[test]
fn reductions_are_positive_exactly_below_full() {
    for name in ["table6.csv", "table7.csv"] {
        let rows = table(name);
        let report = run_ablation_fixture(&rows, None).unwrap();
        let full = &report.full;
        for (row, red) in rows.iter().filter(|r| r.label != full.label).zip(&report.reductions) {
            assert_eq!(row.label, red.label);
            for (v, f, r) in [
                (row.npv, full.npv, red.npv),
                (row.irr, full.irr, red.irr),
                (row.co2_reduction, full.co2_reduction, red.co2_reduction),
                (row.effectiveness, full.effectiveness, red.effectiveness),
            ] {
                assert_eq!(r > 0.0, v < f);
                assert_eq!(r == 0.0, v == f);
            }
        }
    }
}

#[test]
fn fixture_edge_cases() {
    let only_full = vec![record("Full Framework", 40.0, 90.0)];
    let report = run_ablation_fixture(&only_full, None).unwrap();
    assert!(report.reductions.is_empty() && report.ranking.is_empty());

    let mut rows = table("table6.csv");
    rows.retain(|r| r.label != "Full Framework");
    assert!(matches!(run_ablation_fixture(&rows, None), Err(AblationError::Domain(_))));
    assert!(run_ablation_fixture(&rows, Some("Combined Policy-Tech")).is_ok());

    let zero = vec![record("full", 0.0, 90.0), record("other", 10.0, 50.0)];
    assert!(matches!(run_ablation_fixture(&zero, None), Err(AblationError::Normalization { metric: "co2_reduction" })));
}

#[test]
fn table7_synergy() {
    let rows = table("table7.csv");
    let full = rows.iter().find(|r| r.label == "Integrated Policy Mix").unwrap();
    let singles: Vec<AblationRecord> = rows.iter().filter(|r| r.label == "Carbon Pricing Only").cloned().collect();
    let c = complementarity(full, &singles, None).unwrap();
    assert!((c.synergy - 47.3).abs() <= 0.1, "{}", c.synergy);
    assert_eq!(c.superadditive, None);

    let with_full = vec![singles[0].clone(), full.clone()];
    assert_eq!(complementarity(full, &with_full, None).unwrap().synergy, 0.0);

    let pair = vec![record("a", 5.0, 10.0), record("b", 8.0, 20.0)];
    let top = record("all", 20.0, 20.0);
    let base = record("none", 1.0, 0.0);
    let c = complementarity(&top, &pair, Some(&base)).unwrap();
    assert_eq!((c.synergy, c.best_single.as_str(), c.superadditive), (0.0, "b", Some(true)));
    assert!(matches!(complementarity(&top, &[], None), Err(AblationError::Domain(_))));
}

#[test]
fn fixtures_round_trip() {
    for name in ["table6.csv", "table7.csv"] {
        let text = std::fs::read_to_string(enerinvest::fixture_dir().join(name)).unwrap();
        let rows = parse_ablation_csv(&text).unwrap();
        let again = ablation_csv(&rows);
        assert_eq!(ablation_csv(&parse_ablation_csv(&again).unwrap()), again);
    }
}

#[test]
fn adding_a_component_never_lowers_co2_reduction() {
    let study = study();
    let subsets = all_subsets();
    let records = run_ablation_model(Execution::default(), &study, &subsets).unwrap();
    for (mask, rec) in records.iter().enumerate() {
        for bit in 0..Component::ALL.len() {
            if mask & (1 << bit) == 0 {
                let bigger = &records[mask | (1 << bit)];
                assert!(
                    bigger.co2_reduction >= rec.co2_reduction,
                    "{} ({}) vs {} ({})",
                    bigger.label,
                    bigger.co2_reduction,
                    rec.label,
                    rec.co2_reduction
                );
            }
        }
    }
    let sequential = run_ablation_model(Execution::Sequential, &study, &subsets).unwrap();
    assert_eq!(records, sequential);
}

#[test]
fn full_dominates_no_policy() {
    let study = study();
    let full = evaluate_configuration(&AblationConfiguration::full(), &study).unwrap();
    let none = evaluate_configuration(&AblationConfiguration::none(), &study).unwrap();
    assert!(full.npv > none.npv && full.irr > none.irr && full.co2_reduction > none.co2_reduction);
    assert_eq!((full.effectiveness, none.effectiveness), (100.0, 0.0));
}

#[test]
fn full_beats_carbon_pricing_alone_by_forty_points() {
    let study = study();
    let full = evaluate_configuration(&AblationConfiguration::full(), &study).unwrap();
    let carbon = evaluate_configuration(&AblationConfiguration::only(Component::CarbonPricing), &study).unwrap();
    assert!(full.effectiveness - carbon.effectiveness > 40.0, "{} vs {}", full.effectiveness, carbon.effectiveness);
}

#[test]
fn disabling_an_inert_component_changes_nothing() {
    let mut study = study();
    study.effects.grid_integration = ComponentEffect::default();
    let full = evaluate_configuration(&AblationConfiguration::full(), &study).unwrap();
    let without = evaluate_configuration(&AblationConfiguration::without(Component::GridIntegration), &study).unwrap();
    assert_eq!(
        (full.npv, full.irr, full.co2_reduction, full.effectiveness),
        (without.npv, without.irr, without.co2_reduction, without.effectiveness)
    );
}

#[test]
fn duplicate_labels_are_rejected() {
    let configs = vec![AblationConfiguration::full(), AblationConfiguration::full()];
    assert!(matches!(run_ablation_model(Execution::Sequential, &study(), &configs), Err(AblationError::Invalid(_))));
}
