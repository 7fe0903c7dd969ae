use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_enerinvest"))
}

fn core_fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn cli_fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

/// Pulls `metric,value` rows out of the `# appraisal.csv` block on stdout.
fn appraisal_metrics(out: &str) -> BTreeMap<String, f64> {
    let block = out.split("# appraisal.csv\n").nth(1).expect("appraisal.csv block");
    let block = block.split("\n#").next().unwrap();
    let mut rdr = csv::Reader::from_reader(block.as_bytes());
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].parse().unwrap())
        })
        .collect()
}

#[test]
fn minimal_project_breaks_even_at_ten_percent() {
    let o = run(&["--format", "csv", "appraise", p(&cli_fixture("appraisal_minimal.toml"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = appraisal_metrics(&stdout(&o));
    assert!(m["npv"].abs() < 1e-9);
    assert!((m["irr"] - 0.10).abs() < 1e-6);
}

#[test]
fn total_value_is_npv_plus_option_value() {
    let o = run(&["--format", "csv", "appraise", p(&cli_fixture("appraisal_defer.toml"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = appraisal_metrics(&stdout(&o));
    assert!(m["rov"] > 0.0);
    assert!((m["total_value"] - (m["npv"] + m["rov"])).abs() < 1e-9);
    assert!((m["carbon_adjusted_cost"] - (55.0 + 80.0 * 0.4)).abs() < 1e-9);
}

#[test]
fn missing_field_is_an_input_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "schema_version = 1\n[project]\ninitial_investment = 100.0\ncash_flows = [110.0]\n").unwrap();
    let o = run(&["appraise", p(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("discount_rate"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn unsupported_schema_version_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("v9.toml");
    std::fs::write(&cfg, "schema_version = 9\n[project]\ninitial_investment = 1.0\ncash_flows = [2.0]\ndiscount_rate = 0.1\n")
        .unwrap();
    assert_eq!(run(&["appraise", p(&cfg)]).status.code(), Some(2));
}

#[test]
fn schedule_without_irr_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noirr.toml");
    std::fs::write(
        &cfg,
        "schema_version = 1\n[project]\ninitial_investment = 100.0\ncash_flows = [-10.0, -5.0]\ndiscount_rate = 0.1\n",
    )
    .unwrap();
    let o = run(&["appraise", p(&cfg)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("IRR"));
}

#[test]
fn missing_input_file_exits_two() {
    assert_eq!(run(&["appraise", "/nonexistent/cfg.toml"]).status.code(), Some(2));
    assert_eq!(run(&["regress", "/nonexistent/panel.csv"]).status.code(), Some(2));
}

#[test]
fn help_and_bad_flags() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "xml", "report"]).status.code(), Some(2));
    let panel = core_fixture("panel_fixture.csv");
    assert_eq!(run(&["regress", p(&panel), "--dependent", "nonsense"]).status.code(), Some(2));
}

#[test]
fn reversed_years_exit_two() {
    let o = run(&["simulate", p(&core_fixture("scenarios/bau.toml")), "--start-year", "2030", "--end-year", "2020"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn duplicate_scenario_names_are_rejected() {
    let bau = core_fixture("scenarios/bau.toml");
    assert_eq!(run(&["simulate", p(&bau), p(&bau)]).status.code(), Some(2));
}

#[test]
fn single_scenario_has_no_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "--format",
        "both",
        "--output-dir",
        p(dir.path()),
        "simulate",
        p(&core_fixture("scenarios/bau.toml")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let files = dir_contents(dir.path());
    assert!(files.contains_key("trajectory_bau.csv"));
    assert!(!files.contains_key("comparison.csv"));
    assert!(!stdout(&o).contains("Ranking"));
}

#[test]
fn three_scenarios_rank_by_cumulative_emissions() {
    let dir = tempfile::tempdir().unwrap();
    let scen = |n: &str| core_fixture(&format!("scenarios/{n}.toml"));
    let (a, b, c) = (scen("conservative"), scen("ambitious"), scen("bau"));
    let o = run(&["--format", "csv", "--output-dir", p(dir.path()), "simulate", p(&a), p(&b), p(&c)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ranking = std::fs::read_to_string(dir.path().join("ranking.csv")).unwrap();
    let names: Vec<String> = csv::Reader::from_reader(ranking.as_bytes())
        .records()
        .map(|r| r.unwrap()[1].to_string())
        .collect();
    assert_eq!(names, ["Ambitious", "BAU", "Conservative"]);

    let traj = std::fs::read_to_string(dir.path().join("trajectory_ambitious.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(traj.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let share = headers.iter().position(|h| h == "renewable_share").unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(&rows[0][0], "2025");
    assert_eq!(&rows.last().unwrap()[0], "2050");
    let end: f64 = rows.last().unwrap()[share].parse().unwrap();
    assert!((end - 92.5).abs() / 92.5 < 0.02);
}

#[test]
fn ablation_fixture_reductions() {
    let o = run(&["--format", "csv", "ablate", "--fixture", p(&core_fixture("table6.csv"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let block = out.split("# reductions.csv\n").nth(1).unwrap().split("\n#").next().unwrap();
    let mut rdr = csv::Reader::from_reader(block.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let npv = headers.iter().position(|h| h.contains("npv")).unwrap();
    let got: BTreeMap<String, f64> =
        rdr.records().map(|r| r.unwrap()).map(|r| (r[0].to_string(), r[npv].parse().unwrap())).collect();
    for (label, want) in [("w/o Carbon Pricing", 31.3), ("w/o Green Finance", 24.3), ("w/o Technology Support", 28.2)] {
        assert!((got[label] - want).abs() < 0.05, "{label}: {}", got[label]);
    }
}

#[test]
fn ablation_modes_are_exclusive() {
    let t6 = core_fixture("table6.csv");
    let study = core_fixture("ablation_study.toml");
    assert_eq!(run(&["ablate", "--fixture", p(&t6), "--study", p(&study)]).status.code(), Some(2));
    assert_eq!(run(&["ablate"]).status.code(), Some(2));
}

#[test]
fn ablation_fixture_with_only_the_full_row() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("full.csv");
    let t6 = std::fs::read_to_string(core_fixture("table6.csv")).unwrap();
    let mut lines = t6.lines();
    let body = format!("{}\n{}\n", lines.next().unwrap(), lines.next().unwrap());
    std::fs::write(&t, body).unwrap();
    let o = run(&["ablate", "--fixture", p(&t)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn model_mode_over_all_subsets_reports_monotonicity() {
    let o = run(&["ablate", "--study", p(&core_fixture("ablation_study.toml")), "--subsets", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("holds over all 32 subsets"));
}

#[test]
fn placebo_runs_are_reproducible_from_the_seed() {
    let panel = core_fixture("panel_fixture.csv");
    let args = ["--seed", "7", "--format", "both", "regress", p(&panel), "--placebo", "500"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--seed", "8", "--format", "csv", "regress", p(&panel), "--placebo", "500"]);
    let d = run(&["--seed", "7", "--format", "csv", "regress", p(&panel), "--placebo", "500"]);
    assert_ne!(c.stdout, d.stdout);
}

#[test]
fn every_subcommand_is_byte_identical_across_reruns() {
    let panel = core_fixture("panel_fixture.csv");
    let t6 = core_fixture("table6.csv");
    let cases: Vec<Vec<String>> = vec![
        vec!["appraise".into(), p(&cli_fixture("appraisal_defer.toml")).into()],
        vec!["regress".into(), p(&panel).into(), "--placebo".into(), "100".into(), "--hausman".into()],
        vec![
            "simulate".into(),
            p(&core_fixture("scenarios/ambitious.toml")).into(),
            p(&core_fixture("scenarios/bau.toml")).into(),
        ],
        vec!["sensitivity".into(), p(&core_fixture("npv_model.toml")).into(), p(&core_fixture("perturbations.csv")).into()],
        vec!["ablate".into(), "--fixture".into(), p(&t6).into()],
        vec!["ablate".into(), "--study".into(), p(&core_fixture("ablation_study.toml")).into()],
        vec!["report".into()],
    ];
    for case in cases {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let mut args: Vec<String> =
                vec!["--no-timestamp".into(), "--format".into(), "both".into(), "--output-dir".into(), p(dir.path()).into()];
            args.extend(case.iter().cloned());
            let o = bin().args(&args).output().unwrap();
            assert_eq!(o.status.code(), Some(0), "{case:?}: {}", stderr(&o));
            outputs.push((o.stdout, dir_contents(dir.path())));
        }
        assert_eq!(outputs[0], outputs[1], "{case:?}");
        let manifest = String::from_utf8(outputs[0].1["manifest.toml"].clone()).unwrap();
        assert!(!manifest.contains("timestamp"));
        assert!(manifest.contains(&format!("command = \"{}\"", case[0])));
    }
}

#[test]
fn manifest_records_timestamp_by_default_and_hash_tracks_inputs() {
    let read_manifest = |args: &[&str]| {
        let dir = tempfile::tempdir().unwrap();
        let mut full = vec!["--output-dir", p(dir.path())];
        full.extend_from_slice(args);
        let o = run(&full);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        toml::from_str::<toml::Table>(&std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap()).unwrap()
    };
    let minimal = cli_fixture("appraisal_minimal.toml");
    let defer = cli_fixture("appraisal_defer.toml");
    let a = read_manifest(&["appraise", p(&minimal)]);
    let b = read_manifest(&["appraise", p(&defer)]);
    let c = read_manifest(&["--seed", "9", "appraise", p(&minimal)]);
    assert!(a.contains_key("timestamp"));
    assert_ne!(a["config_hash"], b["config_hash"]);
    assert_ne!(a["config_hash"], c["config_hash"]);
    assert_eq!(a["seed"].as_integer(), Some(42));
    assert_eq!(a["tool_version"].as_str(), Some(env!("CARGO_PKG_VERSION")));
}

#[test]
fn emitted_csvs_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--format", "csv", "--output-dir", p(dir.path()), "report"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for (name, bytes) in dir_contents(dir.path()) {
        if !name.ends_with(".csv") {
            continue;
        }
        let mut rdr = csv::Reader::from_reader(bytes.as_slice());
        let width = rdr.headers().unwrap().len();
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert!(!rows.is_empty(), "{name}");
        assert!(rows.iter().all(|r| r.len() == width), "{name}");
    }
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn noiseless_panel_shows_planted_coefficients() {
    use enerinvest::data::synth::{generate_panel, PanelDgp};
    use rand::SeedableRng;

    let mut dgp = PanelDgp::new(12, 10, [0.8, -0.05, 0.02, 0.1, -3.0]);
    dgp.noise_sd = 0.0;
    let ds = generate_panel(&dgp, &mut rand_chacha::ChaCha8Rng::seed_from_u64(5));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("panel.csv");
    enerinvest::data::write_panel(&ds, std::fs::File::create(&path).unwrap()).unwrap();

    let o = run(&["regress", p(&path), "--dependent", "gdp_growth"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for (name, shown) in [
        ("log(investment)", "0.8000"),
        ("carbon_price", "-0.0500"),
        ("policy_index", "0.0200"),
        ("tech_index", "0.1000"),
        ("energy_intensity", "-3.0000"),
    ] {
        let line = out.lines().find(|l| l.starts_with(name)).unwrap_or_else(|| panic!("{name} row\n{out}"));
        assert!(line.contains(shown), "{line}");
    }
}

#[test]
fn fixture_gdp_column_signs() {
    let o = run(&["--format", "csv", "regress", p(&core_fixture("panel_fixture.csv")), "--dependent", "gdp_growth"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let block = out.split("# regression.csv\n").nth(1).unwrap().split("\n#").next().unwrap();
    let mut rdr = csv::Reader::from_reader(block.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let (term, value) = (
        headers.iter().position(|h| h == "term").unwrap(),
        headers.iter().position(|h| h == "estimate").unwrap(),
    );
    let regressors = ["log(investment)", "carbon_price", "policy_index", "tech_index", "energy_intensity"];
    let signs: Vec<(String, f64)> = rdr
        .records()
        .map(Result::unwrap)
        .filter(|r| regressors.contains(&&r[term]))
        .map(|r| (r[term].to_string(), r[value].parse::<f64>().unwrap().signum()))
        .collect();
    let want = [1.0, 1.0, 1.0, 1.0, -1.0];
    assert_eq!(signs.len(), want.len(), "{signs:?}");
    for ((name, s), w) in signs.iter().zip(want) {
        assert_eq!(*s, w, "{name}");
    }
}

#[test]
fn sensitivity_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let linear = write(d, "linear.toml", "schema_version = 1\n[model]\nkind = \"linear\"\nslope = 3.0\n");
    let square = write(d, "square.toml", "schema_version = 1\n[model]\nkind = \"power\"\ncoefficient = 1.0\nexponent = 2.0\n");
    let zero = write(d, "zero.toml", "schema_version = 1\n[model]\nkind = \"constant\"\nvalue = 0.0\n");
    let dyadic = write(d, "dyadic.csv", "name,baseline,low,high\nx,2,1.5,2.5\n");
    let one_pct = write(d, "one_pct.csv", "name,baseline,low,high\nx,1,0.99,1.01\n");

    let index = |model: &Path, table: &Path| -> f64 {
        let o = run(&["--format", "csv", "sensitivity", p(model), p(table)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let out = stdout(&o);
        let body = out.split("# tornado.csv\n").nth(1).unwrap();
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let col = rdr.headers().unwrap().iter().position(|h| h == "index").unwrap();
        rdr.records().next().unwrap().unwrap()[col].parse().unwrap()
    };
    assert_eq!(index(&linear, &dyadic), 1.0);
    assert!((index(&square, &one_pct) - 2.0).abs() <= 1e-3);

    let o = run(&["sensitivity", p(&zero), p(&dyadic)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains('x'), "{}", stderr(&o));

    let o = run(&["--format", "csv", "sensitivity", p(&core_fixture("npv_model.toml")), p(&core_fixture("perturbations.csv"))]);
    let out = stdout(&o);
    let order: Vec<String> = csv::Reader::from_reader(out.split("# tornado.csv\n").nth(1).unwrap().as_bytes())
        .records()
        .take(3)
        .map(|r| r.unwrap()[0].to_string())
        .collect();
    assert_eq!(order, ["carbon_price", "discount_rate", "energy_price"]);
}

#[test]
fn emitted_tables_reparse_to_identical_bytes() {
    use enerinvest::ablation::{ablation_csv, parse_ablation_csv};
    use enerinvest::scenario::parse_trajectory_csv;
    use enerinvest::sensitivity::{parse_tornado_csv, tornado_csv};

    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ok = |o: Output| assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    ok(run(&["--format", "csv", "--output-dir", p(d), "simulate", p(&core_fixture("scenarios/ambitious.toml"))]));
    ok(run(&[
        "--format",
        "csv",
        "--output-dir",
        p(d),
        "sensitivity",
        p(&core_fixture("npv_model.toml")),
        p(&core_fixture("perturbations.csv")),
    ]));
    ok(run(&["--format", "csv", "--output-dir", p(d), "ablate", "--fixture", p(&core_fixture("table6.csv"))]));

    let tornado = std::fs::read_to_string(d.join("tornado.csv")).unwrap();
    assert_eq!(tornado_csv(&parse_tornado_csv(&tornado).unwrap()), tornado);
    let ablation = std::fs::read_to_string(d.join("ablation.csv")).unwrap();
    assert_eq!(ablation_csv(&parse_ablation_csv(&ablation).unwrap()), ablation);
    let traj = std::fs::read_to_string(d.join("trajectory_ambitious.csv")).unwrap();
    let points = parse_trajectory_csv(&traj).unwrap();
    assert_eq!((points.first().unwrap().year, points.last().unwrap().year), (2025, 2050));
    let header = traj.lines().next().unwrap();
    let reemitted: String = std::iter::once(format!("{header}\n"))
        .chain(points.iter().map(|q| {
            format!("{},{},{},{},{}\n", q.year, q.renewable_share, q.emissions, q.investment, q.jobs)
        }))
        .collect();
    assert_eq!(reemitted, traj);
}
