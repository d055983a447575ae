use std::path::Path;
use std::process::Command;

use ringwalk::cli::{main_with_args, parse_args, RunConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ringwalk"))
}

fn data_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(str::to_string)
        .collect()
}

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("ringwalk").chain(args.iter().copied()))
}

#[test]
fn spectrum_has_one_row_per_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    assert_eq!(run(&["spectrum", "--n", "100", "--m", "3", "--out", out.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# ringwalk\n"));
    assert!(text.contains("\nn,theta,E,class_id\n"));
    assert_eq!(data_rows(&out).len(), 100);
}

#[test]
fn limiting_return_value_exceeds_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chi.csv");
    let args = ["limiting", "--n", "100", "--m", "12", "--source", "0", "--out", out.to_str().unwrap()];
    assert_eq!(run(&args), 0);
    let rows = data_rows(&out);
    let chi0: f64 = rows[0].strip_prefix("0,").unwrap().parse().unwrap();
    assert!(chi0 > 0.07);
}

#[test]
fn asymmetry_scan_flags_29_connectivities() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let args = ["asymmetry", "--n", "100", "--m-range", "1:49", "--out", out.to_str().unwrap()];
    assert_eq!(run(&args), 0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 49);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",true")).count(), 29);
}

#[test]
fn one_based_labels_shift_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chi.csv");
    let args = ["limiting", "--n", "4", "--m", "1", "--source", "1", "--one-based", "--out", out.to_str().unwrap()];
    assert_eq!(run(&args), 0);
    assert_eq!(data_rows(&out), ["1,0.375", "2,0.125", "3,0.375", "4,0.125"]);
    assert_eq!(run(&["limiting", "--n", "4", "--m", "1", "--source", "0", "--one-based"]), 2);
}

#[test]
fn exit_codes() {
    let status = |args: &[&str]| bin().args(args).output().unwrap();
    let usage = status(&["nonsense"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(!usage.stderr.is_empty());
    assert_eq!(status(&["spectrum", "--n", "10"]).status.code(), Some(2));
    assert_eq!(status(&["spectrum", "--n", "10", "--m", "7"]).status.code(), Some(2));
    assert_eq!(status(&["asymmetry", "--n", "75", "--m", "3"]).status.code(), Some(2));
    let numeric = status(&["infinite", "--m", "1", "--offset", "5", "--quad-max-subdiv", "64"]);
    assert_eq!(numeric.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&numeric.stderr).contains("quadrature"));
    assert_eq!(status(&["spectrum", "--n", "5", "--m", "2"]).status.code(), Some(0));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let args = ["snapshot", "--n", "12", "--m", "2", "--kind", "classical", "--t-max", "4", "--t-count", "9"];
        let mut args: Vec<&str> = args.to_vec();
        args.extend(["--out", out.to_str().unwrap()]);
        assert_eq!(run(&args), 0);
    }
    let strip = |p: &Path| {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# out ="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(!std::fs::read_to_string(&a).unwrap().contains('\r'));
    assert_eq!(data_rows(&a).len(), 9 * 12);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("e.csv");
    std::fs::write(
        &cfg,
        format!(
            "# evolution on a small ring\ncommand = evolve\nn = 4\nm = 1\ntarget = 2\nkind = classical\nt_max = 1\nt_count = 3\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "--kind", "quantum"]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# kind = quantum\n"));
    let last: f64 = data_rows(&out)[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((last - 1f64.sin().powi(4)).abs() < 1e-12);
}

#[test]
fn configs_round_trip_through_serialization() {
    let cases: [&[&str]; 4] = [
        &["ringwalk", "spectrum", "--n", "100", "--m", "3"],
        &["ringwalk", "infinite", "--n", "inf", "--m", "2", "--offset", "-7", "--t-min", "0.5", "--t-max", "12.25", "--quad-tol", "1e-11"],
        &["ringwalk", "scaling", "--m", "2", "--sizes", "20:200:4", "--cluster-band", "0.03", "--format", "json"],
        &["ringwalk", "transport", "--kind", "classical", "--m-range", "1,3", "--distances", "5:30", "--window", "0.1:2.5", "--one-based"],
    ];
    for args in cases {
        let config = parse_args(args.iter().copied()).unwrap();
        let text = config.serialize();
        assert_eq!(RunConfig::parse(&text).unwrap(), config, "{text}");
    }
}

#[test]
fn json_mirrors_csv_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chi.json");
    assert_eq!(run(&["limiting", "--n", "5", "--m", "1", "--format", "json", "--out", out.to_str().unwrap()]), 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 5);
    assert!((records[0]["chi"].as_f64().unwrap() - 9.0 / 25.0).abs() < 1e-15);
    assert_eq!(doc["config"]["command"], "limiting");
}

#[test]
fn figure_recipes_write_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(run(&["fig4", "--out", d]), 0);
    for kind in ["classical", "quantum"] {
        for (m, dist) in [(1, 10), (2, 20), (3, 30)] {
            let path = dir.path().join(format!("fig4_{kind}_m{m}_d{dist}.csv"));
            assert!(path.exists(), "{}", path.display());
        }
    }
    assert_eq!(run(&["fig6", "--out", d]), 0);
    let chi12 = data_rows(&dir.path().join("fig6_chi_m12.csv"));
    assert_eq!(chi12.len(), 100);
    assert_eq!(run(&["fig8", "--out", d, "--sizes", "20:60:4"]), 0);
    let asym = data_rows(&dir.path().join("fig8_asymmetry_n100.csv"));
    assert_eq!(asym.iter().filter(|r| r.ends_with(",true")).count(), 29);
}

#[test]
fn verify_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let args = ["verify", "--n", "10", "--t-max", "5", "--t-count", "11", "--out", out.to_str().unwrap()];
    assert_eq!(run(&args), 0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 2 * 4);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}
