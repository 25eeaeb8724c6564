use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn wigmom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wigmom"))
        .args(args)
        .env_remove("WIGMOM_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = wigmom(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    wigmom(args).status.code().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn analyze_examples() {
    let spssv = json_of(&["analyze", "--state", "spssv", "--r", "0.5"]);
    assert_eq!(spssv["verdict"], "NegativityCertified");
    let w3 = spssv["w"]["3"].as_f64().unwrap();
    assert!((w3 - 1.0 / (81.0 * PI.powi(4))).abs() < 1e-6);

    let tmsv = json_of(&["analyze", "--state", "tmsv", "--r", "0.5"]);
    assert_eq!(tmsv["verdict"], "Inconclusive");

    let vac = json_of(&["analyze", "--state", "fock", "--n", "0"]);
    assert!((vac["delta"].as_f64().unwrap() + 0.008443).abs() < 1e-6);
    assert_eq!(vac["w"].as_object().unwrap().len(), 3);

    let four = json_of(&["analyze", "--state", "fock", "--n", "2", "--max-m", "4"]);
    assert!(four["w"]["4"].is_number());
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["analyze", "--state", "fock"]), 2);
    assert_eq!(code(&["analyze", "--state", "cat", "--n", "1"]), 2);
    assert_eq!(code(&["analyze", "--state", "tmsv", "--r", "-1"]), 2);
    assert_eq!(code(&["analyze", "--bogus-flag"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(
        code(&["analyze", "--state", "tmsv", "--r", "0.5", "--cutoff", "3"]),
        3
    );
    assert_eq!(code(&["multicopy", "--state", "tmsv", "--r", "1.2"]), 4);
    assert_eq!(
        code(&[
            "multicopy",
            "--state",
            "fock",
            "--n",
            "1",
            "--cutoff",
            "10",
            "--memory-limit-mb",
            "1"
        ]),
        4
    );
    assert_eq!(
        code(&[
            "dump-operator",
            "parity",
            "--cutoff",
            "4",
            "--alpha-re",
            "3"
        ]),
        3
    );
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn table_golden_values() {
    let t2 = stdout_of(&["table", "table2"]);
    assert!(t2.starts_with("param,w2,w3,delta\n"));
    let rows = csv_rows(&t2);
    let w3 = [0.033774, 0.003753, 0.010424, 0.002723, 0.006548, 0.002222];
    assert_eq!(rows.len(), 6);
    for (row, want) in rows.iter().zip(w3) {
        assert!((num(&row[1]) - 0.159155).abs() < 1e-5);
        assert!((num(&row[2]) - want).abs() < 1e-5, "{row:?}");
        assert_eq!(num(&row[3]) < 0.0, row[0] == "0");
    }

    let t1 = stdout_of(&["table", "table1"]);
    let rows = csv_rows(&t1);
    let w3e4 = [1.26741, 0.140823, -0.488533, 0.592074];
    for (row, want) in rows.iter().zip(w3e4) {
        assert!((num(&row[1]) - 0.025330).abs() < 1e-5);
        assert!((num(&row[2]) - want * 1e-4).abs() < 5e-8, "{row:?}");
    }
    assert!(rows.iter().all(|r| (num(&r[1]) - 0.025330).abs() < 1e-5));

    let json = json_of(&["table", "table2", "--format", "json"]);
    assert_eq!(json.as_array().unwrap().len(), 6);
    assert_eq!(json[0]["verdict"], "Inconclusive");
}

#[test]
fn figure_data() {
    let fig2 = csv_rows(&stdout_of(&["figure", "fig2"]));
    for row in &fig2 {
        let want = if row[0] == "0" {
            "Inconclusive"
        } else {
            "NegativityCertified"
        };
        assert_eq!(row[2], want);
        assert_eq!(num(&row[1]) < 0.0, row[0] == "0");
    }
    let fig1 = csv_rows(&stdout_of(&["figure", "fig1"]));
    assert_eq!(fig1.len(), 5);
    assert!(fig1.iter().all(|r| num(&r[1]) > 0.0));

    let mixed = stdout_of(&["figure", "mixed-sweep", "--step", "0.1"]);
    let rows = csv_rows(&mixed);
    let footer = rows.last().unwrap();
    assert_eq!(footer[1..], ["0".to_string(), "Threshold".to_string()]);
    let star = num(&footer[0]);
    assert!((0.305..=0.315).contains(&star), "{star}");
    let params: Vec<&str> = rows[..rows.len() - 1]
        .iter()
        .map(|r| r[0].as_str())
        .collect();
    assert_eq!(params, ["0", "0.1", "0.2", "0.3", "0.4", "0.5"]);
}

#[test]
fn sweep_round_trips_through_the_csv_reader() {
    let text = stdout_of(&[
        "sweep", "--family", "mixed", "--from", "0.2", "--to", "0.4", "--step", "0.05",
    ]);
    let rows = wigmom::report::parse_sweep_csv(&text).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(wigmom::report::sweep_csv(&rows), text);
    assert_eq!(
        code(&["sweep", "--family", "fock", "--from", "0.5", "--to", "1"]),
        2
    );
    assert_eq!(
        code(&["sweep", "--family", "fock", "--from", "2", "--to", "1"]),
        2
    );
}

#[test]
fn multicopy_examples() {
    let one = json_of(&["multicopy", "--state", "fock", "--n", "1", "--cutoff", "10"]);
    assert!((one["w2_copies"].as_f64().unwrap() - 1.0 / (2.0 * PI)).abs() <= 1e-7);
    assert!((one["w3_copies"].as_f64().unwrap() - 0.003753).abs() <= 1e-4);

    let vac = json_of(&["multicopy", "--state", "vacuum"]);
    assert!((vac["trace_rho3"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((vac["w3_copies"].as_f64().unwrap() - 1.0 / (3.0 * PI * PI)).abs() < 1e-12);

    let noon = json_of(&["multicopy", "--state", "noon", "--n", "1"]);
    assert_eq!(noon["protocol"]["forward_is_cycle"], true);
    assert!((noon["protocol"]["trace_cube"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn operator_dump_and_grid() {
    let swap = stdout_of(&["dump-operator", "swap", "--cutoff", "1"]);
    assert_eq!(
        swap,
        "# side=4 cutoff=1\nrow,col,re,im\n0,0,1,0\n1,2,1,0\n2,1,1,0\n3,3,1,0\n"
    );
    let o2 = stdout_of(&["dump-operator", "o2", "--cutoff", "2"]);
    let first = o2.lines().nth(2).unwrap();
    let f: Vec<&str> = first.split(',').collect();
    assert_eq!((f[0], f[1]), ("0", "0"));
    assert!((num(f[2]) - 1.0 / (2.0 * PI)).abs() < 1e-12);

    let grid = stdout_of(&[
        "grid",
        "--state",
        "fock",
        "--n",
        "1",
        "--points",
        "3",
        "--half-width",
        "1",
    ]);
    let rows = csv_rows(&grid);
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[4][..2], ["0".to_string(), "0".to_string()]);
    assert!((num(&rows[4][2]) + 1.0 / PI).abs() < 1e-15);
    assert_eq!(code(&["grid", "--state", "tmsv", "--r", "0.3"]), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--family", "noon", "--from", "1", "--to", "3"];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    assert_eq!(a, b);
    let single = Command::new(env!("CARGO_BIN_EXE_wigmom"))
        .args(args)
        .env("WIGMOM_THREADS", "1")
        .output()
        .unwrap();
    assert!(single.status.success());
    assert_eq!(String::from_utf8(single.stdout).unwrap(), a);
    let bad = Command::new(env!("CARGO_BIN_EXE_wigmom"))
        .args(args)
        .env("WIGMOM_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# fock state\nstate = fock\nn = 3\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = json_of(&["analyze", "--config", cfg]);
    assert_eq!(from_file["state"], "fock(n=3)");
    let overridden = json_of(&["analyze", "--config", cfg, "--n", "0"]);
    assert_eq!(overridden["state"], "fock(n=0)");

    let out = dir.path().join("table.csv");
    let table_cfg = dir.path().join("table.conf");
    std::fs::write(&table_cfg, format!("output = {}\n", out.display())).unwrap();
    assert_eq!(
        stdout_of(&["table", "table2", "--config", table_cfg.to_str().unwrap()]),
        ""
    );
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        stdout_of(&["table", "table2"])
    );

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "state = fock\ncolour = blue\n").unwrap();
    assert_eq!(code(&["analyze", "--config", bad.to_str().unwrap()]), 2);
    assert_eq!(code(&["analyze", "--config", "/nonexistent/run.conf"]), 2);
}

#[test]
fn json_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        stdout_of(&["analyze", "--state", "noon", "--n", "2", "-o", p]),
        ""
    );
    let written = std::fs::read_to_string(&path).unwrap();
    let reread = stdout_of(&["inspect", p]);
    assert_eq!(reread, written);
    let a = wigmom::report::report_from_json(&written).unwrap();
    let b = wigmom::report::report_from_json(&reread).unwrap();
    assert_eq!(a, b);
    for m in 1..=3 {
        assert_eq!(a.moment(m).to_bits(), b.moment(m).to_bits());
    }
    std::fs::write(dir.path().join("junk.json"), "{\"state\": 1}").unwrap();
    assert_eq!(
        code(&["inspect", dir.path().join("junk.json").to_str().unwrap()]),
        2
    );
    assert_eq!(code(&["inspect", "/nonexistent/report.json"]), 1);
}

#[test]
fn property_subcommand_finds_no_counterexample() {
    let summary = json_of(&["property", "--seed", "11", "--count", "6"]);
    assert_eq!(summary["certified"], 0);
    assert_eq!(summary["holder_violations"], 0);
    assert_eq!(summary["count"], 6);
    assert_eq!(
        stdout_of(&["property", "--seed", "11", "--count", "6"]),
        stdout_of(&["property", "--seed", "11", "--count", "6"])
    );
}
