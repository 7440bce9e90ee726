use std::process::{Command, Output};

fn scalespace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scalespace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn csv_rows(o: &Output) -> Vec<Vec<f64>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|c| c.parse().expect("numeric cell"))
                .collect()
        })
        .collect()
}

const SUBCOMMANDS: &[&str] = &[
    "derham-eval",
    "derham-velocity",
    "dn-profile",
    "rn-iterate",
    "fracvar",
    "velocity",
    "scale-velocity",
    "equivalence",
    "set-of-change",
    "holder",
    "rl-integral",
    "caputo",
    "rl-derivative",
    "inversion",
    "theorem-check",
    "limit-check",
    "mc-derham",
    "scale-sequence",
    "acceptance",
];

#[test]
fn derham_eval_example() {
    let o = scalespace(&[
        "derham-eval",
        "--a",
        "0.25",
        "--grid",
        "256",
        "--depth",
        "24",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("x,value\n"));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 257);
    let half = rows.iter().find(|r| r[0] == 0.5).expect("row at 1/2");
    assert!((half[1] - 0.25).abs() <= 1e-10);
}

#[test]
fn derham_velocity_example() {
    let o = scalespace(&[
        "derham-velocity",
        "--a",
        "0.25",
        "--depth",
        "4",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 15);
    for r in rows {
        let s = r[1] as i32;
        assert_eq!(r[2], 3f64.powi(s - 1));
        assert!([1.0, 3.0, 9.0, 27.0].contains(&r[2]));
    }
}

#[test]
fn theorem_check_example() {
    let o = scalespace(&[
        "theorem-check",
        "--f",
        "poly:1,0",
        "--a0",
        "0",
        "--x",
        "0.5",
        "--alpha",
        "0.3",
        "--beta",
        "0.6",
        "--eps",
        "0.05",
        "--nodes",
        "2048",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    assert_eq!(v["subcommand"], "theorem-check");
    let residual = v["results"][0]["residual"].as_f64().unwrap();
    assert!(residual < 1e-3, "residual {residual}");
}

#[test]
fn every_help_lists_flags_with_defaults() {
    let top = scalespace(&["--help"]);
    assert!(top.status.success());
    let text = stdout(&top);
    for sub in SUBCOMMANDS {
        assert!(text.contains(sub), "top-level help misses {sub}");
        let o = scalespace(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub} --help");
        let h = stdout(&o);
        for flag in ["--format", "--output", "--seed"] {
            assert!(h.contains(flag), "{sub} help misses {flag}");
        }
        assert!(
            h.contains("[default: csv]") && h.contains("[default: 0]"),
            "{sub} help misses defaults"
        );
    }
    let h = stdout(&scalespace(&["derham-eval", "--help"]));
    assert!(
        h.contains("[default: 256]")
            && h.contains("dimensionless")
            && h.contains("CSV columns: x,value")
    );
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(scalespace(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(scalespace(&[]).status.code(), Some(64));
    assert_eq!(
        scalespace(&["derham-eval", "--a", "quarter"]).status.code(),
        Some(64)
    );
}

#[test]
fn domain_errors_exit_1() {
    let o = scalespace(&["derham-velocity", "--a", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(
        scalespace(&["fracvar", "--f", "bogus:1", "--x", "0", "--beta", "0.5"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn non_convergence_exits_2() {
    let o = scalespace(&["velocity", "--f", "pow:0.5", "--x", "0", "--beta", "0.9"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(csv_rows(&o)[0][1], 0.0);
}

#[test]
fn output_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = scalespace(&[
            "mc-derham",
            "--x",
            "0.3",
            "--a",
            "0.25",
            "--trials",
            "20000",
            "--seed",
            "7",
            "--format",
            "json",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let first = run("a.json");
    assert_eq!(first, run("b.json"));
    let other = {
        let path = dir.path().join("c.json");
        scalespace(&[
            "mc-derham",
            "--x",
            "0.3",
            "--a",
            "0.25",
            "--trials",
            "20000",
            "--seed",
            "8",
            "--format",
            "json",
            "--output",
            path.to_str().unwrap(),
        ]);
        std::fs::read(path).unwrap()
    };
    assert_ne!(first, other);
}

#[test]
fn floats_round_trip_through_csv() {
    let o = scalespace(&[
        "rl-integral",
        "--f",
        "poly:1,0",
        "--beta",
        "0.5",
        "--x",
        "1",
    ]);
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let v: f64 = line.parse().unwrap();
    assert_eq!(format!("{v:.16e}"), line);
    // I^0.5 t at 1 = Γ(2)/Γ(2.5)
    assert!((v - 0.752_252_778_063_675_1).abs() < 1e-12);
}

#[test]
fn dn_profile_refines() {
    let fine = csv_rows(&scalespace(&[
        "dn-profile",
        "--k",
        "8",
        "--grid",
        "16",
        "--normalized",
    ]));
    let coarse = csv_rows(&scalespace(&[
        "dn-profile",
        "--k",
        "4",
        "--grid",
        "16",
        "--normalized",
    ]));
    for i in 0..16 {
        assert_eq!(fine[i][1], coarse[i][1]);
    }
}
