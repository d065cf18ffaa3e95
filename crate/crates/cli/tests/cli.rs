use std::io::Write;
use std::process::{Command, Output};

fn clab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clab"))
        .args(args)
        .env_remove("CLAB_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn triangle_line_counts() {
    let o = clab(&["triangle", "--n-max", "103"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,k,coalescing"));
    assert_eq!(lines.count(), 5253);

    let o = clab(&["triangle", "--n-max", "2"]);
    assert_eq!(stdout(&o), "n,k,coalescing\n2,1,0\n");

    assert_eq!(clab(&["triangle", "--n-max", "1"]).status.code(), Some(1));
}

#[test]
fn coalesce_reports() {
    let o = clab(&["coalesce", "4", "2", "--oracle"]);
    assert_eq!(stdout(&o), "coalescing=true oracle=true agree=true\n");
    let o = clab(&["coalesce", "7"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.ends_with("coalescing=false")));
    let o = clab(&["coalesce", "12", "--oracle", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 11);
    assert!(v.as_array().unwrap().iter().all(|r| r["agree"] == true));
}

#[test]
fn guard_and_usage_exit_codes() {
    assert_eq!(
        clab(&["coalesce", "70", "3", "--oracle"]).status.code(),
        Some(3)
    );
    let o = clab(&["coalesce", "30", "15", "--oracle", "--oracle-guard", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(clab(&["coalesce", "5", "5"]).status.code(), Some(1));
    assert_eq!(clab(&["spectrum", "14", "7", "1"]).status.code(), Some(3));
    assert_eq!(clab(&["not-a-command"]).status.code(), Some(1));
    assert_eq!(clab(&["--help"]).status.code(), Some(0));
    assert_eq!(clab(&["buchstab", "0.5"]).status.code(), Some(4));
}

#[test]
fn lseries_json() {
    let o = clab(&["lseries", "3", "2", "--sieve-limit", "200000"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["within_tails"], true);
    assert_eq!(v["s"], serde_json::json!([3.0, 2.0]));
    assert!(v["difference"].as_f64().unwrap() <= v["combined_tail"].as_f64().unwrap());
    assert_eq!(clab(&["lseries", "2", "0"]).status.code(), Some(4));
}

#[test]
fn numeric_commands() {
    let o = clab(&["buchstab", "3"]);
    let w: f64 = stdout(&o).trim().parse().unwrap();
    assert!((w - (1.0 + 2f64.ln()) / 3.0).abs() < 1e-9);

    let o = clab(&["envelope", "1000000"]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "78195");
    assert!((row[4].parse::<f64>().unwrap() - 0.0313).abs() < 1e-3);

    let o = clab(&["distribution", "100", "10"]);
    assert_eq!(stdout(&o), "x,y,H_direct,H_identity\n100,10,23,23\n");
}

#[test]
fn spectrum_has_double_zero() {
    let o = clab(&["spectrum", "4", "2", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let eig = v["eigenvalues"].as_array().unwrap();
    assert_eq!(eig.len(), 6);
    let zeros = eig.iter().filter(|z| z[0] == 0.0 && z[1] == 0.0).count();
    assert_eq!(zeros, 2);
    assert_eq!(v["q_re"], 1.0);
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = clab(&[
            "spectrum",
            "6",
            "3",
            "1",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    let d = dir.path().join("d.json");
    for path in [&c, &d] {
        clab(&[
            "lseries",
            "2.5",
            "0",
            "--sieve-limit",
            "100000",
            "--output",
            path.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&c).unwrap(), std::fs::read(&d).unwrap());
}

#[test]
fn config_file_precedence() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "format = json\nsieve_limit = 50").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["distribution", "1000", "10"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_clab"))
            .args(&args)
            .env("CLAB_CONFIG", f.path())
            .output()
            .unwrap()
    };
    // the file's sieve limit is too small for x = 1000
    assert_eq!(run(&[]).status.code(), Some(1));
    let o = run(&["--sieve-limit", "2000"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["h_direct"], v[0]["h_identity"]);
    let o = run(&["--sieve-limit", "2000", "--format", "csv"]);
    assert!(stdout(&o).starts_with("x,y,H_direct,H_identity\n"));
}
