use std::process::{Command, Output};

fn hodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(args)
        .output()
        .expect("run hodge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn psi_value() {
    let o = hodge(&["psi", "--genus", "2", "--exps", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/1152\n");
}

#[test]
fn hodge_and_bern_values() {
    let o = hodge(&["hodge", "--genus", "2", "--psi", "2", "--lambdas", "2"]);
    assert_eq!(stdout(&o), "7/5760\n");
    let o = hodge(&["bern", "1", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "m,value\n1,-1/2\n4,-1/30\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hodge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hodge(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(hodge(&["verify"]).status.code(), Some(2));
    assert_eq!(
        hodge(&["psi", "--genus", "0", "--exps", "0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hodge(&["cover", "--genus", "1", "--degree", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hodge(&["bern", "65"]).status.code(), Some(2));
    assert_eq!(hodge(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_json_report() {
    let o = hodge(&[
        "verify",
        "--suite",
        "all",
        "--max-genus",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let suites = v.as_array().unwrap();
    assert_eq!(suites.len(), 14);
    for s in suites {
        assert!(s["elapsed_ms"].is_u64());
        for c in s["checks"].as_array().unwrap() {
            assert_eq!(c["pass"], true);
            assert_eq!(c["lhs"], c["rhs"]);
        }
    }
}

#[test]
fn verify_positional_and_flag_agree() {
    let a = hodge(&[
        "verify",
        "theorem3",
        "--max-genus",
        "4",
        "--max-degree",
        "5",
        "--no-timing",
    ]);
    let b = hodge(&[
        "verify",
        "--suite",
        "theorem3",
        "--max-genus",
        "4",
        "--max-degree",
        "5",
        "--no-timing",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("theorem3: 25/25 passed\n"));
}

#[test]
fn csv_columns() {
    let o = hodge(&["verify", "ihop", "--max-genus", "2", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,check_id,lhs,rhs,pass"));
    assert_eq!(lines.next(), Some("ihop,g=1,1/24,1/24,true"));
    assert_eq!(lines.next(), Some("ihop,g=2,1/480,1/480,true"));
}

#[test]
fn series_output() {
    let o = hodge(&["series", "f0", "--order", "4"]);
    assert_eq!(
        stdout(&o),
        "t^0\t1\nt^1\t0\nt^2\t1/24\nt^3\t0\nt^4\t7/5760\n"
    );
    let o = hodge(&["series", "c", "--order", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 4);
    assert_eq!(v["coeffs"][4], "1/480");
    let o = hodge(&["series", "fxi", "--xi", "-1", "--order", "6"]);
    assert_eq!(
        stdout(&o),
        "t^0\t1\nt^1\t0\nt^2\t0\nt^3\t0\nt^4\t0\nt^5\t0\nt^6\t0\n"
    );
}

#[test]
fn cache_file_roundtrip() {
    let path = std::env::temp_dir().join(format!("hodge-cache-{}.tsv", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let p = path.to_str().unwrap();
    let first = hodge(&[
        "hodge",
        "--genus",
        "2",
        "--lambdas",
        "1,1,1",
        "--cache-file",
        p,
    ]);
    assert_eq!(stdout(&first), "1/2880\n");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().all(|l| {
        let (k, v) = l.split_once('\t').unwrap();
        k.contains("|psi:") && k.contains("|kappa:") && k.contains("|ch:") && !v.is_empty()
    }));
    assert!(text.contains("0|psi:0,0,0|kappa:|ch:\t1\n"));
    let second = hodge(&[
        "hodge",
        "--genus",
        "2",
        "--lambdas",
        "1,1,1",
        "--cache-file",
        p,
    ]);
    assert_eq!(stdout(&second), "1/2880\n");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);

    std::fs::write(&path, "not a cache line\n").unwrap();
    assert_eq!(
        hodge(&["bern", "2", "--cache-file", p]).status.code(),
        Some(2)
    );
    let _ = std::fs::remove_file(&path);
}

#[test]
fn deterministic_output() {
    let args = ["verify", "all", "--max-genus", "3", "--no-timing"];
    assert_eq!(hodge(&args).stdout, hodge(&args).stdout);
}
