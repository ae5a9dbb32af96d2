use std::process::Command;

fn qlfd(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qlfd")).args(args).env_remove("QLFD_SEED").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn degree_column(table: &str) -> Vec<usize> {
    table
        .lines()
        .skip(2)
        .filter(|l| !l.starts_with("verdict") && !l.starts_with('Δ'))
        .filter_map(|l| l.split('|').nth(1)?.trim().parse().ok())
        .collect()
}

#[test]
fn certify_a5_is_normal_crossing() {
    let (code, out, _) = qlfd(&["certify", "--builtin", "a5"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: linear-free-divisor"));
    assert!(out.contains("4 components"));
    assert_eq!(degree_column(&out[out.find("Polynomial").unwrap()..]), vec![1, 1, 1, 1]);
}

#[test]
fn e8_table_degrees() {
    let (code, out, _) = qlfd(&["table", "--builtin", "e8-central-sink"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(degree_column(&out), vec![12, 12, 12, 12, 20, 20, 30]);
    let delta = out.lines().find(|l| l.starts_with('Δ')).unwrap();
    assert!(delta.contains("118") && delta.contains("(4,4,-12,2,2,2,3;6)"), "{delta}");
}

#[test]
fn e7_table_columns() {
    let (code, out, _) = qlfd(&["table", "--builtin", "e7-highroot"]);
    assert_eq!(code, 0);
    assert_eq!(degree_column(&out), vec![6, 8, 6, 6, 8, 12]);
    assert!(out.contains("| (0,0,1,1,1,0;1) | (0,0,1,-2,1,0;1) | (D4, D4)"), "{out}");
    assert!(out.lines().any(|l| l.starts_with('Δ') && l.contains("(2,2,2,-8,2,3;4)")));
}

#[test]
fn q3_not_reduced() {
    let (code, out, _) = qlfd(&["certify", "--builtin", "q3"]);
    assert_eq!(code, 0);
    assert!(out.contains("not-reduced"));
    let det_f = out.lines().find(|l| l.starts_with("det F ")).unwrap();
    assert!(det_f.trim_end().ends_with("| 2"), "{det_f}");
}

#[test]
fn exit_codes() {
    assert_eq!(qlfd(&["certify", "--builtin", "tilde-d4-iv"]).0, 2);
    let (code, _, err) = qlfd(&["certify", "--builtin", "a3", "--file", "x"]);
    assert_eq!(code, 1);
    assert!(err.contains("mutually exclusive"));
    let (code, _, err) = qlfd(&["roots", "--builtin", "star3"]);
    assert_eq!(code, 1);
    assert!(err.contains("not a Dynkin quiver"), "{err}");
    assert_eq!(qlfd(&["euler"]).0, 1);
    assert_eq!(qlfd(&["bogus"]).0, 1);
}

#[test]
fn file_input_matches_builtin() {
    let dir = std::env::temp_dir().join(format!("qlfd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d5.quiver");
    let f = qlfd::cli::fixtures::builtin("d5-prop").unwrap();
    std::fs::write(&path, qlfd::cli::format::to_canonical(&f.quiver, &f.dims)).unwrap();
    let p = path.to_str().unwrap();
    let (code, from_file, _) = qlfd(&["certify", "--file", p, "--format", "json"]);
    assert_eq!(code, 0);
    let (_, from_builtin, _) = qlfd(&["certify", "--builtin", "d5-prop", "--format", "json"]);
    let a: serde_json::Value = serde_json::from_str(&from_file).unwrap();
    let b: serde_json::Value = serde_json::from_str(&from_builtin).unwrap();
    assert_eq!(a["body"]["report"]["components"], b["body"]["report"]["components"]);

    std::fs::write(&path, "node a\nnode b\narrow x a b\ndim a 1\n").unwrap();
    let (code, _, err) = qlfd(&["euler", "--file", p]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2") && err.contains("missing dimension for node"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_byte_identical_and_seed_env() {
    let args = ["certify", "--builtin", "e6-q2", "--format", "json", "--seed", "99"];
    let (_, a, _) = qlfd(&args);
    let (_, b, _) = qlfd(&args);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], "qlfd-report/1");
    assert_eq!(v["body"]["report"]["stats"]["seed"], 99);

    let out = Command::new(env!("CARGO_BIN_EXE_qlfd"))
        .args(["certify", "--builtin", "a3", "--format", "json"])
        .env("QLFD_SEED", "12345")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["body"]["report"]["stats"]["seed"], 12345);
}

#[test]
fn other_commands_run() {
    for cmd in ["euler", "roots", "semiinv", "discriminant"] {
        let (code, out, err) = qlfd(&[cmd, "--builtin", "e6-q1"]);
        assert_eq!(code, 0, "{cmd}: {err}");
        assert!(!out.is_empty());
        let (code, out, _) = qlfd(&[cmd, "--builtin", "e6-q1", "--format", "json"]);
        assert_eq!(code, 0);
        serde_json::from_str::<serde_json::Value>(&out).unwrap();
    }
    let (_, out, _) = qlfd(&["roots", "--builtin", "e6-q1"]);
    assert!(out.starts_with("36 positive roots"));
    let (_, out, _) = qlfd(&["semiinv", "--builtin", "e6-q1"]);
    assert_eq!(out.matches("agrees with").count(), 5, "{out}");
}

#[test]
fn exact_discriminant() {
    let (code, out, _) = qlfd(&["discriminant", "--builtin", "a4", "--exact"]);
    assert_eq!(code, 0);
    assert!(out.contains("Δ = ") && out.contains("(1 terms)"), "{out}");
    let (code, _, err) = qlfd(&["discriminant", "--builtin", "e7-highroot", "--exact"]);
    assert_eq!(code, 1);
    assert!(err.contains("--exact"));
    let (code, _, _) = qlfd(&["certify", "--builtin", "a3", "--exact"]);
    assert_eq!(code, 1);
}
