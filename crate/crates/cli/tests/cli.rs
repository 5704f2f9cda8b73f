use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_picard-ff"))
        .args(args)
        .output()
        .expect("run picard-ff")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn field_prints_modulus_and_generator() {
    let o = run(&["field", "--q", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("generator = 3"));
    let o = run(&["field", "--p", "2", "--e", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["modulus"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["q"], 4);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["field", "--q", "6"][..],
        &["field"],
        &["count", "--q", "7", "--lambda", "2", "--mu", "2"],
        &["count", "--q", "11", "--lambda", "2", "--mu", "3"],
        &["count", "--q", "7", "--lambda", "9", "--mu", "3"],
        &["2f1", "--q", "7", "--A", "6", "--B", "0", "--C", "0", "--x", "2"],
        &["f1", "--q", "7", "--A", "2", "--B1", "2", "--B2", "2", "--C", "0", "--x", "0", "--y", "3"],
        &["verify", "lemma21", "--convention", "nonsense"],
        &["bogus"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn count_reports_both_traces() {
    let o = run(&["count", "--q", "7", "--lambda", "3", "--mu", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 11);
    assert_eq!(v["trace"], -3);
    assert_eq!(v["rhs_trace"], -3);
    assert_eq!(v["count_charsum"], 11);
    assert_eq!(v["match"], true);
    // the brute-force counter alone accepts q = 2 (mod 3)
    let o = run(&["count", "--q", "11", "--lambda", "2", "--mu", "3", "--brute-force-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("count = 12"));
}

#[test]
fn f1_forms_print_the_same_value() {
    let base = ["f1", "--q", "13", "--A", "4", "--B1", "8", "--B2", "6", "--C", "0", "--x", "5", "--y", "7", "--json"];
    let texts: Vec<String> = ["def", "single", "inverted"]
        .iter()
        .map(|form| {
            let mut args = base.to_vec();
            args.extend(["--form", form]);
            let o = run(&args);
            assert_eq!(o.status.code(), Some(0));
            let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
            v["text"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(texts[0], texts[1]);
    assert_eq!(texts[1], texts[2]);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(run(&["verify", "koike", "--pmax", "23"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "theorem", "--q", "7", "--q", "13"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "lemma21", "--q", "7"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "lemma22", "--q", "7"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "f1-forms", "--q", "7", "--samples", "5"]).status.code(), Some(0));
    // the ε(0) = 1 convention breaks the expansion identity
    let o = run(&["verify", "lemma21", "--q", "7", "--convention", "paper-trivial-one", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cases: Vec<&str> = v[0]["mismatches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["case"].as_str().unwrap())
        .collect();
    assert!(cases.iter().any(|c| c.starts_with("(1) q=7 A=m0 t=1 ")));
}

#[test]
fn table_output_is_stable() {
    let csv = run(&["table", "--q", "7"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,lambda,mu,count,trace,rhs_trace,match"));
    assert_eq!(lines.count(), 20);

    let dir = std::env::temp_dir().join(format!("picard-ff-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let o = run(&["table", "--q", "7", "--jobs", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    std::fs::remove_dir_all(&dir).unwrap();

    let json = run(&["table", "--q", "7", "--json"]);
    let rows: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 20);
    assert_eq!(rows[0]["rhs"]["order"], 1);
}
