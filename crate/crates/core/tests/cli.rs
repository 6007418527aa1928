use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locality")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).expect("valid json on stdout");
    (out.status.code().unwrap(), v)
}

#[test]
fn counterexample_passes_and_names_a_right_factor_witness() {
    let out = run(&["counterexample"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("f in the right factor"), "{text}");
    assert!(text.contains("overall: pass"));
}

#[test]
fn amalgam_fails_the_locality_axioms() {
    let (code, v) = json(&["loc-check", "--builtin", "PG-AM20"]);
    assert_eq!(code, 1);
    assert_eq!(v["overall"], "fail");
}

#[test]
fn corpus_localities_pass_their_checks() {
    for name in ["GRP-S4", "GRP-C2xS4", "LOC-S5"] {
        assert_eq!(run(&["loc-check", "--builtin", name, "--max-word-len", "3"]).status.code(), Some(0), "{name}");
        assert_eq!(run(&["pg-check", "--builtin", name, "--max-word-len", "3"]).status.code(), Some(0), "{name}");
    }
}

#[test]
fn normals_of_s4() {
    let (code, v) = json(&["normals", "--builtin", "GRP-S4"]);
    assert_eq!(code, 0);
    let info: Vec<String> = v["info"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    assert_eq!(info[0], "4 partial normal subgroups");
    let orders: Vec<&str> = info[1..].iter().map(|l| l.split(" = ").next().unwrap()).collect();
    assert_eq!(orders, ["N0: order 1", "N1: order 4 [V4]", "N2: order 12 [A4]", "N3: order 24"]);
}

#[test]
fn product_and_quotient_commands() {
    assert_eq!(run(&["product", "--builtin", "GRP-S4", "--ideals", "V4,A4", "--verify"]).status.code(), Some(0));
    let (code, v) = json(&["quotient", "--builtin", "GRP-S4", "--kernel", "V4"]);
    assert_eq!(code, 0);
    assert!(v["info"][1].as_str().unwrap().starts_with("|L/K| = 6"));
    assert_eq!(run(&["lemmas", "--builtin", "GRP-S4", "--kernel", "V4"]).status.code(), Some(0));
}

#[test]
fn emitted_quotient_loads_back() {
    let path = std::env::temp_dir().join(format!("quotient-{}.model", std::process::id()));
    let p = path.to_str().unwrap();
    assert_eq!(run(&["quotient", "--builtin", "GRP-C2xS4", "--kernel", "V4", "--emit", p]).status.code(), Some(0));
    let out = run(&["loc-check", "--model", p, "--max-word-len", "3"]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn json_output_is_deterministic() {
    let a = run(&["lemmas", "--builtin", "GRP-S4", "--format", "json", "--seed", "7"]);
    let b = run(&["lemmas", "--builtin", "GRP-S4", "--format", "json", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["loc-check", "--builtin", "nope"][..],
        &["quotient", "--builtin", "GRP-S4", "--kernel", "missing"],
        &["quotient", "--builtin", "GRP-S4", "--kernel", "A4", "--max-word-len", "x"],
        &["frobnicate"],
        &["normals"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn non_normal_kernel_is_an_input_error() {
    let model = "group S4 = (1 2), (1 2 3 4)\n\
                 locality L = S4 prime 2 sylow auto delta seeds <(1 2)(3 4), (1 3)(2 4)>\n\
                 subset T in L = <(1 2)>\n";
    let path = std::env::temp_dir().join(format!("nonnormal-{}.model", std::process::id()));
    std::fs::write(&path, model).unwrap();
    let out = run(&["quotient", "--model", path.to_str().unwrap(), "--kernel", "T"]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}
