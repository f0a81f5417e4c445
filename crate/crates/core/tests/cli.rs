use std::process::{Command, Output};

fn minfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minfact"))
        .args(args)
        .env_remove("MINFACT_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = minfact(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

const SMALL_CHAIN: &str = r#"{"a":[2,2],"n":3,"chain":[{"ground":[1,2,3],"blocks":[[1],[2],[3]]},{"ground":[1,2,3],"blocks":[[1,3],[2]]},{"ground":[1,2,3],"blocks":[[1,2,3]]}]}"#;

#[test]
fn wsum_text() {
    assert_eq!(stdout(&["wsum", "chains", "--a", "2,2"]), "X1 + 2\n");
    assert_eq!(
        stdout(&["wsum", "andre", "--n", "4"]),
        "6*X1*X2*X3 + 4*X1*X2 + 9*X1*X3 + 24*X2*X3 + 6*X1 + 16*X2 + 36*X3 + 24\n"
    );
    assert_eq!(
        stdout(&["wsum", "cayley", "--n", "4"]),
        "2*X1*X2 + 2*X1 + 6*X2 + 6\n"
    );
    assert_eq!(
        stdout(&["wsum", "final", "--n", "3", "--k", "2"]),
        "X1 + 2\n"
    );
    assert_eq!(
        stdout(&["wsum", "chains", "--a", "2,3,2"]),
        "3*X1*X2 + 2*X1 + 12*X2 + 8\n"
    );
}

#[test]
fn wsum_other_formats() {
    assert_eq!(
        stdout(&["wsum", "chains", "--a", "2,2", "--format", "json"]),
        "[{\"coeff\":\"2\",\"vars\":{}},{\"coeff\":\"1\",\"vars\":{\"1\":1}}]\n"
    );
    assert_eq!(
        stdout(&["wsum", "chains", "--a", "2,2", "--format", "csv"]),
        "coefficient,monomial\n1,X1\n2,1\n"
    );
}

#[test]
fn enumerate_andre_json_lines() {
    let out = stdout(&["enumerate", "andre", "--n", "4", "--format", "json"]);
    assert_eq!(out.lines().count(), 5);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["n"], 4);
    }
}

#[test]
fn enumerate_golden() {
    assert_eq!(
        stdout(&["enumerate", "chains", "--a", "2,2", "--format", "csv"]),
        "index,object,weight\n\
         1,{1|2|3} < {1|23} < {123},1\n\
         2,{1|2|3} < {12|3} < {123},1\n\
         3,{1|2|3} < {13|2} < {123},X1\n"
    );
    assert_eq!(
        stdout(&["enumerate", "final", "--n", "3", "--k", "2"]),
        "{1|23} < {123}\t1\n{12|3} < {123}\t1\n{13|2} < {123}\tX1\n"
    );
    assert_eq!(
        stdout(&["enumerate", "cayley", "--n", "3"]),
        "1->3 2->1\tX1\n1->2 2->3\t1\n1->3 2->3\t1\n"
    );
    let first = stdout(&["enumerate", "chains", "--a", "2,2", "--format", "json"]);
    assert_eq!(
        first.lines().next().unwrap(),
        r#"{"a":[2,2],"n":3,"chain":[{"ground":[1,2,3],"blocks":[[1],[2],[3]]},{"ground":[1,2,3],"blocks":[[1],[2,3]]},{"ground":[1,2,3],"blocks":[[1,2,3]]}]}"#
    );
    let facts = stdout(&[
        "enumerate",
        "factorizations",
        "--a",
        "2,2,2",
        "--format",
        "json",
    ]);
    assert_eq!(facts.lines().count(), 16);
}

#[test]
fn enumerate_chain_lines_parse_back() {
    let out = stdout(&["enumerate", "chains", "--a", "3,2", "--format", "json"]);
    for line in out.lines() {
        let chain: minfact::Chain = serde_json::from_str(line).unwrap();
        assert_eq!(chain.n(), 4);
    }
}

#[test]
fn psi_output() {
    assert_eq!(
        stdout(&["psi", "--chain", SMALL_CHAIN]),
        r#"{"case":2,"gamma":{"a":[3],"n":3,"chain":[{"ground":[1,2,3],"blocks":[[1],[2],[3]]},{"ground":[1,2,3],"blocks":[[1,2,3]]}]},"bar":3,"sigma":{"n":3,"images":[1,2,3]}}"#
            .to_string()
            + "\n"
    );
    assert_eq!(
        stdout(&["psi", "--chain", SMALL_CHAIN, "--format", "text"]),
        "case\t2\nbar\t3\ngamma\t{1|2|3} < {123}\nsigma\t()\n"
    );
}

#[test]
fn verify_golden() {
    assert_eq!(
        stdout(&["verify", "--check", "hook", "--max-n", "3"]),
        "{\"check\":\"hook\",\"params\":{\"n\":1},\"status\":\"pass\",\"counts\":{\"trees\":1}}\n\
         {\"check\":\"hook\",\"params\":{\"n\":2},\"status\":\"pass\",\"counts\":{\"trees\":1}}\n\
         {\"check\":\"hook\",\"params\":{\"n\":3},\"status\":\"pass\",\"counts\":{\"trees\":2}}\n"
    );
    assert_eq!(
        stdout(&["verify", "--check", "theorem1", "--max-n", "3", "--format", "text"]),
        "pass theorem1 n=2 a=(2)\npass theorem1 n=3 a=(2,2)\npass theorem1 n=3 a=(3)\n"
    );
}

#[test]
fn verify_all_six() {
    let out = minfact(&["verify", "--all", "--max-n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 100);
    assert!(text.lines().all(|l| l.contains("\"status\":\"pass\"")));
}

#[test]
fn verify_timing_flag() {
    let out = stdout(&["verify", "--check", "cayley", "--max-n", "3", "--timing"]);
    assert!(out.lines().all(|l| l.contains("\"elapsed_ms\":")));
    let plain = stdout(&["verify", "--check", "cayley", "--max-n", "3"]);
    assert!(!plain.contains("elapsed_ms"));
}

#[test]
fn export_golden() {
    assert_eq!(
        stdout(&["export", "--max-n", "4"]),
        "n,r,a,count,formula_count,match\n\
         2,1,2,1,1,true\n\
         3,2,\"2,2\",3,3,true\n\
         3,1,3,1,1,true\n\
         4,3,\"2,2,2\",16,16,true\n\
         4,2,\"2,3\",4,4,true\n\
         4,2,\"3,2\",4,4,true\n\
         4,1,4,1,1,true\n"
    );
    let json = stdout(&["export", "--max-n", "3", "--format", "json"]);
    assert_eq!(
        json.lines().nth(1).unwrap(),
        r#"{"n":3,"r":2,"a":"2,2","count":3,"formula_count":3,"match":true}"#
    );
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("minfact-cli-{}.txt", std::process::id()));
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["wsum", "chains", "--a", "2,2", "--output", p]), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "X1 + 2\n");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn parallel_is_byte_stable() {
    for args in [
        &["wsum", "chains", "--n", "7"][..],
        &["enumerate", "final", "--n", "6", "--k", "4"][..],
    ] {
        let one = stdout(&[args, &["--parallel", "1"]].concat());
        let three = stdout(&[args, &["--parallel", "3"]].concat());
        assert_eq!(one, three);
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["wsum", "chains"][..],
        &["wsum", "chains", "--a", "1,2"][..],
        &["wsum", "chains", "--a", "2,2", "--n", "5"][..],
        &["wsum", "final", "--n", "4"][..],
        &["wsum", "final", "--n", "4", "--k", "7"][..],
        &["psi", "--chain", "{}"][..],
        &["verify", "--check", "nope"][..],
        &["verify", "--all", "--check", "hook"][..],
        &["frobnicate"][..],
        &["wsum", "andre", "--n", "4", "--parallel", "0"][..],
    ] {
        assert_eq!(minfact(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn size_cap() {
    let out = minfact(&["wsum", "cayley", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MINFACT_MAX_N"));
    let capped = Command::new(env!("CARGO_BIN_EXE_minfact"))
        .args(["wsum", "andre", "--n", "5"])
        .env("MINFACT_MAX_N", "4")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    let raised = Command::new(env!("CARGO_BIN_EXE_minfact"))
        .args(["wsum", "andre", "--n", "10"])
        .env("MINFACT_MAX_N", "10")
        .output()
        .unwrap();
    assert!(raised.status.success());
}

#[test]
fn help_exits_zero() {
    assert_eq!(minfact(&["--help"]).status.code(), Some(0));
}
