use bollobas::cli::run;
use serde_json::Value;

fn bollobas(args: &[&str], stdin: &str) -> (String, i32) {
    run(std::iter::once("bollobas").chain(args.iter().copied()), stdin)
}

fn json(out: &str) -> Value {
    serde_json::from_str(out).unwrap_or_else(|e| panic!("not JSON ({e}): {out}"))
}

fn chain(n: &str) -> String {
    let (out, code) = bollobas(&["construct", "--family", "complement-chain", "--params", n], "");
    assert_eq!(code, 0, "{out}");
    out
}

#[test]
fn verify_chain_is_skew() {
    let (out, code) = bollobas(&["verify", "--kind", "skew"], &chain("3"));
    assert_eq!(code, 0, "{out}");
    assert_eq!(json(&out)["verification"]["verdict"], true);
}

#[test]
fn verify_failure_exits_one_with_witness() {
    let doc = r#"{"kind":"set","n":2,"d":2,"tuples":[[[],[1,2]],[[1,2],[]]]}"#;
    let (out, code) = bollobas(&["verify", "--kind", "skew"], doc);
    assert_eq!(code, 1, "{out}");
    let v = json(&out)["verification"]["first_violation"].clone();
    assert_eq!(v["i"], 1);
    assert_eq!(v["j"], 2);
}

#[test]
fn yue_weight_is_tight_on_chain() {
    let (out, code) = bollobas(&["weight", "--functional", "yue"], &chain("4"));
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["value"], "1");
    assert_eq!(v["tight"], true);
}

#[test]
fn tuza_arity_mismatch_is_a_usage_error() {
    let (out, code) = bollobas(&["weight", "--functional", "tuza", "--p", "1/2,1/2"], &{
        let (o, c) = bollobas(&["construct", "--family", "full-tuza-tuples", "--params", "2,3"], "");
        assert_eq!(c, 0, "{o}");
        o
    });
    assert_eq!(code, 2, "{out}");
}

#[test]
fn parse_errors_exit_two_with_position() {
    let (out, code) = bollobas(&["verify"], "{\"n\":2,\n");
    assert_eq!(code, 2);
    assert!(out.contains("line 2"), "{out}");
}

#[test]
fn unknown_flags_exit_two() {
    let (_, code) = bollobas(&["verify", "--frobnicate"], "");
    assert_eq!(code, 2);
    let (_, code) = bollobas(&["teleport"], "");
    assert_eq!(code, 2);
}

#[test]
fn construct_and_embed_round_trip() {
    let (out, code) = bollobas(&["embed"], &chain("2"));
    assert_eq!(code, 0, "{out}");
    let doc = json(&out);
    assert_eq!(doc["kind"], "subspace");
    assert_eq!(doc["tuples"].as_array().unwrap().len(), 4);
    let (out, code) = bollobas(&["weight", "--functional", "yue"], &out);
    assert_eq!(code, 0, "{out}");
    assert_eq!(json(&out)["value"], "1");
}

#[test]
fn random_is_seeded_and_valid() {
    let args = ["random", "--seed", "9", "--m", "5", "--n", "3"];
    let (a, code) = bollobas(&args, "");
    assert_eq!(code, 0, "{a}");
    assert_eq!(bollobas(&args, "").0, a);
    let (out, code) = bollobas(&["verify", "--kind", "skew"], &a);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn saturate_and_certify() {
    let doc = r#"{"kind":"set","n":2,"d":2,"tuples":[[[1],[]]]}"#;
    let (out, code) = bollobas(&["saturate", "--flavor", "set", "--trace"], doc);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["final_system"]["tuples"].as_array().unwrap().len(), 2);
    let (out, code) = bollobas(&["certify", "--saturate", "set"], doc);
    assert_eq!(code, 0, "{out}");
    assert_eq!(json(&out)["certificate"]["holds"], true);
}

#[test]
fn search_finds_four_pairs_on_two_points() {
    let (out, code) = bollobas(
        &["search", "--objective", "max-m", "--domain", "set", "--n", "2", "--condition", "skew"],
        "",
    );
    assert_eq!(code, 0, "{out}");
    assert_eq!(json(&out)["best_value"], "4");
}
