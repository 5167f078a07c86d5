use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use shv_cli::docs;
use shv_cli::{run, Outcome};
use shv_core::induced::{random_vector, verma, InducedModule, WhittakerBase};
use shv_core::superalgebra::{AlgebraTag, Family, GenIndex, Generator, SuperElement};
use shv_core::Scalar;

const VERMA: &str = r#"{"kind":"verma","h":"2","c0":"1"}"#;
const WHITTAKER: &str = r#"{"kind":"whittaker","k":1,"c0":"1","phi":{"I_1":"1"}}"#;

fn shv(args: &[&str]) -> Outcome {
    let mut argv = vec!["shv"];
    argv.extend_from_slice(args);
    run(argv, &mut std::io::empty())
}

fn shv_stdin(args: &[&str], input: &str) -> Outcome {
    let mut argv = vec!["shv"];
    argv.extend_from_slice(args);
    run(argv, &mut input.as_bytes())
}

fn json_of(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {out:?}"))
}

fn element(family: &str, index: Value) -> String {
    json!({ "terms": [{ "coeff": "1", "family": family, "index": index }] }).to_string()
}

#[test]
fn bracket_examples() {
    let out = shv(&["bracket", &element("L", json!(2)), &element("L", json!(3))]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), r#"{"terms":[{"coeff":"1","family":"L","index":5}]}"#);
    let out = shv(&["bracket", &element("I", json!(1)), &element("I", json!(2))]);
    assert_eq!(out.stdout.trim(), r#"{"terms":[]}"#);
    let out = shv(&[
        "bracket",
        "--algebra",
        "ns",
        &element("G", json!("1/2")),
        &element("G", json!("3/2")),
    ]);
    assert_eq!(out.stdout.trim(), r#"{"terms":[{"coeff":"2","family":"I","index":2}]}"#);
}

#[test]
fn documents_from_standard_input() {
    let out = shv_stdin(&["bracket", "-", &element("I", json!(-1))], &element("L", json!(1)));
    assert_eq!(out.code, 0, "{out:?}");
    assert_eq!(
        out.stdout.trim(),
        r#"{"terms":[{"coeff":"-1","family":"I","index":0}]}"#
    );
}

#[test]
fn documents_from_files() {
    let dir = std::env::temp_dir().join(format!("shv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("module.json");
    std::fs::write(&path, VERMA).unwrap();
    let out = shv(&["validate-module", "--module", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.code, 0, "{out:?}");
    assert_eq!(json_of(&out)["passed"], json!(true));
}

#[test]
fn usage_errors_exit_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["bracket", "{\"terms\":[", "{}"],
        vec![
            "bracket",
            "{\"terms\":[{\"coeff\":\"x\",\"family\":\"L\",\"index\":1}]}",
            "{\"terms\":[]}",
        ],
        vec![
            "bracket",
            "{\"terms\":[{\"coeff\":\"1\",\"family\":\"Q\",\"index\":1}]}",
            "{\"terms\":[]}",
        ],
        vec![
            "bracket",
            "{\"terms\":[{\"coeff\":\"1\",\"family\":\"G\",\"index\":\"1/2\"}]}",
            "{\"terms\":[]}",
        ],
        vec!["bracket", "/nonexistent/file.json", "{\"terms\":[]}"],
        vec!["lie-of", "--range", "65"],
        vec!["ns-check", "--range", "-1"],
        vec!["quotient", "--alpha", "1", "--beta", "1", "--z", "0"],
        vec!["quotient", "--alpha", "0", "--beta", "0", "--z", "-1"],
        vec!["conformal", "classify", "--degree", "-1"],
        vec![
            "conformal",
            "check",
            "--ansatz",
            "{\"a\":\"1\",\"b\":\"0\",\"c\":\"0\",\"phi\":\"0\",\"psi\":\"0\"}",
        ],
        vec!["conformal", "check", "--ansatz", "{\"a\":\"1\"}"],
        vec!["validate-module", "--module", "{\"kind\":\"nope\"}"],
        vec![
            "validate-module",
            "--module",
            "{\"kind\":\"whittaker\",\"k\":1,\"c0\":\"1\",\"phi\":{\"I_2\":\"1\"}}",
        ],
        vec!["normal-form", "--module", VERMA, "--word", "X_1"],
        vec![
            "normal-form",
            "--module",
            VERMA,
            "--word",
            "L_1",
            "--strategy",
            "middle",
        ],
        vec!["probe", "--module", VERMA],
        vec!["probe", "--module", VERMA, "--random", "3"],
        vec![
            "probe", "--module", VERMA, "--random", "3", "--seed", "1", "--order", "sideways",
        ],
        vec![
            "act",
            "--module",
            VERMA,
            "--generator",
            "L_1",
            "--vector",
            "{\"terms\":[{\"coords\":[{\"basis\":7,\"coeff\":\"1\"}]}]}",
        ],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = shv(&args);
        assert_eq!(out.code, 2, "{args:?}: {out:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn failures_exit_1() {
    let tag_mismatch = shv(&["bracket", "{\"algebra\":\"ns\",\"terms\":[]}", "{\"terms\":[]}"]);
    assert_eq!(tag_mismatch.code, 1);

    let c0_zero = shv(&[
        "probe",
        "--module",
        r#"{"kind":"verma","h":"2","c0":"0"}"#,
        "--random",
        "2",
        "--seed",
        "1",
    ]);
    assert_eq!(c0_zero.code, 1);
    assert!(c0_zero.stderr.contains("condition (a) failed: I_0 not injective"));

    let l2 = shv(&[
        "validate-module",
        "--module",
        r#"{"kind":"whittaker","k":1,"c0":"1","phi":{"I_1":"1","L_2":"1"}}"#,
    ]);
    assert_eq!(l2.code, 1);
    assert!(l2.stderr.contains("condition (b) failed: L_2"));

    let bad_ansatz = shv(&[
        "conformal",
        "check",
        "--ansatz",
        r#"{"a":"1","b":"1","c":"0","phi":"0","psi":"2"}"#,
    ]);
    assert_eq!(bad_ansatz.code, 1);
    assert_eq!(json_of(&bad_ansatz)["jacobi"], json!("fail"));

    let left_to_right = shv(&[
        "probe",
        "--module",
        VERMA,
        "--random",
        "100",
        "--seed",
        "3",
        "--order",
        "left-to-right",
    ]);
    assert_eq!(left_to_right.code, 1);
}

#[test]
fn conformal_reports() {
    let out = shv(&["conformal", "check"]);
    assert_eq!(
        (out.code, json_of(&out)),
        (0, json!({ "algebra": "s", "skew": "pass", "jacobi": "pass" }))
    );
    let out = shv(&["conformal", "check", "--algebra", "v"]);
    assert_eq!(out.code, 0);
    let good = r#"{"a":"1","b":"0","c":"0","phi":"0","psi":[{"coeff":"3","d":0,"lambda":0}]}"#;
    assert_eq!(shv(&["conformal", "check", "--ansatz", good]).code, 0);

    let out = shv(&["conformal", "classify", "--degree", "4"]);
    let families = &json_of(&out)["families"];
    assert_eq!(families.as_array().unwrap().len(), 1);
    assert_eq!(families[0]["a"], "1");
    assert_eq!(families[0]["phi"], "0");
    assert_eq!(families[0]["psi"], "Δ");

    let out = shv(&["conformal", "products"]);
    let products = json_of(&out)["products"].clone();
    assert!(products
        .as_array()
        .unwrap()
        .contains(&json!({ "pair": ["L", "L"], "products": [[0, "∂L"], [1, "2L"]] })));
}

#[test]
fn table_reports() {
    let out = shv(&["lie-of", "--range", "8"]);
    assert_eq!(out.code, 0);
    assert_eq!(json_of(&out)["summary"], "matches 𝔖: true");
    let out = shv(&["ns-check", "--range", "8"]);
    assert_eq!((out.code, json_of(&out)["result"].clone()), (0, json!("pass")));
    let out = shv(&["quotient", "--alpha", "0", "--beta", "0", "--z", "0"]);
    let doc = json_of(&out);
    assert_eq!(doc["survivors"], json!(["L0", "I0", "G0"]));
    assert_eq!(doc["ideal_check"], "pass");
}

#[test]
fn module_commands() {
    let out = shv(&["normal-form", "--module", VERMA, "--word", "G_-1 G_-1"]);
    assert_eq!(json_of(&out)["text"], "1·I_-2·v");
    let out = shv(&["normal-form", "--module", VERMA, "--word", "L_1 L_-1"]);
    assert_eq!(json_of(&out)["text"], "-4·v");
    let out = shv(&["normal-form", "--module", WHITTAKER, "--word", "I_1 L_0"]);
    assert_eq!(json_of(&out)["text"], "-1·v + 1·L_0·v");
    let vector = r#"{"terms":[{"i":[[1,1]],"coords":[{"basis":0,"coeff":"1"}]}]}"#;
    let out = shv(&["act", "--module", VERMA, "--generator", "L_1", "--vector", vector]);
    assert_eq!(json_of(&out)["text"], "-1·v");

    let out = shv(&["probe", "--module", VERMA, "--vector", vector]);
    assert_eq!(out.code, 0);
    let trace = &json_of(&out)["probes"][0];
    assert_eq!(trace["steps"].as_array().unwrap().len(), 1);
    assert_eq!(trace["steps"][0]["generator"], "L_1");
    assert_eq!(trace["terminal_text"], "-1·v");

    let out = shv(&[
        "probe",
        "--module",
        VERMA,
        "--random",
        "50",
        "--max-weight",
        "6",
        "--seed",
        "7",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = shv(&[
        "probe",
        "--module",
        WHITTAKER,
        "--random",
        "20",
        "--max-weight",
        "5",
        "--seed",
        "7",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "probe",
            "--module",
            VERMA,
            "--random",
            "20",
            "--seed",
            "42",
            "--strategy",
            "rightmost",
        ],
        vec![
            "probe",
            "--module",
            WHITTAKER,
            "--random",
            "10",
            "--max-weight",
            "4",
            "--seed",
            "42",
        ],
        vec!["conformal", "products"],
        vec!["quotient", "--alpha", "2", "--beta", "1", "--z", "1"],
    ];
    for args in runs {
        assert_eq!(shv(&args), shv(&args), "{args:?}");
    }
}

fn element_strategy(tag: AlgebraTag) -> impl Strategy<Value = SuperElement> {
    let term = (0..3usize, -20i64..20, -9i64..9, 1i64..5);
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut x = SuperElement::zero(tag);
        for (f, n, p, q) in terms {
            let family = Family::ALL[f];
            let index = match (tag, family) {
                (AlgebraTag::NeveuSchwarz, Family::G) => GenIndex::from_doubled(2 * n + 1),
                _ => GenIndex::int(n),
            };
            x.add_term(Generator::new(family, index), Scalar::ratio(p, q)).unwrap();
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn elements_round_trip(x in element_strategy(AlgebraTag::Ramond), y in element_strategy(AlgebraTag::NeveuSchwarz)) {
        prop_assert_eq!(docs::parse_element(&docs::render_element(&x), AlgebraTag::Ramond).unwrap(), x);
        prop_assert_eq!(docs::parse_element(&docs::render_element(&y), AlgebraTag::NeveuSchwarz).unwrap(), y);
    }

    #[test]
    fn vectors_round_trip(seed in any::<u64>(), whittaker in any::<bool>()) {
        let m = if whittaker {
            let phi = BTreeMap::from([(Generator::int(Family::I, 1), Scalar::one())]);
            InducedModule::new(Arc::new(WhittakerBase::new(1, phi, Scalar::one()).unwrap()))
        } else {
            InducedModule::new(Arc::new(verma(Scalar::ratio(3, 2), Scalar::from_int(-2))))
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_vector(&m, &mut rng, 5, 3, 3);
        let text = docs::render_vector(&v).to_string();
        let back = docs::parse_vector(&serde_json::from_str(&text).unwrap(), &m).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn modules_round_trip(h in -9i64..9, c0 in -9i64..9, q in 1i64..4, k in 1i64..3, phi in -5i64..5) {
        let verma_doc = json!({ "kind": "verma", "h": Scalar::ratio(h, q).to_string(), "c0": c0.to_string() });
        let whittaker_doc = json!({
            "kind": "whittaker",
            "k": k,
            "c0": c0.to_string(),
            "phi": { format!("I_{k}"): phi.to_string(), format!("L_{}", 2 * k): "1/2" },
        });
        let table_doc = json!({
            "kind": "table", "alpha": 0, "beta": 0, "z": 0, "c0": "1",
            "parities": ["even", "odd"],
            "actions": { "G_0": [["0", "1"], ["1", "0"]], "L_0": [[h.to_string(), "0"], ["0", h.to_string()]] },
        });
        for doc in [verma_doc, whittaker_doc, table_doc] {
            let described = docs::parse_module(&doc).unwrap().describe();
            let again = docs::parse_module(&described).unwrap().describe();
            prop_assert_eq!(&described, &again);
        }
    }
}
