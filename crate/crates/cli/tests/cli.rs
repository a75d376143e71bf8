use clap::Parser;
use kotriple_cli::{run, Cli, Outcome};
use kotriple_core::triples::validate;
use kotriple_core::RealSpectralTriple;
use serde_json::Value;

fn kotriple(args: &str) -> Outcome {
    let argv = std::iter::once("kotriple").chain(args.split_whitespace());
    run(Cli::try_parse_from(argv).expect("arguments parse"))
}

fn row<'a>(text: &'a str, head: &str) -> Vec<&'a str> {
    text.lines()
        .find(|l| l.starts_with(head))
        .unwrap_or_else(|| panic!("no row {head}"))
        .split_whitespace()
        .skip(1)
        .collect()
}

#[test]
fn complete_table_even_eps_dprime() {
    let out = kotriple("table complete");
    assert_eq!(out.code, 0);
    let cells = row(&out.stdout, "ε″");
    let even: Vec<&str> = cells.iter().step_by(2).copied().collect();
    assert_eq!(even, ["+1", "-1", "+1", "-1"]);
}

#[test]
fn product_table_cell() {
    let out = kotriple("table product --json");
    let rows: Value = serde_json::from_str(&out.stdout).unwrap();
    let one_u = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["row"] == "1_U")
        .unwrap();
    assert_eq!(one_u["cells"][1], "2_U");
    assert_eq!(one_u["cells"][9], Value::Null);
}

#[test]
fn classic_dim_four_column() {
    let out = kotriple("table classic --json");
    let cols: Value = serde_json::from_str(&out.stdout).unwrap();
    let four = &cols[4];
    assert_eq!(
        (
            four["eps"].as_i64(),
            four["eps_prime"].as_i64(),
            four["eps_dprime"].as_i64()
        ),
        (Some(-1), Some(1), Some(1))
    );
    assert_eq!(four["class"], "4_U");
}

#[test]
fn mnemonic_reproduces_complete_table() {
    let out = kotriple("mnemonic --json");
    assert_eq!(out.code, 0);
    let m: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(m["flip_pairs"].as_array().unwrap().len(), 4);
    assert_eq!(m["self_closed"].as_array().unwrap().len(), 1);
    assert!(kotriple("mnemonic")
        .stdout
        .contains("equals the stored table"));
}

#[test]
fn product_two_six_upper() {
    let out = kotriple("product 2_U 6_U --json");
    assert_eq!(out.code, 0);
    let r: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r["class"], "0_U");
    assert_eq!(r["predicted"], r["extracted"]);
    assert!(r["checks"].as_object().unwrap().values().all(|v| v == true));
}

#[test]
fn traditional_failure_names_relation() {
    let out = kotriple("product 2_U 2_U --traditional --dirac D");
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("JD = ±DJ"), "{}", out.stdout);
    let ok = kotriple("product 0_U 4_U --traditional --dirac D");
    assert_eq!(ok.code, 0, "{}", ok.stdout);
}

#[test]
fn traditional_odd_first_factor() {
    let out = kotriple("product 1_U 2_U --traditional");
    assert_eq!(out.code, 1);
    let swapped = kotriple("product 2_L 1_U --traditional --dirac Dtilde");
    assert_eq!(swapped.code, 1);
}

#[test]
fn mixed_variants_exit_one() {
    let out = kotriple("product 0_U 0_L");
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("variant mismatch"));
    let json = kotriple("product 0_U 0_L --json");
    let v: Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "sign");
}

#[test]
fn unsupported_convention_is_usage_error() {
    assert_eq!(kotriple("product 2_U 1_U --convention second").code, 2);
    assert_eq!(kotriple("product 1_U 2_U --convention first").code, 2);
    assert_eq!(kotriple("product 1_U 3_U --convention second").code, 0);
}

#[test]
fn parse_errors_exit_two() {
    for args in [
        "kotriple table periodic",
        "kotriple product 9_U 1_U",
        "kotriple product 2_U 2_X",
        "kotriple product 2_U 2_U --dirac D",
        "kotriple product 2_U 2_U --traditional --convention first",
        "kotriple exemplar",
    ] {
        let err = Cli::try_parse_from(args.split_whitespace()).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{args}");
    }
}

#[test]
fn sweep_counts_and_determinism() {
    let serial = kotriple("sweep --json");
    assert_eq!(serial.code, 0, "{}", serial.stdout);
    let r: Value = serde_json::from_str(&serial.stdout).unwrap();
    assert_eq!(r["counts"]["graded_same_variant_pairs"], 128);
    assert_eq!(r["counts"]["graded_mixed_variant_pairs"], 128);
    assert_eq!(r["counts"]["graded_same_variant_runs"], 192);
    assert_eq!(r["counts"]["traditional_defined"], 32);
    let parallel = kotriple("sweep --parallel --json");
    let p: Value = serde_json::from_str(&parallel.stdout).unwrap();
    assert_eq!(r["checks"], p["checks"]);
    assert_eq!(r["counts"], p["counts"]);
}

#[test]
fn dga_check_passes() {
    let out = kotriple("dga-check");
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("PASS  exterior "));
    assert!(out.stdout.contains("reassociation (second)"));
}

#[test]
fn product_out_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("kotriple-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("product.json");
    let out = kotriple(&format!("product 3_L 5_L --out {}", path.display()));
    assert_eq!(out.code, 0, "{}", out.stdout);
    let t = RealSpectralTriple::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(validate(&t).unwrap().to_string(), "0_L");
    assert_eq!(t.hilbert_dim, 16);

    let ex = dir.join("exemplar.json");
    let out = kotriple(&format!("exemplar 6_U --out {}", ex.display()));
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("exemplar 6_U"));
    let t = RealSpectralTriple::from_json(&std::fs::read_to_string(&ex).unwrap()).unwrap();
    assert_eq!(validate(&t).unwrap().to_string(), "6_U");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unwritable_out_path() {
    let out = kotriple("exemplar 0_U --out /nonexistent-dir/x.json");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("cannot write"));
}
