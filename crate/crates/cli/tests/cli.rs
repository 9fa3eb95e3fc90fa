use std::path::PathBuf;
use std::process::{Command, Output};

use chernflat_core::io::{self, Loaded};
use chernflat_core::{LieAlgebra, Matrix, Rational, RationalMatrix};
use num_traits::Zero;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chernflat")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    (code(&out), serde_json::from_slice(&out.stdout).expect("json output"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_iwasawa_passes() {
    let (c, v) = json(&["verify", "@iwasawa_j3"]);
    assert_eq!(c, 0);
    assert_eq!(v["verified"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        ["jacobi", "nilpotent", "chern_flat", "qk_chern_flat", "center_j_invariant", "quasi_kaehler"]
    );
}

#[test]
fn verify_bicomplex_fails_with_table() {
    let out = run(&["verify", "@complex_heisenberg_bicomplex"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("chern_flat          pass"), "{text}");
    assert!(text.contains("qk_chern_flat       FAIL"), "{text}");
    assert!(text.contains("verdict             failed"), "{text}");
}

#[test]
fn malformed_inputs_exit_2() {
    let bad = scratch("malformed.json");
    std::fs::write(&bad, "{\"dim\": 2, \"brackets\": [").unwrap();
    for source in [bad.to_str().unwrap(), "/nonexistent/algebra.json", "@no_such_entry"] {
        let out = run(&["verify", source]);
        assert_eq!(code(&out), 2, "{source}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    let order = scratch("index_order.json");
    std::fs::write(&order, r#"{"dim": 3, "brackets": [{"i": 2, "j": 1, "out": [{"k": 3, "coeff": "1"}]}]}"#).unwrap();
    let out = run(&["verify", order.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("[index-order]"));
}

#[test]
fn verify_directory_batch() {
    let dir = scratch("batch");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["iwasawa_j3", "heisenberg3"] {
        let out = run(&["catalog", name]);
        std::fs::write(dir.join(format!("{name}.json")), out.stdout).unwrap();
    }
    std::fs::write(dir.join("notes.txt"), "ignored").unwrap();
    let (c, v) = json(&["verify", dir.to_str().unwrap()]);
    assert_eq!(c, 0);
    let sources: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["source"].as_str().unwrap()).collect();
    assert_eq!(sources.len(), 2);
    assert!(sources[0].ends_with("heisenberg3.json") && sources[1].ends_with("iwasawa_j3.json"));

    let bicomplex = run(&["catalog", "complex_heisenberg_bicomplex"]);
    std::fs::write(dir.join("z.json"), bicomplex.stdout).unwrap();
    assert_eq!(code(&run(&["verify", dir.to_str().unwrap()])), 1);
    std::fs::write(dir.join("zz.json"), "not json").unwrap();
    assert_eq!(code(&run(&["verify", dir.to_str().unwrap()])), 2);
}

#[test]
fn verify_with_metric() {
    let good = scratch("metric.json");
    std::fs::write(&good, r#"[["2", "1+i", "0"], ["1-i", "3", "i"], ["0", "-i", "1"]]"#).unwrap();
    let (c, v) = json(&["verify", "@iwasawa_j3", "--metric", good.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["checks"][5]["detail"], "given metric");

    let skew = scratch("not_hermitian.json");
    std::fs::write(&skew, r#"[["1", "1"], ["0", "1"]]"#).unwrap();
    assert_eq!(code(&run(&["verify", "@iwasawa_j3", "--metric", skew.to_str().unwrap()])), 2);
    let small = scratch("small_metric.json");
    std::fs::write(&small, r#"[["1", "0"], ["0", "1"]]"#).unwrap();
    assert_eq!(code(&run(&["verify", "@iwasawa_j3", "--metric", small.to_str().unwrap()])), 2);
}

fn single_bracket(v: &Value) -> Vec<(u64, u64, u64, String)> {
    v["brackets"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|b| {
            b["out"].as_array().unwrap().iter().map(move |t| {
                (b["i"].as_u64().unwrap(), b["j"].as_u64().unwrap(), t["k"].as_u64().unwrap(), t["coeff"].as_str().unwrap().to_string())
            })
        })
        .collect()
}

#[test]
fn normal_form_center1_on_iwasawa() {
    let (c, v) = json(&["normal-form", "@iwasawa_j3", "--mode", "center1"]);
    assert_eq!(c, 0);
    assert_eq!(single_bracket(&v), [(1, 2, 3, "1".to_string())]);
    assert_eq!(v["complexified"]["field"], "Qi");
    assert_eq!(v["model"]["dim"], 6);
    assert!(v["congruence"].is_array() && v["omega"].is_array());
}

#[test]
fn normal_form_dim4_on_scrambled_file() {
    let scrambled = scratch("scrambled_dim4.json");
    let out = run(&["scramble", "@dim4_model", "--seed", "17", "--bound", "2"]);
    assert_eq!(code(&out), 0);
    std::fs::write(&scrambled, &out.stdout).unwrap();
    let model = scratch("dim4_normalized.json");
    let (c, v) = json(&[
        "normal-form",
        scrambled.to_str().unwrap(),
        "--mode",
        "dim4",
        "--write-algebra",
        model.to_str().unwrap(),
    ]);
    assert_eq!(c, 0);
    assert_eq!(single_bracket(&v), [(1, 2, 3, "1".to_string())]);
    assert_eq!(code(&run(&["verify", model.to_str().unwrap()])), 0);
}

#[test]
fn normal_form_rejections() {
    let out = run(&["normal-form", "@abelian(4)", "--mode", "dim4"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("integrable"));
    let out = run(&["normal-form", "@complex_heisenberg_bicomplex", "--mode", "center1"]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&run(&["normal-form", "@heisenberg3", "--mode", "center1"])), 2);
}

/// Nullity of the deformation equations minus the rank of the inner directions,
/// assembled here from the structure constants alone.
fn quotient_oracle(g: &LieAlgebra<Rational>, j: &RationalMatrix) -> usize {
    let n = g.dim();
    let c = |a: usize, b: usize, k: usize| g.structure_constant(a, b, k);
    let mut rows = Vec::new();
    // (LJ + JL)_{ab}
    for a in 0..n {
        for b in 0..n {
            let mut row = vec![Rational::zero(); n * n];
            for k in 0..n {
                row[a * n + k] += &j[(k, b)];
                row[k * n + b] += &j[(a, k)];
            }
            rows.push(row);
        }
    }
    // L[e_x, e_y] + [L e_x, e_y] and L[e_x, e_y] + [e_x, L e_y]
    for x in 0..n {
        for y in 0..n {
            for a in 0..n {
                let mut left = vec![Rational::zero(); n * n];
                let mut right = vec![Rational::zero(); n * n];
                for k in 0..n {
                    left[a * n + k] += &c(x, y, k);
                    right[a * n + k] += &c(x, y, k);
                    left[k * n + x] += &c(k, y, a);
                    right[k * n + y] += &c(x, k, a);
                }
                rows.push(left);
                rows.push(right);
            }
        }
    }
    let nullity = n * n - Matrix::from_rows(rows).unwrap().rank();
    let inner: Vec<Vec<Rational>> = (0..n)
        .map(|x| (0..n * n).map(|v| c(x, v % n, v / n)).collect())
        .collect();
    nullity - Matrix::from_rows(inner).unwrap().rank()
}

#[test]
fn deform_reports() {
    let (c, v) = json(&["deform", "@iwasawa_j3"]);
    assert_eq!(c, 0);
    assert_eq!(v["quotient_dim"], 0);
    let (_, v) = json(&["deform", "@abelian(6)"]);
    assert_eq!(v["quotient_dim"], 18);
    assert_eq!(v["inner_rank"], 0);

    let (c, v) = json(&["deform", "@dim5_irreducible", "--dump-kernel"]);
    assert_eq!(c, 0);
    let Loaded::Real { algebra, j: Some(j) } = io::load("@dim5_irreducible").unwrap() else { panic!() };
    assert_eq!(v["quotient_dim"].as_u64().unwrap() as usize, quotient_oracle(&algebra, j.matrix()));
    assert_eq!(v["kernel_basis"].as_array().unwrap().len() as u64, v["kernel_dim"].as_u64().unwrap());
    assert_eq!(code(&run(&["deform", "@complex_heisenberg_bicomplex"])), 1);
}

#[test]
fn lemma_reports() {
    let (c, v) = json(&["lemma", "@iwasawa_j3"]);
    assert_eq!(c, 0);
    assert_eq!(v["all_closed"], true);
    let (c, v) = json(&["lemma", "@abelian(6)", "--show-solutions"]);
    assert_eq!(c, 0);
    assert_eq!(v["solution_dim"], v["unknowns"]);
    assert_eq!(v["solutions"].as_array().unwrap().len() as u64, v["solution_dim"].as_u64().unwrap());
    let (c, v) = json(&["lemma", "@centro1_model(2)"]);
    assert_eq!(c, 0);
    assert_eq!(v["all_closed"], true);
}

#[test]
fn construct_doubles_heisenberg() {
    let path = scratch("doubled.json");
    assert_eq!(code(&run(&["construct", "@heisenberg3", "-o", path.to_str().unwrap()])), 0);
    let (c, v) = json(&["verify", path.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["dim"], 6);
    let piped = run(&["construct", "@heisenberg3"]);
    assert_eq!(stdout(&piped).trim(), std::fs::read_to_string(&path).unwrap().trim());
    let filiform = scratch("filiform.json");
    std::fs::write(
        &filiform,
        r#"{"dim": 4, "brackets": [{"i": 1, "j": 2, "out": [{"k": 3, "coeff": 1}]}, {"i": 1, "j": 3, "out": [{"k": 4, "coeff": 1}]}]}"#,
    )
    .unwrap();
    let out = run(&["construct", filiform.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2-step"));
}

#[test]
fn catalog_listing_and_entries() {
    let (c, v) = json(&["catalog"]);
    assert_eq!(c, 0);
    assert!(v.as_array().unwrap().iter().any(|e| e["name"] == "iwasawa_j3" && e["advertised"] == "qk-chern-flat"));
    let out = run(&["catalog", "@centro1_model(2)"]);
    assert!(matches!(io::parse_algebra(&stdout(&out)).unwrap(), Loaded::Real { j: Some(_), .. }));
    assert_eq!(code(&run(&["catalog", "centro1_model(0)"])), 2);
}

#[test]
fn scramble_test_recovers() {
    let (c, v) = json(&["scramble-test", "@dim4_model", "--mode", "dim4", "--seed", "4", "--trials", "6"]);
    assert_eq!(c, 0);
    assert_eq!(v["passed"], 6);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["verify", "@centro1_model(1)"],
        vec!["normal-form", "@dim4_model", "--mode", "dim4", "--format", "json"],
        vec!["scramble", "@iwasawa_j3", "--seed", "9"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}
