use std::path::Path;

use chernflat_core::acs::{self, ComplexSplitting};
use chernflat_core::classify::{self, NormalForm};
use chernflat_core::constructions::{self, CATALOG_NAMES};
use chernflat_core::deform;
use chernflat_core::forms::{self, CoframeLabels};
use chernflat_core::io::{self, AlgebraFile, Loaded};
use chernflat_core::{
    random, AlmostComplexStructure, ExactMatrix, GaussianRational, HermitianMetric, LieAlgebra, Rational, Scalar,
};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::report::{self, CliError, Report, FAILED, INPUT};
use crate::Mode;

type G = GaussianRational;

/// Named matrices reported alongside a normal form.
type Extras = Vec<(&'static str, ExactMatrix)>;

fn load(source: &str) -> Result<Loaded, CliError> {
    io::load(source).map_err(|e| CliError::Input(format!("{source}: [{}] {e}", e.code())))
}

/// A real algebra with a complex structure, as most commands require.
fn load_with_j(source: &str) -> Result<(LieAlgebra<Rational>, AlmostComplexStructure), CliError> {
    match load(source)? {
        Loaded::Real { algebra, j: Some(j) } => Ok((algebra, j)),
        Loaded::Real { j: None, .. } => Err(CliError::Input(format!("{source}: no complex structure \"J\" given"))),
        Loaded::Complex { .. } => Err(CliError::Input(format!("{source}: expected a real algebra (field \"Q\")"))),
    }
}

fn precondition(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

fn file_value(file: &AlgebraFile) -> Value {
    serde_json::to_value(file).expect("serializable")
}

/// Expands directories into their `.json` files, in name order.
fn expand_sources(sources: &[String]) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    for s in sources {
        let path = Path::new(s);
        if !s.starts_with('@') && path.is_dir() {
            let entries = std::fs::read_dir(path).map_err(|e| CliError::Input(format!("{s}: {e}")))?;
            let mut files: Vec<String> = entries
                .filter_map(Result::ok)
                .map(|e| e.path())
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
                .map(|p| p.display().to_string())
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(s.clone());
        }
    }
    Ok(out)
}

struct Check {
    name: &'static str,
    /// `None` when skipped because a prerequisite failed.
    passed: Option<bool>,
    detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name, passed: Some(passed), detail: detail.into() }
    }

    fn status(&self) -> &'static str {
        match self.passed {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "skipped",
        }
    }
}

struct Verified {
    dim: usize,
    field: &'static str,
    checks: Vec<Check>,
    notes: Vec<(&'static str, String)>,
}

impl Verified {
    fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed == Some(true))
    }
}

fn nilpotency<T: Scalar>(g: &LieAlgebra<T>) -> Check {
    match g.nilpotency_step() {
        Some(k) => Check::new("nilpotent", true, format!("{k}-step")),
        None => Check::new("nilpotent", false, "lower central series stabilizes above zero"),
    }
}

fn verify_one(source: &str, metric: Option<&ExactMatrix>) -> Result<Verified, CliError> {
    let jacobi = || Check::new("jacobi", true, "");
    let (g, j) = match load(source)? {
        Loaded::Complex { algebra } => {
            return Ok(Verified {
                dim: algebra.dim(),
                field: "Qi",
                checks: vec![jacobi(), nilpotency(&algebra)],
                notes: Vec::new(),
            })
        }
        Loaded::Real { algebra, j: None } => {
            let notes = vec![("center_dim", algebra.center().dim().to_string())];
            return Ok(Verified { dim: algebra.dim(), field: "Q", checks: vec![jacobi(), nilpotency(&algebra)], notes });
        }
        Loaded::Real { algebra, j: Some(j) } => (algebra, j),
    };
    let fail = |e: acs::AcsError| CliError::Input(format!("{source}: {e}"));
    let mut checks = vec![jacobi(), nilpotency(&g)];

    let cf = acs::is_chern_flat(&g, &j).map_err(fail)?;
    let witness = cf.frame_witness.as_ref().or(cf.basis_witness.as_ref());
    checks.push(Check::new("chern_flat", cf.holds, witness.map(|w| format!("nonzero bracket {w}")).unwrap_or_default()));

    let s = ComplexSplitting::split(&g, &j).map_err(fail)?;
    let qk = acs::qk_verdict(&g, &j, &s).map_err(fail)?;
    let detail = [("brackets", &qk.brackets), ("coframe", &qk.coframe), ("real form", &qk.real_form)]
        .iter()
        .filter_map(|(name, w)| w.as_ref().map(|w| format!("{name}: {w}")))
        .collect::<Vec<_>>()
        .join("; ");
    checks.push(Check::new("qk_chern_flat", qk.holds, detail));

    if cf.holds {
        let inv = acs::check_center_j_invariant(&g, &j).map_err(fail)?;
        checks.push(Check::new("center_j_invariant", inv, ""));
    } else {
        checks.push(Check { name: "center_j_invariant", passed: None, detail: "requires chern_flat".into() });
    }

    let m = s.complex_dim();
    let h = match metric {
        Some(h) => HermitianMetric::new(h.clone()).map_err(|e| CliError::Input(format!("metric: {e}")))?,
        None => HermitianMetric::identity(m),
    };
    if h.dim() != m {
        return Err(CliError::Input(format!("metric is {0}x{0}, {source} has complex dimension {m}", h.dim())));
    }
    let qkaehler = forms::is_quasi_kaehler(&s, &h).map_err(|e| CliError::Input(format!("{source}: {e}")))?;
    let label = if metric.is_some() { "given metric" } else { "identity metric" };
    checks.push(Check::new("quasi_kaehler", qkaehler, label));

    let nij = acs::nijenhuis(&g, &j).map_err(fail)?;
    let notes = vec![
        ("center_dim", g.center().dim().to_string()),
        ("complex_center_dim", acs::complex_center_dim(&g, &j).map_err(fail)?.to_string()),
        ("nijenhuis", if nij.is_zero() { "zero".into() } else { "nonzero".into() }),
    ];
    Ok(Verified { dim: g.dim(), field: "Q", checks, notes })
}

pub fn verify(sources: &[String], metric: Option<&Path>) -> Result<Report, CliError> {
    let metric = match metric {
        None => None,
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            Some(io::parse_matrix::<G>(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?)
        }
    };
    let sources = expand_sources(sources)?;
    if sources.is_empty() {
        return Err(CliError::Input("no algebra files found".into()));
    }
    let mut table = String::new();
    let mut results = Vec::new();
    let mut code = 0;
    for source in &sources {
        match verify_one(source, metric.as_ref()) {
            Ok(v) => {
                let ok = v.ok();
                if !ok {
                    code = code.max(FAILED);
                }
                table.push_str(&format!("{source} (dim {}, field {})\n", v.dim, v.field));
                let mut lines: Vec<(String, String)> = v
                    .checks
                    .iter()
                    .map(|c| (c.name.to_string(), format!("{:<7} {}", c.status(), c.detail)))
                    .collect();
                lines.extend(v.notes.iter().map(|(k, x)| (k.to_string(), x.clone())));
                lines.push(("verdict".into(), if ok { "verified".into() } else { "failed".into() }));
                table.push_str(&report::rows(&lines, 2));
                results.push(json!({
                    "source": source,
                    "dim": v.dim,
                    "field": v.field,
                    "checks": v.checks.iter().map(|c| json!({
                        "name": c.name,
                        "passed": c.passed,
                        "detail": c.detail,
                    })).collect::<Vec<_>>(),
                    "notes": v.notes.iter().map(|(k, x)| (k.to_string(), Value::String(x.clone()))).collect::<serde_json::Map<_, _>>(),
                    "verified": ok,
                }));
            }
            Err(CliError::Input(msg)) if sources.len() > 1 => {
                code = INPUT;
                table.push_str(&format!("{source}\n  error  {msg}\n"));
                results.push(json!({ "source": source, "error": msg }));
            }
            Err(e) => return Err(e),
        }
    }
    let json = if results.len() == 1 { results.pop().expect("one result") } else { Value::Array(results) };
    Ok(Report::new(table, json, code))
}

/// `c Zbk` terms of a holomorphic bracket, e.g. `Zb3` or `(1/2+i) Zb1 + Zb2`.
fn antiholomorphic_sum(v: &[G]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            if c.is_one() {
                format!("Zb{}", k + 1)
            } else if (-c.clone()).is_one() {
                format!("-Zb{}", k + 1)
            } else {
                format!("({c}) Zb{}", k + 1)
            }
        })
        .collect();
    terms.join(" + ")
}

fn normal_form_report(source: &str, mode: Mode, nf: &NormalForm, extra: Vec<(&str, &ExactMatrix)>) -> Result<(Report, String), CliError> {
    let m = nf.splitting.complex_dim();
    let brackets = nf.holomorphic_brackets();
    let relations: Vec<(usize, usize, usize, G)> = brackets
        .iter()
        .flat_map(|(a, b, v)| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (*a, *b, k, c.clone())))
        .collect();
    let (model, model_j) = constructions::qk_model(m, &relations).map_err(precondition)?;
    let model_text = io::write_real(&model, Some(&model_j));

    let mode_name = match mode {
        Mode::Dim4 => "dim4",
        Mode::Center1 => "center1",
    };
    let mut table = format!("{source}: {mode_name} normal form, complex dimension {m}\n");
    table.push_str("frame change (column k is the new Z_k in the split frame)\n");
    table.push_str(&report::matrix(&io::matrix_rows(&nf.change), 2));
    table.push_str("brackets (all others zero)\n");
    for (a, b, v) in &brackets {
        table.push_str(&format!("  [Z{}, Z{}] = {}\n", a + 1, b + 1, antiholomorphic_sum(v)));
    }
    let mut json = json!({
        "source": source,
        "mode": mode_name,
        "complex_dim": m,
        "change": io::matrix_rows(&nf.change),
        "brackets": brackets.iter().map(|(a, b, v)| json!({
            "i": a + 1,
            "j": b + 1,
            "out": v.iter().enumerate().filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| json!({ "k": k + 1, "coeff": c.to_string() })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "complexified": file_value(&AlgebraFile::from_complex(nf.splitting.constants())),
        "model": file_value(&AlgebraFile::from_real(&model, Some(&model_j))),
    });
    for (name, mat) in extra {
        table.push_str(&format!("{name}\n"));
        table.push_str(&report::matrix(&io::matrix_rows(mat), 2));
        json[name] = json!(io::matrix_rows(mat));
    }
    Ok((Report::new(table, json, 0), model_text))
}

fn reduce(g: &LieAlgebra<Rational>, j: &AlmostComplexStructure, mode: Mode) -> Result<(NormalForm, Extras), CliError> {
    match mode {
        Mode::Dim4 => Ok((classify::dim4_normal_form(g, j).map_err(precondition)?, Vec::new())),
        Mode::Center1 => {
            let f = classify::center_one_normal_form(g, j).map_err(precondition)?;
            Ok((f.normal_form, vec![("omega", f.omega), ("congruence", f.congruence)]))
        }
    }
}

pub fn normal_form(source: &str, mode: Mode, write_algebra: Option<&Path>) -> Result<Report, CliError> {
    let (g, j) = load_with_j(source)?;
    let (nf, extra) = reduce(&g, &j, mode)?;
    let (report, model_text) = normal_form_report(source, mode, &nf, extra.iter().map(|(n, m)| (*n, m)).collect())?;
    if let Some(path) = write_algebra {
        std::fs::write(path, model_text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

pub fn deform(source: &str, dump_kernel: bool) -> Result<Report, CliError> {
    let (g, j) = load_with_j(source)?;
    let d = deform::deformation_space(&g, &j).map_err(precondition)?;
    let constraints = deform::structural_constraints_check(&d, &g);
    let j_stable = deform::is_j_stable(&d, &j);
    let lines = vec![
        ("kernel_dim".to_string(), d.kernel_dim().to_string()),
        ("inner_rank".to_string(), d.inner_rank.to_string()),
        ("quotient_dim".to_string(), format!("{} (real)", d.quotient_dim)),
        ("kills_derived_into_center".to_string(), constraints.to_string()),
        ("j_stable".to_string(), j_stable.to_string()),
    ];
    let mut table = format!("{source}\n{}", report::rows(&lines, 2));
    let kernel: Vec<Vec<Vec<String>>> = d.kernel_basis.iter().map(io::matrix_rows).collect();
    if dump_kernel {
        for (k, rows) in kernel.iter().enumerate() {
            table.push_str(&format!("kernel basis {}\n", k + 1));
            table.push_str(&report::matrix(rows, 2));
        }
    }
    let mut json = json!({
        "source": source,
        "kernel_dim": d.kernel_dim(),
        "inner_rank": d.inner_rank,
        "quotient_dim": d.quotient_dim,
        "kills_derived_into_center": constraints,
        "j_stable": j_stable,
    });
    if dump_kernel {
        json["kernel_basis"] = json!(kernel);
    }
    let code = if constraints && j_stable { 0 } else { FAILED };
    Ok(Report::new(table, json, code))
}

pub fn lemma(source: &str, show_solutions: bool) -> Result<Report, CliError> {
    let (g, j) = load_with_j(source)?;
    let s = ComplexSplitting::split(&g, &j).map_err(|e| CliError::Input(format!("{source}: {e}")))?;
    let r = forms::lemma_tosatti_space(&s).map_err(precondition)?;
    let labels = CoframeLabels::plain(s.complex_dim());
    let solutions: Vec<String> = r.solutions.iter().map(|f| f.format_with(&labels)).collect();
    let lines = vec![
        ("unknowns".to_string(), format!("{} (real)", r.unknowns)),
        ("solution_dim".to_string(), format!("{} (real)", r.solution_dim)),
        ("all_closed".to_string(), r.all_closed().to_string()),
    ];
    let mut table = format!("{source}\n{}", report::rows(&lines, 2));
    if show_solutions {
        for (k, f) in solutions.iter().enumerate() {
            table.push_str(&format!("  beta{} = {f}\n", k + 1));
        }
    }
    for &k in &r.counterexamples {
        table.push_str(&format!("  not closed: {}\n", solutions[k]));
    }
    let mut json = json!({
        "source": source,
        "unknowns": r.unknowns,
        "solution_dim": r.solution_dim,
        "all_closed": r.all_closed(),
        "counterexamples": r.counterexamples.iter().map(|&k| solutions[k].clone()).collect::<Vec<_>>(),
    });
    if show_solutions {
        json["solutions"] = json!(solutions);
    }
    Ok(Report::new(table, json, if r.all_closed() { 0 } else { FAILED }))
}

pub fn construct(source: &str, output: Option<&Path>) -> Result<Report, CliError> {
    let h = match load(source)? {
        Loaded::Real { algebra, .. } => algebra,
        Loaded::Complex { .. } => return Err(CliError::Input(format!("{source}: expected a real algebra (field \"Q\")"))),
    };
    let (g, j) = constructions::conjugate_complexification(&h).map_err(precondition)?;
    let text = io::write_real(&g, Some(&j));
    match output {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Report::new(
                format!("wrote {} (dim {})\n", path.display(), g.dim()),
                json!({ "output": path.display().to_string(), "dim": g.dim() }),
                0,
            ))
        }
        None => Ok(Report::raw(text + "\n")),
    }
}

pub fn catalog(name: Option<&str>) -> Result<Report, CliError> {
    if let Some(name) = name {
        let e = constructions::catalog(name.trim_start_matches('@')).map_err(|e| CliError::Input(e.to_string()))?;
        return Ok(Report::raw(io::write_real(&e.algebra, e.j.as_ref()) + "\n"));
    }
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    for name in CATALOG_NAMES {
        let e = constructions::catalog(name).expect("catalog names resolve");
        lines.push((format!("@{name}"), format!("dim {:<3} {}", e.algebra.dim(), e.advertised)));
        entries.push(json!({ "name": name, "dim": e.algebra.dim(), "advertised": e.advertised.to_string() }));
    }
    Ok(Report::new(report::rows(&lines, 0), Value::Array(entries), 0))
}

fn scrambled(
    g: &LieAlgebra<Rational>,
    j: &AlmostComplexStructure,
    rng: &mut random::TestRng,
    bound: i64,
) -> Result<(LieAlgebra<Rational>, AlmostComplexStructure), CliError> {
    let a = random::invertible_gaussian(rng, j.dim() / 2, bound);
    constructions::scramble(g, j, &a).map_err(precondition)
}

pub fn scramble(source: &str, seed: u64, bound: i64) -> Result<Report, CliError> {
    if bound < 1 {
        return Err(CliError::Input("--bound must be at least 1".into()));
    }
    let (g, j) = load_with_j(source)?;
    let (g2, j2) = scrambled(&g, &j, &mut random::rng(seed), bound)?;
    Ok(Report::raw(io::write_real(&g2, Some(&j2)) + "\n"))
}

pub fn scramble_test(source: &str, mode: Mode, seed: u64, trials: usize) -> Result<Report, CliError> {
    let (g, j) = load_with_j(source)?;
    let (reference, _) = reduce(&g, &j, mode)?;
    let expected = reference.holomorphic_brackets();
    let mut rng = random::rng(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let (g2, j2) = scrambled(&g, &j, &mut rng, 1)?;
        match reduce(&g2, &j2, mode) {
            Ok((nf, _)) if nf.holomorphic_brackets() == expected => {}
            Ok(_) => failures.push(format!("trial {}: different normal form", trial + 1)),
            Err(e) => failures.push(format!("trial {}: {e}", trial + 1)),
        }
    }
    let passed = trials - failures.len();
    let mut table = format!("{source}: {passed} of {trials} scrambles recovered the normal form (seed {seed})\n");
    for f in &failures {
        table.push_str(&format!("  {f}\n"));
    }
    let json = json!({ "source": source, "seed": seed, "trials": trials, "passed": passed, "failures": failures });
    Ok(Report::new(table, json, if failures.is_empty() { 0 } else { FAILED }))
}
