//! The `shv` command-line front end.
//!
//! Every command writes one JSON document to standard output. Exit codes:
//! 0 on success, 1 when a check or computation fails, 2 on malformed input.

pub mod docs;

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use shv_core::conformal::{
    check_jacobi, check_skew, classify_rank_one_extension, jth_products, CheckReport, ConformalAlgebraSpec,
    ConformalError,
};
use shv_core::induced::{
    generator_name, parse_generator, random_vector, simplicity_probe, strategy_registry, validate_conditions, BasisKey,
    InducedError, InducedModule, InducedVector, ProbeOutcome, ProbeTrace,
};
use shv_core::order::order_registry;
use shv_core::superalgebra::{
    bracket, check_ns_embedding, generator_bracket, lie_of, quotient_algebra, AlgebraError, AlgebraTag, SuperElement,
};

/// Largest `--range` accepted by the table commands.
pub const MAX_RANGE: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed input or arguments; exit code 2.
    Usage(String),
    /// A failed check or computation; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<InducedError> for CliError {
    fn from(e: InducedError) -> Self {
        match e {
            InducedError::InvalidModule(_) | InducedError::InconsistentHomomorphism(_) | InducedError::Registry(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Precondition(_) | AlgebraError::BadIndex { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<ConformalError> for CliError {
    fn from(e: ConformalError) -> Self {
        CliError::Failure(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "shv",
    version,
    about = "Exact computations in the super Heisenberg-Virasoro algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bracket of two algebra elements.
    Bracket {
        x: String,
        y: String,
        #[arg(long, default_value = "ramond", value_parser = ["ramond", "ns"])]
        algebra: String,
    },
    /// Lie conformal superalgebra computations.
    #[command(subcommand)]
    Conformal(ConformalCommand),
    /// Compare the mode algebra of a conformal algebra with the Ramond bracket.
    LieOf {
        #[arg(long)]
        range: i64,
        #[arg(long, default_value = "s", value_parser = ["s", "v"])]
        algebra: String,
    },
    /// Check the embedding of the Neveu-Schwarz algebra into the Ramond algebra.
    NsCheck {
        #[arg(long)]
        range: i64,
    },
    /// The finite quotient of a subalgebra by a deeper one.
    Quotient {
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long, allow_hyphen_values = true)]
        beta: i64,
        #[arg(long, allow_hyphen_values = true)]
        z: i64,
    },
    /// PBW normal form of a word applied to a base vector.
    NormalForm {
        #[command(flatten)]
        module: ModuleArgs,
        /// Space-separated generators, e.g. "L_1 I_-1".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Basis element of the base module as inline JSON (`1`, `["G_0"]`); default the generating vector.
        #[arg(long)]
        basis: Option<String>,
    },
    /// Act by a generator on an induced vector.
    Act {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, allow_hyphen_values = true)]
        generator: String,
        #[arg(long)]
        vector: String,
    },
    /// Validate a base module, then lower vectors into it.
    Probe {
        #[command(flatten)]
        module: ModuleArgs,
        /// Vector to lower; repeatable.
        #[arg(long)]
        vector: Vec<String>,
        /// Number of random vectors to draw.
        #[arg(long, requires = "seed")]
        random: Option<usize>,
        /// Weight cap for random vectors.
        #[arg(long, default_value_t = 6)]
        max_weight: u64,
        /// RNG seed; required with --random.
        #[arg(long)]
        seed: Option<u64>,
        /// Terms per random vector, at most.
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
        /// Reading of the principal order.
        #[arg(long)]
        order: Option<String>,
        /// Sample size when testing base-module hypotheses.
        #[arg(long, default_value_t = 4)]
        sample_bound: usize,
    },
    /// Check the hypotheses on a base module.
    ValidateModule {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 4)]
        sample_bound: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConformalCommand {
    /// Skew-symmetry and Jacobi identity of a built-in algebra or an extension.
    Check {
        #[arg(long, default_value = "s", value_parser = ["s", "v"])]
        algebra: String,
        /// Extension parameters {"a","b","c","phi","psi"} replacing the built-in algebra.
        #[arg(long)]
        ansatz: Option<String>,
    },
    /// Classify odd rank-one extensions with polynomial degrees up to D.
    Classify {
        #[arg(long)]
        degree: u32,
    },
    /// All j-th products.
    Products {
        #[arg(long, default_value = "s", value_parser = ["s", "v"])]
        algebra: String,
    },
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    /// Base module document.
    #[arg(long)]
    pub module: String,
    /// Straightening strategy.
    #[arg(long)]
    pub strategy: Option<String>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run `shv` with the given arguments (program name first).
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let (doc, failure) = match execute(cli.command, stdin) {
        Ok(Report { doc, failure }) => (Some(doc), failure),
        Err(e) => (None, Some(e)),
    };
    let stdout = doc.map(|d| format!("{d}\n")).unwrap_or_default();
    match failure {
        None => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Some(e) => Outcome {
            code: e.code(),
            stdout,
            stderr: format!("error: {}\n", e.message()),
        },
    }
}

/// A document to print, and the failure to report alongside it.
struct Report {
    doc: Value,
    failure: Option<CliError>,
}

impl Report {
    fn ok(doc: Value) -> Self {
        Report { doc, failure: None }
    }

    fn check(doc: Value, passed: bool, message: impl FnOnce() -> String) -> Self {
        let failure = (!passed).then(|| CliError::Failure(message()));
        Report { doc, failure }
    }
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<Report, CliError> {
    match command {
        Command::Bracket { x, y, algebra } => {
            let tag = docs::parse_tag(&algebra)?;
            let x = docs::parse_element(&docs::load(&x, stdin)?, tag)?;
            let y = docs::parse_element(&docs::load(&y, stdin)?, tag)?;
            Ok(Report::ok(docs::render_element(&bracket(&x, &y)?)))
        }
        Command::Conformal(sub) => conformal(sub, stdin),
        Command::LieOf { range, algebra } => lie_of_cmd(range, &algebra),
        Command::NsCheck { range } => {
            check_range(range)?;
            let r = check_ns_embedding(range);
            let failures: Vec<Value> = r
                .failures
                .iter()
                .map(|(x, y)| json!([x.to_string(), y.to_string()]))
                .collect();
            let passed = r.passed();
            let doc = json!({
                "range": range,
                "pairs_checked": r.pairs_checked,
                "injective": r.injective,
                "failures": failures,
                "result": if passed { "pass" } else { "fail" },
            });
            Ok(Report::check(doc, passed, || {
                "the embedding is not an injective homomorphism".into()
            }))
        }
        Command::Quotient { alpha, beta, z } => quotient_cmd(alpha, beta, z),
        Command::NormalForm { module, word, basis } => {
            let m = induced_module(&module, stdin)?;
            let letters = word
                .split_whitespace()
                .map(|g| parse_generator(g).map_err(CliError::from))
                .collect::<Result<Vec<_>, _>>()?;
            let key = match basis {
                Some(b) => {
                    let doc =
                        serde_json::from_str(&b).map_err(|e| CliError::Usage(format!("malformed --basis: {e}")))?;
                    basis_key(&doc, &m)?
                }
                None => m.base().generating_key(),
            };
            let v = m.word_on_base(&letters, key)?;
            Ok(Report::ok(vector_doc(&m, &v)))
        }
        Command::Act {
            module,
            generator,
            vector,
        } => {
            let m = induced_module(&module, stdin)?;
            let g = parse_generator(&generator)?;
            let v = docs::parse_vector(&docs::load(&vector, stdin)?, &m)?;
            Ok(Report::ok(vector_doc(&m, &m.act(g, &v)?)))
        }
        Command::Probe {
            module,
            vector,
            random,
            max_weight,
            seed,
            max_terms,
            order,
            sample_bound,
        } => {
            let m = induced_module(&module, stdin)?;
            let mut vectors = Vec::new();
            for doc in &vector {
                vectors.push(docs::parse_vector(&docs::load(doc, stdin)?, &m)?);
            }
            if let Some(n) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.expect("clap requires --seed"));
                for _ in 0..n {
                    vectors.push(random_vector(&m, &mut rng, max_weight, max_terms, sample_bound));
                }
            }
            if vectors.is_empty() {
                return Err(CliError::Usage("give --vector or --random".into()));
            }
            probe_cmd(&m, &vectors, order.as_deref(), sample_bound)
        }
        Command::ValidateModule { module, sample_bound } => {
            let base = docs::parse_module(&docs::load(&module, stdin)?)?;
            let report = validate_conditions(base.as_ref(), sample_bound);
            let doc = conditions_doc(&report, base.describe());
            let message = report.failure();
            Ok(Report::check(doc, report.passed(), || message.unwrap_or_default()))
        }
    }
}

fn check_range(range: i64) -> Result<(), CliError> {
    if !(0..=MAX_RANGE).contains(&range) {
        return Err(CliError::Usage(format!(
            "--range must lie in 0..={MAX_RANGE}, got {range}"
        )));
    }
    Ok(())
}

fn builtin(algebra: &str) -> ConformalAlgebraSpec {
    match algebra {
        "v" => ConformalAlgebraSpec::heisenberg_virasoro(),
        _ => ConformalAlgebraSpec::super_heisenberg_virasoro(),
    }
}

fn violations_doc(report: &CheckReport) -> Vec<Value> {
    report
        .violations
        .iter()
        .map(|v| json!({ "generators": v.generators, "residual": v.residual.render() }))
        .collect()
}

fn conformal(sub: ConformalCommand, stdin: &mut dyn Read) -> Result<Report, CliError> {
    match sub {
        ConformalCommand::Check { algebra, ansatz } => {
            let (name, spec) = match ansatz {
                Some(doc) => {
                    let a = docs::parse_ansatz(&docs::load(&doc, stdin)?)?;
                    ("ansatz".to_string(), ConformalAlgebraSpec::extension(&a)?)
                }
                None => (algebra.clone(), builtin(&algebra)),
            };
            let (skew, jacobi) = (check_skew(&spec), check_jacobi(&spec));
            let verdict = |r: &CheckReport| if r.passed() { "pass" } else { "fail" };
            let mut doc = json!({ "algebra": name, "skew": verdict(&skew), "jacobi": verdict(&jacobi) });
            if !skew.passed() || !jacobi.passed() {
                doc["violations"] = json!({ "skew": violations_doc(&skew), "jacobi": violations_doc(&jacobi) });
            }
            let passed = skew.passed() && jacobi.passed();
            Ok(Report::check(doc, passed, || {
                "the λ-bracket violates the axioms".into()
            }))
        }
        ConformalCommand::Classify { degree } => {
            let families: Vec<Value> = classify_rank_one_extension(degree)?
                .iter()
                .map(|f| {
                    json!({
                        "a": f.a.to_string(),
                        "b": f.b.to_string(),
                        "c": f.c.to_string(),
                        "phi": f.render_phi(),
                        "psi": f.render_psi(),
                        "parameters": f.parameters,
                    })
                })
                .collect();
            Ok(Report::ok(json!({ "degree_bound": degree, "families": families })))
        }
        ConformalCommand::Products { algebra } => {
            let spec = builtin(&algebra);
            let mut out = Vec::new();
            for x in spec.generators() {
                for y in spec.generators() {
                    let products: Vec<Value> = jth_products(&spec, &x.name, &y.name)?
                        .iter()
                        .map(|(j, p)| json!([j, p.render()]))
                        .collect();
                    out.push(json!({ "pair": [x.name, y.name], "products": products }));
                }
            }
            Ok(Report::ok(json!({ "algebra": algebra, "products": out })))
        }
    }
}

fn lie_of_cmd(range: i64, algebra: &str) -> Result<Report, CliError> {
    check_range(range)?;
    let table = lie_of(&builtin(algebra), -range..=range)?;
    let mut mismatches = Vec::new();
    for ((x, y), got) in &table {
        let want = match generator_bracket(*x, *y) {
            Some((c, g)) => SuperElement::from_terms(AlgebraTag::Ramond, [(g, c)])?,
            None => SuperElement::zero(AlgebraTag::Ramond),
        };
        if *got != want {
            mismatches
                .push(json!({ "pair": [x.to_string(), y.to_string()], "got": got.render(), "want": want.render() }));
        }
    }
    let matches = mismatches.is_empty();
    let doc = json!({
        "algebra": algebra,
        "range": range,
        "pairs_checked": table.len(),
        "mismatches": mismatches,
        "matches": matches,
        "summary": format!("matches 𝔖: {matches}"),
    });
    Ok(Report::check(doc, matches, || {
        "the mode algebra differs from the Ramond bracket".into()
    }))
}

fn quotient_cmd(alpha: i64, beta: i64, z: i64) -> Result<Report, CliError> {
    let q = quotient_algebra(alpha, beta, z)?;
    let survivors: Vec<String> = q.survivors.iter().map(|g| format!("{}{}", g.family, g.index)).collect();
    let table: Vec<Value> = q
        .table
        .iter()
        .map(|((x, y), e)| json!({ "pair": [x.to_string(), y.to_string()], "bracket": e.render() }))
        .collect();
    let violations = q.jacobi_violations();
    let ideal = q.ideal();
    let doc = json!({
        "alpha": alpha,
        "beta": beta,
        "z": z,
        "ideal": {
            "L": ideal.lower_bound(shv_core::superalgebra::Family::L),
            "I": ideal.lower_bound(shv_core::superalgebra::Family::I),
            "G": ideal.lower_bound(shv_core::superalgebra::Family::G),
        },
        "ideal_check": "pass",
        "survivors": survivors,
        "table": table,
        "jacobi": if violations.is_empty() { "pass" } else { "fail" },
    });
    Ok(Report::check(doc, violations.is_empty(), || {
        "the truncated bracket violates Jacobi".into()
    }))
}

fn induced_module(args: &ModuleArgs, stdin: &mut dyn Read) -> Result<InducedModule, CliError> {
    let base = docs::parse_module(&docs::load(&args.module, stdin)?)?;
    let strategy = strategy_registry()
        .resolve(args.strategy.as_deref())
        .map_err(InducedError::from)?;
    Ok(InducedModule::new(base).with_strategy(strategy))
}

fn basis_key(doc: &Value, m: &InducedModule) -> Result<BasisKey, CliError> {
    let probe = json!({ "terms": [{ "coords": [{ "basis": doc, "coeff": "1" }] }] });
    let v = docs::parse_vector(&probe, m)?;
    Ok(v.base_part().into_keys().next().expect("one basis element"))
}

fn vector_doc(m: &InducedModule, v: &InducedVector) -> Value {
    let mut doc = docs::render_vector(v);
    doc["text"] = json!(docs::vector_text(m, v));
    doc
}

fn conditions_doc(report: &shv_core::induced::ConditionsReport, module: Value) -> Value {
    json!({
        "module": module,
        "z": report.z,
        "condition_a": if report.condition_a { "pass" } else { "fail" },
        "condition_b_violations": report.condition_b_violations.iter().map(generator_name).collect::<Vec<_>>(),
        "passed": report.passed(),
    })
}

fn trace_doc(m: &InducedModule, v: &InducedVector, trace: &ProbeTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "generator": generator_name(&s.generator),
                "branch": format!("{:?}", s.branch),
                "degree_before": docs::render_pbw(&s.degree_before),
                "degree": docs::render_pbw(&s.degree),
                "predicted": docs::render_pbw(&s.predicted),
            })
        })
        .collect();
    let mut doc = json!({
        "vector": vector_doc(m, v),
        "start_weight": trace.start_weight,
        "steps": steps,
    });
    match &trace.outcome {
        ProbeOutcome::Reached(coords) => {
            doc["outcome"] = json!("reached");
            doc["terminal"] = docs::render_coords(coords);
            doc["terminal_text"] = json!(docs::coords_text(m.base().as_ref(), coords));
        }
        ProbeOutcome::Vanished { step } => {
            doc["outcome"] = json!("vanished");
            doc["failed_step"] = json!(step);
        }
        ProbeOutcome::NoDescent { step } => {
            doc["outcome"] = json!("no-descent");
            doc["failed_step"] = json!(step);
        }
    }
    doc
}

fn probe_cmd(
    m: &InducedModule,
    vectors: &[InducedVector],
    order: Option<&str>,
    sample_bound: usize,
) -> Result<Report, CliError> {
    let order = order_registry()
        .resolve(order)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let conditions = validate_conditions(m.base().as_ref(), sample_bound);
    let mut doc = json!({
        "order": order.name(),
        "strategy": m.strategy().name(),
        "conditions": conditions_doc(&conditions, m.base().describe()),
    });
    if let Some(message) = conditions.failure() {
        return Ok(Report::check(doc, false, || message));
    }
    let mut traces = Vec::new();
    let mut failed = 0usize;
    for v in vectors {
        if v.is_zero() {
            return Err(CliError::Usage("cannot probe the zero vector".into()));
        }
        let trace = simplicity_probe(m, v, order.as_ref())?;
        if !trace.succeeded() {
            failed += 1;
        }
        traces.push(trace_doc(m, v, &trace));
    }
    doc["probes"] = json!(traces);
    doc["all_succeeded"] = json!(failed == 0);
    Ok(Report::check(doc, failed == 0, || {
        format!("{failed} of {} probes failed", vectors.len())
    }))
}
