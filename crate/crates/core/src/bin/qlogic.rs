use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use qlogic::dbar::{estimate_dbar, separate, DimsStrategy, SearchOutcome, SeparationReport};
use qlogic::formula::{mk_alpha, mk_beta, mk_gamma, mk_p, mk_separator, parse};
use qlogic::subspace::SubspaceJson;
use qlogic::valuation::evaluate_checked;
use qlogic::verify::{run_suite, CheckResult, Suite, VerifyConfig};
use qlogic::{Environment, Error, Formula, Subspace, Tolerance};

const DEFAULT_TRIALS: usize = 10_000;
const DEFAULT_VERIFY_TRIALS: usize = 200;

#[derive(Parser, Debug)]
#[command(name = "qlogic", version, about = "Propositional quantum logic over subspaces of C^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of random trials [default: 10000; 200 per check for verify].
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Singular values below this fraction of the reference are dropped.
    #[arg(long, global = true, default_value_t = 1e-9)]
    rank_threshold: f64,

    /// Ratio width around the threshold treated as ambiguous.
    #[arg(long, global = true, default_value_t = 1e-6)]
    guard_band: f64,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula (inline or @path) on the subspaces in an environment file.
    Eval {
        formula: String,
        #[arg(long, value_name = "FILE")]
        env: PathBuf,
    },
    /// Print one of the built-in formulas.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Random search for the largest value dimension of a formula in C^n.
    Dbar { formula: String, n: usize },
    /// Build and check a formula separating C^m from C^n.
    Separate { m: usize, n: usize },
    /// Run a randomized property suite.
    Verify { suite: Suite },
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// (a | !b) & b
    #[command(name = "P", alias = "p")]
    P { a: String, b: String },
    Alpha { a: String, b: String },
    Gamma { l: usize },
    Beta { l: usize },
    Separator { m: usize, n: usize },
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, kind: "usage", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let (code, kind) = match &e {
            Error::Parse(_) => (2, "parse"),
            Error::InvalidArgument(_) | Error::InvalidTolerance(_) | Error::InvalidIdentifier(_) => (2, "usage"),
            Error::UnboundVariable(_) => (3, "unbound_variable"),
            Error::Certificate(_) | Error::Witness(_) | Error::Contradiction(_) => (4, "verification"),
            _ => (3, "semantic"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

struct Output {
    text: String,
    json: serde_json::Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: impl Serialize) -> Output {
        Output { text, json: serde_json::to_value(json).expect("report serializes"), code: 0 }
    }
}

fn read_formula(arg: &str) -> Result<Formula, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?,
        None => arg.to_owned(),
    };
    let f = parse(&text).map_err(|e| Failure { code: 2, kind: "parse", message: format!("parse error: {e}") })?;
    Ok(f.hash_cons())
}

fn basis_text(s: &Subspace) -> String {
    let mut out = String::new();
    for row in s.basis_vectors() {
        let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
        out.push_str(&format!("  [{}]\n", cells.join(", ")));
    }
    out
}

fn cmd_eval(formula: &str, env: &PathBuf, tol: &Tolerance) -> Result<Output, Failure> {
    let f = read_formula(formula)?;
    let raw = fs::read_to_string(env).map_err(|e| Failure::usage(format!("{}: {e}", env.display())))?;
    let env: Environment = serde_json::from_str(&raw).map_err(|e| Failure {
        code: 3,
        kind: "environment",
        message: format!("{}: {e}", env.display()),
    })?;
    let ev = evaluate_checked(&f, &env, tol)?;
    let mut text = format!("dim {} in C^{}\n", ev.value.dim(), ev.value.ambient());
    text.push_str(&basis_text(&ev.value));
    if !ev.clear {
        text.push_str("warning: a rank decision fell inside the guard band\n");
    }
    let json = json!({
        "formula": f,
        "ambient": ev.value.ambient(),
        "dim": ev.value.dim(),
        "clear": ev.clear,
        "value": SubspaceJson::from(&ev.value),
    });
    Ok(Output::ok(text, json))
}

fn cmd_construct(kind: &Construct) -> Result<Output, Failure> {
    let (name, formula, extra) = match kind {
        Construct::P { a, b } => ("P", checked_pair(a, b, mk_p)?, json!({})),
        Construct::Alpha { a, b } => ("alpha", checked_pair(a, b, mk_alpha)?, json!({})),
        Construct::Gamma { l } => {
            let c = mk_gamma(*l)?;
            ("gamma", c.formula, json!({ "profile": c.profile }))
        }
        Construct::Beta { l } => {
            let c = mk_beta(*l)?;
            ("beta", c.formula, json!({ "profile": c.profile }))
        }
        Construct::Separator { m, n } => {
            let (f, cert) = mk_separator(*m, *n)?;
            ("separator", f, json!({ "certificate": cert }))
        }
    };
    let mut text = format!("{formula}\n");
    if let Some(cert) = extra.get("certificate") {
        text.push_str(&serde_json::to_string_pretty(cert).expect("certificate serializes"));
        text.push('\n');
    }
    let mut json = json!({
        "kind": name,
        "formula": formula,
        "tree_size": formula.tree_size(),
        "dag_size": formula.dag_size(),
    });
    if let (Some(obj), Some(more)) = (json.as_object_mut(), extra.as_object()) {
        obj.extend(more.clone());
    }
    Ok(Output::ok(text, json))
}

fn checked_pair(a: &str, b: &str, mk: fn(&str, &str) -> Formula) -> Result<Formula, Failure> {
    for v in [a, b] {
        Formula::try_var(v)?;
    }
    if a == b {
        return Err(Failure::usage(format!("the two variables must differ, got {a:?} twice")));
    }
    Ok(mk(a, b))
}

fn cmd_dbar(formula: &str, n: usize, trials: usize, seed: u64, tol: &Tolerance) -> Result<Output, Failure> {
    let f = read_formula(formula)?;
    let out: SearchOutcome = estimate_dbar(&f, n, trials, &DimsStrategy::Auto, seed, tol)?;
    let mut text = format!("max found {} in C^{} over {} trials (seed {})\n", out.max_found, n, out.trials, seed);
    for (d, count) in out.histogram.iter().enumerate().filter(|(_, c)| **c > 0) {
        text.push_str(&format!("  dim {d}: {count}\n"));
    }
    if out.rejected > 0 || out.abandoned > 0 {
        text.push_str(&format!("  rejected {}, abandoned {}\n", out.rejected, out.abandoned));
    }
    Ok(Output::ok(text, json!({ "formula": f, "outcome": out })))
}

fn cmd_separate(m: usize, n: usize, trials: usize, seed: u64, tol: &Tolerance) -> Result<Output, Failure> {
    let r: SeparationReport = separate(m, n, trials, seed, tol)?;
    let text = format!(
        "separator for C^{m} vs C^{n}: {} stages, tree size {}, dag size {}\n\
         witness in C^{n}: dim {}\n\
         zero-test in C^{m}: max {} over {} trials (seed {seed})\n",
        r.certificate.stages.len(),
        r.certificate.formula_tree_size,
        r.certificate.formula_dag_size,
        r.witness.achieved,
        r.zero_test.max_dim_seen,
        r.zero_test.trials,
    );
    Ok(Output::ok(text, r))
}

fn cmd_verify(suite: Suite, trials: usize, seed: u64, tol: &Tolerance) -> Result<Output, Failure> {
    let cfg = VerifyConfig { trials, seed, tol: *tol };
    let results: Vec<CheckResult> = run_suite(suite, &cfg);
    let failed: Vec<&CheckResult> = results.iter().filter(|r| !r.passed()).collect();
    let mut text = String::new();
    for r in &results {
        let mark = if r.passed() { "pass" } else { "FAIL" };
        text.push_str(&format!("{mark}  {:<18} {} ({} trials, {} failures)\n", r.suite, r.name, r.trials, r.failures));
        if let Some(d) = &r.detail {
            text.push_str(&format!("      {d}\n"));
        }
    }
    text.push_str(&format!("{} checks, {} failed\n", results.len(), failed.len()));
    let json = json!({
        "suite": suite,
        "passed": failed.is_empty(),
        "results": results,
        "failures": failed,
    });
    let code = if failed.is_empty() { 0 } else { 4 };
    Ok(Output { code, ..Output::ok(text, json) })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let tol = Tolerance::new(cli.rank_threshold, cli.guard_band)?;
    let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(Failure::usage("--trials must be positive"));
    }
    match &cli.command {
        Command::Eval { formula, env } => cmd_eval(formula, env, &tol),
        Command::Construct { kind } => cmd_construct(kind),
        Command::Dbar { formula, n } => cmd_dbar(formula, *n, trials, cli.seed, &tol),
        Command::Separate { m, n } => cmd_separate(*m, *n, trials, cli.seed, &tol),
        Command::Verify { suite } => {
            cmd_verify(*suite, cli.trials.unwrap_or(DEFAULT_VERIFY_TRIALS), cli.seed, &tol)
        }
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(|e| Failure::usage(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let (body, code) = match &result {
        Ok(out) if cli.json => (to_json(&out.json), out.code),
        Ok(out) => (out.text.clone(), out.code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            if !cli.json {
                return ExitCode::from(f.code);
            }
            let body = to_json(&json!({ "error": { "kind": f.kind, "code": f.code, "message": f.message } }));
            (body, f.code)
        }
    };
    if let Err(f) = emit(&cli, &body) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    ExitCode::from(code)
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}
