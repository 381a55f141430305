use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use foxlie::andreadakis::{andreadakis_depth, johnson, trace_algebraic, trace_fox, Depth, GradedAutClass};
use foxlie::dark::DarkVariant;
use foxlie::restricted::{andreadakis_p_depth, johnson_p, trace_p, PGradedAutClass};
use foxlie::suite::{self, SuiteReport, DEFAULT_SEED};
use foxlie::{Endomorphism, Error, GroupRingElement, JacobianMatrix, Ring, Word};

/// Exact Fox calculus, Johnson and trace computations, and verification suites.
#[derive(Parser)]
#[command(name = "foxlie", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fox derivatives of a word, or the Jacobian of an endomorphism.
    Fox(FoxArgs),
    /// Johnson image of the class of an endomorphism.
    Johnson(ClassArgs),
    /// Trace of the class of an endomorphism, by both pipelines.
    Trace(ClassArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FoxArgs {
    /// A word such as `x1 x2 x1^-1`, or with `--endo` the images separated by `;`.
    input: String,
    #[arg(long)]
    n: usize,
    /// Treat the input as an endomorphism and print its Jacobian.
    #[arg(long)]
    endo: bool,
    /// Work over F_p instead of Z.
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ClassArgs {
    /// Generator images separated by `;`, e.g. `x2 x1 x2^-1; x2; x3`.
    endo: String,
    #[arg(long)]
    n: usize,
    /// Depth of the class; computed when omitted.
    #[arg(long)]
    depth: Option<usize>,
    /// Use the mod-p filtration.
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Chainrule,
    Dark,
    Johnson,
    Traces,
    StableSurjectivity,
    Satoh,
    Congruence,
    PConcentration,
    CrossOracle,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Product,
    Commutator,
    Both,
}

#[derive(Args)]
struct VerifyArgs {
    suite: SuiteName,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    alpha_max: Option<usize>,
    #[arg(long)]
    beta_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    variant: VariantArg,
    #[arg(long)]
    k_max: Option<usize>,
    /// Permit the large stable-range comparisons (Der_k dimension above 300).
    #[arg(long)]
    allow_stretch: bool,
    /// Write the JSON report to this path (`-` for standard output).
    #[arg(long)]
    json: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Claims,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn check_rank(n: usize) -> Result<(), Failure> {
    if (1..=6).contains(&n) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("rank {n} outside 1..=6")))
    }
}

fn ring_of(p: Option<u32>) -> Result<Ring, Failure> {
    Ok(match p {
        Some(p) => Ring::prime(p)?,
        None => Ring::Integers,
    })
}

/// Human-readable output; moves to standard error when the JSON report takes standard output.
struct Table {
    to_stderr: bool,
}

impl Table {
    fn new(json: &Option<PathBuf>) -> Self {
        Table { to_stderr: json.as_deref() == Some(Path::new("-")) }
    }

    fn line(&self, s: impl std::fmt::Display) {
        if self.to_stderr {
            eprintln!("{s}");
        } else {
            println!("{s}");
        }
    }
}

fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
    }
}

fn cmd_fox(a: &FoxArgs) -> Result<(), Failure> {
    let t = Table::new(&a.json);
    check_rank(a.n)?;
    let ring = ring_of(a.p)?;
    let out = if a.endo {
        let f = Endomorphism::parse(&a.input, a.n)?;
        let jac = JacobianMatrix::of(&f, ring);
        for (j, row) in jac.entries().iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                t.line(format!("∂f(x{})/∂x{} = {e}", j + 1, i + 1));
            }
        }
        json!({"endomorphism": f.to_string(), "ring": ring.to_string(), "jacobian": jac.entries()})
    } else {
        let w = Word::parse(&a.input, a.n)?;
        let u = GroupRingElement::from_word(&w, ring);
        let derivatives: Vec<GroupRingElement> = (1..=a.n).map(|i| u.fox_derivative(i)).collect::<Result<_, _>>()?;
        for (i, d) in derivatives.iter().enumerate() {
            t.line(format!("∂/∂x{} = {d}", i + 1));
        }
        json!({"word": w.to_string(), "ring": ring.to_string(), "derivatives": derivatives})
    };
    if let Some(path) = &a.json {
        write_json(path, &out)?;
    }
    Ok(())
}

fn resolve_depth(f: &Endomorphism, a: &ClassArgs) -> Result<usize, Failure> {
    const CAP: usize = 6;
    if let Some(d) = a.depth {
        if d == 0 || d > CAP {
            return Err(Failure::Usage(format!("depth {d} outside 1..={CAP}")));
        }
        return Ok(d);
    }
    let depth = match a.p {
        Some(p) => andreadakis_p_depth(f, p, CAP)?,
        None => andreadakis_depth(f, CAP),
    };
    match depth {
        Depth::NotInIa { generator } => Err(Error::NotInIa { generator }.into()),
        d => Ok(d.lower_bound()),
    }
}

fn cmd_class(a: &ClassArgs, trace: bool) -> Result<(), Failure> {
    let t = Table::new(&a.json);
    check_rank(a.n)?;
    let f = Endomorphism::parse(&a.endo, a.n)?;
    let depth = resolve_depth(&f, a)?;
    t.line(format!("depth: {depth}"));
    let mut out = json!({"endomorphism": f.to_string(), "depth": depth});
    match (a.p, trace) {
        (Some(p), false) => {
            let d = johnson_p(&PGradedAutClass::new(f, p, depth)?)?;
            t.line(format!("{d}"));
            out["p"] = json!(p);
            out["johnson"] = d.to_json();
        }
        (Some(p), true) => {
            let tr = trace_p(&PGradedAutClass::new(f, p, depth)?);
            t.line(format!("trace: {tr}"));
            out["p"] = json!(p);
            out["trace"] = tr.to_json();
        }
        (None, false) => {
            let d = johnson(&GradedAutClass::new(f, depth)?)?;
            t.line(format!("{d}"));
            out["johnson"] = d.to_json();
        }
        (None, true) => {
            let cls = GradedAutClass::new(f, depth)?;
            let fox = trace_fox(&cls);
            let alg = trace_algebraic(&cls)?;
            t.line(format!("trace (Fox): {fox}"));
            t.line(format!("trace (contraction): {alg}"));
            t.line(format!("agree: {}", fox == alg));
            out["trace"] = fox.to_json();
            out["trace_algebraic"] = alg.to_json();
            out["agree"] = json!(fox == alg);
        }
    }
    if let Some(path) = &a.json {
        write_json(path, &out)?;
    }
    Ok(())
}

fn run_suites(a: &VerifyArgs) -> Result<Vec<SuiteReport>, Error> {
    let progress = |msg: &str| eprintln!("[foxlie] {msg}");
    let seed = a.seed;
    let n = a.n;
    let samples = a.samples;
    Ok(match a.suite {
        SuiteName::Chainrule => {
            vec![suite::chain_rule_suite(n.unwrap_or(3), a.pairs.unwrap_or(200), samples.unwrap_or(100), seed, &progress)?]
        }
        SuiteName::Dark => {
            let variant = match a.variant {
                VariantArg::Product => Some(DarkVariant::Product),
                VariantArg::Commutator => Some(DarkVariant::Commutator),
                VariantArg::Both => None,
            };
            vec![suite::dark_suite(variant, a.alpha_max.unwrap_or(5), a.beta_max.unwrap_or(4))?]
        }
        SuiteName::Johnson => vec![suite::johnson_suite(n.unwrap_or(3), samples.unwrap_or(50), seed, &progress)?],
        SuiteName::Traces => vec![suite::trace_suite(n.unwrap_or(4), &progress)?],
        SuiteName::StableSurjectivity => {
            vec![suite::stable_surjectivity_suite(n.unwrap_or(4), a.k.unwrap_or(2), a.allow_stretch, &progress)?]
        }
        SuiteName::Satoh => vec![suite::contraction_suite(n.unwrap_or(4), a.k.unwrap_or(2), a.allow_stretch, &progress)?],
        SuiteName::Congruence => vec![suite::congruence_suite(
            n.unwrap_or(5),
            a.q.unwrap_or(3),
            a.k_max.unwrap_or(3),
            samples.unwrap_or(500),
            seed,
            &progress,
        )?],
        SuiteName::PConcentration => {
            vec![suite::p_concentration_suite(n.unwrap_or(4), a.p.unwrap_or(3), samples.unwrap_or(100), seed, &progress)?]
        }
        SuiteName::CrossOracle => vec![suite::cross_oracle_suite(samples.unwrap_or(500), 50, seed, &progress)?],
        SuiteName::All => suite::all_suites(seed, a.allow_stretch, &progress)?,
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let t = Table::new(&a.json);
    let start = Instant::now();
    let reports = run_suites(a)?;
    for r in &reports {
        t.line(format!("suite {}", r.suite));
        for c in &r.claims {
            let status = serde_json::to_value(c.status).expect("serializable");
            t.line(format!("  {:<6} {}", status.as_str().unwrap_or("?"), c.claim));
            if let Some(w) = &c.witness {
                t.line(format!("         witness: {w}"));
            }
        }
    }
    eprintln!("[foxlie] finished in {:.2?}", start.elapsed());
    if let Some(path) = &a.json {
        let value = match reports.as_slice() {
            [one] => one.to_json(),
            many => Value::Array(many.iter().map(SuiteReport::to_json).collect()),
        };
        write_json(path, &value)?;
    }
    if reports.iter().all(SuiteReport::passed) {
        Ok(())
    } else {
        Err(Failure::Claims)
    }
}

fn configure_workers() {
    if let Some(n) = std::env::var("FOXLIE_WORKERS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Ignored if the pool was already initialized.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_workers();
    let result = match &cli.command {
        Command::Fox(a) => cmd_fox(a),
        Command::Johnson(a) => cmd_class(a, false),
        Command::Trace(a) => cmd_class(a, true),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
