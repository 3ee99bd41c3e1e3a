mod report;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyassoc::classify::classify_associative;
use polyassoc::oracle::{EnumerationReport, Strategy, DEFAULT_BUDGET};
use polyassoc::{
    analyze, enumerate_associative, is_associative, parse_poly, BigInt, BigRational,
    EnumerationConfig, GaussianInteger, OracleError, RingId, Scalar,
};
use serde::Serialize;

use report::{classification_json, oracle_json, structure_json, verdict_fields, Report};

#[derive(Parser)]
#[command(
    name = "polyassoc",
    version,
    about = "Associativity of polynomial n-ary operations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide associativity and print a witness if it fails.
    Check(PolyArgs),
    /// Decide associativity and name the family.
    Classify(PolyArgs),
    /// Classify and analyze group status, skew, mediality, reducibility.
    Analyze(PolyArgs),
    /// Census of associative multilinear operations in a coefficient box.
    Enumerate(EnumArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Ring {
    Z,
    Q,
    Zi,
}

impl Ring {
    fn id(self) -> RingId {
        match self {
            Ring::Z => RingId::Integers,
            Ring::Q => RingId::Rationals,
            Ring::Zi => RingId::GaussianIntegers,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long, value_enum)]
    ring: Ring,
    /// Arity.
    #[arg(long)]
    n: usize,
    /// Polynomial in x1..xn.
    #[arg(long)]
    poly: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Seed for sampled oracle checks.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long, value_enum)]
    ring: Ring,
    #[arg(long)]
    n: usize,
    /// Coefficient half-width (both components over Z[i]).
    #[arg(long)]
    bound: u32,
    /// Directory for census.csv (and candidates.txt).
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed of the random spot check on associative candidates.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest number of coefficient tables allowed.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Skip tables that fail cheap necessary conditions.
    #[arg(long)]
    pruned: bool,
    /// Also write candidates.txt.
    #[arg(long)]
    dump_candidates: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

enum Failure {
    Parse(String),
    Usage(String),
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Depth {
    Check,
    Classify,
    Analyze,
}

fn poly_report<R: Scalar>(args: &PolyArgs, depth: Depth) -> Result<Report, Failure> {
    if args.n < 2 {
        return Err(Failure::Usage(format!(
            "--n must be at least 2, got {}",
            args.n
        )));
    }
    if args.n > polyassoc::assoc::MAX_ARITY {
        return Err(Failure::Usage(format!(
            "--n must be at most {}, got {}",
            polyassoc::assoc::MAX_ARITY,
            args.n
        )));
    }
    let p = parse_poly::<R>(&args.poly, args.n)
        .map_err(|e| Failure::Parse(format!("parse error at {e}")))?;
    let verdict = is_associative(&p).map_err(internal)?;
    let (associative, path, witness) = verdict_fields(&verdict);
    let multilinear = p.to_multilinear();
    let oracle = oracle_json(&p, associative, args.seed).map_err(internal)?;
    if !oracle.agrees {
        return Err(Failure::Internal(
            "pointwise oracle contradicts the symbolic verdict".into(),
        ));
    }
    let mut report = Report {
        command: match depth {
            Depth::Check => "check",
            Depth::Classify => "classify",
            Depth::Analyze => "analyze",
        },
        ring: R::RING.to_string(),
        n: args.n,
        input: p.to_string(),
        multilinear: multilinear.is_some(),
        associative,
        decision_path: path,
        witness,
        classification: None,
        structure: None,
        oracle,
    };
    if depth == Depth::Check {
        return Ok(report);
    }
    let cls = match (&multilinear, verdict.into_witness()) {
        (_, Some(w)) => polyassoc::Classification::NotAssociative(w),
        (Some(m), None) => classify_associative(m).map_err(internal)?,
        (None, None) => {
            return Err(Failure::Internal(
                "associative input is not multilinear".into(),
            ))
        }
    };
    report.classification = Some(classification_json(&cls));
    if depth == Depth::Analyze && cls.is_associative() {
        let s = analyze(&p, &cls).map_err(internal)?;
        if s.skew_verified == Some(false) || s.reduction_verified == Some(false) {
            return Err(Failure::Internal(
                "structure identity failed to verify".into(),
            ));
        }
        report.structure = Some(structure_json(&s));
    }
    Ok(report)
}

fn run_poly(args: &PolyArgs, depth: Depth) -> Result<String, Failure> {
    let report = match args.ring.id() {
        RingId::Integers => poly_report::<BigInt>(args, depth),
        RingId::Rationals => poly_report::<BigRational>(args, depth),
        RingId::GaussianIntegers => poly_report::<GaussianInteger>(args, depth),
    }?;
    Ok(match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    })
}

#[derive(Serialize)]
struct EnumSummary {
    ring: String,
    n: usize,
    bound: u32,
    strategy: &'static str,
    candidates: String,
    examined: String,
    associative: usize,
    oracle_discrepancies: usize,
    dual_path_mismatches: usize,
    spot_failures: usize,
    unclassified: usize,
    double_classified: usize,
    census: Vec<CensusJson>,
}

#[derive(Serialize)]
struct CensusJson {
    #[serde(rename = "type")]
    tag: &'static str,
    clause: &'static str,
    params: String,
    count: u64,
}

fn summary<R: Scalar>(rep: &EnumerationReport<R>) -> EnumSummary {
    EnumSummary {
        ring: rep.ring.to_string(),
        n: rep.n,
        bound: rep.bound,
        strategy: match rep.strategy {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Pruned => "pruned",
        },
        candidates: rep.total.to_string(),
        examined: rep.examined.to_string(),
        associative: rep.associative.len(),
        oracle_discrepancies: rep.oracle_discrepancies.len(),
        dual_path_mismatches: rep.dual_path_mismatches.len(),
        spot_failures: rep.spot_failures.len(),
        unclassified: rep.unclassified.len(),
        double_classified: rep.double_classified.len(),
        census: rep
            .census
            .iter()
            .map(|r| CensusJson {
                tag: r.tag,
                clause: r.clause,
                params: r.params.clone(),
                count: r.count,
            })
            .collect(),
    }
}

fn summary_text(s: &EnumSummary) -> String {
    let mut out = format!(
        "ring: {}\narity: {}\nbound: {}\nstrategy: {}\ncandidates: {}\nexamined: {}\nassociative: {}\n",
        s.ring, s.n, s.bound, s.strategy, s.candidates, s.examined, s.associative
    );
    out.push_str(&format!(
        "oracle discrepancies: {}\ndual-path mismatches: {}\nspot-check failures: {}\nunclassified: {}\ndouble-classified: {}\n",
        s.oracle_discrepancies, s.dual_path_mismatches, s.spot_failures, s.unclassified, s.double_classified
    ));
    for r in &s.census {
        let params = if r.params.is_empty() {
            String::new()
        } else {
            format!(" {}", r.params)
        };
        out.push_str(&format!(
            "  ({}) {}{}: {}\n",
            r.clause, r.tag, params, r.count
        ));
    }
    out
}

fn enumerate_in<R: Scalar>(args: &EnumArgs) -> Result<String, Failure> {
    let mut cfg = EnumerationConfig::new(args.n, args.bound);
    cfg.budget = args.budget;
    cfg.jobs = args.jobs;
    cfg.seed = args.seed;
    cfg.strategy = if args.pruned {
        Strategy::Pruned
    } else {
        Strategy::Exhaustive
    };
    let rep = enumerate_associative::<R>(&cfg).map_err(|e| match e {
        OracleError::BudgetExceeded { .. }
        | OracleError::UnsupportedRing(_)
        | OracleError::ArityTooSmall(_)
        | OracleError::InvalidConfig(_)
        | OracleError::Assoc(_) => Failure::Usage(e.to_string()),
        other => internal(other),
    })?;
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.out.display())))?;
    let write = |name: &str, body: &str| {
        fs::write(args.out.join(name), body).map_err(|e| Failure::Internal(format!("{name}: {e}")))
    };
    write("census.csv", &rep.census_csv())?;
    if args.dump_candidates {
        write("candidates.txt", &rep.candidates_text())?;
    }
    let s = summary(&rep);
    if !rep.is_clean() {
        return Err(Failure::Internal(format!(
            "census is not clean:\n{}",
            summary_text(&s)
        )));
    }
    Ok(match args.format {
        Format::Json => serde_json::to_string_pretty(&s).expect("summary serializes") + "\n",
        Format::Text => summary_text(&s),
    })
}

fn run_enumerate(args: &EnumArgs) -> Result<String, Failure> {
    if args.jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be positive".into()));
    }
    match args.ring.id() {
        RingId::Integers => enumerate_in::<BigInt>(args),
        RingId::GaussianIntegers => enumerate_in::<GaussianInteger>(args),
        RingId::Rationals => Err(Failure::Usage(
            "enumeration needs a finite coefficient box; use --ring z or zi".into(),
        )),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Check(a) => run_poly(a, Depth::Check),
        Command::Classify(a) => run_poly(a, Depth::Classify),
        Command::Analyze(a) => run_poly(a, Depth::Analyze),
        Command::Enumerate(a) => run_enumerate(a),
    };
    match result {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
