use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use sdmds::artifact;
use sdmds::census::{self, Census, CensusError, Source, RULES};
use sdmds::constructions::{build, ConstructionError, ConstructionParams, Theorem};
use sdmds::ff::numtheory::prime_power;
use sdmds::verify::{verify_artifact, verify_matrix, VerifyOptions};
use sdmds::{make_field, FieldError};

#[derive(Parser)]
#[command(
    name = "sdmds",
    version,
    about = "MDS self-dual codes from (extended) GRS codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the modulus, generator and factorization of q-1 for F_{p^deg}.
    FieldInfo {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        deg: u32,
    },
    /// Build a code and write its artifact JSON.
    Construct(ConstructArgs),
    /// Re-verify an artifact from its generator matrix.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also check the MDS property when small enough.
        #[arg(long)]
        mds: bool,
    },
    /// Count achievable even lengths for q.
    Census {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Rows::All)]
        rows: Rows,
        /// Print the lengths themselves, not just counts.
        #[arg(long)]
        list: bool,
        /// Construct and verify a witness for every new length up to this bound.
        #[arg(long, default_value_t = 0)]
        spot_check_bound: u64,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, conflicts_with_all = ["p", "deg"])]
    q: Option<u64>,
    #[arg(long, requires = "deg")]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    deg: Option<u32>,
    #[arg(long)]
    theorem: Theorem,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rows {
    Prior,
    New,
    All,
}

impl Rows {
    fn name(self) -> &'static str {
        match self {
            Rows::Prior => "prior",
            Rows::New => "new",
            Rows::All => "all",
        }
    }

    fn includes(self, source: Source) -> bool {
        match self {
            Rows::Prior => source == Source::Prior,
            Rows::New => source == Source::New,
            Rows::All => true,
        }
    }
}

const EXIT_INVALID: u8 = 2;
const EXIT_CONSTRUCTION: u8 = 3;
const EXIT_VERIFY: u8 = 4;

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    clause: Option<String>,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            kind,
            message: message.into(),
            clause: None,
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID, "InvalidParameters", message)
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        let code = match e {
            FieldError::FieldTooLarge { .. } => EXIT_CONSTRUCTION,
            _ => EXIT_INVALID,
        };
        Failure::new(code, "FieldError", e.to_string())
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        let message = e.to_string();
        match e {
            ConstructionError::HypothesisViolated { clause } => Failure {
                code: EXIT_INVALID,
                kind: "HypothesisViolated",
                message,
                clause: Some(clause),
            },
            ConstructionError::Field(fe) => fe.into(),
            ConstructionError::ParityInfeasible { .. } => {
                Failure::new(EXIT_CONSTRUCTION, "ParityInfeasible", message)
            }
            ConstructionError::TooLargeToMaterialize { .. } => {
                Failure::new(EXIT_CONSTRUCTION, "TooLargeToMaterialize", message)
            }
            _ => Failure::new(EXIT_CONSTRUCTION, "ConstructionFailed", message),
        }
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::SpotCheckFailed { .. } | CensusError::ForbiddenLength { .. } => {
                Failure::new(EXIT_VERIFY, "CensusInconsistent", e.to_string())
            }
            _ => Failure::new(EXIT_INVALID, "InvalidParameters", e.to_string()),
        }
    }
}

fn field_of(q: u64) -> Result<(u64, u32), Failure> {
    match prime_power(q) {
        Some((p, d)) if p != 2 => Ok((p, d)),
        _ => Err(Failure::invalid(format!(
            "q = {q} is not an odd prime power"
        ))),
    }
}

fn field_info(p: u64, deg: u32) -> Result<Value, Failure> {
    let ctx = make_field(p, deg)?;
    let g = ctx.generator();
    Ok(json!({
        "p": p,
        "d": deg,
        "q": ctx.order(),
        "modulus": ctx.format_poly(ctx.modulus()),
        "generator": ctx.format(g),
        "generator_encoding": g.value(),
        "q_minus_1": ctx.order() - 1,
        "q_minus_1_factors": ctx.order_factors(),
    }))
}

fn params_from(a: &ConstructArgs) -> Result<ConstructionParams, Failure> {
    fn need<T: Copy>(v: Option<T>, flag: &str, th: Theorem) -> Result<T, Failure> {
        v.ok_or_else(|| Failure::invalid(format!("{th} needs --{flag}")))
    }
    let th = a.theorem;
    Ok(match th {
        Theorem::T1i => ConstructionParams::T1i {
            m: need(a.m, "m", th)?,
            t: need(a.t, "t", th)?,
        },
        Theorem::T1ii => ConstructionParams::T1ii {
            m: need(a.m, "m", th)?,
            t: need(a.t, "t", th)?,
        },
        Theorem::T2 => ConstructionParams::T2 {
            m: need(a.m, "m", th)?,
            t: need(a.t, "t", th)?,
        },
        Theorem::T3i => ConstructionParams::T3i {
            m: need(a.m, "m", th)?,
            t: need(a.t, "t", th)?,
            s: need(a.s, "s", th)?,
        },
        Theorem::T3ii => ConstructionParams::T3ii {
            m: need(a.m, "m", th)?,
            t: need(a.t, "t", th)?,
            s: need(a.s, "s", th)?,
        },
        Theorem::T4 => ConstructionParams::T4 {
            e: need(a.e, "e", th)?,
        },
        Theorem::T5 => ConstructionParams::T5 {
            k: need(a.k, "k", th)?,
            t: need(a.t, "t", th)?,
            e: need(a.e, "e", th)?,
        },
    })
}

/// Returns the exit code alongside the output so a failed verification still
/// writes its artifact.
fn construct(a: &ConstructArgs) -> Result<(Option<String>, u8), Failure> {
    let (p, d) = match (a.q, a.p, a.deg) {
        (Some(q), _, _) => field_of(q)?,
        (None, Some(p), Some(d)) => (p, d),
        _ => return Err(Failure::invalid("give --q or both --p and --deg")),
    };
    let params = params_from(a)?;
    let (art, trace) = build(p, d, &params)?;
    let report = verify_artifact(&art, VerifyOptions::default())
        .map_err(|e| Failure::new(EXIT_VERIFY, "VerificationError", e.to_string()))?;
    let text = artifact::to_json(&art, &params, &trace, &report);
    let code = if report.passed() { 0 } else { EXIT_VERIFY };
    match &a.out {
        Some(path) => {
            fs::write(path, text + "\n")
                .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))?;
            eprintln!(
                "{}: [{}, {}] over F_{}, self_dual = {}",
                art.label(),
                art.length(),
                art.dimension(),
                art.ctx().order(),
                report.self_dual
            );
            Ok((None, code))
        }
        None => Ok((Some(text), code)),
    }
}

fn verify(input: &PathBuf, mds: bool) -> Result<(Value, u8), Failure> {
    let text = fs::read_to_string(input)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", input.display())))?;
    let parsed = artifact::parse(&text)
        .map_err(|e| Failure::new(EXIT_INVALID, "MalformedArtifact", e.to_string()))?;
    let opts = VerifyOptions {
        run_mds: mds,
        ..VerifyOptions::default()
    };
    let report = match verify_matrix(&parsed.ctx, &parsed.generator, &parsed.points, opts) {
        Ok(r) => r,
        Err(e) => {
            return Err(Failure::new(
                EXIT_VERIFY,
                "VerificationError",
                e.to_string(),
            ))
        }
    };
    let code = if report.passed() { 0 } else { EXIT_VERIFY };
    let mut out = serde_json::to_value(&report).expect("report serializes");
    out["label"] = json!(parsed.label);
    out["passed"] = json!(report.passed());
    Ok((out, code))
}

fn census_cmd(q: u64, rows: Rows, list: bool, bound: u64) -> Result<Value, Failure> {
    let census = Census::new(q)?;
    let report = census::report(&census, bound)?;
    let selected: Vec<u64> = match rows {
        Rows::Prior => report.prior.clone(),
        Rows::New => report.new.clone(),
        Rows::All => census.union().into_iter().collect(),
    };
    let mut per_rule = Map::new();
    let mut beyond = Map::new();
    for r in RULES.iter().filter(|r| rows.includes(r.source)) {
        let lens = &report.per_rule[r.id];
        per_rule.insert(
            r.id.into(),
            if list { json!(lens) } else { json!(lens.len()) },
        );
        if let Some(b) = report.beyond_ceiling.get(r.id) {
            beyond.insert(r.id.into(), if list { json!(b) } else { json!(b.len()) });
        }
    }
    let mut out = json!({
        "q": q,
        "rows": rows.name(),
        "count": selected.len(),
        "prior_count": report.prior_count,
        "new_count": report.new_count,
        "union_count": report.union_count,
        "per_rule": per_rule,
        "beyond_ceiling": beyond,
        "spot_checks": report.spot_checks,
    });
    if list {
        out["lengths"] = json!(selected);
    }
    Ok(out)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

fn run(cli: Cli) -> Result<(Option<String>, u8), Failure> {
    match cli.command {
        Command::FieldInfo { p, deg } => Ok((Some(pretty(&field_info(p, deg)?)), 0)),
        Command::Construct(a) => construct(&a),
        Command::Verify { input, mds } => {
            let (v, code) = verify(&input, mds)?;
            Ok((Some(pretty(&v)), code))
        }
        Command::Census {
            q,
            rows,
            list,
            spot_check_bound,
        } => Ok((
            Some(pretty(&census_cmd(q, rows, list, spot_check_bound)?)),
            0,
        )),
    }
}

// A closed pipe (e.g. `| head`) is not an error worth a panic.
fn print_out(s: &str) {
    let _ = writeln!(std::io::stdout(), "{s}");
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, code)) => {
            if let Some(out) = out {
                print_out(&out);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            let mut err = json!({ "error": f.kind, "message": f.message });
            if let Some(c) = &f.clause {
                err["clause"] = json!(c);
                eprintln!("hypothesis violated: {c}");
            } else {
                eprintln!("error: {}", f.message);
            }
            print_out(&pretty(&err));
            ExitCode::from(f.code)
        }
    }
}
