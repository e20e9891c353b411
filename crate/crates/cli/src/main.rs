use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dehn_cli::atlas::{self, AtlasConfig};
use dehn_cli::report;
use dehn_surgery::geometry::{length_report, parse_cusp_file};
use dehn_surgery::jsj::{
    certify_characterising, classify_surgery, reduce_to_companion, surgery_h1, CertifyError, ClassifyError, ReduceError,
};
use dehn_surgery::{parse, KnotExpr, Slope};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

const EXIT_PARSE: u8 = 1;
const EXIT_REFUSAL: u8 = 2;
const EXIT_FAILURE: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

/// Exact Dehn surgery calculus for torus knots, cables, connected sums and
/// opaque hyperbolic atoms.
///
/// Exit codes: 0 success, 1 unparsable input or invalid configuration,
/// 2 slope outside the classification regime, 3 I/O or internal failure,
/// 4 an atlas record broke the |H1| = |p| invariant.
#[derive(Parser)]
#[command(name = "dehn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Compact JSON on one line.
    #[arg(long, global = true)]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Target {
    /// Knot expression, e.g. "cable(13,2; torus(3,2))".
    expr: String,
    /// Surgery slope p/q, an integer, or "inf".
    #[arg(allow_hyphen_values = true)]
    slope: String,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the surgered manifold (needs |q| >= 9, and |p| <= |q| for torus knots and cables).
    Classify(Target),
    /// Reduce a cable surgery to a surgery on the companion, stage by stage.
    Reduce(Target),
    /// Report the explicit thresholds behind characterising the slope.
    Certify(Target),
    /// Order of H1 of the surgered manifold.
    Homology(Target),
    /// Slope length bounds on the knot cusp.
    Length {
        #[arg(allow_hyphen_values = true)]
        slope: String,
        /// Cusp file; the first record is the knot cusp.
        #[arg(long, value_name = "PATH")]
        cusp_file: Option<PathBuf>,
    },
    /// Enumerate surgeries in bounds into a JSON-lines file.
    Atlas(AtlasArgs),
}

#[derive(Args)]
struct AtlasArgs {
    #[arg(long, default_value_t = 2)]
    min_rs: i64,
    /// Largest |r|, |s| for torus knots and cabling parameters.
    #[arg(long, default_value_t = 5)]
    max_rs: i64,
    #[arg(long, default_value_t = 0)]
    max_depth: usize,
    /// Largest number of torus-knot summands (below 2: no sums).
    #[arg(long, default_value_t = 0)]
    max_summands: usize,
    #[arg(long, default_value_t = 15)]
    max_p: i64,
    #[arg(long, default_value_t = 15)]
    max_q: i64,
    /// Keep complete records from an earlier run and continue after them.
    #[arg(long)]
    resume: bool,
    /// Stop after writing this many new records.
    #[arg(long, value_name = "N")]
    limit: Option<u64>,
    /// Directory for the default output file `atlas.jsonl`.
    #[arg(long, env = "DEHN_OUT_DIR", value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

enum Failure {
    Parse(String),
    Refusal { precondition: String, detail: String },
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Refusal { .. } => EXIT_REFUSAL,
            Failure::Other(_) => EXIT_FAILURE,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Failure::Parse(m) => json!({"schema": "error/1", "error": "parse", "message": m}),
            Failure::Refusal { precondition, detail } => json!({
                "schema": "refusal/1",
                "error": "regime_refusal",
                "precondition": precondition,
                "detail": detail,
            }),
            Failure::Other(m) => json!({"schema": "error/1", "error": "failure", "message": m}),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(m) | Failure::Other(m) => m.clone(),
            Failure::Refusal { precondition, detail } => {
                format!("refused: outside the classification regime, requires {precondition} ({detail})")
            }
        }
    }
}

struct Emitted {
    text: String,
    code: u8,
}

fn parse_target(t: &Target) -> Result<(KnotExpr, Slope), Failure> {
    let e = parse(&t.expr).map_err(|e| Failure::Parse(format!("expression: {e}")))?;
    let s = t.slope.parse::<Slope>().map_err(|e| Failure::Parse(format!("slope: {e}")))?;
    Ok((e, s))
}

fn render<T: Serialize>(out: &Output, value: &T, text: impl FnOnce(&T) -> String) -> String {
    if out.pretty {
        serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
    } else if out.json {
        serde_json::to_string(value).expect("reports serialize") + "\n"
    } else {
        text(value)
    }
}

fn execute(cli: &Cli) -> Result<Emitted, Failure> {
    let out = &cli.output;
    let ok = |text| Ok(Emitted { text, code: 0 });
    match &cli.command {
        Command::Classify(t) => {
            let (e, s) = parse_target(t)?;
            match classify_surgery(&e, &s) {
                Ok(c) => ok(render(out, &c, report::classification)),
                Err(ClassifyError::Refusal { precondition, detail }) => Err(Failure::Refusal { precondition, detail }),
                Err(err) => Err(Failure::Other(err.to_string())),
            }
        }
        Command::Reduce(t) => {
            let (e, s) = parse_target(t)?;
            let r = reduce_to_companion(&e, &s).map_err(|err| match err {
                ReduceError::Meridian(_) => {
                    Failure::Refusal { precondition: "q != 0".into(), detail: format!("slope {s}") }
                }
                other => Failure::Other(other.to_string()),
            })?;
            ok(render(out, &r, report::reduction))
        }
        Command::Certify(t) => {
            let (e, s) = parse_target(t)?;
            let c = certify_characterising(&e, &s).map_err(|err| match err {
                CertifyError::Slope(_) => Failure::Refusal { precondition: "finite slope".into(), detail: format!("slope {s}") },
                other => Failure::Other(other.to_string()),
            })?;
            ok(render(out, &c, report::certificate))
        }
        Command::Homology(t) => {
            let (e, s) = parse_target(t)?;
            let n = surgery_h1(&e, &s).map_err(|e| Failure::Other(e.to_string()))?;
            let order = n.to_i64().map_or_else(|| json!(n.to_string()), |x| json!(x));
            let v = json!({"schema": "homology/1", "expression": e.to_string(), "slope": s, "h1_order": order});
            ok(render(out, &v, |_| format!("{n}\n")))
        }
        Command::Length { slope, cusp_file } => {
            let s = slope.parse::<Slope>().map_err(|e| Failure::Parse(format!("slope: {e}")))?;
            let cusps = match cusp_file {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
                    parse_cusp_file(&text).map_err(|e| Failure::Parse(e.to_string()))?
                }
                None => Vec::new(),
            };
            let r = length_report(cusps.first(), &s).map_err(|e| Failure::Parse(e.to_string()))?;
            ok(render(out, &r, report::length))
        }
        Command::Atlas(a) => {
            let cfg = AtlasConfig {
                min_rs: a.min_rs,
                max_rs: a.max_rs,
                max_depth: a.max_depth,
                max_summands: a.max_summands,
                max_p: a.max_p,
                max_q: a.max_q,
            };
            let path = a.out_dir.clone().unwrap_or_default().join("atlas.jsonl");
            let summary = atlas::run(&cfg, &path, a.resume, a.limit).map_err(|e| match e {
                atlas::AtlasError::Config(m) => Failure::Parse(m),
                other => Failure::Other(other.to_string()),
            })?;
            let code = if summary.h1_violations.is_empty() { 0 } else { EXIT_INVARIANT };
            let text = render(out, &summary, |s| {
                format!(
                    "{} records in {} (resumed after {}), {} coincidence classes, {} H1 violations\n",
                    s.records,
                    s.output.display(),
                    s.resumed_from,
                    s.coincidences.len(),
                    s.h1_violations.len()
                )
            });
            Ok(Emitted { text, code })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    let (text, code) = match execute(&cli) {
        Ok(Emitted { text, code }) => (text, code),
        Err(f) => {
            if cli.output.json || cli.output.pretty {
                (render(&cli.output, &f.to_json(), |_| String::new()), f.code())
            } else {
                eprintln!("dehn: {}", f.message());
                (String::new(), f.code())
            }
        }
    };
    let written = match &cli.output.out {
        Some(path) if !text.is_empty() => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        _ => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(m) = written {
        eprintln!("dehn: {m}");
        return ExitCode::from(EXIT_FAILURE);
    }
    ExitCode::from(code)
}
