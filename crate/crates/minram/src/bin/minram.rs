//! Thin command-line front end: argument parsing, file IO, and exit codes.
//! All real work lives in the `minram` library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use minram::cli::{self, CommandResult};
use minram::cyclotomic::AbelianRealization;
use minram::field::FieldDataJson;
use minram::group::GroupJson;
use minram::scholz::ScholzCertificate;
use minram::DEFAULT_SCAN_LIMIT;

#[derive(Parser)]
#[command(name = "minram", version, about = "Minimal-ramification bounds, prime searches, and certificates for nilpotent Galois groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cap for all prime scans (env MINRAM_LIMIT overrides the default).
    #[arg(long, global = true)]
    limit: Option<u64>,
    /// Worker threads for parallelizable verification work.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the JSON result to a file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArg {
    /// Base field: "Q", a negative fundamental discriminant, or a path to a
    /// field-data JSON file.
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Subcommand)]
enum Command {
    /// Ramification bounds and the central tower plan for a group file.
    Bound {
        group: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Realize an abelian group over Q with exactly d ramified primes.
    RealizeAbelian {
        /// Comma-separated cyclic factor orders, e.g. "3,9".
        factors: String,
        /// Impose l^N-Scholz conditions: --scholz <l> <N>.
        #[arg(long, num_args = 2, value_names = ["L", "N"])]
        scholz: Option<Vec<u64>>,
    },
    /// Build a Scholz certificate for a nilpotent group.
    Certificate {
        group: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Search for an l^N-exceptional set of primes.
    ExceptionalSet {
        #[command(flatten)]
        field: FieldArg,
        /// Comma-separated tower primes, e.g. "3" or "3,5".
        #[arg(long)]
        primes: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Search for a Scholz abelian realization (least qualifying conductors).
    ScholzSearch {
        factors: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Independently certify a realization file (exit 0 iff verdict true).
    Certify { realization: PathBuf },
    /// Replay-verify a certificate file (exit 0 iff all conditions hold).
    Verify { certificate: PathBuf },
    /// Character-Frobenius statistics for a cyclic field spec.
    Frobenius {
        conductor: u64,
        degree: u64,
        #[arg(long, default_value_t = 500)]
        bound: u64,
    },
}

fn parse_factors(text: &str) -> Result<Vec<u64>, String> {
    if text.trim().is_empty() {
        return Err("empty factor list".into());
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad factor {part:?}: {e}"))
        })
        .collect()
}

fn parse_field(text: &str) -> Result<FieldDataJson, String> {
    if text == "Q" {
        return Ok(FieldDataJson {
            field: minram::field::FieldKindJson::Name("Q".into()),
        });
    }
    if let Ok(d) = text.parse::<i64>() {
        return Ok(FieldDataJson {
            field: minram::field::FieldKindJson::Quad { quad_disc: d },
        });
    }
    let raw = std::fs::read_to_string(text).map_err(|e| format!("reading field file {text:?}: {e}"))?;
    serde_json::from_str(&raw).map_err(|e| format!("parsing field file {text:?}: {e}"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf, what: &str) -> Result<T, String> {
    let raw = std::fs::read_to_string(path).map_err(|e| format!("reading {what} {path:?}: {e}"))?;
    serde_json::from_str(&raw).map_err(|e| format!("parsing {what} {path:?}: {e}"))
}

/// Accept either a bare payload object or a CommandResult envelope holding
/// one under the given key.
fn read_wrapped<T: serde::de::DeserializeOwned>(
    path: &PathBuf,
    what: &str,
    key: &str,
) -> Result<T, String> {
    let raw = std::fs::read_to_string(path).map_err(|e| format!("reading {what} {path:?}: {e}"))?;
    if let Ok(direct) = serde_json::from_str::<T>(&raw) {
        return Ok(direct);
    }
    let value: Value =
        serde_json::from_str(&raw).map_err(|e| format!("parsing {what} {path:?}: {e}"))?;
    let inner = value
        .get("payload")
        .and_then(|p| if p.get(key).is_some() { p.get(key) } else { Some(p) })
        .or_else(|| value.get(key))
        .ok_or_else(|| format!("{path:?} holds neither a {what} nor a result wrapping one"))?;
    serde_json::from_value(inner.clone()).map_err(|e| format!("parsing {what} in {path:?}: {e}"))
}

fn emit(result: &CommandResult, output: &Option<PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(result).expect("serializable");
    match output {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|e| format!("writing {path:?}: {e}")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run() -> Result<(CommandResult, bool), String> {
    let cli = Cli::parse();
    let limit = cli
        .limit
        .or_else(|| std::env::var("MINRAM_LIMIT").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_SCAN_LIMIT);
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let (result, ok) = match &cli.command {
        Command::Bound { group, field } => {
            let group_json: GroupJson = read_json(group, "group file")?;
            let field_json = parse_field(&field.field)?;
            let inputs = serde_json::json!({"group": group_json, "field": field_json});
            let r = cli::run_command("bound", inputs, || cli::bound_payload(&group_json, &field_json))
                .map_err(|e| e.to_string())?;
            (r, true)
        }
        Command::RealizeAbelian { factors, scholz } => {
            let factors = parse_factors(factors)?;
            let scholz = match scholz {
                None => None,
                Some(pair) => Some((pair[0], pair[1] as u32)),
            };
            let inputs = serde_json::json!({"factors": factors, "scholz": scholz, "limit": limit});
            let r = cli::run_command("realize-abelian", inputs, || {
                cli::realize_abelian_payload(&factors, scholz, limit)
            })
            .map_err(|e| e.to_string())?;
            let ok = r.payload["certification"]["verdict"].as_bool().unwrap_or(false);
            (r, ok)
        }
        Command::Certificate { group, field } => {
            let group_json: GroupJson = read_json(group, "group file")?;
            let field_json = parse_field(&field.field)?;
            let inputs = serde_json::json!({"group": group_json, "field": field_json, "limit": limit});
            let r = cli::run_command("certificate", inputs, || {
                let cert = cli::certificate_payload(&group_json, &field_json, limit)?;
                Ok(serde_json::to_value(cert).unwrap())
            })
            .map_err(|e| e.to_string())?;
            let ok = r.payload["bound_ok"].as_bool().unwrap_or(false);
            (r, ok)
        }
        Command::ExceptionalSet { field, primes, n } => {
            let field_json = parse_field(&field.field)?;
            let primes = parse_factors(primes)?;
            let inputs = serde_json::json!({"field": field_json, "primes": primes, "N": n, "limit": limit});
            let r = cli::run_command("exceptional-set", inputs, || {
                let set = cli::exceptional_set_payload(&field_json, &primes, *n, limit)?;
                Ok(serde_json::to_value(set).unwrap())
            })
            .map_err(|e| e.to_string())?;
            (r, true)
        }
        Command::ScholzSearch { factors, n } => {
            let factors = parse_factors(factors)?;
            let inputs = serde_json::json!({"factors": factors, "N": n, "limit": limit});
            let r = cli::run_command("scholz-search", inputs, || {
                cli::scholz_search_payload(&factors, *n, limit)
            })
            .map_err(|e| e.to_string())?;
            (r, true)
        }
        Command::Certify { realization } => {
            let real: AbelianRealization = read_wrapped(realization, "realization", "realization")?;
            let inputs = serde_json::json!({"realization_file": realization});
            let r = cli::run_command("certify", inputs, || {
                let report = cli::certify_payload(&real)?;
                Ok(serde_json::to_value(report).unwrap())
            })
            .map_err(|e| e.to_string())?;
            let ok = r.payload["verdict"].as_bool().unwrap_or(false);
            (r, ok)
        }
        Command::Verify { certificate } => {
            let cert: ScholzCertificate = read_wrapped(certificate, "certificate", "certificate")?;
            let inputs = serde_json::json!({"certificate_file": certificate});
            let r = cli::run_command("verify", inputs, || {
                let report = cli::verify_payload(&cert)?;
                Ok(serde_json::to_value(report).unwrap())
            })
            .map_err(|e| e.to_string())?;
            let ok = r.payload["ok"].as_bool().unwrap_or(false);
            (r, ok)
        }
        Command::Frobenius {
            conductor,
            degree,
            bound,
        } => {
            let inputs = serde_json::json!({"conductor": conductor, "degree": degree, "bound": bound});
            let r = cli::run_command("frobenius", inputs, || {
                cli::frobenius_payload(*conductor, *degree, *bound)
            })
            .map_err(|e| e.to_string())?;
            let ok = r.payload["mismatches"].as_u64() == Some(0);
            (r, ok)
        }
    };
    emit(&result, &cli.output)?;
    Ok((result, ok))
}

fn main() -> ExitCode {
    match run() {
        Ok((_, true)) => ExitCode::SUCCESS,
        Ok((_, false)) => ExitCode::FAILURE,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
