//! Subcommand implementations. Each returns the process exit code:
//! 0 = success / all checks passed, 1 = a property check failed,
//! 2 = usage or parse error, 3 = timeout or resource refusal.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::ValueEnum;
use serde::Serialize;
use thiserror::Error;

use diverge_core::capacity::{
    omega_table, CapacityError, CliqueOptions, OmegaRow, RowOutcome, DEFAULT_N_LIMIT,
};
use diverge_core::streams::StreamError;
use diverge_core::suite::{run_suite, SuiteConfig, SuiteReport};
use diverge_core::verify::{collision_scan, divergence_certificate, DivergenceCertificate, VerifyError};
use diverge_core::{GraphSpec, HorizonCap};

use crate::csvio::provenance_line;
use crate::parse::{parse_construction, parse_graph, ParseError};

#[derive(Debug, Error)]
pub enum CliFailure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Refusal(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliFailure {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliFailure::Usage(_) => 2,
            CliFailure::Refusal(_) | CliFailure::Io(_) | CliFailure::Json(_) => 3,
        }
    }
}

impl From<ParseError> for CliFailure {
    fn from(e: ParseError) -> Self {
        CliFailure::Usage(e.to_string())
    }
}

fn stream_failure(e: StreamError) -> CliFailure {
    match e {
        StreamError::InvalidConstruction(_) => CliFailure::Usage(e.to_string()),
        StreamError::PositionAboveCap { .. }
        | StreamError::ValueAboveCap { .. }
        | StreamError::Overflow { .. } => CliFailure::Refusal(e.to_string()),
    }
}

fn verify_failure(e: VerifyError) -> CliFailure {
    match e {
        VerifyError::Stream(inner) => stream_failure(inner),
        VerifyError::BadThresholds
        | VerifyError::HorizonBelowThreshold { .. }
        | VerifyError::EmptyHorizon
        | VerifyError::VertexOutOfRange { .. }
        | VerifyError::BadEdgeLawPair { .. } => CliFailure::Usage(e.to_string()),
    }
}

fn capacity_failure(e: CapacityError) -> CliFailure {
    match e {
        CapacityError::NAboveLimit { .. }
        | CapacityError::Timeout { .. }
        | CapacityError::WitnessVerification => CliFailure::Refusal(e.to_string()),
        CapacityError::BaseTooSmall { .. } | CapacityError::NotAPermutation { .. } => {
            CliFailure::Usage(e.to_string())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct GlobalOpts {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub deterministic: bool,
    pub seed: u64,
    pub timeout_ms: Option<u64>,
    pub cap: HorizonCap,
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliFailure> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(fs::File::create(path)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), CliFailure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PositionValue {
    position: u64,
    value: u64,
}

#[derive(Serialize)]
struct GenJson {
    command: &'static str,
    construction: String,
    n: u64,
    rows: Vec<PositionValue>,
}

pub fn run_gen(spec: &str, n: u64, g: &GlobalOpts) -> Result<u8, CliFailure> {
    let c = parse_construction(spec)?;
    g.cap.check_position(n).map_err(stream_failure)?;
    match g.format {
        Format::Csv => {
            let mut w = sink(&g.out)?;
            writeln!(w, "{}", provenance_line("gen"))?;
            writeln!(w, "position,value")?;
            for t in 1..=n {
                let v = c.value_at_checked(t, g.cap).map_err(stream_failure)?;
                writeln!(w, "{t},{v}")?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows = (1..=n)
                .map(|t| {
                    Ok(PositionValue {
                        position: t,
                        value: c.value_at_checked(t, g.cap).map_err(stream_failure)?,
                    })
                })
                .collect::<Result<Vec<_>, CliFailure>>()?;
            write_json(
                &g.out,
                &GenJson {
                    command: "gen",
                    construction: c.to_string(),
                    n,
                    rows,
                },
            )?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct PositionDiff {
    position: u64,
    diff: u64,
}

#[derive(Serialize)]
struct CertificateJson {
    c1: String,
    c2: String,
    thresholds: Vec<u64>,
    valid: bool,
    weak: bool,
    certificate: DivergenceCertificate,
}

#[derive(Serialize)]
struct DiffJson {
    command: &'static str,
    c1: String,
    c2: String,
    horizon: u64,
    rows: Vec<PositionDiff>,
    certificate: Option<CertificateJson>,
}

pub fn run_diff(
    spec1: &str,
    spec2: &str,
    n: u64,
    thresholds: &[u64],
    g: &GlobalOpts,
) -> Result<u8, CliFailure> {
    let c1 = parse_construction(spec1)?;
    let c2 = parse_construction(spec2)?;
    let mut thresholds = thresholds.to_vec();
    thresholds.sort_unstable();
    thresholds.dedup();

    let certificate = if thresholds.is_empty() {
        None
    } else {
        let cert = divergence_certificate(&c1, &c2, n, &thresholds, g.cap)
            .map_err(verify_failure)?;
        Some(CertificateJson {
            c1: c1.to_string(),
            c2: c2.to_string(),
            thresholds,
            valid: cert.is_valid(),
            weak: cert.has_weak(),
            certificate: cert,
        })
    };
    let diverged = certificate.as_ref().map_or(true, |c| c.valid);

    match g.format {
        Format::Csv => {
            {
                let mut w = sink(&g.out)?;
                writeln!(w, "{}", provenance_line("diff"))?;
                writeln!(w, "position,diff")?;
                for t in 1..=n {
                    let a = c1.value_at_checked(t, g.cap).map_err(stream_failure)?;
                    let b = c2.value_at_checked(t, g.cap).map_err(stream_failure)?;
                    writeln!(w, "{t},{}", a.abs_diff(b))?;
                }
                w.flush()?;
            }
            // The certificate is a separate JSON artifact: next to the CSV
            // when writing to a file, on stderr when the CSV owns stdout.
            if let Some(cert) = &certificate {
                let rendered = serde_json::to_string_pretty(cert)?;
                match &g.out {
                    Some(path) => {
                        let cert_path = path.with_extension("cert.json");
                        fs::write(&cert_path, rendered + "\n")?;
                        eprintln!("divergence certificate written to {}", cert_path.display());
                    }
                    None => eprintln!("{rendered}"),
                }
            }
        }
        Format::Json => {
            let rows = (1..=n)
                .map(|t| {
                    let a = c1.value_at_checked(t, g.cap).map_err(stream_failure)?;
                    let b = c2.value_at_checked(t, g.cap).map_err(stream_failure)?;
                    Ok(PositionDiff {
                        position: t,
                        diff: a.abs_diff(b),
                    })
                })
                .collect::<Result<Vec<_>, CliFailure>>()?;
            write_json(
                &g.out,
                &DiffJson {
                    command: "diff",
                    c1: c1.to_string(),
                    c2: c2.to_string(),
                    horizon: n,
                    rows,
                    certificate,
                },
            )?;
        }
    }
    Ok(if diverged { 0 } else { 1 })
}

#[derive(Serialize)]
struct CollisionRow {
    position: u64,
    value1: u64,
    value2: u64,
}

#[derive(Serialize)]
struct CollideJson {
    command: &'static str,
    c1: String,
    c2: String,
    graph: String,
    horizon: u64,
    count: usize,
    rows: Vec<CollisionRow>,
}

pub fn run_collide(
    spec1: &str,
    spec2: &str,
    graph_spec: &str,
    n: u64,
    g: &GlobalOpts,
) -> Result<u8, CliFailure> {
    let c1 = parse_construction(spec1)?;
    let c2 = parse_construction(spec2)?;
    let graph = parse_graph(graph_spec)?;
    let report = collision_scan(&c1, &c2, &graph, n, g.cap).map_err(verify_failure)?;
    let rows: Vec<CollisionRow> = report
        .positions
        .iter()
        .map(|&t| CollisionRow {
            position: t,
            value1: c1.value_at(t),
            value2: c2.value_at(t),
        })
        .collect();
    match g.format {
        Format::Csv => {
            let mut w = sink(&g.out)?;
            writeln!(w, "{}", provenance_line("collide"))?;
            writeln!(w, "position,value1,value2")?;
            for row in &rows {
                writeln!(w, "{},{},{}", row.position, row.value1, row.value2)?;
            }
            w.flush()?;
        }
        Format::Json => write_json(
            &g.out,
            &CollideJson {
                command: "collide",
                c1: c1.to_string(),
                c2: c2.to_string(),
                graph: graph.to_string(),
                horizon: n,
                count: rows.len(),
                rows,
            },
        )?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyJson {
    command: &'static str,
    config: SuiteConfig,
    report: SuiteReport,
}

/// The invariant suite always reports as JSON; `--format` does not apply.
pub fn run_verify(horizon: Option<u64>, g: &GlobalOpts) -> Result<u8, CliFailure> {
    let mut config = match horizon {
        Some(h) => {
            g.cap.check_position(h).map_err(stream_failure)?;
            SuiteConfig::with_scan_horizon(h)
        }
        None => SuiteConfig::default(),
    };
    config.cap = g.cap;
    let report = run_suite(&config);
    let passed = report.passed;
    write_json(
        &g.out,
        &VerifyJson {
            command: "verify",
            config,
            report,
        },
    )?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct CapacityJson {
    command: &'static str,
    graph: String,
    nmax: u64,
    limit: u64,
    deterministic: bool,
    rows: Vec<OmegaRow>,
}

pub fn run_capacity(graph_spec: &str, nmax: u64, g: &GlobalOpts) -> Result<u8, CliFailure> {
    let base = parse_graph(graph_spec)?;
    let opts = CliqueOptions {
        deterministic: g.deterministic,
        seed: g.seed,
        timeout: g.timeout_ms.map(Duration::from_millis),
    };
    let mut rows = omega_table(&base, nmax, DEFAULT_N_LIMIT, &opts).map_err(capacity_failure)?;
    if g.deterministic {
        // Byte-identical reruns: timing is the only nondeterministic field.
        for row in &mut rows {
            match &mut row.outcome {
                RowOutcome::Solved { elapsed_ms, .. } | RowOutcome::TimedOut { elapsed_ms } => {
                    *elapsed_ms = 0
                }
            }
        }
    }
    let timed_out = rows
        .iter()
        .any(|r| matches!(r.outcome, RowOutcome::TimedOut { .. }));
    let conjectured = matches!(base, GraphSpec::Distance { k: 1 });

    match g.format {
        Format::Csv => {
            let mut w = sink(&g.out)?;
            writeln!(w, "{}", provenance_line("capacity"))?;
            // rates are log base 2 of omega over n
            if conjectured {
                writeln!(w, "n,omega,conjecture,match,rate,elapsed_ms")?;
            } else {
                writeln!(w, "n,omega,rate,elapsed_ms")?;
            }
            for row in &rows {
                match &row.outcome {
                    RowOutcome::Solved {
                        omega,
                        conjecture,
                        matches,
                        rate,
                        elapsed_ms,
                        ..
                    } => {
                        if conjectured {
                            writeln!(
                                w,
                                "{},{omega},{},{},{rate:.6},{elapsed_ms}",
                                row.n,
                                conjecture.expect("distance-1 rows carry the conjecture"),
                                matches.expect("distance-1 rows carry the match flag"),
                            )?;
                        } else {
                            writeln!(w, "{},{omega},{rate:.6},{elapsed_ms}", row.n)?;
                        }
                    }
                    RowOutcome::TimedOut { elapsed_ms } => {
                        if conjectured {
                            writeln!(w, "{},,,,,{elapsed_ms}", row.n)?;
                        } else {
                            writeln!(w, "{},,,{elapsed_ms}", row.n)?;
                        }
                    }
                }
            }
            w.flush()?;
        }
        Format::Json => write_json(
            &g.out,
            &CapacityJson {
                command: "capacity",
                graph: base.to_string(),
                nmax,
                limit: DEFAULT_N_LIMIT,
                deterministic: g.deterministic,
                rows,
            },
        )?,
    }
    Ok(if timed_out { 3 } else { 0 })
}
