//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error. Reports go
//! to stdout (or `--output`), diagnostics to stderr.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::decompose::{count_row, decompose, reconstruct, verify, Decomposition};
use crate::physics::{
    coefficient_diff, coupling_decompose_with, coupling_reconstruct, stiffness_decompose,
    voigt_to_tensor, CouplingTensor, CouplingVariant, VoigtMatrix,
};
use crate::tensor::DenseTensor;

#[derive(Debug, Parser)]
#[command(name = "devdecomp", version, about = "Irreducible (deviatoric) decomposition of 3D tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input file (tensor, decomposition, Voigt matrix)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Tensor order (counts, random)
    #[arg(long, global = true)]
    pub order: Option<usize>,

    /// Relative tolerance for verification
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,

    /// Seed for `random`
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Original tensor to verify a decomposition against
    #[arg(long, global = true)]
    pub reference: Option<PathBuf>,

    /// Coefficient set for `coupling`
    #[arg(long, global = true, value_enum, default_value_t = Variant::Printed)]
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Decompose a tensor file into irreducible parts
    Decompose,
    /// Sum the embedded parts of a decomposition file
    Reconstruct,
    /// Check a decomposition file; exit 1 if any residual exceeds the tolerance
    Verify,
    /// Print the number of parts per deviator order for `--order`
    Counts,
    /// Decompose a stiffness tensor given as a Voigt matrix
    Stiffness,
    /// Decompose a coupling tensor (order 3, symmetric in its first two indices)
    Coupling,
    /// Emit a seeded random tensor of `--order`
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Printed,
    Fitted,
}

impl From<Variant> for CouplingVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Printed => CouplingVariant::Printed,
            Variant::Fitted => CouplingVariant::Fitted,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {}", .0.join("; "))]
    Verification(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) | CliError::Io { .. } => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn require_input(cli: &Cli) -> CliResult<&Path> {
    cli.input
        .as_deref()
        .ok_or_else(|| input_err("--input is required for this command"))
}

fn require_order(cli: &Cli) -> CliResult<usize> {
    cli.order
        .ok_or_else(|| input_err("--order is required for this command"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| input_err(format!("{}: malformed {what}: {e}", path.display())))
}

/// Voigt matrix as a JSON array of 6 rows or as 6 whitespace-separated lines.
pub fn parse_voigt(text: &str, origin: &str) -> CliResult<VoigtMatrix> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text)
            .map_err(|e| input_err(format!("{origin}: malformed Voigt matrix: {e}")));
    }
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .enumerate()
            .map(|(c, tok)| {
                tok.parse::<f64>().map_err(|_| {
                    input_err(format!(
                        "{origin}: line {}, column {}: cannot parse {tok:?} as a number",
                        n + 1,
                        c + 1
                    ))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        if row.len() != 6 {
            return Err(input_err(format!(
                "{origin}: line {}: expected 6 entries, found {}",
                n + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    VoigtMatrix::from_rows(&rows).map_err(|e| input_err(format!("{origin}: {e}")))
}

/// Reproducible tensor with components uniform in [-1, 1).
pub fn random_tensor(order: usize, seed: u64) -> DenseTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseTensor::from_fn(order, |_| rng.gen_range(-1.0..1.0))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn tensor_text(t: &DenseTensor) -> String {
    let comps: Vec<String> = t.components().iter().map(|c| format!("{c:e}")).collect();
    format!("order {}\n{}\n", t.order(), comps.join(" "))
}

/// Runs one command and returns the report text.
pub fn execute(cli: &Cli) -> CliResult<String> {
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        return Err(input_err(format!("--tolerance must be positive, got {}", cli.tolerance)));
    }
    for path in [&cli.input, &cli.reference].into_iter().flatten() {
        if !path.is_file() {
            return Err(input_err(format!("{}: no such file", path.display())));
        }
    }
    match cli.command {
        Command::Counts => {
            let n = require_order(cli)?;
            let row = count_row(n);
            Ok(match cli.format {
                Format::Json => to_json(&json!({ "order": n, "counts": row })),
                Format::Text => {
                    let cells: Vec<String> = row.iter().map(u128::to_string).collect();
                    format!("{}\n", cells.join(" "))
                }
            })
        }
        Command::Random => {
            let n = require_order(cli)?;
            let t = random_tensor(n, cli.seed);
            Ok(match cli.format {
                Format::Json => to_json(&t),
                Format::Text => tensor_text(&t),
            })
        }
        Command::Decompose => {
            let t: DenseTensor = read_json(require_input(cli)?, "tensor")?;
            let d = decompose(&t);
            Ok(match cli.format {
                Format::Json => to_json(&d),
                Format::Text => {
                    let mut out = format!("order {} parts {}\n", d.order, d.parts.len());
                    for p in &d.parts {
                        writeln!(
                            out,
                            "s={} J={} |D|={:e} |P|={:e}",
                            p.s,
                            p.j,
                            p.deviator.norm(),
                            p.embedded.norm()
                        )
                        .expect("string write");
                    }
                    out
                }
            })
        }
        Command::Reconstruct => {
            let d: Decomposition = read_json(require_input(cli)?, "decomposition")?;
            check_part_orders(&d)?;
            let t = reconstruct(&d);
            Ok(match cli.format {
                Format::Json => to_json(&t),
                Format::Text => tensor_text(&t),
            })
        }
        Command::Verify => {
            let d: Decomposition = read_json(require_input(cli)?, "decomposition")?;
            let reference = match &cli.reference {
                Some(path) => read_json(path, "reference tensor")?,
                None => {
                    check_part_orders(&d)?;
                    reconstruct(&d)
                }
            };
            let report = verify(&d, &reference);
            let failures = report.failures(cli.tolerance);
            let text = match cli.format {
                Format::Json => to_json(&json!({
                    "tolerance": cli.tolerance,
                    "passed": failures.is_empty(),
                    "report": report,
                    "failures": failures,
                })),
                Format::Text => {
                    let mut out = String::new();
                    writeln!(out, "order {}", report.order).expect("string write");
                    writeln!(out, "reconstruction residual {:e}", report.reconstruction_residual).expect("string write");
                    writeln!(out, "symmetry residual {:e}", report.max_symmetry_residual).expect("string write");
                    writeln!(out, "trace residual {:e}", report.max_trace_residual).expect("string write");
                    writeln!(out, "orthogonality {:e}", report.max_orthogonality).expect("string write");
                    writeln!(out, "embedding residual {:e}", report.embedding_residual).expect("string write");
                    writeln!(out, "counts {:?} expected {:?}", report.found_counts, report.expected_counts)
                        .expect("string write");
                    writeln!(out, "{}", if failures.is_empty() { "PASS" } else { "FAIL" }).expect("string write");
                    out
                }
            };
            if failures.is_empty() {
                Ok(text)
            } else {
                emit(cli, &text)?;
                Err(CliError::Verification(failures))
            }
        }
        Command::Stiffness => {
            let path = require_input(cli)?;
            let m = parse_voigt(&read_file(path)?, &path.display().to_string())?;
            let d = stiffness_decompose(&voigt_to_tensor(&m));
            let norms = json!({ "d1": d.d1.norm(), "d2": d.d2.norm(), "d4": d.d4.norm() });
            Ok(match cli.format {
                Format::Json => to_json(&json!({
                    "lambda": d.lambda,
                    "mu": d.mu,
                    "norms": norms,
                    "deviators": d,
                })),
                Format::Text => format!(
                    "lambda {:e}\nmu {:e}\n|D1| {:e}\n|D2| {:e}\n|D4| {:e}\n",
                    d.lambda,
                    d.mu,
                    d.d1.norm(),
                    d.d2.norm(),
                    d.d4.norm()
                ),
            })
        }
        Command::Coupling => {
            let path = require_input(cli)?;
            let t: DenseTensor = read_json(path, "tensor")?;
            if t.order() != 3 {
                return Err(input_err(format!(
                    "{}: coupling tensor must have order 3, got {}",
                    path.display(),
                    t.order()
                )));
            }
            let h = CouplingTensor::new(t).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            let d = coupling_decompose_with(&h, cli.variant.into());
            let round_trip = coupling_reconstruct(&d)
                .map(|back| {
                    let scale = h.tensor().norm();
                    let r = (back.tensor() - h.tensor()).norm();
                    if scale > 0.0 {
                        r / scale
                    } else {
                        r
                    }
                })
                .unwrap_or(f64::INFINITY);
            let variant = match cli.variant {
                Variant::Printed => "printed",
                Variant::Fitted => "fitted",
            };
            Ok(match cli.format {
                Format::Json => to_json(&json!({
                    "variant": variant,
                    "round_trip_residual": round_trip,
                    "norms": {
                        "v2": d.v2.norm(), "v3": d.v3.norm(), "d1": d.d1.norm(), "d3": d.d3.norm()
                    },
                    "deviators": d,
                    "printed_vs_fitted": coefficient_diff(1e-12),
                })),
                Format::Text => format!(
                    "variant {variant}\nround-trip residual {round_trip:e}\n|v2| {:e}\n|v3| {:e}\n|D1| {:e}\n|D| {:e}\n",
                    d.v2.norm(),
                    d.v3.norm(),
                    d.d1.norm(),
                    d.d3.norm()
                ),
            })
        }
    }
}

/// Rejects decompositions whose parts cannot be summed.
fn check_part_orders(d: &Decomposition) -> CliResult<()> {
    for (i, p) in d.parts.iter().enumerate() {
        if p.embedded.order() != d.order {
            return Err(input_err(format!(
                "parts[{i}].embedded: order {} differs from decomposition order {}",
                p.embedded.order(),
                d.order
            )));
        }
    }
    Ok(())
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Parses arguments, runs, prints diagnostics, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli).and_then(|text| emit(&cli, &text)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("devdecomp: {e}");
            e.exit_code()
        }
    }
}
