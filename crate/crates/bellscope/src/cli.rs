//! Command-line front end.
//!
//! [`execute`] takes raw arguments (without the binary name) and returns the
//! exit code plus captured stdout and stderr, so the whole interface is
//! testable in-process; the binary is a thin wrapper around it. Exit codes:
//! 0 success, 1 verification failure, 2 usage error.
//!
//! All randomness flows from `--seed`. Shot i draws from the substream
//! derived from (seed, i), so output is byte-identical across runs and
//! independent of any execution order.

use crate::bell::{apply_local_op, bell_state, BellLabel, LocalOp};
use crate::circuit::discriminator_circuit;
use crate::discriminator::{
    bits_for_label, dense_code_demo, discriminate, random_state_audit, DiscriminationResult,
};
use crate::statevec::{StateError, StateVector};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;

/// Everything a CLI invocation produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(
    name = "bellscope",
    version,
    about = "Identify Bell states without destroying them",
    no_binary_name = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identify all four Bell states and check the channel survives
    Table,
    /// Run the two-stage discriminator on a chosen input state
    Discriminate(DiscriminateArgs),
    /// Dense-coding round trip: encode with a local op, decode by discriminating
    DemoDense(DemoDenseArgs),
    /// Emit the 4-qubit discriminator in the circuit text format
    PrintCircuit,
    /// Audit measurement equivalence and stabilizer identities on random states
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DiscriminateArgs {
    /// Bell-state input: psi+, psi-, phi+, or phi-
    #[arg(
        long,
        value_name = "NAME",
        conflicts_with = "amps",
        required_unless_present = "amps"
    )]
    state: Option<BellLabel>,
    /// Raw input amplitudes re,im,re,im,re,im,re,im for |00>,|01>,|10>,|11>
    #[arg(long, value_name = "REALS")]
    amps: Option<String>,
    /// Number of independent repetitions on fresh copies of the input
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    /// Root of all random streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit one json object instead of human-readable lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DemoDenseArgs {
    /// Shared Bell pair before encoding: psi+, psi-, phi+, or phi-
    #[arg(long, value_name = "NAME")]
    state: BellLabel,
    /// Encoding operation: x1, x2, y1, y2, z1, z2, or hh
    #[arg(long, value_name = "OP")]
    op: LocalOp,
    /// Root of all random streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of random 2-qubit states to audit
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Root of all random streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parses and dispatches one invocation. Exit code 2 flags usage errors,
/// 1 any verification or internal failure.
pub fn execute<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutput {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => CliOutput {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    let result = match cli.command {
        Command::Table => cmd_table(),
        Command::Discriminate(args) => cmd_discriminate(args),
        Command::DemoDense(args) => cmd_demo_dense(args),
        Command::PrintCircuit => Ok(CliOutput {
            code: 0,
            stdout: discriminator_circuit().to_string(),
            stderr: String::new(),
        }),
        Command::Verify(args) => cmd_verify(args),
    };
    result.unwrap_or_else(|err| CliOutput {
        code: 1,
        stdout: String::new(),
        stderr: format!("error: {err}\n"),
    })
}

fn cmd_table() -> Result<CliOutput, StateError> {
    let mut stdout = String::new();
    let mut failed = false;
    for label in BellLabel::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = discriminate(&bell_state(label), &mut rng)?;
        let fidelity = out.post_state.fidelity_up_to_phase(&bell_state(label))?;
        if (out.a1, out.a2) != bits_for_label(label)
            || (out.outcome_prob - 1.0).abs() > 1e-12
            || 1.0 - fidelity > 1e-12
        {
            failed = true;
        }
        writeln!(
            stdout,
            "{label}  a1={} a2={}  probability={:.12}  fidelity={:.12}",
            out.a1, out.a2, out.outcome_prob, fidelity
        )
        .expect("writing to a string");
    }
    Ok(CliOutput {
        code: i32::from(failed),
        stdout,
        stderr: if failed {
            "table: identification deviates beyond 1e-12\n".to_string()
        } else {
            String::new()
        },
    })
}

#[derive(Serialize)]
struct Frequencies {
    #[serde(rename = "psi+")]
    psi_plus: f64,
    #[serde(rename = "psi-")]
    psi_minus: f64,
    #[serde(rename = "phi+")]
    phi_plus: f64,
    #[serde(rename = "phi-")]
    phi_minus: f64,
}

/// Field order here fixes the json field order.
#[derive(Serialize)]
struct DiscriminateReport<'a> {
    bits: [u8; 2],
    label: &'a str,
    probability: f64,
    fidelity: f64,
    shots: u64,
    frequencies: Frequencies,
}

fn cmd_discriminate(args: DiscriminateArgs) -> Result<CliOutput, StateError> {
    let input = match resolve_input(&args) {
        Ok(state) => state,
        Err(message) => {
            return Ok(CliOutput {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: {message}\n"),
            })
        }
    };

    let mut counts = [0u64; 4];
    let mut first: Option<(DiscriminationResult, f64)> = None;
    for shot in 0..args.shots {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(shot);
        let out = discriminate(&input, &mut rng)?;
        counts[out.label.index()] += 1;
        if first.is_none() {
            let fidelity = out
                .post_state
                .fidelity_up_to_phase(&bell_state(out.label))?;
            first = Some((out, fidelity));
        }
    }
    let (first, fidelity) = first.expect("at least one shot");
    let freq = counts.map(|c| c as f64 / args.shots as f64);

    let stdout = if args.json {
        let report = DiscriminateReport {
            bits: [first.a1, first.a2],
            label: first.label.name(),
            probability: first.outcome_prob,
            fidelity,
            shots: args.shots,
            frequencies: Frequencies {
                psi_plus: freq[BellLabel::PsiPlus.index()],
                psi_minus: freq[BellLabel::PsiMinus.index()],
                phi_plus: freq[BellLabel::PhiPlus.index()],
                phi_minus: freq[BellLabel::PhiMinus.index()],
            },
        };
        let mut line = serde_json::to_string(&report).expect("report serializes");
        line.push('\n');
        line
    } else {
        let mut text = format!(
            "a1={} a2={} label={} probability={:.12} fidelity={:.12}\n",
            first.a1, first.a2, first.label, first.outcome_prob, fidelity
        );
        if args.shots > 1 {
            writeln!(text, "shots={}", args.shots).expect("writing to a string");
            for label in BellLabel::ALL {
                writeln!(text, "{label} {:.6}", freq[label.index()]).expect("writing to a string");
            }
        }
        text
    };
    Ok(CliOutput {
        code: 0,
        stdout,
        stderr: String::new(),
    })
}

fn cmd_demo_dense(args: DemoDenseArgs) -> Result<CliOutput, StateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (expected, measured) = dense_code_demo(args.state, args.op, &mut rng)?;
    let encoded = apply_local_op(args.op, &bell_state(args.state))?;
    let fidelity = measured.post_state.fidelity_up_to_phase(&encoded)?;
    let ok = measured.label == expected
        && (measured.outcome_prob - 1.0).abs() <= 1e-12
        && fidelity >= 1.0 - 1e-12;
    let stdout =
        format!(
        "start={} op={} expected={} measured={} bits=({},{}) probability={:.12} fidelity={:.12}\n",
        args.state, args.op, expected, measured.label, measured.a1, measured.a2,
        measured.outcome_prob, fidelity
    );
    Ok(CliOutput {
        code: i32::from(!ok),
        stdout,
        stderr: if ok {
            String::new()
        } else {
            "demo-dense: round trip deviated from the transform table\n".to_string()
        },
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<CliOutput, StateError> {
    let report = random_state_audit(args.trials, args.seed)?;
    let pass = report.max_joint_deviation < 1e-10
        && report.min_conditional_fidelity >= 1.0 - 1e-9
        && report.max_xx_identity_deviation < 1e-10
        && report.max_zz_identity_deviation < 1e-10;
    let mut stdout = format!("trials={} seed={}\n", args.trials, args.seed);
    writeln!(
        stdout,
        "max_joint_deviation={:.3e} limit=1e-10",
        report.max_joint_deviation
    )
    .expect("writing to a string");
    writeln!(
        stdout,
        "min_conditional_fidelity={:.12} floor=1-1e-9",
        report.min_conditional_fidelity
    )
    .expect("writing to a string");
    writeln!(
        stdout,
        "max_xx_identity_deviation={:.3e} limit=1e-10",
        report.max_xx_identity_deviation
    )
    .expect("writing to a string");
    writeln!(
        stdout,
        "max_zz_identity_deviation={:.3e} limit=1e-10",
        report.max_zz_identity_deviation
    )
    .expect("writing to a string");
    stdout.push_str(if pass { "pass\n" } else { "FAIL\n" });
    Ok(CliOutput {
        code: i32::from(!pass),
        stdout,
        stderr: if pass {
            String::new()
        } else {
            "verify: tolerance breached\n".to_string()
        },
    })
}

fn resolve_input(args: &DiscriminateArgs) -> Result<StateVector, String> {
    if let Some(label) = args.state {
        return Ok(bell_state(label));
    }
    let raw = args.amps.as_deref().expect("clap requires state or amps");
    parse_amps(raw)
}

/// Reads the 8-real amplitude list, applies the coarse normalization gate,
/// and renormalizes exactly.
fn parse_amps(raw: &str) -> Result<StateVector, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 8 {
        return Err(format!(
            "--amps takes 8 comma-separated reals (re,im per amplitude), got {}",
            parts.len()
        ));
    }
    let mut reals = [0.0f64; 8];
    for (slot, part) in reals.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("--amps component {part:?} is not a real number"))?;
        if !slot.is_finite() {
            return Err(format!("--amps component {part:?} is not finite"));
        }
    }
    let amps: Vec<Complex64> = reals
        .chunks_exact(2)
        .map(|pair| Complex64::new(pair[0], pair[1]))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(format!("--amps norm {norm:.9} is not within 1e-6 of 1"));
    }
    let amps = amps.into_iter().map(|a| a / norm).collect();
    StateVector::from_amplitudes(amps).map_err(|e| e.to_string())
}
