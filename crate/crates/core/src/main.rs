//! `triclass`: analyze the two-qubit family, its purification and the
//! classification of the purified three-qubit state.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 usage error, 3 domain
//! precondition violated, 4 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use triclass::family::FamilyParams;
use triclass::report::{analyze_point, AnalyzeOptions};
use triclass::selftest;
use triclass::sweep::{parse_config, run_sweep, AxisSpec, OutputSet, SweepSpec};
use triclass::Error;

const EXIT_SELFTEST: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "triclass",
    version,
    about = "Geometric discord, purification and three-tangle classification \
             for a two-parameter family of two-qubit mixed states"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze a single parameter point end to end.
    Analyze(AnalyzeArgs),
    /// Sweep two parameters over a grid and emit a CSV phase map.
    Sweep(SweepArgs),
    /// Run the embedded invariant suite.
    Selftest(SelftestArgs),
}

/// Flags shared by `analyze` and `sweep` that pin down the family point.
#[derive(Args, Clone, Default)]
struct ParamFlags {
    /// Mixing weight p.
    #[arg(long)]
    p: Option<f64>,
    /// Branch amplitude alpha (beta = sqrt(1 - alpha^2)).
    #[arg(long)]
    alpha: Option<f64>,
    /// Parity selector n (only its parity matters).
    #[arg(long)]
    n: Option<i32>,
    /// First branch Bloch vector as x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// First branch Bloch vector, spherical polar angle (guarantees unit norm).
    #[arg(long = "r-theta", allow_hyphen_values = true)]
    r_theta: Option<f64>,
    /// First branch Bloch vector, spherical azimuthal angle.
    #[arg(long = "r-phi", allow_hyphen_values = true)]
    r_phi: Option<f64>,
    /// Second branch Bloch vector as x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Second branch Bloch vector, spherical polar angle.
    #[arg(long = "s-theta", allow_hyphen_values = true)]
    s_theta: Option<f64>,
    /// Second branch Bloch vector, spherical azimuthal angle.
    #[arg(long = "s-phi", allow_hyphen_values = true)]
    s_phi: Option<f64>,
    /// Flat key = value file supplying any of the flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Emit the report as JSON instead of plain text.
    #[arg(long)]
    json: bool,
    /// Also run the brute-force measurement sweep for the discord.
    #[arg(long)]
    oracle: bool,
    /// Sphere grid resolution for the brute-force sweep.
    #[arg(long = "oracle-grid", default_value_t = 128)]
    oracle_grid: usize,
    /// Classification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// First (outer, slowest) axis as name:min:max:steps, name in {p, alpha}.
    #[arg(long)]
    axis1: Option<String>,
    /// Second (inner) axis as name:min:max:steps.
    #[arg(long)]
    axis2: Option<String>,
    /// Comma-separated subset of discord,tau3,paper_label,slocc_label.
    #[arg(long)]
    outputs: Option<String>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Classification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Replace every agreement check's error bound (tiny values force
    /// failures; useful for exercising the failure path).
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Analyze(args) => run_analyze(args),
        Cmd::Sweep(args) => run_sweep_cmd(args),
        Cmd::Selftest(args) => run_selftest(args),
    }
}

fn domain_exit(err: &Error) -> u8 {
    match err {
        // spec-shape problems are usage errors
        Error::InvalidSweep(_) | Error::GridTooCoarse(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

/// `key = value` pairs from `--config`, later overridden by explicit flags.
fn merged_flags(flags: &ParamFlags) -> Result<ParamFlags, ExitCode> {
    let mut merged = flags.clone();
    let Some(path) = &flags.config else {
        return Ok(merged);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    let pairs = parse_config(&text).map_err(|e| fail(EXIT_USAGE, e))?;
    let parse_num = |key: &str, value: &str| -> Result<f64, ExitCode> {
        value
            .parse()
            .map_err(|_| fail(EXIT_USAGE, format!("config key {key}: bad number {value:?}")))
    };
    for (key, value) in pairs {
        match key.as_str() {
            "p" if merged.p.is_none() => merged.p = Some(parse_num("p", &value)?),
            "alpha" if merged.alpha.is_none() => {
                merged.alpha = Some(parse_num("alpha", &value)?)
            }
            "n" if merged.n.is_none() => {
                merged.n = Some(value.parse().map_err(|_| {
                    fail(EXIT_USAGE, format!("config key n: bad integer {value:?}"))
                })?)
            }
            "r" if merged.r.is_none() => merged.r = Some(value),
            "s" if merged.s.is_none() => merged.s = Some(value),
            "r-theta" if merged.r_theta.is_none() => {
                merged.r_theta = Some(parse_num("r-theta", &value)?)
            }
            "r-phi" if merged.r_phi.is_none() => {
                merged.r_phi = Some(parse_num("r-phi", &value)?)
            }
            "s-theta" if merged.s_theta.is_none() => {
                merged.s_theta = Some(parse_num("s-theta", &value)?)
            }
            "s-phi" if merged.s_phi.is_none() => {
                merged.s_phi = Some(parse_num("s-phi", &value)?)
            }
            // sweep-only keys are handled by the sweep command; params that
            // were already set by flags are silently kept
            "p" | "alpha" | "n" | "r" | "s" | "r-theta" | "r-phi" | "s-theta" | "s-phi"
            | "axis1" | "axis2" | "outputs" => {}
            other => {
                return Err(fail(EXIT_USAGE, format!("config key {other:?} not recognized")))
            }
        }
    }
    Ok(merged)
}

fn parse_triple(name: &str, text: &str) -> Result<[f64; 3], ExitCode> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(fail(EXIT_USAGE, format!("--{name} wants x,y,z, got {text:?}")));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| fail(EXIT_USAGE, format!("--{name}: bad number {part:?}")))?;
    }
    Ok(v)
}

fn bloch_vector(
    name: &str,
    triple: &Option<String>,
    theta: Option<f64>,
    phi: Option<f64>,
) -> Result<[f64; 3], ExitCode> {
    match (triple, theta) {
        (Some(_), Some(_)) => Err(fail(
            EXIT_USAGE,
            format!("--{name} and --{name}-theta are mutually exclusive"),
        )),
        (Some(text), None) => parse_triple(name, text),
        (None, Some(t)) => {
            let p = phi.unwrap_or(0.0);
            Ok([t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
        }
        (None, None) => Err(fail(
            EXIT_USAGE,
            format!("missing --{name} x,y,z (or --{name}-theta/--{name}-phi)"),
        )),
    }
}

fn family_params(flags: &ParamFlags) -> Result<FamilyParams, ExitCode> {
    let p = flags.p.ok_or_else(|| fail(EXIT_USAGE, "missing --p"))?;
    let alpha = flags.alpha.ok_or_else(|| fail(EXIT_USAGE, "missing --alpha"))?;
    let n = flags.n.ok_or_else(|| fail(EXIT_USAGE, "missing --n"))?;
    let r = bloch_vector("r", &flags.r, flags.r_theta, flags.r_phi)?;
    let s = bloch_vector("s", &flags.s, flags.s_theta, flags.s_phi)?;
    FamilyParams::new(p, alpha, n, r, s).map_err(|e| fail(EXIT_DOMAIN, e))
}

fn run_analyze(args: AnalyzeArgs) -> ExitCode {
    let flags = match merged_flags(&args.params) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let params = match family_params(&flags) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if args.oracle && args.oracle_grid < 8 {
        return fail(EXIT_USAGE, Error::GridTooCoarse(args.oracle_grid));
    }
    let opts = AnalyzeOptions { oracle: args.oracle, oracle_grid: args.oracle_grid, tol: args.tol };
    match analyze_point(&params, &opts) {
        Ok(report) => {
            println!("{}", if args.json { report.to_json() } else { report.to_text() });
            ExitCode::SUCCESS
        }
        Err(e) => fail(domain_exit(&e), e),
    }
}

fn run_sweep_cmd(args: SweepArgs) -> ExitCode {
    // axis specs may come from flags or from the config file
    let mut axis1_text = args.axis1.clone();
    let mut axis2_text = args.axis2.clone();
    let mut outputs_text = args.outputs.clone();
    if let Some(path) = &args.params.config {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(EXIT_IO, format!("cannot read {}: {e}", path.display())),
        };
        match parse_config(&text) {
            Ok(pairs) => {
                for (key, value) in pairs {
                    match key.as_str() {
                        "axis1" if axis1_text.is_none() => axis1_text = Some(value),
                        "axis2" if axis2_text.is_none() => axis2_text = Some(value),
                        "outputs" if outputs_text.is_none() => outputs_text = Some(value),
                        _ => {}
                    }
                }
            }
            Err(e) => return fail(EXIT_USAGE, e),
        }
    }
    let flags = match merged_flags(&args.params) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let (Some(axis1_text), Some(axis2_text)) = (axis1_text, axis2_text) else {
        return fail(EXIT_USAGE, "sweep needs --axis1 and --axis2 (flags or config)");
    };
    let axis1: AxisSpec = match axis1_text.parse() {
        Ok(a) => a,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let axis2: AxisSpec = match axis2_text.parse() {
        Ok(a) => a,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let outputs: OutputSet = match outputs_text {
        Some(text) => match text.parse() {
            Ok(o) => o,
            Err(e) => return fail(EXIT_USAGE, e),
        },
        None => OutputSet::default(),
    };

    // swept axes do not need explicit values; seed them with the axis minima
    let mut flags = flags;
    for axis in [&axis1, &axis2] {
        match axis.axis {
            triclass::sweep::SweepAxis::P if flags.p.is_none() => flags.p = Some(axis.min),
            triclass::sweep::SweepAxis::Alpha if flags.alpha.is_none() => {
                flags.alpha = Some(axis.min)
            }
            _ => {}
        }
    }
    let base = match family_params(&flags) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let spec = SweepSpec { axis1, axis2, base, outputs, tol: args.tol };
    let csv = match run_sweep(&spec) {
        Ok(csv) => csv,
        Err(e) => return fail(domain_exit(&e), e),
    };
    match args.csv {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, csv) {
                return fail(EXIT_IO, format!("cannot write {}: {e}", path.display()));
            }
            ExitCode::SUCCESS
        }
        None => {
            print!("{csv}");
            ExitCode::SUCCESS
        }
    }
}

fn run_selftest(args: SelftestArgs) -> ExitCode {
    let outcomes = selftest::run(args.seed, args.tol);
    let (text, all_ok) = selftest::render(&outcomes);
    print!("{text}");
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_SELFTEST)
    }
}
