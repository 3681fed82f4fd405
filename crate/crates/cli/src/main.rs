//! `dispteleport`: parameter sweeps as CSV, protocol trial runs as JSON,
//! heralded channel generation and the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numeric degeneracy.

mod grid;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dispteleport::displaced::{cat_number_probs, coeff_c};
use dispteleport::fock::Parity;
use dispteleport::generation::{generate_channel, GenerationConfig, Pattern};
use dispteleport::modulation::prob_family;
use dispteleport::protocol::{
    approximation_fidelity_analytic, approximation_fidelity_numeric, run_trials, success_prob, Measurement, Mode,
    ProtocolParams, Qubit, TrialConfig,
};
use dispteleport::sweep;
use dispteleport::verify::{self, Level};
use num_complex::Complex64 as C64;

use grid::{parse_complex, resolve, GridSpec, Point};
use output::{nmax_label, num, Csv};

/// Terms summed when forming the residual `1 − Σ P_n`.
const SERIES_TERMS: usize = 100;
/// Photon numbers listed in `probs` output unless `--nmax` says otherwise.
const DEFAULT_LISTED: usize = 5;

#[derive(Parser)]
#[command(name = "dispteleport", version, about = "Teleportation through a hybrid coherent/dual-rail channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximation fidelity over α and t (closed form; --exact adds the simulated value).
    Fidelity(FidelityArgs),
    /// Success-probability families over α and |a1|, or cat-state photon statistics over β.
    Probs(ProbsArgs),
    /// Heralded generation of the hybrid channel.
    Channel(ChannelArgs),
    /// Sampled protocol run; writes a JSON report.
    Teleport(TeleportArgs),
    /// Run the invariant suites and print a table.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Sweep an axis: AXIS=start:stop:steps (repeatable).
    #[arg(long = "grid", value_name = "AXIS=START:STOP:STEPS")]
    grids: Vec<GridSpec>,
    /// Per-mode Fock cutoff overriding the truncation rule.
    #[arg(long)]
    nmax: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QubitArgs {
    /// Amplitude of |0⟩ as "re,im"; the qubit is normalized on input.
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<String>,
    /// Amplitude of |1⟩ as "re,im".
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<String>,
}

impl QubitArgs {
    /// Defaults to `(|0⟩ + i|1⟩)/√2`.
    fn qubit(&self) -> Result<Qubit> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a0 = self.a0.as_deref().map(parse_complex).transpose()?.unwrap_or(C64::new(h, 0.0));
        let a1 = self.a1.as_deref().map(parse_complex).transpose()?.unwrap_or(C64::new(0.0, h));
        Ok(Qubit::normalized(a0, a1)?)
    }
}

#[derive(Args)]
struct FidelityArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    qubit: QubitArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Add the full beam-splitter simulation (needs t < 1).
    #[arg(long)]
    exact: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Plain protocol, P_n.
    Direct,
    /// Input pre-modulated so that outcome 0 restores it, P_n0.
    Am0,
    /// Input pre-modulated so that outcome 1 restores it, P_n1.
    Am1,
    /// Even and odd cat-state photon statistics over β.
    Cat,
}

#[derive(Args)]
struct ProbsArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    qubit: QubitArgs,
    #[arg(long, value_enum, default_value = "direct")]
    family: Family,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct ChannelArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    beta: Option<f64>,
    /// Displacement α = α₁; fixes t = √(1 − α²/β²). Excludes --t.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, default_value = "ideal")]
    mode: Mode,
    /// Heralded photon patterns in modes 5 and 6, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "00,01,10,11")]
    patterns: Vec<Pattern>,
}

#[derive(Args)]
struct TeleportArgs {
    #[command(flatten)]
    qubit: QubitArgs,
    /// Displacement α; fixes β = α/√(1 − t²). Excludes --beta.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0.99)]
    t: f64,
    #[arg(long, default_value = "ideal")]
    mode: Mode,
    #[arg(long, default_value = "full")]
    measurement: Measurement,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "quick")]
    level: Level,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Run the suites against a coefficient routine with a deliberate sign
    /// error, to check that they catch it.
    #[arg(long, hide = true)]
    inject_sign_error: bool,
}

fn or_default(p: &mut Point, key: &'static str, value: f64) -> f64 {
    *p.entry(key).or_insert(value)
}

fn fidelity(args: &FidelityArgs) -> Result<()> {
    let q = args.qubit.qubit()?;
    let points = resolve(&["alpha", "t"], &args.common.grids, &[("alpha", args.alpha), ("t", args.t)])?;
    let nmax = args.common.nmax;
    let rows = sweep::try_map(&points, |p| {
        let mut p = p.clone();
        let alpha = or_default(&mut p, "alpha", 0.1);
        let t = or_default(&mut p, "t", 0.995);
        let analytic = approximation_fidelity_analytic(&q, alpha, t)?;
        let mut row = vec![num(alpha), num(t), num(analytic)];
        if args.exact {
            let params = ProtocolParams::from_alpha(alpha, t)?.with_nmax(nmax)?;
            row.push(num(approximation_fidelity_numeric(&q, &params)?));
        }
        Ok(row)
    })?;

    let mut columns = vec!["alpha", "t", "fid_analytic"];
    let mut provenance = "closed-form fidelity".to_string();
    if args.exact {
        columns.push("fid_numeric");
        provenance.push_str("; beam-splitter simulation");
    }
    columns.push("provenance");
    let columns: Vec<String> = columns.into_iter().map(String::from).collect();
    let mut csv = Csv::new(output::sink(args.common.out.as_deref())?, &provenance, &nmax_label(nmax), &columns)?;
    for mut row in rows {
        row.push(provenance.clone());
        csv.row(&row)?;
    }
    csv.finish()
}

fn probs(args: &ProbsArgs) -> Result<()> {
    let listed = args.common.nmax.unwrap_or(DEFAULT_LISTED);
    let cat = matches!(args.family, Family::Cat);
    let (allowed, fixed): (&[&'static str], Vec<(&'static str, Option<f64>)>) = if cat {
        if args.alpha.is_some() || args.qubit.a0.is_some() || args.qubit.a1.is_some() {
            bail!("--family cat takes --beta only");
        }
        (&["beta"], vec![("beta", args.beta)])
    } else {
        if args.beta.is_some() {
            bail!("--beta applies to --family cat only");
        }
        let a1 = args.qubit.qubit()?.a1().norm();
        let a1 = (args.qubit.a0.is_some() || args.qubit.a1.is_some()).then_some(a1);
        (&["alpha", "a1"], vec![("alpha", args.alpha), ("a1", a1)])
    };
    let points = resolve(allowed, &args.common.grids, &fixed)?;

    let provenance = match args.family {
        Family::Direct => "plain-protocol outcome probabilities",
        Family::Am0 => "outcome probabilities, input modulated for outcome 0",
        Family::Am1 => "outcome probabilities, input modulated for outcome 1",
        Family::Cat => "cat-state photon-number distribution",
    };
    let rows: Vec<Vec<Vec<String>>> = sweep::try_map(&points, |p| {
        let mut p = p.clone();
        if cat {
            let beta = or_default(&mut p, "beta", 0.3);
            return [(Parity::Even, "even"), (Parity::Odd, "odd")]
                .into_iter()
                .map(|(parity, label)| {
                    let all: Vec<f64> = (0..SERIES_TERMS.max(listed + 1))
                        .map(|n| cat_number_probs(beta, parity, n))
                        .collect::<dispteleport::Result<_>>()?;
                    let mut row = vec![num(beta), label.to_string()];
                    row.extend(all[..=listed].iter().map(|&x| num(x)));
                    row.push(num(1.0 - all.iter().sum::<f64>()));
                    row.push(provenance.to_string());
                    Ok(row)
                })
                .collect();
        }
        let alpha = or_default(&mut p, "alpha", 0.03);
        let a1 = or_default(&mut p, "a1", std::f64::consts::FRAC_1_SQRT_2);
        let q = Qubit::from_magnitude(a1, 0.0)?;
        let all: Vec<f64> = (0..SERIES_TERMS.max(listed + 1))
            .map(|n| match args.family {
                Family::Am0 => prob_family(0, n, alpha, &q),
                Family::Am1 => prob_family(1, n, alpha, &q),
                _ => Ok(success_prob(n, alpha, &q)),
            })
            .collect::<dispteleport::Result<_>>()?;
        let note = match args.family {
            Family::Am0 if a1 < 0.4 => "highly unbalanced",
            Family::Am1 if a1 > 0.95 => "highly unbalanced",
            _ => "",
        };
        let mut row = vec![num(alpha), num(a1)];
        row.extend(all[..=listed].iter().map(|&x| num(x)));
        row.push(num(1.0 - all.iter().sum::<f64>()));
        row.push(note.to_string());
        row.push(provenance.to_string());
        Ok(vec![row])
    })?;

    let mut columns: Vec<String> =
        if cat { vec!["beta".into(), "parity".into()] } else { vec!["alpha".into(), "a1_abs".into()] };
    columns.extend((0..=listed).map(|n| format!("p_{n}")));
    columns.push("residual".into());
    if !cat {
        columns.push("note".into());
    }
    columns.push("provenance".into());
    let label = format!("{listed} (highest listed photon number; residual over {SERIES_TERMS} terms)");
    let mut csv = Csv::new(output::sink(args.common.out.as_deref())?, provenance, &label, &columns)?;
    for row in rows.into_iter().flatten() {
        csv.row(&row)?;
    }
    csv.finish()
}

fn channel(args: &ChannelArgs) -> Result<()> {
    let grids_alpha = args.common.grids.iter().any(|g| g.axis == "alpha");
    let grids_t = args.common.grids.iter().any(|g| g.axis == "t");
    if (args.alpha.is_some() || grids_alpha) && (args.t.is_some() || grids_t) {
        bail!("give either α or t, not both");
    }
    let by_alpha = args.alpha.is_some() || grids_alpha;
    let points = resolve(
        &["beta", "alpha", "t"],
        &args.common.grids,
        &[("beta", args.beta), ("alpha", args.alpha), ("t", args.t)],
    )?;
    let nmax = args.common.nmax;
    let rows = sweep::try_map(&points, |p| {
        let mut p = p.clone();
        let beta = or_default(&mut p, "beta", 0.3);
        let cfg = if by_alpha {
            GenerationConfig::from_alpha(p["alpha"], beta)?
        } else {
            GenerationConfig::new(beta, or_default(&mut p, "t", 0.999))?
        }
        .with_nmax(nmax)?;
        args.patterns
            .iter()
            .map(|&pattern| {
                let g = generate_channel(&cfg, pattern, args.mode)?;
                Ok(vec![
                    num(beta),
                    num(cfg.alpha()),
                    num(cfg.t()),
                    pattern.to_string(),
                    num(g.probability),
                    num(g.fidelity_to_channel(beta)?),
                ])
            })
            .collect::<dispteleport::Result<Vec<_>>>()
    })?;

    let provenance = match args.mode {
        Mode::Ideal => "heralded generation, displacement model",
        Mode::Exact => "heralded generation, beam-splitter simulation",
    };
    let columns: Vec<String> =
        ["beta", "alpha", "t", "pattern", "probability", "fidelity", "provenance"].map(String::from).to_vec();
    let mut csv = Csv::new(output::sink(args.common.out.as_deref())?, provenance, &nmax_label(nmax), &columns)?;
    for mut row in rows.into_iter().flatten() {
        row.push(provenance.to_string());
        csv.row(&row)?;
    }
    csv.finish()
}

#[derive(serde::Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: String,
    nmax: String,
    report: &'a dispteleport::protocol::TrialReport,
}

fn teleport(args: &TeleportArgs) -> Result<()> {
    let params = match (args.alpha, args.beta) {
        (Some(_), Some(_)) => bail!("give either --alpha or --beta, not both"),
        (Some(a), None) => ProtocolParams::from_alpha(a, args.t)?,
        (None, Some(b)) => ProtocolParams::new(b, args.t)?,
        (None, None) => ProtocolParams::from_alpha(0.03, args.t)?,
    }
    .with_nmax(args.nmax)?;
    let config = TrialConfig { mode: args.mode, measurement: args.measurement, trials: args.trials, seed: args.seed };
    let report = run_trials(&args.qubit.qubit()?, &params, config)?;
    let envelope = Envelope {
        tool: "dispteleport",
        version: env!("CARGO_PKG_VERSION"),
        command: output::command_line(),
        nmax: nmax_label(args.nmax),
        report: &report,
    };
    let mut out = output::sink(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &envelope)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// `coeff_c` with the sign of odd terms dropped for negative α.
fn coeff_with_sign_error(l: usize, n: usize, alpha: C64) -> C64 {
    let c = coeff_c(l, n, alpha);
    if alpha.re < 0.0 && (n + l) % 2 == 1 {
        -c
    } else {
        c
    }
}

fn verify(args: &VerifyArgs) -> bool {
    let coeff = if args.inject_sign_error { coeff_with_sign_error } else { coeff_c };
    let results = verify::run(args.level, coeff, args.seed);
    print!("{}", verify::render_table(&results));
    results.iter().all(|r| r.passed)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<dispteleport::Error>() {
        Some(dispteleport::Error::InvalidArgument(_)) => 2,
        Some(_) => 3,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Fidelity(a) => fidelity(a),
        Command::Probs(a) => probs(a),
        Command::Channel(a) => channel(a),
        Command::Teleport(a) => teleport(a),
        Command::Verify(a) => return if verify(a) { ExitCode::SUCCESS } else { ExitCode::from(1) },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
