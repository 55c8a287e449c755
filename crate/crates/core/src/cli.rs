//! Command-line front end. [`run`] returns the exit code and report text so
//! the binary stays a thin wrapper and tests can compare output bytes.
//!
//! Exit codes: 0 success, 1 usage error, 2 simulation-domain error (including
//! netlist content errors). Setting `LOSWAP_PERMANENT_CAP` overrides the
//! permanent size cap used by `simulate`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::dualrail::{decode, encode, logical_matrix, process_fidelity, DualRailRegister};
use crate::error::Error;
use crate::fock::{evolve_with, probabilities, FockState, PhotonicState, SimOptions};
use crate::gate::{
    build_gate, measurement_stats, mismatch_sweep, CrossingStyle, GateMode, GateSettings, StageMode, CNOTS_PER_SWAP,
    HERALDED_CNOT_SUCCESS,
};
use crate::netlist::{parse_netlist, NetlistError};
use crate::router::{network_cost, synthesize, Permutation, SwapCost};

pub const PERMANENT_CAP_ENV: &str = "LOSWAP_PERMANENT_CAP";

/// Default crossing loss for `route`, in dB.
pub const DEFAULT_ROUTE_LOSS_DB: f64 = 0.03;

#[derive(Debug, Parser)]
#[command(name = "loswap", version, about = "Linear-optical dual-rail SWAP gate toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Swap,
    Identity,
}

impl From<ModeArg> for GateMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Swap => GateMode::Swap,
            ModeArg::Identity => GateMode::Identity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CrossingArg {
    Ideal,
    Mzi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StageArg {
    Measure,
    Bypass,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve an input state through a netlist and print outcome probabilities.
    Simulate {
        netlist: PathBuf,
        /// `fock:<occupations>` or `qubits:<re,im;re,im;...>`
        #[arg(long)]
        input: String,
    },
    /// Build the two-qubit gate and print its logical matrix.
    Gate {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eta: f64,
        #[arg(long, value_enum, default_value = "ideal")]
        crossing: CrossingArg,
        #[arg(long, default_value_t = 0.0)]
        crossing_loss_db: f64,
    },
    /// Fidelity against the target over a range of mismatch phases.
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        eta_from: f64,
        #[arg(long, allow_negative_numbers = true)]
        eta_to: f64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
        #[arg(long, value_enum)]
        target: ModeArg,
    },
    /// Synthesize a nearest-neighbour SWAP network for a qubit permutation.
    Route {
        /// Comma-separated 0-based image list, e.g. 3,2,1,0
        #[arg(long)]
        perm: String,
        #[arg(long, default_value_t = DEFAULT_ROUTE_LOSS_DB)]
        loss_db: f64,
    },
    /// Selective measurement of one qubit through the gate.
    MeasureDemo {
        /// `re,im`
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// `re,im`
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, value_enum)]
        mode: StageArg,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eta: f64,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<NetlistError> for Failure {
    fn from(e: NetlistError) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// Runs the CLI on `args` (program name first).
pub fn run<I, S>(args: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CliOutput { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => {
                    let rendered = e.to_string();
                    let first = rendered.lines().next().unwrap_or("error: invalid usage");
                    CliOutput { code: 1, stdout: String::new(), stderr: format!("{first}\n") }
                }
            };
        }
    };
    let result = match cli.command {
        Command::Simulate { netlist, input } => simulate(&netlist, &input),
        Command::Gate { mode, eta, crossing, crossing_loss_db } => gate(mode.into(), eta, crossing, crossing_loss_db),
        Command::Sweep { eta_from, eta_to, steps, target } => sweep(eta_from, eta_to, steps, target.into()),
        Command::Route { perm, loss_db } => route(&perm, loss_db),
        Command::MeasureDemo { alpha, beta, mode, eta, shots, seed } => {
            measure_demo(&alpha, &beta, mode, eta, shots.map(|s| (s, seed)))
        }
    };
    match result {
        Ok(stdout) => CliOutput { code: 0, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => CliOutput { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(msg)) => CliOutput { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

/// Fixed 12-digit decimal; negative zero prints as zero.
pub fn fmt_real(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// `re±imi` with both parts in [`fmt_real`] form.
pub fn fmt_complex(z: Complex64) -> String {
    let im = fmt_real(z.im);
    match im.strip_prefix('-') {
        Some(abs) => format!("{}-{abs}i", fmt_real(z.re)),
        None => format!("{}+{im}i", fmt_real(z.re)),
    }
}

fn parse_complex(text: &str, what: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::Usage(format!("malformed {what} '{text}', expected re,im"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

enum InputSpec {
    Fock(FockState),
    Qubits(Vec<Complex64>),
}

fn parse_input_spec(spec: &str) -> Result<InputSpec, Failure> {
    if let Some(body) = spec.strip_prefix("fock:") {
        let occ = body
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Failure::Usage(format!("malformed fock occupations '{body}'")))?;
        return Ok(InputSpec::Fock(FockState::new(occ)));
    }
    if let Some(body) = spec.strip_prefix("qubits:") {
        let amps = body.split(';').map(|t| parse_complex(t.trim(), "amplitude")).collect::<Result<Vec<_>, _>>()?;
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Failure::Usage(format!("{} qubit amplitudes given, expected a power of two", amps.len())));
        }
        return Ok(InputSpec::Qubits(amps));
    }
    Err(Failure::Usage(format!("malformed input spec '{spec}', expected fock:... or qubits:...")))
}

fn sim_options() -> Result<SimOptions, Failure> {
    let mut opts = SimOptions::default();
    if let Ok(raw) = std::env::var(PERMANENT_CAP_ENV) {
        opts.permanent_cap =
            raw.trim().parse().map_err(|_| Failure::Usage(format!("{PERMANENT_CAP_ENV}='{raw}' is not a count")))?;
    }
    Ok(opts)
}

fn simulate(path: &std::path::Path, input: &str) -> Result<String, Failure> {
    let spec = parse_input_spec(input)?;
    let opts = sim_options()?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read netlist '{}': {e}", path.display())))?;
    let circuit = parse_netlist::<f64>(&text)?;
    let width = circuit.width();
    let (state, register) = match spec {
        InputSpec::Fock(fock) => {
            if fock.width() != width {
                return Err(Error::WidthMismatch { expected: width, got: fock.width() }.into());
            }
            (PhotonicState::from_fock(&fock)?, None)
        }
        InputSpec::Qubits(amps) => {
            let k = amps.len().trailing_zeros() as usize;
            if 2 * k > width {
                return Err(Failure::Domain(format!("{k} qubits need {} modes, netlist declares {width}", 2 * k)));
            }
            let register = DualRailRegister::new((0..k).map(|q| (2 * q, 2 * q + 1)).collect(), width)?;
            (encode(&amps, &register)?, Some(register))
        }
    };
    let out = evolve_with(&circuit.compile()?.transfer, &state, &opts)?;

    let mut s = String::new();
    writeln!(s, "simulate modes={width} photons={} elements={}", state.photons(), circuit.len()).unwrap();
    writeln!(s, "input={input}").unwrap();
    writeln!(s, "outcomes:").unwrap();
    let mut total = 0.0;
    for (fock, p) in probabilities(&out) {
        total += p;
        let shown = fmt_real(p);
        if shown != fmt_real(0.0) {
            writeln!(s, "{fock} {shown}").unwrap();
        }
    }
    writeln!(s, "total={}", fmt_real(total)).unwrap();
    if let Some(register) = register {
        match decode(&out, &register) {
            Ok((amps, success)) => {
                writeln!(s, "logical success={}", fmt_real(success)).unwrap();
                let k = register.qubits();
                for (j, z) in amps.iter().enumerate() {
                    writeln!(s, "|{:0k$b}> {}", j, fmt_complex(*z)).unwrap();
                }
            }
            Err(Error::OutsideLogicalSubspace) => {
                writeln!(s, "logical success={}", fmt_real(0.0)).unwrap();
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(s)
}

fn gate(mode: GateMode, eta: f64, crossing: CrossingArg, loss_db: f64) -> Result<String, Failure> {
    if !eta.is_finite() {
        return Err(Failure::Usage(format!("invalid mismatch phase {eta}")));
    }
    let style = match crossing {
        CrossingArg::Ideal => CrossingStyle::Ideal,
        CrossingArg::Mzi => CrossingStyle::MziThetaZero,
    };
    let settings = GateSettings::preset(mode).with_mismatch(eta).with_crossing_style(style).with_crossing_loss(loss_db);
    let register = DualRailRegister::consecutive(2)?;
    let circuit = build_gate(&settings, (0, 1), &register)?;
    let g = logical_matrix(&circuit, &register)?;
    let fidelity = process_fidelity(&g, &mode.target())?;

    let mut s = String::new();
    let style_name = match crossing {
        CrossingArg::Ideal => "ideal",
        CrossingArg::Mzi => "mzi",
    };
    writeln!(
        s,
        "gate mode={} crossing={style_name} eta={} crossing_loss_db={}",
        mode.name(),
        fmt_real(eta),
        fmt_real(loss_db)
    )
    .unwrap();
    writeln!(s, "basis=|00>,|01>,|10>,|11>").unwrap();
    writeln!(s, "matrix:").unwrap();
    for r in 0..g.dimension() {
        let row: Vec<String> = g.matrix.row(r).iter().map(|&z| fmt_complex(z)).collect();
        writeln!(s, "  {}", row.join(" ")).unwrap();
    }
    writeln!(s, "target={}", mode.name()).unwrap();
    writeln!(s, "fidelity={}", fmt_real(fidelity)).unwrap();
    writeln!(s, "success={}", fmt_real(g.success_probability)).unwrap();
    Ok(s)
}

fn sweep(from: f64, to: f64, steps: u32, target: GateMode) -> Result<String, Failure> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(Failure::Usage("sweep bounds must be finite".into()));
    }
    let etas: Vec<f64> = if steps == 1 {
        vec![from]
    } else {
        (0..steps).map(|i| from + (to - from) * f64::from(i) / f64::from(steps - 1)).collect()
    };
    let rows = mismatch_sweep(&GateSettings::preset(target), &etas, target)?;
    let mut s = String::new();
    writeln!(s, "sweep target={} eta_from={} eta_to={} steps={steps}", target.name(), fmt_real(from), fmt_real(to))
        .unwrap();
    writeln!(s, "eta fidelity").unwrap();
    for (eta, f) in rows {
        writeln!(s, "{} {}", fmt_real(eta), fmt_real(f)).unwrap();
    }
    Ok(s)
}

fn route(perm: &str, loss_db: f64) -> Result<String, Failure> {
    let target: Permutation = perm.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let net = synthesize(&target);
    let cost = network_cost(&net, &SwapCost::default(), loss_db)?;
    let per_swap = HERALDED_CNOT_SUCCESS.powi(CNOTS_PER_SWAP);

    let mut s = String::new();
    writeln!(s, "route permutation={target} qubits={}", net.qubits()).unwrap();
    writeln!(s, "swaps={} depth={} inversions={}", net.swap_count(), net.depth(), target.inversions()).unwrap();
    for (k, layer) in net.layers().iter().enumerate() {
        let pairs: Vec<String> = layer.iter().map(|i| format!("({},{})", i, i + 1)).collect();
        writeln!(s, "layer {}: {}", k + 1, pairs.join(" ")).unwrap();
    }
    writeln!(s, "rbs={} crossings={}", cost.rbs, cost.crossings).unwrap();
    writeln!(s, "loss_db_per_crossing={}", fmt_real(cost.loss_db_per_crossing)).unwrap();
    writeln!(s, "total_crossing_loss_db={}", fmt_real(cost.total_crossing_loss_db)).unwrap();
    writeln!(s, "all_crossings_survival={}", fmt_real(cost.all_crossings_survival)).unwrap();
    writeln!(s, "worst_path_crossings={}", cost.worst_path_crossings).unwrap();
    writeln!(s, "worst_path_loss_db={}", fmt_real(cost.worst_path_loss_db)).unwrap();
    writeln!(s, "worst_path_survival={}", fmt_real(cost.worst_path_survival)).unwrap();
    writeln!(s, "network_success={}", fmt_real(cost.network_success)).unwrap();
    writeln!(s, "cnot_baseline_success_per_swap={}", fmt_real(per_swap)).unwrap();
    writeln!(s, "cnot_baseline_log10_success={}", fmt_real(per_swap.log10() * net.swap_count() as f64)).unwrap();
    Ok(s)
}

fn measure_demo(
    alpha: &str,
    beta: &str,
    mode: StageArg,
    eta: f64,
    shots: Option<(u64, u64)>,
) -> Result<String, Failure> {
    let a = parse_complex(alpha, "alpha")?;
    let b = parse_complex(beta, "beta")?;
    if !eta.is_finite() {
        return Err(Failure::Usage(format!("invalid mismatch phase {eta}")));
    }
    if matches!(shots, Some((0, _))) {
        return Err(Failure::Usage("--shots must be at least 1".into()));
    }
    let mode = match mode {
        StageArg::Measure => StageMode::Measure,
        StageArg::Bypass => StageMode::Bypass,
    };
    let report = measurement_stats((a, b), mode, eta, shots)?;

    let mut s = String::new();
    writeln!(s, "measure-demo mode={} eta={}", mode.name(), fmt_real(eta)).unwrap();
    writeln!(s, "alpha={} beta={}", fmt_complex(a), fmt_complex(b)).unwrap();
    let (p0, p1) = report.outcome_probabilities;
    writeln!(s, "p0={} p1={}", fmt_real(p0), fmt_real(p1)).unwrap();
    if let Some((d0, d1)) = report.detected_amplitudes {
        writeln!(s, "detected amplitudes: {} {}", fmt_complex(d0), fmt_complex(d1)).unwrap();
    }
    if let Some((o0, o1)) = report.bypass_output_amplitudes {
        writeln!(s, "output amplitudes: {} {}", fmt_complex(o0), fmt_complex(o1)).unwrap();
    }
    if let Some(c) = report.counts {
        writeln!(s, "counts shots={} seed={} n0={} n1={}", c.shots, c.seed, c.zero, c.one).unwrap();
    }
    Ok(s)
}
