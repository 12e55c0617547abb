use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tcorr::nmr::{compile_controlled, MoleculeParams, CHLOROFORM_J_HZ};
use tcorr::qcore::PauliAxis;
use tcorr::response::{ResponseParams, DEFAULT_ETA};
use tcorr_cli::{chi, config, presets, run, verify};

#[derive(Parser)]
#[command(name = "tcorr", version, about = "Simulate ancilla-assisted n-time correlation measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a JSON experiment config and write the sweep CSV.
    Correlate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Produce the datasets of a figure preset.
    Figure {
        /// Built-in preset name (fig4a..fig4d, fig5, fig6, fig7) or a file path.
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run randomized cross-check suites.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-trial errors as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Susceptibility spectrum χ_{α,β}(ω) of a spin in a static field.
    Susceptibility {
        #[arg(long, value_enum)]
        alpha: AxisArg,
        #[arg(long, value_enum)]
        beta: AxisArg,
        #[arg(long, allow_negative_numbers = true)]
        omega_start: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega_stop: f64,
        #[arg(long)]
        omega_step: f64,
        #[arg(long, default_value_t = DEFAULT_ETA)]
        eta: f64,
        /// Inverse temperature in s (ħ = 1); "inf" for the ground state.
        #[arg(long)]
        beta_inv_temp: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 100.0 * std::f64::consts::PI, allow_negative_numbers = true)]
        field: f64,
        #[arg(long, default_value_t = 1.0)]
        bp0: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Print the pulse sequence of a controlled gate.
    Compile {
        #[arg(long, value_enum)]
        gate: Gate,
        #[arg(long)]
        xy_only: bool,
        #[arg(long, default_value_t = CHLOROFORM_J_HZ)]
        j_hz: f64,
        /// System detuning ν₂ − ν₂° in Hz.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        offset_hz: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    ProtocolVsOracle,
    NmrVsProtocol,
    Decompositions,
    ResponseConsistency,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    X,
    Y,
    Z,
}

impl From<AxisArg> for PauliAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::X => PauliAxis::X,
            AxisArg::Y => PauliAxis::Y,
            AxisArg::Z => PauliAxis::Z,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Gate {
    Cx,
    Cy,
    Cz,
}

enum Outcome {
    Ok,
    VerificationFailed,
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Correlate { config, out, jobs } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let exp = config::parse_config(&text)?;
            let rows = run::run_config(&exp, jobs)?;
            let mut w = create(&out)?;
            run::write_csv(&rows, &mut w)?;
            w.flush()?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Figure { preset, out, jobs } => {
            let preset = presets::load_preset(&preset)?;
            for path in presets::run_preset(&preset, &out, jobs)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Verify { suite, trials, seed, out, jobs } => {
            if trials == 0 {
                anyhow::bail!("--trials: must be >= 1");
            }
            let suites: Vec<verify::Suite> = match suite {
                SuiteArg::ProtocolVsOracle => vec![verify::Suite::ProtocolVsOracle],
                SuiteArg::NmrVsProtocol => vec![verify::Suite::NmrVsProtocol],
                SuiteArg::Decompositions => vec![verify::Suite::Decompositions],
                SuiteArg::ResponseConsistency => vec![verify::Suite::ResponseConsistency],
                SuiteArg::All => verify::Suite::ALL.to_vec(),
            };
            let reports: Vec<_> = run::pool(jobs)?
                .install(|| suites.iter().map(|s| verify::run_suite(*s, trials, seed)).collect());
            for r in &reports {
                println!("{}", r.summary());
            }
            if let Some(path) = out {
                let mut w = create(&path)?;
                verify::write_reports(&reports, &mut w)?;
                w.flush()?;
            }
            if !reports.iter().all(|r| r.passed()) {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Susceptibility {
            alpha,
            beta,
            omega_start,
            omega_stop,
            omega_step,
            eta,
            beta_inv_temp,
            gamma,
            field,
            bp0,
            out,
            jobs,
        } => {
            let omega = chi::omega_grid(omega_start, omega_stop, omega_step)?;
            let params = ResponseParams { gamma, b_field: field, bp0, beta: beta_inv_temp, eta, omega };
            let spectrum = run::pool(jobs)?.install(|| chi::spectrum(alpha.into(), beta.into(), &params))?;
            let mut w = create(&out)?;
            chi::write_spectrum(&params.omega, &spectrum, &mut w)?;
            w.flush()?;
        }
        Command::Compile { gate, xy_only, j_hz, offset_hz } => {
            let axis = match gate {
                Gate::Cx => PauliAxis::X,
                Gate::Cy => PauliAxis::Y,
                Gate::Cz => PauliAxis::Z,
            };
            let mut molecule = MoleculeParams::chloroform(offset_hz);
            molecule.j12 = j_hz;
            let seq = compile_controlled(axis, &molecule, xy_only)?;
            print!("{seq}");
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
