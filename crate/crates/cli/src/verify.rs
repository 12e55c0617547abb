//! Randomized cross-check suites.
//!
//! Trial `k` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `k`, so
//! results do not depend on thread scheduling.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use anyhow::{anyhow, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tcorr::nmr::{compile_controlled, MoleculeParams};
use tcorr::oracle::correlation_direct;
use tcorr::protocol::{controlled_s, run_protocol};
use tcorr::qcore::{max_diff_up_to_phase, ConstHamiltonian, Dynamics, PauliAxis, StateVector, SystemState};
use tcorr::response::{response_function, response_function_via_protocol, ResponseParams, DEFAULT_ETA};
use tcorr::{Complex64, CorrelationSpec64, StateVector64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ProtocolVsOracle,
    NmrVsProtocol,
    Decompositions,
    ResponseConsistency,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::ProtocolVsOracle,
        Suite::NmrVsProtocol,
        Suite::Decompositions,
        Suite::ResponseConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ProtocolVsOracle => "protocol-vs-oracle",
            Suite::NmrVsProtocol => "nmr-vs-protocol",
            Suite::Decompositions => "decompositions",
            Suite::ResponseConsistency => "response-consistency",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Suite::ProtocolVsOracle => 1e-10,
            Suite::NmrVsProtocol => 1e-8,
            Suite::Decompositions => 1e-12,
            Suite::ResponseConsistency => 1e-9,
        }
    }

    fn trial(self, rng: &mut ChaCha8Rng) -> Result<f64> {
        match self {
            Suite::ProtocolVsOracle => protocol_vs_oracle(rng),
            Suite::NmrVsProtocol => nmr_vs_protocol(rng),
            Suite::Decompositions => decompositions(rng),
            Suite::ResponseConsistency => response_consistency(rng),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| anyhow!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    /// Error of every trial, in trial order.
    pub errors: Vec<f64>,
}

impl SuiteReport {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.errors.iter().all(|e| *e < self.suite.tolerance())
    }

    pub fn summary(&self) -> String {
        format!(
            "suite={} trials={} max_err={:.3e} tol={:.0e} {}",
            self.suite,
            self.errors.len(),
            self.max_error(),
            self.suite.tolerance(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` trials of `suite`; a trial that errors counts as an
/// infinite error.
pub fn run_suite(suite: Suite, trials: u64, seed: u64) -> SuiteReport {
    let errors = (0..trials)
        .into_par_iter()
        .map(|k| suite.trial(&mut trial_rng(seed, k)).unwrap_or(f64::INFINITY))
        .collect();
    SuiteReport { suite, errors }
}

pub fn write_reports(reports: &[SuiteReport], mut out: impl Write) -> Result<()> {
    writeln!(out, "suite,trial,error,tolerance,pass")?;
    for r in reports {
        for (k, e) in r.errors.iter().enumerate() {
            let tol = r.suite.tolerance();
            writeln!(out, "{},{k},{e:.16e},{tol:.16e},{}", r.suite, e < &tol)?;
        }
    }
    Ok(())
}

fn axis(rng: &mut ChaCha8Rng) -> PauliAxis {
    PauliAxis::ALL[rng.gen_range(0..3)]
}

pub fn random_state(rng: &mut ChaCha8Rng) -> StateVector64 {
    loop {
        let v: Vec<Complex64> = (0..2)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if v.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3 {
            return StateVector::normalized(v).expect("non-zero amplitudes");
        }
    }
}

/// Coefficients uniform in `[−500π, 500π]` rad/s.
pub fn random_hamiltonian(rng: &mut ChaCha8Rng) -> ConstHamiltonian<f64> {
    let b = 500.0 * PI;
    let mut c = || rng.gen_range(-b..b);
    ConstHamiltonian::new(c(), c(), c(), c()).expect("finite coefficients")
}

/// Order in `[1, 10]`, non-decreasing times in `[0, 10]` ms.
pub fn random_spec(rng: &mut ChaCha8Rng, monotonic: bool) -> CorrelationSpec64 {
    let n = rng.gen_range(1..=10);
    let mut times: Vec<f64> = (1..n).map(|_| rng.gen_range(0.0..10e-3)).collect();
    if monotonic {
        times.sort_by(f64::total_cmp);
    }
    times.insert(0, 0.0);
    let ops = times.into_iter().map(|t| (axis(rng), t)).collect();
    CorrelationSpec64::new(ops).expect("valid random spec")
}

fn protocol_vs_oracle(rng: &mut ChaCha8Rng) -> Result<f64> {
    let h = random_hamiltonian(rng);
    let spec = random_spec(rng, true);
    let psi = SystemState::Pure(random_state(rng));
    let dynamics = Dynamics::Const(h);
    let f = run_protocol(&spec, &dynamics, &psi)?.f;
    let g = correlation_direct(&spec, &dynamics, &psi)?;
    Ok((f - g).norm())
}

fn nmr_vs_protocol(rng: &mut ChaCha8Rng) -> Result<f64> {
    let hz = rng.gen_range(-500.0 * PI..500.0 * PI);
    let spec = random_spec(rng, false);
    let psi = random_state(rng);
    let mut molecule = MoleculeParams::for_system_field(hz);
    molecule.j12 = rng.gen_range(50.0..400.0);
    let dynamics = Dynamics::Const(ConstHamiltonian::along(PauliAxis::Z, hz));
    let f = run_protocol(&spec, &dynamics, &SystemState::Pure(psi.clone()))?.f;
    let g = tcorr::nmr::run_nmr_experiment(&spec, &molecule, &psi, None)?;
    Ok((f - g).norm())
}

fn decompositions(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut p = MoleculeParams::chloroform(rng.gen_range(-500.0..500.0));
    p.nu1 = rng.gen_range(-500.0..500.0);
    p.j12 = rng.gen_range(20.0..400.0);
    let mut worst = 0.0f64;
    for axis in PauliAxis::ALL {
        let plain = compile_controlled(axis, &p, false)?;
        let xy = compile_controlled(axis, &p, true)?;
        if xy.has_z_rotations() {
            return Ok(f64::INFINITY);
        }
        let u = plain.propagator(&p)?;
        let v = xy.propagator(&p)?;
        let target = controlled_s::<f64>(axis);
        let err = if axis == PauliAxis::Z {
            u.max_abs_diff(&target)?
        } else {
            max_diff_up_to_phase(&target, &u)?
        };
        worst = worst.max(err).max(u.max_abs_diff(&v)?);
    }
    Ok(worst)
}

fn response_consistency(rng: &mut ChaCha8Rng) -> Result<f64> {
    let beta = match rng.gen_range(0..4) {
        0 => f64::INFINITY,
        1 => 0.0,
        _ => rng.gen_range(0.0..5e-3),
    };
    let params = ResponseParams {
        gamma: rng.gen_range(0.5..2.0),
        b_field: rng.gen_range(-200.0 * PI..200.0 * PI),
        bp0: rng.gen_range(0.1..2.0),
        beta,
        eta: DEFAULT_ETA,
        omega: vec![],
    };
    let (a, b) = (axis(rng), axis(rng));
    let t = rng.gen_range(0.0..10e-3);
    let direct = response_function(a, b, t, &params)?;
    let via = response_function_via_protocol(a, b, t, &params)?;
    Ok((direct - via).abs())
}
