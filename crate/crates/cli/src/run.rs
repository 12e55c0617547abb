//! Sweep evaluation and CSV output.

use std::io::Write;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;
use tcorr::nmr::{run_nmr_experiment, SystemDrive};
use tcorr::oracle::{correlation_direct, gibbs_state};
use tcorr::protocol::{eigenstates, gibbs_weights, run_protocol, run_protocol_thermal};
use tcorr::qcore::{ConstHamiltonian, Dynamics, SystemState, TimeDepHamiltonian};
use tcorr::{Complex64, CorrelationSpec64};

use crate::config::{Backend, Experiment, InitialState, SweepPoint};

/// One evaluated sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Operator times `t_1 … t_{n−1}` in seconds.
    pub times: Vec<f64>,
    pub n: usize,
    pub protocol: Option<Complex64>,
    pub oracle: Option<Complex64>,
    pub nmr: Option<Complex64>,
}

impl SweepRow {
    /// Largest pairwise `|f_a − f_b|` among present backends.
    pub fn abs_err_max(&self) -> Option<f64> {
        let vals: Vec<Complex64> = [self.protocol, self.oracle, self.nmr].into_iter().flatten().collect();
        let mut worst: Option<f64> = None;
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                let d = (vals[i] - vals[j]).norm();
                worst = Some(worst.map_or(d, |w| w.max(d)));
            }
        }
        worst
    }
}

fn describe(point: &SweepPoint) -> String {
    let mut parts: Vec<String> = point.times.iter().map(|(k, v)| format!("t{k}={v:e} s")).collect();
    if let Some(n) = point.order {
        parts.push(format!("n={n}"));
    }
    parts.join(", ")
}

/// Thread pool limited to `jobs` workers (0 means rayon's default).
pub fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| anyhow!("cannot start worker pool: {e}"))
}

/// Evaluates every sweep point on each requested backend, in sweep order.
pub fn run_config(exp: &Experiment, jobs: usize) -> Result<Vec<SweepRow>> {
    let points = exp.points();
    pool(jobs)?.install(|| {
        points
            .par_iter()
            .map(|p| evaluate(exp, p).with_context(|| format!("at {}", describe(p))))
            .collect()
    })
}

pub fn evaluate(exp: &Experiment, point: &SweepPoint) -> Result<SweepRow> {
    let spec = exp.spec_at(point)?;
    let mut row = SweepRow {
        times: spec.times(),
        n: spec.order(),
        protocol: None,
        oracle: None,
        nmr: None,
    };
    for b in &exp.backends {
        let v = match b {
            Backend::Protocol => eval_protocol(exp, &spec),
            Backend::Oracle => eval_oracle(exp, &spec),
            Backend::Nmr => eval_nmr(exp, &spec),
        };
        let v = v.with_context(|| format!("backend {b:?}"))?;
        match b {
            Backend::Protocol => row.protocol = Some(v),
            Backend::Oracle => row.oracle = Some(v),
            Backend::Nmr => row.nmr = Some(v),
        }
    }
    Ok(row)
}

fn const_hamiltonian(exp: &Experiment) -> Result<ConstHamiltonian<f64>> {
    match &exp.dynamics {
        Dynamics::Const(h) => Ok(*h),
        Dynamics::TimeDep { .. } => Err(anyhow!("thermal input needs a constant Hamiltonian")),
    }
}

fn eval_protocol(exp: &Experiment, spec: &CorrelationSpec64) -> Result<Complex64> {
    Ok(match &exp.state {
        InitialState::Pure(psi) => run_protocol(spec, &exp.dynamics, &SystemState::Pure(psi.clone()))?.f,
        InitialState::Thermal { beta } => run_protocol_thermal(spec, &const_hamiltonian(exp)?, *beta)?,
    })
}

fn eval_oracle(exp: &Experiment, spec: &CorrelationSpec64) -> Result<Complex64> {
    let input = match &exp.state {
        InitialState::Pure(psi) => SystemState::Pure(psi.clone()),
        InitialState::Thermal { beta } => gibbs_state(&const_hamiltonian(exp)?, *beta)?.into(),
    };
    Ok(correlation_direct(spec, &exp.dynamics, &input)?)
}

fn eval_nmr(exp: &Experiment, spec: &CorrelationSpec64) -> Result<Complex64> {
    // The static σz part lives in the molecule; only the remainder drives.
    let drive_h = match &exp.dynamics {
        Dynamics::Const(_) => None,
        Dynamics::TimeDep { hamiltonian, steps_per_interval } => {
            let mut base = hamiltonian.base;
            base.hz = 0.0;
            Some((TimeDepHamiltonian { base, terms: hamiltonian.terms.clone() }, *steps_per_interval))
        }
    };
    let drive = drive_h
        .as_ref()
        .map(|(h, steps)| SystemDrive { hamiltonian: h, steps_per_window: *steps });
    Ok(match &exp.state {
        InitialState::Pure(psi) => run_nmr_experiment(spec, &exp.molecule, psi, drive)?,
        InitialState::Thermal { beta } => {
            let h = const_hamiltonian(exp)?;
            let (p0, p1) = gibbs_weights(&h, *beta)?;
            let [(_, ground), (_, excited)] = eigenstates(&h);
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, psi) in [(p0, ground), (p1, excited)] {
                if p > 0.0 {
                    acc += run_nmr_experiment(spec, &exp.molecule, &psi, drive)? * p;
                }
            }
            acc
        }
    })
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

/// Writes the fixed-schema CSV; the number of time columns is the largest
/// `n − 1` among the rows.
pub fn write_csv(rows: &[SweepRow], mut out: impl Write) -> Result<()> {
    let k = rows.iter().map(|r| r.times.len()).max().unwrap_or(0);
    let mut header: Vec<String> = (1..=k).map(|i| format!("t_{i}_s")).collect();
    header.extend(
        ["n", "re_protocol", "im_protocol", "re_oracle", "im_oracle", "re_nmr", "im_nmr", "abs_err_max"]
            .map(String::from),
    );
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        let mut cells: Vec<String> = (0..k).map(|i| cell(r.times.get(i).copied())).collect();
        cells.push(r.n.to_string());
        for v in [r.protocol, r.oracle, r.nmr] {
            cells.push(cell(v.map(|c| c.re)));
            cells.push(cell(v.map(|c| c.im)));
        }
        cells.push(cell(r.abs_err_max()));
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}
