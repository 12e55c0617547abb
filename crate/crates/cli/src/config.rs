//! JSON experiment configuration.
//!
//! Times may be given in milliseconds with a top-level `"unit": "ms"`; the
//! conversion applies to operator times, sweep values of time variables,
//! the `mn` spacing and sampled-envelope grid times. Coefficients and decay
//! rates are always per second (optionally in units of π with
//! `"coeff_unit": "pi rad/s"`).

use std::collections::BTreeSet;
use std::f64::consts::PI;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use tcorr::nmr::{MoleculeParams, CHLOROFORM_J_HZ};
use tcorr::qcore::{
    ConstHamiltonian, Dynamics, Envelope, PauliAxis, StateVector, TimeDepHamiltonian,
    DEFAULT_STEPS,
};
use tcorr::{Complex64, CorrelationSpec64, Dynamics64, MoleculeParams64, StateVector64};

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    #[default]
    S,
    Ms,
}

impl TimeUnit {
    fn seconds(self, v: f64) -> f64 {
        match self {
            TimeUnit::S => v,
            TimeUnit::Ms => v * 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
pub enum CoeffUnit {
    #[default]
    #[serde(rename = "rad/s")]
    RadPerSecond,
    #[serde(rename = "pi rad/s")]
    PiRadPerSecond,
}

impl CoeffUnit {
    fn scale(self) -> f64 {
        match self {
            CoeffUnit::RadPerSecond => 1.0,
            CoeffUnit::PiRadPerSecond => PI,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianKind {
    #[default]
    Const,
    Timedep,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHamiltonian {
    #[serde(default)]
    pub kind: HamiltonianKind,
    #[serde(default)]
    pub coeff_unit: CoeffUnit,
    #[serde(default)]
    pub h0: f64,
    #[serde(default)]
    pub hx: f64,
    #[serde(default)]
    pub hy: f64,
    #[serde(default)]
    pub hz: f64,
    #[serde(default)]
    pub terms: Vec<RawTerm>,
    pub steps_per_interval: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub axis: AxisName,
    pub envelope: RawEnvelope,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawEnvelope {
    ExpDecay { amplitude: f64, rate: f64 },
    /// `[time, value]` pairs.
    Sampled { points: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X,
    Y,
    Z,
}

impl From<AxisName> for PauliAxis {
    fn from(a: AxisName) -> Self {
        match a {
            AxisName::X => PauliAxis::X,
            AxisName::Y => PauliAxis::Y,
            AxisName::Z => PauliAxis::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    #[default]
    Rad,
    Pi,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RawState {
    /// `[[re, im], [re, im]]`.
    Ket { amplitudes: [[f64; 2]; 2] },
    /// `R_axis(angle)|0⟩`.
    Rotation {
        axis: AxisName,
        angle: f64,
        #[serde(default)]
        angle_unit: AngleUnit,
    },
    Thermal { beta: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TimeRef {
    Value(f64),
    Var(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOp {
    pub axis: AxisName,
    pub time: TimeRef,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Xx,
    Xy,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RawOperators {
    /// Innermost first; the first operator acts at time 0.
    Explicit { ops: Vec<RawOp> },
    /// `Mⁿ` family with spacing `dt`; `n` fixed here or swept.
    Mn { family: Family, dt: f64, n: Option<usize> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RawBackends {
    Named(String),
    List(Vec<String>),
}

impl Default for RawBackends {
    fn default() -> Self {
        RawBackends::Named("all".into())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMolecule {
    #[serde(default = "default_j")]
    pub j12: f64,
    #[serde(default)]
    pub nu1: f64,
    #[serde(default)]
    pub nu1_ref: f64,
    #[serde(default)]
    pub nu2_ref: f64,
    pub t1: Option<[f64; 2]>,
    pub t2: Option<[f64; 2]>,
}

fn default_j() -> f64 {
    CHLOROFORM_J_HZ
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub unit: TimeUnit,
    pub hamiltonian: RawHamiltonian,
    pub initial_state: RawState,
    pub operators: RawOperators,
    pub sweep: Vec<RawSweep>,
    #[serde(default)]
    pub backends: RawBackends,
    pub molecule: Option<RawMolecule>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Backend {
    Protocol,
    Oracle,
    Nmr,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Protocol, Backend::Oracle, Backend::Nmr];

    fn parse(s: &str) -> Result<Self> {
        match s {
            "protocol" => Ok(Backend::Protocol),
            "oracle" => Ok(Backend::Oracle),
            "nmr" => Ok(Backend::Nmr),
            other => bail!("backends: unknown backend '{other}' (protocol|oracle|nmr|all)"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum InitialState {
    Pure(StateVector64),
    Thermal { beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// Time of operator slot `k ≥ 1`.
    Time(usize),
    Order,
}

impl SweepVar {
    fn parse(name: &str) -> Option<Self> {
        if name == "n" {
            return Some(SweepVar::Order);
        }
        let k: usize = name.strip_prefix('t')?.parse().ok()?;
        (k >= 1).then_some(SweepVar::Time(k))
    }
}

#[derive(Debug, Clone)]
pub struct SweepAxis {
    pub var: SweepVar,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum OperatorTemplate {
    /// Operator axes and times; times refer to a literal or a sweep slot.
    Explicit(Vec<(PauliAxis, TimeSlot)>),
    Mn { family: Family, dt: f64, n: Option<usize> },
}

#[derive(Debug, Clone, Copy)]
pub enum TimeSlot {
    Fixed(f64),
    Swept(usize),
}

/// Validated experiment ready for evaluation.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub dynamics: Dynamics64,
    pub state: InitialState,
    pub operators: OperatorTemplate,
    pub sweep: Vec<SweepAxis>,
    pub backends: BTreeSet<Backend>,
    pub molecule: MoleculeParams64,
}

/// Assignment of every sweep variable at one point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepPoint {
    pub times: Vec<(usize, f64)>,
    pub order: Option<usize>,
}

pub fn parse_config(text: &str) -> Result<Experiment> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        match path.as_str() {
            "" | "." | "?" => anyhow!("config: {}", e.into_inner()),
            _ => anyhow!("config field '{path}': {}", e.into_inner()),
        }
    })?;
    Experiment::from_raw(raw)
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        bail!("{name}: must be finite")
    }
}

fn axis_values(sweep: &RawSweep, unit: TimeUnit, var: SweepVar) -> Result<Vec<f64>> {
    let name = format!("sweep[{}]", sweep.variable);
    let (start, stop, step) = (
        finite(&format!("{name}.start"), sweep.start)?,
        finite(&format!("{name}.stop"), sweep.stop)?,
        finite(&format!("{name}.step"), sweep.step)?,
    );
    if !(step > 0.0) {
        bail!("{name}.step: must be > 0");
    }
    if stop < start {
        bail!("{name}: stop must be >= start");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        bail!("{name}: {count} points exceeds the limit of 1000000");
    }
    let values: Vec<f64> = (0..count).map(|k| start + k as f64 * step).collect();
    Ok(match var {
        SweepVar::Time(_) => values.into_iter().map(|v| unit.seconds(v)).collect(),
        SweepVar::Order => {
            if values.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
                bail!("{name}: order values must be positive integers");
            }
            values
        }
    })
}

impl Experiment {
    fn from_raw(raw: RawConfig) -> Result<Self> {
        let unit = raw.unit;
        let dynamics = build_dynamics(&raw.hamiltonian, unit)?;
        let state = build_state(&raw.initial_state, &dynamics)?;

        if raw.sweep.is_empty() {
            bail!("sweep: at least one sweep variable is required");
        }
        let mut sweep = Vec::new();
        for s in &raw.sweep {
            let var = SweepVar::parse(&s.variable).ok_or_else(|| {
                anyhow!("sweep.variable: '{}' is not 't<k>' (k >= 1) or 'n'", s.variable)
            })?;
            if sweep.iter().any(|a: &SweepAxis| a.var == var) {
                bail!("sweep.variable: '{}' listed twice", s.variable);
            }
            sweep.push(SweepAxis { var, values: axis_values(s, unit, var)? });
        }

        let operators = build_operators(&raw.operators, unit, &sweep)?;
        let backends = build_backends(&raw.backends)?;
        let molecule = build_molecule(raw.molecule.as_ref(), &dynamics)?;
        if backends.contains(&Backend::Nmr) {
            check_nmr_compatible(&dynamics)?;
        }
        if let (InitialState::Thermal { .. }, Dynamics::TimeDep { .. }) = (&state, &dynamics) {
            bail!("initial_state: thermal states need a constant Hamiltonian");
        }
        Ok(Self { dynamics, state, operators, sweep, backends, molecule })
    }

    /// All sweep points, first variable outermost.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut points = vec![SweepPoint::default()];
        for axis in &self.sweep {
            let mut next = Vec::with_capacity(points.len() * axis.values.len());
            for p in &points {
                for v in &axis.values {
                    let mut q = p.clone();
                    match axis.var {
                        SweepVar::Time(k) => q.times.push((k, *v)),
                        SweepVar::Order => q.order = Some(*v as usize),
                    }
                    next.push(q);
                }
            }
            points = next;
        }
        points
    }

    /// Number of rows `run_config` produces.
    pub fn point_count(&self) -> usize {
        self.sweep.iter().map(|a| a.values.len()).product()
    }

    pub fn spec_at(&self, point: &SweepPoint) -> Result<CorrelationSpec64> {
        match &self.operators {
            OperatorTemplate::Explicit(ops) => {
                let ops = ops
                    .iter()
                    .map(|(axis, slot)| {
                        let t = match slot {
                            TimeSlot::Fixed(t) => *t,
                            TimeSlot::Swept(k) => point
                                .times
                                .iter()
                                .find(|(j, _)| j == k)
                                .map(|(_, v)| *v)
                                .ok_or_else(|| anyhow!("no value for t{k}"))?,
                        };
                        Ok((*axis, t))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CorrelationSpec64::new(ops)?)
            }
            OperatorTemplate::Mn { family, dt, n } => {
                let n = point.order.or(*n).ok_or_else(|| anyhow!("operators.n: order not set"))?;
                build_mn_spec(*family, n, *dt)
            }
        }
    }
}

/// `Mⁿ_xx` (all X) or `Mⁿ_xy` (X in slot 0 and even slots, Y in odd slots)
/// with times `k·dt`.
pub fn build_mn_spec(family: Family, n: usize, dt: f64) -> Result<CorrelationSpec64> {
    if n < 2 {
        bail!("operators.n: order must be >= 2, got {n}");
    }
    if !(dt > 0.0) || !dt.is_finite() {
        bail!("operators.dt: must be positive");
    }
    let ops = (0..n)
        .map(|k| {
            let axis = match family {
                Family::Xy if k % 2 == 1 => PauliAxis::Y,
                _ => PauliAxis::X,
            };
            (axis, k as f64 * dt)
        })
        .collect();
    Ok(CorrelationSpec64::new(ops)?)
}

fn build_dynamics(h: &RawHamiltonian, unit: TimeUnit) -> Result<Dynamics64> {
    let s = h.coeff_unit.scale();
    let base = ConstHamiltonian::new(h.h0 * s, h.hx * s, h.hy * s, h.hz * s)
        .map_err(|e| anyhow!("hamiltonian: {e}"))?;
    match h.kind {
        HamiltonianKind::Const => {
            if !h.terms.is_empty() {
                bail!("hamiltonian.terms: only allowed with kind 'timedep'");
            }
            if h.steps_per_interval.is_some() {
                bail!("hamiltonian.steps_per_interval: only allowed with kind 'timedep'");
            }
            Ok(Dynamics::Const(base))
        }
        HamiltonianKind::Timedep => {
            let terms = h
                .terms
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let env = match &t.envelope {
                        RawEnvelope::ExpDecay { amplitude, rate } => Envelope::ExpDecay {
                            amplitude: amplitude * s,
                            rate: *rate,
                        },
                        RawEnvelope::Sampled { points } => Envelope::Sampled {
                            grid: points.iter().map(|[t, v]| (unit.seconds(*t), v * s)).collect(),
                        },
                    };
                    env.validate()
                        .map_err(|e| anyhow!("hamiltonian.terms[{i}].envelope: {e}"))?;
                    Ok((PauliAxis::from(t.axis), env))
                })
                .collect::<Result<Vec<_>>>()?;
            let steps = h.steps_per_interval.unwrap_or(DEFAULT_STEPS);
            if steps == 0 {
                bail!("hamiltonian.steps_per_interval: must be >= 1");
            }
            let hamiltonian = TimeDepHamiltonian::new(base, terms).map_err(|e| anyhow!("hamiltonian: {e}"))?;
            Ok(Dynamics::TimeDep { hamiltonian, steps_per_interval: steps })
        }
    }
}

fn build_state(s: &RawState, dynamics: &Dynamics64) -> Result<InitialState> {
    Ok(match s {
        RawState::Ket { amplitudes } => {
            let amps = amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            InitialState::Pure(StateVector::new(amps).map_err(|e| anyhow!("initial_state.amplitudes: {e}"))?)
        }
        RawState::Rotation { axis, angle, angle_unit } => {
            let angle = finite("initial_state.angle", *angle)?;
            let angle = match angle_unit {
                AngleUnit::Rad => angle,
                AngleUnit::Pi => angle * PI,
            };
            InitialState::Pure(StateVector::rotated_zero((*axis).into(), angle))
        }
        RawState::Thermal { beta } => {
            if beta.is_nan() || *beta < 0.0 {
                bail!("initial_state.beta: must be >= 0");
            }
            if matches!(dynamics, Dynamics::TimeDep { .. }) {
                bail!("initial_state: thermal states need a constant Hamiltonian");
            }
            InitialState::Thermal { beta: *beta }
        }
    })
}

fn build_operators(raw: &RawOperators, unit: TimeUnit, sweep: &[SweepAxis]) -> Result<OperatorTemplate> {
    let swept_times: BTreeSet<usize> = sweep
        .iter()
        .filter_map(|a| match a.var {
            SweepVar::Time(k) => Some(k),
            SweepVar::Order => None,
        })
        .collect();
    let order_swept = sweep.iter().any(|a| a.var == SweepVar::Order);
    match raw {
        RawOperators::Explicit { ops } => {
            if order_swept {
                bail!("sweep: variable 'n' needs operators of kind 'mn'");
            }
            if ops.is_empty() {
                bail!("operators.ops: at least one operator required");
            }
            let mut used = BTreeSet::new();
            let ops = ops
                .iter()
                .enumerate()
                .map(|(i, op)| {
                    let slot = match &op.time {
                        TimeRef::Value(v) => TimeSlot::Fixed(unit.seconds(finite(&format!("operators.ops[{i}].time"), *v)?)),
                        TimeRef::Var(name) => match SweepVar::parse(name) {
                            Some(SweepVar::Time(k)) if swept_times.contains(&k) => {
                                used.insert(k);
                                TimeSlot::Swept(k)
                            }
                            _ => bail!("operators.ops[{i}].time: '{name}' is not a swept time variable"),
                        },
                    };
                    Ok((PauliAxis::from(op.axis), slot))
                })
                .collect::<Result<Vec<_>>>()?;
            if !matches!(ops[0].1, TimeSlot::Fixed(t) if t == 0.0) {
                bail!("operators.ops[0].time: the first operator must act at time 0");
            }
            if let Some(k) = swept_times.difference(&used).next() {
                bail!("sweep: variable 't{k}' is not referenced by any operator");
            }
            Ok(OperatorTemplate::Explicit(ops))
        }
        RawOperators::Mn { family, dt, n } => {
            if !swept_times.is_empty() {
                bail!("sweep: time variables are not allowed with operators of kind 'mn'");
            }
            if order_swept == n.is_some() {
                bail!("operators.n: give a fixed 'n' or sweep 'n', not both or neither");
            }
            let dt = unit.seconds(finite("operators.dt", *dt)?);
            if !(dt > 0.0) {
                bail!("operators.dt: must be positive");
            }
            if let Some(n) = n {
                if *n < 2 {
                    bail!("operators.n: order must be >= 2");
                }
            }
            if let Some(axis) = sweep.iter().find(|a| a.var == SweepVar::Order) {
                if axis.values.iter().any(|v| *v < 2.0) {
                    bail!("sweep[n]: order must be >= 2");
                }
            }
            Ok(OperatorTemplate::Mn { family: *family, dt, n: *n })
        }
    }
}

fn build_backends(raw: &RawBackends) -> Result<BTreeSet<Backend>> {
    let names: Vec<&str> = match raw {
        RawBackends::Named(s) if s == "all" => return Ok(Backend::ALL.into_iter().collect()),
        RawBackends::Named(s) => vec![s.as_str()],
        RawBackends::List(v) => v.iter().map(String::as_str).collect(),
    };
    if names.is_empty() {
        bail!("backends: at least one backend required");
    }
    names.into_iter().map(Backend::parse).collect()
}

fn system_zeeman(dynamics: &Dynamics64) -> f64 {
    match dynamics {
        Dynamics::Const(h) => h.hz,
        Dynamics::TimeDep { hamiltonian, .. } => hamiltonian.base.hz,
    }
}

fn build_molecule(raw: Option<&RawMolecule>, dynamics: &Dynamics64) -> Result<MoleculeParams64> {
    let mut m = MoleculeParams::for_system_field(system_zeeman(dynamics));
    if let Some(r) = raw {
        m.j12 = r.j12;
        m.nu1 = r.nu1;
        m.nu1_ref = r.nu1_ref;
        m.nu2_ref = r.nu2_ref;
        m.nu2 = r.nu2_ref + m.nu2;
        m.t1_relax = r.t1;
        m.t2_relax = r.t2;
    }
    m.validate().map_err(|e| anyhow!("molecule: {e}"))?;
    if !(m.j12 > 0.0) {
        bail!("molecule.j12: must be positive");
    }
    Ok(m)
}

fn check_nmr_compatible(dynamics: &Dynamics64) -> Result<()> {
    let base = match dynamics {
        Dynamics::Const(h) => h,
        Dynamics::TimeDep { hamiltonian, .. } => &hamiltonian.base,
    };
    if base.hx != 0.0 || base.hy != 0.0 {
        return Err(anyhow!("backends: 'nmr' needs a sigma_z-type static Hamiltonian (hx = hy = 0)"))
            .context("hamiltonian");
    }
    Ok(())
}
