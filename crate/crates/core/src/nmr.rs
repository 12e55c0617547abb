//! Two-spin NMR realization of the correlation circuit.
//!
//! Nucleus 1 (¹³C) carries the ancilla, nucleus 2 (¹H) the system; the
//! ancilla is the first tensor factor. The internal Hamiltonian in the weak
//! coupling limit is
//! `H = −π(ν₁−ν₁°) σz¹ − π(ν₂−ν₂°) σz² + (πJ₁₂/2) σz¹σz²` (rad/s).
//!
//! Controlled gates compile to hard pulses, virtual z rotations and a free
//! J evolution of length `1/(2J)`:
//!
//! ```text
//! C-Rz²(−π)  = U(1/2J) Rz²(−π/2)
//! C-iRx²(π)  = √i Rz¹(π/2) Rz²(−π/2) Rx²(π/2) U(1/2J) Ry²(π/2)
//! C-Ry²(π)   = Rx²(π/2) U(1/2J) Rx²(−π/2) Ry²(π/2)
//! ```
//!
//! These are propagator products (rightmost first); sequences store events
//! in time order. `Rz(θ) = Ry(π/2) Rx(−θ) Ry(−π/2)` removes z rotations
//! when only x/y pulses are allowed.
//!
//! Pulses are instantaneous. Decoupled delays idealize Waltz-4: the J term
//! and the ancilla Zeeman term are removed exactly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::protocol::{phase_correction, CorrelationSpec};
use crate::qcore::{
    expect, on_ancilla, on_system, pauli, propagator_const, propagator_timedep,
    propagator_two_spin, rotation, ConstHamiltonian, DensityMatrix, Operator, PauliAxis,
    StateVector, SystemState, TimeDepHamiltonian, TwoSpinHamiltonian,
};
use crate::scalar::{c, Real, C};

/// ¹³C–¹H coupling of chloroform, Hz.
pub const CHLOROFORM_J_HZ: f64 = 214.5;

#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeParams<R: Real> {
    /// Chemical shifts, Hz.
    pub nu1: R,
    pub nu2: R,
    /// Reference (rotating-frame) frequencies, Hz.
    pub nu1_ref: R,
    pub nu2_ref: R,
    /// Scalar coupling, Hz.
    pub j12: R,
    /// Informational relaxation times `[T1, T2]` per nucleus, seconds.
    pub t1_relax: Option<[R; 2]>,
    pub t2_relax: Option<[R; 2]>,
}

impl<R: Real> MoleculeParams<R> {
    /// ¹³C on resonance, ¹H detuned by `delta_nu` Hz.
    pub fn chloroform(delta_nu: R) -> Self {
        Self {
            nu1: R::zero(),
            nu2: delta_nu,
            nu1_ref: R::zero(),
            nu2_ref: R::zero(),
            j12: R::lit(CHLOROFORM_J_HZ),
            t1_relax: None,
            t2_relax: None,
        }
    }

    /// Molecule whose decoupled system spin evolves under `hz σz` (rad/s).
    pub fn for_system_field(hz: R) -> Self {
        Self::chloroform(-hz / R::PI())
    }

    pub fn validate(&self) -> Result<()> {
        if [self.nu1, self.nu2, self.nu1_ref, self.nu2_ref, self.j12]
            .iter()
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidParameter("molecule parameters must be finite".into()));
        }
        Ok(())
    }

    /// True when both nuclei sit on their reference frequency.
    pub fn on_resonance(&self) -> bool {
        self.nu1 == self.nu1_ref && self.nu2 == self.nu2_ref
    }
}

/// Weak-coupling internal Hamiltonian in rad/s.
pub fn internal_hamiltonian<R: Real>(p: &MoleculeParams<R>) -> TwoSpinHamiltonian<R> {
    let pi = R::PI();
    TwoSpinHamiltonian {
        ancilla_z: -pi * (p.nu1 - p.nu1_ref),
        system_z: -pi * (p.nu2 - p.nu2_ref),
        jzz: pi * p.j12 / R::lit(2.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nucleus {
    /// ¹³C, the ancilla.
    Ancilla,
    /// ¹H, the system.
    System,
}

impl Nucleus {
    pub fn index(self) -> u8 {
        match self {
            Nucleus::Ancilla => 1,
            Nucleus::System => 2,
        }
    }

    fn from_index(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Nucleus::Ancilla),
            "2" => Ok(Nucleus::System),
            other => Err(Error::MalformedEvent(format!("unknown nucleus '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseAxis {
    X,
    Y,
}

impl PulseAxis {
    fn pauli(self) -> PauliAxis {
        match self {
            PulseAxis::X => PauliAxis::X,
            PulseAxis::Y => PauliAxis::Y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseEvent<R: Real> {
    /// Instantaneous rotation `R_axis(angle)` of one nucleus.
    HardPulse { nucleus: Nucleus, axis: PulseAxis, angle: R },
    /// Free evolution. `coupling_on` selects the full internal Hamiltonian;
    /// otherwise the window is decoupled and only the system Zeeman term
    /// (plus any applied drive) acts.
    Delay { duration: R, coupling_on: bool },
    /// Virtual `R_z(angle)`.
    ZRotation { nucleus: Nucleus, angle: R },
}

impl<R: Real> PulseEvent<R> {
    pub fn pulse(nucleus: Nucleus, axis: PulseAxis, angle: R) -> Self {
        PulseEvent::HardPulse { nucleus, axis, angle }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PulseEvent::HardPulse { angle, .. } | PulseEvent::ZRotation { angle, .. } => {
                if !angle.is_finite() {
                    return Err(Error::MalformedEvent("non-finite angle".into()));
                }
            }
            PulseEvent::Delay { duration, .. } => {
                if !duration.is_finite() || *duration < R::zero() {
                    return Err(Error::MalformedEvent(format!("invalid delay {duration}")));
                }
            }
        }
        Ok(())
    }
}

impl<R: Real> fmt::Display for PulseEvent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseEvent::HardPulse { nucleus, axis, angle } => {
                let a = match axis {
                    PulseAxis::X => 'x',
                    PulseAxis::Y => 'y',
                };
                write!(f, "PULSE nucleus={} axis={a} angle={angle}", nucleus.index())
            }
            PulseEvent::Delay { duration, coupling_on } => {
                let cpl = if *coupling_on { "on" } else { "off" };
                write!(f, "DELAY dur={duration} coupling={cpl}")
            }
            PulseEvent::ZRotation { nucleus, angle } => {
                write!(f, "ZROT nucleus={} angle={angle}", nucleus.index())
            }
        }
    }
}

fn parse_fields<'a>(parts: impl Iterator<Item = &'a str>) -> Result<Vec<(&'a str, &'a str)>> {
    parts
        .map(|p| {
            p.split_once('=')
                .ok_or_else(|| Error::MalformedEvent(format!("expected key=value, got '{p}'")))
        })
        .collect()
}

fn field<'a>(fields: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::MalformedEvent(format!("missing field '{key}'")))
}

fn parse_real<R: Real>(s: &str) -> Result<R> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::MalformedEvent(format!("bad number '{s}'")))?;
    Ok(R::lit(v))
}

impl<R: Real> FromStr for PulseEvent<R> {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut parts = line.split_whitespace();
        let kind = parts
            .next()
            .ok_or_else(|| Error::MalformedEvent("empty line".into()))?;
        let fields = parse_fields(parts)?;
        let ev = match kind {
            "PULSE" => PulseEvent::HardPulse {
                nucleus: Nucleus::from_index(field(&fields, "nucleus")?)?,
                axis: match field(&fields, "axis")? {
                    "x" => PulseAxis::X,
                    "y" => PulseAxis::Y,
                    other => return Err(Error::MalformedEvent(format!("bad axis '{other}'"))),
                },
                angle: parse_real(field(&fields, "angle")?)?,
            },
            "DELAY" => PulseEvent::Delay {
                duration: parse_real(field(&fields, "dur")?)?,
                coupling_on: match field(&fields, "coupling")? {
                    "on" => true,
                    "off" => false,
                    other => {
                        return Err(Error::MalformedEvent(format!("bad coupling '{other}'")))
                    }
                },
            },
            "ZROT" => PulseEvent::ZRotation {
                nucleus: Nucleus::from_index(field(&fields, "nucleus")?)?,
                angle: parse_real(field(&fields, "angle")?)?,
            },
            other => return Err(Error::MalformedEvent(format!("unknown event '{other}'"))),
        };
        ev.validate()?;
        Ok(ev)
    }
}

/// Events in time order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence<R: Real> {
    pub events: Vec<PulseEvent<R>>,
}

impl<R: Real> PulseSequence<R> {
    pub fn new() -> Self {
        Self { events: Vec::new() }
    }

    pub fn push(&mut self, ev: PulseEvent<R>) {
        self.events.push(ev);
    }

    pub fn extend(&mut self, other: PulseSequence<R>) {
        self.events.extend(other.events);
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn has_z_rotations(&self) -> bool {
        self.events
            .iter()
            .any(|e| matches!(e, PulseEvent::ZRotation { .. }))
    }

    /// Replaces every `ZRotation` by `Ry(−π/2), Rx(−θ), Ry(π/2)` in time
    /// order.
    pub fn expand_z_rotations(&self) -> Self {
        let half_pi = R::FRAC_PI_2();
        let mut out = Self::new();
        for ev in &self.events {
            match *ev {
                PulseEvent::ZRotation { nucleus, angle } => {
                    out.push(PulseEvent::pulse(nucleus, PulseAxis::Y, -half_pi));
                    out.push(PulseEvent::pulse(nucleus, PulseAxis::X, -angle));
                    out.push(PulseEvent::pulse(nucleus, PulseAxis::Y, half_pi));
                }
                other => out.push(other),
            }
        }
        out
    }

    /// Net propagator of the sequence with no applied drive.
    pub fn propagator(&self, p: &MoleculeParams<R>) -> Result<Operator<R>> {
        let h = internal_hamiltonian(p);
        let mut u = Operator::identity(4)?;
        for ev in &self.events {
            let step = event_propagator(ev, &h)?;
            u = &step * &u;
        }
        Ok(u)
    }

    /// One event per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for ev in &self.events {
            s.push_str(&ev.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let events = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { events })
    }
}

impl<R: Real> fmt::Display for PulseSequence<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn single_qubit<R: Real>(nucleus: Nucleus, op: &Operator<R>) -> Operator<R> {
    match nucleus {
        Nucleus::Ancilla => on_ancilla(op),
        Nucleus::System => on_system(op),
    }
}

/// Propagator of one event without drive.
fn event_propagator<R: Real>(ev: &PulseEvent<R>, h: &TwoSpinHamiltonian<R>) -> Result<Operator<R>> {
    ev.validate()?;
    Ok(match *ev {
        PulseEvent::HardPulse { nucleus, axis, angle } => {
            single_qubit(nucleus, &rotation(axis.pauli(), angle))
        }
        PulseEvent::ZRotation { nucleus, angle } => {
            single_qubit(nucleus, &rotation(PauliAxis::Z, angle))
        }
        PulseEvent::Delay { duration, coupling_on: true } => propagator_two_spin(h, duration),
        PulseEvent::Delay { duration, coupling_on: false } => {
            on_system(&propagator_const(&h.system_part(), duration))
        }
    })
}

/// Free evolution realizing `exp(−i (πJ/2) σz¹σz² · 1/(2J))`. Off resonance
/// the Zeeman terms are echoed away with π pulses on both nuclei at the
/// midpoint and the end.
fn coupling_block<R: Real>(p: &MoleculeParams<R>) -> PulseSequence<R> {
    let d = R::one() / (R::lit(2.0) * p.j12);
    let mut seq = PulseSequence::new();
    if p.on_resonance() {
        seq.push(PulseEvent::Delay { duration: d, coupling_on: true });
        return seq;
    }
    let half = d / R::lit(2.0);
    let pi = R::PI();
    for _ in 0..2 {
        seq.push(PulseEvent::Delay { duration: half, coupling_on: true });
        seq.push(PulseEvent::pulse(Nucleus::Ancilla, PulseAxis::X, pi));
        seq.push(PulseEvent::pulse(Nucleus::System, PulseAxis::X, pi));
    }
    seq
}

/// Pulse-level realization of `controlled_s(axis)`.
pub fn compile_controlled<R: Real>(
    axis: PauliAxis,
    p: &MoleculeParams<R>,
    xy_only: bool,
) -> Result<PulseSequence<R>> {
    p.validate()?;
    if !(p.j12 > R::zero()) {
        return Err(Error::InvalidParameter(format!(
            "J coupling must be positive to compile controlled gates, got {}",
            p.j12
        )));
    }
    let half_pi = R::FRAC_PI_2();
    let sys = Nucleus::System;
    let mut seq = PulseSequence::new();
    match axis {
        PauliAxis::Z => {
            seq.push(PulseEvent::ZRotation { nucleus: sys, angle: -half_pi });
            seq.extend(coupling_block(p));
        }
        PauliAxis::X => {
            seq.push(PulseEvent::pulse(sys, PulseAxis::Y, half_pi));
            seq.extend(coupling_block(p));
            seq.push(PulseEvent::pulse(sys, PulseAxis::X, half_pi));
            seq.push(PulseEvent::ZRotation { nucleus: sys, angle: -half_pi });
            seq.push(PulseEvent::ZRotation { nucleus: Nucleus::Ancilla, angle: half_pi });
        }
        PauliAxis::Y => {
            seq.push(PulseEvent::pulse(sys, PulseAxis::Y, half_pi));
            seq.push(PulseEvent::pulse(sys, PulseAxis::X, -half_pi));
            seq.extend(coupling_block(p));
            seq.push(PulseEvent::pulse(sys, PulseAxis::X, half_pi));
        }
    }
    Ok(if xy_only { seq.expand_z_rotations() } else { seq })
}

/// Decoupled free evolution of the system for `duration`. With `invert`, the
/// window is wrapped in system π pulses so that a `σz` generator acts with
/// reversed sign: `Rx(π) e^{−iθσz} Rx(π) = −e^{+iθσz}`.
pub fn refocused_delay<R: Real>(duration: R, invert: bool) -> Result<PulseSequence<R>> {
    if !duration.is_finite() || duration < R::zero() {
        return Err(Error::InvalidParameter(format!("delay must be >= 0, got {duration}")));
    }
    let mut seq = PulseSequence::new();
    let pi = R::PI();
    if invert {
        seq.push(PulseEvent::pulse(Nucleus::System, PulseAxis::X, pi));
    }
    seq.push(PulseEvent::Delay { duration, coupling_on: false });
    if invert {
        seq.push(PulseEvent::pulse(Nucleus::System, PulseAxis::X, pi));
    }
    Ok(seq)
}

/// RF drive applied to the system during decoupled windows.
#[derive(Debug, Clone, Copy)]
pub struct SystemDrive<'a, R: Real> {
    pub hamiltonian: &'a TimeDepHamiltonian<R>,
    pub steps_per_window: usize,
}

/// Applies `seq` to a two-spin density matrix.
pub fn simulate_sequence<R: Real>(
    seq: &PulseSequence<R>,
    p: &MoleculeParams<R>,
    rho_in: &DensityMatrix<R>,
) -> Result<DensityMatrix<R>> {
    simulate_sequence_driven(seq, p, rho_in, None)
}

/// As [`simulate_sequence`], adding `drive` to the system generator in every
/// decoupled window. The drive clock starts at 0 and advances only through
/// decoupled windows.
pub fn simulate_sequence_driven<R: Real>(
    seq: &PulseSequence<R>,
    p: &MoleculeParams<R>,
    rho_in: &DensityMatrix<R>,
    drive: Option<SystemDrive<'_, R>>,
) -> Result<DensityMatrix<R>> {
    p.validate()?;
    if rho_in.dim() != 4 {
        return Err(Error::Dimension(format!(
            "pulse simulation needs a two-spin state, got dim {}",
            rho_in.dim()
        )));
    }
    let h = internal_hamiltonian(p);
    let mut rho = rho_in.clone();
    let mut clock = R::zero();
    for ev in &seq.events {
        let u = match (*ev, drive) {
            (PulseEvent::Delay { duration, coupling_on: false }, Some(d)) => {
                ev.validate()?;
                let driven = TimeDepHamiltonian {
                    base: d.hamiltonian.base.plus(&h.system_part()),
                    terms: d.hamiltonian.terms.clone(),
                };
                let u = propagator_timedep(&driven, clock, clock + duration, d.steps_per_window)?;
                clock = clock + duration;
                on_system(&u)
            }
            _ => event_propagator(ev, &h)?,
        };
        rho = rho.evolve(&u)?;
    }
    Ok(rho)
}

/// Full pulse program for `spec`: controlled gates separated by decoupled
/// windows, with sign-inverting refocusing where the next time is earlier.
pub fn build_experiment_sequence<R: Real>(
    spec: &CorrelationSpec<R>,
    p: &MoleculeParams<R>,
    xy_only: bool,
) -> Result<PulseSequence<R>> {
    let ops = spec.ops();
    let mut seq = PulseSequence::new();
    for (k, (axis, t)) in ops.iter().enumerate() {
        seq.extend(compile_controlled(*axis, p, xy_only)?);
        if let Some((_, t_next)) = ops.get(k + 1) {
            let dt = *t_next - *t;
            seq.extend(refocused_delay(dt.abs(), dt < R::zero())?);
        }
    }
    Ok(seq)
}

/// Simulates the complete NMR experiment and extracts the correlation from
/// the ancilla coherence.
pub fn run_nmr_experiment<R: Real>(
    spec: &CorrelationSpec<R>,
    p: &MoleculeParams<R>,
    psi_sys: &StateVector<R>,
    drive: Option<SystemDrive<'_, R>>,
) -> Result<C<R>> {
    if psi_sys.dim() != 2 {
        return Err(Error::Dimension("system state must be a qubit".into()));
    }
    StateVector::new(psi_sys.amplitudes().to_vec())?;
    if drive.is_some() && !spec.is_monotonic() {
        return Err(Error::InvalidSpec(
            "time-dependent drive requires non-decreasing operator times".into(),
        ));
    }
    let seq = build_experiment_sequence(spec, p, false)?;
    let rho0 = StateVector::plus().tensor(psi_sys)?.projector();
    let rho = simulate_sequence_driven(&seq, p, &rho0, drive)?;
    let state = SystemState::Mixed(rho);
    let sx = expect(&on_ancilla(&pauli::<R>(PauliAxis::X)), &state)?.re;
    let sy = expect(&on_ancilla(&pauli::<R>(PauliAxis::Y)), &state)?.re;
    let (r, l) = spec.phase_counts();
    Ok(phase_correction::<R>(r, l) * c(sx, sy))
}

/// Runs on a system whose decoupled dynamics are `hz σz`; convenience for
/// comparing against [`crate::protocol::run_protocol`] with the same
/// constant generator.
pub fn run_nmr_for_field<R: Real>(
    spec: &CorrelationSpec<R>,
    hz: R,
    psi_sys: &StateVector<R>,
) -> Result<C<R>> {
    run_nmr_experiment(spec, &MoleculeParams::for_system_field(hz), psi_sys, None)
}

/// System generator seen during decoupled windows.
pub fn decoupled_system_hamiltonian<R: Real>(p: &MoleculeParams<R>) -> ConstHamiltonian<R> {
    internal_hamiltonian(p).system_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::controlled_s;
    use crate::qcore::max_diff_up_to_phase;
    use crate::scalar::cr;
    use std::f64::consts::PI;

    fn resonant() -> MoleculeParams<f64> {
        MoleculeParams::chloroform(0.0)
    }

    #[test]
    fn internal_hamiltonian_settings() {
        let h = internal_hamiltonian(&MoleculeParams { j12: 0.0, ..MoleculeParams::chloroform(100.0) });
        assert_eq!(h.ancilla_z, 0.0);
        assert!((h.system_z + 100.0 * PI).abs() < 1e-12);
        assert_eq!(h.jzz, 0.0);
        let sys = decoupled_system_hamiltonian(&MoleculeParams::chloroform(100.0));
        assert!((sys.hz + 100.0 * PI).abs() < 1e-12);

        let zero = MoleculeParams { j12: 0.0, ..MoleculeParams::chloroform(0.0) };
        assert!(internal_hamiltonian(&zero).is_zero());
    }

    #[test]
    fn z_gate_is_exact_without_phase_freedom() {
        let seq = compile_controlled(PauliAxis::Z, &resonant(), false).unwrap();
        assert_eq!(seq.len(), 2);
        assert!(matches!(seq.events[0], PulseEvent::ZRotation { nucleus: Nucleus::System, .. }));
        assert!(matches!(seq.events[1], PulseEvent::Delay { coupling_on: true, .. }));
        let u = seq.propagator(&resonant()).unwrap();
        let target = controlled_s::<f64>(PauliAxis::Z);
        assert!(u.max_abs_diff(&target).unwrap() < 1e-12);
    }

    #[test]
    fn x_and_y_gates_match_up_to_phase() {
        for axis in [PauliAxis::X, PauliAxis::Y] {
            let seq = compile_controlled(axis, &resonant(), false).unwrap();
            let u = seq.propagator(&resonant()).unwrap();
            let err = max_diff_up_to_phase(&controlled_s::<f64>(axis), &u).unwrap();
            assert!(err < 1e-12, "{axis}: {err}");
        }
        let x = compile_controlled(PauliAxis::X, &resonant(), false).unwrap();
        assert_eq!(x.len(), 5);
        let y = compile_controlled(PauliAxis::Y, &resonant(), false).unwrap();
        assert_eq!(y.len(), 4);
    }

    #[test]
    fn x_gate_global_phase_is_sqrt_i() {
        let seq = compile_controlled(PauliAxis::X, &resonant(), false).unwrap();
        let u = seq.propagator(&resonant()).unwrap();
        let sqrt_i = crate::scalar::cis(PI / 4.0);
        let fixed = u.scale(sqrt_i);
        assert!(fixed.max_abs_diff(&controlled_s(PauliAxis::X)).unwrap() < 1e-12);
    }

    #[test]
    fn xy_only_expansion_preserves_propagator() {
        for axis in PauliAxis::ALL {
            let plain = compile_controlled(axis, &resonant(), false).unwrap();
            let xy = compile_controlled(axis, &resonant(), true).unwrap();
            assert!(!xy.has_z_rotations());
            let a = plain.propagator(&resonant()).unwrap();
            let b = xy.propagator(&resonant()).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-12, "{axis}");
        }
    }

    #[test]
    fn off_resonance_gates_are_echoed() {
        let p = MoleculeParams::chloroform(137.0);
        for axis in PauliAxis::ALL {
            let u = compile_controlled(axis, &p, false).unwrap().propagator(&p).unwrap();
            let err = max_diff_up_to_phase(&controlled_s::<f64>(axis), &u).unwrap();
            assert!(err < 1e-12, "{axis}: {err}");
        }
    }

    #[test]
    fn compile_rejects_zero_coupling() {
        let p = MoleculeParams { j12: 0.0, ..resonant() };
        assert!(compile_controlled(PauliAxis::Z, &p, false).is_err());
    }

    #[test]
    fn refocused_delay_inverts_z_evolution() {
        let p = MoleculeParams::chloroform(100.0);
        let d = 1.7e-3;
        let h0 = decoupled_system_hamiltonian(&p);
        let plain = refocused_delay(d, false).unwrap().propagator(&p).unwrap();
        assert!(plain.max_abs_diff(&on_system(&propagator_const(&h0, d))).unwrap() < 1e-14);

        let inv = refocused_delay(d, true).unwrap().propagator(&p).unwrap();
        let expected = on_system(&propagator_const(&h0, -d)).scale(cr(-1.0));
        assert!(inv.max_abs_diff(&expected).unwrap() < 1e-14);

        let zero = refocused_delay(0.0, true).unwrap().propagator(&p).unwrap();
        let id = Operator::identity(4).unwrap();
        assert!(max_diff_up_to_phase(&id, &zero).unwrap() < 1e-14);
        assert!(refocused_delay(-1.0, false).is_err());
    }

    #[test]
    fn simulate_basics() {
        let p = resonant();
        let rho = StateVector::basis(4, 0).unwrap().projector();
        let same = simulate_sequence(&PulseSequence::new(), &p, &rho).unwrap();
        assert_eq!(same, rho);

        let mut flip = PulseSequence::new();
        flip.push(PulseEvent::pulse(Nucleus::System, PulseAxis::X, PI));
        let out = simulate_sequence(&flip, &p, &rho).unwrap();
        assert!((out.as_operator().get(1, 1).re - 1.0).abs() < 1e-15);

        let psi = StateVector::plus().tensor(&StateVector::basis(2, 0).unwrap()).unwrap();
        let out = simulate_sequence(
            &compile_controlled(PauliAxis::Z, &p, false).unwrap(),
            &p,
            &psi.projector(),
        )
        .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let target = StateVector::new(vec![cr(h), cr(0.0), c(0.0, h), cr(0.0)]).unwrap();
        assert!(out.as_operator().max_abs_diff(target.projector().as_operator()).unwrap() < 1e-14);
    }

    #[test]
    fn malformed_events_are_rejected() {
        let p = resonant();
        let rho = StateVector::basis(4, 0).unwrap().projector();
        let mut seq = PulseSequence::new();
        seq.push(PulseEvent::Delay { duration: -1.0, coupling_on: false });
        assert!(matches!(simulate_sequence(&seq, &p, &rho), Err(Error::MalformedEvent(_))));
        assert!("PULSE nucleus=3 axis=x angle=1".parse::<PulseEvent<f64>>().is_err());
        assert!("WAIT dur=1".parse::<PulseEvent<f64>>().is_err());
        assert!("DELAY dur=1e-3".parse::<PulseEvent<f64>>().is_err());
    }

    #[test]
    fn text_format_round_trips() {
        let seq = compile_controlled(PauliAxis::X, &MoleculeParams::chloroform(50.0), false).unwrap();
        let text = seq.to_text();
        assert_eq!(PulseSequence::<f64>::parse(&text).unwrap(), seq);
        assert!(text.starts_with("PULSE nucleus=2 axis=y angle=1.5707963267948966\n"));
    }

    #[test]
    fn nmr_matches_closed_forms() {
        let zero = StateVector::basis(2, 0).unwrap();
        let spec = CorrelationSpec::new(vec![(PauliAxis::X, 0.0), (PauliAxis::Y, 2.5e-3)]).unwrap();
        let f = run_nmr_experiment(&spec, &MoleculeParams::chloroform(100.0), &zero, None).unwrap();
        assert!((f - cr(-1.0)).norm() < 1e-8, "{f}");

        let (t1, t2) = (3e-3, 1e-3);
        let spec = CorrelationSpec::new(vec![(PauliAxis::Z, 0.0), (PauliAxis::Y, t1), (PauliAxis::Y, t2)]).unwrap();
        let f = run_nmr_experiment(&spec, &MoleculeParams::chloroform(200.0), &zero, None).unwrap();
        let expected = crate::scalar::cis(-400.0 * PI * (t2 - t1));
        assert!((f - expected).norm() < 1e-8, "{f} vs {expected}");

        let zz = CorrelationSpec::new(vec![(PauliAxis::Z, 0.0), (PauliAxis::Z, 0.0)]).unwrap();
        let f = run_nmr_experiment(&zz, &MoleculeParams::chloroform(100.0), &StateVector::plus(), None).unwrap();
        assert!((f - cr(1.0)).norm() < 1e-10);
    }
}
