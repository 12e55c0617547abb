//! Ancilla-assisted measurement of n-time Pauli correlation functions.
//!
//! A [`CorrelationSpec`] lists operators **innermost first**: entry 0 is the
//! operator acting at time 0, entry `n−1` the latest one. The printed
//! mathematical form `⟨σ_γ(t_{n−1}) ⋯ σ_β(t_1) σ_α(0)⟩` therefore reads the
//! list in reverse.
//!
//! The circuit prepares `|+⟩⟨+| ⊗ ρ_in`, alternates controlled gates
//! `|1⟩⟨1|⊗S + |0⟩⟨0|⊗I` with system-only evolutions `I ⊗ U(t_{k+1}; t_k)`
//! (no evolution after the last gate) and reads `⟨σx⟩`, `⟨σy⟩` of the
//! ancilla. With `S_x = σx`, `S_y = −iσy`, `S_z = iσz`,
//! `f = i^r (−i)^l (⟨σx⟩ + i⟨σy⟩)` where `r` and `l` count the Y and Z
//! operators.

use crate::error::{Error, Result};
use crate::qcore::{
    apply, expect, on_ancilla, on_system, pauli, ConstHamiltonian, DensityMatrix, Dynamics,
    Operator, PauliAxis, StateVector, SystemState,
};
use crate::scalar::{c, cr, i_unit, Real, C};

/// Ordered operator list defining `f(t_1, …, t_{n−1})`, innermost first.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSpec<R: Real> {
    ops: Vec<(PauliAxis, R)>,
}

impl<R: Real> CorrelationSpec<R> {
    pub fn new(ops: Vec<(PauliAxis, R)>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidSpec("at least one operator required".into()));
        }
        if ops[0].1 != R::zero() {
            return Err(Error::InvalidSpec("first operator must act at t = 0".into()));
        }
        if ops.iter().any(|(_, t)| !t.is_finite()) {
            return Err(Error::InvalidSpec("non-finite time".into()));
        }
        Ok(Self { ops })
    }

    pub fn ops(&self) -> &[(PauliAxis, R)] {
        &self.ops
    }

    pub fn order(&self) -> usize {
        self.ops.len()
    }

    /// Times `t_1, …, t_{n−1}` (entry 0 is always 0 and omitted).
    pub fn times(&self) -> Vec<R> {
        self.ops.iter().skip(1).map(|(_, t)| *t).collect()
    }

    pub fn is_monotonic(&self) -> bool {
        self.ops.windows(2).all(|w| w[1].1 >= w[0].1)
    }

    /// `(r, l)`: occurrences of Y and of Z.
    pub fn phase_counts(&self) -> (usize, usize) {
        let r = self.ops.iter().filter(|(a, _)| *a == PauliAxis::Y).count();
        let l = self.ops.iter().filter(|(a, _)| *a == PauliAxis::Z).count();
        (r, l)
    }

    pub(crate) fn check_dynamics(&self, dynamics: &Dynamics<R>) -> Result<()> {
        if !dynamics.allows_backward() && !self.is_monotonic() {
            return Err(Error::InvalidSpec(
                "time-dependent dynamics require non-decreasing operator times".into(),
            ));
        }
        Ok(())
    }
}

/// Measured correlation together with the raw ancilla readout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolResult<R: Real> {
    pub f: C<R>,
    pub sx: R,
    pub sy: R,
    pub r: usize,
    pub l: usize,
}

/// Unitary `S_axis` applied by the controlled gate.
pub fn s_operator<R: Real>(axis: PauliAxis) -> Operator<R> {
    let p = pauli::<R>(axis);
    match axis {
        PauliAxis::X => p,
        PauliAxis::Y => p.scale(-i_unit::<R>()),
        PauliAxis::Z => p.scale(i_unit::<R>()),
    }
}

/// `|1⟩⟨1| ⊗ S_axis + |0⟩⟨0| ⊗ I₂` (ancilla first).
pub fn controlled_s<R: Real>(axis: PauliAxis) -> Operator<R> {
    let s = s_operator::<R>(axis);
    let mut u = Operator::identity(4).expect("dim 4");
    for r in 0..2 {
        for col in 0..2 {
            u.set(2 + r, 2 + col, s.get(r, col));
        }
    }
    u
}

/// `i^r (−i)^l`.
pub fn phase_correction<R: Real>(r: usize, l: usize) -> C<R> {
    // i^r (−i)^l = i^{(r − l) mod 4}
    let k = (r % 4 + 4 - l % 4) % 4;
    match k {
        0 => c(R::one(), R::zero()),
        1 => c(R::zero(), R::one()),
        2 => c(-R::one(), R::zero()),
        _ => c(R::zero(), -R::one()),
    }
}

fn validate_input<R: Real>(input: &SystemState<R>) -> Result<()> {
    if input.dim() != 2 {
        return Err(Error::Dimension(format!(
            "system input must be a qubit (dim 2), got dim {}",
            input.dim()
        )));
    }
    if let SystemState::Pure(p) = input {
        // Re-validate: StateVector may have been built by `apply`.
        StateVector::new(p.amplitudes().to_vec())?;
    }
    Ok(())
}

/// Gate/evolution sequence of the circuit, in application order.
fn circuit<R: Real>(spec: &CorrelationSpec<R>, dynamics: &Dynamics<R>) -> Result<Vec<Operator<R>>> {
    let ops = spec.ops();
    let mut steps = Vec::with_capacity(2 * ops.len());
    for (k, (axis, t)) in ops.iter().enumerate() {
        steps.push(controlled_s::<R>(*axis));
        if let Some((_, t_next)) = ops.get(k + 1) {
            steps.push(on_system(&dynamics.propagator(*t, *t_next)?));
        }
    }
    Ok(steps)
}

/// Runs the ancilla-assisted circuit and extracts the correlation.
pub fn run_protocol<R: Real>(
    spec: &CorrelationSpec<R>,
    dynamics: &Dynamics<R>,
    input: &SystemState<R>,
) -> Result<ProtocolResult<R>> {
    validate_input(input)?;
    spec.check_dynamics(dynamics)?;
    let steps = circuit(spec, dynamics)?;
    let sx_op = on_ancilla(&pauli::<R>(PauliAxis::X));
    let sy_op = on_ancilla(&pauli::<R>(PauliAxis::Y));

    let final_state: SystemState<R> = match input {
        SystemState::Pure(phi) => {
            let mut psi = StateVector::plus().tensor(phi)?;
            for u in &steps {
                psi = apply(u, &psi)?;
            }
            SystemState::Pure(psi)
        }
        SystemState::Mixed(rho) => {
            let mut rho = StateVector::plus().projector().tensor(rho)?;
            for u in &steps {
                rho = rho.evolve(u)?;
            }
            SystemState::Mixed(rho)
        }
    };

    let sx = expect(&sx_op, &final_state)?.re;
    let sy = expect(&sy_op, &final_state)?.re;
    let (r, l) = spec.phase_counts();
    let f = phase_correction::<R>(r, l) * c(sx, sy);
    Ok(ProtocolResult { f, sx, sy, r, l })
}

/// Eigenstates `(energy, state)` of a constant qubit generator, ground first.
/// A degenerate generator yields the computational basis.
pub fn eigenstates<R: Real>(h: &ConstHamiltonian<R>) -> [(R, StateVector<R>); 2] {
    let w = h.bloch_norm();
    if w == R::zero() {
        return [
            (h.h0, StateVector::basis(2, 0).expect("basis")),
            (h.h0, StateVector::basis(2, 1).expect("basis")),
        ];
    }
    let (nx, ny, nz) = (h.hx / w, h.hy / w, h.hz / w);
    let vec_for = |lambda: R| {
        // Two null vectors of (n·σ − λ); take the better conditioned one.
        let a = [c(nx, -ny), cr(lambda - nz)];
        let b = [cr(lambda + nz), c(nx, ny)];
        let na = a[0].norm_sqr() + a[1].norm_sqr();
        let nb = b[0].norm_sqr() + b[1].norm_sqr();
        let v = if na >= nb { a } else { b };
        StateVector::normalized(v.to_vec()).expect("non-zero null vector")
    };
    [
        (h.h0 - w, vec_for(-R::one())),
        (h.h0 + w, vec_for(R::one())),
    ]
}

/// Gibbs weights `(p_ground, p_excited)` for inverse temperature `beta`
/// (`+∞` selects the ground state).
pub fn gibbs_weights<R: Real>(h: &ConstHamiltonian<R>, beta: R) -> Result<(R, R)> {
    if beta.is_nan() || beta < R::zero() {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature must be >= 0, got {beta}"
        )));
    }
    let gap = R::lit(2.0) * h.bloch_norm();
    if gap == R::zero() {
        let half = R::lit(0.5);
        return Ok((half, half));
    }
    if beta.is_infinite() {
        return Ok((R::one(), R::zero()));
    }
    // Energies shifted so the ground level is 0.
    let boltz = (-beta * gap).exp();
    let z = R::one() + boltz;
    Ok((R::one() / z, boltz / z))
}

/// Thermal correlation reconstructed from the two eigenstate runs.
pub fn run_protocol_thermal<R: Real>(
    spec: &CorrelationSpec<R>,
    h: &ConstHamiltonian<R>,
    beta: R,
) -> Result<C<R>> {
    h.validate()?;
    let (p0, p1) = gibbs_weights(h, beta)?;
    let dynamics = Dynamics::Const(*h);
    let [(_, ground), (_, excited)] = eigenstates(h);
    let mut acc = cr(R::zero());
    for (p, state) in [(p0, ground), (p1, excited)] {
        if p > R::zero() {
            let res = run_protocol(spec, &dynamics, &SystemState::Pure(state))?;
            acc = acc + res.f * p;
        }
    }
    Ok(acc)
}

/// Convenience: wraps a validated density matrix into a protocol input.
pub fn mixed_input<R: Real>(rho: Operator<R>) -> Result<SystemState<R>> {
    Ok(SystemState::Mixed(DensityMatrix::new(rho)?))
}
