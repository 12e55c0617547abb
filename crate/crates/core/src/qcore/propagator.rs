use crate::error::{Error, Result};
use crate::scalar::{c, cis, Real};

use super::hamiltonian::{ConstHamiltonian, TimeDepHamiltonian, TwoSpinHamiltonian};
use super::operator::Operator;
use super::PauliAxis;

/// `exp(−i H dt)` in closed form.
///
/// For `H = h0·I + a·σ` with `|a| = ω`,
/// `U = e^{−i h0 dt} (cos(ω dt) I − i sin(ω dt) (a·σ)/ω)`. Negative `dt`
/// yields the inverse evolution.
pub fn propagator_const<R: Real>(h: &ConstHamiltonian<R>, dt: R) -> Operator<R> {
    let w = h.bloch_norm();
    let global = cis(-h.h0 * dt);
    let (cos, sinc) = if w == R::zero() {
        (R::one(), dt)
    } else {
        let phi = w * dt;
        (phi.cos(), phi.sin() / w)
    };
    // −i·sinc·(a·σ) expanded entry-wise.
    let (x, y, z) = (h.hx * sinc, h.hy * sinc, h.hz * sinc);
    let u00 = c(cos, -z);
    let u11 = c(cos, z);
    let u01 = c(-y, -x);
    let u10 = c(y, -x);
    Operator::mat2(u00 * global, u01 * global, u10 * global, u11 * global)
}

/// Single-qubit rotation `R_axis(θ) = exp(−iθσ_axis/2)`.
pub fn rotation<R: Real>(axis: PauliAxis, angle: R) -> Operator<R> {
    propagator_const(&ConstHamiltonian::along(axis, angle / R::lit(2.0)), R::one())
}

/// Time-ordered propagator `U(t1; t0)` for a time-dependent generator.
///
/// `[t0, t1]` is split into `steps` equal sub-intervals; each contributes
/// `exp(−i H(t_mid) h)` with `t_mid` the sub-interval midpoint, and later
/// factors multiply from the left. Second-order accurate.
pub fn propagator_timedep<R: Real>(
    h: &TimeDepHamiltonian<R>,
    t0: R,
    t1: R,
    steps: usize,
) -> Result<Operator<R>> {
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::InvalidParameter("non-finite propagation time".into()));
    }
    if t1 < t0 {
        return Err(Error::BackwardTimeDependent {
            t0: t0.to_f64().unwrap_or(f64::NAN),
            t1: t1.to_f64().unwrap_or(f64::NAN),
        });
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let mut u = Operator::id2();
    if t1 == t0 {
        return Ok(u);
    }
    let n = R::from_usize(steps).expect("step count representable");
    let dt = (t1 - t0) / n;
    let half = R::lit(0.5);
    for k in 0..steps {
        let tm = t0 + (R::from_usize(k).expect("index representable") + half) * dt;
        let step = propagator_const(&h.at(tm)?, dt);
        u = &step * &u;
    }
    Ok(u)
}

/// `exp(−i H dt)` for the diagonal two-spin generator.
pub fn propagator_two_spin<R: Real>(h: &TwoSpinHamiltonian<R>, dt: R) -> Operator<R> {
    let d = h.diagonal().map(|e| cis(-e * dt));
    Operator::diagonal(&d).expect("dim 4")
}

/// Embeds a single-qubit operator on the system (second) factor: `I ⊗ op`.
pub fn on_system<R: Real>(op: &Operator<R>) -> Operator<R> {
    Operator::id2().tensor(op).expect("2x2 operands")
}

/// Embeds a single-qubit operator on the ancilla (first) factor: `op ⊗ I`.
pub fn on_ancilla<R: Real>(op: &Operator<R>) -> Operator<R> {
    op.tensor(&Operator::id2()).expect("2x2 operands")
}
