//! Direct Heisenberg-picture evaluation of correlation functions.
//!
//! Shares only the `qcore` primitives with [`crate::protocol`]; it never
//! builds the ancilla circuit, so the two can be cross-checked.

use crate::error::{Error, Result};
use crate::protocol::CorrelationSpec;
use crate::qcore::{
    expect, pauli, ConstHamiltonian, DensityMatrix, Dynamics, Operator, PauliAxis, SystemState,
};
use crate::scalar::{cr, Real, C};

/// `σ_axis(t) = U†(t; 0) σ_axis U(t; 0)`.
pub fn heisenberg_op<R: Real>(axis: PauliAxis, t: R, dynamics: &Dynamics<R>) -> Result<Operator<R>> {
    let p = pauli::<R>(axis);
    if t == R::zero() {
        return Ok(p);
    }
    let u = dynamics.propagator(R::zero(), t)?;
    Ok(&(&u.dagger() * &p) * &u)
}

/// `⟨σ_{n−1}(t_{n−1}) ⋯ σ_1(t_1) σ_0(0)⟩` evaluated by multiplying Heisenberg
/// operators, latest leftmost.
pub fn correlation_direct<R: Real>(
    spec: &CorrelationSpec<R>,
    dynamics: &Dynamics<R>,
    input: &SystemState<R>,
) -> Result<C<R>> {
    if input.dim() != 2 {
        return Err(Error::Dimension(format!(
            "system input must be a qubit, got dim {}",
            input.dim()
        )));
    }
    if !dynamics.allows_backward() && spec.ops().iter().any(|(_, t)| *t < R::zero()) {
        return Err(Error::InvalidSpec(
            "time-dependent dynamics require non-negative times".into(),
        ));
    }
    if !dynamics.allows_backward() && !spec.is_monotonic() {
        return Err(Error::InvalidSpec(
            "time-dependent dynamics require non-decreasing operator times".into(),
        ));
    }
    let mut product = Operator::identity(2)?;
    for (axis, t) in spec.ops() {
        let op = heisenberg_op(*axis, *t, dynamics)?;
        product = &op * &product;
    }
    expect(&product, input)
}

/// Thermal state `e^{−βH}/Z` of a constant qubit generator, in the closed
/// form `½(I − tanh(β|a|) â·σ)`. `β = +∞` gives the ground-state projector.
pub fn gibbs_state<R: Real>(h: &ConstHamiltonian<R>, beta: R) -> Result<DensityMatrix<R>> {
    if beta.is_nan() || beta < R::zero() {
        return Err(Error::InvalidParameter(format!(
            "inverse temperature must be >= 0, got {beta}"
        )));
    }
    let w = h.bloch_norm();
    let half = R::lit(0.5);
    let mut rho = Operator::identity(2)?.scale(cr(half));
    if w > R::zero() {
        let pol = if beta.is_infinite() { R::one() } else { (beta * w).tanh() };
        for axis in PauliAxis::ALL {
            let k = -half * pol * h.coefficient(axis) / w;
            rho = &rho + &pauli::<R>(axis).scale(cr(k));
        }
    }
    DensityMatrix::new(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{StateVector, TimeDepHamiltonian};
    use crate::scalar::{c, cis};
    use std::f64::consts::PI;

    fn hz(coeff: f64) -> Dynamics<f64> {
        Dynamics::Const(ConstHamiltonian::along(PauliAxis::Z, coeff))
    }

    #[test]
    fn commuting_generator_leaves_sigma_z() {
        let op = heisenberg_op(PauliAxis::Z, 3.7e-3, &hz(-123.0)).unwrap();
        assert!(op.max_abs_diff(&pauli(PauliAxis::Z)).unwrap() < 1e-15);
    }

    #[test]
    fn x_rotates_into_y_at_quarter_period() {
        let op = heisenberg_op(PauliAxis::X, 2.5e-3, &hz(-100.0 * PI)).unwrap();
        assert!(op.max_abs_diff(&pauli(PauliAxis::Y)).unwrap() < 1e-14);
        assert!(op.hermiticity_error() < 1e-12);
        assert!(op.unitarity_error() < 1e-12);
    }

    #[test]
    fn zero_time_is_bare_pauli() {
        let dyn_ = Dynamics::Const(ConstHamiltonian::new(1.0, 2.0, 3.0, 4.0).unwrap());
        for axis in PauliAxis::ALL {
            assert_eq!(heisenberg_op(axis, 0.0, &dyn_).unwrap(), pauli(axis));
        }
    }

    #[test]
    fn yx_closed_form() {
        let t = 0.5e-3;
        let spec = CorrelationSpec::new(vec![(PauliAxis::X, 0.0), (PauliAxis::Y, t)]).unwrap();
        let zero = StateVector::basis(2, 0).unwrap().into();
        let f = correlation_direct(&spec, &hz(-100.0 * PI), &zero).unwrap();
        let expected = c(0.0, -1.0) * cis(-200.0 * PI * t);
        assert!((f - expected).norm() < 1e-14);
        assert!((f - c(-0.30901699437494745, -0.9510565162951535)).norm() < 1e-12);
    }

    #[test]
    fn zyy_closed_form() {
        let zero: SystemState<f64> = StateVector::basis(2, 0).unwrap().into();
        for (t1, t2) in [(1e-3, 3e-3), (2.5e-3, 0.5e-3), (1.5e-3, 1.5e-3)] {
            let spec = CorrelationSpec::new(vec![
                (PauliAxis::Z, 0.0),
                (PauliAxis::Y, t1),
                (PauliAxis::Y, t2),
            ])
            .unwrap();
            let f = correlation_direct(&spec, &hz(-200.0 * PI), &zero).unwrap();
            let expected = cis(-400.0 * PI * (t2 - t1));
            assert!((f - expected).norm() < 1e-12, "t1={t1} t2={t2} f={f}");
        }
    }

    #[test]
    fn timedep_rejects_negative_time() {
        let td = Dynamics::time_dependent(TimeDepHamiltonian::new(ConstHamiltonian::zero(), vec![]).unwrap());
        assert!(heisenberg_op(PauliAxis::X, -1e-3, &td).is_err());
    }

    #[test]
    fn gibbs_state_limits() {
        let h = ConstHamiltonian::along(PauliAxis::Z, -100.0 * PI);
        let cold = gibbs_state(&h, f64::INFINITY).unwrap();
        assert!((cold.as_operator().get(0, 0).re - 1.0).abs() < 1e-15);
        let hot = gibbs_state(&h, 0.0).unwrap();
        assert!((hot.purity() - 0.5).abs() < 1e-15);
        let warm = gibbs_state(&h, 1e-3).unwrap();
        let pz = expect(&pauli(PauliAxis::Z), &warm.into()).unwrap().re;
        assert!((pz - (1e-3 * 100.0 * PI).tanh()).abs() < 1e-14);
        assert!(gibbs_state(&h, -1.0).is_err());
    }
}
