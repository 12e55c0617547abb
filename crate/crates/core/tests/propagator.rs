mod common;

use common::*;
use proptest::prelude::*;
use std::f64::consts::PI;
use tcorr::qcore::{
    propagator_const, propagator_timedep, rotation, ConstHamiltonian, Envelope, Operator,
    PauliAxis, TimeDepHamiltonian,
};

const AMP: f64 = 500.0 * PI;
const RATE: f64 = 300.0;

fn decaying_drive() -> TimeDepHamiltonian<f64> {
    TimeDepHamiltonian::new(
        ConstHamiltonian::zero(),
        vec![(PauliAxis::Y, Envelope::ExpDecay { amplitude: AMP, rate: RATE })],
    )
    .unwrap()
}

/// exp(−iφσy) as a real rotation matrix.
fn y_exp(phi: f64) -> [[f64; 2]; 2] {
    [[phi.cos(), -phi.sin()], [phi.sin(), phi.cos()]]
}

fn max_diff(u: &Operator<f64>, m: [[f64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((u.get(i, j) - z(*v, 0.0)).norm());
        }
    }
    worst
}

/// Integrated envelope ∫₀ᵗ A e^{−rs} ds.
fn exact_phase(t: f64) -> f64 {
    AMP / RATE * (1.0 - (-RATE * t).exp())
}

/// Midpoint sum Σ h A e^{−r(k+½)h} as a geometric series.
fn midpoint_phase(t: f64, steps: usize) -> f64 {
    let h = t / steps as f64;
    let q = (-RATE * h).exp();
    h * AMP * (-RATE * h / 2.0).exp() * (1.0 - (-RATE * t).exp()) / (1.0 - q)
}

#[test]
fn integrated_phase_is_half_the_rotation_angle() {
    for t in [0.48e-3, 5.76e-3] {
        let theta = 10.0 * PI / 3.0 * (1.0 - (-RATE * t).exp());
        let exact = max_diff(&rotation(PauliAxis::Y, theta), y_exp(exact_phase(t)));
        assert!(exact < 1e-15);
    }
}

#[test]
fn midpoint_product_matches_geometric_series() {
    let h = decaying_drive();
    for t in [0.48e-3, 2.4e-3, 5.76e-3] {
        for steps in [64, 1024, 4096] {
            let u = propagator_timedep(&h, 0.0, t, steps).unwrap();
            let err = max_diff(&u, y_exp(midpoint_phase(t, steps)));
            assert!(err < 1e-12, "t={t} steps={steps}: {err:e}");
        }
    }
}

#[test]
#[ignore = "midpoint error at 4096 steps is 2.93e-8; the 1e-8 bound is reached from 8192 steps"]
fn decaying_drive_example_at_4096_steps() {
    let t = 5.76e-3;
    let theta = 10.0 * PI / 3.0 * (1.0 - (-RATE * t).exp());
    let u = propagator_timedep(&decaying_drive(), 0.0, t, 4096).unwrap();
    let err = u.max_abs_diff(&rotation(PauliAxis::Y, theta)).unwrap();
    assert!(err < 1e-8, "{err:e}");
}

#[test]
fn decaying_drive_error_at_4096_and_8192_steps() {
    let t = 5.76e-3;
    let exact = y_exp(exact_phase(t));
    let err_4096 = max_diff(&propagator_timedep(&decaying_drive(), 0.0, t, 4096).unwrap(), exact);
    let predicted = max_diff(&rotation(PauliAxis::Y, 2.0 * midpoint_phase(t, 4096)), exact);
    assert!((err_4096 - predicted).abs() < 1e-12 && err_4096 < 3e-8, "{err_4096:e}");
    let err_8192 = max_diff(&propagator_timedep(&decaying_drive(), 0.0, t, 8192).unwrap(), exact);
    assert!(err_8192 < 1e-8, "{err_8192:e}");
}

#[test]
fn second_order_step_convergence() {
    let h = decaying_drive();
    for t in [1e-3, 5.76e-3] {
        let exact = y_exp(exact_phase(t));
        let e: Vec<f64> = [256, 512, 1024]
            .iter()
            .map(|n| max_diff(&propagator_timedep(&h, 0.0, t, *n).unwrap(), exact))
            .collect();
        let u1 = propagator_timedep(&h, 0.0, t, 256).unwrap();
        let u2 = propagator_timedep(&h, 0.0, t, 512).unwrap();
        let u4 = propagator_timedep(&h, 0.0, t, 1024).unwrap();
        let d12 = u1.max_abs_diff(&u2).unwrap();
        let d24 = u2.max_abs_diff(&u4).unwrap();
        let ratio = d12 / d24;
        assert!((3.5..4.5).contains(&ratio), "t={t}: ratio {ratio}");
        assert!((3.5..4.5).contains(&(e[0] / e[1])));
        assert!((3.5..4.5).contains(&(e[1] / e[2])));
    }
}

#[test]
fn sampled_constant_envelope_matches_const() {
    let c = 321.0;
    let grid = (0..=10).map(|k| (k as f64 * 1e-3, c)).collect();
    let h = TimeDepHamiltonian::new(
        ConstHamiltonian::zero(),
        vec![(PauliAxis::Z, Envelope::Sampled { grid })],
    )
    .unwrap();
    let u = propagator_timedep(&h, 0.0, 10e-3, 7).unwrap();
    let v = propagator_const(&ConstHamiltonian::along(PauliAxis::Z, c), 10e-3);
    assert!(u.max_abs_diff(&v).unwrap() < 1e-13);
}

fn arb_hamiltonian() -> impl Strategy<Value = ConstHamiltonian<f64>> {
    let b = 500.0 * PI;
    (-b..b, -b..b, -b..b, -b..b).prop_map(|(a, x, y, zz)| ConstHamiltonian::new(a, x, y, zz).unwrap())
}

proptest! {
    #[test]
    fn const_propagator_is_unitary(h in arb_hamiltonian(), dt in -20e-3f64..20e-3) {
        prop_assert!(propagator_const(&h, dt).unitarity_error() < 1e-12);
    }

    #[test]
    fn backward_step_inverts(h in arb_hamiltonian(), dt in -20e-3f64..20e-3) {
        let p = &propagator_const(&h, dt) * &propagator_const(&h, -dt);
        prop_assert!(p.max_abs_diff(&Operator::identity(2).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn const_propagator_matches_taylor_composition(h in arb_hamiltonian(), dt in 0.0f64..5e-3) {
        // exp(−iHdt) = (exp(−iHdt/N))^N with a 4th-order Taylor step.
        let n = 16384;
        let hm = h.to_operator();
        let id = Operator::identity(2).unwrap();
        let a = hm.scale(z(0.0, -dt / n as f64));
        let a2 = &a * &a;
        let a3 = &a2 * &a;
        let a4 = &a3 * &a;
        let step = &(&(&(&id + &a) + &a2.scale(z(0.5, 0.0))) + &a3.scale(z(1.0 / 6.0, 0.0)))
            + &a4.scale(z(1.0 / 24.0, 0.0));
        let mut u = id;
        for _ in 0..n {
            u = &step * &u;
        }
        prop_assert!(u.max_abs_diff(&propagator_const(&h, dt)).unwrap() < 1e-10);
    }

    #[test]
    fn timedep_propagator_is_unitary(t0 in 0.0f64..5e-3, len in 0.0f64..5e-3, steps in 1usize..300) {
        let u = propagator_timedep(&decaying_drive(), t0, t0 + len, steps).unwrap();
        prop_assert!(u.unitarity_error() < 1e-12);
    }

    #[test]
    fn rotation_half_angle_form(axis in (0usize..3).prop_map(axis_from), angle in -10.0f64..10.0) {
        let s = match axis { PauliAxis::X => sx(), PauliAxis::Y => sy(), PauliAxis::Z => sz() };
        let id = [[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(1.0, 0.0)]];
        let r = rotation(axis, angle);
        for i in 0..2 {
            for j in 0..2 {
                let e = id[i][j] * (angle / 2.0).cos() - z(0.0, 1.0) * s[i][j] * (angle / 2.0).sin();
                prop_assert!((r.get(i, j) - e).norm() < 1e-14);
            }
        }
    }
}
