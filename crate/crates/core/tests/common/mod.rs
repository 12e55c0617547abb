#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tcorr::protocol::CorrelationSpec;
use tcorr::qcore::{ConstHamiltonian, PauliAxis, StateVector};

pub type M2 = [[Complex64; 2]; 2];

pub fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[z(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn lin(a: &M2, ka: f64, b: &M2, kb: f64) -> M2 {
    let mut out = [[z(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][j] * ka + b[i][j] * kb;
        }
    }
    out
}

pub fn comm(a: &M2, b: &M2) -> M2 {
    lin(&mul(a, b), 1.0, &mul(b, a), -1.0)
}

pub fn sx() -> M2 {
    [[z(0.0, 0.0), z(1.0, 0.0)], [z(1.0, 0.0), z(0.0, 0.0)]]
}

pub fn sy() -> M2 {
    [[z(0.0, 0.0), z(0.0, -1.0)], [z(0.0, 1.0), z(0.0, 0.0)]]
}

pub fn sz() -> M2 {
    [[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(-1.0, 0.0)]]
}

/// ⟨ψ|M|ψ⟩ for a raw two-component ket.
pub fn expect_ket(m: &M2, psi: [Complex64; 2]) -> Complex64 {
    let mut acc = z(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += psi[i].conj() * m[i][j] * psi[j];
        }
    }
    acc
}

/// Heisenberg Paulis under H₀ = −(Ω/2) σz: x → cos x + sin y, y → cos y − sin x.
pub fn heis_x(omega: f64, t: f64) -> M2 {
    lin(&sx(), (omega * t).cos(), &sy(), (omega * t).sin())
}

pub fn heis_y(omega: f64, t: f64) -> M2 {
    lin(&sy(), (omega * t).cos(), &sx(), -(omega * t).sin())
}

pub fn axis_from(k: usize) -> PauliAxis {
    PauliAxis::ALL[k % 3]
}

pub fn random_state(rng: &mut ChaCha8Rng) -> StateVector<f64> {
    loop {
        let v: Vec<Complex64> = (0..2)
            .map(|_| z(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if v.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3 {
            return StateVector::normalized(v).unwrap();
        }
    }
}

pub fn random_hamiltonian(rng: &mut ChaCha8Rng) -> ConstHamiltonian<f64> {
    let bound = 500.0 * std::f64::consts::PI;
    let mut c = || rng.gen_range(-bound..bound);
    ConstHamiltonian::new(c(), c(), c(), c()).unwrap()
}

pub fn random_spec(rng: &mut ChaCha8Rng, max_order: usize) -> CorrelationSpec<f64> {
    let n = rng.gen_range(1..=max_order);
    let mut times: Vec<f64> = (1..n).map(|_| rng.gen_range(0.0..10e-3)).collect();
    times.sort_by(f64::total_cmp);
    times.insert(0, 0.0);
    let ops = times
        .into_iter()
        .map(|t| (axis_from(rng.gen_range(0..3)), t))
        .collect();
    CorrelationSpec::new(ops).unwrap()
}
