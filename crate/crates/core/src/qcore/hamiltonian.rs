//! Single-spin and two-spin generators. Coefficients are angular frequencies
//! (rad/s, ħ = 1); times are seconds.

use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

use super::operator::{pauli, Operator};
use super::PauliAxis;

/// `H = h0·I + hx σx + hy σy + hz σz`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConstHamiltonian<R: Real> {
    pub h0: R,
    pub hx: R,
    pub hy: R,
    pub hz: R,
}

impl<R: Real> ConstHamiltonian<R> {
    pub fn new(h0: R, hx: R, hy: R, hz: R) -> Result<Self> {
        let h = Self { h0, hx, hy, hz };
        h.validate()?;
        Ok(h)
    }

    pub fn zero() -> Self {
        Self {
            h0: R::zero(),
            hx: R::zero(),
            hy: R::zero(),
            hz: R::zero(),
        }
    }

    /// `coeff · σ_axis`.
    pub fn along(axis: PauliAxis, coeff: R) -> Self {
        let mut h = Self::zero();
        match axis {
            PauliAxis::X => h.hx = coeff,
            PauliAxis::Y => h.hy = coeff,
            PauliAxis::Z => h.hz = coeff,
        }
        h
    }

    pub fn validate(&self) -> Result<()> {
        if [self.h0, self.hx, self.hy, self.hz].iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidHamiltonian("non-finite coefficient".into()))
        }
    }

    /// Length of the Bloch vector `(hx, hy, hz)`; half the level splitting.
    pub fn bloch_norm(&self) -> R {
        (self.hx * self.hx + self.hy * self.hy + self.hz * self.hz).sqrt()
    }

    /// True when only the identity and `σz` components are present.
    pub fn is_z_type(&self) -> bool {
        self.hx == R::zero() && self.hy == R::zero()
    }

    pub fn coefficient(&self, axis: PauliAxis) -> R {
        match axis {
            PauliAxis::X => self.hx,
            PauliAxis::Y => self.hy,
            PauliAxis::Z => self.hz,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            h0: self.h0 + other.h0,
            hx: self.hx + other.hx,
            hy: self.hy + other.hy,
            hz: self.hz + other.hz,
        }
    }

    pub fn to_operator(&self) -> Operator<R> {
        let mut m = Operator::identity(2).expect("dim 2").scale(cr(self.h0));
        for axis in PauliAxis::ALL {
            m = &m + &pauli(axis).scale(cr(self.coefficient(axis)));
        }
        m
    }
}

/// Diagonal two-spin generator
/// `H = a1 σz⊗I + a2 I⊗σz + jzz σz⊗σz` (ancilla first).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwoSpinHamiltonian<R: Real> {
    pub ancilla_z: R,
    pub system_z: R,
    pub jzz: R,
}

impl<R: Real> TwoSpinHamiltonian<R> {
    /// Diagonal of `H` in the basis |00⟩,|01⟩,|10⟩,|11⟩.
    pub fn diagonal(&self) -> [R; 4] {
        let (a, s, j) = (self.ancilla_z, self.system_z, self.jzz);
        [a + s + j, a - s - j, -a + s - j, -a - s + j]
    }

    pub fn to_operator(&self) -> Operator<R> {
        let d = self.diagonal();
        Operator::diagonal(&d.map(cr)).expect("dim 4")
    }

    pub fn is_zero(&self) -> bool {
        self.ancilla_z == R::zero() && self.system_z == R::zero() && self.jzz == R::zero()
    }

    /// System-only part `a2 σz` seen by a decoupled system spin.
    pub fn system_part(&self) -> ConstHamiltonian<R> {
        ConstHamiltonian::along(PauliAxis::Z, self.system_z)
    }
}

/// Time profile multiplying a Pauli term, in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope<R: Real> {
    /// `amplitude · e^{−rate·t}`.
    ExpDecay { amplitude: R, rate: R },
    /// Piecewise-linear interpolation of `(time, value)` samples.
    Sampled { grid: Vec<(R, R)> },
}

impl<R: Real> Envelope<R> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Envelope::ExpDecay { amplitude, rate } => {
                if amplitude.is_finite() && rate.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidHamiltonian("non-finite envelope".into()))
                }
            }
            Envelope::Sampled { grid } => {
                if grid.is_empty() {
                    return Err(Error::InvalidHamiltonian("empty sampled envelope".into()));
                }
                if grid.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                    return Err(Error::InvalidHamiltonian("non-finite sample".into()));
                }
                if grid.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::InvalidHamiltonian(
                        "sampled envelope times must be strictly increasing".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, t: R) -> Result<R> {
        match self {
            Envelope::ExpDecay { amplitude, rate } => Ok(*amplitude * (-*rate * t).exp()),
            Envelope::Sampled { grid } => {
                let (first, last) = (grid[0], grid[grid.len() - 1]);
                if t < first.0 || t > last.0 {
                    return Err(Error::EnvelopeDomain(t.to_f64().unwrap_or(f64::NAN)));
                }
                if grid.len() == 1 {
                    return Ok(first.1);
                }
                let k = grid.partition_point(|(tk, _)| *tk <= t);
                let k = k.clamp(1, grid.len() - 1);
                let (t0, v0) = grid[k - 1];
                let (t1, v1) = grid[k];
                let w = (t - t0) / (t1 - t0);
                Ok(v0 + (v1 - v0) * w)
            }
        }
    }
}

/// `H(t) = base + Σ envelope_k(t) σ_{axis_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDepHamiltonian<R: Real> {
    pub base: ConstHamiltonian<R>,
    pub terms: Vec<(PauliAxis, Envelope<R>)>,
}

impl<R: Real> TimeDepHamiltonian<R> {
    pub fn new(base: ConstHamiltonian<R>, terms: Vec<(PauliAxis, Envelope<R>)>) -> Result<Self> {
        base.validate()?;
        for (_, env) in &terms {
            env.validate()?;
        }
        Ok(Self { base, terms })
    }

    /// Instantaneous generator `H(t)`.
    pub fn at(&self, t: R) -> Result<ConstHamiltonian<R>> {
        let mut h = self.base;
        for (axis, env) in &self.terms {
            h = h.plus(&ConstHamiltonian::along(*axis, env.value(t)?));
        }
        Ok(h)
    }
}

/// Default number of midpoint sub-steps per propagation interval.
pub const DEFAULT_STEPS: usize = 1024;

/// System dynamics between protocol gates.
#[derive(Debug, Clone, PartialEq)]
pub enum Dynamics<R: Real> {
    Const(ConstHamiltonian<R>),
    TimeDep {
        hamiltonian: TimeDepHamiltonian<R>,
        steps_per_interval: usize,
    },
}

impl<R: Real> Dynamics<R> {
    pub fn time_dependent(hamiltonian: TimeDepHamiltonian<R>) -> Self {
        Dynamics::TimeDep {
            hamiltonian,
            steps_per_interval: DEFAULT_STEPS,
        }
    }

    /// `U(t1; t0)`. Constant generators accept `t1 < t0`.
    pub fn propagator(&self, t0: R, t1: R) -> Result<Operator<R>> {
        match self {
            Dynamics::Const(h) => Ok(super::propagator_const(h, t1 - t0)),
            Dynamics::TimeDep {
                hamiltonian,
                steps_per_interval,
            } => super::propagator_timedep(hamiltonian, t0, t1, *steps_per_interval),
        }
    }

    pub fn allows_backward(&self) -> bool {
        matches!(self, Dynamics::Const(_))
    }
}

impl<R: Real> From<ConstHamiltonian<R>> for Dynamics<R> {
    fn from(h: ConstHamiltonian<R>) -> Self {
        Dynamics::Const(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_spin_diagonal_matches_operator_sum() {
        let h = TwoSpinHamiltonian {
            ancilla_z: 1.5,
            system_z: -0.25,
            jzz: 3.0,
        };
        let z = pauli::<f64>(PauliAxis::Z);
        let i2 = Operator::identity(2).unwrap();
        let expected = &(&z.tensor(&i2).unwrap().scale(cr(1.5))
            + &i2.tensor(&z).unwrap().scale(cr(-0.25)))
            + &z.tensor(&z).unwrap().scale(cr(3.0));
        assert!(h.to_operator().max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn sampled_envelope_interpolates() {
        let env = Envelope::Sampled {
            grid: vec![(0.0, 0.0), (1.0, 2.0), (3.0, 0.0)],
        };
        env.validate().unwrap();
        assert_eq!(env.value(0.5).unwrap(), 1.0);
        assert_eq!(env.value(1.0).unwrap(), 2.0);
        assert_eq!(env.value(2.0).unwrap(), 1.0);
        assert_eq!(env.value(3.0).unwrap(), 0.0);
        assert!(matches!(env.value(3.5), Err(Error::EnvelopeDomain(_))));
    }

    #[test]
    fn sampled_envelope_rejects_unsorted_grid() {
        let env = Envelope::Sampled {
            grid: vec![(0.0, 0.0), (0.0, 1.0)],
        };
        assert!(env.validate().is_err());
    }

    #[test]
    fn rejects_non_finite_coefficients() {
        assert!(ConstHamiltonian::new(0.0, f64::NAN, 0.0, 0.0).is_err());
        assert!(ConstHamiltonian::new(0.0, 1.0, 0.0, f64::INFINITY).is_err());
    }
}
