use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

use super::operator::Operator;
use super::propagator::rotation;
use super::PauliAxis;

/// Normalized pure state of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<R: Real> {
    amps: Vec<C<R>>,
}

impl<R: Real> StateVector<R> {
    /// Wraps `amps`, rejecting vectors whose 2-norm differs from 1 by more
    /// than the scalar's validation tolerance.
    pub fn new(amps: Vec<C<R>>) -> Result<Self> {
        let dim = amps.len();
        if dim != 2 && dim != 4 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NotNormalized(f64::NAN));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<R>().sqrt();
        if (norm - R::one()).abs() > R::validation_tol() {
            return Err(Error::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: Vec<C<R>>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<R>().sqrt();
        if !(norm > R::zero()) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Self::new(amps.into_iter().map(|a| a / norm).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Dimension(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![cr(R::zero()); dim];
        amps[index] = cr(R::one());
        Self::new(amps)
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = R::FRAC_1_SQRT_2();
        Self {
            amps: vec![cr(h), cr(h)],
        }
    }

    /// `R_axis(angle)|0⟩` with `R_n(θ) = exp(−iθσ_n/2)`.
    pub fn rotated_zero(axis: PauliAxis, angle: R) -> Self {
        let u = rotation(axis, angle);
        Self {
            amps: vec![u.get(0, 0), u.get(1, 0)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C<R>] {
        &self.amps
    }

    /// `self ⊗ rhs` for two single-qubit states.
    pub fn tensor(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != 2 || rhs.dim() != 2 {
            return Err(Error::Dimension("state tensor requires two qubits".into()));
        }
        let mut amps = Vec::with_capacity(4);
        for a in &self.amps {
            for b in &rhs.amps {
                amps.push(*a * *b);
            }
        }
        Ok(Self { amps })
    }

    /// `⟨self|rhs⟩`.
    pub fn inner(&self, rhs: &Self) -> Result<C<R>> {
        if self.dim() != rhs.dim() {
            return Err(Error::Dimension("inner product of unequal dims".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&rhs.amps)
            .fold(cr(R::zero()), |acc, (a, b)| acc + a.conj() * *b))
    }

    pub fn projector(&self) -> DensityMatrix<R> {
        let n = self.dim();
        let mut m = Operator::zeros(n).expect("state dim is 2 or 4");
        for r in 0..n {
            for col in 0..n {
                m.set(r, col, self.amps[r] * self.amps[col].conj());
            }
        }
        DensityMatrix { rho: m }
    }
}

/// `A|ψ⟩`. `A` is expected to be unitary; the norm is not re-checked.
pub fn apply<R: Real>(op: &Operator<R>, psi: &StateVector<R>) -> Result<StateVector<R>> {
    let n = op.dim();
    if n != psi.dim() {
        return Err(Error::Dimension(format!(
            "operator dim {n} applied to state dim {}",
            psi.dim()
        )));
    }
    let amps = (0..n)
        .map(|r| {
            (0..n).fold(cr(R::zero()), |acc, k| acc + op.get(r, k) * psi.amps[k])
        })
        .collect();
    Ok(StateVector { amps })
}

/// Positive semidefinite, unit-trace Hermitian matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<R: Real> {
    rho: Operator<R>,
}

impl<R: Real> DensityMatrix<R> {
    /// Validates Hermiticity, unit trace and eigenvalues `≥ −tol`.
    pub fn new(rho: Operator<R>) -> Result<Self> {
        let tol = R::validation_tol();
        if !rho.is_finite() {
            return Err(Error::InvalidDensityMatrix("non-finite entries".into()));
        }
        if rho.hermiticity_error() > tol {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - R::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {}", tr.re)));
        }
        if !shifted_cholesky_ok(&rho, tol) {
            return Err(Error::InvalidDensityMatrix(
                "negative eigenvalue below tolerance".into(),
            ));
        }
        Ok(Self { rho })
    }

    /// Maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let id = Operator::identity(dim)?;
        let inv = R::one() / R::from_usize(dim).expect("small integer");
        Ok(Self { rho: id.scale(cr(inv)) })
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn as_operator(&self) -> &Operator<R> {
        &self.rho
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &Operator<R>) -> Result<Self> {
        let tmp = u.try_mul(&self.rho)?;
        Ok(Self {
            rho: tmp.try_mul(&u.dagger())?,
        })
    }

    /// `ρ_a ⊗ ρ_b`.
    pub fn tensor(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            rho: self.rho.tensor(&rhs.rho)?,
        })
    }

    pub fn purity(&self) -> R {
        (&self.rho * &self.rho).trace().re
    }
}

/// Cholesky factorization of `ρ + tol·I`; succeeds iff every eigenvalue of
/// `ρ` is at least `−tol` (up to rounding at the boundary).
fn shifted_cholesky_ok<R: Real>(rho: &Operator<R>, tol: R) -> bool {
    let n = rho.dim();
    let mut l = vec![cr(R::zero()); n * n];
    for j in 0..n {
        let mut d = rho.get(j, j).re + tol;
        for k in 0..j {
            d = d - l[j * n + k].norm_sqr();
        }
        if !(d > R::zero()) {
            return false;
        }
        let dj = d.sqrt();
        l[j * n + j] = cr(dj);
        for i in (j + 1)..n {
            let mut s = rho.get(i, j);
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / dj;
        }
    }
    true
}

/// Quantum state that an expectation value can be taken on.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemState<R: Real> {
    Pure(StateVector<R>),
    Mixed(DensityMatrix<R>),
}

impl<R: Real> SystemState<R> {
    pub fn dim(&self) -> usize {
        match self {
            SystemState::Pure(p) => p.dim(),
            SystemState::Mixed(m) => m.dim(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix<R> {
        match self {
            SystemState::Pure(p) => p.projector(),
            SystemState::Mixed(m) => m.clone(),
        }
    }
}

impl<R: Real> From<StateVector<R>> for SystemState<R> {
    fn from(s: StateVector<R>) -> Self {
        SystemState::Pure(s)
    }
}

impl<R: Real> From<DensityMatrix<R>> for SystemState<R> {
    fn from(s: DensityMatrix<R>) -> Self {
        SystemState::Mixed(s)
    }
}

/// `⟨ψ|A|ψ⟩` or `Tr(ρA)`.
pub fn expect<R: Real>(op: &Operator<R>, state: &SystemState<R>) -> Result<C<R>> {
    match state {
        SystemState::Pure(psi) => {
            let a_psi = apply(op, psi)?;
            psi.inner(&a_psi)
        }
        SystemState::Mixed(rho) => {
            if rho.dim() != op.dim() {
                return Err(Error::Dimension(format!(
                    "operator dim {} on density matrix dim {}",
                    op.dim(),
                    rho.dim()
                )));
            }
            Ok(rho.as_operator().try_mul(op)?.trace())
        }
    }
}

#[cfg(test)]
pub(crate) fn ket<R: Real>(re_im: &[(f64, f64)]) -> Vec<C<R>> {
    re_im.iter().map(|(a, b)| crate::scalar::c(R::lit(*a), R::lit(*b))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::pauli;

    #[test]
    fn expectation_basics() {
        let zero: SystemState<f64> = StateVector::basis(2, 0).unwrap().into();
        let z = expect(&pauli(PauliAxis::Z), &zero).unwrap();
        assert_eq!(z, cr(1.0));
        let plus: SystemState<f64> = StateVector::plus().into();
        let x = expect(&pauli(PauliAxis::X), &plus).unwrap();
        assert!((x - cr(1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        let r = StateVector::<f64>::new(ket(&[(1.0, 0.0), (1.0, 0.0)]));
        assert!(matches!(r, Err(Error::NotNormalized(_))));
        assert!(StateVector::<f64>::new(ket(&[(1.0, 0.0)])).is_err());
    }

    #[test]
    fn density_validation() {
        let psi = StateVector::<f64>::plus();
        assert!(DensityMatrix::new(psi.projector().as_operator().clone()).is_ok());
        let bad = Operator::diagonal(&[cr(1.5), cr(-0.5)]).unwrap();
        assert!(DensityMatrix::new(bad).is_err());
        let bad_trace = Operator::diagonal(&[cr(0.5), cr(0.4)]).unwrap();
        assert!(DensityMatrix::new(bad_trace).is_err());
        let mixed = DensityMatrix::<f64>::maximally_mixed(4).unwrap();
        assert!(DensityMatrix::new(mixed.as_operator().clone()).is_ok());
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pure_and_mixed_paths_agree() {
        let psi = StateVector::<f64>::rotated_zero(PauliAxis::X, 0.7);
        let y = pauli(PauliAxis::Y);
        let a = expect(&y, &SystemState::Pure(psi.clone())).unwrap();
        let b = expect(&y, &SystemState::Mixed(psi.projector())).unwrap();
        assert!((a - b).norm() < 1e-15);
        assert!((a.re + 0.7f64.sin()).abs() < 1e-15);
    }
}
