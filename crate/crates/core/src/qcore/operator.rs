use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{c, cr, Real, C};

use super::PauliAxis;

/// Dense square complex matrix of dimension 2 (one qubit) or 4 (two qubits),
/// stored row-major.
#[derive(Clone, PartialEq)]
pub struct Operator<R: Real> {
    dim: usize,
    entries: Vec<C<R>>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

impl<R: Real> Operator<R> {
    pub fn from_entries(dim: usize, entries: Vec<C<R>>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "{} entries for a {dim}x{dim} operator",
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![C::new(R::zero(), R::zero()); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for k in 0..dim {
            m.entries[k * dim + k] = cr(R::one());
        }
        Ok(m)
    }

    /// Diagonal operator; `diag.len()` must be 2 or 4.
    pub fn diagonal(diag: &[C<R>]) -> Result<Self> {
        let dim = diag.len();
        let mut m = Self::zeros(dim)?;
        for (k, d) in diag.iter().enumerate() {
            m.entries[k * dim + k] = *d;
        }
        Ok(m)
    }

    pub(crate) fn mat2(a: C<R>, b: C<R>, cc: C<R>, d: C<R>) -> Self {
        Self {
            dim: 2,
            entries: vec![a, b, cc, d],
        }
    }

    pub(crate) fn id2() -> Self {
        Self::mat2(cr(R::one()), cr(R::zero()), cr(R::zero()), cr(R::one()))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C<R> {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, v: C<R>) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[C<R>] {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for r in 0..n {
            for col in 0..n {
                out.entries[col * n + r] = self.entries[r * n + col].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C<R> {
        (0..self.dim).map(|k| self.get(k, k)).fold(cr(R::zero()), |a, b| a + b)
    }

    pub fn scale(&self, s: C<R>) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| *e * s).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.dim, self.dim, rhs.dim, rhs.dim
            )));
        }
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for r in 0..n {
            for col in 0..n {
                let mut acc = cr(R::zero());
                for k in 0..n {
                    acc = acc + self.entries[r * n + k] * rhs.entries[k * n + col];
                }
                out.entries[r * n + col] = acc;
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C<R>, C<R>) -> C<R>) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension(format!(
                "operand dimensions {} and {} differ",
                self.dim, rhs.dim
            )));
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    /// Kronecker product `self ⊗ rhs`; only 2⊗2 is representable.
    pub fn tensor(&self, rhs: &Self) -> Result<Self> {
        if self.dim != 2 || rhs.dim != 2 {
            return Err(Error::Dimension(format!(
                "tensor product {}x{} would exceed dimension 4",
                self.dim, rhs.dim
            )));
        }
        let mut out = Self::zeros(4)?;
        for ar in 0..2 {
            for ac in 0..2 {
                let a = self.get(ar, ac);
                for br in 0..2 {
                    for bc in 0..2 {
                        out.set(ar * 2 + br, ac * 2 + bc, a * rhs.get(br, bc));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self, rhs]`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        let ab = self.try_mul(rhs)?;
        let ba = rhs.try_mul(self)?;
        ab.zip_with(&ba, |x, y| x - y)
    }

    /// Largest entry-wise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<R> {
        let d = self.zip_with(rhs, |x, y| x - y)?;
        Ok(d.max_abs())
    }

    pub fn max_abs(&self) -> R {
        self.entries
            .iter()
            .map(|e| e.norm())
            .fold(R::zero(), R::max)
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_error(&self) -> R {
        let p = self.dagger().try_mul(self).expect("same dimension");
        p.max_abs_diff(&Self::identity(self.dim).expect("valid dim"))
            .expect("same dimension")
    }

    /// `‖H − H†‖_max`.
    pub fn hermiticity_error(&self) -> R {
        self.max_abs_diff(&self.dagger()).expect("same dimension")
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }
}

impl<R: Real> Mul for &Operator<R> {
    type Output = Operator<R>;

    /// Panics on a dimension mismatch; use [`Operator::try_mul`] for the
    /// fallible form.
    fn mul(self, rhs: Self) -> Operator<R> {
        self.try_mul(rhs).expect("operator dimension mismatch")
    }
}

impl<R: Real> Add for &Operator<R> {
    type Output = Operator<R>;
    fn add(self, rhs: Self) -> Operator<R> {
        self.zip_with(rhs, |a, b| a + b)
            .expect("operator dimension mismatch")
    }
}

impl<R: Real> Sub for &Operator<R> {
    type Output = Operator<R>;
    fn sub(self, rhs: Self) -> Operator<R> {
        self.zip_with(rhs, |a, b| a - b)
            .expect("operator dimension mismatch")
    }
}

impl<R: Real> fmt::Debug for Operator<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{})[", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for col in 0..self.dim {
                let e = self.get(r, col);
                write!(f, "{:+.6e}{:+.6e}i  ", e.re, e.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrix for `axis`.
pub fn pauli<R: Real>(axis: PauliAxis) -> Operator<R> {
    let z = cr(R::zero());
    let one = cr(R::one());
    match axis {
        PauliAxis::X => Operator::mat2(z, one, one, z),
        PauliAxis::Y => Operator::mat2(z, c(R::zero(), -R::one()), c(R::zero(), R::one()), z),
        PauliAxis::Z => Operator::mat2(one, z, z, -one),
    }
}

/// Largest entry deviation between `a` and `b` after removing a global phase.
///
/// The phase is fixed from the first entry of `a` whose modulus is maximal.
pub fn max_diff_up_to_phase<R: Real>(a: &Operator<R>, b: &Operator<R>) -> Result<R> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "phase comparison of {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let mut idx = 0;
    let mut best = R::zero();
    for (k, e) in a.entries().iter().enumerate() {
        if e.norm() > best {
            best = e.norm();
            idx = k;
        }
    }
    if best == R::zero() {
        return Ok(b.max_abs());
    }
    let ratio = b.entries()[idx] / a.entries()[idx];
    let n = ratio.norm();
    let phase = if n > R::zero() { ratio / n } else { cr(R::one()) };
    a.scale(phase).max_abs_diff(b)
}
