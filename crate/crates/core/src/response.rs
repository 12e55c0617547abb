//! Kubo linear response of a spin-½ in a static field.
//!
//! The unperturbed generator is `H₀ = −γB σz`; a perturbation
//! `−γB′₀ σ_α e^{−iωt}` couples along `α`. The response function is
//! `φ_{α,β}(t) = ⟨[γB′₀ σ_α, γ σ_β(t)]⟩ / i` (ħ = 1), averaged over the Gibbs
//! state of `H₀`, and the susceptibility its regularized Fourier–Laplace
//! transform `χ(ω) = ∫₀^∞ φ(τ) e^{−iωτ} e^{−ητ} dτ`.

use crate::error::{Error, Result};
use crate::oracle::{gibbs_state, heisenberg_op};
use crate::protocol::{eigenstates, gibbs_weights, run_protocol, CorrelationSpec};
use crate::qcore::{expect, pauli, ConstHamiltonian, DensityMatrix, Dynamics, Operator, PauliAxis, SystemState};
use crate::scalar::{c, cis, cr, Real, C};

/// Default adiabatic regularization rate, 1/s.
pub const DEFAULT_ETA: f64 = 50.0;

/// Relative change between successive Simpson refinements that counts as
/// converged.
pub const QUADRATURE_REL_TOL: f64 = 1e-8;

/// Upper bound on Simpson intervals.
pub const QUADRATURE_MAX_POINTS: usize = 1 << 20;

/// Truncation point of the regularized integral satisfies `e^{−ηT} < 1e−10`.
const TAIL_CUTOFF: f64 = 1e-10;

/// Absolute tolerance on the imaginary residue of real-valued expectations.
const IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseParams<R: Real> {
    /// Gyromagnetic ratio, rad/s per field unit.
    pub gamma: R,
    /// Static field `B`.
    pub b_field: R,
    /// Perturbation amplitude `B′₀`.
    pub bp0: R,
    /// Inverse temperature (ħ = 1); `+∞` is the ground state.
    pub beta: R,
    /// Regularization rate η, 1/s.
    pub eta: R,
    /// Probe frequency grid, rad/s.
    pub omega: Vec<R>,
}

impl<R: Real> ResponseParams<R> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma", self.gamma), ("b_field", self.b_field), ("bp0", self.bp0)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if self.beta.is_nan() || self.beta < R::zero() {
            return Err(Error::InvalidParameter("beta must be >= 0".into()));
        }
        if !(self.eta > R::zero()) || !self.eta.is_finite() {
            return Err(Error::InvalidParameter("eta must be positive and finite".into()));
        }
        if self.omega.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("omega grid must be finite".into()));
        }
        if self.omega.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("omega grid must be strictly increasing".into()));
        }
        Ok(())
    }

    /// `H₀ = −γB σz`.
    pub fn unperturbed(&self) -> ConstHamiltonian<R> {
        ConstHamiltonian::along(PauliAxis::Z, -self.gamma * self.b_field)
    }

    pub fn thermal_state(&self) -> Result<DensityMatrix<R>> {
        gibbs_state(&self.unperturbed(), self.beta)
    }

    /// Larmor frequency `Ω = 2|γB|` of the unperturbed spin.
    pub fn larmor(&self) -> R {
        R::lit(2.0) * (self.gamma * self.b_field).abs()
    }
}

fn real_part<R: Real>(z: C<R>, scale: R) -> Result<R> {
    let tol = R::lit(IMAG_TOL) * scale.max(R::one());
    if z.im.abs() >= tol {
        return Err(Error::ImaginaryResidue(z.im.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(z.re)
}

/// Precomputed pieces of `φ_{α,β}` for repeated evaluation.
struct ResponseKernel<R: Real> {
    thermal: SystemState<R>,
    sigma_alpha: Operator<R>,
    beta_axis: PauliAxis,
    dynamics: Dynamics<R>,
    prefactor: R,
}

impl<R: Real> ResponseKernel<R> {
    fn new(alpha: PauliAxis, beta_axis: PauliAxis, params: &ResponseParams<R>) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            thermal: SystemState::Mixed(params.thermal_state()?),
            sigma_alpha: pauli(alpha),
            beta_axis,
            dynamics: Dynamics::Const(params.unperturbed()),
            prefactor: params.gamma * params.gamma * params.bp0,
        })
    }

    fn phi(&self, t: R) -> Result<R> {
        let sb = heisenberg_op(self.beta_axis, t, &self.dynamics)?;
        let comm = self.sigma_alpha.commutator(&sb)?;
        // ⟨[A, B]⟩ / i
        let v = expect(&comm, &self.thermal)? * c(R::zero(), -R::one());
        Ok(self.prefactor * real_part(v, R::one())?)
    }
}

/// `φ_{α,β}(t)`, the thermal commutator response (real).
pub fn response_function<R: Real>(
    alpha: PauliAxis,
    beta_axis: PauliAxis,
    t: R,
    params: &ResponseParams<R>,
) -> Result<R> {
    if !(t >= R::zero()) {
        return Err(Error::InvalidParameter("response time must be >= 0".into()));
    }
    ResponseKernel::new(alpha, beta_axis, params)?.phi(t)
}

/// `φ_{α,β}(t)` assembled from ancilla-protocol runs on the two eigenstates
/// of `H₀`: with `g_k = ⟨σ_β(t) σ_α⟩_k`, `⟨[σ_α, σ_β(t)]⟩ = −2i Σ p_k Im g_k`.
pub fn response_function_via_protocol<R: Real>(
    alpha: PauliAxis,
    beta_axis: PauliAxis,
    t: R,
    params: &ResponseParams<R>,
) -> Result<R> {
    params.validate()?;
    if !(t >= R::zero()) {
        return Err(Error::InvalidParameter("response time must be >= 0".into()));
    }
    let h = params.unperturbed();
    let (p0, p1) = gibbs_weights(&h, params.beta)?;
    let spec = CorrelationSpec::new(vec![(alpha, R::zero()), (beta_axis, t)])?;
    let dynamics = Dynamics::Const(h);
    let [(_, ground), (_, excited)] = eigenstates(&h);
    let mut im = R::zero();
    for (p, state) in [(p0, ground), (p1, excited)] {
        if p > R::zero() {
            im = im + p * run_protocol(&spec, &dynamics, &SystemState::Pure(state))?.f.im;
        }
    }
    Ok(-R::lit(2.0) * params.gamma * params.gamma * params.bp0 * im)
}

/// Composite Simpson rule on `[0, upper]` with interval halving until the
/// relative change drops below [`QUADRATURE_REL_TOL`].
fn simpson_refine<R: Real>(
    upper: R,
    initial_intervals: usize,
    mut integrand: impl FnMut(R) -> Result<C<R>>,
) -> Result<C<R>> {
    let mut n = initial_intervals.max(2).next_power_of_two();
    if n > QUADRATURE_MAX_POINTS {
        return Err(Error::NoConvergence { points: n, change: f64::NAN });
    }
    let nr = |k: usize| R::from_usize(k).expect("count representable");
    let three = R::lit(3.0);
    let mut h = upper / nr(n);
    let ends = integrand(R::zero())? + integrand(upper)?;
    let mut odd = cr(R::zero());
    let mut even = cr(R::zero());
    for k in 1..n {
        let v = integrand(nr(k) * h)?;
        if k % 2 == 1 {
            odd = odd + v;
        } else {
            even = even + v;
        }
    }
    let mut estimate = (ends + odd * R::lit(4.0) + even * R::lit(2.0)) * (h / three);
    let mut last_change = f64::NAN;
    loop {
        let next_n = 2 * n;
        if next_n > QUADRATURE_MAX_POINTS {
            return Err(Error::NoConvergence { points: n, change: last_change });
        }
        let next_h = h / R::lit(2.0);
        even = even + odd;
        odd = cr(R::zero());
        for k in (1..next_n).step_by(2) {
            odd = odd + integrand(nr(k) * next_h)?;
        }
        let next = (ends + odd * R::lit(4.0) + even * R::lit(2.0)) * (next_h / three);
        let change = (next - estimate).norm();
        if change <= R::lit(QUADRATURE_REL_TOL) * next.norm() {
            return Ok(next);
        }
        n = next_n;
        h = next_h;
        last_change = change.to_f64().unwrap_or(f64::NAN);
        estimate = next;
    }
}

/// `χ_{α,β}(ω) = ∫₀^T φ(τ) e^{−iωτ} e^{−ητ} dτ` with `e^{−ηT} < 1e−10`.
pub fn susceptibility<R: Real>(
    alpha: PauliAxis,
    beta_axis: PauliAxis,
    omega: R,
    params: &ResponseParams<R>,
) -> Result<C<R>> {
    if !omega.is_finite() {
        return Err(Error::InvalidParameter("omega must be finite".into()));
    }
    let kernel = ResponseKernel::new(alpha, beta_axis, params)?;
    let eta = params.eta;
    let upper = -R::lit(TAIL_CUTOFF).ln() / eta;
    // Resolve the fastest oscillation with at least 16 samples per period.
    let fastest = omega.abs() + params.larmor() + eta;
    let per_radian = R::lit(16.0) / (R::lit(2.0) * R::PI());
    let initial = (upper * fastest * per_radian)
        .ceil()
        .to_usize()
        .unwrap_or(QUADRATURE_MAX_POINTS)
        .max(16);
    simpson_refine(upper, initial, |tau| {
        let phi = kernel.phi(tau)?;
        Ok(cis(-omega * tau) * (phi * (-eta * tau).exp()))
    })
}

/// `χ` over every frequency in `params.omega`.
pub fn susceptibility_sweep<R: Real>(
    alpha: PauliAxis,
    beta_axis: PauliAxis,
    params: &ResponseParams<R>,
) -> Result<Vec<C<R>>> {
    params
        .omega
        .iter()
        .map(|w| susceptibility(alpha, beta_axis, *w, params))
        .collect()
}

/// `μ_β(t) = μ_β(0) + χ_{α,β}(ω) e^{−iωt}` with `μ_β(0) = γ⟨σ_β⟩` thermal.
pub fn corrected_moment<R: Real>(
    alpha: PauliAxis,
    beta_axis: PauliAxis,
    omega: R,
    t: R,
    params: &ResponseParams<R>,
) -> Result<C<R>> {
    params.validate()?;
    let thermal = SystemState::Mixed(params.thermal_state()?);
    let mu0 = params.gamma * real_part(expect(&pauli(beta_axis), &thermal)?, R::one())?;
    let chi = susceptibility(alpha, beta_axis, omega, params)?;
    Ok(cr(mu0) + chi * cis(-omega * t))
}

/// Real perturbation profile `F(t)` sampled on a uniform grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationEnvelope<R: Real> {
    dt: R,
    samples: Vec<R>,
}

impl<R: Real> PerturbationEnvelope<R> {
    pub fn new(dt: R, samples: Vec<R>) -> Result<Self> {
        if !(dt > R::zero()) || !dt.is_finite() {
            return Err(Error::InvalidParameter("envelope spacing must be positive".into()));
        }
        if samples.is_empty() || samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("envelope samples must be finite and non-empty".into()));
        }
        Ok(Self { dt, samples })
    }

    /// Samples `f` at `0, dt, …, n·dt`.
    pub fn from_fn(dt: R, n: usize, f: impl Fn(R) -> R) -> Result<Self> {
        let samples = (0..=n)
            .map(|k| f(R::from_usize(k).expect("index representable") * dt))
            .collect();
        Self::new(dt, samples)
    }

    pub fn end(&self) -> R {
        R::from_usize(self.samples.len() - 1).expect("len representable") * self.dt
    }

    /// Linear interpolation; errors outside `[0, end]`.
    pub fn value(&self, t: R) -> Result<R> {
        let slack = self.dt * R::lit(1e-9);
        if t < -slack || t > self.end() + slack {
            return Err(Error::EnvelopeDomain(t.to_f64().unwrap_or(f64::NAN)));
        }
        let x = (t / self.dt).max(R::zero());
        let last = self.samples.len() - 1;
        let k = x.floor().to_usize().unwrap_or(last).min(last);
        if k == last {
            return Ok(self.samples[last]);
        }
        let w = x - R::from_usize(k).expect("index representable");
        Ok(self.samples[k] + (self.samples[k + 1] - self.samples[k]) * w)
    }
}

/// `ΔB⁽²⁾(t)` on the thermal state of `params`.
///
/// See [`second_order_correction_in`] for the integral; the thermal state of
/// `H₀` makes it vanish for single-axis perturbations in this model, so the
/// state-explicit form is the one of practical interest.
pub fn second_order_correction<R: Real>(
    b_axis: PauliAxis,
    a_axis: PauliAxis,
    f: &PerturbationEnvelope<R>,
    t: R,
    params: &ResponseParams<R>,
    grid_steps: usize,
) -> Result<R> {
    params.validate()?;
    let state = SystemState::Mixed(params.thermal_state()?);
    second_order_correction_in(&state, b_axis, a_axis, f, t, params, grid_steps)
}

/// `ΔB⁽²⁾(t) = ∫₀^t dt₁ ∫₀^{t₁} dt₂ ⟨[B(t), [A(t₁), A(t₂)]]⟩ F(t₁) F(t₂)` with
/// `A = σ_a`, `B = σ_b` evolving under `H₀`, integrated by nested trapezoids
/// over `grid_steps` uniform intervals of `[0, t]`.
pub fn second_order_correction_in<R: Real>(
    state: &SystemState<R>,
    b_axis: PauliAxis,
    a_axis: PauliAxis,
    f: &PerturbationEnvelope<R>,
    t: R,
    params: &ResponseParams<R>,
    grid_steps: usize,
) -> Result<R> {
    params.validate()?;
    if grid_steps == 0 {
        return Err(Error::InvalidParameter("grid_steps must be >= 1".into()));
    }
    if !(t >= R::zero()) {
        return Err(Error::InvalidParameter("t must be >= 0".into()));
    }
    if t == R::zero() {
        return Ok(R::zero());
    }
    let dynamics = Dynamics::Const(params.unperturbed());
    let h = t / R::from_usize(grid_steps).expect("count representable");
    let times: Vec<R> = (0..=grid_steps)
        .map(|k| R::from_usize(k).expect("index representable") * h)
        .collect();
    let a_ops = times
        .iter()
        .map(|tk| heisenberg_op(a_axis, *tk, &dynamics))
        .collect::<Result<Vec<_>>>()?;
    let f_vals = times.iter().map(|tk| f.value(*tk)).collect::<Result<Vec<_>>>()?;
    let b_t = heisenberg_op(b_axis, t, &dynamics)?;

    let half = R::lit(0.5);
    let trap_weight = |k: usize, last: usize| if k == 0 || k == last { half } else { R::one() };

    let mut outer = cr(R::zero());
    for i in 1..=grid_steps {
        let mut inner = cr(R::zero());
        for j in 0..=i {
            let inner_comm = a_ops[i].commutator(&a_ops[j])?;
            let dc = b_t.commutator(&inner_comm)?;
            let g = expect(&dc, state)? * (f_vals[i] * f_vals[j]);
            inner = inner + g * trap_weight(j, i);
        }
        outer = outer + inner * (h * trap_weight(i, grid_steps));
    }
    let total = outer * h;
    real_part(total, total.re.abs())
}
