//! Susceptibility spectra.

use std::io::Write;

use anyhow::{bail, Result};
use rayon::prelude::*;
use tcorr::qcore::PauliAxis;
use tcorr::response::{susceptibility, ResponseParams};
use tcorr::Complex64;

/// `start, start+step, …` up to `stop` inclusive.
pub fn omega_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if ![start, stop, step].iter().all(|v| v.is_finite()) {
        bail!("omega grid: values must be finite");
    }
    if !(step > 0.0) {
        bail!("--omega-step: must be > 0");
    }
    if stop < start {
        bail!("--omega-stop: must be >= --omega-start");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

pub fn spectrum(alpha: PauliAxis, beta: PauliAxis, params: &ResponseParams<f64>) -> Result<Vec<Complex64>> {
    params.validate()?;
    Ok(params
        .omega
        .par_iter()
        .map(|w| susceptibility(alpha, beta, *w, params))
        .collect::<Result<Vec<_>, _>>()?)
}

pub fn write_spectrum(omega: &[f64], chi: &[Complex64], mut out: impl Write) -> Result<()> {
    writeln!(out, "omega_rad_s,re_chi,im_chi")?;
    for (w, c) in omega.iter().zip(chi) {
        writeln!(out, "{w:.16e},{:.16e},{:.16e}", c.re, c.im)?;
    }
    Ok(())
}
