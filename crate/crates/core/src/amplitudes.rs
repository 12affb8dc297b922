//! Closed-form damping amplitudes for a single cavity mode leaking into a
//! flat-spectrum reservoir at rate `kappa`.
//!
//! In the wide-band limit a single excitation survives in the cavity with
//! amplitude `xi(t) = exp(-kappa t / 2)` and is found in the collective
//! one-excitation reservoir state with amplitude
//! `chi(t) = sqrt(1 - exp(-kappa t))`. An n-photon Fock state maps under the
//! same dynamics onto a binomial superposition over how many quanta have
//! leaked, with coefficients `b_{n,k} = sqrt(C(n,k)) xi^{n-k} chi^k` --
//! exactly the coefficients of a beam splitter of transmittance `xi^2`.

use crate::error::{Error, Result};

/// Largest photon number supported; binomial coefficients stay exact in f64.
pub const MAX_PHOTON_NUMBER: u32 = 12;

/// The damping amplitudes at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    /// Time, in units of `1/kappa` when `kappa = 1`.
    pub t: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Amplitude for the excitation to remain in the cavity.
    pub xi: f64,
    /// Amplitude for the excitation to sit in the collective one-excitation
    /// reservoir state.
    pub chi: f64,
    /// Amplitude for two quanta to sit in the collective two-excitation
    /// reservoir state; equals `chi^2` identically.
    pub vartheta: f64,
}

/// Evaluates the damping amplitudes at time `t >= 0` for decay rate
/// `kappa > 0`.
pub fn amplitudes(t: f64, kappa: f64) -> Result<AmplitudeSet> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::Domain(format!("decay rate must be finite and > 0, got {kappa}")));
    }
    let xi = (-kappa * t / 2.0).exp();
    let chi = (1.0 - (-kappa * t).exp()).sqrt();
    // 1 - xi^4 - 2 xi^2 chi^2 = (1 - xi^2)^2 analytically; clamp rounding.
    let vartheta = (1.0 - xi.powi(4) - 2.0 * xi * xi * chi * chi).max(0.0).sqrt();
    Ok(AmplitudeSet { t, kappa, xi, chi, vartheta })
}

/// Amplitude for an initial `n`-photon cavity Fock state to have transferred
/// exactly `k` quanta into the reservoir by time `t`:
/// `sqrt(C(n,k)) xi^{n-k} chi^k`.
pub fn damping_amplitude(n: u32, k: u32, t: f64, kappa: f64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("transferred quanta k={k} exceeds photon number n={n}")));
    }
    if n > MAX_PHOTON_NUMBER {
        return Err(Error::Domain(format!(
            "photon number n={n} exceeds the exact-binomial limit {MAX_PHOTON_NUMBER}"
        )));
    }
    let set = amplitudes(t, kappa)?;
    Ok((binomial(n, k) as f64).sqrt() * set.xi.powi((n - k) as i32) * set.chi.powi(k as i32))
}

/// Exact binomial coefficient for the small n used here.
fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - k + 1 + i) / (i + 1);
    }
    acc
}
