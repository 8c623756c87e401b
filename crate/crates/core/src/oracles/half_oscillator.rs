//! Moments of oscillator eigenfunctions restricted to `[0, ∞)` with doubled
//! normalization ("half wave functions").
//!
//! With `X = x/A_n`, `A_n² = (2n + 1)/ω` the turning point of level `n`,
//!
//! ```text
//! <X^k>_n = (2n+1)^(-k/2) / (sqrt(π) 2^(n-1) n!) ∫_0^∞ y^k e^(-y²) H_n(y)² dy.
//! ```
//!
//! Odd `n` are exactly the levels of the half-line oscillator: its state
//! `m` is half wave function `2m + 1`.
//!
//! The closed form usually quoted for the even-state first moment,
//! `(2/sqrt(π)) (2m+1)/sqrt(4m+1) · c_m` with `c_m = (2m)!/(2^{2m} (m!)²)`,
//! does not match direct integration. The integral identities behind it give
//! `<X>_{2m} = sqrt(4m+1) c_m / sqrt(π)`; the quoted form is larger by the
//! factor `2(2m+1)/(4m+1)` (exactly 2 at `m = 0`). Both tend to `2/π`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::oracles::hermite::{hermite_coefficients, hermite_function, ln_norm_squared};
use crate::quadrature::DoubleExponential;
use crate::special::{central_binomial_ratio, gamma};

pub const MAX_LEVEL: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfMomentResult {
    pub n: u32,
    pub k: u32,
    pub value: f64,
    pub method: MomentMethod,
}

pub fn half_oscillator_moment(n: u32, k: u32, method: MomentMethod) -> Result<HalfMomentResult> {
    if n > MAX_LEVEL {
        return Err(Error::OutOfRange(format!("half-oscillator level {n} > {MAX_LEVEL}")));
    }
    if !matches!(k, 1 | 2 | 4) {
        return Err(Error::UnsupportedMoment(k));
    }
    let value = match method {
        MomentMethod::ClosedForm => closed_form(n, k),
        MomentMethod::Quadrature => quadrature(n, k)?,
    };
    Ok(HalfMomentResult { n, k, value, method })
}

fn closed_form(n: u32, k: u32) -> f64 {
    match k {
        2 => 0.5,
        4 => fourth_moment(n),
        _ if n.is_multiple_of(2) => even_first_moment_quoted(n / 2),
        _ => odd_first_moment(n / 2),
    }
}

fn quadrature(n: u32, k: u32) -> Result<f64> {
    // h_n² carries e^{-y²}; beyond sqrt(2n+1) + 12 it is below 1e-60
    let upper = (2.0 * n as f64 + 1.0).sqrt() + 12.0;
    let de = DoubleExponential::new(12, 1e-14);
    let integral = de.integrate_fn(0.0, upper, |y| y.powi(k as i32) * hermite_function(n, y).powi(2))?;
    Ok(2.0 * (2.0 * n as f64 + 1.0).powf(-(k as f64) / 2.0) * integral)
}

/// Same moment from the polynomial expansion of `H_n²` and
/// `∫_0^∞ y^m e^{-αy²} dy = Γ((m+1)/2) / (2 α^{(m+1)/2})`.
/// Cancellation limits it to small `n`.
pub fn half_oscillator_moment_tabled(n: u32, k: u32) -> Result<f64> {
    if n > 10 {
        return Err(Error::OutOfRange(format!(
            "tabled-integral route limited to n <= 10, got {n}"
        )));
    }
    let c = hermite_coefficients(n);
    let mut total = 0.0;
    for (i, a) in c.iter().enumerate() {
        for (j, b) in c.iter().enumerate() {
            if *a != 0.0 && *b != 0.0 {
                total += a * b * gaussian_half_moment(i as u32 + j as u32 + k, 1.0);
            }
        }
    }
    let ln_norm = ln_norm_squared(n);
    Ok(2.0 * (2.0 * n as f64 + 1.0).powf(-(k as f64) / 2.0) * total / ln_norm.exp())
}

/// `∫_0^∞ x^m e^{-αx²} dx`.
pub fn gaussian_half_moment(m: u32, alpha: f64) -> f64 {
    let s = (m as f64 + 1.0) / 2.0;
    gamma(s) / (2.0 * alpha.powf(s))
}

/// `<X⁴>_n = (3/2)(n² + n + 1/2)/(2n + 1)²`, valid for every `n`.
pub fn fourth_moment(n: u32) -> f64 {
    let nf = n as f64;
    1.5 * (nf * nf + nf + 0.5) / (2.0 * nf + 1.0).powi(2)
}

/// `<X>_{2m+1} = (2/sqrt(π)) (2m+1)/sqrt(4m+3) c_m`; also the first moment of
/// half-line oscillator level `m`.
pub fn odd_first_moment(m: u32) -> f64 {
    let mf = m as f64;
    2.0 / PI.sqrt() * (2.0 * mf + 1.0) / (4.0 * mf + 3.0).sqrt() * central_binomial_ratio(m)
}

/// The commonly quoted even-state form; see the module docs.
pub fn even_first_moment_quoted(m: u32) -> f64 {
    let mf = m as f64;
    2.0 / PI.sqrt() * (2.0 * mf + 1.0) / (4.0 * mf + 1.0).sqrt() * central_binomial_ratio(m)
}

/// `<X>_{2m} = sqrt(4m+1) c_m / sqrt(π)`, consistent with direct integration.
pub fn even_first_moment_exact(m: u32) -> f64 {
    (4.0 * m as f64 + 1.0).sqrt() * central_binomial_ratio(m) / PI.sqrt()
}

/// Ratio of the quoted even-state form to the exact one: `2(2m+1)/(4m+1)`.
pub fn even_first_moment_discrepancy(m: u32) -> f64 {
    let mf = m as f64;
    2.0 * (2.0 * mf + 1.0) / (4.0 * mf + 1.0)
}

/// Large-level limit of the first moment, `2/π`.
///
/// Also checks `sqrt(n) (2n)!/(2^{2n} (n!)²) → 1/sqrt(π)` at `n = 500`,
/// which is what the limit rests on.
pub fn half_oscillator_first_moment_limit() -> Result<f64> {
    let ratio = central_binomial_limit_ratio(500);
    let target = 1.0 / PI.sqrt();
    if (ratio - target).abs() > 1e-3 {
        return Err(Error::OutOfRange(format!(
            "sqrt(n) c_n at n = 500 is {ratio}, expected {target}"
        )));
    }
    Ok(2.0 / PI)
}

/// `sqrt(n) (2n)! / (2^{2n} (n!)²)`.
pub fn central_binomial_limit_ratio(n: u32) -> f64 {
    (n as f64).sqrt() * central_binomial_ratio(n)
}
