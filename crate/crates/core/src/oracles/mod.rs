//! Closed-form reference values used to validate the numerical modules.

pub mod airy;
pub mod half_oscillator;
pub mod hermite;

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::model::{dimensionless_frame, Family, PotentialSpec};
use crate::quantum_moments::MomentSet;

pub use airy::{airy_zero, bouncing_energy, symmetric_linear_energy};
pub use half_oscillator::{half_oscillator_first_moment_limit, half_oscillator_moment, HalfMomentResult, MomentMethod};
pub use hermite::{hermite, hermite_at_zero};

/// First `count` bouncing-ball levels.
pub fn bouncing_energies(count: usize) -> Result<Vec<f64>> {
    if count > 20 {
        return Err(Error::OutOfRange(format!(
            "at most 20 bouncing levels, asked for {count}"
        )));
    }
    Ok((0..count).map(bouncing_energy).collect())
}

/// `E_n = (n + 1/2) √2` for `U = x²`.
pub fn harmonic_energy(n: usize) -> f64 {
    (n as f64 + 0.5) * SQRT_2
}

/// `(Δx)²(Δp)² = (n + 1/2)²` for the oscillator, in units of `ħ²`.
pub fn harmonic_product_original(n: usize) -> f64 {
    (n as f64 + 0.5).powi(2)
}

/// Level with quantum number `n >= 1` of a unit box (`A = 1`).
pub fn box_energy(n: usize, family: Family) -> Result<f64> {
    check_box(n, family)?;
    let width = if family == Family::SymmetricBox { 2.0 } else { 1.0 };
    let k = n as f64 * PI / width;
    Ok(0.5 * k * k)
}

fn check_box(n: usize, family: Family) -> Result<()> {
    if family.is_power() {
        return Err(Error::OutOfRange(format!("{family} is not a box family")));
    }
    if n == 0 {
        return Err(Error::BoxStateIndex);
    }
    Ok(())
}

/// Dimensionless moments of box state `n` (numbered from 1).
pub fn box_moments(n: usize, family: Family) -> Result<MomentSet> {
    let energy = box_energy(n, family)?;
    let spec = PotentialSpec::new(family, 0)?;
    let nn = (n * n) as f64 * PI * PI;
    let (x_mean, x2) = match family {
        Family::SymmetricBox => (0.0, 1.0 / 3.0 - 2.0 / nn),
        _ => (0.5, 1.0 / 3.0 - 1.0 / (2.0 * nn)),
    };
    Ok(MomentSet {
        n: Some(n - 1),
        frame: dimensionless_frame(&spec, energy)?,
        x_mean,
        x2,
        x4: None,
        p_mean: 0.0,
        p2: 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_products() {
        let sym = box_moments(1, Family::SymmetricBox).unwrap();
        assert!((sym.product() - (1.0 / 3.0 - 2.0 / (PI * PI))).abs() < 1e-15);
        assert!((sym.product() - 0.130_691).abs() < 1e-6);
        let far = box_moments(100_000, Family::SymmetricBox).unwrap();
        assert!((far.product() - 1.0 / 3.0).abs() < 1e-9);
        let half = box_moments(100_000, Family::HalfLineBox).unwrap();
        assert!((half.product() - 1.0 / 12.0).abs() < 1e-9);
        assert_eq!(box_moments(0, Family::SymmetricBox).unwrap_err(), Error::BoxStateIndex);
        assert!(box_moments(1, Family::SymmetricPower).is_err());
        assert!((sym.frame.p_max - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn harmonic_products() {
        assert_eq!(harmonic_product_original(0), 0.25);
        assert_eq!(harmonic_product_original(1), 2.25);
        assert_eq!(harmonic_product_original(3), 12.25);
    }

    #[test]
    fn bouncing_list() {
        let e = bouncing_energies(2).unwrap();
        assert!((e[0] - 1.85576).abs() < 1e-5);
        assert!((e[1] - 3.24461).abs() < 1e-5);
        assert!(bouncing_energies(21).is_err());
    }
}
