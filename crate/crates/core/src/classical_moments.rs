//! Classical averages from the time-spent density `p(x) ∝ 1/sqrt(E - U(x))`.
//!
//! A phase-space average at fixed energy reduces to a position integral,
//!
//! ```text
//! <f> = 1/2 ∫ dX p(X) [ f(X, -P(X)) + f(X, +P(X)) ],   P(X) = sqrt(1 - |X|^b),
//! ```
//!
//! in the dimensionless frame. For `|x|^b` the weight is `(1 - |X|^b)^(-1/2)`,
//! independent of `E`, and its moments are ratios of Beta functions.

use crate::error::{Error, Result};
use crate::model::{dimensionless_frame, Family, Frame, PotentialSpec};
use crate::quadrature::DoubleExponential;
use crate::quantum_moments::MomentSet;
use crate::special::{beta, ln_beta};

/// `1 - (1 - d)^b` without cancellation for small `d`.
fn one_minus_power(d: f64, b: f64) -> f64 {
    -(b * (-d).ln_1p()).exp_m1()
}

#[derive(Debug, Clone, Copy)]
pub struct ClassicalDensity {
    spec: PotentialSpec,
    frame: Frame,
    normalization: f64,
    quadrature: DoubleExponential,
}

impl ClassicalDensity {
    pub fn new(spec: &PotentialSpec, energy: f64) -> Result<Self> {
        let frame = dimensionless_frame(spec, energy)?;
        let mut density = Self {
            spec: *spec,
            frame,
            normalization: 1.0,
            quadrature: DoubleExponential::default(),
        };
        density.normalization = density.integrate(|_, _| 1.0)?;
        Ok(density)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Support in `X`.
    pub fn support(&self) -> (f64, f64) {
        if self.spec.is_symmetric() {
            (-1.0, 1.0)
        } else {
            (0.0, 1.0)
        }
    }

    /// Numerically computed `∫ (1 - |X|^b)^(-1/2) dX` over the support.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Closed form of [`Self::normalization`]: `B(1/b, 1/2)/b` per half-line.
    pub fn closed_form_normalization(&self) -> f64 {
        let half = match self.spec.exponent() {
            Some(b) => beta(1.0 / b as f64, 0.5) / b as f64,
            None => 1.0,
        };
        if self.spec.is_symmetric() {
            2.0 * half
        } else {
            half
        }
    }

    /// Normalized density at `X`; zero outside the support.
    pub fn density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        match self.spec.exponent() {
            Some(b) => {
                let gap = 1.0 - x.abs().powi(b as i32);
                if gap <= 0.0 {
                    0.0
                } else {
                    gap.powf(-0.5) / self.normalization
                }
            }
            None => 1.0 / self.normalization,
        }
    }

    /// `<f(X, P)>` under the classical phase-space density.
    pub fn average<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64,
    {
        Ok(self.integrate(|x, p| 0.5 * (f(x, -p) + f(x, p)))? / self.normalization)
    }

    // ∫ w(X) g(X, P(X)) dX over the support, unnormalized.
    fn integrate<G>(&self, g: G) -> Result<f64>
    where
        G: Fn(f64, f64) -> f64,
    {
        let de = &self.quadrature;
        match self.spec.exponent() {
            Some(b) => {
                let b = b as f64;
                // distance from |X| = 1 is `d`; 1 - |X|^b formed from it
                let weighted = |x: f64, d: f64| {
                    let gap = one_minus_power(d, b);
                    if gap <= 0.0 {
                        return 0.0;
                    }
                    g(x, gap.sqrt()) / gap.sqrt()
                };
                let right = de.integrate(0.0, 1.0, |x, _, hi| weighted(x, hi))?.value;
                if self.spec.is_symmetric() {
                    let left = de.integrate(-1.0, 0.0, |x, lo, _| weighted(x, lo))?.value;
                    Ok(left + right)
                } else {
                    Ok(right)
                }
            }
            None => {
                let (lo, hi) = self.support();
                Ok(de.integrate(lo, hi, |x, _, _| g(x, 1.0))?.value)
            }
        }
    }
}

/// Classical phase-space average of `f(X, P)` at energy `E`.
pub fn classical_average<F>(spec: &PotentialSpec, energy: f64, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    ClassicalDensity::new(spec, energy)?.average(f)
}

/// `<X^k>` for `|x|^b`: `B((k+1)/b, 1/2) / B(1/b, 1/2)`, or zero for odd `k`
/// on the symmetric family.
pub fn classical_moment_closed_form(b: u32, family: Family, k: u32) -> Result<f64> {
    if !family.is_power() {
        return Err(Error::NotPowerFamily);
    }
    if b == 0 {
        return Err(Error::InvalidExponent(0));
    }
    if family == Family::SymmetricPower && k % 2 == 1 {
        return Ok(0.0);
    }
    let b = b as f64;
    Ok((ln_beta((k as f64 + 1.0) / b, 0.5) - ln_beta(1.0 / b, 0.5)).exp())
}

/// Classical dimensionless moments and dispersion product at energy `E`.
pub fn classical_dispersion_product(spec: &PotentialSpec, energy: f64) -> Result<MomentSet> {
    let density = ClassicalDensity::new(spec, energy)?;
    Ok(MomentSet {
        n: None,
        frame: density.frame,
        x_mean: density.average(|x, _| x)?,
        x2: density.average(|x, _| x * x)?,
        x4: Some(density.average(|x, _| x.powi(4))?),
        p_mean: density.average(|_, p| p)?,
        p2: density.average(|_, p| p * p)?,
    })
}

/// Classical momentum density `p(P) ∝ 1/|F(x(P))| ∝ (1 - P²)^(-(b-1)/b)`.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalMomentumDensity {
    exponent: f64,
    normalization: f64,
    quadrature: DoubleExponential,
}

pub fn classical_momentum_density(spec: &PotentialSpec, energy: f64) -> Result<ClassicalMomentumDensity> {
    let b = spec.exponent().ok_or(Error::NotPowerFamily)?;
    dimensionless_frame(spec, energy)?;
    let mut density = ClassicalMomentumDensity {
        exponent: (b as f64 - 1.0) / b as f64,
        normalization: 1.0,
        quadrature: DoubleExponential::default(),
    };
    density.normalization = density.integrate(|_| 1.0)?;
    Ok(density)
}

impl ClassicalMomentumDensity {
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `B(1/2, 1 - α)` with `α = (b - 1)/b`.
    pub fn closed_form_normalization(&self) -> f64 {
        beta(0.5, 1.0 - self.exponent)
    }

    pub fn density(&self, p: f64) -> f64 {
        if p.abs() >= 1.0 {
            return 0.0;
        }
        (1.0 - p * p).powf(-self.exponent) / self.normalization
    }

    pub fn average<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        Ok(self.integrate(g)? / self.normalization)
    }

    fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let alpha = self.exponent;
        if alpha == 0.0 {
            return self.quadrature.integrate_fn(-1.0, 1.0, g);
        }
        // d = distance to the nearer of P = ±1, 1 - P² = d (2 - d)
        let weight = |d: f64| (d * (2.0 - d)).powf(-alpha);
        let right = self.quadrature.integrate(0.0, 1.0, |p, _, hi| g(p) * weight(hi))?;
        let left = self.quadrature.integrate(-1.0, 0.0, |p, lo, _| g(p) * weight(lo))?;
        Ok(left.value + right.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn oscillator_position_moment() {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        let v = classical_average(&spec, 3.7, |x, _| x * x).unwrap();
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn bouncing_ball_mean() {
        let spec = PotentialSpec::half_line_power(1).unwrap();
        let v = classical_average(&spec, 1.0, |x, _| x).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn momentum_mean_vanishes() {
        for spec in [
            PotentialSpec::symmetric_power(3).unwrap(),
            PotentialSpec::half_line_power(5).unwrap(),
            PotentialSpec::half_line_box(1.0).unwrap(),
        ] {
            assert_eq!(classical_average(&spec, 2.0, |_, p| p).unwrap(), 0.0);
        }
    }

    #[test]
    fn closed_forms() {
        let v = classical_moment_closed_form(1, Family::HalfLinePower, 2).unwrap();
        assert!((v - 8.0 / 15.0).abs() < 1e-14);
        let v = classical_moment_closed_form(2, Family::SymmetricPower, 4).unwrap();
        assert!((v - 3.0 / 8.0).abs() < 1e-14);
        let v = classical_moment_closed_form(2, Family::HalfLinePower, 1).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-14);
        assert_eq!(classical_moment_closed_form(3, Family::SymmetricPower, 3).unwrap(), 0.0);
        assert_eq!(
            classical_moment_closed_form(2, Family::SymmetricBox, 2),
            Err(Error::NotPowerFamily)
        );
    }

    #[test]
    fn dispersion_products() {
        let cases = [
            (PotentialSpec::symmetric_box(1.0).unwrap(), 1.0 / 3.0),
            (PotentialSpec::half_line_box(1.0).unwrap(), 1.0 / 12.0),
            (PotentialSpec::half_line_power(1).unwrap(), 4.0 / 135.0),
            (PotentialSpec::symmetric_power(2).unwrap(), 0.25),
            (PotentialSpec::symmetric_power(1).unwrap(), 8.0 / 45.0),
        ];
        for (spec, expected) in cases {
            let m = classical_dispersion_product(&spec, 1.7).unwrap();
            assert!(
                (m.product() - expected).abs() < 1e-9,
                "{}: {}",
                spec.label(),
                m.product()
            );
        }
    }

    #[test]
    fn normalization_matches_beta() {
        for b in 1..=10 {
            for spec in [
                PotentialSpec::symmetric_power(b).unwrap(),
                PotentialSpec::half_line_power(b).unwrap(),
            ] {
                let d = ClassicalDensity::new(&spec, 1.0).unwrap();
                let rel = (d.normalization() - d.closed_form_normalization()).abs() / d.closed_form_normalization();
                assert!(rel < 1e-10, "b={b}: {rel:e}");
                let total = d.average(|_, _| 1.0).unwrap();
                assert!((total - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pointwise_density() {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        let d = ClassicalDensity::new(&spec, 1.0).unwrap();
        // 1 / (π sqrt(1 - X²))
        assert!((d.density(0.0) - 1.0 / PI).abs() < 1e-12);
        assert!((d.density(-0.6) - 1.0 / (PI * 0.8)).abs() < 1e-12);
        assert_eq!(d.density(1.5), 0.0);
        let well = PotentialSpec::half_line_box(1.0).unwrap();
        let d = ClassicalDensity::new(&well, 1.0).unwrap();
        assert!((d.density(0.3) - 1.0).abs() < 1e-12);
        assert_eq!(d.density(-0.3), 0.0);
    }

    #[test]
    fn momentum_density_routes() {
        let lin = PotentialSpec::symmetric_power(1).unwrap();
        let d = classical_momentum_density(&lin, 2.0).unwrap();
        assert!((d.density(0.3) - 0.5).abs() < 1e-12);
        assert!((d.average(|p| p * p).unwrap() - 1.0 / 3.0).abs() < 1e-8);
        let osc = PotentialSpec::symmetric_power(2).unwrap();
        let d = classical_momentum_density(&osc, 2.0).unwrap();
        assert!((d.average(|p| p * p).unwrap() - 0.5).abs() < 1e-8);
        let well = PotentialSpec::symmetric_box(1.0).unwrap();
        assert!(matches!(
            classical_momentum_density(&well, 2.0),
            Err(Error::NotPowerFamily)
        ));
    }

    #[test]
    fn quadrature_matches_closed_form_grid() {
        for b in 1..=10u32 {
            for family in [Family::SymmetricPower, Family::HalfLinePower] {
                let spec = PotentialSpec::new(family, b as i64).unwrap();
                let d = ClassicalDensity::new(&spec, 1.0).unwrap();
                for k in 1..=4 {
                    let q = d.average(|x, _| x.powi(k as i32)).unwrap();
                    let c = classical_moment_closed_form(b, family, k).unwrap();
                    assert!((q - c).abs() <= 1e-8, "b={b} {family} k={k}: {q} vs {c}");
                }
                let p2 = d.average(|_, p| p * p).unwrap();
                let virial = b as f64 / (b as f64 + 2.0);
                assert!((p2 - virial).abs() <= 1e-8);
                let mom = classical_momentum_density(&spec, 1.0).unwrap();
                assert!((mom.average(|p| p * p).unwrap() - p2).abs() <= 1e-8);
                let rel =
                    (mom.normalization() - mom.closed_form_normalization()).abs() / mom.closed_form_normalization();
                assert!(rel < 1e-9, "b={b}: {rel:e}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn products_are_energy_invariant(b in 1u32..=10, e in 0.05f64..50.0, half in any::<bool>()) {
            let family = if half { Family::HalfLinePower } else { Family::SymmetricPower };
            let spec = PotentialSpec::new(family, b as i64).unwrap();
            let a = classical_dispersion_product(&spec, e).unwrap();
            let c = classical_dispersion_product(&spec, 2.0 * e).unwrap();
            prop_assert!((a.product() - c.product()).abs() <= 1e-10);
            prop_assert!((c.frame.x_max / a.frame.x_max - 2f64.powf(1.0 / b as f64)).abs() < 1e-12);
        }
    }
}
