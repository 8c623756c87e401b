//! Quantum expectation values in the dimensionless frame `X = x/x_max`,
//! `P = p/p_max`.
//!
//! All sums use the plain `dx` weight over interior nodes; the Dirichlet
//! endpoints contribute zero. Tails beyond `|X| = 1` are included.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{assemble_hamiltonian, solve_spectrum, Eigenstate, Grid, Spectrum};
use crate::error::{Error, Result};
use crate::model::{dimensionless_frame, Frame, PotentialSpec};

/// Allowed deviation of `Σ ψ² dx` from one.
pub const NORM_TOLERANCE: f64 = 1e-6;
/// Allowed relative disagreement between the two `<P²>` routes.
pub const ROUTE_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    /// State index; `None` for classical sets, which depend only on `E`.
    pub n: Option<usize>,
    pub frame: Frame,
    pub x_mean: f64,
    pub x2: f64,
    pub x4: Option<f64>,
    pub p_mean: f64,
    pub p2: f64,
}

impl MomentSet {
    pub fn x_variance(&self) -> f64 {
        self.x2 - self.x_mean * self.x_mean
    }

    pub fn p_variance(&self) -> f64 {
        self.p2 - self.p_mean * self.p_mean
    }

    /// `(ΔX)² (ΔP)²`.
    pub fn product(&self) -> f64 {
        self.x_variance() * self.p_variance()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyRecord {
    pub potential: PotentialSpec,
    pub n: usize,
    pub quantum: MomentSet,
    pub classical: Option<MomentSet>,
}

impl UncertaintyRecord {
    pub fn product_qm(&self) -> f64 {
        self.quantum.product()
    }

    pub fn product_cl(&self) -> Option<f64> {
        self.classical.as_ref().map(MomentSet::product)
    }

    pub fn with_classical(mut self, classical: MomentSet) -> Self {
        self.classical = Some(classical);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MomentumRoute {
    /// `<p²> = 2(E - <U>)`.
    Kinetic,
    /// `<p²> = Σ (ψ[i+1] - ψ[i])² / dx`.
    Derivative,
}

pub fn norm(psi: &[f64], dx: f64) -> f64 {
    psi.iter().map(|a| a * a).sum::<f64>() * dx
}

fn check_normalized(psi: &[f64], dx: f64) -> Result<()> {
    let nrm = norm(psi, dx);
    if (nrm - 1.0).abs() > NORM_TOLERANCE {
        Err(Error::Unnormalized(nrm))
    } else {
        Ok(())
    }
}

fn expectation(psi: &[f64], grid: &Grid, f: impl Fn(f64) -> f64) -> f64 {
    grid.interior().iter().zip(psi).map(|(&x, a)| f(x) * a * a).sum::<f64>() * grid.spacing()
}

/// `<X^k> = Σ (x_i/x_max)^k ψ_i² dx`.
pub fn position_moment(state: &Eigenstate<'_>, grid: &Grid, frame: &Frame, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::UnsupportedMoment(0));
    }
    check_normalized(state.psi, grid.spacing())?;
    Ok(raw_position_moment(state.psi, grid, frame.x_max, k))
}

fn raw_position_moment(psi: &[f64], grid: &Grid, x_max: f64, k: u32) -> f64 {
    expectation(psi, grid, |x| (x / x_max).powi(k as i32))
}

/// `<P²>` in units of `p_max²`, by either route.
pub fn momentum_second_moment(
    state: &Eigenstate<'_>,
    spec: &PotentialSpec,
    grid: &Grid,
    frame: &Frame,
    route: MomentumRoute,
) -> Result<f64> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
    if !(state.energy > 0.0) {
        return Err(Error::NonPositiveEnergy(state.energy));
    }
    check_normalized(state.psi, grid.spacing())?;
    Ok(match route {
        MomentumRoute::Kinetic => {
            let potential = expectation(state.psi, grid, |x| spec.evaluate(x));
            kinetic_p2(state.energy, potential, frame.p_max)
        }
        MomentumRoute::Derivative => derivative_p2(state.psi, grid.spacing(), frame.p_max),
    })
}

pub(crate) fn kinetic_p2(energy: f64, mean_potential: f64, p_max: f64) -> f64 {
    2.0 * (energy - mean_potential) / (p_max * p_max)
}

pub(crate) fn derivative_p2(psi: &[f64], dx: f64, p_max: f64) -> f64 {
    let n = psi.len();
    // includes the jumps onto the zero endpoints
    let mut acc = psi[0] * psi[0] + psi[n - 1] * psi[n - 1];
    for w in psi.windows(2) {
        acc += (w[1] - w[0]) * (w[1] - w[0]);
    }
    acc / dx / (p_max * p_max)
}

/// `<P>` from the central-difference momentum operator. Zero for any real
/// state by antisymmetry of the stencil.
pub fn momentum_first_moment(state: &Eigenstate<'_>, grid: &Grid, frame: &Frame) -> Result<f64> {
    let amplitudes: Vec<Complex64> = state.psi.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    momentum_first_moment_complex(&amplitudes, grid, frame)
}

/// `<P>` for complex amplitudes on the interior nodes.
pub fn momentum_first_moment_complex(psi: &[Complex64], grid: &Grid, frame: &Frame) -> Result<f64> {
    let dx = grid.spacing();
    let nrm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>() * dx;
    if (nrm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Unnormalized(nrm));
    }
    let n = psi.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = zero;
    for i in 0..n {
        let right = if i + 1 < n { psi[i + 1] } else { zero };
        let left = if i > 0 { psi[i - 1] } else { zero };
        acc += psi[i].conj() * (right - left);
    }
    // <p> = Σ ψ* (-i)(ψ[i+1] - ψ[i-1]) / (2 dx) · dx
    let p = (Complex64::new(0.0, -0.5) * acc).re;
    Ok(p / frame.p_max)
}

/// Dimensionless moments of state `n`, with the frame fixed by `E_n`.
///
/// The kinetic `<P²>` route is reported; the derivative route is evaluated
/// alongside and a disagreement beyond [`ROUTE_TOLERANCE`] is an error.
pub fn uncertainty_product(spec: &PotentialSpec, spectrum: &Spectrum, n: usize) -> Result<UncertaintyRecord> {
    let state = spectrum.state(n)?;
    let frame = dimensionless_frame(spec, state.energy)?;
    let grid = spectrum.grid();
    let samples: Vec<f64> = grid.interior().iter().map(|&x| spec.evaluate(x)).collect();
    let quantum = moments_with_samples(&state, grid, &frame, &samples)?;
    Ok(UncertaintyRecord {
        potential: *spec,
        n,
        quantum,
        classical: None,
    })
}

pub(crate) fn moments_with_samples(
    state: &Eigenstate<'_>,
    grid: &Grid,
    frame: &Frame,
    potential: &[f64],
) -> Result<MomentSet> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
    if !(state.energy > 0.0) {
        return Err(Error::NonPositiveEnergy(state.energy));
    }
    let dx = grid.spacing();
    check_normalized(state.psi, dx)?;
    let mean_potential = state.psi.iter().zip(potential).map(|(a, u)| u * a * a).sum::<f64>() * dx;
    let kinetic = kinetic_p2(state.energy, mean_potential, frame.p_max);
    let derivative = derivative_p2(state.psi, dx, frame.p_max);
    if (kinetic - derivative).abs() > ROUTE_TOLERANCE * kinetic.abs().max(derivative.abs()) {
        return Err(Error::RouteDisagreement { kinetic, derivative });
    }
    Ok(MomentSet {
        n: Some(state.index),
        frame: *frame,
        x_mean: raw_position_moment(state.psi, grid, frame.x_max, 1),
        x2: raw_position_moment(state.psi, grid, frame.x_max, 2),
        x4: Some(raw_position_moment(state.psi, grid, frame.x_max, 4)),
        p_mean: momentum_first_moment(state, grid, frame)?,
        p2: kinetic,
    })
}

/// `(Δx)² (Δp)²` in units of `ħ²`, without any frame scaling.
pub fn original_variable_product(spec: &PotentialSpec, spectrum: &Spectrum, n: usize) -> Result<f64> {
    let state = spectrum.state(n)?;
    let grid = spectrum.grid();
    check_normalized(state.psi, grid.spacing())?;
    let x1 = expectation(state.psi, grid, |x| x);
    let x2 = expectation(state.psi, grid, |x| x * x);
    let p2 = 2.0 * (state.energy - expectation(state.psi, grid, |x| spec.evaluate(x)));
    Ok((x2 - x1 * x1) * p2)
}

/// [`original_variable_product`] for every state of `coarse`, with the
/// `O(dx²)` stencil error removed by Richardson extrapolation: the spectrum
/// is solved again on the same extent with `dx` halved and
/// `(4 P(dx/2) - P(dx)) / 3` returned.
pub fn original_variable_products_extrapolated(spec: &PotentialSpec, coarse: &Spectrum) -> Result<Vec<f64>> {
    let grid = coarse.grid();
    let fine_grid = Grid::new(grid.boundary(), grid.extent(), 2 * grid.len() - 1)?;
    let h = assemble_hamiltonian(spec, &fine_grid);
    let fine = solve_spectrum(&h, coarse.len(), &fine_grid)?;
    (0..coarse.len())
        .map(|n| {
            let p_coarse = original_variable_product(spec, coarse, n)?;
            let p_fine = original_variable_product(spec, &fine, n)?;
            Ok((4.0 * p_fine - p_coarse) / 3.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{solve, SolverConfig};
    use std::f64::consts::PI;

    fn spectrum(spec: &PotentialSpec, n_max: usize) -> Spectrum {
        solve(spec, n_max, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn oscillator_moments_are_one_half() {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        let sp = spectrum(&spec, 10);
        for st in sp.states() {
            let frame = dimensionless_frame(&spec, st.energy).unwrap();
            let x2 = position_moment(&st, sp.grid(), &frame, 2).unwrap();
            assert!((x2 - 0.5).abs() < 1e-4, "n={} x2={x2}", st.index);
            let x1 = position_moment(&st, sp.grid(), &frame, 1).unwrap();
            assert!(x1.abs() < 1e-8);
            for route in [MomentumRoute::Kinetic, MomentumRoute::Derivative] {
                let p2 = momentum_second_moment(&st, &spec, sp.grid(), &frame, route).unwrap();
                assert!((p2 - 0.5).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn linear_potential_moments() {
        let spec = PotentialSpec::symmetric_power(1).unwrap();
        let sp = spectrum(&spec, 10);
        let rec0 = uncertainty_product(&spec, &sp, 0).unwrap();
        assert!((rec0.quantum.x2 - 0.72).abs() < 0.01);
        assert!((rec0.product_qm() - 0.24).abs() < 5e-3);
        for n in [1, 3, 5, 7, 9] {
            let rec = uncertainty_product(&spec, &sp, n).unwrap();
            assert!((rec.quantum.x2 - 8.0 / 15.0).abs() < 1e-3, "n={n}");
        }
        for st in sp.states() {
            let frame = dimensionless_frame(&spec, st.energy).unwrap();
            let p2 = momentum_second_moment(&st, &spec, sp.grid(), &frame, MomentumRoute::Kinetic).unwrap();
            assert!((p2 - 1.0 / 3.0).abs() < 1e-3);
        }
    }

    #[test]
    fn box_momentum_is_p_max() {
        let spec = PotentialSpec::symmetric_box(1.0).unwrap();
        let sp = spectrum(&spec, 4);
        for st in sp.states() {
            let frame = dimensionless_frame(&spec, st.energy).unwrap();
            let p2 = momentum_second_moment(&st, &spec, sp.grid(), &frame, MomentumRoute::Derivative).unwrap();
            assert!((p2 - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn first_moment_of_real_and_boosted_states() {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        let sp = spectrum(&spec, 3);
        let st = sp.state(0).unwrap();
        let frame = dimensionless_frame(&spec, st.energy).unwrap();
        assert!(momentum_first_moment(&st, sp.grid(), &frame).unwrap().abs() < 1e-10);

        let q = 0.8;
        let boosted: Vec<Complex64> = sp
            .grid()
            .interior()
            .iter()
            .zip(st.psi)
            .map(|(&x, &a)| Complex64::from_polar(a, q * x))
            .collect();
        let p = momentum_first_moment_complex(&boosted, sp.grid(), &frame).unwrap();
        assert!((p - q / frame.p_max).abs() < 1e-3);

        let zero = vec![Complex64::new(0.0, 0.0); st.psi.len()];
        assert!(matches!(
            momentum_first_moment_complex(&zero, sp.grid(), &frame),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        let sp = spectrum(&spec, 2);
        assert_eq!(
            uncertainty_product(&spec, &sp, 3).unwrap_err(),
            Error::StateIndex { index: 3, count: 3 }
        );
        let st = sp.state(1).unwrap();
        let frame = dimensionless_frame(&spec, st.energy).unwrap();
        assert_eq!(
            position_moment(&st, sp.grid(), &frame, 0).unwrap_err(),
            Error::UnsupportedMoment(0)
        );
        let doubled: Vec<f64> = st.psi.iter().map(|a| 2.0 * a).collect();
        let bad = Eigenstate { psi: &doubled, ..st };
        assert!(matches!(
            position_moment(&bad, sp.grid(), &frame, 2),
            Err(Error::Unnormalized(_))
        ));
        let negative = Eigenstate { energy: -1.0, ..st };
        assert!(matches!(
            momentum_second_moment(&negative, &spec, sp.grid(), &frame, MomentumRoute::Kinetic),
            Err(Error::NonPositiveEnergy(_))
        ));
    }

    #[test]
    fn extrapolation_removes_stencil_error() {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        let sp = spectrum(&spec, 10);
        let raw = original_variable_product(&spec, &sp, 0).unwrap();
        let fixed = original_variable_products_extrapolated(&spec, &sp).unwrap()[0];
        assert!(0.25 - raw > 1e-7, "raw deficit should be visible: {raw}");
        assert!((fixed - 0.25).abs() < 1e-9, "{fixed}");
    }

    #[test]
    fn original_products() {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        let sp = spectrum(&spec, 5);
        for n in 0..=5 {
            let v = original_variable_product(&spec, &sp, n).unwrap();
            let exact = (n as f64 + 0.5).powi(2);
            assert!((v - exact).abs() < 1e-3, "n={n}: {v}");
        }
        // ground state of the width-2 box: π²/12 - 1/2
        let well = PotentialSpec::symmetric_box(1.0).unwrap();
        let sp = spectrum(&well, 1);
        let v = original_variable_product(&well, &sp, 0).unwrap();
        assert!((v - (PI * PI / 12.0 - 0.5)).abs() < 1e-3);
    }

    #[test]
    fn record_product_recomputes_from_fields() {
        let spec = PotentialSpec::half_line_power(3).unwrap();
        let sp = spectrum(&spec, 2);
        let rec = uncertainty_product(&spec, &sp, 2).unwrap();
        let q = rec.quantum;
        assert_eq!(
            rec.product_qm(),
            (q.x2 - q.x_mean * q.x_mean) * (q.p2 - q.p_mean * q.p_mean)
        );
        assert!(q.x_mean.abs() <= q.x2.sqrt());
        assert!(rec.product_cl().is_none());
    }
}
