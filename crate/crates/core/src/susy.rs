//! Supersymmetric partners built from a numerical ground state.
//!
//! With `H₁ - E₀ = A†A`, `A = (d/dx)/√2 + W`, the superpotential is
//! `W = -ψ₀'/(√2 ψ₀)` and
//!
//! ```text
//! V₁ - E₀ = W² - W'/√2,        V₂ - E₀ = W² + W'/√2.
//! ```
//!
//! `V₂` is kept on the original energy scale, so partner level `n` sits at
//! base level `n + 1`.

use rayon::prelude::*;
use std::f64::consts::SQRT_2;

use crate::eigensolver::{assemble_with_samples, build_grid, solve_spectrum_with_cap, Grid, SolverConfig, Spectrum};
use crate::error::{Error, Result};
use crate::model::{Family, Frame, PotentialSpec};
use crate::quantum_moments::{moments_with_samples, MomentSet, UncertaintyRecord};

/// Amplitudes below this fraction of `max |ψ₀|` are masked.
pub const MASK_THRESHOLD: f64 = 1e-8;
/// Largest number of partner levels a sweep may ask for.
pub const MAX_PARTNER_LEVELS: usize = 5;

/// `W` on the interior nodes, with the underflow mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Superpotential {
    pub values: Vec<f64>,
    /// `true` where `ψ₀` underflowed and `W` was extrapolated.
    pub masked: Vec<bool>,
}

/// `W = -ψ₀'/(√2 ψ₀)` by central differences on the grid of `spectrum`.
///
/// Fails with [`Error::NodeDetected`] if state 0 changes sign, which means
/// it is not a ground state.
pub fn superpotential_from_ground_state(spectrum: &Spectrum) -> Result<Superpotential> {
    let psi = spectrum.state(0)?.psi;
    superpotential_from_state(psi, spectrum.grid())
}

pub fn superpotential_from_state(psi: &[f64], grid: &Grid) -> Result<Superpotential> {
    let n = psi.len();
    let peak = psi.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let floor = MASK_THRESHOLD * peak;
    let masked: Vec<bool> = psi.iter().map(|a| a.abs() < floor).collect();

    let mut sign = 0.0;
    for (i, &a) in psi.iter().enumerate() {
        if masked[i] {
            continue;
        }
        if sign * a < 0.0 {
            return Err(Error::NodeDetected(i));
        }
        sign = a.signum();
    }

    // central difference of ln ψ₀: exact for a Gaussian, and free of the
    // O(dx² W³) error of differencing ψ₀ itself far out in the tails
    let dx = grid.spacing();
    let ln = |i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            // Dirichlet endpoint: one-sided fallback below
            f64::NAN
        } else {
            psi[i as usize].abs().ln()
        }
    };
    let mut values: Vec<f64> = (0..n as isize)
        .map(|i| {
            let (l, r) = (ln(i - 1), ln(i + 1));
            let d = match (l.is_finite(), r.is_finite()) {
                (true, true) => (r - l) / (2.0 * dx),
                // next to a wall ψ₀ → 0; fall back to differencing ψ₀
                _ => {
                    let at = |k: isize| if k < 0 || k as usize >= n { 0.0 } else { psi[k as usize] };
                    (at(i + 1) - at(i - 1)) / (2.0 * dx) / psi[i as usize]
                }
            };
            -d / SQRT_2
        })
        .collect();

    let first = masked.iter().position(|m| !m).ok_or(Error::NodeDetected(0))?;
    let last = masked.iter().rposition(|m| !m).unwrap_or(first);
    if last - first < 2 {
        return Err(Error::OutOfRange("ground state occupies fewer than three nodes".into()));
    }
    // straight-line continuation of W into both masked tails
    let slope = values[first + 1] - values[first];
    for i in 0..first {
        values[i] = values[first] - slope * (first - i) as f64;
    }
    let slope = values[last] - values[last - 1];
    for i in last + 1..n {
        values[i] = values[last] + slope * (i - last) as f64;
    }
    for i in first..=last {
        if masked[i] {
            // isolated underflow inside the support: interpolate
            values[i] = 0.5 * (values[i.saturating_sub(1)] + values[(i + 1).min(n - 1)]);
        }
    }
    Ok(Superpotential { values, masked })
}

/// Base and partner potentials tabulated on the base grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerPotential {
    pub base: PotentialSpec,
    pub grid: Grid,
    pub ground_energy: f64,
    pub superpotential: Superpotential,
    /// `W'` by central differences (one-sided at the ends).
    pub derivative: Vec<f64>,
    /// `V₁` on the interior nodes.
    pub base_samples: Vec<f64>,
    /// `V₂ = W² + W'/√2 + E₀`.
    pub samples: Vec<f64>,
}

pub fn partner_potential(spec: &PotentialSpec, spectrum: &Spectrum, w: Superpotential) -> Result<PartnerPotential> {
    let grid = spectrum.grid().clone();
    let ground_energy = spectrum.state(0)?.energy;
    let v = &w.values;
    let n = v.len();
    let dx = grid.spacing();
    let derivative: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => (v[1] - v[0]) / dx,
            _ if i == n - 1 => (v[n - 1] - v[n - 2]) / dx,
            _ => (v[i + 1] - v[i - 1]) / (2.0 * dx),
        })
        .collect();
    let samples = v
        .iter()
        .zip(&derivative)
        .map(|(w, d)| w * w + d / SQRT_2 + ground_energy)
        .collect();
    let base_samples = grid.interior().iter().map(|&x| spec.evaluate(x)).collect();
    Ok(PartnerPotential {
        base: *spec,
        grid,
        ground_energy,
        superpotential: w,
        derivative,
        base_samples,
        samples,
    })
}

impl PartnerPotential {
    /// Index range of the middle `fraction` of interior nodes.
    fn central(&self, fraction: f64) -> std::ops::Range<usize> {
        let n = self.samples.len();
        let skip = ((1.0 - fraction) * 0.5 * n as f64).round() as usize;
        skip..n - skip
    }

    /// Mean and standard deviation of `V₂ - V₁` over the middle `fraction`
    /// of the grid.
    pub fn shift_statistics(&self, fraction: f64) -> (f64, f64) {
        let diffs: Vec<f64> = self
            .central(fraction)
            .map(|i| self.samples[i] - self.base_samples[i])
            .collect();
        let m = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / m;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / m;
        (mean, var.sqrt())
    }

    /// Largest `|V₁ - E₀ - (W² - W'/√2)|` over unmasked nodes in the middle
    /// `fraction` of the grid.
    pub fn factorization_residual(&self, fraction: f64) -> f64 {
        self.central(fraction)
            .filter(|&i| !self.superpotential.masked[i])
            .map(|i| {
                let w = self.superpotential.values[i];
                let rhs = w * w - self.derivative[i] / SQRT_2;
                (self.base_samples[i] - self.ground_energy - rhs).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|W(x) + W(-x)|` over the middle `fraction` of a symmetric grid.
    pub fn antisymmetry_defect(&self, fraction: f64) -> f64 {
        let n = self.samples.len();
        let w = &self.superpotential.values;
        self.central(fraction)
            .map(|i| (w[i] + w[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// `W` at `x = 0` (symmetric grids only).
    pub fn value_at_origin(&self) -> Option<f64> {
        let i = self.grid.interior().iter().position(|&x| x == 0.0)?;
        Some(self.superpotential.values[i])
    }

    pub fn minimum(&self) -> (usize, f64) {
        self.samples.iter().copied().enumerate().fold(
            (0, f64::INFINITY),
            |best, (i, v)| if v < best.1 { (i, v) } else { best },
        )
    }

    /// Classical return points of the tabulated `V₂` at energy `E`: the
    /// outermost crossings, interpolated linearly. The partner may have a
    /// central barrier; `E` must clear it.
    pub fn turning_points(&self, energy: f64) -> Result<(f64, f64)> {
        let xs = self.grid.interior();
        let v = &self.samples;
        let fail = |reason| Error::TurningPoint { energy, reason };
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(energy > self.minimum().1) {
            return Err(fail("below the partner minimum"));
        }
        let n = v.len();
        if v[0] < energy || v[n - 1] < energy {
            return Err(fail("partner potential stays below E on the grid"));
        }
        let lo = v
            .iter()
            .position(|&u| u < energy)
            .ok_or_else(|| fail("no allowed region"))?;
        let hi = v
            .iter()
            .rposition(|&u| u < energy)
            .ok_or_else(|| fail("no allowed region"))?;
        if v[lo..=hi].iter().any(|&u| u >= energy) {
            return Err(fail("classically allowed region is not connected"));
        }
        let cross = |i: usize, j: usize| xs[i] + (energy - v[i]) / (v[j] - v[i]) * (xs[j] - xs[i]);
        Ok((cross(lo, lo - 1), cross(hi, hi + 1)))
    }

    /// Frame for a partner level: `x_max` from `V₂(x_max) = E`,
    /// `p_max = √(2 (E - min V₂))`.
    pub fn frame(&self, energy: f64) -> Result<Frame> {
        let (left, right) = self.turning_points(energy)?;
        let x_max = if self.base.is_symmetric() {
            right.max(-left)
        } else {
            right
        };
        Ok(Frame::new(x_max, energy - self.minimum().1, energy))
    }

    /// Classical moments at energy `E` in the partner frame, from the
    /// piecewise-linear interpolant of `V₂`.
    pub fn classical_moments(&self, energy: f64) -> Result<MomentSet> {
        let frame = self.frame(energy)?;
        let (left, right) = self.turning_points(energy)?;
        let xs = self.grid.interior();
        let mut breaks = vec![left];
        breaks.extend(xs.iter().copied().filter(|&x| x > left && x < right));
        breaks.push(right);
        let potential = |x: f64| -> f64 {
            let k = xs.partition_point(|&p| p <= x).clamp(1, xs.len() - 1);
            let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            self.samples[k - 1] + t * (self.samples[k] - self.samples[k - 1])
        };
        // per segment g = E - V is linear; with v = √g the weight g^{-1/2} dx
        // becomes 2 dx/(v₀+v₁) · dt and the integrand is polynomial in t
        let (nodes, weights) = GAUSS3;
        let mut sums = [0.0f64; 4];
        for seg in breaks.windows(2) {
            let (x0, x1) = (seg[0], seg[1]);
            let g0 = (energy - potential(x0)).max(0.0);
            let g1 = (energy - potential(x1)).max(0.0);
            // exact zeros at the return points
            let v0 = if x0 == left { 0.0 } else { g0.sqrt() };
            let v1 = if x1 == right { 0.0 } else { g1.sqrt() };
            if v0 + v1 == 0.0 {
                continue;
            }
            let jac = 2.0 * (x1 - x0) / (v0 + v1);
            for (t, wt) in nodes.iter().zip(weights) {
                let v = v0 + t * (v1 - v0);
                let frac = t * (2.0 * v0 + t * (v1 - v0)) / (v0 + v1);
                let x = x0 + frac * (x1 - x0);
                let w = wt * jac;
                sums[0] += w;
                sums[1] += w * x;
                sums[2] += w * x * x;
                sums[3] += w * v * v;
            }
        }
        let norm = sums[0];
        Ok(MomentSet {
            n: None,
            frame,
            x_mean: sums[1] / norm / frame.x_max,
            x2: sums[2] / norm / frame.x_max.powi(2),
            x4: None,
            p_mean: 0.0,
            p2: 2.0 * sums[3] / norm / frame.p_max.powi(2),
        })
    }
}

/// Three-point Gauss–Legendre on `[0, 1]`.
const GAUSS3: ([f64; 3], [f64; 3]) = {
    const R: f64 = 0.387_298_334_620_741_7; // √(3/5)/2
    ([0.5 - R, 0.5, 0.5 + R], [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])
};

/// Base spectrum, partner potential and partner spectrum for one exponent.
#[derive(Debug, Clone)]
pub struct PartnerSolution {
    pub base: Spectrum,
    pub partner: PartnerPotential,
    pub spectrum: Spectrum,
}

impl PartnerSolution {
    /// Largest `|E²_n - E¹_{n+1}| / E¹_{n+1}` for `n ≤ n_max`.
    pub fn isospectral_deviation(&self, n_max: usize) -> f64 {
        let e1 = self.base.energies();
        let e2 = self.spectrum.energies();
        (0..=n_max)
            .filter(|&n| n + 1 < e1.len() && n < e2.len())
            .map(|n| ((e2[n] - e1[n + 1]) / e1[n + 1]).abs())
            .fold(0.0, f64::max)
    }

    /// Quantum and classical moments of partner level `n` in its own frame.
    pub fn record(&self, n: usize) -> Result<UncertaintyRecord> {
        let state = self.spectrum.state(n)?;
        let frame = self.partner.frame(state.energy)?;
        let quantum = moments_with_samples(&state, self.spectrum.grid(), &frame, &self.partner.samples)?;
        let classical = self.partner.classical_moments(state.energy)?;
        Ok(UncertaintyRecord {
            potential: self.partner.base,
            n,
            quantum,
            classical: Some(classical),
        })
    }
}

/// Solves the base problem for `levels + 1` states, builds the partner on
/// the same grid and solves it for `levels` states.
pub fn solve_partner(spec: &PotentialSpec, levels: usize, config: &SolverConfig) -> Result<PartnerSolution> {
    if spec.family() != Family::SymmetricPower {
        return Err(Error::NotSymmetricPower);
    }
    if levels == 0 || levels > MAX_PARTNER_LEVELS {
        return Err(Error::OutOfRange(format!(
            "partner levels must be 1..={MAX_PARTNER_LEVELS}, got {levels}"
        )));
    }
    let grid = build_grid(spec, levels, config.points, config.c_lambda)?;
    let h = crate::eigensolver::assemble_hamiltonian(spec, &grid);
    let base = solve_spectrum_with_cap(&h, levels + 1, &grid, config.max_iterations)?;
    let w = superpotential_from_ground_state(&base)?;
    let partner = partner_potential(spec, &base, w)?;
    let h2 = assemble_with_samples(&partner.samples, &grid);
    let spectrum = solve_spectrum_with_cap(&h2, levels, &grid, config.max_iterations)?;
    Ok(PartnerSolution {
        base,
        partner,
        spectrum,
    })
}

/// Partner-level records for each exponent, ordered by `(b, n)`.
pub fn partner_uncertainty_sweep(
    b_list: &[u32],
    levels: usize,
    config: &SolverConfig,
) -> Result<Vec<UncertaintyRecord>> {
    let per_b: Vec<Result<Vec<UncertaintyRecord>>> = b_list
        .par_iter()
        .map(|&b| {
            let spec = PotentialSpec::symmetric_power(b)?;
            let solution = solve_partner(&spec, levels, config)?;
            (0..levels).map(|n| solution.record(n)).collect()
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_b {
        out.extend(rows?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::solve;

    fn oscillator() -> PartnerSolution {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        solve_partner(&spec, 3, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn oscillator_superpotential_is_linear() {
        let s = oscillator();
        let p = &s.partner;
        assert!(p.value_at_origin().unwrap().abs() < 1e-6);
        let xs = p.grid.interior();
        let range = p.central(0.8);
        for i in range {
            assert!((p.superpotential.values[i] - xs[i]).abs() < 1e-3, "x={}", xs[i]);
        }
        assert!(p.antisymmetry_defect(0.8) < 1e-4);
    }

    #[test]
    fn oscillator_partner_is_shifted_copy() {
        let s = oscillator();
        let (mean, sd) = s.partner.shift_statistics(0.8);
        assert!((mean - SQRT_2).abs() < 1e-2, "{mean}");
        assert!(sd < 1e-2, "{sd}");
        // the residual is the eigenvector's own discretization error, which
        // grows into the Gaussian tail
        assert!(s.partner.factorization_residual(0.4) < 1e-4);
        assert!(s.partner.factorization_residual(0.8) < 2e-3);
        assert!(s.isospectral_deviation(2) < 1e-3);
    }

    #[test]
    fn oscillator_partner_products() {
        let s = oscillator();
        for n in 0..3 {
            let r = s.record(n).unwrap();
            assert!((r.product_qm() - 0.25).abs() < 5e-3, "n={n} {}", r.product_qm());
            assert!((r.product_cl().unwrap() - 0.25).abs() < 5e-3);
        }
    }

    #[test]
    fn linear_partner_is_not_a_shift() {
        let spec = PotentialSpec::symmetric_power(1).unwrap();
        let s = solve_partner(&spec, 3, &SolverConfig::default()).unwrap();
        let p = &s.partner;
        let range = p.central(0.8);
        let diffs: Vec<f64> = range.map(|i| p.samples[i] - p.base_samples[i]).collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let spread = diffs.iter().map(|d| (d - mean).abs()).fold(0.0, f64::max);
        assert!(spread > 0.1);
        let r = s.record(0).unwrap();
        assert!((r.product_qm() - 4.0 / 135.0).abs() > 1e-3);
        assert!((r.product_qm() - 8.0 / 45.0).abs() > 1e-3);
    }

    #[test]
    fn isospectral_for_low_powers() {
        for b in 1..=4 {
            let spec = PotentialSpec::symmetric_power(b).unwrap();
            let s = solve_partner(&spec, 4, &SolverConfig::default()).unwrap();
            let dev = s.isospectral_deviation(3);
            assert!(dev < 1e-3, "b={b}: {dev}");
        }
    }

    #[test]
    fn excited_state_rejected() {
        let spec = PotentialSpec::symmetric_power(2).unwrap();
        let sp = solve(&spec, 2, &SolverConfig::default()).unwrap();
        let err = superpotential_from_state(sp.state(1).unwrap().psi, sp.grid()).unwrap_err();
        assert!(matches!(err, Error::NodeDetected(_)));
    }

    #[test]
    fn sweep_rejects_bad_input() {
        let c = SolverConfig::default();
        assert!(partner_uncertainty_sweep(&[2], 6, &c).is_err());
        let half = PotentialSpec::half_line_power(2).unwrap();
        assert_eq!(solve_partner(&half, 2, &c).unwrap_err(), Error::NotSymmetricPower);
    }
}
