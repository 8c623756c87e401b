//! Airy function and its zeros, enough to give exact linear-potential levels.
//!
//! `Ai` uses its Maclaurin series for `x >= -7` and the oscillatory
//! asymptotic expansion below that. Zeros start from the standard
//! asymptotic zero expansions and are polished with Newton steps.

use std::f64::consts::PI;

/// Zeros available from [`airy_zero`] and friends.
pub const MAX_ZEROS: usize = 64;

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = 0.258_819_403_792_806_8; // -Ai'(0)
const SERIES_LIMIT: f64 = -7.0;

/// `(Ai(x), Ai'(x))` for `x <= 5`.
pub fn airy_ai(x: f64) -> (f64, f64) {
    assert!(x <= 5.0, "Ai is only evaluated on the oscillatory side here");
    if x >= SERIES_LIMIT {
        series(x)
    } else {
        asymptotic_negative(-x)
    }
}

fn series(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = Σ a_k x^{3k}, g = Σ b_k x^{3k+1}
    let (mut a, mut b) = (1.0, 1.0);
    let (mut f, mut g) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    let mut xpow = 1.0; // x^{3k}
    for k in 0..200u32 {
        let kf = k as f64;
        a /= (3.0 * kf + 2.0) * (3.0 * kf + 3.0);
        b /= (3.0 * kf + 3.0) * (3.0 * kf + 4.0);
        let next = xpow * x3;
        let tf = a * next;
        let tg = b * next * x;
        f += tf;
        g += tg;
        // d/dx x^{3k+3} = (3k+3) x^{3k+2}
        fp += a * (3.0 * kf + 3.0) * xpow * x * x;
        gp += b * (3.0 * kf + 4.0) * next;
        xpow = next;
        if tf.abs() < 1e-18 * f.abs().max(1.0) && tg.abs() < 1e-18 * g.abs().max(1.0) && k > 3 {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

// Ai(-z) and Ai'(-z) for large z.
fn asymptotic_negative(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let (mut p, mut q, mut pp, mut qp) = (0.0, 0.0, 0.0, 0.0);
    let mut u = 1.0;
    let mut last = f64::INFINITY;
    let mut zpow = 1.0;
    for k in 0..40u32 {
        if k > 0 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            zpow *= zeta;
        }
        let term = u / zpow;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let v = -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u;
        let vterm = v / zpow;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
            pp += sign * vterm;
        } else {
            q += sign * term;
            qp += sign * vterm;
        }
    }
    let phase = zeta - PI / 4.0;
    let (s, c) = phase.sin_cos();
    let ai = (c * p + s * q) / (PI.sqrt() * z.powf(0.25));
    let aip = z.powf(0.25) / PI.sqrt() * (s * pp - c * qp);
    (ai, aip)
}

fn zero_expansion(t: f64, coefficients: &[f64]) -> f64 {
    let inv2 = 1.0 / (t * t);
    let series = coefficients.iter().rev().fold(0.0, |acc, c| acc * inv2 + c);
    -t.powf(2.0 / 3.0) * series
}

/// `k`-th negative zero of `Ai` (1-based): `a_1 ≈ -2.33811`.
pub fn airy_zero(k: usize) -> f64 {
    assert!((1..=MAX_ZEROS).contains(&k));
    let t = 3.0 * PI * (4 * k - 1) as f64 / 8.0;
    let mut x = zero_expansion(
        t,
        &[
            1.0,
            5.0 / 48.0,
            -5.0 / 36.0,
            77125.0 / 82944.0,
            -108_056_875.0 / 6_967_296.0,
        ],
    );
    for _ in 0..50 {
        let (ai, aip) = airy_ai(x);
        let step = ai / aip;
        x -= step;
        if step.abs() < 1e-15 * x.abs() {
            break;
        }
    }
    x
}

/// `k`-th negative zero of `Ai'` (1-based): `a'_1 ≈ -1.01879`.
pub fn airy_derivative_zero(k: usize) -> f64 {
    assert!((1..=MAX_ZEROS).contains(&k));
    let t = 3.0 * PI * (4 * k - 3) as f64 / 8.0;
    let mut x = if k == 1 {
        -1.018_8
    } else {
        zero_expansion(
            t,
            &[
                1.0,
                -7.0 / 48.0,
                35.0 / 288.0,
                -181_223.0 / 207_360.0,
                18_683_371.0 / 1_244_160.0,
            ],
        )
    };
    // Newton on Ai' using Ai'' = x Ai
    for _ in 0..50 {
        let (ai, aip) = airy_ai(x);
        let step = aip / (x * ai);
        x -= step;
        if step.abs() < 1e-15 * x.abs() {
            break;
        }
    }
    x
}

/// Level `n` (0-based) of `-ψ''/2 + xψ = Eψ` on `x >= 0` with `ψ(0) = 0`.
pub fn bouncing_energy(n: usize) -> f64 {
    -airy_zero(n + 1) / 2f64.cbrt()
}

/// Level `n` of `-ψ''/2 + |x|ψ = Eψ`: odd states are bouncing-ball levels,
/// even states sit at zeros of `Ai'`.
pub fn symmetric_linear_energy(n: usize) -> f64 {
    let zero = if n.is_multiple_of(2) {
        airy_derivative_zero(n / 2 + 1)
    } else {
        airy_zero(n / 2 + 1)
    };
    -zero / 2f64.cbrt()
}
