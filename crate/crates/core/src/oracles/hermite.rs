//! Physicists' Hermite polynomials and the normalized oscillator functions.

use std::f64::consts::PI;

use crate::special::{factorial, ln_factorial};

/// `H_n(x)` from `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_{2m}(0) = (-1)^m (2m)!/m!`, `H_{2m+1}(0) = 0`.
pub fn hermite_at_zero(n: u32) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let m = n / 2;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * factorial(n) / factorial(m)
}

/// `h_n(y) = H_n(y) e^{-y²/2} / sqrt(2^n n! sqrt(π))`, unit-normalized on
/// the whole line. Built from its own stable recurrence.
pub fn hermite_function(n: u32, y: f64) -> f64 {
    let h0 = PI.powf(-0.25) * (-0.5 * y * y).exp();
    if n == 0 {
        return h0;
    }
    let (mut prev, mut cur) = (h0, std::f64::consts::SQRT_2 * y * h0);
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * y * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients of `H_n` in increasing powers of `x`.
pub fn hermite_coefficients(n: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln(2^n n! sqrt(π))`, the log of `∫ e^{-y²} H_n² dy` over the real line.
pub fn ln_norm_squared(n: u32) -> f64 {
    n as f64 * 2f64.ln() + ln_factorial(n) + 0.5 * PI.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::DoubleExponential;

    #[test]
    fn low_orders() {
        assert_eq!(hermite(0, 0.7), 1.0);
        assert_eq!(hermite(1, 0.7), 1.4);
        let x: f64 = 1.3;
        assert!((hermite(3, x) - (8.0 * x.powi(3) - 12.0 * x)).abs() < 1e-12);
        assert!((hermite(4, x) - (16.0 * x.powi(4) - 48.0 * x * x + 12.0)).abs() < 1e-11);
    }

    #[test]
    fn values_at_origin() {
        for n in 0..=20 {
            let rec = hermite(n, 0.0);
            let closed = hermite_at_zero(n);
            assert!((rec - closed).abs() <= 1e-12 * closed.abs().max(1.0), "n={n}");
        }
        assert_eq!(hermite_at_zero(4), 12.0);
        assert_eq!(hermite_at_zero(6), -120.0);
    }

    #[test]
    fn coefficients_reproduce_recurrence() {
        for n in 0..=12 {
            let c = hermite_coefficients(n);
            let y = 0.37;
            let poly: f64 = c.iter().rev().fold(0.0, |acc, a| acc * y + a);
            assert!((poly - hermite(n, y)).abs() < 1e-9 * hermite(n, y).abs().max(1.0));
        }
    }

    #[test]
    fn functions_are_orthonormal() {
        let de = DoubleExponential::default();
        for m in 0..6 {
            for n in 0..6 {
                let v = de
                    .integrate_fn(-15.0, 15.0, |y| hermite_function(m, y) * hermite_function(n, y))
                    .unwrap();
                let target = if m == n { 1.0 } else { 0.0 };
                assert!((v - target).abs() < 1e-12, "{m},{n}: {v}");
            }
        }
        let y = 0.9;
        let direct = hermite(5, y) * (-0.5 * y * y).exp() / ln_norm_squared(5).exp().sqrt();
        assert!((hermite_function(5, y) - direct).abs() < 1e-14);
    }
}
