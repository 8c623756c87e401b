//! Gamma-family functions needed by the closed-form oracles.

use std::f64::consts::PI;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln |Γ(x)|` for real `x` that is not a non-positive integer.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        (PI / (PI * x).sin()).abs().ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }
}

pub fn gamma(x: f64) -> f64 {
    if x == x.floor() && x > 0.0 && x <= 171.0 {
        return factorial(x as u32 - 1);
    }
    let sign = if x < 0.5 && (PI * x).sin() < 0.0 { -1.0 } else { 1.0 };
    sign * ln_gamma(x).exp()
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Euler Beta function for positive arguments.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

pub fn ln_factorial(n: u32) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `(2n)! / (2^{2n} (n!)^2)`, evaluated in log space so it stays finite for
/// large `n`.
pub fn central_binomial_ratio(n: u32) -> f64 {
    if n < 60 {
        // exact product form: prod_{j=1..n} (2j-1)/(2j)
        (1..=n).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64)
    } else {
        (ln_factorial(2 * n) - 2.0 * n as f64 * 2f64.ln() - 2.0 * ln_factorial(n)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_known_points() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.5) - PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((gamma(2.5) - 0.75 * PI.sqrt()).abs() < 1e-14);
        assert_eq!(gamma(6.0), 120.0);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((ln_gamma(100.0) - 359.134_205_369_575_4).abs() < 1e-10);
        assert!((ln_gamma(0.1) - 2.252_712_651_734_206).abs() < 1e-13);
    }

    #[test]
    fn beta_identities() {
        // B(1, 1/2) = 2, B(2, 1/2) = 4/3, B(1/2, 1/2) = π
        assert!((beta(1.0, 0.5) - 2.0).abs() < 1e-14);
        assert!((beta(2.0, 0.5) - 4.0 / 3.0).abs() < 1e-14);
        assert!((beta(0.5, 0.5) - PI).abs() < 1e-14);
        // symmetry and the recurrence B(a+1, b) = B(a, b) a / (a + b)
        for &(a, b) in &[(0.1, 0.5), (0.3, 2.7), (5.5, 0.5)] {
            assert!((beta(a, b) - beta(b, a)).abs() < 1e-13 * beta(a, b));
            let lhs = beta(a + 1.0, b);
            let rhs = beta(a, b) * a / (a + b);
            assert!((lhs - rhs).abs() < 1e-13 * rhs);
        }
    }

    #[test]
    fn central_binomial_branches_agree() {
        let product = (1..=60u32).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64);
        assert!((central_binomial_ratio(60) - product).abs() < 1e-12 * product);
        assert_eq!(central_binomial_ratio(0), 1.0);
        assert_eq!(central_binomial_ratio(1), 0.5);
        assert_eq!(central_binomial_ratio(2), 0.375);
    }
}
