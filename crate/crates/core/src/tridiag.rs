//! Real symmetric tridiagonal eigenproblems: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// `off.len()` must be `diag.len() - 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty matrix");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.off
    }

    /// Dense row-major copy; only meant for small matrices.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.off[i];
                m[i + 1][i] = self.off[i];
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm_inf(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * self.off.iter().fold(1.0f64, |m, e| m.max(e * e));
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based), bisected to machine precision.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        assert!(index < self.len());
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * self.norm_inf().max(1.0) * self.len() as f64;
        lo -= pad;
        hi += pad;
        for _ in 0..2048 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lowest `k` eigenpairs, ascending, with unit Euclidean-norm vectors.
    pub fn lowest_eigenpairs(&self, k: usize, max_iterations: usize) -> Result<Vec<(f64, Vec<f64>)>> {
        let k = k.min(self.len());
        let values: Vec<f64> = (0..k).map(|j| self.eigenvalue(j)).collect();
        let cluster = 1e-3 * self.norm_inf();
        let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
        for (j, &lambda) in values.iter().enumerate() {
            let neighbours: Vec<&[f64]> = pairs
                .iter()
                .filter(|(mu, _)| (lambda - mu).abs() < cluster)
                .map(|(_, v)| v.as_slice())
                .collect();
            let v = self.inverse_iteration(lambda, j, &neighbours, max_iterations)?;
            pairs.push((lambda, v));
        }
        Ok(pairs)
    }

    fn inverse_iteration(
        &self,
        shift: f64,
        index: usize,
        against: &[&[f64]],
        max_iterations: usize,
    ) -> Result<Vec<f64>> {
        let n = self.len();
        let lu = ShiftedLu::factor(self, shift);
        let mut v = start_vector(n, index);
        let mut settled = 0;
        for _ in 0..max_iterations {
            let mut y = lu.solve(&v);
            for u in against {
                let d = dot(&y, u);
                y.iter_mut().zip(u.iter()).for_each(|(a, b)| *a -= d * b);
            }
            let norm = dot(&y, &y).sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                break;
            }
            y.iter_mut().for_each(|a| *a /= norm);
            let overlap = dot(&y, &v).abs();
            v = y;
            if 1.0 - overlap < 1e-14 {
                settled += 1;
                if settled == 2 {
                    return Ok(v);
                }
            }
        }
        Err(Error::NoConvergence {
            index,
            iterations: max_iterations,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// Deterministic pseudo-random start so results never depend on global state.
fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (seed as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let v: Vec<f64> = (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect();
    let norm = dot(&v, &v).sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// LU factorization of `T - shift·I` with partial pivoting.
struct ShiftedLu {
    mult: Vec<f64>,
    swapped: Vec<bool>,
    d: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, shift: f64) -> Self {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut u1: Vec<f64> = t.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];
        let tiny = f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE);

        for i in 0..n.saturating_sub(1) {
            let l = t.off[i];
            if d[i].abs() >= l.abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let m = l / d[i];
                mult[i] = m;
                d[i + 1] -= m * u1[i];
            } else {
                let m = d[i] / l;
                mult[i] = m;
                swapped[i] = true;
                let (old_u1, old_d1, old_u11) = (u1[i], d[i + 1], u1[i + 1]);
                d[i] = l;
                u1[i] = old_d1;
                u2[i] = old_u11;
                d[i + 1] = old_u1 - m * old_d1;
                u1[i + 1] = -m * old_u11;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        Self {
            mult,
            swapped,
            d,
            u1,
            u2,
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.mult[i] * b[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= self.u2[i] * x[i + 2];
            }
            x[i] = acc / self.d[i];
        }
        x
    }
}
