//! Eigen-decomposition of a real symmetric tridiagonal matrix with zero
//! diagonal (the form `Jy` takes after a diagonal unitary similarity).

/// Real symmetric tridiagonal matrix stored by diagonal and off-diagonal.
#[derive(Clone, Debug)]
pub struct SymmetricTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymmetricTridiagonal {
    /// `off.len()` must be `diag.len() - 1` (or both empty).
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            off.len() + 1 == diag.len() || (diag.is_empty() && off.is_empty()),
            "off-diagonal length must be one less than the diagonal"
        );
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via `LDLᵀ`).
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            d = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues in ascending order, by bisection on Sturm counts.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.dim();
        if n == 0 {
            return Vec::new();
        }
        let (lo, hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        let pivmin = f64::MIN_POSITIVE.max(scale * scale * f64::EPSILON * 1e-3);
        let lo = lo - scale * 1e-12 - pivmin;
        let hi = hi + scale * 1e-12 + pivmin;
        (0..n)
            .map(|i| {
                let (mut a, mut b) = (lo, hi);
                // eigenvalue i is the smallest x with count_below(x) > i
                while b - a > 2.0 * f64::EPSILON * (a.abs().max(b.abs())) + pivmin {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if self.count_below(mid, pivmin) > i {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }

    /// Unit eigenvector for an (accurate) eigenvalue, by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        if n == 1 {
            return vec![1.0];
        }
        let lu = ShiftedLu::factor(self, lambda);
        // deterministic, non-degenerate start vector
        let mut x: Vec<f64> = (0..n).map(|k| 1.0 + 0.5 * ((k as f64) * 0.754_877_666).sin()).collect();
        for _ in 0..3 {
            lu.solve(&mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }

    /// Eigenvalues and the column-major eigenvector matrix (`n × n`).
    pub fn eigen(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let values = self.eigenvalues();
        let vectors = values.iter().map(|&l| self.eigenvector(l)).collect();
        (values, vectors)
    }
}

/// `T - λI = P L U` with partial pivoting (`U` has two super-diagonals).
struct ShiftedLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    l: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymmetricTridiagonal, lambda: f64) -> Self {
        let n = t.dim();
        let norm = t.off.iter().chain(&t.diag).fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let tiny = f64::EPSILON * norm;
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - lambda).collect();
        let mut du = t.off.clone();
        let dl = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut l = vec![0.0; n - 1];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                l[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                let f = d[i] / dl[i];
                l[i] = f;
                swapped[i] = true;
                let old_d_next = d[i + 1];
                let old_du_i = du[i];
                d[i] = dl[i];
                du[i] = old_d_next;
                d[i + 1] = old_du_i - f * old_d_next;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du2[i];
                }
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        Self { d, du, du2, l, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - self.l[i] * b[i];
            } else {
                b[i + 1] -= self.l[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn dense(t: &SymmetricTridiagonal) -> DMatrix<f64> {
        let n = t.dim();
        DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                t.diag[r]
            } else if r + 1 == c {
                t.off[r]
            } else if c + 1 == r {
                t.off[c]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn matches_dense_symmetric_eigen() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|k| (k as f64 * 0.37).cos()).collect();
        let off: Vec<f64> = (0..n - 1).map(|k| 0.5 + (k as f64 * 1.1).sin().abs()).collect();
        let t = SymmetricTridiagonal::new(diag, off);
        let m = dense(&t);
        let mut want: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        want.sort_by(f64::total_cmp);
        let (vals, vecs) = t.eigen();
        for (a, b) in vals.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        for (lambda, v) in vals.iter().zip(&vecs) {
            let v = nalgebra::DVector::from_column_slice(v);
            let r = &m * &v - &v * *lambda;
            assert!(r.amax() < 1e-12);
        }
    }

    #[test]
    fn jx_spectrum_is_m_values() {
        // Jx off-diagonals for j = 7/2 have eigenvalues -7/2..7/2
        let twice = 7usize;
        let j = twice as f64 / 2.0;
        let off: Vec<f64> = (0..twice)
            .map(|k| {
                let m = j - k as f64 - 1.0;
                (j * (j + 1.0) - m * (m + 1.0)).sqrt() / 2.0
            })
            .collect();
        let t = SymmetricTridiagonal::new(vec![0.0; twice + 1], off);
        for (i, v) in t.eigenvalues().iter().enumerate() {
            assert!((v - (i as f64 - j)).abs() < 1e-13);
        }
    }
}
