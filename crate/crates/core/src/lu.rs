//! Dense LU with partial pivoting for the small local systems.

/// Pivots below this fraction of the largest (row-equilibrated) entry mark the
/// matrix as singular.
pub(crate) const PIVOT_RATIO_TOL: f64 = 1e-13;

pub(crate) struct Lu<const N: usize> {
    a: [[f64; N]; N],
    lu: [[f64; N]; N],
    perm: [usize; N],
    row_scale: [f64; N],
}

impl<const N: usize> Lu<N> {
    /// Factorizes `a`; on failure returns the smallest pivot ratio seen.
    pub(crate) fn factor(a: [[f64; N]; N]) -> Result<Self, f64> {
        let original = a;
        let mut a = a;
        let mut row_scale = [1.0; N];
        for (row, s) in a.iter_mut().zip(row_scale.iter_mut()) {
            let m = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if m == 0.0 {
                return Err(0.0);
            }
            *s = 1.0 / m;
            row.iter_mut().for_each(|v| *v *= *s);
        }
        let mut perm = [0; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut min_ratio = f64::INFINITY;
        for k in 0..N {
            let (piv, pmax) = (k..N)
                .map(|i| (i, a[i][k].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            min_ratio = min_ratio.min(pmax);
            if pmax < PIVOT_RATIO_TOL {
                return Err(pmax);
            }
            a.swap(k, piv);
            perm.swap(k, piv);
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in k + 1..N {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        debug_assert!(min_ratio >= PIVOT_RATIO_TOL);
        Ok(Lu {
            a: original,
            lu: a,
            perm,
            row_scale,
        })
    }

    /// Solves `A x = b` with one step of iterative refinement.
    pub(crate) fn solve(&self, b: &[f64; N]) -> [f64; N] {
        let mut x = self.substitute(b);
        let r: [f64; N] = std::array::from_fn(|i| b[i] - (0..N).map(|j| self.a[i][j] * x[j]).sum::<f64>());
        let dx = self.substitute(&r);
        x.iter_mut().zip(dx).for_each(|(x, d)| *x += d);
        x
    }

    fn substitute(&self, b: &[f64; N]) -> [f64; N] {
        let mut x = [0.0; N];
        for i in 0..N {
            let src = self.perm[i];
            x[i] = b[src] * self.row_scale[src];
        }
        for i in 0..N {
            for j in 0..i {
                x[i] -= self.lu[i][j] * x[j];
            }
        }
        for i in (0..N).rev() {
            for j in i + 1..N {
                x[i] -= self.lu[i][j] * x[j];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}
