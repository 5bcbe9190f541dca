//! Dense symmetric indefinite factorization `P A P^T = L D L^T`.
//!
//! Bunch-Kaufman partial pivoting: `D` is block diagonal with 1x1 and 2x2
//! blocks, `L` is unit lower triangular.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const BK_ALPHA: f64 = 0.640_388_203_202_208_4; // (1 + sqrt(17)) / 8

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pivot {
    One,
    Two,
}

/// Bunch-Kaufman factorization of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricIndefinite {
    // strictly lower part holds L, diagonal and first subdiagonal of 2x2 blocks hold D
    work: DMatrix<f64>,
    pivots: Vec<Pivot>,
    perm: Vec<usize>,
}

impl SymmetricIndefinite {
    /// Factors `a`, which must be square; only symmetry of the input is assumed.
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.ncols(),
            });
        }
        let mut w = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut pivots = Vec::with_capacity(n);
        let mut k = 0;
        while k < n {
            let absakk = w[(k, k)].abs();
            let (imax, colmax) = ((k + 1)..n)
                .map(|i| (i, w[(i, k)].abs()))
                .fold((k, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if absakk.max(colmax) == 0.0 {
                return Err(Error::Singular {
                    condition: f64::INFINITY,
                    context: format!("zero pivot column {k} in symmetric factorization"),
                });
            }
            let (kp, step) = if absakk >= BK_ALPHA * colmax {
                (k, Pivot::One)
            } else {
                let rowmax = (k..n)
                    .filter(|&j| j != imax)
                    .map(|j| w[(imax, j)].abs())
                    .fold(0.0, f64::max);
                if absakk * rowmax >= BK_ALPHA * colmax * colmax {
                    (k, Pivot::One)
                } else if w[(imax, imax)].abs() >= BK_ALPHA * rowmax {
                    (imax, Pivot::One)
                } else {
                    (imax, Pivot::Two)
                }
            };
            let kk = if step == Pivot::One { k } else { k + 1 };
            if kp != kk {
                w.swap_rows(kk, kp);
                w.swap_columns(kk, kp);
                perm.swap(kk, kp);
            }
            match step {
                Pivot::One => {
                    let d = w[(k, k)];
                    for i in (k + 1)..n {
                        w[(i, k)] /= d;
                    }
                    for j in (k + 1)..n {
                        let ljd = w[(j, k)] * d;
                        for i in (k + 1)..n {
                            w[(i, j)] -= w[(i, k)] * ljd;
                        }
                    }
                    pivots.push(Pivot::One);
                    k += 1;
                }
                Pivot::Two => {
                    let (a11, a21, a22) = (w[(k, k)], w[(k + 1, k)], w[(k + 1, k + 1)]);
                    let det = a11 * a22 - a21 * a21;
                    if det == 0.0 || !det.is_finite() {
                        return Err(Error::Singular {
                            condition: f64::INFINITY,
                            context: format!("singular 2x2 pivot at column {k}"),
                        });
                    }
                    // rows of W D^{-1}
                    let mut l = Vec::with_capacity(n - k - 2);
                    for i in (k + 2)..n {
                        let (w1, w2) = (w[(i, k)], w[(i, k + 1)]);
                        l.push(((w1 * a22 - w2 * a21) / det, (w2 * a11 - w1 * a21) / det));
                    }
                    for j in (k + 2)..n {
                        let (wj1, wj2) = (w[(j, k)], w[(j, k + 1)]);
                        for i in (k + 2)..n {
                            let (li1, li2) = l[i - k - 2];
                            w[(i, j)] -= li1 * wj1 + li2 * wj2;
                        }
                    }
                    for (idx, i) in ((k + 2)..n).enumerate() {
                        w[(i, k)] = l[idx].0;
                        w[(i, k + 1)] = l[idx].1;
                    }
                    pivots.push(Pivot::Two);
                    k += 2;
                }
            }
        }
        Ok(Self {
            work: w,
            pivots,
            perm,
        })
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.work.nrows();
        let mut y = DVector::from_fn(n, |i, _| b[self.perm[i]]);

        // forward: L y = P b
        let mut k = 0;
        for p in &self.pivots {
            let cols: &[usize] = match p {
                Pivot::One => &[k][..],
                Pivot::Two => &[k, k + 1][..],
            };
            let start = k + cols.len();
            for &c in cols {
                let yc = y[c];
                for i in start..n {
                    y[i] -= self.work[(i, c)] * yc;
                }
            }
            k = start;
        }

        // block diagonal
        let mut k = 0;
        for p in &self.pivots {
            match p {
                Pivot::One => {
                    y[k] /= self.work[(k, k)];
                    k += 1;
                }
                Pivot::Two => {
                    let (a11, a21, a22) =
                        (self.work[(k, k)], self.work[(k + 1, k)], self.work[(k + 1, k + 1)]);
                    let det = a11 * a22 - a21 * a21;
                    let (b1, b2) = (y[k], y[k + 1]);
                    y[k] = (a22 * b1 - a21 * b2) / det;
                    y[k + 1] = (a11 * b2 - a21 * b1) / det;
                    k += 2;
                }
            }
        }

        // backward: L^T x = z
        let mut k = n;
        for p in self.pivots.iter().rev() {
            let width = if *p == Pivot::One { 1 } else { 2 };
            k -= width;
            for c in k..k + width {
                let mut s = y[c];
                for i in (k + width)..n {
                    s -= self.work[(i, c)] * y[i];
                }
                y[c] = s;
            }
        }

        let mut x = DVector::zeros(n);
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    /// Counts of (positive, negative) eigenvalues, read off `D`.
    pub fn inertia(&self) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        let mut k = 0;
        for p in &self.pivots {
            match p {
                Pivot::One => {
                    if self.work[(k, k)] > 0.0 {
                        pos += 1;
                    } else {
                        neg += 1;
                    }
                    k += 1;
                }
                Pivot::Two => {
                    // a 2x2 Bunch-Kaufman block always has one eigenvalue of each sign
                    pos += 1;
                    neg += 1;
                    k += 2;
                }
            }
        }
        (pos, neg)
    }
}
