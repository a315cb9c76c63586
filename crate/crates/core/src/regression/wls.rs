//! Local weighted least squares.
//!
//! Each local model is solved by a Householder QR of the square-root
//! weighted design, restricted to rows with positive weight. Columns are
//! scaled to unit norm before factorization so the conditioning check
//! does not depend on the units of the predictors.

use crate::error::{GwError, Result};
use crate::regression::formula::Design;

/// Reciprocal condition number of `X'WX` below which a local system is
/// treated as singular.
pub const RCOND_TOLERANCE: f64 = 1e-12;

/// Result of one local regression.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFit {
    pub beta: Vec<f64>,
    /// Prediction at the focal observation.
    pub fitted: f64,
    /// Diagonal entry of the hat matrix at the focal observation.
    pub hat_ii: f64,
}

/// Upper-triangular factor and transformed response of a weighted
/// least-squares problem, with the column scaling applied.
struct Factorization {
    m: usize,
    /// `m x m` row-major upper triangle of the scaled problem.
    r: Vec<f64>,
    /// First `m` entries of `Q' sqrt(W) y`.
    qty: Vec<f64>,
    scale: Vec<f64>,
}

impl Factorization {
    fn new(design: &Design, w: &[f64]) -> Option<Self> {
        let m = design.m;
        let rows: Vec<usize> = (0..design.n).filter(|&j| w[j] > 0.0).collect();
        let p = rows.len();
        if p < m {
            return None;
        }
        // column-major working copy of sqrt(W) X, plus sqrt(W) y
        let mut a = vec![0.0; p * m];
        let mut b = vec![0.0; p];
        for (r, &j) in rows.iter().enumerate() {
            let sw = w[j].sqrt();
            let xj = design.row(j);
            for c in 0..m {
                a[c * p + r] = sw * xj[c];
            }
            b[r] = sw * design.y[j];
        }
        let mut scale = vec![0.0; m];
        for c in 0..m {
            let col = &mut a[c * p..(c + 1) * p];
            let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return None;
            }
            col.iter_mut().for_each(|v| *v /= norm);
            scale[c] = norm;
        }

        for k in 0..m {
            let (head, tail) = a.split_at_mut((k + 1) * p);
            let col = &mut head[k * p..];
            let alpha = col[k..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if alpha == 0.0 {
                return None;
            }
            let alpha = if col[k] > 0.0 { -alpha } else { alpha };
            // v = x - alpha e_k, stored in place below the diagonal
            col[k] -= alpha;
            let vnorm2: f64 = col[k..].iter().map(|v| v * v).sum();
            if vnorm2 > 0.0 {
                for c in 0..(m - k - 1) {
                    let other = &mut tail[c * p..(c + 1) * p];
                    let dot: f64 = col[k..].iter().zip(&other[k..]).map(|(v, o)| v * o).sum();
                    let f = 2.0 * dot / vnorm2;
                    other[k..].iter_mut().zip(&col[k..]).for_each(|(o, v)| *o -= f * v);
                }
                let dot: f64 = col[k..].iter().zip(&b[k..]).map(|(v, o)| v * o).sum();
                let f = 2.0 * dot / vnorm2;
                b[k..].iter_mut().zip(&col[k..]).for_each(|(o, v)| *o -= f * v);
            }
            col[k] = alpha;
        }

        let mut r = vec![0.0; m * m];
        for c in 0..m {
            for row in 0..=c {
                r[row * m + c] = a[c * p + row];
            }
        }
        Some(Self {
            m,
            r,
            qty: b[..m].to_vec(),
            scale,
        })
    }

    /// Explicit inverse of the triangular factor.
    fn r_inverse(&self) -> Vec<f64> {
        let m = self.m;
        let mut inv = vec![0.0; m * m];
        for col in 0..m {
            for row in (0..=col).rev() {
                let rhs = if row == col { 1.0 } else { 0.0 };
                let acc: f64 = (row + 1..=col).map(|k| self.r[row * m + k] * inv[k * m + col]).sum();
                inv[row * m + col] = (rhs - acc) / self.r[row * m + row];
            }
        }
        inv
    }

    /// 1-norm reciprocal condition estimate of `R' R` from `R` and its
    /// inverse.
    fn rcond(&self, inv: &[f64]) -> f64 {
        let m = self.m;
        let norm1 = |mat: &[f64]| {
            (0..m)
                .map(|c| (0..m).map(|r| mat[r * m + c].abs()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        let rc = 1.0 / (norm1(&self.r) * norm1(inv));
        rc * rc
    }
}

/// Weighted least-squares fit at focal observation `focal`.
///
/// Fails with [`GwError::SingularFit`] when fewer than `m` observations
/// carry positive weight or `X'WX` is numerically singular.
pub fn local_wls(design: &Design, w: &[f64], focal: usize) -> Result<LocalFit> {
    if w.len() != design.n || focal >= design.n {
        return Err(GwError::InvalidInput(format!(
            "weight vector of length {} for {} observations (focal {focal})",
            w.len(),
            design.n
        )));
    }
    let singular = || GwError::SingularFit { focal };
    let fact = Factorization::new(design, w).ok_or_else(singular)?;
    let m = fact.m;
    if (0..m).any(|k| fact.r[k * m + k] == 0.0) {
        return Err(singular());
    }
    let inv = fact.r_inverse();
    let rcond = fact.rcond(&inv);
    if !(rcond >= RCOND_TOLERANCE) {
        return Err(singular());
    }

    let beta: Vec<f64> = (0..m)
        .map(|row| {
            let z: f64 = (row..m).map(|k| inv[row * m + k] * fact.qty[k]).sum();
            z / fact.scale[row]
        })
        .collect();

    let xi = design.row(focal);
    let fitted: f64 = xi.iter().zip(&beta).map(|(a, b)| a * b).sum();
    // hat_ii = w_i * |R^-T D^-1 x_i|^2
    let scaled: Vec<f64> = xi.iter().zip(&fact.scale).map(|(x, s)| x / s).collect();
    let quad: f64 = (0..m)
        .map(|c| {
            let t: f64 = (0..=c).map(|k| inv[k * m + c] * scaled[k]).sum();
            t * t
        })
        .sum();
    Ok(LocalFit {
        beta,
        fitted,
        hat_ii: w[focal] * quad,
    })
}
