//! Independent oracles and fixtures shared by the integration tests.
//!
//! Nothing here calls into the library's solvers: the regressions are
//! solved through explicit normal equations with Gaussian elimination.

#![allow(dead_code)]

use std::path::PathBuf;

use gwkit::gw::ObservationTable;
use gwkit::io::{read_csv_path, CoordColumns};
use rand::Rng;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for k in col..m {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; m];
    for row in (0..m).rev() {
        let acc: f64 = (row + 1..m).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - acc) / a[row][row];
    }
    Some(x)
}

/// `(X'WX)^-1 X'Wy` via explicit normal equations.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64], w: &[f64]) -> Option<Vec<f64>> {
    let m = x[0].len();
    let mut xtwx = vec![vec![0.0; m]; m];
    let mut xtwy = vec![0.0; m];
    for ((row, &yi), &wi) in x.iter().zip(y).zip(w) {
        for a in 0..m {
            xtwy[a] += wi * row[a] * yi;
            for b in 0..m {
                xtwx[a][b] += wi * row[a] * row[b];
            }
        }
    }
    solve(xtwx, xtwy)
}

/// Hat-matrix row entry `S_ii = x_i (X'WX)^-1 x_i' w_i`.
pub fn hat_diagonal(x: &[Vec<f64>], w: &[f64], i: usize) -> Option<f64> {
    let m = x[0].len();
    let mut xtwx = vec![vec![0.0; m]; m];
    for (row, &wi) in x.iter().zip(w) {
        for a in 0..m {
            for b in 0..m {
                xtwx[a][b] += wi * row[a] * row[b];
            }
        }
    }
    let z = solve(xtwx, x[i].clone())?;
    Some(w[i] * x[i].iter().zip(&z).map(|(a, b)| a * b).sum::<f64>())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Relative error with an absolute floor for values near zero.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

/// Global OLS AICc with `m` parameters.
pub fn global_aicc(n: usize, rss: f64, m: usize) -> f64 {
    let n = n as f64;
    let k = m as f64;
    n * (rss / n).ln() + n * (2.0 * std::f64::consts::PI).ln() + n * (n + k) / (n - 2.0 - k)
}

/// Brute-force kernel weights at `i`, written independently of the
/// library: sort by (distance, index), take the neighborhood, apply the
/// closed-form kernel.
pub fn brute_weights(
    coords: &[[f64; 2]],
    i: usize,
    shape: &str,
    adaptive: bool,
    bw: f64,
) -> Vec<f64> {
    let n = coords.len();
    let d: Vec<f64> = coords
        .iter()
        .map(|c| ((c[0] - coords[i][0]).powi(2) + (c[1] - coords[i][1]).powi(2)).sqrt())
        .collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap().then(a.cmp(&b)));
    let (members, b): (Vec<usize>, f64) = if adaptive {
        let k = bw as usize;
        let m: Vec<usize> = idx[..k].to_vec();
        let b = m.iter().map(|&j| d[j]).fold(0.0, f64::max);
        (m, b)
    } else {
        (idx.into_iter().filter(|&j| d[j] <= bw).collect(), bw)
    };
    let mut w = vec![0.0; n];
    for j in members {
        let r = d[j] / b;
        w[j] = match shape {
            "gaussian" => (-0.5 * r * r).exp(),
            "exponential" => (-r).exp(),
            "bisquare" => {
                if r < 1.0 {
                    (1.0 - r * r).powi(2)
                } else {
                    0.0
                }
            }
            "tricube" => {
                if r < 1.0 {
                    (1.0 - r.powi(3)).powi(3)
                } else {
                    0.0
                }
            }
            "boxcar" => {
                if d[j] <= b {
                    1.0
                } else {
                    0.0
                }
            }
            _ => unreachable!(),
        };
    }
    w
}

/// A random regression instance: distinct coordinates in the unit
/// square, `m - 1` predictors plus intercept, noisy linear response.
pub struct Instance {
    pub table: ObservationTable,
    pub coords: Vec<[f64; 2]>,
    pub rows: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub predictors: Vec<String>,
}

pub fn random_instance<R: Rng>(rng: &mut R, n: usize, m: usize) -> Instance {
    let coords: Vec<[f64; 2]> = (0..n)
        .map(|_| [rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)])
        .collect();
    let preds: Vec<Vec<f64>> = (1..m)
        .map(|_| (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())
        .collect();
    let beta: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let y: Vec<f64> = (0..n)
        .map(|i| {
            beta[0]
                + (1..m).map(|j| beta[j] * preds[j - 1][i]).sum::<f64>()
                + rng.gen_range(-1.0..1.0)
                + 0.02 * coords[i][0]
        })
        .collect();
    let predictors: Vec<String> = (1..m).map(|j| format!("x{j}")).collect();
    let mut cols = vec![("y".to_string(), y.clone())];
    for (j, p) in predictors.iter().enumerate() {
        cols.push((p.clone(), preds[j].clone()));
    }
    let rows = (0..n)
        .map(|i| {
            let mut r = vec![1.0];
            r.extend(preds.iter().map(|p| p[i]));
            r
        })
        .collect();
    Instance {
        table: ObservationTable::from_columns(coords.clone(), cols).unwrap(),
        coords,
        rows,
        y,
        predictors,
    }
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn test_data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

/// The georgia table: `GWKIT_GEORGIA_CSV` when set, otherwise the bundled
/// copy. Labels come from the `ID` column.
pub fn georgia_path() -> PathBuf {
    std::env::var_os("GWKIT_GEORGIA_CSV")
        .map(PathBuf::from)
        .unwrap_or_else(|| data_dir().join("georgia.csv"))
}

pub fn georgia() -> ObservationTable {
    let cols = CoordColumns {
        id: Some("ID".into()),
        ..CoordColumns::default()
    };
    read_csv_path(&georgia_path(), &cols).unwrap().table
}

/// Rows of a reference CSV as `(header, rows)`.
pub fn read_reference(name: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::Reader::from_path(test_data_dir().join(name)).unwrap();
    let header = rdr.headers().unwrap().iter().map(str::to_string).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.trim().parse().unwrap()).collect())
        .collect();
    (header, rows)
}
