use rayon::prelude::*;

use crate::error::{GwError, Result};
use crate::gw::table::ObservationTable;

/// Distance metric on planar coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    /// Minkowski distance with exponent `p >= 1`.
    Minkowski(f64),
}

impl Metric {
    pub fn minkowski(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(GwError::InvalidInput(format!(
                "Minkowski exponent must be finite and >= 1, got {p}"
            )));
        }
        Ok(Metric::Minkowski(p))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Metric::Euclidean => Ok(()),
            Metric::Minkowski(p) => Metric::minkowski(p).map(|_| ()),
        }
    }

    pub fn distance(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let dx = (a[0] - b[0]).abs();
        let dy = (a[1] - b[1]).abs();
        match *self {
            Metric::Euclidean => dx.hypot(dy),
            Metric::Minkowski(1.0) => dx + dy,
            Metric::Minkowski(p) => {
                // scale by the larger component so large projected
                // coordinates cannot overflow under powf
                let scale = dx.max(dy);
                if scale == 0.0 {
                    return 0.0;
                }
                let (u, v) = (dx / scale, dy / scale);
                scale * (u.powf(p) + v.powf(p)).powf(1.0 / p)
            }
        }
    }
}

/// Dense symmetric `n x n` matrix of pairwise distances, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn max_distance(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }
}

/// Builds the full pairwise distance matrix of `table` under `metric`.
pub fn build_distance_matrix(table: &ObservationTable, metric: Metric) -> Result<DistanceMatrix> {
    metric.validate()?;
    distance_matrix_from_coords(table.coords(), metric)
}

pub fn distance_matrix_from_coords(coords: &[[f64; 2]], metric: Metric) -> Result<DistanceMatrix> {
    metric.validate()?;
    let n = coords.len();
    if n == 0 {
        return Err(GwError::InvalidInput("no coordinates".into()));
    }
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, d) in row.iter_mut().enumerate() {
            *d = if i == j {
                0.0
            } else {
                metric.distance(coords[i], coords[j])
            };
        }
    });
    Ok(DistanceMatrix { n, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(coords: &[[f64; 2]], metric: Metric) -> DistanceMatrix {
        distance_matrix_from_coords(coords, metric).unwrap()
    }

    #[test]
    fn three_four_five() {
        let d = dm(&[[0.0, 0.0], [3.0, 4.0]], Metric::Euclidean);
        assert_eq!(d.row(0), &[0.0, 5.0]);
        assert_eq!(d.row(1), &[5.0, 0.0]);
    }

    #[test]
    fn manhattan() {
        let d = dm(&[[0.0, 0.0], [1.0, 1.0]], Metric::Minkowski(1.0));
        assert_eq!(d.get(0, 1), 2.0);
    }

    #[test]
    fn georgia_first_pair() {
        let d = dm(
            &[[941396.6, 3521764.0], [895553.0, 3471916.0]],
            Metric::Euclidean,
        );
        let expected = (45843.6f64 * 45843.6 + 49848.0 * 49848.0).sqrt();
        assert!((d.get(0, 1) - expected).abs() < 1e-6);
        assert!((d.get(0, 1) - 67723.399).abs() < 1e-3);
    }

    #[test]
    fn minkowski_two_matches_euclidean() {
        let a = [941396.6, 3521764.0];
        let b = [895553.0, 3471916.0];
        let e = Metric::Euclidean.distance(a, b);
        let m = Metric::Minkowski(2.0).distance(a, b);
        assert!(((e - m) / e).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(Metric::minkowski(0.5).is_err());
        assert!(Metric::minkowski(f64::NAN).is_err());
        assert!(distance_matrix_from_coords(&[[0.0, 0.0]], Metric::Minkowski(0.2)).is_err());
        assert!(distance_matrix_from_coords(&[], Metric::Euclidean).is_err());
    }
}
