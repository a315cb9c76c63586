use crate::error::{GwError, Result};
use crate::gw::distance::DistanceMatrix;
use crate::gw::kernel::{kernel_weights, Bandwidth, KernelSpec};

/// Observations selected around a focal point, in ascending distance
/// order (ties by lowest index).
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet {
    pub indices: Vec<usize>,
    pub dists: Vec<f64>,
}

impl NeighborSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Effective kernel bandwidth: `b` for a fixed bandwidth, the largest
    /// neighbor distance for an adaptive one.
    pub fn effective_bandwidth(&self, bw: Bandwidth) -> f64 {
        match bw {
            Bandwidth::Fixed(b) => b,
            Bandwidth::Adaptive(_) => self.dists.last().copied().unwrap_or(0.0),
        }
    }
}

/// Indices of `dist_row` sorted by `(distance, index)`.
pub fn sorted_order(dist_row: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dist_row.len()).collect();
    order.sort_by(|&a, &b| dist_row[a].total_cmp(&dist_row[b]).then(a.cmp(&b)));
    order
}

/// Length of the prefix of `order` selected by `bw`.
fn selected_len(dist_row: &[f64], order: &[usize], bw: Bandwidth) -> usize {
    match bw {
        Bandwidth::Fixed(b) => order.partition_point(|&j| dist_row[j] <= b),
        Bandwidth::Adaptive(k) => k,
    }
}

/// Observations near a focal point for bandwidth `bw`.
///
/// Fixed bandwidths select every observation within distance `b`;
/// adaptive bandwidths select exactly the `k` nearest.
pub fn nearby(dist_row: &[f64], bw: Bandwidth) -> Result<NeighborSet> {
    bw.validate(dist_row.len())?;
    if let Some(j) = dist_row.iter().position(|d| !d.is_finite() || *d < 0.0) {
        return Err(GwError::InvalidInput(format!(
            "distance at index {j} is not a finite non-negative number"
        )));
    }
    let order = sorted_order(dist_row);
    let len = selected_len(dist_row, &order, bw);
    Ok(collect_set(dist_row, &order[..len]))
}

fn collect_set(dist_row: &[f64], selected: &[usize]) -> NeighborSet {
    NeighborSet {
        indices: selected.to_vec(),
        dists: selected.iter().map(|&j| dist_row[j]).collect(),
    }
}

/// Per-row neighbor orderings of a distance matrix, sorted once so that
/// repeated bandwidth evaluations only take prefixes.
#[derive(Debug, Clone)]
pub struct NeighborOrder {
    orders: Vec<Vec<usize>>,
}

impl NeighborOrder {
    pub fn new(dist_mat: &DistanceMatrix) -> Self {
        use rayon::prelude::*;
        let orders = (0..dist_mat.n())
            .into_par_iter()
            .map(|i| sorted_order(dist_mat.row(i)))
            .collect();
        Self { orders }
    }

    /// Same result as [`nearby`] on row `i`, without re-sorting.
    pub fn select(&self, dist_mat: &DistanceMatrix, i: usize, bw: Bandwidth) -> Result<NeighborSet> {
        bw.validate(dist_mat.n())?;
        let row = dist_mat.row(i);
        let order = &self.orders[i];
        Ok(collect_set(row, &order[..selected_len(row, order, bw)]))
    }
}

/// Length-`n` kernel weights for one focal point; zero outside the
/// neighbor set.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.0.iter().filter(|&&w| w > 0.0).count()
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;
    fn index(&self, j: usize) -> &f64 {
        &self.0[j]
    }
}

/// Scatters kernel weights over a neighbor set into a length-`n` vector.
pub fn weights_from_neighbors(
    n: usize,
    focal: usize,
    set: &NeighborSet,
    spec: &KernelSpec,
    bw: Bandwidth,
) -> Result<WeightVector> {
    let b_local = set.effective_bandwidth(bw);
    let local = kernel_weights(spec.shape, &set.dists, b_local).map_err(|e| match e {
        GwError::InvalidBandwidth(_) if b_local == 0.0 => GwError::DegenerateGeometry { focal },
        other => other,
    })?;
    let mut w = vec![0.0; n];
    for (&j, wj) in set.indices.iter().zip(local) {
        w[j] = wj;
    }
    Ok(WeightVector(w))
}

/// Kernel weights of every observation relative to focal point `i`.
pub fn weights_at(
    dist_mat: &DistanceMatrix,
    i: usize,
    spec: &KernelSpec,
    bw: Bandwidth,
) -> Result<WeightVector> {
    if i >= dist_mat.n() {
        return Err(GwError::InvalidInput(format!(
            "focal index {i} out of range for {} observations",
            dist_mat.n()
        )));
    }
    bw.check_kind(spec)?;
    let set = nearby(dist_mat.row(i), bw)?;
    weights_from_neighbors(dist_mat.n(), i, &set, spec, bw)
}
