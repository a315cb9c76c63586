//! Foundational toolkit shared by every application module: observation
//! tables, distance matrices, neighbor selection and kernel weights.

pub mod distance;
pub mod kernel;
pub mod neighbors;
pub mod table;

pub use distance::{build_distance_matrix, distance_matrix_from_coords, DistanceMatrix, Metric};
pub use kernel::{kernel_weights, Bandwidth, KernelShape, KernelSpec};
pub use neighbors::{
    nearby, sorted_order, weights_at, weights_from_neighbors, NeighborOrder, NeighborSet,
    WeightVector,
};
pub use table::{Attribute, ObservationTable};
