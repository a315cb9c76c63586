mod common;

use common::brute_weights;
use gwkit::gw::{
    distance_matrix_from_coords, kernel_weights, nearby, weights_at, Bandwidth, KernelShape,
    KernelSpec, Metric,
};
use gwkit::GwError;
use proptest::prelude::*;

fn coords_strategy(max: usize) -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec(
        (-1e4f64..1e4, -1e4f64..1e4).prop_map(|(x, y)| [x, y]),
        2..max,
    )
}

fn shape_strategy() -> impl Strategy<Value = KernelShape> {
    prop::sample::select(KernelShape::ALL.to_vec())
}

proptest! {
    #[test]
    fn distances_are_a_metric(coords in coords_strategy(12), p in 1.0f64..4.0) {
        for metric in [Metric::Euclidean, Metric::Minkowski(p)] {
            let dm = distance_matrix_from_coords(&coords, metric).unwrap();
            let n = coords.len();
            for i in 0..n {
                prop_assert_eq!(dm.get(i, i), 0.0);
                for j in 0..n {
                    prop_assert_eq!(dm.get(i, j), dm.get(j, i));
                    prop_assert!(dm.get(i, j) >= 0.0);
                    for k in 0..n {
                        let slack = 1e-9 * (dm.get(i, j) + dm.get(j, k)).max(1.0);
                        prop_assert!(dm.get(i, k) <= dm.get(i, j) + dm.get(j, k) + slack);
                    }
                }
            }
        }
    }

    #[test]
    fn minkowski_two_is_euclidean(coords in coords_strategy(10)) {
        let e = distance_matrix_from_coords(&coords, Metric::Euclidean).unwrap();
        let m = distance_matrix_from_coords(&coords, Metric::Minkowski(2.0)).unwrap();
        for i in 0..coords.len() {
            for j in 0..coords.len() {
                prop_assert!((e.get(i, j) - m.get(i, j)).abs() <= 1e-12 * e.get(i, j).max(1.0));
            }
        }
    }

    #[test]
    fn kernel_weights_are_bounded_and_decreasing(
        shape in shape_strategy(),
        b in 1e-3f64..1e6,
        mut ds in prop::collection::vec(0.0f64..3.0, 1..20),
    ) {
        ds.sort_by(f64::total_cmp);
        let dists: Vec<f64> = ds.iter().map(|r| r * b).collect();
        let w = kernel_weights(shape, &dists, b).unwrap();
        for pair in w.windows(2) {
            prop_assert!(pair[1] <= pair[0]);
        }
        for (&d, &wi) in dists.iter().zip(&w) {
            prop_assert!((0.0..=1.0).contains(&wi));
            if shape.has_compact_support() && d > b {
                prop_assert_eq!(wi, 0.0);
            }
        }
        prop_assert_eq!(shape.weight(0.0, b), 1.0);
    }

    #[test]
    fn bisquare_and_tricube_vanish_at_the_bandwidth(b in 1e-3f64..1e6) {
        prop_assert_eq!(KernelShape::Bisquare.weight(b, b), 0.0);
        prop_assert_eq!(KernelShape::Tricube.weight(b, b), 0.0);
        prop_assert_eq!(KernelShape::Boxcar.weight(b, b), 1.0);
    }

    #[test]
    fn adaptive_neighborhood_has_exactly_k_members(
        coords in coords_strategy(25),
        k_frac in 0.0f64..1.0,
        i_frac in 0.0f64..1.0,
    ) {
        let n = coords.len();
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let i = ((n - 1) as f64 * i_frac) as usize;
        let dm = distance_matrix_from_coords(&coords, Metric::Euclidean).unwrap();
        let set = nearby(dm.row(i), Bandwidth::Adaptive(k)).unwrap();
        prop_assert_eq!(set.len(), k);
        prop_assert!(set.indices.contains(&i));
        let radius = set.dists.iter().copied().fold(0.0, f64::max);
        let outside = (0..n).filter(|j| !set.indices.contains(j));
        for j in outside {
            prop_assert!(dm.get(i, j) >= radius);
        }
    }

    #[test]
    fn fixed_neighborhood_is_the_closed_ball(
        coords in coords_strategy(25),
        b in 0.0f64..2e4,
    ) {
        let dm = distance_matrix_from_coords(&coords, Metric::Euclidean).unwrap();
        let set = nearby(dm.row(0), Bandwidth::Fixed(b)).unwrap();
        let want: Vec<usize> = (0..coords.len()).filter(|&j| dm.get(0, j) <= b).collect();
        let mut got = set.indices.clone();
        got.sort_unstable();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn weights_match_brute_force(
        coords in coords_strategy(20),
        shape in shape_strategy(),
        adaptive in any::<bool>(),
        frac in 0.05f64..1.0,
    ) {
        let n = coords.len();
        let dm = distance_matrix_from_coords(&coords, Metric::Euclidean).unwrap();
        let bw = if adaptive {
            Bandwidth::Adaptive((2 + ((n - 2) as f64 * frac) as usize).min(n))
        } else {
            Bandwidth::Fixed(dm.max_distance() * frac + 1.0)
        };
        let spec = KernelSpec::new(shape, adaptive);
        for i in 0..n {
            match weights_at(&dm, i, &spec, bw) {
                Ok(w) => {
                    prop_assert_eq!(w[i], 1.0);
                    let want = brute_weights(&coords, i, shape.name(), adaptive, bw.value());
                    for (g, e) in w.as_slice().iter().zip(&want) {
                        prop_assert!((g - e).abs() <= 1e-12);
                    }
                }
                // every neighbor coincides with the focal point
                Err(GwError::DegenerateGeometry { focal }) => prop_assert_eq!(focal, i),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }

    #[test]
    fn weights_follow_a_permutation(
        coords in coords_strategy(15),
        shape in shape_strategy(),
        rot in 1usize..14,
    ) {
        let n = coords.len();
        let rot = rot % n;
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let permuted: Vec<[f64; 2]> = perm.iter().map(|&p| coords[p]).collect();
        let a = distance_matrix_from_coords(&coords, Metric::Euclidean).unwrap();
        let b = distance_matrix_from_coords(&permuted, Metric::Euclidean).unwrap();
        let bw = Bandwidth::Fixed(a.max_distance() * 0.7 + 1.0);
        let spec = KernelSpec::new(shape, false);
        for i in 0..n {
            let wa = weights_at(&a, perm[i], &spec, bw).unwrap();
            let wb = weights_at(&b, i, &spec, bw).unwrap();
            for j in 0..n {
                prop_assert_eq!(wb[j], wa[perm[j]]);
            }
        }
    }
}

#[test]
fn coincident_points_are_degenerate_except_for_boxcar() {
    let coords = vec![[1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [5.0, 5.0]];
    let dm = distance_matrix_from_coords(&coords, Metric::Euclidean).unwrap();
    let bisquare = KernelSpec::new(KernelShape::Bisquare, true);
    let err = weights_at(&dm, 0, &bisquare, Bandwidth::Adaptive(3)).unwrap_err();
    assert!(matches!(err, GwError::DegenerateGeometry { focal: 0 }));
    let boxcar = KernelSpec::new(KernelShape::Boxcar, true);
    let w = weights_at(&dm, 0, &boxcar, Bandwidth::Adaptive(3)).unwrap();
    assert_eq!(w.as_slice(), &[1.0, 1.0, 1.0, 0.0]);
}

#[test]
fn ties_break_by_lowest_index() {
    let coords = vec![[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]];
    let dm = distance_matrix_from_coords(&coords, Metric::Euclidean).unwrap();
    let set = nearby(dm.row(0), Bandwidth::Adaptive(3)).unwrap();
    assert_eq!(set.indices, vec![0, 1, 2]);
}
