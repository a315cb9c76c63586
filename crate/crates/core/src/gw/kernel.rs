use std::fmt;
use std::str::FromStr;

use crate::error::{GwError, Result};
use crate::gw::distance::Metric;

/// Distance-decay kernel shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelShape {
    Gaussian,
    Exponential,
    Bisquare,
    Tricube,
    Boxcar,
}

impl KernelShape {
    pub const ALL: [KernelShape; 5] = [
        KernelShape::Gaussian,
        KernelShape::Exponential,
        KernelShape::Bisquare,
        KernelShape::Tricube,
        KernelShape::Boxcar,
    ];

    /// Weight at distance `d` for bandwidth `b > 0`.
    ///
    /// Gaussian and exponential never reach zero on their own; truncation
    /// to the neighbor set happens in [`crate::gw::weights_at`].
    pub fn weight(self, d: f64, b: f64) -> f64 {
        let r = d / b;
        match self {
            KernelShape::Gaussian => (-0.5 * r * r).exp(),
            KernelShape::Exponential => (-r).exp(),
            KernelShape::Bisquare => {
                if r < 1.0 {
                    let t = 1.0 - r * r;
                    t * t
                } else {
                    0.0
                }
            }
            KernelShape::Tricube => {
                if r < 1.0 {
                    let t = 1.0 - r * r * r;
                    t * t * t
                } else {
                    0.0
                }
            }
            KernelShape::Boxcar => {
                if d <= b {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn has_compact_support(self) -> bool {
        matches!(
            self,
            KernelShape::Bisquare | KernelShape::Tricube | KernelShape::Boxcar
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelShape::Gaussian => "gaussian",
            KernelShape::Exponential => "exponential",
            KernelShape::Bisquare => "bisquare",
            KernelShape::Tricube => "tricube",
            KernelShape::Boxcar => "boxcar",
        }
    }
}

impl fmt::Display for KernelShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelShape {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        KernelShape::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GwError::Config(format!("unknown kernel '{s}'")))
    }
}

/// Kernel weights for a set of neighbor distances under effective
/// bandwidth `b_local`.
///
/// A zero `b_local` is only meaningful for the boxcar, which then gives
/// every neighbor weight one.
pub fn kernel_weights(shape: KernelShape, dists: &[f64], b_local: f64) -> Result<Vec<f64>> {
    if !(b_local >= 0.0) || !b_local.is_finite() {
        return Err(GwError::InvalidBandwidth(format!(
            "effective bandwidth must be finite and non-negative, got {b_local}"
        )));
    }
    if b_local == 0.0 {
        return match shape {
            KernelShape::Boxcar => Ok(vec![1.0; dists.len()]),
            _ => Err(GwError::InvalidBandwidth(
                "zero effective bandwidth for a distance-decay kernel".into(),
            )),
        };
    }
    Ok(dists.iter().map(|&d| shape.weight(d, b_local)).collect())
}

/// The user's kernel choices: shape, bandwidth type and distance metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub shape: KernelShape,
    pub adaptive: bool,
    pub metric: Metric,
}

impl KernelSpec {
    pub fn new(shape: KernelShape, adaptive: bool) -> Self {
        Self {
            shape,
            adaptive,
            metric: Metric::Euclidean,
        }
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }
}

/// Kernel reach: a fixed distance or a nearest-neighbor count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    Fixed(f64),
    Adaptive(usize),
}

impl Bandwidth {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Bandwidth::Fixed(b) if b.is_finite() && b > 0.0 => Ok(()),
            Bandwidth::Fixed(b) => Err(GwError::InvalidBandwidth(format!(
                "fixed bandwidth must be positive and finite, got {b}"
            ))),
            Bandwidth::Adaptive(k) if (1..=n).contains(&k) => Ok(()),
            Bandwidth::Adaptive(k) => Err(GwError::InvalidBandwidth(format!(
                "adaptive bandwidth must lie in 1..={n}, got {k}"
            ))),
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, Bandwidth::Adaptive(_))
    }

    /// The bandwidth as a real number (distance or neighbor count).
    pub fn value(&self) -> f64 {
        match *self {
            Bandwidth::Fixed(b) => b,
            Bandwidth::Adaptive(k) => k as f64,
        }
    }

    /// Checks that the bandwidth kind agrees with `spec.adaptive`.
    pub fn check_kind(&self, spec: &KernelSpec) -> Result<()> {
        if self.is_adaptive() != spec.adaptive {
            return Err(GwError::InvalidBandwidth(format!(
                "{} bandwidth used with a {} kernel",
                if self.is_adaptive() { "adaptive" } else { "fixed" },
                if spec.adaptive { "adaptive" } else { "fixed" },
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Bandwidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bandwidth::Fixed(b) => write!(f, "{b}"),
            Bandwidth::Adaptive(k) => write!(f, "{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisquare_half_bandwidth() {
        let b = 4.0;
        let w = kernel_weights(KernelShape::Bisquare, &[0.0, b / 2.0, b], b).unwrap();
        assert_eq!(w, vec![1.0, 0.5625, 0.0]);
    }

    #[test]
    fn gaussian_at_zero() {
        assert_eq!(kernel_weights(KernelShape::Gaussian, &[0.0], 3.7).unwrap(), vec![1.0]);
    }

    #[test]
    fn adaptive_bisquare_zeroes_farthest() {
        let dists = [0.0, 1.0, 2.0];
        let bw = dists.iter().copied().fold(0.0, f64::max);
        let w = kernel_weights(KernelShape::Bisquare, &dists, bw).unwrap();
        assert_eq!(w, vec![1.0, 0.5625, 0.0]);
    }

    #[test]
    fn tricube_and_exponential_values() {
        let w = kernel_weights(KernelShape::Tricube, &[0.5], 1.0).unwrap();
        assert!((w[0] - (1.0f64 - 0.125).powi(3)).abs() < 1e-15);
        let w = kernel_weights(KernelShape::Exponential, &[2.0], 1.0).unwrap();
        assert!((w[0] - (-2.0f64).exp()).abs() < 1e-15);
        let w = kernel_weights(KernelShape::Gaussian, &[1.0], 1.0).unwrap();
        assert!((w[0] - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn boxcar_is_inclusive() {
        let w = kernel_weights(KernelShape::Boxcar, &[0.0, 1.0, 1.0 + 1e-9], 1.0).unwrap();
        assert_eq!(w, vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn zero_bandwidth() {
        assert_eq!(
            kernel_weights(KernelShape::Boxcar, &[0.0, 0.0], 0.0).unwrap(),
            vec![1.0, 1.0]
        );
        for shape in [
            KernelShape::Gaussian,
            KernelShape::Exponential,
            KernelShape::Bisquare,
            KernelShape::Tricube,
        ] {
            assert!(kernel_weights(shape, &[0.0], 0.0).is_err());
        }
    }

    #[test]
    fn parse_names() {
        for k in KernelShape::ALL {
            assert_eq!(k.name().parse::<KernelShape>().unwrap(), k);
        }
        assert!("Bisquare".parse::<KernelShape>().is_err());
    }

    #[test]
    fn bandwidth_validation() {
        assert!(Bandwidth::Fixed(1.0).validate(3).is_ok());
        assert!(Bandwidth::Fixed(0.0).validate(3).is_err());
        assert!(Bandwidth::Fixed(f64::INFINITY).validate(3).is_err());
        assert!(Bandwidth::Adaptive(3).validate(3).is_ok());
        assert!(Bandwidth::Adaptive(4).validate(3).is_err());
        assert!(Bandwidth::Adaptive(0).validate(3).is_err());
        let spec = KernelSpec::new(KernelShape::Bisquare, true);
        assert!(Bandwidth::Adaptive(2).check_kind(&spec).is_ok());
        assert!(Bandwidth::Fixed(2.0).check_kind(&spec).is_err());
    }
}
