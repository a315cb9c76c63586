//! Geographically weighted summary statistics: local weighted mean,
//! standard deviation, skew and median of one variable.
//!
//! Moments are weight-normalized population moments (no small-sample
//! correction), so uniform weights reduce exactly to the plain statistics
//! of the neighbors.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{GwError, Result};
use crate::gw::{build_distance_matrix, weights_at, Bandwidth, KernelSpec, ObservationTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummaryStat {
    Mean,
    Std,
    Skew,
    Median,
}

impl SummaryStat {
    pub const ALL: [SummaryStat; 4] = [
        SummaryStat::Mean,
        SummaryStat::Std,
        SummaryStat::Skew,
        SummaryStat::Median,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SummaryStat::Mean => "mean",
            SummaryStat::Std => "std",
            SummaryStat::Skew => "skew",
            SummaryStat::Median => "median",
        }
    }
}

impl fmt::Display for SummaryStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SummaryStat {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        SummaryStat::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GwError::Config(format!("unknown statistic '{s}'")))
    }
}

/// Weighted statistics of one neighborhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalStats {
    pub mean: f64,
    pub std: f64,
    pub skew: f64,
    pub median: f64,
    /// True when the standard deviation is zero and skew was set to 0.
    pub zero_spread: bool,
}

/// Weighted mean, standard deviation, skew and median of `values`.
/// Entries with non-positive weight are ignored.
pub fn weighted_stats(values: &[f64], weights: &[f64]) -> Result<LocalStats> {
    if values.len() != weights.len() {
        return Err(GwError::InvalidInput(format!(
            "{} values but {} weights",
            values.len(),
            weights.len()
        )));
    }
    let mut pts: Vec<(f64, f64)> = values
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&x, &w)| (x, w))
        .collect();
    if pts.is_empty() {
        return Err(GwError::InvalidInput("no positive weights".into()));
    }
    if pts.len() == 1 {
        let x = pts[0].0;
        return Ok(LocalStats {
            mean: x,
            std: 0.0,
            skew: 0.0,
            median: x,
            zero_spread: true,
        });
    }

    let sw: f64 = pts.iter().map(|(_, w)| w).sum();
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mean = (pts.iter().map(|(x, w)| w * x).sum::<f64>() / sw).clamp(lo, hi);
    let m2 = pts.iter().map(|(x, w)| w * (x - mean).powi(2)).sum::<f64>() / sw;
    let m3 = pts.iter().map(|(x, w)| w * (x - mean).powi(3)).sum::<f64>() / sw;
    let std = m2.sqrt();
    let scale = lo.abs().max(hi.abs());
    let zero_spread = lo == hi || std <= 16.0 * f64::EPSILON * scale;
    let (std, skew) = if zero_spread {
        (if lo == hi { 0.0 } else { std }, 0.0)
    } else {
        (std, m3 / (std * std * std))
    };

    // stable sort keeps input order among equal values
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half = 0.5 * sw;
    let mut cum = 0.0;
    let mut median = pts[pts.len() - 1].0;
    for &(x, w) in &pts {
        cum += w;
        if cum >= half {
            median = x;
            break;
        }
    }
    Ok(LocalStats {
        mean,
        std,
        skew,
        median,
        zero_spread,
    })
}

/// One statistic at every location.
#[derive(Debug, Clone, PartialEq)]
pub struct SummarySurface {
    pub stat: SummaryStat,
    pub variable: String,
    pub values: Vec<f64>,
    /// Locations where the local standard deviation was zero; skew is
    /// recorded as 0 there.
    pub zero_spread: Vec<bool>,
    pub bandwidth: Bandwidth,
    pub spec: KernelSpec,
}

/// Local summary statistics of `variable` for each requested stat, in the
/// order requested.
pub fn gw_summary(
    table: &ObservationTable,
    variable: &str,
    spec: KernelSpec,
    bw: Bandwidth,
    stats: &[SummaryStat],
) -> Result<Vec<SummarySurface>> {
    let values = table
        .attribute(variable)
        .ok_or_else(|| GwError::Config(format!("variable '{variable}' not found in data")))?;
    bw.validate(table.len())?;
    bw.check_kind(&spec)?;
    let dist = build_distance_matrix(table, spec.metric)?;
    let locals: Vec<Result<LocalStats>> = (0..table.len())
        .into_par_iter()
        .map(|i| {
            let w = weights_at(&dist, i, &spec, bw)?;
            weighted_stats(values, w.as_slice())
        })
        .collect();
    let locals = locals.into_iter().collect::<Result<Vec<_>>>()?;
    let zero_spread: Vec<bool> = locals.iter().map(|s| s.zero_spread).collect();
    Ok(stats
        .iter()
        .map(|&stat| SummarySurface {
            stat,
            variable: variable.to_string(),
            values: locals
                .iter()
                .map(|s| match stat {
                    SummaryStat::Mean => s.mean,
                    SummaryStat::Std => s.std,
                    SummaryStat::Skew => s.skew,
                    SummaryStat::Median => s.median,
                })
                .collect(),
            zero_spread: zero_spread.clone(),
            bandwidth: bw,
            spec,
        })
        .collect())
}
