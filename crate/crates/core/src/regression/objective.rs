use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{GwError, Result};
use crate::gw::{
    build_distance_matrix, weights_from_neighbors, Bandwidth, DistanceMatrix, KernelSpec,
    NeighborOrder, ObservationTable, WeightVector,
};
use crate::regression::formula::{Design, FormulaSpec};
use crate::regression::wls::{local_wls, LocalFit};

/// Bandwidth selection criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    AICc,
    CV,
}

impl FromStr for Criterion {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aic" | "aicc" => Ok(Criterion::AICc),
            "cv" => Ok(Criterion::CV),
            _ => Err(GwError::Config(format!("unknown criterion '{s}'"))),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::AICc => "aic",
            Criterion::CV => "cv",
        })
    }
}

/// Corrected AIC of a GWR fit from its residual sum of squares and the
/// trace of the hat matrix. Infinite when `n - 2 - tr(S) <= 0`.
pub fn aicc_from_parts(n: usize, rss: f64, trace_s: f64) -> f64 {
    let n = n as f64;
    let denom = n - 2.0 - trace_s;
    if !(denom > 0.0) || !rss.is_finite() {
        return f64::INFINITY;
    }
    let sigma = (rss / n).sqrt();
    2.0 * n * sigma.ln() + n * (2.0 * PI).ln() + n * (n + trace_s) / denom
}

/// Residual sum of squares and hat-matrix trace at one bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSummary {
    pub rss: f64,
    pub trace_s: f64,
}

/// Anything that scores candidate bandwidths; lower is better.
pub trait BandwidthEvaluator: Sync {
    fn evaluate(&self, bw: Bandwidth) -> f64;

    fn adaptive(&self) -> bool;

    /// Score at a real-valued bandwidth. Adaptive evaluators use the
    /// neighbor count `floor(b)`.
    fn evaluate_continuous(&self, b: f64) -> f64 {
        self.evaluate(continuous_bandwidth(b, self.adaptive()))
    }
}

/// Maps a real bandwidth to a [`Bandwidth`]; adaptive counts are floored.
pub fn continuous_bandwidth(b: f64, adaptive: bool) -> Bandwidth {
    if adaptive {
        let k = if b.is_finite() && b >= 0.0 { b.floor() as usize } else { 0 };
        Bandwidth::Adaptive(k)
    } else {
        Bandwidth::Fixed(b)
    }
}

/// Evaluation context for one dataset, formula, kernel and criterion.
///
/// The distance matrix, neighbor orderings and design are computed once
/// at construction; every evaluation reuses them.
#[derive(Debug, Clone)]
pub struct BandwidthObjective {
    dist: DistanceMatrix,
    order: NeighborOrder,
    design: Design,
    spec: KernelSpec,
    criterion: Criterion,
    formula: FormulaSpec,
    warnings: Vec<String>,
}

impl BandwidthObjective {
    pub fn new(
        table: &ObservationTable,
        formula: &FormulaSpec,
        spec: KernelSpec,
        criterion: Criterion,
    ) -> Result<Self> {
        let design = formula.design(table)?;
        if design.n < design.m + 2 {
            return Err(GwError::Config(format!(
                "{} observations are too few for {} coefficients (need at least {})",
                design.n,
                design.m,
                design.m + 2
            )));
        }
        let warnings = design
            .constant_columns()
            .into_iter()
            .map(|j| {
                format!(
                    "predictor '{}' is constant; local fits may be singular",
                    design.names[j]
                )
            })
            .collect();
        let dist = build_distance_matrix(table, spec.metric)?;
        let order = NeighborOrder::new(&dist);
        Ok(Self {
            dist,
            order,
            design,
            spec,
            criterion,
            formula: formula.clone(),
            warnings,
        })
    }

    pub fn n(&self) -> usize {
        self.design.n
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dist
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn criterion(&self) -> Criterion {
        self.criterion
    }

    pub fn formula(&self) -> &FormulaSpec {
        &self.formula
    }

    /// Non-fatal configuration problems found at construction.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Same context, different criterion; shares nothing mutable.
    pub fn with_criterion(&self, criterion: Criterion) -> Self {
        Self {
            criterion,
            ..self.clone()
        }
    }

    /// Kernel weights at location `i`.
    pub fn weights(&self, i: usize, bw: Bandwidth) -> Result<WeightVector> {
        bw.check_kind(&self.spec)?;
        let set = self.order.select(&self.dist, i, bw)?;
        weights_from_neighbors(self.n(), i, &set, &self.spec, bw)
    }

    /// Local fit at `i` with the full kernel weights.
    pub fn local_fit(&self, i: usize, bw: Bandwidth) -> Result<LocalFit> {
        let w = self.weights(i, bw)?;
        local_wls(&self.design, w.as_slice(), i)
    }

    /// Leave-one-out prediction at `i`: the focal weight is zeroed within
    /// the otherwise unchanged neighbor set.
    pub fn loo_prediction(&self, i: usize, bw: Bandwidth) -> Result<f64> {
        let mut w = self.weights(i, bw)?.into_inner();
        w[i] = 0.0;
        Ok(local_wls(&self.design, &w, i)?.fitted)
    }

    /// RSS and tr(S) over all locations. Reductions run in location order.
    pub fn fit_summary(&self, bw: Bandwidth) -> Result<FitSummary> {
        let fits: Vec<(f64, f64)> = (0..self.n())
            .into_par_iter()
            .map(|i| self.local_fit(i, bw).map(|f| (f.fitted, f.hat_ii)))
            .collect::<Result<_>>()?;
        let mut rss = 0.0;
        let mut trace_s = 0.0;
        for (i, (fitted, hat)) in fits.into_iter().enumerate() {
            let e = self.design.y[i] - fitted;
            rss += e * e;
            trace_s += hat;
        }
        Ok(FitSummary { rss, trace_s })
    }

    /// Sum of squared leave-one-out prediction errors.
    pub fn cv_sum(&self, bw: Bandwidth) -> Result<f64> {
        let preds: Vec<f64> = (0..self.n())
            .into_par_iter()
            .map(|i| self.loo_prediction(i, bw))
            .collect::<Result<_>>()?;
        Ok(preds
            .into_iter()
            .zip(&self.design.y)
            .map(|(p, y)| (y - p) * (y - p))
            .fold(0.0, |acc, e| acc + e))
    }

    pub fn aicc_score(&self, bw: Bandwidth) -> f64 {
        match self.fit_summary(bw) {
            Ok(s) => aicc_from_parts(self.n(), s.rss, s.trace_s),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn cv_score(&self, bw: Bandwidth) -> f64 {
        self.cv_sum(bw).unwrap_or(f64::INFINITY)
    }
}

impl BandwidthEvaluator for BandwidthObjective {
    fn evaluate(&self, bw: Bandwidth) -> f64 {
        let score = match self.criterion {
            Criterion::AICc => self.aicc_score(bw),
            Criterion::CV => self.cv_score(bw),
        };
        if score.is_nan() {
            f64::INFINITY
        } else {
            score
        }
    }

    fn adaptive(&self) -> bool {
        self.spec.adaptive
    }
}

/// Builds a [`BandwidthObjective`].
pub fn make_objective(
    table: &ObservationTable,
    formula: &FormulaSpec,
    spec: KernelSpec,
    criterion: Criterion,
) -> Result<BandwidthObjective> {
    BandwidthObjective::new(table, formula, spec, criterion)
}

pub fn aicc_score(obj: &BandwidthObjective, bw: Bandwidth) -> f64 {
    obj.aicc_score(bw)
}

pub fn cv_score(obj: &BandwidthObjective, bw: Bandwidth) -> f64 {
    obj.cv_score(bw)
}
