use rayon::prelude::*;

use crate::error::Result;
use crate::gw::{Bandwidth, KernelSpec, ObservationTable};
use crate::regression::formula::FormulaSpec;
use crate::regression::objective::{aicc_from_parts, BandwidthObjective, Criterion};

/// Coefficient surface and diagnostics of a GWR fit.
#[derive(Debug, Clone, PartialEq)]
pub struct GwrResult {
    /// Row-major `n x m` coefficients; intercept column first.
    pub coef: Vec<f64>,
    pub n: usize,
    pub m: usize,
    pub coef_names: Vec<String>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Per-location hat-matrix diagonal.
    pub leverage: Vec<f64>,
    pub rss: f64,
    pub trace_s: f64,
    pub aicc: f64,
    pub cv: f64,
    pub bandwidth: Bandwidth,
    pub spec: KernelSpec,
    pub formula: FormulaSpec,
}

impl GwrResult {
    pub fn coef_row(&self, i: usize) -> &[f64] {
        &self.coef[i * self.m..(i + 1) * self.m]
    }

    /// Coefficient column `j` across all locations.
    pub fn coef_column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.coef[i * self.m + j]).collect()
    }
}

impl BandwidthObjective {
    /// Fits every local model at `bw`. The first singular location, by
    /// index, is reported as the error.
    pub fn fit(&self, bw: Bandwidth) -> Result<GwrResult> {
        bw.validate(self.n())?;
        bw.check_kind(self.spec())?;
        let fits: Vec<Result<_>> = (0..self.n())
            .into_par_iter()
            .map(|i| self.local_fit(i, bw))
            .collect();
        let fits = fits.into_iter().collect::<Result<Vec<_>>>()?;

        let design = self.design();
        let mut coef = Vec::with_capacity(design.n * design.m);
        let mut fitted = Vec::with_capacity(design.n);
        let mut residuals = Vec::with_capacity(design.n);
        let mut leverage = Vec::with_capacity(design.n);
        let mut rss = 0.0;
        let mut trace_s = 0.0;
        for (i, fit) in fits.into_iter().enumerate() {
            let e = design.y[i] - fit.fitted;
            rss += e * e;
            trace_s += fit.hat_ii;
            coef.extend_from_slice(&fit.beta);
            fitted.push(fit.fitted);
            residuals.push(e);
            leverage.push(fit.hat_ii);
        }
        Ok(GwrResult {
            coef,
            n: design.n,
            m: design.m,
            coef_names: design.names.clone(),
            fitted,
            residuals,
            leverage,
            rss,
            trace_s,
            aicc: aicc_from_parts(design.n, rss, trace_s),
            cv: self.cv_score(bw),
            bandwidth: bw,
            spec: *self.spec(),
            formula: self.formula().clone(),
        })
    }
}

/// Fits GWR on `table` at bandwidth `bw`.
pub fn gwr_fit(
    table: &ObservationTable,
    formula: &FormulaSpec,
    spec: KernelSpec,
    bw: Bandwidth,
) -> Result<GwrResult> {
    BandwidthObjective::new(table, formula, spec, Criterion::AICc)?.fit(bw)
}
