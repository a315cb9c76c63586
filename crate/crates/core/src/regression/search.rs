use rayon::prelude::*;

use crate::error::{GwError, Result};
use crate::gw::Bandwidth;
use crate::regression::objective::{continuous_bandwidth, BandwidthEvaluator};

/// One evaluated candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Candidate bandwidth as a real number (distance or neighbor count).
    pub candidate: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// The bandwidth whose score is `score`.
    pub best: Bandwidth,
    /// Minimizing candidate value; fractional for golden-section search
    /// over an adaptive objective.
    pub minimizer: f64,
    pub score: f64,
    pub trace: Vec<TracePoint>,
}

impl SearchResult {
    /// Adaptive minimizer rounded to the nearest valid neighbor count.
    pub fn rounded(&self) -> Bandwidth {
        match self.best {
            Bandwidth::Adaptive(_) => Bandwidth::Adaptive(self.minimizer.round().max(1.0) as usize),
            fixed => fixed,
        }
    }
}

/// Index of the smallest score, the earliest one on ties. Non-finite
/// positive scores never win.
fn argmin(scores: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.enumerate() {
        if s.is_nan() || s == f64::INFINITY {
            continue;
        }
        match best {
            Some((_, b)) if s >= b => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}

/// Evaluates every candidate and returns the minimizer, with the lowest
/// candidate winning ties.
pub fn linear_search<E: BandwidthEvaluator + ?Sized>(
    obj: &E,
    candidates: &[Bandwidth],
) -> Result<SearchResult> {
    if candidates.is_empty() {
        return Err(GwError::InvalidInput("no candidate bandwidths".into()));
    }
    let scores: Vec<f64> = candidates.par_iter().map(|&bw| obj.evaluate(bw)).collect();
    // order candidates by value so "lowest candidate wins ties" holds for
    // unsorted input too
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| candidates[a].value().total_cmp(&candidates[b].value()).then(a.cmp(&b)));
    let pick = argmin(order.iter().map(|&i| scores[i])).ok_or(GwError::NoFeasibleBandwidth {
        candidates: candidates.len(),
    })?;
    let best_idx = order[pick];
    let trace = candidates
        .iter()
        .zip(&scores)
        .map(|(bw, &score)| TracePoint {
            candidate: bw.value(),
            score,
        })
        .collect();
    Ok(SearchResult {
        best: candidates[best_idx],
        minimizer: candidates[best_idx].value(),
        score: scores[best_idx],
        trace,
    })
}

/// Every adaptive bandwidth `lo..=hi`.
pub fn adaptive_range(lo: usize, hi: usize) -> Vec<Bandwidth> {
    (lo..=hi).map(Bandwidth::Adaptive).collect()
}

/// Default golden-section tolerance for the interval `[lo, hi]`.
pub fn default_tolerance(lo: f64, hi: f64) -> f64 {
    0.01 * (hi - lo)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[lo, hi]`, stopping when the
/// bracket is narrower than `tol`. Returns every evaluation in order;
/// ties between the two interior points keep the lower bracket.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Vec<TracePoint>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(GwError::InvalidInterval { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(GwError::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut trace = Vec::new();
    let mut eval = |x: f64, trace: &mut Vec<TracePoint>| {
        let s = f(x);
        let s = if s.is_nan() { f64::INFINITY } else { s };
        trace.push(TracePoint { candidate: x, score: s });
        s
    };
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut trace);
    let mut fd = eval(d, &mut trace);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut trace);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut trace);
        }
    }
    Ok(trace)
}

/// Golden-section bandwidth search over `[lo, hi]`.
///
/// Adaptive objectives are evaluated at `floor(b)`; `best` is that floored
/// bandwidth and `minimizer` the continuous point. The returned point is
/// the best of all evaluations (lowest candidate on ties).
pub fn golden_search<E: BandwidthEvaluator + ?Sized>(
    obj: &E,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<SearchResult> {
    let trace = golden_section(|b| obj.evaluate_continuous(b), lo, hi, tol)?;
    let mut order: Vec<usize> = (0..trace.len()).collect();
    order.sort_by(|&a, &b| trace[a].candidate.total_cmp(&trace[b].candidate).then(a.cmp(&b)));
    let pick = argmin(order.iter().map(|&i| trace[i].score)).ok_or(
        GwError::NoFeasibleBandwidth {
            candidates: trace.len(),
        },
    )?;
    let point = trace[order[pick]];
    Ok(SearchResult {
        best: continuous_bandwidth(point.candidate, obj.adaptive()),
        minimizer: point.candidate,
        score: point.score,
        trace,
    })
}
