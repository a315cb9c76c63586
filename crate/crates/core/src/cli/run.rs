use std::io::Write;

use crate::cli::options::{BandwidthMode, CommandKind, RunConfig, SearchKind};
use crate::descriptive::gw_summary;
use crate::error::{GwError, Result};
use crate::gw::Bandwidth;
use crate::io::{format_number, ingest, write_gwr, write_gwss, write_trace_csv, Dataset};
use crate::regression::{
    adaptive_range, default_tolerance, golden_search, linear_search, BandwidthObjective,
    SearchResult,
};

/// Runs one configured command, writing key=value report lines to
/// `report` and result files to `config.out`.
pub fn run(config: &RunConfig, report: &mut dyn Write) -> Result<()> {
    match config.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| GwError::Config(format!("cannot start thread pool: {e}")))?;
            let mut buf = Vec::new();
            let result = pool.install(|| run_inner(config, &mut buf));
            report.write_all(&buf)?;
            result
        }
        None => run_inner(config, report),
    }
}

fn run_inner(config: &RunConfig, report: &mut dyn Write) -> Result<()> {
    let data = ingest(&config.data, config.format, &config.columns)?;
    match config.command {
        CommandKind::Bw => run_bw(config, &data, report),
        CommandKind::Gwr => run_gwr(config, &data, report),
        CommandKind::Gwss => run_gwss(config, &data, report),
    }
}

fn objective(config: &RunConfig, data: &Dataset, report: &mut dyn Write) -> Result<BandwidthObjective> {
    let formula = config
        .formula
        .as_ref()
        .ok_or_else(|| GwError::Config("--formula is required".into()))?;
    let obj = BandwidthObjective::new(&data.table, formula, config.kernel, config.criterion)?;
    for w in obj.warnings() {
        writeln!(report, "warning={w}")?;
    }
    Ok(obj)
}

fn search(config: &RunConfig, obj: &BandwidthObjective) -> Result<SearchResult> {
    let Some(BandwidthMode::Search {
        kind,
        lo,
        hi,
        step,
        tol,
    }) = config.mode.clone()
    else {
        return Err(GwError::Config("no search configured".into()));
    };
    match kind {
        SearchKind::Linear => {
            let candidates: Vec<Bandwidth> = if config.kernel.adaptive {
                let step = step.unwrap_or(1.0).max(1.0) as usize;
                adaptive_range(lo.ceil().max(1.0) as usize, hi.floor() as usize)
                    .into_iter()
                    .step_by(step)
                    .collect()
            } else {
                let step = step.expect("validated: fixed linear search has a step");
                let count = ((hi - lo) / step).floor() as usize;
                (0..=count).map(|i| Bandwidth::Fixed(lo + i as f64 * step)).collect()
            };
            linear_search(obj, &candidates)
        }
        SearchKind::Golden => {
            let mut tol = tol.unwrap_or_else(|| default_tolerance(lo, hi));
            if config.kernel.adaptive {
                // resolve to a single neighbor count
                tol = tol.min(0.5);
            }
            golden_search(obj, lo, hi, tol)
        }
    }
}

fn report_search(report: &mut dyn Write, result: &SearchResult) -> Result<()> {
    writeln!(report, "best_bandwidth={}", result.best)?;
    writeln!(report, "minimizer={}", format_number(result.minimizer))?;
    writeln!(report, "score={}", format_number(result.score))?;
    writeln!(report, "evaluations={}", result.trace.len())?;
    Ok(())
}

fn run_bw(config: &RunConfig, data: &Dataset, report: &mut dyn Write) -> Result<()> {
    let obj = objective(config, data, report)?;
    let result = search(config, &obj)?;
    if let Some(out) = &config.out {
        write_trace_csv(out, &result)?;
    }
    report_search(report, &result)
}

fn run_gwr(config: &RunConfig, data: &Dataset, report: &mut dyn Write) -> Result<()> {
    let obj = objective(config, data, report)?;
    let bw = match &config.mode {
        Some(BandwidthMode::Explicit(bw)) => *bw,
        Some(BandwidthMode::Search { .. }) => {
            let result = search(config, &obj)?;
            report_search(report, &result)?;
            result.best
        }
        None => return Err(GwError::Config("gwr needs --bw or --search".into())),
    };
    let fit = obj.fit(bw)?;
    let out = config.out.as_ref().ok_or_else(|| GwError::Config("--out is required".into()))?;
    write_gwr(out, data, &fit)?;
    writeln!(report, "bandwidth={}", fit.bandwidth)?;
    writeln!(report, "n={}", fit.n)?;
    writeln!(report, "rss={}", format_number(fit.rss))?;
    writeln!(report, "trace_s={}", format_number(fit.trace_s))?;
    writeln!(report, "aicc={}", format_number(fit.aicc))?;
    writeln!(report, "cv={}", format_number(fit.cv))?;
    Ok(())
}

fn run_gwss(config: &RunConfig, data: &Dataset, report: &mut dyn Write) -> Result<()> {
    let Some(BandwidthMode::Explicit(bw)) = config.mode else {
        return Err(GwError::Config("gwss needs an explicit --bw".into()));
    };
    let mut surfaces = Vec::new();
    for var in &config.vars {
        surfaces.extend(gw_summary(&data.table, var, config.kernel, bw, &config.stats)?);
    }
    let out = config.out.as_ref().ok_or_else(|| GwError::Config("--out is required".into()))?;
    write_gwss(out, data, &surfaces)?;
    writeln!(report, "bandwidth={bw}")?;
    writeln!(report, "n={}", data.table.len())?;
    writeln!(report, "surfaces={}", surfaces.len())?;
    Ok(())
}
