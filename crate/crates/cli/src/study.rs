use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use spingp::limitlab::{continuum_limit_point, truncation_point, ConvergenceReport, PointStatus};

use crate::config::{StudyConfig, StudyKind};
use crate::failure::{create, output_err, write_json, Failure};

#[derive(Serialize)]
struct Summary {
    kind: StudyKind,
    parameter: &'static str,
    expected_slope: f64,
    band: f64,
    slope: Option<f64>,
    half_width: Option<f64>,
    skipped_points: usize,
    passed: bool,
}

/// Builds the report for the configured study. Sweep points run as
/// independent tasks; each is deterministic, so the thread count does not
/// change the output.
pub fn report(cfg: &StudyConfig) -> Result<ConvergenceReport, Failure> {
    Ok(match cfg.kind {
        StudyKind::ContinuumLimit => {
            let setup = cfg.continuum_limit.setup()?;
            let results = setup.sites.par_iter().map(|&n| continuum_limit_point(&setup, n)).collect();
            let spacings = setup.sites.iter().map(|&n| setup.spacing(n)).collect();
            ConvergenceReport::from_results(spacings, results, setup.drop_first)
        }
        StudyKind::Truncation => {
            let setup = cfg.truncation.setup()?;
            let results = setup.spins.par_iter().map(|&s| truncation_point(&setup, s)).collect();
            let ratios = setup.spins.iter().map(|&s| setup.ratio(s)).collect();
            ConvergenceReport::from_results(ratios, results, setup.drop_first)
        }
    })
}

pub fn run(cfg: &StudyConfig, out: &Path) -> Result<(), Failure> {
    let r = report(cfg)?;
    let path = out.join("convergence.csv");
    r.write_csv(create(&path)?).map_err(|e| output_err(&path, e))?;
    let expected = cfg.expected();
    let passed = r.within(expected, cfg.band);
    let skipped: Vec<_> = r
        .status
        .iter()
        .zip(&r.parameters)
        .filter_map(|(s, p)| match s {
            PointStatus::Skipped(why) => Some((p, why)),
            PointStatus::Ok => None,
        })
        .collect();
    write_json(
        &out.join("summary.json"),
        &Summary {
            kind: cfg.kind,
            parameter: match cfg.kind {
                StudyKind::ContinuumLimit => "spacing",
                StudyKind::Truncation => "ratio",
            },
            expected_slope: expected,
            band: cfg.band,
            slope: r.slope,
            half_width: r.half_width,
            skipped_points: skipped.len(),
            passed,
        },
    )?;
    for (p, why) in &skipped {
        eprintln!("point {p:e} skipped: {why}");
    }
    match r.slope {
        Some(s) => println!("{:?}: slope {s:.4} ± {:.4}, expected {expected} ± {}", cfg.kind, r.half_width.unwrap_or(f64::NAN), cfg.band),
        None => println!("{:?}: no slope (fewer than three usable points)", cfg.kind),
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check(format!("slope {:?} outside {expected} ± {}", r.slope, cfg.band)))
    }
}
