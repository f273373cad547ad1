use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use spingp::models::{
    commutator_oracle_deviation, derive_eom, hubbard_hamiltonian, verify_derivation, verify_jordan_wigner,
    verify_statistics_independence, xxz_hamiltonian, CouplingMode, HubbardSectors, Perturbation, XxzParams,
    XxzSectors,
};
use spingp::opalg::{Bindings, Statistics};

use crate::config::DerivationConfig;
use crate::failure::{create, output_err, write_json, Failure};

const ORACLE_TOL: f64 = 1e-10;
const JW_TOL: f64 = 1e-12;

#[derive(Serialize)]
struct OracleRow {
    model: &'static str,
    statistics: String,
    sample: usize,
    max_deviation: f64,
}

#[derive(Serialize)]
struct Summary {
    passed: bool,
    sites: usize,
    symbolic_checks: usize,
    symbolic_failures: usize,
    oracle_max_deviation: f64,
    oracle_tolerance: f64,
    jordan_wigner_max_deviation: f64,
    jordan_wigner_holds: bool,
    statistics_linear_equal: bool,
    statistics_cubic_equal: bool,
    fault_injection_site: Option<usize>,
}

fn random_xxz_bindings(rng: &mut ChaCha8Rng, sites: usize) -> Bindings {
    let mut p = XxzParams::uniform(sites, rng.random_range(0.5..1.5), rng.random_range(-1.0..1.0), 0.0);
    p.j1 = rng.random_range(-0.5..0.5);
    p.r1 = rng.random_range(-0.5..0.5);
    p.x_xi = rng.random_range(0.0..0.5);
    p.s = rng.random_range(0.5..2.0);
    p.h = (0..sites).map(|_| rng.random_range(-0.5..0.5)).collect();
    let mut b = p.bindings();
    // independent bond values exercise every coupling slot
    let mut bonds: Vec<String> = b.keys().filter(|n| n.starts_with("J[") || n.starts_with("R[")).cloned().collect();
    bonds.sort();
    for name in &bonds {
        *b.get_mut(name).expect("listed key") += rng.random_range(-0.2..0.2);
    }
    b
}

fn oracle_rows(cfg: &DerivationConfig) -> Result<Vec<OracleRow>, Failure> {
    let run = |e: spingp::models::ModelError| Failure::Run(e.to_string());
    let n = cfg.oracle_sites;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    for sample in 0..cfg.oracle_samples {
        let b = random_xxz_bindings(&mut rng, n);
        for (stats, mode) in [
            (Statistics::Bose, CouplingMode::Symbolic),
            (Statistics::Bose, CouplingMode::Expanded),
            (Statistics::Fermi, CouplingMode::Symbolic),
        ] {
            let h = xxz_hamiltonian(n, stats, mode, XxzSectors::ALL).map_err(run)?;
            let dev = commutator_oracle_deviation(&h, &b, cfg.oracle_cutoff).map_err(run)?;
            let model = if mode == CouplingMode::Symbolic { "xxz" } else { "xxz-expanded" };
            rows.push(OracleRow { model, statistics: stats.to_string(), sample, max_deviation: dev });
        }
        // two boson flavors would exceed the matrix size cap; fermions are exact
        let mut hb = Bindings::new();
        hb.insert("t".into(), rng.random_range(-1.0..1.0));
        for j in 0..n {
            hb.insert(format!("U[{j}]"), rng.random_range(-2.0..2.0));
        }
        let h = hubbard_hamiltonian(n, Statistics::Fermi, HubbardSectors::ALL).map_err(run)?;
        let dev = commutator_oracle_deviation(&h, &hb, cfg.oracle_cutoff).map_err(run)?;
        rows.push(OracleRow { model: "hubbard", statistics: Statistics::Fermi.to_string(), sample, max_deviation: dev });
    }
    Ok(rows)
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for r in rows {
        w.serialize(r).map_err(|e| output_err(path, e))?;
    }
    w.flush().map_err(|e| output_err(path, e))
}

/// Central-site commutators written out for inspection.
fn write_commutators(path: &Path, sites: usize) -> Result<(), Failure> {
    let run = |e: spingp::models::ModelError| Failure::Run(e.to_string());
    let i = sites / 2;
    let mut w = create(path)?;
    let mut line = |s: String| writeln!(w, "{s}").map_err(|e| output_err(path, e));
    let xxz = xxz_hamiltonian(sites, Statistics::Bose, CouplingMode::Symbolic, XxzSectors::ALL).map_err(run)?;
    line(format!("[H_xxz, a({i})] = {}", derive_eom(&xxz, i, 0).map_err(run)?))?;
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let hop = hubbard_hamiltonian(sites, stats, HubbardSectors::HOPPING).map_err(run)?;
        let int = hubbard_hamiltonian(sites, stats, HubbardSectors::INTERACTION).map_err(run)?;
        for kappa in 0..2 {
            line(format!("[H_hop, a({i},{kappa})] ({stats}) = {}", derive_eom(&hop, i, kappa).map_err(run)?))?;
            line(format!("[H_int, a({i},{kappa})] ({stats}) = {}", derive_eom(&int, i, kappa).map_err(run)?))?;
        }
    }
    Ok(())
}

pub fn run(cfg: &DerivationConfig, out: &Path) -> Result<(), Failure> {
    let perturbation = cfg.fault_injection_site.map(|site| Perturbation { site });
    let report = verify_derivation(cfg.sites, perturbation).map_err(|e| Failure::Run(e.to_string()))?;
    #[derive(Serialize)]
    struct CheckRow<'a> {
        check: &'a str,
        site: usize,
        passed: bool,
        residual: &'a str,
    }
    let rows: Vec<CheckRow> = report
        .checks
        .iter()
        .map(|c| CheckRow { check: &c.name, site: c.site, passed: c.passed, residual: &c.residual })
        .collect();
    write_csv(&out.join("derivation.csv"), &rows)?;
    write_commutators(&out.join("commutators.txt"), cfg.sites)?;

    let oracle = oracle_rows(cfg)?;
    write_csv(&out.join("oracle.csv"), &oracle)?;
    let oracle_max = oracle.iter().map(|r| r.max_deviation).fold(0.0, f64::max);

    #[derive(Serialize)]
    struct JwRow {
        sites: usize,
        max_deviation: f64,
        holds: bool,
    }
    let mut jw = Vec::new();
    for n in 2..=cfg.jordan_wigner_max_sites {
        let r = verify_jordan_wigner(n).map_err(|e| Failure::Run(e.to_string()))?;
        jw.push(JwRow { sites: n, max_deviation: r.max_deviation, holds: r.identity_holds });
    }
    write_csv(&out.join("jordan_wigner.csv"), &jw)?;
    let jw_max = jw.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    let jw_holds = jw.iter().all(|r| r.holds) && jw_max <= JW_TOL;

    let stats = verify_statistics_independence(&cfg.statistics.params(cfg.sites))
        .map_err(|e| Failure::Run(e.to_string()))?;
    let path = out.join("statistics.txt");
    let text = format!(
        "site: {}\nlinear terms equal: {}\ncubic terms equal: {}\nbose: {}\nfermi: {}\ndiff (bose - fermi): {}\n",
        stats.site,
        stats.linear_equal,
        stats.cubic_equal,
        stats.bose_eom,
        stats.fermi_eom,
        if stats.diff.is_zero() { "0".to_owned() } else { stats.diff.to_string() },
    );
    std::fs::write(&path, text).map_err(|e| output_err(&path, e))?;

    let failures: Vec<_> = report.failures().collect();
    let passed = failures.is_empty() && oracle_max <= ORACLE_TOL && jw_holds && stats.linear_equal;
    write_json(
        &out.join("summary.json"),
        &Summary {
            passed,
            sites: cfg.sites,
            symbolic_checks: report.checks.len(),
            symbolic_failures: failures.len(),
            oracle_max_deviation: oracle_max,
            oracle_tolerance: ORACLE_TOL,
            jordan_wigner_max_deviation: jw_max,
            jordan_wigner_holds: jw_holds,
            statistics_linear_equal: stats.linear_equal,
            statistics_cubic_equal: stats.cubic_equal,
            fault_injection_site: cfg.fault_injection_site,
        },
    )?;
    println!(
        "{} symbolic checks, {} failed; oracle deviation {oracle_max:.2e}; Jordan-Wigner deviation {jw_max:.2e}; \
         linear Bose/Fermi symbols equal: {}; cubic equal: {}",
        report.checks.len(),
        failures.len(),
        stats.linear_equal,
        stats.cubic_equal
    );
    for f in &failures {
        eprintln!("mismatch in {} at site {}: computed - expected = {}", f.name, f.site, f.residual);
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} symbolic mismatches, oracle {oracle_max:.2e}, Jordan-Wigner holds: {jw_holds}, linear symbols equal: {}",
            failures.len(),
            stats.linear_equal
        )))
    }
}
