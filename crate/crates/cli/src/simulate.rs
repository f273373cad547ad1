use std::io::Write;
use std::path::Path;

use serde::Serialize;
use spingp::continuum::{
    continuum_observables, coupled_observables, evolve, write_field_csv, ContinuumField, CoupledGp, GpModel,
    Grid1D, PotentialField, PrecursorModel, PretransformModel, PretransformOptions, SpectralModel, SplitStepGp,
    TimeScheme,
};
use spingp::latticedyn::{
    drift_summary, integrate, write_trajectory_csv, HubbardLattice, IntegratorConfig, LatticeModel, LatticeState,
    Trajectory, XxzLattice,
};
use spingp::limitlab::compute_transform;

use crate::config::{ContinuumScheme, Family, SimulationConfig};
use crate::failure::{create, output_err, write_json, Failure};

/// Chunk boundaries `t_1 < … < t_end`, one per snapshot.
fn chunks(t_end: f64, every: Option<f64>) -> Vec<f64> {
    let Some(every) = every.filter(|&e| e < t_end) else { return vec![t_end] };
    let n = (t_end / every - 1e-9).ceil() as usize;
    (1..=n).map(|k| (k as f64 * every).min(t_end)).collect()
}

#[derive(Serialize)]
struct LatticeSummary {
    family: Family,
    status: String,
    time: f64,
    steps: usize,
    rejected_steps: usize,
    initial_norm: f64,
    final_norm: f64,
    initial_energy: f64,
    final_energy: f64,
    max_norm_drift: f64,
    max_energy_drift: f64,
    max_flavor_norm_drift: f64,
}

fn lattice_initial(cfg: &SimulationConfig, flavors: usize) -> Result<LatticeState, Failure> {
    let n = cfg.sites;
    let xs: Vec<f64> = (0..n).map(|j| (j as f64 - 0.5 * n as f64) * cfg.lattice_spacing).collect();
    let specs = [&cfg.initial, &cfg.initial_flavor1];
    let mut amps = Vec::new();
    for spec in &specs[..flavors] {
        amps.push(spec.resolve()?.sample(&xs).map_err(|e| Failure::Config(e.to_string()))?);
    }
    LatticeState::from_flavors(&amps).map_err(|e| Failure::Config(e.to_string()))
}

fn simulate_lattice(cfg: &SimulationConfig, out: &Path) -> Result<(), Failure> {
    let config = |e: String| Failure::Config(e);
    let (model, flavors): (Box<dyn LatticeModel>, usize) = match cfg.family {
        Family::XxzLattice => (
            Box::new(XxzLattice::from_params(&cfg.xxz.params(cfg.sites), cfg.symbol_mode.into()).map_err(|e| config(e.to_string()))?),
            1,
        ),
        _ => (Box::new(HubbardLattice::from_params(&cfg.hubbard.params(cfg.sites)).map_err(|e| config(e.to_string()))?), 2),
    };
    let mut state = lattice_initial(cfg, flavors)?;
    let mut traj = Trajectory { snapshots: vec![state.clone()], steps: 0, rejected: 0 };
    let mut status = "ok".to_owned();
    let mut t_prev = 0.0;
    for t in chunks(cfg.t_end, cfg.snapshot_interval) {
        let step = IntegratorConfig {
            dt: cfg.dt.min(t - t_prev),
            t_end: t - t_prev,
            scheme: cfg.lattice_scheme.into(),
            tolerance: cfg.tolerance,
            snapshot_interval: None,
        };
        match integrate(&state, model.as_ref(), &step) {
            Ok(part) => {
                traj.steps += part.steps;
                traj.rejected += part.rejected;
                state = part.last().clone();
                traj.snapshots.push(state.clone());
            }
            Err(e) => {
                status = format!("stopped: {e}");
                break;
            }
        }
        t_prev = t;
    }
    let path = out.join("trajectory.csv");
    let mut w = create(&path)?;
    write_trajectory_csv(&mut w, &traj).map_err(|e| output_err(&path, e))?;
    w.flush().map_err(|e| output_err(&path, e))?;
    let d = drift_summary(&traj, model.as_ref());
    write_json(
        &out.join("summary.json"),
        &LatticeSummary {
            family: cfg.family,
            status: status.clone(),
            time: traj.last().time,
            steps: traj.steps,
            rejected_steps: traj.rejected,
            initial_norm: d.initial.norm,
            final_norm: d.last.norm,
            initial_energy: d.initial.energy,
            final_energy: d.last.energy,
            max_norm_drift: d.max_norm_drift,
            max_energy_drift: d.max_energy_drift,
            max_flavor_norm_drift: d.max_flavor_norm_drift,
        },
    )?;
    println!(
        "{:?}: t = {}, norm drift {:.2e}, energy drift {:.2e}",
        cfg.family,
        traj.last().time,
        d.max_norm_drift,
        d.max_energy_drift
    );
    if status == "ok" {
        Ok(())
    } else {
        Err(Failure::Run(format!("{status}; last good snapshot at t = {} saved", traj.last().time)))
    }
}

#[derive(Serialize)]
struct ContinuumSummary {
    family: Family,
    status: String,
    time: f64,
    initial_norms: Vec<f64>,
    final_norms: Vec<f64>,
    max_norm_drift: f64,
    /// Only for the GP families, where the energy is conserved.
    initial_energy: Option<f64>,
    final_energy: Option<f64>,
    max_energy_drift: Option<f64>,
    /// `max |φ(ξ, t)| − |φ(ξ, 0)|` over the grid, flavor 0.
    amplitude_profile_drift: f64,
}

type Chunk<'a> = Box<dyn Fn(&[ContinuumField], f64) -> Result<Vec<ContinuumField>, String> + 'a>;

fn scheme(s: ContinuumScheme) -> TimeScheme {
    match s {
        ContinuumScheme::Rk4 => TimeScheme::Rk4,
        _ => TimeScheme::IfRk4,
    }
}

fn spectral_chunk<'a>(model: Box<dyn SpectralModel + 'a>, dt: f64, s: ContinuumScheme) -> Chunk<'a> {
    Box::new(move |f: &[ContinuumField], dur: f64| {
        evolve(model.as_ref(), &f[0], dt.min(dur), dur, scheme(s)).map(|x| vec![x]).map_err(|e| e.to_string())
    })
}

fn simulate_continuum(cfg: &SimulationConfig, out: &Path) -> Result<(), Failure> {
    let config = |e: String| Failure::Config(e);
    let grid = Grid1D::new(cfg.length, cfg.points).map_err(|e| config(e.to_string()))?;
    let xs: Vec<f64> = grid.points_iter().collect();
    let flavors = if cfg.family == Family::CoupledGp { 2 } else { 1 };
    let specs = [&cfg.initial, &cfg.initial_flavor1];
    let mut fields = Vec::new();
    for spec in &specs[..flavors] {
        let values = spec.resolve()?.sample(&xs).map_err(|e| config(e.to_string()))?;
        fields.push(ContinuumField::new(grid, values).map_err(|e| config(e.to_string()))?);
    }
    let v = PotentialField::uniform(&grid, cfg.potential);
    let params = cfg.xxz.params(spingp::models::MIN_SITES);
    let dt = cfg.dt;
    let step: Chunk = match (cfg.family, cfg.scheme()) {
        (Family::Gp, ContinuumScheme::SplitStep) => {
            let solver = if cfg.reduced_gauge { SplitStepGp::reduced(&fields[0], &v) } else { SplitStepGp::new(&fields[0], &v) }
                .map_err(|e| config(e.to_string()))?;
            Box::new(move |f: &[ContinuumField], dur: f64| {
                solver.run(&f[0], dt.min(dur), dur).map(|x| vec![x]).map_err(|e| e.to_string())
            })
        }
        (Family::Gp, s) => {
            let model = if cfg.reduced_gauge { GpModel::reduced(&v) } else { GpModel::new(&v) };
            spectral_chunk(Box::new(model), dt, s)
        }
        (Family::Precursor, s) => {
            let coeffs = compute_transform(&params).map_err(|e| config(e.to_string()))?;
            let model = PrecursorModel::new(&params, &coeffs, &v, (&cfg.precursor).into()).map_err(|e| config(e.to_string()))?;
            spectral_chunk(Box::new(model), dt, s)
        }
        (Family::Pretransform, s) => {
            let h = PotentialField::uniform(&grid, cfg.xxz.h);
            let opts = PretransformOptions { lattice_constant: 1.0, curvature: cfg.pretransform_curvature.into() };
            spectral_chunk(Box::new(PretransformModel::new(&params, &h, opts)), dt, s)
        }
        (Family::CoupledGp, _) => {
            let u = PotentialField::uniform(&grid, cfg.hubbard.u);
            let pair = [fields[0].clone(), fields[1].clone()];
            let solver = CoupledGp::new(&pair, &u, cfg.hubbard.t, cfg.hubbard.hbar).map_err(|e| config(e.to_string()))?;
            Box::new(move |f: &[ContinuumField], dur: f64| {
                let pair = [f[0].clone(), f[1].clone()];
                solver.run(&pair, dt.min(dur), dur).map(|x| x.to_vec()).map_err(|e| e.to_string())
            })
        }
        _ => unreachable!("lattice families are handled separately"),
    };

    let gp_energy = |f: &[ContinuumField]| -> Option<f64> {
        match cfg.family {
            Family::Gp if !cfg.reduced_gauge => Some(continuum_observables(&f[0], Some(&v)).energy),
            Family::CoupledGp => {
                let u = PotentialField::uniform(&grid, cfg.hubbard.u);
                Some(coupled_observables(&[f[0].clone(), f[1].clone()], &u, cfg.hubbard.t).1)
            }
            _ => None,
        }
    };
    let norms = |f: &[ContinuumField]| f.iter().map(|x| continuum_observables(x, None).norm).collect::<Vec<_>>();

    let mut snapshots = vec![fields.clone()];
    let mut status = "ok".to_owned();
    let mut t_prev = 0.0;
    for t in chunks(cfg.t_end, cfg.snapshot_interval) {
        match step(snapshots.last().expect("initial snapshot"), t - t_prev) {
            Ok(mut next) => {
                for f in &mut next {
                    f.time = t;
                }
                snapshots.push(next);
            }
            Err(e) => {
                status = format!("stopped: {e}");
                break;
            }
        }
        t_prev = t;
    }

    let path = out.join("snapshots.csv");
    let mut w = create(&path)?;
    let io = |e| output_err(&path, e);
    writeln!(w, "time,xi,flavor,re,im").map_err(io)?;
    for snap in &snapshots {
        for (k, f) in snap.iter().enumerate() {
            for (x, z) in grid.points_iter().zip(&f.values) {
                writeln!(w, "{:.17e},{x:.17e},{k},{:.17e},{:.17e}", f.time, z.re, z.im).map_err(io)?;
            }
        }
    }
    w.flush().map_err(io)?;
    let last = snapshots.last().expect("initial snapshot");
    for (k, f) in last.iter().enumerate() {
        let path = out.join(if k == 0 { "field.csv".to_owned() } else { format!("field_{k}.csv") });
        let mut w = create(&path)?;
        write_field_csv(&mut w, f).map_err(|e| output_err(&path, e))?;
        w.flush().map_err(|e| output_err(&path, e))?;
    }

    let n0 = norms(&snapshots[0]);
    let max_norm_drift = snapshots
        .iter()
        .flat_map(|s| norms(s).into_iter().zip(&n0).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    let e0 = gp_energy(&snapshots[0]);
    let max_energy_drift = e0.map(|e0| snapshots.iter().filter_map(|s| gp_energy(s)).map(|e| (e - e0).abs()).fold(0.0, f64::max));
    let amplitude_profile_drift = snapshots[0][0]
        .values
        .iter()
        .zip(&last[0].values)
        .map(|(a, b)| (a.norm() - b.norm()).abs())
        .fold(0.0, f64::max);
    write_json(
        &out.join("summary.json"),
        &ContinuumSummary {
            family: cfg.family,
            status: status.clone(),
            time: last[0].time,
            initial_norms: n0,
            final_norms: norms(last),
            max_norm_drift,
            initial_energy: e0,
            final_energy: gp_energy(last),
            max_energy_drift,
            amplitude_profile_drift,
        },
    )?;
    println!(
        "{:?}: t = {}, norm drift {max_norm_drift:.2e}, amplitude-profile drift {amplitude_profile_drift:.2e}",
        cfg.family, last[0].time
    );
    if status == "ok" {
        Ok(())
    } else {
        Err(Failure::Run(format!("{status}; last good snapshot at t = {} saved", last[0].time)))
    }
}

pub fn run(cfg: &SimulationConfig, out: &Path) -> Result<(), Failure> {
    if cfg.family.is_lattice() {
        simulate_lattice(cfg, out)
    } else {
        simulate_continuum(cfg, out)
    }
}
