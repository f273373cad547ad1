use std::f64::consts::PI;

use num_complex::Complex64;
use spingp::continuum::{
    continuum_observables, coupled_observables, evolve, ContinuumField, CoupledGp, CurvatureTerm, Grid1D,
    PotentialField, PrecursorModel, PrecursorOptions, PretransformModel, PretransformOptions, Spectral, SplitStepGp,
    TimeScheme,
};
use spingp::limitlab::{compute_transform, AMode};
use spingp::models::XxzParams;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn soliton(eta: f64, x: f64, t: f64) -> Complex64 {
    Complex64::from_polar(2f64.sqrt() * eta / (eta * x).cosh(), eta * eta * t)
}

#[test]
fn soliton_solves_the_reduced_equation() {
    // residual of iψ_t + ψ_ξξ + |ψ|²ψ by centered differences of the closed form
    let (eta, h) = (1.0, 1e-3);
    for x in [-3.0, -0.7, 0.0, 0.4, 2.5] {
        let t = 0.3;
        let psi = soliton(eta, x, t);
        let dt = (soliton(eta, x, t + h) - soliton(eta, x, t - h)) / (2.0 * h);
        let dxx = (soliton(eta, x + h, t) - 2.0 * psi + soliton(eta, x - h, t)) / (h * h);
        let residual = c(0.0, 1.0) * dt + dxx + psi.norm_sqr() * psi;
        assert!(residual.norm() < 1e-5, "x = {x}: {residual}");
    }
}

#[test]
fn bright_soliton_keeps_its_profile() {
    let grid = Grid1D::new(40.0 * PI, 512).unwrap();
    let f0 = ContinuumField::from_fn(grid, |x| soliton(1.0, x, 0.0));
    let v = PotentialField::zeros(&grid);
    let f1 = SplitStepGp::reduced(&f0, &v).unwrap().run(&f0, 1e-3, 1.0).unwrap();
    let dev = grid
        .points_iter()
        .zip(&f1.values)
        .map(|(x, z)| (z.norm() - soliton(1.0, x, 1.0).norm()).abs())
        .fold(0.0, f64::max);
    assert!(dev < 1e-6, "{dev}");
    let phase = grid.points_iter().zip(&f1.values).map(|(x, z)| (z - soliton(1.0, x, 1.0)).norm()).fold(0.0, f64::max);
    assert!(phase < 1e-5, "{phase}");
}

#[test]
fn gauge_reduction_matches_full_equation() {
    let grid = Grid1D::new(40.0, 256).unwrap();
    let v = PotentialField::zeros(&grid);
    let phi0 = ContinuumField::from_fn(grid, |x| c(0.8 * (-x * x / 4.0).exp(), 0.3 * (-x * x).exp() * x));
    let phi = SplitStepGp::new(&phi0, &v).unwrap().run(&phi0, 1e-3, 1.0).unwrap();
    let psi = SplitStepGp::reduced(&phi0, &v).unwrap().run(&phi0, 1e-3, 1.0).unwrap();
    let rot = Complex64::from_polar(1.0, -1.0);
    let gap = phi.values.iter().zip(&psi.values).map(|(a, b)| (a - rot * b).norm()).fold(0.0, f64::max);
    assert!(gap < 1e-9, "{gap}");
}

#[test]
fn spectral_derivatives_converge_geometrically() {
    // f = exp(sin ξ) on [−π, π); f' = cos ξ · f
    let mut prev: Option<f64> = None;
    for m in [16, 32, 64, 128] {
        let grid = Grid1D::new(2.0 * PI, m).unwrap();
        let f = grid.sample(|x| c(x.sin().exp(), 0.0));
        let d = Spectral::new(&grid).derivative(&f, 1);
        let err = grid.points_iter().zip(&d).map(|(x, z)| (z - x.cos() * x.sin().exp()).norm()).fold(0.0, f64::max);
        if let Some(p) = prev {
            if p > 1e-12 {
                assert!(p / err > 100.0, "M = {m}: {p} -> {err}");
            }
        }
        prev = Some(err);
    }
    assert!(prev.unwrap() < 1e-12);
}

#[test]
fn split_step_conserves_norm_and_energy() {
    let grid = Grid1D::new(20.0 * PI, 256).unwrap();
    let f0 = ContinuumField::from_fn(grid, |x| soliton(1.0, x, 0.0));
    let v = PotentialField::zeros(&grid);
    let before = continuum_observables(&f0, None);
    let f1 = SplitStepGp::new(&f0, &v).unwrap().run(&f0, 1e-3, 1.0).unwrap();
    let after = continuum_observables(&f1, None);
    assert!((after.norm - before.norm).abs() < 1e-12 * before.norm);
    assert!((after.energy - before.energy).abs() < 1e-6, "{} -> {}", before.energy, after.energy);
    assert!((after.momentum - before.momentum).abs() < 1e-10);
}

#[test]
fn split_step_norm_does_not_depend_on_step() {
    let grid = Grid1D::new(30.0, 128).unwrap();
    let v = PotentialField::from_fn(&grid, |x| 0.5 * (x / 5.0).cos());
    let f0 = ContinuumField::from_fn(grid, |x| Complex64::from_polar(1.5 * (-x * x / 3.0).exp(), 0.7 * x));
    let n0 = f0.l2_norm();
    for dt in [0.1, 0.01] {
        let f1 = SplitStepGp::new(&f0, &v).unwrap().run(&f0, dt, 1.0).unwrap();
        assert!((f1.l2_norm() - n0).abs() < 1e-12 * n0);
    }
}

fn two_flavors(grid: Grid1D) -> [ContinuumField; 2] {
    [
        ContinuumField::from_fn(grid, |x| Complex64::from_polar((-x * x / 2.0).exp(), 0.5 * x)),
        ContinuumField::from_fn(grid, |x| c(0.6 * (-(x - 1.0).powi(2)).exp(), 0.0)),
    ]
}

#[test]
fn coupled_flavor_norms_are_conserved() {
    let grid = Grid1D::new(24.0, 128).unwrap();
    let u = PotentialField::from_fn(&grid, |x| 2.0 + 0.5 * (x / 4.0).sin());
    let f0 = two_flavors(grid);
    let (n0, e0) = coupled_observables(&f0, &u, 0.5);
    let f1 = CoupledGp::new(&f0, &u, 0.5, 1.0).unwrap().run(&f0, 1e-3, 1.0).unwrap();
    let (n1, e1) = coupled_observables(&f1, &u, 0.5);
    for k in 0..2 {
        assert!((n1[k] - n0[k]).abs() < 1e-10, "flavor {k}");
    }
    assert!((e1 - e0).abs() < 1e-5 * e0.abs().max(1.0));
}

#[test]
fn coupled_swap_symmetry_is_exact() {
    let grid = Grid1D::new(24.0, 64).unwrap();
    let u = PotentialField::uniform(&grid, 1.5);
    let f0 = two_flavors(grid);
    let swapped = [f0[1].clone(), f0[0].clone()];
    let solver = CoupledGp::new(&f0, &u, 0.7, 1.3).unwrap();
    let a = solver.run(&f0, 1e-2, 0.5).unwrap();
    let b = solver.run(&swapped, 1e-2, 0.5).unwrap();
    assert_eq!(a[0].values, b[1].values);
    assert_eq!(a[1].values, b[0].values);
}

#[test]
fn coupled_decoupled_limit_is_linear() {
    // plane wave e^{ikξ}: iħφ̇ = (−4t + 2tk²)φ
    let grid = Grid1D::new(2.0 * PI, 32).unwrap();
    let (k, t_hop, hbar, tau) = (3.0, 0.4, 0.8, 0.75);
    let f0 = [ContinuumField::from_fn(grid, |x| Complex64::from_polar(1.0, k * x)), ContinuumField::zeros(grid)];
    let u = PotentialField::uniform(&grid, 5.0);
    let f1 = CoupledGp::new(&f0, &u, t_hop, hbar).unwrap().run(&f0, 1e-2, tau).unwrap();
    let w = (-4.0 * t_hop + 2.0 * t_hop * k * k) / hbar;
    for (x, z) in grid.points_iter().zip(&f1[0].values) {
        assert!((z - Complex64::from_polar(1.0, k * x - w * tau)).norm() < 1e-12);
    }
    assert!(f1[1].values.iter().all(|z| z.norm() == 0.0));
}

#[test]
fn coupled_uniform_fields_rotate() {
    let grid = Grid1D::new(10.0, 16).unwrap();
    let (t_hop, uu, hbar, tau) = (0.3, 1.7, 1.0, 1.0);
    let amps = [c(0.5, 0.2), c(-0.3, 0.9)];
    let f0 = [ContinuumField::from_fn(grid, |_| amps[0]), ContinuumField::from_fn(grid, |_| amps[1])];
    let u = PotentialField::uniform(&grid, uu);
    let f1 = CoupledGp::new(&f0, &u, t_hop, hbar).unwrap().run(&f0, 1e-3, tau).unwrap();
    for k in 0..2 {
        let w = (-4.0 * t_hop + uu * amps[1 - k].norm_sqr()) / hbar;
        let expect = amps[k] * Complex64::from_polar(1.0, -w * tau);
        assert!(f1[k].values.iter().all(|z| (z - expect).norm() < 1e-10));
    }
}

#[test]
fn coupled_grid_mismatch_is_rejected() {
    let a = ContinuumField::zeros(Grid1D::new(10.0, 16).unwrap());
    let b = ContinuumField::zeros(Grid1D::new(10.0, 32).unwrap());
    let u = PotentialField::zeros(&a.grid);
    assert!(CoupledGp::new(&[a, b], &u, 1.0, 1.0).is_err());
}

#[test]
fn pretransform_solution_maps_onto_precursor_solution() {
    // real A and B: φ(ξ, t) = Aϕ(ξ/B, 2A²R(0)t)
    let p = XxzParams { j0: 1.0, r0: 2.0, s: 1.0, ..XxzParams::default() };
    let tc = compute_transform(&p).unwrap();
    let (a2, b2) = (tc.a_squared_f64(), tc.b_squared_f64());
    assert!(a2 > 0.0 && b2 > 0.0);
    let (a, b) = (a2.sqrt(), b2.sqrt());
    let scale = 2.0 * a2 * p.r0;
    for curvature in [CurvatureTerm::Cubic, CurvatureTerm::AsPrinted] {
        let big = Grid1D::new(30.0, 128).unwrap();
        let small = Grid1D::new(30.0 / b, 128).unwrap();
        let prof = |x: f64| Complex64::from_polar(0.3 * (-x * x / 6.0).exp(), 0.2 * (-x * x / 10.0).exp());
        let phi0 = ContinuumField::from_fn(big, prof);
        let vphi0 = ContinuumField::new(small, phi0.values.iter().map(|z| z / a).collect()).unwrap();

        let (t_end, dt) = (0.2, 2e-4);
        let pre = PretransformModel::new(
            &p,
            &PotentialField::zeros(&big),
            PretransformOptions { lattice_constant: 1.0, curvature },
        );
        let phi = evolve(&pre, &phi0, dt, t_end, TimeScheme::IfRk4).unwrap();
        let opts = PrecursorOptions { a_mode: AMode::Signed, curvature, dispersive: true };
        let prec = PrecursorModel::new(&p, &tc, &PotentialField::zeros(&small), opts).unwrap();
        let vphi = evolve(&prec, &vphi0, dt * scale, t_end * scale, TimeScheme::IfRk4).unwrap();

        let gap = phi.values.iter().zip(&vphi.values).map(|(x, y)| (x - a * y).norm()).fold(0.0, f64::max);
        let size = phi.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(gap < 1e-10 * size.max(1.0), "{curvature:?}: {gap}");
        let drift = phi.values.iter().zip(&phi0.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(drift > 1e-3, "the run must actually move the field");
    }
}
