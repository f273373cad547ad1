use spingp::continuum::{PrecursorOptions, Profile};
use spingp::limitlab::{
    lattice_vs_continuum, truncation_study, ContinuumLimitSetup, InitialScaling, PointStatus, TruncationSetup,
};

#[test]
fn lattice_converges_to_continuum_at_second_order() {
    let r = lattice_vs_continuum(&ContinuumLimitSetup::default());
    assert!(r.status.iter().all(|s| *s == PointStatus::Ok));
    assert!(r.errors.windows(2).all(|w| w[1] < w[0]), "{:?}", r.errors);
    assert!(r.within(2.0, 0.3), "slope {:?}", r.slope);
}

#[test]
fn zero_data_has_zero_continuum_error() {
    let setup = ContinuumLimitSetup { profile: Profile::Zero, sites: vec![16, 32, 64], t_end: 0.1, ..Default::default() };
    assert!(lattice_vs_continuum(&setup).errors.iter().all(|&e| e == 0.0));
}

#[test]
fn unstable_lattice_run_is_flagged() {
    // an explicit step far beyond the RK4 stability limit of the finest lattice
    let setup = ContinuumLimitSetup { sites: vec![16, 32, 256], courant: 50.0, max_dt: 0.05, t_end: 2.0, ..Default::default() };
    let r = lattice_vs_continuum(&setup);
    assert_eq!(r.status[0], PointStatus::Ok);
    assert!(matches!(r.status[2], PointStatus::Skipped(_)));
    assert!(r.errors[2].is_nan());
    assert_eq!(r.slope, None);
}

#[test]
fn truncation_error_is_linear_in_ratio() {
    let r = truncation_study(&TruncationSetup::default());
    assert!(r.parameters.first().unwrap() / r.parameters.last().unwrap() >= 100.0);
    assert!(r.within(1.0, 0.3), "slope {:?}", r.slope);
}

#[test]
fn identical_equations_without_dispersion() {
    let setup = TruncationSetup {
        options: PrecursorOptions { dispersive: false, ..PrecursorOptions::default() },
        t_end: 0.2,
        ..TruncationSetup::default()
    };
    assert!(truncation_study(&setup).errors.iter().all(|&e| e == 0.0));
}

#[test]
fn zero_data_has_zero_truncation_error() {
    let setup = TruncationSetup { profile: Profile::Zero, t_end: 0.2, ..TruncationSetup::default() };
    assert!(truncation_study(&setup).errors.iter().all(|&e| e == 0.0));
}

#[test]
fn fixed_rescaled_data_does_not_see_the_ratio() {
    // without shrinking the amplitude, B⁻² and the strain term do not depend on s
    let setup = TruncationSetup { scaling: InitialScaling::Rescaled, ..TruncationSetup::default() };
    let r = truncation_study(&setup);
    assert!(r.slope.unwrap() < 0.5, "slope {:?}", r.slope);
    assert!(r.errors.iter().all(|&e| e > 0.1));
}
