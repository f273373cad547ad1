use num_complex::Complex64;

use super::{LatticeError, LatticeModel, LatticeState};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scheme {
    #[default]
    Rk4,
    /// Dormand-Prince 5(4) with local error control.
    Rk45,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// Fixed step for RK4; initial step for RK45.
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Mixed absolute/relative local error target (RK45 only).
    pub tolerance: f64,
    /// Time between stored snapshots; `None` stores only both endpoints.
    pub snapshot_interval: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-3, t_end: 1.0, scheme: Scheme::Rk4, tolerance: 1e-10, snapshot_interval: None }
    }
}

impl IntegratorConfig {
    pub fn rk4(dt: f64, t_end: f64) -> Self {
        Self { dt, t_end, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        let bad = |m: &str| Err(LatticeError::Config(m.to_owned()));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad("dt must be positive and finite");
        }
        if !(self.t_end >= self.dt) || !self.t_end.is_finite() {
            return bad("t_end must be finite and at least dt");
        }
        if self.scheme == Scheme::Rk45 && !(self.tolerance > 0.0) {
            return bad("adaptive stepping needs a positive tolerance");
        }
        if matches!(self.snapshot_interval, Some(v) if !(v > 0.0)) {
            return bad("snapshot interval must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// Snapshots in time order; the first is the initial state and the last
    /// is at `t_end`.
    pub snapshots: Vec<LatticeState>,
    pub steps: usize,
    /// Rejected adaptive steps.
    pub rejected: usize,
}

impl Trajectory {
    pub fn last(&self) -> &LatticeState {
        self.snapshots.last().expect("trajectory holds the initial state")
    }
}

type Field = Vec<Complex64>;

struct Stepper<'a> {
    model: &'a dyn LatticeModel,
    k: [Field; 7],
    tmp: Field,
}

impl<'a> Stepper<'a> {
    fn new(model: &'a dyn LatticeModel, n: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); n];
        Self { model, k: std::array::from_fn(|_| z.clone()), tmp: z }
    }

    /// `tmp = y + h Σ_s a_s k_s`, then `k[dst] = f(tmp)`.
    fn stage(&mut self, y: &[Complex64], h: f64, coeffs: &[f64], dst: usize) {
        for (m, t) in self.tmp.iter_mut().enumerate() {
            let mut acc = y[m];
            for (s, &a) in coeffs.iter().enumerate() {
                if a != 0.0 {
                    acc += h * a * self.k[s][m];
                }
            }
            *t = acc;
        }
        self.model.rhs(&self.tmp, &mut self.k[dst]);
    }

    fn rk4(&mut self, y: &mut [Complex64], h: f64) {
        self.model.rhs(y, &mut self.k[0]);
        self.stage(y, h, &[0.5], 1);
        self.stage(y, h, &[0.0, 0.5], 2);
        self.stage(y, h, &[0.0, 0.0, 1.0], 3);
        for (m, v) in y.iter_mut().enumerate() {
            *v += h / 6.0 * (self.k[0][m] + 2.0 * self.k[1][m] + 2.0 * self.k[2][m] + self.k[3][m]);
        }
    }

    /// One Dormand-Prince attempt; fills `tmp` with the 5th-order solution
    /// and returns the scaled error norm.
    fn dopri(&mut self, y: &[Complex64], h: f64, tol: f64, fsal_ready: bool) -> f64 {
        if !fsal_ready {
            self.model.rhs(y, &mut self.k[0]);
        }
        self.stage(y, h, &[1.0 / 5.0], 1);
        self.stage(y, h, &[3.0 / 40.0, 9.0 / 40.0], 2);
        self.stage(y, h, &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0], 3);
        self.stage(y, h, &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0], 4);
        self.stage(y, h, &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0], 5);
        self.stage(y, h, &B5, 6);
        let mut sum = 0.0;
        for m in 0..y.len() {
            let mut err = Complex64::new(0.0, 0.0);
            for s in 0..7 {
                err += (B5[s] - B4[s]) * self.k[s][m];
            }
            let scale = tol * (1.0 + y[m].norm().max(self.tmp[m].norm()));
            sum += (h * err).norm_sqr() / (scale * scale);
        }
        (sum / y.len().max(1) as f64).sqrt()
    }
}

const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `model` from `initial` to `initial.time + t_end`.
///
/// RK4 takes `⌈t_end/dt⌉` equal steps, so the final time is hit exactly.
pub fn integrate(
    initial: &LatticeState,
    model: &dyn LatticeModel,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, LatticeError> {
    cfg.validate()?;
    if initial.space != model.space() {
        return Err(LatticeError::Shape { expected: model.space().modes(), got: initial.amplitudes.len() });
    }
    initial.check()?;
    let t0 = initial.time;
    let mut traj = Trajectory { snapshots: vec![initial.clone()], steps: 0, rejected: 0 };
    let mut state = initial.clone();
    let mut stepper = Stepper::new(model, state.amplitudes.len());
    let every = cfg.snapshot_interval.unwrap_or(f64::INFINITY);
    match cfg.scheme {
        Scheme::Rk4 => {
            let n = (cfg.t_end / cfg.dt - 1e-9).ceil().max(1.0) as usize;
            let h = cfg.t_end / n as f64;
            let stride = ((every / h).round() as usize).max(1);
            for step in 1..=n {
                stepper.rk4(&mut state.amplitudes, h);
                state.time = t0 + step as f64 * h;
                state.check()?;
                if step % stride == 0 || step == n {
                    traj.snapshots.push(state.clone());
                }
            }
            traj.steps = n;
        }
        Scheme::Rk45 => {
            let t_final = t0 + cfg.t_end;
            let mut h = cfg.dt;
            let mut next_snap = t0 + every;
            let mut fsal = false;
            while state.time < t_final {
                let target = next_snap.min(t_final);
                let h_try = h.min(target - state.time);
                if h_try < 1e-14 * state.time.abs().max(1.0) {
                    return Err(LatticeError::StepUnderflow { time: state.time, step: h_try });
                }
                let err = stepper.dopri(&state.amplitudes, h_try, cfg.tolerance, fsal);
                let factor = if err == 0.0 {
                    5.0
                } else if err.is_finite() {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                } else {
                    0.2
                };
                if err <= 1.0 && err.is_finite() {
                    state.amplitudes.copy_from_slice(&stepper.tmp);
                    let landed = h_try == target - state.time;
                    state.time = if landed { target } else { state.time + h_try };
                    state.check()?;
                    stepper.k.swap(0, 6);
                    fsal = true;
                    traj.steps += 1;
                    if landed {
                        traj.snapshots.push(state.clone());
                        if target == next_snap {
                            next_snap += every;
                        }
                    }
                    // a step clipped to a snapshot says nothing about the natural size
                    if !landed || factor < 1.0 {
                        h = h_try * factor;
                    }
                } else {
                    if !err.is_finite() {
                        let mut probe = state.clone();
                        probe.amplitudes.copy_from_slice(&stepper.tmp);
                        probe.check()?;
                    }
                    h = h_try * factor.min(1.0);
                    fsal = true;
                    traj.rejected += 1;
                }
            }
            if traj.snapshots.last().map(|s| s.time) != Some(t_final) {
                traj.snapshots.push(state);
            }
        }
    }
    Ok(traj)
}
