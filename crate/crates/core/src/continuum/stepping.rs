use num_complex::Complex64;

use super::{ContinuumError, ContinuumField, GpModel, PotentialField, Spectral, SpectralModel};

/// Time integrator for [`SpectralModel`]s.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TimeScheme {
    /// Integrating-factor (Lawson) RK4: the linear part is propagated
    /// exactly, so stiff dispersion does not limit the step.
    #[default]
    IfRk4,
    /// Classical RK4 on the full right-hand side.
    Rk4,
}

fn steps(dt: f64, t_end: f64) -> Result<(usize, f64), ContinuumError> {
    if !(dt > 0.0) || !(t_end >= 0.0) || !dt.is_finite() || !t_end.is_finite() {
        return Err(ContinuumError::Stepping(format!("dt = {dt}, t_end = {t_end}")));
    }
    if t_end == 0.0 {
        return Ok((0, dt));
    }
    let n = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((n, t_end / n as f64))
}

fn axpy(y: &[Complex64], h: f64, x: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(x).map(|(a, b)| a + h * b).collect()
}

struct Work<'a> {
    model: &'a dyn SpectralModel,
    sp: Spectral,
}

impl Work<'_> {
    fn n(&self, phi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); phi.len()];
        self.model.nonlinear(&self.sp, phi, &mut out);
        self.sp.dealias(&mut out);
        out
    }

    fn full(&self, phi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); phi.len()];
        self.model.rhs(&self.sp, phi, &mut out);
        out
    }

    fn propagate(&self, v: &[Complex64], tau: f64) -> Vec<Complex64> {
        let mut w = v.to_vec();
        self.sp.apply(&mut w, |k| (self.model.linear(k) * tau).exp());
        w
    }

    fn if_rk4(&self, phi: &[Complex64], h: f64) -> Vec<Complex64> {
        let a = self.n(phi);
        let u1 = self.propagate(&axpy(phi, h / 2.0, &a), h / 2.0);
        let b = self.n(&u1);
        let half = self.propagate(phi, h / 2.0);
        let u2 = axpy(&half, h / 2.0, &b);
        let c = self.n(&u2);
        let u3 = self.propagate(&axpy(&half, h, &c), h / 2.0);
        let d = self.n(&u3);
        // E(h)ϕ + h/6 E(h)a + h/3 E(h/2)(b + c) + h/6 d
        let mid = self.propagate(&axpy(phi, h / 6.0, &a), h / 2.0);
        let bc: Vec<Complex64> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
        let outer = self.propagate(&axpy(&mid, h / 3.0, &bc), h / 2.0);
        axpy(&outer, h / 6.0, &d)
    }

    fn rk4(&self, phi: &[Complex64], h: f64) -> Vec<Complex64> {
        let k1 = self.full(phi);
        let k2 = self.full(&axpy(phi, h / 2.0, &k1));
        let k3 = self.full(&axpy(phi, h / 2.0, &k2));
        let k4 = self.full(&axpy(phi, h, &k3));
        phi.iter()
            .enumerate()
            .map(|(m, z)| z + h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]))
            .collect()
    }
}

/// Advances `field` by `t_end` in `⌈t_end/dt⌉` equal steps.
pub fn evolve(
    model: &dyn SpectralModel,
    field: &ContinuumField,
    dt: f64,
    t_end: f64,
    scheme: TimeScheme,
) -> Result<ContinuumField, ContinuumError> {
    field.check()?;
    let (n, h) = steps(dt, t_end)?;
    let work = Work { model, sp: Spectral::new(&field.grid) };
    let mut out = field.clone();
    let t0 = field.time;
    for step in 1..=n {
        out.values = match scheme {
            TimeScheme::IfRk4 => work.if_rk4(&out.values, h),
            TimeScheme::Rk4 => work.rk4(&out.values, h),
        };
        out.time = t0 + step as f64 * h;
        out.check()?;
    }
    Ok(out)
}

/// Strang-split solver for `iϕ̇ = ϕ − ϕ_ξξ − |ϕ|²ϕ − Vϕ` (or its reduced
/// gauge without the constant term). Both substeps are unitary.
#[derive(Clone, Debug)]
pub struct SplitStepGp {
    sp: Spectral,
    model: GpModel,
}

impl SplitStepGp {
    pub fn new(field: &ContinuumField, v: &PotentialField) -> Result<Self, ContinuumError> {
        v.check_on(&field.grid)?;
        Ok(Self { sp: Spectral::new(&field.grid), model: GpModel::new(v) })
    }

    /// Solver for `iψ̇ = −ψ_ξξ − |ψ|²ψ − Vψ`, where `ψ = e^{it}ϕ`.
    pub fn reduced(field: &ContinuumField, v: &PotentialField) -> Result<Self, ContinuumError> {
        v.check_on(&field.grid)?;
        Ok(Self { sp: Spectral::new(&field.grid), model: GpModel::reduced(v) })
    }

    fn phase(&self, values: &mut [Complex64], tau: f64) {
        let shift = if self.model.reduced { 0.0 } else { 1.0 };
        for (z, v) in values.iter_mut().zip(&self.model.potential) {
            *z *= Complex64::from_polar(1.0, -(shift - z.norm_sqr() - v) * tau);
        }
    }

    pub fn step(&self, field: &mut ContinuumField, dt: f64) -> Result<(), ContinuumError> {
        self.phase(&mut field.values, dt / 2.0);
        self.sp.apply(&mut field.values, |k| Complex64::from_polar(1.0, -k * k * dt));
        self.phase(&mut field.values, dt / 2.0);
        field.time += dt;
        field.check()
    }

    pub fn run(&self, field: &ContinuumField, dt: f64, t_end: f64) -> Result<ContinuumField, ContinuumError> {
        field.check()?;
        let (n, h) = steps(dt, t_end)?;
        let mut out = field.clone();
        let t0 = field.time;
        for step in 1..=n {
            self.step(&mut out, h)?;
            out.time = t0 + step as f64 * h;
        }
        Ok(out)
    }
}

/// One Strang step of the final GP equation.
pub fn gp_step_splitstep(
    field: &ContinuumField,
    v: &PotentialField,
    dt: f64,
) -> Result<ContinuumField, ContinuumError> {
    field.check()?;
    let mut out = field.clone();
    SplitStepGp::new(field, v)?.step(&mut out, dt)?;
    Ok(out)
}

/// Strang-split solver for `iħφ̇_κ = −4tφ_κ − 2tφ_κ,ξξ + U(ξ)|φ_{1−κ}|²φ_κ`.
#[derive(Clone, Debug)]
pub struct CoupledGp {
    sp: Spectral,
    u: Vec<f64>,
    t_hop: f64,
    hbar: f64,
}

impl CoupledGp {
    pub fn new(
        fields: &[ContinuumField; 2],
        u: &PotentialField,
        t_hop: f64,
        hbar: f64,
    ) -> Result<Self, ContinuumError> {
        if fields[0].grid != fields[1].grid {
            return Err(ContinuumError::GridMismatch);
        }
        u.check_on(&fields[0].grid)?;
        if !(hbar > 0.0) || !t_hop.is_finite() {
            return Err(ContinuumError::Stepping(format!("t = {t_hop}, hbar = {hbar}")));
        }
        Ok(Self { sp: Spectral::new(&fields[0].grid), u: u.values.clone(), t_hop, hbar })
    }

    fn cross_phase(&self, fields: &mut [ContinuumField; 2], tau: f64) {
        let [f0, f1] = fields;
        for m in 0..self.u.len() {
            let (n0, n1) = (f0.values[m].norm_sqr(), f1.values[m].norm_sqr());
            let w = self.u[m] * tau / self.hbar;
            f0.values[m] *= Complex64::from_polar(1.0, -w * n1);
            f1.values[m] *= Complex64::from_polar(1.0, -w * n0);
        }
    }

    pub fn step(&self, fields: &mut [ContinuumField; 2], dt: f64) -> Result<(), ContinuumError> {
        self.cross_phase(fields, dt / 2.0);
        let (t, hbar) = (self.t_hop, self.hbar);
        for f in fields.iter_mut() {
            self.sp.apply(&mut f.values, |k| Complex64::from_polar(1.0, -(-4.0 * t + 2.0 * t * k * k) * dt / hbar));
        }
        self.cross_phase(fields, dt / 2.0);
        for f in fields.iter_mut() {
            f.time += dt;
            f.check()?;
        }
        Ok(())
    }

    pub fn run(&self, fields: &[ContinuumField; 2], dt: f64, t_end: f64) -> Result<[ContinuumField; 2], ContinuumError> {
        let (n, h) = steps(dt, t_end)?;
        let mut out = fields.clone();
        let t0 = fields[0].time;
        for step in 1..=n {
            self.step(&mut out, h)?;
            out.iter_mut().for_each(|f| f.time = t0 + step as f64 * h);
        }
        Ok(out)
    }
}

/// One Strang step of the coupled GP system.
pub fn coupled_gp_step(
    fields: &[ContinuumField; 2],
    u: &PotentialField,
    t_hop: f64,
    hbar: f64,
    dt: f64,
) -> Result<[ContinuumField; 2], ContinuumError> {
    let solver = CoupledGp::new(fields, u, t_hop, hbar)?;
    let mut out = fields.clone();
    solver.step(&mut out, dt)?;
    Ok(out)
}
