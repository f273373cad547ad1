use std::io::{self, Write};

use statrs::distribution::{ContinuousCDF, StudentsT};

use super::LimitError;

/// Least-squares line through `(ln x, ln y)`: slope, intercept and the 95%
/// confidence half-width of the slope.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64), LimitError> {
    if xs.len() != ys.len() {
        return Err(LimitError::Invalid(format!("{} abscissae for {} errors", xs.len(), ys.len())));
    }
    if xs.len() < 3 {
        return Err(LimitError::TooFewPoints(xs.len()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(LimitError::Invalid("log-log fit needs positive finite data".into()));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LimitError::Invalid("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let se = (rss / (n - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, n - 2.0).expect("positive degrees of freedom").inverse_cdf(0.975);
    Ok((slope, intercept, t * se))
}

#[derive(Clone, Debug, PartialEq)]
pub enum PointStatus {
    Ok,
    Skipped(String),
}

/// Errors against a refinement parameter (spacing or ratio) and the fitted
/// convergence order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub parameters: Vec<f64>,
    pub errors: Vec<f64>,
    pub status: Vec<PointStatus>,
    /// `None` when fewer than three usable points remain or an error is zero.
    pub slope: Option<f64>,
    pub half_width: Option<f64>,
    pub dropped_first: bool,
}

impl ConvergenceReport {
    /// Fits over the points with status `Ok`, optionally ignoring the first
    /// (coarsest) one.
    pub fn assemble(parameters: Vec<f64>, errors: Vec<f64>, status: Vec<PointStatus>, drop_first: bool) -> Self {
        let usable: Vec<usize> = (0..parameters.len())
            .filter(|&i| status[i] == PointStatus::Ok)
            .skip(usize::from(drop_first))
            .collect();
        let xs: Vec<f64> = usable.iter().map(|&i| parameters[i]).collect();
        let ys: Vec<f64> = usable.iter().map(|&i| errors[i]).collect();
        let fit = fit_loglog(&xs, &ys).ok();
        Self {
            parameters,
            errors,
            status,
            slope: fit.map(|f| f.0),
            half_width: fit.map(|f| f.2),
            dropped_first: drop_first,
        }
    }

    /// Failed points become `Skipped` with a NaN error.
    pub fn from_results(parameters: Vec<f64>, results: Vec<Result<f64, LimitError>>, drop_first: bool) -> Self {
        let (errors, status) = results
            .into_iter()
            .map(|r| match r {
                Ok(e) => (e, PointStatus::Ok),
                Err(e) => (f64::NAN, PointStatus::Skipped(e.to_string())),
            })
            .unzip();
        Self::assemble(parameters, errors, status, drop_first)
    }

    /// `|slope − expected| ≤ band`.
    pub fn within(&self, expected: f64, band: f64) -> bool {
        self.slope.is_some_and(|s| (s - expected).abs() <= band)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "parameter,error,status")?;
        for i in 0..self.parameters.len() {
            let status = match &self.status[i] {
                PointStatus::Ok => "ok".to_owned(),
                PointStatus::Skipped(why) => format!("skipped: {}", why.replace(',', ";")),
            };
            writeln!(w, "{:.17e},{:.17e},{status}", self.parameters[i], self.errors[i])?;
        }
        Ok(())
    }
}
