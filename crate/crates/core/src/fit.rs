//! Multilogistic-plus-linear model and its refinement against observed data.
//!
//! ```text
//! y(t)  = c + d t + sum_i y_i / (1 + exp(-(t - b_i) / a_i))
//! y'(t) = d + sum_i y_i e^{-(t - b_i)/a_i} / (a_i (1 + e^{-(t - b_i)/a_i})^2)
//! ```
//!
//! The aggregate series is modelled by `y`, the observed differential series
//! by `y'`. Refinement minimizes the RMSE of `y'` against the differential
//! data.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decompose::{aggregate, LogisticWave, SeriesKind, TimeSeries};
use crate::error::{invalid, Error, Result};
use crate::simplex::{self, Bounds, SimplexOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiLogisticModel {
    pub c: f64,
    pub d: f64,
    pub waves: Vec<LogisticWave>,
}

impl MultiLogisticModel {
    pub fn new(c: f64, d: f64, waves: Vec<LogisticWave>) -> Result<Self> {
        if let Some(w) = waves.iter().find(|w| !(w.a > 0.0)) {
            return invalid(format!("wave slope coefficients must be positive, got {}", w.a));
        }
        Ok(MultiLogisticModel { c, d, waves })
    }

    pub fn linear(c: f64, d: f64) -> Self {
        MultiLogisticModel {
            c,
            d,
            waves: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.waves.len()
    }

    pub fn eval(&self, t: f64) -> f64 {
        model_eval(self, t)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        model_deriv(self, t)
    }
}

pub fn model_eval(model: &MultiLogisticModel, t: f64) -> f64 {
    model.c + model.d * t + model.waves.iter().map(|w| w.value(t)).sum::<f64>()
}

pub fn model_deriv(model: &MultiLogisticModel, t: f64) -> f64 {
    model.d + model.waves.iter().map(|w| w.derivative(t)).sum::<f64>()
}

fn check_differential(data: &TimeSeries) -> Result<()> {
    if data.kind != SeriesKind::Differential {
        return invalid("fit expects differential data");
    }
    if let Some(v) = data.values.iter().find(|v| !v.is_finite()) {
        return invalid(format!("data contains non-finite value {v}"));
    }
    Ok(())
}

/// Root-mean-square error of `model_deriv` against the differential data.
pub fn rmse(model: &MultiLogisticModel, data: &TimeSeries) -> f64 {
    let n = data.len().max(1) as f64;
    let sse: f64 = data
        .values
        .iter()
        .enumerate()
        .map(|(k, r)| (r - model_deriv(model, data.time(k))).powi(2))
        .sum();
    (sse / n).sqrt()
}

/// `1 - SS_res / SS_tot` of `model_deriv` on the data window.
pub fn r_squared(model: &MultiLogisticModel, data: &TimeSeries) -> Result<f64> {
    if data.len() < 2 {
        return invalid("R² needs at least 2 samples");
    }
    check_differential(data)?;
    let n = data.len() as f64;
    let mean = data.values.iter().sum::<f64>() / n;
    let ss_tot: f64 = data.values.iter().map(|r| (r - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return Err(Error::UndefinedRSquared);
    }
    let ss_res: f64 = data
        .values
        .iter()
        .enumerate()
        .map(|(k, r)| (r - model_deriv(model, data.time(k))).powi(2))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Peak weekly slope `y_sat / (4a)` divided by the period-local inflection
/// time `b - period_start + 1`.
pub fn compute_ratio(wave: &LogisticWave, period_start: f64) -> Result<f64> {
    let b_local = wave.b - period_start + 1.0;
    if !(b_local > 0.0) {
        return invalid(format!(
            "inflection {} does not follow period start {period_start}",
            wave.b
        ));
    }
    Ok(wave.y_sat / (4.0 * wave.a * b_local))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// `a_i` may move by this fraction of its starting value.
    pub a_fraction: f64,
    /// `b_i` may move by this many multiples of the starting `a_i`.
    pub b_span: f64,
    /// Extra simplex runs from uniformly drawn points inside the box.
    pub restarts: usize,
    pub seed: u64,
    /// Evaluation budget per simplex run, per nonlinear parameter.
    pub evals_per_param: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            a_fraction: 0.5,
            b_span: 3.0,
            restarts: 3,
            seed: 0,
            evals_per_param: 4000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub rmse_before: f64,
    pub rmse_after: f64,
    pub r2: Option<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Linear least squares of the differential data on `[1, g_1, ..., g_k]`
/// where `g_i` is the unit-saturation logistic derivative of wave `i`.
/// Returns `(d, y_sats, sse)`.
fn project_linear(shape: &[(f64, f64)], times: &[f64], data: &[f64]) -> (f64, Vec<f64>, f64) {
    let n = times.len();
    let k = shape.len();
    let mut design = DMatrix::<f64>::zeros(n, k + 1);
    for (row, &t) in times.iter().enumerate() {
        design[(row, 0)] = 1.0;
        for (col, &(a, b)) in shape.iter().enumerate() {
            let z = (t - b) / a;
            design[(row, col + 1)] =
                crate::logwave::logistic(z) * crate::logwave::logistic(-z) / a;
        }
    }
    let rhs = DVector::from_column_slice(data);
    let svd = design.clone().svd(true, true);
    let coef = svd
        .solve(&rhs, 1e-13)
        .unwrap_or_else(|_| DVector::zeros(k + 1));
    let resid = &design * &coef - &rhs;
    let sse = resid.norm_squared();
    (coef[0], coef.iter().skip(1).cloned().collect(), sse)
}

/// Intercept aligning `model_eval` with the running sum of the data.
pub fn fit_intercept(model: &MultiLogisticModel, data: &TimeSeries) -> Result<f64> {
    let agg = aggregate(data)?;
    let n = agg.len() as f64;
    Ok(agg
        .values
        .iter()
        .enumerate()
        .map(|(k, y)| {
            let t = agg.time(k);
            y - (model.d * t + model.waves.iter().map(|w| w.value(t)).sum::<f64>())
        })
        .sum::<f64>()
        / n)
}

/// Box-bounded simplex refinement of wave shapes. Slopes `d` and
/// saturations `y_sat` are solved exactly by linear least squares for each
/// candidate shape, the intercept `c` is re-aligned to the aggregate, and the
/// input model is returned unchanged if nothing beats it.
pub fn refine(
    model: &MultiLogisticModel,
    data: &TimeSeries,
    options: &RefineOptions,
) -> Result<(MultiLogisticModel, FitReport)> {
    check_differential(data)?;
    let k = model.k();
    if k == 0 {
        return invalid("refinement needs at least one wave");
    }
    if data.len() < 3 * k + 2 {
        return invalid(format!(
            "{k} waves need at least {} samples, got {}",
            3 * k + 2,
            data.len()
        ));
    }
    let times: Vec<f64> = (0..data.len()).map(|i| data.time(i)).collect();
    let n = data.len() as f64;
    let rmse_before = rmse(model, data);

    let mut lower = Vec::with_capacity(2 * k);
    let mut upper = Vec::with_capacity(2 * k);
    let mut start = Vec::with_capacity(2 * k);
    for w in &model.waves {
        lower.push(w.a * (1.0 - options.a_fraction).max(1e-6));
        upper.push(w.a * (1.0 + options.a_fraction));
        lower.push(w.b - options.b_span * w.a);
        upper.push(w.b + options.b_span * w.a);
        start.push(w.a);
        start.push(w.b);
    }
    let bounds = Bounds::new(lower, upper);
    let steps: Vec<f64> = bounds
        .lower
        .iter()
        .zip(&bounds.upper)
        .map(|(l, u)| (u - l) / 10.0)
        .collect();
    let mean_square = data.values.iter().map(|v| v * v).sum::<f64>() / n;
    let mut opts = SimplexOptions::new(steps);
    opts.max_evals = options.evals_per_param * 2 * k;
    opts.f_tol = 1e-24 * mean_square.max(f64::MIN_POSITIVE);
    opts.x_tol = 1e-11;

    let objective = |p: &[f64]| -> f64 {
        let shape: Vec<(f64, f64)> = p.chunks(2).map(|c| (c[0], c[1])).collect();
        project_linear(&shape, &times, &data.values).2 / n
    };

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut starts = vec![start];
    for _ in 0..options.restarts {
        starts.push(
            bounds
                .lower
                .iter()
                .zip(&bounds.upper)
                .map(|(l, u)| rng.gen_range(*l..=*u))
                .collect(),
        );
    }

    let mut best: Option<simplex::SimplexResult> = None;
    let mut iterations = 0;
    let mut evaluations = 0;
    for s in &starts {
        let r = simplex::minimize(objective, s, &bounds, &opts);
        iterations += r.iterations;
        evaluations += r.evals;
        if best.as_ref().map_or(true, |b| r.f < b.f) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one simplex run");

    let shape: Vec<(f64, f64)> = best.x.chunks(2).map(|c| (c[0], c[1])).collect();
    let (d, sats, _) = project_linear(&shape, &times, &data.values);
    let waves = shape
        .iter()
        .zip(&sats)
        .map(|(&(a, b), &y_sat)| LogisticWave { a, b, y_sat })
        .collect();
    let mut refined = MultiLogisticModel { c: 0.0, d, waves };
    refined.c = fit_intercept(&refined, data)?;
    let rmse_refined = rmse(&refined, data);

    let (out, rmse_after) = if rmse_refined <= rmse_before && rmse_refined.is_finite() {
        (refined, rmse_refined)
    } else {
        (model.clone(), rmse_before)
    };
    let r2 = r_squared(&out, data).ok();
    Ok((
        out,
        FitReport {
            rmse_before,
            rmse_after,
            r2,
            iterations,
            evaluations,
            converged: best.converged,
        },
    ))
}

/// Least-squares line `c + d t` through a series.
pub fn linear_trend(series: &TimeSeries) -> (f64, f64) {
    let n = series.len() as f64;
    if series.len() < 2 {
        return (series.values.first().cloned().unwrap_or(0.0), 0.0);
    }
    let mean_t = (0..series.len()).map(|k| series.time(k)).sum::<f64>() / n;
    let mean_y = series.values.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, y) in series.values.iter().enumerate() {
        let dt = series.time(k) - mean_t;
        sxy += dt * (y - mean_y);
        sxx += dt * dt;
    }
    let d = sxy / sxx;
    (mean_y - d * mean_t, d)
}
