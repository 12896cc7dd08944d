//! Iterative extraction of logistic waves from a time series.
//!
//! The observed (differential) series is aggregated by a running sum, its
//! central second differences are scanned with the logistic-wavelet Index,
//! and the strongest extremum gives one wave: `(alpha, beta)` estimate the
//! slope coefficient and inflection point, and
//! `y_sat = sqrt(30) alpha^{3/2} Index` the saturation level. The wave is
//! subtracted from the aggregate and the scan repeats until a stop rule fires.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::logwave::{self, geometric_scales, linear_grid, Extremum, Scalogram};
use crate::simplex::{self, Bounds, SimplexOptions};

const SQRT_30: f64 = 5.477_225_575_051_661;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Differential,
    Aggregate,
}

/// Evenly spaced observations. Sample `k` (0-based) sits at time
/// `origin + k`; series read from a file start at origin 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub label: Option<String>,
    pub origin: f64,
    pub values: Vec<f64>,
    pub kind: SeriesKind,
}

impl TimeSeries {
    pub fn differential(values: Vec<f64>) -> Self {
        TimeSeries {
            label: None,
            origin: 1.0,
            values,
            kind: SeriesKind::Differential,
        }
    }

    pub fn aggregate_series(values: Vec<f64>) -> Self {
        TimeSeries {
            label: None,
            origin: 1.0,
            values,
            kind: SeriesKind::Aggregate,
        }
    }

    pub fn with_origin(mut self, origin: f64) -> Self {
        self.origin = origin;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.origin + k as f64
    }

    pub fn last_time(&self) -> f64 {
        self.origin + self.values.len().saturating_sub(1) as f64
    }

    pub fn range(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        if self.values.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    /// Samples whose time lies in `[start, end]`; the result keeps absolute times.
    pub fn window(&self, start: f64, end: f64) -> Result<TimeSeries> {
        if !(start < end) {
            return invalid(format!("window start {start} must precede end {end}"));
        }
        if start < self.origin || end > self.last_time() {
            return invalid(format!(
                "window [{start}, {end}] outside data range [{}, {}]",
                self.origin,
                self.last_time()
            ));
        }
        let lo = (start - self.origin).round() as usize;
        let hi = (end - self.origin).round() as usize;
        Ok(TimeSeries {
            label: self.label.clone(),
            origin: self.time(lo),
            values: self.values[lo..=hi].to_vec(),
            kind: self.kind,
        })
    }
}

/// One logistic component `y_sat / (1 + exp(-(t - b) / a))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticWave {
    pub a: f64,
    pub b: f64,
    pub y_sat: f64,
}

impl LogisticWave {
    pub fn new(a: f64, b: f64, y_sat: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return invalid(format!("wave slope coefficient must be positive, got {a}"));
        }
        if !b.is_finite() || !y_sat.is_finite() || y_sat == 0.0 {
            return invalid(format!("wave needs finite b and non-zero y_sat, got b={b}, y_sat={y_sat}"));
        }
        Ok(LogisticWave { a, b, y_sat })
    }

    pub fn value(&self, t: f64) -> f64 {
        self.y_sat * logwave::logistic((t - self.b) / self.a)
    }

    /// `d/dt` of [`value`](Self::value).
    pub fn derivative(&self, t: f64) -> f64 {
        let z = (t - self.b) / self.a;
        self.y_sat / self.a * logwave::logistic(z) * logwave::logistic(-z)
    }

    /// Inflection point lies in `[first - 3a, last + 3a]`.
    pub fn within_window(&self, first: f64, last: f64) -> bool {
        self.b >= first - 3.0 * self.a && self.b <= last + 3.0 * self.a
    }
}

/// Running sum of a differential series.
pub fn aggregate(series: &TimeSeries) -> Result<TimeSeries> {
    if series.kind != SeriesKind::Differential {
        return invalid("aggregate expects a differential series");
    }
    if series.is_empty() {
        return invalid("cannot aggregate an empty series");
    }
    let mut acc = 0.0;
    let values = series
        .values
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect();
    Ok(TimeSeries {
        label: series.label.clone(),
        origin: series.origin,
        values,
        kind: SeriesKind::Aggregate,
    })
}

/// Inverse of [`aggregate`]: the first value is kept, later ones differenced.
pub fn differentiate(series: &TimeSeries) -> Result<TimeSeries> {
    if series.kind != SeriesKind::Aggregate {
        return invalid("differentiate expects an aggregate series");
    }
    if series.is_empty() {
        return invalid("cannot differentiate an empty series");
    }
    let mut values = Vec::with_capacity(series.len());
    values.push(series.values[0]);
    values.extend(series.values.windows(2).map(|w| w[1] - w[0]));
    Ok(TimeSeries {
        label: series.label.clone(),
        origin: series.origin,
        values,
        kind: SeriesKind::Differential,
    })
}

/// `y_{n+1} - 2 y_n + y_{n-1}` for every interior sample.
pub fn second_differences(series: &TimeSeries) -> Result<Vec<f64>> {
    second_differences_of(&series.values)
}

pub fn second_differences_of(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 3 {
        return invalid(format!(
            "second differences need at least 3 samples, got {}",
            values.len()
        ));
    }
    Ok(values.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect())
}

/// `y_sat = sqrt(30) alpha^{3/2} value`; the sign of `value` carries over,
/// so a maximum gives a rising wave and a minimum a falling one.
pub fn estimate_saturation(alpha: f64, value: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return invalid(format!("scale must be positive, got {alpha}"));
    }
    if value == 0.0 || !value.is_finite() {
        return Err(Error::DegenerateWave { alpha });
    }
    Ok(SQRT_30 * alpha.powf(1.5) * value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractConfig {
    /// Explicit scale grid; default is geometric from `0.5` to `len / 3`.
    pub scales: Option<Vec<f64>>,
    pub scale_steps: usize,
    pub min_scale: f64,
    /// Explicit shift grid; default spans the data window.
    pub shifts: Option<Vec<f64>>,
    pub shift_step: f64,
    pub max_waves: usize,
    /// Stop when `|y_sat|` falls below this fraction of the aggregate's range.
    pub saturation_floor: f64,
    /// Stop when `|Index|` falls below this fraction of the first pass.
    pub index_floor: f64,
    /// Polish `(alpha, beta)` inside the winning grid cell.
    pub subgrid: bool,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig {
            scales: None,
            scale_steps: 120,
            min_scale: 0.5,
            shifts: None,
            shift_step: 0.5,
            max_waves: 20,
            saturation_floor: 0.002,
            index_floor: 1e-3,
            subgrid: true,
        }
    }
}

impl ExtractConfig {
    pub fn scale_grid(&self, len: usize) -> Vec<f64> {
        match &self.scales {
            Some(s) => s.clone(),
            None => {
                let hi = (len as f64 / 3.0).max(self.min_scale);
                geometric_scales(self.min_scale, hi, self.scale_steps.max(1))
            }
        }
    }

    pub fn shift_grid(&self, first: f64, last: f64) -> Vec<f64> {
        match &self.shifts {
            Some(s) => s.clone(),
            None => linear_grid(first, last, self.shift_step),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(s) = &self.scales {
            if s.is_empty() || s.iter().any(|a| !(*a > 0.0)) {
                return invalid("scale grid must be non-empty and positive");
            }
        }
        if let Some(s) = &self.shifts {
            if s.is_empty() {
                return invalid("shift grid must be non-empty");
            }
        }
        if !(self.shift_step > 0.0) || !(self.min_scale > 0.0) {
            return invalid("grid steps must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectedWave {
    pub wave: LogisticWave,
    /// Index value that produced the wave.
    pub index: f64,
    /// Inflection within two scale units of either end of the window.
    pub boundary: bool,
    /// Later passes that landed on this wave's cell and were folded into it.
    pub merged: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    NoSignal,
    MaxWaves,
    IndexFloor,
    NotDecreasing,
    SaturationFloor,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    /// In extraction order, i.e. decreasing intensity.
    pub waves: Vec<DetectedWave>,
    /// Aggregate minus all extracted waves.
    pub residual: TimeSeries,
    /// `|Index|` of the winning cell on each pass that extracted or merged.
    pub pass_strengths: Vec<f64>,
    pub stop: StopReason,
    /// Scalogram of the unmodified series.
    pub first_scalogram: Option<Scalogram>,
}

impl Decomposition {
    pub fn logistic_waves(&self) -> Vec<LogisticWave> {
        self.waves.iter().map(|w| w.wave).collect()
    }
}

/// Width of the grid cell around index `i`.
fn cell_extent(grid: &[f64], i: usize) -> f64 {
    let left = if i > 0 { grid[i] - grid[i - 1] } else { 0.0 };
    let right = if i + 1 < grid.len() { grid[i + 1] - grid[i] } else { 0.0 };
    left.max(right)
}

fn polish(d2y: &[f64], first_time: f64, sc: &Scalogram, ext: &Extremum) -> (f64, f64, f64) {
    let (i, j) = (ext.scale_index, ext.shift_index);
    let a_lo = sc.scales[i.saturating_sub(1)];
    let a_hi = sc.scales[(i + 1).min(sc.scales.len() - 1)];
    let b_lo = sc.shifts[j.saturating_sub(1)];
    let b_hi = sc.shifts[(j + 1).min(sc.shifts.len() - 1)];
    if a_hi <= a_lo && b_hi <= b_lo {
        return (ext.alpha, ext.beta, ext.value);
    }
    let sign = ext.value.signum();
    let bounds = Bounds::new(vec![a_lo, b_lo], vec![a_hi, b_hi]);
    let mut opts = SimplexOptions::new(vec![
        ((a_hi - a_lo) / 4.0).max(1e-6),
        ((b_hi - b_lo) / 4.0).max(1e-6),
    ]);
    opts.max_evals = 400;
    opts.f_tol = 1e-15 * ext.value.abs();
    opts.x_tol = 1e-7;
    let r = simplex::minimize(
        |p| -sign * logwave::index_unchecked(d2y, first_time, p[0], p[1]),
        &[ext.alpha, ext.beta],
        &bounds,
        &opts,
    );
    let value = -sign * r.f;
    if value.abs() > ext.value.abs() {
        (r.x[0], r.x[1], value)
    } else {
        (ext.alpha, ext.beta, ext.value)
    }
}

fn residual_of(aggregate: &TimeSeries, waves: &[DetectedWave]) -> TimeSeries {
    let mut out = aggregate.clone();
    for (k, v) in out.values.iter_mut().enumerate() {
        let t = aggregate.time(k);
        *v -= waves.iter().map(|w| w.wave.value(t)).sum::<f64>();
    }
    out
}

/// Extract logistic waves from a differential series, strongest first.
pub fn extract_waves(series: &TimeSeries, config: &ExtractConfig) -> Result<Decomposition> {
    if series.kind != SeriesKind::Differential {
        return invalid("wave extraction expects a differential series");
    }
    if series.len() < 8 {
        return invalid(format!(
            "wave extraction needs at least 8 samples, got {}",
            series.len()
        ));
    }
    if let Some(v) = series.values.iter().find(|v| !v.is_finite()) {
        return invalid(format!("series contains non-finite value {v}"));
    }
    config.validate()?;

    let agg = aggregate(series)?;
    let first_time = agg.origin + 1.0;
    let (win_lo, win_hi) = (agg.origin, agg.last_time());
    let scales = config.scale_grid(series.len());
    let shifts = config.shift_grid(win_lo, win_hi);
    let sat_floor = config.saturation_floor * agg.range();

    let mut waves: Vec<DetectedWave> = Vec::new();
    let mut residual = agg.clone();
    let mut strengths = Vec::new();
    let mut first_scalogram = None;
    let mut first_strength: Option<f64> = None;
    let mut previous = f64::INFINITY;
    let max_passes = 3 * config.max_waves.max(1);

    let mut stop = StopReason::MaxWaves;
    for _ in 0..max_passes {
        if waves.len() >= config.max_waves {
            stop = StopReason::MaxWaves;
            break;
        }
        let d2y = second_differences(&residual)?;
        let sc = logwave::scalogram(&d2y, first_time, &scales, &shifts)?;
        let dominant = sc.dominant();
        if first_scalogram.is_none() {
            first_scalogram = Some(sc.clone());
        }
        let Some(ext) = dominant else {
            stop = StopReason::NoSignal;
            break;
        };
        let (alpha, beta, value) = if config.subgrid {
            polish(&d2y, first_time, &sc, &ext)
        } else {
            (ext.alpha, ext.beta, ext.value)
        };
        let strength = value.abs();
        match first_strength {
            None => first_strength = Some(strength),
            Some(first) if strength < config.index_floor * first => {
                stop = StopReason::IndexFloor;
                break;
            }
            _ => {}
        }
        if strength >= previous {
            stop = StopReason::NotDecreasing;
            break;
        }
        let y_sat = estimate_saturation(alpha, value)?;
        if y_sat.abs() < sat_floor {
            stop = StopReason::SaturationFloor;
            break;
        }

        let scale_cell = cell_extent(&scales, ext.scale_index);
        let shift_cell = cell_extent(&shifts, ext.shift_index);
        let same_cell = waves.iter().position(|w| {
            (w.wave.b - beta).abs() <= shift_cell && (w.wave.a - alpha).abs() <= scale_cell
        });
        match same_cell {
            Some(k) => {
                let merged = waves[k].wave.y_sat + y_sat;
                if merged == 0.0 {
                    waves.remove(k);
                } else {
                    waves[k].wave.y_sat = merged;
                    waves[k].merged += 1;
                }
            }
            None => {
                let wave = LogisticWave::new(alpha, beta, y_sat)?;
                let boundary = beta - win_lo < 2.0 * alpha || win_hi - beta < 2.0 * alpha;
                waves.push(DetectedWave {
                    wave,
                    index: value,
                    boundary,
                    merged: 0,
                });
            }
        }
        strengths.push(strength);
        previous = strength;
        residual = residual_of(&agg, &waves);
    }

    Ok(Decomposition {
        waves,
        residual,
        pass_strengths: strengths,
        stop,
        first_scalogram,
    })
}
