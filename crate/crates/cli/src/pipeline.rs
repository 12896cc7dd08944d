//! Per-period extraction, refinement and artifact emission.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use trendwave_core::decompose::{
    aggregate, extract_waves, second_differences, ExtractConfig, LogisticWave, StopReason,
    TimeSeries,
};
use trendwave_core::fit::{
    compute_ratio, fit_intercept, linear_trend, r_squared, refine, rmse, FitReport,
    MultiLogisticModel, RefineOptions,
};
use trendwave_core::logwave::{scalogram, Scalogram};

use crate::config::{AnalysisConfig, PeriodSpec};
use crate::error::{CliError, CliResult};
use crate::ingest::{ingest_csv, Ingested};
use crate::svg::{self, Curve};
use crate::tables::reference_period;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodRef {
    pub index: usize,
    pub name: String,
    pub start: u32,
    pub end: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveRecord {
    pub i: usize,
    pub a: f64,
    pub b: f64,
    pub y_sat: f64,
    pub ratio: Option<f64>,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavesFile {
    pub schema: u32,
    pub period: PeriodRef,
    pub stop: Option<String>,
    pub trend: Trend,
    pub waves: Vec<WaveRecord>,
    pub refine: RefineOptions,
}

impl WavesFile {
    pub fn model(&self) -> CliResult<MultiLogisticModel> {
        let waves = self
            .waves
            .iter()
            .map(|w| LogisticWave::new(w.a, w.b, w.y_sat))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MultiLogisticModel::new(self.trend.c, self.trend.d, waves)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitFile {
    pub schema: u32,
    pub period: PeriodRef,
    pub report: FitReport,
    pub model: MultiLogisticModel,
    /// Weakest waves left out because the window was too short to fit them.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PeriodStatus {
    Ok {
        waves: usize,
        r2: Option<f64>,
        rmse: f64,
    },
    Failed {
        error: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodSummary {
    pub period: PeriodRef,
    #[serde(flatten)]
    pub status: PeriodStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub schema: u32,
    pub weeks: usize,
    pub filled: usize,
    pub first_date: Option<String>,
    pub seed: u64,
    pub periods: Vec<PeriodSummary>,
    pub failures: usize,
}

fn write(path: PathBuf, contents: &str) -> CliResult<()> {
    std::fs::write(&path, contents).map_err(|e| CliError::io(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Series restricted to a period, keeping absolute week numbers.
pub fn period_window(series: &TimeSeries, period: &PeriodSpec) -> CliResult<TimeSeries> {
    Ok(series.window(period.start as f64, period.end as f64)?)
}

/// Scalogram the extraction loop sees on its first pass.
pub fn period_scalogram(window: &TimeSeries, config: &ExtractConfig) -> CliResult<Scalogram> {
    let agg = aggregate(window)?;
    let d2y = second_differences(&agg)?;
    let scales = config.scale_grid(window.len());
    let shifts = config.shift_grid(agg.origin, agg.last_time());
    Ok(scalogram(&d2y, agg.origin + 1.0, &scales, &shifts)?)
}

/// Intensity used to rank waves: `|y_sat| / a^{3/2}`.
fn intensity(w: &LogisticWave) -> f64 {
    w.y_sat.abs() / w.a.powf(1.5)
}

/// Refine `init` on `data`, keeping at most as many waves as the window can
/// support (the strongest ones). Returns the model, its report and the
/// number of waves dropped.
pub fn fit_period(
    init: &MultiLogisticModel,
    data: &TimeSeries,
    options: &RefineOptions,
) -> CliResult<(MultiLogisticModel, FitReport, usize)> {
    let capacity = data.len().saturating_sub(2) / 3;
    let mut waves = init.waves.clone();
    let mut dropped = 0;
    if waves.len() > capacity {
        waves.sort_by(|a, b| intensity(b).total_cmp(&intensity(a)));
        dropped = waves.len() - capacity;
        waves.truncate(capacity);
    }
    if waves.is_empty() {
        let d = data.values.iter().sum::<f64>() / data.len().max(1) as f64;
        let mut m = MultiLogisticModel::linear(0.0, d);
        m.c = fit_intercept(&m, data)?;
        let e = rmse(&m, data);
        let report = FitReport {
            rmse_before: rmse(init, data),
            rmse_after: e,
            r2: r_squared(&m, data).ok(),
            iterations: 0,
            evaluations: 0,
            converged: true,
        };
        return Ok((m, report, dropped));
    }
    let start = MultiLogisticModel::new(init.c, init.d, waves)?;
    let (model, mut report) = refine(&start, data, options)?;
    report.rmse_before = rmse(init, data);
    Ok((model, report, dropped))
}

fn overlay(window: &TimeSeries, model: &MultiLogisticModel, title: &str) -> String {
    let data: Vec<(f64, f64)> = window
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| (window.time(k), *v))
        .collect();
    let (t0, t1) = (window.origin, window.last_time());
    let steps = ((t1 - t0) * 4.0).ceil().max(1.0) as usize;
    let fitted: Vec<(f64, f64)> = (0..=steps)
        .map(|i| {
            let t = t0 + (t1 - t0) * i as f64 / steps as f64;
            (t, model.deriv(t))
        })
        .collect();
    let markers: Vec<f64> = model.waves.iter().map(|w| w.b).collect();
    svg::line_chart(
        title,
        &[
            Curve {
                label: "data",
                color: "#444444",
                points: data,
            },
            Curve {
                label: "model derivative",
                color: "#d62728",
                points: fitted,
            },
        ],
        &markers,
    )
}

fn analyze_period(
    series: &TimeSeries,
    period: &PeriodRef,
    spec: &PeriodSpec,
    config: &AnalysisConfig,
    out: &Path,
) -> CliResult<PeriodStatus> {
    let window = period_window(series, spec)?;
    let extract = config.extract_config();
    let decomposition = extract_waves(&window, &extract)?;
    let sc = match decomposition.first_scalogram.clone() {
        Some(sc) => sc,
        None => period_scalogram(&window, &extract)?,
    };
    let (c, d) = linear_trend(&decomposition.residual);
    let start = spec.start as f64;
    let waves_file = WavesFile {
        schema: SCHEMA,
        period: period.clone(),
        stop: Some(stop_name(decomposition.stop).to_string()),
        trend: Trend { c, d },
        waves: decomposition
            .waves
            .iter()
            .enumerate()
            .map(|(i, w)| WaveRecord {
                i: i + 1,
                a: w.wave.a,
                b: w.wave.b,
                y_sat: w.wave.y_sat,
                ratio: compute_ratio(&w.wave, start).ok(),
                boundary: w.boundary,
            })
            .collect(),
        refine: config.refine_options(),
    };
    let init = waves_file.model()?;
    let (model, report, dropped) = fit_period(&init, &window, &waves_file.refine)?;
    let fit_file = FitFile {
        schema: SCHEMA,
        period: period.clone(),
        report: report.clone(),
        model: model.clone(),
        dropped,
    };

    let stem = format!("period{}", period.index);
    write(out.join(format!("{stem}.waves.json")), &to_json(&waves_file))?;
    write(out.join(format!("{stem}.fit.json")), &to_json(&fit_file))?;
    write(out.join(format!("{stem}.scalogram.csv")), &sc.to_csv())?;
    write(
        out.join(format!("{stem}.scalogram.svg")),
        &svg::heatmap(&sc, &format!("Scalogram, period {}", period.name)),
    )?;
    write(
        out.join(format!("{stem}.overlay.svg")),
        &overlay(&window, &model, &format!("Period {}", period.name)),
    )?;
    Ok(PeriodStatus::Ok {
        waves: waves_file.waves.len(),
        r2: report.r2,
        rmse: report.rmse_after,
    })
}

pub fn stop_name(stop: StopReason) -> &'static str {
    match stop {
        StopReason::NoSignal => "no_signal",
        StopReason::MaxWaves => "max_waves",
        StopReason::IndexFloor => "index_floor",
        StopReason::NotDecreasing => "not_decreasing",
        StopReason::SaturationFloor => "saturation_floor",
    }
}

/// Analyse every configured period of an already ingested series and write
/// all artifacts plus `summary.json` under `config.out`.
pub fn run_on_series(config: &AnalysisConfig, data: &Ingested) -> CliResult<Summary> {
    let out = &config.out;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let periods: Vec<PeriodSummary> = config
        .periods
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let period = PeriodRef {
                index: i + 1,
                name: spec.name.clone(),
                start: spec.start,
                end: spec.end,
            };
            let status = analyze_period(&data.series, &period, spec, config, out)
                .unwrap_or_else(|e| PeriodStatus::Failed {
                    error: e.to_string(),
                });
            PeriodSummary { period, status }
        })
        .collect();
    let failures = periods
        .iter()
        .filter(|p| matches!(p.status, PeriodStatus::Failed { .. }))
        .count();
    let summary = Summary {
        schema: SCHEMA,
        weeks: data.series.len(),
        filled: data.filled,
        first_date: Some(data.first_date.to_string()),
        seed: config.seed,
        periods,
        failures,
    };
    write(out.join("summary.json"), &to_json(&summary))?;
    Ok(summary)
}

pub fn run_pipeline(config: &AnalysisConfig) -> CliResult<Summary> {
    let input = config
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("no input file given".into()))?;
    let data = ingest_csv(input)?;
    run_on_series(config, &data)
}

/// Re-run refinement from a waves file, as `analyze` did.
pub fn refit(series: &TimeSeries, waves: &WavesFile, options: &RefineOptions) -> CliResult<FitFile> {
    let spec = PeriodSpec {
        name: waves.period.name.clone(),
        start: waves.period.start,
        end: waves.period.end,
    };
    let window = period_window(series, &spec)?;
    let (model, report, dropped) = fit_period(&waves.model()?, &window, options)?;
    Ok(FitFile {
        schema: SCHEMA,
        period: waves.period.clone(),
        report,
        model,
        dropped,
    })
}

/// Starting point built from the published waves of a reference period, with
/// the trend slope set to the mean of what the waves leave unexplained.
pub fn reference_waves(key: &str, series: &TimeSeries) -> CliResult<WavesFile> {
    let p = reference_period(key)
        .ok_or_else(|| CliError::Usage(format!("unknown reference period `{key}`")))?;
    let spec = PeriodSpec {
        name: p.name.to_string(),
        start: p.start,
        end: p.end,
    };
    let window = period_window(series, &spec)?;
    let waves = p.logistic_waves();
    let d = window
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| v - waves.iter().map(|w| w.derivative(window.time(k))).sum::<f64>())
        .sum::<f64>()
        / window.len() as f64;
    Ok(WavesFile {
        schema: SCHEMA,
        period: PeriodRef {
            index: 1,
            name: spec.name,
            start: spec.start,
            end: spec.end,
        },
        stop: None,
        trend: Trend { c: 0.0, d },
        waves: waves
            .iter()
            .enumerate()
            .map(|(i, w)| WaveRecord {
                i: i + 1,
                a: w.a,
                b: w.b,
                y_sat: w.y_sat,
                ratio: compute_ratio(w, p.start as f64).ok(),
                boundary: false,
            })
            .collect(),
        refine: AnalysisConfig::default().refine_options(),
    })
}

pub fn read_waves(path: &Path) -> CliResult<WavesFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use trendwave_core::fit::model_deriv;

    fn synthetic(n: usize) -> TimeSeries {
        let m = MultiLogisticModel::new(
            0.0,
            1.0,
            vec![
                LogisticWave::new(6.0, 30.0, 2.0).unwrap(),
                LogisticWave::new(4.0, 70.0, -0.6).unwrap(),
            ],
        )
        .unwrap();
        TimeSeries::differential((1..=n).map(|t| model_deriv(&m, t as f64)).collect())
    }

    #[test]
    fn short_windows_keep_the_strongest_waves() {
        let data = synthetic(12);
        let init = MultiLogisticModel::new(
            0.0,
            1.0,
            vec![
                LogisticWave::new(1.0, 3.0, 0.01).unwrap(),
                LogisticWave::new(2.0, 6.0, 1.0).unwrap(),
                LogisticWave::new(1.5, 9.0, 0.02).unwrap(),
                LogisticWave::new(3.0, 8.0, 0.5).unwrap(),
            ],
        )
        .unwrap();
        let (model, report, dropped) = fit_period(&init, &data, &RefineOptions::default()).unwrap();
        assert_eq!(dropped, 1);
        assert_eq!(model.k(), 3);
        assert!(report.rmse_after.is_finite());
    }

    #[test]
    fn no_waves_falls_back_to_a_line() {
        let data = TimeSeries::differential(vec![1.0, 2.0, 3.0, 2.0, 1.0]);
        let (m, report, _) = fit_period(&MultiLogisticModel::linear(0.0, 0.0), &data, &RefineOptions::default()).unwrap();
        assert_eq!(m.k(), 0);
        assert!((m.d - 1.8).abs() < 1e-12);
        assert!(report.rmse_after <= report.rmse_before);
    }

    #[test]
    fn window_keeps_absolute_weeks() {
        let s = synthetic(100);
        let w = period_window(&s, &PeriodSpec { name: "x".into(), start: 20, end: 60 }).unwrap();
        assert_eq!(w.origin, 20.0);
        assert_eq!(w.len(), 41);
        assert!(period_window(&s, &PeriodSpec { name: "x".into(), start: 20, end: 160 }).is_err());
    }
}
