use trendwave_core::decompose::{
    aggregate, differentiate, estimate_saturation, extract_waves, second_differences_of,
    ExtractConfig, LogisticWave, TimeSeries,
};
use trendwave_core::fit::{model_deriv, refine, r_squared, MultiLogisticModel, RefineOptions};
use trendwave_core::logwave::{cwt_index, geometric_scales, linear_grid, scalogram, ExtremumKind};

/// Differential series whose running sum is exactly `trend + waves`.
fn differenced(waves: &[LogisticWave], slope: f64, n: usize) -> TimeSeries {
    let y = |t: f64| slope * t + waves.iter().map(|w| w.value(t)).sum::<f64>();
    TimeSeries::differential((1..=n).map(|t| y(t as f64) - y(t as f64 - 1.0)).collect())
}

/// Samples of `y_sat / (1 + exp(-(n - b)/a))` for n = 0..=len+1 and their
/// second differences, which sit at n = 1..=len.
fn logistic_d2(a: f64, b: f64, y_sat: f64, len: usize) -> Vec<f64> {
    let w = LogisticWave::new(a, b, y_sat).unwrap();
    let y: Vec<f64> = (0..=len + 1).map(|n| w.value(n as f64)).collect();
    second_differences_of(&y).unwrap()
}

#[test]
fn index_at_true_parameters_matches_closed_form() {
    let d2y = logistic_d2(6.0, 50.0, 1.0, 100);
    let v = cwt_index(&d2y, 6.0, 50.0).unwrap();
    let closed = 1.0 / (30f64.sqrt() * 6f64.powf(1.5));
    assert!((closed - 0.012423).abs() < 1e-6);
    assert!((v - closed).abs() / closed < 5e-3, "{v} vs {closed}");
    let y = estimate_saturation(6.0, v).unwrap();
    assert!((y - 1.0).abs() < 0.01);
}

#[test]
fn scalogram_peaks_at_the_wave() {
    let scales = linear_grid(0.5, 20.0, 0.25);
    let shifts = linear_grid(1.0, 100.0, 0.5);
    let sc = scalogram(&logistic_d2(6.0, 50.0, 1.0, 100), 1.0, &scales, &shifts).unwrap();
    let m = sc.global_max;
    assert!((m.alpha - 6.0).abs() <= 0.25 + 1e-12, "{m:?}");
    assert!((m.beta - 50.0).abs() <= 0.5 + 1e-12, "{m:?}");

    let sc = scalogram(&logistic_d2(6.0, 50.0, -1.8, 100), 1.0, &scales, &shifts).unwrap();
    let d = sc.dominant().unwrap();
    assert_eq!(d.kind, ExtremumKind::Min);
    assert_eq!(d.value, sc.global_min.value);
    let y = estimate_saturation(d.alpha, d.value).unwrap();
    assert!((y + 1.8).abs() / 1.8 < 0.02, "{y}");
}

#[test]
fn cauchy_schwarz_bound_holds_over_the_grid() {
    let (a, y_sat) = (6.0, 1.0);
    let bound = y_sat / (30f64.sqrt() * a * a.sqrt());
    let sc = scalogram(
        &logistic_d2(a, 50.0, y_sat, 100),
        1.0,
        &linear_grid(0.5, 20.0, 0.25),
        &linear_grid(1.0, 100.0, 0.5),
    )
    .unwrap();
    assert!(sc.max_abs() <= bound * (1.0 + 1e-3));
}

#[test]
fn time_rescaling_doubles_the_extremum_location() {
    let scales = geometric_scales(0.5, 40.0, 160);
    let base = scalogram(&logistic_d2(6.0, 50.0, 1.0, 100), 1.0, &scales, &linear_grid(1.0, 100.0, 0.5))
        .unwrap()
        .global_max;
    let doubled = scalogram(&logistic_d2(12.0, 100.0, 1.0, 200), 1.0, &scales, &linear_grid(1.0, 200.0, 0.5))
        .unwrap()
        .global_max;
    let ratio = scales[1] / scales[0];
    assert!((doubled.alpha / (2.0 * base.alpha)).ln().abs() <= 2.0 * ratio.ln() + 1e-12);
    assert!((doubled.beta - 2.0 * base.beta).abs() <= 1.0 + 1e-12);
    let y1 = estimate_saturation(base.alpha, base.value).unwrap();
    let y2 = estimate_saturation(doubled.alpha, doubled.value).unwrap();
    assert!((y1 - y2).abs() / y1.abs() < 0.02, "{y1} vs {y2}");
}

#[test]
fn linear_trend_is_invisible_to_second_differences() {
    let base: Vec<f64> = (0..60).map(|n| (n as f64 * 0.2).sin()).collect();
    let tilted: Vec<f64> = base
        .iter()
        .enumerate()
        .map(|(n, v)| v + 3.0 - 0.7 * n as f64)
        .collect();
    let a = second_differences_of(&base).unwrap();
    let b = second_differences_of(&tilted).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn single_wave_with_trend_is_recovered() {
    let truth = LogisticWave::new(5.0, 100.0, 2.0).unwrap();
    let series = differenced(&[truth], 0.001, 200);
    let d = extract_waves(&series, &ExtractConfig::default()).unwrap();
    assert_eq!(d.waves.len(), 1, "{:?}", d.waves);
    let w = d.waves[0].wave;
    assert!((w.a - 5.0).abs() / 5.0 < 0.05, "{w:?}");
    assert!((w.b - 100.0).abs() <= 1.0, "{w:?}");
    assert!((w.y_sat - 2.0).abs() / 2.0 < 0.05, "{w:?}");
    assert!(!d.waves[0].boundary);
}

fn three_wave_truth() -> Vec<LogisticWave> {
    // Index ratios 10:3:1 with Index = y_sat / (sqrt(30) a^{3/2})
    let shapes = [(8.0, 70.0, 10.0), (5.0, 160.0, 3.0), (4.0, 240.0, 1.0)];
    let unit = 0.02;
    shapes
        .iter()
        .map(|&(a, b, r)| LogisticWave::new(a, b, r * unit * 30f64.sqrt() * a * a.sqrt()).unwrap())
        .collect()
}

#[test]
fn three_waves_come_out_in_intensity_order() {
    let truth = three_wave_truth();
    let series = differenced(&truth, 0.01, 300);
    let d = extract_waves(&series, &ExtractConfig::default()).unwrap();
    assert_eq!(d.waves.len(), 3, "{:#?}", d.waves);
    for (got, want) in d.waves.iter().zip(&truth) {
        assert!((got.wave.b - want.b).abs() <= 1.0, "{got:?} vs {want:?}");
        assert!((got.wave.a - want.a).abs() / want.a < 0.05, "{got:?} vs {want:?}");
        assert!((got.wave.y_sat - want.y_sat).abs() / want.y_sat.abs() < 0.05);
    }
    for w in d.pass_strengths.windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn detection_then_refinement_reaches_machine_precision() {
    let truth = three_wave_truth();
    let model_truth = MultiLogisticModel::new(0.0, 0.01, truth.clone()).unwrap();
    // differential data sampled from the derivative model itself
    let series = TimeSeries::differential((1..=300).map(|t| model_deriv(&model_truth, t as f64)).collect());
    let d = extract_waves(&series, &ExtractConfig::default()).unwrap();
    assert_eq!(d.waves.len(), 3, "{:#?}", d.waves);
    let init = MultiLogisticModel::new(0.0, 0.01, d.logistic_waves()).unwrap();
    let (fitted, report) = refine(&init, &series, &RefineOptions::default()).unwrap();
    let range = series.range();
    assert!(report.rmse_after <= 1e-6 * range, "{report:?}");
    assert!(report.rmse_after <= report.rmse_before);
    assert!(r_squared(&fitted, &series).unwrap() >= 0.999);
}

#[test]
fn aggregate_then_difference_is_identity_on_integers() {
    let s = TimeSeries::differential((0..50).map(|k| ((k * 7919) % 23) as f64 - 11.0).collect());
    assert_eq!(differentiate(&aggregate(&s).unwrap()).unwrap().values, s.values);
}
