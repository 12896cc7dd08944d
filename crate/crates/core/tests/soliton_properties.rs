use proptest::prelude::*;
use trendwave_core::soliton::{
    kdv_residual, lambert_w, n_soliton_p, n_soliton_p_at, phase_shift, single_soliton, slice_peaks,
    Grid2D, LogDerivative, SolitonSpec,
};

fn single_grid(kappa: f64, c1: f64, h: f64) -> Grid2D {
    let spec = SolitonSpec::single(kappa, c1).unwrap();
    Grid2D::spanning(-8.0, 8.0, h, 0.0, 0.2, h)
        .unwrap()
        .map_fn(|x, t| single_soliton(&spec, x, t).unwrap())
}

#[test]
fn single_soliton_residual_is_small() {
    let r = kdv_residual(&single_grid(1.0, 0.0, 0.01), 0.0).unwrap();
    assert!(r <= 1e-3, "{r}");
}

#[test]
fn residual_converges_at_second_order() {
    let r1 = kdv_residual(&single_grid(1.0, 0.0, 0.02), 0.0).unwrap();
    let r2 = kdv_residual(&single_grid(1.0, 0.0, 0.01), 0.0).unwrap();
    let r3 = kdv_residual(&single_grid(1.0, 0.0, 0.005), 0.0).unwrap();
    for (a, b) in [(r1, r2), (r2, r3)] {
        let order = (a / b).log2();
        assert!((order - 2.0).abs() <= 0.2, "order {order} from {a} / {b}");
    }
}

#[test]
fn forced_soliton_as_written_leaves_a_residual() {
    // With C1 != 0 the quadratic phase term C1 t^2 / 2 does not cancel the
    // -6 C1 t P_X cross term; a 3 C1 t^2 shift would.
    let c1 = 0.1;
    let h = 0.01;
    let written = single_grid(1.0, c1, h);
    let r_written = kdv_residual(&written, c1).unwrap();
    let galilean = written.map_fn(|x, t| {
        let s = SolitonSpec::single(1.0, 0.0).unwrap();
        single_soliton(&s, x + 3.0 * c1 * t * t, t).unwrap() - c1 * t
    });
    let r_galilean = kdv_residual(&galilean, c1).unwrap();
    assert!(r_galilean <= 1e-3, "{r_galilean}");
    assert!(r_written > 10.0 * r_galilean, "{r_written} vs {r_galilean}");
}

#[test]
fn hirota_single_soliton_matches_closed_form() {
    let spec = SolitonSpec::single(2.0, 0.0).unwrap();
    let grid = Grid2D::spanning(-10.0, 10.0, 0.05, -1.0, 1.0, 0.05).unwrap();
    let hirota = n_soliton_p(&spec, &grid);
    let closed = grid.map_fn(|x, t| single_soliton(&spec, x, t).unwrap());
    assert!(hirota.sup_distance(&closed) <= 1e-6);
    let fd = trendwave_core::soliton::n_soliton_p_with(&spec, &grid, LogDerivative::FiniteDifference);
    assert!(fd.sup_distance(&closed) <= 1e-6);
}

#[test]
fn hirota_fields_solve_kdv() {
    let spec = SolitonSpec::new(vec![1.0, 1.6], 0.0).unwrap();
    let grid = Grid2D::spanning(-10.0, 10.0, 0.01, -0.1, 0.1, 0.01).unwrap();
    let r = kdv_residual(&n_soliton_p(&spec, &grid), 0.0).unwrap();
    assert!(r <= 5e-3, "{r}");
}

#[test]
fn two_solitons_separate_with_their_amplitudes() {
    let (k1, k2) = (1.0, 2.0);
    let spec = SolitonSpec::new(vec![k1, k2], 0.0).unwrap();
    for &t in &[-12.0, 12.0] {
        // speeds k^2: pulses sit near x = t and x = 4t
        let grid = Grid2D::spanning(-80.0, 80.0, 0.01, t, t, 0.01).unwrap();
        let p = n_soliton_p(&spec, &grid);
        let mut peaks: Vec<f64> = slice_peaks(p.row(0)).into_iter().map(|(_, v)| v).collect();
        peaks.sort_by(|a, b| a.total_cmp(b));
        assert_eq!(peaks.len(), 2, "t={t}: {peaks:?}");
        assert!((peaks[0] - k1 * k1 / 2.0).abs() < 1e-4, "{peaks:?}");
        assert!((peaks[1] - k2 * k2 / 2.0).abs() < 1e-4, "{peaks:?}");
    }
}

#[test]
fn n_soliton_fields_are_non_negative() {
    let spec = SolitonSpec::new(vec![0.5, 1.2, 1.9], 0.0).unwrap();
    let grid = Grid2D::spanning(-30.0, 30.0, 0.1, -3.0, 3.0, 0.1).unwrap();
    let p = n_soliton_p(&spec, &grid);
    assert!(p.values.iter().all(|v| *v >= 0.0));
}

#[test]
fn lambert_w_inverts_across_its_range() {
    let lo = -1.0 / std::f64::consts::E;
    let n = 20_000;
    for i in 0..=n {
        // denser near the branch point
        let s = i as f64 / n as f64;
        let r = lo + (1e3 - lo) * s.powi(3);
        let w = lambert_w(r).unwrap();
        assert!((w * w.exp() - r).abs() <= 1e-12, "r={r}, w={w}");
    }
    assert!(lambert_w(lo - 1e-6).is_err());
}

proptest! {
    #[test]
    fn travelling_wave_invariance(x in -20.0f64..20.0, t in -3.0f64..3.0, s in -5.0f64..5.0, k in 0.2f64..3.0) {
        let spec = SolitonSpec::single(k, 0.0).unwrap();
        let a = single_soliton(&spec, x, t).unwrap();
        let b = single_soliton(&spec, x + k * k * s, t + s).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn phase_shift_symmetric_in_unit_interval(a in 0.01f64..10.0, b in 0.01f64..10.0) {
        prop_assume!((a - b).abs() > 1e-6 * (a + b));
        let p = phase_shift(a, b).unwrap();
        prop_assert_eq!(p, phase_shift(b, a).unwrap());
        prop_assert!(p > 0.0 && p < 1.0);
    }

    #[test]
    fn analytic_single_soliton_matches_everywhere(x in -30.0f64..30.0, t in -2.0f64..2.0, k in 0.2f64..3.0) {
        let spec = SolitonSpec::single(k, 0.0).unwrap();
        let a = n_soliton_p_at(&spec, x, t, LogDerivative::Analytic);
        prop_assert!((a - single_soliton(&spec, x, t).unwrap()).abs() <= 1e-12);
    }
}
