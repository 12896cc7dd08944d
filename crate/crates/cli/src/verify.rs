//! Named numerical self-checks, grouped into suites.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use trendwave_core::decompose::{estimate_saturation, second_differences_of, LogisticWave};
use trendwave_core::infocalc::{
    configurational_information_3, mutual_information_2, mutual_redundancy, shannon_entropy,
    JointDistribution,
};
use trendwave_core::logwave::{
    bernoulli_f64, linear_grid, logistic_derivative, psi, scalogram, ExtremumKind,
};
use trendwave_core::quad::simpson;
use trendwave_core::soliton::{
    kdv_residual, lambert_w, n_soliton_p, phase_shift, sech2, single_soliton, Grid2D, SolitonSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Wavelet,
    Soliton,
    Entropy,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn within(suite: &'static str, name: impl Into<String>, error: f64, tolerance: f64) -> Check {
        Check {
            suite,
            name: name.into(),
            measured: error,
            tolerance,
            pass: error.is_finite() && error <= tolerance,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{}: {} (measured {:.3e}, tolerance {:.1e})",
            self.name,
            if self.pass { "pass" } else { "FAIL" },
            self.measured,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

pub fn run(suite: Suite) -> VerifyReport {
    let checks = match suite {
        Suite::Wavelet => wavelet(),
        Suite::Soliton => soliton(),
        Suite::Entropy => entropy(),
        Suite::All => {
            let mut all = wavelet();
            all.extend(soliton());
            all.extend(entropy());
            all
        }
    };
    let passed = checks.iter().filter(|c| c.pass).count();
    VerifyReport {
        schema: 1,
        suite,
        failed: checks.len() - passed,
        passed,
        checks,
    }
}

const SUBSCRIPTS: [&str; 10] = ["₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"];

fn integral(f: impl Fn(f64) -> f64) -> f64 {
    simpson(f, -40.0, 40.0, 2e-3)
}

fn logistic_d2(a: f64, b: f64, y_sat: f64, len: usize) -> Vec<f64> {
    let w = LogisticWave { a, b, y_sat };
    let y: Vec<f64> = (0..=len + 1).map(|n| w.value(n as f64)).collect();
    second_differences_of(&y).expect("long enough")
}

pub fn wavelet() -> Vec<Check> {
    const S: &str = "wavelet";
    let mut out = Vec::new();
    for n in 2..=4u32 {
        let norm = integral(|t| psi(n, t).expect("valid order").powi(2));
        out.push(Check::within(
            S,
            format!("∫ψ{}²=1 within 1e-6", SUBSCRIPTS[n as usize]),
            (norm - 1.0).abs(),
            1e-6,
        ));
    }
    for n in 2..=4u32 {
        let raw = integral(|t| logistic_derivative(n, t).powi(2));
        let b = bernoulli_f64(2 * n as i64).expect("tabulated").abs();
        out.push(Check::within(
            S,
            format!("∫(x^({n}))²=|B_{}| within 1e-6", 2 * n),
            (raw / b - 1.0).abs(),
            1e-6,
        ));
    }
    let mean = integral(|t| psi(2, t).expect("valid order"));
    out.push(Check::within(S, "∫ψ₂=0 within 1e-9", mean.abs(), 1e-9));
    let energy = integral(|t| (-2.0 * sech2(t) * t.tanh()).powi(2));
    out.push(Check::within(
        S,
        "∫(d/dt sech²t)²=16/15 within 1e-6",
        (energy - 16.0 / 15.0).abs(),
        1e-6,
    ));

    let scales = linear_grid(0.5, 20.0, 0.25);
    let shifts = linear_grid(1.0, 100.0, 0.5);
    for (y_sat, kind) in [(1.0, ExtremumKind::Max), (-1.8, ExtremumKind::Min)] {
        let sc = scalogram(&logistic_d2(6.0, 50.0, y_sat, 100), 1.0, &scales, &shifts)
            .expect("valid grid");
        let e = match kind {
            ExtremumKind::Max => sc.global_max,
            ExtremumKind::Min => sc.global_min,
        };
        let cell = ((e.alpha - 6.0).abs() / 0.25).max((e.beta - 50.0).abs() / 0.5);
        out.push(Check::within(
            S,
            format!("scalogram extremum for y_sat={y_sat} within one cell of (6, 50)"),
            cell,
            1.0 + 1e-9,
        ));
        let est = estimate_saturation(e.alpha, e.value).unwrap_or(f64::NAN);
        out.push(Check::within(
            S,
            format!("estimated saturation {y_sat} within 2%"),
            (est / y_sat - 1.0).abs(),
            0.02,
        ));
    }
    out
}

fn single_residual(h: f64) -> f64 {
    let spec = SolitonSpec::single(1.0, 0.0).expect("positive wavenumber");
    let grid = Grid2D::spanning(-8.0, 8.0, h, 0.0, 0.2, h)
        .expect("valid grid")
        .map_fn(|x, t| single_soliton(&spec, x, t).expect("valid spec"));
    kdv_residual(&grid, 0.0).expect("grid large enough")
}

pub fn soliton() -> Vec<Check> {
    const S: &str = "soliton";
    let mut out = Vec::new();
    let (coarse, fine) = (single_residual(0.02), single_residual(0.01));
    out.push(Check::within(
        S,
        "single-soliton KdV residual <= 1e-3 at h=0.01",
        fine,
        1e-3,
    ));
    out.push(Check::within(
        S,
        "residual convergence order 2.0 ± 0.2",
        ((coarse / fine).log2() - 2.0).abs(),
        0.2,
    ));

    let spec = SolitonSpec::single(2.0, 0.0).expect("positive wavenumber");
    let grid = Grid2D::spanning(-10.0, 10.0, 0.05, -1.0, 1.0, 0.05).expect("valid grid");
    let closed = grid.map_fn(|x, t| single_soliton(&spec, x, t).expect("valid spec"));
    out.push(Check::within(
        S,
        "N=1 Hirota field matches closed form within 1e-6",
        n_soliton_p(&spec, &grid).sup_distance(&closed),
        1e-6,
    ));
    let shift = phase_shift(3.0, 1.0).unwrap_or(f64::NAN);
    out.push(Check::within(S, "phase shift (3,1) = 0.25", (shift - 0.25).abs(), 0.0));

    let lo = -1.0 / std::f64::consts::E;
    let worst = (0..=2000)
        .map(|i| {
            let r = lo + (1e3 - lo) * (i as f64 / 2000.0).powi(3);
            let w = lambert_w(r).unwrap_or(f64::NAN);
            (w * w.exp() - r).abs()
        })
        .fold(0.0, f64::max);
    out.push(Check::within(
        S,
        "Lambert W residual <= 1e-12 on [-1/e, 1000]",
        worst,
        1e-12,
    ));
    out
}

pub fn entropy() -> Vec<Check> {
    const S: &str = "entropy";
    let mut out = Vec::new();
    let mut p = vec![0.0; 8];
    for x in 0..2 {
        for y in 0..2 {
            p[x * 4 + y * 2 + (x ^ y)] = 0.25;
        }
    }
    let xor = JointDistribution::new(vec![2, 2, 2], p).expect("valid table");
    let t = configurational_information_3(&xor).unwrap_or(f64::NAN);
    out.push(Check::within(S, "XOR T₁₂₃ = -1 within 1e-12", (t + 1.0).abs(), 1e-12));

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    let mut negative = 0.0_f64;
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let raw: Vec<f64> = (0..r * c).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let d = JointDistribution::new(vec![r, c], raw.iter().map(|v| v / total).collect())
            .expect("valid table");
        let t12 = mutual_information_2(&d).unwrap_or(f64::NAN);
        let r12 = mutual_redundancy(&d).unwrap_or(f64::NAN);
        worst = worst.max((r12 + t12).abs());
        negative = negative.max(-t12);
    }
    out.push(Check::within(
        S,
        "R₁₂ = -T₁₂ on 100 random tables within 1e-12",
        worst,
        1e-12,
    ));
    out.push(Check::within(S, "T₁₂ >= 0 on 100 random tables", negative.max(0.0), 1e-12));

    let uniform = JointDistribution::from_slice(&[0.25; 4]).expect("valid table");
    let h = shannon_entropy(&uniform, &[0]).unwrap_or(f64::NAN);
    out.push(Check::within(S, "H(uniform over 4) = 2 bits", (h - 2.0).abs(), 1e-12));
    let product = JointDistribution::product(&[&[0.3, 0.7], &[0.1, 0.2, 0.7]]).expect("valid");
    out.push(Check::within(
        S,
        "T₁₂ = 0 for a product distribution",
        mutual_information_2(&product).unwrap_or(f64::NAN).abs(),
        1e-12,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for suite in [Suite::Wavelet, Suite::Soliton, Suite::Entropy] {
            let r = run(suite);
            assert!(!r.checks.is_empty());
            for c in &r.checks {
                assert!(c.pass, "{}", c.line());
            }
        }
    }

    #[test]
    fn all_is_the_union() {
        let total: usize = [Suite::Wavelet, Suite::Soliton, Suite::Entropy]
            .iter()
            .map(|s| run(*s).checks.len())
            .sum();
        assert_eq!(run(Suite::All).checks.len(), total);
    }

    #[test]
    fn line_format() {
        let c = Check::within("wavelet", "∫ψ₂²=1 within 1e-6", 1e-9, 1e-6);
        assert!(c.line().starts_with("∫ψ₂²=1 within 1e-6: pass"));
    }
}
