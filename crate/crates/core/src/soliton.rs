//! Closed-form soliton solutions of the forced KdV equation
//! `P_T + 6 P P_X + P_XXX + C1 = 0` and the tools used to check them.
//!
//! The N-soliton field is built from the Hirota tau function
//! `F_N = sum over mu in {0,1}^N of exp(sum mu_i eta_i + sum_{i<j} mu_i mu_j A_ij)`
//! with `eta_i = k_i x - k_i^3 t`, and `P = 2 d^2/dx^2 log F_N`. `F_N` is
//! evaluated as a log-sum-exp so large phases do not overflow.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Two wave numbers closer than this (relative to their sum) are treated as
/// equal: the phase shift degenerates there.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolitonSpec {
    kappas: Vec<f64>,
    c1: f64,
}

impl SolitonSpec {
    pub fn new(kappas: Vec<f64>, c1: f64) -> Result<Self> {
        if kappas.is_empty() {
            return invalid("soliton spec needs at least one wave number");
        }
        if let Some(k) = kappas.iter().find(|k| !k.is_finite() || **k <= 0.0) {
            return invalid(format!("wave numbers must be positive and finite, got {k}"));
        }
        if !c1.is_finite() {
            return invalid("forcing constant C1 must be finite");
        }
        for i in 0..kappas.len() {
            for j in i + 1..kappas.len() {
                if degenerate(kappas[i], kappas[j]) {
                    return invalid(format!(
                        "wave numbers {} and {} coincide",
                        kappas[i], kappas[j]
                    ));
                }
            }
        }
        Ok(SolitonSpec { kappas, c1 })
    }

    pub fn single(kappa: f64, c1: f64) -> Result<Self> {
        Self::new(vec![kappa], c1)
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }

    pub fn max_kappa(&self) -> f64 {
        self.kappas.iter().cloned().fold(0.0, f64::max)
    }
}

fn degenerate(a: f64, b: f64) -> bool {
    (a - b).abs() <= DEGENERACY_TOLERANCE * (a + b)
}

/// `sech^2(z)`, written to stay accurate for large `|z|`.
pub fn sech2(z: f64) -> f64 {
    let e = (-2.0 * z.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// Single soliton with forcing:
/// `2 (k/2)^2 sech^2[(k/2)(x - 4 (k/2)^2 t + C1 t^2 / 2)] - C1 t`.
pub fn single_soliton(spec: &SolitonSpec, x: f64, t: f64) -> Result<f64> {
    if spec.len() != 1 {
        return invalid(format!(
            "single soliton needs exactly one wave number, got {}",
            spec.len()
        ));
    }
    let half = spec.kappas[0] / 2.0;
    let c1 = spec.c1;
    let arg = half * (x - 4.0 * half * half * t + 0.5 * c1 * t * t);
    Ok(2.0 * half * half * sech2(arg) - c1 * t)
}

/// Pulse `n(n+1) rho^2 sech^2[rho (x - 4 rho^2 t + C1 t^2 / 2)] - C1 t`.
///
/// For `n = 1` this is the single soliton with `kappa = 2 rho`. For larger `n`
/// it is only an initial condition: under KdV it fissions into `n` solitons.
pub fn sech2_pulse(n: u32, rho: f64, c1: f64, x: f64, t: f64) -> f64 {
    let nf = n as f64;
    nf * (nf + 1.0) * rho * rho * sech2(rho * (x - 4.0 * rho * rho * t + 0.5 * c1 * t * t))
        - c1 * t
}

/// `e^{A_ij} = ((k_i - k_j) / (k_i + k_j))^2`.
pub fn phase_shift(ki: f64, kj: f64) -> Result<f64> {
    if !(ki > 0.0 && kj > 0.0) || !ki.is_finite() || !kj.is_finite() {
        return invalid(format!("wave numbers must be positive, got {ki}, {kj}"));
    }
    if degenerate(ki, kj) {
        return invalid(format!("phase shift undefined for equal wave numbers {ki}, {kj}"));
    }
    let r = (ki - kj) / (ki + kj);
    Ok(r * r)
}

/// One term of the tau-function expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauTerm {
    /// Bit `i` set means `mu_i = 1`.
    pub mask: u32,
    pub exponent: f64,
    /// `sum mu_i k_i`, the x-derivative of `exponent`.
    pub wavenumber: f64,
}

/// All `2^N` terms of `F_N` at `(x, t)`, in ascending mask order.
pub fn tau_terms(spec: &SolitonSpec, x: f64, t: f64) -> Vec<TauTerm> {
    let k = &spec.kappas;
    let n = k.len();
    assert!(n < 31, "N-soliton expansion limited to 30 solitons");
    let eta: Vec<f64> = k.iter().map(|&k| k * x - k * k * k * t).collect();
    let mut log_shift = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let r = (k[i] - k[j]) / (k[i] + k[j]);
            log_shift[i][j] = 2.0 * r.abs().ln();
        }
    }
    (0u32..1 << n)
        .map(|mask| {
            let mut exponent = 0.0;
            let mut wavenumber = 0.0;
            for i in 0..n {
                if mask & (1 << i) == 0 {
                    continue;
                }
                exponent += eta[i];
                wavenumber += k[i];
                for j in i + 1..n {
                    if mask & (1 << j) != 0 {
                        exponent += log_shift[i][j];
                    }
                }
            }
            TauTerm {
                mask,
                exponent,
                wavenumber,
            }
        })
        .collect()
}

/// `log F_N` via log-sum-exp. The forcing constant is not part of the
/// N-soliton construction and is ignored here.
pub fn n_soliton_log_f(spec: &SolitonSpec, x: f64, t: f64) -> f64 {
    let terms = tau_terms(spec, x, t);
    let m = terms
        .iter()
        .map(|t| t.exponent)
        .fold(f64::NEG_INFINITY, f64::max);
    m + terms.iter().map(|t| (t.exponent - m).exp()).sum::<f64>().ln()
}

/// `F_N(x, t)`; infinite once `log F_N` exceeds the f64 range.
pub fn n_soliton_f(spec: &SolitonSpec, x: f64, t: f64) -> f64 {
    n_soliton_log_f(spec, x, t).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogDerivative {
    /// Exact: `(log F)'' = F''/F - (F'/F)^2`, evaluated as the variance of the
    /// term wavenumbers under softmax weights.
    #[default]
    Analytic,
    /// Fourth-order centered differences of `log F` in `x`.
    FiniteDifference,
}

/// `P(x, t) = 2 d^2/dx^2 log F_N`.
pub fn n_soliton_p_at(spec: &SolitonSpec, x: f64, t: f64, method: LogDerivative) -> f64 {
    match method {
        LogDerivative::Analytic => {
            let terms = tau_terms(spec, x, t);
            let m = terms
                .iter()
                .map(|t| t.exponent)
                .fold(f64::NEG_INFINITY, f64::max);
            let weights: Vec<f64> = terms.iter().map(|t| (t.exponent - m).exp()).collect();
            let total: f64 = weights.iter().sum();
            let mean = terms
                .iter()
                .zip(&weights)
                .map(|(t, w)| w * t.wavenumber)
                .sum::<f64>()
                / total;
            let var = terms
                .iter()
                .zip(&weights)
                .map(|(t, w)| w * (t.wavenumber - mean).powi(2))
                .sum::<f64>()
                / total;
            2.0 * var
        }
        LogDerivative::FiniteDifference => {
            let h = 1e-2 / spec.max_kappa();
            let f = |dx: f64| n_soliton_log_f(spec, x + dx, t);
            let d2 = (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h))
                / (12.0 * h * h);
            2.0 * d2
        }
    }
}

/// Fill `grid` with the N-soliton field using the analytic log-derivative.
pub fn n_soliton_p(spec: &SolitonSpec, grid: &Grid2D) -> Grid2D {
    n_soliton_p_with(spec, grid, LogDerivative::Analytic)
}

pub fn n_soliton_p_with(spec: &SolitonSpec, grid: &Grid2D, method: LogDerivative) -> Grid2D {
    grid.map_fn(|x, t| n_soliton_p_at(spec, x, t, method))
}

/// Uniform `(X, T)` sample grid; `values[j * nx + i]` holds `P(x_i, t_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid2D {
    pub x0: f64,
    pub hx: f64,
    pub nx: usize,
    pub t0: f64,
    pub ht: f64,
    pub nt: usize,
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn new(x0: f64, hx: f64, nx: usize, t0: f64, ht: f64, nt: usize) -> Result<Self> {
        if !(hx > 0.0 && ht > 0.0) || !hx.is_finite() || !ht.is_finite() {
            return invalid(format!("grid steps must be positive, got hx={hx}, ht={ht}"));
        }
        if nx == 0 || nt == 0 {
            return invalid("grid needs at least one point per axis");
        }
        Ok(Grid2D {
            x0,
            hx,
            nx,
            t0,
            ht,
            nt,
            values: vec![0.0; nx * nt],
        })
    }

    /// Grid covering `[x_min, x_max] x [t_min, t_max]` (endpoints included).
    pub fn spanning(x_min: f64, x_max: f64, hx: f64, t_min: f64, t_max: f64, ht: f64) -> Result<Self> {
        if x_max < x_min || t_max < t_min {
            return invalid("grid extents must be ordered");
        }
        let nx = ((x_max - x_min) / hx).round() as usize + 1;
        let nt = ((t_max - t_min) / ht).round() as usize + 1;
        Self::new(x_min, hx, nx, t_min, ht, nt)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx
    }

    pub fn t(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.ht
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.nx..(j + 1) * self.nx]
    }

    /// Same geometry, values from `f(x, t)`.
    pub fn map_fn<F: Fn(f64, f64) -> f64 + Sync>(&self, f: F) -> Grid2D {
        let mut out = self.clone();
        let nx = self.nx;
        out.values
            .par_chunks_mut(nx)
            .enumerate()
            .for_each(|(j, row)| {
                let t = self.t(j);
                for (i, v) in row.iter_mut().enumerate() {
                    *v = f(self.x(i), t);
                }
            });
        out
    }

    pub fn sup_distance(&self, other: &Grid2D) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Sup-norm over interior points of `|P_T + 6 P P_X + P_XXX + C1|` using
/// second-order centered differences.
pub fn kdv_residual(grid: &Grid2D, c1: f64) -> Result<f64> {
    if grid.nx < 5 || grid.nt < 3 {
        return invalid(format!(
            "residual needs at least 5 x-points and 3 t-points, got {}x{}",
            grid.nx, grid.nt
        ));
    }
    let (hx, ht) = (grid.hx, grid.ht);
    let worst = (1..grid.nt - 1)
        .into_par_iter()
        .map(|j| {
            let prev = grid.row(j - 1);
            let cur = grid.row(j);
            let next = grid.row(j + 1);
            let mut worst = 0.0_f64;
            for i in 2..grid.nx - 2 {
                let p = cur[i];
                let p_t = (next[i] - prev[i]) / (2.0 * ht);
                let p_x = (cur[i + 1] - cur[i - 1]) / (2.0 * hx);
                let p_xxx = (cur[i + 2] - 2.0 * cur[i + 1] + 2.0 * cur[i - 1] - cur[i - 2])
                    / (2.0 * hx * hx * hx);
                worst = worst.max((p_t + 6.0 * p * p_x + p_xxx + c1).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Strict local maxima of a sampled profile as `(index, value)`.
pub fn slice_peaks(values: &[f64]) -> Vec<(usize, f64)> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .map(|i| (i, values[i]))
        .collect()
}

/// Observed soliton amplitudes with their (strictly increasing) times.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonTrain {
    entries: Vec<(f64, f64)>,
}

impl SolitonTrain {
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self> {
        for w in entries.windows(2) {
            if w[1].1 == w[0].1 {
                return invalid(format!("duplicate time {}", w[0].1));
            }
            if w[1].1 < w[0].1 {
                return invalid("soliton train times must be strictly increasing");
            }
        }
        if entries.iter().any(|(a, t)| !a.is_finite() || !t.is_finite()) {
            return invalid("soliton train entries must be finite");
        }
        Ok(SolitonTrain { entries })
    }

    pub fn from_columns(amplitudes: &[f64], times: &[f64]) -> Result<Self> {
        if amplitudes.len() != times.len() {
            return invalid("amplitude and time columns differ in length");
        }
        Self::new(amplitudes.iter().cloned().zip(times.iter().cloned()).collect())
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linearity {
    pub linear: bool,
    /// Least-squares slope of amplitude against time.
    pub slope: f64,
    /// Largest deviation of a pairwise slope from `slope`.
    pub max_deviation: f64,
}

/// Whether `(A_i - A_j) / (T_i - T_j)` is the same constant for all pairs,
/// within `tol` of the least-squares slope.
pub fn amplitude_time_linearity(train: &SolitonTrain, tol: f64) -> Result<Linearity> {
    let e = train.entries();
    if e.len() < 3 {
        return invalid(format!("linearity check needs at least 3 entries, got {}", e.len()));
    }
    let n = e.len() as f64;
    let mean_t = e.iter().map(|p| p.1).sum::<f64>() / n;
    let mean_a = e.iter().map(|p| p.0).sum::<f64>() / n;
    let sxy: f64 = e.iter().map(|(a, t)| (t - mean_t) * (a - mean_a)).sum();
    let sxx: f64 = e.iter().map(|(_, t)| (t - mean_t).powi(2)).sum();
    let slope = sxy / sxx;
    let mut max_deviation = 0.0_f64;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let s = (e[i].0 - e[j].0) / (e[i].1 - e[j].1);
            max_deviation = max_deviation.max((s - slope).abs());
        }
    }
    Ok(Linearity {
        linear: max_deviation <= tol,
        slope,
        max_deviation,
    })
}

const INV_E: f64 = 0.367_879_441_171_442_33;

/// Principal branch of the Lambert W function, `w e^w = r`, by Newton
/// iteration from a branch-aware starting point.
pub fn lambert_w(r: f64) -> Result<f64> {
    if r.is_nan() || r < -INV_E {
        return Err(Error::Domain(format!(
            "Lambert W principal branch needs r >= -1/e, got {r}"
        )));
    }
    if r == -INV_E {
        return Ok(-1.0);
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    if r.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if r < -0.25 {
        // series about the branch point
        let p = (2.0 * (std::f64::consts::E * r + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if r < 3.0 {
        let l = r.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    } else {
        let l = r.ln();
        l - l.ln()
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - r;
        let fp = (w + 1.0) * ew;
        if fp == 0.0 {
            break;
        }
        let step = f / fp;
        let next = (w - step).max(-1.0);
        if (next - w).abs() <= 4.0 * f64::EPSILON * w.abs().max(1e-300) {
            w = next;
            break;
        }
        w = next;
    }
    Ok(w)
}

/// Invert `R = q e^q` for the density `P = e^q = e^{W(R)}`; equals `R / W(R)`
/// away from zero.
pub fn density_from_redundancy(r: f64) -> Result<f64> {
    Ok(lambert_w(r)?.exp())
}
