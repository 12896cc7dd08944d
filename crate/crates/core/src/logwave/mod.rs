//! Logistic wavelets and the discrete wavelet Index.
//!
//! The order-`n` logistic wavelet is the normalized `n`th derivative of the
//! logistic function `x(t) = 1 / (1 + e^{-t})`:
//!
//! ```text
//! psi_n(t) = (-1)^n / sqrt(|B_2n|) * x^(n)(t)
//! ```
//!
//! where `B_2n` is a Bernoulli number, since `int (x^(n))^2 dt = |B_2n|`.
//! The analysis family is `psi^{a,b}(t) = psi((t - b) / a) / sqrt(a)`.
//!
//! A logistic `x_sat / (1 + exp(-(t - b) / a))` has second derivative
//! `x_sat / (sqrt(30) a^{3/2}) * psi_2^{a,b}`, so by Cauchy–Schwarz the
//! transform of that second derivative peaks at exactly `(a, b)` with value
//! `x_sat / (sqrt(30) a^{3/2})`. The [`Scalogram`] exploits this to locate
//! logistic components.

mod bernoulli;
mod scalogram;

pub use bernoulli::{bernoulli, bernoulli_f64, MAX_BERNOULLI_INDEX};
pub use scalogram::{
    geometric_scales, linear_grid, scalogram, Extremum, ExtremumKind, Scalogram,
    EXTREMUM_FLOOR_FRACTION,
};

use crate::error::{invalid, Result};

/// `|psi_2(t)| < 1e-11` beyond this many scale units from the centre.
pub const TAIL_CUTOFF: f64 = 30.0;

/// Highest wavelet order whose normalization `B_2n` is available.
pub const MAX_ORDER: u32 = (MAX_BERNOULLI_INDEX / 2) as u32;

/// `1 / (1 + e^{-t})` without overflow for large `|t|`.
#[inline]
pub fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Coefficients (ascending powers of `u`) of `Q_n` with
/// `x^(n) = u (1 - u) Q_n(u)`, `u = x(t)`, for `n >= 1`.
///
/// From `x' = u(1-u)`: `Q_1 = 1` and
/// `Q_{n+1} = (1 - 2u) Q_n + u (1 - u) Q_n'`.
fn derivative_factor(n: u32) -> Vec<f64> {
    let mut q = vec![1.0];
    for _ in 1..n {
        let mut next = vec![0.0; q.len() + 1];
        for (k, &c) in q.iter().enumerate() {
            // (1 - 2u) * c u^k
            next[k] += c;
            next[k + 1] -= 2.0 * c;
            // u (1 - u) * k c u^{k-1}
            if k > 0 {
                let kc = k as f64 * c;
                next[k] += kc;
                next[k + 1] -= kc;
            }
        }
        q = next;
    }
    q
}

/// `n`th derivative of the logistic function at `t`.
pub fn logistic_derivative(n: u32, t: f64) -> f64 {
    let u = logistic(t);
    if n == 0 {
        return u;
    }
    let v = logistic(-t);
    let q = derivative_factor(n);
    let poly = q.iter().rev().fold(0.0, |acc, &c| acc * u + c);
    u * v * poly
}

/// `psi_2(t) = sqrt(30) x''(t)`.
#[inline]
pub fn psi2(t: f64) -> f64 {
    let u = logistic(t);
    let v = logistic(-t);
    SQRT_30 * u * v * (v - u)
}

const SQRT_30: f64 = 5.477_225_575_051_661;

fn check_order(n: u32) -> Result<()> {
    if n < 2 {
        return invalid(format!("logistic wavelet order must be >= 2, got {n}"));
    }
    if n > MAX_ORDER {
        return invalid(format!("logistic wavelet order {n} above supported {MAX_ORDER}"));
    }
    Ok(())
}

/// Normalization `1 / sqrt(|B_2n|)` of the order-`n` wavelet.
pub fn normalization(n: u32) -> Result<f64> {
    check_order(n)?;
    Ok(1.0 / bernoulli_f64(2 * n as i64)?.abs().sqrt())
}

/// Normalized order-`n` logistic mother wavelet.
pub fn psi(n: u32, t: f64) -> Result<f64> {
    if n == 2 {
        return Ok(psi2(t));
    }
    let norm = normalization(n)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * norm * logistic_derivative(n, t))
}

/// Dilated and translated wavelet `psi_n((t - b) / a) / sqrt(a)`.
pub fn psi_ab(n: u32, a: f64, b: f64, t: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return invalid(format!("wavelet scale must be positive, got {a}"));
    }
    Ok(psi(n, (t - b) / a)? / a.sqrt())
}

/// Index sum `sum_n d2y_n psi_2^{alpha,beta}(n)` with `d2y` indexed from 1.
pub fn cwt_index(d2y: &[f64], alpha: f64, beta: f64) -> Result<f64> {
    cwt_index_at(d2y, 1.0, alpha, beta)
}

/// Index sum where `d2y[k]` sits at time `first_time + k`.
pub fn cwt_index_at(d2y: &[f64], first_time: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return invalid(format!("wavelet scale must be positive, got {alpha}"));
    }
    if d2y.len() < 3 {
        return invalid(format!("Index needs at least 3 samples, got {}", d2y.len()));
    }
    Ok(index_unchecked(d2y, first_time, alpha, beta))
}

#[inline]
pub(crate) fn index_unchecked(d2y: &[f64], first_time: f64, alpha: f64, beta: f64) -> f64 {
    let reach = TAIL_CUTOFF * alpha;
    let lo = ((beta - reach - first_time).ceil()).max(0.0);
    let hi = ((beta + reach - first_time).floor()).min(d2y.len() as f64 - 1.0);
    if hi < lo {
        return 0.0;
    }
    let inv_a = 1.0 / alpha;
    let scale = inv_a.sqrt();
    let mut acc = 0.0;
    for k in lo as usize..=hi as usize {
        let t = (first_time + k as f64 - beta) * inv_a;
        acc += d2y[k] * psi2(t);
    }
    acc * scale
}
