use rayon::prelude::*;
use serde::Serialize;

use super::index_unchecked;
use crate::error::{invalid, Result};

/// Strict local extrema smaller than this fraction of `max |Index|` are not
/// recorded.
pub const EXTREMUM_FLOOR_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
    pub kind: ExtremumKind,
    pub scale_index: usize,
    pub shift_index: usize,
}

/// Index values over a (scale, shift) grid. Row `i` of `values` holds scale
/// `scales[i]` across all shifts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scalogram {
    pub scales: Vec<f64>,
    pub shifts: Vec<f64>,
    pub values: Vec<f64>,
    pub global_max: Extremum,
    pub global_min: Extremum,
    /// Strict local extrema of the 8-neighbourhood above the magnitude floor,
    /// ordered by decreasing magnitude.
    pub extrema: Vec<Extremum>,
}

/// `steps` points from `lo` to `hi` (inclusive) in geometric progression.
pub fn geometric_scales(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && steps >= 1);
    if steps == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (steps - 1) as f64;
    (0..steps).map(|i| lo * (ratio * i as f64).exp()).collect()
}

/// `start, start + step, ...` up to `end` (inclusive, with a small slack).
pub fn linear_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && end >= start);
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

impl Scalogram {
    pub fn get(&self, scale_index: usize, shift_index: usize) -> f64 {
        self.values[scale_index * self.shifts.len() + shift_index]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Cell with the largest `|Index|`; ties go to the smaller shift, then the
    /// smaller scale. `None` when the matrix is identically zero.
    pub fn dominant(&self) -> Option<Extremum> {
        let ns = self.shifts.len();
        let mut best: Option<(usize, usize, f64)> = None;
        for j in 0..ns {
            for i in 0..self.scales.len() {
                let v = self.values[i * ns + j];
                let better = match best {
                    None => v != 0.0,
                    Some((_, _, b)) => v.abs() > b.abs(),
                };
                if better {
                    best = Some((i, j, v));
                }
            }
        }
        best.map(|(i, j, v)| self.extremum_at(i, j, v))
    }

    fn extremum_at(&self, i: usize, j: usize, value: f64) -> Extremum {
        Extremum {
            alpha: self.scales[i],
            beta: self.shifts[j],
            value,
            kind: if value >= 0.0 {
                ExtremumKind::Max
            } else {
                ExtremumKind::Min
            },
            scale_index: i,
            shift_index: j,
        }
    }

    /// Comma-separated matrix: header row of shifts, one row per scale.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha\\beta");
        for b in &self.shifts {
            out.push(',');
            out.push_str(&b.to_string());
        }
        out.push('\n');
        for (i, a) in self.scales.iter().enumerate() {
            out.push_str(&a.to_string());
            for j in 0..self.shifts.len() {
                out.push(',');
                out.push_str(&self.get(i, j).to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Index over every `(scale, shift)` pair for second differences whose first
/// sample sits at `first_time`.
pub fn scalogram(d2y: &[f64], first_time: f64, scales: &[f64], shifts: &[f64]) -> Result<Scalogram> {
    if scales.is_empty() || shifts.is_empty() {
        return invalid("scalogram grids must be non-empty");
    }
    if let Some(a) = scales.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return invalid(format!("scales must be positive, got {a}"));
    }
    if d2y.len() < 3 {
        return invalid(format!("scalogram needs at least 3 samples, got {}", d2y.len()));
    }
    let ns = shifts.len();
    let mut values = vec![0.0; scales.len() * ns];
    values
        .par_chunks_mut(ns)
        .zip(scales.par_iter())
        .for_each(|(row, &alpha)| {
            for (cell, &beta) in row.iter_mut().zip(shifts) {
                *cell = index_unchecked(d2y, first_time, alpha, beta);
            }
        });

    let (mut imax, mut imin) = (0usize, 0usize);
    for (k, v) in values.iter().enumerate() {
        if *v > values[imax] {
            imax = k;
        }
        if *v < values[imin] {
            imin = k;
        }
    }
    let mut sc = Scalogram {
        scales: scales.to_vec(),
        shifts: shifts.to_vec(),
        values,
        global_max: Extremum {
            alpha: 0.0,
            beta: 0.0,
            value: 0.0,
            kind: ExtremumKind::Max,
            scale_index: 0,
            shift_index: 0,
        },
        global_min: Extremum {
            alpha: 0.0,
            beta: 0.0,
            value: 0.0,
            kind: ExtremumKind::Min,
            scale_index: 0,
            shift_index: 0,
        },
        extrema: Vec::new(),
    };
    sc.global_max = sc.extremum_at(imax / ns, imax % ns, sc.values[imax]);
    sc.global_max.kind = ExtremumKind::Max;
    sc.global_min = sc.extremum_at(imin / ns, imin % ns, sc.values[imin]);
    sc.global_min.kind = ExtremumKind::Min;
    sc.extrema = local_extrema(&sc);
    Ok(sc)
}

fn local_extrema(sc: &Scalogram) -> Vec<Extremum> {
    let floor = EXTREMUM_FLOOR_FRACTION * sc.max_abs();
    let (nr, nc) = (sc.scales.len(), sc.shifts.len());
    let mut out = Vec::new();
    for i in 0..nr {
        for j in 0..nc {
            let v = sc.get(i, j);
            if v.abs() <= floor {
                continue;
            }
            let mut is_max = true;
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= nr as i64 || nj >= nc as i64 {
                        continue;
                    }
                    let w = sc.get(ni as usize, nj as usize);
                    is_max &= v > w;
                    is_min &= v < w;
                }
            }
            if is_max && v > 0.0 {
                out.push(sc.extremum_at(i, j, v));
            } else if is_min && v < 0.0 {
                out.push(sc.extremum_at(i, j, v));
            }
        }
    }
    out.sort_by(|a, b| {
        b.value
            .abs()
            .total_cmp(&a.value.abs())
            .then(a.beta.total_cmp(&b.beta))
            .then(a.alpha.total_cmp(&b.alpha))
    });
    out
}
