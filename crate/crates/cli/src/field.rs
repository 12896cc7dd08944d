//! Sampled soliton fields for the `soliton` subcommand.

use serde::Serialize;
use trendwave_core::soliton::{kdv_residual, n_soliton_p, phase_shift, Grid2D, SolitonSpec};

use crate::error::CliResult;
use crate::svg::{self, Curve};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairShift {
    pub i: usize,
    pub j: usize,
    pub phase_shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolitonField {
    pub schema: u32,
    pub kappas: Vec<f64>,
    pub c1: f64,
    pub x: Axis,
    pub t: Axis,
    /// Sup-norm of the KdV residual over interior grid points, when the grid
    /// is large enough to evaluate it.
    pub residual: Option<f64>,
    pub phase_shifts: Vec<PairShift>,
    /// One row per time step.
    pub values: Vec<Vec<f64>>,
}

pub fn sample(
    kappas: Vec<f64>,
    c1: f64,
    x: (f64, f64, f64),
    t: (f64, f64, f64),
) -> CliResult<SolitonField> {
    let spec = SolitonSpec::new(kappas.clone(), c1)?;
    let grid = Grid2D::spanning(x.0, x.1, x.2, t.0, t.1, t.2)?;
    let field = if kappas.len() == 1 {
        grid.map_fn(|x, t| trendwave_core::soliton::single_soliton(&spec, x, t).unwrap_or(f64::NAN))
    } else {
        n_soliton_p(&spec, &grid)
    };
    let mut phase_shifts = Vec::new();
    for i in 0..kappas.len() {
        for j in i + 1..kappas.len() {
            phase_shifts.push(PairShift {
                i: i + 1,
                j: j + 1,
                phase_shift: phase_shift(kappas[i], kappas[j])?,
            });
        }
    }
    Ok(SolitonField {
        schema: 1,
        kappas,
        c1,
        x: Axis {
            min: field.x0,
            max: field.x(field.nx - 1),
            step: field.hx,
            count: field.nx,
        },
        t: Axis {
            min: field.t0,
            max: field.t(field.nt - 1),
            step: field.ht,
            count: field.nt,
        },
        residual: kdv_residual(&field, c1).ok(),
        phase_shifts,
        values: (0..field.nt).map(|j| field.row(j).to_vec()).collect(),
    })
}

const SLICE_COLORS: [&str; 5] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"];

/// Up to five evenly spaced time slices.
pub fn slices_svg(field: &SolitonField) -> String {
    let nt = field.values.len();
    let picks: Vec<usize> = if nt <= SLICE_COLORS.len() {
        (0..nt).collect()
    } else {
        (0..SLICE_COLORS.len())
            .map(|k| k * (nt - 1) / (SLICE_COLORS.len() - 1))
            .collect()
    };
    let labels: Vec<String> = picks
        .iter()
        .map(|&j| format!("t = {:.3}", field.t.min + j as f64 * field.t.step))
        .collect();
    let curves: Vec<Curve> = picks
        .iter()
        .zip(&labels)
        .zip(SLICE_COLORS)
        .map(|((&j, label), color)| Curve {
            label,
            color,
            points: field.values[j]
                .iter()
                .enumerate()
                .map(|(i, v)| (field.x.min + i as f64 * field.x.step, *v))
                .collect(),
        })
        .collect();
    svg::line_chart("Soliton field P(x, t)", &curves, &[])
}
