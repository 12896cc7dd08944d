//! Analysis settings from a flat `key = value` file, overridden by flags.

use std::path::{Path, PathBuf};

use serde::Serialize;
use trendwave_core::decompose::ExtractConfig;
use trendwave_core::fit::RefineOptions;
use trendwave_core::logwave::geometric_scales;

use crate::error::{CliError, CliResult};
use crate::tables::{reference_period, REFERENCE_PERIODS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodSpec {
    pub name: String,
    pub start: u32,
    pub end: u32,
}

impl PeriodSpec {
    /// `start:end` in week numbers, or a reference period name such as `VI`.
    pub fn parse(text: &str) -> Result<PeriodSpec, String> {
        let text = text.trim();
        if let Some((s, e)) = text.split_once(':') {
            let start: u32 = s.trim().parse().map_err(|_| format!("bad period start `{s}`"))?;
            let end: u32 = e.trim().parse().map_err(|_| format!("bad period end `{e}`"))?;
            if start == 0 || start >= end {
                return Err(format!("period `{text}` needs 1 <= start < end"));
            }
            return Ok(PeriodSpec {
                name: format!("{start}-{end}"),
                start,
                end,
            });
        }
        reference_period(text)
            .map(|p| PeriodSpec {
                name: p.name.to_string(),
                start: p.start,
                end: p.end,
            })
            .ok_or_else(|| format!("unknown period `{text}`"))
    }
}

pub fn default_periods() -> Vec<PeriodSpec> {
    REFERENCE_PERIODS
        .iter()
        .map(|p| PeriodSpec {
            name: p.name.to_string(),
            start: p.start,
            end: p.end,
        })
        .collect()
}

/// Every setting optional; layers are merged with [`Overrides::over`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub periods: Option<Vec<PeriodSpec>>,
    pub seed: Option<u64>,
    pub scale_steps: Option<usize>,
    pub min_scale: Option<f64>,
    pub max_scale: Option<f64>,
    pub shift_step: Option<f64>,
    pub max_waves: Option<usize>,
    pub saturation_floor: Option<f64>,
    pub index_floor: Option<f64>,
    pub restarts: Option<usize>,
}

impl Overrides {
    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            input: self.input.or(base.input),
            out: self.out.or(base.out),
            periods: self.periods.or(base.periods),
            seed: self.seed.or(base.seed),
            scale_steps: self.scale_steps.or(base.scale_steps),
            min_scale: self.min_scale.or(base.min_scale),
            max_scale: self.max_scale.or(base.max_scale),
            shift_step: self.shift_step.or(base.shift_step),
            max_waves: self.max_waves.or(base.max_waves),
            saturation_floor: self.saturation_floor.or(base.saturation_floor),
            index_floor: self.index_floor.or(base.index_floor),
            restarts: self.restarts.or(base.restarts),
        }
    }

    pub fn from_file(path: &Path) -> CliResult<Overrides> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Overrides::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> CliResult<Overrides> {
        let mut o = Overrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i as u64 + 1;
            let err = |message: String| CliError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
                v.parse().map_err(|_| format!("bad number `{v}`"))
            }
            let res: Result<(), String> = (|| {
                match key {
                    "input" => o.input = Some(PathBuf::from(value)),
                    "out" => o.out = Some(PathBuf::from(value)),
                    "periods" => {
                        o.periods = Some(
                            value
                                .split(',')
                                .filter(|s| !s.trim().is_empty())
                                .map(PeriodSpec::parse)
                                .collect::<Result<_, _>>()?,
                        )
                    }
                    "seed" => o.seed = Some(num(value)?),
                    "scale_steps" => o.scale_steps = Some(num(value)?),
                    "min_scale" => o.min_scale = Some(num(value)?),
                    "max_scale" => o.max_scale = Some(num(value)?),
                    "shift_step" => o.shift_step = Some(num(value)?),
                    "max_waves" => o.max_waves = Some(num(value)?),
                    "saturation_floor" => o.saturation_floor = Some(num(value)?),
                    "index_floor" => o.index_floor = Some(num(value)?),
                    "restarts" => o.restarts = Some(num(value)?),
                    other => return Err(format!("unknown key `{other}`")),
                }
                Ok(())
            })();
            res.map_err(err)?;
        }
        Ok(o)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub periods: Vec<PeriodSpec>,
    pub seed: u64,
    pub scale_steps: usize,
    pub min_scale: f64,
    /// Largest scale; `None` means a third of each period's length.
    pub max_scale: Option<f64>,
    pub shift_step: f64,
    pub max_waves: usize,
    pub saturation_floor: f64,
    pub index_floor: f64,
    pub restarts: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let e = ExtractConfig::default();
        let r = RefineOptions::default();
        AnalysisConfig {
            input: None,
            out: PathBuf::from("out"),
            periods: default_periods(),
            seed: r.seed,
            scale_steps: e.scale_steps,
            min_scale: e.min_scale,
            max_scale: None,
            shift_step: e.shift_step,
            max_waves: e.max_waves,
            saturation_floor: e.saturation_floor,
            index_floor: e.index_floor,
            restarts: r.restarts,
        }
    }
}

impl AnalysisConfig {
    /// Defaults, then the optional file, then `flags`.
    pub fn resolve(file: Option<&Path>, flags: Overrides) -> CliResult<AnalysisConfig> {
        let from_file = match file {
            Some(p) => Overrides::from_file(p)?,
            None => Overrides::default(),
        };
        let o = flags.over(from_file);
        let d = AnalysisConfig::default();
        let cfg = AnalysisConfig {
            input: o.input.or(d.input),
            out: o.out.unwrap_or(d.out),
            periods: o.periods.unwrap_or(d.periods),
            seed: o.seed.unwrap_or(d.seed),
            scale_steps: o.scale_steps.unwrap_or(d.scale_steps),
            min_scale: o.min_scale.unwrap_or(d.min_scale),
            max_scale: o.max_scale.or(d.max_scale),
            shift_step: o.shift_step.unwrap_or(d.shift_step),
            max_waves: o.max_waves.unwrap_or(d.max_waves),
            saturation_floor: o.saturation_floor.unwrap_or(d.saturation_floor),
            index_floor: o.index_floor.unwrap_or(d.index_floor),
            restarts: o.restarts.unwrap_or(d.restarts),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        let bad = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.scale_steps == 0 {
            return bad("scale_steps must be at least 1");
        }
        if !(self.min_scale > 0.0) || !(self.shift_step > 0.0) {
            return bad("min_scale and shift_step must be positive");
        }
        if let Some(m) = self.max_scale {
            if !(m >= self.min_scale) {
                return bad("max_scale must not be below min_scale");
            }
        }
        if self.max_waves == 0 {
            return bad("max_waves must be at least 1");
        }
        Ok(())
    }

    pub fn extract_config(&self) -> ExtractConfig {
        ExtractConfig {
            scales: self
                .max_scale
                .map(|hi| geometric_scales(self.min_scale, hi, self.scale_steps)),
            scale_steps: self.scale_steps,
            min_scale: self.min_scale,
            shift_step: self.shift_step,
            max_waves: self.max_waves,
            saturation_floor: self.saturation_floor,
            index_floor: self.index_floor,
            ..ExtractConfig::default()
        }
    }

    pub fn refine_options(&self) -> RefineOptions {
        RefineOptions {
            seed: self.seed,
            restarts: self.restarts,
            ..RefineOptions::default()
        }
    }
}
