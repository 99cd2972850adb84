//! Flat `key=value` experiment configuration: one pair per line, `#`
//! comments, comma-separated lists. No structured-format dependency, and the
//! parse/emit round trip is bit-exact.

use std::collections::BTreeMap;
use std::path::Path;

use pcm_core::edges::{DilationSpec, EdgeDetector};
use pcm_core::error::{Error, Result};
use pcm_core::proxops::CgSettings;
use pcm_core::solvers::SolverConfig;

use crate::signals::Signal;

/// Reconstruction/denoising model selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    PcmTvTfv,
    PcmTv,
    SsTv,
    L1,
    Tikhonov,
    TvDenoise,
    TfvDenoise,
    TvTfvDenoise,
}

impl Model {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "pcm_tv_tfv" => Model::PcmTvTfv,
            "pcm_tv" => Model::PcmTv,
            "ss_tv" => Model::SsTv,
            "l1" => Model::L1,
            "tikhonov" => Model::Tikhonov,
            "tv_denoise" => Model::TvDenoise,
            "tfv_denoise" => Model::TfvDenoise,
            "tvtfv_denoise" => Model::TvTfvDenoise,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown model {other:?}"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::PcmTvTfv => "pcm_tv_tfv",
            Model::PcmTv => "pcm_tv",
            Model::SsTv => "ss_tv",
            Model::L1 => "l1",
            Model::Tikhonov => "tikhonov",
            Model::TvDenoise => "tv_denoise",
            Model::TfvDenoise => "tfv_denoise",
            Model::TvTfvDenoise => "tvtfv_denoise",
        }
    }

    /// Denoising models take a noisy image; the rest take Fourier data.
    pub fn is_denoise(&self) -> bool {
        matches!(
            self,
            Model::TvDenoise | Model::TfvDenoise | Model::TvTfvDenoise
        )
    }
}

/// Where measurement data comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataMode {
    /// Project the truth onto the basis, then measure through the operator
    /// (bias-free).
    Span,
    /// Evaluate the signal's continuous Fourier transform (bias present).
    Continuous,
}

/// Whether the CSV wall-time column carries real measurements or zeros
/// (byte-reproducible output).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimingMode {
    Real,
    Zero,
}

/// One experiment: a signal, a measurement setup, a model, and solver
/// parameters.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub signal: Signal,
    pub model: Model,
    /// Samples per axis (total samples are `m²` in 2D).
    pub m: usize,
    /// Basis dimension per axis.
    pub n: usize,
    /// Grid nodes per axis (a power of two ≥ `n`).
    pub resolution: usize,
    pub theta: f64,
    pub sigma: f64,
    pub seeds: Vec<u64>,
    pub data: DataMode,
    pub timing: TimingMode,
    /// Regularization weight of the one-stage baselines.
    pub lambda: f64,
    /// How `Γ` is chosen (resolved to a mask by the runner).
    pub gamma_mode: GammaMode,
    pub solver: SolverConfig,
}

/// `Γ` policy named in configs; `Full`/`Empty` become fixed masks once the
/// grid is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMode {
    Adaptive,
    Full,
    Empty,
}

impl ExperimentConfig {
    /// Parse the `key=value` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "config line {} is not key=value: {raw:?}",
                    lineno + 1
                ))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Self::from_map(&map)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |key: &str| -> Option<&str> { map.get(key).map(String::as_str) };
        let require = |key: &str| -> Result<&str> {
            get(key).ok_or_else(|| Error::InvalidArgument(format!("missing config key {key:?}")))
        };
        let parse_f64 = |key: &str, raw: &str| -> Result<f64> {
            raw.parse()
                .map_err(|e| Error::InvalidArgument(format!("bad {key}={raw:?}: {e}")))
        };
        let parse_usize = |key: &str, raw: &str| -> Result<usize> {
            raw.parse()
                .map_err(|e| Error::InvalidArgument(format!("bad {key}={raw:?}: {e}")))
        };

        let signal = Signal::parse(require("signal")?, get("file"))?;
        let model = Model::parse(require("model")?)?;
        let m = match get("m") {
            Some(raw) => parse_usize("m", raw)?,
            None if model.is_denoise() => 2,
            None => return Err(Error::InvalidArgument("missing config key \"m\"".into())),
        };
        let n = match get("n") {
            Some(raw) => parse_usize("n", raw)?,
            None if model.is_denoise() => 2,
            None => return Err(Error::InvalidArgument("missing config key \"n\"".into())),
        };
        let resolution = parse_usize("resolution", require("resolution")?)?;
        let theta = match get("theta") {
            Some(raw) => parse_f64("theta", raw)?,
            None => 0.0,
        };
        let sigma = match get("sigma") {
            Some(raw) => parse_f64("sigma", raw)?,
            None => 0.0,
        };
        let seeds: Vec<u64> = require("seeds")?
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad seed {s:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        let data = match get("data").unwrap_or("continuous") {
            "span" => DataMode::Span,
            "continuous" => DataMode::Continuous,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "data must be span or continuous, got {other:?}"
                )))
            }
        };
        let timing = match get("timing").unwrap_or("real") {
            "real" => TimingMode::Real,
            "zero" => TimingMode::Zero,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "timing must be real or zero, got {other:?}"
                )))
            }
        };
        let lambda = match get("lambda") {
            Some(raw) => parse_f64("lambda", raw)?,
            None => 0.0,
        };

        let mut solver = SolverConfig::default();
        if let Some(raw) = get("mu_t") {
            solver.mu_t = parse_f64("mu_t", raw)?;
        }
        if let Some(raw) = get("mu_f") {
            solver.mu_f = parse_f64("mu_f", raw)?;
        }
        if let Some(raw) = get("lambda_t") {
            solver.lambda_t = Some(parse_f64("lambda_t", raw)?);
        }
        if let Some(raw) = get("lambda_f") {
            solver.lambda_f = Some(parse_f64("lambda_f", raw)?);
        }
        if let Some(raw) = get("gamma1") {
            solver.gamma1 = parse_f64("gamma1", raw)?;
        }
        if let Some(raw) = get("gamma2") {
            solver.gamma2 = parse_f64("gamma2", raw)?;
        }
        if let Some(raw) = get("alpha") {
            solver.alpha = parse_f64("alpha", raw)?;
        }
        if let Some(raw) = get("max_iters") {
            solver.max_iters = parse_usize("max_iters", raw)?;
        }
        if let Some(raw) = get("stop_tol") {
            solver.stop_tol = parse_f64("stop_tol", raw)?;
        }
        if let Some(raw) = get("dilation_radius") {
            solver.dilation = DilationSpec::new(parse_usize("dilation_radius", raw)?)?;
        }
        if let Some(raw) = get("history_window") {
            solver.history_window = parse_usize("history_window", raw)?;
        }
        if let Some(raw) = get("confidence") {
            solver.confidence = Some(parse_f64("confidence", raw)?);
        }
        if let Some(raw) = get("warm_iters") {
            solver.warm_iters = parse_usize("warm_iters", raw)?;
        }
        if let Some(raw) = get("warm_tv_weight") {
            solver.warm_tv_weight = Some(parse_f64("warm_tv_weight", raw)?);
        }
        if let Some(raw) = get("edge_detector") {
            solver.edge_detector = match raw {
                "sobel" => EdgeDetector::Sobel,
                "prewitt" => EdgeDetector::Prewitt,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "edge_detector must be sobel or prewitt, got {other:?}"
                    )))
                }
            };
        }
        if let Some(raw) = get("edge_threshold") {
            solver.edge_threshold = parse_f64("edge_threshold", raw)?;
        }
        let gamma_mode = match get("gamma").unwrap_or("adaptive") {
            "adaptive" => GammaMode::Adaptive,
            "full" => GammaMode::Full,
            "empty" => GammaMode::Empty,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "gamma must be adaptive, full, or empty, got {other:?}"
                )))
            }
        };
        let mut cg = CgSettings::default();
        cg.max_iters = 500;
        if let Some(raw) = get("cg_tol") {
            cg.rel_tol = parse_f64("cg_tol", raw)?;
        }
        if let Some(raw) = get("cg_max_iters") {
            cg.max_iters = parse_usize("cg_max_iters", raw)?;
        }
        solver.cg = cg;

        let config = Self {
            signal,
            model,
            m,
            n,
            resolution,
            theta,
            sigma,
            seeds,
            data,
            timing,
            lambda,
            gamma_mode,
            solver,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidArgument("seeds must be nonempty".to_string()));
        }
        if !self.resolution.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "resolution must be a power of two, got {}",
                self.resolution
            )));
        }
        if !self.model.is_denoise() {
            if !self.n.is_power_of_two() {
                return Err(Error::InvalidArgument(format!(
                    "basis dimension must be a power of two, got {}",
                    self.n
                )));
            }
            if self.resolution < self.n {
                return Err(Error::InvalidArgument(format!(
                    "resolution {} is below the basis dimension {}",
                    self.resolution, self.n
                )));
            }
            if self.m < 2 || self.m % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "sample count must be even and ≥ 2, got {}",
                    self.m
                )));
            }
            if self.data == DataMode::Continuous && !self.signal.has_analytic_fourier() {
                return Err(Error::InvalidArgument(format!(
                    "signal {:?} has no continuous transform; use data=span",
                    self.signal
                )));
            }
        }
        if self.sigma < 0.0 || self.theta < 0.0 {
            return Err(Error::InvalidArgument(
                "sigma and theta must be nonnegative".to_string(),
            ));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidArgument(
                "lambda must be nonnegative".to_string(),
            ));
        }
        self.solver.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_reconstruction_config() {
        let text = "\
# comment
signal = pwconst1d
model = pcm_tv
m = 128
n = 32
resolution = 256
theta = 0.25
sigma = 0
seeds = 1,2,3
data = span
";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.model, Model::PcmTv);
        assert_eq!(c.m, 128);
        assert_eq!(c.seeds, vec![1, 2, 3]);
        assert_eq!(c.data, DataMode::Span);
    }

    #[test]
    fn rejects_bad_keys_and_values() {
        assert!(ExperimentConfig::parse("signal=pwconst1d\n").is_err());
        let bad_res = "signal=pwconst1d\nmodel=pcm_tv\nm=8\nn=4\nresolution=100\nseeds=1\n";
        assert!(ExperimentConfig::parse(bad_res).is_err());
        let odd_m = "signal=pwconst1d\nmodel=pcm_tv\nm=7\nn=4\nresolution=128\nseeds=1\n";
        assert!(ExperimentConfig::parse(odd_m).is_err());
        let no_seeds = "signal=pwconst1d\nmodel=pcm_tv\nm=8\nn=4\nresolution=128\nseeds=\n";
        assert!(ExperimentConfig::parse(no_seeds).is_err());
    }

    #[test]
    fn denoise_configs_do_not_need_measurements() {
        let text = "signal=phantom2d\nmodel=tvtfv_denoise\nresolution=64\nsigma=0.1\nseeds=1\nmu_t=0.1\nmu_f=0.01\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert!(c.model.is_denoise());
    }
}
