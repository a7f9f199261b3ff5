use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::eigen::{DEFAULT_SEED, DEFAULT_TOL};
use crate::transfer::GammaChoice;

use super::{CliError, Flags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    GapScan,
    Teleport,
    Transfer,
    Share,
    Validate,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::GapScan => "gap-scan",
            CommandName::Teleport => "teleport",
            CommandName::Transfer => "transfer",
            CommandName::Share => "share",
            CommandName::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Effective,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Sender coupling: a number or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSetting {
    Auto,
    Value(f64),
}

impl GammaSetting {
    pub fn parse(text: &str) -> Result<Self, String> {
        if text.eq_ignore_ascii_case("auto") {
            return Ok(GammaSetting::Auto);
        }
        text.parse::<f64>()
            .map(GammaSetting::Value)
            .map_err(|_| format!("gamma must be a number or \"auto\", got {text:?}"))
    }

    pub fn choice(self) -> GammaChoice {
        match self {
            GammaSetting::Auto => GammaChoice::Auto,
            GammaSetting::Value(v) => GammaChoice::Value(v),
        }
    }
}

impl Serialize for GammaSetting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GammaSetting::Auto => s.serialize_str("auto"),
            GammaSetting::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for GammaSetting {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(GammaSetting::Value(v)),
            Raw::Text(t) => GammaSetting::parse(&t).map_err(serde::de::Error::custom),
        }
    }
}

/// Contents of a `--config` file. Every field is optional; flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub command: Option<CommandName>,
    pub length: Option<usize>,
    pub l_min: Option<usize>,
    pub l_max: Option<usize>,
    pub l_step: Option<usize>,
    pub j: Option<f64>,
    pub jp: Option<Vec<f64>>,
    pub gamma: Option<GammaSetting>,
    pub temp_min: Option<f64>,
    pub temp_max: Option<f64>,
    pub temp_points: Option<usize>,
    pub temp_scale: Option<Spacing>,
    pub t_max: Option<f64>,
    pub t_points: Option<usize>,
    pub mode: Option<Mode>,
    pub alpha: Option<f64>,
    pub tol: Option<f64>,
    pub krylov_tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct TemperatureGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: Spacing,
}

impl TemperatureGrid {
    pub fn values(&self) -> Vec<f64> {
        grid(self.min, self.max, self.points, self.scale)
    }
}

/// Fully resolved run configuration, echoed into every sidecar.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    pub command: CommandName,
    pub lengths: Vec<usize>,
    pub j: f64,
    pub jp: Vec<f64>,
    pub gamma: GammaSetting,
    pub temperature: TemperatureGrid,
    pub t_max: Option<f64>,
    pub t_points: usize,
    pub mode: Mode,
    pub alpha: Option<f64>,
    pub tol: f64,
    pub krylov_tol: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let command = flags
            .command
            .or(file.command)
            .ok_or_else(|| CliError::Usage("no command given on the command line or in the config".into()))?;

        let single = flags.length.or(file.length);
        let range = (
            flags.l_min.or(file.l_min),
            flags.l_max.or(file.l_max),
            flags.l_step.or(file.l_step).unwrap_or(2),
        );
        let lengths = match (single, range) {
            (Some(l), (None, None, _)) => vec![l],
            (None, (Some(lo), Some(hi), step)) => {
                if step == 0 {
                    return Err(CliError::Usage("--l-step must be positive".into()));
                }
                (lo..=hi).step_by(step).collect()
            }
            (None, (None, None, _)) if command == CommandName::Validate => Vec::new(),
            (None, (None, None, _)) => vec![12],
            (Some(_), _) => return Err(CliError::Usage("give either --length or an L-range, not both".into())),
            (None, _) => return Err(CliError::Usage("an L-range needs both --l-min and --l-max".into())),
        };

        let single_temperature = matches!(command, CommandName::Share)
            || (command == CommandName::Transfer && flags.mode.or(file.mode) == Some(Mode::Full));
        let default_min = if single_temperature { 0.0 } else { 1e-4 };
        let temp_min = flags.temp_min.or(file.temp_min).unwrap_or(default_min);
        let temperature = TemperatureGrid {
            min: temp_min,
            max: flags.temp_max.or(file.temp_max).unwrap_or(if single_temperature { temp_min } else { 1e-1 }),
            points: flags.temp_points.or(file.temp_points).unwrap_or(if single_temperature { 1 } else { 50 }),
            scale: flags.temp_scale.or(file.temp_scale).unwrap_or(Spacing::Log),
        };

        let stem = command.as_str();
        let default_format = if command == CommandName::Share { Format::Json } else { Format::Csv };
        let format = flags.format.or(file.format).unwrap_or(default_format);
        let default_out = match (command, format) {
            (CommandName::Share, _) | (_, Format::Json) => format!("{stem}.json"),
            _ => format!("{stem}.csv"),
        };
        let cfg = RunConfig {
            command,
            lengths,
            j: flags.j.or(file.j).unwrap_or(1.0),
            jp: flags.jp.clone().or(file.jp).unwrap_or_else(|| vec![0.2]),
            gamma: match &flags.gamma {
                Some(text) => GammaSetting::parse(text).map_err(CliError::Usage)?,
                None => file.gamma.unwrap_or(GammaSetting::Auto),
            },
            temperature,
            t_max: flags.t_max.or(file.t_max),
            t_points: flags.t_points.or(file.t_points).unwrap_or(2000),
            mode: flags.mode.or(file.mode).unwrap_or(Mode::Effective),
            alpha: flags.alpha.or(file.alpha),
            tol: flags.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            krylov_tol: flags.krylov_tol.or(file.krylov_tol).unwrap_or(1e-10),
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: flags.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(default_out)),
            format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.command == CommandName::Validate {
            return Ok(());
        }
        if self.lengths.is_empty() {
            return usage("the L-range is empty".into());
        }
        if let Some(l) = self.lengths.iter().find(|&&l| l < 4 || l % 2 != 0) {
            return usage(format!("chain lengths must be even and >= 4, got {l}"));
        }
        if !(self.j > 0.0 && self.j.is_finite()) {
            return usage(format!("J must be positive, got {}", self.j));
        }
        if self.jp.is_empty() {
            return usage("the Jp list is empty".into());
        }
        if let Some(v) = self.jp.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return usage(format!("Jp values must be positive, got {v}"));
        }
        if let GammaSetting::Value(g) = self.gamma {
            if !(g >= 0.0 && g.is_finite()) {
                return usage(format!("gamma must be >= 0, got {g}"));
            }
        }
        let t = &self.temperature;
        if t.points == 0 {
            return usage("the temperature grid is empty".into());
        }
        if !(t.min >= 0.0 && t.max >= t.min && t.max.is_finite()) {
            return usage(format!("temperature range [{}, {}] is invalid", t.min, t.max));
        }
        if t.scale == Spacing::Log && t.points > 1 && t.min <= 0.0 {
            return usage("log-spaced temperatures need --temp-min > 0".into());
        }
        if let Some(tm) = self.t_max {
            if !(tm > 0.0 && tm.is_finite()) {
                return usage(format!("--t-max must be positive, got {tm}"));
            }
        }
        if self.t_points == 0 {
            return usage("the time grid is empty".into());
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return usage(format!("--alpha must lie in (0, 1), got {a}"));
            }
        }
        for (name, v) in [("--tol", self.tol), ("--krylov-tol", self.krylov_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return usage(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    /// The one chain length of single-spec commands.
    pub fn single_length(&self) -> Result<usize, CliError> {
        match self.lengths.as_slice() {
            [l] => Ok(*l),
            _ => Err(CliError::Usage(format!("{} takes a single chain length", self.command.as_str()))),
        }
    }

    pub fn single_jp(&self) -> Result<f64, CliError> {
        match self.jp.as_slice() {
            [v] => Ok(*v),
            _ => Err(CliError::Usage(format!("{} takes a single Jp value", self.command.as_str()))),
        }
    }

    pub fn single_temperature(&self) -> Result<f64, CliError> {
        match self.temperature.values().as_slice() {
            [t] => Ok(*t),
            _ => Err(CliError::Usage(format!("{} takes a single temperature (--temp-min)", self.command.as_str()))),
        }
    }

    /// Path of the JSON sidecar written next to a CSV output.
    pub fn sidecar_path(&self) -> PathBuf {
        self.out.with_extension("json")
    }
}

/// `points` values from `min` to `max` inclusive.
pub fn grid(min: f64, max: f64, points: usize, scale: Spacing) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|k| {
            let x = k as f64 / last;
            match (k, scale) {
                (0, _) => min,
                (k, _) if k == points - 1 => max,
                (_, Spacing::Lin) => min + (max - min) * x,
                (_, Spacing::Log) => (min.ln() + (max.ln() - min.ln()) * x).exp(),
            }
        })
        .collect()
}
