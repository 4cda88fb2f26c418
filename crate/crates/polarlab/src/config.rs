//! Experiment configuration (TOML).
//!
//! ```toml
//! kind = "decode"          # polarize | construct | decode | compound | mac_rates
//!                          # | regions | qpolar | shaping
//! channel = "bsc.json"     # relative to the config file
//! n = [2, 4, 8]            # one block length or a list
//! k = 2
//! trials = 0               # 0 = exact enumeration; > 0 = Monte Carlo (DMC only)
//! seed = 7
//! ```
//!
//! Fields a kind does not use are rejected, so a typo never passes silently.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Polarize,
    Construct,
    Decode,
    Compound,
    MacRates,
    Regions,
    Qpolar,
    Shaping,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Polarize => "polarize",
            Kind::Construct => "construct",
            Kind::Decode => "decode",
            Kind::Compound => "compound",
            Kind::MacRates => "mac_rates",
            Kind::Regions => "regions",
            Kind::Qpolar => "qpolar",
            Kind::Shaping => "shaping",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// MAC region under product inputs (`cq_mac` channel).
    Mac,
    /// Han-Kobayashi region (`cq_mac` channel with `dims`).
    Hk,
    /// Superposition-and-binning region (`broadcast` channel).
    Mgp,
    /// Grid scan of the input law maximizing `I(X;B)` or `I(X1 X2;B)`.
    Capacity,
}

/// One value or a list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// Auxiliary law of the broadcast region: `P(V=1)`, `P(V2=1|V=v)`,
/// `P(V1=1|V=v,V2=v2)` and the encoder `x = phi[v][v1][v2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxConfig {
    pub p_v: f64,
    pub p_v2: [f64; 2],
    pub p_v1: [[f64; 2]; 2],
    pub phi: [[[usize; 2]; 2]; 2],
    #[serde(default)]
    pub common: bool,
}

/// Split-message inputs: four auxiliary laws (V1, V3 for sender 1; V2, V4
/// for sender 2) and the encoders `x1[v1][v3]`, `x2[v2][v4]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HkConfig {
    pub aux: [Vec<f64>; 4],
    pub x1: Vec<Vec<usize>>,
    pub x2: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channels: Option<Vec<PathBuf>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<OneOrMany<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<OneOrMany<f64>>,
    /// Used when no threshold is given: `threshold = 2^(-N^beta)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub trials: u64,
    /// Stem of the output files; defaults to the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_bytes: Option<u64>,
    /// Compound: doublings per alignment stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<OneOrMany<usize>>,
    /// Compound: also compute the exact chained success per member.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decode: Option<bool>,
    /// MAC rates: decoding paths as literals such as "0110".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionKind>,
    /// MAC region: per-sender input laws (uniform if absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<AuxConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hk: Option<HkConfig>,
    /// Capacity scan: grid denominator (default 64).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Shaping: `P(X = 1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Qpolar: degrading channel applied to make the weaker member.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrading: Option<PathBuf>,
}

fn is_zero(x: &u64) -> bool {
    *x == 0
}

pub const DEFAULT_GRID: usize = 64;

fn config_err(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            LabError::Config(m) => LabError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Canonical TOML echo of the effective configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn stem(&self) -> &str {
        self.output.as_deref().unwrap_or(self.kind.name())
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.n.as_ref().map(|n| n.to_vec()).unwrap_or_default()
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.threshold
            .as_ref()
            .map(|t| t.to_vec())
            .unwrap_or_default()
    }

    /// The single block length of kinds that take one.
    pub fn single_length(&self) -> Result<usize> {
        match self.lengths().as_slice() {
            [n] => Ok(*n),
            _ => Err(config_err(format!(
                "{} takes exactly one `n`",
                self.kind.name()
            ))),
        }
    }

    /// The threshold for block length `len`: explicit, else `2^(-len^beta)`.
    pub fn threshold_for(&self, len: usize) -> Result<f64> {
        match (self.thresholds().as_slice(), self.beta) {
            ([t], _) => Ok(*t),
            ([], Some(b)) => Ok(polarlab_core::polar::beta_threshold(len, b)),
            ([], None) => Ok(polarlab_core::polar::DEFAULT_THRESHOLD),
            _ => Err(config_err(format!(
                "{} takes one threshold",
                self.kind.name()
            ))),
        }
    }

    pub fn channel_path(&self) -> Result<&Path> {
        self.channel
            .as_deref()
            .ok_or_else(|| config_err(format!("{} needs `channel`", self.kind.name())))
    }

    /// Required fields present, unused fields absent, block lengths powers of two.
    pub fn validate(&self) -> Result<()> {
        let name = self.kind.name();
        let mut allowed: Vec<&str> = vec!["output", "budget_bytes"];
        let need_n;
        match self.kind {
            Kind::Polarize => {
                allowed.extend(["channel", "n"]);
                need_n = true;
            }
            Kind::Construct => {
                allowed.extend(["channel", "n", "k"]);
                need_n = true;
                self.require(self.k.is_some(), "k")?;
            }
            Kind::Decode => {
                allowed.extend(["channel", "n", "k", "trials", "seed"]);
                need_n = true;
                self.require(self.k.is_some(), "k")?;
            }
            Kind::Compound => {
                allowed.extend(["channels", "n", "threshold", "beta", "levels", "decode"]);
                need_n = true;
                let members = self.channels.as_ref().map_or(0, |c| c.len());
                if members < 2 {
                    return Err(config_err("compound needs at least two `channels`"));
                }
            }
            Kind::MacRates => {
                allowed.extend(["channel", "n", "paths"]);
                need_n = true;
            }
            Kind::Regions => {
                allowed.extend(["channel", "region"]);
                need_n = false;
                match self.region {
                    None => return Err(config_err("regions needs `region`")),
                    Some(RegionKind::Mac) => allowed.push("inputs"),
                    Some(RegionKind::Hk) => {
                        allowed.push("hk");
                        self.require(self.hk.is_some(), "hk")?;
                    }
                    Some(RegionKind::Mgp) => {
                        allowed.push("aux");
                        self.require(self.aux.is_some(), "aux")?;
                    }
                    Some(RegionKind::Capacity) => allowed.push("grid"),
                }
            }
            Kind::Qpolar => {
                allowed.extend(["channel", "n", "threshold", "beta", "degrading"]);
                need_n = true;
            }
            Kind::Shaping => {
                allowed.extend(["channel", "n", "threshold", "beta", "q"]);
                need_n = true;
                self.require(self.q.is_some(), "q")?;
            }
        }
        if !matches!(self.kind, Kind::Compound) {
            self.require(self.channel.is_some(), "channel")?;
        }
        for (field, present) in self.present_fields() {
            if present && !allowed.contains(&field) {
                return Err(config_err(format!("`{field}` is not used by {name}")));
            }
        }
        if need_n {
            let ns = self.lengths();
            if ns.is_empty() {
                return Err(config_err(format!("{name} needs `n`")));
            }
            if let Some(&bad) = ns.iter().find(|n| !n.is_power_of_two()) {
                return Err(config_err(format!("n = {bad} is not a power of two")));
            }
            if let Some(k) = self.k {
                if let Some(&n) = ns.iter().find(|&&n| k > n) {
                    return Err(config_err(format!("k = {k} exceeds n = {n}")));
                }
            }
        }
        if let Some(&t) = self.thresholds().iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(config_err(format!("threshold {t} outside [0, 1]")));
        }
        if self.grid == Some(0) {
            return Err(config_err("grid must be positive"));
        }
        Ok(())
    }

    fn require(&self, ok: bool, field: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(config_err(format!("{} needs `{field}`", self.kind.name())))
        }
    }

    fn present_fields(&self) -> [(&'static str, bool); 19] {
        [
            ("channel", self.channel.is_some()),
            ("channels", self.channels.is_some()),
            ("n", self.n.is_some()),
            ("k", self.k.is_some()),
            ("threshold", self.threshold.is_some()),
            ("beta", self.beta.is_some()),
            ("seed", self.seed != 0),
            ("trials", self.trials != 0),
            ("output", self.output.is_some()),
            ("budget_bytes", self.budget_bytes.is_some()),
            ("levels", self.levels.is_some()),
            ("decode", self.decode.is_some()),
            ("paths", self.paths.is_some()),
            ("region", self.region.is_some()),
            ("inputs", self.inputs.is_some()),
            ("aux", self.aux.is_some()),
            ("hk", self.hk.is_some()),
            ("grid", self.grid.is_some()),
            ("q", self.q.is_some()),
        ]
    }
}
