use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cloner::MAX_CLONE_QUBITS;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::recognizer::RecognitionMode;
use crate::state::{PureState, STRUCTURAL_TOL};

/// Which feedback loop a scenario runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Teleport,
    Clone,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scenario::Teleport => "teleport",
            Scenario::Clone => "clone",
        })
    }
}

/// JSON shape for complex numbers: {"re": .., "im": ..}.
pub(crate) mod complex_repr {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Rectangular {
        re: f64,
        #[serde(default)]
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Rectangular { re: v.re, im: v.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let r = Rectangular::deserialize(d)?;
        Ok(Complex64::new(r.re, r.im))
    }
}

/// A normalized single-qubit amplitude pair, as it appears in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudePair {
    #[serde(with = "complex_repr")]
    pub alpha: Complex64,
    #[serde(with = "complex_repr")]
    pub beta: Complex64,
}

impl AmplitudePair {
    pub fn to_state(self) -> Result<PureState> {
        PureState::single_qubit(self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelConfig {
    pub delay: u64,
    pub drop_probability: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            delay: 0,
            drop_probability: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClonerConfig {
    /// Copies routed to the recognizer.
    pub n: usize,
    /// Copies routed to the actuator.
    pub m: usize,
}

impl ClonerConfig {
    pub fn total_copies(&self) -> usize {
        self.n + self.m + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecognizerConfig {
    /// State-distance threshold gating the actuator.
    pub d0: f64,
    #[serde(default)]
    pub mode: RecognitionMode,
    /// Optional per-copy description bases (N entries of two amplitude
    /// pairs each). Defaults to the computational basis for every copy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<Vec<AmplitudePair>>>,
}

/// Full description of one feedback-loop run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopConfig {
    pub scenario: Scenario,
    #[serde(with = "complex_repr")]
    pub initial_alpha: Complex64,
    #[serde(with = "complex_repr")]
    pub initial_beta: Complex64,
    pub target: AmplitudePair,
    pub cycles: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cloner: Option<ClonerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recognizer: Option<RecognizerConfig>,
}

impl LoopConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: LoopConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn initial_state(&self) -> Result<PureState> {
        PureState::single_qubit(self.initial_alpha, self.initial_beta)
    }

    pub fn target_state(&self) -> Result<PureState> {
        self.target.to_state()
    }

    /// Seed used by the run; 0 when unset.
    pub fn resolved_seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn channel_or_default(&self) -> ChannelConfig {
        self.channel.unwrap_or_default()
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.initial_alpha.norm_sqr() + self.initial_beta.norm_sqr();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidConfig(format!(
                "initial amplitudes are not normalized: |alpha|^2 + |beta|^2 = {norm}"
            )));
        }
        let target_norm = self.target.alpha.norm_sqr() + self.target.beta.norm_sqr();
        if (target_norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidConfig(format!(
                "target amplitudes are not normalized: |alpha|^2 + |beta|^2 = {target_norm}"
            )));
        }
        if self.cycles == 0 {
            return Err(Error::InvalidConfig("cycles must be at least 1".into()));
        }
        self.noise.validate()?;
        if let Some(channel) = &self.channel {
            if !(0.0..1.0).contains(&channel.drop_probability) {
                return Err(Error::InvalidConfig(format!(
                    "drop probability {} outside [0, 1)",
                    channel.drop_probability
                )));
            }
        }
        match self.scenario {
            Scenario::Teleport => {
                if self.cloner.is_some() || self.recognizer.is_some() {
                    return Err(Error::InvalidConfig(
                        "teleport scenario takes no cloner or recognizer section".into(),
                    ));
                }
            }
            Scenario::Clone => {
                let cloner = self.cloner.ok_or_else(|| {
                    Error::InvalidConfig("clone scenario requires a cloner section".into())
                })?;
                if cloner.n < 1 || cloner.m < 1 {
                    return Err(Error::InvalidConfig(format!(
                        "cloner needs n >= 1 and m >= 1, got n = {}, m = {}",
                        cloner.n, cloner.m
                    )));
                }
                if cloner.total_copies() > MAX_CLONE_QUBITS {
                    return Err(Error::InvalidConfig(format!(
                        "n + m + 1 = {} exceeds the {MAX_CLONE_QUBITS}-qubit cloner cap",
                        cloner.total_copies()
                    )));
                }
                let recognizer = self.recognizer.as_ref().ok_or_else(|| {
                    Error::InvalidConfig("clone scenario requires a recognizer section".into())
                })?;
                if recognizer.d0 <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "state-distance threshold d0 = {} must be positive",
                        recognizer.d0
                    )));
                }
                if let Some(bases) = &recognizer.bases {
                    if bases.len() != cloner.n {
                        return Err(Error::InvalidConfig(format!(
                            "{} per-copy bases for n = {} recognizer copies",
                            bases.len(),
                            cloner.n
                        )));
                    }
                    for basis in bases {
                        if basis.len() != 2 {
                            return Err(Error::InvalidConfig(
                                "each per-copy basis needs exactly 2 single-qubit vectors".into(),
                            ));
                        }
                    }
                }
                if self.channel.is_some() {
                    return Err(Error::InvalidConfig(
                        "clone scenario takes no channel section".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}
