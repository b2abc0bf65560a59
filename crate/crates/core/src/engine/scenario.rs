use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::estimate::{estimate, EstimateInputs, ResourceEstimate};
use super::presets::{read_json, CalibrationPreset, PresetStore};
use super::FeatureFlags;
use crate::algorithm::AlgorithmSpec;
use crate::error::{Error, Result};
use crate::hardware::HardwareModel;
use crate::profile::{load_proxy_profile, load_proxy_profile_str, LogicalCircuitProfile};

/// Scenario document as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    pub algorithm: AlgorithmSpec,
    #[serde(default)]
    pub profile: Option<Value>,
    #[serde(default)]
    pub profile_ref: Option<String>,
    #[serde(default)]
    pub df_profile: Option<Value>,
    #[serde(default)]
    pub df_profile_ref: Option<String>,
    #[serde(default)]
    pub flags: FeatureFlags,
    pub hardware_preset: String,
    pub calibration_preset: String,
    #[serde(default)]
    pub overlap_enabled: bool,
    #[serde(default)]
    pub naive_gsc: bool,
}

/// Scenario with every reference loaded.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub name: String,
    pub spec: AlgorithmSpec,
    pub profile: LogicalCircuitProfile,
    pub df_profile: Option<LogicalCircuitProfile>,
    pub flags: FeatureFlags,
    pub hardware: HardwareModel,
    pub calibration: CalibrationPreset,
    pub overlap_enabled: bool,
    pub naive_gsc: bool,
}

fn resolve_profile(
    inline: &Option<Value>,
    reference: &Option<String>,
    store: &PresetStore,
    base_dir: Option<&Path>,
    what: &str,
) -> Result<Option<LogicalCircuitProfile>> {
    match (inline, reference) {
        (Some(_), Some(_)) => Err(Error::Config(format!(
            "give either `{what}` or `{what}_ref`, not both"
        ))),
        (Some(doc), None) => load_proxy_profile(doc)
            .map(Some)
            .map_err(|e| Error::Config(format!("{what}: {e}"))),
        (None, Some(r)) if r.ends_with(".json") => {
            let path = base_dir.map_or_else(|| Path::new(r).to_path_buf(), |d| d.join(r));
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            load_proxy_profile_str(&text)
                .map(Some)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        }
        (None, Some(name)) => store.profile(name).map(Some),
        (None, None) => Ok(None),
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Scenario> {
        read_json(path)
    }

    /// Resolve presets and profile references. File references ending in
    /// `.json` are taken relative to `base_dir`; other references name
    /// profile presets.
    pub fn resolve(
        &self,
        store: &PresetStore,
        base_dir: Option<&Path>,
    ) -> Result<ResolvedScenario> {
        self.algorithm
            .validate()
            .map_err(|e| Error::Config(format!("algorithm: {e}")))?;
        let profile =
            resolve_profile(&self.profile, &self.profile_ref, store, base_dir, "profile")?
                .ok_or_else(|| Error::Config("scenario needs `profile` or `profile_ref`".into()))?;
        let df_profile = resolve_profile(
            &self.df_profile,
            &self.df_profile_ref,
            store,
            base_dir,
            "df_profile",
        )?;
        Ok(ResolvedScenario {
            name: self
                .name
                .clone()
                .unwrap_or_else(|| format!("{}/{}", self.hardware_preset, self.calibration_preset)),
            spec: self.algorithm.clone(),
            profile,
            df_profile,
            flags: self.flags,
            hardware: store.hardware(&self.hardware_preset)?,
            calibration: store.calibration(&self.calibration_preset)?,
            overlap_enabled: self.overlap_enabled,
            naive_gsc: self.naive_gsc,
        })
    }
}

impl ResolvedScenario {
    /// Load and resolve a scenario file, resolving relative references
    /// against the file's directory.
    pub fn from_file(path: &Path, store: &PresetStore) -> Result<Self> {
        Scenario::load(path)?.resolve(store, path.parent())
    }

    pub fn inputs(&self) -> EstimateInputs<'_> {
        self.inputs_with(self.flags, &self.calibration)
    }

    pub fn inputs_with<'a>(
        &'a self,
        flags: FeatureFlags,
        calibration: &'a CalibrationPreset,
    ) -> EstimateInputs<'a> {
        EstimateInputs {
            label: &self.name,
            spec: &self.spec,
            profile: &self.profile,
            df_profile: self.df_profile.as_ref(),
            flags,
            hardware: &self.hardware,
            calibration,
            overlap_enabled: self.overlap_enabled,
            naive_gsc: self.naive_gsc,
        }
    }

    pub fn estimate(&self) -> Result<ResourceEstimate> {
        estimate(&self.inputs())
    }
}
