use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gsc::{CycleAllocation, CycleModel, ExpansionRatio, GscHyperparameters};
use crate::hardware::{HardwareModel, Provenance};
use crate::profile::{load_proxy_profile_str, LogicalCircuitProfile};
use crate::qec::{FactoryConfig, FactoryKind, DEFAULT_FAILURE_BUDGET};
use crate::transform::ReductionFactors;

/// Effective cycles charged per magic state, per factory kind. A preset
/// fitted for one kind only leaves the other unset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagicStateCycles {
    #[serde(default)]
    pub cultivation: Option<f64>,
    #[serde(default)]
    pub distillation: Option<f64>,
}

impl MagicStateCycles {
    pub fn get(&self, kind: FactoryKind) -> Option<f64> {
        match kind {
            FactoryKind::Cultivation => self.cultivation,
            FactoryKind::Distillation => self.distillation,
        }
    }
}

/// Measured cycle components that replace the scalar cycle model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplayCycles {
    pub t_measurement: u64,
    pub distillation: u64,
    pub graph_prep: u64,
    pub combined: u64,
}

impl ReplayCycles {
    pub fn allocation(&self) -> Result<CycleAllocation> {
        CycleAllocation::from_components(
            self.t_measurement,
            self.distillation,
            self.graph_prep,
            self.combined,
        )
    }
}

/// Compiler- and factory-level parameters fitted to one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationPreset {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub expansion_ratio: Option<ExpansionRatio>,
    #[serde(default)]
    pub gsc: GscHyperparameters,
    pub cycles_per_t_meas: f64,
    pub prep_cycles_per_compiled_qubit: f64,
    pub combined_fraction: f64,
    pub cycles_per_magic_state: MagicStateCycles,
    /// Factories running in parallel, each occupying one ELU.
    pub factory_elus: u64,
    #[serde(default)]
    pub reduction: ReductionFactors,
    #[serde(default = "default_budget")]
    pub failure_budget: f64,
    #[serde(default)]
    pub code_distance: Option<u32>,
    #[serde(default)]
    pub factory_config: FactoryConfig,
    #[serde(default = "default_naive_penalty")]
    pub naive_gsc_penalty: f64,
    #[serde(default)]
    pub replay_cycles: Option<ReplayCycles>,
    #[serde(default)]
    pub provenance: BTreeMap<String, Provenance>,
}

fn default_budget() -> f64 {
    DEFAULT_FAILURE_BUDGET
}
fn default_naive_penalty() -> f64 {
    25.0
}

impl CalibrationPreset {
    pub fn cycle_model(&self, kind: FactoryKind) -> Result<CycleModel> {
        let cpm = self.cycles_per_magic_state.get(kind).ok_or_else(|| {
            Error::Config(format!(
                "calibration `{}` has no {kind} cycles per magic state",
                self.name
            ))
        })?;
        Ok(CycleModel {
            cycles_per_t_meas: self.cycles_per_t_meas,
            cycles_per_magic_state: cpm,
            factory_count: self.factory_elus,
            prep_cycles_per_compiled_qubit: self.prep_cycles_per_compiled_qubit,
            combined_fraction: self.combined_fraction,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let mut any = false;
        for kind in [FactoryKind::Cultivation, FactoryKind::Distillation] {
            if let Ok(m) = self.cycle_model(kind) {
                m.validate()?;
                any = true;
            }
        }
        if !any {
            return Err(Error::invalid(format!(
                "{}: no cycles per magic state given",
                self.name
            )));
        }
        self.reduction.validate()?;
        self.gsc.validate()?;
        if let Some(r) = self.expansion_ratio {
            r.validate()?;
        }
        if !(self.failure_budget > 0.0 && self.failure_budget < 1.0) {
            return Err(Error::invalid(format!(
                "{}: failure budget must lie in (0, 1)",
                self.name
            )));
        }
        if let Some(d) = self.code_distance {
            if d < 3 || d % 2 == 0 {
                return Err(Error::invalid(format!(
                    "{}: code distance {d} must be odd and at least 3",
                    self.name
                )));
            }
        }
        if !(self.naive_gsc_penalty >= 1.0) {
            return Err(Error::invalid(format!(
                "{}: naive_gsc_penalty must be at least 1",
                self.name
            )));
        }
        Ok(())
    }
}

macro_rules! builtin {
    ($kind:literal, $name:literal) => {
        (
            $name,
            include_str!(concat!(
                "../../fixtures/presets/",
                $kind,
                "/",
                $name,
                ".json"
            )),
        )
    };
}

const HARDWARE: &[(&str, &str)] = &[
    builtin!("hardware", "ion_trap_basic"),
    builtin!("hardware", "ion_trap_detailed"),
    builtin!("hardware", "ion_trap_detailed_large"),
    builtin!("hardware", "ion_trap_optimistic"),
    builtin!("hardware", "neutral_atom_conventional"),
    builtin!("hardware", "neutral_atom_erasure"),
];

const CALIBRATION: &[(&str, &str)] = &[
    builtin!("calibration", "paper-small-pre-zx"),
    builtin!("calibration", "paper-small-post-zx"),
    builtin!("calibration", "paper-56o"),
    builtin!("calibration", "paper-56o-na"),
    builtin!("calibration", "paper-100o"),
    builtin!("calibration", "paper-100o-na"),
    builtin!("calibration", "paper-150o"),
    builtin!("calibration", "paper-150o-na"),
];

const PROFILES: &[(&str, &str)] = &[
    builtin!("profiles", "small-block"),
    builtin!("profiles", "xviii-56o"),
    builtin!("profiles", "xviii-56o-df"),
    builtin!("profiles", "xviii-100o"),
    builtin!("profiles", "xviii-150o"),
];

/// Named presets, looked up in an optional directory first and then among
/// the built-in set. The directory mirrors the built-in layout:
/// `hardware/<name>.json`, `calibration/<name>.json`, `profiles/<name>.json`.
#[derive(Debug, Clone, Default)]
pub struct PresetStore {
    dir: Option<PathBuf>,
}

impl PresetStore {
    pub fn builtin() -> Self {
        PresetStore { dir: None }
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        PresetStore {
            dir: Some(dir.into()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn text(&self, kind: &str, name: &str, builtins: &[(&str, &str)]) -> Result<String> {
        if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
            return Err(Error::Config(format!(
                "invalid {kind} preset name `{name}`"
            )));
        }
        if let Some(dir) = &self.dir {
            let path = dir.join(kind).join(format!("{name}.json"));
            if path.is_file() {
                return std::fs::read_to_string(&path).map_err(|e| Error::io(path, e));
            }
        }
        builtins
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| Error::Config(format!("unknown {kind} preset `{name}`")))
    }

    fn load<T: DeserializeOwned>(
        &self,
        kind: &str,
        name: &str,
        builtins: &[(&str, &str)],
    ) -> Result<T> {
        let text = self.text(kind, name, builtins)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{kind} preset `{name}`: {e}")))
    }

    pub fn hardware(&self, name: &str) -> Result<HardwareModel> {
        let hw: HardwareModel = self.load("hardware", name, HARDWARE)?;
        hw.validate()
            .map_err(|e| Error::Config(format!("hardware preset `{name}`: {e}")))?;
        Ok(hw)
    }

    pub fn calibration(&self, name: &str) -> Result<CalibrationPreset> {
        let c: CalibrationPreset = self.load("calibration", name, CALIBRATION)?;
        c.validate()
            .map_err(|e| Error::Config(format!("calibration preset `{name}`: {e}")))?;
        Ok(c)
    }

    pub fn profile(&self, name: &str) -> Result<LogicalCircuitProfile> {
        let text = self.text("profiles", name, PROFILES)?;
        load_proxy_profile_str(&text).map_err(|e| Error::Config(format!("profile `{name}`: {e}")))
    }

    pub fn names(kind: &str) -> Vec<&'static str> {
        let set = match kind {
            "hardware" => HARDWARE,
            "calibration" => CALIBRATION,
            "profiles" => PROFILES,
            _ => &[],
        };
        set.iter().map(|(n, _)| *n).collect()
    }
}

/// Read and parse a JSON document, treating every failure as a
/// configuration error.
pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_loads() {
        let store = PresetStore::builtin();
        for name in PresetStore::names("hardware") {
            store.hardware(name).unwrap();
        }
        for name in PresetStore::names("calibration") {
            store.calibration(name).unwrap();
        }
        for name in PresetStore::names("profiles") {
            store.profile(name).unwrap();
        }
    }

    #[test]
    fn unknown_and_malformed_names_are_config_errors() {
        let store = PresetStore::builtin();
        assert!(store.hardware("nope").unwrap_err().is_config());
        assert!(store.calibration("../x").unwrap_err().is_config());
    }

    #[test]
    fn directory_overrides_builtin() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path().join("profiles")).unwrap();
        std::fs::write(
            dir.path().join("profiles/xviii-56o.json"),
            r#"{"label": "override", "qubits": 10, "t_total": 5}"#,
        )
        .unwrap();
        let store = PresetStore::with_dir(dir.path());
        assert_eq!(store.profile("xviii-56o").unwrap().label, "override");
        assert_eq!(
            store
                .profile("xviii-150o")
                .unwrap()
                .algorithm_logical_qubits,
            2954
        );
    }
}
