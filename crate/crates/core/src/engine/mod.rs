//! End-to-end estimation: scenario resolution, the layered pipeline, feature
//! ablation grids and scaling-law fits.

mod ablation;
mod estimate;
mod fit;
mod presets;
mod scenario;
mod sweep;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ablation::{
    ablation_grid, flag_effects, replay_calibration, replay_grid, AblationFixture, AblationRow,
    AblationTable, FlagEffect, QuotedRatio, ReferenceScenario, ReplayShape,
};
pub use estimate::{estimate, EstimateInputs, EstimateProvenance, ResourceEstimate};
pub use fit::{
    fit_exponential, fit_linear, ExtrapolationRow, FitComparison, FitKind, ReferenceFit,
    ReferenceFits, ScalingFit,
};
pub use presets::{CalibrationPreset, MagicStateCycles, PresetStore, ReplayCycles};
pub use scenario::{ResolvedScenario, Scenario};
pub use sweep::{evaluate_all, ExecMode};

/// Stack innovations toggled in ablation studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FeatureFlags {
    pub dfthc: bool,
    pub zx: bool,
    pub a2a: bool,
    pub msc: bool,
}

impl FeatureFlags {
    pub const ALL: FeatureFlags = FeatureFlags {
        dfthc: true,
        zx: true,
        a2a: true,
        msc: true,
    };
    pub const NONE: FeatureFlags = FeatureFlags {
        dfthc: false,
        zx: false,
        a2a: false,
        msc: false,
    };
    pub const NAMES: [&'static str; 4] = ["dfthc", "zx", "a2a", "msc"];

    pub fn bits(&self) -> [bool; 4] {
        [self.dfthc, self.zx, self.a2a, self.msc]
    }

    pub fn from_bits(bits: [bool; 4]) -> Self {
        FeatureFlags {
            dfthc: bits[0],
            zx: bits[1],
            a2a: bits[2],
            msc: bits[3],
        }
    }

    pub fn enabled_count(&self) -> usize {
        self.bits().iter().filter(|b| **b).count()
    }

    /// All sixteen combinations, `0000` first.
    pub fn all_combinations() -> Vec<FeatureFlags> {
        (0..16u8)
            .map(|m| FeatureFlags::from_bits([m & 8 != 0, m & 4 != 0, m & 2 != 0, m & 1 != 0]))
            .collect()
    }

    /// Parse a `dfthc,zx,a2a,msc` bit string such as `1011`.
    pub fn parse_bits(s: &str) -> Option<Self> {
        let b: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<_>>()?;
        (b.len() == 4).then(|| FeatureFlags::from_bits([b[0], b[1], b[2], b[3]]))
    }
}

impl Default for FeatureFlags {
    fn default() -> Self {
        FeatureFlags::ALL
    }
}

impl fmt::Display for FeatureFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_bits_round_trip() {
        let all = FeatureFlags::all_combinations();
        assert_eq!(all.len(), 16);
        for f in &all {
            assert_eq!(FeatureFlags::parse_bits(&f.to_string()), Some(*f));
        }
        assert_eq!(
            FeatureFlags::parse_bits("1011").unwrap(),
            FeatureFlags {
                zx: false,
                ..FeatureFlags::ALL
            }
        );
        assert!(FeatureFlags::parse_bits("10").is_none());
        assert!(FeatureFlags::parse_bits("10x1").is_none());
    }
}
