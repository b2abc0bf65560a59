use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::estimate::{estimate, ResourceEstimate};
use super::presets::{CalibrationPreset, ReplayCycles};
use super::scenario::ResolvedScenario;
use super::sweep::{map_cells, ExecMode};
use super::FeatureFlags;
use crate::error::{Error, Result};
use crate::math::SECONDS_PER_DAY;

fn flags_from_bits<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<FeatureFlags, D::Error> {
    let s = String::deserialize(d)?;
    FeatureFlags::parse_bits(&s)
        .ok_or_else(|| serde::de::Error::custom(format!("bad flag string `{s}`")))
}

fn flags_to_bits<S: Serializer>(f: &FeatureFlags, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

/// One published ablation outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceScenario {
    pub id: String,
    /// `dfthc,zx,a2a,msc` as a bit string.
    #[serde(deserialize_with = "flags_from_bits", serialize_with = "flags_to_bits")]
    pub flags: FeatureFlags,
    pub runtime_days: f64,
    pub qubits_millions: f64,
    /// Runtime as printed, when it was not given in days.
    #[serde(default)]
    pub quoted: Option<String>,
}

/// Relative sizes of the four cycle components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplayShape {
    pub t_measurement: f64,
    pub distillation: f64,
    pub graph_prep: f64,
    pub combined: f64,
}

impl ReplayShape {
    /// Split `total` into integer components in these proportions; the
    /// combined component absorbs the rounding remainder.
    pub fn split(&self, total: u64) -> Result<ReplayCycles> {
        let parts = [
            self.t_measurement,
            self.distillation,
            self.graph_prep,
            self.combined,
        ];
        if parts.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(Error::invalid(
                "replay shape components must be non-negative",
            ));
        }
        let sum: f64 = parts.iter().sum();
        if sum <= 0.0 {
            return Err(Error::invalid("replay shape is empty"));
        }
        let share = |p: f64| ((total as f64) * p / sum).floor() as u64;
        let (a, b, c) = (share(parts[0]), share(parts[1]), share(parts[2]));
        let used = a + b + c;
        Ok(ReplayCycles {
            t_measurement: a,
            distillation: b,
            graph_prep: c,
            combined: total.saturating_sub(used),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotedRatio {
    pub from: String,
    pub to: String,
    pub quoted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AblationFixture {
    pub scenarios: Vec<ReferenceScenario>,
    pub pre_zx_shape: ReplayShape,
    pub post_zx_shape: ReplayShape,
    #[serde(default)]
    pub quoted_ratios: Vec<QuotedRatio>,
    /// Flag combinations that were run but never published.
    #[serde(default)]
    pub unpublished: Vec<String>,
}

impl AblationFixture {
    pub fn get(&self, id: &str) -> Option<&ReferenceScenario> {
        self.scenarios.iter().find(|s| s.id == id)
    }

    pub fn by_flags(&self, flags: FeatureFlags) -> Option<&ReferenceScenario> {
        self.scenarios.iter().find(|s| s.flags == flags)
    }
}

/// Calibration whose cycle components replay a published runtime exactly.
///
/// The total is `days * 86400 / (scc_time * layout multiplier)`, split in
/// the proportions of the small-instance column matching the `zx` flag.
pub fn replay_calibration(
    base: &CalibrationPreset,
    reference: &ReferenceScenario,
    fixture: &AblationFixture,
    scc_time: f64,
    layout_multiplier: f64,
) -> Result<CalibrationPreset> {
    if !(scc_time > 0.0 && layout_multiplier > 0.0) {
        return Err(Error::invalid(
            "replay needs a positive cycle time and multiplier",
        ));
    }
    let total = (reference.runtime_days * SECONDS_PER_DAY / (scc_time * layout_multiplier)).round();
    if !(total >= 1.0 && total < u64::MAX as f64) {
        return Err(Error::invalid(format!(
            "{}: runtime does not map to a cycle count",
            reference.id
        )));
    }
    let shape = if reference.flags.zx {
        fixture.post_zx_shape
    } else {
        fixture.pre_zx_shape
    };
    let mut out = base.clone();
    out.name = format!("{}/replay-{}", base.name, reference.id);
    out.replay_cycles = Some(shape.split(total as u64)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub id: String,
    pub estimate: ResourceEstimate,
    #[serde(default)]
    pub reference: Option<ReferenceScenario>,
}

/// Change in runtime from enabling exactly one flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagEffect {
    pub flag: String,
    pub from: String,
    pub to: String,
    pub from_days: f64,
    pub to_days: f64,
    /// `from_days / to_days`; above 1 means enabling the flag helped.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationTable {
    pub rows: Vec<AblationRow>,
    pub effects: Vec<FlagEffect>,
}

impl AblationTable {
    pub fn row(&self, id: &str) -> Option<&AblationRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn ratio(&self, from: &str, to: &str) -> Option<f64> {
        Some(self.row(from)?.estimate.runtime_days / self.row(to)?.estimate.runtime_days)
    }

    /// Single-flag enablings that made the runtime longer.
    pub fn monotonicity_violations(&self) -> Vec<&FlagEffect> {
        self.effects
            .iter()
            .filter(|e| e.to_days > e.from_days * (1.0 + 1e-12))
            .collect()
    }
}

fn compare_rows(a: &AblationRow, b: &AblationRow) -> Ordering {
    b.estimate
        .runtime_days
        .total_cmp(&a.estimate.runtime_days)
        .then(
            a.estimate
                .flags
                .enabled_count()
                .cmp(&b.estimate.flags.enabled_count()),
        )
        .then(
            a.estimate
                .flags
                .to_string()
                .cmp(&b.estimate.flags.to_string()),
        )
}

pub fn flag_effects(rows: &[AblationRow]) -> Vec<FlagEffect> {
    let mut out = Vec::new();
    for from in rows {
        for to in rows {
            let (fb, tb) = (from.estimate.flags.bits(), to.estimate.flags.bits());
            let diff: Vec<usize> = (0..4).filter(|&i| fb[i] != tb[i]).collect();
            if let [i] = diff[..] {
                if !fb[i] && tb[i] {
                    out.push(FlagEffect {
                        flag: FeatureFlags::NAMES[i].to_string(),
                        from: from.id.clone(),
                        to: to.id.clone(),
                        from_days: from.estimate.runtime_days,
                        to_days: to.estimate.runtime_days,
                        ratio: from.estimate.runtime_days / to.estimate.runtime_days,
                    });
                }
            }
        }
    }
    out
}

fn assemble(mut rows: Vec<AblationRow>) -> AblationTable {
    rows.sort_by(compare_rows);
    let effects = flag_effects(&rows);
    AblationTable { rows, effects }
}

/// Evaluate one scenario under several flag sets with a shared calibration.
/// Rows take the id of a matching reference scenario when one is given.
pub fn ablation_grid(
    scenario: &ResolvedScenario,
    flag_sets: &[FeatureFlags],
    references: Option<&AblationFixture>,
    mode: ExecMode,
) -> Result<AblationTable> {
    let results = map_cells(flag_sets, mode, |flags| {
        estimate(&scenario.inputs_with(*flags, &scenario.calibration))
    });
    let rows = flag_sets
        .iter()
        .zip(results)
        .map(|(flags, est)| {
            let reference = references.and_then(|f| f.by_flags(*flags)).cloned();
            Ok(AblationRow {
                id: reference
                    .as_ref()
                    .map_or_else(|| format!("F{flags}"), |r| r.id.clone()),
                estimate: est?,
                reference,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(rows))
}

/// Replay every published scenario through its own calibration.
pub fn replay_grid(
    scenario: &ResolvedScenario,
    fixture: &AblationFixture,
    mode: ExecMode,
) -> Result<AblationTable> {
    let hw = &scenario.hardware;
    let calibrations = fixture
        .scenarios
        .iter()
        .map(|r| {
            let multiplier = if r.flags.a2a {
                1.0
            } else {
                hw.layout_config.two_row_multiplier
            };
            replay_calibration(&scenario.calibration, r, fixture, hw.scc_time, multiplier)
        })
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(&ReferenceScenario, &CalibrationPreset)> =
        fixture.scenarios.iter().zip(&calibrations).collect();
    let results = map_cells(&cells, mode, |(r, c)| {
        estimate(&scenario.inputs_with(r.flags, c))
    });
    let rows = cells
        .iter()
        .zip(results)
        .map(|((r, _), est)| {
            Ok(AblationRow {
                id: r.id.clone(),
                estimate: est?,
                reference: Some((*r).clone()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(rows))
}
