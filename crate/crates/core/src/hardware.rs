//! Physical layer: surface-code qubit counting, logical layout penalty and
//! the modular trapped-ion ELU model with photonic entanglement.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::error::{Error, Result};
use crate::gsc::CompiledLayout;
use crate::profile::LogicalCircuitProfile;
use crate::qec::{platform_code, CodeParameters, FactorySpec, Platform};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntanglementParameters {
    pub p_bell: f64,
    pub p_down: f64,
    pub p_excite: f64,
    pub p_decay_s: f64,
    pub p_click: f64,
    /// Excitation attempts per second.
    pub attempt_rate: f64,
}

impl Default for EntanglementParameters {
    fn default() -> Self {
        EntanglementParameters {
            p_bell: 0.5,
            p_down: 0.99,
            p_excite: 0.97,
            p_decay_s: 0.95,
            p_click: 0.023,
            attempt_rate: 833e3,
        }
    }
}

impl EntanglementParameters {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_bell", self.p_bell),
            ("p_down", self.p_down),
            ("p_excite", self.p_excite),
            ("p_decay_s", self.p_decay_s),
            ("p_click", self.p_click),
        ] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::invalid(format!(
                    "{name} = {p} is not a probability in (0, 1]"
                )));
            }
        }
        if !(self.attempt_rate > 0.0 && self.attempt_rate.is_finite()) {
            return Err(Error::invalid("attempt_rate must be positive"));
        }
        Ok(())
    }
}

/// Heralded two-photon entanglement success probability per attempt.
pub fn entanglement_success_probability(e: &EntanglementParameters) -> f64 {
    let single = e.p_down * e.p_excite * e.p_decay_s * e.p_click;
    e.p_bell * single * single
}

/// Smallest number of communication ions whose attempts within one cycle
/// yield more than `refined_pairs_per_scc * raw_per_refined` raw Bell pairs
/// with probability at least `confidence`.
pub fn comm_ions_required(
    p: f64,
    attempt_rate: f64,
    scc_time: f64,
    refined_pairs_per_scc: u64,
    raw_per_refined: f64,
    confidence: f64,
) -> Result<u64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!(
            "success probability {p} outside (0, 1]"
        )));
    }
    if !(attempt_rate > 0.0 && scc_time > 0.0) {
        return Err(Error::invalid(
            "attempt rate and cycle time must be positive",
        ));
    }
    if !(raw_per_refined >= 1.0 && raw_per_refined.is_finite()) {
        return Err(Error::invalid("raw_per_refined must be at least 1"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::invalid("confidence must lie in (0, 1)"));
    }
    let demand = (refined_pairs_per_scc as f64 * raw_per_refined).ceil();
    if demand == 0.0 {
        return Ok(0);
    }
    let attempts = (attempt_rate * scc_time).floor() as u64;
    if attempts == 0 {
        return Err(Error::Infeasible(format!(
            "no entanglement attempt fits in a {scc_time:e} s cycle"
        )));
    }
    let meets = |n: u64| -> Result<bool> {
        let trials = n
            .checked_mul(attempts)
            .ok_or(Error::Overflow("entanglement attempts"))?;
        let dist = Binomial::new(p, trials).map_err(|e| Error::invalid(e.to_string()))?;
        Ok(dist.sf(demand as u64) >= confidence)
    };
    let bound = (10.0 * demand / (p * attempts as f64)).ceil().max(1.0);
    if bound >= u64::MAX as f64 / attempts as f64 {
        return Err(Error::Overflow("communication ion bound"));
    }
    let bound = bound as u64;
    if !meets(bound)? {
        return Err(Error::Infeasible(format!(
            "{bound} communication ions do not reach confidence {confidence}"
        )));
    }
    let (mut lo, mut hi) = (0u64, bound);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EluSpec {
    pub communication_ions: u64,
    pub computational_ions: u64,
    pub memory_ions: u64,
    pub total_ions: u64,
}

pub const DEFAULT_MAX_IONS_PER_ELU: u64 = 1200;

impl EluSpec {
    pub fn new(communication: u64, computational: u64, memory: u64, max_ions: u64) -> Result<Self> {
        let total = communication + computational + memory;
        if total > max_ions {
            return Err(Error::Infeasible(format!(
                "ELU needs {total} ions ({communication} communication, {computational} computational, {memory} memory), above the limit of {max_ions}"
            )));
        }
        Ok(EluSpec {
            communication_ions: communication,
            computational_ions: computational,
            memory_ions: memory,
            total_ions: total,
        })
    }
}

/// Ions hosting one distance-`d` rotated patch with its measure qubits.
pub fn computational_ions(d: u32) -> u64 {
    let side = 2 * d as u64 - 1;
    side * side
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutKind {
    TwoRowBus,
    EffectiveAllToAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detail {
    Basic,
    DetailedElu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LayoutConfig {
    pub two_row_multiplier: f64,
    /// Distinct interaction pairs routable without penalty per block of
    /// `qubits_per_pair_block` algorithmic qubits.
    pub pairs_per_block: u64,
    pub qubits_per_pair_block: u64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            two_row_multiplier: 1.4,
            pairs_per_block: 150,
            qubits_per_pair_block: 994,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutPenalty {
    pub multiplier: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

pub fn layout_penalty(
    kind: LayoutKind,
    profile: &LogicalCircuitProfile,
    cfg: &LayoutConfig,
) -> Result<LayoutPenalty> {
    if !(cfg.two_row_multiplier >= 1.0 && cfg.two_row_multiplier.is_finite()) {
        return Err(Error::invalid("two-row multiplier must be at least 1"));
    }
    if cfg.qubits_per_pair_block == 0 || cfg.pairs_per_block == 0 {
        return Err(Error::invalid("pair budget parameters must be positive"));
    }
    match kind {
        LayoutKind::TwoRowBus => Ok(LayoutPenalty {
            multiplier: cfg.two_row_multiplier,
            warning: None,
        }),
        LayoutKind::EffectiveAllToAll => {
            let blocks = profile
                .algorithm_logical_qubits
                .div_ceil(cfg.qubits_per_pair_block)
                .max(1);
            let budget = cfg.pairs_per_block * blocks;
            if profile.distinct_pair_count <= budget {
                return Ok(LayoutPenalty {
                    multiplier: 1.0,
                    warning: None,
                });
            }
            let ratio = profile.distinct_pair_count as f64 / budget as f64;
            Ok(LayoutPenalty {
                multiplier: ratio.min(cfg.two_row_multiplier),
                warning: Some(format!(
                    "{} distinct pairs exceed the all-to-all budget of {budget}",
                    profile.distinct_pair_count
                )),
            })
        }
    }
}

/// `data_elus * k d^2 + factory_elus * qubits_per_factory`, with `k = 2` by default.
pub fn physical_qubits_basic(
    layout: &CompiledLayout,
    d: u32,
    fac: &FactorySpec,
    qubits_per_d2: u64,
) -> Result<u64> {
    let d = d as u128;
    let total = layout.data_elus as u128 * qubits_per_d2 as u128 * d * d
        + layout.factory_elus as u128 * fac.physical_qubits_per_factory as u128;
    u64::try_from(total).map_err(|_| Error::Overflow("basic qubit count"))
}

pub fn physical_qubits_detailed(layout: &CompiledLayout, elu: &EluSpec) -> Result<u64> {
    (layout.data_elus as u128 + layout.factory_elus as u128)
        .checked_mul(elu.total_ions as u128)
        .and_then(|v| u64::try_from(v).ok())
        .ok_or(Error::Overflow("detailed qubit count"))
}

/// Where a preset value came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    #[serde(default)]
    pub paper_value: Option<serde_json::Value>,
    pub reconstructed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// ELU sizing inputs for the detailed ion-trap model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EluConfig {
    pub memory_ions: u64,
    pub refined_pairs_per_scc: u64,
    pub raw_per_refined: f64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    #[serde(default = "default_max_ions")]
    pub max_ions_per_elu: u64,
    /// Fixed ion split that bypasses the sizing model.
    #[serde(default)]
    pub fixed: Option<[u64; 3]>,
}

fn default_confidence() -> f64 {
    0.99
}
fn default_max_ions() -> u64 {
    DEFAULT_MAX_IONS_PER_ELU
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareModel {
    pub name: String,
    pub platform: Platform,
    /// Surface-code cycle time in seconds.
    pub scc_time: f64,
    #[serde(default = "default_layout")]
    pub layout: LayoutKind,
    #[serde(default = "default_detail")]
    pub detail: Detail,
    /// Replaces the platform's default error model.
    #[serde(default)]
    pub code: Option<CodeParameters>,
    #[serde(default)]
    pub entanglement: Option<EntanglementParameters>,
    #[serde(default)]
    pub elu: Option<EluConfig>,
    #[serde(default = "default_qubits_per_d2")]
    pub qubits_per_logical_d2: u64,
    #[serde(default)]
    pub layout_config: LayoutConfig,
    #[serde(default)]
    pub provenance: BTreeMap<String, Provenance>,
}

fn default_layout() -> LayoutKind {
    LayoutKind::EffectiveAllToAll
}
fn default_detail() -> Detail {
    Detail::Basic
}
fn default_qubits_per_d2() -> u64 {
    2
}

impl HardwareModel {
    pub fn code_parameters(&self) -> CodeParameters {
        self.code.unwrap_or_else(|| platform_code(self.platform))
    }

    pub fn validate(&self) -> Result<()> {
        self.code_parameters().validate()?;
        if !(self.scc_time > 0.0 && self.scc_time.is_finite()) {
            return Err(Error::invalid(format!(
                "{}: scc_time must be positive",
                self.name
            )));
        }
        if self.qubits_per_logical_d2 == 0 {
            return Err(Error::invalid(format!(
                "{}: qubits_per_logical_d2 must be positive",
                self.name
            )));
        }
        if let Some(e) = &self.entanglement {
            e.validate()?;
        }
        if self.detail == Detail::DetailedElu {
            if self.platform != Platform::IonTrap {
                return Err(Error::invalid(format!(
                    "{}: the detailed ELU model applies to ion traps only",
                    self.name
                )));
            }
            let elu = self.elu.as_ref().ok_or_else(|| {
                Error::invalid(format!(
                    "{}: detailed model needs an `elu` section",
                    self.name
                ))
            })?;
            if elu.fixed.is_none() && self.entanglement.is_none() {
                return Err(Error::invalid(format!(
                    "{}: ELU sizing needs entanglement parameters",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// ELU composition at distance `d`, or `None` for the basic model.
    pub fn elu_spec(&self, d: u32) -> Result<Option<EluSpec>> {
        if self.detail != Detail::DetailedElu {
            return Ok(None);
        }
        let cfg = self
            .elu
            .as_ref()
            .ok_or_else(|| Error::invalid("missing ELU configuration"))?;
        if let Some([comm, comp, mem]) = cfg.fixed {
            return EluSpec::new(comm, comp, mem, cfg.max_ions_per_elu).map(Some);
        }
        let ent = self
            .entanglement
            .as_ref()
            .ok_or_else(|| Error::invalid("missing entanglement parameters"))?;
        let comm = comm_ions_required(
            entanglement_success_probability(ent),
            ent.attempt_rate,
            self.scc_time,
            cfg.refined_pairs_per_scc,
            cfg.raw_per_refined,
            cfg.confidence,
        )?;
        EluSpec::new(
            comm,
            computational_ions(d),
            cfg.memory_ions,
            cfg.max_ions_per_elu,
        )
        .map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qec::FactoryKind;

    #[test]
    fn entanglement_probability_values() {
        let e = EntanglementParameters::default();
        let p = entanglement_success_probability(&e);
        assert!((p / 2.18e-4 - 1.0).abs() < 0.015, "{p}");
        let fast = EntanglementParameters { p_click: 0.1, ..e };
        assert!((entanglement_success_probability(&fast) / 4.16e-3 - 1.0).abs() < 0.005);
        let ideal = EntanglementParameters {
            p_down: 1.0,
            p_excite: 1.0,
            p_decay_s: 1.0,
            p_click: 1.0,
            ..e
        };
        assert_eq!(entanglement_success_probability(&ideal), 0.5);
    }

    #[test]
    fn communication_ions_for_headline_elu() {
        let fast = EntanglementParameters {
            p_click: 0.1,
            ..Default::default()
        };
        let p = entanglement_success_probability(&fast);
        assert_eq!(
            comm_ions_required(p, 833e3, 1e-4, 29, 4.0, 0.99).unwrap(),
            416
        );
        assert_eq!(comm_ions_required(p, 833e3, 1e-4, 0, 4.0, 0.99).unwrap(), 0);
        let half = comm_ions_required(p / 2.0, 833e3, 1e-4, 29, 4.0, 0.99).unwrap();
        assert!(half >= 416);
        assert!(comm_ions_required(p, 1.0, 1e-4, 29, 4.0, 0.99).is_err());
    }

    #[test]
    fn elu_totals() {
        let elu = EluSpec::new(416, computational_ions(13), 145, 1200).unwrap();
        assert_eq!(elu.computational_ions, 625);
        assert_eq!(elu.total_ions, 1186);
        assert_eq!(computational_ions(15), 841);
        assert!(EluSpec::new(600, 625, 145, 1200).is_err());
    }

    fn layout(data: u64, factories: u64) -> CompiledLayout {
        CompiledLayout {
            compiled_logical_qubits: data,
            data_elus: data,
            factory_elus: factories,
            expansion_ratio: 1.0,
        }
    }

    fn cultivation() -> FactorySpec {
        FactorySpec {
            kind: FactoryKind::Cultivation,
            physical_qubits_per_factory: 9200,
            cycles_per_magic_state: 13,
            output_error: 4e-12,
            parallel_attempts: 20,
            warning: None,
        }
    }

    #[test]
    fn basic_counting() {
        assert_eq!(
            physical_qubits_basic(&layout(4232, 38), 13, &cultivation(), 2).unwrap(),
            1_780_016
        );
        assert_eq!(
            physical_qubits_basic(&layout(10, 0), 3, &cultivation(), 2).unwrap(),
            180
        );
        let d = physical_qubits_basic(&layout(10, 0), 6, &cultivation(), 2).unwrap();
        assert_eq!(d, 4 * 180);
    }

    #[test]
    fn detailed_counting() {
        let elu = EluSpec::new(416, 625, 145, 1200).unwrap();
        assert_eq!(
            physical_qubits_detailed(&layout(4232, 38), &elu).unwrap(),
            5_064_220
        );
        assert_eq!(physical_qubits_detailed(&layout(1, 0), &elu).unwrap(), 1186);
        let big = EluSpec::new(473, 841, 167, 1500).unwrap();
        assert_eq!(
            physical_qubits_detailed(&layout(7817, 12), &big).unwrap(),
            11_594_749
        );
    }

    fn profile(q: u64, pairs: u64) -> LogicalCircuitProfile {
        LogicalCircuitProfile {
            label: "p".into(),
            algorithm_logical_qubits: q,
            t_per_block_encoding: 1,
            block_encodings: Some(1),
            two_qubit_per_block: pairs,
            remote_cnot_per_block: 0,
            distinct_pair_count: pairs,
            rotation_count_per_block: 0,
            defaulted: vec![],
        }
    }

    #[test]
    fn layout_penalties() {
        let cfg = LayoutConfig::default();
        let a2a = layout_penalty(LayoutKind::EffectiveAllToAll, &profile(994, 150), &cfg).unwrap();
        assert_eq!(a2a.multiplier, 1.0);
        assert!(a2a.warning.is_none());
        assert_eq!(
            layout_penalty(LayoutKind::TwoRowBus, &profile(994, 150), &cfg)
                .unwrap()
                .multiplier,
            1.4
        );
        let over = layout_penalty(LayoutKind::EffectiveAllToAll, &profile(994, 180), &cfg).unwrap();
        assert!(over.multiplier > 1.0 && over.warning.is_some());
        let wide =
            layout_penalty(LayoutKind::EffectiveAllToAll, &profile(1872, 300), &cfg).unwrap();
        assert_eq!(wide.multiplier, 1.0);
    }
}
