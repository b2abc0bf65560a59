use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::presets::CalibrationPreset;
use super::FeatureFlags;
use crate::algorithm::{total_t, AlgorithmSpec};
use crate::error::{Error, Layer, Result};
use crate::gsc::{allocate_cycles, compile_expansion, CompiledLayout, CycleAllocation};
use crate::hardware::{
    layout_penalty, physical_qubits_basic, physical_qubits_detailed, EluSpec, HardwareModel,
    LayoutKind, Provenance,
};
use crate::math::SECONDS_PER_DAY;
use crate::profile::LogicalCircuitProfile;
use crate::qec::{factory, min_distance, FactoryKind, FactorySpec};
use crate::transform::apply_reduction;

/// Everything one pipeline evaluation needs.
#[derive(Debug, Clone, Copy)]
pub struct EstimateInputs<'a> {
    pub label: &'a str,
    pub spec: &'a AlgorithmSpec,
    /// Profile of the double-factorized tensor-hypercontraction block encoding.
    pub profile: &'a LogicalCircuitProfile,
    /// Profile of the plain double-factorized block encoding, used when the
    /// `dfthc` flag is off.
    pub df_profile: Option<&'a LogicalCircuitProfile>,
    pub flags: FeatureFlags,
    pub hardware: &'a HardwareModel,
    pub calibration: &'a CalibrationPreset,
    pub overlap_enabled: bool,
    pub naive_gsc: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateProvenance {
    pub hardware_preset: String,
    pub calibration_preset: String,
    pub profile: String,
    pub t_total: u128,
    pub factory_kind: FactoryKind,
    pub cycles_per_magic_state: Option<f64>,
    pub layout: LayoutKind,
    pub layout_multiplier: f64,
    pub scc_time: f64,
    pub overlap_gamma: Option<f64>,
    pub naive_gsc_penalty: Option<f64>,
    /// Distances visited by the self-consistent solve, last one kept.
    pub distance_trace: Vec<u32>,
    pub distance_source: String,
    pub hardware: BTreeMap<String, Provenance>,
    pub calibration: BTreeMap<String, Provenance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub scenario: String,
    pub runtime_seconds: f64,
    pub runtime_days: f64,
    pub physical_qubits_basic: u64,
    pub physical_qubits_detailed: Option<u64>,
    pub code_distance: u32,
    pub cycles: CycleAllocation,
    pub flags: FeatureFlags,
    pub layout: CompiledLayout,
    pub factory: FactorySpec,
    pub elu: Option<EluSpec>,
    pub warnings: Vec<String>,
    pub provenance: EstimateProvenance,
}

const MAX_DISTANCE_ROUNDS: usize = 64;

fn cycles_at(
    inputs: &EstimateInputs<'_>,
    t: u128,
    layout: &CompiledLayout,
    kind: FactoryKind,
    d: u32,
) -> Result<CycleAllocation> {
    match &inputs.calibration.replay_cycles {
        Some(replay) => replay.allocation(),
        None => allocate_cycles(t, layout, d, &inputs.calibration.cycle_model(kind)?),
    }
}

/// Run the layered pipeline: profile variant, reduction, T count, compiled
/// layout, self-consistent code distance, factory, layout penalty, qubit
/// counts and runtime.
pub fn estimate(inputs: &EstimateInputs<'_>) -> Result<ResourceEstimate> {
    let calib = inputs.calibration;
    let hw = inputs.hardware;
    let flags = inputs.flags;
    let mut warnings = Vec::new();

    let base = if flags.dfthc {
        inputs.profile
    } else {
        inputs.df_profile.ok_or_else(|| {
            Error::Config(format!(
                "scenario `{}` disables dfthc but provides no df profile",
                inputs.label
            ))
        })?
    };
    base.validate().map_err(|e| e.in_layer(Layer::Profile))?;
    for key in &base.defaulted {
        warnings.push(format!("profile `{}`: `{key}` defaulted to 0", base.label));
    }

    let profile = if flags.zx {
        apply_reduction(base, &calib.reduction).map_err(|e| e.in_layer(Layer::Transform))?
    } else {
        base.clone()
    };

    inputs
        .spec
        .validate()
        .map_err(|e| e.in_layer(Layer::Algorithm))?;
    let t = total_t(&profile, inputs.spec).map_err(|e| e.in_layer(Layer::Algorithm))?;

    let layout = compile_expansion(&profile, &calib.gsc, calib.expansion_ratio)
        .map_err(|e| e.in_layer(Layer::Gsc))?
        .with_factories(calib.factory_elus);

    let kind = if flags.msc {
        FactoryKind::Cultivation
    } else {
        FactoryKind::Distillation
    };
    let code = hw.code_parameters();
    let mut trace = Vec::new();
    let (d, cycles, distance_source) = match calib.code_distance {
        Some(d) => {
            let c = cycles_at(inputs, t, &layout, kind, d).map_err(|e| e.in_layer(Layer::Gsc))?;
            trace.push(d);
            (d, c, "calibration".to_string())
        }
        None => {
            let mut d = 3;
            loop {
                trace.push(d);
                let c =
                    cycles_at(inputs, t, &layout, kind, d).map_err(|e| e.in_layer(Layer::Gsc))?;
                let volume = layout.compiled_logical_qubits as f64 * c.total_cycles as f64;
                let needed = min_distance(&code, volume.max(1.0), calib.failure_budget)
                    .map_err(|e| e.in_layer(Layer::Qec))?;
                if needed <= d {
                    break (d, c, "solved".to_string());
                }
                if trace.len() >= MAX_DISTANCE_ROUNDS {
                    return Err(
                        Error::Infeasible("code distance solve did not settle".into())
                            .in_layer(Layer::Qec),
                    );
                }
                d = needed;
            }
        }
    };

    let fac = factory(kind, &code, d, &calib.factory_config).map_err(|e| e.in_layer(Layer::Qec))?;
    if let Some(w) = &fac.warning {
        warnings.push(w.clone());
    }

    let layout_kind = if flags.a2a {
        LayoutKind::EffectiveAllToAll
    } else {
        LayoutKind::TwoRowBus
    };
    let penalty = layout_penalty(layout_kind, &profile, &hw.layout_config)
        .map_err(|e| e.in_layer(Layer::Hardware))?;
    if let Some(w) = &penalty.warning {
        warnings.push(w.clone());
    }

    let qubits_basic = physical_qubits_basic(&layout, d, &fac, hw.qubits_per_logical_d2)
        .map_err(|e| e.in_layer(Layer::Hardware))?;
    let elu = match hw.elu_spec(d) {
        Ok(elu) => elu,
        Err(Error::Infeasible(msg)) => {
            warnings.push(format!("detailed count unavailable: {msg}"));
            None
        }
        Err(e) => return Err(e.in_layer(Layer::Hardware)),
    };
    let qubits_detailed = elu
        .as_ref()
        .map(|e| physical_qubits_detailed(&layout, e))
        .transpose()
        .map_err(|e| e.in_layer(Layer::Hardware))?;

    let gamma = inputs.overlap_enabled.then_some(inputs.spec.overlap_gamma);
    let naive = inputs.naive_gsc.then_some(calib.naive_gsc_penalty);
    let mut seconds = cycles.total_cycles as f64 * hw.scc_time * penalty.multiplier;
    if let Some(g) = gamma {
        seconds /= g;
    }
    if let Some(n) = naive {
        seconds *= n;
    }

    Ok(ResourceEstimate {
        scenario: inputs.label.to_string(),
        runtime_seconds: seconds,
        runtime_days: seconds / SECONDS_PER_DAY,
        physical_qubits_basic: qubits_basic,
        physical_qubits_detailed: qubits_detailed,
        code_distance: d,
        cycles,
        flags,
        layout,
        factory: fac,
        elu,
        warnings,
        provenance: EstimateProvenance {
            hardware_preset: hw.name.clone(),
            calibration_preset: calib.name.clone(),
            profile: profile.label.clone(),
            t_total: t,
            factory_kind: kind,
            cycles_per_magic_state: calib.cycles_per_magic_state.get(kind),
            layout: layout_kind,
            layout_multiplier: penalty.multiplier,
            scc_time: hw.scc_time,
            overlap_gamma: gamma,
            naive_gsc_penalty: naive,
            distance_trace: trace,
            distance_source,
            hardware: hw.provenance.clone(),
            calibration: calib.provenance.clone(),
        },
    })
}
