//! Graph-state compilation cost model: expansion from algorithmic to compiled
//! logical qubits, and surface-code cycle allocation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::ceil_count;
use crate::profile::LogicalCircuitProfile;

/// Compiler settings. Carried into reports; they do not enter the cost model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GscHyperparameters {
    pub teleportation_threshold: u64,
    pub min_neighbor_degree: u64,
    pub max_neighbors_to_search: u64,
    pub use_fully_optimized_dag: bool,
    pub teleportation_distance: u64,
}

impl Default for GscHyperparameters {
    fn default() -> Self {
        GscHyperparameters {
            teleportation_threshold: 4,
            min_neighbor_degree: 4,
            max_neighbors_to_search: 1_000_000,
            use_fully_optimized_dag: true,
            teleportation_distance: 2,
        }
    }
}

impl GscHyperparameters {
    pub fn validate(&self) -> Result<()> {
        if self.teleportation_threshold == 0
            || self.min_neighbor_degree == 0
            || self.max_neighbors_to_search == 0
            || self.teleportation_distance == 0
        {
            return Err(Error::invalid("compiler hyperparameters must be positive"));
        }
        Ok(())
    }
}

/// Compiled-to-algorithmic qubit ratio kept as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionRatio {
    pub compiled: u64,
    pub algorithmic: u64,
}

impl ExpansionRatio {
    pub const DEFAULT: ExpansionRatio = ExpansionRatio {
        compiled: 4232,
        algorithmic: 994,
    };

    pub fn value(&self) -> f64 {
        self.compiled as f64 / self.algorithmic as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithmic == 0 || self.compiled < self.algorithmic {
            return Err(Error::invalid(format!(
                "expansion ratio {}/{} is below 1",
                self.compiled, self.algorithmic
            )));
        }
        Ok(())
    }
}

impl Default for ExpansionRatio {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompiledLayout {
    pub compiled_logical_qubits: u64,
    pub data_elus: u64,
    pub factory_elus: u64,
    pub expansion_ratio: f64,
}

impl CompiledLayout {
    pub fn with_factories(mut self, factory_elus: u64) -> Self {
        self.factory_elus = factory_elus;
        self
    }
}

/// Expand the algorithmic register to the compiled layout. The factory count
/// is left at zero; the caller sets it with [`CompiledLayout::with_factories`].
pub fn compile_expansion(
    profile: &LogicalCircuitProfile,
    params: &GscHyperparameters,
    ratio: Option<ExpansionRatio>,
) -> Result<CompiledLayout> {
    params.validate()?;
    let q = profile.algorithm_logical_qubits;
    if q == 0 {
        return Err(Error::invalid("profile has no logical qubits"));
    }
    let ratio = ratio.unwrap_or_default();
    ratio.validate()?;
    let compiled = (q as u128 * ratio.compiled as u128).div_ceil(ratio.algorithmic as u128);
    let compiled = u64::try_from(compiled).map_err(|_| Error::Overflow("compiled qubits"))?;
    Ok(CompiledLayout {
        compiled_logical_qubits: compiled,
        data_elus: compiled,
        factory_elus: 0,
        expansion_ratio: ratio.value(),
    })
}

/// Scalar stand-ins for the compiler's schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleModel {
    pub cycles_per_t_meas: f64,
    pub cycles_per_magic_state: f64,
    pub factory_count: u64,
    pub prep_cycles_per_compiled_qubit: f64,
    pub combined_fraction: f64,
}

impl CycleModel {
    pub fn validate(&self) -> Result<()> {
        if self.factory_count == 0 {
            return Err(Error::invalid("at least one factory is required"));
        }
        for (name, v) in [
            ("cycles_per_t_meas", self.cycles_per_t_meas),
            ("cycles_per_magic_state", self.cycles_per_magic_state),
            (
                "prep_cycles_per_compiled_qubit",
                self.prep_cycles_per_compiled_qubit,
            ),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.combined_fraction >= 0.0 && self.combined_fraction.is_finite()) {
            return Err(Error::invalid("combined_fraction must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleAllocation {
    pub t_measurement_cycles: u64,
    pub distillation_cycles: u64,
    pub graph_prep_cycles: u64,
    pub combined_prep_distill_cycles: u64,
    pub total_cycles: u64,
}

impl CycleAllocation {
    /// Allocation from measured components; the total is their exact sum.
    pub fn from_components(t_meas: u64, distill: u64, prep: u64, combined: u64) -> Result<Self> {
        let total = [distill, prep, combined]
            .iter()
            .try_fold(t_meas, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow("total cycles"))?;
        Ok(CycleAllocation {
            t_measurement_cycles: t_meas,
            distillation_cycles: distill,
            graph_prep_cycles: prep,
            combined_prep_distill_cycles: combined,
            total_cycles: total,
        })
    }

    pub fn component_sum(&self) -> u128 {
        self.t_measurement_cycles as u128
            + self.distillation_cycles as u128
            + self.graph_prep_cycles as u128
            + self.combined_prep_distill_cycles as u128
    }
}

fn cycles(x: f64, what: &'static str) -> Result<u64> {
    if !x.is_finite() || x >= u64::MAX as f64 {
        return Err(Error::Overflow(what));
    }
    Ok(ceil_count(x))
}

pub fn allocate_cycles(
    t_total: u128,
    layout: &CompiledLayout,
    d: u32,
    model: &CycleModel,
) -> Result<CycleAllocation> {
    model.validate()?;
    if t_total == 0 {
        return Err(Error::invalid("T count must be positive"));
    }
    let t = t_total as f64;
    let t_meas = cycles(t * model.cycles_per_t_meas, "T-measurement cycles")?;
    let distill = cycles(
        t * model.cycles_per_magic_state / model.factory_count as f64,
        "distillation cycles",
    )?;
    let prep = cycles(
        layout.compiled_logical_qubits as f64 * model.prep_cycles_per_compiled_qubit * d as f64,
        "graph preparation cycles",
    )?;
    let combined = cycles(
        model.combined_fraction * (prep as f64 + distill as f64),
        "combined cycles",
    )?;
    CycleAllocation::from_components(t_meas, distill, prep, combined)
}
