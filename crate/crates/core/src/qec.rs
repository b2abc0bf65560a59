//! Surface-code error model, code-distance solver and magic-state factories.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PREFACTOR: f64 = 0.1;
pub const DEFAULT_FAILURE_BUDGET: f64 = 1e-2;
pub const MAX_DISTANCE: u32 = 99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeParameters {
    pub physical_error_rate: f64,
    pub threshold: f64,
    #[serde(default = "default_prefactor")]
    pub prefactor_a: f64,
}

fn default_prefactor() -> f64 {
    DEFAULT_PREFACTOR
}

impl CodeParameters {
    pub fn new(physical_error_rate: f64, threshold: f64) -> Self {
        CodeParameters {
            physical_error_rate,
            threshold,
            prefactor_a: DEFAULT_PREFACTOR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (p, pth) = (self.physical_error_rate, self.threshold);
        if !(p > 0.0 && p < pth && pth < 1.0) {
            return Err(Error::invalid(format!(
                "need 0 < p < p_th < 1, got p = {p}, p_th = {pth}"
            )));
        }
        if !(self.prefactor_a > 0.0 && self.prefactor_a.is_finite()) {
            return Err(Error::invalid("prefactor must be positive"));
        }
        Ok(())
    }
}

fn check_distance(d: u32) -> Result<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "code distance must be odd and at least 3, got {d}"
        )));
    }
    Ok(())
}

/// `A (p / p_th)^((d + 1) / 2)`.
pub fn logical_error_per_cycle(c: &CodeParameters, d: u32) -> Result<f64> {
    c.validate()?;
    check_distance(d)?;
    Ok(error_unchecked(c, d))
}

fn error_unchecked(c: &CodeParameters, d: u32) -> f64 {
    c.prefactor_a * (c.physical_error_rate / c.threshold).powi(d.div_ceil(2) as i32)
}

/// Smallest odd distance whose accumulated error over `volume` logical
/// qubit-cycles stays within `failure_budget`.
pub fn min_distance(c: &CodeParameters, volume: f64, failure_budget: f64) -> Result<u32> {
    c.validate()?;
    if !(volume >= 1.0 && volume.is_finite()) {
        return Err(Error::invalid(format!(
            "volume must be at least 1, got {volume}"
        )));
    }
    if !(failure_budget > 0.0 && failure_budget < 1.0) {
        return Err(Error::invalid(format!(
            "failure budget must lie in (0, 1), got {failure_budget}"
        )));
    }
    (3..=MAX_DISTANCE)
        .step_by(2)
        .find(|&d| error_unchecked(c, d) * volume <= failure_budget)
        .ok_or(Error::DistanceSaturated {
            max: MAX_DISTANCE,
            best_error: error_unchecked(c, MAX_DISTANCE) * volume,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactoryKind {
    Distillation,
    Cultivation,
}

impl FromStr for FactoryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distillation" => Ok(FactoryKind::Distillation),
            "cultivation" => Ok(FactoryKind::Cultivation),
            _ => Err(Error::invalid(format!("unsupported factory kind `{s}`"))),
        }
    }
}

impl fmt::Display for FactoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactoryKind::Distillation => "distillation",
            FactoryKind::Cultivation => "cultivation",
        })
    }
}

/// Factory geometry knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FactoryConfig {
    pub cultivation_qubits_per_attempt: u64,
    pub cultivation_parallel_attempts: u64,
    /// Cultivation latency in units of d; not a published figure.
    pub cultivation_cycles_per_d: u64,
    /// Distillation footprint is `k d^2`.
    pub distillation_qubits_per_d2: u64,
    /// Distillation latency is `c d`.
    pub distillation_cycles_per_d: u64,
}

impl Default for FactoryConfig {
    fn default() -> Self {
        FactoryConfig {
            cultivation_qubits_per_attempt: 460,
            cultivation_parallel_attempts: 20,
            cultivation_cycles_per_d: 1,
            distillation_qubits_per_d2: 12,
            distillation_cycles_per_d: 11,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorySpec {
    pub kind: FactoryKind,
    pub physical_qubits_per_factory: u64,
    pub cycles_per_magic_state: u64,
    pub output_error: f64,
    pub parallel_attempts: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

const CULTIVATION_REFERENCE_P: f64 = 1e-4;
const CULTIVATION_REFERENCE_ERROR: f64 = 4e-12;
/// Output error at 5x the reference noise is 10x the reference error.
const CULTIVATION_HIGH_P: f64 = 5e-4;
const CULTIVATION_HIGH_ERROR: f64 = 4e-11;

fn cultivation_error(p: f64) -> f64 {
    if p <= CULTIVATION_REFERENCE_P {
        return CULTIVATION_REFERENCE_ERROR;
    }
    let slope = (CULTIVATION_HIGH_ERROR / CULTIVATION_REFERENCE_ERROR).ln()
        / (CULTIVATION_HIGH_P / CULTIVATION_REFERENCE_P).ln();
    (CULTIVATION_REFERENCE_ERROR * (p / CULTIVATION_REFERENCE_P).powf(slope)).min(0.5)
}

pub fn factory(
    kind: FactoryKind,
    code: &CodeParameters,
    d: u32,
    cfg: &FactoryConfig,
) -> Result<FactorySpec> {
    code.validate()?;
    check_distance(d)?;
    let p = code.physical_error_rate;
    let d64 = d as u64;
    let spec = match kind {
        FactoryKind::Cultivation => FactorySpec {
            kind,
            physical_qubits_per_factory: cfg.cultivation_qubits_per_attempt
                * cfg.cultivation_parallel_attempts,
            cycles_per_magic_state: cfg.cultivation_cycles_per_d * d64,
            output_error: cultivation_error(p),
            parallel_attempts: cfg.cultivation_parallel_attempts,
            warning: (p > CULTIVATION_REFERENCE_P).then(|| {
                format!("cultivation output error extrapolated from p = 1e-4 to p = {p:e}")
            }),
        },
        FactoryKind::Distillation => FactorySpec {
            kind,
            physical_qubits_per_factory: cfg.distillation_qubits_per_d2 * d64 * d64,
            cycles_per_magic_state: cfg.distillation_cycles_per_d * d64,
            output_error: (35.0 * p * p * p).min(0.5),
            parallel_attempts: 1,
            warning: None,
        },
    };
    if spec.physical_qubits_per_factory == 0 {
        return Err(Error::invalid("factory footprint must be positive"));
    }
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Platform {
    IonTrap,
    NeutralAtomConventional,
    NeutralAtomErasure,
}

impl FromStr for Platform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ion_trap" => Ok(Platform::IonTrap),
            "neutral_atom_conventional" => Ok(Platform::NeutralAtomConventional),
            "neutral_atom_erasure" => Ok(Platform::NeutralAtomErasure),
            _ => Err(Error::invalid(format!("unknown platform `{s}`"))),
        }
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Platform::IonTrap => "ion_trap",
            Platform::NeutralAtomConventional => "neutral_atom_conventional",
            Platform::NeutralAtomErasure => "neutral_atom_erasure",
        })
    }
}

pub fn platform_code(platform: Platform) -> CodeParameters {
    match platform {
        Platform::IonTrap => CodeParameters::new(1e-4, 1e-2),
        Platform::NeutralAtomConventional => CodeParameters::new(1e-4, 1.3e-2),
        Platform::NeutralAtomErasure => CodeParameters::new(1e-4, 4.15e-2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_rate_examples() {
        let c = CodeParameters::new(1e-3, 1e-2);
        assert!((logical_error_per_cycle(&c, 3).unwrap() - 1e-3).abs() < 1e-15);
        let ion = platform_code(Platform::IonTrap);
        let e13 = logical_error_per_cycle(&ion, 13).unwrap();
        assert!((e13 / 1e-15 - 1.0).abs() < 1e-9);
        let e15 = logical_error_per_cycle(&ion, 15).unwrap();
        assert!((e15 / e13 - 1e-2).abs() < 1e-12);
        assert!(logical_error_per_cycle(&ion, 4).is_err());
        assert!(logical_error_per_cycle(&ion, 1).is_err());
    }

    #[test]
    fn distance_examples() {
        let ion = platform_code(Platform::IonTrap);
        assert_eq!(min_distance(&ion, 7.6e11, 0.01).unwrap(), 13);
        assert_eq!(min_distance(&ion, 1.0, 1e-5).unwrap(), 3);
        assert!(matches!(
            min_distance(&CodeParameters::new(0.99e-2, 1e-2), 1e12, 1e-3),
            Err(Error::DistanceSaturated { max: 99, .. })
        ));
        assert!(min_distance(&ion, 0.5, 0.01).is_err());
        assert!(min_distance(&ion, 10.0, 1.0).is_err());
    }

    #[test]
    fn invalid_code_rejected() {
        assert!(CodeParameters::new(2e-2, 1e-2).validate().is_err());
        assert!(CodeParameters::new(0.0, 1e-2).validate().is_err());
    }

    #[test]
    fn factories() {
        let ion = platform_code(Platform::IonTrap);
        let cfg = FactoryConfig::default();
        let c = factory(FactoryKind::Cultivation, &ion, 13, &cfg).unwrap();
        assert_eq!(c.physical_qubits_per_factory, 9200);
        assert_eq!(c.physical_qubits_per_factory, c.parallel_attempts * 460);
        assert_eq!(c.output_error, 4e-12);
        assert!(c.warning.is_none());

        let d = factory(FactoryKind::Distillation, &ion, 13, &cfg).unwrap();
        assert!((d.output_error - 3.5e-11).abs() < 1e-20);
        assert_eq!(d.physical_qubits_per_factory, 12 * 169);
        assert_eq!(d.cycles_per_magic_state, 143);

        let noisy = CodeParameters::new(5e-4, 1e-2);
        let c = factory(FactoryKind::Cultivation, &noisy, 13, &cfg).unwrap();
        assert!((c.output_error / 4e-11 - 1.0).abs() < 1e-9);
        assert!(c.warning.is_some());

        assert!("magic".parse::<FactoryKind>().is_err());
    }

    #[test]
    fn platforms() {
        assert_eq!(
            platform_code(Platform::NeutralAtomErasure).threshold,
            4.15e-2
        );
        assert_eq!(
            platform_code(Platform::NeutralAtomConventional).threshold,
            1.3e-2
        );
        assert_eq!(platform_code(Platform::IonTrap).physical_error_rate, 1e-4);
        assert!("superconducting".parse::<Platform>().is_err());
        assert_eq!(
            "neutral_atom_erasure".parse::<Platform>().unwrap(),
            Platform::NeutralAtomErasure
        );
    }
}
