//! Algorithm-layer accounting: phase-estimation repetitions, rotation
//! synthesis, overlap penalty and empirical scaling exponents.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{ceil_count, ols};
use crate::profile::LogicalCircuitProfile;

/// T gates charged per arbitrary rotation when no better figure is known.
pub const DEFAULT_ROTATION_T_COST: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "DFTHC_BLISS_SA")]
    DfthcBlissSa,
    #[serde(rename = "DF")]
    Df,
}

/// Algorithm parameters. Energies are in Hartree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub n_orbitals: u64,
    #[serde(default = "default_variant")]
    pub variant: Variant,
    /// Hamiltonian 1-norm (Ha).
    #[serde(default)]
    pub lambda_1norm: Option<f64>,
    /// Target energy error (Ha).
    #[serde(default = "default_epsilon")]
    pub epsilon_target: f64,
    /// Squared overlap of the initial state with the ground state.
    #[serde(default = "default_gamma")]
    pub overlap_gamma: f64,
    #[serde(default = "default_rotation_t_cost")]
    pub rotation_t_cost: u64,
}

fn default_variant() -> Variant {
    Variant::DfthcBlissSa
}
fn default_epsilon() -> f64 {
    1e-3
}
fn default_gamma() -> f64 {
    1.0
}
fn default_rotation_t_cost() -> u64 {
    DEFAULT_ROTATION_T_COST
}

impl AlgorithmSpec {
    pub fn new(n_orbitals: u64) -> Self {
        AlgorithmSpec {
            n_orbitals,
            variant: default_variant(),
            lambda_1norm: None,
            epsilon_target: default_epsilon(),
            overlap_gamma: default_gamma(),
            rotation_t_cost: default_rotation_t_cost(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_target > 0.0 && self.epsilon_target.is_finite()) {
            return Err(Error::invalid("epsilon_target must be positive"));
        }
        if !(self.overlap_gamma > 0.0 && self.overlap_gamma <= 1.0) {
            return Err(Error::invalid("overlap_gamma must lie in (0, 1]"));
        }
        if let Some(l) = self.lambda_1norm {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::invalid("lambda_1norm must be positive"));
            }
        }
        Ok(())
    }
}

/// Block-encoding repetitions for phase estimation: `ceil(pi * lambda / (2 * epsilon))`.
pub fn repetitions(lambda_1norm: f64, epsilon: f64) -> Result<u64> {
    if !(lambda_1norm > 0.0 && lambda_1norm.is_finite()) {
        return Err(Error::invalid(format!(
            "lambda must be positive, got {lambda_1norm}"
        )));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let r = PI * lambda_1norm / (2.0 * epsilon);
    if r >= u64::MAX as f64 {
        return Err(Error::Overflow("repetitions"));
    }
    Ok(ceil_count(r))
}

/// Total logical T count: rotation-expanded per-block count times repetitions.
///
/// Repetitions come from the profile when it carries them, otherwise from the
/// spec's 1-norm and target error.
pub fn total_t(profile: &LogicalCircuitProfile, spec: &AlgorithmSpec) -> Result<u128> {
    let blocks = match profile.block_encodings {
        Some(b) => b,
        None => match spec.lambda_1norm {
            Some(l) => repetitions(l, spec.epsilon_target)?,
            None => {
                return Err(Error::invalid(format!(
                    "profile `{}` has no block_encodings and the algorithm has no lambda_1norm",
                    profile.label
                )))
            }
        },
    };
    let rotations = (profile.rotation_count_per_block as u128)
        .checked_mul(spec.rotation_t_cost as u128)
        .ok_or(Error::Overflow("rotation expansion"))?;
    (profile.t_per_block_encoding as u128 + rotations)
        .checked_mul(blocks as u128)
        .ok_or(Error::Overflow("total T count"))
}

/// Per-rotation T cost implied by a before/after transpilation pair.
pub fn implied_rotation_t_cost(t_before: u64, t_after: u64, rotations: u64) -> Option<u64> {
    if rotations == 0 || t_after < t_before {
        return None;
    }
    Some((t_after - t_before).div_ceil(rotations))
}

/// Scale a runtime by the inverse initial-state overlap.
pub fn apply_overlap(runtime_days: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid(format!(
            "overlap gamma must lie in (0, 1], got {gamma}"
        )));
    }
    Ok(runtime_days / gamma)
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn fit_power_exponent(series: &[(f64, f64)]) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::invalid("power-law fit needs at least two points"));
    }
    let logs: Vec<(f64, f64)> = series
        .iter()
        .map(|&(n, t)| {
            if n > 0.0 && t > 0.0 {
                Ok((n.ln(), t.ln()))
            } else {
                Err(Error::invalid(format!(
                    "power-law fit needs positive values, got ({n}, {t})"
                )))
            }
        })
        .collect::<Result<_>>()?;
    ols(&logs)
        .map(|(slope, _, _)| slope)
        .ok_or_else(|| Error::invalid("power-law fit needs distinct sizes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn per_block(t: u64, rotations: u64, blocks: Option<u64>) -> LogicalCircuitProfile {
        LogicalCircuitProfile {
            label: "p".into(),
            algorithm_logical_qubits: 10,
            t_per_block_encoding: t,
            block_encodings: blocks,
            two_qubit_per_block: 0,
            remote_cnot_per_block: 0,
            distinct_pair_count: 0,
            rotation_count_per_block: rotations,
            defaulted: vec![],
        }
    }

    #[test]
    fn repetitions_closed_form() {
        let eps = 1e-3;
        assert_eq!(repetitions(2.0 * eps / PI, eps).unwrap(), 1);
        assert_eq!(repetitions(1.0, 1e-3).unwrap(), 1571);
        assert!(repetitions(0.0, 1e-3).is_err());
        assert!(repetitions(1.0, -1e-3).is_err());
    }

    #[test]
    fn total_t_small_instance() {
        let spec = AlgorithmSpec::new(56);
        let t = total_t(&per_block(27_500, 0, Some(3017)), &spec).unwrap();
        assert_eq!(t, 82_967_500);
        assert!(((t as f64) - 8.35e7).abs() / 8.35e7 < 0.007);
        assert_eq!(total_t(&per_block(10, 0, Some(1)), &spec).unwrap(), 10);
    }

    #[test]
    fn total_t_uses_lambda_when_blocks_unset() {
        let mut spec = AlgorithmSpec::new(56);
        assert!(total_t(&per_block(10, 0, None), &spec).is_err());
        spec.lambda_1norm = Some(1.0);
        assert_eq!(
            total_t(&per_block(10, 1, None), &spec).unwrap(),
            (10 + 30) * 1571
        );
    }

    #[test]
    fn total_t_overflow_is_reported() {
        let mut spec = AlgorithmSpec::new(1);
        spec.rotation_t_cost = u64::MAX;
        let p = per_block(u64::MAX, u64::MAX, Some(u64::MAX));
        assert!(matches!(total_t(&p, &spec), Err(Error::Overflow(_))));
    }

    #[test]
    fn implied_rotation_cost() {
        assert_eq!(implied_rotation_t_cost(7261, 27_500, 1000), Some(21));
        assert_eq!(implied_rotation_t_cost(7261, 27_500, 0), None);
    }

    #[test]
    fn overlap_rows() {
        assert!((apply_overlap(1.0, 0.91).unwrap() - 1.0989).abs() < 1e-4);
        assert!((apply_overlap(8.7, 0.74).unwrap() - 11.7568).abs() < 1e-4);
        assert_eq!(apply_overlap(3.25, 1.0).unwrap(), 3.25);
        assert!(apply_overlap(1.0, 0.0).is_err());
        assert!(apply_overlap(1.0, 1.5).is_err());
    }

    #[test]
    fn power_exponent_exact_series() {
        let lin: Vec<_> = [3.0, 7.0, 20.0].iter().map(|&n| (n, 4.5 * n)).collect();
        assert!((fit_power_exponent(&lin).unwrap() - 1.0).abs() < 1e-12);
        assert!((fit_power_exponent(&[(2.0, 4.0), (4.0, 16.0)]).unwrap() - 2.0).abs() < 1e-12);
        assert!(fit_power_exponent(&[(2.0, 4.0)]).is_err());
        assert!(fit_power_exponent(&[(2.0, 4.0), (0.0, 1.0)]).is_err());
    }

    #[test]
    fn spec_validation_and_defaults() {
        let spec: AlgorithmSpec = serde_json::from_str(r#"{"n_orbitals": 56}"#).unwrap();
        assert_eq!(spec.epsilon_target, 1e-3);
        assert_eq!(spec.overlap_gamma, 1.0);
        assert_eq!(spec.variant, Variant::DfthcBlissSa);
        spec.validate().unwrap();
        let bad: AlgorithmSpec =
            serde_json::from_str(r#"{"n_orbitals": 56, "overlap_gamma": 0}"#).unwrap();
        assert!(bad.validate().is_err());
    }
}
