use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::ceil_count;
use crate::profile::LogicalCircuitProfile;

/// Divisors measured from before/after optimisation counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionFactors {
    #[serde(default = "one")]
    pub f_t: f64,
    #[serde(default = "one")]
    pub f_two_qubit: f64,
    #[serde(default = "one")]
    pub f_remote: f64,
    #[serde(default = "one")]
    pub f_subroutines: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ReductionFactors {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl ReductionFactors {
    pub const IDENTITY: ReductionFactors = ReductionFactors {
        f_t: 1.0,
        f_two_qubit: 1.0,
        f_remote: 1.0,
        f_subroutines: 1.0,
    };

    /// Factors from before/after counts, `before / after` for each pair.
    pub fn from_counts(t: (u64, u64), two_qubit: (u64, u64), remote: (u64, u64)) -> Result<Self> {
        let ratio = |(b, a): (u64, u64), what: &str| {
            if a == 0 || a > b {
                Err(Error::invalid(format!(
                    "{what}: after count must lie in 1..=before"
                )))
            } else {
                Ok(b as f64 / a as f64)
            }
        };
        Ok(ReductionFactors {
            f_t: ratio(t, "T")?,
            f_two_qubit: ratio(two_qubit, "two-qubit")?,
            f_remote: ratio(remote, "remote")?,
            f_subroutines: 1.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, f) in [
            ("f_t", self.f_t),
            ("f_two_qubit", self.f_two_qubit),
            ("f_remote", self.f_remote),
            ("f_subroutines", self.f_subroutines),
        ] {
            if !(f >= 1.0 && f.is_finite()) {
                return Err(Error::invalid(format!(
                    "reduction factor {name} = {f} is below 1"
                )));
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// Apply measured divisors to a profile. Distinct pairs are kept as is.
pub fn apply_reduction(
    profile: &LogicalCircuitProfile,
    f: &ReductionFactors,
) -> Result<LogicalCircuitProfile> {
    f.validate()?;
    let mut out = profile.clone();
    out.t_per_block_encoding = ceil_count(profile.t_per_block_encoding as f64 / f.f_t);
    out.two_qubit_per_block = ceil_count(profile.two_qubit_per_block as f64 / f.f_two_qubit);
    out.remote_cnot_per_block =
        ceil_count(profile.remote_cnot_per_block as f64 / f.f_remote).min(out.two_qubit_per_block);
    if !f.is_identity() {
        out.label.push_str("+zx");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> LogicalCircuitProfile {
        LogicalCircuitProfile {
            label: "small".into(),
            algorithm_logical_qubits: 129,
            t_per_block_encoding: 27_500,
            block_encodings: Some(3017),
            two_qubit_per_block: 10_880,
            remote_cnot_per_block: 9529,
            distinct_pair_count: 150,
            rotation_count_per_block: 0,
            defaulted: vec![],
        }
    }

    #[test]
    fn small_instance_counts() {
        let f = ReductionFactors {
            f_t: 2.75 / 2.25,
            f_two_qubit: 10_880.0 / 363.0,
            f_remote: 9529.0 / 278.0,
            f_subroutines: 1.0,
        };
        let out = apply_reduction(&small(), &f).unwrap();
        assert_eq!(out.t_per_block_encoding, 22_500);
        assert_eq!(out.two_qubit_per_block, 363);
        assert_eq!(out.remote_cnot_per_block, 278);
        assert_eq!(out.distinct_pair_count, 150);
        assert_eq!(out.label, "small+zx");
    }

    #[test]
    fn endpoint_counts_on_large_proxy() {
        let mut p = small();
        p.t_per_block_encoding = 900_000_000;
        p.block_encodings = Some(1);
        let f = ReductionFactors {
            f_t: 9.0 / 1.6,
            ..ReductionFactors::IDENTITY
        };
        assert_eq!(
            apply_reduction(&p, &f).unwrap().t_per_block_encoding,
            160_000_000
        );
    }

    #[test]
    fn identity_is_noop() {
        assert_eq!(
            apply_reduction(&small(), &ReductionFactors::IDENTITY).unwrap(),
            small()
        );
    }

    #[test]
    fn factor_below_one_rejected() {
        let f = ReductionFactors {
            f_remote: 0.5,
            ..ReductionFactors::IDENTITY
        };
        assert!(apply_reduction(&small(), &f).is_err());
    }

    #[test]
    fn factors_from_counts() {
        let f =
            ReductionFactors::from_counts((27_500, 22_500), (10_880, 363), (9529, 278)).unwrap();
        let out = apply_reduction(&small(), &f).unwrap();
        assert_eq!(
            (
                out.t_per_block_encoding,
                out.two_qubit_per_block,
                out.remote_cnot_per_block
            ),
            (22_500, 363, 278)
        );
        assert!(ReductionFactors::from_counts((1, 2), (1, 1), (1, 1)).is_err());
    }

    #[test]
    fn remote_clamped_to_two_qubit() {
        let f = ReductionFactors {
            f_two_qubit: 100.0,
            ..ReductionFactors::IDENTITY
        };
        let out = apply_reduction(&small(), &f).unwrap();
        assert_eq!(out.two_qubit_per_block, 109);
        assert_eq!(out.remote_cnot_per_block, 109);
    }
}
