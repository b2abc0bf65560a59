//! Classical benchmark ledger: electronic energies, reaction energy, rate
//! ratios, CPU-hour accounting and uncertainty tracking.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::engine::{fit_linear, ScalingFit};
use crate::error::{Error, Result};

/// Boltzmann constant in Hartree per Kelvin.
pub const K_B_HARTREE: f64 = 3.166811563e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Species {
    I,
    XVIII,
    H2,
    H2O,
    CO2,
}

impl Species {
    pub const ALL: [Species; 5] = [
        Species::I,
        Species::XVIII,
        Species::H2,
        Species::H2O,
        Species::CO2,
    ];

    fn name(self) -> &'static str {
        match self {
            Species::I => "I",
            Species::XVIII => "XVIII",
            Species::H2 => "H2",
            Species::H2O => "H2O",
            Species::CO2 => "CO2",
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Species {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Species::ALL
            .into_iter()
            .find(|sp| sp.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown species `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum Method {
    DFT,
    HF,
    CASSCF,
    DMRG,
    SHCI,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::DFT,
        Method::HF,
        Method::CASSCF,
        Method::DMRG,
        Method::SHCI,
    ];

    fn name(self) -> &'static str {
        match self {
            Method::DFT => "DFT",
            Method::HF => "HF",
            Method::CASSCF => "CASSCF",
            Method::DMRG => "DMRG",
            Method::SHCI => "SHCI",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

/// One ledger row. `method == None` marks an energy shared by every method
/// (written `any` in the CSV).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyRecord {
    pub species: Species,
    pub method: Option<Method>,
    pub energy_hartree: f64,
    pub source: String,
}

#[derive(Debug, Deserialize)]
struct EnergyRow {
    species: String,
    method: String,
    energy_hartree: f64,
    #[serde(default)]
    source: String,
}

#[derive(Debug, Clone, Default)]
pub struct ChemLedger {
    records: BTreeMap<(Species, Option<Method>), EnergyRecord>,
}

impl ChemLedger {
    pub fn from_records(records: impl IntoIterator<Item = EnergyRecord>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for r in records {
            if !r.energy_hartree.is_finite() {
                return Err(Error::Config(format!(
                    "non-finite energy for {}",
                    r.species
                )));
            }
            let key = (r.species, r.method);
            if map.insert(key, r).is_some() {
                return Err(Error::Config(format!(
                    "duplicate ledger entry for {}/{}",
                    key.0,
                    method_label(key.1)
                )));
            }
        }
        Ok(ChemLedger { records: map })
    }

    pub fn from_reader(reader: impl std::io::Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut out = Vec::new();
        for row in rdr.deserialize::<EnergyRow>() {
            let row = row?;
            let method = if row.method.eq_ignore_ascii_case("any") {
                None
            } else {
                Some(row.method.parse()?)
            };
            out.push(EnergyRecord {
                species: row.species.parse()?,
                method,
                energy_hartree: row.energy_hartree,
                source: row.source,
            });
        }
        Self::from_records(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(f)
    }

    pub fn records(&self) -> impl Iterator<Item = &EnergyRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Method-specific energy, falling back to a shared entry.
    pub fn energy(&self, species: Species, method: Method) -> Result<f64> {
        self.records
            .get(&(species, Some(method)))
            .or_else(|| self.records.get(&(species, None)))
            .map(|r| r.energy_hartree)
            .ok_or_else(|| Error::MissingKey(format!("{species}/{method}")))
    }

    /// Methods for which every species of the reaction is available.
    pub fn complete_methods(&self) -> Vec<Method> {
        Method::ALL
            .into_iter()
            .filter(|&m| Species::ALL.iter().all(|&s| self.energy(s, m).is_ok()))
            .collect()
    }

    pub fn map_energies(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        for r in out.records.values_mut() {
            r.energy_hartree = f(r.energy_hartree);
        }
        out
    }
}

fn method_label(m: Option<Method>) -> String {
    m.map_or_else(|| "any".to_string(), |m| m.to_string())
}

/// `E(XVIII) + E(H2O) - 2 E(H2) - E(I) - E(CO2)` in Hartree.
pub fn reaction_energy(ledger: &ChemLedger, method: Method) -> Result<f64> {
    let e = |s| ledger.energy(s, method);
    Ok(e(Species::XVIII)? + e(Species::H2O)?
        - 2.0 * e(Species::H2)?
        - e(Species::I)?
        - e(Species::CO2)?)
}

/// Relative rate `k1 / k2` for two barriers at temperature `t` (K).
pub fn rate_ratio(delta_e_1: f64, delta_e_2: f64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::invalid(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok((-(delta_e_1 - delta_e_2) / (K_B_HARTREE * temperature)).exp())
}

pub type Hours = Ratio<i128>;

/// Parse a plain decimal (`0.1630859375`, `7`, `-2.5`) into an exact ratio.
pub fn parse_decimal(s: &str) -> Result<Hours> {
    let s = s.trim();
    let bad = || Error::Config(format!("`{s}` is not a plain decimal number"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 30 {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = 10i128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    let r = Ratio::new(numer, denom);
    Ok(if neg { -r } else { r })
}

pub fn cpu_hours(wall_hours: Hours, cores: u64) -> Result<Hours> {
    if wall_hours < Ratio::from_integer(0) {
        return Err(Error::invalid("wall hours must be non-negative"));
    }
    wall_hours
        .numer()
        .checked_mul(cores as i128)
        .map(|n| Ratio::new(n, *wall_hours.denom()))
        .ok_or(Error::Overflow("cpu hours"))
}

pub fn ratio_to_f64(r: Hours) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn ser_hours<S: Serializer>(r: &Hours, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(ratio_to_f64(*r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtrapolationCase {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalRunRecord {
    pub system_label: String,
    pub orbitals: u64,
    #[serde(serialize_with = "ser_hours")]
    pub wall_hours: Hours,
    pub cores: u64,
    #[serde(serialize_with = "ser_hours")]
    pub cpu_hours: Hours,
    pub uncertainty_mha: f64,
    pub extrapolation_case: ExtrapolationCase,
}

impl ClassicalRunRecord {
    pub fn new(
        label: impl Into<String>,
        orbitals: u64,
        wall_hours: Hours,
        cores: u64,
        uncertainty_mha: f64,
        case: ExtrapolationCase,
    ) -> Result<Self> {
        if !(uncertainty_mha >= 0.0 && uncertainty_mha.is_finite()) {
            return Err(Error::invalid("uncertainty must be non-negative"));
        }
        Ok(ClassicalRunRecord {
            system_label: label.into(),
            orbitals,
            wall_hours,
            cores,
            cpu_hours: cpu_hours(wall_hours, cores)?,
            uncertainty_mha,
            extrapolation_case: case,
        })
    }

    pub fn cpu_days(&self) -> f64 {
        ratio_to_f64(self.cpu_hours) / 24.0
    }
}

#[derive(Debug, Deserialize)]
struct RunRow {
    label: String,
    orbitals: u64,
    wall_hours: String,
    cores: u64,
    uncertainty_mha: f64,
    case: ExtrapolationCase,
}

pub fn load_runs_from_reader(reader: impl std::io::Read) -> Result<Vec<ClassicalRunRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    rdr.deserialize::<RunRow>()
        .map(|row| {
            let row = row?;
            let wall = parse_decimal(&row.wall_hours)?;
            ClassicalRunRecord::new(
                row.label,
                row.orbitals,
                wall,
                row.cores,
                row.uncertainty_mha,
                row.case,
            )
            .map_err(|e| Error::Config(e.to_string()))
        })
        .collect()
}

pub fn load_runs(path: &Path) -> Result<Vec<ClassicalRunRecord>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_runs_from_reader(f)
}

/// `(orbitals, uncertainty_mha)` sorted by system size.
pub fn uncertainty_series(runs: &[ClassicalRunRecord]) -> Vec<(u64, f64)> {
    let mut out: Vec<_> = runs
        .iter()
        .map(|r| (r.orbitals, r.uncertainty_mha))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

/// Linear fit of energy against the perturbative correction; the intercept
/// is the extrapolated energy.
pub fn extrapolate_energy(points: &[(f64, f64)]) -> Result<ScalingFit> {
    fit_linear(points)
}

#[derive(Debug, Deserialize)]
struct PointRow {
    delta_e_pt: f64,
    energy: f64,
}

pub fn load_extrapolation_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(f);
    rdr.deserialize::<PointRow>()
        .map(|r| r.map(|r| (r.delta_e_pt, r.energy)).map_err(Error::from))
        .collect()
}
