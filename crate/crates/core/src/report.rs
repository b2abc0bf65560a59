//! Report emission: atomic file writes, CSV series and comparison verdicts.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chem::ClassicalRunRecord;
use crate::engine::ResourceEstimate;
use crate::error::{Error, Result};
use crate::qec::Platform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    write_atomic(path, &csv_bytes(rows)?)
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| Error::invalid(format!("csv buffer: {e}")))
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(f);
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Two-column `(x, y)` CSV with a header row.
pub fn read_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(f);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() < 2 {
            return Err(Error::Config(format!(
                "{}: expected two columns",
                path.display()
            )));
        }
        let num = |i: usize| {
            rec[i].parse::<f64>().map_err(|_| {
                Error::Config(format!("{}: `{}` is not a number", path.display(), &rec[i]))
            })
        };
        out.push((num(0)?, num(1)?));
    }
    Ok(out)
}

/// One row of the plotting series for an estimate grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub scenario: String,
    pub runtime_days: f64,
    pub qubits_basic: u64,
    pub qubits_detailed: Option<u64>,
    pub distance: u32,
    pub dfthc: bool,
    pub zx: bool,
    pub a2a: bool,
    pub msc: bool,
}

impl From<&ResourceEstimate> for GridRow {
    fn from(e: &ResourceEstimate) -> Self {
        GridRow {
            scenario: e.scenario.clone(),
            runtime_days: e.runtime_days,
            qubits_basic: e.physical_qubits_basic,
            qubits_detailed: e.physical_qubits_detailed,
            distance: e.code_distance,
            dfthc: e.flags.dfthc,
            zx: e.flags.zx,
            a2a: e.flags.a2a,
            msc: e.flags.msc,
        }
    }
}

pub fn grid_rows<'a>(estimates: impl IntoIterator<Item = &'a ResourceEstimate>) -> Vec<GridRow> {
    estimates.into_iter().map(GridRow::from).collect()
}

/// A quantum runtime keyed by system size and platform family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumRuntime {
    pub orbitals: u64,
    pub platform: Platform,
    pub runtime_days: f64,
}

impl QuantumRuntime {
    pub fn new(orbitals: u64, platform: Platform, estimate: &ResourceEstimate) -> Self {
        QuantumRuntime {
            orbitals,
            platform,
            runtime_days: estimate.runtime_days,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub orbitals: u64,
    pub qpu_days_ion: Option<f64>,
    pub qpu_days_na: Option<f64>,
    pub cpu_days: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Speedup {
    pub orbitals: u64,
    pub ion: Option<f64>,
    pub neutral_atom: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub speedups: Vec<Speedup>,
    /// Every available quantum runtime beats the classical one.
    pub quantum_advantage: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub verdict: Verdict,
}

impl Comparison {
    pub fn from_rows(mut rows: Vec<ComparisonRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("comparison needs at least one row"));
        }
        rows.sort_by_key(|r| r.orbitals);
        if rows.windows(2).any(|w| w[0].orbitals == w[1].orbitals) {
            return Err(Error::KeyMismatch(
                "duplicate orbital count in comparison".into(),
            ));
        }
        for r in &rows {
            let positive = |v: f64| v > 0.0 && v.is_finite();
            if !positive(r.cpu_days)
                || !r
                    .qpu_days_ion
                    .into_iter()
                    .chain(r.qpu_days_na)
                    .all(positive)
            {
                return Err(Error::invalid(format!(
                    "non-positive runtime at {} orbitals",
                    r.orbitals
                )));
            }
            if r.qpu_days_ion.is_none() && r.qpu_days_na.is_none() {
                return Err(Error::KeyMismatch(format!(
                    "no quantum runtime for {} orbitals",
                    r.orbitals
                )));
            }
        }
        let speedups: Vec<Speedup> = rows
            .iter()
            .map(|r| Speedup {
                orbitals: r.orbitals,
                ion: r.qpu_days_ion.map(|q| r.cpu_days / q),
                neutral_atom: r.qpu_days_na.map(|q| r.cpu_days / q),
            })
            .collect();
        let quantum_advantage = speedups
            .iter()
            .all(|s| s.ion.into_iter().chain(s.neutral_atom).all(|x| x > 1.0));
        Ok(Comparison {
            rows,
            verdict: Verdict {
                speedups,
                quantum_advantage,
            },
        })
    }
}

/// Join quantum runtimes with classical run records on orbital count.
///
/// Neutral-atom platforms of either error model share one column; a size
/// present on only one side is a key mismatch.
pub fn emit_comparison(
    quantum: &[QuantumRuntime],
    classical: &[ClassicalRunRecord],
) -> Result<Comparison> {
    if classical.is_empty() {
        return Err(Error::invalid("classical series is empty"));
    }
    if quantum.is_empty() {
        return Err(Error::invalid("quantum series is empty"));
    }
    let mut q: BTreeMap<u64, (Option<f64>, Option<f64>)> = BTreeMap::new();
    for r in quantum {
        let slot = q.entry(r.orbitals).or_default();
        let target = match r.platform {
            Platform::IonTrap => &mut slot.0,
            Platform::NeutralAtomConventional | Platform::NeutralAtomErasure => &mut slot.1,
        };
        if target.replace(r.runtime_days).is_some() {
            return Err(Error::KeyMismatch(format!(
                "two {} runtimes for {} orbitals",
                r.platform, r.orbitals
            )));
        }
    }
    let mut c: BTreeMap<u64, f64> = BTreeMap::new();
    for r in classical {
        if c.insert(r.orbitals, r.cpu_days()).is_some() {
            return Err(Error::KeyMismatch(format!(
                "two classical runs for {} orbitals",
                r.orbitals
            )));
        }
    }
    if !q.keys().eq(c.keys()) {
        return Err(Error::KeyMismatch(format!(
            "quantum sizes {:?} differ from classical sizes {:?}",
            q.keys().collect::<Vec<_>>(),
            c.keys().collect::<Vec<_>>()
        )));
    }
    let rows = q
        .into_iter()
        .map(|(orbitals, (ion, na))| ComparisonRow {
            orbitals,
            qpu_days_ion: ion,
            qpu_days_na: na,
            cpu_days: c[&orbitals],
        })
        .collect();
    Comparison::from_rows(rows)
}
