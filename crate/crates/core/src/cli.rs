//! Command-line front end. `run` dispatches one command, writes its
//! artifacts and returns a JSON summary for standard output.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chem::{
    extrapolate_energy, load_extrapolation_points, load_runs, rate_ratio, reaction_energy,
    uncertainty_series, ChemLedger, ClassicalRunRecord, Method, Species,
};
use crate::engine::{
    ablation_grid, replay_grid, AblationFixture, AblationTable, ExecMode, FeatureFlags, FitKind,
    PresetStore, ReferenceFits, ResolvedScenario, ResourceEstimate,
};
use crate::engine::{fit_exponential, fit_linear};
use crate::error::{Error, Result};
use crate::profile::{extract_profile, load_proxy_profile_str, parse_qasm, DEFAULT_REMOTE_CUTOFF};
use crate::report::{
    emit_comparison, grid_rows, read_csv, read_points, write_csv, write_json, Comparison,
    ComparisonRow, Format, GridRow, QuantumRuntime,
};
use crate::transform::peephole_cancel;

#[derive(Debug, Parser)]
#[command(
    name = "ftqc",
    version,
    about = "Fault-tolerant quantum resource estimator and classical benchmark ledger"
)]
pub struct Cli {
    /// Directory for written artifacts. Nothing is written when omitted.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    pub format: Format,

    /// Directory searched for `<kind>/<name>.json` presets before the built-ins.
    #[arg(long, global = true, env = "FTQC_PRESET_DIR")]
    pub preset_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract a logical profile from OpenQASM 2 or a proxy JSON document.
    Parse {
        input: PathBuf,
        #[arg(long)]
        label: Option<String>,
        /// CNOTs whose operand indices differ by more than this are remote.
        #[arg(long, default_value_t = DEFAULT_REMOTE_CUTOFF)]
        remote_cutoff: usize,
        /// Run the peephole canceller before extraction.
        #[arg(long)]
        peephole: bool,
        /// Block-encoding repetitions to attach to the profile.
        #[arg(long)]
        block_encodings: Option<u64>,
    },
    /// Estimate runtime and physical qubits for one scenario.
    Estimate {
        #[arg(long)]
        scenario: PathBuf,
        /// Override flags as a `dfthc,zx,a2a,msc` bit string such as `1011`.
        #[arg(long)]
        flags: Option<String>,
        #[arg(long)]
        hardware: Option<String>,
        #[arg(long)]
        calibration: Option<String>,
    },
    /// Evaluate every flag combination of a scenario.
    Ablate {
        #[arg(long)]
        scenario: PathBuf,
        /// Published ablation outcomes used to name rows.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Replay each published outcome through its own calibration.
        #[arg(long, requires = "fixture")]
        replay: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Fit a scaling law to `(x, y)` points.
    Fit {
        #[arg(long, value_enum)]
        kind: FitKindArg,
        #[arg(long)]
        points: PathBuf,
        /// Published coefficients to compare against.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Extra x values to extrapolate to.
        #[arg(long = "at")]
        at: Vec<f64>,
        #[arg(long, default_value_t = 0.02)]
        rel_tol: f64,
    },
    /// Reaction energies, rate ratios and classical run accounting.
    Chem {
        #[arg(long)]
        ledger: PathBuf,
        /// Product intermediate of the reaction.
        #[arg(long, default_value = "XVIII")]
        reaction: String,
        /// Restrict to one method; all complete methods otherwise.
        #[arg(long)]
        method: Option<String>,
        /// Temperature in K for rate ratios against `--reference-method`.
        #[arg(long)]
        temperature: Option<f64>,
        #[arg(long, default_value = "SHCI")]
        reference_method: String,
        #[arg(long)]
        runs: Option<PathBuf>,
        /// `(delta_e_pt, energy)` points for extrapolation to zero correction.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Quantum versus classical runtime comparison.
    Compare {
        /// Pre-assembled `orbitals,qpu_days_ion,qpu_days_na,cpu_days` table.
        #[arg(long, conflicts_with_all = ["scenario", "runs"])]
        table: Option<PathBuf>,
        #[arg(long)]
        scenario: Vec<PathBuf>,
        #[arg(long)]
        runs: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum FitKindArg {
    Linear,
    Exponential,
}

impl From<FitKindArg> for FitKind {
    fn from(k: FitKindArg) -> Self {
        match k {
            FitKindArg::Linear => FitKind::Linear,
            FitKindArg::Exponential => FitKind::Exponential,
        }
    }
}

struct Ctx {
    output_dir: Option<PathBuf>,
    format: Format,
    store: PresetStore,
    written: Vec<PathBuf>,
}

impl Ctx {
    fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        if let (Some(dir), true) = (&self.output_dir, self.format.json()) {
            let p = dir.join(name);
            write_json(&p, value)?;
            self.written.push(p);
        }
        Ok(())
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        if let (Some(dir), true) = (&self.output_dir, self.format.csv()) {
            let p = dir.join(name);
            write_csv(&p, rows)?;
            self.written.push(p);
        }
        Ok(())
    }
}

fn require_file(p: &Path) -> Result<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(Error::Config(format!("{}: no such file", p.display())))
    }
}

/// Run one command. The returned value is the standard-output summary and
/// includes the list of written files.
pub fn run(cli: Cli) -> Result<Value> {
    let store = match &cli.preset_dir {
        Some(d) if !d.is_dir() => {
            return Err(Error::Config(format!(
                "{}: preset directory not found",
                d.display()
            )))
        }
        Some(d) => PresetStore::with_dir(d),
        None => PresetStore::builtin(),
    };
    let mut ctx = Ctx {
        output_dir: cli.output_dir,
        format: cli.format,
        store,
        written: Vec::new(),
    };
    let mut summary = match cli.command {
        Command::Parse {
            input,
            label,
            remote_cutoff,
            peephole,
            block_encodings,
        } => parse(
            &mut ctx,
            &input,
            label,
            remote_cutoff,
            peephole,
            block_encodings,
        )?,
        Command::Estimate {
            scenario,
            flags,
            hardware,
            calibration,
        } => estimate(&mut ctx, &scenario, flags, hardware, calibration)?,
        Command::Ablate {
            scenario,
            fixture,
            replay,
            sequential,
        } => ablate(&mut ctx, &scenario, fixture.as_deref(), replay, sequential)?,
        Command::Fit {
            kind,
            points,
            reference,
            at,
            rel_tol,
        } => fit(
            &mut ctx,
            kind.into(),
            &points,
            reference.as_deref(),
            &at,
            rel_tol,
        )?,
        Command::Chem {
            ledger,
            reaction,
            method,
            temperature,
            reference_method,
            runs,
            points,
        } => chem(
            &mut ctx,
            ChemArgs {
                ledger,
                reaction,
                method,
                temperature,
                reference_method,
                runs,
                points,
            },
        )?,
        Command::Compare {
            table,
            scenario,
            runs,
        } => compare(&mut ctx, table.as_deref(), &scenario, runs.as_deref())?,
    };
    summary["written"] = json!(ctx.written);
    Ok(summary)
}

fn parse(
    ctx: &mut Ctx,
    input: &Path,
    label: Option<String>,
    cutoff: usize,
    peephole: bool,
    blocks: Option<u64>,
) -> Result<Value> {
    require_file(input)?;
    let text = std::fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
    let label = label.unwrap_or_else(|| {
        input
            .file_stem()
            .map_or_else(|| "profile".into(), |s| s.to_string_lossy().into_owned())
    });
    let is_json = input
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let mut peephole_stats = Value::Null;
    let mut profile = if is_json {
        let mut p = load_proxy_profile_str(&text)?;
        if p.label.is_empty() {
            p.label = label;
        }
        p
    } else {
        let mut g = parse_qasm(&text)?;
        if peephole {
            let out = peephole_cancel(&g);
            peephole_stats = json!({
                "gates_before": g.len(), "gates_after": out.len(),
                "t_before": g.t_count(), "t_after": out.t_count(),
            });
            g = out;
        }
        extract_profile(&g, cutoff, label)
    };
    if blocks.is_some() {
        profile.block_encodings = blocks;
    }
    profile.validate()?;
    ctx.json("profile.json", &profile)?;
    ctx.csv(
        "profile.csv",
        std::slice::from_ref(&ProfileRow::from(&profile)),
    )?;
    Ok(json!({ "command": "parse", "profile": profile, "peephole": peephole_stats }))
}

#[derive(Serialize)]
struct ProfileRow {
    label: String,
    qubits: u64,
    t_per_block: u64,
    block_encodings: Option<u64>,
    two_qubit_per_block: u64,
    remote_cnot_per_block: u64,
    distinct_pairs: u64,
    rotations_per_block: u64,
}

impl From<&crate::profile::LogicalCircuitProfile> for ProfileRow {
    fn from(p: &crate::profile::LogicalCircuitProfile) -> Self {
        ProfileRow {
            label: p.label.clone(),
            qubits: p.algorithm_logical_qubits,
            t_per_block: p.t_per_block_encoding,
            block_encodings: p.block_encodings,
            two_qubit_per_block: p.two_qubit_per_block,
            remote_cnot_per_block: p.remote_cnot_per_block,
            distinct_pairs: p.distinct_pair_count,
            rotations_per_block: p.rotation_count_per_block,
        }
    }
}

fn load_scenario(ctx: &Ctx, path: &Path) -> Result<ResolvedScenario> {
    require_file(path)?;
    ResolvedScenario::from_file(path, &ctx.store)
}

fn parse_flags(s: &str) -> Result<FeatureFlags> {
    FeatureFlags::parse_bits(s)
        .ok_or_else(|| Error::Config(format!("`{s}` is not a 4-digit flag bit string")))
}

/// Estimate plus the presets it was computed from.
#[derive(Serialize)]
struct EstimateReport<'a> {
    estimate: &'a ResourceEstimate,
    hardware_preset: &'a crate::hardware::HardwareModel,
    calibration_preset: &'a crate::engine::CalibrationPreset,
}

fn estimate_summary(e: &ResourceEstimate) -> Value {
    json!({
        "scenario": e.scenario,
        "runtime_days": e.runtime_days,
        "physical_qubits_basic": e.physical_qubits_basic,
        "physical_qubits_detailed": e.physical_qubits_detailed,
        "code_distance": e.code_distance,
        "flags": e.flags.to_string(),
        "warnings": e.warnings,
    })
}

fn estimate(
    ctx: &mut Ctx,
    path: &Path,
    flags: Option<String>,
    hardware: Option<String>,
    calibration: Option<String>,
) -> Result<Value> {
    let mut sc = load_scenario(ctx, path)?;
    if let Some(f) = flags {
        sc.flags = parse_flags(&f)?;
    }
    if let Some(h) = hardware {
        sc.hardware = ctx.store.hardware(&h)?;
    }
    if let Some(c) = calibration {
        sc.calibration = ctx.store.calibration(&c)?;
    }
    let est = sc.estimate()?;
    ctx.json(
        "estimate.json",
        &EstimateReport {
            estimate: &est,
            hardware_preset: &sc.hardware,
            calibration_preset: &sc.calibration,
        },
    )?;
    ctx.csv("estimate.csv", &grid_rows([&est]))?;
    let mut s = estimate_summary(&est);
    s["command"] = json!("estimate");
    Ok(s)
}

#[derive(Serialize)]
struct AblationReport<'a> {
    mode: &'static str,
    table: &'a AblationTable,
    quoted_ratios: Vec<Value>,
    monotonicity_violations: usize,
    hardware_preset: &'a crate::hardware::HardwareModel,
    calibration_preset: &'a crate::engine::CalibrationPreset,
}

fn ablate(
    ctx: &mut Ctx,
    path: &Path,
    fixture: Option<&Path>,
    replay: bool,
    sequential: bool,
) -> Result<Value> {
    let sc = load_scenario(ctx, path)?;
    let fixture: Option<AblationFixture> = match fixture {
        Some(p) => {
            require_file(p)?;
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Some(
                serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
            )
        }
        None => None,
    };
    let mode = if sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    };
    let table = match (&fixture, replay) {
        (Some(f), true) => replay_grid(&sc, f, mode)?,
        (f, _) => ablation_grid(&sc, &FeatureFlags::all_combinations(), f.as_ref(), mode)?,
    };
    let quoted_ratios: Vec<Value> = fixture
        .iter()
        .flat_map(|f| &f.quoted_ratios)
        .map(|q| json!({ "from": q.from, "to": q.to, "quoted": q.quoted, "computed": table.ratio(&q.from, &q.to) }))
        .collect();
    let violations = table.monotonicity_violations().len();
    ctx.json(
        "ablation.json",
        &AblationReport {
            mode: if replay {
                "replay"
            } else {
                "shared_calibration"
            },
            table: &table,
            quoted_ratios: quoted_ratios.clone(),
            monotonicity_violations: violations,
            hardware_preset: &sc.hardware,
            calibration_preset: &sc.calibration,
        },
    )?;
    let rows: Vec<GridRow> = table
        .rows
        .iter()
        .map(|r| GridRow {
            scenario: r.id.clone(),
            ..GridRow::from(&r.estimate)
        })
        .collect();
    ctx.csv("ablation.csv", &rows)?;
    Ok(json!({
        "command": "ablate",
        "rows": table.rows.iter().map(|r| json!({
            "id": r.id, "flags": r.estimate.flags.to_string(), "runtime_days": r.estimate.runtime_days,
            "reference_days": r.reference.as_ref().map(|x| x.runtime_days),
        })).collect::<Vec<_>>(),
        "quoted_ratios": quoted_ratios,
        "monotonicity_violations": violations,
    }))
}

#[derive(Serialize)]
struct FitRow {
    x: f64,
    y: f64,
    fitted: f64,
    residual: f64,
}

fn fit(
    ctx: &mut Ctx,
    kind: FitKind,
    points: &Path,
    reference: Option<&Path>,
    at: &[f64],
    rel_tol: f64,
) -> Result<Value> {
    require_file(points)?;
    let pts = read_points(points)?;
    let fit = match kind {
        FitKind::Linear => fit_linear(&pts)?,
        FitKind::Exponential => fit_exponential(&pts)?,
    };
    let comparison = match reference {
        Some(p) => {
            require_file(p)?;
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            let refs: ReferenceFits = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            let r = match kind {
                FitKind::Linear => refs.quantum_linear,
                FitKind::Exponential => refs.classical_exponential,
            };
            Some(r.compare(&fit, rel_tol, at))
        }
        None => None,
    };
    let extrapolations: Vec<Value> = at
        .iter()
        .map(|&x| json!({ "x": x, "fitted": fit.evaluate(x) }))
        .collect();
    let report = json!({
        "command": "fit",
        "fit": fit,
        "extrapolations": extrapolations,
        "comparison": comparison,
    });
    ctx.json("fit.json", &report)?;
    let rows: Vec<FitRow> = fit
        .points
        .iter()
        .zip(fit.residuals())
        .map(|(&(x, y), residual)| FitRow {
            x,
            y,
            fitted: fit.evaluate(x),
            residual,
        })
        .collect();
    ctx.csv("fit.csv", &rows)?;
    let mut s = json!({
        "command": "fit",
        "kind": fit.kind,
        "slope_or_rate": fit.slope_or_rate,
        "intercept_or_prefactor": fit.intercept_or_prefactor,
        "r_squared": fit.r_squared,
        "extrapolations": report["extrapolations"],
    });
    if let Some(c) = &report["comparison"].as_object() {
        s["reference_annotation"] = c["annotation"].clone();
        s["reference_coefficients"] = json!([
            c["reference"]["slope_or_rate"],
            c["reference"]["intercept_or_prefactor"]
        ]);
    }
    Ok(s)
}

struct ChemArgs {
    ledger: PathBuf,
    reaction: String,
    method: Option<String>,
    temperature: Option<f64>,
    reference_method: String,
    runs: Option<PathBuf>,
    points: Option<PathBuf>,
}

#[derive(Serialize)]
struct ReactionRow {
    method: Method,
    delta_e_hartree: f64,
    rate_ratio: Option<f64>,
}

fn chem(ctx: &mut Ctx, a: ChemArgs) -> Result<Value> {
    require_file(&a.ledger)?;
    if a.reaction.parse::<Species>()? != Species::XVIII {
        return Err(Error::Config(format!(
            "reaction `{}` is not available; the ledger models the I -> XVIII step",
            a.reaction
        )));
    }
    let ledger = ChemLedger::load(&a.ledger)?;
    let methods = match &a.method {
        Some(m) => vec![m.parse::<Method>()?],
        None => ledger.complete_methods(),
    };
    let reference_de = match a.temperature {
        Some(_) => Some(reaction_energy(&ledger, a.reference_method.parse()?)?),
        None => None,
    };
    let rows = methods
        .iter()
        .map(|&m| {
            let de = reaction_energy(&ledger, m)?;
            let ratio = match (a.temperature, reference_de) {
                (Some(t), Some(r)) => Some(rate_ratio(de, r, t)?),
                _ => None,
            };
            Ok(ReactionRow {
                method: m,
                delta_e_hartree: de,
                rate_ratio: ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let runs: Option<Vec<ClassicalRunRecord>> = match &a.runs {
        Some(p) => {
            require_file(p)?;
            Some(load_runs(p)?)
        }
        None => None,
    };
    let extrapolation = match &a.points {
        Some(p) => {
            require_file(p)?;
            Some(extrapolate_energy(&load_extrapolation_points(p)?)?)
        }
        None => None,
    };
    let mut report = json!({
        "command": "chem",
        "reaction": "I -> XVIII",
        "reactions": rows,
        "temperature_k": a.temperature,
        "rate_reference_method": a.temperature.map(|_| a.reference_method.to_uppercase()),
    });
    if let [only] = &rows[..] {
        report["delta_e_hartree"] = json!(only.delta_e_hartree);
    }
    if let Some(runs) = &runs {
        report["runs"] = json!(runs
            .iter()
            .map(|r| json!({
                "label": r.system_label, "orbitals": r.orbitals, "cpu_hours": crate::chem::ratio_to_f64(r.cpu_hours),
                "cpu_hours_exact": r.cpu_hours.to_string(), "cpu_days": r.cpu_days(),
                "uncertainty_mha": r.uncertainty_mha, "case": r.extrapolation_case,
            }))
            .collect::<Vec<_>>());
        report["uncertainty_series"] = json!(uncertainty_series(runs));
    }
    if let Some(f) = &extrapolation {
        report["extrapolated_energy"] = json!(f.intercept_or_prefactor);
        report["extrapolation_fit"] = json!(f);
    }
    ctx.json("chem.json", &report)?;
    ctx.csv("reaction_energies.csv", &rows)?;
    Ok(report)
}

fn compare(
    ctx: &mut Ctx,
    table: Option<&Path>,
    scenarios: &[PathBuf],
    runs: Option<&Path>,
) -> Result<Value> {
    let comparison = match (table, runs) {
        (Some(t), _) => {
            require_file(t)?;
            let rows: Vec<ComparisonRow> = read_csv(t)?;
            Comparison::from_rows(rows)?
        }
        (None, Some(r)) => {
            require_file(r)?;
            if scenarios.is_empty() {
                return Err(Error::Config(
                    "compare needs --scenario files alongside --runs".into(),
                ));
            }
            let classical = load_runs(r)?;
            let quantum = scenarios
                .iter()
                .map(|p| {
                    let sc = load_scenario(ctx, p)?;
                    let est = sc.estimate()?;
                    Ok(QuantumRuntime {
                        orbitals: sc.spec.n_orbitals,
                        platform: sc.hardware.platform,
                        runtime_days: est.runtime_days,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            emit_comparison(&quantum, &classical)?
        }
        (None, None) => {
            return Err(Error::Config(
                "compare needs --table or --runs with --scenario".into(),
            ))
        }
    };
    ctx.csv("comparison.csv", &comparison.rows)?;
    ctx.json("verdict.json", &comparison.verdict)?;
    Ok(json!({
        "command": "compare",
        "rows": comparison.rows,
        "verdict": comparison.verdict,
    }))
}

/// Process exit status for a finished run.
pub fn exit_code(result: &Result<Value>) -> i32 {
    match result {
        Ok(_) => 0,
        Err(e) if e.is_config() => 2,
        Err(_) => 1,
    }
}
