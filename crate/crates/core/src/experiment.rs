//! JSON-configured experiments with deterministic CSV output.
//!
//! A config names a network (explicit rows or a seeded random network), a
//! coefficient schedule, starting opinions and appraisals, and a run mode:
//!
//! * `issue`: one opinion trajectory at fixed appraisals `x0`,
//! * `power`: the appraisal trajectory over issues,
//! * `equilibrium`: as `power`, then certifies the end point with
//!   `‖F(x) − x‖∞ ≤ equilibrium_tol`.
//!
//! Every run writes `instance.csv`, `trajectory.csv` and `summary.csv`.
//! Agent labels in the files are 1-based. Reals are printed with 17
//! significant digits (`{:.16e}`).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    consensus_model_i, consensus_model_ii, simulate_issue, CoefficientMap, CoefficientSchedule, Permutation, Regime,
};
use crate::error::Error as ModelError;
use crate::netcore::{InteractionMatrix, OpinionVector, SimplexVector};
use crate::netgen::generate_random_network;
use crate::power::{
    check_equilibrium, evolve, AppraisalMap, Method, DEFAULT_EQUILIBRIUM_TOL, DEFAULT_MAX_ISSUES, DEFAULT_STEP_TOL,
};

pub const DEFAULT_ISSUE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ExperimentError {
    fn config(path: impl Into<String>, message: impl ToString) -> Self {
        Self::Config { path: path.into(), message: message.to_string() }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, Self::Config { .. })
    }
}

type Result<T, E = ExperimentError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NetworkSpec {
    Matrix(Vec<Vec<f64>>),
    Random { n: usize, edge_density: f64, seed: u64 },
}

/// One map shared by every agent, or one map per agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapsSpec {
    PerAgent(Vec<CoefficientMap>),
    Shared(CoefficientMap),
}

impl MapsSpec {
    fn resolve(&self, n: usize, path: &str) -> Result<Vec<CoefficientMap>> {
        match self {
            Self::Shared(m) => Ok(vec![m.clone(); n]),
            Self::PerAgent(v) if v.len() == n => Ok(v.clone()),
            Self::PerAgent(v) => Err(ExperimentError::config(path, format!("expected {n} maps, found {}", v.len()))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub regime: Regime,
    pub a: MapsSpec,
    /// Required unless the regime is `model_ii`, where it defaults to `1 − a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MapsSpec>,
    /// Zero-based targets `π(i)` of `Z`; identity when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpinionPreset {
    Spread,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OpinionsSpec {
    Values(Vec<f64>),
    Preset(OpinionPreset),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AppraisalPreset {
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AppraisalsSpec {
    Values(Vec<f64>),
    Preset(AppraisalPreset),
}

impl Default for AppraisalsSpec {
    fn default() -> Self {
        Self::Preset(AppraisalPreset::Uniform)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Issue,
    Power,
    Equilibrium,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Issue => "issue",
            Mode::Power => "power",
            Mode::Equilibrium => "equilibrium",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub mode: Mode,
    #[serde(default)]
    pub method: Method,
    /// Stopping tolerance on successive states; 1e-12 for issues, 1e-10 for
    /// appraisals when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_equilibrium_tol")]
    pub equilibrium_tol: f64,
}

fn default_max_iterations() -> usize {
    DEFAULT_MAX_ISSUES
}

fn default_equilibrium_tol() -> f64 {
    DEFAULT_EQUILIBRIUM_TOL
}

impl RunSpec {
    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or(match self.mode {
            Mode::Issue => DEFAULT_ISSUE_TOL,
            Mode::Power | Mode::Equilibrium => DEFAULT_STEP_TOL,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub network: NetworkSpec,
    pub schedule: ScheduleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_opinions: Option<OpinionsSpec>,
    #[serde(default)]
    pub initial_appraisals: AppraisalsSpec,
    pub run: RunSpec,
}

/// A config with every field resolved and validated.
#[derive(Debug, Clone)]
pub struct Instance {
    pub config: ExperimentConfig,
    pub interaction: InteractionMatrix,
    pub schedule: CoefficientSchedule,
    pub initial_opinions: Option<OpinionVector>,
    pub initial_appraisals: SimplexVector,
}

impl ExperimentConfig {
    /// Parses JSON, reporting the field path of the first offending value.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ExperimentError::config(if path.is_empty() { ".".into() } else { path }, e.into_inner())
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| ExperimentError::Io { path: path.into(), source })?;
        Self::from_json(&text)
    }

    /// Replaces the run mode and, for random networks, the seed.
    pub fn with_overrides(mut self, mode: Option<Mode>, seed: Option<u64>) -> Result<Self> {
        if let Some(mode) = mode {
            self.run.mode = mode;
        }
        if let Some(new_seed) = seed {
            match &mut self.network {
                NetworkSpec::Random { seed, .. } => *seed = new_seed,
                NetworkSpec::Matrix(_) => {
                    return Err(ExperimentError::config("network", "--seed needs a random network"));
                }
            }
        }
        Ok(self)
    }

    pub fn resolve(&self) -> Result<Instance> {
        let interaction = match &self.network {
            NetworkSpec::Matrix(rows) => {
                InteractionMatrix::from_rows(rows).map_err(|e| ExperimentError::config("network.matrix", e))?
            }
            NetworkSpec::Random { n, edge_density, seed } => {
                if !(*edge_density > 0.0 && *edge_density <= 1.0) {
                    return Err(ExperimentError::config(
                        "network.random.edge_density",
                        format!("{edge_density} outside (0, 1]"),
                    ));
                }
                generate_random_network(*n, *edge_density, *seed)
                    .map_err(|e| ExperimentError::config("network.random", e))?
            }
        };
        let n = interaction.n();
        let schedule = self.resolve_schedule(n)?;

        let initial_opinions = match &self.initial_opinions {
            None => None,
            Some(OpinionsSpec::Preset(OpinionPreset::Spread)) => Some(OpinionVector::spread(n)),
            Some(OpinionsSpec::Values(v)) => {
                check_len(v.len(), n, "initial_opinions")?;
                Some(OpinionVector::new(v.clone().into()).map_err(|e| ExperimentError::config("initial_opinions", e))?)
            }
        };
        if self.run.mode == Mode::Issue && initial_opinions.is_none() {
            return Err(ExperimentError::config("initial_opinions", "required in issue mode"));
        }
        let initial_appraisals = match &self.initial_appraisals {
            AppraisalsSpec::Preset(AppraisalPreset::Uniform) => SimplexVector::uniform(n),
            AppraisalsSpec::Values(v) => {
                check_len(v.len(), n, "initial_appraisals")?;
                SimplexVector::new(v.clone().into()).map_err(|e| ExperimentError::config("initial_appraisals", e))?
            }
        };
        let tol = self.run.tolerance();
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(ExperimentError::config("run.tol", format!("{tol} is not a nonnegative number")));
        }
        if self.run.mode != Mode::Issue && schedule.regime() == Regime::General {
            return Err(ExperimentError::config(
                "schedule.regime",
                "power and equilibrium modes need model_i or model_ii",
            ));
        }
        Ok(Instance { config: self.clone(), interaction, schedule, initial_opinions, initial_appraisals })
    }

    fn resolve_schedule(&self, n: usize) -> Result<CoefficientSchedule> {
        let spec = &self.schedule;
        let a = spec.a.resolve(n, "schedule.a")?;
        let z = match &spec.permutation {
            None => Permutation::identity(n),
            Some(targets) => {
                check_len(targets.len(), n, "schedule.permutation")?;
                Permutation::new(targets.clone()).map_err(|e| ExperimentError::config("schedule.permutation", e))?
            }
        };
        let b = match (&spec.b, spec.regime) {
            (Some(b), _) => b.resolve(n, "schedule.b")?,
            (None, Regime::ModelII) => a.iter().map(CoefficientMap::complement).collect(),
            (None, _) => return Err(ExperimentError::config("schedule.b", "required unless regime is model_ii")),
        };
        CoefficientSchedule::new(a, b, z, spec.regime).map_err(|e| {
            let path = match &e {
                ModelError::InvalidSchedule { agent, field: "b", .. } if spec.b.is_some() => {
                    format!("schedule.b[{agent}]")
                }
                ModelError::InvalidSchedule { agent, field: "a + b", .. } if spec.b.is_some() => {
                    format!("schedule.a[{agent}], schedule.b[{agent}]")
                }
                ModelError::InvalidSchedule { agent, .. } => format!("schedule.a[{agent}]"),
                _ => "schedule".to_string(),
            };
            ExperimentError::config(path, e)
        })
    }
}

fn check_len(found: usize, n: usize, path: &str) -> Result<()> {
    if found != n {
        return Err(ExperimentError::config(path, format!("expected {n} entries, found {found}")));
    }
    Ok(())
}

/// Formats a real with 17 significant digits.
pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Outcome of a run, as written to `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mode: Mode,
    pub converged: bool,
    pub residual: f64,
    pub iterations: usize,
    /// `consensus`, `equilibrium` or `last_state`.
    pub vector_kind: &'static str,
    pub vector: Vec<f64>,
}

/// Rows of `trajectory.csv`: the index column name and the states.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub index_name: &'static str,
    pub rows: Vec<Vec<f64>>,
}

/// Runs the configured mode without touching the file system.
pub fn execute(instance: &Instance) -> Result<(Trajectory, Summary)> {
    let run = &instance.config.run;
    let tol = run.tolerance();
    let (p, sched, x0) = (&instance.interaction, &instance.schedule, &instance.initial_appraisals);
    match run.mode {
        Mode::Issue => {
            let y0 = instance.initial_opinions.as_ref().expect("checked by resolve");
            let traj = simulate_issue(y0, p, sched, x0, tol, run.max_iterations)?;
            let consensus = match sched.regime() {
                Regime::ModelII => consensus_model_ii(y0, p, sched, x0)?.0,
                Regime::ModelI | Regime::General => consensus_model_i(y0, p, sched, x0)?,
            };
            log::info!("issue: {} steps, converged = {}", traj.steps(), traj.converged);
            Ok((
                Trajectory { index_name: "t", rows: traj.states.iter().map(OpinionVector::to_vec).collect() },
                Summary {
                    mode: run.mode,
                    converged: traj.converged,
                    residual: traj.residual,
                    iterations: traj.steps(),
                    vector_kind: "consensus",
                    vector: consensus.to_vec(),
                },
            ))
        }
        Mode::Power | Mode::Equilibrium => {
            let map = AppraisalMap::new(p.clone(), sched.clone(), run.method)?;
            let traj = evolve(x0, &map, tol, run.max_iterations)?;
            log::info!("power: {} issues, converged = {}", traj.issues(), traj.converged);
            let rows = traj.states.iter().map(SimplexVector::to_vec).collect();
            let (converged, residual, vector_kind, vector) = if run.mode == Mode::Power {
                match &traj.equilibrium {
                    Some(eq) => (true, traj.residual, "equilibrium", eq.to_vec()),
                    None => (false, traj.residual, "last_state", traj.last().to_vec()),
                }
            } else {
                let candidate = traj.equilibrium.as_ref().unwrap_or(traj.last());
                let (ok, residual) = check_equilibrium(candidate, &map, run.equilibrium_tol)?;
                (ok, residual, if ok { "equilibrium" } else { "last_state" }, candidate.to_vec())
            };
            Ok((
                Trajectory { index_name: "s", rows },
                Summary { mode: run.mode, converged, residual, iterations: traj.issues(), vector_kind, vector },
            ))
        }
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .flexible(false)
        .from_path(path)
        .map_err(|source| ExperimentError::Csv { path: path.into(), source })
}

fn write_rows(path: &Path, rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv_writer(path)?;
    let wrap = |source| ExperimentError::Csv { path: path.into(), source };
    for row in rows {
        w.write_record(&row).map_err(wrap)?;
    }
    w.flush().map_err(|source| ExperimentError::Io { path: path.into(), source })
}

fn instance_rows(instance: &Instance) -> Vec<Vec<String>> {
    let cfg = &instance.config;
    let n = instance.interaction.n();
    let mut rows = vec![vec!["field".into(), "i".into(), "j".into(), "value".into()]];
    let mut scalar = |field: &str, value: String| rows.push(vec![field.into(), String::new(), String::new(), value]);
    scalar("agents", n.to_string());
    match &cfg.network {
        NetworkSpec::Matrix(_) => scalar("network", "matrix".into()),
        NetworkSpec::Random { edge_density, seed, .. } => {
            scalar("network", "random".into());
            scalar("edge_density", format_real(*edge_density));
            scalar("seed", seed.to_string());
        }
    }
    scalar("regime", instance.schedule.regime().name().into());
    scalar("mode", cfg.run.mode.name().into());
    scalar("method", serde_json::to_string(&cfg.run.method).expect("plain enum").trim_matches('"').into());
    scalar("tol", format_real(cfg.run.tolerance()));
    scalar("max_iterations", cfg.run.max_iterations.to_string());
    scalar("equilibrium_tol", format_real(cfg.run.equilibrium_tol));

    let p = instance.interaction.entries();
    for i in 0..n {
        for j in 0..n {
            rows.push(vec!["p".into(), (i + 1).to_string(), (j + 1).to_string(), format_real(p[[i, j]])]);
        }
    }
    let sched = &instance.schedule;
    for i in 0..n {
        let agent = (i + 1).to_string();
        let json = |m: &CoefficientMap| serde_json::to_string(m).expect("maps serialize");
        rows.push(vec!["a_map".into(), agent.clone(), String::new(), json(&sched.a_maps()[i])]);
        rows.push(vec!["b_map".into(), agent.clone(), String::new(), json(&sched.b_maps()[i])]);
        rows.push(vec![
            "permutation".into(),
            agent.clone(),
            String::new(),
            (sched.permutation().target(i) + 1).to_string(),
        ]);
    }
    if let Some(y0) = &instance.initial_opinions {
        for i in 0..n {
            rows.push(vec!["initial_opinion".into(), (i + 1).to_string(), String::new(), format_real(y0[i])]);
        }
    }
    for i in 0..n {
        rows.push(vec![
            "initial_appraisal".into(),
            (i + 1).to_string(),
            String::new(),
            format_real(instance.initial_appraisals[i]),
        ]);
    }
    rows
}

fn trajectory_rows(traj: &Trajectory, n: usize) -> Vec<Vec<String>> {
    let mut header = vec![traj.index_name.to_string()];
    header.extend((1..=n).map(|i| format!("agent_{i}")));
    let mut rows = vec![header];
    for (k, state) in traj.rows.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(state.iter().map(|&v| format_real(v)));
        rows.push(row);
    }
    rows
}

fn summary_rows(summary: &Summary) -> Vec<Vec<String>> {
    let mut header: Vec<String> =
        ["mode", "converged", "residual", "iterations", "vector_kind"].iter().map(|s| s.to_string()).collect();
    header.extend((1..=summary.vector.len()).map(|i| format!("value_{i}")));
    let mut row = vec![
        summary.mode.name().to_string(),
        summary.converged.to_string(),
        format_real(summary.residual),
        summary.iterations.to_string(),
        summary.vector_kind.to_string(),
    ];
    row.extend(summary.vector.iter().map(|&v| format_real(v)));
    vec![header, row]
}

/// Runs `config` and writes the three CSV files into `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let instance = config.resolve()?;
    let (trajectory, summary) = execute(&instance)?;
    fs::create_dir_all(out_dir).map_err(|source| ExperimentError::Io { path: out_dir.into(), source })?;
    let n = instance.interaction.n();
    let files = [
        ("instance.csv", instance_rows(&instance)),
        ("trajectory.csv", trajectory_rows(&trajectory, n)),
        ("summary.csv", summary_rows(&summary)),
    ];
    let mut written = Vec::with_capacity(files.len());
    for (name, rows) in files {
        let path = out_dir.join(name);
        write_rows(&path, rows)?;
        written.push(path);
    }
    Ok(written)
}

/// Runs several config files, each into its own subdirectory of `out_dir`
/// named after the file stem, on up to `jobs` threads.
pub fn run_config_files(
    configs: &[PathBuf],
    out_dir: &Path,
    mode: Option<Mode>,
    seed: Option<u64>,
    jobs: usize,
) -> Vec<Result<Vec<PathBuf>>> {
    let run_one = |path: &PathBuf| {
        let config = ExperimentConfig::from_file(path)?.with_overrides(mode, seed)?;
        let dir =
            if configs.len() == 1 { out_dir.to_path_buf() } else { out_dir.join(path.file_stem().unwrap_or_default()) };
        run_experiment(&config, &dir)
    };
    #[cfg(feature = "parallel")]
    {
        if jobs > 1 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(|| crate::batch::map_parallel(configs, run_one));
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    crate::batch::map_sequential(configs, run_one)
}
