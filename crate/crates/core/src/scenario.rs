//! JSON scenarios and the artifact writer behind the `mvfj` binary.
//!
//! A scenario names a graph, a simulation configuration, a policy and the
//! artifacts to produce. Every default is filled in on parse, so
//! `serde_json::to_string_pretty(&scenario)` is the complete configuration.
//! All artifacts are pure functions of the scenario and the seed.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::control::{
    optimal_control, sensitivity_case1_dxi, sensitivity_case2_dxj, ControlContext, ControlSolution,
    MultiplierModel, OptimalPolicy,
};
use crate::cost::{total_cost, CostReport};
use crate::dynamics::{
    picard_law_iteration, simulate, Alpha, ConstantPolicy, Policy, SimConfig, StepState,
    Trajectory, ZeroPolicy,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphSpec};
use crate::kernel::KernelParams;
use crate::measure::{kde, linspace, silverman_bandwidth, write_kde_csv};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub graph: GraphSource,
    pub sim: SimSection,
    #[serde(default)]
    pub multiplier: Option<MultiplierModel>,
    pub policy: PolicySpec,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSource {
    Generate(GraphSpec),
    /// CSV files `i,j,w` and `i,k`, relative to the scenario file.
    Load {
        edges: PathBuf,
        nodes: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub horizon: f64,
    pub eps: f64,
    #[serde(default)]
    pub sigma: Sigma,
    #[serde(default = "default_alpha")]
    pub alpha: Alpha,
    #[serde(default = "default_kernel")]
    pub kernel: KernelParams,
    pub x0: InitialOpinions,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub clamp: bool,
}

fn default_alpha() -> Alpha {
    Alpha::Constant(1.0)
}

fn default_kernel() -> KernelParams {
    KernelParams {
        theta1: 0.0,
        theta2: 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sigma {
    Common(f64),
    PerAgent(Vec<f64>),
}

impl Default for Sigma {
    fn default() -> Self {
        Sigma::Common(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialOpinions {
    /// `n` independent uniform draws on `[0, 1]`.
    Uniform {
        n: usize,
        seed: u64,
    },
    /// `n` equally spaced points `(i + 1/2) / n`.
    Grid {
        n: usize,
    },
    Constant {
        n: usize,
        value: f64,
    },
    Values(Vec<f64>),
}

impl InitialOpinions {
    pub fn materialize(&self) -> Vec<f64> {
        match self {
            InitialOpinions::Uniform { n, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*n).map(|_| rng.random::<f64>()).collect()
            }
            InitialOpinions::Grid { n } => (0..*n).map(|i| (i as f64 + 0.5) / *n as f64).collect(),
            InitialOpinions::Constant { n, value } => vec![*value; *n],
            InitialOpinions::Values(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicySpec {
    Zero,
    Constant { u: f64 },
    Optimal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "yes")]
    pub trajectories: bool,
    /// Per-step control solutions; only meaningful for the optimal policy.
    #[serde(default)]
    pub controls: bool,
    #[serde(default)]
    pub costs: bool,
    /// Independent paths averaged in `costs.json`.
    #[serde(default = "one")]
    pub cost_paths: usize,
    #[serde(default)]
    pub kde_times: Vec<f64>,
    #[serde(default)]
    pub kde_grid: KdeGrid,
    /// Fixed KDE bandwidth; Silverman's rule per snapshot when absent.
    #[serde(default)]
    pub kde_bandwidth: Option<f64>,
    #[serde(default)]
    pub picard: Option<PicardSpec>,
    #[serde(default)]
    pub sensitivity: Option<SweepSpec>,
}

fn yes() -> bool {
    true
}

fn one() -> usize {
    1
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            trajectories: true,
            controls: false,
            costs: false,
            cost_paths: 1,
            kde_times: Vec::new(),
            kde_grid: KdeGrid::default(),
            kde_bandwidth: None,
            picard: None,
            sensitivity: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KdeGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for KdeGrid {
    fn default() -> Self {
        KdeGrid {
            lo: -0.25,
            hi: 1.25,
            points: 301,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardSpec {
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Whole population at one opinion; derivative in the agent's opinion.
    Case1,
    /// Agent strictly below its neighbours; derivative in the neighbours'
    /// opinions.
    Case2,
}

/// Parameter sweep of the sensitivity formulas around a base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub regime: Regime,
    pub param: SweepParam,
    pub values: Vec<f64>,
    #[serde(default)]
    pub base: SweepPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    X,
    Gap,
    W,
    K,
    Sigma,
    Brownian,
    S,
    Alpha,
    Dlambda,
    DlambdaDs,
}

/// Probe point of a sensitivity sweep. Agent 0 holds `x`; its `n - 1`
/// neighbours (weight `w` each) hold `x` in case 1 and `x + gap` in case 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepPoint {
    pub n: usize,
    pub x: f64,
    pub gap: f64,
    pub x0: f64,
    pub w: f64,
    pub k: f64,
    pub sigma: f64,
    pub brownian: f64,
    pub s: f64,
    pub eps: f64,
    pub alpha: f64,
    pub dlambda: f64,
    pub dlambda_ds: f64,
    pub kernel: KernelParams,
}

impl Default for SweepPoint {
    fn default() -> Self {
        SweepPoint {
            n: 2,
            x: 0.5,
            gap: 0.25,
            x0: 0.5,
            w: 1.0,
            k: 0.0,
            sigma: 0.0,
            brownian: 0.0,
            s: 0.5,
            eps: 0.01,
            alpha: 1.0,
            dlambda: 0.01,
            dlambda_ds: 1.0,
            kernel: default_kernel(),
        }
    }
}

impl SweepPoint {
    fn with(&self, param: SweepParam, value: f64) -> SweepPoint {
        let mut p = self.clone();
        let slot = match param {
            SweepParam::X => &mut p.x,
            SweepParam::Gap => &mut p.gap,
            SweepParam::W => &mut p.w,
            SweepParam::K => &mut p.k,
            SweepParam::Sigma => &mut p.sigma,
            SweepParam::Brownian => &mut p.brownian,
            SweepParam::S => &mut p.s,
            SweepParam::Alpha => &mut p.alpha,
            SweepParam::Dlambda => &mut p.dlambda,
            SweepParam::DlambdaDs => &mut p.dlambda_ds,
        };
        *slot = value;
        p
    }

    fn opinions(&self, regime: Regime) -> Vec<f64> {
        let mut x = vec![self.x; self.n];
        if regime == Regime::Case2 {
            x[1..].iter_mut().for_each(|v| *v += self.gap);
        }
        x
    }

    fn neighbors(&self) -> Vec<(usize, f64)> {
        if self.w == 0.0 {
            return Vec::new();
        }
        (1..self.n).map(|j| (j, self.w)).collect()
    }

    fn context<'a>(&self, x: &'a [f64], neighbors: &'a [(usize, f64)]) -> ControlContext<'a> {
        ControlContext {
            s: self.s,
            eps: self.eps,
            agent: 0,
            x,
            x0_i: self.x0,
            brownian: self.brownian,
            sigma: self.sigma,
            alpha: self.alpha,
            neighbors,
            stubbornness: self.k,
            kernel: self.kernel,
            dlambda: self.dlambda,
            dlambda_ds: self.dlambda_ds,
        }
    }
}

/// One row of `sensitivity.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: SweepParam,
    pub value: f64,
    pub u_star: f64,
    pub sens_closed: f64,
    pub sens_fd: f64,
    pub sign_ok: bool,
}

/// Step of the central differences in the sweep.
const SWEEP_FD_STEP: f64 = 1e-6;

/// Sign with a dead band: values within `band` of zero count as zero.
fn banded_sign(v: f64, band: f64) -> i8 {
    if v > band {
        1
    } else if v < -band {
        -1
    } else {
        0
    }
}

/// Tabulates `u*`, the closed-form sensitivity and a central finite
/// difference of the optimal control over the sweep grid. In case 1 the
/// whole population shifts together; in case 2 all neighbours shift.
pub fn sensitivity_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.values
        .iter()
        .map(|&value| {
            let p = spec.base.with(spec.param, value);
            if p.n < 2 && spec.regime == Regime::Case2 {
                return Err(Error::param("case 2 sweeps need n >= 2"));
            }
            let x = p.opinions(spec.regime);
            let nb = p.neighbors();
            let ctx = p.context(&x, &nb);
            let u_star = optimal_control(&ctx)?.chosen;
            let shifted = |h: f64| -> Result<f64> {
                let mut xs = x.clone();
                match spec.regime {
                    Regime::Case1 => xs.iter_mut().for_each(|v| *v += h),
                    Regime::Case2 => xs[1..].iter_mut().for_each(|v| *v += h),
                }
                Ok(optimal_control(&ControlContext { x: &xs, ..ctx })?.chosen)
            };
            let h = SWEEP_FD_STEP;
            let sens_fd = (shifted(h)? - shifted(-h)?) / (2.0 * h);
            let sens_closed = match spec.regime {
                Regime::Case1 => sensitivity_case1_dxi(&ctx)?,
                Regime::Case2 => sensitivity_case2_dxj(&ctx)?,
            };
            // Finite-difference noise floor relative to the control's size.
            let band = 1e-7 * (1.0 + u_star.abs());
            let sign_ok = banded_sign(sens_closed, band) == banded_sign(sens_fd, band);
            Ok(SweepRow {
                param: spec.param,
                value,
                u_star,
                sens_closed,
                sens_fd,
                sign_ok,
            })
        })
        .collect()
}

pub fn write_sweep_csv(mut out: impl Write, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(out, "param,value,u_star,sens_closed,sens_fd,sign_ok")?;
    for r in rows {
        let param = serde_json::to_value(r.param).expect("enum serializes");
        writeln!(
            out,
            "{},{},{},{},{},{}",
            param.as_str().unwrap_or_default(),
            r.value,
            r.u_star,
            r.sens_closed,
            r.sens_fd,
            r.sign_ok
        )?;
    }
    Ok(())
}

impl Scenario {
    /// Parses and validates a scenario; `origin` names the source in errors.
    pub fn parse(text: &str, origin: &str) -> Result<Scenario> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| Error::Input {
            path: origin.to_string(),
            message: format!("line {}, column {}: {e}", e.line(), e.column()),
        })?;
        scenario.validate().map_err(|(key, e)| Error::Input {
            path: origin.to_string(),
            message: match key_line(text, key) {
                Some(line) => format!("line {line}: {key}: {e}"),
                None => format!("{key}: {e}"),
            },
        })?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut scenario = Scenario::parse(&text, &path.display().to_string())?;
        if let GraphSource::Load { edges, nodes } = &mut scenario.graph {
            let base = path.parent().unwrap_or(Path::new("."));
            *edges = base.join(&*edges);
            *nodes = base.join(&*nodes);
        }
        Ok(scenario)
    }

    /// Checks that do not need the graph files; errors carry the offending key.
    fn validate(&self) -> std::result::Result<(), (&'static str, Error)> {
        let x0 = self.sim.x0.materialize();
        let cfg = self.sim_config_with(x0.clone()).map_err(|e| ("sim", e))?;
        cfg.validate().map_err(|e| ("sim", e))?;
        if let GraphSource::Generate(spec) = &self.graph {
            spec.validate().map_err(|e| ("graph", e))?;
            if spec.n != x0.len() {
                return Err((
                    "graph",
                    Error::param(format!("graph has {} agents, x0 has {}", spec.n, x0.len())),
                ));
            }
        }
        match (&self.policy, &self.multiplier) {
            (PolicySpec::Optimal, None) => {
                return Err((
                    "policy",
                    Error::param("the optimal policy requires a multiplier model"),
                ))
            }
            (PolicySpec::Constant { u }, _) if !u.is_finite() => {
                return Err(("policy", Error::param("constant control must be finite")))
            }
            _ => {}
        }
        if let Some(m) = &self.multiplier {
            m.validate().map_err(|e| ("multiplier", e))?;
        }
        let out = &self.outputs;
        if let Some(t) = out
            .kde_times
            .iter()
            .find(|t| !(0.0..=cfg.horizon).contains(*t))
        {
            return Err((
                "kde_times",
                Error::param(format!(
                    "snapshot time {t} lies outside [0, {}]",
                    cfg.horizon
                )),
            ));
        }
        if !(out.kde_grid.lo < out.kde_grid.hi && out.kde_grid.points >= 2) {
            return Err((
                "kde_grid",
                Error::param("grid needs lo < hi and >= 2 points"),
            ));
        }
        if let Some(h) = out.kde_bandwidth {
            if !(h > 0.0 && h.is_finite()) {
                return Err((
                    "kde_bandwidth",
                    Error::param(format!("bandwidth must be > 0, got {h}")),
                ));
            }
        }
        if out.cost_paths == 0 {
            return Err(("cost_paths", Error::param("cost_paths must be >= 1")));
        }
        if let Some(p) = &out.picard {
            if p.tol.is_nan() || p.tol <= 0.0 || p.max_iter == 0 {
                return Err((
                    "picard",
                    Error::param("picard needs tol > 0 and max_iter >= 1"),
                ));
            }
        }
        if let Some(sw) = &out.sensitivity {
            if sw.values.is_empty() {
                return Err(("sensitivity", Error::param("sweep grid is empty")));
            }
            if sw.base.n == 0 {
                return Err(("sensitivity", Error::param("sweep base needs n >= 1")));
            }
        }
        Ok(())
    }

    fn sim_config_with(&self, x0: Vec<f64>) -> Result<SimConfig> {
        let n = x0.len();
        let sigma = match &self.sim.sigma {
            Sigma::Common(s) => vec![*s; n],
            Sigma::PerAgent(v) => v.clone(),
        };
        Ok(SimConfig {
            horizon: self.sim.horizon,
            eps: self.sim.eps,
            sigma,
            alpha: self.sim.alpha.clone(),
            kernel: self.sim.kernel,
            x0,
            seed: self.sim.seed,
            clamp: self.sim.clamp,
        })
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        self.sim_config_with(self.sim.x0.materialize())
    }

    pub fn build_graph(&self) -> Result<Graph> {
        match &self.graph {
            GraphSource::Generate(spec) => spec.build(),
            GraphSource::Load { edges, nodes } => Graph::load_csv(edges, nodes),
        }
    }
}

/// First line (1-based) on which `"key"` appears.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}

/// One written artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct ArtifactSummary {
    pub file: String,
    pub detail: String,
}

impl std::fmt::Display for ArtifactSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.file, self.detail)
    }
}

#[derive(Serialize)]
struct PicardOutput<'a> {
    iterations: usize,
    converged: bool,
    tol: f64,
    distances: &'a [f64],
    sup_distances: &'a [f64],
}

#[derive(Serialize)]
struct CostsOutput<'a> {
    scenario: &'a str,
    seed: u64,
    agents: &'a [CostReport],
}

/// Runs a validated scenario and writes the requested artifacts into `out`.
pub fn run(scenario: &Scenario, out: &Path) -> Result<Vec<ArtifactSummary>> {
    let cfg = scenario.sim_config()?;
    let graph = scenario.build_graph()?;
    if graph.n() != cfg.n() {
        return Err(Error::param(format!(
            "graph has {} agents, x0 has {}",
            graph.n(),
            cfg.n()
        )));
    }
    let optimal = scenario.multiplier.clone().map(OptimalPolicy::new);
    let policy: &dyn Policy = match (&scenario.policy, &optimal) {
        (PolicySpec::Zero, _) => &ZeroPolicy,
        (PolicySpec::Constant { u }, _) => &ConstantPolicy(*u),
        (PolicySpec::Optimal, Some(p)) => p,
        (PolicySpec::Optimal, None) => {
            return Err(Error::param(
                "the optimal policy requires a multiplier model",
            ))
        }
    };
    let outputs = &scenario.outputs;

    // Simulate everything first so a numerical failure leaves no partial output.
    let traj = simulate(&cfg, &graph, policy)?;
    let control_log = match (&scenario.policy, &optimal) {
        (PolicySpec::Optimal, Some(p)) if outputs.controls => {
            Some(control_log(&traj, &cfg, &graph, p)?)
        }
        _ => None,
    };
    let costs = if outputs.costs {
        let mut paths = vec![traj.clone()];
        for p in 1..outputs.cost_paths {
            let mut run = cfg.clone();
            run.seed = cfg.seed.wrapping_add(p as u64);
            paths.push(simulate(&run, &graph, policy)?);
        }
        Some(
            (0..graph.n())
                .map(|i| total_cost(&paths, &graph, i))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let picard = match &outputs.picard {
        Some(spec) => Some((
            spec,
            picard_law_iteration(&cfg, &graph, policy, spec.tol, spec.max_iter)?,
        )),
        None => None,
    };
    let sweep = outputs
        .sensitivity
        .as_ref()
        .map(sensitivity_sweep)
        .transpose()?;

    std::fs::create_dir_all(out)?;
    let mut written = Vec::new();
    if outputs.trajectories {
        write_file(out, "trajectories.csv", |w| traj.write_csv(w))?;
        written.push(ArtifactSummary {
            file: "trajectories.csv".into(),
            detail: format!(
                "{} agents x {} times, {} out-of-range updates",
                traj.n(),
                traj.len(),
                traj.out_of_range
            ),
        });
    }
    if let Some(log) = &control_log {
        let degenerate = log.iter().filter(|r| r.solution.degenerate).count();
        write_json(out, "controls.json", &serde_json::json!({ "records": log }))?;
        written.push(ArtifactSummary {
            file: "controls.json".into(),
            detail: format!("{} solutions, {degenerate} degenerate", log.len()),
        });
    }
    if let Some(costs) = &costs {
        let mean = costs.iter().map(|c| c.total).sum::<f64>() / costs.len() as f64;
        write_json(
            out,
            "costs.json",
            &CostsOutput {
                scenario: &scenario.name,
                seed: cfg.seed,
                agents: costs,
            },
        )?;
        written.push(ArtifactSummary {
            file: "costs.json".into(),
            detail: format!(
                "{} agents over {} paths, mean cost {mean:.6e}",
                costs.len(),
                outputs.cost_paths
            ),
        });
    }
    let grid = linspace(
        outputs.kde_grid.lo,
        outputs.kde_grid.hi,
        outputs.kde_grid.points,
    );
    for &t in &outputs.kde_times {
        let samples = &traj.opinions[traj.index_at(t)];
        let h = outputs
            .kde_bandwidth
            .unwrap_or_else(|| silverman_bandwidth(samples));
        let dens = kde(samples, h, &grid)?;
        let name = format!("kde_{t}.csv");
        write_file(out, &name, |w| write_kde_csv(w, t, &grid, &dens))?;
        written.push(ArtifactSummary {
            file: name,
            detail: format!("{} grid points, bandwidth {h:.4e}", grid.len()),
        });
    }
    if let Some((spec, rep)) = &picard {
        write_json(
            out,
            "picard.json",
            &PicardOutput {
                iterations: rep.distances.len(),
                converged: rep.converged,
                tol: spec.tol,
                distances: &rep.distances,
                sup_distances: &rep.sup_distances,
            },
        )?;
        written.push(ArtifactSummary {
            file: "picard.json".into(),
            detail: format!(
                "{} iterations, converged={}, last W2 {:.3e}",
                rep.distances.len(),
                rep.converged,
                rep.distances.last().copied().unwrap_or(0.0)
            ),
        });
    }
    if let Some(rows) = &sweep {
        write_file(out, "sensitivity.csv", |w| write_sweep_csv(w, rows))?;
        let ok = rows.iter().filter(|r| r.sign_ok).count();
        written.push(ArtifactSummary {
            file: "sensitivity.csv".into(),
            detail: format!("{} rows, {ok} with matching signs", rows.len()),
        });
    }
    Ok(written)
}

fn control_log(
    traj: &Trajectory,
    cfg: &SimConfig,
    graph: &Graph,
    policy: &OptimalPolicy,
) -> Result<Vec<ControlRecord>> {
    let mut log = Vec::with_capacity(traj.len() * traj.n());
    for k in 0..traj.len() {
        let state = StepState {
            step: k,
            time: traj.times[k],
            opinions: &traj.opinions[k],
            brownian: &traj.brownian[k],
            config: cfg,
            graph,
        };
        for agent in 0..traj.n() {
            let solution = policy.solve(&state, agent).map_err(|e| Error::Policy {
                step: k,
                agent,
                source: Box::new(e),
            })?;
            log.push(ControlRecord {
                step: k,
                time: traj.times[k],
                agent,
                solution,
            });
        }
    }
    Ok(log)
}

#[derive(Serialize)]
struct ControlRecord {
    step: usize,
    time: f64,
    agent: usize,
    #[serde(flatten)]
    solution: ControlSolution,
}

fn write_file(
    dir: &Path,
    name: &str,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(dir.join(name))?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<()> {
    write_file(dir, name, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

/// Process exit status for an error: 2 for bad input, 3 for numerical
/// failures, 1 for I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 1,
        e if e.is_numerical() => 3,
        _ => 2,
    }
}
