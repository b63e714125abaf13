//! Euler–Maruyama integration of the controlled particle system
//!
//! ```text
//! dx_i = [-a(s) x_i - a(s) F_i(x) + x_i u_i^2] ds + sigma_i x_i dB_i
//! F_i(x) = (1/n) sum_j phi(x_i - x_j) (x_i - x_j)
//! ```
//!
//! All agents are advanced simultaneously from the pre-step state.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::running_cost;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kernel::KernelParams;
use crate::measure::{wasserstein2_1d, EmpiricalMeasure};
use crate::noise::BrownianSource;

/// Decay schedule `a(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alpha {
    Constant(f64),
    /// `(time, value)` breakpoints, linearly interpolated and held constant
    /// outside the table.
    Table(Vec<(f64, f64)>),
}

impl Alpha {
    pub fn at(&self, s: f64) -> f64 {
        match self {
            Alpha::Constant(a) => *a,
            Alpha::Table(points) => interpolate(points, s),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Alpha::Constant(a) if a.is_finite() => Ok(()),
            Alpha::Constant(a) => Err(Error::param(format!("alpha must be finite, got {a}"))),
            Alpha::Table(points) => validate_table("alpha", points),
        }
    }
}

pub(crate) fn validate_table(name: &str, points: &[(f64, f64)]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::param(format!("{name} table is empty")));
    }
    if points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
        return Err(Error::param(format!(
            "{name} table holds non-finite values"
        )));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::param(format!(
            "{name} table times must be strictly increasing"
        )));
    }
    Ok(())
}

pub(crate) fn interpolate(points: &[(f64, f64)], s: f64) -> f64 {
    let first = points[0];
    let last = points[points.len() - 1];
    if s <= first.0 {
        return first.1;
    }
    if s >= last.0 {
        return last.1;
    }
    let hi = points.partition_point(|&(t, _)| t <= s);
    let (t0, v0) = points[hi - 1];
    let (t1, v1) = points[hi];
    v0 + (v1 - v0) * (s - t0) / (t1 - t0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Horizon `t`.
    pub horizon: f64,
    /// Step `eps`; `horizon / eps` must be an integer.
    pub eps: f64,
    /// Per-agent diffusion `sigma_i`.
    pub sigma: Vec<f64>,
    pub alpha: Alpha,
    pub kernel: KernelParams,
    pub x0: Vec<f64>,
    pub seed: u64,
    /// Project opinions onto `[0, 1]` after every step.
    pub clamp: bool,
}

impl SimConfig {
    /// Noise-free, non-interacting configuration with `alpha = 1`.
    pub fn new(x0: Vec<f64>, horizon: f64, eps: f64) -> Self {
        let n = x0.len();
        SimConfig {
            horizon,
            eps,
            sigma: vec![0.0; n],
            alpha: Alpha::Constant(1.0),
            kernel: KernelParams {
                theta1: 0.0,
                theta2: 0.0,
            },
            x0,
            seed: 0,
            clamp: false,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = vec![sigma; self.x0.len()];
        self
    }

    pub fn with_alpha(mut self, alpha: Alpha) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_kernel(mut self, kernel: KernelParams) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n(&self) -> usize {
        self.x0.len()
    }

    /// Number of Euler steps `K`; the grid is `s_k = k eps` for `k = 0..=K`.
    pub fn steps(&self) -> usize {
        (self.horizon / self.eps).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::param("x0 must hold at least one opinion"));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::param(format!(
                "horizon must be > 0, got {}",
                self.horizon
            )));
        }
        if !(self.eps.is_finite() && self.eps > 0.0 && self.eps <= self.horizon) {
            return Err(Error::param(format!(
                "eps must lie in (0, horizon], got {}",
                self.eps
            )));
        }
        let ratio = self.horizon / self.eps;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::param(format!(
                "horizon {} is not an integer multiple of eps {}",
                self.horizon, self.eps
            )));
        }
        if self.sigma.len() != n {
            return Err(Error::param(format!(
                "sigma has {} entries, expected {n}",
                self.sigma.len()
            )));
        }
        if let Some(s) = self.sigma.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::param(format!(
                "sigma must be finite and >= 0, got {s}"
            )));
        }
        if let Some(x) = self.x0.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::param(format!(
                "initial opinions must lie in [0,1], got {x}"
            )));
        }
        self.alpha.validate()?;
        self.kernel.validate()
    }
}

/// Everything a feedback policy may observe at one grid time.
#[derive(Debug, Clone, Copy)]
pub struct StepState<'a> {
    pub step: usize,
    pub time: f64,
    pub opinions: &'a [f64],
    pub brownian: &'a [f64],
    pub config: &'a SimConfig,
    pub graph: &'a Graph,
}

/// Closed-loop control law evaluated per agent at each grid time.
pub trait Policy: Sync {
    fn control(&self, state: &StepState<'_>, agent: usize) -> Result<f64>;
}

impl<F> Policy for F
where
    F: Fn(&StepState<'_>, usize) -> Result<f64> + Sync,
{
    fn control(&self, state: &StepState<'_>, agent: usize) -> Result<f64> {
        self(state, agent)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPolicy;

impl Policy for ZeroPolicy {
    fn control(&self, _: &StepState<'_>, _: usize) -> Result<f64> {
        Ok(0.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantPolicy(pub f64);

impl Policy for ConstantPolicy {
    fn control(&self, _: &StepState<'_>, _: usize) -> Result<f64> {
        Ok(self.0)
    }
}

/// Time-indexed record of a simulation. Matrices are stored time-major:
/// `opinions[k][i]` is agent `i` at grid time `s_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub opinions: Vec<Vec<f64>>,
    pub controls: Vec<Vec<f64>>,
    pub brownian: Vec<Vec<f64>>,
    pub step_costs: Vec<Vec<f64>>,
    /// Updates whose unclamped result left `[0, 1]`.
    pub out_of_range: usize,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.opinions.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn terminal(&self) -> &[f64] {
        self.opinions.last().map_or(&[], Vec::as_slice)
    }

    pub fn agent_path(&self, i: usize) -> Vec<f64> {
        self.opinions.iter().map(|row| row[i]).collect()
    }

    /// Grid index closest to time `s`.
    pub fn index_at(&self, s: f64) -> usize {
        let dt = if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            1.0
        };
        ((s / dt).round() as usize).min(self.times.len().saturating_sub(1))
    }

    /// `step,time,agent,opinion,control,brownian,step_cost`, step-major.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "step,time,agent,opinion,control,brownian,step_cost")?;
        for (k, &time) in self.times.iter().enumerate() {
            for i in 0..self.n() {
                writeln!(
                    out,
                    "{k},{time},{i},{},{},{},{}",
                    self.opinions[k][i],
                    self.controls[k][i],
                    self.brownian[k][i],
                    self.step_costs[k][i]
                )?;
            }
        }
        Ok(())
    }
}

/// `exp(-sigma B(s) + sigma^2 s / 2)`.
#[inline]
pub fn integrating_factor(sigma: f64, brownian: f64, s: f64) -> f64 {
    (-sigma * brownian + 0.5 * sigma * sigma * s).exp()
}

/// One Euler–Maruyama step of the coupled system at time `s`.
pub fn step(x: &[f64], u: &[f64], cfg: &SimConfig, s: f64, dw: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if u.len() != n || dw.len() != n || cfg.sigma.len() != n {
        return Err(Error::param(format!(
            "shape mismatch: x={n}, u={}, dW={}, sigma={}",
            u.len(),
            dw.len(),
            cfg.sigma.len()
        )));
    }
    let mut next = advance(x, u, cfg, s, dw, x);
    if cfg.clamp {
        next.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
    }
    Ok(next)
}

/// Unclamped update of every agent against the population `law`.
fn advance(x: &[f64], u: &[f64], cfg: &SimConfig, s: f64, dw: &[f64], law: &[f64]) -> Vec<f64> {
    let alpha = cfg.alpha.at(s);
    let eps = cfg.eps;
    x.par_iter()
        .enumerate()
        .map(|(i, &xi)| {
            let drift = -alpha * xi - alpha * cfg.kernel.interaction(xi, law) + xi * u[i] * u[i];
            xi + drift * eps + cfg.sigma[i] * xi * dw[i]
        })
        .collect()
}

/// Integrates the coupled system over `[0, horizon]` under a feedback policy.
pub fn simulate(cfg: &SimConfig, graph: &Graph, policy: &dyn Policy) -> Result<Trajectory> {
    integrate(cfg, graph, policy, None)
}

/// Integration against either the live population or a frozen opinion
/// history (`frozen[k]` is the law used during step `k`).
fn integrate(
    cfg: &SimConfig,
    graph: &Graph,
    policy: &dyn Policy,
    frozen: Option<&[Vec<f64>]>,
) -> Result<Trajectory> {
    cfg.validate()?;
    let n = cfg.n();
    if graph.n() != n {
        return Err(Error::param(format!(
            "graph has {} agents, config has {n}",
            graph.n()
        )));
    }
    let steps = cfg.steps();
    let mut noise = BrownianSource::new(cfg.seed, n, cfg.eps);
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        opinions: Vec::with_capacity(steps + 1),
        controls: Vec::with_capacity(steps + 1),
        brownian: Vec::with_capacity(steps + 1),
        step_costs: Vec::with_capacity(steps + 1),
        out_of_range: 0,
    };
    let mut x = cfg.x0.clone();
    let mut b = vec![0.0; n];
    for k in 0..=steps {
        let s = k as f64 * cfg.eps;
        let state = StepState {
            step: k,
            time: s,
            opinions: &x,
            brownian: &b,
            config: cfg,
            graph,
        };
        let u = evaluate_policy(policy, &state)?;
        let costs: Vec<f64> = (0..n)
            .map(|i| running_cost(graph, &x, &cfg.x0, &u, i))
            .collect();
        if k < steps {
            let dw = noise.next_increments();
            let law = frozen.map_or(x.as_slice(), |f| f[k].as_slice());
            let mut next = advance(&x, &u, cfg, s, &dw, law);
            traj.out_of_range += next.iter().filter(|v| !(0.0..=1.0).contains(*v)).count();
            if cfg.clamp {
                next.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
            }
            let next_b: Vec<f64> = b.iter().zip(&dw).map(|(b, d)| b + d).collect();
            traj.push(
                s,
                std::mem::replace(&mut x, next),
                u,
                std::mem::replace(&mut b, next_b),
                costs,
            );
        } else {
            traj.push(s, std::mem::take(&mut x), u, std::mem::take(&mut b), costs);
        }
    }
    Ok(traj)
}

impl Trajectory {
    fn push(&mut self, s: f64, x: Vec<f64>, u: Vec<f64>, b: Vec<f64>, costs: Vec<f64>) {
        self.times.push(s);
        self.opinions.push(x);
        self.controls.push(u);
        self.brownian.push(b);
        self.step_costs.push(costs);
    }
}

fn evaluate_policy(policy: &dyn Policy, state: &StepState<'_>) -> Result<Vec<f64>> {
    let results: Vec<Result<f64>> = (0..state.opinions.len())
        .into_par_iter()
        .map(|i| policy.control(state, i))
        .collect();
    results
        .into_iter()
        .enumerate()
        .map(|(agent, r)| {
            r.map_err(|e| match e {
                e @ Error::Policy { .. } => e,
                other => Error::Policy {
                    step: state.step,
                    agent,
                    source: Box::new(other),
                },
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct PicardReport {
    /// Trajectory from the last application of the law map.
    pub trajectory: Trajectory,
    /// Terminal-time W2 between successive iterates.
    pub distances: Vec<f64>,
    /// Largest W2 over the time grid between successive iterates.
    pub sup_distances: Vec<f64>,
    pub converged: bool,
}

/// Fixed-point iteration on the law at particle resolution.
///
/// Each application of the map re-simulates every agent against the
/// opinion history of the previous iterate, with identical Brownian paths,
/// so successive iterates differ only through the law update. The first
/// iterate is driven by the law frozen at `x0`. Stops once the terminal W2
/// distance drops below `tol` or after `max_iter` recorded distances.
pub fn picard_law_iteration(
    cfg: &SimConfig,
    graph: &Graph,
    policy: &dyn Policy,
    tol: f64,
    max_iter: usize,
) -> Result<PicardReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param(format!("tol must be > 0, got {tol}")));
    }
    cfg.validate()?;
    let initial_law = vec![cfg.x0.clone(); cfg.steps() + 1];
    let mut current = integrate(cfg, graph, policy, Some(&initial_law))?;
    let mut distances = Vec::new();
    let mut sup_distances = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter {
        let next = integrate(cfg, graph, policy, Some(&current.opinions))?;
        let terminal = law_distance(current.terminal(), next.terminal())?;
        let mut sup = 0.0f64;
        for (a, b) in current.opinions.iter().zip(&next.opinions) {
            sup = sup.max(law_distance(a, b)?);
        }
        distances.push(terminal);
        sup_distances.push(sup);
        current = next;
        if terminal < tol {
            converged = true;
            break;
        }
    }
    Ok(PicardReport {
        trajectory: current,
        distances,
        sup_distances,
        converged,
    })
}

fn law_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    wasserstein2_1d(
        &EmpiricalMeasure::new(a.to_vec())?,
        &EmpiricalMeasure::new(b.to_vec())?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn no_edges(n: usize) -> Graph {
        Graph::empty(n, 0.0).unwrap()
    }

    #[test]
    fn step_examples() {
        let cfg = SimConfig::new(vec![0.3, 0.7], 1.0, 0.1).with_alpha(Alpha::Constant(0.0));
        let x = step(&[0.3, 0.7], &[0.0, 0.0], &cfg, 0.0, &[0.5, -0.2]).unwrap();
        assert_eq!(x, vec![0.3, 0.7]);

        let cfg = SimConfig::new(vec![0.8], 1.0, 0.1);
        let x = step(&[0.8], &[0.0], &cfg, 0.0, &[0.0]).unwrap();
        assert!((x[0] - 0.72).abs() < 1e-15);

        let cfg = SimConfig::new(vec![0.4], 1.0, 0.1).with_alpha(Alpha::Constant(0.0));
        let x = step(&[0.4], &[0.5], &cfg, 0.0, &[0.0]).unwrap();
        assert!((x[0] - 0.41).abs() < 1e-15);
    }

    #[test]
    fn step_rejects_shape_mismatch() {
        let cfg = SimConfig::new(vec![0.4, 0.5], 1.0, 0.1);
        assert!(step(&[0.4, 0.5], &[0.0], &cfg, 0.0, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn step_clamps_when_asked() {
        let mut cfg = SimConfig::new(vec![0.9], 1.0, 0.1).with_alpha(Alpha::Constant(0.0));
        cfg.clamp = true;
        let x = step(&[0.9], &[5.0], &cfg, 0.0, &[0.0]).unwrap();
        assert_eq!(x, vec![1.0]);
    }

    #[test]
    fn integrating_factor_examples() {
        assert_eq!(integrating_factor(0.0, 3.0, 2.0), 1.0);
        assert!((integrating_factor(1.0, 0.0, 2.0) - std::f64::consts::E).abs() < 1e-15);
        assert!((integrating_factor(0.5, 1.2, 1.0) - 0.621_885_056_465_020_1).abs() < 1e-15);
    }

    #[test]
    fn alpha_table_interpolates() {
        let a = Alpha::Table(vec![(0.0, 1.0), (1.0, 3.0), (2.0, 3.0)]);
        assert_eq!(a.at(-1.0), 1.0);
        assert_eq!(a.at(0.5), 2.0);
        assert_eq!(a.at(1.5), 3.0);
        assert_eq!(a.at(9.0), 3.0);
        assert!(Alpha::Table(vec![(1.0, 0.0), (1.0, 1.0)])
            .validate()
            .is_err());
        assert!(Alpha::Table(vec![]).validate().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(vec![0.5], 1.0, 0.1).validate().is_ok());
        assert!(SimConfig::new(vec![1.5], 1.0, 0.1).validate().is_err());
        assert!(SimConfig::new(vec![0.5], 1.0, 2.0).validate().is_err());
        assert!(SimConfig::new(vec![0.5], 1.0, 0.3).validate().is_err());
        assert!(SimConfig::new(vec![], 1.0, 0.1).validate().is_err());
        assert!(SimConfig::new(vec![0.5], 1.0, 0.1)
            .with_sigma(-1.0)
            .validate()
            .is_err());
    }

    #[test]
    fn frozen_dynamics_stay_constant() {
        let cfg = SimConfig::new(vec![0.2, 0.6, 0.9], 1.0, 0.1)
            .with_alpha(Alpha::Constant(0.0))
            .with_kernel(KernelParams::new(0.0, 0.0).unwrap());
        let traj = simulate(&cfg, &no_edges(3), &ZeroPolicy).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.opinions.iter().all(|row| row == &cfg.x0));
        assert!(traj
            .controls
            .iter()
            .all(|row| row.iter().all(|&u| u == 0.0)));
    }

    #[test]
    fn brownian_increments_are_stored_exactly() {
        let cfg = SimConfig::new(vec![0.5; 4], 1.0, 0.05)
            .with_sigma(0.3)
            .with_seed(17);
        let traj = simulate(&cfg, &no_edges(4), &ZeroPolicy).unwrap();
        let mut src = BrownianSource::new(17, 4, 0.05);
        assert!(traj.brownian[0].iter().all(|&b| b == 0.0));
        for k in 0..cfg.steps() {
            let dw = src.next_increments();
            for i in 0..4 {
                assert_eq!(traj.brownian[k + 1][i], traj.brownian[k][i] + dw[i]);
            }
        }
    }

    #[test]
    fn zero_noise_ignores_seed() {
        let base = SimConfig::new(vec![0.1, 0.5, 0.9], 1.0, 0.01)
            .with_kernel(KernelParams::new(2.0, 0.3).unwrap());
        let a = simulate(&base.clone().with_seed(1), &no_edges(3), &ZeroPolicy).unwrap();
        let b = simulate(&base.with_seed(99), &no_edges(3), &ZeroPolicy).unwrap();
        assert_eq!(a.opinions, b.opinions);
        assert_ne!(a.brownian, b.brownian);
    }

    #[test]
    fn policy_errors_carry_step_and_agent() {
        let cfg = SimConfig::new(vec![0.1, 0.5], 1.0, 0.1);
        let failing = |st: &StepState<'_>, i: usize| {
            if st.step == 3 && i == 1 {
                Err(Error::Domain("boom".into()))
            } else {
                Ok(0.0)
            }
        };
        match simulate(&cfg, &no_edges(2), &failing) {
            Err(Error::Policy {
                step: 3, agent: 1, ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_updates_are_counted() {
        let cfg = SimConfig::new(vec![0.9], 1.0, 0.1).with_alpha(Alpha::Constant(0.0));
        let traj = simulate(&cfg, &no_edges(1), &ConstantPolicy(2.0)).unwrap();
        assert!(traj.out_of_range > 0);
        assert!(traj.terminal()[0] > 1.0);
    }

    #[test]
    fn picard_without_interaction_converges_immediately() {
        let cfg = SimConfig::new(vec![0.1, 0.4, 0.8], 1.0, 0.1)
            .with_sigma(0.2)
            .with_seed(5);
        let rep = picard_law_iteration(&cfg, &no_edges(3), &ZeroPolicy, 1e-9, 10).unwrap();
        assert_eq!(rep.distances, vec![0.0]);
        assert!(rep.converged);
    }

    #[test]
    fn picard_reports_budget_exhaustion() {
        let x0: Vec<f64> = (0..20).map(|i| i as f64 / 20.0).collect();
        let cfg = SimConfig::new(x0, 1.0, 0.05).with_kernel(KernelParams::new(2.0, 0.2).unwrap());
        let rep = picard_law_iteration(&cfg, &no_edges(20), &ZeroPolicy, 1e-6, 1).unwrap();
        assert_eq!(rep.distances.len(), 1);
        assert!(!rep.converged);
        assert!(picard_law_iteration(&cfg, &no_edges(20), &ZeroPolicy, 0.0, 1).is_err());
    }

    #[test]
    fn picard_fixed_point_matches_coupled_simulation() {
        let x0: Vec<f64> = (0..15).map(|i| (i as f64 * 0.37).fract()).collect();
        let cfg = SimConfig::new(x0, 0.5, 0.05)
            .with_kernel(KernelParams::new(1.0, 0.3).unwrap())
            .with_sigma(0.1)
            .with_seed(8);
        let g = no_edges(15);
        let rep = picard_law_iteration(&cfg, &g, &ZeroPolicy, 1e-13, 40).unwrap();
        assert!(rep.converged);
        let coupled = simulate(&cfg, &g, &ZeroPolicy).unwrap();
        for (a, b) in rep.trajectory.terminal().iter().zip(coupled.terminal()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn clamped_opinions_stay_in_unit_interval(
            x0 in proptest::collection::vec(0.0f64..=1.0, 1..8),
            sigma in 0.0f64..2.0,
            u in 0.0f64..3.0,
            alpha in -2.0f64..2.0,
            t1 in 0.0f64..5.0,
            seed in any::<u64>(),
        ) {
            let n = x0.len();
            let mut cfg = SimConfig::new(x0, 1.0, 0.05)
                .with_sigma(sigma)
                .with_alpha(Alpha::Constant(alpha))
                .with_kernel(KernelParams::new(t1, 0.2).unwrap())
                .with_seed(seed);
            cfg.clamp = true;
            let traj = simulate(&cfg, &no_edges(n), &ConstantPolicy(u)).unwrap();
            for row in &traj.opinions {
                for &v in row {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }
}
