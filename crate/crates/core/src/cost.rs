//! Running cost, its Monte Carlo expectation, and the directional derivative
//! of an agent's cost in its own control.
//!
//! ```text
//! J_i(u) = E int_0^t 1/2 [ sum_j w_ij (x_i - x_j)^2 + k_i (x_i - x_i(0))^2 + u_i^2 ] ds
//! ```

use std::ops::Range;

use serde::Serialize;

use crate::dynamics::{simulate, SimConfig, StepState, Trajectory};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Instantaneous cost of agent `i`.
pub fn running_cost(graph: &Graph, x: &[f64], x0: &[f64], u: &[f64], i: usize) -> f64 {
    let row = graph.row(i);
    let xi = x[i];
    let disagreement: f64 = row
        .neighbors
        .iter()
        .map(|&(j, w)| w * (xi - x[j]).powi(2))
        .sum();
    0.5 * (disagreement + row.stubbornness * (xi - x0[i]).powi(2) + u[i] * u[i])
}

/// Path-averaged cost of one agent, split into its three parts. Each part
/// already carries the factor 1/2, so `total` is their sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub agent: usize,
    pub total: f64,
    pub disagreement: f64,
    pub stubbornness: f64,
    pub effort: f64,
    pub paths: usize,
    /// Standard error of `total` across paths (0 for a single path).
    pub std_error: f64,
}

/// Left-Riemann estimate of `J_i` averaged over independent trajectories.
pub fn total_cost(trajectories: &[Trajectory], graph: &Graph, agent: usize) -> Result<CostReport> {
    if trajectories.is_empty() {
        return Err(Error::param("cost needs at least one trajectory"));
    }
    if agent >= graph.n() {
        return Err(Error::param(format!(
            "agent {agent} out of range for n={}",
            graph.n()
        )));
    }
    let row = graph.row(agent);
    let mut per_path = Vec::with_capacity(trajectories.len());
    let (mut dis, mut stub, mut eff) = (0.0, 0.0, 0.0);
    for traj in trajectories {
        if traj.n() != graph.n() || traj.len() < 2 {
            return Err(Error::param(
                "trajectory does not match the graph or has no steps",
            ));
        }
        let x0 = &traj.opinions[0];
        let (mut d, mut s, mut e) = (0.0, 0.0, 0.0);
        for k in 0..traj.len() - 1 {
            let dt = traj.times[k + 1] - traj.times[k];
            let x = &traj.opinions[k];
            let xi = x[agent];
            let u = traj.controls[k][agent];
            d += 0.5
                * dt
                * row
                    .neighbors
                    .iter()
                    .map(|&(j, w)| w * (xi - x[j]).powi(2))
                    .sum::<f64>();
            s += 0.5 * dt * row.stubbornness * (xi - x0[agent]).powi(2);
            e += 0.5 * dt * u * u;
        }
        dis += d;
        stub += s;
        eff += e;
        per_path.push(d + s + e);
    }
    let m = trajectories.len() as f64;
    Ok(CostReport {
        agent,
        total: per_path.iter().sum::<f64>() / m,
        disagreement: dis / m,
        stubbornness: stub / m,
        effort: eff / m,
        paths: trajectories.len(),
        std_error: crate::measure::std_dev(&per_path) / m.sqrt(),
    })
}

/// Analytic and finite-difference directional derivatives of the windowed
/// cost of one agent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateauxEstimate {
    pub analytic: f64,
    pub finite_difference: f64,
    pub delta: f64,
    pub paths: usize,
}

impl GateauxEstimate {
    pub fn relative_error(&self) -> f64 {
        (self.analytic - self.finite_difference).abs()
            / self.finite_difference.abs().max(f64::MIN_POSITIVE)
    }
}

/// Perturbation size of the central difference.
pub const GATEAUX_DELTA: f64 = 1e-4;

/// Directional derivative of agent `agent`'s cost accumulated over the steps
/// in `window` when its open-loop control `u` moves in direction `v`.
///
/// Every other agent follows its baseline path (zero control) and is held
/// fixed while the agent's own path responds, both in the cost and in the
/// interaction term. The analytic value propagates the first variation
///
/// ```text
/// V' = V + (mu_x V + 2 x u v) eps + sigma V dW,    V = 0 at the window start
/// mu_x = -a - a (1/n) sum_j [phi'(b) b + phi(b)] + u^2
/// ```
///
/// and sums `[V (sum_j w_ij (x_i - x_j) + k (x_i - x_i(0))) + u v] eps`. The
/// finite difference uses the same Brownian paths on both sides.
pub fn gateaux_derivative(
    cfg: &SimConfig,
    graph: &Graph,
    agent: usize,
    u: &[f64],
    v: &[f64],
    window: Range<usize>,
    paths: usize,
) -> Result<GateauxEstimate> {
    cfg.validate()?;
    let steps = cfg.steps();
    if agent >= cfg.n() {
        return Err(Error::param(format!(
            "agent {agent} out of range for n={}",
            cfg.n()
        )));
    }
    if u.len() != steps + 1 || v.len() != steps + 1 {
        return Err(Error::param(format!(
            "control paths need {} entries",
            steps + 1
        )));
    }
    if window.start >= window.end || window.end > steps {
        return Err(Error::param(format!(
            "window {window:?} must be a nonempty range inside 0..{steps}"
        )));
    }
    if paths == 0 {
        return Err(Error::param("paths must be >= 1"));
    }
    let policy = |st: &StepState<'_>, i: usize| Ok(if i == agent { u[st.step] } else { 0.0 });
    let mut analytic = 0.0;
    let mut fd = 0.0;
    let delta = GATEAUX_DELTA;
    for p in 0..paths {
        let mut run = cfg.clone();
        run.seed = cfg.seed.wrapping_add(p as u64);
        let base = simulate(&run, graph, &policy)?;
        let probe = AgentProbe {
            cfg: &run,
            graph,
            base: &base,
            agent,
            window: window.clone(),
        };
        analytic += probe.variation(u, v);
        let plus: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + delta * b).collect();
        let minus: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - delta * b).collect();
        fd += (probe.cost(&plus) - probe.cost(&minus)) / (2.0 * delta);
    }
    Ok(GateauxEstimate {
        analytic: analytic / paths as f64,
        finite_difference: fd / paths as f64,
        delta,
        paths,
    })
}

/// One agent re-simulated against the frozen baseline of the others.
struct AgentProbe<'a> {
    cfg: &'a SimConfig,
    graph: &'a Graph,
    base: &'a Trajectory,
    agent: usize,
    window: Range<usize>,
}

impl AgentProbe<'_> {
    fn law(&self, k: usize, xi: f64) -> Vec<f64> {
        let mut law = self.base.opinions[k].clone();
        law[self.agent] = xi;
        law
    }

    fn dw(&self, k: usize) -> f64 {
        self.base.brownian[k + 1][self.agent] - self.base.brownian[k][self.agent]
    }

    fn gap_terms(&self, k: usize, xi: f64) -> (f64, f64) {
        let row = self.graph.row(self.agent);
        let x = &self.base.opinions[k];
        let x0 = self.cfg.x0[self.agent];
        let cost = 0.5
            * (row
                .neighbors
                .iter()
                .map(|&(j, w)| w * (xi - x[j]).powi(2))
                .sum::<f64>()
                + row.stubbornness * (xi - x0).powi(2));
        let grad = row
            .neighbors
            .iter()
            .map(|&(j, w)| w * (xi - x[j]))
            .sum::<f64>()
            + row.stubbornness * (xi - x0);
        (cost, grad)
    }

    /// Agent's opinion at the window start (unaffected by the perturbation).
    fn start(&self) -> f64 {
        self.base.opinions[self.window.start][self.agent]
    }

    fn cost(&self, u: &[f64]) -> f64 {
        let cfg = self.cfg;
        let i = self.agent;
        let mut x = self.start();
        let mut total = 0.0;
        for k in self.window.clone() {
            let s = k as f64 * cfg.eps;
            total += (self.gap_terms(k, x).0 + 0.5 * u[k] * u[k]) * cfg.eps;
            let a = cfg.alpha.at(s);
            let drift = -a * x - a * cfg.kernel.interaction(x, &self.law(k, x)) + x * u[k] * u[k];
            x += drift * cfg.eps + cfg.sigma[i] * x * self.dw(k);
        }
        total
    }

    fn variation(&self, u: &[f64], v: &[f64]) -> f64 {
        let cfg = self.cfg;
        let i = self.agent;
        let mut x = self.start();
        let mut var = 0.0;
        let mut total = 0.0;
        for k in self.window.clone() {
            let s = k as f64 * cfg.eps;
            total += (var * self.gap_terms(k, x).1 + u[k] * v[k]) * cfg.eps;
            let a = cfg.alpha.at(s);
            let law = self.law(k, x);
            let mu_x = -a - a * cfg.kernel.sums(i, &law).slope + u[k] * u[k];
            let mu_u = 2.0 * x * u[k];
            let dw = self.dw(k);
            let next_var = var + (mu_x * var + mu_u * v[k]) * cfg.eps + cfg.sigma[i] * var * dw;
            let drift = -a * x - a * cfg.kernel.interaction(x, &law) + x * u[k] * u[k];
            x += drift * cfg.eps + cfg.sigma[i] * x * dw;
            var = next_var;
        }
        total
    }
}
