//! Closed-form feedback control.
//!
//! With the integrating factor `I = exp(-sigma B + sigma^2 s / 2)` as the
//! Itô test function `h = x I`, the first-order condition for agent `i`
//! reduces to a quadratic `T1 u^2 + T2 u + T3 = 0` in the agent's control:
//!
//! ```text
//! T1 = 4 exp(-2 sigma B + sigma^2 s) dl^2
//! T2 = -(1 + 2 x I dl) [ sum_j w_ij + k + I (-a K2) dl ]
//! T3 = 4 I dl [ sum_j w_ij (x - x_j) + k (x - x0) + I dl + I dl/ds + I (-a - a K1) dl ]
//! ```
//!
//! where `dl` is the multiplier increment over one step, `dl/ds` its rate and
//! `K1`, `K2` are the kernel averages of [`KernelSums`]. The admissible root
//! is the "-" branch, falling back to "+" when only that one is nonnegative.

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrating_factor, interpolate, validate_table, Policy, StepState};
use crate::error::{Error, Result};
use crate::kernel::{KernelParams, KernelSums};

/// Path of the Lagrange multiplier `lambda(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierModel {
    /// `lambda(s) = lambda0 + rate s`.
    Linear { lambda0: f64, rate: f64 },
    /// Piecewise-linear rate `d lambda / ds` through `(time, rate)` points.
    Tabulated {
        lambda0: f64,
        rates: Vec<(f64, f64)>,
    },
}

impl MultiplierModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            MultiplierModel::Linear { lambda0, rate } => {
                if lambda0.is_finite() && rate.is_finite() {
                    Ok(())
                } else {
                    Err(Error::param("multiplier parameters must be finite"))
                }
            }
            MultiplierModel::Tabulated { lambda0, rates } => {
                if !lambda0.is_finite() {
                    return Err(Error::param("lambda0 must be finite"));
                }
                validate_table("multiplier rate", rates)
            }
        }
    }

    /// `d lambda / ds` at time `s`.
    pub fn rate(&self, s: f64) -> f64 {
        match self {
            MultiplierModel::Linear { rate, .. } => *rate,
            MultiplierModel::Tabulated { rates, .. } => interpolate(rates, s),
        }
    }

    /// Multiplier increment over a step of length `eps` starting at `s`.
    pub fn increment(&self, s: f64, eps: f64) -> f64 {
        self.rate(s) * eps
    }

    pub fn lambda(&self, s: f64) -> f64 {
        match self {
            MultiplierModel::Linear { lambda0, rate } => lambda0 + rate * s,
            MultiplierModel::Tabulated { lambda0, rates } => {
                // Exact integral of the piecewise-linear rate from 0 to s.
                let integral = |a: f64, b: f64| {
                    0.5 * (b - a) * (interpolate(rates, a) + interpolate(rates, b))
                };
                let (lo, hi, sign) = if s >= 0.0 {
                    (0.0, s, 1.0)
                } else {
                    (s, 0.0, -1.0)
                };
                let mut knots = vec![lo];
                knots.extend(rates.iter().map(|&(t, _)| t).filter(|&t| t > lo && t < hi));
                knots.push(hi);
                lambda0 + sign * knots.windows(2).map(|w| integral(w[0], w[1])).sum::<f64>()
            }
        }
    }
}

/// Everything the quadratic needs at one `(agent, time)` point.
#[derive(Debug, Clone, Copy)]
pub struct ControlContext<'a> {
    pub s: f64,
    pub eps: f64,
    pub agent: usize,
    /// Opinions of all agents at time `s`.
    pub x: &'a [f64],
    pub x0_i: f64,
    pub brownian: f64,
    pub sigma: f64,
    pub alpha: f64,
    /// `(j, w_ij)` for the agent's neighbours.
    pub neighbors: &'a [(usize, f64)],
    pub stubbornness: f64,
    pub kernel: KernelParams,
    pub dlambda: f64,
    pub dlambda_ds: f64,
}

impl<'a> ControlContext<'a> {
    pub fn from_state(state: &StepState<'a>, agent: usize, multiplier: &MultiplierModel) -> Self {
        let cfg = state.config;
        let row = state.graph.row(agent);
        ControlContext {
            s: state.time,
            eps: cfg.eps,
            agent,
            x: state.opinions,
            x0_i: cfg.x0[agent],
            brownian: state.brownian[agent],
            sigma: cfg.sigma[agent],
            alpha: cfg.alpha.at(state.time),
            neighbors: row.neighbors,
            stubbornness: row.stubbornness,
            kernel: cfg.kernel,
            dlambda: multiplier.increment(state.time, cfg.eps),
            dlambda_ds: multiplier.rate(state.time),
        }
    }

    pub fn xi(&self) -> f64 {
        self.x[self.agent]
    }

    pub fn integrating_factor(&self) -> f64 {
        integrating_factor(self.sigma, self.brownian, self.s)
    }

    pub fn weight_sum(&self) -> f64 {
        self.neighbors.iter().map(|&(_, w)| w).sum()
    }

    /// `sum_j w_ij (x_i - x_j)` over neighbours.
    pub fn weighted_gap(&self) -> f64 {
        let xi = self.xi();
        self.neighbors
            .iter()
            .map(|&(j, w)| w * (xi - self.x[j]))
            .sum()
    }

    /// `sum_j w_ij (x_i - x_j)^2` over neighbours.
    pub fn weighted_disagreement(&self) -> f64 {
        let xi = self.xi();
        self.neighbors
            .iter()
            .map(|&(j, w)| w * (xi - self.x[j]).powi(2))
            .sum()
    }

    pub fn kernel_sums(&self) -> KernelSums {
        self.kernel.sums(self.agent, self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "T3")]
    pub t3: f64,
}

impl Coefficients {
    pub fn scale(&self) -> f64 {
        self.t1.abs() + self.t2.abs() + self.t3.abs()
    }

    pub fn discriminant(&self) -> f64 {
        self.t2 * self.t2 - 4.0 * self.t1 * self.t3
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.t1 * u + self.t2) * u + self.t3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `(-T2 - sqrt(D)) / 2 T1`.
    Minus,
    /// `(-T2 + sqrt(D)) / 2 T1`, taken when only it is nonnegative.
    Plus,
    /// Both roots negative; control held at zero.
    Clamped,
    /// `T1` negligible; root of `T2 u + T3 = 0`.
    Linear,
    /// `T1` and `T2` negligible; control held at zero.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSolution {
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "T3")]
    pub t3: f64,
    pub discriminant: f64,
    /// Real roots, "-" branch first.
    pub roots: Vec<f64>,
    pub chosen: f64,
    pub branch: Branch,
    pub degenerate: bool,
}

impl ControlSolution {
    pub fn coefficients(&self) -> Coefficients {
        Coefficients {
            t1: self.t1,
            t2: self.t2,
            t3: self.t3,
        }
    }
}

pub fn coefficients(ctx: &ControlContext<'_>) -> Coefficients {
    let xi = ctx.xi();
    let ifac = ctx.integrating_factor();
    let dl = ctx.dlambda;
    let sums = ctx.kernel_sums();
    let f_xx = ctx.weight_sum() + ctx.stubbornness + ifac * (-ctx.alpha * sums.curvature) * dl;
    let t1 =
        4.0 * (-2.0 * ctx.sigma * ctx.brownian + ctx.sigma * ctx.sigma * ctx.s).exp() * dl * dl;
    let t2 = -(1.0 + 2.0 * xi * ifac * dl) * f_xx;
    let t3 = 4.0
        * ifac
        * dl
        * (ctx.weighted_gap()
            + ctx.stubbornness * (xi - ctx.x0_i)
            + ifac * dl
            + ifac * ctx.dlambda_ds
            + ifac * (-ctx.alpha - ctx.alpha * sums.slope) * dl);
    Coefficients { t1, t2, t3 }
}

/// The coefficient list specialised to a population holding one common
/// opinion (every kernel term and neighbour gap vanishes).
pub fn case1_coefficients(ctx: &ControlContext<'_>) -> Coefficients {
    let xi = ctx.xi();
    let ifac = ctx.integrating_factor();
    let dl = ctx.dlambda;
    let ifac2 = (-2.0 * ctx.sigma * ctx.brownian + ctx.sigma * ctx.sigma * ctx.s).exp();
    let inv_ifac = (ctx.sigma * ctx.brownian - 0.5 * ctx.sigma * ctx.sigma * ctx.s).exp();
    Coefficients {
        t1: 4.0 * ifac2 * dl * dl,
        t2: -(ctx.weight_sum() + ctx.stubbornness) * (1.0 + 2.0 * xi * ifac * dl),
        t3: 4.0
            * ifac2
            * dl
            * (ctx.stubbornness * (xi - ctx.x0_i) * inv_ifac + dl + ctx.dlambda_ds
                - ctx.alpha * dl),
    }
}

fn t1_tolerance(c: &Coefficients) -> f64 {
    1e-12 * (1.0 + c.t2.abs() + c.t3.abs())
}

/// Roots of `T1 u^2 + T2 u + T3` and the admissible choice among them.
pub fn solve_quadratic(c: Coefficients) -> Result<ControlSolution> {
    let Coefficients { t1, t2, t3 } = c;
    let disc = c.discriminant();
    let solution =
        |roots: Vec<f64>, chosen: f64, branch: Branch, degenerate: bool| ControlSolution {
            t1,
            t2,
            t3,
            discriminant: disc,
            roots,
            chosen,
            branch,
            degenerate,
        };
    if t1.abs() < t1_tolerance(&c) {
        if t2.abs() < 1e-12 * (1.0 + t3.abs()) {
            return Ok(solution(Vec::new(), 0.0, Branch::Zero, true));
        }
        let r = -t3 / t2;
        return Ok(solution(vec![r], r, Branch::Linear, true));
    }
    if disc < 0.0 {
        return Err(Error::ComplexRoots { t1, t2, t3 });
    }
    let (minus, plus) = branch_roots(c, disc.sqrt());
    let roots = if minus == plus {
        vec![minus]
    } else {
        vec![minus, plus]
    };
    Ok(if minus >= 0.0 {
        solution(roots, minus, Branch::Minus, false)
    } else if plus >= 0.0 {
        solution(roots, plus, Branch::Plus, false)
    } else {
        solution(roots, 0.0, Branch::Clamped, true)
    })
}

/// `(minus, plus)` roots without cancellation.
fn branch_roots(c: Coefficients, sqrt_d: f64) -> (f64, f64) {
    let Coefficients { t1, t2, t3 } = c;
    if t2 <= 0.0 {
        let q = -t2 + sqrt_d;
        if q == 0.0 {
            return (0.0, 0.0);
        }
        (2.0 * t3 / q, q / (2.0 * t1))
    } else {
        let q = -t2 - sqrt_d;
        (q / (2.0 * t1), 2.0 * t3 / q)
    }
}

pub fn optimal_control(ctx: &ControlContext<'_>) -> Result<ControlSolution> {
    solve_quadratic(coefficients(ctx))
}

/// Derivative of the chosen control when `T2` and `T3` move at rates
/// `dt2`, `dt3` (`T1` held fixed).
fn chosen_derivative(sol: &ControlSolution, dt2: f64, dt3: f64) -> Result<f64> {
    let c = sol.coefficients();
    match sol.branch {
        Branch::Clamped | Branch::Zero => Ok(0.0),
        Branch::Linear => Ok(-(dt3 * c.t2 - c.t3 * dt2) / (c.t2 * c.t2)),
        branch => {
            let sqrt_d = sol.discriminant.sqrt();
            if sqrt_d == 0.0 {
                return Err(Error::Domain(
                    "control is not differentiable at a double root".into(),
                ));
            }
            let dd = 2.0 * c.t2 * dt2 - 4.0 * c.t1 * dt3;
            let dsqrt = dd / (2.0 * sqrt_d);
            let minus = branch == Branch::Minus;
            // Same split as `branch_roots`: q = -T2 - sign(T2) sqrt(D), then
            // one root is q / 2T1 and the other 2T3 / q.
            let (direct, sign) = if c.t2 <= 0.0 {
                (!minus, 1.0)
            } else {
                (minus, -1.0)
            };
            let q = -c.t2 + sign * sqrt_d;
            let dq = -dt2 + sign * dsqrt;
            if direct {
                Ok(dq / (2.0 * c.t1))
            } else {
                Ok(2.0 * (dt3 * q - c.t3 * dq) / (q * q))
            }
        }
    }
}

/// Partial derivatives of the instantaneous objective `f` in the agent's
/// opinion and control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocPartials {
    pub f_x: f64,
    pub f_xx: f64,
    pub f_u: f64,
    pub f_xu: f64,
}

/// The four partials in the form the quadratic is assembled from. `f_x`
/// leaves out the `sigma^2 I dl / 2` term of the Itô correction and `f_xu`
/// is taken per unit control, matching the coefficient list.
pub fn partials(ctx: &ControlContext<'_>, u: f64) -> FocPartials {
    let xi = ctx.xi();
    let ifac = ctx.integrating_factor();
    let dl = ctx.dlambda;
    let sums = ctx.kernel_sums();
    FocPartials {
        f_x: ctx.weighted_gap()
            + ctx.stubbornness * (xi - ctx.x0_i)
            + ifac * dl
            + ifac * ctx.dlambda_ds
            + ifac * (-ctx.alpha - ctx.alpha * sums.slope + u * u) * dl,
        f_xx: ctx.weight_sum() + ctx.stubbornness + ifac * (-ctx.alpha * sums.curvature) * dl,
        f_u: u * (1.0 + 2.0 * xi * ifac * dl),
        f_xu: 2.0 * ifac * dl,
    }
}

/// `f_u f_xx - 2 f_x f_xu`; equals `-(T1 u^2 + T2 u + T3)` and vanishes at
/// the roots of the quadratic.
pub fn foc_residual(ctx: &ControlContext<'_>, u: f64) -> f64 {
    let p = partials(ctx, u);
    p.f_u * p.f_xx - 2.0 * p.f_x * p.f_xu
}

/// Instantaneous objective: running cost plus the multiplier-weighted Itô
/// expansion of `h = x I`.
pub fn f_value(ctx: &ControlContext<'_>, u: f64) -> f64 {
    let xi = ctx.xi();
    let ifac = ctx.integrating_factor();
    let h = xi * ifac;
    let dl = ctx.dlambda;
    let drift = ctx.kernel.interaction(xi, ctx.x);
    let running =
        0.5 * (ctx.weighted_disagreement() + ctx.stubbornness * (xi - ctx.x0_i).powi(2) + u * u);
    running
        + h * dl
        + 0.5 * h * ctx.sigma * ctx.sigma * dl
        + ctx.dlambda_ds * h
        + ifac * (-ctx.alpha * xi - ctx.alpha * drift + xi * u * u) * dl
}

fn all_equal(x: &[f64], xi: f64) -> bool {
    x.iter().all(|&xj| (xj - xi).abs() <= 1e-12)
}

/// `d u* / d x_i` when the whole population holds the agent's opinion,
/// differentiating the selected branch of the root formula while the common
/// opinion shifts.
pub fn sensitivity_case1_dxi(ctx: &ControlContext<'_>) -> Result<f64> {
    if !all_equal(ctx.x, ctx.xi()) {
        return Err(Error::Precondition(
            "all opinions must coincide with the agent's".into(),
        ));
    }
    if ctx.dlambda == 0.0 {
        return Err(Error::Precondition(
            "multiplier increment must be nonzero".into(),
        ));
    }
    let c = case1_coefficients(ctx);
    let sol = solve_quadratic(c)?;
    let ifac = ctx.integrating_factor();
    let dl = ctx.dlambda;
    let dt2 = -2.0 * (ctx.weight_sum() + ctx.stubbornness) * ifac * dl;
    let dt3 = 4.0 * ifac * dl * ctx.stubbornness;
    chosen_derivative(&sol, dt2, dt3)
}

/// Closed-form `d u* / d x_j` when the agent sits below every other opinion
/// (so the kernel vanishes for it):
///
/// ```text
/// -4 { sum_j w_ij (x_j - x_i)^(-3/2) } (sum_j w_ij) exp(-3/2 sigma B + 3/4 sigma^2 s) dl^(3/2)
/// ```
pub fn sensitivity_case2_dxj(ctx: &ControlContext<'_>) -> Result<f64> {
    let xi = ctx.xi();
    if ctx.x.iter().any(|&xj| xj < xi) {
        return Err(Error::Precondition(
            "agent must hold the lowest opinion".into(),
        ));
    }
    if ctx.neighbors.iter().any(|&(j, _)| ctx.x[j] <= xi) {
        return Err(Error::Precondition(
            "every neighbour must hold a strictly larger opinion".into(),
        ));
    }
    if ctx.dlambda < 0.0 {
        return Err(Error::Domain(format!(
            "dl^(3/2) is undefined for a negative multiplier increment {}",
            ctx.dlambda
        )));
    }
    let inverse_gaps: f64 = ctx
        .neighbors
        .iter()
        .map(|&(j, w)| w * (ctx.x[j] - xi).powf(-1.5))
        .sum();
    let factor = (-1.5 * ctx.sigma * ctx.brownian + 0.75 * ctx.sigma * ctx.sigma * ctx.s).exp();
    Ok(-4.0 * inverse_gaps * ctx.weight_sum() * factor * ctx.dlambda.powf(1.5))
}

/// Feedback policy playing the closed-form optimal control.
#[derive(Debug, Clone)]
pub struct OptimalPolicy {
    pub multiplier: MultiplierModel,
}

impl OptimalPolicy {
    pub fn new(multiplier: MultiplierModel) -> Self {
        OptimalPolicy { multiplier }
    }

    pub fn solve(&self, state: &StepState<'_>, agent: usize) -> Result<ControlSolution> {
        optimal_control(&ControlContext::from_state(state, agent, &self.multiplier))
    }
}

impl Policy for OptimalPolicy {
    fn control(&self, state: &StepState<'_>, agent: usize) -> Result<f64> {
        self.solve(state, agent).map(|sol| sol.chosen)
    }
}
