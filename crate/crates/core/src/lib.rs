//! Particle simulation and closed-form feedback control for McKean-Vlasov
//! opinion dynamics with a modified Friedkin-Johnsen drift.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: weighted directed social networks with stubbornness, plus
//!   Erdős–Rényi and clustered generators.
//! - [`kernel`]: the compactly supported interaction kernel, its analytic
//!   derivatives and the empirical mean-field drift.
//! - [`dynamics`]: Euler–Maruyama integration of the interacting particle
//!   system, the integrating factor and the Picard iteration on laws.
//! - [`control`]: the quadratic first-order condition, its roots and the
//!   sensitivity formulas of the closed-form feedback control.
//! - [`cost`]: the agent cost functional, the variational process and the
//!   Gâteaux derivative check.
//! - [`measure`]: 1-D Wasserstein-2 distance and Gaussian KDE diagnostics.
//! - [`scenario`]: JSON scenarios and the artifact writer behind the `mvfj`
//!   binary.

pub mod control;
pub mod cost;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod kernel;
pub mod measure;
pub mod noise;
pub mod scenario;

pub use error::{Error, Result};
