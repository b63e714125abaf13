//! Interaction kernel
//!
//! ```text
//! phi(b) = theta1 * exp(-0.01 / (1 - (b - theta2)^2))   for b > 0 and |b - theta2| < 1
//!        = 0                                             otherwise
//! ```
//!
//! The kernel is evaluated at the signed difference `b = x_i - x_j`, so an
//! agent is only pulled by agents holding a lower opinion. Outside the bump
//! support the printed expression would blow up, hence the compact support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUMP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelParams {
    /// Scale.
    pub theta1: f64,
    /// Range (centre of the bump).
    pub theta2: f64,
}

impl KernelParams {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        let params = KernelParams { theta1, theta2 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta1.is_finite() && self.theta1 >= 0.0) {
            return Err(Error::param(format!(
                "theta1 must be finite and >= 0, got {}",
                self.theta1
            )));
        }
        if !self.theta2.is_finite() {
            return Err(Error::param("theta2 must be finite"));
        }
        Ok(())
    }

    /// Offset from the bump centre, or `None` outside the support.
    #[inline]
    fn offset(&self, beta: f64) -> Option<f64> {
        let z = beta - self.theta2;
        (beta > 0.0 && z.abs() < 1.0).then_some(z)
    }

    #[inline]
    pub fn phi(&self, beta: f64) -> f64 {
        match self.offset(beta) {
            Some(z) => self.theta1 * (-BUMP / (1.0 - z * z)).exp(),
            None => 0.0,
        }
    }

    /// `d phi(x_i - x_j) / d x_i`.
    #[inline]
    pub fn dphi_dxi(&self, xi: f64, xj: f64) -> f64 {
        match self.offset(xi - xj) {
            Some(z) => {
                let q = 1.0 - z * z;
                -2.0 * BUMP * self.theta1 * (-BUMP / q).exp() * z / (q * q)
            }
            None => 0.0,
        }
    }

    /// `d^2 phi(x_i - x_j) / d x_i^2`.
    #[inline]
    pub fn d2phi_dxi2(&self, xi: f64, xj: f64) -> f64 {
        match self.offset(xi - xj) {
            Some(z) => {
                let q = 1.0 - z * z;
                let z2 = z * z;
                let bracket = -2.0 * BUMP * z2 / q.powi(4) + 1.0 / (q * q) + 4.0 * z2 / q.powi(3);
                -2.0 * BUMP * self.theta1 * (-BUMP / q).exp() * bracket
            }
            None => 0.0,
        }
    }

    /// `(1/m) sum_y phi(xi - y) (xi - y)` over a population `law`.
    pub fn interaction(&self, xi: f64, law: &[f64]) -> f64 {
        if self.theta1 == 0.0 {
            return 0.0;
        }
        let sum: f64 = law
            .iter()
            .map(|&y| {
                let b = xi - y;
                self.phi(b) * b
            })
            .sum();
        sum / law.len() as f64
    }

    /// Kernel averages entering the first-order condition for agent `i`.
    pub fn sums(&self, i: usize, x: &[f64]) -> KernelSums {
        let xi = x[i];
        let mut acc = KernelSums::default();
        if self.theta1 == 0.0 {
            return acc;
        }
        for &xj in x {
            let b = xi - xj;
            if self.offset(b).is_none() {
                continue;
            }
            let phi = self.phi(b);
            let d1 = self.dphi_dxi(xi, xj);
            let d2 = self.d2phi_dxi2(xi, xj);
            acc.drift += phi * b;
            acc.slope += d1 * b + phi;
            acc.curvature += d2 * b + 2.0 * d1;
        }
        let m = x.len() as f64;
        acc.drift /= m;
        acc.slope /= m;
        acc.curvature /= m;
        acc
    }
}

/// Population averages `(1/n) sum_j` of the kernel terms for one agent, with
/// `b = x_i - x_j`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KernelSums {
    /// `phi(b) b`, the mean-field drift.
    pub drift: f64,
    /// `phi'(b) b + phi(b)`, its derivative in `x_i`.
    pub slope: f64,
    /// `phi''(b) b + 2 phi'(b)`, its second derivative in `x_i`.
    pub curvature: f64,
}

/// `(1/n) sum_j phi(x_i - x_j) (x_i - x_j)`.
pub fn mean_field_drift(params: &KernelParams, i: usize, x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::param("opinion vector is empty"));
    }
    if i >= x.len() {
        return Err(Error::param(format!(
            "agent {i} out of range for n={}",
            x.len()
        )));
    }
    Ok(params.interaction(x[i], x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(t1: f64, t2: f64) -> KernelParams {
        KernelParams::new(t1, t2).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(k(1.0, 0.5).phi(0.0), 0.0);
        assert!(rel(k(2.0, 0.5).phi(0.5), 1.980_099_667_498_336_1) < 1e-14);
        assert!(rel(k(1.0, 0.0).phi(0.6), 0.984_496_437_005_408_4) < 1e-14);
    }

    #[test]
    fn phi_vanishes_on_and_beyond_the_support_edge() {
        let p = k(3.0, 0.2);
        assert_eq!(p.phi(1.2), 0.0);
        assert_eq!(p.phi(1.5), 0.0);
        assert_eq!(p.phi(-0.3), 0.0);
        assert!(p.phi(1.199_999) < 1e-100);
    }

    #[test]
    fn rejects_negative_scale() {
        assert!(KernelParams::new(-1.0, 0.0).is_err());
        assert!(KernelParams::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn dphi_examples() {
        assert_eq!(k(1.0, 0.25).dphi_dxi(0.75, 0.5), 0.0);
        assert_eq!(k(1.0, 0.0).dphi_dxi(0.1, 0.5), 0.0);
        let p = k(1.0, 0.0);
        let h = 1e-6;
        let fd = (p.phi(0.6 + h) - p.phi(0.6 - h)) / (2.0 * h);
        assert!(rel(p.dphi_dxi(0.6, 0.0), fd) < 1e-6);
    }

    #[test]
    fn d2phi_examples() {
        assert_eq!(k(1.0, 0.0).d2phi_dxi2(0.2, 0.5), 0.0);
        assert_eq!(k(0.0, 0.3).d2phi_dxi2(0.7, 0.1), 0.0);
        let p = k(1.0, 0.0);
        let h = 1e-4;
        let fd = (p.phi(0.5 + h) - 2.0 * p.phi(0.5) + p.phi(0.5 - h)) / (h * h);
        assert!(rel(p.d2phi_dxi2(0.5, 0.0), fd) < 1e-4);
    }

    #[test]
    fn drift_examples() {
        let p = k(1.0, 0.0);
        assert_eq!(mean_field_drift(&p, 1, &[0.4; 5]).unwrap(), 0.0);
        assert_eq!(mean_field_drift(&p, 0, &[0.4]).unwrap(), 0.0);
        let d = mean_field_drift(&p, 0, &[0.8, 0.2]).unwrap();
        assert!(rel(d, 0.295_348_931_101_622_5) < 1e-12);
        assert!(mean_field_drift(&p, 0, &[]).is_err());
    }

    #[test]
    fn sums_match_pointwise_terms() {
        let p = k(1.5, 0.3);
        let x = [0.9, 0.1, 0.5, 0.85, 0.9];
        let s = p.sums(0, &x);
        assert!((s.drift - mean_field_drift(&p, 0, &x).unwrap()).abs() < 1e-15);
        let slope: f64 = x
            .iter()
            .map(|&xj| p.dphi_dxi(0.9, xj) * (0.9 - xj) + p.phi(0.9 - xj))
            .sum::<f64>()
            / 5.0;
        assert!((s.slope - slope).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn phi_is_nonnegative_and_zero_for_nonpositive_args(
            t1 in 0.0f64..10.0, t2 in -2.0f64..2.0, beta in -3.0f64..3.0,
        ) {
            let p = k(t1, t2);
            let v = p.phi(beta);
            prop_assert!(v.is_finite() && v >= 0.0);
            if beta <= 0.0 {
                prop_assert_eq!(v, 0.0);
            }
        }

        #[test]
        fn drift_is_translation_invariant(
            x in proptest::collection::vec(0.0f64..1.0, 1..12),
            shift in -0.5f64..0.5,
            t1 in 0.0f64..5.0,
            t2 in -0.5f64..1.5,
        ) {
            let p = k(t1, t2);
            let shifted: Vec<f64> = x.iter().map(|v| v + shift).collect();
            for i in 0..x.len() {
                let a = mean_field_drift(&p, i, &x).unwrap();
                let b = mean_field_drift(&p, i, &shifted).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }

        #[test]
        fn two_agent_antisymmetry(a in 0.0f64..1.0, b in 0.0f64..1.0, t1 in 0.0f64..5.0, t2 in -2.0f64..2.0) {
            let p = k(t1, t2);
            let x = [a, b];
            let inside = |beta: f64| p.phi(beta) != 0.0;
            // Only one direction can be inside the support because the kernel
            // vanishes for non-positive arguments.
            prop_assume!(inside(a - b) == inside(b - a));
            let d0 = mean_field_drift(&p, 0, &x).unwrap();
            let d1 = mean_field_drift(&p, 1, &x).unwrap();
            prop_assert!((d0 + d1).abs() < 1e-15);
        }
    }
}
