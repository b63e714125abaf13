//! Brownian increments from per-agent counter-based streams.
//!
//! Agent `i` reads ChaCha8 stream `i` under the run seed, consuming one
//! normal draw per step. The increment for `(seed, agent, step)` therefore
//! does not depend on how agents are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone)]
pub struct BrownianSource {
    streams: Vec<ChaCha8Rng>,
    scale: f64,
    step: usize,
}

impl BrownianSource {
    /// Increments `N(0, dt)` for `n` agents.
    pub fn new(seed: u64, n: usize, dt: f64) -> Self {
        let streams = (0..n)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                rng
            })
            .collect();
        BrownianSource {
            streams,
            scale: dt.sqrt(),
            step: 0,
        }
    }

    /// Index of the step the next call to [`Self::next_increments`] serves.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn next_increments(&mut self) -> Vec<f64> {
        self.step += 1;
        let scale = self.scale;
        self.streams
            .iter_mut()
            .map(|rng| {
                let z: f64 = StandardNormal.sample(rng);
                z * scale
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_of_population_size() {
        let mut small = BrownianSource::new(11, 2, 0.01);
        let mut large = BrownianSource::new(11, 50, 0.01);
        for _ in 0..20 {
            let a = small.next_increments();
            let b = large.next_increments();
            assert_eq!(a[..], b[..2]);
        }
    }

    #[test]
    fn increments_have_the_right_variance() {
        let mut src = BrownianSource::new(3, 1000, 0.25);
        let draws: Vec<f64> = (0..20).flat_map(|_| src.next_increments()).collect();
        let m = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / m;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (m - 1.0);
        assert!(mean.abs() < 0.02);
        assert!((var - 0.25).abs() < 0.02);
    }

    #[test]
    fn different_seeds_differ() {
        let a = BrownianSource::new(1, 3, 1.0).next_increments();
        let b = BrownianSource::new(2, 3, 1.0).next_increments();
        assert_ne!(a, b);
    }
}
