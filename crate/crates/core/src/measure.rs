//! Empirical-law diagnostics: exact 1-D Wasserstein-2 and Gaussian KDE.

use std::io::Write;

use crate::error::{Error, Result};

/// Uniformly weighted sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    samples: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::param("empirical measure needs at least one sample"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("empirical measure samples must be finite"));
        }
        Ok(EmpiricalMeasure { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    fn sorted(&self) -> Vec<f64> {
        let mut v = self.samples.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// W2 between two equal-size empirical measures via the monotone coupling.
pub fn wasserstein2_1d(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::param(format!(
            "W2 needs equal sample counts, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let sa = a.sorted();
    let sb = b.sorted();
    let sum: f64 = sa.iter().zip(&sb).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((sum / sa.len() as f64).sqrt())
}

/// Gaussian kernel density estimate evaluated on `grid`.
pub fn kde(samples: &[f64], bandwidth: f64, grid: &[f64]) -> Result<Vec<f64>> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::param(format!(
            "bandwidth must be > 0, got {bandwidth}"
        )));
    }
    if samples.is_empty() {
        return Err(Error::param("kde needs at least one sample"));
    }
    let norm = 1.0 / (samples.len() as f64 * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    Ok(grid
        .iter()
        .map(|&g| {
            let s: f64 = samples
                .iter()
                .map(|&x| {
                    let z = (g - x) / bandwidth;
                    (-0.5 * z * z).exp()
                })
                .sum();
            s * norm
        })
        .collect())
}

/// Silverman's rule `1.06 sd m^(-1/5)`; falls back to `1e-3` for samples
/// with no spread.
pub fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let m = samples.len() as f64;
    let sd = std_dev(samples);
    let h = 1.06 * sd * m.powf(-0.2);
    if h > 0.0 && h.is_finite() {
        h
    } else {
        1e-3
    }
}

/// Sample standard deviation (`m - 1` denominator, 0 for one sample).
pub fn std_dev(samples: &[f64]) -> f64 {
    let m = samples.len();
    if m < 2 {
        return 0.0;
    }
    let mean = samples.iter().sum::<f64>() / m as f64;
    let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
    (ss / (m - 1) as f64).sqrt()
}

/// `points` equally spaced values over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|k| lo + step * k as f64).collect()
        }
    }
}

/// Trapezoid rule over a tabulated function.
pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(g, v)| 0.5 * (g[1] - g[0]) * (v[0] + v[1]))
        .sum()
}

/// Quantile of a tabulated density, using the trapezoid CDF normalised to
/// its total mass and linear interpolation inside the bracketing cell.
pub fn density_quantile(grid: &[f64], density: &[f64], q: f64) -> Result<f64> {
    if grid.len() < 2 || grid.len() != density.len() {
        return Err(Error::param(
            "density table needs >= 2 matching grid points",
        ));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::param(format!(
            "quantile level must lie in [0,1], got {q}"
        )));
    }
    let mut cdf = Vec::with_capacity(grid.len());
    cdf.push(0.0);
    for k in 1..grid.len() {
        let cell = 0.5 * (grid[k] - grid[k - 1]) * (density[k] + density[k - 1]);
        cdf.push(cdf[k - 1] + cell);
    }
    let total = cdf[cdf.len() - 1];
    if total.is_nan() || total <= 0.0 {
        return Err(Error::param("density has no mass on the grid"));
    }
    let target = q * total;
    let hi = cdf
        .partition_point(|&c| c < target)
        .clamp(1, grid.len() - 1);
    let (c0, c1) = (cdf[hi - 1], cdf[hi]);
    let frac = if c1 > c0 {
        (target - c0) / (c1 - c0)
    } else {
        0.0
    };
    Ok(grid[hi - 1] + frac * (grid[hi] - grid[hi - 1]))
}

/// Interquartile range of a tabulated density.
pub fn density_iqr(grid: &[f64], density: &[f64]) -> Result<f64> {
    Ok(density_quantile(grid, density, 0.75)? - density_quantile(grid, density, 0.25)?)
}

/// KDE snapshot rows `time,grid_x,density`.
pub fn write_kde_csv(
    mut out: impl Write,
    time: f64,
    grid: &[f64],
    density: &[f64],
) -> std::io::Result<()> {
    writeln!(out, "time,grid_x,density")?;
    for (x, d) in grid.iter().zip(density) {
        writeln!(out, "{time},{x},{d}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(v: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::new(v.to_vec()).unwrap()
    }

    #[test]
    fn w2_examples() {
        assert_eq!(
            wasserstein2_1d(&m(&[0.3, 0.1, 0.7]), &m(&[0.7, 0.3, 0.1])).unwrap(),
            0.0
        );
        assert!((wasserstein2_1d(&m(&[0.2]), &m(&[0.7])).unwrap() - 0.5).abs() < 1e-15);
        let d = wasserstein2_1d(&m(&[0.0, 1.0]), &m(&[0.0, 2.0])).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn w2_rejects_size_mismatch() {
        assert!(wasserstein2_1d(&m(&[0.0]), &m(&[0.0, 1.0])).is_err());
        assert!(EmpiricalMeasure::new(vec![]).is_err());
        assert!(EmpiricalMeasure::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn kde_examples() {
        let h = 0.3;
        let peak = kde(&[0.0], h, &[0.0]).unwrap()[0];
        assert!((peak - 1.0 / (h * (2.0 * std::f64::consts::PI).sqrt())).abs() < 1e-15);

        let v = kde(&[-0.4, 0.4], 0.2, &[-0.4, 0.4]).unwrap();
        assert_eq!(v[0], v[1]);

        let samples = [0.1, 0.15, 0.5, 0.52, 0.9];
        let grid = linspace(-3.0, 4.0, 4001);
        let dens = kde(&samples, silverman_bandwidth(&samples), &grid).unwrap();
        assert!((trapezoid(&grid, &dens) - 1.0).abs() < 1e-3);
        assert!(dens.iter().all(|&d| d >= 0.0));

        assert!(kde(&samples, 0.0, &grid).is_err());
        assert!(kde(&[], 0.1, &grid).is_err());
    }

    #[test]
    fn quantiles_of_a_uniform_density() {
        let grid = linspace(0.0, 1.0, 101);
        let dens = vec![1.0; 101];
        assert!((density_quantile(&grid, &dens, 0.5).unwrap() - 0.5).abs() < 1e-12);
        assert!((density_iqr(&grid, &dens).unwrap() - 0.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn w2_is_a_metric(
            data in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0), 1..20),
        ) {
            let a = m(&data.iter().map(|t| t.0).collect::<Vec<_>>());
            let b = m(&data.iter().map(|t| t.1).collect::<Vec<_>>());
            let c = m(&data.iter().map(|t| t.2).collect::<Vec<_>>());
            let ab = wasserstein2_1d(&a, &b).unwrap();
            let ba = wasserstein2_1d(&b, &a).unwrap();
            let bc = wasserstein2_1d(&b, &c).unwrap();
            let ac = wasserstein2_1d(&a, &c).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(wasserstein2_1d(&a, &a).unwrap(), 0.0);
            prop_assert!(ac <= ab + bc + 1e-12);
        }

        #[test]
        fn w2_translation(
            data in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..20),
            shift in -3.0f64..3.0,
        ) {
            let a: Vec<f64> = data.iter().map(|t| t.0).collect();
            let b: Vec<f64> = data.iter().map(|t| t.1).collect();
            let a_s: Vec<f64> = a.iter().map(|v| v + shift).collect();
            let b_s: Vec<f64> = b.iter().map(|v| v + shift).collect();
            let base = wasserstein2_1d(&m(&a), &m(&b)).unwrap();
            let both = wasserstein2_1d(&m(&a_s), &m(&b_s)).unwrap();
            prop_assert!((base - both).abs() < 1e-9);
            let one = wasserstein2_1d(&m(&a_s), &m(&b)).unwrap();
            prop_assert!((one - base).abs() <= shift.abs() + 1e-9);
            let same_shape = wasserstein2_1d(&m(&a_s), &m(&a)).unwrap();
            prop_assert!((same_shape - shift.abs()).abs() < 1e-9);
        }
    }
}
