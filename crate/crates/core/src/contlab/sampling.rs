//! Seeded sampling of continuous models.
//!
//! Rows are generated in fixed blocks; block `b` draws from ChaCha8 seeded
//! with the configured seed on stream `b`, so output does not depend on how
//! blocks are scheduled across threads.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, ChiSquared, Distribution, StandardNormal};
use serde::Serialize;

use super::elliptical::{EllipticalSpec, Generator};
use super::ContlabError;
use crate::extremes::Extreme;

pub const MIN_SAMPLES: usize = 1000;
pub const DEFAULT_ALPHA: f64 = 0.01;
const BLOCK_ROWS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCConfig {
    pub n: usize,
    pub seed: u64,
    pub alpha: f64,
}

impl MCConfig {
    pub fn new(n: usize, seed: u64, alpha: f64) -> Result<Self, ContlabError> {
        if n < MIN_SAMPLES {
            return Err(ContlabError::InvalidConfig(format!("sample count must be at least {MIN_SAMPLES}, got {n}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ContlabError::InvalidConfig(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(MCConfig { n, seed, alpha })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleFamily {
    /// Centered normal with standard deviation `theta`.
    Normal,
    /// Centered Cauchy with scale `theta`.
    Cauchy,
}

impl ScaleFamily {
    /// Density of `|X|` at `x >= 0` for scale `theta`.
    pub fn abs_density(self, x: f64, theta: f64) -> f64 {
        let z = x / theta;
        match self {
            ScaleFamily::Normal => 2.0 * super::phi_density(z) / theta,
            ScaleFamily::Cauchy => 2.0 / (std::f64::consts::PI * theta * (1.0 + z * z)),
        }
    }

    /// Cdf of `|X|` at `x >= 0` for scale `theta`.
    pub fn abs_cdf(self, x: f64, theta: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = x / theta;
        match self {
            ScaleFamily::Normal => super::phi(z) - super::phi(-z),
            ScaleFamily::Cauchy => 2.0 / std::f64::consts::PI * z.atan(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ContinuousModel {
    Elliptical(EllipticalSpec),
    /// Independent centered coordinates from one scale family.
    IndependentScale { family: ScaleFamily, thetas: Vec<f64> },
}

impl ContinuousModel {
    pub fn dim(&self) -> usize {
        match self {
            ContinuousModel::Elliptical(s) => s.dim(),
            ContinuousModel::IndependentScale { thetas, .. } => thetas.len(),
        }
    }

    fn validate(&self) -> Result<(), ContlabError> {
        if let ContinuousModel::IndependentScale { thetas, .. } = self {
            if thetas.is_empty() || thetas.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                return Err(ContlabError::InvalidSpec(format!("scales must be positive and finite, got {thetas:?}")));
            }
        }
        Ok(())
    }

    fn fill_block(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        let d = self.dim();
        match self {
            ContinuousModel::Elliptical(spec) => {
                let l = spec.cholesky_l();
                let m = spec.location();
                let chi = match spec.generator() {
                    Generator::StudentT { nu } => Some((nu, ChiSquared::new(nu).expect("positive dof"))),
                    Generator::Gaussian => None,
                };
                let mut z = vec![0.0; d];
                for row in out.chunks_exact_mut(d) {
                    for zi in z.iter_mut() {
                        *zi = rng.sample(StandardNormal);
                    }
                    let w = match &chi {
                        Some((nu, c)) => (nu / c.sample(rng)).sqrt(),
                        None => 1.0,
                    };
                    for (i, slot) in row.iter_mut().enumerate() {
                        let lz: f64 = (0..=i).map(|j| l[(i, j)] * z[j]).sum();
                        *slot = m[i] + w * lz;
                    }
                }
            }
            ContinuousModel::IndependentScale { family, thetas } => {
                let cauchy = Cauchy::new(0.0, 1.0).expect("unit scale");
                for row in out.chunks_exact_mut(d) {
                    for (slot, t) in row.iter_mut().zip(thetas) {
                        let z: f64 = match family {
                            ScaleFamily::Normal => rng.sample(StandardNormal),
                            ScaleFamily::Cauchy => cauchy.sample(rng),
                        };
                        *slot = t * z;
                    }
                }
            }
        }
    }
}

/// Row-major `rows x dim` sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    pub dim: usize,
    pub rows: usize,
    pub data: Vec<f64>,
}

pub fn sample(model: &ContinuousModel, cfg: &MCConfig) -> Result<SampleMatrix, ContlabError> {
    model.validate()?;
    let d = model.dim();
    let mut data = vec![0.0; cfg.n * d];
    let fill = |(b, chunk): (usize, &mut [f64])| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(b as u64);
        model.fill_block(&mut rng, chunk);
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(BLOCK_ROWS * d).enumerate().for_each(fill);
    }
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(BLOCK_ROWS * d).enumerate().for_each(fill);
    Ok(SampleMatrix { dim: d, rows: cfg.n, data })
}

impl SampleMatrix {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Coordinate `j` (0-based) of every row.
    pub fn column(&self, j: usize) -> Vec<f64> {
        assert!(j < self.dim, "column {j} out of range for dimension {}", self.dim);
        self.data.iter().skip(j).step_by(self.dim).copied().collect()
    }

    /// `|X_j|` (0-based `j`).
    pub fn abs_column(&self, j: usize) -> Vec<f64> {
        assert!(j < self.dim, "column {j} out of range for dimension {}", self.dim);
        self.data.iter().skip(j).step_by(self.dim).map(|v| v.abs()).collect()
    }

    /// `|max|` or `|min|` of the first `prefix` coordinates of each row.
    pub fn abs_extreme(&self, prefix: usize, kind: Extreme) -> Vec<f64> {
        assert!(prefix >= 1 && prefix <= self.dim, "prefix out of range");
        self.data
            .chunks_exact(self.dim)
            .map(|r| {
                let it = r[..prefix].iter().copied();
                match kind {
                    Extreme::Max => it.fold(f64::NEG_INFINITY, f64::max),
                    Extreme::Min => it.fold(f64::INFINITY, f64::min),
                }
                .abs()
            })
            .collect()
    }

    pub fn mean(&self, j: usize) -> f64 {
        self.column(j).iter().sum::<f64>() / self.rows as f64
    }

    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.column(i), self.column(j));
        let (ma, mb) = (self.mean(i), self.mean(j));
        let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
        for (x, y) in a.iter().zip(&b) {
            sab += (x - ma) * (y - mb);
            saa += (x - ma) * (x - ma);
            sbb += (y - mb) * (y - mb);
        }
        sab / (saa * sbb).sqrt()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let header: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for r in self.data.chunks_exact(self.dim) {
            let cells: Vec<String> = r.iter().map(f64::to_string).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}
