//! Elliptical densities and pointwise reflection checks on grids.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::Serialize;

use super::{CheckReport, ContlabError};
use crate::dist::SignedPermutation;
use crate::symmetry::{in_sub_super_region, Condition, Side};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Gaussian,
    StudentT { nu: f64 },
}

impl Generator {
    pub const DEFAULT_NU: f64 = 5.0;

    /// Density generator `g(t)` in dimension `d`.
    pub fn eval(self, t: f64, d: usize) -> f64 {
        let df = d as f64;
        match self {
            Generator::Gaussian => (2.0 * PI).powf(-df / 2.0) * (-t / 2.0).exp(),
            Generator::StudentT { nu } => {
                let log_c = libm::lgamma((nu + df) / 2.0) - libm::lgamma(nu / 2.0) - df / 2.0 * (nu * PI).ln();
                (log_c - (nu + df) / 2.0 * (t / nu).ln_1p()).exp()
            }
        }
    }
}

/// Location-scale elliptical law with a positive definite scale matrix.
#[derive(Debug, Clone)]
pub struct EllipticalSpec {
    location: DVector<f64>,
    scale: DMatrix<f64>,
    generator: Generator,
    chol: Cholesky<f64, Dyn>,
}

impl EllipticalSpec {
    pub fn new(location: Vec<f64>, scale: DMatrix<f64>, generator: Generator) -> Result<Self, ContlabError> {
        let d = location.len();
        if d == 0 || scale.nrows() != d || scale.ncols() != d {
            return Err(ContlabError::InvalidSpec(format!(
                "location has length {d} but scale is {}x{}",
                scale.nrows(),
                scale.ncols()
            )));
        }
        if scale.iter().chain(location.iter()).any(|v| !v.is_finite()) {
            return Err(ContlabError::InvalidSpec("non-finite parameter".into()));
        }
        if (&scale - scale.transpose()).amax() > 1e-12 * scale.amax().max(1.0) {
            return Err(ContlabError::InvalidSpec("scale matrix is not symmetric".into()));
        }
        if let Generator::StudentT { nu } = generator {
            if !(nu > 0.0 && nu.is_finite()) {
                return Err(ContlabError::InvalidSpec(format!("degrees of freedom must be positive, got {nu}")));
            }
        }
        let chol = Cholesky::new(scale.clone()).ok_or_else(|| ContlabError::NotPositiveDefinite {
            min_eigenvalue: scale.clone().symmetric_eigenvalues().min(),
        })?;
        Ok(EllipticalSpec {
            location: DVector::from_vec(location),
            scale,
            generator,
            chol,
        })
    }

    /// Bivariate law with means `(mu, nu)` and scale
    /// `[[sigma^2, rho sigma tau], [rho sigma tau, tau^2]]`.
    pub fn bivariate(mu: f64, nu: f64, sigma: f64, tau: f64, rho: f64, generator: Generator) -> Result<Self, ContlabError> {
        if !(rho.abs() < 1.0) {
            return Err(ContlabError::RhoOutOfRange(rho));
        }
        if !(sigma > 0.0 && tau > 0.0) {
            return Err(ContlabError::InvalidSpec(format!("scales must be positive, got sigma={sigma}, tau={tau}")));
        }
        let c = rho * sigma * tau;
        let scale = DMatrix::from_row_slice(2, 2, &[sigma * sigma, c, c, tau * tau]);
        Self::new(vec![mu, nu], scale, generator)
    }

    /// Centered law with `sigma_ii = sigma2`, `sigma_ij = sigma2 * rho`.
    pub fn intraclass(n: usize, sigma2: f64, rho: f64, generator: Generator) -> Result<Self, ContlabError> {
        if n < 2 {
            return Err(ContlabError::InvalidSpec(format!("intraclass structure needs n >= 2, got {n}")));
        }
        let lower = -1.0 / (n as f64 - 1.0);
        if !(rho > lower && rho < 1.0) {
            return Err(ContlabError::InvalidSpec(format!("intraclass rho must lie in ({lower}, 1), got {rho}")));
        }
        if !(sigma2 > 0.0) {
            return Err(ContlabError::InvalidSpec(format!("variance must be positive, got {sigma2}")));
        }
        let scale = DMatrix::from_fn(n, n, |i, j| if i == j { sigma2 } else { sigma2 * rho });
        Self::new(vec![0.0; n], scale, generator)
    }

    pub fn dim(&self) -> usize {
        self.location.len()
    }

    pub fn location(&self) -> &[f64] {
        self.location.as_slice()
    }

    pub fn scale(&self) -> &DMatrix<f64> {
        &self.scale
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    /// Lower Cholesky factor of the scale matrix.
    pub fn cholesky_l(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    /// `|Sigma|^{-1/2} g((x - m)' Sigma^{-1} (x - m))`.
    pub fn density(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "point dimension");
        let r = DVector::from_column_slice(x) - &self.location;
        let z = self.chol.l().solve_lower_triangular(&r).expect("nonsingular factor");
        let q = z.norm_squared();
        let sqrt_det: f64 = self.chol.l().diagonal().iter().product();
        self.generator.eval(q, self.dim()) / sqrt_det
    }
}

/// Cartesian product of per-axis point lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub axes: Vec<Vec<f64>>,
}

impl Grid {
    /// `steps` equally spaced points on `[lo, hi]` along each of `dim` axes.
    pub fn uniform(dim: usize, lo: f64, hi: f64, steps: usize) -> Self {
        let axis: Vec<f64> = match steps {
            0 => vec![],
            1 => vec![lo],
            _ => (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect(),
        };
        Grid { axes: vec![axis; dim] }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let total = if self.axes.is_empty() { 0 } else { self.len() };
        (0..total).map(move |mut idx| {
            let mut p = vec![0.0; self.dim()];
            for (slot, axis) in p.iter_mut().zip(&self.axes).rev() {
                *slot = axis[idx % axis.len()];
                idx /= axis.len();
            }
            p
        })
    }
}

/// Required relation between `f(x)` and `f(Tx)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtLeast,
    AtMost,
}

impl Relation {
    /// Amount by which the pair violates the relation (nonpositive when it holds).
    fn excess(self, fx: f64, ftx: f64) -> f64 {
        match self {
            Relation::Equal => (fx - ftx).abs(),
            Relation::AtLeast => ftx - fx,
            Relation::AtMost => fx - ftx,
        }
    }
}

pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// Counts grid points in `region` where `f(x)` and `f(map x)` break
/// `relation` by more than `tol`.
pub fn density_reflection_grid(
    spec: &EllipticalSpec,
    map: &SignedPermutation,
    relation: Relation,
    region: impl Fn(&[f64]) -> bool,
    grid: &Grid,
    tol: f64,
    check: &str,
) -> Result<CheckReport, ContlabError> {
    if grid.dim() != spec.dim() || map.dim() != spec.dim() {
        return Err(ContlabError::InvalidSpec(format!(
            "grid dimension {} and map dimension {} must equal law dimension {}",
            grid.dim(),
            map.dim(),
            spec.dim()
        )));
    }
    let mut evaluated = 0u64;
    let mut violations = 0u64;
    let mut worst = f64::NEG_INFINITY;
    for p in grid.points().filter(|p| region(p)) {
        let ex = relation.excess(spec.density(&p), spec.density(&map.apply_f64(&p)));
        evaluated += 1;
        worst = worst.max(ex);
        if ex > tol {
            violations += 1;
        }
    }
    if evaluated == 0 {
        return Err(ContlabError::EmptyGrid);
    }
    Ok(CheckReport {
        check: check.to_string(),
        max_deviation: worst.max(0.0),
        tolerance: tol,
        pass: violations == 0,
        n: evaluated,
        seed: None,
        violations: Some(violations),
    })
}

/// Pointwise density form of a symmetry condition, evaluated on the grid
/// points inside the condition's region. Supported: `RE`, `URE`, `LRE`,
/// `RE(k,l)` and the sub/super-exchangeability conditions.
pub fn density_symmetry_grid(spec: &EllipticalSpec, condition: Condition, grid: &Grid) -> Result<CheckReport, ContlabError> {
    let n = spec.dim();
    let check = condition.to_string();
    let pair_map = |k: usize, l: usize| -> Result<SignedPermutation, ContlabError> {
        if k == 0 || k >= l || l > n {
            return Err(ContlabError::InvalidSpec(format!("pair ({k},{l}) invalid for dimension {n}")));
        }
        Ok(SignedPermutation::reverse_pair(n, k, l))
    };
    let need_bivariate = || {
        if n == 2 {
            Ok(())
        } else {
            Err(ContlabError::InvalidSpec(format!("{condition} is bivariate, law has dimension {n}")))
        }
    };
    let tol = DENSITY_TOLERANCE;
    match condition {
        Condition::Re => {
            need_bivariate()?;
            density_reflection_grid(spec, &pair_map(1, 2)?, Relation::Equal, |_| true, grid, tol, &check)
        }
        Condition::Ure => {
            need_bivariate()?;
            density_reflection_grid(spec, &pair_map(1, 2)?, Relation::Equal, |p| p[1] > p[0], grid, tol, &check)
        }
        Condition::Lre => {
            need_bivariate()?;
            density_reflection_grid(spec, &pair_map(1, 2)?, Relation::Equal, |p| p[1] < p[0], grid, tol, &check)
        }
        Condition::ReKl { k, l } => density_reflection_grid(spec, &pair_map(k, l)?, Relation::Equal, |_| true, grid, tol, &check),
        Condition::SubSuperKl { variant, k, l } => {
            let map = pair_map(k, l)?;
            let side: Side = variant.side();
            let relation = if variant.is_sub() { Relation::AtLeast } else { Relation::AtMost };
            density_reflection_grid(spec, &map, relation, |p| in_sub_super_region(p, k, l, side), grid, tol, &check)
        }
        other => Err(ContlabError::InvalidSpec(format!("{other} has no pointwise density form here"))),
    }
}
