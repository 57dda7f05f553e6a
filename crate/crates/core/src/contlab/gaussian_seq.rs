//! Gaussian sequences whose prefixes satisfy `RE(k(n), n)` for every `n`.

use nalgebra::DMatrix;
use serde::Serialize;

use super::elliptical::{EllipticalSpec, Generator};
use super::ContlabError;

pub const PD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqCase {
    /// `k(n) = 1`
    AnchorFirst,
    /// `k(n) = n - 1`
    Alternating,
    /// `k(n)` for `n = 2, 3, ...` (1-based, each `< n`).
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianSeqSpec {
    pub n: usize,
    pub mu: f64,
    pub case: SeqCase,
    /// `rho_params[n - 2] = corr(X_n, X_{k(n)})`, `n = 2..`.
    pub rho_params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianSeq {
    /// `k_map[n - 2] = k(n)`.
    pub k_map: Vec<usize>,
    pub mean: Vec<f64>,
    pub corr: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
}

impl GaussianSeqSpec {
    pub fn k_map(&self) -> Result<Vec<usize>, ContlabError> {
        let ks: Vec<usize> = match &self.case {
            SeqCase::AnchorFirst => (2..=self.n).map(|_| 1).collect(),
            SeqCase::Alternating => (2..=self.n).map(|m| m - 1).collect(),
            SeqCase::Explicit(ks) => ks.clone(),
        };
        if ks.len() != self.n - 1 {
            return Err(ContlabError::InvalidSpec(format!("k-map needs {} entries, got {}", self.n - 1, ks.len())));
        }
        for (i, &k) in ks.iter().enumerate() {
            let m = i + 2;
            if k == 0 || k >= m {
                return Err(ContlabError::InvalidSpec(format!("k({m}) = {k} must lie in 1..{m}")));
            }
        }
        Ok(ks)
    }
}

/// Builds means and correlations from `mu_n = -mu_{k(n)}` and
/// `rho_{n,j} = -rho_{k(n),j}`; entries are sign copies, never recomputed.
pub fn build_gaussian_seq(spec: &GaussianSeqSpec) -> Result<GaussianSeq, ContlabError> {
    let n = spec.n;
    if n < 2 {
        return Err(ContlabError::InvalidSpec(format!("sequence length must be at least 2, got {n}")));
    }
    if spec.rho_params.len() != n - 1 {
        return Err(ContlabError::InvalidSpec(format!("need {} correlation parameters, got {}", n - 1, spec.rho_params.len())));
    }
    if let Some(r) = spec.rho_params.iter().find(|r| !(r.abs() < 1.0)) {
        return Err(ContlabError::RhoOutOfRange(*r));
    }
    let ks = spec.k_map()?;

    let mut mean = vec![0.0; n];
    let mut r = DMatrix::<f64>::identity(n, n);
    mean[0] = spec.mu;
    for m in 2..=n {
        let (i, k) = (m - 1, ks[m - 2] - 1);
        mean[i] = -mean[k];
        for j in 0..i {
            let v = if j == k { spec.rho_params[m - 2] } else { -r[(k, j)] };
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
    let min_eigenvalue = r.clone().symmetric_eigenvalues().min();
    if !(min_eigenvalue > PD_TOLERANCE) {
        return Err(ContlabError::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(GaussianSeq {
        k_map: ks,
        mean,
        corr: r.row_iter().map(|row| row.iter().copied().collect()).collect(),
        min_eigenvalue,
    })
}

impl GaussianSeq {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Entrywise check of the defining equations (exact float equality).
    pub fn satisfies_re_equations(&self) -> bool {
        (2..=self.dim()).all(|m| {
            let (i, k) = (m - 1, self.k_map[m - 2] - 1);
            self.mean[i] == -self.mean[k] && (0..i).filter(|&j| j != k).all(|j| self.corr[i][j] == -self.corr[k][j])
        })
    }

    /// The sequence as a Gaussian law with common variance `sigma2`.
    pub fn to_elliptical(&self, sigma2: f64) -> Result<EllipticalSpec, ContlabError> {
        let n = self.dim();
        let scale = DMatrix::from_fn(n, n, |i, j| sigma2 * self.corr[i][j]);
        EllipticalSpec::new(self.mean.clone(), scale, Generator::Gaussian)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(case: SeqCase, n: usize, rho: &[f64]) -> GaussianSeqSpec {
        GaussianSeqSpec {
            n,
            mu: 1.0,
            case,
            rho_params: rho.to_vec(),
        }
    }

    #[test]
    fn anchor_first_pattern() {
        let g = build_gaussian_seq(&spec(SeqCase::AnchorFirst, 4, &[0.2, 0.1, 0.05])).unwrap();
        assert_eq!(g.mean, vec![1.0, -1.0, -1.0, -1.0]);
        assert_eq!(g.corr[0], vec![1.0, 0.2, 0.1, 0.05]);
        assert_eq!(g.corr[1], vec![0.2, 1.0, -0.2, -0.2]);
        assert_eq!(g.corr[3], vec![0.05, -0.2, -0.1, 1.0]);
        assert!(g.satisfies_re_equations());
    }

    #[test]
    fn alternating_pattern() {
        let g = build_gaussian_seq(&spec(SeqCase::Alternating, 5, &[0.1, 0.1, 0.1, 0.1])).unwrap();
        assert_eq!(g.mean, vec![1.0, -1.0, 1.0, -1.0, 1.0]);
        assert_eq!(g.corr[0], vec![1.0, 0.1, -0.1, 0.1, -0.1]);
        assert_eq!(g.corr[2], vec![-0.1, 0.1, 1.0, 0.1, -0.1]);
        assert!(g.satisfies_re_equations());
    }

    #[test]
    fn zero_parameters_give_identity() {
        let g = build_gaussian_seq(&spec(SeqCase::AnchorFirst, 3, &[0.0, 0.0])).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.corr[i][j].abs(), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn rejects_singular_and_bad_maps() {
        let e = build_gaussian_seq(&spec(SeqCase::AnchorFirst, 4, &[0.9, 0.9, 0.9])).unwrap_err();
        assert!(matches!(e, ContlabError::NotPositiveDefinite { min_eigenvalue } if min_eigenvalue < 0.0));
        assert!(build_gaussian_seq(&spec(SeqCase::Explicit(vec![1, 3]), 3, &[0.1, 0.1])).is_err());
        assert!(build_gaussian_seq(&spec(SeqCase::Explicit(vec![1, 1]), 3, &[0.1, 0.1])).is_ok());
    }
}
