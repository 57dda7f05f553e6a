//! Finite discrete distributions with exact rational support and masses.
//!
//! [`ExactJointDist`] is kept in canonical form: atoms sorted
//! lexicographically by point, duplicate points merged, zero-mass atoms
//! dropped. Two distributions are equal iff their canonical atom lists are.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, serde_rat, serde_rat_vec, PointDisplay, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative probability {prob} at {point}")]
    NegativeProbability { point: String, prob: String },
    #[error("distribution has no atoms with positive probability")]
    Empty,
    #[error("probabilities sum to {total}, deficit 1 - total = {deficit}")]
    ProbabilityNotOne { total: String, deficit: String },
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("index {index} repeated in index set")]
    DuplicateIndex { index: usize },
    #[error("coordinate map is not a signed permutation")]
    NotBijection,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub point: Vec<Rational>,
    pub prob: Rational,
}

/// Finite discrete distribution on `Q^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "JointDistJson", into = "JointDistJson")]
pub struct ExactJointDist {
    dim: usize,
    atoms: Vec<Atom>,
}

fn check_total(total: &Rational) -> Result<(), DistError> {
    if total.is_one() {
        Ok(())
    } else {
        Err(DistError::ProbabilityNotOne {
            total: format_rational(total),
            deficit: format_rational(&(Rational::one() - total)),
        })
    }
}

impl ExactJointDist {
    /// Builds a canonical distribution; repeated points have their masses summed.
    pub fn new<I>(dim: usize, raw: I) -> Result<Self, DistError>
    where
        I: IntoIterator<Item = (Vec<Rational>, Rational)>,
    {
        if dim == 0 {
            return Err(DistError::ZeroDimension);
        }
        let mut merged: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        for (point, prob) in raw {
            if point.len() != dim {
                return Err(DistError::DimensionMismatch {
                    expected: dim,
                    found: point.len(),
                });
            }
            if prob.is_negative() {
                return Err(DistError::NegativeProbability {
                    point: PointDisplay(&point).to_string(),
                    prob: format_rational(&prob),
                });
            }
            *merged.entry(point).or_insert_with(Rational::zero) += prob;
        }
        Self::from_sorted_map(dim, merged)
    }

    fn from_sorted_map(dim: usize, merged: BTreeMap<Vec<Rational>, Rational>) -> Result<Self, DistError> {
        let atoms: Vec<Atom> = merged
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(point, prob)| Atom { point, prob })
            .collect();
        if atoms.is_empty() {
            return Err(DistError::Empty);
        }
        let total: Rational = atoms.iter().map(|a| &a.prob).sum();
        check_total(&total)?;
        Ok(ExactJointDist { dim, atoms })
    }

    /// Point mass at `point`.
    pub fn point_mass(point: Vec<Rational>) -> Self {
        let dim = point.len();
        assert!(dim > 0, "point mass needs a nonempty point");
        ExactJointDist {
            dim,
            atoms: vec![Atom {
                point,
                prob: Rational::one(),
            }],
        }
    }

    /// Uniform distribution over the given points (duplicates accumulate mass).
    pub fn uniform(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self, DistError> {
        let w = Rational::new(1.into(), points.len().max(1).into());
        Self::new(dim, points.into_iter().map(|p| (p, w.clone())))
    }

    /// Joint law of independent coordinates.
    pub fn product(factors: &[UnivariateDist]) -> Result<Self, DistError> {
        if factors.is_empty() {
            return Err(DistError::ZeroDimension);
        }
        let mut atoms: Vec<(Vec<Rational>, Rational)> = vec![(Vec::new(), Rational::one())];
        for f in factors {
            let mut next = Vec::with_capacity(atoms.len() * f.atoms.len());
            for (pt, p) in &atoms {
                for (v, q) in &f.atoms {
                    let mut np = pt.clone();
                    np.push(v.clone());
                    next.push((np, p * q));
                }
            }
            atoms = next;
        }
        Self::new(factors.len(), atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// pmf value at an arbitrary point (zero off the support).
    pub fn prob_at(&self, point: &[Rational]) -> Rational {
        match self
            .atoms
            .binary_search_by(|a| a.point.as_slice().cmp(point))
        {
            Ok(i) => self.atoms[i].prob.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn probability<F>(&self, event: F) -> Rational
    where
        F: Fn(&[Rational]) -> bool,
    {
        self.atoms
            .iter()
            .filter(|a| event(&a.point))
            .map(|a| &a.prob)
            .sum()
    }

    /// Image law under a signed coordinate permutation.
    pub fn transform(&self, map: &SignedPermutation) -> Self {
        assert_eq!(map.dim(), self.dim, "map dimension must match distribution");
        let mut atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|a| Atom {
                point: map.apply(&a.point),
                prob: a.prob.clone(),
            })
            .collect();
        atoms.sort();
        ExactJointDist { dim: self.dim, atoms }
    }

    pub fn equal(&self, other: &Self) -> Result<bool, DistError> {
        if self.dim != other.dim {
            return Err(DistError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self.atoms == other.atoms)
    }

    /// Marginal law of the coordinates listed in `indices` (1-based, kept in
    /// the given order).
    pub fn marginal(&self, indices: &[usize]) -> Result<Self, DistError> {
        if indices.is_empty() {
            return Err(DistError::EmptyIndexSet);
        }
        let mut seen = vec![false; self.dim];
        for &i in indices {
            if i == 0 || i > self.dim {
                return Err(DistError::IndexOutOfRange { index: i, dim: self.dim });
            }
            if std::mem::replace(&mut seen[i - 1], true) {
                return Err(DistError::DuplicateIndex { index: i });
            }
        }
        let mut merged: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        for a in &self.atoms {
            let p: Vec<Rational> = indices.iter().map(|&i| a.point[i - 1].clone()).collect();
            *merged.entry(p).or_insert_with(Rational::zero) += &a.prob;
        }
        Self::from_sorted_map(indices.len(), merged)
    }

    /// Law of the first `len` coordinates.
    pub fn prefix(&self, len: usize) -> Result<Self, DistError> {
        let idx: Vec<usize> = (1..=len).collect();
        self.marginal(&idx)
    }

    /// Law of `f(X)` for a scalar statistic `f`.
    pub fn pushforward<F>(&self, f: F) -> UnivariateDist
    where
        F: Fn(&[Rational]) -> Rational,
    {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for a in &self.atoms {
            *merged.entry(f(&a.point)).or_insert_with(Rational::zero) += &a.prob;
        }
        UnivariateDist {
            atoms: merged.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        }
    }

    /// Law of coordinate `i` (1-based).
    pub fn coordinate(&self, i: usize) -> Result<UnivariateDist, DistError> {
        if i == 0 || i > self.dim {
            return Err(DistError::IndexOutOfRange { index: i, dim: self.dim });
        }
        Ok(self.pushforward(|p| p[i - 1].clone()))
    }

    /// Equal-weight mixture `(self + other) / 2`.
    pub fn average(&self, other: &Self) -> Result<Self, DistError> {
        if self.dim != other.dim {
            return Err(DistError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let half = Rational::new(1.into(), 2.into());
        Self::new(
            self.dim,
            self.atoms
                .iter()
                .chain(&other.atoms)
                .map(|a| (a.point.clone(), &a.prob * &half)),
        )
    }
}

/// Signed coordinate permutation: output coordinate `i` is
/// `±x[source[i]]`, negated when `negate[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    source: Vec<usize>,
    negate: Vec<bool>,
}

impl SignedPermutation {
    /// `source` is 0-based.
    pub fn new(source: Vec<usize>, negate: Vec<bool>) -> Result<Self, DistError> {
        let n = source.len();
        if negate.len() != n || n == 0 {
            return Err(DistError::NotBijection);
        }
        let mut seen = vec![false; n];
        for &s in &source {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(DistError::NotBijection);
            }
        }
        Ok(SignedPermutation { source, negate })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            source: (0..n).collect(),
            negate: vec![false; n],
        }
    }

    pub fn negate_all(n: usize) -> Self {
        SignedPermutation {
            source: (0..n).collect(),
            negate: vec![true; n],
        }
    }

    /// Negates coordinate `i` (1-based).
    pub fn flip(n: usize, i: usize) -> Self {
        let mut m = Self::identity(n);
        m.negate[i - 1] = true;
        m
    }

    /// Swaps coordinates `i` and `j` (1-based).
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::identity(n);
        m.source.swap(i - 1, j - 1);
        m
    }

    /// `(x_k, x_l) -> (-x_l, -x_k)` with 1-based `k != l`.
    pub fn reverse_pair(n: usize, k: usize, l: usize) -> Self {
        assert!(k != l && k >= 1 && l >= 1 && k <= n && l <= n);
        let mut m = Self::identity(n);
        m.source[k - 1] = l - 1;
        m.source[l - 1] = k - 1;
        m.negate[k - 1] = true;
        m.negate[l - 1] = true;
        m
    }

    pub fn dim(&self) -> usize {
        self.source.len()
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.source
            .iter()
            .zip(&self.negate)
            .map(|(&s, &neg)| if neg { -&x[s] } else { x[s].clone() })
            .collect()
    }

    /// Generic version of [`apply`](Self::apply) for floating-point points.
    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        self.source
            .iter()
            .zip(&self.negate)
            .map(|(&s, &neg)| if neg { -x[s] } else { x[s] })
            .collect()
    }

    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let mut source = vec![0; n];
        let mut negate = vec![false; n];
        for (i, (&s, &neg)) in self.source.iter().zip(&self.negate).enumerate() {
            source[s] = i;
            negate[s] = neg;
        }
        SignedPermutation { source, negate }
    }

    /// Restriction to coordinates that the map keeps among `kept` (0-based,
    /// ascending); `None` if some kept output draws from a dropped input.
    pub fn restrict(&self, kept: &[usize]) -> Option<Self> {
        let mut source = Vec::with_capacity(kept.len());
        let mut negate = Vec::with_capacity(kept.len());
        for &i in kept {
            let pos = kept.iter().position(|&k| k == self.source[i])?;
            source.push(pos);
            negate.push(self.negate[i]);
        }
        Self::new(source, negate).ok()
    }
}

/// Finite discrete law on `Q`, atoms strictly increasing in value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "UnivariateJson", into = "UnivariateJson")]
pub struct UnivariateDist {
    atoms: Vec<(Rational, Rational)>,
}

impl UnivariateDist {
    pub fn new<I>(raw: I) -> Result<Self, DistError>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (v, p) in raw {
            if p.is_negative() {
                return Err(DistError::NegativeProbability {
                    point: format_rational(&v),
                    prob: format_rational(&p),
                });
            }
            *merged.entry(v).or_insert_with(Rational::zero) += p;
        }
        let atoms: Vec<_> = merged.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if atoms.is_empty() {
            return Err(DistError::Empty);
        }
        let total: Rational = atoms.iter().map(|(_, p)| p).sum();
        check_total(&total)?;
        Ok(UnivariateDist { atoms })
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = &Rational> {
        self.atoms.iter().map(|(v, _)| v)
    }

    pub fn prob_at(&self, v: &Rational) -> Rational {
        match self.atoms.binary_search_by(|(a, _)| a.cmp(v)) {
            Ok(i) => self.atoms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// `P[Z <= x]`, right-continuous.
    pub fn cdf(&self, x: &Rational) -> Rational {
        self.atoms
            .iter()
            .take_while(|(v, _)| v <= x)
            .map(|(_, p)| p)
            .sum()
    }

    /// `(x, F(x))` at every support point and every extra point, ascending.
    pub fn cdf_table(&self, extra: &[Rational]) -> Vec<(Rational, Rational)> {
        let mut xs: Vec<Rational> = self.support().cloned().chain(extra.iter().cloned()).collect();
        xs.sort();
        xs.dedup();
        let mut acc = Rational::zero();
        let mut j = 0;
        xs.into_iter()
            .map(|x| {
                while j < self.atoms.len() && self.atoms[j].0 <= x {
                    acc += &self.atoms[j].1;
                    j += 1;
                }
                (x, acc.clone())
            })
            .collect()
    }

    pub fn abs(&self) -> Self {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (v, p) in &self.atoms {
            *merged.entry(v.abs()).or_insert_with(Rational::zero) += p;
        }
        UnivariateDist {
            atoms: merged.into_iter().collect(),
        }
    }

    pub fn negate(&self) -> Self {
        UnivariateDist {
            atoms: self.atoms.iter().rev().map(|(v, p)| (-v, p.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.negate()
    }

    /// Symmetric law `X` with the given law of `|X|` (mass at `a > 0` split
    /// evenly between `±a`). Negative support values are rejected.
    pub fn symmetrize_abs(abs: &UnivariateDist) -> Result<Self, DistError> {
        let half = Rational::new(1.into(), 2.into());
        let mut raw = Vec::new();
        for (v, p) in &abs.atoms {
            if v.is_negative() {
                return Err(DistError::NegativeProbability {
                    point: format_rational(v),
                    prob: format_rational(p),
                });
            }
            if v.is_zero() {
                raw.push((v.clone(), p.clone()));
            } else {
                raw.push((v.clone(), p * &half));
                raw.push((-v, p * &half));
            }
        }
        Self::new(raw)
    }

    pub fn to_joint(&self) -> ExactJointDist {
        ExactJointDist {
            dim: 1,
            atoms: self
                .atoms
                .iter()
                .map(|(v, p)| Atom {
                    point: vec![v.clone()],
                    prob: p.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&ExactJointDist> for UnivariateDist {
    type Error = DistError;

    fn try_from(d: &ExactJointDist) -> Result<Self, DistError> {
        if d.dim != 1 {
            return Err(DistError::DimensionMismatch {
                expected: 1,
                found: d.dim,
            });
        }
        d.coordinate(1)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    #[serde(with = "serde_rat_vec")]
    pub x: Vec<Rational>,
    #[serde(with = "serde_rat")]
    pub p: Rational,
}

/// Wire form `{"dim": n, "atoms": [{"x": ["a/b", ...], "p": "a/b"}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointDistJson {
    pub dim: usize,
    pub atoms: Vec<AtomJson>,
}

impl TryFrom<JointDistJson> for ExactJointDist {
    type Error = DistError;

    fn try_from(j: JointDistJson) -> Result<Self, DistError> {
        ExactJointDist::new(j.dim, j.atoms.into_iter().map(|a| (a.x, a.p)))
    }
}

impl From<ExactJointDist> for JointDistJson {
    fn from(d: ExactJointDist) -> Self {
        JointDistJson {
            dim: d.dim,
            atoms: d
                .atoms
                .into_iter()
                .map(|a| AtomJson { x: a.point, p: a.prob })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValueJson {
    #[serde(with = "serde_rat")]
    pub v: Rational,
    #[serde(with = "serde_rat")]
    pub p: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnivariateJson {
    pub atoms: Vec<ValueJson>,
}

impl TryFrom<UnivariateJson> for UnivariateDist {
    type Error = DistError;

    fn try_from(j: UnivariateJson) -> Result<Self, DistError> {
        UnivariateDist::new(j.atoms.into_iter().map(|a| (a.v, a.p)))
    }
}

impl From<UnivariateDist> for UnivariateJson {
    fn from(u: UnivariateDist) -> Self {
        UnivariateJson {
            atoms: u.atoms.into_iter().map(|(v, p)| ValueJson { v, p }).collect(),
        }
    }
}
