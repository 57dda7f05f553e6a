//! Exact laws of `|max|` and `|min|` over coordinate prefixes, and the
//! five-region decomposition of the plane around the square `[-x, x]^2`.

use std::io;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dist::{ExactJointDist, UnivariateDist};
use crate::rational::{format_rational, serde_rat, Rational, Render};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtremesError {
    #[error("prefix length {len} out of range 1..={dim}")]
    PrefixOutOfRange { len: usize, dim: usize },
    #[error("threshold must be nonnegative, got {0}")]
    NegativeThreshold(String),
    #[error("region decomposition needs a bivariate law, found dimension {0}")]
    DimensionMismatch(usize),
    #[error("identity {identity} violated: {lhs} != {rhs}")]
    IdentityViolated {
        identity: &'static str,
        lhs: String,
        rhs: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Max,
    Min,
}

impl std::str::FromStr for Extreme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "max" => Ok(Extreme::Max),
            "min" => Ok(Extreme::Min),
            other => Err(format!("expected max or min, got {other:?}")),
        }
    }
}

fn extreme_of<'a>(mut it: impl Iterator<Item = &'a Rational>, kind: Extreme) -> Rational {
    let first = it.next().expect("nonempty coordinate set").clone();
    it.fold(first, |acc, v| match kind {
        Extreme::Max if *v > acc => v.clone(),
        Extreme::Min if *v < acc => v.clone(),
        _ => acc,
    })
}

/// Law of `|max(X_1..X_len)|` or `|min(X_1..X_len)|`.
pub fn abs_extreme_dist(d: &ExactJointDist, len: usize, kind: Extreme) -> Result<UnivariateDist, ExtremesError> {
    if len == 0 || len > d.dim() {
        return Err(ExtremesError::PrefixOutOfRange { len, dim: d.dim() });
    }
    Ok(d.pushforward(|p| extreme_of(p[..len].iter(), kind).abs()))
}

/// Law of `|max|`/`|min|` over an arbitrary nonempty set of 1-based indices.
pub fn abs_extreme_over(d: &ExactJointDist, indices: &[usize], kind: Extreme) -> Result<UnivariateDist, ExtremesError> {
    if indices.is_empty() {
        return Err(ExtremesError::PrefixOutOfRange { len: 0, dim: d.dim() });
    }
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > d.dim()) {
        return Err(ExtremesError::PrefixOutOfRange { len: bad, dim: d.dim() });
    }
    Ok(d.pushforward(|p| extreme_of(indices.iter().map(|&i| &p[i - 1]), kind).abs()))
}

/// Law of `|X_i|` (1-based).
pub fn abs_coordinate_dist(d: &ExactJointDist, i: usize) -> Result<UnivariateDist, ExtremesError> {
    abs_extreme_over(d, &[i], Extreme::Max)
}

/// Probabilities of the disjoint events
/// `N = {|X| <= x < Y}`, `S = {|X| <= x < -Y}`, `E = {|Y| <= x < X}`,
/// `W = {|Y| <= x < -X}` and `C = {|X| <= x, |Y| <= x}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionProbs {
    #[serde(with = "serde_rat")]
    pub x: Rational,
    #[serde(rename = "N", with = "serde_rat")]
    pub north: Rational,
    #[serde(rename = "S", with = "serde_rat")]
    pub south: Rational,
    #[serde(rename = "E", with = "serde_rat")]
    pub east: Rational,
    #[serde(rename = "W", with = "serde_rat")]
    pub west: Rational,
    #[serde(rename = "C", with = "serde_rat")]
    pub center: Rational,
}

pub fn region_probs(d: &ExactJointDist, x: &Rational) -> Result<RegionProbs, ExtremesError> {
    if d.dim() != 2 {
        return Err(ExtremesError::DimensionMismatch(d.dim()));
    }
    if x.is_negative() {
        return Err(ExtremesError::NegativeThreshold(format_rational(x)));
    }
    let mut r = RegionProbs {
        x: x.clone(),
        north: Rational::zero(),
        south: Rational::zero(),
        east: Rational::zero(),
        west: Rational::zero(),
        center: Rational::zero(),
    };
    let neg_x = -x;
    for a in d.atoms() {
        let (px, py) = (&a.point[0], &a.point[1]);
        let x_in = px.abs() <= *x;
        let y_in = py.abs() <= *x;
        let slot = if x_in && y_in {
            Some(&mut r.center)
        } else if x_in && py > x {
            Some(&mut r.north)
        } else if x_in && *py < neg_x {
            Some(&mut r.south)
        } else if y_in && px > x {
            Some(&mut r.east)
        } else if y_in && *px < neg_x {
            Some(&mut r.west)
        } else {
            None
        };
        if let Some(s) = slot {
            *s += &a.prob;
        }
    }
    Ok(r)
}

/// Region probabilities together with the four absolute cdfs at `x`,
/// each computed directly from the atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub regions: RegionProbs,
    #[serde(with = "serde_rat")]
    pub cdf_abs_x: Rational,
    #[serde(with = "serde_rat")]
    pub cdf_abs_y: Rational,
    #[serde(with = "serde_rat")]
    pub cdf_abs_max: Rational,
    #[serde(with = "serde_rat")]
    pub cdf_abs_min: Rational,
}

/// Checks the cdf/region identities exactly. An error here means a bug in
/// this crate, not a property of the input.
pub fn verify_region_identities(d: &ExactJointDist, x: &Rational) -> Result<RegionReport, ExtremesError> {
    let r = region_probs(d, x)?;
    let cdf_abs_x = abs_coordinate_dist(d, 1)?.cdf(x);
    let cdf_abs_y = abs_coordinate_dist(d, 2)?.cdf(x);
    let cdf_abs_max = abs_extreme_dist(d, 2, Extreme::Max)?.cdf(x);
    let cdf_abs_min = abs_extreme_dist(d, 2, Extreme::Min)?.cdf(x);

    let checks: [(&'static str, Rational, Rational); 8] = [
        ("F|X| = N + C + S", cdf_abs_x.clone(), &r.north + &r.center + &r.south),
        ("F|Y| = W + C + E", cdf_abs_y.clone(), &r.west + &r.center + &r.east),
        ("F|max| = W + C + S", cdf_abs_max.clone(), &r.west + &r.center + &r.south),
        ("F|min| = N + C + E", cdf_abs_min.clone(), &r.north + &r.center + &r.east),
        ("F|X| - F|max| = N - W", &cdf_abs_x - &cdf_abs_max, &r.north - &r.west),
        ("F|min| - F|Y| = N - W", &cdf_abs_min - &cdf_abs_y, &r.north - &r.west),
        ("F|X| - F|min| = S - E", &cdf_abs_x - &cdf_abs_min, &r.south - &r.east),
        ("F|max| - F|Y| = S - E", &cdf_abs_max - &cdf_abs_y, &r.south - &r.east),
    ];
    if let Some((identity, lhs, rhs)) = checks.into_iter().find(|(_, l, r)| l != r) {
        return Err(ExtremesError::IdentityViolated {
            identity,
            lhs: format_rational(&lhs),
            rhs: format_rational(&rhs),
        });
    }
    Ok(RegionReport {
        regions: r,
        cdf_abs_x,
        cdf_abs_y,
        cdf_abs_max,
        cdf_abs_min,
    })
}

/// Writes a `x,F` table.
pub fn write_cdf_csv<W: io::Write>(mut w: W, table: &[(Rational, Rational)], render: Render) -> io::Result<()> {
    writeln!(w, "x,F")?;
    for (x, f) in table {
        writeln!(w, "{},{}", render.show(x), render.show(f))?;
    }
    Ok(())
}
