//! Decision procedures for the reflection symmetries of a discrete joint law.
//!
//! Every check returns a [`SymmetryVerdict`]; a failing verdict carries a
//! witness point whose pmf value disagrees with the pmf at its image.
//!
//! Coordinates are 1-based throughout. "Upper" refers to the half-plane
//! above the diagonal (`y > x`, resp. `x_l > |x_k|`), "lower" to the one
//! below it.

use std::fmt;

use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::dist::{ExactJointDist, SignedPermutation};
use crate::rational::{serde_rat, serde_rat_vec, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("indices (k, l) = ({k}, {l}) must satisfy 1 <= k < l <= {dim}")]
    IndexOutOfRange { k: usize, l: usize, dim: usize },
    #[error("{condition} requires dimension {required}, found {found}")]
    DimensionMismatch {
        condition: String,
        required: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

/// One-sided reflection inequalities: `sub` requires `f(x) >= f(Tx)` on the
/// region, `sup` requires `f(x) <= f(Tx)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubSuper {
    UrSub,
    LrSub,
    UrSup,
    LrSup,
}

impl SubSuper {
    pub fn side(self) -> Side {
        match self {
            SubSuper::UrSub | SubSuper::UrSup => Side::Upper,
            SubSuper::LrSub | SubSuper::LrSup => Side::Lower,
        }
    }

    pub fn is_sub(self) -> bool {
        matches!(self, SubSuper::UrSub | SubSuper::LrSub)
    }

    fn tag(self) -> &'static str {
        match self {
            SubSuper::UrSub => "UR_E",
            SubSuper::LrSub => "LR_E",
            SubSuper::UrSup => "UR^E",
            SubSuper::LrSup => "LR^E",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Bivariate reverse exchangeability.
    Re,
    /// Exchangeable: invariant under all coordinate permutations.
    Exchangeable,
    /// Sign-change invariant: invariant under all coordinate sign flips.
    Sci,
    Esci,
    /// Bivariate: exchangeable and reverse exchangeable.
    Ere,
    Ure,
    Lre,
    ReKl { k: usize, l: usize },
    /// `RE(k, n)` for some `k < n`.
    ReN,
    SubSuperKl { variant: SubSuper, k: usize, l: usize },
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Re => write!(f, "RE"),
            Condition::Exchangeable => write!(f, "E"),
            Condition::Sci => write!(f, "SCI"),
            Condition::Esci => write!(f, "ESCI"),
            Condition::Ere => write!(f, "ERE"),
            Condition::Ure => write!(f, "URE"),
            Condition::Lre => write!(f, "LRE"),
            Condition::ReKl { k, l } => write!(f, "RE({k},{l})"),
            Condition::ReN => write!(f, "RE(n)"),
            Condition::SubSuperKl { variant, k, l } => write!(f, "{}({k},{l})", variant.tag()),
        }
    }
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A point and its image whose pmf values violate the condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(with = "serde_rat_vec")]
    pub point: Vec<Rational>,
    #[serde(with = "serde_rat")]
    pub prob: Rational,
    #[serde(with = "serde_rat_vec")]
    pub image: Vec<Rational>,
    #[serde(with = "serde_rat")]
    pub image_prob: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryVerdict {
    pub condition: Condition,
    pub holds: bool,
    pub witness: Option<Witness>,
    /// For `RE(n)`: the `(k, n)` pair found to hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
}

impl SymmetryVerdict {
    fn from_witness(condition: Condition, witness: Option<Witness>) -> Self {
        SymmetryVerdict {
            condition,
            holds: witness.is_none(),
            witness,
            pair: None,
        }
    }
}

fn check_pair(d: &ExactJointDist, k: usize, l: usize) -> Result<(), SymmetryError> {
    if k == 0 || k >= l || l > d.dim() {
        return Err(SymmetryError::IndexOutOfRange { k, l, dim: d.dim() });
    }
    Ok(())
}

fn require_dim(d: &ExactJointDist, condition: Condition, required: usize) -> Result<(), SymmetryError> {
    if d.dim() != required {
        return Err(SymmetryError::DimensionMismatch {
            condition: condition.to_string(),
            required,
            found: d.dim(),
        });
    }
    Ok(())
}

/// First support point `x` (canonical order) with `f(x) != f(map x)`.
/// None iff the law is invariant under `map`.
pub fn invariance_witness(d: &ExactJointDist, map: &SignedPermutation) -> Option<Witness> {
    d.atoms().iter().find_map(|a| {
        let image = map.apply(&a.point);
        let image_prob = d.prob_at(&image);
        (image_prob != a.prob).then(|| Witness {
            point: a.point.clone(),
            prob: a.prob.clone(),
            image,
            image_prob,
        })
    })
}

pub fn check_re_kl(d: &ExactJointDist, k: usize, l: usize) -> Result<SymmetryVerdict, SymmetryError> {
    check_pair(d, k, l)?;
    let map = SignedPermutation::reverse_pair(d.dim(), k, l);
    let holds = d.transform(&map) == *d;
    let witness = invariance_witness(d, &map);
    debug_assert_eq!(holds, witness.is_none());
    Ok(SymmetryVerdict::from_witness(Condition::ReKl { k, l }, witness))
}

/// `RE(k, n)` for the first `k` in `1..n` that works.
pub fn check_re_n(d: &ExactJointDist) -> Result<SymmetryVerdict, SymmetryError> {
    let n = d.dim();
    if n < 2 {
        return Err(SymmetryError::DimensionMismatch {
            condition: Condition::ReN.to_string(),
            required: 2,
            found: n,
        });
    }
    let mut first_failure = None;
    for k in 1..n {
        let v = check_re_kl(d, k, n)?;
        if v.holds {
            return Ok(SymmetryVerdict {
                condition: Condition::ReN,
                holds: true,
                witness: None,
                pair: Some((k, n)),
            });
        }
        first_failure.get_or_insert(v.witness);
    }
    Ok(SymmetryVerdict::from_witness(Condition::ReN, first_failure.flatten()))
}

/// Pointwise reflection `f(a, b) = f(-b, -a)` on one side of the diagonal;
/// atoms on the diagonal are not constrained.
pub fn check_ure_lre(d: &ExactJointDist, side: Side) -> Result<SymmetryVerdict, SymmetryError> {
    let condition = match side {
        Side::Upper => Condition::Ure,
        Side::Lower => Condition::Lre,
    };
    require_dim(d, condition, 2)?;
    let map = SignedPermutation::reverse_pair(2, 1, 2);
    let witness = d
        .atoms()
        .iter()
        .filter(|a| match side {
            Side::Upper => a.point[0] < a.point[1],
            Side::Lower => a.point[0] > a.point[1],
        })
        .find_map(|a| {
            let image = map.apply(&a.point);
            let image_prob = d.prob_at(&image);
            (image_prob != a.prob).then(|| Witness {
                point: a.point.clone(),
                prob: a.prob.clone(),
                image,
                image_prob,
            })
        });
    Ok(SymmetryVerdict::from_witness(condition, witness))
}

fn first_witness(d: &ExactJointDist, maps: impl IntoIterator<Item = SignedPermutation>) -> Option<Witness> {
    maps.into_iter().find_map(|m| invariance_witness(d, &m))
}

// Adjacent transpositions generate all permutations, single flips generate
// all sign changes, so invariance under the generators is enough.
fn exchange_witness(d: &ExactJointDist) -> Option<Witness> {
    let n = d.dim();
    first_witness(d, (1..n).map(|i| SignedPermutation::swap(n, i, i + 1)))
}

fn sign_change_witness(d: &ExactJointDist) -> Option<Witness> {
    let n = d.dim();
    first_witness(d, (1..=n).map(|i| SignedPermutation::flip(n, i)))
}

/// E, SCI, ESCI (any dimension) and ERE (dimension 2).
pub fn check_basic(d: &ExactJointDist, condition: Condition) -> Result<SymmetryVerdict, SymmetryError> {
    let witness = match condition {
        Condition::Exchangeable => exchange_witness(d),
        Condition::Sci => sign_change_witness(d),
        Condition::Esci => exchange_witness(d).or_else(|| sign_change_witness(d)),
        Condition::Ere => {
            require_dim(d, condition, 2)?;
            exchange_witness(d).or_else(|| invariance_witness(d, &SignedPermutation::reverse_pair(2, 1, 2)))
        }
        other => return check(d, other),
    };
    Ok(SymmetryVerdict::from_witness(condition, witness))
}

/// Membership of `x` in the open region of the one-sided conditions:
/// upper is `|x_k| < x_l` and `x_i < -|x_k|` for `i != k, l`; lower is
/// `|x_l| < x_k` and `x_i < -|x_l|`.
pub fn in_sub_super_region<T>(x: &[T], k: usize, l: usize, side: Side) -> bool
where
    T: Signed + PartialOrd,
{
    let (small, big) = match side {
        Side::Upper => (&x[k - 1], &x[l - 1]),
        Side::Lower => (&x[l - 1], &x[k - 1]),
    };
    let bound = small.abs();
    if !(bound < *big) {
        return false;
    }
    let neg_bound = -bound;
    x.iter()
        .enumerate()
        .filter(|&(i, _)| i != k - 1 && i != l - 1)
        .all(|(_, xi)| *xi < neg_bound)
}

/// One-sided pmf inequality between a point and its `(k, l)` reflection,
/// over every support point or reflected support point in the open region.
pub fn check_sub_super_kl(
    d: &ExactJointDist,
    k: usize,
    l: usize,
    variant: SubSuper,
) -> Result<SymmetryVerdict, SymmetryError> {
    check_pair(d, k, l)?;
    let side = variant.side();
    let map = SignedPermutation::reverse_pair(d.dim(), k, l);
    let mut candidates: Vec<Vec<Rational>> = d
        .atoms()
        .iter()
        .flat_map(|a| [a.point.clone(), map.apply(&a.point)])
        .filter(|p| in_sub_super_region(p, k, l, side))
        .collect();
    candidates.sort();
    candidates.dedup();
    let witness = candidates.into_iter().find_map(|point| {
        let prob = d.prob_at(&point);
        let image = map.apply(&point);
        let image_prob = d.prob_at(&image);
        let ok = if variant.is_sub() {
            prob >= image_prob
        } else {
            prob <= image_prob
        };
        (!ok).then_some(Witness {
            point,
            prob,
            image,
            image_prob,
        })
    });
    Ok(SymmetryVerdict::from_witness(
        Condition::SubSuperKl { variant, k, l },
        witness,
    ))
}

/// Dispatches any [`Condition`].
pub fn check(d: &ExactJointDist, condition: Condition) -> Result<SymmetryVerdict, SymmetryError> {
    match condition {
        Condition::Re => {
            require_dim(d, condition, 2)?;
            let mut v = check_re_kl(d, 1, 2)?;
            v.condition = Condition::Re;
            Ok(v)
        }
        Condition::Exchangeable | Condition::Sci | Condition::Esci | Condition::Ere => check_basic(d, condition),
        Condition::Ure => check_ure_lre(d, Side::Upper),
        Condition::Lre => check_ure_lre(d, Side::Lower),
        Condition::ReKl { k, l } => check_re_kl(d, k, l),
        Condition::ReN => check_re_n(d),
        Condition::SubSuperKl { variant, k, l } => check_sub_super_kl(d, k, l, variant),
    }
}

/// Re-evaluates a witness against the pmf: true iff it exhibits a genuine
/// violation of `condition`.
pub fn witness_reproduces(d: &ExactJointDist, condition: Condition, w: &Witness) -> bool {
    let prob = d.prob_at(&w.point);
    let image_prob = d.prob_at(&w.image);
    if prob != w.prob || image_prob != w.image_prob {
        return false;
    }
    match condition {
        Condition::SubSuperKl { variant, .. } => {
            if variant.is_sub() {
                prob < image_prob
            } else {
                prob > image_prob
            }
        }
        _ => prob != image_prob,
    }
}
