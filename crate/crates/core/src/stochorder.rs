//! First-order stochastic comparison of exact laws and classification of
//! the prefix chains `|max(X_1..X_l)|`, `|min(X_1..X_l)|`, `l = 1..n`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::dist::{Atom, ExactJointDist, UnivariateDist};
use crate::extremes::{abs_extreme_dist, Extreme};
use crate::rational::{format_rational, serde_rat, serde_rat_vec, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("need at least {required} coordinates, found {found}")]
    TooFewCoordinates { required: usize, found: usize },
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    /// `F_u >= F_v` everywhere, strictly somewhere.
    StrictlyLess,
    StrictlyGreater,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderVerdict {
    pub relation: Relation,
    /// Thresholds where the cdfs differ: the first strict point for strict
    /// relations; for `incomparable`, one point with `F_u > F_v` and one with
    /// `F_u < F_v`, ascending.
    #[serde(with = "serde_rat_vec")]
    pub witnesses: Vec<Rational>,
}

impl OrderVerdict {
    /// `u <=_st v`.
    pub fn is_le(&self) -> bool {
        matches!(self.relation, Relation::Equal | Relation::StrictlyLess)
    }

    pub fn is_ge(&self) -> bool {
        matches!(self.relation, Relation::Equal | Relation::StrictlyGreater)
    }
}

/// Exact comparison of two laws over the union of their supports (cdfs are
/// step functions, so these breakpoints decide everything).
pub fn st_compare(u: &UnivariateDist, v: &UnivariateDist) -> OrderVerdict {
    let mut xs: Vec<&Rational> = u.support().chain(v.support()).collect();
    xs.sort();
    xs.dedup();
    let (mut fu, mut fv) = (Rational::zero(), Rational::zero());
    let (mut iu, mut iv) = (0, 0);
    let (ua, va) = (u.atoms(), v.atoms());
    let mut u_above: Option<Rational> = None;
    let mut v_above: Option<Rational> = None;
    for x in xs {
        while iu < ua.len() && ua[iu].0 <= *x {
            fu += &ua[iu].1;
            iu += 1;
        }
        while iv < va.len() && va[iv].0 <= *x {
            fv += &va[iv].1;
            iv += 1;
        }
        if fu > fv && u_above.is_none() {
            u_above = Some(x.clone());
        } else if fu < fv && v_above.is_none() {
            v_above = Some(x.clone());
        }
        if u_above.is_some() && v_above.is_some() {
            break;
        }
    }
    match (u_above, v_above) {
        (None, None) => OrderVerdict {
            relation: Relation::Equal,
            witnesses: vec![],
        },
        (Some(a), None) => OrderVerdict {
            relation: Relation::StrictlyLess,
            witnesses: vec![a],
        },
        (None, Some(b)) => OrderVerdict {
            relation: Relation::StrictlyGreater,
            witnesses: vec![b],
        },
        (Some(a), Some(b)) => {
            let mut w = vec![a, b];
            w.sort();
            OrderVerdict {
                relation: Relation::Incomparable,
                witnesses: w,
            }
        }
    }
}

/// A monotonicity family for one prefix chain: `S` prefix for strict steps,
/// `*` suffix when the first step is an exact equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Label {
    pub kind: Extreme,
    pub strict: bool,
    pub starred: bool,
}

impl Label {
    pub const fn new(kind: Extreme, strict: bool, starred: bool) -> Self {
        Label { kind, strict, starred }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            Extreme::Max => "SIAMX",
            Extreme::Min => "SIAMN",
        };
        write!(
            f,
            "{}{}{}",
            if self.strict { "S" } else { "" },
            base,
            if self.starred { "*" } else { "" }
        )
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn serialize_label<S: Serializer>(label: &Option<Label>, s: S) -> Result<S::Ok, S::Error> {
    match label {
        Some(l) => s.collect_str(l),
        None => s.serialize_str("none"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    /// Compares prefix `l - 1` (left) against prefix `l` (right).
    pub l: usize,
    #[serde(flatten)]
    pub verdict: OrderVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub kind: Extreme,
    /// Law of the absolute extreme of each prefix, `l = 1..n`.
    pub prefix_laws: Vec<UnivariateDist>,
    pub steps: Vec<Step>,
    #[serde(serialize_with = "serialize_label")]
    pub label: Option<Label>,
    /// Every family the chain belongs to (the label is the most specific).
    pub memberships: Vec<Label>,
}

impl Chain {
    fn build(d: &ExactJointDist, kind: Extreme) -> Self {
        let n = d.dim();
        let prefix_laws: Vec<UnivariateDist> = (1..=n)
            .map(|l| abs_extreme_dist(d, l, kind).expect("prefix within range"))
            .collect();
        let steps: Vec<Step> = (2..=n)
            .map(|l| Step {
                l,
                verdict: st_compare(&prefix_laws[l - 2], &prefix_laws[l - 1]),
            })
            .collect();

        let le = |s: &Step| s.verdict.is_le();
        let lt = |s: &Step| s.verdict.relation == Relation::StrictlyLess;
        let first_equal = steps.first().is_some_and(|s| s.verdict.relation == Relation::Equal);
        let rest = steps.get(1..).unwrap_or(&[]);

        let mut memberships = Vec::new();
        if first_equal && !rest.is_empty() && rest.iter().all(lt) {
            memberships.push(Label::new(kind, true, true));
        }
        if steps.iter().all(lt) && !steps.is_empty() {
            memberships.push(Label::new(kind, true, false));
        }
        if first_equal && rest.iter().all(le) {
            memberships.push(Label::new(kind, false, true));
        }
        if steps.iter().all(le) {
            memberships.push(Label::new(kind, false, false));
        }
        Chain {
            kind,
            prefix_laws,
            steps,
            label: memberships.first().copied(),
            memberships,
        }
    }

    pub fn satisfies(&self, label: Label) -> bool {
        self.memberships.contains(&label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceClassification {
    pub dim: usize,
    #[serde(serialize_with = "serialize_label")]
    pub label_max: Option<Label>,
    #[serde(serialize_with = "serialize_label")]
    pub label_min: Option<Label>,
    pub max_chain: Chain,
    pub min_chain: Chain,
}

pub fn classify(d: &ExactJointDist) -> Result<SequenceClassification, OrderError> {
    if d.dim() < 2 {
        return Err(OrderError::TooFewCoordinates {
            required: 2,
            found: d.dim(),
        });
    }
    let (max_chain, min_chain) = rayon_join(|| Chain::build(d, Extreme::Max), || Chain::build(d, Extreme::Min));
    Ok(SequenceClassification {
        dim: d.dim(),
        label_max: max_chain.label,
        label_min: min_chain.label,
        max_chain,
        min_chain,
    })
}

#[cfg(feature = "parallel")]
fn rayon_join<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
fn rayon_join<A, B>(a: impl FnOnce() -> A, b: impl FnOnce() -> B) -> (A, B) {
    (a(), b())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrictMode {
    /// `X_m > max(|X_i| : i != m)`
    Above,
    /// `X_m < -max(|X_i| : i != m)`
    Below,
}

fn max_abs_except(p: &[Rational], skip: usize) -> Rational {
    p.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, v)| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

fn strict_event(p: &[Rational], m: usize, mode: StrictMode) -> bool {
    let bound = max_abs_except(p, m - 1);
    match mode {
        StrictMode::Above => p[m - 1] > bound,
        StrictMode::Below => p[m - 1] < -bound,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrictnessWitness {
    #[serde(with = "serde_rat_vec")]
    pub point: Vec<Rational>,
    #[serde(with = "serde_rat")]
    pub prob: Rational,
    /// Total probability of the event.
    #[serde(with = "serde_rat")]
    pub event_prob: Rational,
}

/// First atom (canonical order) realizing the strictness event for
/// coordinate `m` (1-based), or `None` when the event is null.
pub fn strictness_witness(d: &ExactJointDist, m: usize, mode: StrictMode) -> Result<Option<StrictnessWitness>, OrderError> {
    if m == 0 || m > d.dim() {
        return Err(OrderError::IndexOutOfRange { index: m, dim: d.dim() });
    }
    let hit: Vec<&Atom> = d.atoms().iter().filter(|a| strict_event(&a.point, m, mode)).collect();
    Ok(hit.first().map(|a| StrictnessWitness {
        point: a.point.clone(),
        prob: a.prob.clone(),
        event_prob: hit.iter().map(|a| &a.prob).sum(),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    #[serde(with = "serde_rat")]
    pub lhs: Rational,
    #[serde(with = "serde_rat")]
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Positivity {
    pub l: usize,
    #[serde(with = "serde_rat")]
    pub prob: Rational,
    pub holds: bool,
}

/// Exact evaluation of the side conditions for strict monotonicity of the
/// `|max|` and `|min|` chains under one-sided reflection conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrictChainConditions {
    /// `P[X_2 > |X_1|] > P[X_1 < -|X_2|]`
    pub first_step_max: Comparison,
    /// `P[X_l > max(|X_1|..|X_{l-1}|)] > 0`, `l = 3..n`
    pub later_steps_max: Vec<Positivity>,
    /// `P[|X_2| < X_1] < P[X_2 < -|X_1|]`
    pub first_step_min: Comparison,
    /// Whether the opposite inequality `P[|X_2| < X_1] > P[X_2 < -|X_1|]` holds.
    pub first_step_min_reversed: bool,
    /// `P[X_l < -min(|X_1|..|X_{l-1}|)] > 0`, `l = 3..n`
    pub later_steps_min: Vec<Positivity>,
    /// `P[X_l < -max(|X_1|..|X_{l-1}|)] > 0`, `l = 3..n`
    pub later_steps_min_max_form: Vec<Positivity>,
    pub ssiamx_preconditions: bool,
    pub ssiamn_preconditions: bool,
    pub ssiamn_preconditions_max_form: bool,
}

pub fn strict_chain_conditions(d: &ExactJointDist) -> Result<StrictChainConditions, OrderError> {
    let n = d.dim();
    if n < 2 {
        return Err(OrderError::TooFewCoordinates { required: 2, found: n });
    }
    let pr = |f: &dyn Fn(&[Rational]) -> bool| d.probability(f);

    let lhs = pr(&|p| p[1] > p[0].abs());
    let rhs = pr(&|p| p[0] < -p[1].abs());
    let first_step_max = Comparison {
        holds: lhs > rhs,
        lhs,
        rhs,
    };
    let lhs = pr(&|p| p[1].abs() < p[0]);
    let rhs = pr(&|p| p[1] < -p[0].abs());
    let first_step_min_reversed = lhs > rhs;
    let first_step_min = Comparison {
        holds: lhs < rhs,
        lhs,
        rhs,
    };

    let positivity = |event: &dyn Fn(&[Rational], usize) -> bool| -> Vec<Positivity> {
        (3..=n)
            .map(|l| {
                let prob = pr(&|p| event(p, l));
                Positivity {
                    l,
                    holds: prob.is_positive(),
                    prob,
                }
            })
            .collect()
    };
    let later_steps_max = positivity(&|p, l| p[l - 1] > max_abs_except(&p[..l], l - 1));
    let later_steps_min_max_form = positivity(&|p, l| p[l - 1] < -max_abs_except(&p[..l], l - 1));
    let later_steps_min = positivity(&|p, l| {
        let m = p[..l - 1].iter().map(|v| v.abs()).min().expect("l >= 3");
        p[l - 1] < -m
    });

    let all = |v: &[Positivity]| v.iter().all(|c| c.holds);
    Ok(StrictChainConditions {
        ssiamx_preconditions: first_step_max.holds && all(&later_steps_max),
        ssiamn_preconditions: first_step_min.holds && all(&later_steps_min),
        ssiamn_preconditions_max_form: first_step_min.holds && all(&later_steps_min_max_form),
        first_step_max,
        later_steps_max,
        first_step_min,
        first_step_min_reversed,
        later_steps_min,
        later_steps_min_max_form,
    })
}

impl fmt::Display for OrderVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.relation)?;
        for w in &self.witnesses {
            write!(f, " @{}", format_rational(w))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn axes(n: usize) -> ExactJointDist {
        let mut pts = Vec::new();
        for i in 0..n {
            for s in [-1, 1] {
                let mut p = vec![0; n];
                p[i] = s;
                pts.push(pt(&p));
            }
        }
        ExactJointDist::uniform(n, pts).unwrap()
    }

    fn uni(v: &[(i64, Rational)]) -> UnivariateDist {
        UnivariateDist::new(v.iter().map(|(x, p)| (int(*x), p.clone()))).unwrap()
    }

    #[test]
    fn compare_examples() {
        let u = uni(&[(0, rat(1, 2)), (2, rat(1, 2))]);
        assert_eq!(st_compare(&u, &u).relation, Relation::Equal);

        let v = uni(&[(1, int(1))]);
        let c = st_compare(&u, &v);
        assert_eq!(c.relation, Relation::Incomparable);
        assert_eq!(c.witnesses, vec![int(0), int(1)]);

        let a = uni(&[(0, rat(2, 3)), (1, rat(1, 3))]);
        let b = uni(&[(0, rat(1, 2)), (1, rat(1, 2))]);
        let c = st_compare(&a, &b);
        assert_eq!(c.relation, Relation::StrictlyLess);
        assert_eq!(c.witnesses, vec![int(0)]);
        assert_eq!(st_compare(&b, &a).relation, Relation::StrictlyGreater);
    }

    #[test]
    fn axes_chain() {
        let c = classify(&axes(4)).unwrap();
        assert_eq!(c.label_max.unwrap().to_string(), "SSIAMX*");
        assert_eq!(c.label_min.unwrap().to_string(), "SSIAMN*");
        assert_eq!(c.max_chain.steps[0].verdict.relation, Relation::Equal);
        assert!(c.max_chain.satisfies(Label::new(Extreme::Max, false, false)));
        assert!(!c.max_chain.satisfies(Label::new(Extreme::Max, true, false)));
    }

    #[test]
    fn degenerate_iid_chain_is_not_strict() {
        let pm = uni(&[(-1, rat(1, 2)), (1, rat(1, 2))]);
        let d = ExactJointDist::product(&[pm.clone(), pm.clone(), pm]).unwrap();
        let c = classify(&d).unwrap();
        assert_eq!(c.label_max.unwrap().to_string(), "SIAMX*");
        assert_eq!(c.label_min.unwrap().to_string(), "SIAMN*");
    }

    #[test]
    fn non_monotone_chain_has_no_label() {
        // deterministic sequence starting -1, 0
        let d = ExactJointDist::point_mass(pt(&[-1, 0]));
        let c = classify(&d).unwrap();
        assert_eq!(c.label_max, None);
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["label_max"], "none");
        assert!(classify(&ExactJointDist::point_mass(pt(&[1]))).is_err());
    }

    #[test]
    fn strictness_witnesses() {
        let w = strictness_witness(&axes(3), 3, StrictMode::Above).unwrap().unwrap();
        assert_eq!(w.point, pt(&[0, 0, 1]));
        assert_eq!(w.prob, rat(1, 6));
        assert_eq!(
            strictness_witness(&ExactJointDist::point_mass(pt(&[0, 0])), 1, StrictMode::Below).unwrap(),
            None
        );
        let remark = ExactJointDist::uniform(
            3,
            vec![pt(&[-1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, -1, 1]), pt(&[1, 0, 1])],
        )
        .unwrap();
        // X_3 = 1 never exceeds max(|X_1|, |X_2|) = 1 on this support
        assert_eq!(strictness_witness(&remark, 3, StrictMode::Above).unwrap(), None);
        assert!(strictness_witness(&remark, 4, StrictMode::Above).is_err());
    }

    #[test]
    fn conditions_on_point_mass_all_fail() {
        let r = strict_chain_conditions(&ExactJointDist::point_mass(pt(&[0, 0, 0]))).unwrap();
        assert!(!r.first_step_max.holds);
        assert!(!r.first_step_min.holds);
        assert!(r.later_steps_max.iter().all(|c| !c.holds));
        assert!(r.later_steps_min.iter().all(|c| !c.holds));
        assert!(!r.ssiamx_preconditions && !r.ssiamn_preconditions);
    }
}
