//! Random rational laws and symmetrizers shared by the integration tests.
#![allow(dead_code)]

use num_traits::Signed;
use rand::Rng;
use stochex::rational::{int, rat};
use stochex::{ExactJointDist, Rational, SignedPermutation, UnivariateDist};

/// Builds a law from integer points and positive integer weights.
pub fn pmf_from_raw(dim: usize, raw: &[(Vec<i64>, u32)]) -> ExactJointDist {
    let total: u64 = raw.iter().map(|(_, w)| *w as u64).sum();
    ExactJointDist::new(
        dim,
        raw.iter()
            .map(|(p, w)| (p.iter().map(|&v| int(v)).collect(), rat(*w as i64, total as i64))),
    )
    .expect("weights normalize to one")
}

/// Up to `max_atoms` atoms with coordinates in `-range..=range` and
/// weights in `1..=9`.
pub fn random_pmf(rng: &mut impl Rng, dim: usize, range: i64, max_atoms: usize) -> ExactJointDist {
    let k = rng.random_range(1..=max_atoms);
    let raw: Vec<(Vec<i64>, u32)> = (0..k)
        .map(|_| {
            let p = (0..dim).map(|_| rng.random_range(-range..=range)).collect();
            (p, rng.random_range(1..=9))
        })
        .collect();
    pmf_from_raw(dim, &raw)
}

/// Symmetric law on `{-range..range}` with a random number of support points.
pub fn random_symmetric(rng: &mut impl Rng, range: i64) -> UnivariateDist {
    let abs = random_abs(rng, range);
    UnivariateDist::symmetrize_abs(&abs).expect("nonnegative support")
}

/// Law on `{0..range}` with random positive weights on a random subset.
pub fn random_abs(rng: &mut impl Rng, range: i64) -> UnivariateDist {
    loop {
        let mut raw: Vec<(i64, u32)> = Vec::new();
        for v in 0..=range {
            if rng.random_bool(0.6) {
                raw.push((v, rng.random_range(1..=9)));
            }
        }
        if raw.is_empty() {
            continue;
        }
        let total: i64 = raw.iter().map(|(_, w)| *w as i64).sum();
        return UnivariateDist::new(raw.into_iter().map(|(v, w)| (int(v), rat(w as i64, total)))).unwrap();
    }
}

/// `a` after `b`, decoded by pushing the generic point `(1, 2, .., n)`.
pub fn compose(a: &SignedPermutation, b: &SignedPermutation) -> SignedPermutation {
    let n = a.dim();
    let probe: Vec<Rational> = (1..=n as i64).map(int).collect();
    let out = a.apply(&b.apply(&probe));
    let source = out.iter().map(|v| v.abs().to_integer().try_into().map(|s: usize| s - 1).unwrap()).collect();
    let negate = out.iter().map(|v| *v < Rational::from_integer(0.into())).collect();
    SignedPermutation::new(source, negate).unwrap()
}

/// The finite group generated by `gens`.
pub fn group(gens: &[SignedPermutation]) -> Vec<SignedPermutation> {
    let n = gens[0].dim();
    let mut elems = vec![SignedPermutation::identity(n)];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let c = compose(g, &elems[i]);
            if !elems.contains(&c) {
                elems.push(c);
            }
        }
        i += 1;
    }
    elems
}

/// Uniform mixture of the images of `d` under the group generated by `gens`.
pub fn symmetrize(d: &ExactJointDist, gens: &[SignedPermutation]) -> ExactJointDist {
    let g = group(gens);
    let w = rat(1, g.len() as i64);
    ExactJointDist::new(
        d.dim(),
        g.iter()
            .flat_map(|m| d.transform(m).atoms().to_vec())
            .map(|a| (a.point, &a.prob * &w)),
    )
    .unwrap()
}

/// Makes `prob(a, b) = prob(-b, -a)` on the upper (`b > a`) or lower
/// (`b < a`) half plane only, leaving the other half and the diagonal alone.
pub fn symmetrize_half(d: &ExactJointDist, upper: bool) -> ExactJointDist {
    let refl = SignedPermutation::reverse_pair(2, 1, 2);
    let in_half = |p: &[Rational]| if upper { p[1] > p[0] } else { p[1] < p[0] };
    let half = rat(1, 2);
    let mut raw = Vec::new();
    for a in d.atoms() {
        if in_half(&a.point) {
            raw.push((a.point.clone(), &a.prob * &half));
            raw.push((refl.apply(&a.point), &a.prob * &half));
        } else {
            raw.push((a.point.clone(), a.prob.clone()));
        }
    }
    ExactJointDist::new(2, raw).unwrap()
}

/// Product of symmetric factors whose absolute laws are the given ones.
pub fn symmetric_product(abs: &[UnivariateDist]) -> ExactJointDist {
    let factors: Vec<UnivariateDist> = abs.iter().map(|a| UnivariateDist::symmetrize_abs(a).unwrap()).collect();
    ExactJointDist::product(&factors).unwrap()
}

/// `P[g(X) <= x]` summed directly over atoms.
pub fn brute_cdf(d: &ExactJointDist, x: &Rational, g: impl Fn(&[Rational]) -> Rational) -> Rational {
    d.atoms().iter().filter(|a| g(&a.point) <= *x).map(|a| a.prob.clone()).sum()
}

pub fn abs_max(p: &[Rational]) -> Rational {
    p.iter().max().unwrap().abs()
}

pub fn abs_min(p: &[Rational]) -> Rational {
    p.iter().min().unwrap().abs()
}
