//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion listed in `KNOWN_UNATTAINABLE` is evaluated literally and
//! reported, but does not fail the process; every other FAIL does.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stochex::contlab::{
    density_symmetry_grid, dkw_band, run_mc_check, verify_identity_11, verify_mlr_example, ContinuousModel,
    EllipticalSpec, Generator, Grid, MCConfig, McCheck, ScaleFamily, DENSITY_TOLERANCE,
};
use stochex::extremes::{abs_coordinate_dist, abs_extreme_dist, abs_extreme_over, Extreme};
use stochex::gallery::gallery;
use stochex::rational::{int, rat};
use stochex::stochorder::{classify, st_compare, Label, Relation};
use stochex::symmetry::{check, check_re_kl, check_sub_super_kl, Condition, SubSuper};
use stochex::{format_rational, ExactJointDist, Rational, SignedPermutation, UnivariateDist};

const IDENTITY_TOL: f64 = 1e-10;
const IDENTITY_LIMIT: Duration = Duration::from_secs(1);
const RE_SUITE_LIMIT: Duration = Duration::from_secs(30);
const DRAWS_LIMIT: Duration = Duration::from_secs(60);
const FOLDED_LIMIT: Duration = Duration::from_secs(30);
const MC_SAMPLES: usize = 1_000_000;
const MC_ALPHA: f64 = 0.01;
const MC_SEED: u64 = 20_240_601;
const GRID_TOL: f64 = DENSITY_TOLERANCE;
const RANDOM_SEED: u64 = 0x5eed_ac01;

const KNOWN_UNATTAINABLE: &[&str] = &["draws-labels"];

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn ms(d: Duration) -> String {
    format!("{:.0} ms", d.as_secs_f64() * 1e3)
}

/// Halves in `[-3, 3]` as coordinates, weights `1..=9`.
fn random_pmf(rng: &mut ChaCha8Rng, dim: usize) -> ExactJointDist {
    let k = rng.random_range(1..=10);
    let mut raw = Vec::with_capacity(k);
    let mut total = 0i64;
    for _ in 0..k {
        let p: Vec<Rational> = (0..dim).map(|_| rat(rng.random_range(-6..=6), 2)).collect();
        let w = rng.random_range(1..=9);
        total += w;
        raw.push((p, w));
    }
    ExactJointDist::new(dim, raw.into_iter().map(|(p, w)| (p, rat(w, total)))).unwrap()
}

fn identity_grid() -> Outcome {
    let xs: Vec<f64> = (0..=12).map(|i| i as f64 * 0.25).collect();
    let t = Instant::now();
    let r = verify_identity_11(&xs, &[-0.95, -0.5, 0.0, 0.5, 0.95]).unwrap();
    let el = t.elapsed();
    Outcome {
        id: "identity-grid",
        pass: r.max_deviation <= IDENTITY_TOL && el < IDENTITY_LIMIT,
        detail: format!(
            "{} points, max deviation {:.2e} (tol {IDENTITY_TOL:.0e}), {} (limit {})",
            r.n,
            r.max_deviation,
            ms(el),
            ms(IDENTITY_LIMIT)
        ),
    }
}

fn re_four_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let rev = SignedPermutation::reverse_pair(2, 1, 2);
    let t = Instant::now();
    let mut bad = 0;
    for _ in 0..1000 {
        let d = random_pmf(&mut rng, 2);
        let d = d.average(&d.transform(&rev)).unwrap();
        let laws = [
            abs_extreme_dist(&d, 2, Extreme::Max).unwrap(),
            abs_extreme_dist(&d, 2, Extreme::Min).unwrap(),
            abs_coordinate_dist(&d, 1).unwrap(),
            abs_coordinate_dist(&d, 2).unwrap(),
        ];
        if !check_re_kl(&d, 1, 2).unwrap().holds || laws.iter().any(|l| *l != laws[0]) {
            bad += 1;
        }
    }
    let el = t.elapsed();
    Outcome {
        id: "re-four-laws",
        pass: bad == 0 && el < RE_SUITE_LIMIT,
        detail: format!("1000 symmetrized laws, {bad} with unequal |max|,|min|,|X|,|Y| laws, {} (limit {})", ms(el), ms(RE_SUITE_LIMIT)),
    }
}

fn half_plane() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 1);
    let mut bad = [0, 0];
    for (side, upper) in [true, false].into_iter().enumerate() {
        let cond = if upper { Condition::Ure } else { Condition::Lre };
        for _ in 0..1000 {
            let d = common::symmetrize_half(&random_pmf(&mut rng, 2), upper);
            let (ax, ay) = (abs_coordinate_dist(&d, 1).unwrap(), abs_coordinate_dist(&d, 2).unwrap());
            let mx = abs_extreme_dist(&d, 2, Extreme::Max).unwrap();
            let mn = abs_extreme_dist(&d, 2, Extreme::Min).unwrap();
            let (want_max, want_min) = if upper { (&ax, &ay) } else { (&ay, &ax) };
            if !check(&d, cond).unwrap().holds || mx != *want_max || mn != *want_min {
                bad[side] += 1;
            }
        }
    }
    Outcome {
        id: "half-plane-laws",
        pass: bad == [0, 0],
        detail: format!(
            "upper side: {} of 1000 break |max|=|X|, |min|=|Y|; lower side: {} of 1000 break |max|=|Y|, |min|=|X|",
            bad[0], bad[1]
        ),
    }
}

fn axes_chain() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for n in 3..=6i64 {
        let e = gallery(&format!("axes:{n}")).unwrap();
        let d = e.exact().unwrap();
        let c = classify(d).unwrap();
        let mut ok = c.label_max.map(|l| l.to_string()).as_deref() == Some("SSIAMX*")
            && c.label_min.map(|l| l.to_string()).as_deref() == Some("SSIAMN*");
        for l in 1..=n {
            let want = if l == 1 { rat(n - 1, n) } else { rat(2 * n - l, 2 * n) };
            for kind in [Extreme::Max, Extreme::Min] {
                ok &= abs_extreme_dist(d, l as usize, kind).unwrap().cdf(&int(0)) == want;
            }
        }
        ok &= c.max_chain.steps.iter().skip(1).all(|s| s.verdict.relation == Relation::StrictlyLess);
        pass &= ok;
        notes.push(format!("n={n} {}", if ok { "ok" } else { "mismatch" }));
    }
    Outcome {
        id: "axes-chain",
        pass,
        detail: format!("cdf at 0 = 1 - l/(2n) for l >= 2, labels SSIAMX*/SSIAMN*: {}", notes.join(", ")),
    }
}

fn show(u: &UnivariateDist) -> String {
    let parts: Vec<String> = u.atoms().iter().map(|(v, p)| format!("{}:{}", format_rational(v), format_rational(p))).collect();
    format!("{{{}}}", parts.join(", "))
}

fn leave_one_out() -> Outcome {
    let e = gallery("remark-asym").unwrap();
    let d = e.exact().unwrap();
    let law = |pairs: [(i64, i64); 2]| UnivariateDist::new(pairs.iter().enumerate().map(|(v, &(p, q))| (int(v as i64), rat(p, q)))).unwrap();
    let a = abs_extreme_over(d, &[1, 3], Extreme::Max).unwrap();
    let b = abs_extreme_over(d, &[2, 3], Extreme::Max).unwrap();
    let pass = a == law([(1, 2), (1, 2)]) && b == law([(1, 4), (3, 4)]);
    Outcome {
        id: "leave-one-out",
        pass,
        detail: format!("|max(X1,X3)| {} vs |max(X2,X3)| {}", show(&a), show(&b)),
    }
}

fn draws(labels_only: bool) -> Outcome {
    let t = Instant::now();
    let (mut re_fail_ok, mut ursub_ok, mut steps_ok, mut labels_literal) = (true, true, true, true);
    let mut got = Vec::new();
    for n in 3..=5 {
        let e = gallery(&format!("draws-n:-3,-2,-1,1,2,3,{n}")).unwrap();
        let d = e.exact().unwrap();
        for l in 3..=n {
            let prefix = d.prefix(l).unwrap();
            for k in 1..l {
                re_fail_ok &= !check_re_kl(&prefix, k, l).unwrap().holds;
            }
        }
        for l in 2..=n {
            ursub_ok &= check_sub_super_kl(&d.prefix(l).unwrap(), 1, l, SubSuper::UrSub).unwrap().holds;
        }
        let c = classify(d).unwrap();
        for chain in [&c.max_chain, &c.min_chain] {
            steps_ok &= chain.steps[0].verdict.relation == Relation::Equal;
            steps_ok &= chain.steps[1..].iter().all(|s| s.verdict.relation == Relation::StrictlyLess);
        }
        labels_literal &= c.label_max == Some(Label::new(Extreme::Max, true, false))
            && c.label_min == Some(Label::new(Extreme::Min, true, false));
        got.push(format!(
            "n={n}: {}/{}",
            c.label_max.map_or("none".into(), |l| l.to_string()),
            c.label_min.map_or("none".into(), |l| l.to_string())
        ));
    }
    let el = t.elapsed();
    if labels_only {
        Outcome {
            id: "draws-labels",
            pass: labels_literal,
            detail: format!(
                "expected SSIAMX/SSIAMN, classify gives {}; the l=2 step is an exact equality, which rules out the unstarred strict label",
                got.join(", ")
            ),
        }
    } else {
        Outcome {
            id: "draws-symmetry",
            pass: re_fail_ok && ursub_ok && steps_ok && el < DRAWS_LIMIT,
            detail: format!(
                "RE(k,l) fails for every l>=3: {re_fail_ok}; UR_E(1,l) holds: {ursub_ok}; equal first step then strict steps: {steps_ok}; {} (limit {})",
                ms(el),
                ms(DRAWS_LIMIT)
            ),
        }
    }
}

/// A random law on `{0..4}` and one stochastically at least as large,
/// obtained as the law of `max(U, W)` (or an exact copy one time in ten).
fn ordered_pair(rng: &mut ChaCha8Rng) -> (UnivariateDist, UnivariateDist) {
    let u = common::random_abs(rng, 4);
    if rng.random_bool(0.1) {
        return (u.clone(), u);
    }
    let w = common::random_abs(rng, 4);
    let mut raw = Vec::new();
    for (a, p) in u.atoms() {
        for (b, q) in w.atoms() {
            raw.push((a.max(b).clone(), p * q));
        }
    }
    (u, UnivariateDist::new(raw).unwrap())
}

fn independent_pairs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 2);
    let (mut avg_bad, mut strict_bad, mut strict_count) = (0, 0, 0);
    for _ in 0..500 {
        let (a, b) = ordered_pair(&mut rng);
        let d = common::symmetric_product(&[a.clone(), b.clone()]);
        let mx = abs_extreme_dist(&d, 2, Extreme::Max).unwrap();
        let mut xs: Vec<&Rational> = a.support().chain(b.support()).collect();
        xs.sort();
        xs.dedup();
        if xs.iter().any(|x| mx.cdf(x) != (a.cdf(x) + b.cdf(x)) * rat(1, 2)) {
            avg_bad += 1;
        }
        let marginal_strict = st_compare(&a, &b).relation == Relation::StrictlyLess;
        strict_count += marginal_strict as usize;
        let lower = st_compare(&a, &mx).relation;
        let upper = st_compare(&mx, &b).relation;
        let want = if marginal_strict { Relation::StrictlyLess } else { Relation::Equal };
        if lower != want || upper != want {
            strict_bad += 1;
        }
    }
    Outcome {
        id: "independent-pairs",
        pass: avg_bad == 0 && strict_bad == 0,
        detail: format!(
            "500 pairs ({strict_count} strictly ordered): {avg_bad} average mismatches, {strict_bad} strictness mismatches"
        ),
    }
}

fn independent_products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 3);
    let (mut weak_bad, mut strict_bad, mut strict_count) = (0, 0, 0);
    for _ in 0..200 {
        let n = rng.random_range(3..=5);
        let mut laws = vec![common::random_abs(&mut rng, 3)];
        while laws.len() < n {
            let last = laws.last().unwrap().clone();
            let next = if rng.random_bool(0.15) {
                last
            } else {
                let w = common::random_abs(&mut rng, 4);
                let raw: Vec<_> = last
                    .atoms()
                    .iter()
                    .flat_map(|(a, p)| w.atoms().iter().map(move |(b, q)| (a.max(b).clone(), p * q)))
                    .collect();
                UnivariateDist::new(raw).unwrap()
            };
            laws.push(next);
        }
        let strict = laws.windows(2).all(|w| st_compare(&w[0], &w[1]).relation == Relation::StrictlyLess);
        let c = classify(&common::symmetric_product(&laws)).unwrap();
        let weak = c.max_chain.satisfies(Label::new(Extreme::Max, false, false))
            && c.min_chain.satisfies(Label::new(Extreme::Min, false, false));
        weak_bad += !weak as usize;
        if strict {
            strict_count += 1;
            let s = c.label_max == Some(Label::new(Extreme::Max, true, false))
                && c.label_min == Some(Label::new(Extreme::Min, true, false));
            strict_bad += !s as usize;
        }
    }
    Outcome {
        id: "independent-products",
        pass: weak_bad == 0 && strict_bad == 0,
        detail: format!(
            "200 products: {weak_bad} not SIAMX/SIAMN; {strict_count} strictly ordered, {strict_bad} of them not SSIAMX/SSIAMN"
        ),
    }
}

fn folded_normal() -> Outcome {
    let cfg = MCConfig::new(MC_SAMPLES, MC_SEED, MC_ALPHA).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for rho in [-0.6, 0.0, 0.6] {
        let spec = EllipticalSpec::bivariate(1.5, -1.5, 1.0, 1.0, rho, Generator::Gaussian).unwrap();
        let t = Instant::now();
        let r = run_mc_check(&ContinuousModel::Elliptical(spec), &cfg, McCheck::FoldedKs).unwrap();
        let el = t.elapsed();
        pass &= r.pass && el < FOLDED_LIMIT;
        parts.push(format!("rho={rho}: KS {:.5} in {}", r.max_deviation, ms(el)));
    }
    Outcome {
        id: "folded-normal-ks",
        pass,
        detail: format!(
            "N={MC_SAMPLES}, band {:.5} (alpha {MC_ALPHA}); {} (limit {} each)",
            dkw_band(MC_SAMPLES, MC_ALPHA),
            parts.join(", "),
            ms(FOLDED_LIMIT)
        ),
    }
}

fn intraclass_grid() -> Outcome {
    let grid = Grid::uniform(3, -3.0, 3.0, 21);
    let mut parts = Vec::new();
    let mut pass = true;
    for (rho, variant) in [(-0.3, SubSuper::UrSub), (0.3, SubSuper::LrSup)] {
        let spec = EllipticalSpec::intraclass(3, 1.0, rho, Generator::Gaussian).unwrap();
        let r = density_symmetry_grid(&spec, Condition::SubSuperKl { variant, k: 1, l: 3 }, &grid).unwrap();
        let v = r.violations.unwrap_or(u64::MAX);
        pass &= v == 0;
        parts.push(format!("rho={rho} {}: {v} violations over {} region points", r.check, r.n));
    }
    Outcome {
        id: "intraclass-grid",
        pass,
        detail: format!("21^3 grid on [-3,3]^3, tol {GRID_TOL:.0e}; {}", parts.join("; ")),
    }
}

fn likelihood_ratio_chain() -> Outcome {
    let cfg = MCConfig::new(MC_SAMPLES, MC_SEED, MC_ALPHA).unwrap();
    let r = verify_mlr_example(1.0, 2.0, ScaleFamily::Normal, &cfg).unwrap();
    let parts: Vec<String> = r
        .checks
        .iter()
        .map(|c| format!("{} {} ({:.4} vs {:.4})", c.check, if c.pass { "ok" } else { "fails" }, c.max_deviation, c.tolerance))
        .collect();
    Outcome {
        id: "likelihood-ratio-chain",
        pass: r.pass,
        detail: format!("normal scales (1,2), N={MC_SAMPLES}: {}", parts.join(", ")),
    }
}

fn main() -> ExitCode {
    let criteria: Vec<fn() -> Outcome> = vec![
        identity_grid,
        re_four_laws,
        half_plane,
        axes_chain,
        leave_one_out,
        || draws(false),
        || draws(true),
        independent_pairs,
        independent_products,
        folded_normal,
        intraclass_grid,
        likelihood_ratio_chain,
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for c in criteria {
        let o = c();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_UNATTAINABLE.contains(&o.id) {
            known += 1;
            " [known deviation]"
        } else {
            if !o.pass {
                unexpected += 1;
            }
            ""
        };
        println!("{tag} {:<24} {}{note}", o.id, o.detail);
    }
    println!("acceptance: {unexpected} unexpected failure(s), {known} known deviation(s)");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
