//! Gallery entries built by id, checked against hand-derived laws and their
//! own expectation lists.

use stochex::extremes::{abs_extreme_dist, abs_extreme_over, Extreme};
use stochex::gallery::{gallery, list, GalleryDist, VerifyOptions};
use stochex::rational::{int, rat};
use stochex::stochorder::classify;
use stochex::UnivariateDist;

fn law(pairs: &[(i64, i64, i64)]) -> UnivariateDist {
    UnivariateDist::new(pairs.iter().map(|&(v, p, q)| (int(v), rat(p, q)))).unwrap()
}

#[test]
fn remark_entry_leave_one_out_laws() {
    let e = gallery("remark-asym").unwrap();
    let d = e.exact().unwrap();
    assert_eq!(d.len(), 4);
    assert!(d.atoms().iter().all(|a| a.prob == rat(1, 4)));
    assert_eq!(abs_extreme_over(d, &[1, 3], Extreme::Max).unwrap(), law(&[(0, 1, 2), (1, 1, 2)]));
    assert_eq!(abs_extreme_over(d, &[2, 3], Extreme::Max).unwrap(), law(&[(0, 1, 4), (1, 3, 4)]));
}

#[test]
fn step_entry_max_cdf() {
    let e = gallery("indep-sym-step").unwrap();
    let d = e.exact().unwrap();
    let m = abs_extreme_dist(d, 2, Extreme::Max).unwrap();
    // |max| <= t iff both coordinates stay in [-t, t] or the larger one is negative enough:
    // enumerate by hand over the sixteen sign/magnitude cells
    let mut cdf = [rat(0, 1), rat(0, 1), rat(0, 1)];
    let xs = [(0, rat(1, 2)), (1, rat(1, 4)), (-1, rat(1, 4))];
    let ys = [(0, rat(1, 2)), (1, rat(1, 8)), (-1, rat(1, 8)), (2, rat(1, 8)), (-2, rat(1, 8))];
    for (x, px) in &xs {
        for (y, py) in &ys {
            let v = (*x.max(y) as i64).abs();
            for (t, slot) in cdf.iter_mut().enumerate() {
                if v <= t as i64 {
                    *slot += px * py;
                }
            }
        }
    }
    assert_eq!(cdf, [rat(1, 2), rat(7, 8), rat(1, 1)]);
    for t in 0..3 {
        assert_eq!(m.cdf(&int(t)), cdf[t as usize]);
    }
}

#[test]
fn axes_entry_cdf_at_zero() {
    for n in 3..=6i64 {
        let e = gallery(&format!("axes:{n}")).unwrap();
        let d = e.exact().unwrap();
        assert_eq!(d.len(), 2 * n as usize);
        for l in 2..=n {
            let f = abs_extreme_dist(d, l as usize, Extreme::Max).unwrap().cdf(&int(0));
            assert_eq!(f, rat(2 * n - l, 2 * n));
        }
        assert_eq!(abs_extreme_dist(d, 1, Extreme::Max).unwrap().cdf(&int(0)), rat(n - 1, n));
        let c = classify(d).unwrap();
        assert_eq!(c.label_max.unwrap().to_string(), "SSIAMX*");
        assert_eq!(c.label_min.unwrap().to_string(), "SSIAMN*");
    }
}

#[test]
fn iid_two_point_product_is_not_strict() {
    let e = gallery("iid-sym:pm1,3").unwrap();
    let c = classify(e.exact().unwrap()).unwrap();
    assert_eq!(c.label_max.unwrap().to_string(), "SIAMX*");
    assert_eq!(c.label_min.unwrap().to_string(), "SIAMN*");
}

#[test]
fn catalog_patterns_are_unique() {
    let mut ids: Vec<&str> = list().iter().map(|(p, _)| p.split(':').next().unwrap()).collect();
    ids.sort();
    let before = ids.len();
    ids.dedup();
    assert_eq!(before, ids.len());
}

#[test]
fn continuous_entries_verify() {
    let opts = VerifyOptions {
        mc_samples: 100_000,
        ..VerifyOptions::default()
    };
    for id in [
        "bvn:1.5,0.6",
        "bvn:2,-0.3",
        "elliptical:gauss,1,0.5,1,1,0.3",
        "elliptical:t5,0,0,1,1.5,-0.2",
        "elliptical:gauss,0,0,2,1,0.4",
        "intraclass:3,-0.3",
        "intraclass:4,0.3",
        "gauss-seq:1,4",
        "gauss-seq:2,5,1,0.2",
        "indep-scale:normal,1,2",
        "indep-scale:cauchy,1,3",
    ] {
        let e = gallery(id).unwrap();
        assert!(matches!(e.dist, GalleryDist::Continuous(_)), "{id}");
        assert!(!e.expectations.is_empty(), "{id}");
        let r = e.verify(&opts);
        assert!(r.pass, "{id}: {:#?}", r.results.iter().filter(|x| !x.pass).collect::<Vec<_>>());
    }
}

#[test]
fn gallery_verification_is_reproducible() {
    let opts = VerifyOptions {
        mc_samples: 20_000,
        ..VerifyOptions::default()
    };
    let e = gallery("bvn:1,0.2").unwrap();
    assert_eq!(e.verify(&opts), e.verify(&opts));
}
