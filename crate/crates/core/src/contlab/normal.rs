//! Univariate and bivariate standard normal distribution functions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::ContlabError;

/// Standard normal cdf.
pub fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn phi_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `P[X <= x, Y <= y]` for a standard bivariate normal with correlation `rho`.
/// Infinite arguments are allowed.
pub fn phi2(x: f64, y: f64, rho: f64) -> Result<f64, ContlabError> {
    if !(rho.abs() < 1.0) {
        return Err(ContlabError::RhoOutOfRange(rho));
    }
    Ok(bvnu(-x, -y, rho))
}

// Gauss-Legendre half-rules (abscissae on (0,1], weights) for 6, 12 and 20 points.
const GL6: [(f64, f64); 3] = [
    (0.932_469_514_203_152_2, 0.171_324_492_379_170_5),
    (0.661_209_386_466_264_7, 0.360_761_573_048_138_4),
    (0.238_619_186_083_197, 0.467_913_934_572_690_4),
];
const GL12: [(f64, f64); 6] = [
    (0.981_560_634_246_719_1, 0.047_175_336_386_511_77),
    (0.904_117_256_370_475, 0.106_939_325_995_318_3),
    (0.769_902_674_194_305, 0.160_078_328_543_346_4),
    (0.587_317_954_286_617_1, 0.203_167_426_723_065_9),
    (0.367_831_498_998_180_2, 0.233_492_536_538_354_7),
    (0.125_233_408_511_469_2, 0.249_147_045_813_402_9),
];
const GL20: [(f64, f64); 10] = [
    (0.993_128_599_185_094_9, 0.017_614_007_139_152_12),
    (0.963_971_927_277_913_8, 0.040_601_429_800_386_94),
    (0.912_234_428_251_326, 0.062_672_048_334_109_06),
    (0.839_116_971_822_218_8, 0.083_276_741_576_704_75),
    (0.746_331_906_460_150_8, 0.101_930_119_817_240_4),
    (0.636_053_680_726_515, 0.118_194_531_961_518_4),
    (0.510_867_001_950_827_1, 0.131_688_638_449_176_6),
    (0.373_706_088_715_419_6, 0.142_096_109_318_382_1),
    (0.227_785_851_141_645_1, 0.149_172_986_472_603_7),
    (0.076_526_521_133_497_33, 0.152_753_387_130_725_9),
];

/// Upper orthant probability `P[X > h, Y > k]` (Drezner-Wesolowsky with
/// Genz's refinements for high correlation).
fn bvnu(h: f64, k: f64, r: f64) -> f64 {
    if h == f64::INFINITY || k == f64::INFINITY {
        return 0.0;
    }
    if h == f64::NEG_INFINITY {
        return if k == f64::NEG_INFINITY { 1.0 } else { phi(-k) };
    }
    if k == f64::NEG_INFINITY {
        return phi(-h);
    }
    if r == 0.0 {
        return phi(-h) * phi(-k);
    }
    let rule: &[(f64, f64)] = if r.abs() < 0.3 {
        &GL6
    } else if r.abs() < 0.75 {
        &GL12
    } else {
        &GL20
    };
    // full rule on (0,2): nodes 1 - x and 1 + x share a weight
    let nodes = rule.iter().flat_map(|&(x, w)| [(1.0 - x, w), (1.0 + x, w)]);
    let tp = 2.0 * PI;
    let mut hk = h * k;

    let bvn = if r.abs() < 0.925 {
        let hs = (h * h + k * k) / 2.0;
        let asr = r.asin() / 2.0;
        let sum: f64 = nodes
            .map(|(x, w)| {
                let sn = (asr * x).sin();
                w * ((sn * hk - hs) / (1.0 - sn * sn)).exp()
            })
            .sum();
        sum * asr / tp + phi(-h) * phi(-k)
    } else {
        let mut k = k;
        if r < 0.0 {
            k = -k;
            hk = -hk;
        }
        let as_ = 1.0 - r * r;
        let mut a = as_.sqrt();
        let bs = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 80.0;
        let mut bvn = 0.0;
        let asr = -(bs / as_ + hk) / 2.0;
        if asr > -100.0 {
            bvn = a * asr.exp() * (1.0 - c * (bs - as_) * (1.0 - d * bs) / 3.0 + c * d * as_ * as_);
        }
        if hk > -100.0 {
            let b = bs.sqrt();
            let sp = tp.sqrt() * phi(-b / a);
            bvn -= (-hk / 2.0).exp() * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a /= 2.0;
        let sum: f64 = nodes
            .filter_map(|(x, w)| {
                let xs = (a * x) * (a * x);
                let asr = -(bs / xs + hk) / 2.0;
                (asr > -100.0).then(|| {
                    let sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                    let rs = (1.0 - xs).sqrt();
                    let ep = (-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))).exp() / rs;
                    w * asr.exp() * (sp - ep)
                })
            })
            .sum();
        bvn = (a * sum - bvn) / tp;
        if r > 0.0 {
            bvn + phi(-h.max(k))
        } else if h >= k {
            -bvn
        } else {
            let l = if h < 0.0 { phi(k) - phi(h) } else { phi(-h) - phi(-k) };
            l - bvn
        }
    };
    bvn.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_basics() {
        assert_eq!(phi(0.0), 0.5);
        for i in -40..=40 {
            let x = i as f64 * 0.2;
            assert!((phi(-x) - (1.0 - phi(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn phi2_closed_forms() {
        assert!((phi2(0.0, 0.0, 0.0).unwrap() - 0.25).abs() < 1e-15);
        for &r in &[-0.99, -0.93, -0.5, -0.1, 0.2, 0.5, 0.8, 0.93, 0.999] {
            let exact = 0.25 + f64::asin(r) / (2.0 * PI);
            assert!((phi2(0.0, 0.0, r).unwrap() - exact).abs() < 1e-14, "rho {r}");
        }
        assert!(phi2(0.0, 0.0, 1.0).is_err());
        assert!(phi2(0.0, 0.0, f64::NAN).is_err());
        assert_eq!(phi2(f64::INFINITY, 0.3, 0.5).unwrap(), phi(0.3));
        assert_eq!(phi2(f64::NEG_INFINITY, 0.3, 0.5).unwrap(), 0.0);
    }
}
