//! Empirical cdfs, Kolmogorov-Smirnov distances and DKW-calibrated
//! dominance checks.

use serde::Serialize;

use super::sampling::MCConfig;
use super::CheckReport;

/// Half-width of the two-sided DKW band for `n` draws at level `alpha`.
pub fn dkw_band(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    /// Panics on NaN samples.
    pub fn new(mut values: Vec<f64>) -> Self {
        assert!(values.iter().all(|v| !v.is_nan()), "NaN sample");
        values.sort_by(f64::total_cmp);
        EmpiricalCdf { sorted: values }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Fraction of samples `< x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v < x) as f64 / self.sorted.len() as f64
    }
}

/// `sup_x |F_n(x) - F(x)|` for a continuous reference cdf `F`.
pub fn ks_one_sample(ecdf: &EmpiricalCdf, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = ecdf.len() as f64;
    let v = ecdf.values();
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let x = v[i];
        let mut j = i;
        while j < v.len() && v[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

/// Largest one-sided gaps between two empirical cdfs over their pooled
/// breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dominance {
    /// `max (F_b - F_a)`: evidence against `a <=_st b`.
    pub gap_against_le: f64,
    /// `max (F_a - F_b)`: evidence against `b <=_st a`.
    pub gap_against_ge: f64,
    /// Two one-sided DKW bands, `2 * sqrt(ln(2/alpha) / (2N))`.
    pub tolerance: f64,
    pub n: usize,
    pub seed: u64,
}

impl Dominance {
    pub fn consistent_le(&self) -> bool {
        self.gap_against_le <= self.tolerance
    }

    pub fn consistent_ge(&self) -> bool {
        self.gap_against_ge <= self.tolerance
    }

    pub fn consistent_equal(&self) -> bool {
        self.consistent_le() && self.consistent_ge()
    }

    /// `a <=_st b` is consistent and `b <=_st a` is rejected.
    pub fn strictly_le(&self) -> bool {
        self.consistent_le() && !self.consistent_ge()
    }

    pub fn strictly_ge(&self) -> bool {
        self.consistent_ge() && !self.consistent_le()
    }

    pub fn report_le(&self, check: &str) -> CheckReport {
        self.report(check, self.gap_against_le, self.consistent_le())
    }

    pub fn report_strictly_le(&self, check: &str) -> CheckReport {
        self.report(check, self.gap_against_le, self.strictly_le())
    }

    pub fn report_equal(&self, check: &str) -> CheckReport {
        self.report(check, self.gap_against_le.max(self.gap_against_ge), self.consistent_equal())
    }

    fn report(&self, check: &str, dev: f64, pass: bool) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            max_deviation: dev,
            tolerance: self.tolerance,
            pass,
            n: self.n as u64,
            seed: Some(self.seed),
            violations: None,
        }
    }
}

/// Compares two equal-length independent samples `a` and `b`.
pub fn mc_dominance(a: &EmpiricalCdf, b: &EmpiricalCdf, cfg: &MCConfig) -> Dominance {
    assert_eq!(a.len(), b.len(), "sample sets must have equal length");
    let n = a.len();
    let (va, vb) = (a.values(), b.values());
    let (mut i, mut j) = (0, 0);
    let (mut le, mut ge): (f64, f64) = (0.0, 0.0);
    while i < n || j < n {
        let x = match (va.get(i), vb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < n && va[i] <= x {
            i += 1;
        }
        while j < n && vb[j] <= x {
            j += 1;
        }
        let diff = (j as f64 - i as f64) / n as f64;
        le = le.max(diff);
        ge = ge.max(-diff);
    }
    Dominance {
        gap_against_le: le,
        gap_against_ge: ge,
        tolerance: 2.0 * dkw_band(n, cfg.alpha),
        n,
        seed: cfg.seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> MCConfig {
        MCConfig::new(1000, 0, 0.01).unwrap()
    }

    #[test]
    fn ecdf_steps() {
        let e = EmpiricalCdf::new(vec![3.0, 1.0, 2.0, 2.0]);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval_left(2.0), 0.25);
        assert_eq!(e.eval(3.0), 1.0);
    }

    #[test]
    fn ks_of_uniform_grid() {
        let n = 1000;
        let e = EmpiricalCdf::new((1..=n).map(|i| i as f64 / n as f64).collect());
        let d = ks_one_sample(&e, |x| x.clamp(0.0, 1.0));
        assert!((d - 1.0 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn identical_samples_are_consistent_both_ways() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let e = EmpiricalCdf::new(v);
        let d = mc_dominance(&e, &e, &cfg());
        assert_eq!(d.gap_against_le, 0.0);
        assert!(d.consistent_equal());
    }

    #[test]
    fn shifted_sample_is_strictly_larger() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 0.5).collect();
        let d = mc_dominance(&EmpiricalCdf::new(a), &EmpiricalCdf::new(b), &cfg());
        assert!(d.strictly_le());
        assert!((d.gap_against_ge - 0.5).abs() < 2e-3);
    }
}
