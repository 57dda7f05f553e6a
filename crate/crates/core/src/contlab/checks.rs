//! Composite numeric checks: the normal-cdf identity, Monte Carlo claims
//! about absolute extremes, and the scale-family likelihood-ratio chain.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::elliptical::Generator;
use super::empirical::{dkw_band, ks_one_sample, mc_dominance, EmpiricalCdf};
use super::normal::{phi, phi2};
use super::sampling::{sample, ContinuousModel, MCConfig, SampleMatrix, ScaleFamily};
use super::{CheckReport, ContlabError, DENSITY_TOLERANCE};
use crate::extremes::Extreme;

pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Max over the grid of
/// `|Phi2(x,x;rho) - Phi2(-x,-x;rho) - (Phi(x) - Phi(-x))|`.
pub fn verify_identity_11(x_grid: &[f64], rho_grid: &[f64]) -> Result<CheckReport, ContlabError> {
    let mut worst: f64 = 0.0;
    for &rho in rho_grid {
        for &x in x_grid {
            let lhs = phi2(x, x, rho)? - phi2(-x, -x, rho)?;
            worst = worst.max((lhs - (phi(x) - phi(-x))).abs());
        }
    }
    Ok(CheckReport {
        check: "identity11".into(),
        max_deviation: worst,
        tolerance: IDENTITY_TOLERANCE,
        pass: worst <= IDENTITY_TOLERANCE,
        n: (x_grid.len() * rho_grid.len()) as u64,
        seed: None,
        violations: None,
    })
}

/// Cdf of `|X|` for `X ~ N(mu, sigma^2)`.
pub fn folded_normal_cdf(t: f64, mu: f64, sigma: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        phi((t - mu) / sigma) - phi((-t - mu) / sigma)
    }
}

/// Absolute statistic of a sample row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stat {
    /// `|X_i|`, 1-based.
    Coord(usize),
    /// `|max|` of a prefix; `None` is the whole vector.
    Max(Option<usize>),
    Min(Option<usize>),
}

impl Stat {
    fn values(self, s: &SampleMatrix) -> Result<Vec<f64>, ContlabError> {
        let bad = |i| ContlabError::InvalidSpec(format!("statistic {self} needs index {i} within 1..={}", s.dim));
        match self {
            Stat::Coord(i) if i >= 1 && i <= s.dim => Ok(s.abs_column(i - 1)),
            Stat::Coord(i) => Err(bad(i)),
            Stat::Max(p) | Stat::Min(p) => {
                let p = p.unwrap_or(s.dim);
                if p == 0 || p > s.dim {
                    return Err(bad(p));
                }
                let kind = if matches!(self, Stat::Max(_)) { Extreme::Max } else { Extreme::Min };
                Ok(s.abs_extreme(p, kind))
            }
        }
    }
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stat::Coord(1) => write!(f, "x"),
            Stat::Coord(2) => write!(f, "y"),
            Stat::Coord(i) => write!(f, "x{i}"),
            Stat::Max(None) => write!(f, "max"),
            Stat::Min(None) => write!(f, "min"),
            Stat::Max(Some(p)) => write!(f, "max{p}"),
            Stat::Min(Some(p)) => write!(f, "min{p}"),
        }
    }
}

impl FromStr for Stat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |rest: &str| -> Result<usize, String> { rest.parse().map_err(|_| format!("bad statistic {s:?}")) };
        match s {
            "x" => Ok(Stat::Coord(1)),
            "y" => Ok(Stat::Coord(2)),
            "max" => Ok(Stat::Max(None)),
            "min" => Ok(Stat::Min(None)),
            _ if s.starts_with("max") => Ok(Stat::Max(Some(num(&s[3..])?))),
            _ if s.starts_with("min") => Ok(Stat::Min(Some(num(&s[3..])?))),
            _ if s.starts_with('x') => Ok(Stat::Coord(num(&s[1..])?)),
            _ => Err(format!("unknown statistic {s:?} (expected x, y, xK, max, min, maxL, minL)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderClaim {
    /// `a <_st b`
    StrictlyLess,
    /// `a <=_st b`
    Less,
    /// `a =_d b`
    Equal,
}

/// A Monte Carlo claim about a continuous model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McCheck {
    /// Kolmogorov-Smirnov distance between the empirical `|max|` of a
    /// bivariate Gaussian and the folded normal cdf of `|X|`, against a single
    /// DKW band.
    FoldedKs,
    Order { a: Stat, claim: OrderClaim, b: Stat },
}

impl fmt::Display for McCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McCheck::FoldedKs => write!(f, "folded-ks"),
            McCheck::Order { a, claim, b } => {
                let op = match claim {
                    OrderClaim::StrictlyLess => "<",
                    OrderClaim::Less => "<=",
                    OrderClaim::Equal => "=",
                };
                write!(f, "{a}{op}{b}")
            }
        }
    }
}

impl FromStr for McCheck {
    type Err = String;

    /// `folded-ks`, or `A<B`, `A<=B`, `A=B` over statistics such as `x`,
    /// `y`, `x3`, `max`, `min4`.
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "folded-ks" {
            return Ok(McCheck::FoldedKs);
        }
        let (a, claim, b) = if let Some((a, b)) = s.split_once("<=") {
            (a, OrderClaim::Less, b)
        } else if let Some((a, b)) = s.split_once('<') {
            (a, OrderClaim::StrictlyLess, b)
        } else if let Some((a, b)) = s.split_once('=') {
            (a, OrderClaim::Equal, b)
        } else {
            return Err(format!("unknown check {s:?} (expected folded-ks or A<B, A<=B, A=B)"));
        };
        Ok(McCheck::Order {
            a: a.trim().parse()?,
            claim,
            b: b.trim().parse()?,
        })
    }
}

/// Independent second stream for the right-hand statistic.
fn companion_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

fn order_report(a: &SampleMatrix, b: &SampleMatrix, check: McCheck, cfg: &MCConfig) -> Result<CheckReport, ContlabError> {
    let McCheck::Order { a: sa, claim, b: sb } = check else {
        unreachable!("order check expected")
    };
    let ea = EmpiricalCdf::new(sa.values(a)?);
    let eb = EmpiricalCdf::new(sb.values(b)?);
    let d = mc_dominance(&ea, &eb, cfg);
    let name = check.to_string();
    Ok(match claim {
        OrderClaim::StrictlyLess => d.report_strictly_le(&name),
        OrderClaim::Less => d.report_le(&name),
        OrderClaim::Equal => d.report_equal(&name),
    })
}

pub fn run_mc_check(model: &ContinuousModel, cfg: &MCConfig, check: McCheck) -> Result<CheckReport, ContlabError> {
    match check {
        McCheck::FoldedKs => {
            let ContinuousModel::Elliptical(spec) = model else {
                return Err(ContlabError::InvalidSpec("folded-ks needs a Gaussian model".into()));
            };
            if spec.dim() != 2 || spec.generator() != Generator::Gaussian {
                return Err(ContlabError::InvalidSpec("folded-ks needs a bivariate Gaussian model".into()));
            }
            let (mu, sigma) = (spec.location()[0], spec.scale()[(0, 0)].sqrt());
            let s = sample(model, cfg)?;
            let e = EmpiricalCdf::new(s.abs_extreme(2, Extreme::Max));
            let dev = ks_one_sample(&e, |t| folded_normal_cdf(t, mu, sigma));
            let tol = dkw_band(cfg.n, cfg.alpha);
            Ok(CheckReport {
                check: check.to_string(),
                max_deviation: dev,
                tolerance: tol,
                pass: dev <= tol,
                n: cfg.n as u64,
                seed: Some(cfg.seed),
                violations: None,
            })
        }
        McCheck::Order { .. } => {
            let a = sample(model, cfg)?;
            let b = sample(model, &MCConfig { seed: companion_seed(cfg.seed), ..*cfg })?;
            order_report(&a, &b, check, cfg)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MlrReport {
    pub family: ScaleFamily,
    pub theta1: f64,
    pub theta2: f64,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

/// Independent centered `X`, `Y` with scales `theta1 <= theta2` in one
/// family. Checks `|X| < |min| = |max| < |Y|` by Monte Carlo (all equalities
/// when the scales coincide) and the likelihood-ratio inequality
/// `f_|X|(x) f_|Y|(y) >= f_|X|(y) f_|Y|(x)` for `0 < x < y` on a grid.
pub fn verify_mlr_example(theta1: f64, theta2: f64, family: ScaleFamily, cfg: &MCConfig) -> Result<MlrReport, ContlabError> {
    if !(theta1 > 0.0 && theta1 <= theta2 && theta2.is_finite()) {
        return Err(ContlabError::InvalidThetaOrder { theta1, theta2 });
    }
    let model = ContinuousModel::IndependentScale {
        family,
        thetas: vec![theta1, theta2],
    };
    let strict = if theta1 < theta2 { OrderClaim::StrictlyLess } else { OrderClaim::Equal };
    let chain = [
        McCheck::Order {
            a: Stat::Coord(1),
            claim: strict,
            b: Stat::Min(None),
        },
        McCheck::Order {
            a: Stat::Min(None),
            claim: OrderClaim::Equal,
            b: Stat::Max(None),
        },
        McCheck::Order {
            a: Stat::Max(None),
            claim: strict,
            b: Stat::Coord(2),
        },
    ];
    let a = sample(&model, cfg)?;
    let b = sample(&model, &MCConfig { seed: companion_seed(cfg.seed), ..*cfg })?;
    let mut checks = chain
        .into_iter()
        .map(|c| order_report(&a, &b, c, cfg))
        .collect::<Result<Vec<_>, _>>()?;

    let steps = 200;
    let hi = 10.0 * theta2;
    let xs: Vec<f64> = (1..=steps).map(|i| hi * i as f64 / steps as f64).collect();
    let (mut worst, mut violations, mut count) = (f64::NEG_INFINITY, 0u64, 0u64);
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            let lhs = family.abs_density(x, theta1) * family.abs_density(y, theta2);
            let rhs = family.abs_density(y, theta1) * family.abs_density(x, theta2);
            let ex = rhs - lhs;
            worst = worst.max(ex);
            count += 1;
            if ex > DENSITY_TOLERANCE {
                violations += 1;
            }
        }
    }
    checks.push(CheckReport {
        check: "likelihood-ratio".into(),
        max_deviation: worst.max(0.0),
        tolerance: DENSITY_TOLERANCE,
        pass: violations == 0,
        n: count,
        seed: None,
        violations: Some(violations),
    });
    Ok(MlrReport {
        family,
        theta1,
        theta2,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
