//! Named example distributions with hand-derived expectations.
//!
//! Ids have the form `name` or `name:params`. Exact entries carry rational
//! pmfs; continuous entries carry a [`ContinuousModel`] checked numerically.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::contlab::{
    build_gaussian_seq, density_symmetry_grid, run_mc_check, ContinuousModel, ContlabError, EllipticalSpec,
    GaussianSeqSpec, Generator, Grid, MCConfig, McCheck, ScaleFamily, SeqCase, DEFAULT_ALPHA,
};
use crate::dist::{DistError, ExactJointDist, UnivariateDist};
use crate::extremes::{abs_extreme_dist, abs_extreme_over, Extreme};
use crate::rational::{format_rational, int, parse_rational, rat, Rational};
use crate::stochorder::{classify, Label};
use crate::symmetry::{check, Condition, SubSuper};

#[derive(Debug, thiserror::Error)]
pub enum GalleryError {
    #[error("unknown gallery id {0:?} (see `gallery --list`)")]
    UnknownId(String),
    #[error("bad parameters for {id:?}: {reason}")]
    BadParams { id: String, reason: String },
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Contlab(#[from] ContlabError),
}

/// Id patterns with one-line descriptions.
pub const CATALOG: &[(&str, &str)] = &[
    ("sci-not-re", "sign-change invariant pair that is not reverse exchangeable"),
    ("draws-2:A", "two draws without replacement from symmetric set A (e.g. draws-2:-2,-1,1,2); ERE but not ESCI"),
    ("axes:n", "uniform on the 2n signed unit vectors; strictly increasing |max| and |min| chains"),
    ("remark-asym", "RE(1,2) law on R^3 whose leave-one-out |max| laws differ"),
    ("alt-signs:n", "independent X_i with X_i = (-1)^(i+1) X_1 in law, base {-1:1/4, 0:1/4, 2:1/2}"),
    ("draws-n:A,n", "n draws without replacement from symmetric A (e.g. draws-n:-3,-2,-1,1,2,3,4); not RE(l) for l >= 3 but UR_E(1,l)"),
    ("iid-sym:F,n", "n iid draws from symmetric F: pm1 or v:p;v:p;... (e.g. iid-sym:-1:1/4;0:1/2;1:1/4,3)"),
    ("indep-sym-step", "independent symmetric X, Y with |X| on {0,1} and |Y| on {0,1,2}"),
    ("indep-sym-ladder:n", "independent symmetric X_i with |X_i| = 0 w.p. 1/2, uniform on 1..i otherwise"),
    ("bvn:mu,rho", "bivariate normal with means (mu,-mu), unit variances, correlation rho"),
    ("elliptical:gen,mu,nu,sigma,tau,rho", "bivariate elliptical law; gen is gauss or t<nu> (e.g. t5)"),
    ("intraclass:n,rho", "centered Gaussian in R^n with unit variances and common correlation rho"),
    ("gauss-seq:case,n[,mu[,rho_2..rho_n]]", "Gaussian sequence satisfying RE(k(l),l) for every l; case 1: k(l)=1, case 2: k(l)=l-1; a single rho is repeated"),
    ("indep-scale:family,theta1,theta2", "independent centered normal or cauchy coordinates with scales theta1 <= theta2"),
];

pub fn list() -> &'static [(&'static str, &'static str)] {
    CATALOG
}

#[derive(Debug, Clone)]
pub enum GalleryDist {
    Exact(ExactJointDist),
    Continuous(ContinuousModel),
}

/// A machine-checkable claim about an entry.
#[derive(Debug, Clone)]
pub enum Expectation {
    /// Verdict of a symmetry condition on the prefix `X_1..X_prefix`.
    Symmetry { prefix: usize, condition: Condition, holds: bool },
    /// Most specific monotonicity label of the chain (`None`: no label).
    Label { kind: Extreme, label: Option<Label> },
    /// The chain belongs to the family.
    Member { kind: Extreme, label: Label },
    /// Exact law of `|max|`/`|min|` over 1-based coordinates.
    AbsLaw { indices: Vec<usize>, kind: Extreme, law: UnivariateDist },
    /// `P[|extreme(X_1..X_len)| <= x] = value`.
    PrefixCdf { kind: Extreme, len: usize, x: Rational, value: Rational },
    /// Pointwise density form of a condition on a uniform grid.
    DensityGrid { condition: Condition, lo: f64, hi: f64, steps: usize },
    Monte { check: McCheck },
    /// Gaussian sequence means and correlations obey the sign-copy equations.
    SeqEquations,
    /// `RE(k,l)` density equality for the Gaussian sequence prefix of length `l`.
    SeqPrefixRe { k: usize, l: usize, steps: usize },
}

fn label_str(l: &Option<Label>) -> String {
    l.map_or_else(|| "none".to_string(), |l| l.to_string())
}

fn indices_str(ix: &[usize]) -> String {
    ix.iter().map(|i| format!("X{i}")).collect::<Vec<_>>().join(",")
}

fn kind_str(k: Extreme) -> &'static str {
    match k {
        Extreme::Max => "max",
        Extreme::Min => "min",
    }
}

fn law_str(d: &UnivariateDist) -> String {
    let parts: Vec<String> = d
        .atoms()
        .iter()
        .map(|(v, p)| format!("{}:{}", format_rational(v), format_rational(p)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Symmetry { prefix, condition, .. } => write!(f, "{condition} on X1..X{prefix}"),
            Expectation::Label { kind, .. } => write!(f, "label of |{}| chain", kind_str(*kind)),
            Expectation::Member { kind, label } => write!(f, "|{}| chain is {label}", kind_str(*kind)),
            Expectation::AbsLaw { indices, .. } if indices.len() == 1 => write!(f, "law of |X{}|", indices[0]),
            Expectation::AbsLaw { indices, kind, .. } => write!(f, "law of |{}({})|", kind_str(*kind), indices_str(indices)),
            Expectation::PrefixCdf { kind, len, x, .. } => {
                write!(f, "P[|{}(X1..X{len})| <= {}]", kind_str(*kind), format_rational(x))
            }
            Expectation::DensityGrid { condition, steps, .. } => write!(f, "density {condition} on {steps}-point grid"),
            Expectation::Monte { check } => write!(f, "monte carlo {check}"),
            Expectation::SeqEquations => write!(f, "mean/correlation sign-copy equations"),
            Expectation::SeqPrefixRe { k, l, .. } => write!(f, "density RE({k},{l}) on X1..X{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalleryReport {
    pub id: String,
    pub pass: bool,
    pub results: Vec<ExpectationResult>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub mc_samples: usize,
    pub seed: u64,
    pub alpha: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mc_samples: 200_000,
            seed: 2718,
            alpha: DEFAULT_ALPHA,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub id: String,
    pub description: String,
    pub dist: GalleryDist,
    pub expectations: Vec<Expectation>,
    seq: Option<GaussianSeqSpec>,
}

impl GalleryEntry {
    pub fn exact(&self) -> Option<&ExactJointDist> {
        match &self.dist {
            GalleryDist::Exact(d) => Some(d),
            GalleryDist::Continuous(_) => None,
        }
    }

    pub fn model(&self) -> Option<&ContinuousModel> {
        match &self.dist {
            GalleryDist::Continuous(m) => Some(m),
            GalleryDist::Exact(_) => None,
        }
    }

    pub fn verify(&self, opts: &VerifyOptions) -> GalleryReport {
        let results: Vec<ExpectationResult> = self.expectations.iter().map(|e| self.verify_one(e, opts)).collect();
        GalleryReport {
            id: self.id.clone(),
            pass: results.iter().all(|r| r.pass),
            results,
        }
    }

    fn verify_one(&self, e: &Expectation, opts: &VerifyOptions) -> ExpectationResult {
        let (expected, outcome) = self.evaluate(e, opts);
        let (actual, pass) = match outcome {
            Ok((actual, pass)) => (actual, pass),
            Err(msg) => (format!("error: {msg}"), false),
        };
        ExpectationResult {
            name: e.to_string(),
            expected,
            actual,
            pass,
        }
    }

    fn evaluate(&self, e: &Expectation, opts: &VerifyOptions) -> (String, Result<(String, bool), String>) {
        let exact = || self.exact().ok_or_else(|| "entry has no exact law".to_string());
        let elliptical = || match self.model() {
            Some(ContinuousModel::Elliptical(s)) => Ok(s),
            _ => Err("entry has no elliptical model".to_string()),
        };
        let holds_str = |b: bool| if b { "holds" } else { "fails" }.to_string();
        match e {
            Expectation::Symmetry { prefix, condition, holds } => (
                holds_str(*holds),
                exact().and_then(|d| {
                    let p = d.prefix(*prefix).map_err(|e| e.to_string())?;
                    let v = check(&p, *condition).map_err(|e| e.to_string())?;
                    Ok((holds_str(v.holds), v.holds == *holds))
                }),
            ),
            Expectation::Label { kind, label } => (
                label_str(label),
                exact().and_then(|d| {
                    let c = classify(d).map_err(|e| e.to_string())?;
                    let got = match kind {
                        Extreme::Max => c.label_max,
                        Extreme::Min => c.label_min,
                    };
                    Ok((label_str(&got), got == *label))
                }),
            ),
            Expectation::Member { kind, label } => (
                format!("member of {label}"),
                exact().and_then(|d| {
                    let c = classify(d).map_err(|e| e.to_string())?;
                    let chain = match kind {
                        Extreme::Max => &c.max_chain,
                        Extreme::Min => &c.min_chain,
                    };
                    let ok = chain.satisfies(*label);
                    Ok((format!("label {}", label_str(&chain.label)), ok))
                }),
            ),
            Expectation::AbsLaw { indices, kind, law } => (
                law_str(law),
                exact().and_then(|d| {
                    let got = abs_extreme_over(d, indices, *kind).map_err(|e| e.to_string())?;
                    Ok((law_str(&got), got == *law))
                }),
            ),
            Expectation::PrefixCdf { kind, len, x, value } => (
                format_rational(value),
                exact().and_then(|d| {
                    let got = abs_extreme_dist(d, *len, *kind).map_err(|e| e.to_string())?.cdf(x);
                    Ok((format_rational(&got), got == *value))
                }),
            ),
            Expectation::DensityGrid { condition, lo, hi, steps } => (
                "0 violations".into(),
                elliptical().and_then(|s| {
                    let r = density_symmetry_grid(s, *condition, &Grid::uniform(s.dim(), *lo, *hi, *steps))
                        .map_err(|e| e.to_string())?;
                    Ok((
                        format!("{} violations, max deviation {:e}", r.violations.unwrap_or(0), r.max_deviation),
                        r.pass,
                    ))
                }),
            ),
            Expectation::Monte { check } => (
                "consistent".into(),
                self.model().ok_or_else(|| "entry has no continuous model".to_string()).and_then(|m| {
                    let cfg = MCConfig::new(opts.mc_samples, opts.seed, opts.alpha).map_err(|e| e.to_string())?;
                    let r = run_mc_check(m, &cfg, *check).map_err(|e| e.to_string())?;
                    let verdict = if r.pass { "consistent" } else { "inconsistent" };
                    Ok((
                        format!("{verdict} (deviation {:.5}, tolerance {:.5})", r.max_deviation, r.tolerance),
                        r.pass,
                    ))
                }),
            ),
            Expectation::SeqEquations => (
                "hold".into(),
                self.seq_spec().and_then(|s| {
                    let seq = build_gaussian_seq(s).map_err(|e| e.to_string())?;
                    let ok = seq.satisfies_re_equations();
                    Ok((if ok { "hold" } else { "violated" }.into(), ok))
                }),
            ),
            Expectation::SeqPrefixRe { k, l, steps } => (
                "0 violations".into(),
                self.seq_spec().and_then(|s| {
                    let sub = GaussianSeqSpec {
                        n: *l,
                        mu: s.mu,
                        case: match &s.case {
                            SeqCase::Explicit(ks) => SeqCase::Explicit(ks[..l - 1].to_vec()),
                            other => other.clone(),
                        },
                        rho_params: s.rho_params[..l - 1].to_vec(),
                    };
                    let spec = build_gaussian_seq(&sub)
                        .and_then(|g| g.to_elliptical(1.0))
                        .map_err(|e| e.to_string())?;
                    let r = density_symmetry_grid(&spec, Condition::ReKl { k: *k, l: *l }, &Grid::uniform(*l, -3.0, 3.0, *steps))
                        .map_err(|e| e.to_string())?;
                    Ok((
                        format!("{} violations, max deviation {:e}", r.violations.unwrap_or(0), r.max_deviation),
                        r.pass,
                    ))
                }),
            ),
        }
    }

    fn seq_spec(&self) -> Result<&GaussianSeqSpec, String> {
        self.seq.as_ref().ok_or_else(|| "entry is not a Gaussian sequence".to_string())
    }
}

struct Params<'a> {
    id: &'a str,
    raw: &'a str,
}

impl Params<'_> {
    fn bad(&self, reason: impl Into<String>) -> GalleryError {
        GalleryError::BadParams {
            id: self.id.to_string(),
            reason: reason.into(),
        }
    }

    fn fields(&self) -> Vec<&str> {
        if self.raw.is_empty() {
            vec![]
        } else {
            self.raw.split(',').map(str::trim).collect()
        }
    }

    fn count(&self, s: &str, min: usize) -> Result<usize, GalleryError> {
        let n: usize = s.parse().map_err(|_| self.bad(format!("expected a count, got {s:?}")))?;
        if n < min {
            return Err(self.bad(format!("count must be at least {min}, got {n}")));
        }
        Ok(n)
    }

    fn real(&self, s: &str) -> Result<f64, GalleryError> {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.bad(format!("expected a finite number, got {s:?}")))
    }

    fn rational(&self, s: &str) -> Result<Rational, GalleryError> {
        parse_rational(s).map_err(|e| self.bad(e.to_string()))
    }

    fn reals<const N: usize>(&self) -> Result<[f64; N], GalleryError> {
        let f = self.fields();
        if f.len() != N {
            return Err(self.bad(format!("expected {N} comma-separated values, got {}", f.len())));
        }
        let mut out = [0.0; N];
        for (slot, s) in out.iter_mut().zip(f) {
            *slot = self.real(s)?;
        }
        Ok(out)
    }

    fn none(&self) -> Result<(), GalleryError> {
        if self.raw.is_empty() {
            Ok(())
        } else {
            Err(self.bad("takes no parameters"))
        }
    }

    /// Finite symmetric set of distinct rationals, returned sorted.
    fn symmetric_set(&self, fields: &[&str]) -> Result<Vec<Rational>, GalleryError> {
        let mut a = fields.iter().map(|s| self.rational(s)).collect::<Result<Vec<_>, _>>()?;
        a.sort();
        let len = a.len();
        a.dedup();
        if a.len() != len {
            return Err(self.bad("set elements must be distinct"));
        }
        if a.len() < 2 {
            return Err(self.bad("set needs at least 2 elements"));
        }
        if a.iter().any(|v| a.binary_search(&-v).is_err()) {
            return Err(self.bad("set must satisfy A = -A"));
        }
        Ok(a)
    }
}

pub fn gallery(id: &str) -> Result<GalleryEntry, GalleryError> {
    let (name, raw) = id.split_once(':').unwrap_or((id, ""));
    let p = Params { id, raw: raw.trim() };
    let entry = |description: String, dist: GalleryDist, expectations: Vec<Expectation>| GalleryEntry {
        id: id.to_string(),
        description,
        dist,
        expectations,
        seq: None,
    };
    match name {
        "sci-not-re" => {
            p.none()?;
            Ok(entry(CATALOG[0].1.into(), GalleryDist::Exact(sci_not_re()), sci_not_re_expect()))
        }
        "draws-2" => {
            let a = p.symmetric_set(&p.fields())?;
            let d = draws(&a, 2)?;
            Ok(entry(format!("two draws without replacement from {}", set_str(&a)), GalleryDist::Exact(d), draws2_expect(&a)?))
        }
        "axes" => {
            let n = p.count(p.raw, 2)?;
            Ok(entry(format!("uniform on the {} signed unit vectors of R^{n}", 2 * n), GalleryDist::Exact(axes(n)?), axes_expect(n)))
        }
        "remark-asym" => {
            p.none()?;
            Ok(entry(CATALOG[3].1.into(), GalleryDist::Exact(remark_asym()?), remark_expect()?))
        }
        "alt-signs" => {
            let n = p.count(p.raw, 2)?;
            let base = alt_base()?;
            let factors: Vec<UnivariateDist> =
                (1..=n).map(|i| if i % 2 == 1 { base.clone() } else { base.negate() }).collect();
            let d = ExactJointDist::product(&factors)?;
            Ok(entry(format!("{n} independent alternating-sign copies of {}", law_str(&base)), GalleryDist::Exact(d), alt_expect(n)))
        }
        "draws-n" => {
            let f = p.fields();
            let (last, set) = f.split_last().ok_or_else(|| p.bad("expected A followed by n"))?;
            let n = p.count(last, 2)?;
            let a = p.symmetric_set(set)?;
            if n > a.len() {
                return Err(p.bad(format!("n = {n} exceeds |A| = {}", a.len())));
            }
            let d = draws(&a, n)?;
            Ok(entry(format!("{n} draws without replacement from {}", set_str(&a)), GalleryDist::Exact(d), drawsn_expect(&a, n)))
        }
        "iid-sym" => {
            let (fspec, n) = p.raw.rsplit_once(',').ok_or_else(|| p.bad("expected F,n"))?;
            let n = p.count(n.trim(), 2)?;
            let law = parse_symmetric_law(&p, fspec.trim())?;
            let d = ExactJointDist::product(&vec![law.clone(); n])?;
            Ok(entry(format!("{n} iid draws from {}", law_str(&law)), GalleryDist::Exact(d), iid_expect(&law, n)))
        }
        "indep-sym-step" => {
            p.none()?;
            let (x, y) = step_marginals()?;
            let d = ExactJointDist::product(&[x, y])?;
            Ok(entry(CATALOG[7].1.into(), GalleryDist::Exact(d), step_expect()?))
        }
        "indep-sym-ladder" => {
            let n = p.count(p.raw, 2)?;
            let factors = (1..=n).map(ladder_law).collect::<Result<Vec<_>, _>>()?;
            let d = ExactJointDist::product(&factors)?;
            let mut ex = Vec::new();
            for kind in [Extreme::Max, Extreme::Min] {
                ex.push(Expectation::Label {
                    kind,
                    label: Some(Label::new(kind, true, false)),
                });
            }
            Ok(entry(format!("{n} independent symmetric ladder variables"), GalleryDist::Exact(d), ex))
        }
        "bvn" => {
            let [mu, rho] = p.reals::<2>()?;
            let spec = EllipticalSpec::bivariate(mu, -mu, 1.0, 1.0, rho, Generator::Gaussian)?;
            let ex = vec![
                grid(Condition::Re, 4.0, 41),
                grid(Condition::Ure, 4.0, 41),
                grid(Condition::Lre, 4.0, 41),
                Expectation::Monte { check: McCheck::FoldedKs },
                mc("max=x"),
                mc("min=y"),
            ];
            Ok(entry(
                format!("bivariate normal, means ({mu}, {}), correlation {rho}", -mu),
                GalleryDist::Continuous(ContinuousModel::Elliptical(spec)),
                ex,
            ))
        }
        "elliptical" => {
            let f = p.fields();
            if f.len() != 6 {
                return Err(p.bad(format!("expected gen,mu,nu,sigma,tau,rho, got {} values", f.len())));
            }
            let generator = match f[0] {
                "gauss" => Generator::Gaussian,
                g if g.starts_with('t') => Generator::StudentT { nu: p.real(&g[1..])? },
                g => return Err(p.bad(format!("generator must be gauss or t<nu>, got {g:?}"))),
            };
            let [mu, nu, sigma, tau, rho] = [p.real(f[1])?, p.real(f[2])?, p.real(f[3])?, p.real(f[4])?, p.real(f[5])?];
            let spec = EllipticalSpec::bivariate(mu, nu, sigma, tau, rho, generator)?;
            Ok(entry(
                format!("bivariate elliptical ({}), location ({mu}, {nu}), scales ({sigma}, {tau}), rho {rho}", f[0]),
                GalleryDist::Continuous(ContinuousModel::Elliptical(spec)),
                elliptical_expect(mu, nu, sigma, tau),
            ))
        }
        "intraclass" => {
            let f = p.fields();
            if f.len() != 2 {
                return Err(p.bad("expected n,rho"));
            }
            let n = p.count(f[0], 3)?;
            if n > 6 {
                return Err(p.bad("n is limited to 6 to keep grids tractable"));
            }
            let rho = p.real(f[1])?;
            if rho == 0.0 {
                return Err(p.bad("rho must be nonzero"));
            }
            let spec = EllipticalSpec::intraclass(n, 1.0, rho, Generator::Gaussian)?;
            Ok(entry(
                format!("centered Gaussian in R^{n}, unit variances, intraclass correlation {rho}"),
                GalleryDist::Continuous(ContinuousModel::Elliptical(spec)),
                intraclass_expect(n, rho),
            ))
        }
        "gauss-seq" => {
            let f = p.fields();
            if f.len() < 2 {
                return Err(p.bad("expected case,n[,mu[,rho_2..rho_n]]"));
            }
            let case = match f[0] {
                "1" => SeqCase::AnchorFirst,
                "2" => SeqCase::Alternating,
                c => return Err(p.bad(format!("case must be 1 or 2, got {c:?}"))),
            };
            let n = p.count(f[1], 2)?;
            if n > 6 {
                return Err(p.bad("n is limited to 6 to keep grids tractable"));
            }
            let mu = f.get(2).map(|s| p.real(s)).transpose()?.unwrap_or(0.5);
            let mut rho_params = f[3.min(f.len())..].iter().map(|s| p.real(s)).collect::<Result<Vec<_>, _>>()?;
            match rho_params.len() {
                0 => rho_params = vec![0.3; n - 1],
                1 => rho_params = vec![rho_params[0]; n - 1],
                _ => {}
            }
            let spec = GaussianSeqSpec { n, mu, case, rho_params };
            let seq = build_gaussian_seq(&spec)?;
            let model = ContinuousModel::Elliptical(seq.to_elliptical(1.0)?);
            let mut e = entry(
                format!("Gaussian sequence of length {n} with k-map {:?}, mu {mu}", seq.k_map),
                GalleryDist::Continuous(model),
                gauss_seq_expect(&seq.k_map),
            );
            e.seq = Some(spec);
            Ok(e)
        }
        "indep-scale" => {
            let f = p.fields();
            if f.len() != 3 {
                return Err(p.bad("expected family,theta1,theta2"));
            }
            let family = match f[0] {
                "normal" => ScaleFamily::Normal,
                "cauchy" => ScaleFamily::Cauchy,
                other => return Err(p.bad(format!("family must be normal or cauchy, got {other:?}"))),
            };
            let (t1, t2) = (p.real(f[1])?, p.real(f[2])?);
            if !(t1 > 0.0 && t1 <= t2) {
                return Err(ContlabError::InvalidThetaOrder { theta1: t1, theta2: t2 }.into());
            }
            let ex = if t1 < t2 {
                vec![mc("x<min"), mc("min=max"), mc("max<y")]
            } else {
                vec![mc("x=min"), mc("min=max"), mc("max=y")]
            };
            Ok(entry(
                format!("independent centered {} coordinates with scales {t1} and {t2}", f[0]),
                GalleryDist::Continuous(ContinuousModel::IndependentScale {
                    family,
                    thetas: vec![t1, t2],
                }),
                ex,
            ))
        }
        _ => Err(GalleryError::UnknownId(id.to_string())),
    }
}

fn set_str(a: &[Rational]) -> String {
    format!("{{{}}}", a.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn law(pairs: &[(i64, Rational)]) -> Result<UnivariateDist, DistError> {
    UnivariateDist::new(pairs.iter().map(|(v, p)| (int(*v), p.clone())))
}

fn mc(s: &str) -> Expectation {
    Expectation::Monte {
        check: s.parse().expect("built-in check parses"),
    }
}

fn grid(condition: Condition, half_width: f64, steps: usize) -> Expectation {
    Expectation::DensityGrid {
        condition,
        lo: -half_width,
        hi: half_width,
        steps,
    }
}

fn sym(prefix: usize, condition: Condition, holds: bool) -> Expectation {
    Expectation::Symmetry { prefix, condition, holds }
}

fn labels(strict: bool, starred: bool) -> Vec<Expectation> {
    [Extreme::Max, Extreme::Min]
        .into_iter()
        .map(|kind| Expectation::Label {
            kind,
            label: Some(Label::new(kind, strict, starred)),
        })
        .collect()
}

fn sci_not_re() -> ExactJointDist {
    ExactJointDist::new(2, vec![(ints(&[1, 0]), rat(1, 2)), (ints(&[-1, 0]), rat(1, 2))]).expect("valid pmf")
}

fn sci_not_re_expect() -> Vec<Expectation> {
    vec![sym(2, Condition::Sci, true), sym(2, Condition::Re, false)]
}

/// Ordered samples of size `n` without replacement, all equally likely.
fn draws(a: &[Rational], n: usize) -> Result<ExactJointDist, DistError> {
    fn rec(a: &[Rational], used: &mut Vec<bool>, cur: &mut Vec<Rational>, n: usize, out: &mut Vec<Vec<Rational>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..a.len() {
            if !used[i] {
                used[i] = true;
                cur.push(a[i].clone());
                rec(a, used, cur, n, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(a, &mut vec![false; a.len()], &mut Vec::new(), n, &mut out);
    ExactJointDist::uniform(n, out)
}

/// `P[|X| = a] = 2/|A|` for `a > 0` and `1/|A|` at zero.
fn draws_abs_law(a: &[Rational]) -> Result<UnivariateDist, DistError> {
    let m = a.len() as i64;
    UnivariateDist::new(a.iter().filter(|v| !v.is_negative()).map(|v| {
        let p = if v.is_zero() { rat(1, m) } else { rat(2, m) };
        (v.clone(), p)
    }))
}

fn draws2_expect(a: &[Rational]) -> Result<Vec<Expectation>, DistError> {
    let abs = draws_abs_law(a)?;
    let mut ex = vec![
        sym(2, Condition::Exchangeable, true),
        sym(2, Condition::Re, true),
        sym(2, Condition::Ere, true),
        sym(2, Condition::Esci, false),
    ];
    for (indices, kind) in [(vec![1], Extreme::Max), (vec![2], Extreme::Max), (vec![1, 2], Extreme::Max), (vec![1, 2], Extreme::Min)] {
        ex.push(Expectation::AbsLaw {
            indices,
            kind,
            law: abs.clone(),
        });
    }
    Ok(ex)
}

fn drawsn_expect(a: &[Rational], n: usize) -> Vec<Expectation> {
    let mut ex = Vec::new();
    for l in 3..=n.min(a.len() - 1) {
        for k in 1..l {
            ex.push(sym(l, Condition::ReKl { k, l }, false));
        }
    }
    for l in 2..=n {
        ex.push(sym(
            l,
            Condition::SubSuperKl {
                variant: SubSuper::UrSub,
                k: 1,
                l,
            },
            true,
        ));
    }
    if n == 2 {
        ex.extend(labels(false, true));
    } else if n < a.len() {
        ex.extend(labels(true, true));
    } else {
        for kind in [Extreme::Max, Extreme::Min] {
            ex.push(Expectation::Member {
                kind,
                label: Label::new(kind, false, true),
            });
        }
    }
    ex
}

fn axes(n: usize) -> Result<ExactJointDist, DistError> {
    let mut pts = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [-1, 1] {
            let mut p = vec![Rational::zero(); n];
            p[i] = int(s);
            pts.push(p);
        }
    }
    ExactJointDist::uniform(n, pts)
}

fn axes_expect(n: usize) -> Vec<Expectation> {
    let mut ex = labels(n >= 3, true);
    for l in 2..=n {
        ex.push(sym(l, Condition::ReKl { k: 1, l }, true));
    }
    for kind in [Extreme::Max, Extreme::Min] {
        for l in 1..=n {
            ex.push(Expectation::PrefixCdf {
                kind,
                len: l,
                x: Rational::zero(),
                // P[|X_1| = 0] = 1 - 1/n; 1 - l/(2n) from l = 2 on
                value: Rational::one() - rat(l.max(2) as i64, 2 * n as i64),
            });
        }
    }
    ex
}

fn remark_asym() -> Result<ExactJointDist, DistError> {
    ExactJointDist::uniform(
        3,
        vec![ints(&[-1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, -1, 1]), ints(&[1, 0, 1])],
    )
}

fn remark_expect() -> Result<Vec<Expectation>, DistError> {
    let half = law(&[(0, rat(1, 2)), (1, rat(1, 2))])?;
    Ok(vec![
        sym(3, Condition::ReKl { k: 1, l: 2 }, true),
        Expectation::AbsLaw {
            indices: vec![1, 3],
            kind: Extreme::Max,
            law: half.clone(),
        },
        Expectation::AbsLaw {
            indices: vec![2, 3],
            kind: Extreme::Max,
            law: law(&[(0, rat(1, 4)), (1, rat(3, 4))])?,
        },
        Expectation::AbsLaw {
            indices: vec![1, 3],
            kind: Extreme::Min,
            law: half,
        },
        Expectation::AbsLaw {
            indices: vec![2, 3],
            kind: Extreme::Min,
            law: law(&[(0, rat(3, 4)), (1, rat(1, 4))])?,
        },
    ])
}

fn alt_base() -> Result<UnivariateDist, DistError> {
    law(&[(-1, rat(1, 4)), (0, rat(1, 4)), (2, rat(1, 2))])
}

fn alt_expect(n: usize) -> Vec<Expectation> {
    let mut ex: Vec<Expectation> = (2..=n).map(|l| sym(l, Condition::ReKl { k: l - 1, l }, true)).collect();
    ex.extend(labels(n >= 3, true));
    ex
}

fn parse_symmetric_law(p: &Params, s: &str) -> Result<UnivariateDist, GalleryError> {
    let law = if s == "pm1" {
        law(&[(-1, rat(1, 2)), (1, rat(1, 2))])?
    } else {
        let pairs = s
            .split(';')
            .map(|item| {
                let (v, q) = item.split_once(':').ok_or_else(|| p.bad(format!("expected v:p, got {item:?}")))?;
                Ok((p.rational(v.trim())?, p.rational(q.trim())?))
            })
            .collect::<Result<Vec<_>, GalleryError>>()?;
        UnivariateDist::new(pairs)?
    };
    if !law.is_symmetric() {
        return Err(p.bad("law must be symmetric about 0"));
    }
    Ok(law)
}

/// `P[|max(X_1..X_l)| <= x] = (1-u)^l - u^l` with `u = P[X > x]`, and the
/// same for `|min|` by symmetry.
fn iid_expect(law: &UnivariateDist, n: usize) -> Vec<Expectation> {
    let mut ex = vec![sym(n, Condition::Esci, true)];
    for l in 2..=n {
        ex.push(sym(l, Condition::ReKl { k: 1, l }, true));
    }
    let nondegenerate = law.abs().atoms().len() > 1;
    ex.extend(labels(nondegenerate && n >= 3, true));
    for x in law.support().filter(|v| !v.is_negative()) {
        let u = Rational::one() - law.cdf(x);
        let w = Rational::one() - &u;
        for kind in [Extreme::Max, Extreme::Min] {
            for l in 1..=n {
                ex.push(Expectation::PrefixCdf {
                    kind,
                    len: l,
                    x: x.clone(),
                    value: num_traits::pow(w.clone(), l) - num_traits::pow(u.clone(), l),
                });
            }
        }
    }
    ex
}

fn step_marginals() -> Result<(UnivariateDist, UnivariateDist), DistError> {
    Ok((
        law(&[(-1, rat(1, 4)), (0, rat(1, 2)), (1, rat(1, 4))])?,
        law(&[(-2, rat(1, 8)), (-1, rat(1, 8)), (0, rat(1, 2)), (1, rat(1, 8)), (2, rat(1, 8))])?,
    ))
}

fn step_expect() -> Result<Vec<Expectation>, DistError> {
    let m = law(&[(0, rat(1, 2)), (1, rat(3, 8)), (2, rat(1, 8))])?;
    let mut ex = vec![
        sym(2, Condition::Sci, true),
        sym(2, Condition::Re, false),
        Expectation::AbsLaw {
            indices: vec![1, 2],
            kind: Extreme::Max,
            law: m.clone(),
        },
        Expectation::AbsLaw {
            indices: vec![1, 2],
            kind: Extreme::Min,
            law: m,
        },
    ];
    for (x, v) in [(0, rat(1, 2)), (1, rat(7, 8)), (2, int(1))] {
        ex.push(Expectation::PrefixCdf {
            kind: Extreme::Max,
            len: 2,
            x: int(x),
            value: v,
        });
    }
    ex.extend(labels(true, false));
    Ok(ex)
}

/// `|X_i| = 0` w.p. 1/2 and `j` w.p. `1/(2i)` for `j = 1..i`, symmetrized.
fn ladder_law(i: usize) -> Result<UnivariateDist, DistError> {
    let i = i as i64;
    let mut pairs = vec![(0, rat(1, 2))];
    for j in 1..=i {
        pairs.push((j, rat(1, 4 * i)));
        pairs.push((-j, rat(1, 4 * i)));
    }
    law(&pairs)
}

fn elliptical_expect(mu: f64, nu: f64, sigma: f64, tau: f64) -> Vec<Expectation> {
    let sub = |variant, side_k| Condition::SubSuperKl { variant, k: side_k, l: 2 };
    let (ur_sub, lr_sub, ur_sup, lr_sup) = (
        sub(SubSuper::UrSub, 1),
        sub(SubSuper::LrSub, 1),
        sub(SubSuper::UrSup, 1),
        sub(SubSuper::LrSup, 1),
    );
    let centered = mu == 0.0 && nu == 0.0;
    if sigma == tau {
        let s = mu + nu;
        if s > 0.0 {
            vec![grid(ur_sub, 4.0, 41), grid(lr_sub, 4.0, 41), mc("min<x"), mc("min<y"), mc("x<max"), mc("y<max")]
        } else if s < 0.0 {
            vec![grid(ur_sup, 4.0, 41), grid(lr_sup, 4.0, 41), mc("max<x"), mc("max<y"), mc("x<min"), mc("y<min")]
        } else {
            vec![grid(Condition::Re, 4.0, 41), mc("max=x"), mc("min=y")]
        }
    } else if centered && tau > sigma {
        vec![grid(ur_sub, 4.0, 41), grid(lr_sup, 4.0, 41), mc("x<min"), mc("min=max"), mc("max<y")]
    } else if centered {
        vec![grid(ur_sup, 4.0, 41), grid(lr_sub, 4.0, 41), mc("y<min"), mc("min=max"), mc("max<x")]
    } else {
        vec![]
    }
}

fn intraclass_expect(n: usize, rho: f64) -> Vec<Expectation> {
    let steps = match n {
        3 => 21,
        4 => 11,
        _ => 7,
    };
    let (variant, kind) = if rho < 0.0 {
        (SubSuper::UrSub, Extreme::Max)
    } else {
        (SubSuper::LrSup, Extreme::Min)
    };
    let mut ex = vec![grid(Condition::SubSuperKl { variant, k: 1, l: n }, 3.0, steps), mc("max=min")];
    let tag = kind_str(kind);
    ex.push(mc(&format!("{tag}1={tag}2")));
    for l in 3..=n {
        ex.push(mc(&format!("{tag}{}<{tag}{l}", l - 1)));
    }
    ex
}

fn gauss_seq_expect(k_map: &[usize]) -> Vec<Expectation> {
    let n = k_map.len() + 1;
    let mut ex = vec![Expectation::SeqEquations];
    for l in 2..=n {
        let steps = if l <= 4 { 9 } else { 5 };
        ex.push(Expectation::SeqPrefixRe {
            k: k_map[l - 2],
            l,
            steps,
        });
    }
    for tag in ["max", "min"] {
        ex.push(mc(&format!("{tag}1={tag}2")));
        for l in 3..=n {
            // strict gaps here can sit far below any practical DKW band
            ex.push(mc(&format!("{tag}{}<={tag}{l}", l - 1)));
        }
    }
    ex
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_and_malformed_ids() {
        assert!(matches!(gallery("nope"), Err(GalleryError::UnknownId(_))));
        assert!(matches!(gallery("axes:1"), Err(GalleryError::BadParams { .. })));
        assert!(matches!(gallery("draws-2:-1,2"), Err(GalleryError::BadParams { .. })));
        assert!(matches!(gallery("draws-n:-1,1,3"), Err(GalleryError::BadParams { .. })));
        assert!(matches!(gallery("iid-sym:0:1/2;1:1/2,3"), Err(GalleryError::BadParams { .. })));
        assert!(matches!(gallery("sci-not-re:3"), Err(GalleryError::BadParams { .. })));
        assert!(gallery("indep-scale:normal,2,1").is_err());
    }

    #[test]
    fn axes_shape() {
        let e = gallery("axes:3").unwrap();
        let d = e.exact().unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.atoms().iter().all(|a| a.prob == rat(1, 6)));
    }

    #[test]
    fn exact_entries_verify() {
        for id in [
            "sci-not-re",
            "draws-2:-1,1",
            "draws-2:-2,-1,0,1,2",
            "axes:2",
            "axes:4",
            "remark-asym",
            "alt-signs:2",
            "alt-signs:4",
            "draws-n:-2,-1,1,2,3",
            "draws-n:-2,-1,1,2,4",
            "draws-n:-1,0,1,3",
            "iid-sym:pm1,3",
            "iid-sym:-2:1/8;-1:1/4;0:1/4;1:1/4;2:1/8,3",
            "indep-sym-step",
            "indep-sym-ladder:4",
        ] {
            let r = gallery(id).unwrap().verify(&VerifyOptions::default());
            assert!(r.pass, "{id}: {:#?}", r.results.iter().filter(|x| !x.pass).collect::<Vec<_>>());
        }
    }

    #[test]
    fn catalog_lists_every_family() {
        assert_eq!(list().len(), 14);
        assert!(list().iter().any(|(id, _)| id.starts_with("gauss-seq")));
    }
}
