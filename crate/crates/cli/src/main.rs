//! `stochex`: exact symmetry checks, absolute-extreme laws and numeric
//! companions from the command line.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit status is 0 when every
//! check passes, 1 when a mathematical check fails and 2 on bad usage or
//! input.

mod input;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use stochex::contlab::{phi2, run_mc_check, sample, verify_identity_11, MCConfig, McCheck, DEFAULT_ALPHA};
use stochex::extremes::{abs_extreme_dist, verify_region_identities, write_cdf_csv, Extreme};
use stochex::gallery::{list, GalleryDist, VerifyOptions};
use stochex::rational::{to_f64, Render};
use stochex::stochorder::{classify, st_compare};
use stochex::symmetry::{check, Condition, SubSuper};
use stochex::parse_rational;

const DEFAULT_SEED: u64 = 2718;

#[derive(Parser)]
#[command(name = "stochex", version, about = "Reverse-exchangeability symmetries and absolute extremes")]
struct Cli {
    /// Render rationals as decimal numbers instead of exact "a/b" strings.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a symmetry condition on an exact law.
    Check {
        /// JSON file, `-` for stdin, or gallery://<id>.
        dist: String,
        #[arg(long, value_enum)]
        condition: Kind,
        /// First index for re-kl and the one-sided conditions (default 1).
        #[arg(long)]
        k: Option<usize>,
        /// Second index for re-kl and the one-sided conditions (default 2).
        #[arg(long)]
        l: Option<usize>,
    },
    /// Law of |max| or |min| over the first L coordinates.
    Absdist {
        dist: String,
        #[arg(long, value_enum)]
        stat: StatKind,
        /// Prefix length L (default: the full dimension).
        #[arg(long)]
        prefix: Option<usize>,
        /// Emit an `x,F` cdf table instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Region probabilities and absolute cdfs of a bivariate law at x.
    Regions {
        dist: String,
        /// Threshold as an exact rational, e.g. 1/2.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Exact usual stochastic order between two univariate laws.
    Order { a: String, b: String },
    /// Prefix chains of |max| and |min| with their family labels.
    Classify { dist: String },
    /// Emit or verify a catalog entry.
    #[command(group(ArgGroup::new("action").args(["emit", "verify"])))]
    Gallery {
        /// Catalog id, with or without the gallery:// prefix.
        #[arg(required_unless_present = "list", conflicts_with = "list")]
        id: Option<String>,
        /// List catalog id patterns.
        #[arg(long)]
        list: bool,
        /// Print the law (default).
        #[arg(long)]
        emit: bool,
        /// Evaluate every expectation attached to the entry.
        #[arg(long)]
        verify: bool,
        /// Monte Carlo sample size for continuous entries.
        #[arg(long, default_value_t = VerifyOptions::default().mc_samples)]
        samples: usize,
        #[arg(long, env = "STOCHEX_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
    },
    /// Bivariate standard normal cdf.
    #[command(allow_negative_numbers = true)]
    Phi2 { x: f64, y: f64, rho: f64 },
    /// Grid check of Phi2(x,x;rho) - Phi2(-x,-x;rho) = Phi(x) - Phi(-x).
    Identity11 {
        #[arg(long, default_value_t = 3.0)]
        xmax: f64,
        /// Number of equally spaced x values in [0, xmax].
        #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u32).range(2..))]
        steps: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-0.95,-0.5,0,0.5,0.95")]
        rhos: Vec<f64>,
    },
    /// Monte Carlo check on a continuous catalog model.
    #[command(group(ArgGroup::new("what").args(["check", "csv"]).required(true)))]
    Mc {
        /// Continuous catalog id, e.g. bvn:1.5,0.6.
        model: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, env = "STOCHEX_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// folded-ks, or A<B, A<=B, A=B over x, y, xK, max, min, maxL, minL.
        #[arg(long)]
        check: Option<String>,
        /// Emit the sample matrix as CSV instead of running a check.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Re,
    E,
    Sci,
    Esci,
    Ere,
    Ure,
    Lre,
    ReKl,
    ReN,
    UrSub,
    LrSub,
    UrSup,
    LrSup,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatKind {
    Max,
    Min,
}

impl From<StatKind> for Extreme {
    fn from(s: StatKind) -> Self {
        match s {
            StatKind::Max => Extreme::Max,
            StatKind::Min => Extreme::Min,
        }
    }
}

/// Why a run did not succeed.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }
}

enum Body {
    Json(Value),
    Text(String),
}

struct Outcome {
    body: Body,
    pass: bool,
    /// Printed to stderr when `pass` is false.
    note: String,
}

impl Outcome {
    fn json(v: impl Serialize) -> Self {
        Outcome {
            body: Body::Json(serde_json::to_value(v).expect("serializable")),
            pass: true,
            note: String::new(),
        }
    }

    fn failing_if(mut self, fail: bool, note: impl Into<String>) -> Self {
        if fail {
            self.pass = false;
            self.note = note.into();
        }
        self
    }
}

fn condition(kind: Kind, k: Option<usize>, l: Option<usize>) -> Result<Condition, Failure> {
    let indexed = matches!(kind, Kind::ReKl | Kind::UrSub | Kind::LrSub | Kind::UrSup | Kind::LrSup);
    if !indexed {
        if k.is_some() {
            return Err(Failure::Usage("--k only applies to re-kl and the ur/lr-sub/sup conditions".into()));
        }
        if l.is_some() {
            return Err(Failure::Usage("--l only applies to re-kl and the ur/lr-sub/sup conditions".into()));
        }
    }
    let (k, l) = (k.unwrap_or(1), l.unwrap_or(2));
    let sub_super = |variant| Condition::SubSuperKl { variant, k, l };
    Ok(match kind {
        Kind::Re => Condition::Re,
        Kind::E => Condition::Exchangeable,
        Kind::Sci => Condition::Sci,
        Kind::Esci => Condition::Esci,
        Kind::Ere => Condition::Ere,
        Kind::Ure => Condition::Ure,
        Kind::Lre => Condition::Lre,
        Kind::ReKl => Condition::ReKl { k, l },
        Kind::ReN => Condition::ReN,
        Kind::UrSub => sub_super(SubSuper::UrSub),
        Kind::LrSub => sub_super(SubSuper::LrSub),
        Kind::UrSup => sub_super(SubSuper::UrSup),
        Kind::LrSup => sub_super(SubSuper::LrSup),
    })
}

fn run(command: Command, render: Render) -> Result<Outcome, Failure> {
    match command {
        Command::Check { dist, condition: kind, k, l } => {
            let cond = condition(kind, k, l)?;
            let d = input::exact(&dist)?;
            let v = check(&d, cond).map_err(|e| Failure::input(e.to_string()))?;
            let fail = !v.holds;
            Ok(Outcome::json(&v).failing_if(fail, format!("{cond} fails; witness in output")))
        }
        Command::Absdist { dist, stat, prefix, csv } => {
            let d = input::exact(&dist)?;
            let len = prefix.unwrap_or(d.dim());
            let law = abs_extreme_dist(&d, len, stat.into()).map_err(|e| Failure::Usage(format!("--prefix: {e}")))?;
            let table = law.cdf_table(&[]);
            if csv {
                let mut buf = Vec::new();
                write_cdf_csv(&mut buf, &table, render).expect("write to memory");
                return Ok(Outcome {
                    body: Body::Text(String::from_utf8(buf).expect("ascii table")),
                    pass: true,
                    note: String::new(),
                });
            }
            let kind = Extreme::from(stat);
            let cdf: Vec<[String; 2]> = table
                .iter()
                .map(|(x, f)| [Render::Exact.show(x), Render::Exact.show(f)])
                .collect();
            Ok(Outcome::json(json!({ "stat": kind, "prefix": len, "law": law, "cdf": cdf })))
        }
        Command::Regions { dist, x } => {
            let x = parse_rational(&x).map_err(|e| Failure::Usage(format!("--x: {e}")))?;
            let d = input::exact(&dist)?;
            match verify_region_identities(&d, &x) {
                Ok(r) => Ok(Outcome::json(r)),
                Err(e @ stochex::extremes::ExtremesError::IdentityViolated { .. }) => {
                    Ok(Outcome::json(json!({ "error": e.to_string() })).failing_if(true, e.to_string()))
                }
                Err(e) => Err(Failure::input(e.to_string())),
            }
        }
        Command::Order { a, b } => {
            let (u, v) = (input::univariate(&a)?, input::univariate(&b)?);
            Ok(Outcome::json(st_compare(&u, &v)))
        }
        Command::Classify { dist } => {
            let d = input::exact(&dist)?;
            let c = classify(&d).map_err(|e| Failure::input(e.to_string()))?;
            Ok(Outcome::json(c))
        }
        Command::Gallery {
            id,
            list: listing,
            emit: _,
            verify,
            samples,
            seed,
            alpha,
        } => {
            if listing {
                let rows: Vec<Value> = list().iter().map(|(id, d)| json!({ "id": id, "description": d })).collect();
                return Ok(Outcome::json(rows));
            }
            let id = id.expect("clap requires an id without --list");
            let id = id.strip_prefix(input::GALLERY_SCHEME).unwrap_or(&id);
            let e = input::entry(id)?;
            if verify {
                let opts = VerifyOptions {
                    mc_samples: samples,
                    seed,
                    alpha,
                };
                let r = e.verify(&opts);
                let fail = !r.pass;
                return Ok(Outcome::json(&r).failing_if(fail, format!("{id}: an expectation failed")));
            }
            Ok(match &e.dist {
                GalleryDist::Exact(d) => Outcome::json(d),
                GalleryDist::Continuous(m) => {
                    let expectations: Vec<String> = e.expectations.iter().map(|x| x.to_string()).collect();
                    Outcome::json(json!({
                        "id": e.id,
                        "description": e.description,
                        "kind": "continuous",
                        "dim": m.dim(),
                        "expectations": expectations,
                    }))
                }
            })
        }
        Command::Phi2 { x, y, rho } => {
            let value = phi2(x, y, rho).map_err(|e| Failure::Usage(format!("<rho>: {e}")))?;
            Ok(Outcome::json(json!({ "x": x, "y": y, "rho": rho, "value": value })))
        }
        Command::Identity11 { xmax, steps, rhos } => {
            if !(xmax.is_finite() && xmax >= 0.0) {
                return Err(Failure::Usage(format!("--xmax must be finite and nonnegative, got {xmax}")));
            }
            let last = (steps - 1) as f64;
            let xs: Vec<f64> = (0..steps).map(|i| xmax * i as f64 / last).collect();
            let r = verify_identity_11(&xs, &rhos).map_err(|e| Failure::Usage(format!("--rhos: {e}")))?;
            let fail = !r.pass;
            Ok(Outcome::json(&r).failing_if(fail, "identity deviation above tolerance"))
        }
        Command::Mc {
            model,
            n,
            seed,
            alpha,
            check: claim,
            csv,
        } => {
            let m = input::model(&model)?;
            let cfg = MCConfig::new(n, seed, alpha).map_err(|e| Failure::Usage(format!("--n/--alpha: {e}")))?;
            if csv {
                let s = sample(&m, &cfg).map_err(|e| Failure::input(e.to_string()))?;
                let mut buf = Vec::new();
                s.write_csv(&mut buf).expect("write to memory");
                return Ok(Outcome {
                    body: Body::Text(String::from_utf8(buf).expect("ascii table")),
                    pass: true,
                    note: String::new(),
                });
            }
            let claim = claim.expect("clap requires --check without --csv");
            let c: McCheck = claim.parse().map_err(|e| Failure::Usage(format!("--check: {e}")))?;
            let r = run_mc_check(&m, &cfg, c).map_err(|e| Failure::Usage(format!("--check: {e}")))?;
            let fail = !r.pass;
            Ok(Outcome::json(&r).failing_if(fail, format!("{claim} rejected at alpha {alpha}")))
        }
    }
}

/// Replaces every exact rational string by its nearest `f64`.
fn to_decimal(v: Value) -> Value {
    match v {
        Value::String(s) => match parse_rational(&s) {
            Ok(r) => json!(to_f64(&r)),
            Err(_) => Value::String(s),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(to_decimal).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, to_decimal(v))).collect()),
        other => other,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let render = if cli.decimal { Render::Decimal } else { Render::Exact };
    match run(cli.command, render) {
        Ok(out) => {
            let text = match out.body {
                Body::Json(v) => {
                    let v = if cli.decimal { to_decimal(v) } else { v };
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
                Body::Text(t) => t,
            };
            let mut stdout = io::stdout().lock();
            if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("stochex: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("stochex: {}", out.note);
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) | Err(Failure::Input(msg)) => {
            eprintln!("stochex: {msg}");
            ExitCode::from(2)
        }
    }
}
