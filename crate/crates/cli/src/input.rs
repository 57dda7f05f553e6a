//! Loading distributions from files, stdin or `gallery://` ids.

use std::fs;
use std::io::{self, Read};

use stochex::contlab::ContinuousModel;
use stochex::gallery::{gallery, GalleryDist, GalleryEntry};
use stochex::{ExactJointDist, UnivariateDist};

use crate::Failure;

pub const GALLERY_SCHEME: &str = "gallery://";

pub enum Source {
    Gallery(Box<GalleryEntry>),
    Text { label: String, body: String },
}

pub fn open(arg: &str) -> Result<Source, Failure> {
    if let Some(id) = arg.strip_prefix(GALLERY_SCHEME) {
        return entry(id).map(|e| Source::Gallery(Box::new(e)));
    }
    let body = if arg == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::input(format!("{arg}: {e}")))?
    };
    Ok(Source::Text {
        label: arg.to_string(),
        body,
    })
}

pub fn entry(id: &str) -> Result<GalleryEntry, Failure> {
    gallery(id).map_err(|e| Failure::input(format!("gallery id {id:?}: {e}")))
}

/// A joint law from a JSON file or an exact gallery entry.
pub fn exact(arg: &str) -> Result<ExactJointDist, Failure> {
    match open(arg)? {
        Source::Gallery(e) => match e.dist {
            GalleryDist::Exact(d) => Ok(d),
            GalleryDist::Continuous(_) => Err(Failure::input(format!(
                "{arg} is a continuous model; use `mc` or `gallery --verify`"
            ))),
        },
        Source::Text { label, body } => {
            serde_json::from_str(&body).map_err(|e| Failure::input(format!("{label}: {e}")))
        }
    }
}

/// A univariate law: `{"atoms": [{"v", "p"}]}`, a one-dimensional joint law,
/// or a one-dimensional exact gallery entry.
pub fn univariate(arg: &str) -> Result<UnivariateDist, Failure> {
    match open(arg)? {
        Source::Gallery(_) => {
            UnivariateDist::try_from(&exact(arg)?).map_err(|e| Failure::input(format!("{arg}: {e}")))
        }
        Source::Text { label, body } => {
            let value: serde_json::Value =
                serde_json::from_str(&body).map_err(|e| Failure::input(format!("{label}: {e}")))?;
            let parsed = if value.get("dim").is_some() {
                serde_json::from_value::<ExactJointDist>(value).and_then(|d| {
                    UnivariateDist::try_from(&d).map_err(serde::de::Error::custom)
                })
            } else {
                serde_json::from_value::<UnivariateDist>(value)
            };
            parsed.map_err(|e| Failure::input(format!("{label}: {e}")))
        }
    }
}

/// A continuous gallery model, with or without the scheme prefix.
pub fn model(arg: &str) -> Result<ContinuousModel, Failure> {
    let id = arg.strip_prefix(GALLERY_SCHEME).unwrap_or(arg);
    match entry(id)?.dist {
        GalleryDist::Continuous(m) => Ok(m),
        GalleryDist::Exact(_) => Err(Failure::input(format!(
            "{arg} is an exact law; use `check`, `absdist` or `classify`"
        ))),
    }
}
