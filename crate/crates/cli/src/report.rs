//! Exit codes and the machine-readable error document.

use std::fmt;

use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug)]
pub struct UsageError(pub String);

impl UsageError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn classify(err: &anyhow::Error) -> (i32, &'static str) {
    use hgzeros::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() || cause.downcast_ref::<clap::Error>().is_some() {
            return (EXIT_USAGE, "usage");
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::DigitsTooLow(_) | E::GuardTooLow(_) | E::InvalidArgument(_) | E::Parse(_) | E::Pole(_) => (EXIT_USAGE, "usage"),
                E::Io(_) => (EXIT_USAGE, "io"),
                E::PrecisionLoss { .. } | E::NoConvergence { .. } | E::BoundaryZero(_) | E::NonIntegralWinding { .. } | E::NonFinite(_) => {
                    (EXIT_NUMERICAL, "numerical")
                }
                E::Invariant(_) => (EXIT_INTERNAL, "invariant"),
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return (EXIT_USAGE, "io");
        }
    }
    (EXIT_INTERNAL, "internal")
}

pub fn exit_code(err: &anyhow::Error) -> i32 {
    classify(err).0
}

pub fn error_document(err: &anyhow::Error) -> serde_json::Value {
    let (code, kind) = classify(err);
    json!({
        "error": {
            "exit_code": code,
            "kind": kind,
            "message": format!("{err:#}"),
        }
    })
}
