//! Experiment configuration: where the function comes from, the region, and
//! how results are stored.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::Serialize;

use hgzeros::expr::Expr;
use hgzeros::models::{
    dirichlet_xi_for, gamma_family, phi_term, ramanujan_xi_truncated, two_term_combination, xi_truncated, FunctionSpec,
};
use hgzeros::number_theory::{primitive_characters, ramanujan_tau};
use hgzeros::precision::parse_real;
use hgzeros::zeros::Rectangle;
use hgzeros::{PrecisionContext, Real};

use crate::report::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheMode {
    ReadWrite,
    ReadOnly,
    Off,
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Named family: XiN, Phi, RamanujanXiN, DirichletXi, Gamma,
    /// TwoTermCombination (also `Xi3`, `RamanujanXi2` shorthands).
    #[arg(long)]
    pub family: Option<String>,
    /// Truncation order; `audit` also takes ranges `a..b` and lists `a,b,c`.
    #[arg(long = "N")]
    pub n: Option<String>,
    /// Modulus of a Dirichlet family.
    #[arg(long)]
    pub q: Option<u64>,
    /// Index among the primitive characters mod q (default 0).
    #[arg(long)]
    pub character: Option<usize>,
    /// Lower limit `a` of the Gamma family, as an expression (default `pi`).
    #[arg(long)]
    pub a: Option<String>,
    /// JSON function spec document, instead of --family.
    #[arg(long)]
    pub spec_file: Option<PathBuf>,
    /// Rectangle `x0,y0,x1,y1`.
    #[arg(long, allow_hyphen_values = true)]
    pub rect: Option<String>,
    /// Interval `a,b`.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Working precision in significant decimal digits (>= 15).
    #[arg(long)]
    pub digits: Option<u32>,
    /// Grid step (real-zero scan or M-curve alpha step).
    #[arg(long)]
    pub step: Option<String>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "read-write")]
    pub cache: CacheMode,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Common {
    pub fn spec(&self) -> anyhow::Result<FunctionSpec> {
        match (&self.family, &self.spec_file) {
            (Some(_), Some(_)) => Err(UsageError::new("give exactly one of --family and --spec-file").into()),
            (None, None) => Err(UsageError::new("a function is required: --family or --spec-file").into()),
            (None, Some(path)) => read_spec(path),
            (Some(name), None) => {
                let n = match &self.n {
                    Some(text) => Some(parse_single_n(text)?),
                    None => None,
                };
                family_spec(name, n, self)
            }
        }
    }

    pub fn context(&self, spec: &FunctionSpec) -> anyhow::Result<PrecisionContext> {
        match self.digits {
            Some(d) if d < 15 => Err(UsageError::new(format!("--digits must be >= 15, got {d}")).into()),
            Some(d) => Ok(PrecisionContext::new(d)?),
            None => Ok(spec.default_context()),
        }
    }

    pub fn rect(&self, bits: u32) -> anyhow::Result<Rectangle> {
        let text = self.rect.as_deref().ok_or_else(|| UsageError::new("--rect x0,y0,x1,y1 is required"))?;
        Rectangle::parse(text, bits).map_err(|e| UsageError::new(format!("--rect: {e}")).into())
    }

    pub fn interval(&self, bits: u32) -> anyhow::Result<(Real, Real)> {
        let text = self.interval.as_deref().ok_or_else(|| UsageError::new("--interval a,b is required"))?;
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            bail!(UsageError::new(format!("--interval expects a,b, got {text:?}")));
        }
        let a = parse_real(bits, parts[0]).map_err(|e| UsageError::new(format!("--interval: {e}")))?;
        let b = parse_real(bits, parts[1]).map_err(|e| UsageError::new(format!("--interval: {e}")))?;
        if !(a < b) {
            bail!(UsageError::new(format!("--interval needs a < b, got {text:?}")));
        }
        Ok((a, b))
    }

    pub fn step_or(&self, default: f64) -> anyhow::Result<String> {
        match &self.step {
            Some(s) => {
                let v: f64 = s.parse().map_err(|_| UsageError::new(format!("--step: not a number: {s:?}")))?;
                if !(v > 0.0) {
                    bail!(UsageError::new("--step must be positive"));
                }
                Ok(s.clone())
            }
            None => Ok(format!("{default}")),
        }
    }

    /// Truncation orders for `audit`; an empty range is allowed.
    pub fn n_values(&self) -> anyhow::Result<Vec<u32>> {
        let text = self.n.as_deref().ok_or_else(|| UsageError::new("--N is required"))?;
        parse_n_range(text)
    }
}

fn read_spec(path: &Path) -> anyhow::Result<FunctionSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    FunctionSpec::from_json(&text).map_err(|e| UsageError::new(format!("{}: {e}", path.display())).into())
}

fn parse_single_n(text: &str) -> anyhow::Result<u32> {
    text.trim()
        .parse()
        .map_err(|_| UsageError::new(format!("--N: expected a positive integer, got {text:?}")).into())
}

pub fn parse_n_range(text: &str) -> anyhow::Result<Vec<u32>> {
    let bad = || UsageError::new(format!("--N: expected k, a..b or a,b,c; got {text:?}"));
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    text.split(',').map(|p| p.trim().parse::<u32>().map_err(|_| bad().into())).collect()
}

/// Splits `Xi3` / `RamanujanXi10` shorthands into a family and order.
fn split_shorthand(name: &str) -> (&str, Option<u32>) {
    for prefix in ["RamanujanXi", "Xi", "Phi"] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if let Ok(k) = rest.parse::<u32>() {
                return (prefix, Some(k));
            }
        }
    }
    (name, None)
}

pub fn family_spec(name: &str, n: Option<u32>, common: &Common) -> anyhow::Result<FunctionSpec> {
    let (base, implied) = split_shorthand(name);
    let n = match (implied, n) {
        (Some(a), Some(b)) if a != b => bail!(UsageError::new(format!("--family {name} conflicts with --N {b}"))),
        (Some(a), _) => Some(a),
        (None, b) => b,
    };
    let need_n = || n.ok_or_else(|| UsageError::new(format!("--family {name} needs --N")));
    let spec = match base {
        "XiN" | "Xi" => xi_truncated(need_n()?)?,
        "Phi" => phi_term(need_n()?)?,
        "RamanujanXiN" | "RamanujanXi" => {
            let n = need_n()?;
            ramanujan_xi_truncated(n, &ramanujan_tau(n as usize)?)?
        }
        "DirichletXi" => {
            let q = common.q.ok_or_else(|| UsageError::new("--family DirichletXi needs --q"))?;
            let chars = primitive_characters(q)?;
            let k = common.character.unwrap_or(0);
            let chi = chars.get(k).ok_or_else(|| {
                UsageError::new(format!("modulus {q} has {} primitive characters, --character {k} is out of range", chars.len()))
            })?;
            dirichlet_xi_for(chi, need_n()?)?
        }
        "Gamma" => {
            let a = Expr::parse(common.a.as_deref().unwrap_or("pi")).map_err(|e| UsageError::new(format!("--a: {e}")))?;
            gamma_family(a)?
        }
        "TwoTermCombination" => two_term_combination(),
        "CuspFormB" => bail!(UsageError::new("CuspFormB needs its coefficients: pass a --spec-file")),
        other => bail!(UsageError::new(format!("unknown family {other:?}"))),
    };
    Ok(spec)
}
