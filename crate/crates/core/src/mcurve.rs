//! The M-curve: for each α, the height `M(F, α) ≥ 0` where `|F(α + iy)|`
//! is smallest, and how its local maxima line up with non-real zeros.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::mcurve_y_cap;
use crate::error::{Error, Result};
use crate::models::{Evaluator, FunctionSpec};
use crate::precision::{Complex, PrecisionContext};
use crate::zeros::ZeroList;

#[derive(Clone, Debug)]
pub struct MCurveOptions {
    /// Grid step of the coarse search in `y`.
    pub y_step: f64,
    /// Target width of the golden-section bracket.
    pub resolution: f64,
    /// Fixed search ceiling; `None` uses `mcurve_y_cap(α)` per point.
    pub y_cap: Option<f64>,
}

impl Default for MCurveOptions {
    fn default() -> Self {
        Self {
            y_step: 0.1,
            resolution: 1e-6,
            y_cap: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MSample {
    pub alpha: f64,
    pub m: f64,
    pub min_modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCurve {
    pub samples: Vec<MSample>,
    pub alpha_step: f64,
    /// Largest search ceiling used over the curve.
    pub y_cap: f64,
    pub y_step: f64,
    pub digits: u32,
}

/// `(m, min_modulus)` on the ray `α + iy`, `y ∈ [0, cap]`.
pub fn m_point(spec: &FunctionSpec, alpha: f64, ctx: &PrecisionContext) -> Result<(f64, f64)> {
    let ev = Evaluator::new(spec, ctx)?;
    m_point_with(&ev, alpha, &MCurveOptions::default())
}

fn modulus(ev: &Evaluator, alpha: f64, y: f64) -> Result<f64> {
    let bits = ev.ctx().bits();
    let v = ev.eval(&Complex::from_f64(bits, alpha, y))?;
    Ok(v.abs().to_f64())
}

pub fn m_point_with(ev: &Evaluator, alpha: f64, opts: &MCurveOptions) -> Result<(f64, f64)> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("m_point needs alpha >= 0, got {alpha}")));
    }
    let cap = opts.y_cap.unwrap_or_else(|| mcurve_y_cap(alpha));
    let n = (cap / opts.y_step).ceil() as usize;
    let mut best = (0usize, f64::INFINITY);
    for k in 0..=n {
        let v = modulus(ev, alpha, k as f64 * opts.y_step)?;
        // strict comparison keeps the smallest y on ties
        if v < best.1 {
            best = (k, v);
        }
    }
    let yk = best.0 as f64 * opts.y_step;
    let lo = (yk - opts.y_step).max(0.0);
    let hi = yk + opts.y_step;
    let (y, v) = golden_min(|y| modulus(ev, alpha, y), lo, hi, opts.resolution)?;
    // a minimum pinned to the floor is reported as exactly 0
    if best.0 == 0 && y <= opts.resolution {
        let v0 = modulus(ev, alpha, 0.0)?;
        if v0 <= v {
            return Ok((0.0, v0));
        }
    }
    if v <= best.1 {
        Ok((y, v))
    } else {
        Ok((yk, best.1))
    }
}

fn golden_min(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    // the bracket ends compete too, so a minimum at the floor y = 0 survives
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for y in [a, b] {
        let v = f(y)?;
        if v < best.1 || (v == best.1 && y < best.0) {
            best = (y, v);
        }
    }
    Ok(best)
}

pub fn m_curve(spec: &FunctionSpec, alpha_min: f64, alpha_max: f64, alpha_step: f64, ctx: &PrecisionContext) -> Result<MCurve> {
    m_curve_with(spec, alpha_min, alpha_max, alpha_step, ctx, &MCurveOptions::default())
}

pub fn m_curve_with(
    spec: &FunctionSpec,
    alpha_min: f64,
    alpha_max: f64,
    alpha_step: f64,
    ctx: &PrecisionContext,
    opts: &MCurveOptions,
) -> Result<MCurve> {
    if !(alpha_min >= 0.0 && alpha_min < alpha_max) {
        return Err(Error::InvalidArgument(format!("m_curve needs 0 <= alpha_min < alpha_max, got [{alpha_min}, {alpha_max}]")));
    }
    if !(alpha_step > 0.0) {
        return Err(Error::InvalidArgument("m_curve needs alpha_step > 0".into()));
    }
    let ev = Evaluator::new(spec, ctx)?;
    let count = ((alpha_max - alpha_min) / alpha_step + 1e-9).floor() as usize;
    // multiply rather than accumulate, so grid points are reproducible
    let alphas: Vec<f64> = (0..=count).map(|k| alpha_min + k as f64 * alpha_step).collect();
    let points = alphas
        .par_iter()
        .map(|&a| m_point_with(&ev, a, opts).map(|(m, v)| MSample { alpha: a, m, min_modulus: v }))
        .collect::<Result<Vec<_>>>()?;
    let y_cap = alphas
        .iter()
        .map(|&a| opts.y_cap.unwrap_or_else(|| mcurve_y_cap(a)))
        .fold(0.0, f64::max);
    Ok(MCurve {
        samples: points,
        alpha_step,
        y_cap,
        y_step: opts.y_step,
        digits: ctx.digits(),
    })
}

/// Interior local maxima of `m`; a flat top (values within `1e-6`) counts
/// once, at its midpoint.
pub fn local_maxima(curve: &MCurve) -> Vec<(f64, f64)> {
    let s = &curve.samples;
    let tol = 1e-6;
    let mut out = Vec::new();
    if s.len() < 3 {
        return out;
    }
    let mut i = 1;
    while i + 1 < s.len() {
        if s[i].m > s[i - 1].m + tol {
            let mut j = i;
            while j + 1 < s.len() && (s[j + 1].m - s[i].m).abs() <= tol {
                j += 1;
            }
            if j + 1 < s.len() && s[j + 1].m < s[j].m - tol {
                let mid = (i + j) / 2;
                let alpha = if (j - i) % 2 == 0 {
                    s[mid].alpha
                } else {
                    0.5 * (s[mid].alpha + s[mid + 1].alpha)
                };
                out.push((alpha, s[mid].m));
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroMatch {
    pub re: f64,
    pub im: f64,
    pub nearest_maximum: Option<f64>,
    pub distance: f64,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximaComparison {
    pub tolerance: f64,
    pub zeros: Vec<ZeroMatch>,
    /// Maxima with no non-real zero within the tolerance.
    pub unmatched_maxima: Vec<(f64, f64)>,
    pub all_matched: bool,
}

/// Pairs non-real zeros in the curve's α-range (upper half plane) with the
/// nearest local maximum, and the maxima with the nearest zero.
pub fn compare_to_zeros(curve: &MCurve, zl: &ZeroList, tol: f64) -> MaximaComparison {
    let maxima = local_maxima(curve);
    let (lo, hi) = match (curve.samples.first(), curve.samples.last()) {
        (Some(a), Some(b)) => (a.alpha, b.alpha),
        _ => (0.0, -1.0),
    };
    let zeros: Vec<(f64, f64)> = zl
        .zeros
        .iter()
        .map(|z| (z.re_f64(), z.im_f64()))
        .filter(|&(x, y)| y > 0.0 && x >= lo && x <= hi)
        .collect();
    let nearest = |x: f64, xs: &mut dyn Iterator<Item = f64>| -> Option<(f64, f64)> {
        xs.map(|a| (a, (a - x).abs())).min_by(|p, q| p.1.total_cmp(&q.1))
    };
    let matches: Vec<ZeroMatch> = zeros
        .iter()
        .map(|&(x, y)| match nearest(x, &mut maxima.iter().map(|m| m.0)) {
            Some((a, d)) => ZeroMatch {
                re: x,
                im: y,
                nearest_maximum: Some(a),
                distance: d,
                matched: d <= tol,
            },
            None => ZeroMatch {
                re: x,
                im: y,
                nearest_maximum: None,
                distance: f64::INFINITY,
                matched: false,
            },
        })
        .collect();
    let unmatched_maxima: Vec<(f64, f64)> = maxima
        .iter()
        .copied()
        .filter(|&(a, _)| nearest(a, &mut zeros.iter().map(|z| z.0)).is_none_or(|(_, d)| d > tol))
        .collect();
    let all_matched = matches.iter().all(|m| m.matched) && unmatched_maxima.is_empty();
    MaximaComparison {
        tolerance: tol,
        zeros: matches,
        unmatched_maxima,
        all_matched,
    }
}

impl MCurve {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["alpha", "m", "min_modulus"])?;
        for s in &self.samples {
            w.write_record([format!("{:.17e}", s.alpha), format!("{:.17e}", s.m), format!("{:.17e}", s.min_modulus)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(input: R, alpha_step: f64, y_cap: f64, y_step: f64, digits: u32) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut samples = Vec::new();
        for row in r.records() {
            let row = row?;
            let num = |i: usize| -> Result<f64> {
                row.get(i)
                    .ok_or_else(|| Error::Parse(format!("short M-curve row: {row:?}")))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(e.to_string()))
            };
            samples.push(MSample {
                alpha: num(0)?,
                m: num(1)?,
                min_modulus: num(2)?,
            });
        }
        Ok(Self {
            samples,
            alpha_step,
            y_cap,
            y_step,
            digits,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
