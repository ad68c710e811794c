//! Counting and locating zeros: argument-principle winding numbers on
//! rectangles, subdivision, Newton refinement, real-axis sign scans, the
//! real-zero-count audit and difference tables of zero heights.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::{Read, Write};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::asymptotics::audit_height;
use crate::error::{Error, Result};
use crate::models::{Evaluator, FunctionSpec};
use crate::precision::{
    bits_for_literal, format_real, parse_real, pow10, serde_real, Complex, PrecisionContext, Real,
};

/// Closed axis-parallel rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    #[serde(with = "serde_real")]
    pub x_min: Real,
    #[serde(with = "serde_real")]
    pub y_min: Real,
    #[serde(with = "serde_real")]
    pub x_max: Real,
    #[serde(with = "serde_real")]
    pub y_max: Real,
}

impl Rectangle {
    pub fn new(x_min: Real, y_min: Real, x_max: Real, y_max: Real) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::InvalidArgument(format!(
                "degenerate rectangle ({x_min}, {y_min})–({x_max}, {y_max})"
            )));
        }
        Ok(Self { x_min, y_min, x_max, y_max })
    }

    pub fn from_f64(x_min: f64, y_min: f64, x_max: f64, y_max: f64, bits: u32) -> Result<Self> {
        let f = |v: f64| Float::with_val(bits, v);
        Self::new(f(x_min), f(y_min), f(x_max), f(y_max))
    }

    /// Parses `x0,y0,x1,y1` (decimal literals are kept exact at `bits`).
    pub fn parse(text: &str, bits: u32) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("rectangle {text:?}: expected x0,y0,x1,y1")));
        }
        let v = parts
            .iter()
            .map(|p| parse_real(bits.max(bits_for_literal(p)), p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
    }

    pub fn width(&self) -> Real {
        Float::with_val(self.x_min.prec(), &self.x_max - &self.x_min)
    }

    pub fn height(&self) -> Real {
        Float::with_val(self.y_min.prec(), &self.y_max - &self.y_min)
    }

    pub fn contains(&self, z: &Complex) -> bool {
        z.re >= self.x_min && z.re <= self.x_max && z.im >= self.y_min && z.im <= self.y_max
    }

    pub fn contains_real_axis(&self) -> bool {
        self.y_min <= 0 && self.y_max >= 0
    }

    pub fn center(&self) -> Complex {
        let bits = self.x_min.prec();
        let cx = Float::with_val(bits, &self.x_min + &self.x_max) / 2u32;
        let cy = Float::with_val(bits, &self.y_min + &self.y_max) / 2u32;
        Complex::new(cx, cy)
    }

    /// The rectangle grown by `margin` on every side.
    pub fn expanded(&self, margin: &Real) -> Self {
        Self {
            x_min: Float::with_val(self.x_min.prec(), &self.x_min - margin),
            y_min: Float::with_val(self.y_min.prec(), &self.y_min - margin),
            x_max: Float::with_val(self.x_max.prec(), &self.x_max + margin),
            y_max: Float::with_val(self.y_max.prec(), &self.y_max + margin),
        }
    }

    /// Four quadrants split at the (shifted) midlines.
    pub fn quadrisect(&self) -> [Rectangle; 4] {
        self.quadrisect_shifted(0.0, 0.0)
    }

    fn quadrisect_shifted(&self, dx: f64, dy: f64) -> [Rectangle; 4] {
        let c = self.center();
        let mx = Float::with_val(self.x_min.prec(), &c.re + dx);
        let my = Float::with_val(self.y_min.prec(), &c.im + dy);
        let r = |x0: &Real, y0: &Real, x1: &Real, y1: &Real| Rectangle {
            x_min: x0.clone(),
            y_min: y0.clone(),
            x_max: x1.clone(),
            y_max: y1.clone(),
        };
        [
            r(&self.x_min, &self.y_min, &mx, &my),
            r(&mx, &self.y_min, &self.x_max, &my),
            r(&self.x_min, &my, &mx, &self.y_max),
            r(&mx, &my, &self.x_max, &self.y_max),
        ]
    }

    /// Halves across the longer side, or quadrisects when the aspect ratio
    /// is moderate.
    fn split(&self, shift: f64) -> Vec<Rectangle> {
        let w = self.width().to_f64();
        let h = self.height().to_f64();
        let bits = self.x_min.prec();
        if w > 2.0 * h {
            let mx = Float::with_val(bits, (Float::with_val(bits, &self.x_min + &self.x_max) / 2u32) + shift);
            vec![
                Rectangle { x_max: mx.clone(), ..self.clone() },
                Rectangle { x_min: mx, ..self.clone() },
            ]
        } else if h > 2.0 * w {
            let my = Float::with_val(bits, (Float::with_val(bits, &self.y_min + &self.y_max) / 2u32) + shift);
            vec![
                Rectangle { y_max: my.clone(), ..self.clone() },
                Rectangle { y_min: my, ..self.clone() },
            ]
        } else {
            self.quadrisect_shifted(shift, shift).to_vec()
        }
    }

    fn corners(&self) -> [Complex; 4] {
        let c = |x: &Real, y: &Real| Complex::new(x.clone(), y.clone());
        [
            c(&self.x_min, &self.y_min),
            c(&self.x_max, &self.y_min),
            c(&self.x_max, &self.y_max),
            c(&self.x_min, &self.y_max),
        ]
    }

    fn max_side(&self) -> f64 {
        self.width().to_f64().max(self.height().to_f64())
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = |x: &Real| format_real(x, 12);
        write!(f, "({}, {})–({}, {})", g(&self.x_min), g(&self.y_min), g(&self.x_max), g(&self.y_max))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "winding+newton")]
    WindingNewton,
    #[serde(rename = "sign-scan")]
    SignScan,
    #[serde(rename = "homotopy")]
    Homotopy,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::WindingNewton => "winding+newton",
            Method::SignScan => "sign-scan",
            Method::Homotopy => "homotopy",
        }
    }

    fn parse(text: &str) -> Result<Self> {
        match text {
            "winding+newton" => Ok(Method::WindingNewton),
            "sign-scan" => Ok(Method::SignScan),
            "homotopy" => Ok(Method::Homotopy),
            other => Err(Error::Parse(format!("unknown zero method {other:?}"))),
        }
    }
}

/// A located zero. `residual` is `|f(location)| / local_scale`, where the
/// local scale is the largest `|f|` met on the refinement path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub location: Complex,
    pub multiplicity: u32,
    pub residual: f64,
    pub method: Method,
    pub digits_used: u32,
}

impl ZeroRecord {
    /// `residual <= 10^-(digits_used - 10)`.
    pub fn meets_contract(&self) -> bool {
        self.residual <= 10f64.powi(-(self.digits_used as i32 - 10))
    }

    pub fn re_f64(&self) -> f64 {
        self.location.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.location.im.to_f64()
    }
}

/// Zeros ordered by strictly increasing real part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub zeros: Vec<ZeroRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Rectangle>,
}

impl ZeroList {
    /// Sorts by real part; equal real parts (to the working tolerance) are
    /// an error, since every later step assumes one zero per vertical line.
    pub fn new(mut zeros: Vec<ZeroRecord>, region: Option<Rectangle>) -> Result<Self> {
        zeros.sort_by(|a, b| a.location.re.partial_cmp(&b.location.re).unwrap_or(std::cmp::Ordering::Equal));
        for pair in zeros.windows(2) {
            let d = (pair[0].digits_used.min(pair[1].digits_used) as i32 - 10).max(5);
            let tol = 10f64.powi(-d) * pair[1].re_f64().abs().max(1.0);
            let gap = Float::with_val(64, &pair[1].location.re - &pair[0].location.re).to_f64();
            if gap <= tol {
                return Err(Error::Invariant(format!(
                    "two zeros share a real part: {} and {}",
                    pair[0].location.display(20),
                    pair[1].location.display(20)
                )));
            }
        }
        Ok(Self { zeros, region })
    }

    pub fn empty(region: Option<Rectangle>) -> Self {
        Self { zeros: Vec::new(), region }
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn real_zeros(&self) -> impl Iterator<Item = &ZeroRecord> {
        self.zeros.iter().filter(|z| z.location.im.is_zero())
    }

    pub fn non_real_zeros(&self) -> impl Iterator<Item = &ZeroRecord> {
        self.zeros.iter().filter(|z| !z.location.im.is_zero())
    }

    pub fn imaginary_parts(&self) -> Vec<Real> {
        self.zeros.iter().map(|z| z.location.im.clone()).collect()
    }

    /// CSV with columns `re, im, residual, method, digits, multiplicity`;
    /// coordinates carry `digits_used` significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["re", "im", "residual", "method", "digits", "multiplicity"])?;
        for z in &self.zeros {
            let d = z.digits_used as usize;
            w.write_record([
                format_real(&z.location.re, d),
                format_real(&z.location.im, d),
                format!("{:.3e}", z.residual),
                z.method.as_str().to_string(),
                z.digits_used.to_string(),
                z.multiplicity.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut zeros = Vec::new();
        for row in r.records() {
            let row = row?;
            let get = |i: usize| row.get(i).ok_or_else(|| Error::Parse(format!("short zero-table row {row:?}")));
            let re = get(0)?;
            let im = get(1)?;
            let bits = bits_for_literal(re).max(bits_for_literal(im));
            zeros.push(ZeroRecord {
                location: Complex::new(parse_real(bits, re)?, parse_real(bits, im)?),
                residual: get(2)?.parse().map_err(|e| Error::Parse(format!("residual: {e}")))?,
                method: Method::parse(get(3)?)?,
                digits_used: get(4)?.parse().map_err(|e| Error::Parse(format!("digits: {e}")))?,
                multiplicity: match row.get(5) {
                    Some(m) => m.parse().map_err(|e| Error::Parse(format!("multiplicity: {e}")))?,
                    None => 1,
                },
            });
        }
        Self::new(zeros, None)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let list: Self = serde_json::from_str(text)?;
        Self::new(list.zeros, list.region)
    }
}

/// Outcome of comparing the real-zero count with the total count in the
/// region below the largest real zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakConjectureReport {
    pub family: String,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub digits: u32,
    pub largest_real_zero: Option<String>,
    pub real_zero_count: usize,
    pub total_count_in_region: Option<i64>,
    pub region: Option<Rectangle>,
    /// `None` when there is no real zero to bound the region.
    pub verdict: Option<bool>,
    pub real_zeros: ZeroList,
}

/// Tuning knobs shared by the search routines.
#[derive(Clone, Debug)]
pub struct FinderOptions {
    /// Initial sample spacing along contour edges.
    pub edge_step: f64,
    /// Largest accepted argument increment between adjacent contour samples.
    pub max_arg_step: f64,
    /// Halvings of a contour segment before a boundary zero is declared.
    pub max_segment_depth: u32,
    /// Subdivision depth after which a cell is assumed to hold one zero of
    /// multiplicity equal to its winding number.
    pub max_depth: u32,
    /// Cells with one zero are split until their longer side is below this.
    pub newton_cell: f64,
    pub newton_max_iter: usize,
    /// Attempts at shifting an offending contour line.
    pub boundary_retries: u32,
    pub boundary_shift: f64,
}

impl Default for FinderOptions {
    fn default() -> Self {
        Self {
            edge_step: 0.25,
            max_arg_step: PI / 4.0,
            max_segment_depth: 40,
            max_depth: 40,
            newton_cell: 4.0,
            newton_max_iter: 200,
            boundary_retries: 5,
            boundary_shift: 0.003,
        }
    }
}

#[derive(Clone, Debug)]
struct Sample {
    z: Complex,
    f: Complex,
    /// `log10 |f|` and `ln |f|` (f64, overflow-free).
    log10_abs: f64,
    arg: f64,
    /// `log10` of the largest term magnitude.
    log10_scale: f64,
}

impl Sample {
    fn is_noise(&self, digits: u32) -> bool {
        self.log10_abs == f64::NEG_INFINITY || self.log10_abs - self.log10_scale < -(digits as f64 - 2.0)
    }
}

/// Argument bookkeeping along one directed contour piece.
#[derive(Clone, Debug, Default)]
struct Trace {
    darg: f64,
    /// `Σ z_mid · Δlog f` in f64, for the one-zero location estimate.
    moment: (f64, f64),
}

impl Trace {
    fn add(&mut self, other: &Trace) {
        self.darg += other.darg;
        self.moment.0 += other.moment.0;
        self.moment.1 += other.moment.1;
    }
}

/// A spec at one precision, with a point cache shared across every contour
/// that touches the same sample.
pub struct ZeroFinder {
    ev: Evaluator,
    ctx: PrecisionContext,
    opts: FinderOptions,
    cache: Mutex<HashMap<(String, String), Arc<Sample>>>,
}

fn key(z: &Complex) -> (String, String) {
    (z.re.to_string_radix(16, None), z.im.to_string_radix(16, None))
}

fn principal(mut d: f64) -> f64 {
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

impl ZeroFinder {
    pub fn new(spec: &FunctionSpec, ctx: &PrecisionContext) -> Result<Self> {
        Ok(Self::from_evaluator(Evaluator::new(spec, ctx)?))
    }

    pub fn from_evaluator(ev: Evaluator) -> Self {
        let ctx = *ev.ctx();
        Self {
            ev,
            ctx,
            opts: FinderOptions::default(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_options(mut self, opts: FinderOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.ev
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Number of cached contour samples.
    pub fn evaluations(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    fn sample(&self, z: &Complex) -> Result<Arc<Sample>> {
        let k = key(z);
        if let Some(s) = self.cache.lock().unwrap().get(&k) {
            return Ok(s.clone());
        }
        let v = self.ev.eval_scaled(z)?;
        let s = Arc::new(Sample {
            z: z.clone(),
            log10_abs: v.value.log10_abs(),
            arg: v.value.arg_f64(),
            f: v.value,
            log10_scale: v.log10_scale,
        });
        self.cache.lock().unwrap().insert(k, s.clone());
        Ok(s)
    }

    fn boundary_error(&self, s: &Sample) -> Error {
        Error::BoundaryZero(s.z.display(15))
    }

    /// Argument change of `f` along the segment `p → q`, sampled from a
    /// dyadic grid and refined until every increment is small.
    fn segment(&self, p: &Complex, q: &Complex) -> Result<Trace> {
        let len = (&(q - p)).abs().to_f64();
        let mut pieces = 1usize;
        while (len / pieces as f64) > self.opts.edge_step {
            pieces *= 2;
        }
        let bits = self.ctx.bits();
        let step = (q - p).scale(&Float::with_val(bits, pieces).recip());
        let mut trace = Trace::default();
        let mut prev = self.sample(p)?;
        if prev.is_noise(self.ctx.digits()) {
            return Err(self.boundary_error(&prev));
        }
        for k in 1..=pieces {
            let z = if k == pieces { q.clone() } else { p + &step.scale(&Float::with_val(bits, k)) };
            let next = self.sample(&z)?;
            trace.add(&self.refine(&prev, &next, 0)?);
            prev = next;
        }
        Ok(trace)
    }

    fn refine(&self, a: &Sample, b: &Sample, depth: u32) -> Result<Trace> {
        if b.is_noise(self.ctx.digits()) {
            return Err(self.boundary_error(b));
        }
        let d = principal(b.arg - a.arg);
        if d.abs() < self.opts.max_arg_step {
            let (ar, ai) = a.z.to_f64();
            let (br, bi) = b.z.to_f64();
            let (mr, mi) = ((ar + br) / 2.0, (ai + bi) / 2.0);
            let dl = (b.log10_abs - a.log10_abs) * std::f64::consts::LN_10;
            // z_mid · (Δln|f| + iΔarg)
            return Ok(Trace {
                darg: d,
                moment: (mr * dl - mi * d, mr * d + mi * dl),
            });
        }
        if depth >= self.opts.max_segment_depth {
            return Err(self.boundary_error(b));
        }
        let mid = (&a.z + &b.z).scale_f64(0.5);
        let m = self.sample(&mid)?;
        let mut t = self.refine(a, &m, depth + 1)?;
        t.add(&self.refine(&m, b, depth + 1)?);
        Ok(t)
    }

    fn contour(&self, rect: &Rectangle) -> Result<(i64, Trace)> {
        let c = rect.corners();
        let mut total = Trace::default();
        for k in 0..4 {
            total.add(&self.segment(&c[k], &c[(k + 1) % 4])?);
        }
        let turns = total.darg / (2.0 * PI);
        let nearest = turns.round();
        let distance = (turns - nearest).abs();
        if distance >= 0.25 {
            return Err(Error::NonIntegralWinding {
                nearest: nearest as i64,
                distance,
            });
        }
        Ok((nearest as i64, total))
    }

    /// Zeros of `f` inside `rect`, counted with multiplicity.
    pub fn winding_number(&self, rect: &Rectangle) -> Result<i64> {
        Ok(self.contour(rect)?.0)
    }

    /// Like [`winding_number`](Self::winding_number) but nudges an edge that
    /// passes through a zero; returns the rectangle actually used.
    pub fn winding_number_perturbed(&self, rect: &Rectangle) -> Result<(i64, Rectangle)> {
        let mut r = rect.clone();
        let mut last = None;
        for attempt in 0..=self.opts.boundary_retries {
            match self.contour(&r) {
                Ok((n, _)) => return Ok((n, r)),
                Err(Error::BoundaryZero(at)) => {
                    log::debug!("boundary zero near {at} on {r}, attempt {attempt}");
                    r = self.nudge(&r, &at);
                    last = Some(Error::BoundaryZero(at));
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap())
    }

    /// Moves whichever edge lies nearest the offending point outward by the
    /// configured shift.
    fn nudge(&self, r: &Rectangle, at: &str) -> Rectangle {
        let shift = self.opts.boundary_shift;
        let (px, py) = parse_point(at);
        let d = [
            (px - r.x_min.to_f64()).abs(),
            (px - r.x_max.to_f64()).abs(),
            (py - r.y_min.to_f64()).abs(),
            (py - r.y_max.to_f64()).abs(),
        ];
        let i = (0..4).min_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
        let mut out = r.clone();
        match i {
            0 => out.x_min -= shift,
            1 => out.x_max += shift,
            2 => out.y_min -= shift,
            _ => out.y_max += shift,
        }
        out
    }

    /// Isolates and refines every zero in `rect`.
    pub fn isolate_zeros(&self, rect: &Rectangle) -> Result<ZeroList> {
        let (count, used) = self.winding_number_perturbed(rect)?;
        let (_, trace) = self.contour(&used)?;
        let zeros = self.resolve(&used, count, trace, 0)?;
        if zeros.len() as i64 != count {
            return Err(Error::Invariant(format!("found {} zeros, winding number {count}", zeros.len())));
        }
        ZeroList::new(zeros, Some(used))
    }

    fn resolve(&self, cell: &Rectangle, count: i64, trace: Trace, depth: u32) -> Result<Vec<ZeroRecord>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        if count < 0 {
            return Err(Error::Invariant(format!("negative winding number {count} on {cell}")));
        }
        if count == 1 && (cell.max_side() <= self.opts.newton_cell || depth >= self.opts.max_depth) {
            if let Some(z) = self.solve_in_cell(cell, &trace, depth >= self.opts.max_depth)? {
                return Ok(vec![z]);
            }
        }
        if depth >= self.opts.max_depth {
            if count == 1 {
                return Err(Error::NoConvergence {
                    what: "zero refinement in a minimal cell",
                    iterations: depth as usize,
                });
            }
            log::warn!("cell {cell} still holds {count} zeros at depth {depth}; reporting one multiple zero");
            let mut z = self.newton_from(&cell.center(), cell)?;
            z.multiplicity = count as u32;
            return Ok(vec![z]);
        }
        let children = self.split_counted(cell)?;
        let sum: i64 = children.iter().map(|c| c.1).sum();
        if sum != count {
            return Err(Error::Invariant(format!(
                "winding numbers of the children of {cell} sum to {sum}, parent has {count}"
            )));
        }
        let found: Vec<Result<Vec<ZeroRecord>>> = children
            .into_par_iter()
            .map(|(child, n, t)| self.resolve(&child, n, t, depth + 1))
            .collect();
        let mut out = Vec::new();
        for f in found {
            out.extend(f?);
        }
        Ok(out)
    }

    /// Children of `cell` with their winding numbers, shifting the split
    /// lines when one passes through a zero.
    fn split_counted(&self, cell: &Rectangle) -> Result<Vec<(Rectangle, i64, Trace)>> {
        let mut last = None;
        for attempt in 0..=self.opts.boundary_retries {
            let shift = self.opts.boundary_shift * attempt as f64 * cell.max_side().min(1.0);
            let kids = cell.split(shift);
            let counted: Result<Vec<_>> = kids
                .into_par_iter()
                .map(|k| self.contour(&k).map(|(n, t)| (k, n, t)))
                .collect();
            match counted {
                Ok(v) => return Ok(v),
                Err(Error::BoundaryZero(at)) => last = Some(Error::BoundaryZero(at)),
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap())
    }

    /// Refines the single zero of a cell; `None` when Newton leaves the cell
    /// (the caller splits further).
    fn solve_in_cell(&self, cell: &Rectangle, trace: &Trace, last_chance: bool) -> Result<Option<ZeroRecord>> {
        if self.ev.is_real_symmetric() && cell.contains_real_axis() {
            // one zero in a conjugation-symmetric strip must be real
            let bits = self.ctx.bits();
            let lo = Complex::from_real(cell.x_min.clone());
            let hi = Complex::from_real(cell.x_max.clone());
            let fl = self.sample(&lo)?;
            let fh = self.sample(&hi)?;
            if fl.f.re.is_sign_negative() != fh.f.re.is_sign_negative() {
                let z = self.refine_real(
                    Float::with_val(bits, &cell.x_min),
                    Float::with_val(bits, &cell.x_max),
                    Method::WindingNewton,
                )?;
                return Ok(Some(z));
            }
        }
        // location estimate from the argument principle: Σ z Δlog f / 2πi
        let (mr, mi) = trace.moment;
        let guess = Complex::from_f64(self.ctx.bits(), mi / (2.0 * PI), -mr / (2.0 * PI));
        let start = if cell.contains(&guess) { guess } else { cell.center() };
        let margin = Float::with_val(self.ctx.bits(), cell.max_side() * if last_chance { 1.0 } else { 1e-9 });
        let grown = cell.expanded(&margin);
        match self.newton_from(&start, cell) {
            Ok(z) if grown.contains(&z.location) => Ok(Some(z)),
            Ok(_) | Err(Error::NoConvergence { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn newton_from(&self, start: &Complex, cell: &Rectangle) -> Result<ZeroRecord> {
        let radius = Float::with_val(self.ctx.bits(), cell.max_side() * 2.0);
        newton_with(&self.ev, start, Some(&radius), self.opts.newton_max_iter)
    }

    /// Safeguarded Newton on a real bracket `[lo, hi]` with a sign change.
    fn refine_real(&self, lo: Real, hi: Real, method: Method) -> Result<ZeroRecord> {
        refine_real_bracket(&self.ev, lo, hi, method, self.opts.newton_max_iter)
    }

    /// Sign-change scan of a real-symmetric spec on `[x_min, x_max]`.
    pub fn real_zero_scan(&self, x_min: &Real, x_max: &Real, step: &Real) -> Result<ZeroList> {
        if !self.ev.is_real_symmetric() {
            return Err(Error::InvalidArgument("real_zero_scan needs a spec that is real on the real axis".into()));
        }
        if !(x_min < x_max) || step.cmp0() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidArgument("real_zero_scan needs x_min < x_max and step > 0".into()));
        }
        let bits = self.ctx.bits();
        let mut zeros = self.scan_window(x_min, x_max, step)?;
        // close pairs hint at clusters a coarse grid might have merged
        let step_f = step.to_f64();
        let mut windows = Vec::new();
        for pair in zeros.windows(2) {
            let gap = pair[1].re_f64() - pair[0].re_f64();
            if gap < 4.0 * step_f {
                windows.push((pair[0].re_f64() - 2.0 * step_f, pair[1].re_f64() + 2.0 * step_f));
            }
        }
        if !windows.is_empty() {
            let fine = Float::with_val(bits, step / 8u32);
            for (a, b) in windows {
                let a = Float::with_val(bits, a).max(x_min);
                let b = Float::with_val(bits, b).min(x_max);
                for z in self.scan_window(&a, &b, &fine)? {
                    let dup = zeros.iter().any(|o| (o.re_f64() - z.re_f64()).abs() < fine.to_f64() / 4.0);
                    if !dup {
                        zeros.push(z);
                    }
                }
            }
        }
        let region = Rectangle::new(
            Float::with_val(bits, x_min),
            Float::with_val(bits, -1e-300),
            Float::with_val(bits, x_max),
            Float::with_val(bits, 1e-300),
        )
        .ok();
        ZeroList::new(zeros, region)
    }

    fn scan_window(&self, x_min: &Real, x_max: &Real, step: &Real) -> Result<Vec<ZeroRecord>> {
        let bits = self.ctx.bits();
        let span = Float::with_val(bits, x_max - x_min);
        let count = Float::with_val(bits, &span / step).ceil().to_f64() as usize;
        let grid: Vec<Real> = (0..=count)
            .map(|k| {
                let x = Float::with_val(bits, step * k as u32) + x_min;
                if k == count { Float::with_val(bits, x_max) } else { x.min(x_max) }
            })
            .collect();
        let values: Vec<Result<Real>> = grid
            .par_iter()
            .map(|x| self.ev.eval(&Complex::from_real(x.clone())).map(|v| v.re))
            .collect();
        let values = values.into_iter().collect::<Result<Vec<_>>>()?;
        let mut brackets = Vec::new();
        for k in 0..grid.len() - 1 {
            if values[k].is_zero() {
                brackets.push((grid[k].clone(), grid[k].clone()));
            } else if !values[k + 1].is_zero() && values[k].is_sign_negative() != values[k + 1].is_sign_negative() {
                brackets.push((grid[k].clone(), grid[k + 1].clone()));
            }
        }
        brackets
            .into_par_iter()
            .map(|(a, b)| self.refine_real(a, b, Method::SignScan))
            .collect()
    }
}

fn parse_point(text: &str) -> (f64, f64) {
    // "re + im I" / "re - im I" / "re"
    let t = text.trim().trim_end_matches('I').trim();
    let mut parts = t.splitn(2, [' ']);
    let re = parts.next().unwrap_or("0").parse().unwrap_or(0.0);
    let rest = parts.next().unwrap_or("").replace(' ', "");
    let im = if rest.is_empty() { 0.0 } else { rest.parse().unwrap_or(0.0) };
    (re, im)
}

/// Newton's method with a central-difference derivative.
fn newton_with(ev: &Evaluator, z0: &Complex, radius: Option<&Real>, max_iter: usize) -> Result<ZeroRecord> {
    let ctx = ev.ctx();
    let bits = ctx.bits();
    let digits = ctx.digits();
    let h_exp = -(digits as i32) / 2;
    let tol_exp = -(digits as i32 - 10);
    let radius = match radius {
        Some(r) => Float::with_val(bits, r),
        None => Float::with_val(bits, z0.abs().max(&Float::with_val(bits, 1))),
    };
    let mut z = z0.with_prec(bits);
    let mut f = ev.eval(&z)?;
    let mut scale = f.log10_abs();
    for _ in 0..max_iter {
        if f.is_zero() {
            return Ok(record(z, f64::NEG_INFINITY, scale, Method::WindingNewton, digits));
        }
        let mag = z.abs().max(&Float::with_val(bits, 1));
        let h = Complex::from_real(Float::with_val(bits, pow10(bits, h_exp) * &mag));
        let fp = ev.eval(&(&z + &h))?;
        let fm = ev.eval(&(&z - &h))?;
        let deriv = &(&fp - &fm) / &h.scale_f64(2.0);
        if deriv.is_zero() {
            return Err(Error::NoConvergence { what: "Newton (zero derivative)", iterations: 0 });
        }
        // a start already on the zero would otherwise measure the residual
        // against itself: |f'|·max(1,|z|) is the variation on a unit scale
        scale = scale.max(deriv.log10_abs() + crate::precision::log10_abs(&mag));
        let dz = &f / &deriv;
        z = &z - &dz;
        if !z.is_finite() || Float::with_val(bits, (&(&z - z0)).abs()) > Float::with_val(bits, &radius * 2u32) {
            return Err(Error::NoConvergence { what: "Newton (left the search radius)", iterations: 0 });
        }
        f = ev.eval(&z)?;
        scale = scale.max(f.log10_abs());
        let tol = Float::with_val(bits, pow10(bits, tol_exp) * &mag);
        if dz.abs() <= tol {
            return Ok(record(z, f.log10_abs(), scale, Method::WindingNewton, digits));
        }
    }
    Err(Error::NoConvergence {
        what: "Newton refinement",
        iterations: max_iter,
    })
}

fn record(location: Complex, log10_f: f64, log10_scale: f64, method: Method, digits: u32) -> ZeroRecord {
    let residual = if log10_f == f64::NEG_INFINITY { 0.0 } else { 10f64.powf(log10_f - log10_scale) };
    ZeroRecord {
        location,
        multiplicity: 1,
        residual,
        method,
        digits_used: digits,
    }
}

/// Real zero in `[lo, hi]` (endpoint signs differ, or `lo == hi` is itself a
/// zero), by Newton steps kept inside a shrinking bracket.
fn refine_real_bracket(ev: &Evaluator, mut lo: Real, mut hi: Real, method: Method, max_iter: usize) -> Result<ZeroRecord> {
    let ctx = ev.ctx();
    let bits = ctx.bits();
    let digits = ctx.digits();
    let eval = |x: &Real| ev.eval(&Complex::from_real(x.clone())).map(|v| v.re);
    let mut f_lo = eval(&lo)?;
    if lo == hi || f_lo.is_zero() {
        return Ok(record(Complex::from_real(lo), f64::NEG_INFINITY, 0.0, method, digits));
    }
    let f_hi = eval(&hi)?;
    if f_hi.is_zero() {
        return Ok(record(Complex::from_real(hi), f64::NEG_INFINITY, 0.0, method, digits));
    }
    if f_lo.is_sign_negative() == f_hi.is_sign_negative() {
        return Err(Error::InvalidArgument("real bracket without a sign change".into()));
    }
    let lo_neg = f_lo.is_sign_negative();
    let mut scale = crate::precision::log10_abs(&f_lo).max(crate::precision::log10_abs(&f_hi));
    let mut x = Float::with_val(bits, &lo + &hi) / 2u32;
    let h_exp = -(digits as i32) / 2;
    let tol_exp = -(digits as i32 - 10);
    for _ in 0..max_iter {
        let fx = eval(&x)?;
        if fx.is_zero() {
            return Ok(record(Complex::from_real(x), f64::NEG_INFINITY, scale, method, digits));
        }
        scale = scale.max(crate::precision::log10_abs(&fx));
        if fx.is_sign_negative() == lo_neg {
            lo = x.clone();
            f_lo = fx.clone();
        } else {
            hi = x.clone();
        }
        let mag = Float::with_val(bits, x.abs_ref()).max(&Float::with_val(bits, 1));
        let h = Float::with_val(bits, pow10(bits, h_exp) * &mag);
        let fp = eval(&Float::with_val(bits, &x + &h))?;
        let fm = eval(&Float::with_val(bits, &x - &h))?;
        let deriv = Float::with_val(bits, &fp - &fm) / Float::with_val(bits, &h * 2u32);
        let mut next = Float::with_val(bits, &x - Float::with_val(bits, &fx / &deriv));
        if !next.is_finite() || next < lo || next > hi {
            next = Float::with_val(bits, &lo + &hi) / 2u32;
        }
        let dx = Float::with_val(bits, &next - &x).abs();
        x = next;
        let tol = Float::with_val(bits, pow10(bits, tol_exp) * &mag);
        let width = Float::with_val(bits, &hi - &lo);
        if dx <= tol || width <= tol {
            // a zero sitting on a bracket end stops the loop by width with x
            // still a midpoint, so the ends compete
            let mut best = (crate::precision::log10_abs(&eval(&x)?), x);
            for end in [lo, hi] {
                let v = crate::precision::log10_abs(&eval(&end)?);
                if v < best.0 {
                    best = (v, end);
                }
            }
            let _ = f_lo;
            return Ok(record(Complex::from_real(best.1), best.0, scale, method, digits));
        }
    }
    Err(Error::NoConvergence {
        what: "real zero refinement",
        iterations: max_iter,
    })
}

/// Newton refinement of a zero of `spec` from `z0`.
pub fn newton_refine(spec: &FunctionSpec, z0: &Complex, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    let ev = Evaluator::new(spec, ctx)?;
    newton_with(&ev, z0, None, FinderOptions::default().newton_max_iter)
}

/// Newton refinement with an already materialized evaluator.
pub fn newton_refine_with(ev: &Evaluator, z0: &Complex, radius: Option<&Real>) -> Result<ZeroRecord> {
    newton_with(ev, z0, radius, FinderOptions::default().newton_max_iter)
}

/// Real zero refinement on a sign-change bracket.
pub fn refine_real_zero(ev: &Evaluator, lo: &Real, hi: &Real, method: Method) -> Result<ZeroRecord> {
    let bits = ev.ctx().bits();
    refine_real_bracket(ev, Float::with_val(bits, lo), Float::with_val(bits, hi), method, FinderOptions::default().newton_max_iter)
}

pub fn winding_number(spec: &FunctionSpec, rect: &Rectangle, ctx: &PrecisionContext) -> Result<i64> {
    ZeroFinder::new(spec, ctx)?.winding_number(rect)
}

pub fn isolate_zeros(spec: &FunctionSpec, rect: &Rectangle, ctx: &PrecisionContext) -> Result<ZeroList> {
    ZeroFinder::new(spec, ctx)?.isolate_zeros(rect)
}

pub fn real_zero_scan(spec: &FunctionSpec, x_min: &Real, x_max: &Real, step: &Real, ctx: &PrecisionContext) -> Result<ZeroList> {
    ZeroFinder::new(spec, ctx)?.real_zero_scan(x_min, x_max, step)
}

/// Scan settings for [`weak_conjecture_audit`].
#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub scan_max: f64,
    pub step: f64,
    pub delta: f64,
}

impl AuditOptions {
    /// Defaults by family: for `Ξ_N` the real zeros stop before
    /// `≈ 4(N+1)²` (where the truncation tail overtakes the decay of Ξ), so
    /// the scan runs 25% past that; other families scan `[0, 100]`.
    pub fn for_spec(spec: &FunctionSpec) -> Self {
        use crate::models::Family;
        let (scan_max, step) = match (spec.family, spec.n) {
            (Family::XiN, Some(n)) => (5.0 * ((n + 1) * (n + 1)) as f64 + 10.0, 0.05),
            (Family::RamanujanXiN, _) | (Family::CuspFormB, _) => (100.0, 0.02),
            _ => (100.0, 0.05),
        };
        Self { scan_max, step, delta: 0.1 }
    }
}

/// Compares the number of real zeros with the total zero count of the
/// region `(0, −δ)–(γ + δ, Y)` below the largest real zero `γ`.
pub fn weak_conjecture_audit(spec: &FunctionSpec, ctx: &PrecisionContext) -> Result<WeakConjectureReport> {
    weak_conjecture_audit_with(spec, ctx, &AuditOptions::for_spec(spec))
}

pub fn weak_conjecture_audit_with(spec: &FunctionSpec, ctx: &PrecisionContext, opts: &AuditOptions) -> Result<WeakConjectureReport> {
    let finder = ZeroFinder::new(spec, ctx)?;
    let bits = ctx.bits();
    let real = finder.real_zero_scan(
        &Float::with_val(bits, 0),
        &Float::with_val(bits, opts.scan_max),
        &parse_real(bits, &format!("{}", opts.step))?,
    )?;
    let mut report = WeakConjectureReport {
        family: spec.tag(),
        n: spec.n,
        digits: ctx.digits(),
        largest_real_zero: None,
        real_zero_count: real.len(),
        total_count_in_region: None,
        region: None,
        verdict: None,
        real_zeros: real.clone(),
    };
    let Some(largest) = real.zeros.last() else {
        return Ok(report);
    };
    let gamma = largest.location.re.clone();
    let delta = parse_real(bits, &format!("{}", opts.delta))?;
    let y_top = audit_height(gamma.to_f64());
    let rect = Rectangle::new(
        Float::with_val(bits, 0),
        Float::with_val(bits, -&delta),
        Float::with_val(bits, &gamma + &delta),
        Float::with_val(bits, y_top),
    )?;
    let (total, used) = finder.winding_number_perturbed(&rect)?;
    report.largest_real_zero = Some(format_real(&gamma, ctx.digits() as usize));
    report.total_count_in_region = Some(total);
    report.region = Some(used);
    report.verdict = Some(total == real.len() as i64);
    Ok(report)
}

/// Imaginary parts nondecreasing along the list.
pub fn monotonicity_check(zl: &ZeroList) -> bool {
    zl.zeros.windows(2).all(|p| p[0].location.im <= p[1].location.im)
}

/// Sign pattern of one order of differences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignSummary {
    AllPositive,
    AllNegative,
    AllZero,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferenceOrder {
    pub order: usize,
    #[serde(with = "serde_vec_real")]
    pub values: Vec<Real>,
    pub signs: SignSummary,
}

mod serde_vec_real {
    use super::*;
    use crate::precision::to_decimal;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Real], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(to_decimal))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Real>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|t| parse_real(bits_for_literal(t), t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Forward differences of orders `1..=k_max`.
pub fn difference_table(values: &[Real], k_max: usize) -> Result<Vec<DifferenceOrder>> {
    if k_max == 0 || values.len() < k_max + 1 {
        return Err(Error::InvalidArgument(format!(
            "difference table of order {k_max} needs at least {} values, got {}",
            k_max + 1,
            values.len()
        )));
    }
    let mut out = Vec::with_capacity(k_max);
    let mut row: Vec<Real> = values.to_vec();
    for order in 1..=k_max {
        row = row
            .windows(2)
            .map(|p| Float::with_val(p[0].prec().max(p[1].prec()), &p[1] - &p[0]))
            .collect();
        let signs = if row.iter().all(|v| v.is_zero()) {
            SignSummary::AllZero
        } else if row.iter().all(|v| *v > 0) {
            SignSummary::AllPositive
        } else if row.iter().all(|v| *v < 0) {
            SignSummary::AllNegative
        } else {
            SignSummary::Mixed
        };
        out.push(DifferenceOrder {
            order,
            values: row.clone(),
            signs,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::models::{gamma_family, xi_truncated};
    use crate::special::HyperbolicGammaTerm;

    fn rec(re: f64, im: f64) -> ZeroRecord {
        ZeroRecord {
            location: Complex::from_f64(80, re, im),
            multiplicity: 1,
            residual: 0.0,
            method: Method::WindingNewton,
            digits_used: 20,
        }
    }

    #[test]
    fn rectangle_parsing_and_split() {
        let r = Rectangle::parse("0,-0.1,100,500", 128).unwrap();
        assert_eq!(r.y_min.to_f64(), -0.1);
        assert!(Rectangle::parse("1,1,0,2", 64).is_err());
        assert!(Rectangle::parse("1,2,3", 64).is_err());
        let q = r.quadrisect();
        assert_eq!(q[3].x_min, 50);
        assert_eq!(r.split(0.0).len(), 2);
        let square = Rectangle::from_f64(0.0, 0.0, 2.0, 2.0, 64).unwrap();
        assert_eq!(square.split(0.0).len(), 4);
    }

    #[test]
    fn polynomial_like_spec_counts() {
        // Γ(z, 1)·1 has no zeros near the origin; |z| < 2 box → 0
        let ctx = PrecisionContext::new(20).unwrap();
        let spec = gamma_family(Expr::int(1)).unwrap();
        let r = Rectangle::from_f64(-1.5, -1.5, 1.5, 1.5, ctx.bits()).unwrap();
        assert_eq!(winding_number(&spec, &r, &ctx).unwrap(), 0);
    }

    #[test]
    fn xi1_small_box() {
        let ctx = PrecisionContext::new(25).unwrap();
        let spec = xi_truncated(1).unwrap();
        let finder = ZeroFinder::new(&spec, &ctx).unwrap();
        // contains the real zero 14.0454... and the first non-real zero 20.625 + 2.697i
        let r = Rectangle::from_f64(10.0, -0.1, 22.0, 4.0, ctx.bits()).unwrap();
        let zl = finder.isolate_zeros(&r).unwrap();
        assert_eq!(zl.len(), 2);
        let real = &zl.zeros[0];
        assert!(real.location.im.is_zero());
        assert!((real.re_f64() - 14.0454395788).abs() < 1e-9);
        let c = &zl.zeros[1];
        assert!((c.re_f64() - 20.62534600592171760132974).abs() < 1e-12);
        assert!((c.im_f64() - 2.697151842339519632505712).abs() < 1e-12);
        assert!(zl.zeros.iter().all(ZeroRecord::meets_contract));
    }

    #[test]
    fn newton_examples() {
        let ctx = PrecisionContext::new(25).unwrap();
        let spec = xi_truncated(1).unwrap();
        let z = newton_refine(&spec, &ctx.complex(21.0, 2.6), &ctx).unwrap();
        let want = ctx.parse_complex("20.62534600592171760132974", "2.697151842339519632505712").unwrap();
        assert!(crate::precision::near_equal(&z.location, &want, 1e-22), "{}", z.location);
        let again = newton_refine(&spec, &z.location, &ctx).unwrap();
        assert!(crate::precision::near_equal(&again.location, &z.location, 1e-22));
        let real = newton_refine(&spec, &ctx.complex(14.04, 0.0), &ctx).unwrap();
        assert!((real.re_f64() - 14.0454395788).abs() < 1e-9);
    }

    #[test]
    fn scan_rejects_non_real_specs() {
        let ctx = PrecisionContext::new(20).unwrap();
        let spec = crate::models::two_term_combination();
        let r = real_zero_scan(&spec, &ctx.real(0.0), &ctx.real(1.0), &ctx.real(0.1), &ctx);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn scan_xi2() {
        let ctx = PrecisionContext::new(35).unwrap();
        let zl = real_zero_scan(&xi_truncated(2).unwrap(), &ctx.real(0.0), &ctx.real(50.0), &ctx.parse("0.05").unwrap(), &ctx).unwrap();
        assert_eq!(zl.len(), 7);
        assert!((zl.zeros[6].re_f64() - 39.5324810798).abs() < 1e-9);
        assert!((zl.zeros[0].re_f64() - 14.1347251016150223590867934323428320).abs() < 1e-12);
    }

    #[test]
    fn far_right_positive_tail_has_no_real_zeros() {
        // Φ₁·c with c > 0 chosen so the tail coefficient is positive
        let ctx = PrecisionContext::new(25).unwrap();
        let spec = FunctionSpec::custom(
            vec![HyperbolicGammaTerm::new(Expr::int(1), Expr::Pi, Expr::ratio(1, 4))],
            Expr::int(1),
        )
        .unwrap();
        let zl = real_zero_scan(&spec, &ctx.real(1e6), &ctx.real(1e6 + 1.0), &ctx.real(0.05), &ctx).unwrap();
        assert!(zl.is_empty());
    }

    #[test]
    fn zero_list_ordering() {
        let zl = ZeroList::new(vec![rec(3.0, 1.0), rec(1.0, 0.0), rec(2.0, 0.5)], None).unwrap();
        assert_eq!(zl.zeros[0].re_f64(), 1.0);
        assert!(monotonicity_check(&zl));
        let bad = ZeroList::new(vec![rec(1.0, 1.0), rec(2.0, 0.5)], None).unwrap();
        assert!(!monotonicity_check(&bad));
        assert!(ZeroList::new(vec![rec(1.0, 1.0), rec(1.0, 2.0)], None).is_err());
    }

    #[test]
    fn zero_list_io_round_trip() {
        let ctx = PrecisionContext::new(30).unwrap();
        let z = ZeroRecord {
            location: ctx.parse_complex("43.1389080680988950956236929709951507", "3.28097100306881350163884998294539870").unwrap(),
            multiplicity: 1,
            residual: 1.5e-31,
            method: Method::Homotopy,
            digits_used: 30,
        };
        let zl = ZeroList::new(vec![z, rec(1.0, 0.0)], Some(Rectangle::from_f64(0.0, -0.1, 50.0, 5.0, 64).unwrap())).unwrap();
        let back = ZeroList::from_json(&zl.to_json().unwrap()).unwrap();
        assert_eq!(back.zeros.len(), 2);
        assert!(crate::precision::near_equal(&back.zeros[1].location, &zl.zeros[1].location, 1e-35));
        let (a, b) = (back.region.unwrap(), zl.region.clone().unwrap());
        assert_eq!((a.y_min.to_f64(), a.x_max.to_f64()), (b.y_min.to_f64(), b.x_max.to_f64()));
        let mut buf = Vec::new();
        zl.write_csv(&mut buf).unwrap();
        let csv = ZeroList::read_csv(buf.as_slice()).unwrap();
        assert_eq!(csv.zeros[1].method, Method::Homotopy);
        assert_eq!(format_real(&csv.zeros[1].location.re, 30), "43.1389080680988950956236929710");
    }

    #[test]
    fn differences() {
        let v: Vec<Real> = [1.0, 4.0, 9.0, 16.0, 25.0].iter().map(|&x| Float::with_val(64, x)).collect();
        let t = difference_table(&v, 3).unwrap();
        assert_eq!(t[0].signs, SignSummary::AllPositive);
        assert_eq!(t[1].values[0], 2);
        assert_eq!(t[2].signs, SignSummary::AllZero);
        let flat: Vec<Real> = vec![Float::with_val(64, 2.5); 4];
        assert!(difference_table(&flat, 2).unwrap().iter().all(|o| o.signs == SignSummary::AllZero));
        assert!(difference_table(&flat, 4).is_err());
    }
}
