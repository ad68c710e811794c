//! Zero continuation along `f0 + t·f1` as `t` runs from 0 to 1.
//!
//! All live tracks advance on one shared `t` grid. A step is accepted when
//! every track's corrector converges close to its prediction and no two
//! tracks land on the same zero; otherwise the step is halved. Non-real
//! tracks of a real-symmetric blend that reach the real axis meet their
//! mirror image there, and the pair continues as real zeros followed by
//! sign-change brackets.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::models::{blend, Evaluator, FunctionSpec};
use crate::precision::{Complex, PrecisionContext, Real};
use crate::zeros::{newton_refine_with, refine_real_zero, Method, ZeroList, ZeroRecord};

#[derive(Clone, Debug)]
pub struct HomotopyOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Consecutive successes before the step doubles.
    pub grow_after: u32,
    /// Consecutive failures at the minimal step before a track is dropped.
    pub max_failures: u32,
    /// `|Im z| / max(1, |z|)` below which a non-real track is taken to have
    /// reached the real axis; `None` means the zero contract `10^-(d-10)`.
    pub collision_threshold: Option<f64>,
    /// Lower bound of the step-acceptance radius.
    pub min_radius: f64,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.01,
            min_step: 1e-6,
            max_step: 0.05,
            grow_after: 3,
            max_failures: 20,
            collision_threshold: None,
            min_radius: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    CollisionWithAxis,
    /// A real zero born in a collision, tracked from here on.
    Emerged,
    Lost,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub track: usize,
    pub t: f64,
    pub kind: EventKind,
}

/// Per track, one entry per `t_grid` point (`None` before a track exists
/// or after it was lost).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyPath {
    pub t_grid: Vec<f64>,
    pub tracks: Vec<Vec<Option<ZeroRecord>>>,
    pub events: Vec<Event>,
}

impl HomotopyPath {
    /// Locations of live tracks at the last grid point.
    pub fn final_zeros(&self) -> Result<ZeroList> {
        let zeros = self
            .tracks
            .iter()
            .filter_map(|tr| tr.last().cloned().flatten())
            .collect();
        ZeroList::new(zeros, None)
    }

    pub fn reached_end(&self) -> bool {
        self.t_grid.last() == Some(&1.0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Flattened `track, t, re, im` rows.
    pub fn write_csv<W: std::io::Write>(&self, out: W, digits: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["track", "t", "re", "im"])?;
        for (id, tr) in self.tracks.iter().enumerate() {
            for (t, p) in self.t_grid.iter().zip(tr) {
                if let Some(z) = p {
                    w.write_record([
                        id.to_string(),
                        format!("{t:.17}"),
                        crate::precision::format_real(&z.location.re, digits),
                        crate::precision::format_real(&z.location.im, digits),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Live {
    id: usize,
    z: Complex,
    /// Previous accepted location and the step that led from it.
    prev: Option<(Complex, f64)>,
    real: bool,
    failures: u32,
}

struct Stepper {
    base: Evaluator,
    ctx: PrecisionContext,
    opts: HomotopyOptions,
}

enum Outcome {
    Ok(ZeroRecord),
    Fail,
}

impl Stepper {
    fn at(&self, t: f64) -> Result<Evaluator> {
        let mut ev = self.base.clone();
        ev.set_t(&Float::with_val(self.ctx.bits(), t))?;
        Ok(ev)
    }

    fn predict(&self, tr: &Live, h: f64) -> Complex {
        match &tr.prev {
            Some((p, hp)) if *hp > 0.0 => {
                let d = (&tr.z - p).scale_f64(h / hp);
                &tr.z + &d
            }
            _ => tr.z.clone(),
        }
    }

    fn radius(&self, tr: &Live, h: f64) -> f64 {
        let pred_step = match &tr.prev {
            Some((p, hp)) if *hp > 0.0 => (&tr.z - p).abs().to_f64() * h / hp,
            _ => 0.0,
        };
        (5.0 * pred_step).max(self.opts.min_radius)
    }

    fn correct(&self, ev: &Evaluator, tr: &Live, h: f64) -> Result<Outcome> {
        let pred = self.predict(tr, h);
        let radius = self.radius(tr, h);
        if tr.real {
            return self.correct_real(ev, &pred.re, radius);
        }
        let r = Float::with_val(self.ctx.bits(), radius);
        match newton_refine_with(ev, &pred, Some(&r)) {
            Ok(mut z) => {
                if (&z.location - &pred).abs().to_f64() >= radius {
                    return Ok(Outcome::Fail);
                }
                z.method = Method::Homotopy;
                Ok(Outcome::Ok(z))
            }
            Err(Error::NoConvergence { .. }) => Ok(Outcome::Fail),
            Err(e) => Err(e),
        }
    }

    /// Nearest sign change to `x` within `radius`, refined.
    fn correct_real(&self, ev: &Evaluator, x: &Real, radius: f64) -> Result<Outcome> {
        let bits = self.ctx.bits();
        let f = |v: &Real| ev.eval(&Complex::from_real(v.clone())).map(|c| c.re);
        let f0 = f(x)?;
        if f0.is_zero() {
            return Ok(Outcome::Ok(ZeroRecord {
                location: Complex::from_real(x.clone()),
                multiplicity: 1,
                residual: 0.0,
                method: Method::Homotopy,
                digits_used: self.ctx.digits(),
            }));
        }
        let mut delta = radius / 64.0;
        let mut inner = (x.clone(), x.clone());
        while delta <= radius {
            let lo = Float::with_val(bits, x - delta);
            let hi = Float::with_val(bits, x + delta);
            let (fl, fh) = (f(&lo)?, f(&hi)?);
            // the side closer to the prediction wins when both change sign
            let left = fl.is_sign_negative() != f0.is_sign_negative();
            let right = fh.is_sign_negative() != f0.is_sign_negative();
            if left || right {
                let (a, b) = if left && !right {
                    (lo, inner.0.clone())
                } else if right && !left {
                    (inner.1.clone(), hi)
                } else {
                    let za = refine_real_zero(ev, &lo, &inner.0, Method::Homotopy)?;
                    let zb = refine_real_zero(ev, &inner.1, &hi, Method::Homotopy)?;
                    let da = Float::with_val(bits, &za.location.re - x).abs();
                    let db = Float::with_val(bits, &zb.location.re - x).abs();
                    return Ok(Outcome::Ok(pin_method(if da <= db { za } else { zb })));
                };
                return Ok(Outcome::Ok(pin_method(refine_real_zero(ev, &a, &b, Method::Homotopy)?)));
            }
            inner = (lo, hi);
            delta *= 2.0;
        }
        Ok(Outcome::Fail)
    }

    /// The partner of the real zero `x1` born with it when a non-real track
    /// met the axis: sign changes of the deflated `f(x)/(x − x1)` within
    /// `radius`, so a partner arbitrarily close to `x1` is still seen.
    fn emerged_partner(&self, ev: &Evaluator, x1: &Real, radius: f64) -> Result<Option<ZeroRecord>> {
        let bits = self.ctx.bits();
        let g = |x: &Real| -> Result<Real> {
            let f = ev.eval(&Complex::from_real(x.clone()))?.re;
            Ok(f / Float::with_val(bits, x - x1))
        };
        // an odd count keeps x1 strictly between two grid points
        let n = 63;
        let mut best: Option<(Real, Real)> = None;
        let mut radius = radius;
        for _ in 0..4 {
            let grid: Vec<Real> = (0..=n)
                .map(|k| Float::with_val(bits, x1 + radius * (2.0 * (k as f64 + 0.5) / (n as f64 + 1.0) - 1.0)))
                .collect();
            let vals = grid.iter().map(&g).collect::<Result<Vec<_>>>()?;
            let d = |v: &Real| Float::with_val(bits, v - x1).abs().to_f64();
            for k in 0..n {
                if vals[k].is_sign_negative() != vals[k + 1].is_sign_negative()
                    && best.as_ref().is_none_or(|(bl, bh)| d(&grid[k]).min(d(&grid[k + 1])) < d(bl).min(d(bh)))
                {
                    best = Some((grid[k].clone(), grid[k + 1].clone()));
                }
            }
            if best.is_some() {
                break;
            }
            radius *= 2.0;
        }
        let Some((mut lo, mut hi)) = best else { return Ok(None) };
        let mut g_lo = g(&lo)?;
        let tol = 10f64.powi(-(self.ctx.digits() as i32) / 2);
        for _ in 0..400 {
            let mid = Float::with_val(bits, &lo + &hi) / 2u32;
            if Float::with_val(bits, &hi - &lo).abs().to_f64() <= tol * mid.to_f64().abs().max(1.0) {
                break;
            }
            let gm = g(&mid)?;
            if gm.is_sign_negative() == g_lo.is_sign_negative() {
                lo = mid;
                g_lo = gm;
            } else {
                hi = mid;
            }
        }
        let x2 = Float::with_val(bits, &lo + &hi) / 2u32;
        let gap = Float::with_val(bits, &x2 - x1).abs();
        let r = Float::with_val(bits, &gap / 2u32);
        match newton_refine_with(ev, &Complex::from_real(x2), Some(&r)) {
            Ok(z) => Ok(Some(pin_method(z))),
            Err(Error::NoConvergence { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

fn pin_method(mut z: ZeroRecord) -> ZeroRecord {
    z.method = Method::Homotopy;
    z
}

fn distinct(zs: &[&Complex], tol: f64) -> bool {
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            if (zs[i] - zs[j]).abs().to_f64() <= tol {
                return false;
            }
        }
    }
    true
}

/// Tracks `seeds` (zeros of `f0`) to zeros of `f0 + f1`.
pub fn track_path(f0: &FunctionSpec, f1: &FunctionSpec, seeds: &ZeroList, ctx: &PrecisionContext) -> Result<HomotopyPath> {
    track_path_with(f0, f1, seeds, ctx, &HomotopyOptions::default())
}

pub fn track_path_with(
    f0: &FunctionSpec,
    f1: &FunctionSpec,
    seeds: &ZeroList,
    ctx: &PrecisionContext,
    opts: &HomotopyOptions,
) -> Result<HomotopyPath> {
    let spec = blend(f0, f1, Expr::int(0))?;
    let base = Evaluator::new(&spec, ctx)?;
    let symmetric = base.is_real_symmetric();
    let stepper = Stepper {
        base,
        ctx: *ctx,
        opts: opts.clone(),
    };
    let start = stepper.at(0.0)?;
    // polish the seeds at this precision
    let mut live: Vec<Live> = Vec::new();
    let mut tracks: Vec<Vec<Option<ZeroRecord>>> = Vec::new();
    for (id, s) in seeds.zeros.iter().enumerate() {
        let real = symmetric && s.location.im.is_zero();
        let z = if real {
            let outcome = stepper.correct_real(&start, &s.location.re.clone(), opts.min_radius)?;
            match outcome {
                Outcome::Ok(z) => z,
                Outcome::Fail => return Err(Error::InvalidArgument(format!("seed {} is not a zero of f0", s.location.display(15)))),
            }
        } else {
            let r = Float::with_val(ctx.bits(), opts.min_radius);
            pin_method(newton_refine_with(&start, &s.location.with_prec(ctx.bits()), Some(&r))?)
        };
        live.push(Live {
            id,
            z: z.location.clone(),
            prev: None,
            real,
            failures: 0,
        });
        tracks.push(vec![Some(z)]);
    }
    let mut path = HomotopyPath {
        t_grid: vec![0.0],
        tracks,
        events: Vec::new(),
    };
    let mut t = 0.0f64;
    let mut h = opts.initial_step.clamp(opts.min_step, opts.max_step);
    let mut streak = 0;
    while t < 1.0 && !live.is_empty() {
        let h_try = h.min(1.0 - t);
        // snapped to 1e-12 so the grid prints as the decimals it stands for
        let t_next = if t + h_try >= 1.0 - 1e-12 { 1.0 } else { ((t + h_try) * 1e12).round() / 1e12 };
        let ev = stepper.at(t_next)?;
        let h_eff = t_next - t;
        let results: Vec<Result<Outcome>> = live.par_iter().map(|tr| stepper.correct(&ev, tr, h_eff)).collect();
        let mut outcomes = Vec::with_capacity(results.len());
        for r in results {
            outcomes.push(r?);
        }
        let all_ok = outcomes.iter().all(|o| matches!(o, Outcome::Ok(_)));
        let locs: Vec<&Complex> = outcomes
            .iter()
            .filter_map(|o| match o {
                Outcome::Ok(z) => Some(&z.location),
                Outcome::Fail => None,
            })
            .collect();
        let separated = distinct(&locs, 10f64.powi(-(ctx.digits() as i32) / 2));
        if !(all_ok && separated) {
            streak = 0;
            if h > opts.min_step * 1.000001 {
                h = (h / 2.0).max(opts.min_step);
                continue;
            }
            // at the floor: charge the failing tracks, let the rest advance
            let mut keep = Vec::new();
            let mut advanced = Vec::new();
            for (tr, o) in live.drain(..).zip(outcomes) {
                match o {
                    Outcome::Ok(z) => advanced.push((tr, Some(z))),
                    Outcome::Fail => {
                        let mut tr = tr;
                        tr.failures += 1;
                        if tr.failures >= opts.max_failures {
                            path.events.push(Event {
                                track: tr.id,
                                t,
                                kind: EventKind::Lost,
                            });
                            log::warn!("track {} lost at t = {t}", tr.id);
                        } else {
                            advanced.push((tr, None));
                        }
                    }
                }
            }
            if !separated {
                // merged tracks: nothing is trustworthy at this step
                for (tr, _) in advanced {
                    keep.push(tr);
                }
                live = keep;
                if live.iter().all(|tr| tr.failures > 0) {
                    for tr in &mut live {
                        tr.failures += 1;
                    }
                    if live.iter().any(|tr| tr.failures >= opts.max_failures) {
                        for tr in live.drain(..) {
                            path.events.push(Event { track: tr.id, t, kind: EventKind::Lost });
                        }
                    }
                }
                continue;
            }
            let accepted: Vec<(Live, ZeroRecord)> = advanced
                .iter()
                .filter_map(|(tr, z)| z.clone().map(|z| (tr.clone(), z)))
                .collect();
            if accepted.is_empty() {
                live = advanced.into_iter().map(|(tr, _)| tr).collect();
                continue;
            }
            // advance t anyway; tracks without a value wait for the next one
            live = commit(&stepper, &ev, &mut path, t_next, h_eff, advanced, symmetric)?;
            t = t_next;
            continue;
        }
        let advanced = live.drain(..).zip(outcomes.into_iter().map(|o| match o {
            Outcome::Ok(z) => Some(z),
            Outcome::Fail => None,
        }));
        live = commit(&stepper, &ev, &mut path, t_next, h_eff, advanced.collect(), symmetric)?;
        t = t_next;
        streak += 1;
        if streak >= opts.grow_after {
            h = (h * 2.0).min(opts.max_step);
            streak = 0;
        }
    }
    Ok(path)
}

/// Records one accepted grid point and handles axis collisions.
fn commit(
    stepper: &Stepper,
    ev: &Evaluator,
    path: &mut HomotopyPath,
    t: f64,
    h: f64,
    advanced: Vec<(Live, Option<ZeroRecord>)>,
    symmetric: bool,
) -> Result<Vec<Live>> {
    path.t_grid.push(t);
    for tr in &mut path.tracks {
        tr.push(None);
    }
    let idx = path.t_grid.len() - 1;
    let mut next = Vec::new();
    for (mut tr, z) in advanced {
        let Some(mut z) = z else {
            next.push(tr);
            continue;
        };
        tr.failures = 0;
        if symmetric && !tr.real && z.location.im.is_sign_negative() {
            // the mirror image of a pair that is still off the axis
            z.location = z.location.conj();
        }
        let threshold = stepper
            .opts
            .collision_threshold
            .unwrap_or_else(|| 10f64.powi(-(stepper.ctx.digits() as i32 - 10)));
        let scale = z.location.abs().to_f64().max(1.0);
        if symmetric && !tr.real && z.location.im.to_f64() < threshold * scale {
            path.events.push(Event {
                track: tr.id,
                t,
                kind: EventKind::CollisionWithAxis,
            });
            z.location.im = Float::new(stepper.ctx.bits());
            let r = stepper.radius(&tr, h).max(0.5);
            let taken = |b: &ZeroRecord| {
                path.tracks.iter().any(|other| other[idx].as_ref().is_some_and(|o| (&o.location - &b.location).abs().to_f64() < 1e-12))
            };
            if let Some(extra) = stepper.emerged_partner(ev, &z.location.re, r)?.filter(|b| !taken(b)) {
                let id = path.tracks.len();
                let mut column = vec![None; idx];
                column.push(Some(extra.clone()));
                path.tracks.push(column);
                path.events.push(Event {
                    track: id,
                    t,
                    kind: EventKind::Emerged,
                });
                next.push(Live {
                    id,
                    z: extra.location.clone(),
                    prev: None,
                    real: true,
                    failures: 0,
                });
            }
            tr.real = true;
            tr.prev = None;
        } else {
            tr.prev = Some((tr.z.clone(), h));
        }
        tr.z = z.location.clone();
        path.tracks[tr.id][idx] = Some(z);
        next.push(tr);
    }
    Ok(next)
}

/// Per-track verdict of the descent check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentReport {
    /// `(track, nonincreasing)` for every track that starts off the axis.
    pub tracks: Vec<(usize, bool)>,
    pub all_monotone: bool,
}

/// Imaginary parts of every non-real track are nonincreasing in `t`
/// (to `10·eps` relative), up to the point where the track meets the axis.
pub fn verify_monotone_descent(path: &HomotopyPath) -> DescentReport {
    let mut tracks = Vec::new();
    for (id, tr) in path.tracks.iter().enumerate() {
        let pts: Vec<&ZeroRecord> = tr.iter().flatten().collect();
        let Some(first) = pts.first() else { continue };
        if first.location.im.is_zero() {
            continue;
        }
        let mut ok = true;
        for w in pts.windows(2) {
            if w[1].location.im.is_zero() {
                break;
            }
            let eps = 10f64.powi(-(w[1].digits_used as i32 - 1)) * 10.0;
            let tol = eps * w[0].im_f64().abs().max(1.0);
            if w[1].im_f64() > w[0].im_f64() + tol {
                ok = false;
                break;
            }
        }
        tracks.push((id, ok));
    }
    let all_monotone = tracks.iter().all(|t| t.1);
    DescentReport { tracks, all_monotone }
}

/// One point of a real-zero continuation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealTrackPoint {
    pub t: f64,
    pub zero: ZeroRecord,
}

/// Points at every requested parameter that was reached. A track that ends
/// early has met another real zero (a fold: the pair leaves the axis) at
/// `end`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealTrack {
    pub points: Vec<RealTrackPoint>,
    pub end: Option<RealTrackPoint>,
}

/// Follows a real zero of `f0 + t·f1` from `(t_values[0], x0)` through the
/// listed parameters, which may move the zero by orders of magnitude.
/// Between listed values the step is subdivided so that the tangent
/// predictor `dx/dt = −f1(x)/∂ₓ(f0 + t·f1)` moves the zero by at most 5% of
/// `max(1, |x|)`; each prediction is pinned to the nearest sign change.
/// After 40 consecutive step halvings the track is declared ended.
pub fn track_real_zero(
    f0: &FunctionSpec,
    f1: &FunctionSpec,
    x0: &Real,
    t_values: &[Real],
    ctx: &PrecisionContext,
) -> Result<RealTrack> {
    if t_values.is_empty() {
        return Err(Error::InvalidArgument("track_real_zero needs at least one parameter value".into()));
    }
    let bits = ctx.bits();
    let spec = blend(f0, f1, Expr::int(0))?;
    let mut ev = Evaluator::new(&spec, ctx)?;
    if !ev.is_real_symmetric() {
        return Err(Error::InvalidArgument("real-zero continuation needs a real-symmetric blend".into()));
    }
    let ev1 = Evaluator::new(f1, ctx)?;
    let stepper = Stepper {
        base: ev.clone(),
        ctx: *ctx,
        opts: HomotopyOptions::default(),
    };
    let re = |ev: &Evaluator, x: &Real| ev.eval(&Complex::from_real(x.clone())).map(|c| c.re);
    let tangent = |ev: &Evaluator, x: &Real| -> Result<Real> {
        let h = Float::with_val(bits, x.to_f64().abs().max(1.0) * 10f64.powi(-(ctx.digits() as i32) / 3));
        let hi = re(ev, &Float::with_val(bits, x + &h))?;
        let lo = re(ev, &Float::with_val(bits, x - &h))?;
        let fx = Float::with_val(bits, &hi - &lo) / Float::with_val(bits, &h * 2u32);
        Ok(-(re(&ev1, x)? / fx))
    };
    ev.set_t(&t_values[0])?;
    let first = match stepper.correct_real(&ev, x0, 1e-3 * x0.to_f64().abs().max(1.0))? {
        Outcome::Ok(z) => z,
        Outcome::Fail => return Err(Error::InvalidArgument("track_real_zero: no real zero near the seed".into())),
    };
    let mut out = vec![RealTrackPoint {
        t: t_values[0].to_f64(),
        zero: first.clone(),
    }];
    let mut x = first;
    let mut t = Float::with_val(bits, &t_values[0]);
    let mut ev_t = ev.clone();
    let mut halvings = 0;
    for target in &t_values[1..] {
        let mut h = Float::with_val(bits, target - &t);
        while t != *target {
            let remaining = Float::with_val(bits, target - &t);
            if h.clone().abs() > remaining.clone().abs() {
                h = remaining.clone();
            }
            let v = tangent(&ev_t, &x.location.re)?;
            let xa = x.re_f64().abs().max(1.0);
            let shift = Float::with_val(bits, &v * &h);
            let moved = shift.to_f64().abs();
            if moved > 0.05 * xa {
                h *= 0.05 * xa / moved;
                continue;
            }
            let t_next = if h == remaining { target.clone() } else { Float::with_val(bits, &t + &h) };
            let guess = Float::with_val(bits, &x.location.re + &shift);
            let mut ev_next = ev.clone();
            ev_next.set_t(&t_next)?;
            match stepper.correct_real(&ev_next, &guess, 0.5 * moved + 1e-4 * xa)? {
                Outcome::Ok(z) => {
                    x = z;
                    t = t_next;
                    ev_t = ev_next;
                    h *= 2u32;
                    halvings = 0;
                }
                Outcome::Fail => {
                    h /= 2u32;
                    halvings += 1;
                    if halvings >= 40 {
                        log::info!("real track ends at t = {}, x = {}", t.to_f64(), x.re_f64());
                        return Ok(RealTrack {
                            points: out,
                            end: Some(RealTrackPoint { t: t.to_f64(), zero: x }),
                        });
                    }
                }
            }
        }
        out.push(RealTrackPoint {
            t: target.to_f64(),
            zero: x.clone(),
        });
    }
    Ok(RealTrack { points: out, end: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{phi_term, xi_truncated};

    fn rec(im: f64) -> ZeroRecord {
        ZeroRecord {
            location: Complex::from_f64(64, 1.0, im),
            multiplicity: 1,
            residual: 0.0,
            method: Method::Homotopy,
            digits_used: 20,
        }
    }

    #[test]
    fn descent_verdicts() {
        let path = HomotopyPath {
            t_grid: vec![0.0, 0.5, 1.0],
            tracks: vec![vec![Some(rec(3.0)), Some(rec(2.0)), Some(rec(1.0))], vec![Some(rec(3.0)), Some(rec(3.5)), Some(rec(1.0))]],
            events: vec![],
        };
        let r = verify_monotone_descent(&path);
        assert_eq!(r.tracks, vec![(0, true), (1, false)]);
        assert!(!r.all_monotone);
        let flat = HomotopyPath {
            t_grid: vec![0.0, 1.0],
            tracks: vec![vec![Some(rec(2.0)), Some(rec(2.0))]],
            events: vec![],
        };
        assert!(verify_monotone_descent(&flat).all_monotone);
    }

    #[test]
    fn scalar_blend_keeps_tracks_fixed() {
        let ctx = PrecisionContext::new(25).unwrap();
        let f0 = xi_truncated(1).unwrap();
        // f0 + t·f0 has the zeros of f0 for every t
        let seed = crate::zeros::newton_refine(&f0, &ctx.complex(20.6, 2.7), &ctx).unwrap();
        let seeds = ZeroList::new(vec![seed.clone()], None).unwrap();
        let path = track_path(&f0, &f0, &seeds, &ctx).unwrap();
        assert!(path.reached_end());
        for p in path.tracks[0].iter().flatten() {
            assert!(crate::precision::near_equal(&p.location, &seed.location, 1e-20));
        }
    }

    #[test]
    fn short_real_track() {
        // the largest real zero of Ξ₁ when Φ₂ is switched on slightly
        let ctx = PrecisionContext::new(30).unwrap();
        let f0 = xi_truncated(1).unwrap();
        let f1 = phi_term(2).unwrap();
        let x0 = ctx.parse("14.0454395788298").unwrap();
        let ts: Vec<Real> = (0..=8).map(|k| ctx.ratio(k, 8)).collect();
        let track = track_real_zero(&f0, &f1, &x0, &ts, &ctx).unwrap();
        assert!(track.end.is_none());
        let pts = track.points;
        assert_eq!(pts.len(), 9);
        // at t = 1 this is Ξ₂'s first real zero
        assert!((pts[8].zero.re_f64() - 14.1347251016150223590867934323428320).abs() < 1e-12);
    }
}
