//! Upper incomplete gamma `Γ(s, a)` for complex `s` and real `a > 0`.
//!
//! Everything is computed in the scaled form `Q(s, a) = Γ(s, a) / a^s`,
//! which is what the hyperbolic gamma function needs and which never
//! requires forming `a^s` on the continued-fraction route.
//!
//! Two routes:
//! * series: `Q = Γ(s)/a^s − e^{−a} Σ_k a^k / (s)_{k+1}`; free of
//!   cancellation once `Re s >= a` and cheap when `|s|` is large;
//! * continued fraction (modified Lentz): `Q = e^{−a} / (a+1−s − 1(1−s)/(a+3−s − ...))`;
//!   accurate for `Re s < a`, including very negative `Re s` and large `|Im s|`.

use std::cmp::Ordering;

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{complex_pow, Complex, PrecisionContext, Real};

use super::gamma::log_gamma_bits;

/// Evaluation route for [`scaled_upper_gamma`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Auto,
    Series,
    ContinuedFraction,
}

const MAX_CF_ITERATIONS: usize = 2_000_000;
const MAX_SERIES_TERMS: usize = 2_000_000;
/// Escalation rounds before giving up on a cancelling series.
const MAX_ESCALATIONS: usize = 4;

/// `Γ(s, a)`.
pub fn upper_incomplete_gamma(s: &Complex, a: &Real, ctx: &PrecisionContext) -> Result<Complex> {
    check_a(a)?;
    let q = scaled_upper_gamma(s, a, ctx)?;
    let pow = complex_pow(a, s, ctx)?;
    Ok(&q * &pow)
}

/// `Γ(s, a) / a^s`.
pub fn scaled_upper_gamma(s: &Complex, a: &Real, ctx: &PrecisionContext) -> Result<Complex> {
    check_a(a)?;
    let ln_a = Float::with_val(ctx.bits() + 32, a.ln_ref());
    let q = scaled_upper_gamma_with(s, a, &ln_a, ctx.bits(), ctx.guard_digits(), Route::Auto, None)?;
    Ok(q)
}

fn check_a(a: &Real) -> Result<()> {
    if a.cmp0() != Some(Ordering::Greater) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("incomplete gamma needs a > 0, got {}", a.to_f64())));
    }
    Ok(())
}

/// Cache of `ln Γ(s)` shared by several cutoffs `a` at the same `s`.
#[derive(Default)]
pub struct LnGammaCache {
    entries: Vec<(Complex, u32, Complex)>,
}

impl LnGammaCache {
    fn get(&mut self, s: &Complex, bits: u32) -> Result<Complex> {
        for (key, b, value) in &self.entries {
            if *b >= bits && key == s {
                return Ok(value.with_prec(bits));
            }
        }
        let value = log_gamma_bits(s, bits)?;
        self.entries.push((s.clone(), bits, value.clone()));
        Ok(value)
    }
}

/// Route chosen by [`Route::Auto`] when targeting `digits` decimal digits.
///
/// The series is taken whenever a cheap `f64` simulation predicts it loses
/// fewer than `SERIES_MAX_LOSS` digits: its terms `a^k/(s)_{k+1}` must not
/// grow much, and `Γ(s)/a^s` must not dwarf the expected result. Otherwise
/// the continued fraction, which is stable for `Re s < a`.
pub fn auto_route(s: &Complex, a: &Real, digits: u32) -> Route {
    let (re, im) = s.to_f64();
    let a_f = a.to_f64();
    if re >= a_f {
        return Route::Series;
    }
    if series_predicted_loss(re, im, a_f, digits) <= SERIES_MAX_LOSS {
        Route::Series
    } else {
        Route::ContinuedFraction
    }
}

/// Digits the series route is allowed to cancel before falling back.
const SERIES_MAX_LOSS: f64 = 4.0;
/// Beyond this many terms the continued fraction is always cheaper.
const SERIES_MAX_SIMULATED: usize = 20_000;

/// Predicted decimal digits lost by the series route for `Re s < a`.
fn series_predicted_loss(re: f64, im: f64, a: f64, digits: u32) -> f64 {
    let ln10 = std::f64::consts::LN_10;
    let log_t0 = -0.5 * (re * re + im * im).ln() / ln10;
    if !log_t0.is_finite() {
        return f64::INFINITY;
    }
    let mut log_t = log_t0;
    let mut peak = log_t0;
    let floor = log_t0 - digits as f64 - 5.0;
    let la = a.ln() / ln10;
    for k in 1..SERIES_MAX_SIMULATED {
        let x = re + k as f64;
        log_t += la - 0.5 * (x * x + im * im).ln() / ln10;
        if !log_t.is_finite() {
            return f64::INFINITY;
        }
        peak = peak.max(log_t);
        if x > a && log_t < floor {
            // expected |Q| ~ e^{-a}/|s| when the terms never grow
            let log_q = log_t0 - a / ln10;
            let log_lower = peak - a / ln10;
            let log_full = ln_abs_gamma_f64(re, im) / ln10 - re * la;
            return log_lower.max(log_full) - log_q;
        }
    }
    f64::INFINITY
}

/// `ln|Γ(x+iy)|` to a few digits, for magnitude estimates.
pub(crate) fn ln_abs_gamma_f64(x: f64, y: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        // reflection: |Γ(s)Γ(1−s)| = π/|sin πs|
        let (sx, _) = (PI * x).sin_cos();
        let ln_sin = if (PI * y).abs() > 40.0 {
            PI * y.abs() - std::f64::consts::LN_2
        } else {
            0.5 * (sx * sx + (PI * y).sinh().powi(2)).ln()
        };
        return PI.ln() - ln_sin - ln_abs_gamma_f64(1.0 - x, -y);
    }
    let mut shift = 0.0;
    let mut zx = x;
    while zx * zx + y * y < 100.0 {
        shift += 0.5 * (zx * zx + y * y).ln();
        zx += 1.0;
    }
    // Re[(z − 1/2) ln z − z] + ln(2π)/2 + Re 1/(12 z)
    let r2 = zx * zx + y * y;
    let ln_r = 0.5 * r2.ln();
    let theta = y.atan2(zx);
    let main = (zx - 0.5) * ln_r - y * theta - zx + 0.5 * (2.0 * PI).ln();
    main + zx / (12.0 * r2) - shift
}

/// Workhorse with explicit precision, route and an optional `ln Γ` cache.
/// `ln_a` must carry at least `bits + 32` bits.
pub(crate) fn scaled_upper_gamma_with(
    s: &Complex,
    a: &Real,
    ln_a: &Real,
    bits: u32,
    guard_digits: u32,
    route: Route,
    cache: Option<&mut LnGammaCache>,
) -> Result<Complex> {
    if !s.is_finite() {
        return Err(Error::NonFinite("incomplete gamma argument"));
    }
    let route = match route {
        Route::Auto => auto_route(s, a, digits_of(bits)),
        r => r,
    };
    match route {
        Route::ContinuedFraction => cf_scaled(s, a, bits),
        _ => {
            let guard_bits = (guard_digits as f64 * std::f64::consts::LOG2_10) as u32;
            let mut work = bits + 16;
            let mut cache = cache;
            for _ in 0..=MAX_ESCALATIONS {
                let (value, lost) = series_scaled(s, a, ln_a, work, cache.as_deref_mut())?;
                // the value carries work − lost good bits; at most half the
                // guard digits may be spent
                if lost + bits <= work + guard_bits / 2 {
                    return Ok(value.with_prec(bits));
                }
                log::debug!("incomplete gamma series lost {lost} bits at {work}; escalating");
                work = (bits + lost + 32).max(work + 32);
            }
            Err(Error::PrecisionLoss {
                what: "incomplete gamma series",
                lost: (work as f64 / std::f64::consts::LOG2_10) as u32,
                available: guard_digits,
            })
        }
    }
}

/// Series route at `work` bits; returns the value and the number of bits
/// lost to cancellation.
fn series_scaled(
    s: &Complex,
    a: &Real,
    ln_a: &Real,
    work: u32,
    cache: Option<&mut LnGammaCache>,
) -> Result<(Complex, u32)> {
    let sw = s.with_prec(work);
    let aw = Float::with_val(work, a);

    // e^{-a} Σ a^k / (s)_{k+1}
    let mut term = sw.recip();
    if !term.is_finite() {
        return Err(Error::Pole("0".into()));
    }
    let mut sum = term.clone();
    let mut biggest = term.log10_abs();
    let a_f = a.to_f64();
    let tol = -(work as f64) * std::f64::consts::LOG10_2 - 2.0;
    let mut k = 1usize;
    loop {
        let denom = sw.add_real(&Float::with_val(work, k));
        if denom.is_zero() {
            return Err(Error::Pole(format!("{}", -(k as i64))));
        }
        // term *= a/(s+k) = a·conj(s+k)/|s+k|²
        let scale = Float::with_val(work, &aw / &denom.norm_sqr());
        term.mul_assign_ref(&denom.conj().scale(&scale));
        sum.add_assign_ref(&term);
        let tl = term.log10_abs();
        biggest = biggest.max(tl);
        // terms shrink once |s + k| > a
        let past_peak = (s.re.to_f64() + k as f64) > a_f || k as f64 > 2.0 * a_f;
        if past_peak && tl < sum.log10_abs() + tol {
            break;
        }
        k += 1;
        if k > MAX_SERIES_TERMS {
            return Err(Error::NoConvergence {
                what: "incomplete gamma series",
                iterations: k,
            });
        }
    }
    let mut e_neg_a = Float::with_val(work, -&aw);
    e_neg_a.exp_mut();
    let lower = sum.scale(&e_neg_a);
    let biggest = biggest + e_neg_a_log10(&e_neg_a);

    // Γ(s)/a^s = exp(lnΓ(s) − s ln a), skipped when far below the sum
    let (re, im) = s.to_f64();
    let ln10 = std::f64::consts::LN_10;
    let est = ln_abs_gamma_f64(re, im) / ln10 - re * ln_a.to_f64() / ln10;
    let lower_mag = lower.log10_abs();
    let margin = 10.0 + 1e-3 * est.abs();
    if est + margin < lower_mag - work as f64 * std::f64::consts::LOG10_2 {
        let value = -&lower;
        let lost = ((biggest - lower_mag).max(0.0) * std::f64::consts::LOG2_10).ceil() as u32;
        return Ok((value, lost));
    }
    let lg_bits = work + super::gamma::magnitude_bits(s) + 8;
    let lg = match cache {
        Some(c) => c.get(s, lg_bits)?,
        None => log_gamma_bits(s, lg_bits)?,
    };
    let s_hi = s.with_prec(lg_bits);
    let ln_a_hi = Float::with_val(lg_bits, ln_a);
    let expo = &lg - &s_hi.scale(&ln_a_hi);
    let full = expo.exp().with_prec(work);

    let value = &full - &lower;
    let top = biggest.max(full.log10_abs());
    let res = value.log10_abs();
    let lost = if res == f64::NEG_INFINITY {
        work
    } else {
        ((top - res).max(0.0) * std::f64::consts::LOG2_10).ceil() as u32
    };
    Ok((value, lost))
}

fn digits_of(bits: u32) -> u32 {
    crate::precision::bits_to_digits(bits)
}

fn e_neg_a_log10(x: &Real) -> f64 {
    crate::precision::log10_abs(x)
}

/// Continued fraction route, `Re s < a` recommended.
fn cf_scaled(s: &Complex, a: &Real, bits: u32) -> Result<Complex> {
    let work = bits + 32;
    let sw = s.with_prec(work);
    let aw = Float::with_val(work, a);
    let tiny = Float::with_val(work, Float::i_exp(1, -(work as i32) * 4));
    let tiny_c = Complex::from_real(tiny);
    let one = Complex::from_f64(work, 1.0, 0.0);
    let two = Float::with_val(work, 2);

    // b0 = a + 1 − s
    let mut b = (-&sw).add_real(&Float::with_val(work, &aw + 1u32));
    if b.is_zero() {
        b = tiny_c.clone();
    }
    let mut c = tiny_c.recip();
    let mut d = b.recip();
    let mut h = d.clone();
    let stop = -(work as i64 - 8);
    for i in 1..=MAX_CF_ITERATIONS {
        // a_i = −i (i − s)
        let fi = Float::with_val(work, i as u64);
        let mut an = (-&sw).add_real(&fi);
        an = an.scale(&Float::with_val(work, -&fi));
        b.re += &two;
        d = &(&an * &d) + &b;
        if d.is_zero() {
            d = tiny_c.clone();
        }
        c = &b + &(&an / &c);
        if c.is_zero() {
            c = tiny_c.clone();
        }
        d = d.recip();
        let delta = &c * &d;
        h.mul_assign_ref(&delta);
        let diff = &delta - &one;
        let e = diff
            .re
            .get_exp()
            .map(i64::from)
            .unwrap_or(i64::MIN)
            .max(diff.im.get_exp().map(i64::from).unwrap_or(i64::MIN));
        if e < stop {
            let mut e_neg_a = Float::with_val(work, -&aw);
            e_neg_a.exp_mut();
            let q = h.scale(&e_neg_a);
            if !q.is_finite() {
                return Err(Error::NonFinite("incomplete gamma continued fraction"));
            }
            return Ok(q.with_prec(bits));
        }
    }
    Err(Error::NoConvergence {
        what: "incomplete gamma continued fraction",
        iterations: MAX_CF_ITERATIONS,
    })
}

/// Number of Lentz iterations the continued fraction takes (diagnostics).
pub fn cf_iterations(s: &Complex, a: &Real, bits: u32) -> usize {
    let work = bits + 32;
    let sw = s.with_prec(work);
    let aw = Float::with_val(work, a);
    let tiny = Complex::from_real(Float::with_val(work, Float::i_exp(1, -(work as i32) * 4)));
    let one = Complex::from_f64(work, 1.0, 0.0);
    let mut b = (-&sw).add_real(&Float::with_val(work, &aw + 1u32));
    let mut c = tiny.recip();
    let mut d = b.recip();
    let stop = -(work as i64 - 8);
    for i in 1..=MAX_CF_ITERATIONS {
        let fi = Float::with_val(work, i as u64);
        let an = (-&sw).add_real(&fi).scale(&Float::with_val(work, -&fi));
        b.re += 2u32;
        d = &(&an * &d) + &b;
        if d.is_zero() {
            d = tiny.clone();
        }
        c = &b + &(&an / &c);
        if c.is_zero() {
            c = tiny.clone();
        }
        d = d.recip();
        let diff = &(&c * &d) - &one;
        if diff.is_zero() || diff.log10_abs() * std::f64::consts::LOG2_10 < stop as f64 {
            return i;
        }
    }
    MAX_CF_ITERATIONS
}
