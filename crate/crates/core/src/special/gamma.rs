//! Complex log-gamma by Stirling's series with upward shifting.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::precision::{format_real, Complex, PrecisionContext, Real};

/// Principal `ln Γ(z)`: the continuation of the real logarithm from the
/// positive axis, with its cut on the negative real axis. It satisfies
/// `lnΓ(z+1) = lnΓ(z) + ln z` with the principal `ln z`.
pub fn log_gamma(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    log_gamma_bits(z, ctx.bits())
}

/// `Γ(z)`.
pub fn gamma(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    let lg = log_gamma_bits(z, bits + magnitude_bits(z))?;
    Ok(lg.exp().with_prec(bits))
}

/// Extra bits so that `exp(lnΓ(z))` keeps full relative precision: the
/// absolute error of the log must be `2^-bits`, and `|lnΓ(z)| ~ |z| ln|z|`.
pub(crate) fn magnitude_bits(z: &Complex) -> u32 {
    let l = z.log10_abs().max(0.0) * std::f64::consts::LOG2_10;
    let mag = 2f64.powf(l.min(60.0)) * (l * std::f64::consts::LN_2).max(1.0);
    (mag.max(1.0).log2().ceil() as u32) + 2
}

/// `ln Γ(z)` with `bits` of relative precision.
pub(crate) fn log_gamma_bits(z: &Complex, bits: u32) -> Result<Complex> {
    if !z.is_finite() {
        return Err(Error::NonFinite("log_gamma argument"));
    }
    if z.im.is_zero() && z.re.is_integer() && z.re <= 0 {
        return Err(Error::Pole(format_real(&z.re, 17)));
    }
    let (re, im) = z.to_f64();
    let radius = 0.15 * bits as f64 + 6.0;

    // shift count m so that w = z + m has Re w >= 1/2 and |w| >= radius
    let mut m = 0f64;
    if re < 0.5 {
        m = (0.5 - re).ceil();
    }
    let need = (radius * radius - im * im).max(0.0).sqrt();
    if re + m < need {
        m = (need - re).ceil();
    }
    let m = m as u64;

    let shift_guard = if m > 0 { (m as f64 + 1.0).log2().ceil() as u32 + 4 } else { 0 };
    let work = bits + 16 + shift_guard + magnitude_bits(z);
    let zw = z.with_prec(work);

    let mut w = zw.clone();
    let mut correction = Complex::zero(work);
    if m > 0 {
        // lnΓ(z) = lnΓ(z+m) − Σ ln(z+k); accumulate the product and fix the
        // branch from the running sum of arguments
        let mut product = Complex::from_f64(work, 1.0, 0.0);
        let mut arg_sum = 0f64;
        for k in 0..m {
            let factor = zw.add_real(&Float::with_val(work, k));
            if factor.is_zero() {
                return Err(Error::Pole(format_real(&z.re, 17)));
            }
            arg_sum += factor.arg_f64();
            product.mul_assign_ref(&factor);
        }
        let mut ln_p = product.ln();
        let two_pi = Float::with_val(work, Constant::Pi) * 2u32;
        let turns = ((arg_sum - ln_p.im.to_f64()) / (2.0 * std::f64::consts::PI)).round();
        if turns != 0.0 {
            ln_p.im += Float::with_val(work, &two_pi * turns);
        }
        correction = ln_p;
        w = zw.add_real(&Float::with_val(work, m));
    }

    let mut result = stirling(&w, work)?;
    result.sub_assign_ref(&correction);
    Ok(result.with_prec(bits))
}

/// Stirling's series for `|w|` large, `Re w > 0`.
fn stirling(w: &Complex, bits: u32) -> Result<Complex> {
    let ln_w = w.ln();
    let half = Float::with_val(bits, 0.5);
    // (w − 1/2) ln w − w + ln(2π)/2
    let mut acc = &w.add_real(&-half) * &ln_w;
    acc.sub_assign_ref(w);
    let mut half_ln_2pi = Float::with_val(bits, Constant::Pi) * 2u32;
    half_ln_2pi.ln_mut();
    half_ln_2pi /= 2u32;
    acc.re += &half_ln_2pi;

    let inv = w.recip();
    let inv2 = inv.sqr();
    let mut power = inv;
    let coeffs = stirling_coefficients(bits);
    let tol_exp = acc_exp(&acc) - bits as i64 - 4;
    let mut k = 0;
    loop {
        if k >= coeffs.len() {
            return Err(Error::NoConvergence {
                what: "Stirling series",
                iterations: k,
            });
        }
        let term = power.scale(&coeffs[k]);
        let small = term_exp(&term) < tol_exp;
        acc.add_assign_ref(&term);
        if small {
            break;
        }
        power.mul_assign_ref(&inv2);
        k += 1;
    }
    Ok(acc)
}

fn acc_exp(z: &Complex) -> i64 {
    let e = |x: &Real| x.get_exp().map(i64::from).unwrap_or(i64::MIN / 2);
    e(&z.re).max(e(&z.im)).max(0)
}

fn term_exp(z: &Complex) -> i64 {
    let e = |x: &Real| x.get_exp().map(i64::from).unwrap_or(i64::MIN / 2);
    e(&z.re).max(e(&z.im))
}

type CoeffCache = Mutex<HashMap<u32, Arc<Vec<Real>>>>;

/// `B_{2k} / (2k (2k−1))` for `k = 1..K`, rounded to `bits` (cached by a
/// 64-bit bucket of the precision).
fn stirling_coefficients(bits: u32) -> Arc<Vec<Real>> {
    static CACHE: OnceLock<CoeffCache> = OnceLock::new();
    let bucket = bits.div_ceil(64) * 64;
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bucket) {
        return v.clone();
    }
    // the minimal term sits near k = π·radius; allow headroom
    let count = (0.6 * bucket as f64) as usize + 20;
    let tangent = tangent_numbers(count);
    let mut out = Vec::with_capacity(count);
    for (idx, t) in tangent.iter().enumerate() {
        let k = idx as u32 + 1;
        // B_{2k} = (−1)^{k−1} 2k T_k / (4^k (4^k − 1))
        let four_k = Integer::from(1) << (2 * k);
        let den = Integer::from(&four_k * (four_k.clone() - 1u32)) * (2 * k) * (2 * k - 1);
        let num = Integer::from(t * (2 * k));
        let mut c = Float::with_val(bucket, &num);
        c /= Float::with_val(bucket, &den);
        if k % 2 == 0 {
            c = -c;
        }
        out.push(c);
    }
    let arc = Arc::new(out);
    cache.lock().unwrap().insert(bucket, arc.clone());
    arc
}

/// Tangent numbers `T_1 .. T_n` (1, 2, 16, 272, ...).
fn tangent_numbers(n: usize) -> Vec<Integer> {
    let mut t: Vec<Integer> = vec![Integer::new(); n + 1];
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j as u32 - k as u32));
            let b = Integer::from(&t[j] * (j as u32 - k as u32 + 2));
            t[j] = a + b;
        }
    }
    t.remove(0);
    t
}
