//! Stirling-type modulus estimates and the asymptotic zero-locus laws,
//! used as predictors (rectangle heights, search ceilings, Newton seeds)
//! and as trend checks on computed zeros. Nothing here is a gate: the laws
//! are `∼`-statements with unquantified error terms.

use std::f64::consts::PI;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{Complex, PrecisionContext, Real};
use crate::zeros::ZeroList;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocusLaw {
    /// Zeros of `Γ(z, a)`: `y ∼ (2/π) x ln x`.
    GammaFamily,
    /// Zeros of finite sums of hyperbolic gamma functions: `x ∼ (2/π) y ln y`.
    GsumFamily,
    /// Zeros of `Γ(az, a)` as `a → ∞` cluster on `Re(z ln z + 1 − z) = 0`.
    Mahler { a: f64 },
}

impl LocusLaw {
    pub fn mahler(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidArgument(format!("Mahler scaling needs a > 0, got {a}")));
        }
        Ok(LocusLaw::Mahler { a })
    }
}

fn two_over_pi_x_ln_x(x: f64) -> f64 {
    2.0 / PI * x * x.ln()
}

/// `√(2π/|z|) · exp(x ln|z| − x − yθ)` — the leading Stirling size of `|Γ(z)|`.
pub fn stirling_modulus(z: &Complex, ctx: &PrecisionContext) -> Result<Real> {
    let bits = ctx.bits();
    let r = z.abs();
    if r < 10 {
        return Err(Error::InvalidArgument(format!(
            "stirling_modulus is an asymptotic estimate for |z| >= 10, got |z| = {:.3}",
            r.to_f64()
        )));
    }
    let theta = z.arg();
    let ln_r = Float::with_val(bits, r.ln_ref());
    let mut e = Float::with_val(bits, &z.re * &ln_r);
    e -= &z.re;
    e -= Float::with_val(bits, &z.im * &theta);
    let mut pre = Float::with_val(bits, ctx.pi() * 2u32) / &r;
    pre.sqrt_mut();
    e.exp_mut();
    Ok(pre * e)
}

/// Predicted partner coordinate: `x ↦ y` for the Γ family, `y ↦ x` for
/// hyperbolic gamma sums, and `θ ↦ r` (radius in the `z/a` scale) on the
/// Mahler curve.
pub fn locus_predict(law: LocusLaw, coordinate: f64) -> Result<f64> {
    match law {
        LocusLaw::GammaFamily | LocusLaw::GsumFamily => {
            if !(coordinate >= 10.0) {
                return Err(Error::InvalidArgument(format!(
                    "locus law applies for coordinates >= 10, got {coordinate}"
                )));
            }
            Ok(two_over_pi_x_ln_x(coordinate))
        }
        LocusLaw::Mahler { .. } => mahler_radius(coordinate),
    }
}

/// `g(r) = Re(z ln z + 1 − z)` on the ray `z = r e^{iθ}`.
fn mahler_g(r: f64, theta: f64) -> f64 {
    r * theta.cos() * r.ln() - r * theta * theta.sin() + 1.0 - r * theta.cos()
}

/// Radius of the Mahler curve on the ray at angle `θ ∈ [0, π/2)`. The zeros
/// lie in `Re z > 1`, so the branch is the unique root with `r > 1`
/// (`g` is convex with `g(1) ≤ 0`); at `θ = 0` it degenerates to `r = 1`.
pub fn mahler_radius(theta: f64) -> Result<f64> {
    if !(0.0..PI / 2.0).contains(&theta) {
        return Err(Error::InvalidArgument(format!("Mahler ray needs 0 <= θ < π/2, got {theta}")));
    }
    if theta == 0.0 {
        return Ok(1.0);
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    while mahler_g(hi, theta) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoConvergence { what: "Mahler radius bracket", iterations: 1000 });
        }
    }
    // bisect to adjacent doubles: far out on steep rays r is large and a
    // relative stop would leave a residual of order r·tolerance
    for _ in 0..2100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mahler_g(mid, theta) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if mahler_g(lo, theta).abs() <= mahler_g(hi, theta).abs() { lo } else { hi })
}

/// Residual `Re(z ln z + 1 − z)` at `z = r e^{iθ}`.
pub fn mahler_residual(r: f64, theta: f64) -> f64 {
    mahler_g(r, theta)
}

/// Inverse of `x = (2/π) y ln y` for `x > 0` (the height a sum of hyperbolic
/// gamma functions reaches by real part `x`).
pub fn gsum_height(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // y ln y = πx/2; Newton on ln y from a safe start
    let target = PI * x / 2.0;
    let mut y = (target / (target + 1.0).ln().max(1.0)).max(1.0);
    for _ in 0..60 {
        let f = y * y.ln() - target;
        let d = y.ln() + 1.0;
        let next = (y - f / d).max(1.0 + 1e-12);
        if (next - y).abs() <= 1e-14 * y {
            y = next;
            break;
        }
        y = next;
    }
    y
}

/// Top edge for the real-zero-count audit below real part `x`: twice the
/// locus height, and never below 10.
pub fn audit_height(x: f64) -> f64 {
    (2.0 * gsum_height(x) + 2.0).max(10.0)
}

/// Search ceiling for minimizing `|F(α + iy)|` over `y`.
pub fn mcurve_y_cap(alpha: f64) -> f64 {
    let a = alpha.max(0.0);
    50f64.max(3.0 + 2.0 / PI * a * (a + 2.0).ln())
}

/// Per-zero agreement with a locus law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub law: LocusLaw,
    /// `(re, im, actual / predicted)` in order of increasing `|z|`.
    pub points: Vec<(f64, f64, f64)>,
    /// Least-squares slope of `|ratio − 1|` against `ln |z|`; negative
    /// means the ratios approach 1 as the zeros move out.
    pub trend_slope: f64,
    /// Fraction of consecutive pairs whose ratio moves closer to 1.
    pub toward_one_fraction: f64,
}

/// Compares the zeros in the open upper half plane with `law`.
pub fn locus_fit(zl: &ZeroList, law: LocusLaw) -> Result<FitReport> {
    let mut pts: Vec<(f64, f64)> = zl
        .zeros
        .iter()
        .map(|z| (z.re_f64(), z.im_f64()))
        .filter(|&(_, y)| y > 0.0)
        .collect();
    if pts.len() < 5 {
        return Err(Error::InvalidArgument(format!("locus fit needs >= 5 zeros in Q, got {}", pts.len())));
    }
    pts.sort_by(|a, b| a.0.hypot(a.1).total_cmp(&b.0.hypot(b.1)));
    let mut points = Vec::with_capacity(pts.len());
    for (x, y) in pts {
        let ratio = match law {
            LocusLaw::GammaFamily => y / two_over_pi_x_ln_x(x),
            LocusLaw::GsumFamily => x / two_over_pi_x_ln_x(y),
            LocusLaw::Mahler { a } => {
                let (u, v) = (x / a, y / a);
                u.hypot(v) / mahler_radius(v.atan2(u))?
            }
        };
        points.push((x, y, ratio));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.hypot(p.1).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.2 - 1.0).abs()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let trend_slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let closer = ys.windows(2).filter(|w| w[1] <= w[0]).count();
    Ok(FitReport {
        law,
        points,
        trend_slope,
        toward_one_fraction: closer as f64 / (ys.len() - 1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::log_gamma;
    use crate::zeros::{Method, ZeroRecord};

    #[test]
    fn stirling_against_log_gamma() {
        let ctx = PrecisionContext::new(30).unwrap();
        for (re, im) in [(20.0, 0.0), (10.0, 10.0), (3.0, 40.0), (500.0, 2000.0)] {
            let z = ctx.complex(re, im);
            let est = stirling_modulus(&z, &ctx).unwrap();
            let exact = log_gamma(&z, &ctx).unwrap().re.exp();
            let rel = (Float::with_val(ctx.bits(), &est / &exact) - 1u32).abs().to_f64();
            let r = re.hypot(im);
            assert!(rel <= 2.0 / r, "{re}+{im}i: {rel}");
        }
        assert!(stirling_modulus(&ctx.complex(3.0, 4.0), &ctx).is_err());
        let lower = stirling_modulus(&ctx.complex(12.0, 5.0), &ctx).unwrap();
        let higher = stirling_modulus(&ctx.complex(12.0, 8.0), &ctx).unwrap();
        assert!(higher < lower);
    }

    #[test]
    fn laws() {
        assert!((locus_predict(LocusLaw::GammaFamily, 100.0).unwrap() - 293.17).abs() < 0.01);
        assert_eq!(locus_predict(LocusLaw::mahler(1.0).unwrap(), 0.0).unwrap(), 1.0);
        assert!(locus_predict(LocusLaw::GsumFamily, 3.0).is_err());
        assert!(LocusLaw::mahler(0.0).is_err());
        for theta in [0.1, 0.5, 1.0, 1.3] {
            let r = mahler_radius(theta).unwrap();
            assert!(r > 1.0 && mahler_residual(r, theta).abs() <= 1e-8, "{theta}: {r}");
        }
        let y = gsum_height(96.3);
        assert!((two_over_pi_x_ln_x(y) - 96.3).abs() < 1e-9);
    }

    #[test]
    fn fit_on_exact_locus() {
        let zeros = (1..=6)
            .map(|k| {
                let y = 10.0 * k as f64;
                ZeroRecord {
                    location: Complex::from_f64(64, two_over_pi_x_ln_x(y), y),
                    multiplicity: 1,
                    residual: 0.0,
                    method: Method::WindingNewton,
                    digits_used: 15,
                }
            })
            .collect();
        let zl = ZeroList::new(zeros, None).unwrap();
        let fit = locus_fit(&zl, LocusLaw::GsumFamily).unwrap();
        assert!(fit.points.iter().all(|p| (p.2 - 1.0).abs() < 1e-12));
        let short = ZeroList::new(zl.zeros[..3].to_vec(), None).unwrap();
        assert!(locus_fit(&short, LocusLaw::GsumFamily).is_err());
    }
}
