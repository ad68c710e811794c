//! Hyperbolic gamma functions
//! `G(z;a,b,α,w) = α Γ(b+iz,a)/a^{b+iz} + ᾱ w Γ(b−iz,a)/a^{b−iz}`.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::precision::{complex_pow, Complex, PrecisionContext, Real};

use super::incomplete::{scaled_upper_gamma_with, LnGammaCache, Route};

/// What a term contributes at argument `z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    /// `u · G(z; a, b, α, w)`
    #[default]
    Hyperbolic,
    /// `u · Γ(b + z, a)` (the bare incomplete gamma family; `α`, `w` unused)
    Upper,
}

impl TermKind {
    fn is_default(&self) -> bool {
        *self == TermKind::Hyperbolic
    }
}

/// One summand `u · G(z; a, b, α, w)` with exact symbolic parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperbolicGammaTerm {
    pub a: Expr,
    pub b: Expr,
    #[serde(default = "one")]
    pub alpha: Expr,
    #[serde(default = "one")]
    pub w: Expr,
    #[serde(default = "one")]
    pub u: Expr,
    #[serde(default, skip_serializing_if = "TermKind::is_default")]
    pub kind: TermKind,
}

fn one() -> Expr {
    Expr::int(1)
}

impl HyperbolicGammaTerm {
    /// `u · G(z; a, b)` with `α = w = 1`.
    pub fn new(u: Expr, a: Expr, b: Expr) -> Self {
        Self {
            a,
            b,
            alpha: one(),
            w: one(),
            u,
            kind: TermKind::Hyperbolic,
        }
    }

    pub fn generalized(u: Expr, a: Expr, b: Expr, alpha: Expr, w: Expr) -> Self {
        Self {
            a,
            b,
            alpha,
            w,
            u,
            kind: TermKind::Hyperbolic,
        }
    }

    pub fn upper(u: Expr, a: Expr, b: Expr) -> Self {
        Self {
            a,
            b,
            alpha: one(),
            w: one(),
            u,
            kind: TermKind::Upper,
        }
    }

    /// `α = w = 1` syntactically (the real-symmetric case).
    pub fn is_plain(&self) -> bool {
        self.alpha.is_one() && self.w.is_one() && self.kind == TermKind::Hyperbolic
    }

    /// Evaluates and validates the parameters at the context precision.
    pub fn values(&self, ctx: &PrecisionContext) -> Result<TermValues> {
        TermValues::new(self, ctx)
    }

    /// Same term with `u` multiplied by `factor`.
    pub fn scaled(&self, factor: Expr) -> Self {
        let mut t = self.clone();
        t.u = factor.times(t.u);
        t
    }
}

/// A term with its parameters materialized at one precision.
#[derive(Clone, Debug)]
pub struct TermValues {
    pub kind: TermKind,
    pub a: Real,
    pub ln_a: Real,
    pub b: Real,
    pub alpha: Complex,
    /// `ᾱ · w`
    pub alpha_bar_w: Complex,
    pub u: Complex,
    /// `α` real and `w = 1`
    pub real_symmetric: bool,
}

impl TermValues {
    pub fn new(term: &HyperbolicGammaTerm, ctx: &PrecisionContext) -> Result<Self> {
        let bits = ctx.bits();
        let a = term.a.eval_real(bits)?;
        if a.cmp0() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidArgument(format!("term cutoff a = {} must be positive", term.a)));
        }
        let b = term.b.eval_real(bits)?;
        let alpha = term.alpha.eval(bits)?;
        let w = term.w.eval(bits)?;
        let u = term.u.eval(bits)?;
        if u.is_zero() {
            return Err(Error::InvalidArgument(format!("term coefficient u = {} is zero", term.u)));
        }
        if term.kind == TermKind::Hyperbolic {
            // literal root numbers are given to finite accuracy; accept the
            // looser of 10·eps and 1e-20
            let dev = (w.abs() - 1u32).abs().to_f64();
            let tol = (10.0 * ctx.eps_f64()).max(1e-20);
            if dev > tol {
                return Err(Error::InvalidArgument(format!("twist w = {} has |w| != 1 (off by {dev:e})", term.w)));
            }
        }
        let ln_a = Float::with_val(bits + 32, a.ln_ref());
        let alpha_bar_w = &alpha.conj() * &w;
        let real_symmetric = alpha.im.is_zero() && w.im.is_zero() && w.re == 1;
        Ok(Self {
            kind: term.kind,
            a,
            ln_a,
            b,
            alpha,
            alpha_bar_w,
            u,
            real_symmetric,
        })
    }

    /// The term's value at `z` (already multiplied by any argument scale).
    pub fn eval(&self, z: &Complex, ctx: &PrecisionContext, cache: Option<&mut LnGammaCache>) -> Result<Complex> {
        let bits = ctx.bits();
        let guard = ctx.guard_digits();
        let bz = z.with_prec(bits);
        match self.kind {
            TermKind::Upper => {
                let s = bz.add_real(&self.b);
                let q = scaled_upper_gamma_with(&s, &self.a, &self.ln_a, bits, guard, Route::Auto, cache)?;
                let pow = complex_pow(&self.a, &s, ctx)?;
                Ok(&(&q * &pow) * &self.u)
            }
            TermKind::Hyperbolic => {
                let iz = bz.mul_i();
                let s_plus = iz.add_real(&self.b);
                let mut cache = cache;
                let q_plus =
                    scaled_upper_gamma_with(&s_plus, &self.a, &self.ln_a, bits, guard, Route::Auto, cache.as_deref_mut())?;
                let q_minus = if bz.im.is_zero() {
                    // Γ(s̄, a) = conj Γ(s, a) for real a
                    q_plus.conj()
                } else {
                    let s_minus = (-&iz).add_real(&self.b);
                    scaled_upper_gamma_with(&s_minus, &self.a, &self.ln_a, bits, guard, Route::Auto, cache)?
                };
                let g = if self.real_symmetric && bz.im.is_zero() {
                    // α (Q + Q̄) = 2α Re Q
                    let mut re = Float::with_val(bits, &q_plus.re * &self.alpha.re);
                    re <<= 1;
                    Complex::from_real(re)
                } else {
                    &(&self.alpha * &q_plus) + &(&self.alpha_bar_w * &q_minus)
                };
                Ok(&g * &self.u)
            }
        }
    }
}

/// `G(z; a, b) = Γ(b+iz,a)/a^{b+iz} + Γ(b−iz,a)/a^{b−iz}`.
pub fn hyperbolic_gamma(z: &Complex, a: &Real, b: &Real, ctx: &PrecisionContext) -> Result<Complex> {
    if a.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument("hyperbolic gamma needs a > 0".into()));
    }
    let bits = ctx.bits();
    let tv = TermValues {
        kind: TermKind::Hyperbolic,
        a: Float::with_val(bits, a),
        ln_a: Float::with_val(bits + 32, a.ln_ref()),
        b: Float::with_val(bits, b),
        alpha: ctx.one(),
        alpha_bar_w: ctx.one(),
        u: ctx.one(),
        real_symmetric: true,
    };
    tv.eval(z, ctx, None)
}

/// `u · G(z; a, b, α, w)`.
pub fn generalized_hyperbolic_gamma(z: &Complex, term: &HyperbolicGammaTerm, ctx: &PrecisionContext) -> Result<Complex> {
    term.values(ctx)?.eval(z, ctx, None)
}

/// Coefficients of `x^-2` and, for `order = 4`, `x^-4` in the large-`x`
/// expansion of `G(x; a, b)` along the real axis (the gamma parts decay
/// exponentially and are dropped).
///
/// `x^-2`: `2(a − b)/e^a`;
/// `x^-4`: `2(b³ − 3ab² + 3a²b − a³ − 3ab + 3a² − a)/e^a`.
pub fn tail_expansion_coefficients(a: &Real, b: &Real, order: u32, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    if a.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument("tail expansion needs a > 0".into()));
    }
    if order != 2 && order != 4 {
        return Err(Error::InvalidArgument(format!("tail expansion order must be 2 or 4, got {order}")));
    }
    let bits = ctx.bits() + 16;
    let a = Float::with_val(bits, a);
    let b = Float::with_val(bits, b);
    let mut e_neg_a = Float::with_val(bits, -&a);
    e_neg_a.exp_mut();
    let mut c2 = Float::with_val(bits, &a - &b);
    c2 *= &e_neg_a;
    c2 <<= 1;
    let mut out = vec![Float::with_val(ctx.bits(), &c2)];
    if order == 4 {
        let a2 = Float::with_val(bits, a.square_ref());
        let ab = Float::with_val(bits, &a * &b);
        // (b − a)³ − 3ab + 3a² − a
        let d = Float::with_val(bits, &b - &a);
        let mut p = Float::with_val(bits, d.square_ref()) * &d;
        p -= Float::with_val(bits, &ab * 3u32);
        p += Float::with_val(bits, &a2 * 3u32);
        p -= &a;
        p *= &e_neg_a;
        p <<= 1;
        out.push(Float::with_val(ctx.bits(), &p));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::near_equal;
    use crate::special::incomplete::upper_incomplete_gamma;

    #[test]
    fn origin_value() {
        let ctx = PrecisionContext::new(30).unwrap();
        let a = ctx.pi();
        let b = ctx.ratio(9, 4);
        let g0 = hyperbolic_gamma(&ctx.zero(), &a, &b, &ctx).unwrap();
        let s = Complex::from_real(b.clone());
        let gb = upper_incomplete_gamma(&s, &a, &ctx).unwrap();
        let pow = complex_pow(&a, &s, &ctx).unwrap();
        let expect = (&gb / &pow).scale_f64(2.0);
        assert!(near_equal(&g0, &expect, 1e-30));
    }

    #[test]
    fn even_and_real() {
        let ctx = PrecisionContext::new(30).unwrap();
        let a = ctx.real(5.0);
        let b = ctx.ratio(5, 4);
        for (re, im) in [(3.0, 0.0), (17.5, 2.25), (-4.0, 40.0)] {
            let z = ctx.complex(re, im);
            let g = hyperbolic_gamma(&z, &a, &b, &ctx).unwrap();
            let gm = hyperbolic_gamma(&-&z, &a, &b, &ctx).unwrap();
            assert!(near_equal(&g, &gm, 1e-32), "{re} {im}");
        }
        // real z: the conjugate shortcut must agree with a full complex evaluation
        let z = ctx.complex(12.0, 0.0);
        let g = hyperbolic_gamma(&z, &a, &b, &ctx).unwrap();
        assert!(g.im.is_zero());
        let tiny = ctx.parse_complex("12", "1e-60").unwrap();
        let g2 = hyperbolic_gamma(&tiny, &a, &b, &ctx).unwrap();
        assert!(near_equal(&g, &g2, 1e-30));
    }

    #[test]
    fn generalized_reduces() {
        let ctx = PrecisionContext::new(25).unwrap();
        let term = HyperbolicGammaTerm::new(Expr::int(1), Expr::Pi, Expr::ratio(9, 4));
        let z = ctx.complex(7.0, 3.0);
        let a = generalized_hyperbolic_gamma(&z, &term, &ctx).unwrap();
        let b = hyperbolic_gamma(&z, &ctx.pi(), &ctx.ratio(9, 4), &ctx).unwrap();
        assert!(near_equal(&a, &b, 1e-30));
    }

    #[test]
    fn twist_modulus_checked() {
        let ctx = PrecisionContext::new(25).unwrap();
        let mut term = HyperbolicGammaTerm::new(Expr::int(1), Expr::Pi, Expr::int(1));
        term.w = Expr::parse("1.001").unwrap();
        assert!(term.values(&ctx).is_err());
        term.w = Expr::parse("root(1, 7)").unwrap();
        assert!(term.values(&ctx).is_ok());
        term.u = Expr::int(0);
        assert!(term.values(&ctx).is_err());
    }

    #[test]
    fn tail_vanishes_when_a_equals_b() {
        let ctx = PrecisionContext::new(25).unwrap();
        let a = ctx.real(3.5);
        let c = tail_expansion_coefficients(&a, &a, 2, &ctx).unwrap();
        assert!(c[0].is_zero());
        assert!(tail_expansion_coefficients(&a, &a, 3, &ctx).is_err());
    }
}
