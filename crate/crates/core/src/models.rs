//! Function families as finite sums of hyperbolic gamma terms.
//!
//! Every object studied here — the truncated Riemann approximates `Ξ_N`,
//! the Ramanujan approximates `Ξ_{Δ,N}`, cusp-form and Dirichlet analogues,
//! the bare incomplete gamma function and `t`-blends between them — is a
//! [`FunctionSpec`]: a list of [`HyperbolicGammaTerm`]s evaluated at
//! `z · arg_scale`. One evaluation path serves them all.

use std::fmt;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::number_theory::{functional_prefactor_expr, CharacterSpec, TauTable};
use crate::precision::{Complex, PrecisionContext, Real};
use crate::special::hyperbolic::{TermKind, TermValues};
use crate::special::{HyperbolicGammaTerm, LnGammaCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    XiN,
    Phi,
    RamanujanXiN,
    CuspFormB,
    DirichletXi,
    Gamma,
    Blend,
    Custom,
}

/// A finite formal sum of hyperbolic gamma terms.
///
/// For a blend (`t` present) the first `blend_split` terms form `f0` and the
/// rest `f1`, and the value is `f0(z) + t·f1(z)`; `t` is kept separate from
/// the `u` coefficients so that `t = 0` is exact and the document records
/// the blend parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub family: Family,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Expr>>,
    pub terms: Vec<HyperbolicGammaTerm>,
    pub arg_scale: Expr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blend_split: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recommended_digits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl FunctionSpec {
    pub fn custom(terms: Vec<HyperbolicGammaTerm>, arg_scale: Expr) -> Result<Self> {
        let spec = Self::bare(Family::Custom, terms, arg_scale);
        spec.validate()?;
        Ok(spec)
    }

    fn bare(family: Family, terms: Vec<HyperbolicGammaTerm>, arg_scale: Expr) -> Self {
        Self {
            family,
            n: None,
            q: None,
            character: None,
            weight: None,
            coefficients: None,
            terms,
            arg_scale,
            t: None,
            blend_split: None,
            recommended_digits: None,
            label: None,
        }
    }

    /// Structural checks; numeric term invariants are checked when an
    /// [`Evaluator`] is built.
    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidArgument("function spec has no terms".into()));
        }
        match (&self.t, self.blend_split) {
            (Some(_), Some(k)) if k <= self.terms.len() => {}
            (None, None) => {}
            _ => return Err(Error::InvalidArgument("blend needs both t and a valid blend_split".into())),
        }
        let probe = PrecisionContext::new(20)?;
        let scale = self.arg_scale.eval_real(probe.bits())?;
        if scale.cmp0() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidArgument(format!("arg_scale {} must be positive", self.arg_scale)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Short name such as `Xi2`, `RamanujanXi10`, `Gamma(pi)`.
    pub fn tag(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let n = self.n.map(|n| n.to_string()).unwrap_or_default();
        match self.family {
            Family::XiN => format!("Xi{n}"),
            Family::Phi => format!("Phi{n}"),
            Family::RamanujanXiN => format!("RamanujanXi{n}"),
            Family::CuspFormB => format!("CuspFormB{}_{n}", self.weight.unwrap_or(0)),
            Family::DirichletXi => match &self.character {
                Some(c) => format!("DirichletXi_{}_{n}", c.label()),
                None => format!("DirichletXi{n}"),
            },
            Family::Gamma => format!("Gamma({})", self.terms[0].a),
            Family::Blend => "Blend".into(),
            Family::Custom => "Custom".into(),
        }
    }

    /// Every term has `α = w = 1` (so the function is real on the real axis
    /// and even), and any blend parameter is real.
    pub fn is_real_symmetric(&self) -> bool {
        let t_real = match &self.t {
            None => true,
            Some(t) => t.eval_real(64).is_ok(),
        };
        t_real && self.terms.iter().all(HyperbolicGammaTerm::is_plain)
    }

    /// Digits to use when the caller does not override.
    pub fn default_digits(&self) -> u32 {
        self.recommended_digits.unwrap_or(30)
    }

    /// Context at the recommended precision.
    pub fn default_context(&self) -> PrecisionContext {
        PrecisionContext::new(self.default_digits()).expect("recommended digits >= 15")
    }

    /// Terms with any blend parameter folded into `u`.
    fn flattened_terms(&self) -> Result<Vec<HyperbolicGammaTerm>> {
        match (&self.t, self.blend_split) {
            (Some(t), Some(k)) => {
                if t.is_zero() {
                    return Ok(self.terms[..k].to_vec());
                }
                let mut out = self.terms[..k].to_vec();
                out.extend(self.terms[k..].iter().map(|term| term.scaled(t.clone())));
                Ok(out)
            }
            _ => Ok(self.terms.clone()),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

fn xi_digits(n: u32) -> u32 {
    (20 * n as i64 - 10).max(25) as u32
}

fn phi_terms(n: u32) -> Vec<HyperbolicGammaTerm> {
    let n2 = (n as i64) * (n as i64);
    let a = Expr::int(n2).times(Expr::Pi);
    let u1 = Expr::int(2 * n2 * n2).mul(Expr::Pi.pow(Expr::int(2)));
    let u2 = Expr::int(-3 * n2).mul(Expr::Pi);
    vec![
        HyperbolicGammaTerm::new(u1, a.clone(), Expr::ratio(9, 4)),
        HyperbolicGammaTerm::new(u2, a, Expr::ratio(5, 4)),
    ]
}

/// `Φ_n(z) = 2π²n⁴ G(z/2; n²π, 9/4) − 3πn² G(z/2; n²π, 5/4)`.
pub fn phi_term(n: u32) -> Result<FunctionSpec> {
    if n < 1 {
        return Err(Error::InvalidArgument("phi_term needs n >= 1".into()));
    }
    let mut spec = FunctionSpec::bare(Family::Phi, phi_terms(n), Expr::ratio(1, 2));
    spec.n = Some(n);
    spec.recommended_digits = Some(xi_digits(n));
    Ok(spec)
}

/// `Ξ_N = Φ_1 + ... + Φ_N`.
pub fn xi_truncated(n: u32) -> Result<FunctionSpec> {
    if n < 1 {
        return Err(Error::InvalidArgument("xi_truncated needs N >= 1".into()));
    }
    let terms = (1..=n).flat_map(phi_terms).collect();
    let mut spec = FunctionSpec::bare(Family::XiN, terms, Expr::ratio(1, 2));
    spec.n = Some(n);
    spec.recommended_digits = Some(xi_digits(n));
    Ok(spec)
}

/// Default digits for `Ξ_{Δ,N}`.
pub fn ramanujan_digits(n: u32) -> u32 {
    (25 + 2 * n).min(45)
}

/// `Ξ_{Δ,N}(z) = Σ_{n<=N} τ(n) G(z; 2πn, 6)`.
pub fn ramanujan_xi_truncated(n: u32, tau: &TauTable) -> Result<FunctionSpec> {
    if n < 1 {
        return Err(Error::InvalidArgument("ramanujan_xi_truncated needs N >= 1".into()));
    }
    if tau.n_max() < n as usize {
        return Err(Error::InvalidArgument(format!("tau table has {} entries, need {n}", tau.n_max())));
    }
    let coeffs: Vec<Expr> = (1..=n as usize).map(|k| int_expr(tau.get(k).unwrap())).collect();
    let mut spec = cusp_terms(&coeffs, 6, n)?;
    spec.family = Family::RamanujanXiN;
    spec.weight = None;
    spec.coefficients = None;
    spec.recommended_digits = Some(ramanujan_digits(n));
    Ok(spec)
}

fn int_expr(v: i128) -> Expr {
    let lit = Expr::Num(v.unsigned_abs().to_string());
    if v < 0 {
        lit.neg()
    } else {
        lit
    }
}

fn cusp_terms(coeffs: &[Expr], k: u32, n: u32) -> Result<FunctionSpec> {
    let mut terms = Vec::new();
    for (idx, c) in coeffs.iter().take(n as usize).enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = idx as i64 + 1;
        let a = Expr::int(2 * m).mul(Expr::Pi);
        terms.push(HyperbolicGammaTerm::new(c.clone(), a, Expr::int(k as i64)));
    }
    if terms.is_empty() {
        return Err(Error::InvalidArgument("all cusp-form coefficients are zero".into()));
    }
    let mut spec = FunctionSpec::bare(Family::CuspFormB, terms, Expr::int(1));
    spec.n = Some(n);
    spec.weight = Some(k);
    spec.coefficients = Some(coeffs[..n as usize].to_vec());
    spec.recommended_digits = Some(ramanujan_digits(n));
    Ok(spec)
}

/// `B(z)` truncated after `N` terms for a cusp form `Σ c(n) e^{2πinz}` of
/// weight `2k`: terms `c(n) G(z; 2πn, k)`. Only even `k` reduces to plain
/// hyperbolic gamma functions.
pub fn cuspform_b_truncated(coeffs: &[Expr], k: u32, n: u32) -> Result<FunctionSpec> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "cusp-form sum needs even k (weight 2k); k = {k} gives t^(k+iz) − t^(k−iz), not a hyperbolic gamma sum"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("cusp-form truncation needs N >= 1".into()));
    }
    if coeffs.len() < n as usize {
        return Err(Error::InvalidArgument(format!("{} coefficients supplied, need {n}", coeffs.len())));
    }
    cusp_terms(coeffs, k, n)
}

/// The truncated Dirichlet approximate.
///
/// Term `n` encodes the pair `χ(n) Γ(b+iz/2, πn²/q)/(πn²/q)^{b+iz/2}` and
/// `P·χ̄(n) Γ(b−iz/2, πn²/q)/(πn²/q)^{b−iz/2}` as one generalized term
/// with `α = χ(n)`, `w = P`, `u = 1` (even, `b = 1/4`) or `u = n` (odd,
/// `b = 3/4`), where `P` is `w_prefactor` — the modulus-one number
/// `√q·w(χ)` (even) or `i√q·w(χ)` (odd). `N` terms carry the `2N`
/// summands; `n` with `χ(n) = 0` keeps an `α = 0` term.
pub fn dirichlet_xi_truncated(chi: &CharacterSpec, w_prefactor: &Expr, n: u32) -> Result<FunctionSpec> {
    if !chi.primitive || chi.q < 3 {
        return Err(Error::InvalidArgument(format!("character {} is not primitive", chi.label())));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("dirichlet_xi_truncated needs N >= 1".into()));
    }
    let p = w_prefactor.eval(256)?;
    let dev = (p.abs() - 1u32).abs().to_f64();
    if dev > 1e-30 {
        return Err(Error::InvalidArgument(format!("prefactor {w_prefactor} does not have modulus one (off by {dev:e})")));
    }
    let q = chi.q as i64;
    let (b, odd) = if chi.is_even() { (Expr::ratio(1, 4), false) } else { (Expr::ratio(3, 4), true) };
    let terms = (1..=n as i64)
        .map(|m| {
            let a = Expr::int(m * m).times(Expr::Pi).div(Expr::int(q));
            let u = if odd { Expr::int(m) } else { Expr::int(1) };
            HyperbolicGammaTerm::generalized(u, a, b.clone(), chi.value_expr(m), w_prefactor.clone())
        })
        .collect();
    let mut spec = FunctionSpec::bare(Family::DirichletXi, terms, Expr::ratio(1, 2));
    spec.n = Some(n);
    spec.q = Some(chi.q);
    spec.character = Some(chi.clone());
    spec.recommended_digits = Some(30);
    Ok(spec)
}

/// [`dirichlet_xi_truncated`] with the prefactor derived from the Gauss sum.
pub fn dirichlet_xi_for(chi: &CharacterSpec, n: u32) -> Result<FunctionSpec> {
    dirichlet_xi_truncated(chi, &functional_prefactor_expr(chi)?, n)
}

/// `Γ(z, a)` as a one-term spec.
pub fn gamma_family(a: Expr) -> Result<FunctionSpec> {
    let mut spec = FunctionSpec::bare(Family::Gamma, vec![HyperbolicGammaTerm::upper(Expr::int(1), a, Expr::int(0))], Expr::int(1));
    spec.recommended_digits = Some(25);
    spec.validate()?;
    Ok(spec)
}

/// The two-term generalized combination `Σ β_k G(z; A_k, B_k, α_k, w)`
/// with `β = α = (1+0.3i, −3−i)`, `B = (1.0, 2.2)`, `A = (π, 7.853981633974483096156608)`.
pub fn two_term_combination() -> FunctionSpec {
    let b1 = Expr::parse("1.0 + 0.3*i").unwrap();
    let b2 = Expr::parse("-3 - i").unwrap();
    let w = Expr::parse("0.7648421872844884262558600 + 0.6442176872376910536726144*i").unwrap();
    let terms = vec![
        HyperbolicGammaTerm::generalized(b1.clone(), Expr::Pi, Expr::Num("1.0".into()), b1, w.clone()),
        HyperbolicGammaTerm::generalized(
            b2.clone(),
            Expr::Num("7.853981633974483096156608".into()),
            Expr::Num("2.2".into()),
            b2,
            w,
        ),
    ];
    let mut spec = FunctionSpec::bare(Family::Custom, terms, Expr::int(1));
    spec.recommended_digits = Some(25);
    spec.label = Some("TwoTermCombination".into());
    spec
}

/// `f0 + t·f1`.
pub fn blend(f0: &FunctionSpec, f1: &FunctionSpec, t: Expr) -> Result<FunctionSpec> {
    let probe = 128;
    let s0 = f0.arg_scale.eval_real(probe)?;
    let s1 = f1.arg_scale.eval_real(probe)?;
    if s0 != s1 {
        return Err(Error::InvalidArgument(format!(
            "blend needs equal arg_scale, got {} and {}",
            f0.arg_scale, f1.arg_scale
        )));
    }
    t.eval(probe)?;
    let mut terms = f0.flattened_terms()?;
    let split = terms.len();
    terms.extend(f1.flattened_terms()?);
    let mut spec = FunctionSpec::bare(Family::Blend, terms, f0.arg_scale.clone());
    spec.t = Some(t);
    spec.blend_split = Some(split);
    spec.recommended_digits = Some(f0.default_digits().max(f1.default_digits()));
    spec.label = Some(format!("{} + t*{}", f0.tag(), f1.tag()));
    Ok(spec)
}

/// A spec materialized at one precision, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Evaluator {
    ctx: PrecisionContext,
    scale: Real,
    terms: Vec<TermValues>,
    split: usize,
    t: Option<Complex>,
    real_symmetric: bool,
}

/// A value plus the largest term magnitude, `log10`; the latter is the
/// natural scale for "is this small" questions.
#[derive(Clone, Debug)]
pub struct ScaledValue {
    pub value: Complex,
    pub log10_scale: f64,
}

impl ScaledValue {
    /// `log10(|value| / scale)`.
    pub fn log10_relative(&self) -> f64 {
        self.value.log10_abs() - self.log10_scale
    }
}

impl Evaluator {
    pub fn new(spec: &FunctionSpec, ctx: &PrecisionContext) -> Result<Self> {
        spec.validate()?;
        let bits = ctx.bits();
        let terms = spec.terms.iter().map(|t| t.values(ctx)).collect::<Result<Vec<_>>>()?;
        let scale = spec.arg_scale.eval_real(bits)?;
        let (split, t) = match (&spec.t, spec.blend_split) {
            (Some(t), Some(k)) => (k, Some(t.eval(bits)?)),
            _ => (terms.len(), None),
        };
        let t_real = t.as_ref().map_or(true, Complex::is_real);
        let real_symmetric = t_real && terms.iter().all(|t| t.real_symmetric && t.kind == TermKind::Hyperbolic);
        Ok(Self {
            ctx: *ctx,
            scale,
            terms,
            split,
            t,
            real_symmetric,
        })
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Real on the real axis and even.
    pub fn is_real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    pub fn is_blend(&self) -> bool {
        self.t.is_some()
    }

    /// Replaces the blend parameter.
    pub fn set_t(&mut self, t: &Real) -> Result<()> {
        if self.t.is_none() {
            return Err(Error::InvalidArgument("set_t on a spec that is not a blend".into()));
        }
        self.t = Some(Complex::from_real(Float::with_val(self.ctx.bits(), t)));
        Ok(())
    }

    pub fn eval(&self, z: &Complex) -> Result<Complex> {
        Ok(self.eval_scaled(z)?.value)
    }

    pub fn eval_scaled(&self, z: &Complex) -> Result<ScaledValue> {
        let bits = self.ctx.bits();
        let zs = z.with_prec(bits).scale(&self.scale);
        let mut cache = LnGammaCache::default();
        let mut biggest = f64::NEG_INFINITY;
        let mut sum = |range: std::ops::Range<usize>, biggest: &mut f64| -> Result<Complex> {
            let mut acc = Complex::zero(bits);
            for tv in &self.terms[range] {
                if tv.alpha.is_zero() && tv.kind == TermKind::Hyperbolic {
                    continue;
                }
                let v = tv.eval(&zs, &self.ctx, Some(&mut cache))?;
                *biggest = biggest.max(v.log10_abs());
                acc.add_assign_ref(&v);
            }
            Ok(acc)
        };
        let mut value = sum(0..self.split, &mut biggest)?;
        if let Some(t) = &self.t {
            if !t.is_zero() {
                let part = sum(self.split..self.terms.len(), &mut biggest)?;
                let part = t * &part;
                value.add_assign_ref(&part);
            }
        }
        if !value.is_finite() {
            return Err(Error::NonFinite("function spec"));
        }
        if self.real_symmetric && z.im.is_zero() {
            value.im = Float::new(bits);
        }
        let lost = biggest - value.log10_abs();
        if lost > self.ctx.guard_digits() as f64 + self.ctx.digits() as f64 / 2.0 {
            log::trace!("evaluation at {} cancels {lost:.1} digits", z.display(12));
        }
        Ok(ScaledValue {
            value,
            log10_scale: biggest,
        })
    }
}

/// `Σ_terms u · G(z · arg_scale; ...)`.
pub fn eval(spec: &FunctionSpec, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    Evaluator::new(spec, ctx)?.eval(z)
}

/// Coefficient `C` of `1/x²` in the large-`x` behaviour of the kernel sum
/// `Σ u·G(x; a, b)`, i.e. `Σ u·2(a−b)/e^a`, in the terms' own variable.
///
/// For `Φ_n` this gives `(4n⁴π²(n²π − 9/4) − 6n²π(n²π − 5/4))/e^{n²π}`.
/// Along the spec's own variable the function behaves like
/// `C/(arg_scale² x²)`; see [`leading_real_axis_coefficient_folded`].
pub fn leading_real_axis_coefficient(spec: &FunctionSpec, ctx: &PrecisionContext) -> Result<Real> {
    if !spec.is_real_symmetric() {
        return Err(Error::InvalidArgument(format!(
            "leading coefficient needs a real-symmetric spec (alpha = w = 1); {} is not",
            spec.tag()
        )));
    }
    let bits = ctx.bits() + 16;
    let work = PrecisionContext::with_guard(ctx.digits() + 5, ctx.guard_digits())?;
    let mut acc0 = Float::new(bits);
    let mut acc1 = Float::new(bits);
    let split = spec.blend_split.unwrap_or(spec.terms.len());
    for (idx, term) in spec.terms.iter().enumerate() {
        let a = term.a.eval_real(bits)?;
        let b = term.b.eval_real(bits)?;
        let u = term.u.eval_real(bits)?;
        let c = crate::special::tail_expansion_coefficients(&a, &b, 2, &work)?;
        let v = Float::with_val(bits, &c[0] * &u);
        if idx < split {
            acc0 += &v;
        } else {
            acc1 += &v;
        }
    }
    if let Some(t) = &spec.t {
        acc0 += acc1 * t.eval_real(bits)?;
    }
    Ok(Float::with_val(ctx.bits(), &acc0))
}

/// Coefficient of `1/x²` of the spec as a function of its own argument:
/// [`leading_real_axis_coefficient`] divided by `arg_scale²`.
pub fn leading_real_axis_coefficient_folded(spec: &FunctionSpec, ctx: &PrecisionContext) -> Result<Real> {
    let c = leading_real_axis_coefficient(spec, ctx)?;
    let s = spec.arg_scale.eval_real(ctx.bits())?;
    let s2 = Float::with_val(ctx.bits(), s.square_ref());
    Ok(c / s2)
}
