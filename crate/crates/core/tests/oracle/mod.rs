// Independent reference computations shared by the test targets.

use rug::Float;

use hgzeros::{Complex, Real};

/// `|x − y| ≤ 10^-places · max(|x|, |y|)`, relative in the larger modulus.
pub fn agree(x: &Complex, y: &Complex, places: f64) -> bool {
    let scale = x.log10_abs().max(y.log10_abs());
    let d = (x - y).log10_abs();
    d == f64::NEG_INFINITY || d <= scale - places
}

/// Independent Γ(s, a) by exp-sinh quadrature of `e^{-a} ∫_0^∞ e^{-u} (a+u)^{s-1} du`.
pub fn gamma_by_quadrature(s: &Complex, a: &Real, bits: u32) -> Complex {
    let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
    let s1 = s.add_real(&Float::with_val(bits, -1));
    let node = |x: &Real| -> Complex {
        let (sh, ch) = Float::with_val(bits, x).sinh_cosh(Float::new(bits));
        let u = Float::with_val(bits, &half_pi * &sh).exp();
        let jac = Float::with_val(bits, &half_pi * &ch) * &u;
        let ln = Float::with_val(bits, a + &u).ln();
        let e = s1.scale(&ln).add_real(&Float::with_val(bits, -&u)).exp();
        e.scale(&jac)
    };
    let mut prev: Option<Complex> = None;
    let mut h = 0.5f64;
    loop {
        let n = (5.0 / h) as i64;
        let mut acc = Complex::zero(bits);
        for k in -n..=n {
            let x = Float::with_val(bits, k as f64 * h);
            acc.add_assign_ref(&node(&x));
        }
        let est = acc.scale(&Float::with_val(bits, h));
        if let Some(p) = &prev {
            if agree(p, &est, 30.0) || h < 1.0 / 512.0 {
                return est.scale(&Float::with_val(bits, -a).exp());
            }
        }
        prev = Some(est);
        h /= 2.0;
    }
}
