//! Ramanujan's τ, Dirichlet characters and Gauss sums.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{root_of_unity, Expr};
use crate::precision::{Complex, PrecisionContext};

/// `values[n-1] = τ(n)` for `1 <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauTable {
    pub values: Vec<i128>,
}

impl TauTable {
    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `τ(n)`, `n >= 1`.
    pub fn get(&self, n: usize) -> Option<i128> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "tau"])?;
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([(i + 1).to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut values = Vec::new();
        for (row, rec) in r.records().enumerate() {
            let rec = rec?;
            let n: usize = field(&rec, 0)?;
            let t: i128 = field(&rec, 1)?;
            if n != row + 1 {
                return Err(Error::Parse(format!("tau table row {} has n = {n}", row + 1)));
            }
            values.push(t);
        }
        Ok(Self { values })
    }
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad csv field {i} in {rec:?}")))
}

/// Coefficients of `q ∏_{m>=1} (1 − q^m)^24` through `q^{n_max}`.
///
/// With `P = ∏ (1 − q^m)^24 = Σ c_k q^k`, the logarithmic derivative gives
/// `k c_k = −24 Σ_{j=1}^{k} σ(j) c_{k−j}`, which is exact in integers.
pub fn ramanujan_tau(n_max: usize) -> Result<TauTable> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("tau table needs n_max >= 1".into()));
    }
    let len = n_max;
    let mut sigma = vec![0i128; len];
    for d in 1..len {
        for m in (d..len).step_by(d) {
            sigma[m] += d as i128;
        }
    }
    let overflow = || Error::Invariant("tau value exceeds i128".into());
    let mut c = vec![0i128; len];
    c[0] = 1;
    for k in 1..len {
        let mut acc = 0i128;
        for j in 1..=k {
            let term = sigma[j].checked_mul(c[k - j]).ok_or_else(overflow)?;
            acc = acc.checked_add(term).ok_or_else(overflow)?;
        }
        let num = acc.checked_mul(-24).ok_or_else(overflow)?;
        if num % k as i128 != 0 {
            return Err(Error::Invariant(format!("tau recursion left a remainder at q^{k}")));
        }
        c[k] = num / k as i128;
    }
    Ok(TauTable { values: c })
}

/// A Dirichlet character mod `q`: `χ(n) = exp(2πi · exponents[n mod q] / order)`,
/// or `0` where `exponents` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterSpec {
    pub q: u64,
    pub order: u64,
    pub exponents: Vec<Option<u64>>,
    /// `χ(−1)`
    pub parity: i8,
    pub primitive: bool,
    /// Position in the enumeration of all characters mod `q`.
    pub index: usize,
}

impl CharacterSpec {
    pub fn exponent(&self, n: i64) -> Option<u64> {
        self.exponents[n.rem_euclid(self.q as i64) as usize]
    }

    pub fn value(&self, n: i64, bits: u32) -> Complex {
        match self.exponent(n) {
            Some(k) => root_of_unity(k as i64, self.order as i64, bits),
            None => Complex::zero(bits),
        }
    }

    /// `χ(n)` as an exact expression (`root(k, order)`, or `1`, `-1`, `0`).
    pub fn value_expr(&self, n: i64) -> Expr {
        match self.exponent(n) {
            None => Expr::int(0),
            Some(0) => Expr::int(1),
            Some(k) if 2 * k == self.order => Expr::int(-1),
            Some(k) => {
                let g = gcd(k, self.order);
                Expr::root_of_unity((k / g) as i64, (self.order / g) as i64)
            }
        }
    }

    pub fn conj(&self) -> Self {
        let mut c = self.clone();
        for e in c.exponents.iter_mut().flatten() {
            *e = (self.order - *e) % self.order;
        }
        c
    }

    /// Values in `{0, ±1}` only.
    pub fn is_real(&self) -> bool {
        self.exponents.iter().flatten().all(|&k| (2 * k) % self.order == 0)
    }

    pub fn is_even(&self) -> bool {
        self.parity == 1
    }

    pub fn label(&self) -> String {
        format!("chi{}_{}", self.q, self.index)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// One cyclic factor of `(Z/qZ)^*`: discrete logs of every residue mod `q`
/// (`None` for non-units) with respect to a generator of order `order`.
struct CyclicFactor {
    order: u64,
    dlog: Vec<Option<u64>>,
}

fn cyclic_factors(q: u64) -> Vec<CyclicFactor> {
    let mut factors = Vec::new();
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        // logs mod p^e, later lifted to residues mod q
        let mut local: Vec<(u64, Vec<Option<u64>>)> = Vec::new();
        if p == 2 {
            if e == 2 {
                local.push((2, vec![None, Some(0), None, Some(1)]));
            } else if e >= 3 {
                // (Z/2^e)^* = <−1> × <5>
                let order5 = pe / 4;
                let mut sign = vec![None; pe as usize];
                let mut five = vec![None; pe as usize];
                let mut x = 1u64;
                for j in 0..order5 {
                    sign[x as usize] = Some(0);
                    five[x as usize] = Some(j);
                    let neg = (pe - x) as usize;
                    sign[neg] = Some(1);
                    five[neg] = Some(j);
                    x = x * 5 % pe;
                }
                local.push((2, sign));
                local.push((order5, five));
            }
        } else {
            let phi = pe / p * (p - 1);
            let g = primitive_root_prime_power(p, e);
            let mut table = vec![None; pe as usize];
            let mut x = 1u64;
            for j in 0..phi {
                table[x as usize] = Some(j);
                x = x * g % pe;
            }
            local.push((phi, table));
        }
        for (order, table) in local {
            let dlog = (0..q)
                .map(|n| if gcd(n, q) == 1 { table[(n % pe) as usize] } else { None })
                .collect();
            factors.push(CyclicFactor { order, dlog });
        }
    }
    factors
}

fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let primes: Vec<u64> = factorize(phi_p).into_iter().map(|(r, _)| r).collect();
    let mut g = 2;
    loop {
        if primes.iter().all(|&r| pow_mod(g, phi_p / r, p) != 1) {
            break;
        }
        g += 1;
    }
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    g
}

/// All `φ(q)` Dirichlet characters mod `q`.
pub fn dirichlet_characters(q: u64) -> Result<Vec<CharacterSpec>> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let factors = cyclic_factors(q);
    let order = factors.iter().fold(1, |acc, f| lcm(acc, f.order));
    let count: u64 = factors.iter().map(|f| f.order).product();
    let mut out = Vec::with_capacity(count as usize);
    for index in 0..count {
        // mixed-radix digits choose the exponent on each cyclic factor
        let mut rest = index;
        let mut choice = Vec::with_capacity(factors.len());
        for f in &factors {
            choice.push(rest % f.order);
            rest /= f.order;
        }
        let exponents: Vec<Option<u64>> = (0..q as usize)
            .map(|n| {
                if gcd(n as u64, q) != 1 {
                    return None;
                }
                let mut k = 0u64;
                for (f, c) in factors.iter().zip(&choice) {
                    let l = f.dlog[n].expect("unit has a log");
                    k = (k + c * l % f.order * (order / f.order)) % order;
                }
                Some(k)
            })
            .collect();
        let minus_one = exponents[(q - 1) as usize].unwrap_or(0);
        let parity = if minus_one == 0 { 1 } else { -1 };
        let mut chi = CharacterSpec {
            q,
            order,
            exponents,
            parity,
            primitive: false,
            index: index as usize,
        };
        chi.primitive = is_primitive(&chi);
        out.push(chi);
    }
    Ok(out)
}

/// No proper divisor `d = q/p` induces `χ`: some unit `n ≡ 1 (mod d)` has `χ(n) ≠ 1`.
fn is_primitive(chi: &CharacterSpec) -> bool {
    let q = chi.q;
    if q == 1 {
        return true;
    }
    factorize(q).into_iter().all(|(p, _)| {
        let d = q / p;
        (0..p).any(|k| {
            let n = 1 + k * d;
            matches!(chi.exponents[(n % q) as usize], Some(e) if e != 0)
        })
    })
}

/// The primitive characters mod `q` (empty when `q ≡ 2 mod 4`).
pub fn primitive_characters(q: u64) -> Result<Vec<CharacterSpec>> {
    if q < 3 {
        return Err(Error::InvalidArgument(format!("primitive character modulus must be >= 3, got {q}")));
    }
    Ok(dirichlet_characters(q)?.into_iter().filter(|c| c.primitive).collect())
}

fn require_primitive(chi: &CharacterSpec) -> Result<()> {
    if !chi.primitive || chi.q < 3 {
        return Err(Error::InvalidArgument(format!("character {} is not primitive", chi.label())));
    }
    Ok(())
}

/// `g(χ) = Σ_{n mod q} χ(n) e^{2πin/q}` as an exact sum of roots of unity.
pub fn gauss_sum_expr(chi: &CharacterSpec) -> Expr {
    let lq = chi.order * chi.q;
    let mut acc: Option<Expr> = None;
    for n in 1..chi.q {
        if let Some(k) = chi.exponents[n as usize] {
            // χ(n) e^{2πin/q} = root(k q + n order, order q)
            let num = (k * chi.q + n * chi.order) % lq;
            let g = gcd(num, lq);
            let term = Expr::root_of_unity((num / g) as i64, (lq / g) as i64);
            acc = Some(match acc {
                None => term,
                Some(e) => e.add(term),
            });
        }
    }
    acc.unwrap_or_else(|| Expr::int(0))
}

pub fn gauss_sum(chi: &CharacterSpec, ctx: &PrecisionContext) -> Result<Complex> {
    gauss_sum_expr(chi).eval(ctx.bits())
}

/// The modulus-one factor in front of the conjugate-character half of the
/// truncated series: `√q·w(χ) = g(χ)/√q` for even `χ`, `i√q·w(χ) = g(χ)/(i√q)` for odd.
pub fn functional_prefactor_expr(chi: &CharacterSpec) -> Result<Expr> {
    require_primitive(chi)?;
    let sqrt_q = Expr::call(crate::expr::Func::Sqrt, vec![Expr::int(chi.q as i64)]);
    let den = if chi.is_even() { sqrt_q } else { Expr::I.mul(sqrt_q) };
    Ok(gauss_sum_expr(chi).div(den))
}

/// `w(χ)`: `g(χ)/q` for even `χ`, `−g(χ)/q` for odd `χ`.
pub fn root_number_expr(chi: &CharacterSpec) -> Result<Expr> {
    require_primitive(chi)?;
    let w = gauss_sum_expr(chi).div(Expr::int(chi.q as i64));
    Ok(if chi.is_even() { w } else { w.neg() })
}

pub fn root_number(chi: &CharacterSpec, ctx: &PrecisionContext) -> Result<Complex> {
    root_number_expr(chi)?.eval(ctx.bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::near_equal;

    #[test]
    fn first_tau_values() {
        let t = ramanujan_tau(12).unwrap();
        let expect = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944];
        assert_eq!(t.values, expect.map(i128::from).to_vec());
        assert_eq!(t.get(6), Some(t.get(2).unwrap() * t.get(3).unwrap()));
        assert!(ramanujan_tau(0).is_err());
    }

    #[test]
    fn tau_csv_round_trip() {
        let t = ramanujan_tau(30).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = TauTable::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn character_counts() {
        let c3 = primitive_characters(3).unwrap();
        assert_eq!(c3.len(), 1);
        assert_eq!(c3[0].parity, -1);
        let c5 = primitive_characters(5).unwrap();
        assert_eq!(c5.len(), 3);
        assert_eq!(c5.iter().filter(|c| c.is_even() && c.is_real()).count(), 1);
        assert_eq!(c5.iter().filter(|c| !c.is_even() && c.order == 4 && !c.is_real()).count(), 2);
        assert!(primitive_characters(6).unwrap().is_empty());
        assert!(primitive_characters(2).is_err());
        // number of primitive characters mod q is multiplicative: 1,0,1,2,3,0,5,... ; q=8 → 2, q=16 → 4, q=9 → 4
        for (q, n) in [(4, 1), (7, 5), (8, 2), (9, 4), (12, 1), (15, 3), (16, 4), (24, 2)] {
            assert_eq!(primitive_characters(q).unwrap().len(), n, "q={q}");
        }
    }

    #[test]
    fn characters_are_multiplicative() {
        for q in [5u64, 8, 12, 15, 16, 21] {
            for chi in dirichlet_characters(q).unwrap() {
                for m in 1..q as i64 {
                    for n in 1..q as i64 {
                        let prod = match (chi.exponent(m), chi.exponent(n)) {
                            (Some(a), Some(b)) => Some((a + b) % chi.order),
                            _ => None,
                        };
                        assert_eq!(chi.exponent(m * n), prod, "q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_sums_of_small_real_characters() {
        let ctx = PrecisionContext::new(30).unwrap();
        let quad5 = primitive_characters(5).unwrap().into_iter().find(|c| c.is_real()).unwrap();
        let g = gauss_sum(&quad5, &ctx).unwrap();
        let sqrt5 = Complex::from_real(ctx.int(5).sqrt());
        assert!(near_equal(&g, &sqrt5, 1e-30));
        let chi3 = &primitive_characters(3).unwrap()[0];
        let g3 = gauss_sum(chi3, &ctx).unwrap();
        let i_sqrt3 = Complex::new(ctx.int(0), ctx.int(3).sqrt());
        assert!(near_equal(&g3, &i_sqrt3, 1e-30));
    }

    #[test]
    fn non_primitive_rejected() {
        let principal = &dirichlet_characters(5).unwrap()[0];
        assert!(!principal.primitive);
        assert!(root_number(principal, &PrecisionContext::new(20).unwrap()).is_err());
    }
}
