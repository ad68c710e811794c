//! Exact symbolic parameters.
//!
//! Function-family parameters such as `4*pi^2`, `9/4` or a 25-digit root
//! number are stored as small expression trees so that a spec document can
//! be re-evaluated at any working precision and serialized without loss.
//! The printed form is canonical: `Expr::parse(&e.to_string()) == e`.

use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::precision::{Complex, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Conj,
    /// `root(k, m) = exp(2 pi i k / m)`
    Root,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Conj => "conj",
            Func::Root => "root",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "conj" => Func::Conj,
            "root" => Func::Root,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            Func::Root => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// Unsigned decimal literal, kept verbatim.
    Num(String),
    Pi,
    I,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    pub fn int(n: i64) -> Expr {
        let lit = Expr::Num(n.unsigned_abs().to_string());
        if n < 0 {
            Expr::Neg(Box::new(lit))
        } else {
            lit
        }
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        if den == 1 {
            Expr::int(num)
        } else {
            Expr::int(num).div(Expr::int(den))
        }
    }

    /// A decimal literal; a leading minus becomes a negation node.
    pub fn decimal(text: &str) -> Result<Expr> {
        let t = text.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let e = Expr::parse(body)?;
        if !matches!(e, Expr::Num(_)) {
            return Err(Error::Parse(format!("{text:?} is not a decimal literal")));
        }
        Ok(if neg { Expr::Neg(Box::new(e)) } else { e })
    }

    /// `re + im*i` from two decimal literals.
    pub fn complex_decimal(re: &str, im: &str) -> Result<Expr> {
        let re = Expr::decimal(re)?;
        let im = Expr::decimal(im)?;
        Ok(match im {
            Expr::Neg(inner) => re.sub(inner.mul(Expr::I)),
            other => re.add(other.mul(Expr::I)),
        })
    }

    pub fn root_of_unity(k: i64, m: i64) -> Expr {
        Expr::Call(Func::Root, vec![Expr::int(k), Expr::int(m)])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    pub fn pow(self, rhs: Expr) -> Expr {
        Expr::Pow(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn call(f: Func, args: Vec<Expr>) -> Expr {
        Expr::Call(f, args)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Num(s) if s == "1")
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(s) if s.bytes().all(|c| c == b'0' || c == b'.'))
    }

    /// `self * rhs`, dropping a factor of exactly `1`.
    pub fn times(self, rhs: Expr) -> Expr {
        if self.is_one() {
            rhs
        } else if rhs.is_one() {
            self
        } else {
            self.mul(rhs)
        }
    }

    /// Evaluates at `bits` of binary precision.
    pub fn eval(&self, bits: u32) -> Result<Complex> {
        // a few extra bits absorb rounding across the tree
        let work = bits + 16;
        let v = self.eval_at(work)?;
        if !v.is_finite() {
            return Err(Error::NonFinite("parameter expression"));
        }
        Ok(v.with_prec(bits))
    }

    /// Evaluates and requires a real result.
    pub fn eval_real(&self, bits: u32) -> Result<Real> {
        let v = self.eval(bits + 16)?;
        if !v.im.is_zero() {
            // purely real expressions produce exact zero imaginary parts,
            // but allow rounding noise from e.g. root(1,2)
            let rel = v.im.to_f64().abs() / v.re.to_f64().abs().max(1e-300);
            if !(v.im.to_f64().abs() < 1e-300 || rel < 2f64.powi(-(bits as i32))) {
                return Err(Error::InvalidArgument(format!("expression {self} is not real")));
            }
        }
        Ok(Float::with_val(bits, &v.re))
    }

    fn eval_at(&self, bits: u32) -> Result<Complex> {
        Ok(match self {
            Expr::Num(text) => Complex::from_real(crate::precision::parse_real(bits, text)?),
            Expr::Pi => Complex::from_real(Float::with_val(bits, Constant::Pi)),
            Expr::I => Complex::i(bits),
            Expr::Neg(e) => -&e.eval_at(bits)?,
            Expr::Add(l, r) => &l.eval_at(bits)? + &r.eval_at(bits)?,
            Expr::Sub(l, r) => &l.eval_at(bits)? - &r.eval_at(bits)?,
            Expr::Mul(l, r) => &l.eval_at(bits)? * &r.eval_at(bits)?,
            Expr::Div(l, r) => {
                let d = r.eval_at(bits)?;
                if d.is_zero() {
                    return Err(Error::InvalidArgument(format!("division by zero in {self}")));
                }
                &l.eval_at(bits)? / &d
            }
            Expr::Pow(l, r) => {
                let base = l.eval_at(bits)?;
                match small_integer(r) {
                    Some(n) => {
                        if n < 0 && base.is_zero() {
                            return Err(Error::InvalidArgument(format!("0 to a negative power in {self}")));
                        }
                        base.powi(n)
                    }
                    None => {
                        if base.is_zero() {
                            return Err(Error::InvalidArgument(format!("0 to a non-integer power in {self}")));
                        }
                        let e = r.eval_at(bits)?;
                        (&e * &base.ln()).exp()
                    }
                }
            }
            Expr::Call(f, args) => {
                let x = args[0].eval_at(bits)?;
                match f {
                    Func::Sqrt => x.sqrt(),
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x.is_zero() {
                            return Err(Error::InvalidArgument("ln(0)".into()));
                        }
                        x.ln()
                    }
                    Func::Sin => x.sin(),
                    Func::Cos => {
                        let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
                        // cos z = sin(z + pi/2)
                        x.add_real(&half_pi).sin()
                    }
                    Func::Conj => x.conj(),
                    Func::Root => {
                        let (k, m) = match (small_integer(&args[0]), small_integer(&args[1])) {
                            (Some(k), Some(m)) if m > 0 => (k as i64, m as i64),
                            _ => {
                                return Err(Error::InvalidArgument(format!(
                                    "root() needs integer arguments with m > 0 in {self}"
                                )))
                            }
                        };
                        root_of_unity(k, m, bits)
                    }
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// `exp(2 pi i k/m)` with exact values on the axes.
pub fn root_of_unity(k: i64, m: i64, bits: u32) -> Complex {
    let k = k.rem_euclid(m);
    if (4 * k) % m == 0 {
        let (re, im) = match 4 * k / m {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        return Complex::from_f64(bits, re, im);
    }
    let mut theta = Float::with_val(bits, Constant::Pi);
    theta *= 2 * k;
    theta /= m;
    let (s, c) = crate::precision::sin_cos(&theta, bits);
    Complex::new(c, s)
}

fn small_integer(e: &Expr) -> Option<i32> {
    match e {
        Expr::Num(s) if s.bytes().all(|c| c.is_ascii_digit()) && s.len() <= 9 => s.parse().ok(),
        Expr::Neg(inner) => small_integer(inner).map(|n| -n),
        _ => None,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(s) => f.write_str(s),
            Expr::Pi => f.write_str("pi"),
            Expr::I => f.write_str("i"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.precedence() < 3)
            }
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) => {
                let (p, op) = match self {
                    Expr::Add(..) => (1, " + "),
                    Expr::Sub(..) => (1, " - "),
                    Expr::Mul(..) => (2, "*"),
                    _ => (2, "/"),
                };
                wrap(f, l, l.precedence() < p)?;
                f.write_str(op)?;
                wrap(f, r, r.precedence() <= p)
            }
            Expr::Pow(l, r) => {
                wrap(f, l, l.precedence() <= 4)?;
                f.write_str("^")?;
                wrap(f, r, r.precedence() < 4)
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Expr::parse(&text).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = lhs.add(self.term()?);
            } else if self.eat(b'-') {
                lhs = lhs.sub(self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = lhs.mul(self.unary()?);
            } else if self.eat(b'/') {
                lhs = lhs.div(self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            return Ok(base.pow(self.unary()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "pi" => Ok(Expr::Pi),
                    "i" | "I" => Ok(Expr::I),
                    _ => {
                        let func = Func::from_name(name)
                            .ok_or_else(|| self.error(&format!("unknown identifier {name:?}")))?;
                        if !self.eat(b'(') {
                            return Err(self.error("expected '(' after function name"));
                        }
                        let mut args = vec![self.expr()?];
                        while self.eat(b',') {
                            args.push(self.expr()?);
                        }
                        if !self.eat(b')') {
                            return Err(self.error("expected ')'"));
                        }
                        if args.len() != func.arity() {
                            return Err(self.error(&format!("{name} takes {} argument(s)", func.arity())));
                        }
                        Ok(Expr::Call(func, args))
                    }
                }
            }
            _ => Err(self.error("expected a number, identifier or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(self.error("malformed number"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // not an exponent after all
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(Expr::Num(text.to_string()))
    }
}
