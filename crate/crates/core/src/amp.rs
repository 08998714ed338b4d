//! Exact amplitudes in the field Q(i, √2).
//!
//! An [`Amp`] is `c1 + ci·i + cr·√2 + cir·i·√2` with rational coefficients.
//! Every amplitude produced by beamsplitter factors of 1/√2 and phases of
//! ±1, ±i lives in this field, so probabilities come out exact.
//!
//! Text form (shared with the scenario file format) is a parenthesised sum
//! of terms, each a product of an integer, `i` and `r2` (√2) factors with
//! optional `/n` or `/r2` divisors: `(-3/4)`, `(i/r2)`, `(r2*i/2)`,
//! `(1/2+i/2)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::rat::Rat;

/// Rational complex number, the building block of the two-level tower.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
struct Cq {
    re: Rat,
    im: Rat,
}

impl Cq {
    fn add(&self, o: &Cq) -> Cq {
        Cq {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn mul(&self, o: &Cq) -> Cq {
        Cq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, k: &Rat) -> Cq {
        Cq {
            re: &self.re * k,
            im: &self.im * k,
        }
    }
}

/// Exact element of Q(i, √2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Amp {
    pub c1: Rat,
    pub ci: Rat,
    pub cr: Rat,
    pub cir: Rat,
}

/// Element of the real subfield Q(√2): `c1 + cr·√2`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct RealQ2 {
    pub c1: Rat,
    pub cr: Rat,
}

impl Amp {
    pub fn new(c1: Rat, ci: Rat, cr: Rat, cir: Rat) -> Self {
        Amp { c1, ci, cr, cir }
    }

    pub fn zero() -> Self {
        Amp::default()
    }

    pub fn one() -> Self {
        Amp::rational(Rat::one())
    }

    pub fn i() -> Self {
        Amp {
            ci: Rat::one(),
            ..Amp::default()
        }
    }

    pub fn sqrt2() -> Self {
        Amp {
            cr: Rat::one(),
            ..Amp::default()
        }
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Amp {
            cr: Rat::new(1, 2),
            ..Amp::default()
        }
    }

    pub fn rational(r: Rat) -> Self {
        Amp {
            c1: r,
            ..Amp::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.ci.is_zero() && self.cr.is_zero() && self.cir.is_zero()
    }

    // x = p + q·√2 with p, q Gaussian rationals.
    fn split(&self) -> (Cq, Cq) {
        (
            Cq {
                re: self.c1.clone(),
                im: self.ci.clone(),
            },
            Cq {
                re: self.cr.clone(),
                im: self.cir.clone(),
            },
        )
    }

    fn join(p: Cq, q: Cq) -> Self {
        Amp {
            c1: p.re,
            ci: p.im,
            cr: q.re,
            cir: q.im,
        }
    }

    pub fn conj(&self) -> Self {
        Amp {
            c1: self.c1.clone(),
            ci: -&self.ci,
            cr: self.cr.clone(),
            cir: -&self.cir,
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Amp {
            c1: &self.c1 * k,
            ci: &self.ci * k,
            cr: &self.cr * k,
            cir: &self.cir * k,
        }
    }

    /// `x · conj(x)`.
    pub fn sqmod(&self) -> RealQ2 {
        let (p, q) = self.split();
        let pp = &p.re * &p.re + &p.im * &p.im;
        let qq = &q.re * &q.re + &q.im * &q.im;
        // p·conj(q) + q·conj(p) = 2·Re(p·conj(q))
        let cross = (&p.re * &q.re + &p.im * &q.im) * Rat::int(2);
        RealQ2 {
            c1: pp + qq * Rat::int(2),
            cr: cross,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x · conj(x) = n1 + n2·√2, then multiply by (n1 - n2·√2).
        let RealQ2 { c1: n1, cr: n2 } = self.sqmod();
        let norm = &n1 * &n1 - &n2 * &n2 * Rat::int(2);
        let scale = norm.recip()?;
        let rationalizer = Amp {
            c1: n1,
            cr: -n2,
            ..Amp::default()
        };
        Some((self.conj() * rationalizer).scale(&scale))
    }

    pub fn checked_div(&self, rhs: &Amp) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    /// `(re, im)` as floats.
    pub fn to_f64_parts(&self) -> (f64, f64) {
        let s = std::f64::consts::SQRT_2;
        (
            self.c1.to_f64() + self.cr.to_f64() * s,
            self.ci.to_f64() + self.cir.to_f64() * s,
        )
    }

    /// Unit-modulus check, exact.
    pub fn is_unit(&self) -> bool {
        let m = self.sqmod();
        m.cr.is_zero() && m.c1.is_one()
    }
}

impl RealQ2 {
    pub fn zero() -> Self {
        RealQ2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.cr.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.c1.to_f64() + self.cr.to_f64() * std::f64::consts::SQRT_2
    }

    /// The rational value, or `IrrationalProbability` if the √2 part survives.
    pub fn as_rat(&self) -> Result<Rat, crate::Error> {
        if self.cr.is_zero() {
            Ok(self.c1.clone())
        } else {
            Err(crate::Error::IrrationalProbability(self.to_string()))
        }
    }

    pub fn to_amp(&self) -> Amp {
        Amp {
            c1: self.c1.clone(),
            cr: self.cr.clone(),
            ..Amp::default()
        }
    }
}

impl Add<&RealQ2> for &RealQ2 {
    type Output = RealQ2;
    fn add(self, rhs: &RealQ2) -> RealQ2 {
        RealQ2 {
            c1: &self.c1 + &rhs.c1,
            cr: &self.cr + &rhs.cr,
        }
    }
}

impl Add for RealQ2 {
    type Output = RealQ2;
    fn add(self, rhs: RealQ2) -> RealQ2 {
        &self + &rhs
    }
}

impl std::iter::Sum for RealQ2 {
    fn sum<I: Iterator<Item = RealQ2>>(iter: I) -> RealQ2 {
        iter.fold(RealQ2::zero(), |a, b| a + b)
    }
}

impl fmt::Display for RealQ2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_amp(), f)
    }
}

impl Add<&Amp> for &Amp {
    type Output = Amp;
    fn add(self, rhs: &Amp) -> Amp {
        Amp {
            c1: &self.c1 + &rhs.c1,
            ci: &self.ci + &rhs.ci,
            cr: &self.cr + &rhs.cr,
            cir: &self.cir + &rhs.cir,
        }
    }
}

impl Sub<&Amp> for &Amp {
    type Output = Amp;
    fn sub(self, rhs: &Amp) -> Amp {
        self + &(-rhs)
    }
}

impl Mul<&Amp> for &Amp {
    type Output = Amp;
    fn mul(self, rhs: &Amp) -> Amp {
        let (p1, q1) = self.split();
        let (p2, q2) = rhs.split();
        // (p1 + q1√2)(p2 + q2√2) = p1p2 + 2q1q2 + (p1q2 + q1p2)√2
        let p = p1.mul(&p2).add(&q1.mul(&q2).scale(&Rat::int(2)));
        let q = p1.mul(&q2).add(&q1.mul(&p2));
        Amp::join(p, q)
    }
}

impl Neg for &Amp {
    type Output = Amp;
    fn neg(self) -> Amp {
        self.scale(&Rat::int(-1))
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for Amp {
            type Output = Amp;
            fn $method(self, rhs: Amp) -> Amp {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Amp> for Amp {
            type Output = Amp;
            fn $method(self, rhs: &Amp) -> Amp {
                (&self).$method(rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Amp {
    type Output = Amp;
    fn neg(self) -> Amp {
        -&self
    }
}

impl std::iter::Sum for Amp {
    fn sum<I: Iterator<Item = Amp>>(iter: I) -> Amp {
        iter.fold(Amp::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for Amp {
    fn product<I: Iterator<Item = Amp>>(iter: I) -> Amp {
        iter.fold(Amp::one(), |a, b| a * b)
    }
}

impl fmt::Display for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (&self.c1, ""),
            (&self.ci, "i"),
            (&self.cr, "r2"),
            (&self.cir, "r2*i"),
        ];
        let mut out = String::new();
        for (coef, basis) in parts {
            if coef.is_zero() {
                continue;
            }
            if coef.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let num = coef.numer().magnitude().to_string();
            let den = coef.denom();
            match (basis.is_empty(), num == "1") {
                (true, _) => out.push_str(&num),
                (false, true) => out.push_str(basis),
                (false, false) => {
                    out.push_str(&num);
                    out.push('*');
                    out.push_str(basis);
                }
            }
            if !coef.is_integer() {
                out.push('/');
                out.push_str(&den.to_string());
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "({out})")
    }
}

impl fmt::Debug for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error from the amplitude grammar: byte offset into the input plus message.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at offset {offset}: {message}")]
pub struct AmpSyntaxError {
    pub offset: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, message: impl Into<String>) -> AmpSyntaxError {
        AmpSyntaxError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn uint(&mut self) -> Option<i64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    // integer | i | r2
    fn factor(&mut self) -> Result<Amp, AmpSyntaxError> {
        self.skip_ws();
        if let Some(n) = self.uint() {
            return Ok(Amp::rational(Rat::int(n)));
        }
        if self.src[self.pos..].starts_with(b"r2") {
            self.pos += 2;
            return Ok(Amp::sqrt2());
        }
        if self.peek() == Some(b'i') {
            self.pos += 1;
            return Ok(Amp::i());
        }
        Err(self.err("expected integer, `i` or `r2`"))
    }

    // integer | r2
    fn divisor(&mut self) -> Result<Amp, AmpSyntaxError> {
        self.skip_ws();
        let start = self.pos;
        if let Some(n) = self.uint() {
            if n == 0 {
                return Err(AmpSyntaxError {
                    offset: start,
                    message: "division by zero".into(),
                });
            }
            return Ok(Amp::rational(Rat::new(1, n)));
        }
        if self.src[self.pos..].starts_with(b"r2") {
            self.pos += 2;
            return Ok(Amp::inv_sqrt2());
        }
        Err(self.err("expected integer or `r2` after `/`"))
    }

    fn term(&mut self) -> Result<Amp, AmpSyntaxError> {
        let mut v = self.factor()?;
        loop {
            if self.eat(b'*') {
                v = v * self.factor()?;
            } else if self.eat(b'/') {
                v = v * self.divisor()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn sum(&mut self) -> Result<Amp, AmpSyntaxError> {
        let mut negate = self.eat(b'-');
        if !negate {
            self.eat(b'+');
        }
        let mut acc = Amp::zero();
        loop {
            let t = self.term()?;
            acc = if negate { acc - t } else { acc + t };
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Parses a parenthesised amplitude starting at byte `start` of `src`.
/// Returns the value and the offset just past the closing parenthesis.
pub fn parse_amp_at(src: &str, start: usize) -> Result<(Amp, usize), AmpSyntaxError> {
    let mut c = Cursor {
        src: src.as_bytes(),
        pos: start,
    };
    if !c.eat(b'(') {
        return Err(c.err("expected `(`"));
    }
    let v = c.sum()?;
    if !c.eat(b')') {
        return Err(c.err("expected `)`"));
    }
    Ok((v, c.pos))
}

impl FromStr for Amp {
    type Err = AmpSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (v, end) = parse_amp_at(s, 0)?;
        if !s[end..].trim().is_empty() {
            return Err(AmpSyntaxError {
                offset: end,
                message: "trailing input".into(),
            });
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(s: &str) -> Amp {
        s.parse().unwrap()
    }

    #[test]
    fn products() {
        let x = Amp::i() * Amp::inv_sqrt2();
        assert_eq!(&x * &x, Amp::rational(Rat::new(-1, 2)));
        let y = amp("(r2*i/2)");
        assert_eq!(y, x);
        assert_eq!(&y * &y, amp("(-1/2)"));
        assert_eq!(Amp::one() * y.clone(), y);
    }

    #[test]
    fn sqmod_values() {
        assert_eq!(
            amp("(i/r2)").sqmod(),
            RealQ2 {
                c1: Rat::new(1, 2),
                cr: Rat::zero()
            }
        );
        assert!(Amp::zero().sqmod().is_zero());
        // ((1+√2)/2)^2 = (3 + 2√2)/4
        let x = amp("(1/2+r2/2)");
        assert_eq!(
            x.sqmod(),
            RealQ2 {
                c1: Rat::new(3, 4),
                cr: Rat::new(1, 2)
            }
        );
    }

    #[test]
    fn as_rat_rejects_surds() {
        let p = RealQ2 {
            c1: Rat::new(9, 16),
            cr: Rat::zero(),
        };
        assert_eq!(p.as_rat().unwrap(), Rat::new(9, 16));
        assert_eq!(RealQ2::zero().as_rat().unwrap(), Rat::zero());
        let bad = RealQ2 {
            c1: Rat::new(1, 2),
            cr: Rat::new(1, 3),
        };
        assert!(matches!(
            bad.as_rat(),
            Err(crate::Error::IrrationalProbability(_))
        ));
    }

    #[test]
    fn render_canonical() {
        assert_eq!(amp("(-3/4)").to_string(), "(-3/4)");
        assert_eq!(amp("(i/2)").to_string(), "(i/2)");
        assert_eq!(amp("(i/r2)").to_string(), "(r2*i/2)");
        assert_eq!(amp("(-1/r2)").to_string(), "(-r2/2)");
        assert_eq!(amp("(1)").to_string(), "(1)");
        assert_eq!(Amp::zero().to_string(), "(0)");
        assert_eq!(amp("(1 + 3*i/2 - 2*r2)").to_string(), "(1+3*i/2-2*r2)");
    }

    #[test]
    fn parse_errors() {
        assert!("1/2".parse::<Amp>().is_err());
        assert!("(1/0)".parse::<Amp>().is_err());
        assert!("(x)".parse::<Amp>().is_err());
        assert!("(1".parse::<Amp>().is_err());
        assert!("(1) junk".parse::<Amp>().is_err());
    }

    #[test]
    fn inverse() {
        let x = amp("(1/2+i/3-r2+5*r2*i/7)");
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, Amp::one());
        assert!(Amp::zero().inv().is_none());
    }
}
