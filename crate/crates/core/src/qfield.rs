//! Exact arithmetic in the rational function field Q(q).
//!
//! Elements are kept as reduced fractions of integer polynomials. Laurent
//! inputs such as `q - q^-1` are cleared to a plain fraction with a power of
//! `q` in the denominator, so there is a single canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::QgrError;

/// Dense univariate polynomial with integer coefficients, lowest degree first.
/// The coefficient vector never ends in a zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c * q^e`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = c;
        Poly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True when the polynomial has exactly one nonzero term.
    pub fn is_monomial(&self) -> bool {
        match self.order() {
            Some(o) => o + 1 == self.coeffs.len(),
            None => false,
        }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Poly {
        if c.is_one() {
            return self.clone();
        }
        Poly { coeffs: self.coeffs.iter().map(|x| x / c).collect() }
    }

    /// Drop `q^e` from a polynomial divisible by it.
    fn shift_down(&self, e: usize) -> Poly {
        Poly { coeffs: self.coeffs[e..].to_vec() }
    }

    fn shift_up(&self, e: usize) -> Poly {
        if self.is_zero() || e == 0 {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); e];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    /// Pseudo-remainder of `self` by `d`; some power of lc(d) times `self`, reduced modulo `d`.
    fn pseudo_rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let g = lr.gcd(&lc);
            let a = &lc / &g;
            let b = &lr / &g;
            let shift = rd - dd;
            let mut next = r.scale(&a);
            for (i, c) in d.coeffs.iter().enumerate() {
                next.coeffs[i + shift] -= c * &b;
            }
            r = Poly::from_coeffs(next.coeffs);
            let c = r.content();
            if !c.is_zero() && !c.is_one() {
                r = r.div_scalar_exact(&c);
            }
        }
        r
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let oa = self.order().unwrap();
        let ob = other.order().unwrap();
        let shift = oa.min(ob);
        let mut a = self.shift_down(oa).primitive_part();
        let mut b = other.shift_down(ob).primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                a = Poly::one();
                break;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().shift_up(shift)
    }

    /// Exact quotient; panics if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        if dd == 0 {
            return self.div_scalar_exact(&d.coeffs[0]);
        }
        let Some(n) = self.degree() else { return Poly::zero() };
        assert!(n >= dd, "inexact polynomial division");
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(lc);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (i, x) in d.coeffs.iter().enumerate() {
                r[k + i] -= x * &c;
            }
            q[k] = c;
        }
        assert!(r.iter().all(|x| x.is_zero()), "inexact polynomial division");
        Poly::from_coeffs(q)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Value at an integer point, used by the probe routines.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn fmt_descending(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{a}*q^{e}")?,
            }
        }
        Ok(())
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut v = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            v[i] += c;
        }
        Poly::from_coeffs(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(v)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_descending(f)
    }
}

/// An element of Q(q) in canonical form: numerator and denominator coprime,
/// joint integer content 1, denominator with positive leading coefficient.
/// Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc { num: Poly::constant(BigInt::from(n)), den: Poly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        RatFunc::normalize(Poly::constant(n.into()), Poly::constant(d.into())).expect("zero denominator")
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        RatFunc::q_pow(1)
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        if e >= 0 {
            RatFunc { num: Poly::monomial(BigInt::one(), e as usize), den: Poly::one() }
        } else {
            RatFunc { num: Poly::one(), den: Poly::monomial(BigInt::one(), (-e) as usize) }
        }
    }

    /// `q - q^{-1}`.
    pub fn qhat() -> Self {
        RatFunc { num: Poly::from_i64(&[-1, 0, 1]), den: Poly::from_i64(&[0, 1]) }
    }

    /// Laurent polynomial `sum c_i q^{low + i}`.
    pub fn laurent(low: i64, coeffs: &[i64]) -> Self {
        let p = Poly::from_i64(coeffs);
        let shift = RatFunc::q_pow(low);
        &RatFunc::from_poly(p) * &shift
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Bring `num/den` into canonical form.
    pub fn normalize(num: Poly, den: Poly) -> Result<Self, QgrError> {
        if den.is_zero() {
            return Err(QgrError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let (mut num, mut den) = (num, den);
        if den.is_monomial() || num.is_monomial() {
            let e = num.order().unwrap().min(den.order().unwrap());
            if e > 0 {
                num = num.shift_down(e);
                den = den.shift_down(e);
            }
        } else {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let mut c = num.content().gcd(&den.content());
        if den.leading().unwrap().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        Ok(RatFunc { num, den })
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is a power of `q` (a Laurent polynomial).
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial() && self.den.leading().unwrap().is_one()
    }

    pub fn inv(&self) -> Result<Self, QgrError> {
        if self.is_zero() {
            return Err(QgrError::DivisionByZero);
        }
        RatFunc::normalize(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn evaluate_at(&self, q0: &BigRational) -> Result<BigRational, QgrError> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(QgrError::Pole(q0.to_string()));
        }
        Ok(self.num.eval(q0) / d)
    }

    /// Multiply numerator and denominator by a common factor so the result has
    /// denominator `den` (which must be a multiple of the current one).
    pub fn numerator_over(&self, den: &Poly) -> Poly {
        let f = den.div_exact(&self.den);
        &self.num * &f
    }

    fn add_ref(&self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        if self.den.is_monomial() && rhs.den.is_monomial() {
            // both Laurent-type: bring to the larger power of q
            let (ea, eb) = (self.den.order().unwrap(), rhs.den.order().unwrap());
            let (ca, cb) = (self.den.leading().unwrap(), rhs.den.leading().unwrap());
            let l = ca.lcm(cb);
            let e = ea.max(eb);
            let na = self.num.scale(&(&l / ca)).shift_up(e - ea);
            let nb = rhs.num.scale(&(&l / cb)).shift_up(e - eb);
            return RatFunc::normalize(&na + &nb, Poly::monomial(l, e)).unwrap();
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::normalize(n, &self.den * &rhs.den).unwrap()
    }

    fn mul_ref(&self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { num: &self.num * &rhs.num, den: Poly::one() }.fix_sign_content();
        }
        // cross-cancel before multiplying to keep sizes down
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (a, d) = if g1.is_one() { (self.num.clone(), rhs.den.clone()) } else { (self.num.div_exact(&g1), rhs.den.div_exact(&g1)) };
        let (c, b) = if g2.is_one() { (rhs.num.clone(), self.den.clone()) } else { (rhs.num.div_exact(&g2), self.den.div_exact(&g2)) };
        RatFunc { num: &a * &c, den: &b * &d }.fix_sign_content()
    }

    fn fix_sign_content(self) -> RatFunc {
        let RatFunc { mut num, mut den } = self;
        if num.is_zero() {
            return RatFunc::zero();
        }
        let mut c = num.content().gcd(&den.content());
        if den.leading().unwrap().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        RatFunc { num, den }
    }

    /// A size measure used to pick sparse pivots.
    pub fn weight(&self) -> usize {
        self.num.term_count() + self.den.term_count()
    }

    /// Canonical text, e.g. `(q^2-1)/q`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap_num = self.num.term_count() > 1 && !self.den.is_one();
        if wrap_num {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if !self.den.is_one() {
            let simple = self.den.term_count() == 1 && (self.den.leading().unwrap().is_one() || self.den.degree() == Some(0));
            if simple {
                write!(f, "/{}", self.den)?;
            } else {
                write!(f, "/({})", self.den)?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                self.$inner(rhs)
            }
        }
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$inner(rhs)
            }
        }
    };
}

impl RatFunc {
    fn sub_ref(&self, rhs: &RatFunc) -> RatFunc {
        self.add_ref(&-rhs)
    }
    fn div_ref(&self, rhs: &RatFunc) -> RatFunc {
        self.mul_ref(&rhs.inv().expect("division by zero in Q(q)"))
    }
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, rhs: &RatFunc) {
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&RatFunc> for RatFunc {
    fn sub_assign(&mut self, rhs: &RatFunc) {
        *self = self.sub_ref(rhs);
    }
}

impl MulAssign<&RatFunc> for RatFunc {
    fn mul_assign(&mut self, rhs: &RatFunc) {
        *self = self.mul_ref(rhs);
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but fixed total order on canonical forms; only used for
/// deterministic sorting, not as a field order.
impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |p: &Poly| (p.coeffs.len(), p.coeffs.clone());
        key(&self.den).cmp(&key(&other.den)).then_with(|| key(&self.num).cmp(&key(&other.num)))
    }
}

impl serde::Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Parsing: a small expression grammar over Q(q).
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/')? factor)*      (juxtaposition multiplies)
//   factor := ('-'|'+') factor | atom ('^' int)?
//   atom   := integer | 'q' | '(' expr ')'

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> QgrError {
        QgrError::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn expr(&mut self) -> Result<RatFunc, QgrError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, QgrError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = &acc * &d.inv()?;
                }
                Some(c) if c == b'q' || c == b'(' || c.is_ascii_digit() => {
                    acc = &acc * &self.factor()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFunc, QgrError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.int_exponent()?;
                    if e < 0 && base.is_zero() {
                        return Err(QgrError::DivisionByZero);
                    }
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn int_exponent(&mut self) -> Result<i64, QgrError> {
        let mut neg = false;
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        if self.peek() == Some(b'-') {
            neg = true;
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected exponent"));
        }
        let v: i64 = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("exponent too large"))?;
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<RatFunc, QgrError> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(RatFunc::q())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap();
                Ok(RatFunc::from_poly(Poly::constant(n)))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

impl FromStr for RatFunc {
    type Err = QgrError;
    fn from_str(s: &str) -> Result<Self, QgrError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

/// Shorthand for parsing in tests and tables.
pub fn rf(s: &str) -> RatFunc {
    s.parse().unwrap_or_else(|e| panic!("bad ratfunc literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn normalize_cancels_common_factor() {
        let r = RatFunc::normalize(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(r, RatFunc::from_poly(p(&[1, 1])));
    }

    #[test]
    fn normalize_zero_is_unique() {
        let r = RatFunc::normalize(Poly::zero(), p(&[0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(r.numer(), &Poly::zero());
        assert_eq!(r.denom(), &Poly::one());
    }

    #[test]
    fn qhat_canonical_form() {
        let r = RatFunc::normalize(p(&[-1, 0, 1]), p(&[0, 1])).unwrap();
        assert_eq!(r, RatFunc::qhat());
        assert_eq!(r.to_string(), "(q^2-1)/q");
        assert_eq!(&RatFunc::q() - &RatFunc::q_pow(-1), r);
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(RatFunc::normalize(p(&[1]), Poly::zero()), Err(QgrError::DivisionByZero));
        assert!(RatFunc::zero().inv().is_err());
    }

    #[test]
    fn field_operations() {
        assert_eq!(&RatFunc::qhat() + &RatFunc::q_pow(-1), RatFunc::q());
        assert_eq!(&rf("q+1") * &rf("q-1"), rf("q^2-1"));
        assert_eq!(RatFunc::qhat().inv().unwrap(), rf("q/(q^2-1)"));
    }

    #[test]
    fn sign_and_content_normalization() {
        let r = RatFunc::normalize(p(&[2, 4]), p(&[-6, 0, -2])).unwrap();
        assert_eq!(r.denom(), &p(&[3, 0, 1]));
        assert_eq!(r.numer(), &p(&[-1, -2]));
        let half = RatFunc::from_ratio(3, 6);
        assert_eq!(half.to_string(), "1/2");
    }

    #[test]
    fn evaluation() {
        let two = BigRational::from_integer(2.into());
        assert_eq!(rf("q+1").evaluate_at(&two).unwrap(), BigRational::from_integer(3.into()));
        let three = BigRational::from_integer(3.into());
        assert_eq!(RatFunc::qhat().evaluate_at(&three).unwrap(), BigRational::new(8.into(), 3.into()));
        let one = BigRational::one();
        assert!(matches!(rf("1/(q-1)").evaluate_at(&one), Err(QgrError::Pole(_))));
    }

    #[test]
    fn gcd_of_products() {
        let a = &p(&[1, 1]) * &p(&[2, 0, 3]);
        let b = &p(&[1, 1]) * &p(&[-5, 7]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        let c = &p(&[0, 0, 2]) * &p(&[1, 0, 1]);
        let d = &p(&[0, 4]) * &p(&[1, 0, 1]);
        assert_eq!(c.gcd(&d), p(&[0, 1, 0, 1]));
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "1", "-1/q", "(q^2-1)/q", "q^3-2*q+7", "(2*q+1)/(q^2+q+1)", "-3/2", "q/(q^2-1)"] {
            let v = rf(s);
            assert_eq!(v.to_string(), s);
            assert_eq!(rf(&v.to_string()), v);
        }
        assert_eq!(rf("q - q^-1"), RatFunc::qhat());
        assert_eq!(rf("q^(-2)*(1+q)"), rf("(q+1)/q^2"));
        assert_eq!(rf("2q"), rf("2*q"));
        assert!("q+".parse::<RatFunc>().is_err());
        assert!("(q".parse::<RatFunc>().is_err());
    }

    #[test]
    fn laurent_constructor() {
        assert_eq!(RatFunc::laurent(-1, &[-1, 0, 1]), RatFunc::qhat());
        assert!(RatFunc::qhat().is_laurent());
        assert!(!rf("1/(q+1)").is_laurent());
    }
}
