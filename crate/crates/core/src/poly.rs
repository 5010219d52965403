//! Exact multivariate Laurent polynomials over the integers.
//!
//! Variables are `A`, `t`, `w` and the arrow variables `L1, L2, ...`.
//! The textual grammar is documented in `docs/polynomial-grammar.md`; the
//! reader is permissive (it ingests appendix strings such as `L_1/A^{6}`),
//! the writer emits a single canonical form such as `A^-4 + A^-6*L1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::SyntaxError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A,
    T,
    W,
    /// Arrow-polynomial variable `L_k`, k >= 1.
    L(u16),
}

impl Var {
    fn write(self, f: &mut impl fmt::Write) -> fmt::Result {
        match self {
            Var::A => f.write_str("A"),
            Var::T => f.write_str("t"),
            Var::W => f.write_str("w"),
            Var::L(k) => write!(f, "L{k}"),
        }
    }
}

/// Sorted list of (variable, nonzero exponent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: i32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0
            .iter()
            .find(|(x, _)| *x == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    fn map_exp(&self, v: Var, f: impl Fn(i32) -> i32) -> Monomial {
        let mut out: Vec<(Var, i32)> = self
            .0
            .iter()
            .map(|&(x, e)| if x == v { (x, f(e)) } else { (x, e) })
            .filter(|&(_, e)| e != 0)
            .collect();
        out.sort();
        Monomial(out)
    }
}

// Lexicographic on exponent vectors, variables taken in the order A, t, w, L1, L2, ...
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, f))) => return 0.cmp(&f),
                (Some(&(v, e)), Some(&(u, f))) => match v.cmp(&u) {
                    Ordering::Equal if e == f => {
                        i += 1;
                        j += 1;
                    }
                    Ordering::Equal => return e.cmp(&f),
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(&f),
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        MultiPoly::term(c, Monomial::one())
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::term(1, Monomial::var(v, 1))
    }

    /// `c * v^e`.
    pub fn mono(c: i64, v: Var, e: i32) -> Self {
        MultiPoly::term(c, Monomial::var(v, e))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms in canonical (descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut r = MultiPoly::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// `A^k -> A^-k`, other variables untouched.
    pub fn substitute_a_inverse(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_exp(Var::A, |e| -e), c.clone());
        }
        out
    }

    /// Every `L_k` set to 1.
    pub fn specialize_lambdas(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let kept: Vec<_> = m.0.iter().copied().filter(|(v, _)| !matches!(v, Var::L(_))).collect();
            out.add_term(Monomial(kept), c.clone());
        }
        out
    }

    /// Multiply by `v^e`.
    pub fn shift(&self, v: Var, e: i32) -> MultiPoly {
        let s = Monomial::var(v, e);
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.terms.insert(m.mul(&s), c.clone());
        }
        out
    }

    /// (min, max) exponent of `v` over all terms.
    pub fn exp_range(&self, v: Var) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.exp(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Largest weighted arrow degree `sum k * e_k` over terms.
    pub fn lambda_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| {
                m.0.iter()
                    .map(|&(v, e)| match v {
                        Var::L(k) => k as i64 * e as i64,
                        _ => 0,
                    })
                    .sum::<i64>()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<MultiPoly, SyntaxError> {
        Parser::new(text).poly()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(mag.to_string());
            }
            for &(v, e) in &m.0 {
                let mut s = String::new();
                v.write(&mut s)?;
                if e != 1 {
                    s.push('^');
                    s.push_str(&e.to_string());
                }
                parts.push(s);
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

/// Canonical printed form.
pub fn print_poly(p: &MultiPoly) -> String {
    p.to_string()
}

pub fn parse_poly(text: &str) -> Result<MultiPoly, SyntaxError> {
    MultiPoly::parse(text)
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

struct Parser<'a> {
    s: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { s: text.as_bytes(), text, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { pos: self.pos, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<MultiPoly, SyntaxError> {
        // Strip `$...$` wrappers that survive copy-paste from LaTeX.
        let mut out = MultiPoly::zero();
        let _ = self.eat(b'$');
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            let _ = self.eat(b'+');
            1
        };
        loop {
            let (c, m) = self.term()?;
            out.add_term(m, c * sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(b'$') => {
                    self.pos += 1;
                    if self.peek().is_some() {
                        return self.err("trailing input");
                    }
                    return Ok(out);
                }
                None => return Ok(out),
                Some(_) => return self.err("expected '+' or '-'"),
            }
        }
    }

    fn uint(&mut self) -> Option<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.text[start..self.pos].parse().unwrap())
    }

    fn small_int(&mut self) -> Result<i32, SyntaxError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            let _ = self.eat(b'+');
            false
        };
        match self.uint().and_then(|v| v.to_i32()) {
            Some(v) => Ok(if neg { -v } else { v }),
            None => self.err("expected integer exponent"),
        }
    }

    fn exponent(&mut self) -> Result<i32, SyntaxError> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        if self.eat(b'{') {
            let e = self.small_int()?;
            if !self.eat(b'}') {
                return self.err("expected '}'");
            }
            Ok(e)
        } else {
            self.small_int()
        }
    }

    fn var(&mut self) -> Result<Option<Var>, SyntaxError> {
        let rest = &self.text[self.pos..];
        let (v, len) = if rest.starts_with('A') {
            (Var::A, 1)
        } else if rest.starts_with('t') {
            (Var::T, 1)
        } else if rest.starts_with('w') {
            (Var::W, 1)
        } else if let Some(tail) = rest.strip_prefix('L').or_else(|| rest.strip_prefix('Λ')) {
            let head = rest.len() - tail.len();
            self.pos += head;
            let _ = self.eat(b'_');
            let braced = self.eat(b'{');
            let k = match self.uint().and_then(|v| v.to_u16()) {
                Some(k) if k >= 1 => k,
                _ => return self.err("expected arrow variable index"),
            };
            if braced && !self.eat(b'}') {
                return self.err("expected '}'");
            }
            return Ok(Some(Var::L(k)));
        } else {
            return Ok(None);
        };
        self.pos += len;
        Ok(Some(v))
    }

    /// `[coeff] factor* ["/" factor+]`
    fn factors(&mut self, m: &mut Monomial, sign: i32) -> Result<usize, SyntaxError> {
        let mut n = 0;
        loop {
            self.ws();
            let _ = self.eat(b'*');
            self.ws();
            let Some(v) = self.var()? else { return Ok(n) };
            let e = self.exponent()?;
            *m = m.mul(&Monomial::var(v, sign * e));
            n += 1;
        }
    }

    fn term(&mut self) -> Result<(BigInt, Monomial), SyntaxError> {
        let coeff = self.uint();
        let mut m = Monomial::one();
        let nf = self.factors(&mut m, 1)?;
        if coeff.is_none() && nf == 0 {
            return self.err("expected term");
        }
        if self.eat(b'/') {
            if self.factors(&mut m, -1)? == 0 {
                return self.err("expected denominator variable");
            }
        }
        Ok((coeff.unwrap_or_else(BigInt::one), m))
    }
}

/// Dense Laurent polynomial in one variable with checked `i64` coefficients.
///
/// Used inside state sums; converted to [`MultiPoly`] at the end. Overflow
/// panics rather than wrapping.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct Lp {
    lo: i32,
    c: Vec<i64>,
}

impl Lp {
    pub fn zero() -> Self {
        Lp::default()
    }

    pub fn mono(c: i64, e: i32) -> Self {
        if c == 0 {
            Lp::zero()
        } else {
            Lp { lo: e, c: vec![c] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|&&x| x == 0).count();
        if lead == self.c.len() {
            return Lp::zero();
        }
        self.c.drain(..lead);
        self.lo += lead as i32;
        self
    }

    pub fn add(&self, o: &Lp) -> Lp {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = (self.lo + self.c.len() as i32).max(o.lo + o.c.len() as i32);
        let mut c = vec![0i64; (hi - lo) as usize];
        for (i, &x) in self.c.iter().enumerate() {
            c[(self.lo - lo) as usize + i] = x;
        }
        for (i, &x) in o.c.iter().enumerate() {
            let k = (o.lo - lo) as usize + i;
            c[k] = c[k].checked_add(x).expect("coefficient overflow");
        }
        Lp { lo, c }.trim()
    }

    pub fn scale(&self, k: i64) -> Lp {
        Lp {
            lo: self.lo,
            c: self.c.iter().map(|&x| x.checked_mul(k).expect("coefficient overflow")).collect(),
        }
        .trim()
    }

    pub fn shift(&self, e: i32) -> Lp {
        Lp { lo: self.lo + e, c: self.c.clone() }
    }

    pub fn mul(&self, o: &Lp) -> Lp {
        if self.is_zero() || o.is_zero() {
            return Lp::zero();
        }
        let mut c = vec![0i64; self.c.len() + o.c.len() - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                let p = x.checked_mul(y).expect("coefficient overflow");
                c[i + j] = c[i + j].checked_add(p).expect("coefficient overflow");
            }
        }
        Lp { lo: self.lo + o.lo, c }.trim()
    }

    pub fn pow(&self, k: u32) -> Lp {
        let mut r = Lp::mono(1, 0);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn to_multi(&self, v: Var) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (i, &x) in self.c.iter().enumerate() {
            p.add_term(Monomial::var(v, self.lo + i as i32), BigInt::from(x));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = MultiPoly::var(Var::A);
        let ai = MultiPoly::mono(1, Var::A, -1);
        assert_eq!(&(&a + &ai) * &(&a - &ai), p("A^2 - A^-2"));
    }

    #[test]
    fn substitute_inverse() {
        assert_eq!(p("A^{8} + A^{6} - A^{2}").substitute_a_inverse(), p("A^-8 + A^-6 - A^-2"));
    }

    #[test]
    fn appendix_forms() {
        let k21 = p("A^{-4} + L_1/A^{6} - L_1/A^{10}");
        assert_eq!(k21.len(), 3);
        assert_eq!(k21.to_string(), "A^-4 + A^-6*L1 - A^-10*L1");
        assert_eq!(p("t - 2 + 1/t"), p("t^{1} - 2 + t^{-1}"));
        assert_eq!(p("-w^{2} + 3 - 1/w^{2}").to_string(), "-w^2 + 3 - w^-2");
        assert_eq!(p("L1/A^6"), p("L_1/A^{6}"));
        assert_eq!(p("2A^{2}"), MultiPoly::mono(2, Var::A, 2));
        assert_eq!(p("A^{2}L_1"), p("L1*A^2"));
        assert_eq!(p("2L_1/A^{6} + L_2/A^{8}").to_string(), "2*A^-6*L1 + A^-8*L2");
        assert_eq!(p("-1/A^{16}").to_string(), "-A^-16");
        assert_eq!(p("0"), MultiPoly::zero());
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn syntax_errors_report_position() {
        let e = MultiPoly::parse("A^{2} + ").unwrap_err();
        assert_eq!(e.pos, 8);
        assert!(MultiPoly::parse("A^{x}").is_err());
        assert!(MultiPoly::parse("A ? t").is_err());
    }

    #[test]
    fn lambda_degree() {
        assert_eq!(p("A^{-4} + L_1/A^{6} - L_1/A^{10}").lambda_degree(), 1);
        assert_eq!(p("L_2/A^{8} + L_1^2").lambda_degree(), 2);
        assert_eq!(p("1").lambda_degree(), 0);
    }

    #[test]
    fn dense_matches_sparse() {
        let a = Lp::mono(1, 2).add(&Lp::mono(-3, -1));
        let b = Lp::mono(2, 1).add(&Lp::mono(1, 0));
        let prod = a.mul(&b).to_multi(Var::A);
        assert_eq!(prod, &a.to_multi(Var::A) * &b.to_multi(Var::A));
        assert!(a.add(&a.scale(-1)).is_zero());
    }
}
