//! Explicit polynomials in the coordinates `x1, x2, x3` with rational
//! coefficients, plus the small expression grammar used for potentials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Result, StarError};
use crate::multi_index::{MultiIndex, DIM};
use crate::rational::{display_rational, int, Rational};

/// Exponent vector `[e1, e2, e3]` for `x1^e1 x2^e2 x3^e3`.
pub type Exponents = [u32; DIM];

#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Exponents, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term([0; DIM], c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The coordinate function `x_axis` (1-based).
    pub fn coordinate(axis: u8) -> Self {
        let mut e = [0; DIM];
        e[(axis - 1) as usize] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exponents, c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &Exponents) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn derivative(&self, axis: u8) -> Self {
        let a = (axis - 1) as usize;
        let mut out = Polynomial::zero();
        for (e, c) in &self.terms {
            if e[a] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[a] -= 1;
            out.add_term(ne, c * int(e[a] as i64));
        }
        out
    }

    /// `∂_I` of the polynomial.
    pub fn partial(&self, index: &MultiIndex) -> Self {
        let mut cur = self.clone();
        for axis in index.indices() {
            if cur.is_zero() {
                break;
            }
            cur = cur.derivative(axis);
        }
        cur
    }

    pub fn eval(&self, point: &[Rational; DIM]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for a in 0..DIM {
                for _ in 0..e[a] {
                    v *= &point[a];
                }
            }
            acc += v;
        }
        acc
    }

    /// All monomials `x^e` with total degree at most `max_degree`,
    /// ordered by degree.
    pub fn monomials_up_to(max_degree: u32) -> Vec<Polynomial> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            for a in (0..=d).rev() {
                for b in (0..=(d - a)).rev() {
                    out.push(Polynomial::monomial([a, b, d - a - b], Rational::one()));
                }
            }
        }
        out
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut parser = Parser::new(src);
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.chars.len() {
            return Err(StarError::Parse(format!(
                "unexpected {:?} at offset {} in {src:?}",
                parser.chars[parser.pos], parser.pos
            )));
        }
        Ok(p)
    }

    /// JSON-facing factor form: each term as coefficient plus `"x1"`-style factors.
    pub fn to_factor_terms(&self) -> Vec<(Rational, Vec<String>)> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut fs = Vec::new();
                for a in 0..DIM {
                    for _ in 0..e[a] {
                        fs.push(format!("x{}", a + 1));
                    }
                }
                (c.clone(), fs)
            })
            .collect()
    }

    pub fn from_factor_terms(terms: &[(Rational, Vec<String>)]) -> Result<Self> {
        let mut p = Polynomial::zero();
        for (c, fs) in terms {
            let mut e = [0u32; DIM];
            for f in fs {
                match f.as_str() {
                    "x1" => e[0] += 1,
                    "x2" => e[1] += 1,
                    "x3" => e[2] += 1,
                    other => return Err(StarError::Parse(format!("unknown factor {other:?}"))),
                }
            }
            p.add_term(e, c.clone());
        }
        Ok(p)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest degree first reads more naturally.
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, (e, c)) in entries.into_iter().enumerate() {
            let mut vars = Vec::new();
            for a in 0..DIM {
                match e[a] {
                    0 => {}
                    1 => vars.push(format!("x{}", a + 1)),
                    k => vars.push(format!("x{}^{}", a + 1, k)),
                }
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if vars.is_empty() {
                f.write_str(&display_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", display_rational(&mag))?;
                }
                f.write_str(&vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(StarError::Parse(format!("{msg} at offset {}", self.pos)))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let c = match (d.terms.len(), d.terms.get(&[0; DIM])) {
                        (1, Some(c)) => c.clone(),
                        _ => return self.err("division is only allowed by nonzero constants"),
                    };
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected exponent");
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            let k: u32 = s
                .parse()
                .map_err(|_| StarError::Parse(format!("bad exponent {s:?}")))?;
            let mut acc = Polynomial::one();
            for _ in 0..k {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some('x') => {
                self.pos += 1;
                match self.chars.get(self.pos) {
                    Some(&d @ ('1' | '2' | '3')) => {
                        self.pos += 1;
                        Ok(Polynomial::coordinate(d as u8 - b'0'))
                    }
                    _ => self.err("expected x1, x2 or x3"),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let n: num_bigint::BigInt = s
                    .parse()
                    .map_err(|_| StarError::Parse(format!("bad number {s:?}")))?;
                Ok(Polynomial::constant(Rational::from_integer(n)))
            }
            Some(c) => self.err(&format!("unexpected {c:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}
