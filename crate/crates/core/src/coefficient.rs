//! The coefficient rings a cochain can carry.
//!
//! Cochain calculus needs a commutative Q-algebra with a derivation per
//! coordinate direction: jet polynomials for symbolic potentials, explicit
//! polynomials for concrete ones, and bare rationals for the constant
//! coefficient symbols used when tabulating `δ` as a matrix.

use std::fmt::{Debug, Display};

use num_traits::Zero;

use crate::error::Result;
use crate::jet::{JetPolynomial, JetTermJson};
use crate::multi_index::MultiIndex;
use crate::poly::Polynomial;
use crate::rational::{format_rational, parse_rational, Rational};

pub trait Coefficient: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    /// Tag used in serialized files.
    const KIND: &'static str;
    /// Basis monomial over Q.
    type Key: Ord + Clone + Debug + Send + Sync;

    fn zero() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, s: &Rational);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, s: &Rational) -> Self;
    fn derivative(&self, axis: u8) -> Self;

    fn one() -> Self {
        Self::from_rational(crate::rational::one())
    }

    fn add_assign(&mut self, other: &Self) {
        self.add_scaled(other, &crate::rational::one());
    }

    fn partial(&self, index: &MultiIndex) -> Self {
        let mut cur = self.clone();
        for axis in index.indices() {
            if cur.is_zero() {
                break;
            }
            cur = cur.derivative(axis);
        }
        cur
    }

    /// Number of monomials, used for size diagnostics.
    fn size(&self) -> usize;

    /// Rational coordinates in the monomial basis.
    fn coordinates(&self) -> Vec<(Self::Key, Rational)>;

    fn to_json(&self) -> Vec<JetTermJson>;
    fn from_json(terms: &[JetTermJson]) -> Result<Self>;
    fn to_latex(&self) -> String;
}

impl Coefficient for JetPolynomial {
    const KIND: &'static str = "jet";
    type Key = crate::jet::JetKey;

    fn zero() -> Self {
        JetPolynomial::zero()
    }
    fn from_rational(r: Rational) -> Self {
        JetPolynomial::constant(r)
    }
    fn is_zero(&self) -> bool {
        JetPolynomial::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, s: &Rational) {
        JetPolynomial::add_scaled(self, other, s)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn scale(&self, s: &Rational) -> Self {
        JetPolynomial::scale(self, s)
    }
    fn derivative(&self, axis: u8) -> Self {
        JetPolynomial::derivative(self, axis)
    }
    fn partial(&self, index: &MultiIndex) -> Self {
        JetPolynomial::partial(self, index)
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn coordinates(&self) -> Vec<(Self::Key, Rational)> {
        self.terms().map(|(k, c)| (k.clone(), c.clone())).collect()
    }
    fn to_json(&self) -> Vec<JetTermJson> {
        JetPolynomial::to_json(self)
    }
    fn from_json(terms: &[JetTermJson]) -> Result<Self> {
        JetPolynomial::from_json(terms)
    }
    fn to_latex(&self) -> String {
        JetPolynomial::to_latex(self)
    }
}

impl Coefficient for Polynomial {
    const KIND: &'static str = "explicit";
    type Key = crate::poly::Exponents;

    fn zero() -> Self {
        Polynomial::zero()
    }
    fn from_rational(r: Rational) -> Self {
        Polynomial::constant(r)
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, s: &Rational) {
        for (e, c) in other.terms() {
            self.add_term(*e, c * s);
        }
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: &Rational) -> Self {
        Polynomial::scale(self, s)
    }
    fn derivative(&self, axis: u8) -> Self {
        Polynomial::derivative(self, axis)
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn coordinates(&self) -> Vec<(Self::Key, Rational)> {
        self.terms().map(|(k, c)| (*k, c.clone())).collect()
    }
    fn to_json(&self) -> Vec<JetTermJson> {
        self.to_factor_terms()
            .into_iter()
            .map(|(c, factors)| JetTermJson {
                coeff: format_rational(&c),
                factors,
            })
            .collect()
    }
    fn from_json(terms: &[JetTermJson]) -> Result<Self> {
        let raw = terms
            .iter()
            .map(|t| Ok((parse_rational(&t.coeff)?, t.factors.clone())))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_factor_terms(&raw)
    }
    fn to_latex(&self) -> String {
        let parts: Vec<(Rational, String)> = self
            .to_factor_terms()
            .into_iter()
            .map(|(c, fs)| {
                let mut counts = [0u32; 3];
                for f in &fs {
                    counts[(f.as_bytes()[1] - b'1') as usize] += 1;
                }
                let body = (0..3)
                    .filter(|&a| counts[a] > 0)
                    .map(|a| {
                        if counts[a] == 1 {
                            format!("x^{}", a + 1)
                        } else {
                            format!("(x^{})^{{{}}}", a + 1, counts[a])
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("");
                (c, body)
            })
            .collect();
        crate::jet::latex_terms(parts.iter().map(|(c, b)| (c, b.clone())))
    }
}

impl Coefficient for Rational {
    const KIND: &'static str = "rational";
    type Key = ();

    fn zero() -> Self {
        Zero::zero()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, s: &Rational) {
        *self += other * s;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: &Rational) -> Self {
        self * s
    }
    fn derivative(&self, _axis: u8) -> Self {
        Zero::zero()
    }
    fn size(&self) -> usize {
        usize::from(!Zero::is_zero(self))
    }
    fn coordinates(&self) -> Vec<((), Rational)> {
        if Zero::is_zero(self) {
            Vec::new()
        } else {
            vec![((), self.clone())]
        }
    }
    fn to_json(&self) -> Vec<JetTermJson> {
        if Zero::is_zero(self) {
            return Vec::new();
        }
        vec![JetTermJson {
            coeff: format_rational(self),
            factors: Vec::new(),
        }]
    }
    fn from_json(terms: &[JetTermJson]) -> Result<Self> {
        let mut acc = crate::rational::zero();
        for t in terms {
            if !t.factors.is_empty() {
                return Err(crate::error::StarError::Parse(
                    "rational coefficient with factors".into(),
                ));
            }
            acc += parse_rational(&t.coeff)?;
        }
        Ok(acc)
    }
    fn to_latex(&self) -> String {
        crate::jet::latex_terms(std::iter::once((self, String::new())))
    }
}
