//! Polynomials in the jet variables `∂_I φ` and `∂_I ψ` of the potentials.
//!
//! Jet variables are independent polynomial generators. Derivative indices
//! are stored sorted, so `φ_{12}` and `φ_{21}` are the same variable by
//! construction and the symmetry of mixed partials never needs a rewrite.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StarError};
use crate::multi_index::MultiIndex;
use crate::poly::Polynomial;
use crate::rational::{display_rational, format_rational, int, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Potential {
    Phi,
    Psi,
}

impl Potential {
    fn name(self) -> &'static str {
        match self {
            Potential::Phi => "phi",
            Potential::Psi => "psi",
        }
    }
}

/// `∂_I φ` or `∂_I ψ`. Ordered by potential, then index length, then
/// lexicographically on the sorted index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVariable {
    pub potential: Potential,
    pub index: MultiIndex,
}

impl JetVariable {
    /// `∂_I φ`; the undifferentiated φ never occurs in `P = ∇φ`.
    pub fn phi(index: MultiIndex) -> Result<Self> {
        if index.is_empty() {
            return Err(StarError::Parse(
                "phi jets need at least one derivative".into(),
            ));
        }
        Ok(JetVariable {
            potential: Potential::Phi,
            index,
        })
    }

    /// `∂_I ψ`; `|I| = 0` is allowed.
    pub fn psi(index: MultiIndex) -> Self {
        JetVariable {
            potential: Potential::Psi,
            index,
        }
    }

    pub(crate) fn phi_unchecked(index: MultiIndex) -> Self {
        JetVariable {
            potential: Potential::Phi,
            index,
        }
    }

    /// Serialized form; `"psi_"` for the undifferentiated ψ.
    pub fn key_string(&self) -> String {
        format!("{}_{}", self.potential.name(), self.index.digits())
    }

    pub fn order(&self) -> usize {
        self.index.len()
    }

    pub fn derivative(&self, axis: u8) -> Self {
        JetVariable {
            potential: self.potential,
            index: self.index.with(axis),
        }
    }

    /// Parses `"phi_112"` / `"psi_"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, digits) = match s.split_once('_') {
            Some(parts) => parts,
            None if s == "psi" => ("psi", ""),
            None => return Err(StarError::Parse(format!("bad jet variable {s:?}"))),
        };
        let index = MultiIndex::parse_digits(digits)?;
        match name {
            "phi" => Self::phi(index),
            "psi" => Ok(Self::psi(index)),
            _ => Err(StarError::Parse(format!("unknown potential in {s:?}"))),
        }
    }
}

impl fmt::Display for JetVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index.is_empty() {
            f.write_str(self.potential.name())
        } else {
            write!(f, "{}_{}", self.potential.name(), self.index.digits())
        }
    }
}

impl fmt::Debug for JetVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sorted multiset of jet variables.
pub type JetKey = Vec<JetVariable>;

/// A single monomial with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetMonomial {
    pub factors: JetKey,
    pub coefficient: Rational,
}

/// Canonical sum of jet monomials with distinct factor multisets.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct JetPolynomial {
    terms: BTreeMap<JetKey, Rational>,
}

/// Sorts and merges a raw monomial list.
pub fn canonicalize(raw: Vec<(Rational, Vec<JetVariable>)>) -> JetPolynomial {
    let mut p = JetPolynomial::zero();
    for (c, mut fs) in raw {
        fs.sort();
        p.add_term(fs, c);
    }
    p
}

fn merge_keys(a: &[JetVariable], b: &[JetVariable]) -> JetKey {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl JetPolynomial {
    pub fn zero() -> Self {
        JetPolynomial::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(v: JetVariable) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![v], Rational::one());
        p
    }

    pub fn phi(digits: &str) -> Self {
        let idx = MultiIndex::parse_digits(digits).expect("valid digits");
        Self::var(JetVariable::phi(idx).expect("phi jet needs an index"))
    }

    pub fn psi(digits: &str) -> Self {
        let idx = MultiIndex::parse_digits(digits).expect("valid digits");
        Self::var(JetVariable::psi(idx))
    }

    /// Adds `c · ∏ key` where `key` is already sorted.
    pub fn add_term(&mut self, key: JetKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&JetKey, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<JetMonomial> {
        self.terms
            .iter()
            .map(|(k, c)| JetMonomial {
                factors: k.clone(),
                coefficient: c.clone(),
            })
            .collect()
    }

    pub fn coefficient_of(&self, key: &[JetVariable]) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_assign_ref(&mut self, other: &JetPolynomial) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &JetPolynomial, s: &Rational) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * s);
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        JetPolynomial {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    pub fn mul_ref(&self, other: &JetPolynomial) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(merge_keys(ka, kb), ca * cb);
            }
        }
        out
    }

    /// Total derivative `∂_axis`, acting on jets by `∂_a φ_I = φ_{I+a}`.
    pub fn derivative(&self, axis: u8) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            for pos in 0..k.len() {
                // equal neighbours give identical results; weight once
                if pos > 0 && k[pos] == k[pos - 1] {
                    continue;
                }
                let mult = k.iter().filter(|v| **v == k[pos]).count();
                let mut nk = k.clone();
                nk[pos] = k[pos].derivative(axis);
                nk.sort();
                out.add_term(nk, c * int(mult as i64));
            }
        }
        out
    }

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

    /// Largest derivative order of any jet variable of the given potential.
    pub fn max_order(&self, potential: Potential) -> usize {
        self.terms
            .keys()
            .flat_map(|k| k.iter())
            .filter(|v| v.potential == potential)
            .map(|v| v.order())
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<JetVariable> {
        let mut vs: Vec<JetVariable> = self.terms.keys().flatten().copied().collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn to_json(&self) -> Vec<JetTermJson> {
        self.terms
            .iter()
            .map(|(k, c)| JetTermJson {
                coeff: format_rational(c),
                factors: k.iter().map(JetVariable::key_string).collect(),
            })
            .collect()
    }

    pub fn from_json(terms: &[JetTermJson]) -> Result<Self> {
        let mut raw = Vec::with_capacity(terms.len());
        for t in terms {
            let c = parse_rational(&t.coeff)?;
            let fs = t
                .factors
                .iter()
                .map(|s| JetVariable::parse(s))
                .collect::<Result<Vec<_>>>()?;
            raw.push((c, fs));
        }
        Ok(canonicalize(raw))
    }

    /// Replaces every jet variable by the corresponding partial derivative
    /// of the given explicit potentials.
    pub fn eval_jets(&self, phi: &Polynomial, psi: Option<&Polynomial>) -> Result<Polynomial> {
        JetEvaluator::new(phi.clone(), psi.cloned()).eval(self)
    }

    pub fn to_latex(&self) -> String {
        latex_terms(self.terms.iter().map(|(k, c)| (c, monomial_latex(k))))
    }
}

fn monomial_latex(k: &[JetVariable]) -> String {
    k.iter()
        .map(|v| {
            let sym = match v.potential {
                Potential::Phi => "\\varphi",
                Potential::Psi => "\\psi",
            };
            if v.index.is_empty() {
                sym.to_string()
            } else {
                format!("\\partial_{{{}}}{}", v.index.digits(), sym)
            }
        })
        .collect::<Vec<_>>()
        .join("\\,")
}

pub(crate) fn latex_terms<'a>(it: impl Iterator<Item = (&'a Rational, String)>) -> String {
    let mut s = String::new();
    for (n, (c, body)) in it.enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if n == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let num = if mag.denom().is_one() {
            mag.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        };
        if body.is_empty() {
            s.push_str(&num);
        } else if mag.is_one() {
            s.push_str(&body);
        } else {
            s.push_str(&num);
            s.push_str("\\,");
            s.push_str(&body);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// JSON shape of one jet monomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetTermJson {
    pub coeff: String,
    pub factors: Vec<String>,
}

/// Evaluates jet polynomials against explicit potentials, caching the
/// partial derivatives it has already computed.
pub struct JetEvaluator {
    phi: Polynomial,
    psi: Option<Polynomial>,
    cache: HashMap<JetVariable, Polynomial>,
}

impl JetEvaluator {
    pub fn new(phi: Polynomial, psi: Option<Polynomial>) -> Self {
        JetEvaluator {
            phi,
            psi,
            cache: HashMap::new(),
        }
    }

    pub fn variable(&mut self, v: JetVariable) -> Result<Polynomial> {
        if let Some(p) = self.cache.get(&v) {
            return Ok(p.clone());
        }
        let base = match v.potential {
            Potential::Phi => &self.phi,
            Potential::Psi => self
                .psi
                .as_ref()
                .ok_or_else(|| StarError::MissingPotential(v.to_string()))?,
        };
        let val = base.partial(&v.index);
        self.cache.insert(v, val.clone());
        Ok(val)
    }

    pub fn eval(&mut self, p: &JetPolynomial) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        for (k, c) in p.terms() {
            let mut term = Polynomial::constant(c.clone());
            for v in k {
                if term.is_zero() {
                    break;
                }
                term = &term * &self.variable(*v)?;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

impl Add for &JetPolynomial {
    type Output = JetPolynomial;
    fn add(self, rhs: &JetPolynomial) -> JetPolynomial {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &JetPolynomial {
    type Output = JetPolynomial;
    fn sub(self, rhs: &JetPolynomial) -> JetPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Mul for &JetPolynomial {
    type Output = JetPolynomial;
    fn mul(self, rhs: &JetPolynomial) -> JetPolynomial {
        self.mul_ref(rhs)
    }
}

impl Neg for &JetPolynomial {
    type Output = JetPolynomial;
    fn neg(self) -> JetPolynomial {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for JetPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut powers: Vec<(JetVariable, usize)> = Vec::new();
            for v in k {
                match powers.last_mut() {
                    Some((w, e)) if w == v => *e += 1,
                    _ => powers.push((*v, 1)),
                }
            }
            let body = powers
                .iter()
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect::<Vec<_>>()
                .join("*");
            if body.is_empty() {
                f.write_str(&display_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{}*{}", display_rational(&mag), body)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for JetPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v(s: &str) -> JetVariable {
        JetVariable::parse(s).unwrap()
    }

    #[test]
    fn mixed_partials_cancel() {
        let phi12 = JetVariable::phi(MultiIndex::from_indices(&[1, 2]).unwrap()).unwrap();
        let phi21 = JetVariable::phi(MultiIndex::from_indices(&[2, 1]).unwrap()).unwrap();
        let p = canonicalize(vec![(int(1), vec![phi12]), (int(-1), vec![phi21])]);
        assert!(p.is_zero());
    }

    #[test]
    fn commutativity_merges() {
        let p = canonicalize(vec![
            (int(2), vec![v("phi_1"), v("phi_2")]),
            (int(3), vec![v("phi_2"), v("phi_1")]),
        ]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient_of(&[v("phi_1"), v("phi_2")]), int(5));
    }

    #[test]
    fn halves_add_up() {
        let p = canonicalize(vec![
            (rat(1, 2), vec![v("phi_1")]),
            (rat(1, 2), vec![v("phi_1")]),
        ]);
        assert_eq!(p, JetPolynomial::phi("1"));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let raw = vec![
            (int(2), vec![v("phi_13"), v("psi_"), v("phi_1")]),
            (rat(-1, 3), vec![v("phi_31"), v("phi_1"), v("psi_")]),
        ];
        let p = canonicalize(raw);
        let again = canonicalize(
            p.monomials()
                .into_iter()
                .map(|m| (m.coefficient, m.factors))
                .collect(),
        );
        assert_eq!(p, again);
    }

    #[test]
    fn variable_strings() {
        assert_eq!(v("phi_211").to_string(), "phi_112");
        assert_eq!(v("psi_").to_string(), "psi");
        assert_eq!(v("psi"), v("psi_"));
        let p = &(&JetPolynomial::phi("1") * &JetPolynomial::phi("1")) * &JetPolynomial::psi("");
        assert_eq!(p.to_string(), "phi_1^2*psi");
        assert!(JetVariable::parse("phi_").is_err());
        assert!(JetVariable::parse("chi_1").is_err());
        assert!(JetVariable::parse("phi_4").is_err());
    }

    #[test]
    fn variable_order_is_tag_then_length_then_lex() {
        let mut vs = vec![v("psi_1"), v("phi_22"), v("phi_3"), v("phi_11"), v("psi_")];
        vs.sort();
        assert_eq!(
            vs,
            vec![v("phi_3"), v("phi_11"), v("phi_22"), v("psi_"), v("psi_1")]
        );
    }

    #[test]
    fn derivative_is_leibniz() {
        let p = JetPolynomial::phi("1").mul_ref(&JetPolynomial::phi("1"));
        let d = p.derivative(2);
        let expected = JetPolynomial::phi("1")
            .mul_ref(&JetPolynomial::phi("12"))
            .scale(&int(2));
        assert_eq!(d, expected);
    }

    #[test]
    fn eval_examples() {
        let xyz = Polynomial::parse("x1*x2*x3").unwrap();
        let half_sq = Polynomial::parse("1/2*(x1^2+x2^2+x3^2)").unwrap();
        assert_eq!(
            JetPolynomial::phi("1").eval_jets(&xyz, None).unwrap(),
            Polynomial::parse("x2*x3").unwrap()
        );
        assert!(JetPolynomial::phi("12")
            .eval_jets(&half_sq, None)
            .unwrap()
            .is_zero());
        let p = JetPolynomial::phi("1").mul_ref(&JetPolynomial::phi("23"));
        assert_eq!(p.eval_jets(&xyz, None).unwrap(), xyz);
    }

    #[test]
    fn eval_without_psi_fails() {
        let p = JetPolynomial::psi("1");
        let phi = Polynomial::parse("x1").unwrap();
        assert!(matches!(
            p.eval_jets(&phi, None),
            Err(StarError::MissingPotential(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let p = canonicalize(vec![
            (rat(3, 2), vec![v("phi_12"), v("psi_")]),
            (int(-1), vec![v("phi_3")]),
        ]);
        let j = p.to_json();
        assert!(j.iter().any(|t| t.coeff == "3/2"));
        assert_eq!(JetPolynomial::from_json(&j).unwrap(), p);
    }
}
