//! Polydifferential operators on R³ and the Hochschild/Gerstenhaber calculus.
//!
//! A cochain of arity `m+1` is a finite sum
//! `M(f_0,…,f_m) = Σ M^{I_0,…,I_m} ∂_{I_0}f_0 ⋯ ∂_{I_m}f_m`
//! stored as a map from slot tuples `(I_0,…,I_m)` to coefficients.

mod format;
mod hochschild;

use std::collections::BTreeMap;


pub use format::{CochainJson, CochainTermJson};
pub use hochschild::{gerstenhaber_bracket, gerstenhaber_product, hochschild_delta};

use crate::coefficient::Coefficient;
use crate::error::{Result, StarError};
use crate::multi_index::MultiIndex;
use crate::poly::Polynomial;
use crate::rational::{rat, Rational};

/// One derivative slot per argument.
pub type Slots = Vec<MultiIndex>;

/// Per-argument differential degrees `(d_0, …, d_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeProfile(pub Vec<usize>);

impl DegreeProfile {
    pub fn of(slots: &[MultiIndex]) -> Self {
        DegreeProfile(slots.iter().map(|s| s.len()).collect())
    }
}

impl From<&[usize]> for DegreeProfile {
    fn from(d: &[usize]) -> Self {
        DegreeProfile(d.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CochainTerm<C> {
    pub coefficient: C,
    pub slots: Slots,
}

#[derive(Clone, PartialEq)]
pub struct Cochain<C> {
    arity: usize,
    terms: BTreeMap<Slots, C>,
}

impl<C: Coefficient> Cochain<C> {
    pub fn zero(arity: usize) -> Self {
        Cochain {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Slots, C)>) -> Result<Self> {
        let mut c = Self::zero(arity);
        for (slots, coeff) in terms {
            if slots.len() != arity {
                return Err(StarError::ArityMismatch {
                    expected: arity,
                    found: slots.len(),
                });
            }
            c.add_term(slots, &coeff);
        }
        Ok(c)
    }

    /// A single term `coeff · ∂_{I_0} f_0 ⋯`.
    pub fn monomial(slots: Slots, coeff: C) -> Self {
        let mut c = Self::zero(slots.len());
        c.add_term(slots, &coeff);
        c
    }

    /// Pointwise multiplication `(f, g) ↦ f g`.
    pub fn multiplication() -> Self {
        Self::monomial(vec![MultiIndex::EMPTY; 2], C::one())
    }

    /// `f ↦ ∂_axis f`.
    pub fn vector_field(axis: u8) -> Self {
        Self::monomial(vec![MultiIndex::unit(axis)], C::one())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Grading used by the bracket: number of arguments minus one, so a
    /// function has degree −1.
    pub fn degree(&self) -> isize {
        self.arity as isize - 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, slots: Slots, coeff: &C) {
        debug_assert_eq!(slots.len(), self.arity);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&slots) {
            Some(v) => {
                v.add_assign(coeff);
                if v.is_zero() {
                    self.terms.remove(&slots);
                }
            }
            None => {
                self.terms.insert(slots, coeff.clone());
            }
        }
    }

    pub fn add_term_scaled(&mut self, slots: Slots, coeff: &C, s: &Rational) {
        if coeff.is_zero() || num_traits::Zero::is_zero(s) {
            return;
        }
        match self.terms.get_mut(&slots) {
            Some(v) => {
                v.add_scaled(coeff, s);
                if v.is_zero() {
                    self.terms.remove(&slots);
                }
            }
            None => {
                self.terms.insert(slots, coeff.scale(s));
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Slots, &C)> {
        self.terms.iter()
    }

    pub fn term_list(&self) -> Vec<CochainTerm<C>> {
        self.terms
            .iter()
            .map(|(s, c)| CochainTerm {
                coefficient: c.clone(),
                slots: s.clone(),
            })
            .collect()
    }

    pub fn coefficient(&self, slots: &[MultiIndex]) -> Option<&C> {
        self.terms.get(slots)
    }

    pub fn add_assign(&mut self, other: &Cochain<C>) {
        assert_eq!(self.arity, other.arity, "adding cochains of different arity");
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, other: &Cochain<C>, s: &Rational) {
        assert_eq!(self.arity, other.arity, "adding cochains of different arity");
        for (slots, c) in &other.terms {
            self.add_term_scaled(slots.clone(), c, s);
        }
    }

    pub fn add(&self, other: &Cochain<C>) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Cochain<C>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-crate::rational::one());
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.arity);
        for (slots, c) in &self.terms {
            out.add_term(slots.clone(), &c.scale(s));
        }
        out
    }

    /// Coefficient-wise map into another ring.
    pub fn map_coefficients<D: Coefficient>(
        &self,
        mut f: impl FnMut(&C) -> Result<D>,
    ) -> Result<Cochain<D>> {
        let mut out = Cochain::zero(self.arity);
        for (slots, c) in &self.terms {
            out.add_term(slots.clone(), &f(c)?);
        }
        Ok(out)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Slots, &C) -> bool) -> Self {
        Cochain {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(s, c)| keep(s, c))
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    /// True when no argument slot is the identity, i.e. the cochain
    /// vanishes as soon as one argument is constant.
    pub fn is_normalized(&self) -> bool {
        self.terms.keys().all(|s| s.iter().all(|i| !i.is_empty()))
    }

    pub fn min_total_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|s| s.iter().map(|i| i.len()).sum())
            .min()
    }

    pub fn max_total_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|s| s.iter().map(|i| i.len()).sum())
            .max()
    }

    /// Terms whose per-argument degrees equal `d` exactly.
    pub fn degree_part(&self, d: &DegreeProfile) -> Self {
        self.filter(|s, _| s.len() == d.0.len() && s.iter().zip(&d.0).all(|(i, &k)| i.len() == k))
    }

    /// `t ↦ (f_0,…,f_m) ↦ t(f_{σ(0)},…,f_{σ(m)})`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.arity);
        let mut out = Self::zero(self.arity);
        for (slots, c) in &self.terms {
            let mut ns = vec![MultiIndex::EMPTY; self.arity];
            for (j, &target) in sigma.iter().enumerate() {
                ns[target] = slots[j];
            }
            out.add_term(ns, c);
        }
        out
    }

    /// `(f, g) ↦ c(g, f)`.
    pub fn reversal(&self) -> Result<Self> {
        self.expect_arity(2)?;
        Ok(self.permute(&[1, 0]))
    }

    /// Symmetric and antisymmetric parts, summing to `self`.
    pub fn parity_split(&self) -> Result<(Self, Self)> {
        let rev = self.reversal()?;
        let half = rat(1, 2);
        let even = self.add(&rev).scale(&half);
        let odd = self.sub(&rev).scale(&half);
        Ok((even, odd))
    }

    /// Group average `(1/6) Σ_{σ∈S₃} sgn(σ) t∘σ`.
    pub fn antisymmetrize(&self) -> Result<Self> {
        self.expect_arity(3)?;
        const PERMS: [([usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([1, 0, 2], -1),
            ([0, 2, 1], -1),
            ([2, 1, 0], -1),
        ];
        let mut out = Self::zero(3);
        for (sigma, sign) in PERMS {
            out.add_scaled(&self.permute(&sigma), &rat(sign, 6));
        }
        Ok(out)
    }

    pub fn expect_arity(&self, arity: usize) -> Result<()> {
        if self.arity != arity {
            return Err(StarError::ArityMismatch {
                expected: arity,
                found: self.arity,
            });
        }
        Ok(())
    }

    /// Evaluates on explicit arguments, mapping coefficients to explicit
    /// polynomials with `coeff`.
    pub fn eval_with(
        &self,
        args: &[Polynomial],
        mut coeff: impl FnMut(&C) -> Result<Polynomial>,
    ) -> Result<Polynomial> {
        if args.len() != self.arity {
            return Err(StarError::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        let mut cache: Vec<BTreeMap<MultiIndex, Polynomial>> = vec![BTreeMap::new(); args.len()];
        let mut acc = Polynomial::zero();
        for (slots, c) in &self.terms {
            let mut prod = Polynomial::one();
            for (j, idx) in slots.iter().enumerate() {
                let d = cache[j]
                    .entry(*idx)
                    .or_insert_with(|| args[j].partial(idx))
                    .clone();
                prod = &prod * &d;
                if prod.is_zero() {
                    break;
                }
            }
            if prod.is_zero() {
                continue;
            }
            acc = &acc + &(&coeff(c)? * &prod);
        }
        Ok(acc)
    }

    /// Size diagnostics: (terms, total coefficient monomials).
    pub fn size(&self) -> (usize, usize) {
        (
            self.terms.len(),
            self.terms.values().map(|c| c.size()).sum(),
        )
    }
}

impl Cochain<Polynomial> {
    pub fn eval(&self, args: &[Polynomial]) -> Result<Polynomial> {
        self.eval_with(args, |c| Ok(c.clone()))
    }
}

impl<C: Coefficient> std::fmt::Debug for Cochain<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cochain(arity {}) {{", self.arity)?;
        for (s, c) in &self.terms {
            let slots: Vec<String> = s.iter().map(|i| format!("[{}]", i.digits())).collect();
            write!(f, " {}: ({}),", slots.join(""), c)?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mi(s: &str) -> MultiIndex {
        MultiIndex::parse_digits(s).unwrap()
    }

    fn r(n: i64) -> Rational {
        int(n)
    }

    #[test]
    fn eval_single_term() {
        let c: Cochain<Polynomial> =
            Cochain::monomial(vec![mi("1"), mi("1")], Polynomial::one());
        let f = Polynomial::parse("x1^2").unwrap();
        let g = Polynomial::parse("x1").unwrap();
        assert_eq!(c.eval(&[f, g]).unwrap(), Polynomial::parse("2*x1").unwrap());
    }

    #[test]
    fn eval_checks_arity() {
        let c: Cochain<Polynomial> = Cochain::vector_field(1);
        assert!(matches!(
            c.eval(&[Polynomial::one(), Polynomial::one()]),
            Err(StarError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn normalized_cochain_kills_constants() {
        let c: Cochain<Polynomial> = Cochain::from_terms(
            2,
            [
                (vec![mi("12"), mi("3")], Polynomial::parse("x2").unwrap()),
                (vec![mi("1"), mi("1")], Polynomial::one()),
            ],
        )
        .unwrap();
        assert!(c.is_normalized());
        let g = Polynomial::parse("x1^2*x3 + x2").unwrap();
        assert!(c.eval(&[Polynomial::constant(r(5)), g.clone()]).unwrap().is_zero());
        assert!(c.eval(&[g, Polynomial::constant(r(5))]).unwrap().is_zero());
    }

    #[test]
    fn antisymmetrizer_definition_and_idempotence() {
        let t: Cochain<Rational> = Cochain::monomial(vec![mi("1"), mi("2"), mi("3")], r(1));
        let a = t.antisymmetrize().unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(a.coefficient(&[mi("1"), mi("2"), mi("3")]), Some(&rat(1, 6)));
        assert_eq!(a.coefficient(&[mi("2"), mi("1"), mi("3")]), Some(&rat(-1, 6)));
        assert_eq!(a.antisymmetrize().unwrap(), a);
    }

    #[test]
    fn antisymmetrizer_kills_symmetric() {
        let t: Cochain<Rational> = Cochain::from_terms(
            3,
            [
                (vec![mi("1"), mi("2"), mi("33")], r(1)),
                (vec![mi("2"), mi("1"), mi("33")], r(1)),
            ],
        )
        .unwrap();
        assert!(t.antisymmetrize().unwrap().is_zero());
        assert!(t.reversal().is_err());
    }

    #[test]
    fn parity_split_sums_back() {
        let c: Cochain<Rational> = Cochain::from_terms(
            2,
            [
                (vec![mi("1"), mi("22")], r(3)),
                (vec![mi("22"), mi("1")], r(1)),
                (vec![mi("1"), mi("1")], r(2)),
            ],
        )
        .unwrap();
        let (even, odd) = c.parity_split().unwrap();
        assert_eq!(even.add(&odd), c);
        assert_eq!(even.reversal().unwrap(), even);
        assert_eq!(odd.reversal().unwrap(), odd.scale(&r(-1)));
        let sym = c.add(&c.reversal().unwrap());
        assert!(sym.parity_split().unwrap().1.is_zero());
    }

    #[test]
    fn degree_part_filters() {
        let c: Cochain<Rational> = Cochain::from_terms(
            2,
            [(vec![mi("1"), mi("22")], r(3)), (vec![mi("1"), mi("2")], r(1))],
        )
        .unwrap();
        assert_eq!(c.degree_part(&DegreeProfile(vec![1, 1])).len(), 1);
        assert!(c.degree_part(&DegreeProfile(vec![2, 1])).is_zero());
    }
}
