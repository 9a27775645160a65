//! Poisson structures `P⃗ = ∇φ` and `P⃗ = ψ∇φ` on R³.
//!
//! The Poisson vector `P⃗ = (P^{23}, P^{31}, P^{12})` is encoded through the
//! Levi-Civita symbol, `P^{ij} = ε^{ijk} P⃗_k`, so for the integrable case
//! `∂_I P^{ij} = ε^{ijk} φ_{I∪{k}}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::coefficient::Coefficient;
use crate::error::{Result, StarError};
use crate::jet::{JetPolynomial, JetVariable, Potential};
use crate::multi_index::MultiIndex;
use crate::poly::Polynomial;
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PoissonMode {
    #[serde(rename = "nabla-phi")]
    NablaPhi,
    #[serde(rename = "psi-nabla-phi")]
    PsiNablaPhi,
}

impl fmt::Display for PoissonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoissonMode::NablaPhi => "nabla-phi",
            PoissonMode::PsiNablaPhi => "psi-nabla-phi",
        })
    }
}

impl std::str::FromStr for PoissonMode {
    type Err = StarError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nabla-phi" | "NABLA_PHI" => Ok(PoissonMode::NablaPhi),
            "psi-nabla-phi" | "PSI_NABLA_PHI" => Ok(PoissonMode::PsiNablaPhi),
            _ => Err(StarError::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// `ε^{ijk}` for 1-based indices.
pub fn levi_civita(i: u8, j: u8, k: u8) -> i64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (1, 3, 2) | (3, 2, 1) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// The remaining direction `k` with `ε^{ijk} ≠ 0`, with its sign.
pub fn complement(i: u8, j: u8) -> Option<(u8, i64)> {
    if i == j {
        return None;
    }
    let k = 6 - i - j;
    Some((k, levi_civita(i, j, k)))
}

fn check_index(i: u8) -> Result<()> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(StarError::IndexOutOfRange(i as i64))
    }
}

/// `∂_D P^{ij}` in jet variables.
pub fn p_jet(i: u8, j: u8, deriv: &MultiIndex, mode: PoissonMode) -> Result<JetPolynomial> {
    check_index(i)?;
    check_index(j)?;
    let Some((k, sign)) = complement(i, j) else {
        return Ok(JetPolynomial::zero());
    };
    let sign = int(sign);
    match mode {
        PoissonMode::NablaPhi => {
            let v = JetVariable::phi_unchecked(deriv.with(k));
            Ok(JetPolynomial::var(v).scale(&sign))
        }
        PoissonMode::PsiNablaPhi => {
            let mut out = JetPolynomial::zero();
            for (a, b, mult) in deriv.splits() {
                let mut key = vec![JetVariable::phi_unchecked(b.with(k)), JetVariable::psi(a)];
                key.sort();
                out.add_term(key, &sign * int(mult as i64));
            }
            Ok(out)
        }
    }
}

/// A formal symbol `∂_D P^{ij}` before substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PJet {
    pub upper: (u8, u8),
    pub deriv: MultiIndex,
}

/// A polynomial in the symbols `∂_D P^{ij}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PJetExpr {
    pub terms: Vec<(Rational, Vec<PJet>)>,
}

impl PJetExpr {
    pub fn symbol(i: u8, j: u8, deriv: MultiIndex) -> Self {
        PJetExpr {
            terms: vec![(crate::rational::one(), vec![PJet { upper: (i, j), deriv }])],
        }
    }
}

/// Substitutes `P^{ij} = ε^{ijk} φ_k` (or `ε^{ijk} ψ φ_k`) into a formal expression.
pub fn substitute_p(expr: &PJetExpr, mode: PoissonMode) -> Result<JetPolynomial> {
    let mut acc = JetPolynomial::zero();
    for (c, factors) in &expr.terms {
        let mut term = JetPolynomial::constant(c.clone());
        for f in factors {
            let v = p_jet(f.upper.0, f.upper.1, &f.deriv, mode)?;
            term = term.mul_ref(&v);
        }
        acc.add_assign_ref(&term);
    }
    Ok(acc)
}

/// Where the potentials come from.
#[derive(Clone, Debug, PartialEq)]
pub enum PotentialSource {
    Symbolic,
    Explicit {
        phi: Polynomial,
        psi: Option<Polynomial>,
    },
}

/// A Poisson structure whose jets can be expressed in some coefficient ring.
pub trait PoissonModel: Sync {
    type Coeff: Coefficient;

    fn mode(&self) -> PoissonMode;

    /// `∂_D P^{ij}`.
    fn p_jet(&self, i: u8, j: u8, deriv: &MultiIndex) -> Self::Coeff;

    fn source(&self) -> PotentialSource;

    /// Checks the factor-count / derivative-balance grading of one
    /// coefficient sitting on slots of total order `slot_total` at `level`.
    fn grading_violation(
        &self,
        _coeff: &Self::Coeff,
        _slot_total: usize,
        _level: usize,
    ) -> Option<String> {
        None
    }
}

/// Symbolic potentials: coefficients are jet polynomials.
pub struct SymbolicModel {
    mode: PoissonMode,
    /// Largest derivative order allowed on a P-factor.
    jet_order: Option<usize>,
    cache: Mutex<HashMap<(u8, u8, MultiIndex), JetPolynomial>>,
}

impl SymbolicModel {
    pub fn new(mode: PoissonMode) -> Self {
        SymbolicModel {
            mode,
            jet_order: None,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_jet_order(mut self, j: usize) -> Self {
        self.jet_order = Some(j);
        self
    }

    pub fn jet_order(&self) -> Option<usize> {
        self.jet_order
    }
}

impl PoissonModel for SymbolicModel {
    type Coeff = JetPolynomial;

    fn mode(&self) -> PoissonMode {
        self.mode
    }

    fn p_jet(&self, i: u8, j: u8, deriv: &MultiIndex) -> JetPolynomial {
        let key = (i, j, *deriv);
        if let Some(v) = self.cache.lock().expect("cache").get(&key) {
            return v.clone();
        }
        let v = p_jet(i, j, deriv, self.mode).expect("indices in range");
        self.cache.lock().expect("cache").insert(key, v.clone());
        v
    }

    fn source(&self) -> PotentialSource {
        PotentialSource::Symbolic
    }

    fn grading_violation(
        &self,
        coeff: &JetPolynomial,
        slot_total: usize,
        level: usize,
    ) -> Option<String> {
        for (key, _) in coeff.terms() {
            let phis = key.iter().filter(|v| v.potential == Potential::Phi).count();
            let psis = key.len() - phis;
            let orders: usize = key.iter().map(|v| v.order()).sum();
            let expected_psis = match self.mode {
                PoissonMode::NablaPhi => 0,
                PoissonMode::PsiNablaPhi => level,
            };
            if phis != level || psis != expected_psis {
                return Some(format!(
                    "monomial {key:?} has {phis} phi / {psis} psi factors, expected {level} / {expected_psis}"
                ));
            }
            // every P-factor carries one index from ε plus its share of the 2k lower indices
            if orders + slot_total != 3 * level {
                return Some(format!(
                    "monomial {key:?} with slot order {slot_total} breaks derivative balance 3k = {}",
                    3 * level
                ));
            }
            if let Some(j) = self.jet_order {
                for v in key {
                    let limit = match v.potential {
                        Potential::Phi => j + 1,
                        Potential::Psi => j,
                    };
                    if v.order() > limit {
                        return Some(format!("jet {v} exceeds truncation order {j}"));
                    }
                }
            }
        }
        None
    }
}

/// Explicit polynomial potentials: coefficients are polynomials in x.
pub struct ExplicitModel {
    mode: PoissonMode,
    phi: Polynomial,
    psi: Option<Polynomial>,
    /// `P⃗ = (P^{23}, P^{31}, P^{12})`.
    vector: [Polynomial; 3],
    cache: Mutex<HashMap<(u8, u8, MultiIndex), Polynomial>>,
}

impl ExplicitModel {
    pub fn nabla_phi(phi: Polynomial) -> Self {
        let vector = [phi.derivative(1), phi.derivative(2), phi.derivative(3)];
        ExplicitModel {
            mode: PoissonMode::NablaPhi,
            phi,
            psi: None,
            vector,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn psi_nabla_phi(psi: Polynomial, phi: Polynomial) -> Self {
        let vector = [
            &psi * &phi.derivative(1),
            &psi * &phi.derivative(2),
            &psi * &phi.derivative(3),
        ];
        ExplicitModel {
            mode: PoissonMode::PsiNablaPhi,
            phi,
            psi: Some(psi),
            vector,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn new(mode: PoissonMode, phi: Polynomial, psi: Option<Polynomial>) -> Result<Self> {
        match (mode, psi) {
            (PoissonMode::NablaPhi, None) => Ok(Self::nabla_phi(phi)),
            (PoissonMode::NablaPhi, Some(_)) => Err(StarError::Config(
                "psi is only used in psi-nabla-phi mode".into(),
            )),
            (PoissonMode::PsiNablaPhi, Some(psi)) => Ok(Self::psi_nabla_phi(psi, phi)),
            (PoissonMode::PsiNablaPhi, None) => {
                Err(StarError::Config("psi-nabla-phi mode needs psi".into()))
            }
        }
    }

    /// The Poisson vector `(P^{23}, P^{31}, P^{12})`.
    pub fn vector(&self) -> &[Polynomial; 3] {
        &self.vector
    }

    pub fn phi(&self) -> &Polynomial {
        &self.phi
    }

    pub fn psi(&self) -> Option<&Polynomial> {
        self.psi.as_ref()
    }
}

impl PoissonModel for ExplicitModel {
    type Coeff = Polynomial;

    fn mode(&self) -> PoissonMode {
        self.mode
    }

    fn p_jet(&self, i: u8, j: u8, deriv: &MultiIndex) -> Polynomial {
        let key = (i, j, *deriv);
        if let Some(v) = self.cache.lock().expect("cache").get(&key) {
            return v.clone();
        }
        let v = match complement(i, j) {
            None => Polynomial::zero(),
            Some((k, sign)) => self.vector[(k - 1) as usize]
                .partial(deriv)
                .scale(&int(sign)),
        };
        self.cache.lock().expect("cache").insert(key, v.clone());
        v
    }

    fn source(&self) -> PotentialSource {
        PotentialSource::Explicit {
            phi: self.phi.clone(),
            psi: self.psi.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetEvaluator;

    #[test]
    fn p12_is_phi3() {
        let v = p_jet(1, 2, &MultiIndex::EMPTY, PoissonMode::NablaPhi).unwrap();
        assert_eq!(v, JetPolynomial::phi("3"));
        let w = p_jet(2, 1, &MultiIndex::EMPTY, PoissonMode::NablaPhi).unwrap();
        assert_eq!(w, JetPolynomial::phi("3").scale(&int(-1)));
    }

    #[test]
    fn diagonal_vanishes() {
        assert!(p_jet(1, 1, &MultiIndex::EMPTY, PoissonMode::NablaPhi)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn derivative_of_p31() {
        let v = p_jet(3, 1, &MultiIndex::unit(2), PoissonMode::NablaPhi).unwrap();
        assert_eq!(v, JetPolynomial::phi("22"));
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            p_jet(4, 1, &MultiIndex::EMPTY, PoissonMode::NablaPhi),
            Err(StarError::IndexOutOfRange(4))
        ));
        let e = PJetExpr::symbol(0, 2, MultiIndex::EMPTY);
        assert!(substitute_p(&e, PoissonMode::NablaPhi).is_err());
    }

    #[test]
    fn psi_mode_applies_leibniz() {
        // ∂_1(ψ φ_3) = ψ_1 φ_3 + ψ φ_13
        let v = p_jet(1, 2, &MultiIndex::unit(1), PoissonMode::PsiNablaPhi).unwrap();
        let expected = &JetPolynomial::psi("1").mul_ref(&JetPolynomial::phi("3"))
            + &JetPolynomial::psi("").mul_ref(&JetPolynomial::phi("13"));
        assert_eq!(v, expected);
    }

    #[test]
    fn substitution_matches_direct_curl_formula() {
        // substitute then evaluate == differentiate the explicit P⃗ = ∇φ
        let phi = Polynomial::parse("x1^2*x2*x3 + 3*x2^3*x3 - x1*x3^2 + x2").unwrap();
        let model = ExplicitModel::nabla_phi(phi.clone());
        let mut ev = JetEvaluator::new(phi, None);
        for (i, j) in [(1u8, 2u8), (2, 3), (3, 1), (2, 1), (1, 3)] {
            for len in 0..=3 {
                for d in crate::multi_index::indices_of_len(len) {
                    let sym = p_jet(i, j, &d, PoissonMode::NablaPhi).unwrap();
                    assert_eq!(ev.eval(&sym).unwrap(), model.p_jet(i, j, &d));
                }
            }
        }
    }

    #[test]
    fn psi_substitution_matches_explicit() {
        let phi = Polynomial::parse("x1*x2 + x3^2").unwrap();
        let psi = Polynomial::parse("1 + x1*x3").unwrap();
        let model = ExplicitModel::psi_nabla_phi(psi.clone(), phi.clone());
        let mut ev = JetEvaluator::new(phi, Some(psi));
        for len in 0..=2 {
            for d in crate::multi_index::indices_of_len(len) {
                let sym = p_jet(3, 1, &d, PoissonMode::PsiNablaPhi).unwrap();
                assert_eq!(ev.eval(&sym).unwrap(), model.p_jet(3, 1, &d));
            }
        }
    }
}
