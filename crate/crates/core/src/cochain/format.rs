//! JSON and LaTeX forms of cochains.

use serde::{Deserialize, Serialize};

use super::Cochain;
use crate::coefficient::Coefficient;
use crate::error::{Result, StarError};
use crate::jet::JetTermJson;
use crate::multi_index::MultiIndex;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainTermJson {
    pub coeff: Vec<JetTermJson>,
    pub slots: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainJson {
    pub arity: usize,
    pub terms: Vec<CochainTermJson>,
}

impl<C: Coefficient> Cochain<C> {
    pub fn to_json(&self) -> CochainJson {
        CochainJson {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(slots, c)| CochainTermJson {
                    coeff: c.to_json(),
                    slots: slots.iter().map(|i| i.indices()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &CochainJson) -> Result<Self> {
        let mut out = Cochain::zero(j.arity);
        for t in &j.terms {
            if t.slots.len() != j.arity {
                return Err(StarError::ArityMismatch {
                    expected: j.arity,
                    found: t.slots.len(),
                });
            }
            let slots = t
                .slots
                .iter()
                .map(|s| MultiIndex::from_indices(s))
                .collect::<Result<Vec<_>>>()?;
            out.add_term(slots, &C::from_json(&t.coeff)?);
        }
        Ok(out)
    }

    /// `M^{I_0,…,I_m} ∂_{I_0} f_0 ⋯ ∂_{I_m} f_m`, one summand per slot tuple.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (slots, c) in &self.terms {
            let coeff = c.to_latex();
            let coeff = if c.size() > 1 {
                format!("\\left({coeff}\\right)")
            } else {
                coeff
            };
            let args: Vec<String> = slots
                .iter()
                .enumerate()
                .map(|(j, idx)| {
                    if idx.is_empty() {
                        format!("f_{j}")
                    } else {
                        format!("\\partial_{{{}}}f_{j}", idx.digits())
                    }
                })
                .collect();
            parts.push(format!("{coeff}\\;{}", args.join("\\,")));
        }
        parts.join("\n  + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetPolynomial;
    use crate::rational::rat;

    #[test]
    fn json_shape_and_roundtrip() {
        let c: Cochain<JetPolynomial> = Cochain::from_terms(
            2,
            [(
                vec![MultiIndex::unit(1), MultiIndex::parse_digits("23").unwrap()],
                JetPolynomial::phi("3").scale(&rat(1, 2)),
            )],
        )
        .unwrap();
        let j = c.to_json();
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"slots\":[[1],[2,3]]"));
        assert!(text.contains("\"coeff\":\"1/2\""));
        assert!(text.contains("phi_3"));
        let back: Cochain<JetPolynomial> = Cochain::from_json(&j).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn latex_mentions_derivatives() {
        let c: Cochain<JetPolynomial> = Cochain::monomial(
            vec![MultiIndex::unit(1), MultiIndex::unit(2)],
            JetPolynomial::phi("3").scale(&rat(1, 2)),
        );
        let s = c.to_latex();
        assert!(s.contains("\\frac{1}{2}"));
        assert!(s.contains("\\partial_{3}\\varphi"));
        assert!(s.contains("\\partial_{1}f_0"));
    }
}
