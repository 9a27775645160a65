//! Named operators used as fixtures and in the command-line front end.

use super::concrete::concretize_operator;
use super::term::{parse_term, AbstractOperator, AbstractTerm};
use crate::cochain::Cochain;
use crate::jet::JetPolynomial;
use crate::poisson::PoissonMode;

fn term(src: &str) -> AbstractTerm {
    parse_term(src).expect("fixture term parses")
}

/// `P^{ij} ∂_i f ∂_j g`.
pub fn poisson_bracket() -> AbstractTerm {
    term("P(i,j) @1(i) @2(j)")
}

/// The three Leibniz terms of `{{f,g},h}`.
pub fn jacobi_terms() -> Vec<AbstractTerm> {
    vec![
        term("P(i,j) dP(i;k,l) @1(k) @2(l) @3(j)"),
        term("P(i,j) P(k,l) @1(i,k) @2(l) @3(j)"),
        term("P(i,j) P(k,l) @1(k) @2(i,l) @3(j)"),
    ]
}

/// `∂_r P^{is} ∂_s P^{jr} ∂_i f ∂_j g`.
pub fn crossed_term() -> AbstractTerm {
    term("dP(r;i,s) dP(s;j,r) @1(i) @2(j)")
}

/// `∂_k P^{ij} ∂_i (P^{kr} ∂_r P^{lm} + cycl.) ∂_j ∂_l f ∂_m g` with the
/// outer derivative distributed by Leibniz: six terms.
pub fn jacobi_contraction_terms() -> Vec<AbstractTerm> {
    vec![
        term("dP(k;i,j) dP(i;k,r) dP(r;l,m) @1(j,l) @2(m)"),
        term("dP(k;i,j) P(k,r) dP(i,r;l,m) @1(j,l) @2(m)"),
        term("dP(k;i,j) dP(i;l,r) dP(r;m,k) @1(j,l) @2(m)"),
        term("dP(k;i,j) P(l,r) dP(i,r;m,k) @1(j,l) @2(m)"),
        term("dP(k;i,j) dP(i;m,r) dP(r;k,l) @1(j,l) @2(m)"),
        term("dP(k;i,j) P(m,r) dP(i,r;k,l) @1(j,l) @2(m)"),
    ]
}

/// `∂_k P^{ij} P^{kr} ∂_i ∂_r P^{lm} ∂_j ∂_l f ∂_m g`, the only ordered
/// term of the six.
pub fn jacobi_contraction_ordered_term() -> AbstractTerm {
    jacobi_contraction_terms().swap_remove(1)
}

/// Concretization of the six-term operator, which vanishes by the Jacobi
/// identity.
pub fn jacobi_example_check(mode: PoissonMode) -> Cochain<JetPolynomial> {
    let op = AbstractOperator::from_terms(2, &jacobi_contraction_terms()).expect("bilinear terms");
    concretize_operator(&op, mode)
}
