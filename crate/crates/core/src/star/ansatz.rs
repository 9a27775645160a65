//! The graded ansatz for `M_k` with symbolic potentials.
//!
//! A basis element is a jet monomial with `k` φ-factors (and `k` ψ-factors
//! in the ψ∇φ mode) times a parity-adapted slot pair `(I, J)`, subject to
//! `Σ jet orders + |I| + |J| = 3k`, `|I|, |J| ≥ 1` and `|I| + |J| ≥ 3`.

use super::{parity_element, parity_pairs};
use crate::cochain::Cochain;
use crate::jet::{canonicalize, JetPolynomial, JetVariable, Potential};
use crate::multi_index::indices_of_len;
use crate::poisson::PoissonMode;
use crate::rational::int;

/// Nondecreasing sequences of `count` jets with orders `≥ min_order` summing to `total`.
fn jet_multisets(potential: Potential, count: usize, min_order: usize, total: usize) -> Vec<Vec<JetVariable>> {
    let vars: Vec<JetVariable> = (min_order..=total)
        .flat_map(indices_of_len)
        .map(|index| JetVariable { potential, index })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(count);
    fn rec(
        vars: &[JetVariable],
        start: usize,
        left: usize,
        budget: usize,
        cur: &mut Vec<JetVariable>,
        out: &mut Vec<Vec<JetVariable>>,
    ) {
        if left == 0 {
            if budget == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for (n, v) in vars.iter().enumerate().skip(start) {
            if v.order() > budget {
                continue;
            }
            cur.push(*v);
            rec(vars, n, left - 1, budget - v.order(), cur, out);
            cur.pop();
        }
    }
    rec(&vars, 0, count, total, &mut cur, &mut out);
    out
}

/// Jet monomials of level `k` with total jet order `orders`.
pub fn ansatz_monomials(mode: PoissonMode, k: usize, orders: usize) -> Vec<JetPolynomial> {
    let mut out = Vec::new();
    match mode {
        PoissonMode::NablaPhi => {
            for m in jet_multisets(Potential::Phi, k, 1, orders) {
                out.push(canonicalize(vec![(int(1), m)]));
            }
        }
        PoissonMode::PsiNablaPhi => {
            for phi_total in k..=orders {
                let phis = jet_multisets(Potential::Phi, k, 1, phi_total);
                let psis = jet_multisets(Potential::Psi, k, 0, orders - phi_total);
                for a in &phis {
                    for b in &psis {
                        let mut key = a.clone();
                        key.extend_from_slice(b);
                        out.push(canonicalize(vec![(int(1), key)]));
                    }
                }
            }
        }
    }
    out
}

/// Basis of the level-`k` ansatz with parity sign `sign`; empty for `k < 2`.
pub fn ansatz_basis(mode: PoissonMode, k: usize, sign: i64) -> Vec<Cochain<JetPolynomial>> {
    let mut out = Vec::new();
    if k < 2 {
        return out;
    }
    for slot_total in 3..=2 * k {
        let monomials = ansatz_monomials(mode, k, 3 * k - slot_total);
        for content in indices_of_len(slot_total) {
            for (i, j) in parity_pairs(&content, sign) {
                for m in &monomials {
                    out.push(parity_element(i, j, sign, m));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;

    #[test]
    fn level_two_contains_second_order_pattern() {
        let basis = ansatz_basis(PoissonMode::NablaPhi, 2, 1);
        let s = |d: &str| MultiIndex::parse_digits(d).unwrap();
        let target = parity_element(s("12"), s("13"), 1, &(&JetPolynomial::phi("1") * &JetPolynomial::phi("2")));
        assert!(basis.contains(&target));
        for b in &basis {
            assert!(b.terms().all(|(slots, _)| slots.iter().all(|x| !x.is_empty())));
            assert!(b.min_total_degree().unwrap() >= 3);
        }
    }

    #[test]
    fn monomial_orders_balance() {
        for m in ansatz_monomials(PoissonMode::PsiNablaPhi, 2, 3) {
            let (key, _) = m.terms().next().unwrap();
            assert_eq!(key.len(), 4);
            assert_eq!(key.iter().map(|v| v.order()).sum::<usize>(), 3);
        }
    }
}
