//! Hochschild differential, Gerstenhaber product and bracket.
//!
//! Sign conventions, for `M` with `m+1` arguments and `N` with `n+1`:
//!
//! ```text
//! δM(f_0,…,f_{m+1}) = f_0 M(f_1,…) − Σ_{i=0}^{m} (−1)^i M(…, f_i f_{i+1}, …)
//!                     + (−1)^m M(f_0,…,f_m) f_{m+1}
//! (M∘N)(f_0,…,f_{m+n}) = Σ_{i=0}^{m} (−1)^{in} M(f_0,…,N(f_i,…,f_{i+n}),…)
//! [M,N] = M∘N − (−1)^{mn} N∘M
//! ```
//!
//! Both are expanded at the term level with the Leibniz rule, so results stay
//! canonical cochains rather than black-box functions.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{Cochain, Slots};
use crate::coefficient::Coefficient;
use crate::multi_index::MultiIndex;
use crate::rational::{int, Rational};

fn sign(even: bool) -> i64 {
    if even {
        1
    } else {
        -1
    }
}

/// `δ` on a cochain of any arity. Empty slots produced by the boundary terms
/// are kept; for normalized input they cancel against the trivial splits.
pub fn hochschild_delta<C: Coefficient>(c: &Cochain<C>) -> Cochain<C> {
    let mut out = Cochain::zero(c.arity() + 1);
    // δa(f) = f·a − a·f vanishes on a commutative algebra
    if c.arity() == 0 {
        return out;
    }
    let m = c.arity() - 1;
    for (slots, coeff) in c.terms() {
        // f_0 · M(f_1, …)
        let mut s = Vec::with_capacity(slots.len() + 1);
        s.push(MultiIndex::EMPTY);
        s.extend_from_slice(slots);
        out.add_term(s, coeff);

        // −(−1)^i M(…, f_i f_{i+1}, …)
        for i in 0..=m {
            let base = -sign(i % 2 == 0);
            for (j, k, mult) in slots[i].splits() {
                let mut s = Vec::with_capacity(slots.len() + 1);
                s.extend_from_slice(&slots[..i]);
                s.push(j);
                s.push(k);
                s.extend_from_slice(&slots[i + 1..]);
                out.add_term_scaled(s, coeff, &int(base * mult as i64));
            }
        }

        // (−1)^m M(f_0, …, f_m) · f_{m+1}
        let mut s = slots.clone();
        s.push(MultiIndex::EMPTY);
        out.add_term_scaled(s, coeff, &int(sign(m.is_multiple_of(2))));
    }
    out
}

/// Gerstenhaber insertion product `M∘N`.
pub fn gerstenhaber_product<C: Coefficient>(m: &Cochain<C>, n: &Cochain<C>) -> Cochain<C> {
    let out_arity = (m.arity() + n.arity()).saturating_sub(1);
    let ndeg = n.degree();
    if m.is_zero() || n.is_zero() || m.arity() == 0 {
        return Cochain::zero(out_arity);
    }

    // Derivatives ∂_K b of N's coefficients for every K that can occur.
    let mut needed: Vec<MultiIndex> = m
        .terms()
        .flat_map(|(s, _)| s.iter().flat_map(|i| i.sub_indices()))
        .collect();
    needed.sort();
    needed.dedup();
    let n_terms: Vec<(Slots, C)> = n.terms().map(|(s, c)| (s.clone(), c.clone())).collect();
    let derivs: Vec<HashMap<MultiIndex, C>> = n_terms
        .par_iter()
        .map(|(_, b)| {
            let mut table: HashMap<MultiIndex, C> = HashMap::with_capacity(needed.len());
            // `needed` is sorted by length so every K − e is already present
            for k in &needed {
                let v = if k.is_empty() {
                    b.clone()
                } else {
                    let axis = k.indices()[0];
                    let prev = k.checked_sub(&MultiIndex::unit(axis)).expect("nonempty");
                    match table.get(&prev) {
                        Some(p) => p.derivative(axis),
                        None => b.partial(k),
                    }
                };
                table.insert(*k, v);
            }
            table
        })
        .collect();

    let m_terms: Vec<(Slots, C)> = m.terms().map(|(s, c)| (s.clone(), c.clone())).collect();
    let partials: Vec<BTreeMap<Slots, C>> = m_terms
        .par_iter()
        .map(|(mslots, a)| {
            let mut local = Cochain::zero(out_arity);
            for i in 0..mslots.len() {
                let sgn = sign((i as isize * ndeg).rem_euclid(2) == 0);
                let target = mslots[i];
                for (k, rest, mult_k) in target.splits() {
                    let rest_splits = rest.distribute(n.arity());
                    for ((nslots, _), table) in n_terms.iter().zip(&derivs) {
                        let db = &table[&k];
                        if db.is_zero() {
                            continue;
                        }
                        let prod = a.mul(db);
                        if prod.is_zero() {
                            continue;
                        }
                        for (parts, mult_rest) in &rest_splits {
                            let mut s = Vec::with_capacity(out_arity);
                            s.extend_from_slice(&mslots[..i]);
                            for (j, p) in nslots.iter().zip(parts) {
                                s.push(j.add(p));
                            }
                            s.extend_from_slice(&mslots[i + 1..]);
                            let factor = sgn * (mult_k * mult_rest) as i64;
                            local.add_term_scaled(s, &prod, &int(factor));
                        }
                    }
                }
            }
            local.terms
        })
        .collect();

    merge(out_arity, partials)
}

fn merge<C: Coefficient>(arity: usize, parts: Vec<BTreeMap<Slots, C>>) -> Cochain<C> {
    let mut out = Cochain::zero(arity);
    for part in parts {
        if out.terms.is_empty() {
            out.terms = part;
            continue;
        }
        for (s, c) in part {
            out.add_term(s, &c);
        }
    }
    out
}

/// Graded commutator, with grading = arity − 1.
pub fn gerstenhaber_bracket<C: Coefficient>(m: &Cochain<C>, n: &Cochain<C>) -> Cochain<C> {
    let mut out = gerstenhaber_product(m, n);
    let s = -sign((m.degree() * n.degree()).rem_euclid(2) == 0);
    out.add_scaled(&gerstenhaber_product(n, m), &Rational::from_integer(s.into()));
    out
}
