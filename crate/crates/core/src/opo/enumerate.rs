//! Enumeration of contraction graphs with a given number of factors.

use std::collections::BTreeSet;

use num_traits::{One, Signed};

use super::term::{AbstractOperator, AbstractTerm, PFactor, Target};
use crate::rational::{int, Rational};

fn pairs(targets: &[Target]) -> Vec<(Target, Target)> {
    let mut out = Vec::new();
    for a in 0..targets.len() {
        for b in a + 1..targets.len() {
            out.push((targets[a], targets[b]));
        }
    }
    out
}

fn collect(
    p: usize,
    arity: usize,
    choices: impl Fn(usize) -> Vec<(Target, Target)>,
) -> Vec<AbstractTerm> {
    let per: Vec<Vec<(Target, Target)>> = (0..p).map(&choices).collect();
    let mut seen: BTreeSet<Vec<PFactor>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut idx = vec![0usize; p];
    if per.iter().any(|c| c.is_empty()) {
        return out;
    }
    loop {
        let factors: Vec<PFactor> = idx
            .iter()
            .enumerate()
            .map(|(f, &i)| PFactor::new(per[f][i].0, per[f][i].1))
            .collect();
        let t = AbstractTerm {
            coefficient: Rational::one(),
            arity,
            factors,
        };
        if t.arg_degrees().iter().all(|&d| d >= 1) {
            if let Some(c) = t.canonical() {
                if seen.insert(c.factors.clone()) {
                    out.push(AbstractTerm {
                        coefficient: Rational::one(),
                        ..c
                    });
                }
            }
        }
        let mut pos = 0;
        while pos < p {
            idx[pos] += 1;
            if idx[pos] < per[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == p {
            break;
        }
    }
    out
}

/// Distinct ordered terms with `p` factors and every argument differentiated.
pub fn ordered_terms(p: usize, arity: usize) -> Vec<AbstractTerm> {
    collect(p, arity, |f| {
        let mut targets: Vec<Target> = (f + 1..p).map(Target::Factor).collect();
        targets.extend((0..arity).map(Target::Arg));
        pairs(&targets)
    })
}

/// Distinct terms with `p` factors and every argument differentiated, with
/// no ordering requirement.
pub fn all_terms(p: usize, arity: usize) -> Vec<AbstractTerm> {
    collect(p, arity, |_| {
        let mut targets: Vec<Target> = (0..p).map(Target::Factor).collect();
        targets.extend((0..arity).map(Target::Arg));
        pairs(&targets)
    })
}

/// Bilinear combinations `t + s·t(g,f)`, one per orbit, nonzero ones only.
pub fn parity_basis(terms: &[AbstractTerm], sign: i64) -> Vec<AbstractOperator> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    for t in terms {
        let mut op = AbstractOperator::from_term(t);
        op.add_term(&t.swap_args(0, 1).scaled(&int(sign)));
        if op.is_zero() {
            continue;
        }
        let lead = op.terms()[0].coefficient.clone();
        let op = if lead.is_negative() { op.scale(&int(-1)) } else { op };
        if seen.insert(op.to_string()) {
            out.push(op);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opo::graph::is_opo;

    #[test]
    fn ordered_counts() {
        assert_eq!(ordered_terms(1, 2).len(), 1);
        assert_eq!(ordered_terms(2, 2).len(), 3);
        for p in 1..=3 {
            assert!(ordered_terms(p, 2).iter().all(is_opo));
        }
    }

    #[test]
    fn all_terms_contain_ordered_ones() {
        let all = all_terms(2, 2);
        let ordered = ordered_terms(2, 2);
        assert!(all.len() > ordered.len());
        for t in &ordered {
            assert!(all.contains(t));
        }
        assert!(all.iter().any(|t| !is_opo(t)));
    }

    #[test]
    fn parity_basis_for_bracket() {
        let b = ordered_terms(1, 2);
        assert_eq!(parity_basis(&b, -1).len(), 1);
        assert!(parity_basis(&b, 1).is_empty());
    }
}
