//! `δ`, insertion and bracket on contraction graphs, with the same sign
//! conventions as the concrete cochain calculus. The Leibniz rule becomes a
//! choice of landing place for every derivative index independently.

use super::term::{AbstractOperator, AbstractTerm, PFactor, Target};
use crate::rational::{int, Rational};

fn sign(even: bool) -> i64 {
    if even {
        1
    } else {
        -1
    }
}

fn remap(t: &AbstractTerm, arity: usize, f: impl Fn(Target) -> Target) -> AbstractTerm {
    AbstractTerm {
        coefficient: t.coefficient.clone(),
        arity,
        factors: t
            .factors
            .iter()
            .map(|p| PFactor::new(f(p.upper[0]), f(p.upper[1])))
            .collect(),
    }
}

pub fn abstract_delta_term(t: &AbstractTerm) -> AbstractOperator {
    let m = t.arity - 1;
    let arity = t.arity + 1;
    let mut out = AbstractOperator::zero(arity);

    // f_0 · M(f_1, …)
    out.add_term(&remap(t, arity, |x| match x {
        Target::Arg(a) => Target::Arg(a + 1),
        x => x,
    }));

    // −(−1)^i M(…, f_i f_{i+1}, …)
    for i in 0..=m {
        let s = int(-sign(i % 2 == 0));
        let at_i = t.uppers_at(Target::Arg(i));
        for mask in 0u32..(1u32 << at_i.len()) {
            let mut r = remap(t, arity, |x| match x {
                Target::Arg(a) if a > i => Target::Arg(a + 1),
                x => x,
            });
            for (bit, (f, side)) in at_i.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    r.factors[*f].upper[*side] = Target::Arg(i + 1);
                }
            }
            out.add_term(&r.scaled(&s));
        }
    }

    // (−1)^m M(f_0, …, f_m) · f_{m+1}
    out.add_term(&remap(t, arity, |x| x).scaled(&int(sign(m.is_multiple_of(2)))));
    out
}

pub fn abstract_delta(op: &AbstractOperator) -> AbstractOperator {
    let mut out = AbstractOperator::zero(op.arity() + 1);
    for t in op.terms() {
        out.add_assign(&abstract_delta_term(&t));
    }
    out
}

/// `M ∘ N` for single terms.
pub fn abstract_product_term(m: &AbstractTerm, n: &AbstractTerm) -> AbstractOperator {
    let nd = n.arity - 1;
    let arity = m.arity + nd;
    let pm = m.factors.len();
    let mut out = AbstractOperator::zero(arity);
    let coeff: Rational = &m.coefficient * &n.coefficient;
    for i in 0..m.arity {
        let s = int(sign((i * nd).is_multiple_of(2)));
        let at_i = m.uppers_at(Target::Arg(i));
        let mut landing: Vec<Target> = (0..n.factors.len()).map(|g| Target::Factor(pm + g)).collect();
        landing.extend((0..n.arity).map(|b| Target::Arg(i + b)));

        let mut base_factors: Vec<PFactor> = m
            .factors
            .iter()
            .map(|p| {
                let r = |x: Target| match x {
                    Target::Arg(a) if a > i => Target::Arg(a + nd),
                    x => x,
                };
                PFactor::new(r(p.upper[0]), r(p.upper[1]))
            })
            .collect();
        base_factors.extend(n.factors.iter().map(|p| {
            let r = |x: Target| match x {
                Target::Factor(g) => Target::Factor(pm + g),
                Target::Arg(b) => Target::Arg(i + b),
            };
            PFactor::new(r(p.upper[0]), r(p.upper[1]))
        }));

        // every derivative that hit argument i picks where it lands
        let mut choice = vec![0usize; at_i.len()];
        loop {
            let mut factors = base_factors.clone();
            for (c, (f, side)) in choice.iter().zip(&at_i) {
                factors[*f].upper[*side] = landing[*c];
            }
            out.add_term(&AbstractTerm {
                coefficient: &coeff * &s,
                arity,
                factors,
            });
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < landing.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
    }
    out
}

pub fn abstract_product(m: &AbstractOperator, n: &AbstractOperator) -> AbstractOperator {
    let mut out = AbstractOperator::zero(m.arity() + n.arity() - 1);
    for a in m.terms() {
        for b in n.terms() {
            out.add_assign(&abstract_product_term(&a, &b));
        }
    }
    out
}

pub fn abstract_bracket(m: &AbstractOperator, n: &AbstractOperator) -> AbstractOperator {
    let md = m.arity() - 1;
    let nd = n.arity() - 1;
    let mut out = abstract_product(m, n);
    let s = int(-sign((md * nd).is_multiple_of(2)));
    out.add_assign(&abstract_product(n, m).scale(&s));
    out
}
