//! Expansion of contraction graphs into explicit cochains by summing every
//! upper index over `{1,2,3}`.

use rayon::prelude::*;

use super::term::{AbstractOperator, AbstractTerm, Target};
use crate::coefficient::Coefficient;
use crate::cochain::Cochain;
use crate::jet::JetPolynomial;
use crate::multi_index::MultiIndex;
use crate::poisson::{PoissonMode, PoissonModel, SymbolicModel};

pub fn concretize_with<M: PoissonModel>(t: &AbstractTerm, model: &M) -> Cochain<M::Coeff> {
    let p = t.factors.len();
    let uppers = 2 * p;
    let total = 3usize.pow(uppers as u32);
    let targets: Vec<Target> = t.factors.iter().flat_map(|f| f.upper).collect();
    let coeff = M::Coeff::from_rational(t.coefficient.clone());
    if p == 0 {
        return Cochain::monomial(vec![MultiIndex::EMPTY; t.arity], coeff);
    }
    // the first factor's pair is the outer parallel loop
    let chunk = 9usize;
    let parts: Vec<Cochain<M::Coeff>> = (0..chunk)
        .into_par_iter()
        .map(|head| {
            let mut local = Cochain::zero(t.arity);
            let (a0, b0) = ((head / 3) as u8 + 1, (head % 3) as u8 + 1);
            if a0 == b0 {
                return local;
            }
            let rest = total / chunk;
            let mut vals = vec![0u8; uppers];
            vals[0] = a0;
            vals[1] = b0;
            'assign: for code in 0..rest {
                let mut c = code;
                for v in vals.iter_mut().skip(2) {
                    *v = (c % 3) as u8 + 1;
                    c /= 3;
                }
                for f in 1..p {
                    if vals[2 * f] == vals[2 * f + 1] {
                        continue 'assign;
                    }
                }
                let mut derivs = vec![MultiIndex::EMPTY; p];
                let mut slots = vec![MultiIndex::EMPTY; t.arity];
                for (u, target) in targets.iter().enumerate() {
                    match target {
                        Target::Factor(g) => derivs[*g] = derivs[*g].with(vals[u]),
                        Target::Arg(a) => slots[*a] = slots[*a].with(vals[u]),
                    }
                }
                let mut prod = coeff.clone();
                for f in 0..p {
                    let pj = model.p_jet(vals[2 * f], vals[2 * f + 1], &derivs[f]);
                    if pj.is_zero() {
                        continue 'assign;
                    }
                    prod = prod.mul(&pj);
                }
                local.add_term(slots, &prod);
            }
            local
        })
        .collect();
    let mut out = Cochain::zero(t.arity);
    for part in parts {
        out.add_assign(&part);
    }
    out
}

pub fn concretize_operator_with<M: PoissonModel>(op: &AbstractOperator, model: &M) -> Cochain<M::Coeff> {
    let mut out = Cochain::zero(op.arity());
    for t in op.terms() {
        out.add_assign(&concretize_with(&t, model));
    }
    out
}

/// Concretization with symbolic potentials.
pub fn concretize(t: &AbstractTerm, mode: PoissonMode) -> Cochain<JetPolynomial> {
    concretize_with(t, &SymbolicModel::new(mode))
}

pub fn concretize_operator(op: &AbstractOperator, mode: PoissonMode) -> Cochain<JetPolynomial> {
    concretize_operator_with(op, &SymbolicModel::new(mode))
}
