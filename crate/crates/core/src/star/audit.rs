//! Whether constructed levels can be written as ordered operators.

use serde::Serialize;

use super::{assemble_rhs, combine, parity_sign, CochainSystem, StarProduct};
use crate::cochain::Cochain;
use crate::error::Result;
use crate::opo::{all_terms, concretize_operator_with, is_opo, parity_basis, AbstractOperator, OpoGauge};
use crate::poisson::PoissonModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditStatus {
    /// Lifts to a combination of ordered terms.
    Opo,
    /// Lifts only when unordered terms are admitted.
    NotOpo,
    /// No lift within the searched spans.
    LiftFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelAudit {
    pub k: usize,
    pub status: AuditStatus,
    /// The lift in text form, when one was found.
    pub lift: Option<String>,
    pub lift_terms: usize,
    pub ordered_terms: usize,
    /// Whether the unordered span was searched.
    pub full_search: bool,
    /// Whether `δX = R_k` has a solution among ordered operators.
    pub opo_reselectable: Option<bool>,
}

fn lift<C: crate::coefficient::Coefficient>(
    ops: &[AbstractOperator],
    concrete: &[Cochain<C>],
    target: &Cochain<C>,
) -> Option<AbstractOperator> {
    let mut sys = CochainSystem::new(ops.len());
    let cols: Vec<(usize, &Cochain<C>)> = concrete.iter().enumerate().collect();
    sys.add_equation(&cols, target);
    let x = sys.solve()?;
    if combine(2, concrete, &x) != *target {
        return None;
    }
    let mut op = AbstractOperator::zero(2);
    for (o, w) in ops.iter().zip(&x) {
        op.add_assign(&o.scale(w));
    }
    Some(op)
}

/// Audits every level. Unordered spans are searched up to `full_search_factors`.
pub fn opo_audit<M: PoissonModel>(
    star: &StarProduct<M::Coeff>,
    model: &M,
    full_search_factors: usize,
) -> Result<Vec<LevelAudit>> {
    let gauge = OpoGauge::new(model);
    let mut out = Vec::with_capacity(star.levels.len());
    for (k, level) in star.levels.iter().enumerate() {
        if k == 0 {
            out.push(LevelAudit {
                k,
                status: AuditStatus::Opo,
                lift: Some("@1() @2()".into()),
                lift_terms: 1,
                ordered_terms: 1,
                full_search: false,
                opo_reselectable: None,
            });
            continue;
        }
        let basis = gauge.basis(k);
        let ordered = lift(&basis.operators, &basis.concrete, level);
        let (status, found, full_search) = match ordered {
            Some(op) => (AuditStatus::Opo, Some(op), false),
            None if k <= full_search_factors => {
                let ops = parity_basis(&all_terms(k, 2), parity_sign(k));
                let concrete: Vec<Cochain<M::Coeff>> =
                    ops.iter().map(|o| concretize_operator_with(o, model)).collect();
                match lift(&ops, &concrete, level) {
                    Some(op) => (AuditStatus::NotOpo, Some(op), true),
                    None => (AuditStatus::LiftFailed, None, true),
                }
            }
            None => (AuditStatus::LiftFailed, None, false),
        };
        let ordered_terms = found
            .as_ref()
            .map(|op| op.terms().iter().filter(|t| is_opo(t)).count())
            .unwrap_or(0);
        let opo_reselectable = if k >= 2 {
            let r = assemble_rhs(&star.levels, k)?;
            Some(gauge.solve_abstract(&r, k).is_ok())
        } else {
            None
        };
        out.push(LevelAudit {
            k,
            status,
            lift_terms: found.as_ref().map_or(0, |op| op.len()),
            lift: found.map(|op| op.to_string()),
            ordered_terms,
            full_search,
            opo_reselectable,
        });
    }
    Ok(out)
}
