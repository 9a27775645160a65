//! Whether the recursion through order four can be kept inside ordered
//! operators.
//!
//! Unknowns are the weights of the parity-adapted ordered operators with two
//! factors (for `M_2`) and three factors (for `M_3`). The equations are
//! `δM_2 = R_2`, `δM_3 = M_1∘M_2 + M_2∘M_1` and
//! `A([M_1∘M_3 + M_3∘M_1 + M_2∘M_2]_{(1,1,1)}) = 0`. The last one is linear in
//! the `M_3` weights; the `M_2∘M_2` part is either identically zero on the
//! basis or `M_2` is pinned by the first equation.

use serde::Serialize;

use super::{
    assemble_rhs, check_grading, combine, direct_obstruction, first_order, obstruction, parity_sign,
    CochainSystem, DeltaSolver, ObstructionReport,
};
use crate::coefficient::Coefficient;
use crate::cochain::{gerstenhaber_product, hochschild_delta, Cochain};
use crate::error::{Result, StarError};
use crate::opo::{all_terms, concretize_operator_with, opo_basis, parity_basis, AbstractOperator, OpoGauge};
use crate::poisson::PoissonModel;
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, Default)]
pub struct ExperimentOptions {
    /// Also test feasibility once unordered three-factor terms are admitted
    /// into `M_3`.
    pub include_unordered: bool,
    /// Check the grading of `R_2 … R_4` along the unrestricted path.
    pub check_grading: bool,
}

/// An ordered `M_2`, `M_3` pair satisfying every equation.
#[derive(Clone, Debug, Serialize)]
pub struct OrderedSolution {
    pub m2: String,
    pub m3: String,
}

#[derive(Clone, Debug)]
pub struct OrderedExperiment<C: Coefficient> {
    pub m2_unknowns: usize,
    pub m3_unknowns: usize,
    /// Whether `[B∘B']_{(1,1,1)}` is antisymmetrically zero for all two-factor basis pairs.
    pub quadratic_vanishes: bool,
    /// Whether `M_2` is fixed by `δM_2 = R_2` within the ordered span.
    pub m2_unique: bool,
    pub rank: usize,
    pub augmented_rank: usize,
    pub scalar_rows: usize,
    pub feasible: bool,
    pub solution: Option<OrderedSolution>,
    /// `δM_3 = R_3` is solvable with no restriction on `M_3`.
    pub unrestricted_m3_feasible: bool,
    /// Whether the unrestricted `M_3` lies in the ordered span.
    pub unrestricted_m3_ordered: Option<bool>,
    /// Obstruction of `R_4` along the unrestricted path.
    pub unrestricted_ar4: Option<ObstructionReport<C>>,
    /// Feasibility with unordered three-factor terms admitted.
    pub with_unordered: Option<bool>,
}

fn weighted(ops: &[AbstractOperator], x: &[Rational]) -> AbstractOperator {
    let mut op = AbstractOperator::zero(2);
    for (o, w) in ops.iter().zip(x) {
        op.add_assign(&o.scale(w));
    }
    op
}

fn symmetric_product<C: Coefficient>(a: &Cochain<C>, b: &Cochain<C>) -> Cochain<C> {
    gerstenhaber_product(a, b).add(&gerstenhaber_product(b, a))
}

struct Level3<C: Coefficient> {
    operators: Vec<AbstractOperator>,
    concrete: Vec<Cochain<C>>,
    deltas: Vec<Cochain<C>>,
    obstructions: Vec<Cochain<C>>,
}

fn level3<C: Coefficient>(
    operators: Vec<AbstractOperator>,
    concrete: Vec<Cochain<C>>,
    m1: &Cochain<C>,
) -> Result<Level3<C>> {
    use rayon::prelude::*;
    let deltas = concrete.par_iter().map(hochschild_delta).collect();
    let obstructions = concrete
        .par_iter()
        .map(|b| direct_obstruction(&symmetric_product(m1, b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Level3 {
        operators,
        concrete,
        deltas,
        obstructions,
    })
}

/// Solves the coupled system; returns the `M_2`, `M_3` weights if consistent.
#[allow(clippy::too_many_arguments)]
fn coupled<C: Coefficient>(
    m2: &[Cochain<C>],
    m2_deltas: &[Cochain<C>],
    m2_fixed: Option<&Cochain<C>>,
    r2: &Cochain<C>,
    m1: &Cochain<C>,
    l3: &Level3<C>,
) -> Result<(CochainSystem<C>, Option<(Vec<Rational>, Vec<Rational>)>)> {
    let minus = int(-1);
    match m2_fixed {
        Some(m2) => {
            let n3 = l3.operators.len();
            let mut sys = CochainSystem::new(n3);
            let r3 = symmetric_product(m1, m2);
            let cols: Vec<(usize, &Cochain<C>)> = l3.deltas.iter().enumerate().collect();
            sys.add_equation(&cols, &r3);
            let q = direct_obstruction(&gerstenhaber_product(m2, m2))?.scale(&minus);
            let cols: Vec<(usize, &Cochain<C>)> = l3.obstructions.iter().enumerate().collect();
            sys.add_equation(&cols, &q);
            let sol = sys.solve().map(|y| (Vec::new(), y));
            Ok((sys, sol))
        }
        None => {
            let n2 = m2.len();
            let n3 = l3.operators.len();
            let mut sys = CochainSystem::new(n2 + n3);
            let cols: Vec<(usize, &Cochain<C>)> = m2_deltas.iter().enumerate().collect();
            sys.add_equation(&cols, r2);
            let neg: Vec<Cochain<C>> = m2.iter().map(|b| symmetric_product(m1, b).scale(&minus)).collect();
            let mut cols: Vec<(usize, &Cochain<C>)> = neg.iter().enumerate().collect();
            cols.extend(l3.deltas.iter().enumerate().map(|(b, d)| (n2 + b, d)));
            sys.add_equation(&cols, &Cochain::zero(4));
            let cols: Vec<(usize, &Cochain<C>)> =
                l3.obstructions.iter().enumerate().map(|(b, d)| (n2 + b, d)).collect();
            sys.add_equation(&cols, &Cochain::zero(3));
            let sol = sys.solve().map(|mut x| {
                let y = x.split_off(n2);
                (x, y)
            });
            Ok((sys, sol))
        }
    }
}

pub fn ordered_experiment<M: PoissonModel>(
    model: &M,
    options: &ExperimentOptions,
) -> Result<OrderedExperiment<M::Coeff>> {
    let m0 = Cochain::multiplication();
    let m1 = first_order(model);
    let r2 = gerstenhaber_product(&m1, &m1);
    let b2 = opo_basis(model, 2);
    let b3 = opo_basis(model, 3);
    let n2 = b2.operators.len();

    let mut quadratic_vanishes = true;
    'outer: for a in &b2.concrete {
        for c in &b2.concrete {
            if !direct_obstruction(&gerstenhaber_product(a, c))?.is_zero() {
                quadratic_vanishes = false;
                break 'outer;
            }
        }
    }

    let mut m2_sys = CochainSystem::new(n2);
    let cols: Vec<(usize, &Cochain<M::Coeff>)> = b2.deltas.iter().enumerate().collect();
    m2_sys.add_equation(&cols, &r2);
    let m2_unique = m2_sys.rank() == n2;
    let fixed_x = match m2_sys.solve() {
        Some(x) if m2_unique => Some(x),
        Some(_) => None,
        None => {
            return Err(StarError::Infeasible {
                level: 2,
                reason: "no ordered M_2 cobounds R_2".into(),
            })
        }
    };
    let fixed_m2 = fixed_x.as_ref().map(|x| combine(2, &b2.concrete, x));
    if fixed_m2.is_none() && !quadratic_vanishes {
        return Err(StarError::Config(
            "M_2 is not unique and M_2∘M_2 contributes to the obstruction; the system is not linear".into(),
        ));
    }

    let l3 = level3(b3.operators, b3.concrete, &m1)?;
    let (sys, sol) = coupled(&b2.concrete, &b2.deltas, fixed_m2.as_ref(), &r2, &m1, &l3)?;
    let solution = sol.map(|(x, y)| {
        let m2 = weighted(&b2.operators, fixed_x.as_deref().unwrap_or(&x));
        OrderedSolution {
            m2: m2.to_string(),
            m3: weighted(&l3.operators, &y).to_string(),
        }
    });

    // unrestricted path: ordered M_2, then any M_3
    let gauge = OpoGauge::new(model);
    let m2 = gauge.solve(&r2, 2)?;
    let mut levels = vec![m0, m1.clone(), m2];
    let r3 = assemble_rhs(&levels, 3)?;
    if options.check_grading {
        check_grading(model, &r2, 2)?;
        check_grading(model, &r3, 3)?;
    }
    let (unrestricted_m3_feasible, unrestricted_m3_ordered, unrestricted_ar4) =
        match DeltaSolver::new().solve(&r3, 3) {
            Ok(m3) => {
                let mut lift = CochainSystem::new(l3.concrete.len());
                let cols: Vec<(usize, &Cochain<M::Coeff>)> = l3.concrete.iter().enumerate().collect();
                lift.add_equation(&cols, &m3);
                let ordered = lift.solve().is_some();
                levels.push(m3);
                let r4 = assemble_rhs(&levels, 4)?;
                if options.check_grading {
                    check_grading(model, &r4, 4)?;
                }
                (true, Some(ordered), Some(obstruction(&r4, 4, Some(&levels))?))
            }
            Err(StarError::Infeasible { .. }) => (false, None, None),
            Err(e) => return Err(e),
        };

    let with_unordered = if options.include_unordered {
        let ops = parity_basis(&all_terms(3, 2), parity_sign(3));
        let concrete = ops.iter().map(|o| concretize_operator_with(o, model)).collect();
        let wide = level3(ops, concrete, &m1)?;
        let (_, s) = coupled(&b2.concrete, &b2.deltas, fixed_m2.as_ref(), &r2, &m1, &wide)?;
        Some(s.is_some())
    } else {
        None
    };

    Ok(OrderedExperiment {
        m2_unknowns: n2,
        m3_unknowns: l3.operators.len(),
        quadratic_vanishes,
        m2_unique,
        rank: sys.rank(),
        augmented_rank: sys.augmented_rank(),
        scalar_rows: sys.scalar_rows(),
        feasible: solution.is_some(),
        solution,
        unrestricted_m3_feasible,
        unrestricted_m3_ordered,
        unrestricted_ar4,
        with_unordered,
    })
}
