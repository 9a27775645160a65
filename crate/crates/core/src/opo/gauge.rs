//! Solving `δM = R` inside the span of ordered operators.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::concrete::concretize_operator_with;
use super::enumerate::{ordered_terms, parity_basis};
use super::term::AbstractOperator;
use crate::cochain::{hochschild_delta, Cochain};
use crate::error::{Result, StarError};
use crate::poisson::PoissonModel;
use crate::star::{combine, parity_sign, CochainSystem};

/// Parity-adapted ordered operators with `k` factors, concretized.
pub struct OpoBasis<C: crate::coefficient::Coefficient> {
    pub operators: Vec<AbstractOperator>,
    pub concrete: Vec<Cochain<C>>,
    pub deltas: Vec<Cochain<C>>,
}

pub fn opo_basis<M: PoissonModel>(model: &M, k: usize) -> OpoBasis<M::Coeff> {
    let operators = parity_basis(&ordered_terms(k, 2), parity_sign(k));
    let concrete: Vec<Cochain<M::Coeff>> = operators
        .par_iter()
        .map(|op| concretize_operator_with(op, model))
        .collect();
    let deltas = concrete.par_iter().map(hochschild_delta).collect();
    OpoBasis {
        operators,
        concrete,
        deltas,
    }
}

/// Even-level gauge: the solution is a rational combination of ordered
/// operators, with free weights set to zero.
pub struct OpoGauge<'a, M: PoissonModel> {
    model: &'a M,
    cache: Mutex<HashMap<usize, Arc<OpoBasis<M::Coeff>>>>,
}

impl<'a, M: PoissonModel> OpoGauge<'a, M> {
    pub fn new(model: &'a M) -> Self {
        OpoGauge {
            model,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn basis(&self, k: usize) -> Arc<OpoBasis<M::Coeff>> {
        if let Some(b) = self.cache.lock().expect("basis cache").get(&k) {
            return b.clone();
        }
        let b = Arc::new(opo_basis(self.model, k));
        self.cache.lock().expect("basis cache").insert(k, b.clone());
        b
    }

    /// Abstract and concrete solution of `δM = R` at level `k`.
    pub fn solve_abstract(&self, r: &Cochain<M::Coeff>, k: usize) -> Result<(AbstractOperator, Cochain<M::Coeff>)> {
        let basis = self.basis(k);
        let mut sys = CochainSystem::new(basis.operators.len());
        let cols: Vec<(usize, &Cochain<M::Coeff>)> = basis.deltas.iter().enumerate().collect();
        sys.add_equation(&cols, r);
        let x = sys.solve().ok_or_else(|| StarError::Infeasible {
            level: k,
            reason: format!(
                "no combination of the {} ordered operators with {k} factors cobounds R_{k}",
                basis.operators.len()
            ),
        })?;
        let m = combine(2, &basis.concrete, &x);
        if hochschild_delta(&m) != *r {
            return Err(StarError::Infeasible {
                level: k,
                reason: "ordered solution fails the residual check".into(),
            });
        }
        let mut op = AbstractOperator::zero(2);
        for (o, w) in basis.operators.iter().zip(&x) {
            op.add_assign(&o.scale(w));
        }
        Ok((op, m))
    }

    pub fn solve(&self, r: &Cochain<M::Coeff>, k: usize) -> Result<Cochain<M::Coeff>> {
        self.solve_abstract(r, k).map(|(_, m)| m)
    }
}
