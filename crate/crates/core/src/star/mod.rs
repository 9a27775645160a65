//! Order-by-order construction of Weyl-type star products
//! `f ⋆ g = Σ_k ν^k M_k(f,g)`.
//!
//! At order `k` associativity reads `δM_k = R_k` with
//! `R_k = ½ Σ_{l=1}^{k−1} [M_l, M_{k−l}] = Σ_{l=1}^{k−1} M_l ∘ M_{k−l}`.
//! The equation is solvable with `M_k(f,g) = (−1)^k M_k(g,f)` iff the
//! obstruction `AR_k` vanishes.

mod ansatz;
mod audit;
mod experiment;
mod obstruction;
mod solve;
mod system;

pub use ansatz::{ansatz_basis, ansatz_monomials};
pub use audit::{opo_audit, AuditStatus, LevelAudit};
pub use experiment::{ordered_experiment, ExperimentOptions, OrderedExperiment, OrderedSolution};

pub use obstruction::{
    coordinate_value, direct_obstruction, obstruction, shortcut_obstruction, ObstructionReport,
};
pub use solve::{content, parity_element, parity_pairs, parity_sign, DeltaSolver};
pub use system::{combine, CochainSystem};

use rayon::prelude::*;

use crate::coefficient::Coefficient;
use crate::cochain::{gerstenhaber_product, hochschild_delta, Cochain};
use crate::error::{Result, StarError};
use crate::multi_index::MultiIndex;
use crate::poisson::{PoissonMode, PoissonModel, PotentialSource};
use crate::rational::rat;

/// `M_1 = ½ P^{ij} ∂_i ⊗ ∂_j`.
pub fn first_order<M: PoissonModel>(model: &M) -> Cochain<M::Coeff> {
    let mut c = Cochain::zero(2);
    for i in 1..=3u8 {
        for j in 1..=3u8 {
            if i == j {
                continue;
            }
            let p = model.p_jet(i, j, &MultiIndex::EMPTY);
            c.add_term_scaled(vec![MultiIndex::unit(i), MultiIndex::unit(j)], &p, &rat(1, 2));
        }
    }
    c
}

/// `R_k` from `levels = [M_0, …, M_{k−1}]` (at least).
pub fn assemble_rhs<C: Coefficient>(levels: &[Cochain<C>], k: usize) -> Result<Cochain<C>> {
    if k >= 1 && levels.len() < k {
        return Err(StarError::MissingLevel(levels.len()));
    }
    for l in levels.iter().take(k) {
        l.expect_arity(2)?;
    }
    let parts: Vec<Cochain<C>> = (1..k)
        .into_par_iter()
        .map(|l| gerstenhaber_product(&levels[l], &levels[k - l]))
        .collect();
    let mut r = Cochain::zero(3);
    for p in parts {
        r.add_assign(&p);
    }
    Ok(r)
}

/// How free unknowns are fixed when a level is not uniquely determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    /// Blockwise solution with free unknowns set to zero.
    Canonical,
    /// Solution inside the span of concretized ordered operators.
    Opo,
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub order: usize,
    pub gauge: Gauge,
    /// Check the factor-count and derivative-balance grading of every `R_k`.
    pub check_grading: bool,
}

impl BuildOptions {
    pub fn new(order: usize) -> Self {
        BuildOptions {
            order,
            gauge: Gauge::Opo,
            check_grading: true,
        }
    }

    pub fn gauge(mut self, gauge: Gauge) -> Self {
        self.gauge = gauge;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarProduct<C: Coefficient> {
    pub mode: PoissonMode,
    pub source: PotentialSource,
    pub gauge: Gauge,
    /// `M_0 … M_N`.
    pub levels: Vec<Cochain<C>>,
    pub reports: Vec<ObstructionReport<C>>,
}

impl<C: Coefficient> StarProduct<C> {
    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> Result<&Cochain<C>> {
        self.levels.get(k).ok_or(StarError::MissingLevel(k))
    }
}

/// Outcome of a construction run: the levels built so far and, if the
/// recursion stopped early, why.
#[derive(Debug)]
pub struct Construction<C: Coefficient> {
    pub star: StarProduct<C>,
    pub failure: Option<StarError>,
}

impl<C: Coefficient> Construction<C> {
    pub fn into_result(self) -> Result<StarProduct<C>> {
        match self.failure {
            None => Ok(self.star),
            Some(e) => Err(e),
        }
    }
}

/// Checks every term of `r` against the grading expected at level `k`.
pub fn check_grading<M: PoissonModel>(model: &M, r: &Cochain<M::Coeff>, k: usize) -> Result<()> {
    for (slots, c) in r.terms() {
        let total: usize = slots.iter().map(|s| s.len()).sum();
        if let Some(detail) = model.grading_violation(c, total, k) {
            return Err(StarError::Grading { level: k, detail });
        }
    }
    Ok(())
}

/// Runs the recursion up to `options.order`, stopping at the first
/// nonzero obstruction or unsolvable level.
pub fn construct<M: PoissonModel>(model: &M, options: &BuildOptions) -> Construction<M::Coeff> {
    let mut star = StarProduct {
        mode: model.mode(),
        source: model.source(),
        gauge: options.gauge,
        levels: vec![Cochain::multiplication()],
        reports: Vec::new(),
    };
    if options.order == 0 {
        return Construction {
            star,
            failure: Some(StarError::Config("order must be at least 1".into())),
        };
    }
    star.levels.push(first_order(model));
    let solver = DeltaSolver::new();
    let opo = match options.gauge {
        Gauge::Opo => Some(crate::opo::OpoGauge::new(model)),
        Gauge::Canonical => None,
    };
    for k in 2..=options.order {
        let step = (|| -> Result<Cochain<M::Coeff>> {
            let r = assemble_rhs(&star.levels, k)?;
            if options.check_grading {
                check_grading(model, &r, k)?;
            }
            let report = obstruction(&r, k, Some(&star.levels))?;
            let zero = report.is_zero;
            star.reports.push(report);
            if !zero {
                return Err(StarError::ObstructionNonzero { level: k });
            }
            match &opo {
                Some(g) if k % 2 == 0 => g.solve(&r, k),
                _ => solver.solve(&r, k),
            }
        })();
        match step {
            Ok(m) => star.levels.push(m),
            Err(e) => return Construction { star, failure: Some(e) },
        }
    }
    Construction { star, failure: None }
}

pub fn build_star<M: PoissonModel>(model: &M, options: &BuildOptions) -> Result<StarProduct<M::Coeff>> {
    construct(model, options).into_result()
}

/// `δM_k − R_k` for each `k ≥ 2`; all empty for a valid product.
pub fn level_residuals<C: Coefficient>(star: &StarProduct<C>) -> Result<Vec<Cochain<C>>> {
    (2..star.levels.len())
        .map(|k| Ok(hochschild_delta(&star.levels[k]).sub(&assemble_rhs(&star.levels, k)?)))
        .collect()
}
