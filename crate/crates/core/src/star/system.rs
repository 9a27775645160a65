//! Linear systems whose unknowns are rational weights of given cochains.
//!
//! Each equation `Σ_u x_u · C_u = T` between cochains is flattened into
//! one scalar row per (slot tuple, coefficient monomial).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coefficient::Coefficient;
use crate::cochain::{Cochain, Slots};
use crate::linalg::{self, Eliminator};
use crate::rational::Rational;

type RowKey<K> = (usize, Slots, K);

pub struct CochainSystem<C: Coefficient> {
    unknowns: usize,
    rows: BTreeMap<RowKey<C::Key>, BTreeMap<usize, Rational>>,
    rhs: BTreeMap<RowKey<C::Key>, Rational>,
    equations: usize,
}

impl<C: Coefficient> CochainSystem<C> {
    pub fn new(unknowns: usize) -> Self {
        CochainSystem {
            unknowns,
            rows: BTreeMap::new(),
            rhs: BTreeMap::new(),
            equations: 0,
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    /// Adds `Σ_u x_u · columns[u] = target`.
    pub fn add_equation(&mut self, columns: &[(usize, &Cochain<C>)], target: &Cochain<C>) {
        let eq = self.equations;
        self.equations += 1;
        for (u, col) in columns {
            assert!(*u < self.unknowns, "unknown index out of range");
            for (slots, c) in col.terms() {
                for (key, v) in c.coordinates() {
                    let row = self.rows.entry((eq, slots.clone(), key)).or_default();
                    *row.entry(*u).or_insert_with(crate::rational::zero) += v;
                }
            }
        }
        for (slots, c) in target.terms() {
            for (key, v) in c.coordinates() {
                *self
                    .rhs
                    .entry((eq, slots.clone(), key))
                    .or_insert_with(crate::rational::zero) += v;
            }
        }
    }

    fn assembled(&self) -> (Vec<Vec<(usize, Rational)>>, Vec<Rational>) {
        let mut keys: Vec<&RowKey<C::Key>> = self.rows.keys().collect();
        for k in self.rhs.keys() {
            if !self.rows.contains_key(k) {
                keys.push(k);
            }
        }
        let mut matrix = Vec::with_capacity(keys.len());
        let mut rhs = Vec::with_capacity(keys.len());
        for k in keys {
            let row: Vec<(usize, Rational)> = self
                .rows
                .get(k)
                .map(|r| r.iter().filter(|(_, v)| !Zero::is_zero(*v)).map(|(c, v)| (*c, v.clone())).collect())
                .unwrap_or_default();
            matrix.push(row);
            rhs.push(self.rhs.get(k).cloned().unwrap_or_else(crate::rational::zero));
        }
        (matrix, rhs)
    }

    pub fn scalar_rows(&self) -> usize {
        self.rows.len() + self.rhs.keys().filter(|k| !self.rows.contains_key(*k)).count()
    }

    /// Solution with free unknowns set to zero, or `None` if inconsistent.
    pub fn solve(&self) -> Option<Vec<Rational>> {
        let (m, b) = self.assembled();
        linalg::solve(&m, &b, self.unknowns)
    }

    pub fn rank(&self) -> usize {
        let (m, _) = self.assembled();
        linalg::rank(&m, self.unknowns)
    }

    /// Rank of the matrix augmented with the right-hand side.
    pub fn augmented_rank(&self) -> usize {
        let (m, b) = self.assembled();
        let mut elim = Eliminator::new(self.unknowns + 1);
        for (row, v) in m.iter().zip(&b) {
            let mut entries: Vec<(usize, &Rational)> = row.iter().map(|(c, x)| (*c, x)).collect();
            entries.push((self.unknowns, v));
            elim.insert(linalg::integer_row(entries).0);
        }
        elim.rank()
    }
}

/// `Σ_u x_u · columns[u]`.
pub fn combine<C: Coefficient>(arity: usize, columns: &[Cochain<C>], x: &[Rational]) -> Cochain<C> {
    let mut out = Cochain::zero(arity);
    for (c, w) in columns.iter().zip(x) {
        if !Zero::is_zero(w) {
            out.add_scaled(c, w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetPolynomial;
    use crate::multi_index::MultiIndex;
    use crate::rational::int;

    #[test]
    fn recovers_weights() {
        let s = |d: &str| MultiIndex::parse_digits(d).unwrap();
        let a: Cochain<JetPolynomial> = Cochain::monomial(vec![s("1"), s("2")], JetPolynomial::phi("3"));
        let b: Cochain<JetPolynomial> = Cochain::monomial(vec![s("1"), s("2")], JetPolynomial::phi("12"));
        let target = combine(2, &[a.clone(), b.clone()], &[int(2), int(-3)]);
        let mut sys = CochainSystem::new(2);
        sys.add_equation(&[(0, &a), (1, &b)], &target);
        assert_eq!(sys.solve().unwrap(), vec![int(2), int(-3)]);
        let mut bad = CochainSystem::new(1);
        bad.add_equation(&[(0, &a)], &target);
        assert!(bad.solve().is_none());
        assert_eq!(bad.rank(), 1);
        assert_eq!(bad.augmented_rank(), 2);
    }
}
