//! Inversion of `δ` on bilinear cochains with prescribed parity.
//!
//! `δ` only splits and merges slots, so it commutes with multiplication by
//! coefficients and preserves the content `Σ_j I_j` of a slot tuple. The
//! system `δM = R` therefore decouples into small integer blocks, one per
//! content, each solved once and reused for every coefficient.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::coefficient::Coefficient;
use crate::cochain::{hochschild_delta, Cochain, Slots};
use crate::error::{Result, StarError};
use crate::linalg::Transform;
use crate::multi_index::MultiIndex;
use crate::rational::{int, Rational};

/// Sign of the parity `M(f,g) = s·M(g,f)` at level `k`.
pub fn parity_sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn content(slots: &[MultiIndex]) -> MultiIndex {
    slots.iter().fold(MultiIndex::EMPTY, |acc, s| acc.add(s))
}

/// Slot pairs `(I, J)` with `I + J = content`, both nonempty, `I ≤ J`,
/// dropping `I = J` when the parity is odd.
pub fn parity_pairs(content: &MultiIndex, sign: i64) -> Vec<(MultiIndex, MultiIndex)> {
    content
        .sub_indices()
        .into_iter()
        .filter_map(|i| {
            let j = content.checked_sub(&i)?;
            if i.is_empty() || j.is_empty() || i > j || (i == j && sign < 0) {
                None
            } else {
                Some((i, j))
            }
        })
        .collect()
}

/// `e_{IJ} + s·e_{JI}`, or `e_{II}` on the diagonal.
pub fn parity_element<C: Coefficient>(i: MultiIndex, j: MultiIndex, sign: i64, coeff: &C) -> Cochain<C> {
    let mut c = Cochain::zero(2);
    c.add_term(vec![i, j], coeff);
    if i != j {
        c.add_term_scaled(vec![j, i], coeff, &int(sign));
    }
    c
}

struct Block {
    pairs: Vec<(MultiIndex, MultiIndex)>,
    rows: HashMap<Slots, usize>,
    transform: Transform,
}

impl Block {
    fn build(content: &MultiIndex, sign: i64) -> Block {
        let pairs = parity_pairs(content, sign);
        let mut keys: BTreeMap<Slots, Vec<(usize, Rational)>> = BTreeMap::new();
        for (c, (i, j)) in pairs.iter().enumerate() {
            let d = hochschild_delta(&parity_element::<Rational>(*i, *j, sign, &int(1)));
            for (slots, v) in d.terms() {
                keys.entry(slots.clone()).or_default().push((c, v.clone()));
            }
        }
        let mut rows = HashMap::with_capacity(keys.len());
        let mut matrix = Vec::with_capacity(keys.len());
        for (idx, (slots, row)) in keys.into_iter().enumerate() {
            rows.insert(slots, idx);
            matrix.push(row);
        }
        let transform = Transform::new(&matrix, pairs.len());
        Block {
            pairs,
            rows,
            transform,
        }
    }
}

/// Solves `δM = R` for bilinear `M` of parity `(−1)^k`, with every free
/// unknown set to zero. Blocks are cached across calls.
#[derive(Default)]
pub struct DeltaSolver {
    cache: Mutex<HashMap<(MultiIndex, i64), Arc<Block>>>,
}

impl DeltaSolver {
    pub fn new() -> Self {
        Self::default()
    }

    fn block(&self, content: &MultiIndex, sign: i64) -> Arc<Block> {
        let key = (*content, sign);
        if let Some(b) = self.cache.lock().expect("block cache").get(&key) {
            return b.clone();
        }
        let b = Arc::new(Block::build(content, sign));
        self.cache
            .lock()
            .expect("block cache")
            .entry(key)
            .or_insert(b)
            .clone()
    }

    /// Particular solution without the final residual check.
    pub fn particular<C: Coefficient>(&self, r: &Cochain<C>, k: usize) -> Result<Cochain<C>> {
        r.expect_arity(3)?;
        let sign = parity_sign(k);
        let mut by_content: BTreeMap<MultiIndex, Vec<(&Slots, &C)>> = BTreeMap::new();
        for (slots, c) in r.terms() {
            by_content.entry(content(slots)).or_default().push((slots, c));
        }
        let blocks: Vec<(MultiIndex, Vec<(&Slots, &C)>)> = by_content.into_iter().collect();
        let parts: Vec<Result<Cochain<C>>> = blocks
            .par_iter()
            .map(|(t, terms)| {
                let block = self.block(t, sign);
                let mut rhs: HashMap<usize, &C> = HashMap::with_capacity(terms.len());
                for (slots, c) in terms {
                    match block.rows.get(*slots) {
                        Some(idx) => {
                            rhs.insert(*idx, *c);
                        }
                        None => {
                            return Err(StarError::Infeasible {
                                level: k,
                                reason: format!("term {slots:?} lies outside the image of δ"),
                            })
                        }
                    }
                }
                let mut out = Cochain::zero(2);
                for p in &block.transform.pivots {
                    let mut acc = C::zero();
                    for (j, w) in &p.combo {
                        if let Some(c) = rhs.get(j) {
                            acc.add_scaled(c, &Rational::from_integer(w.clone()));
                        }
                    }
                    if acc.is_zero() {
                        continue;
                    }
                    let acc = acc.scale(&Rational::new(1.into(), p.pivot.clone()));
                    let (i, j) = block.pairs[p.column];
                    out.add_assign(&parity_element(i, j, sign, &acc));
                }
                Ok(out)
            })
            .collect();
        let mut m = Cochain::zero(2);
        for p in parts {
            m.add_assign(&p?);
        }
        Ok(m)
    }

    /// Solution with `δM = R` verified exactly.
    pub fn solve<C: Coefficient>(&self, r: &Cochain<C>, k: usize) -> Result<Cochain<C>> {
        let m = self.particular(r, k)?;
        let residual = hochschild_delta(&m).sub(r);
        if !residual.is_zero() {
            return Err(StarError::Infeasible {
                level: k,
                reason: format!(
                    "δM − R has {} surviving terms; right-hand side is not a parity-{} coboundary",
                    residual.len(),
                    if parity_sign(k) > 0 { "even" } else { "odd" }
                ),
            });
        }
        Ok(m)
    }
}
