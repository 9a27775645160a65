//! Exact sparse elimination over the integers.
//!
//! Rows are scaled to primitive integer vectors and reduced fraction-free:
//! `r ← a_pp·r − r_p·pivot_row`, followed by division by the row content.
//! The eliminator keeps its pivot rows in reduced row echelon form, so every
//! pivot row has zeros in all other pivot columns.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type SparseRow = BTreeMap<usize, BigInt>;

/// Clears denominators of a rational row. Returns the integer row and the
/// positive factor it was multiplied by.
pub fn integer_row<'a>(entries: impl IntoIterator<Item = (usize, &'a Rational)>) -> (SparseRow, BigInt) {
    let entries: Vec<(usize, &Rational)> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    let mut lcm = BigInt::one();
    for (_, v) in &entries {
        lcm = lcm.lcm(v.denom());
    }
    let mut row = SparseRow::new();
    for (c, v) in entries {
        let x = v.numer() * (&lcm / v.denom());
        let slot = row.entry(c).or_insert_with(BigInt::zero);
        *slot += x;
    }
    row.retain(|_, v| !v.is_zero());
    (row, lcm)
}

fn make_primitive(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    let leading_negative = row.values().next().is_some_and(|v| v.is_negative());
    if leading_negative {
        g = -g;
    }
    if !g.is_one() {
        for v in row.values_mut() {
            *v = &*v / &g;
        }
    }
}

/// `row ← a·row − b·other` with `a = other[col]`, `b = row[col]`.
fn eliminate(row: &mut SparseRow, other: &SparseRow, col: usize) {
    let b = match row.get(&col) {
        Some(b) => b.clone(),
        None => return,
    };
    let a = &other[&col];
    let g = a.gcd(&b);
    let a = a / &g;
    let b = b / &g;
    if !a.is_one() {
        for v in row.values_mut() {
            *v *= &a;
        }
    }
    for (c, v) in other {
        let slot = row.entry(*c).or_insert_with(BigInt::zero);
        *slot -= &b * v;
    }
    row.retain(|_, v| !v.is_zero());
    make_primitive(row);
}

/// Incremental fraction-free RREF. Columns `< n` are the unknowns; columns
/// `≥ n` are bookkeeping (right-hand sides or row-transform identity).
#[derive(Clone, Debug)]
pub struct Eliminator {
    n: usize,
    /// Pivot column → reduced row.
    pivots: BTreeMap<usize, SparseRow>,
    /// Rows whose unknown part vanished but whose bookkeeping part did not.
    conditions: Vec<SparseRow>,
}

impl Eliminator {
    pub fn new(n: usize) -> Self {
        Eliminator {
            n,
            pivots: BTreeMap::new(),
            conditions: Vec::new(),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn conditions(&self) -> &[SparseRow] {
        &self.conditions
    }

    /// Returns the new pivot column, if the row added one.
    pub fn insert(&mut self, mut row: SparseRow) -> Option<usize> {
        row.retain(|_, v| !v.is_zero());
        make_primitive(&mut row);
        let hits: Vec<usize> = row
            .keys()
            .copied()
            .filter(|c| *c < self.n && self.pivots.contains_key(c))
            .collect();
        for c in hits {
            eliminate(&mut row, &self.pivots[&c], c);
        }
        let lead = row.keys().next().copied()?;
        if lead >= self.n {
            self.conditions.push(row);
            return None;
        }
        if row[&lead].is_negative() {
            for v in row.values_mut() {
                *v = -&*v;
            }
        }
        for other in self.pivots.values_mut() {
            if other.contains_key(&lead) {
                eliminate(other, &row, lead);
            }
        }
        self.pivots.insert(lead, row);
        Some(lead)
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseRow> {
        self.pivots.get(&pivot)
    }
}

/// Left transform of a matrix: for each pivot column `c`, the solution with
/// free unknowns set to zero is `x_c = (Σ_j combo_j · r_j) / pivot`.
#[derive(Clone, Debug)]
pub struct Transform {
    pub unknowns: usize,
    pub equations: usize,
    pub pivots: Vec<PivotCombination>,
    /// Combinations of right-hand-side entries that must vanish.
    pub conditions: Vec<Vec<(usize, BigInt)>>,
}

#[derive(Clone, Debug)]
pub struct PivotCombination {
    pub column: usize,
    pub pivot: BigInt,
    pub combo: Vec<(usize, BigInt)>,
}

impl Transform {
    /// Builds the transform from rational rows over `n` unknowns.
    pub fn new(rows: &[Vec<(usize, Rational)>], n: usize) -> Self {
        let mut elim = Eliminator::new(n);
        for (j, r) in rows.iter().enumerate() {
            let (mut row, scale) = integer_row(r.iter().map(|(c, v)| (*c, v)));
            row.insert(n + j, scale);
            elim.insert(row);
        }
        let split = |row: &SparseRow| -> Vec<(usize, BigInt)> {
            row.range(n..).map(|(c, v)| (c - n, v.clone())).collect()
        };
        let pivots = elim
            .pivots
            .iter()
            .map(|(c, row)| PivotCombination {
                column: *c,
                pivot: row[c].clone(),
                combo: split(row),
            })
            .collect();
        let conditions = elim.conditions.iter().map(split).collect();
        Transform {
            unknowns: n,
            equations: rows.len(),
            pivots,
            conditions,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Particular solution for a rational right-hand side, or `None` when
    /// a consistency condition fails.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        let dot = |combo: &[(usize, BigInt)]| -> Rational {
            let mut acc = Rational::zero();
            for (j, c) in combo {
                if !rhs[*j].is_zero() {
                    acc += &rhs[*j] * Rational::from_integer(c.clone());
                }
            }
            acc
        };
        if self.conditions.iter().any(|c| !dot(c).is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.unknowns];
        for p in &self.pivots {
            x[p.column] = dot(&p.combo) / Rational::from_integer(p.pivot.clone());
        }
        Some(x)
    }
}

/// Solves `A x = b` with `A` given by rational rows; free unknowns are zero.
pub fn solve(rows: &[Vec<(usize, Rational)>], rhs: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let mut elim = Eliminator::new(n);
    for (r, b) in rows.iter().zip(rhs) {
        let mut entries: Vec<(usize, &Rational)> = r.iter().map(|(c, v)| (*c, v)).collect();
        entries.push((n, b));
        let (row, _) = integer_row(entries);
        elim.insert(row);
    }
    if !elim.conditions.is_empty() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (c, row) in &elim.pivots {
        let b = row.get(&n).cloned().unwrap_or_default();
        x[*c] = Rational::new(b, row[c].clone());
    }
    Some(x)
}

pub fn rank(rows: &[Vec<(usize, Rational)>], n: usize) -> usize {
    let mut elim = Eliminator::new(n);
    for r in rows {
        elim.insert(integer_row(r.iter().map(|(c, v)| (*c, v))).0);
    }
    elim.rank()
}

/// Transposes sparse columns into sparse rows keyed by `K`, in key order.
pub fn rows_from_columns<K: Ord + Clone>(
    columns: &[BTreeMap<K, Rational>],
) -> (Vec<K>, Vec<Vec<(usize, Rational)>>) {
    let mut by_key: BTreeMap<K, Vec<(usize, Rational)>> = BTreeMap::new();
    for (c, col) in columns.iter().enumerate() {
        for (k, v) in col {
            if !v.is_zero() {
                by_key.entry(k.clone()).or_default().push((c, v.clone()));
            }
        }
    }
    by_key.into_iter().unzip()
}
