//! Symmetric multi-indices over the three coordinate directions.
//!
//! A multi-index `I = (i_1, ..., i_n)` with entries in `{1,2,3}` stands for
//! the commuting derivative `∂_{i_1}⋯∂_{i_n}`. Since mixed partials commute
//! only the number of occurrences of each direction matters, so the index is
//! stored as a count vector and the sorted sequence is recovered on demand.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Result, StarError};
use crate::rational::binomial;

/// Number of coordinate directions.
pub const DIM: usize = 3;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    counts: [u8; DIM],
}

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex { counts: [0; DIM] };

    pub fn from_counts(counts: [u8; DIM]) -> Self {
        MultiIndex { counts }
    }

    /// Builds an index from 1-based directions in any order.
    pub fn from_indices(indices: &[u8]) -> Result<Self> {
        let mut counts = [0u8; DIM];
        for &i in indices {
            if !(1..=DIM as u8).contains(&i) {
                return Err(StarError::IndexOutOfRange(i as i64));
            }
            counts[(i - 1) as usize] += 1;
        }
        Ok(MultiIndex { counts })
    }

    /// Single derivative `∂_axis`, with `axis` 1-based.
    pub fn unit(axis: u8) -> Self {
        let mut counts = [0u8; DIM];
        counts[(axis - 1) as usize] = 1;
        MultiIndex { counts }
    }

    /// Parses a digit string such as `"112"`; the empty string is the identity.
    pub fn parse_digits(s: &str) -> Result<Self> {
        let mut idx = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| StarError::Parse(format!("bad multi-index digit {ch:?}")))?;
            idx.push(d as u8);
        }
        Self::from_indices(&idx)
    }

    pub fn counts(&self) -> [u8; DIM] {
        self.counts
    }

    pub fn count(&self, axis: u8) -> u8 {
        self.counts[(axis - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts == [0; DIM]
    }

    /// Sorted 1-based directions.
    pub fn indices(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len());
        for (a, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat_n(a as u8 + 1, c as usize));
        }
        out
    }

    pub fn with(&self, axis: u8) -> Self {
        let mut counts = self.counts;
        counts[(axis - 1) as usize] += 1;
        MultiIndex { counts }
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        let mut counts = self.counts;
        for a in 0..DIM {
            counts[a] += other.counts[a];
        }
        MultiIndex { counts }
    }

    /// `self - other` when `other` is contained in `self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<Self> {
        let mut counts = self.counts;
        for a in 0..DIM {
            counts[a] = counts[a].checked_sub(other.counts[a])?;
        }
        Some(MultiIndex { counts })
    }

    pub fn contains(&self, other: &MultiIndex) -> bool {
        (0..DIM).all(|a| self.counts[a] >= other.counts[a])
    }

    /// `I!` = product of the factorials of the counts.
    pub fn factorial(&self) -> u64 {
        self.counts
            .iter()
            .map(|&c| crate::rational::factorial(c as u32))
            .product()
    }

    /// All sub-indices `J ⊆ I`, in canonical order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for a in 0..=self.counts[0] {
            for b in 0..=self.counts[1] {
                for c in 0..=self.counts[2] {
                    out.push(MultiIndex { counts: [a, b, c] });
                }
            }
        }
        out.sort();
        out
    }

    /// Ways of splitting the derivative `∂_I` over a product of `parts`
    /// factors (generalized Leibniz rule). Each entry carries the
    /// multiplicity `∏_axis multinomial(count; parts)`.
    pub fn distribute(&self, parts: usize) -> Vec<(Vec<MultiIndex>, u64)> {
        let mut out = Vec::new();
        if parts == 0 {
            if self.is_empty() {
                out.push((Vec::new(), 1));
            }
            return out;
        }
        let mut current = vec![MultiIndex::EMPTY; parts];
        distribute_rec(self.counts, 0, &mut current, 1, &mut out);
        out
    }

    /// Two-way Leibniz splits `I = J + K` with multiplicity.
    pub fn splits(&self) -> Vec<(MultiIndex, MultiIndex, u64)> {
        self.sub_indices()
            .into_iter()
            .map(|j| {
                let k = self.checked_sub(&j).expect("sub-index");
                let mult = (0..DIM)
                    .map(|a| binomial(self.counts[a] as u32, j.counts[a] as u32))
                    .product();
                (j, k, mult)
            })
            .collect()
    }

    /// Digit-string form, `"112"` for `∂_1∂_1∂_2`.
    pub fn digits(&self) -> String {
        self.indices().iter().map(|d| char::from(b'0' + d)).collect()
    }
}

// Splits the remaining counts of one axis at a time over all parts.
fn distribute_rec(
    remaining: [u8; DIM],
    axis: usize,
    current: &mut Vec<MultiIndex>,
    mult: u64,
    out: &mut Vec<(Vec<MultiIndex>, u64)>,
) {
    if axis == DIM {
        out.push((current.clone(), mult));
        return;
    }
    let parts = current.len();
    let mut compositions = Vec::new();
    compositions_of(remaining[axis], parts, &mut Vec::new(), &mut compositions);
    for comp in compositions {
        let mut m = crate::rational::factorial(remaining[axis] as u32);
        for (p, &c) in comp.iter().enumerate() {
            current[p].counts[axis] = c;
            m /= crate::rational::factorial(c as u32);
        }
        distribute_rec(remaining, axis + 1, current, mult * m, out);
    }
    for p in current.iter_mut() {
        p.counts[axis] = 0;
    }
}

fn compositions_of(n: u8, parts: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if parts == 1 {
        prefix.push(n);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=n {
        prefix.push(first);
        compositions_of(n - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

impl Ord for MultiIndex {
    /// Shorter indices first, then lexicographic on the sorted sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| other.counts.cmp(&self.counts))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "∂[{}]", self.digits())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}

/// All multi-indices of exactly `len` entries, canonical order.
pub fn indices_of_len(len: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for a in 0..=len {
        for b in 0..=(len - a) {
            let c = len - a - b;
            out.push(MultiIndex::from_counts([a as u8, b as u8, c as u8]));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_storage() {
        let a = MultiIndex::from_indices(&[2, 1, 1]).unwrap();
        assert_eq!(a.indices(), vec![1, 1, 2]);
        assert_eq!(a, MultiIndex::parse_digits("112").unwrap());
        assert_eq!(a.digits(), "112");
        assert!(MultiIndex::from_indices(&[4]).is_err());
        assert!(MultiIndex::from_indices(&[0]).is_err());
    }

    #[test]
    fn ordering_is_length_then_lex() {
        let e = MultiIndex::EMPTY;
        let i1 = MultiIndex::unit(1);
        let i3 = MultiIndex::unit(3);
        let i11 = MultiIndex::parse_digits("11").unwrap();
        let i12 = MultiIndex::parse_digits("12").unwrap();
        let i22 = MultiIndex::parse_digits("22").unwrap();
        let mut v = vec![i22, i3, i12, e, i11, i1];
        v.sort();
        assert_eq!(v, vec![e, i1, i3, i11, i12, i22]);
    }

    #[test]
    fn leibniz_split_multiplicities() {
        // ∂_1∂_1(fg) = f_11 g + 2 f_1 g_1 + f g_11
        let i = MultiIndex::parse_digits("11").unwrap();
        let s = i.splits();
        let total: u64 = s.iter().map(|x| x.2).sum();
        assert_eq!(total, 4);
        let mid = s.iter().find(|(j, _, _)| j.len() == 1).unwrap();
        assert_eq!(mid.2, 2);
    }

    #[test]
    fn distribute_counts_all_assignments() {
        // Distributing n labelled derivatives over p parts gives p^n assignments.
        let i = MultiIndex::parse_digits("1123").unwrap();
        let total: u64 = i.distribute(3).iter().map(|x| x.1).sum();
        assert_eq!(total, 81);
        for (parts, _) in i.distribute(3) {
            let sum = parts.iter().fold(MultiIndex::EMPTY, |acc, p| acc.add(p));
            assert_eq!(sum, i);
        }
        assert_eq!(MultiIndex::EMPTY.distribute(0).len(), 1);
        assert!(i.distribute(0).is_empty());
    }

    #[test]
    fn indices_of_len_counts() {
        assert_eq!(indices_of_len(0).len(), 1);
        assert_eq!(indices_of_len(2).len(), 6);
        assert_eq!(indices_of_len(4).len(), 15);
    }
}
