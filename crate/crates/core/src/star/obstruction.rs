//! The trivector obstruction `AR_k`.
//!
//! Only the `(1,1,1)` part of `R_k` survives antisymmetrization modulo
//! coboundaries. For even `k` that part comes solely from inserting `M_1`
//! into `M_{k−1}`, which gives an independent shortcut; the value on the
//! coordinate triple `(x¹, x², x³)` decides everything because a totally
//! antisymmetric `(1,1,1)` operator on R³ has a single component.

use crate::coefficient::Coefficient;
use crate::cochain::{hochschild_delta, Cochain, DegreeProfile};
use crate::error::{Result, StarError};
use crate::multi_index::MultiIndex;
use crate::rational::rat;

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport<C: Coefficient> {
    pub k: usize,
    /// `A` applied to the `(1,1,1)` part of `R_k`.
    pub ar: Cochain<C>,
    /// `AR_k(x¹, x², x³)`.
    pub coordinate_witness: C,
    /// `(2/3)·Σ_cyc [M_{k−1}(M_1(f,g),h)]_{(1,1,1)}`, even `k` only.
    pub shortcut: Option<Cochain<C>>,
    pub shortcut_witness: Option<C>,
    /// Odd `k`, where parity alone forces the obstruction to vanish.
    pub parity_path: bool,
    pub is_zero: bool,
}

fn unit_triple() -> Vec<MultiIndex> {
    vec![MultiIndex::unit(1), MultiIndex::unit(2), MultiIndex::unit(3)]
}

/// Value of a `(1,1,1)` cochain on `(x¹, x², x³)`.
pub fn coordinate_value<C: Coefficient>(c: &Cochain<C>) -> C {
    c.coefficient(&unit_triple()).cloned().unwrap_or_else(C::zero)
}

/// `A(R)` restricted to degree `(1,1,1)`.
pub fn direct_obstruction<C: Coefficient>(r: &Cochain<C>) -> Result<Cochain<C>> {
    r.expect_arity(3)?;
    r.degree_part(&DegreeProfile(vec![1, 1, 1])).antisymmetrize()
}

/// `[M(M_1(f,g), h)]_{(1,1,1)}`: every outer derivative lands on the
/// coefficient of `M_1`.
fn outer_insertion<C: Coefficient>(m: &Cochain<C>, m1: &Cochain<C>) -> Cochain<C> {
    let mut out = Cochain::zero(3);
    for (slots, a) in m.terms() {
        if slots[1].len() != 1 {
            continue;
        }
        for (inner, b) in m1.terms() {
            if inner[0].len() != 1 || inner[1].len() != 1 {
                continue;
            }
            let db = b.partial(&slots[0]);
            if db.is_zero() {
                continue;
            }
            out.add_term(vec![inner[0], inner[1], slots[1]], &a.mul(&db));
        }
    }
    out
}

/// `(2/3)·Σ_cyc [M_{k−1}(M_1(f,g),h)]_{(1,1,1)}`.
pub fn shortcut_obstruction<C: Coefficient>(m_prev: &Cochain<C>, m1: &Cochain<C>) -> Cochain<C> {
    let t = outer_insertion(m_prev, m1);
    let mut cyc = t.clone();
    cyc.add_assign(&t.permute(&[1, 2, 0]));
    cyc.add_assign(&t.permute(&[2, 0, 1]));
    cyc.scale(&rat(2, 3))
}

/// Obstruction report for `R_k`. `lower` holds `M_0 … M_{k−1}`; the shortcut
/// is computed when `k` is even and those levels are available.
pub fn obstruction<C: Coefficient>(
    r: &Cochain<C>,
    k: usize,
    lower: Option<&[Cochain<C>]>,
) -> Result<ObstructionReport<C>> {
    r.expect_arity(3)?;
    let dr = hochschild_delta(r);
    if !dr.is_zero() {
        return Err(StarError::NotCocycle {
            level: k,
            terms: dr.len(),
        });
    }
    let ar = direct_obstruction(r)?;
    let coordinate_witness = coordinate_value(&ar);
    let (shortcut, shortcut_witness) = match lower {
        Some(levels) if k.is_multiple_of(2) && k >= 2 && levels.len() >= k => {
            let s = shortcut_obstruction(&levels[k - 1], &levels[1]);
            let w = coordinate_value(&s);
            (Some(s), Some(w))
        }
        _ => (None, None),
    };
    let parity_path = k % 2 == 1;
    Ok(ObstructionReport {
        k,
        is_zero: ar.is_zero(),
        ar,
        coordinate_witness,
        shortcut,
        shortcut_witness,
        parity_path,
    })
}
