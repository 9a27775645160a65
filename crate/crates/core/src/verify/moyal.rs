//! The Moyal product of a constant bivector, from its closed formula.

use num_traits::{One, Zero};

use super::jacobi::PoissonVector;
use crate::cochain::Cochain;
use crate::error::{Result, StarError};
use crate::multi_index::MultiIndex;
use crate::poly::Polynomial;
use crate::rational::{int, Rational};

/// Constant antisymmetric `P^{ij}`, indexed from zero.
pub type ConstantBivector = [[Rational; 3]; 3];

/// The constant bivector of `p`, or an error if some component depends on `x`.
pub fn constant_bivector(p: &PoissonVector) -> Result<ConstantBivector> {
    let mut out: ConstantBivector = Default::default();
    for i in 1..=3u8 {
        for j in 1..=3u8 {
            let e = p.entry(i, j);
            if e.degree().unwrap_or(0) > 0 {
                return Err(StarError::Config(format!("P^{i}{j} = {e} is not constant")));
            }
            out[i as usize - 1][j as usize - 1] = e.coefficient(&[0, 0, 0]);
        }
    }
    Ok(out)
}

/// `(1/(2^k k!)) P^{i₁j₁}⋯P^{i_kj_k} ∂_{i₁…i_k} ⊗ ∂_{j₁…j_k}`.
pub fn moyal_level(p: &ConstantBivector, k: usize) -> Result<Cochain<Rational>> {
    for i in 0..3 {
        for j in 0..3 {
            if p[i][j] != -p[j][i].clone() {
                return Err(StarError::Config("bivector is not antisymmetric".into()));
            }
        }
    }
    let mut norm = Rational::one();
    for n in 1..=k {
        norm *= int(2 * n as i64);
    }
    let norm = Rational::one() / norm;
    let mut out = Cochain::zero(2);
    for code in 0..9usize.pow(k as u32) {
        let mut c = code;
        let mut w = norm.clone();
        let (mut left, mut right) = (MultiIndex::EMPTY, MultiIndex::EMPTY);
        for _ in 0..k {
            let (i, j) = (c % 9 / 3, c % 3);
            c /= 9;
            w *= &p[i][j];
            left = left.with(i as u8 + 1);
            right = right.with(j as u8 + 1);
        }
        if !w.is_zero() {
            out.add_term(vec![left, right], &w);
        }
    }
    Ok(out)
}

/// `M_0 … M_n` of the Moyal product, with polynomial coefficients.
pub fn moyal_levels(p: &ConstantBivector, n: usize) -> Result<Vec<Cochain<Polynomial>>> {
    (0..=n)
        .map(|k| moyal_level(p, k)?.map_coefficients(|c| Ok(Polynomial::constant(c.clone()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn standard() -> ConstantBivector {
        let mut p: ConstantBivector = Default::default();
        p[0][1] = int(1);
        p[1][0] = int(-1);
        p
    }

    #[test]
    fn first_two_levels() {
        let s = |d: &str| MultiIndex::parse_digits(d).unwrap();
        let m1 = moyal_level(&standard(), 1).unwrap();
        assert_eq!(m1.len(), 2);
        assert_eq!(m1.coefficient(&[s("1"), s("2")]), Some(&rat(1, 2)));
        let m2 = moyal_level(&standard(), 2).unwrap();
        assert_eq!(m2.len(), 3);
        assert_eq!(m2.coefficient(&[s("11"), s("22")]), Some(&rat(1, 8)));
        assert_eq!(m2.coefficient(&[s("12"), s("12")]), Some(&rat(-2, 8)));
        assert_eq!(m2.coefficient(&[s("22"), s("11")]), Some(&rat(1, 8)));
        assert_eq!(moyal_level(&standard(), 0).unwrap(), Cochain::multiplication());
    }

    #[test]
    fn rejects_non_constant() {
        let v = PoissonVector::parse("0,0,x1").unwrap();
        assert!(constant_bivector(&v).is_err());
        let v = PoissonVector::parse("0,0,1").unwrap();
        assert_eq!(constant_bivector(&v).unwrap(), standard());
    }
}
