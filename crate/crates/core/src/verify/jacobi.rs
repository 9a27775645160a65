//! The Jacobi identity of a three-dimensional bivector as `P⃗·(∇×P⃗) = 0`.

use crate::error::{Result, StarError};
use crate::jet::JetPolynomial;
use crate::poisson::PoissonMode;
use crate::poly::Polynomial;

/// `P⃗ = (P^{23}, P^{31}, P^{12})`, so that `P^{ij} = ε^{ijk} P_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonVector {
    pub components: [Polynomial; 3],
}

impl PoissonVector {
    pub fn new(components: [Polynomial; 3]) -> Self {
        PoissonVector { components }
    }

    /// Three comma-separated polynomials.
    pub fn parse(src: &str) -> Result<Self> {
        let parts: Vec<&str> = src.split(',').collect();
        if parts.len() != 3 {
            return Err(StarError::Parse(format!(
                "a Poisson vector needs three comma-separated components, got {}",
                parts.len()
            )));
        }
        Ok(PoissonVector::new([
            Polynomial::parse(parts[0])?,
            Polynomial::parse(parts[1])?,
            Polynomial::parse(parts[2])?,
        ]))
    }

    /// `∇φ`.
    pub fn gradient(phi: &Polynomial) -> Self {
        PoissonVector::new([phi.derivative(1), phi.derivative(2), phi.derivative(3)])
    }

    /// `ψ∇φ`.
    pub fn scaled_gradient(psi: &Polynomial, phi: &Polynomial) -> Self {
        let g = Self::gradient(phi);
        PoissonVector::new(g.components.map(|c| psi * &c))
    }

    pub fn curl(&self) -> [Polynomial; 3] {
        let p = &self.components;
        [
            &p[2].derivative(2) - &p[1].derivative(3),
            &p[0].derivative(3) - &p[2].derivative(1),
            &p[1].derivative(1) - &p[0].derivative(2),
        ]
    }

    /// `P^{ij}`.
    pub fn entry(&self, i: u8, j: u8) -> Polynomial {
        match (i, j) {
            (2, 3) => self.components[0].clone(),
            (3, 2) => -&self.components[0],
            (3, 1) => self.components[1].clone(),
            (1, 3) => -&self.components[1],
            (1, 2) => self.components[2].clone(),
            (2, 1) => -&self.components[2],
            _ => Polynomial::zero(),
        }
    }

    /// `{f,g} = P^{ij} ∂_i f ∂_j g`.
    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero();
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                let p = self.entry(i, j);
                if p.is_zero() {
                    continue;
                }
                acc = &acc + &(&p * &(&f.derivative(i) * &g.derivative(j)));
            }
        }
        acc
    }
}

/// `P⃗·(∇×P⃗)`, zero iff the bracket satisfies the Jacobi identity.
pub fn jacobi_residual(p: &PoissonVector) -> Polynomial {
    let curl = p.curl();
    let mut acc = Polynomial::zero();
    for (a, b) in p.components.iter().zip(&curl) {
        acc = &acc + &(a * b);
    }
    acc
}

/// The same residual with the potentials kept as free jet variables.
pub fn symbolic_jacobi_residual(mode: PoissonMode) -> JetPolynomial {
    let p: Vec<JetPolynomial> = ["1", "2", "3"]
        .iter()
        .map(|d| match mode {
            PoissonMode::NablaPhi => JetPolynomial::phi(d),
            PoissonMode::PsiNablaPhi => &JetPolynomial::psi("") * &JetPolynomial::phi(d),
        })
        .collect();
    let curl = [
        &p[2].derivative(2) - &p[1].derivative(3),
        &p[0].derivative(3) - &p[2].derivative(1),
        &p[1].derivative(1) - &p[0].derivative(2),
    ];
    let mut acc = JetPolynomial::zero();
    for (a, b) in p.iter().zip(&curl) {
        acc = &acc + &(a * b);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn gradient_fields_are_integrable() {
        assert!(jacobi_residual(&PoissonVector::gradient(&poly("x1*x2*x3"))).is_zero());
        assert!(jacobi_residual(&PoissonVector::scaled_gradient(&poly("x1"), &poly("x2"))).is_zero());
        assert!(symbolic_jacobi_residual(PoissonMode::NablaPhi).is_zero());
        assert!(symbolic_jacobi_residual(PoissonMode::PsiNablaPhi).is_zero());
    }

    #[test]
    fn rotation_field_is_not() {
        let v = PoissonVector::parse("x3,x1,x2").unwrap();
        assert_eq!(jacobi_residual(&v), poly("x1+x2+x3"));
    }

    #[test]
    fn bracket_of_coordinates() {
        let v = PoissonVector::gradient(&poly("1/2*x1^2 + 1/2*x2^2 + 1/2*x3^2"));
        assert_eq!(v.bracket(&poly("x1"), &poly("x2")), poly("x3"));
        assert!(PoissonVector::parse("x1,x2").is_err());
    }
}
