//! Oracles that check a star product without reusing the constructor.

mod jacobi;
mod moyal;
mod suite;

pub use jacobi::{jacobi_residual, symbolic_jacobi_residual, PoissonVector};
pub use moyal::{constant_bivector, moyal_level, moyal_levels, ConstantBivector};
pub use suite::{
    associator, commutator_probe, monomial_of, star_apply, verify_levels, CheckReport, VerificationReport,
    VerifyOptions,
};
