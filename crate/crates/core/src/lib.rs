//! Exact symbolic construction and checking of star products for Poisson
//! structures on R^3 built from a vector potential.

pub mod coefficient;
pub mod cochain;
pub mod error;
pub mod io;
pub mod jet;
pub mod linalg;
pub mod multi_index;
pub mod opo;
pub mod poisson;
pub mod poly;
pub mod rational;
pub mod star;
pub mod verify;

pub use coefficient::Coefficient;
pub use cochain::Cochain;
pub use error::{Result, StarError};
pub use jet::{JetPolynomial, JetVariable, Potential};
pub use multi_index::MultiIndex;
pub use poly::Polynomial;
pub use rational::Rational;
