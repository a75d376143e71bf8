//! Exact finite real spectral triples, their KO-dimension signs and graded
//! products.

pub mod arith;
pub mod dga;
pub mod exemplars;
pub mod kosigns;
pub mod pauli;
pub mod products;
pub mod triples;

pub use arith::{ArithError, CMatrix, ExactComplex};
pub use dga::{DgaError, StarDGA};
pub use exemplars::ExemplarError;
pub use kosigns::{DiracChoice, KOClass, KOSigns, Parity, Sign, SignError, Variant};
pub use products::{KozulConvention, ProductError, ProductReport};
pub use triples::{RealSpectralTriple, TripleError};
