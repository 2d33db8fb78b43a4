//! Finite-dimensional C*-algebras as direct sums of full matrix blocks.

mod element;
mod hom;
mod pullback;
mod structure;

pub use element::{AlgElement, FdAlgebra};
pub use hom::{quotient_hom, Ideal, Route, StarHom};
pub use pullback::{direct_sum, PullbackAlgebra, Slot};
pub use structure::{
    certify_maximal_commutative, decompose, maximal_commutative_ideal, multiplicative_functionals,
    CommutativeIdealCertificate, DecompositionCertificate, IdealDecomposition,
    MultiplicativeFunctional,
};
