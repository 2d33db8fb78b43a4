//! Finsler modules over block algebras and the concrete families built from
//! them.

mod bundle;
mod candidate;
mod decompose;
mod describe;
mod free;
mod pullback;
mod quotient;
mod vector;

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;

use crate::algebra::{AlgElement, FdAlgebra};
use crate::error::Result;
use crate::gen::sample;

pub use bundle::{BundleSectionModule, FiberNorm};
pub use candidate::FrobeniusScalarModule;
pub use decompose::{canonical_decompose, CanonicalDecomposition, IsomorphismCertificate};
pub use describe::ModuleDescription;
pub use free::FreeHilbertModule;
pub use pullback::PullbackModule;
pub use quotient::{quotient_module, KernelCertificate, QuotientModule};
pub use vector::ModVec;

/// A left `A`-module `E` on a coordinate space `C^dim`, with a map
/// `rho : E -> A_+` such that `||rho(x)||` is a norm and
/// `rho(ax)^2 = a rho(x)^2 a*`.
///
/// Vectors are coordinate tuples; the module may be a proper subspace of
/// `C^dim`, spanned by [`FinslerModule::basis`]. Implementations that are
/// not genuine Finsler modules exist for testing the checkers.
pub trait FinslerModule: core::fmt::Debug + Send + Sync {
    fn base(&self) -> &FdAlgebra;

    /// Number of coordinates of a vector.
    fn dim(&self) -> usize;

    fn act(&self, a: &AlgElement, x: &ModVec) -> Result<ModVec>;

    fn rho(&self, x: &ModVec) -> Result<AlgElement>;

    /// Short family name for reports.
    fn family(&self) -> &'static str;

    fn describe(&self) -> ModuleDescription;

    fn rho_sq(&self, x: &ModVec) -> Result<AlgElement> {
        let r = self.rho(x)?;
        Ok(&r * &r)
    }

    /// `||x||_E = ||rho(x)||`.
    fn norm(&self, x: &ModVec) -> Result<f64> {
        Ok(self.rho(x)?.norm())
    }

    /// Vectors spanning the module inside `C^dim`.
    fn basis(&self) -> Vec<ModVec> {
        (0..self.dim())
            .map(|i| ModVec::unit(self.dim(), i))
            .collect()
    }

    /// Complex Gaussian combination of the basis.
    fn sample_vector(&self, rng: &mut dyn Rng) -> ModVec {
        let mut x = ModVec::zeros(self.dim());
        for b in self.basis() {
            x.axpy(sample::complex_gaussian(rng), &b);
        }
        x
    }

    fn contains(&self, x: &ModVec) -> bool {
        x.len() == self.dim()
    }
}

pub type ModuleRef = Arc<dyn FinslerModule>;
