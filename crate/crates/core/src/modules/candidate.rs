use super::{FinslerModule, ModVec, ModuleDescription};
use crate::algebra::{AlgElement, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::vec_norm;

/// `E = A` acting on itself with `rho(x) = ||x||_F 1`.
///
/// The scalar norm is a genuine Banach-module norm, but `rho` violates
/// `rho(ax)^2 = a rho(x)^2 a*` whenever `A` is not `C`: a deliberately
/// broken instance for the checkers.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusScalarModule {
    base: FdAlgebra,
}

impl FrobeniusScalarModule {
    pub fn new(base: &FdAlgebra) -> Self {
        Self { base: base.clone() }
    }
}

impl FinslerModule for FrobeniusScalarModule {
    fn base(&self) -> &FdAlgebra {
        &self.base
    }

    fn dim(&self) -> usize {
        self.base.dimension()
    }

    fn act(&self, a: &AlgElement, x: &ModVec) -> Result<ModVec> {
        if !a.belongs_to(&self.base) {
            return Err(Error::AlgebraMismatch);
        }
        let x = AlgElement::unflatten(&self.base, x.as_slice())?;
        Ok(ModVec::new((a * &x).flatten()))
    }

    fn rho(&self, x: &ModVec) -> Result<AlgElement> {
        x.check_len(self.dim())?;
        Ok(AlgElement::one(&self.base).scale_real(vec_norm(x.as_slice())))
    }

    fn family(&self) -> &'static str {
        "frobenius_scalar"
    }

    fn describe(&self) -> ModuleDescription {
        ModuleDescription::FrobeniusScalar {
            base: self.base.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use alloc::vec;

    #[test]
    fn axiom_two_fails_on_the_corner_projection() {
        let m2 = FdAlgebra::matrix(2);
        let e = FrobeniusScalarModule::new(&m2);
        let x = ModVec::new(AlgElement::one(&m2).flatten());
        let a = AlgElement::from_blocks(&m2, vec![CMatrix::diag_real(&[1.0, 0.0])]).unwrap();
        let lhs = e.rho_sq(&e.act(&a, &x).unwrap()).unwrap();
        let rhs = &(&a * &e.rho_sq(&x).unwrap()) * &a.adjoint();
        assert!(lhs.distance(&AlgElement::one(&m2)) < 1e-15);
        assert!(rhs.distance(&a.scale_real(2.0)) < 1e-15);
    }
}
