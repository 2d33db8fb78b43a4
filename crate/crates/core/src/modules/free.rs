use alloc::vec::Vec;

use super::{FinslerModule, ModVec, ModuleDescription};
use crate::algebra::{AlgElement, FdAlgebra};
use crate::error::{Error, Result};

/// `A^n` with `<x, y> = sum_i x_i y_i*` and `rho(x) = <x, x>^{1/2}`.
///
/// Coordinates: the `n` components one after another, each flattened block
/// by block in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeHilbertModule {
    base: FdAlgebra,
    rank: usize,
}

impl FreeHilbertModule {
    pub fn new(base: &FdAlgebra, rank: usize) -> Self {
        Self {
            base: base.clone(),
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn component_len(&self) -> usize {
        self.base.dimension()
    }

    pub fn components(&self, x: &ModVec) -> Result<Vec<AlgElement>> {
        x.check_len(self.dim())?;
        let len = self.component_len();
        (0..self.rank)
            .map(|i| AlgElement::unflatten(&self.base, &x.as_slice()[i * len..(i + 1) * len]))
            .collect()
    }

    pub fn from_components(&self, xs: &[AlgElement]) -> Result<ModVec> {
        if xs.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: xs.len(),
            });
        }
        let mut coords = Vec::with_capacity(self.dim());
        for x in xs {
            if !x.belongs_to(&self.base) {
                return Err(Error::AlgebraMismatch);
            }
            coords.extend(x.flatten());
        }
        Ok(ModVec::new(coords))
    }

    /// `<x, y> = sum_i x_i y_i*`: linear in `x`, `<x, ay> = <x, y> a*`.
    pub fn inner(&self, x: &ModVec, y: &ModVec) -> Result<AlgElement> {
        let xs = self.components(x)?;
        let ys = self.components(y)?;
        let mut acc = AlgElement::zero(&self.base);
        for (xi, yi) in xs.iter().zip(&ys) {
            acc = &acc + &(xi * &yi.adjoint());
        }
        Ok(acc)
    }
}

impl FinslerModule for FreeHilbertModule {
    fn base(&self) -> &FdAlgebra {
        &self.base
    }

    fn dim(&self) -> usize {
        self.rank * self.component_len()
    }

    fn act(&self, a: &AlgElement, x: &ModVec) -> Result<ModVec> {
        if !a.belongs_to(&self.base) {
            return Err(Error::AlgebraMismatch);
        }
        let xs: Vec<AlgElement> = self.components(x)?.iter().map(|xi| a * xi).collect();
        self.from_components(&xs)
    }

    fn rho(&self, x: &ModVec) -> Result<AlgElement> {
        self.inner(x, x)?.sqrt_pos()
    }

    fn rho_sq(&self, x: &ModVec) -> Result<AlgElement> {
        self.inner(x, x)
    }

    fn family(&self) -> &'static str {
        "free"
    }

    fn describe(&self) -> ModuleDescription {
        ModuleDescription::Free {
            base: self.base.clone(),
            rank: self.rank,
        }
    }
}
