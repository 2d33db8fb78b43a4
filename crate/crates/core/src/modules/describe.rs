use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{
    BundleSectionModule, FiberNorm, FreeHilbertModule, FrobeniusScalarModule, ModuleRef,
    PullbackModule, QuotientModule,
};
use crate::algebra::{FdAlgebra, PullbackAlgebra, StarHom};
use crate::error::Result;
use crate::linalg::CMatrix;

/// Plain data that rebuilds a module of one of the concrete families.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum ModuleDescription {
    Free {
        base: FdAlgebra,
        rank: usize,
    },
    Bundle {
        base: FdAlgebra,
        fibers: Vec<FiberNorm>,
    },
    FrobeniusScalar {
        base: FdAlgebra,
    },
    /// Quotient of `parent` along the surjection `hom`.
    Quotient {
        parent: Box<ModuleDescription>,
        hom: StarHom,
    },
    Pullback {
        algebra: PullbackAlgebra,
        left: Box<ModuleDescription>,
        right: Box<ModuleDescription>,
        glue: Box<ModuleDescription>,
        psi_left: CMatrix,
        psi_right: CMatrix,
    },
}

impl ModuleDescription {
    pub fn base(&self) -> &FdAlgebra {
        match self {
            ModuleDescription::Free { base, .. }
            | ModuleDescription::Bundle { base, .. }
            | ModuleDescription::FrobeniusScalar { base } => base,
            ModuleDescription::Quotient { hom, .. } => hom.target(),
            ModuleDescription::Pullback { algebra, .. } => algebra.algebra(),
        }
    }

    pub fn build(&self) -> Result<ModuleRef> {
        Ok(match self {
            ModuleDescription::Free { base, rank } => Arc::new(FreeHilbertModule::new(base, *rank)),
            ModuleDescription::Bundle { base, fibers } => {
                Arc::new(BundleSectionModule::new(base, fibers.clone())?)
            }
            ModuleDescription::FrobeniusScalar { base } => {
                Arc::new(FrobeniusScalarModule::new(base))
            }
            ModuleDescription::Quotient { parent, hom } => {
                Arc::new(QuotientModule::along(parent.build()?, hom.clone())?)
            }
            ModuleDescription::Pullback {
                algebra,
                left,
                right,
                glue,
                psi_left,
                psi_right,
            } => Arc::new(PullbackModule::new(
                algebra.clone(),
                left.build()?,
                right.build()?,
                glue.build()?,
                psi_left.clone(),
                psi_right.clone(),
            )?),
        })
    }
}
