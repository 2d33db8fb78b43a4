use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use super::{FinslerModule, ModVec, ModuleDescription, ModuleRef};
use crate::algebra::{AlgElement, FdAlgebra, PullbackAlgebra};
use crate::error::{Error, Result};
use crate::gen::sample;
use crate::linalg::{null_space, CMatrix};
use crate::tolerance;

const COMPATIBILITY_SAMPLES: usize = 24;

/// `F1 (+)_H F2 = {(x1, x2) : psi1(x1) = psi2(x2)}` over `B1 (+)_D B2`, with
/// `rho(x1, x2) = (rho1(x1), rho2(x2))`.
///
/// Coordinates are `x1` followed by `x2`.
#[derive(Debug, Clone)]
pub struct PullbackModule {
    algebra: PullbackAlgebra,
    left: ModuleRef,
    right: ModuleRef,
    glue: ModuleRef,
    psi_left: CMatrix,
    psi_right: CMatrix,
    basis: Vec<ModVec>,
    compatibility_residual: f64,
}

impl PullbackModule {
    /// Requires `psi_i : F_i -> H` to be linear maps on coordinates with
    /// `psi_i(b x) = phi_i(b) psi_i(x)` and `rho_H(psi_i(x)) = phi_i(rho_i(x))`;
    /// both are checked on samples to `1e-8`.
    pub fn new(
        algebra: PullbackAlgebra,
        left: ModuleRef,
        right: ModuleRef,
        glue: ModuleRef,
        psi_left: CMatrix,
        psi_right: CMatrix,
    ) -> Result<Self> {
        if left.base() != algebra.left()
            || right.base() != algebra.right()
            || glue.base() != algebra.glue_algebra()
        {
            return Err(Error::AlgebraMismatch);
        }
        for (psi, side) in [(&psi_left, &left), (&psi_right, &right)] {
            if psi.shape() != (glue.dim(), side.dim()) {
                return Err(Error::ShapeMismatch {
                    expected: (glue.dim(), side.dim()),
                    got: psi.shape(),
                });
            }
        }

        let mut rng = Xoshiro256PlusPlus::seed_from_u64(0x5eed);
        let mut worst: f64 = 0.0;
        for (psi, side, phi) in [
            (&psi_left, &left, algebra.phi()),
            (&psi_right, &right, algebra.psi()),
        ] {
            for _ in 0..COMPATIBILITY_SAMPLES {
                let x = side.sample_vector(&mut rng);
                let b = sample::gaussian_element(&mut rng, side.base());
                let hx = x.mapped(psi)?;
                let n = side.norm(&x)?;
                let scale = 1.0 + n * n;
                let isometry = glue.rho_sq(&hx)?.distance(&phi.apply(&side.rho_sq(&x)?)?) / scale;
                let bx = side.act(&b, &x)?.mapped(psi)?;
                let moved = glue.act(&phi.apply(&b)?, &hx)?;
                let module_map = glue.norm(&(&bx - &moved))? / (1.0 + b.norm() * side.norm(&x)?);
                worst = worst.max(isometry).max(module_map);
            }
        }
        if worst.is_nan() || worst > tolerance::CERTIFICATE {
            return Err(Error::NotCompatible(format!(
                "gluing maps miss the isometry or module-map property by {worst:e}"
            )));
        }

        // pairs (B1 c1, B2 c2) with psi1 B1 c1 = psi2 B2 c2
        let b1 = basis_matrix(&left.basis(), left.dim());
        let b2 = basis_matrix(&right.basis(), right.dim());
        let m1 = &psi_left * &b1;
        let m2 = &psi_right * &b2;
        let mut k = CMatrix::zeros(glue.dim(), b1.cols() + b2.cols());
        k.set_block(0, 0, &m1);
        k.set_block(0, b1.cols(), &m2.scale_real(-1.0));
        let kernel = null_space(&k, 1e-7)?;
        let basis = (0..kernel.cols())
            .map(|j| {
                let c = kernel.column(j);
                let x1 = b1.apply(&c[..b1.cols()]);
                let x2 = b2.apply(&c[b1.cols()..]);
                ModVec::new(x1).concat(&ModVec::new(x2))
            })
            .collect();

        Ok(Self {
            algebra,
            left,
            right,
            glue,
            psi_left,
            psi_right,
            basis,
            compatibility_residual: worst,
        })
    }

    /// `F1 (+) F2` over `B1 (+) B2`.
    pub fn direct_sum(left: ModuleRef, right: ModuleRef) -> Result<Self> {
        let algebra = crate::algebra::direct_sum(left.base(), right.base());
        let glue: ModuleRef =
            alloc::sync::Arc::new(super::FreeHilbertModule::new(&FdAlgebra::zero(), 0));
        let (d1, d2) = (left.dim(), right.dim());
        Self::new(
            algebra,
            left,
            right,
            glue,
            CMatrix::zeros(0, d1),
            CMatrix::zeros(0, d2),
        )
    }

    pub fn pullback_algebra(&self) -> &PullbackAlgebra {
        &self.algebra
    }

    pub fn left(&self) -> &ModuleRef {
        &self.left
    }

    pub fn right(&self) -> &ModuleRef {
        &self.right
    }

    pub fn glue(&self) -> &ModuleRef {
        &self.glue
    }

    pub fn psi_left(&self) -> &CMatrix {
        &self.psi_left
    }

    pub fn psi_right(&self) -> &CMatrix {
        &self.psi_right
    }

    /// Worst sampled violation found when the gluing maps were checked.
    pub fn compatibility_residual(&self) -> f64 {
        self.compatibility_residual
    }

    pub fn split(&self, x: &ModVec) -> Result<(ModVec, ModVec)> {
        x.check_len(self.dim())?;
        Ok(x.split_at(self.left.dim()))
    }

    /// `(x1, x2)` as a vector, checking the gluing constraint.
    pub fn pair(&self, x1: &ModVec, x2: &ModVec) -> Result<ModVec> {
        let x = x1.concat(x2);
        let residual = self.glue_residual(&x)?;
        if residual > tolerance::EXACT {
            return Err(Error::GlueMismatch { residual });
        }
        Ok(x)
    }

    /// Relative `|psi1(x1) - psi2(x2)|` in coordinates.
    pub fn glue_residual(&self, x: &ModVec) -> Result<f64> {
        let (x1, x2) = self.split(x)?;
        let h = &x1.mapped(&self.psi_left)? - &x2.mapped(&self.psi_right)?;
        Ok(h.coord_norm() / (1.0 + x1.coord_norm().max(x2.coord_norm())))
    }
}

fn basis_matrix(basis: &[ModVec], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, basis.len(), |i, j| basis[j][i])
}

impl FinslerModule for PullbackModule {
    fn base(&self) -> &FdAlgebra {
        self.algebra.algebra()
    }

    fn dim(&self) -> usize {
        self.left.dim() + self.right.dim()
    }

    fn act(&self, a: &AlgElement, x: &ModVec) -> Result<ModVec> {
        let (b1, b2) = self.algebra.embed(a)?;
        let (x1, x2) = self.split(x)?;
        Ok(self.left.act(&b1, &x1)?.concat(&self.right.act(&b2, &x2)?))
    }

    fn rho(&self, x: &ModVec) -> Result<AlgElement> {
        let (x1, x2) = self.split(x)?;
        self.algebra
            .assemble(&self.left.rho(&x1)?, &self.right.rho(&x2)?)
    }

    fn family(&self) -> &'static str {
        "pullback"
    }

    fn describe(&self) -> ModuleDescription {
        ModuleDescription::Pullback {
            algebra: self.algebra.clone(),
            left: alloc::boxed::Box::new(self.left.describe()),
            right: alloc::boxed::Box::new(self.right.describe()),
            glue: alloc::boxed::Box::new(self.glue.describe()),
            psi_left: self.psi_left.clone(),
            psi_right: self.psi_right.clone(),
        }
    }

    fn basis(&self) -> Vec<ModVec> {
        self.basis.clone()
    }

    fn contains(&self, x: &ModVec) -> bool {
        match self.split(x) {
            Ok((x1, x2)) => {
                self.left.contains(&x1)
                    && self.right.contains(&x2)
                    && self
                        .glue_residual(x)
                        .map(|r| r <= tolerance::EXACT)
                        .unwrap_or(false)
            }
            Err(_) => false,
        }
    }
}
