use alloc::sync::Arc;

use rand::Rng;

use super::{FinslerModule, ModVec, ModuleRef, PullbackModule, QuotientModule};
use crate::algebra::{AlgElement, PullbackAlgebra};
use crate::error::{Error, Result};
use crate::gen::sample;
use crate::linalg::CMatrix;

/// `E = F1 (+)_H F2` for a module over `A = B1 (+)_D B2`, with
/// `F_i = E / ker(pi_i) E` and `H = E / ker(phi pi_1) E`.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    module: ModuleRef,
    pub left: Arc<QuotientModule>,
    pub right: Arc<QuotientModule>,
    pub glue: Arc<QuotientModule>,
    /// `F1 (+)_H F2` built from the three quotients.
    pub reglued: PullbackModule,
    right_only_unit: AlgElement,
}

/// Split a module over a pullback algebra into its canonical pieces.
pub fn canonical_decompose(
    module: &ModuleRef,
    algebra: &PullbackAlgebra,
) -> Result<CanonicalDecomposition> {
    if module.base() != algebra.algebra() {
        return Err(Error::NotPullbackBase);
    }
    let left = Arc::new(QuotientModule::along(
        module.clone(),
        algebra.left_projection(),
    )?);
    let right = Arc::new(QuotientModule::along(
        module.clone(),
        algebra.right_projection(),
    )?);
    let glue = Arc::new(QuotientModule::along(
        module.clone(),
        algebra.glue_projection(),
    )?);

    // x + ker(pi_i)E -> x + ker(phi pi_1)E, on canonical representatives
    let n = module.dim();
    let mut psi = CMatrix::zeros(n, n);
    for j in 0..n {
        let col = glue.canonical(&ModVec::unit(n, j))?;
        for i in 0..n {
            psi[(i, j)] = col[i];
        }
    }
    let reglued = PullbackModule::new(
        algebra.clone(),
        left.clone(),
        right.clone(),
        glue.clone(),
        psi.clone(),
        psi,
    )?;
    Ok(CanonicalDecomposition {
        module: module.clone(),
        right_only_unit: algebra.left_projection_kernel().unit(),
        left,
        right,
        glue,
        reglued,
    })
}

/// Sampled residuals of `x -> (x + ker(pi_1)E, x + ker(pi_2)E)` being an
/// isomorphism of Finsler modules onto `F1 (+)_H F2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsomorphismCertificate {
    pub norm_residual: f64,
    pub rho_residual: f64,
    pub module_map_residual: f64,
    pub surjectivity_residual: f64,
    pub samples: usize,
}

impl IsomorphismCertificate {
    pub fn max_residual(&self) -> f64 {
        self.norm_residual
            .max(self.rho_residual)
            .max(self.module_map_residual)
            .max(self.surjectivity_residual)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

impl CanonicalDecomposition {
    pub fn module(&self) -> &ModuleRef {
        &self.module
    }

    /// `x -> (x + ker(pi_1)E, x + ker(pi_2)E)`, on canonical representatives.
    pub fn split(&self, x: &ModVec) -> Result<ModVec> {
        Ok(self.left.canonical(x)?.concat(&self.right.canonical(x)?))
    }

    /// Inverse of [`CanonicalDecomposition::split`]: `(1 - e)x1 + e x2` with
    /// `e` the unit of `ker(pi_1)`.
    pub fn merge(&self, pair: &ModVec) -> Result<ModVec> {
        let (x1, x2) = self.reglued.split(pair)?;
        let co = &AlgElement::one(self.module.base()) - &self.right_only_unit;
        Ok(&self.module.act(&co, &x1)? + &self.module.act(&self.right_only_unit, &x2)?)
    }

    pub fn certify<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<IsomorphismCertificate> {
        let base = self.module.base().clone();
        let mut cert = IsomorphismCertificate {
            norm_residual: 0.0,
            rho_residual: 0.0,
            module_map_residual: 0.0,
            surjectivity_residual: 0.0,
            samples,
        };
        for _ in 0..samples {
            let x = self.module.sample_vector(rng);
            let nx = self.module.norm(&x)?;
            let y = self.split(&x)?;
            cert.norm_residual = cert
                .norm_residual
                .max((nx - self.reglued.norm(&y)?).abs() / (1.0 + nx));
            cert.rho_residual = cert
                .rho_residual
                .max(self.module.rho(&x)?.distance(&self.reglued.rho(&y)?) / (1.0 + nx));

            let a = sample::gaussian_element(rng, &base);
            let lhs = self.split(&self.module.act(&a, &x)?)?;
            let rhs = self.reglued.act(&a, &y)?;
            cert.module_map_residual = cert
                .module_map_residual
                .max(self.reglued.norm(&(&lhs - &rhs))? / (1.0 + a.norm() * nx));

            let z = self.reglued.sample_vector(rng);
            let nz = self.reglued.norm(&z)?;
            let back = self.split(&self.merge(&z)?)?;
            cert.surjectivity_residual = cert
                .surjectivity_residual
                .max(self.reglued.norm(&(&back - &z))? / (1.0 + nz));
        }
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FdAlgebra, StarHom};
    use crate::modules::{BundleSectionModule, FiberNorm, FreeHilbertModule};
    use alloc::vec;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    /// 2-point l2 bundle over C^2 glued at point 1 to the free module of
    /// rank 1 over C + M2 along its C block.
    fn glued() -> PullbackModule {
        let b1 = FdAlgebra::commutative(2);
        let b2 = FdAlgebra::new(vec![1, 2]).unwrap();
        let phi = StarHom::routing(&b1, &[1]).unwrap();
        let psi = StarHom::routing(&b2, &[0]).unwrap();
        let pb = PullbackAlgebra::new(phi, psi).unwrap();
        let bundle = BundleSectionModule::over_points(vec![
            FiberNorm::lp(2.0, 2).unwrap(),
            FiberNorm::lp(2.0, 1).unwrap(),
        ]);
        let free = FreeHilbertModule::new(&b2, 1);
        let h = FreeHilbertModule::new(&FdAlgebra::commutative(1), 1);
        let mut psi1 = CMatrix::zeros(1, 3);
        psi1[(0, 2)] = Complex64::new(1.0, 0.0);
        let mut psi2 = CMatrix::zeros(1, 5);
        psi2[(0, 0)] = Complex64::new(1.0, 0.0);
        PullbackModule::new(
            pb,
            Arc::new(bundle),
            Arc::new(free),
            Arc::new(h),
            psi1,
            psi2,
        )
        .unwrap()
    }

    #[test]
    fn membership_needs_equal_glue_coordinates() {
        let e = glued();
        let x1 = ModVec::from_real(&[1.0, 2.0, 3.0]);
        let x2 = ModVec::from_real(&[3.0, 1.0, 0.0, 0.0, 1.0]);
        let x = e.pair(&x1, &x2).unwrap();
        assert!(e.contains(&x));
        let bad = ModVec::from_real(&[4.0, 1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(e.pair(&x1, &bad), Err(Error::GlueMismatch { .. })));
        assert!(!e.contains(&x1.concat(&bad)));
        // glue block of rho sees the same value from both sides
        let r = e.rho(&x).unwrap();
        assert_eq!(e.base().block_dims(), &[1, 2, 1]);
        assert!((r.block(2)[(0, 0)].re - 3.0).abs() < 1e-14);
        assert!((r.block(0)[(0, 0)].re - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sampled_vectors_are_members() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
        let e = glued();
        assert_eq!(e.basis().len(), 3 + 5 - 1);
        for _ in 0..20 {
            assert!(e.contains(&e.sample_vector(&mut rng)));
        }
    }

    #[test]
    fn pullback_norm_is_the_max() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(2);
        let e = glued();
        for _ in 0..20 {
            let x = e.sample_vector(&mut rng);
            let (x1, x2) = e.split(&x).unwrap();
            let expected = e
                .left()
                .norm(&x1)
                .unwrap()
                .max(e.right().norm(&x2).unwrap());
            assert!((e.norm(&x).unwrap() - expected).abs() < 1e-10 * (1.0 + expected));
        }
    }

    #[test]
    fn incompatible_maps_are_rejected() {
        let b1 = FdAlgebra::commutative(1);
        let pb = PullbackAlgebra::new(StarHom::identity(&b1), StarHom::identity(&b1)).unwrap();
        let left = Arc::new(BundleSectionModule::over_points(vec![FiberNorm::lp(
            2.0, 1,
        )
        .unwrap()]));
        let right = Arc::new(BundleSectionModule::over_points(vec![FiberNorm::lp(
            2.0, 1,
        )
        .unwrap()]));
        let h = Arc::new(BundleSectionModule::over_points(vec![FiberNorm::lp(
            2.0, 1,
        )
        .unwrap()]));
        let twice = CMatrix::scalar(1, Complex64::new(2.0, 0.0));
        let err = PullbackModule::new(pb, left, right, h, twice, CMatrix::identity(1)).unwrap_err();
        assert!(matches!(err, Error::NotCompatible(_)));
    }

    #[test]
    fn round_trip_through_the_quotients() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
        let e = glued();
        let module: ModuleRef = Arc::new(e.clone());
        let d = canonical_decompose(&module, e.pullback_algebra()).unwrap();
        let cert = d.certify(&mut rng, 40).unwrap();
        assert!(cert.holds(1e-8), "{cert:?}");
        // F1 is the bundle, F2 the free module, H the shared fiber
        for _ in 0..20 {
            let x = e.sample_vector(&mut rng);
            let (x1, x2) = e.split(&x).unwrap();
            assert!((d.left.norm(&x).unwrap() - e.left().norm(&x1).unwrap()).abs() < 1e-10);
            assert!((d.right.norm(&x).unwrap() - e.right().norm(&x2).unwrap()).abs() < 1e-10);
            let hx = x1.mapped(e.psi_left()).unwrap();
            assert!((d.glue.norm(&x).unwrap() - e.glue().norm(&hx).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_glue_splits_into_summands() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(4);
        let left: ModuleRef = Arc::new(BundleSectionModule::over_points(vec![FiberNorm::lp(
            1.0, 2,
        )
        .unwrap()]));
        let right: ModuleRef = Arc::new(FreeHilbertModule::new(&FdAlgebra::matrix(2), 2));
        let e = PullbackModule::direct_sum(left.clone(), right.clone()).unwrap();
        assert_eq!(e.basis().len(), e.dim());
        let module: ModuleRef = Arc::new(e.clone());
        let d = canonical_decompose(&module, e.pullback_algebra()).unwrap();
        assert!(d.certify(&mut rng, 30).unwrap().holds(1e-8));
        assert!(d.glue.base().is_zero());
        for _ in 0..10 {
            let x = e.sample_vector(&mut rng);
            let (x1, x2) = e.split(&x).unwrap();
            assert!((d.left.norm(&x).unwrap() - left.norm(&x1).unwrap()).abs() < 1e-10);
            assert!((d.right.norm(&x).unwrap() - right.norm(&x2).unwrap()).abs() < 1e-10);
            assert_eq!(d.glue.norm(&x).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_foreign_base() {
        let e = glued();
        let module: ModuleRef = Arc::new(FreeHilbertModule::new(&FdAlgebra::matrix(2), 1));
        assert_eq!(
            canonical_decompose(&module, e.pullback_algebra()).unwrap_err(),
            Error::NotPullbackBase
        );
    }
}
