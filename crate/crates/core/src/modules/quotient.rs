use alloc::format;

use rand::Rng;

use super::{FinslerModule, ModVec, ModuleDescription, ModuleRef};
use crate::algebra::{quotient_hom, AlgElement, FdAlgebra, Ideal, StarHom};
use crate::error::{Error, Result};
use crate::gen::sample;
use crate::linalg::{null_space, CMatrix};

/// `E / IE` over `B = A / I`, with `rho'(x + IE) = pi(rho(x))`.
///
/// Vectors are parent vectors standing for their cosets. Since `I` has the
/// unit `e`, `IE = eE` and `(1 - e)x` is a canonical representative.
#[derive(Debug, Clone)]
pub struct QuotientModule {
    parent: ModuleRef,
    hom: StarHom,
    ideal: Ideal,
    ideal_unit: AlgElement,
    co_unit: AlgElement,
}

impl QuotientModule {
    pub fn new(parent: ModuleRef, ideal: &Ideal) -> Result<Self> {
        if ideal.algebra() != parent.base() {
            return Err(Error::InvalidIdeal(format!(
                "ideal of {:?} for a module over {:?}",
                ideal.algebra().block_dims(),
                parent.base().block_dims()
            )));
        }
        Self::along(parent, quotient_hom(ideal))
    }

    /// Quotient by the kernel of a surjection `pi : A -> B`, realized over `B`.
    pub fn along(parent: ModuleRef, hom: StarHom) -> Result<Self> {
        if hom.source() != parent.base() {
            return Err(Error::AlgebraMismatch);
        }
        if !hom.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let ideal = hom.kernel();
        let ideal_unit = ideal.unit();
        let co_unit = &AlgElement::one(parent.base()) - &ideal_unit;
        Ok(Self {
            parent,
            hom,
            ideal,
            ideal_unit,
            co_unit,
        })
    }

    pub fn parent(&self) -> &ModuleRef {
        &self.parent
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn hom(&self) -> &StarHom {
        &self.hom
    }

    /// `(1 - e) x`.
    pub fn canonical(&self, x: &ModVec) -> Result<ModVec> {
        self.parent.act(&self.co_unit, x)
    }

    /// `e x`, the component in `IE`.
    pub fn ideal_part(&self, x: &ModVec) -> Result<ModVec> {
        self.parent.act(&self.ideal_unit, x)
    }

    /// Matrix of `x -> (1 - e)x` on parent coordinates.
    fn co_unit_matrix(&self) -> Result<CMatrix> {
        let n = self.parent.dim();
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.canonical(&ModVec::unit(n, j))?;
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        Ok(m)
    }

    /// Sampled two-sided check that `ker rho' = IE`.
    pub fn certify_kernel<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<KernelCertificate> {
        let base = self.parent.base().clone();
        let mut ideal_in_kernel: f64 = 0.0;
        let mut kernel_in_ideal: f64 = 0.0;
        for _ in 0..samples {
            // IE in ker rho'
            let a = &self.ideal_unit * &sample::gaussian_element(rng, &base);
            let x = self.parent.sample_vector(rng);
            let ax = self.parent.act(&a, &x)?;
            let scale = 1.0 + a.norm() * self.parent.norm(&x)?;
            ideal_in_kernel = ideal_in_kernel.max(self.rho(&ax)?.norm() / scale);

            // dist(y, IE) <= ||y - ey|| = ||rho'(y)||
            let y = self.parent.sample_vector(rng);
            let residual = self.parent.norm(&self.canonical(&y)?)?;
            let quotient_norm = self.norm(&y)?;
            let scale = 1.0 + self.parent.norm(&y)?;
            kernel_in_ideal = kernel_in_ideal.max((residual - quotient_norm).abs() / scale);
        }

        // vectors of the module killed by rho': null space of (1 - e) on
        // the span of the parent basis
        let basis = self.parent.basis();
        if !basis.is_empty() {
            let n = self.parent.dim();
            let b = CMatrix::from_fn(n, basis.len(), |i, j| basis[j][i]);
            let image = &self.co_unit_matrix()? * &b;
            let kernel = null_space(&image, 1e-6)?;
            for k in 0..kernel.cols() {
                let x = ModVec::new(b.apply(&kernel.column(k)));
                let scale = 1.0 + self.parent.norm(&x)?;
                ideal_in_kernel = ideal_in_kernel.max(self.rho(&x)?.norm() / scale);
                let gap = &x - &self.ideal_part(&x)?;
                kernel_in_ideal = kernel_in_ideal.max(self.parent.norm(&gap)? / scale);
            }
        }
        Ok(KernelCertificate {
            ideal_in_kernel,
            kernel_in_ideal,
            samples,
        })
    }
}

/// Residuals for `IE ⊂ ker rho'` and `ker rho' ⊂ IE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCertificate {
    /// Largest relative `||rho'(x)||` over sampled `x` in `IE`.
    pub ideal_in_kernel: f64,
    /// Largest relative gap between `||rho'(y)||` and the distance bound
    /// `||y - ey||`, together with the distance to `IE` of sampled kernel
    /// vectors.
    pub kernel_in_ideal: f64,
    pub samples: usize,
}

impl KernelCertificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.ideal_in_kernel <= tol && self.kernel_in_ideal <= tol
    }
}

/// `E / IE` together with its kernel certificate.
pub fn quotient_module<R: Rng>(
    parent: ModuleRef,
    ideal: &Ideal,
    rng: &mut R,
    samples: usize,
) -> Result<(QuotientModule, KernelCertificate)> {
    let q = QuotientModule::new(parent, ideal)?;
    let cert = q.certify_kernel(rng, samples)?;
    Ok((q, cert))
}

impl FinslerModule for QuotientModule {
    fn base(&self) -> &FdAlgebra {
        self.hom.target()
    }

    fn dim(&self) -> usize {
        self.parent.dim()
    }

    fn act(&self, b: &AlgElement, x: &ModVec) -> Result<ModVec> {
        let a = self.hom.lift(b)?;
        self.parent.act(&a, x)
    }

    fn rho(&self, x: &ModVec) -> Result<AlgElement> {
        self.hom.apply(&self.parent.rho(x)?)
    }

    fn family(&self) -> &'static str {
        "quotient"
    }

    fn describe(&self) -> ModuleDescription {
        ModuleDescription::Quotient {
            parent: alloc::boxed::Box::new(self.parent.describe()),
            hom: self.hom.clone(),
        }
    }

    fn basis(&self) -> alloc::vec::Vec<ModVec> {
        self.parent.basis()
    }

    fn contains(&self, x: &ModVec) -> bool {
        self.parent.contains(x)
    }
}
