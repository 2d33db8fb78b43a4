//! Splitting a Finsler module along the maximal commutative ideal of its base.

use alloc::format;
use alloc::string::String;

use super::polar::{hilbertize, HilbertStructure, Hilbertization};
use super::report::{Claim, Status, VerdictReport};
use crate::algebra::{decompose, maximal_commutative_ideal, IdealDecomposition};
use crate::error::{Error, Result};
use crate::gen;
use crate::modules::{
    canonical_decompose, quotient_module, CanonicalDecomposition, FinslerModule,
    IsomorphismCertificate, ModuleRef,
};
use crate::tolerance;

/// `E = E1 (+)_{E0} E2` with `E1 = E/JE` over `C0(X)`, `E2 = E/IE` Hilbert
/// over `B = A/I` and `E0 = E/(I+J)E` Hilbert over `C0(Y)`.
#[derive(Debug, Clone)]
pub struct StructureDecomposition {
    pub algebra: IdealDecomposition,
    pub canonical: CanonicalDecomposition,
    pub e2_inner: HilbertStructure,
    pub e0_inner: HilbertStructure,
    pub e1_zero: bool,
    pub e2_zero: bool,
    /// Always true in finite dimension, where `Y` is empty.
    pub e0_zero: bool,
    pub certificate: IsomorphismCertificate,
}

impl StructureDecomposition {
    pub fn e1(&self) -> ModuleRef {
        self.canonical.left.clone()
    }

    pub fn e2(&self) -> ModuleRef {
        self.canonical.right.clone()
    }

    pub fn e0(&self) -> ModuleRef {
        self.canonical.glue.clone()
    }

    pub fn holds(&self) -> bool {
        self.certificate.holds(tolerance::CERTIFICATE)
            && self.e2_inner.certificate.holds()
            && self.e0_inner.certificate.holds()
    }
}

/// A module is zero when its base is zero or every basis vector has norm 0.
pub fn is_zero_module(e: &dyn FinslerModule) -> Result<bool> {
    if e.base().is_zero() {
        return Ok(true);
    }
    for b in e.basis() {
        if e.norm(&b)? > tolerance::ABS_FLOOR {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_hilbert(e: ModuleRef, samples: usize, seed: u64) -> Result<HilbertStructure> {
    match hilbertize(&e, samples, seed)? {
        Hilbertization::Hilbert(h) => Ok(h),
        Hilbertization::Refused(w) | Hilbertization::Inconclusive(w) => {
            Err(Error::HilbertizeRefused { defect: w.defect })
        }
    }
}

pub fn structure_decompose(
    e: &ModuleRef,
    samples: usize,
    seed: u64,
) -> Result<StructureDecomposition> {
    let algebra = decompose(e.base());
    let canonical = canonical_decompose(e, &algebra.pullback)?;
    let e2_inner = require_hilbert(
        canonical.right.clone() as ModuleRef,
        samples,
        gen::stream_seed(seed, 1),
    )?;
    let e0_inner = require_hilbert(
        canonical.glue.clone() as ModuleRef,
        samples,
        gen::stream_seed(seed, 2),
    )?;
    let mut rng = gen::stream(seed, 3);
    let certificate = canonical.certify(&mut rng, samples)?;
    Ok(StructureDecomposition {
        e1_zero: is_zero_module(canonical.left.as_ref())?,
        e2_zero: is_zero_module(canonical.right.as_ref())?,
        e0_zero: is_zero_module(canonical.glue.as_ref())?,
        algebra,
        canonical,
        e2_inner,
        e0_inner,
        certificate,
    })
}

pub fn check_structure_decomposition(
    e: &ModuleRef,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let (status, residual, note) = match structure_decompose(e, samples, seed) {
        Ok(s) => {
            let r = s
                .certificate
                .max_residual()
                .max(s.e2_inner.certificate.max_residual())
                .max(s.e0_inner.certificate.max_residual());
            let status = if s.holds() {
                Status::Pass
            } else {
                Status::Fail
            };
            let note = format!(
                "E1 {}, E2 {}, E0 {}",
                zero_word(s.e1_zero),
                zero_word(s.e2_zero),
                zero_word(s.e0_zero)
            );
            (status, r, note)
        }
        Err(Error::HilbertizeRefused { defect }) => (
            Status::Fail,
            defect,
            String::from("E/IE is not Hilbert: the module is broken"),
        ),
        Err(err) => return Err(err),
    };
    Ok(VerdictReport {
        claim: Claim::StructureDecomposition,
        status,
        max_residual: residual,
        tolerance: tolerance::CERTIFICATE,
        witness: None,
        samples,
        seed,
        note,
    })
}

fn zero_word(zero: bool) -> &'static str {
    if zero {
        "= 0"
    } else {
        "!= 0"
    }
}

/// Kernel certificate for `E / IE` with `I` the maximal commutative ideal.
pub fn check_quotient_kernel(e: &ModuleRef, samples: usize, seed: u64) -> Result<VerdictReport> {
    let ideal = maximal_commutative_ideal(e.base());
    let mut rng = gen::rng(seed);
    let (_, cert) = quotient_module(e.clone(), &ideal, &mut rng, samples)?;
    let residual = cert.ideal_in_kernel.max(cert.kernel_in_ideal);
    Ok(VerdictReport {
        claim: Claim::QuotientKernel,
        status: if cert.holds(tolerance::CERTIFICATE) {
            Status::Pass
        } else {
            Status::Fail
        },
        max_residual: residual,
        tolerance: tolerance::CERTIFICATE,
        witness: None,
        samples,
        seed,
        note: format!(
            "IE in ker {:.3e}, ker in IE {:.3e}",
            cert.ideal_in_kernel, cert.kernel_in_ideal
        ),
    })
}
