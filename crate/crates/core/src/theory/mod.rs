//! Checkers and constructions for the statements about Finsler modules.

mod akemann;
mod axioms;
mod polar;
mod report;
mod structure;

pub use akemann::{
    akemann_gap_search, akemann_gap_witness, akemann_residual, check_akemann_identity,
    distinguishing_witness, gap, GapWitness,
};
pub use axioms::{
    a_convex_residual, axiom2_residual, axiom_suite, banach_residual, central_residual,
    check_a_convex, check_banach_module, check_central_homogeneity, check_commutative_triangle,
    check_finsler_axiom2, check_linf_norm_property, linf_residual, lipschitz_bound_check,
    lipschitz_residual, triangle_residual, EXHAUSTIVE_POINTS,
};
pub use polar::{
    check_hilbertize, check_parallelogram_mod_ideal, check_polarization, check_rank_one_witness,
    hilbertize, hilbertize_with, parallelogram_defect, parallelogram_element,
    parallelogram_mod_ideal_residual, polarize, rank_one_pair, rank_one_pair_residuals,
    rank_one_residual, relative_defect, DefectWitness, HilbertCertificate, HilbertStructure,
    Hilbertization,
};
pub use report::{Claim, Status, UnknownClaim, VerdictReport, Witness};
pub use structure::{
    check_quotient_kernel, check_structure_decomposition, is_zero_module, structure_decompose,
    StructureDecomposition,
};

use crate::error::Result;
use crate::modules::FinslerModule;

/// Re-evaluate the residual of a report's witness on `e`.
///
/// `None` when the report has no witness or the claim's witness is not a
/// plain residual input (sampled certificates).
pub fn recheck(e: &dyn FinslerModule, report: &VerdictReport) -> Result<Option<f64>> {
    let Some(w) = report.witness.as_ref() else {
        return Ok(None);
    };
    let (v, a) = (&w.vectors, &w.elements);
    let r = match report.claim {
        Claim::BanachModule if v.len() == 1 && a.len() == 1 => banach_residual(e, &a[0], &v[0])?,
        Claim::FinslerAxiom2 if v.len() == 1 && a.len() == 1 => axiom2_residual(e, &a[0], &v[0])?,
        Claim::CentralHomogeneity if v.len() == 1 && a.len() == 1 => {
            central_residual(e, &a[0], &v[0])?
        }
        Claim::CommutativeTriangle if v.len() == 2 => triangle_residual(e, &v[0], &v[1])?,
        Claim::LipschitzBound if v.len() == 2 => lipschitz_residual(e, &v[0], &v[1])?,
        Claim::AConvex if v.len() == 2 && a.len() == 1 => {
            a_convex_residual(e, &a[0], &v[0], &v[1])?
        }
        Claim::LinfNorm if v.len() == 1 && a.len() == 1 => linf_residual(e, &a[0], &v[0])?,
        Claim::ParallelogramModIdeal if v.len() == 2 => {
            parallelogram_mod_ideal_residual(e, &v[0], &v[1])?
        }
        Claim::Hilbertize if v.len() == 2 => relative_defect(e, &v[0], &v[1])?,
        Claim::RankOneWitness if v.len() == 1 => rank_one_residual(v[0].as_slice())?,
        Claim::AkemannIdentity if a.len() == 3 => akemann_residual(&a[0], &a[1], &a[2])?,
        _ => return Ok(None),
    };
    Ok(Some(r))
}
