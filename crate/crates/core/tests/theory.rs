use std::sync::Arc;

use finsler::algebra::{AlgElement, FdAlgebra, PullbackAlgebra, StarHom};
use finsler::linalg::{CMatrix, Complex64};
use finsler::modules::{
    BundleSectionModule, FiberNorm, FinslerModule, FreeHilbertModule, FrobeniusScalarModule,
    ModVec, ModuleRef, PullbackModule,
};
use finsler::theory::*;
use finsler::Error;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn real_element(algebra: &FdAlgebra, blocks: &[&[&[f64]]]) -> AlgElement {
    AlgElement::from_blocks(
        algebra,
        blocks.iter().map(|b| CMatrix::from_real_rows(b)).collect(),
    )
    .unwrap()
}

fn bundle(p: f64, dims: &[usize]) -> BundleSectionModule {
    BundleSectionModule::over_points(dims.iter().map(|&d| FiberNorm::lp(p, d).unwrap()).collect())
}

#[test]
fn frobenius_candidate_fails_axiom2_with_rechecked_witness() {
    let e = FrobeniusScalarModule::new(&FdAlgebra::matrix(2));
    let report = check_finsler_axiom2(&e, 20, 1).unwrap();
    assert!(!report.passed());
    let w = report.witness.as_ref().unwrap();
    let again = recheck(&e, &report).unwrap().unwrap();
    assert!((again - w.residual).abs() <= 1e-12 * (1.0 + again));
    assert!(again > report.tolerance);

    // a = diag(1, 0), x = I: rho(ax)^2 = 1, a rho(x)^2 a* = 2 diag(1, 0)
    let m2 = FdAlgebra::matrix(2);
    let a = real_element(&m2, &[&[&[1.0, 0.0], &[0.0, 0.0]]]);
    let x = ModVec::from_real(&[1.0, 0.0, 0.0, 1.0]);
    let lhs = e.rho_sq(&e.act(&a, &x).unwrap()).unwrap();
    assert!(lhs.distance(&AlgElement::one(&m2)) < 1e-12);
    assert!(axiom2_residual(&e, &a, &x).unwrap() > 0.1);
}

#[test]
fn genuine_families_pass_the_axiom_suite() {
    let base = FdAlgebra::new(vec![1, 2, 3]).unwrap();
    let free = FreeHilbertModule::new(&base, 2);
    for r in axiom_suite(&free, 50, 3).unwrap() {
        assert!(r.passed(), "{r:?}");
    }
    let b = bundle(1.5, &[2, 3, 1]);
    let reports = axiom_suite(&b, 50, 4).unwrap();
    assert_eq!(reports.len(), 4);
    for r in reports {
        assert!(r.passed(), "{r:?}");
    }
    assert!(lipschitz_bound_check(&b, 50, 5).unwrap().passed());
    assert!(lipschitz_bound_check(&free, 50, 5).unwrap().passed());
}

#[test]
fn triangle_check_needs_commutative_base() {
    let free = FreeHilbertModule::new(&FdAlgebra::matrix(2), 1);
    assert_eq!(
        check_commutative_triangle(&free, 5, 1).unwrap_err(),
        Error::NotCommutativeBase
    );
    assert_eq!(
        check_a_convex(&free, 5, 1).unwrap_err(),
        Error::NotCommutativeBase
    );
}

#[test]
fn central_homogeneity_on_a_bundle() {
    // f = (-2, 3i) scales the fiber norms by (2, 3)
    let e = bundle(1.0, &[2, 1]);
    let f = AlgElement::diagonal(&[c(-2.0), Complex64::new(0.0, 3.0)]);
    let x = ModVec::from_real(&[1.0, -1.0, 4.0]);
    let r = e.rho(&e.act(&f, &x).unwrap()).unwrap();
    assert!((r.block(0)[(0, 0)].re - 4.0).abs() < 1e-14);
    assert!((r.block(1)[(0, 0)].re - 12.0).abs() < 1e-14);
    assert!(central_residual(&e, &f, &x).unwrap() < 1e-14);
}

#[test]
fn akemann_witness_on_the_two_by_two_example() {
    let m2 = FdAlgebra::matrix(2);
    let b = real_element(&m2, &[&[&[1.0, 0.0], &[0.0, 0.0]]]);
    let cc = real_element(&m2, &[&[&[0.5, 0.5], &[0.5, 0.5]]]);
    let w = akemann_gap_witness(&b, &cc).unwrap();
    let expected = 0.5f64.sqrt();
    assert!((w.target - expected).abs() < 1e-12);
    assert!((w.achieved_gap - expected).abs() < 1e-12);
    assert!(w.is_feasible());
}

#[test]
fn akemann_witness_on_the_diagonal_example() {
    let b = AlgElement::diagonal(&[c(1.0), c(0.0)]);
    let cc = AlgElement::diagonal(&[c(0.0), c(1.0)]);
    let w = akemann_gap_witness(&b, &cc).unwrap();
    assert!((w.achieved_gap - 1.0).abs() < 1e-14);
    let s = akemann_gap_search(&b, &cc, 2000, 9).unwrap();
    assert!(s.is_feasible());
    assert!((s.achieved_gap - 1.0).abs() < 1e-6, "{}", s.achieved_gap);
}

#[test]
fn akemann_rejects_non_positive_input() {
    let b = AlgElement::diagonal(&[c(-1.0)]);
    let cc = AlgElement::diagonal(&[c(1.0)]);
    assert!(matches!(
        akemann_gap_witness(&b, &cc),
        Err(Error::NotPositive { .. })
    ));
}

#[test]
fn akemann_equal_arguments_give_zero() {
    let b = AlgElement::diagonal(&[c(2.0), c(1.0)]);
    assert_eq!(akemann_gap_witness(&b, &b).unwrap().achieved_gap, 0.0);
    assert_eq!(
        akemann_gap_search(&b, &b, 100, 1).unwrap().achieved_gap,
        0.0
    );
}

#[test]
fn akemann_identity_report_passes() {
    let a = FdAlgebra::new(vec![1, 2, 3]).unwrap();
    let r = check_akemann_identity(&a, 50, 11).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[derive(Debug)]
struct Scaled(FreeHilbertModule);

impl Scaled {
    fn rho2(&self, x: &ModVec) -> finsler::Result<AlgElement> {
        Ok(self.0.rho(x)?.scale_real(2.0))
    }
}

#[test]
fn distinguishing_witness_cases() {
    let free = FreeHilbertModule::new(&FdAlgebra::new(vec![1, 2]).unwrap(), 1);
    let same = distinguishing_witness(&free, &|x| free.rho(x), 10, 1).unwrap();
    assert!(same.passed());
    assert_eq!(same.note, "indistinguishable on samples");

    let s = Scaled(free.clone());
    let r = distinguishing_witness(&free, &|x| s.rho2(x), 10, 1).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.note.starts_with("distinguished"));

    // l1 vs l2 on x = (1, 1): squared norms 4 and 2
    let l1 = bundle(1.0, &[2]);
    let l2 = bundle(2.0, &[2]);
    let x = ModVec::from_real(&[1.0, 1.0]);
    assert!((l1.norm(&x).unwrap().powi(2) - 4.0).abs() < 1e-12);
    assert!((l2.norm(&x).unwrap().powi(2) - 2.0).abs() < 1e-12);
    let r = distinguishing_witness(&l1, &|x| l2.rho(x), 20, 2).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn polarization_examples() {
    let m2 = FdAlgebra::matrix(2);
    let e = FreeHilbertModule::new(&m2, 1);
    let x = ModVec::from_real(&[1.0, 0.0, 0.0, 1.0]);
    assert!(
        polarize(&e, &x, &x)
            .unwrap()
            .distance(&AlgElement::one(&m2))
            < 1e-14
    );
    assert!(polarize(&e, &x, &ModVec::zeros(4)).unwrap().norm() < 1e-14);
    let r = check_polarization(
        &FreeHilbertModule::new(&FdAlgebra::new(vec![1, 3]).unwrap(), 3),
        50,
        2,
    )
    .unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn parallelogram_defect_examples() {
    let l1 = bundle(1.0, &[2]);
    let x = ModVec::from_real(&[1.0, 0.0]);
    let y = ModVec::from_real(&[0.0, 1.0]);
    assert!((parallelogram_defect(&l1, &x, &y).unwrap() - 4.0).abs() < 1e-12);
    let linf = bundle(f64::INFINITY, &[2]);
    assert!((parallelogram_defect(&linf, &x, &y).unwrap() - 2.0).abs() < 1e-12);
    let z = ModVec::from_real(&[0.3, -1.7]);
    assert!(parallelogram_defect(&l1, &z, &z).unwrap() < 1e-9);
}

#[test]
fn rank_one_witness_examples() {
    let (a, b) = rank_one_pair(&[c(1.0), c(0.0)]).unwrap();
    assert!(a.distance(&CMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
    assert!(b.distance(&CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])) < 1e-15);
    let xi = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.48), c(0.64)];
    let (a, b) = rank_one_pair(&xi).unwrap();
    for r in rank_one_pair_residuals(&a, &b, &xi) {
        assert!(r < 1e-12);
    }
    assert_eq!(
        rank_one_pair(&[c(1.0)]).unwrap_err(),
        Error::DimensionTooSmall(1)
    );
    assert!(matches!(
        rank_one_pair(&[c(1.0), c(1.0)]),
        Err(Error::NotUnitVector(_))
    ));
}

/// The l1 bundle on C glued trivially to the free rank-1 module over M2.
fn l1_plus_free() -> (PullbackModule, ModuleRef) {
    let left: ModuleRef = Arc::new(bundle(1.0, &[2]));
    let right: ModuleRef = Arc::new(FreeHilbertModule::new(&FdAlgebra::matrix(2), 1));
    let e = PullbackModule::direct_sum(left.clone(), right).unwrap();
    (e, left)
}

#[test]
fn parallelogram_defect_lives_on_the_commutative_blocks() {
    let (e, _) = l1_plus_free();
    assert_eq!(e.base().block_dims(), &[1, 2]);
    let r = check_parallelogram_mod_ideal(&e, 40, 3).unwrap();
    assert!(r.passed(), "{r:?}");
    let x = ModVec::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let y = ModVec::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let d = parallelogram_element(&e, &x, &y).unwrap();
    assert!((d.block(0)[(0, 0)].re - 4.0).abs() < 1e-12);
    assert!(d.norm_on(&[1]) < 1e-14);
    assert!(check_parallelogram_mod_ideal(&bundle(1.0, &[2]), 5, 1)
        .unwrap()
        .note
        .contains("vacuous"));
}

#[test]
fn hilbertize_recovers_the_free_inner_product() {
    let free = FreeHilbertModule::new(&FdAlgebra::new(vec![2, 1]).unwrap(), 2);
    let e: ModuleRef = Arc::new(free.clone());
    let h = hilbertize(&e, 30, 4).unwrap();
    let s = h.structure().expect("free modules are Hilbert");
    assert!(s.certificate.holds(), "{:?}", s.certificate);
    let mut rng = finsler::gen::rng(5);
    for _ in 0..20 {
        let x = free.sample_vector(&mut rng);
        let y = free.sample_vector(&mut rng);
        let scale = 1.0 + free.norm(&x).unwrap() * free.norm(&y).unwrap();
        assert!(
            s.inner(&x, &y)
                .unwrap()
                .distance(&free.inner(&x, &y).unwrap())
                / scale
                < 1e-9
        );
    }
}

#[test]
fn hilbertize_on_bundles() {
    let l2: ModuleRef = Arc::new(bundle(2.0, &[2, 3]));
    assert!(hilbertize(&l2, 30, 1).unwrap().is_hilbert());
    let l1: ModuleRef = Arc::new(bundle(1.0, &[2, 3]));
    match hilbertize(&l1, 30, 1).unwrap() {
        Hilbertization::Refused(w) => assert!(w.defect >= 4.0 - 1e-12, "{w:?}"),
        other => panic!("expected refusal, got {other:?}"),
    }
    let report = check_hilbertize(&l1, 30, 1).unwrap();
    assert!(!report.passed());
    assert!(recheck(l1.as_ref(), &report).unwrap().unwrap() >= 1e-4);
}

#[test]
fn hilbertize_zero_module() {
    let zero: ModuleRef = Arc::new(FreeHilbertModule::new(&FdAlgebra::zero(), 3));
    assert!(hilbertize(&zero, 5, 1).unwrap().is_hilbert());
}

#[test]
fn structure_of_a_trivially_glued_module() {
    let (e, left) = l1_plus_free();
    let e: ModuleRef = Arc::new(e);
    let s = structure_decompose(&e, 30, 7).unwrap();
    assert!(s.holds(), "{:?}", s.certificate);
    assert!(!s.e1_zero && !s.e2_zero && s.e0_zero);
    assert_eq!(s.e1().base(), &FdAlgebra::commutative(1));
    assert_eq!(s.e2().base(), &FdAlgebra::matrix(2));
    // E1 agrees with the l1 bundle on the left coordinates
    let x = ModVec::from_real(&[3.0, -1.0, 1.0, 2.0, 0.0, 1.0]);
    let y = ModVec::from_real(&[3.0, -1.0]);
    assert!((s.e1().norm(&x).unwrap() - left.norm(&y).unwrap()).abs() < 1e-12);
    let r = check_structure_decomposition(&e, 20, 1).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.note, "E1 != 0, E2 != 0, E0 = 0");
}

#[test]
fn structure_of_commutative_and_matrix_bases() {
    let b: ModuleRef = Arc::new(bundle(3.0, &[2, 1]));
    let s = structure_decompose(&b, 20, 1).unwrap();
    assert!(s.holds());
    assert!(!s.e1_zero && s.e2_zero && s.e0_zero);

    let m3: ModuleRef = Arc::new(FreeHilbertModule::new(&FdAlgebra::matrix(3), 2));
    let s = structure_decompose(&m3, 20, 1).unwrap();
    assert!(s.holds());
    assert!(s.e1_zero && !s.e2_zero && s.e0_zero);
}

#[test]
fn commutative_equivalences_on_bundles() {
    let e = bundle(1.5, &[2, 1, 3]);
    assert!(check_a_convex(&e, 20, 1).unwrap().passed());
    assert!(check_linf_norm_property(&e, 20, 1).unwrap().passed());
}

#[test]
fn claim_ids_round_trip() {
    for claim in Claim::ALL {
        assert_eq!(claim.id().parse::<Claim>().unwrap(), claim);
    }
    assert!("nope".parse::<Claim>().is_err());
}

#[test]
fn pullback_algebra_glue_example_structure() {
    let b1 = FdAlgebra::commutative(2);
    let b2 = FdAlgebra::new(vec![1, 2]).unwrap();
    let pb = PullbackAlgebra::new(
        StarHom::routing(&b1, &[1]).unwrap(),
        StarHom::routing(&b2, &[0]).unwrap(),
    )
    .unwrap();
    assert_eq!(pb.algebra().block_dims(), &[1, 2, 1]);
}

#[test]
fn rank_one_witness_report() {
    let r = check_rank_one_witness(&FdAlgebra::new(vec![1, 2, 3]).unwrap(), 10, 4).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.max_residual <= 1e-12);
    let vacuous = check_rank_one_witness(&FdAlgebra::commutative(3), 10, 4).unwrap();
    assert!(vacuous.passed());
    assert!(vacuous.note.starts_with("vacuous"));
}

#[test]
fn quotient_kernel_report() {
    let a = FdAlgebra::new(vec![1, 2]).unwrap();
    let e: ModuleRef = Arc::new(FreeHilbertModule::new(&a, 2));
    let r = check_quotient_kernel(&e, 10, 5).unwrap();
    assert!(r.passed(), "{r:?}");
    let e: ModuleRef = Arc::new(bundle(1.0, &[2, 1]));
    assert!(check_quotient_kernel(&e, 10, 5).unwrap().passed());
}
