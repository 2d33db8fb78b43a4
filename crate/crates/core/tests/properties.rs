use std::sync::Arc;

use proptest::prelude::*;

use finsler::algebra::FdAlgebra;
use finsler::gen::{self, sample, GenConfig, ModuleFamily};
use finsler::linalg::{herm_eig, psd_sqrt, CMatrix};
use finsler::modules::{FinslerModule, FreeHilbertModule, ModVec, ModuleRef};
use finsler::theory::*;

fn hermitian(seed: u64, n: usize) -> CMatrix {
    let g = sample::gaussian_matrix(&mut gen::rng(seed), n, n);
    (&g + &g.adjoint()).scale_real(0.5)
}

fn algebra(seed: u64, max_dim: usize) -> FdAlgebra {
    let cfg = GenConfig {
        dim_pool: (1..=max_dim).collect(),
        ..GenConfig::with_seed(seed)
    };
    gen::gen_algebra(&cfg, &mut gen::rng(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstructs(seed in any::<u64>(), n in 1usize..8) {
        let h = hermitian(seed, n);
        let eig = herm_eig(&h).unwrap();
        prop_assert!(eig.reconstruct().distance(&h) <= 1e-12 * (1.0 + h.frobenius_norm()));
        let v = &eig.eigenvectors;
        prop_assert!((&v.adjoint() * v).distance(&CMatrix::identity(n)) <= 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back(seed in any::<u64>(), n in 1usize..8) {
        let g = sample::gaussian_matrix(&mut gen::rng(seed), n, n);
        let p = &g * &g.adjoint();
        let s = psd_sqrt(&p).unwrap();
        prop_assert!(s.hermitian_defect() <= 1e-12 * (1.0 + s.frobenius_norm()));
        prop_assert!((&s * &s).distance(&p) <= 1e-10 * (1.0 + p.frobenius_norm()));
    }

    #[test]
    fn gap_witness_is_sound(seed in any::<u64>()) {
        let a = algebra(seed, 4);
        let mut rng = gen::rng(seed ^ 1);
        let b = gen::gen_positive(&a, &mut rng);
        let c = gen::gen_positive(&a, &mut rng);
        let w = akemann_gap_witness(&b, &c).unwrap();
        prop_assert!(w.is_feasible());
        prop_assert!((w.achieved_gap - w.target).abs() <= 1e-8 * (1.0 + w.target));
    }

    #[test]
    fn gap_search_stays_feasible(seed in any::<u64>()) {
        let a = algebra(seed, 3);
        let mut rng = gen::rng(seed ^ 2);
        let b = gen::gen_positive(&a, &mut rng);
        let c = gen::gen_positive(&a, &mut rng);
        let w = akemann_gap_search(&b, &c, 200, seed).unwrap();
        prop_assert!(w.is_feasible(), "{w:?}");
    }

    #[test]
    fn self_parallelogram_vanishes(seed in any::<u64>()) {
        let a = algebra(seed, 3);
        let cfg = GenConfig::with_seed(seed);
        let mut rng = gen::rng(seed);
        let e = gen::gen_module(&a, &cfg, &mut rng).unwrap();
        let x = e.sample_vector(&mut rng);
        let n = e.norm(&x).unwrap();
        prop_assert!(parallelogram_defect(e.as_ref(), &x, &x).unwrap() <= 1e-9 * (1.0 + n * n));
    }

    #[test]
    fn polarization_is_sesquilinear_on_hilbert_modules(seed in any::<u64>()) {
        let a = algebra(seed, 3);
        let e = FreeHilbertModule::new(&a, 1 + (seed % 3) as usize);
        let mut rng = gen::rng(seed);
        let x = e.sample_vector(&mut rng);
        let y = e.sample_vector(&mut rng);
        let z = e.sample_vector(&mut rng);
        let lambda = sample::complex_gaussian(&mut rng);
        let scale = 1.0 + (e.norm(&x).unwrap() + e.norm(&z).unwrap()) * e.norm(&y).unwrap() * (1.0 + lambda.norm());
        let lhs = polarize(&e, &(&x.scale(lambda) + &z), &y).unwrap();
        let rhs = &polarize(&e, &x, &y).unwrap().scale(lambda) + &polarize(&e, &z, &y).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-8 * scale);
    }

    #[test]
    fn hilbertize_reproduces_the_inner_product(seed in any::<u64>()) {
        let a = algebra(seed, 3);
        let free = FreeHilbertModule::new(&a, 1 + (seed % 2) as usize);
        let e: ModuleRef = Arc::new(free.clone());
        let h = hilbertize(&e, 10, seed).unwrap();
        let h = h.structure().expect("Hilbert");
        let mut rng = gen::rng(seed ^ 3);
        let x = free.sample_vector(&mut rng);
        let y = free.sample_vector(&mut rng);
        let scale = 1.0 + free.norm(&x).unwrap() * free.norm(&y).unwrap();
        prop_assert!(h.inner(&x, &y).unwrap().distance(&free.inner(&x, &y).unwrap()) <= 1e-9 * scale);
    }

    #[test]
    fn commutative_characterizations_agree(seed in any::<u64>(), points in 1usize..6) {
        let cfg = GenConfig {
            module_families: vec![ModuleFamily::Bundle],
            ..GenConfig::with_seed(seed)
        };
        let e = gen::gen_module(&FdAlgebra::commutative(points), &cfg, &mut gen::rng(seed)).unwrap();
        prop_assert!(check_a_convex(e.as_ref(), 4, seed).unwrap().passed());
        prop_assert!(check_linf_norm_property(e.as_ref(), 4, seed).unwrap().passed());
        for r in axiom_suite(e.as_ref(), 8, seed).unwrap() {
            prop_assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn rank_one_identities(seed in any::<u64>(), n in 2usize..7) {
        let xi = sample::unit_vector(&mut gen::rng(seed), n);
        let (a, b) = rank_one_pair(&xi).unwrap();
        for r in rank_one_pair_residuals(&a, &b, &xi) {
            prop_assert!(r <= 1e-12);
        }
    }

    #[test]
    fn failed_reports_recheck(seed in any::<u64>()) {
        let e = finsler::modules::FrobeniusScalarModule::new(&FdAlgebra::matrix(2));
        let r = check_finsler_axiom2(&e, 5, seed).unwrap();
        prop_assert!(!r.passed());
        let again = recheck(&e, &r).unwrap().unwrap();
        prop_assert!(again > r.tolerance);
    }

    #[test]
    fn vector_arithmetic(seed in any::<u64>(), n in 0usize..6) {
        let mut rng = gen::rng(seed);
        let x = ModVec::new(sample::gaussian_vector(&mut rng, n));
        let y = ModVec::new(sample::gaussian_vector(&mut rng, n));
        let back = &(&x + &y) - &y;
        prop_assert!((&back - &x).coord_norm() <= 1e-12 * (1.0 + x.coord_norm()));
    }
}
