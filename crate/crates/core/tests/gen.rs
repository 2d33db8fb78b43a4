use std::sync::Arc;

use finsler::algebra::FdAlgebra;
use finsler::gen::{self, GenConfig, ModuleFamily};
use finsler::modules::{canonical_decompose, ModuleRef};
use finsler::theory::{axiom_suite, hilbertize, structure_decompose, Hilbertization};
use finsler::Error;

#[test]
fn same_seed_gives_identical_instances() {
    let cfg = GenConfig::with_seed(42);
    let run = || {
        let mut rng = gen::instance_rng(&cfg, 3);
        let a = gen::gen_algebra(&cfg, &mut rng).unwrap();
        let e = gen::gen_module(&a, &cfg, &mut rng).unwrap();
        let x = gen::gen_vector(e.as_ref(), &mut rng);
        let p = gen::gen_positive(&a, &mut rng);
        (a, e.family(), x, p)
    };
    assert_eq!(run(), run());
}

#[test]
fn streams_differ() {
    let cfg = GenConfig::with_seed(1);
    let a = gen::gen_positive(&FdAlgebra::matrix(3), &mut gen::instance_rng(&cfg, 0));
    let b = gen::gen_positive(&FdAlgebra::matrix(3), &mut gen::instance_rng(&cfg, 1));
    assert_ne!(a, b);
}

#[test]
fn generated_positives_are_positive() {
    let cfg = GenConfig::with_seed(5);
    for i in 0..20 {
        let mut rng = gen::instance_rng(&cfg, i);
        let a = gen::gen_algebra(&cfg, &mut rng).unwrap();
        assert!(gen::gen_positive(&a, &mut rng).is_positive());
    }
}

#[test]
fn config_validation() {
    let bad = [
        GenConfig {
            samples: 0,
            ..GenConfig::default()
        },
        GenConfig {
            dim_pool: vec![],
            ..GenConfig::default()
        },
        GenConfig {
            fiber_p_pool: vec![0.5],
            ..GenConfig::default()
        },
        GenConfig {
            module_families: vec![],
            ..GenConfig::default()
        },
    ];
    for cfg in bad {
        assert!(
            matches!(cfg.validate(), Err(Error::ConfigInvalid(_))),
            "{cfg:?}"
        );
        assert!(gen::gen_algebra(&cfg, &mut gen::rng(0)).is_err());
    }
    assert_eq!(
        "pullback".parse::<ModuleFamily>().unwrap(),
        ModuleFamily::Pullback
    );
    assert!("nope".parse::<ModuleFamily>().is_err());
}

#[test]
fn bundles_only_over_commutative_bases() {
    let cfg = GenConfig {
        module_families: vec![ModuleFamily::Bundle],
        ..GenConfig::with_seed(2)
    };
    let m2 = FdAlgebra::new(vec![1, 2]).unwrap();
    assert!(matches!(
        gen::gen_module(&m2, &cfg, &mut gen::rng(0)),
        Err(Error::ConfigInvalid(_))
    ));
    let e = gen::gen_module(&FdAlgebra::commutative(3), &cfg, &mut gen::rng(0)).unwrap();
    assert_eq!(e.family(), "bundle");
}

#[test]
fn every_family_satisfies_the_axioms() {
    let cfg = GenConfig::with_seed(9);
    for i in 0..12 {
        let mut rng = gen::instance_rng(&cfg, i);
        let a = gen::gen_algebra(&cfg, &mut rng).unwrap();
        for family in ModuleFamily::ALL {
            if family == ModuleFamily::Bundle && !a.is_commutative() {
                continue;
            }
            let e = gen::gen_module_of(family, &a, &cfg, &mut rng).unwrap();
            assert_eq!(e.base(), &a);
            for r in axiom_suite(e.as_ref(), 20, i).unwrap() {
                assert!(r.passed(), "{family} over {:?}: {r:?}", a.block_dims());
            }
        }
    }
}

#[test]
fn no_commutative_ideal_means_no_commutative_part() {
    let cfg = GenConfig {
        dim_pool: vec![2, 3],
        ..GenConfig::with_seed(4)
    };
    for i in 0..6 {
        let mut rng = gen::instance_rng(&cfg, i);
        let a = gen::gen_algebra(&cfg, &mut rng).unwrap();
        assert!(a.one_dim_blocks().is_empty());
        let e = gen::gen_module(&a, &cfg, &mut rng).unwrap();
        let s = structure_decompose(&e, 10, i).unwrap();
        assert!(s.e1_zero && s.e0_zero, "{:?}", a.block_dims());
        assert!(hilbertize(&e, 20, i).unwrap().is_hilbert());
        assert_eq!(
            gen::gen_counterexample(&a, &cfg, &mut rng).unwrap_err(),
            Error::NoCommutativeIdeal
        );
    }
}

#[test]
fn counterexample_on_a_point() {
    let cfg = GenConfig {
        fiber_p_pool: vec![1.0],
        max_fiber_dim: 2,
        ..GenConfig::with_seed(0)
    };
    let ce = gen::gen_counterexample(&FdAlgebra::commutative(1), &cfg, &mut gen::rng(0)).unwrap();
    assert!((ce.defect - 4.0).abs() < 1e-12);
    assert_eq!(ce.p, 1.0);
}

#[test]
fn counterexample_next_to_a_matrix_block() {
    let cfg = GenConfig {
        fiber_p_pool: vec![f64::INFINITY],
        max_fiber_dim: 2,
        ..GenConfig::with_seed(0)
    };
    let a = FdAlgebra::new(vec![1, 2]).unwrap();
    let ce = gen::gen_counterexample(&a, &cfg, &mut gen::rng(3)).unwrap();
    assert_eq!(ce.block, 0);
    assert!((ce.defect - 2.0).abs() < 1e-12);
    let e: ModuleRef = ce.module.clone();
    for r in axiom_suite(e.as_ref(), 30, 1).unwrap() {
        assert!(r.passed(), "{r:?}");
    }
    assert!(matches!(
        hilbertize(&e, 20, 1).unwrap(),
        Hilbertization::Refused(_)
    ));
}

#[test]
fn counterexample_needs_a_non_euclidean_exponent() {
    let cfg = GenConfig {
        fiber_p_pool: vec![2.0],
        ..GenConfig::default()
    };
    let err =
        gen::gen_counterexample(&FdAlgebra::commutative(2), &cfg, &mut gen::rng(0)).unwrap_err();
    assert!(matches!(err, Error::ConfigInvalid(_)));
}

#[test]
fn glued_instances_decompose_back() {
    let cfg = GenConfig::with_seed(17);
    for i in 0..10 {
        let mut rng = gen::instance_rng(&cfg, i);
        let g = gen::gen_glued(&cfg, &mut rng).unwrap();
        assert!(g.algebra.glue_algebra().num_blocks() > 0);
        let e: ModuleRef = Arc::new(g.module.clone());
        let cd = canonical_decompose(&e, &g.algebra).unwrap();
        let cert = cd.certify(&mut rng, 20).unwrap();
        assert!(cert.holds(1e-8), "{cert:?}");
        for r in axiom_suite(e.as_ref(), 20, i).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
        let s = structure_decompose(&e, 20, i).unwrap();
        assert!(s.holds(), "{:?}", s.certificate);
        assert!(s.e0_zero);
    }
}

fn same_norms(a: &ModuleRef, b: &ModuleRef, seed: u64) {
    assert_eq!(a.dim(), b.dim());
    let mut rng = gen::rng(seed);
    for _ in 0..10 {
        let x = a.sample_vector(&mut rng);
        assert!(b.contains(&x));
        let (na, nb) = (a.norm(&x).unwrap(), b.norm(&x).unwrap());
        assert!((na - nb).abs() <= 1e-12 * (1.0 + na));
    }
}

#[test]
fn descriptions_rebuild_the_module() {
    let cfg = GenConfig::with_seed(23);
    for i in 0..8 {
        let mut rng = gen::instance_rng(&cfg, i);
        let a = gen::gen_algebra(&cfg, &mut rng).unwrap();
        for family in ModuleFamily::ALL {
            if family == ModuleFamily::Bundle && !a.is_commutative() {
                continue;
            }
            let e = gen::gen_module_of(family, &a, &cfg, &mut rng).unwrap();
            let d = e.describe();
            assert_eq!(d.base(), &a);
            let back = d.build().unwrap();
            assert_eq!(back.describe(), d);
            assert_eq!(back.family(), family.id());
            same_norms(&e, &back, i);
        }
        let g = gen::gen_glued(&cfg, &mut rng).unwrap();
        let e: ModuleRef = Arc::new(g.module);
        same_norms(&e, &e.describe().build().unwrap(), i);
    }
}
