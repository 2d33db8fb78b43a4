//! Sampled checks of the Finsler axioms and their first consequences.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::report::{Claim, VerdictReport, Worst};
use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::gen::{self, sample};
use crate::modules::{FinslerModule, ModVec};
use crate::tolerance;

/// Largest `|X|` for which every projection of `C^X` is enumerated.
pub const EXHAUSTIVE_POINTS: usize = 10;

/// `(||ax|| - ||a|| ||x||)_+`, relative.
pub fn banach_residual(e: &dyn FinslerModule, a: &AlgElement, x: &ModVec) -> Result<f64> {
    let bound = a.norm() * e.norm(x)?;
    let lhs = e.norm(&e.act(a, x)?)?;
    Ok((lhs - bound).max(0.0) / (1.0 + bound))
}

/// `||rho(ax)^2 - a rho(x)^2 a*|| / (1 + ||a||^2 ||x||^2)`.
pub fn axiom2_residual(e: &dyn FinslerModule, a: &AlgElement, x: &ModVec) -> Result<f64> {
    let lhs = e.rho_sq(&e.act(a, x)?)?;
    let rhs = &(a * &e.rho_sq(x)?) * &a.adjoint();
    let n = a.norm() * e.norm(x)?;
    Ok(lhs.distance(&rhs) / (1.0 + n * n))
}

/// `||rho(ax) - |a| rho(x)||`, relative; `a` should be central.
pub fn central_residual(e: &dyn FinslerModule, a: &AlgElement, x: &ModVec) -> Result<f64> {
    let lhs = e.rho(&e.act(a, x)?)?;
    let rhs = &a.abs()? * &e.rho(x)?;
    Ok(lhs.distance(&rhs) / (1.0 + a.norm() * e.norm(x)?))
}

/// Largest entrywise excess of `rho(x + y)` over `rho(x) + rho(y)`.
pub fn triangle_residual(e: &dyn FinslerModule, x: &ModVec, y: &ModVec) -> Result<f64> {
    let s = e.rho(&(x + y))?;
    let rx = e.rho(x)?;
    let ry = e.rho(y)?;
    let mut worst: f64 = 0.0;
    for k in 0..s.blocks().len() {
        let excess = s.block(k)[(0, 0)].re - rx.block(k)[(0, 0)].re - ry.block(k)[(0, 0)].re;
        worst = worst.max(excess);
    }
    Ok(worst / (1.0 + rx.norm() + ry.norm()))
}

/// Excess of `||rho(x)^2 - rho(y)^2||` over `2 max(||x||, ||y||) ||x - y||`.
pub fn lipschitz_residual(e: &dyn FinslerModule, x: &ModVec, y: &ModVec) -> Result<f64> {
    let c = e.norm(x)?.max(e.norm(y)?);
    let lhs = (&e.rho_sq(x)? - &e.rho_sq(y)?).norm();
    let rhs = 2.0 * c * e.norm(&(x - y))?;
    Ok((lhs - rhs).max(0.0) / (1.0 + c * c))
}

/// Excess of `||fx + (1 - f)y||` over `max(||x||, ||y||)`.
pub fn a_convex_residual(
    e: &dyn FinslerModule,
    f: &AlgElement,
    x: &ModVec,
    y: &ModVec,
) -> Result<f64> {
    let g = &AlgElement::one(e.base()) - f;
    let v = &e.act(f, x)? + &e.act(&g, y)?;
    let bound = e.norm(x)?.max(e.norm(y)?);
    Ok((e.norm(&v)? - bound).max(0.0) / (1.0 + bound))
}

/// `| ||x|| - max(||px||, ||(1 - p)x||) |`, relative.
pub fn linf_residual(e: &dyn FinslerModule, p: &AlgElement, x: &ModVec) -> Result<f64> {
    let q = &AlgElement::one(e.base()) - p;
    let n = e.norm(x)?;
    let parts = e.norm(&e.act(p, x)?)?.max(e.norm(&e.act(&q, x)?)?);
    Ok((n - parts).abs() / (1.0 + n))
}

fn require_commutative(e: &dyn FinslerModule) -> Result<()> {
    if e.base().is_commutative() {
        Ok(())
    } else {
        Err(Error::NotCommutativeBase)
    }
}

/// Diagonal 0/1 element of `C^X` from the bits of `mask`.
fn indicator(points: usize, mask: u64) -> AlgElement {
    let values: Vec<Complex64> = (0..points)
        .map(|k| Complex64::new(if mask >> k & 1 == 1 { 1.0 } else { 0.0 }, 0.0))
        .collect();
    AlgElement::diagonal(&values)
}

/// `||ax|| <= ||a|| ||x||`.
pub fn check_banach_module(
    e: &dyn FinslerModule,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let a = sample::gaussian_element(&mut rng, e.base());
        let x = e.sample_vector(&mut rng);
        worst.offer(banach_residual(e, &a, &x)?, &[&x], &[&a]);
    }
    Ok(worst.report(
        Claim::BanachModule,
        tolerance::AXIOM,
        samples,
        seed,
        String::new(),
    ))
}

/// `rho(ax)^2 = a rho(x)^2 a*`.
pub fn check_finsler_axiom2(
    e: &dyn FinslerModule,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let a = sample::gaussian_element(&mut rng, e.base());
        let x = e.sample_vector(&mut rng);
        worst.offer(axiom2_residual(e, &a, &x)?, &[&x], &[&a]);
    }
    Ok(worst.report(
        Claim::FinslerAxiom2,
        tolerance::AXIOM,
        samples,
        seed,
        String::new(),
    ))
}

/// `rho(ax) = |a| rho(x)` for central `a`.
pub fn check_central_homogeneity(
    e: &dyn FinslerModule,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let a = sample::central_element(&mut rng, e.base());
        let x = e.sample_vector(&mut rng);
        worst.offer(central_residual(e, &a, &x)?, &[&x], &[&a]);
    }
    Ok(worst.report(
        Claim::CentralHomogeneity,
        tolerance::AXIOM,
        samples,
        seed,
        String::new(),
    ))
}

/// `rho(x + y) <= rho(x) + rho(y)` over a commutative base.
pub fn check_commutative_triangle(
    e: &dyn FinslerModule,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    require_commutative(e)?;
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let x = e.sample_vector(&mut rng);
        let y = e.sample_vector(&mut rng);
        worst.offer(triangle_residual(e, &x, &y)?, &[&x, &y], &[]);
    }
    Ok(worst.report(
        Claim::CommutativeTriangle,
        tolerance::EXACT,
        samples,
        seed,
        String::new(),
    ))
}

/// `||rho(x)^2 - rho(y)^2|| <= 2 max(||x||, ||y||) ||x - y||`.
pub fn lipschitz_bound_check(
    e: &dyn FinslerModule,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for i in 0..samples {
        let x = e.sample_vector(&mut rng);
        // alternate far pairs with nearby ones
        let y = if i % 2 == 0 {
            e.sample_vector(&mut rng)
        } else {
            let mut y = x.clone();
            y.axpy(Complex64::new(1e-3, 0.0), &e.sample_vector(&mut rng));
            y
        };
        worst.offer(lipschitz_residual(e, &x, &y)?, &[&x, &y], &[]);
    }
    Ok(worst.report(
        Claim::LipschitzBound,
        tolerance::AXIOM,
        samples,
        seed,
        String::new(),
    ))
}

fn unit_sample(e: &dyn FinslerModule, rng: &mut gen::Prng) -> Result<ModVec> {
    let x = e.sample_vector(rng);
    let n = e.norm(&x)?;
    Ok(if n > 0.0 {
        x.scale(Complex64::new(1.0 / n, 0.0))
    } else {
        x
    })
}

/// `||fx + gy|| <= max(||x||, ||y||)` for `0 <= f`, `g = 1 - f`, over every
/// indicator `f` (when `|X| <= 10`) and sampled fractional ones.
pub fn check_a_convex(e: &dyn FinslerModule, samples: usize, seed: u64) -> Result<VerdictReport> {
    require_commutative(e)?;
    let points = e.base().num_blocks();
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let x = unit_sample(e, &mut rng)?;
        let y = unit_sample(e, &mut rng)?;
        if points <= EXHAUSTIVE_POINTS {
            for mask in 0..1u64 << points {
                let f = indicator(points, mask);
                worst.offer(a_convex_residual(e, &f, &x, &y)?, &[&x, &y], &[&f]);
            }
        }
        let values: Vec<Complex64> = (0..points)
            .map(|_| Complex64::new(sample::uniform(&mut rng), 0.0))
            .collect();
        let f = AlgElement::diagonal(&values);
        worst.offer(a_convex_residual(e, &f, &x, &y)?, &[&x, &y], &[&f]);
    }
    Ok(worst.report(
        Claim::AConvex,
        tolerance::EXACT,
        samples,
        seed,
        String::new(),
    ))
}

/// `||x|| = max(||px||, ||(1 - p)x||)` for every projection `p` of `C^X`.
pub fn check_linf_norm_property(
    e: &dyn FinslerModule,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    require_commutative(e)?;
    let points = e.base().num_blocks();
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let x = e.sample_vector(&mut rng);
        if points <= EXHAUSTIVE_POINTS {
            for mask in 0..1u64 << points {
                let p = indicator(points, mask);
                worst.offer(linf_residual(e, &p, &x)?, &[&x], &[&p]);
            }
        } else {
            let mask = rng_mask(&mut rng, points);
            let p = indicator(points, mask);
            worst.offer(linf_residual(e, &p, &x)?, &[&x], &[&p]);
        }
    }
    Ok(worst.report(
        Claim::LinfNorm,
        tolerance::EXACT,
        samples,
        seed,
        String::new(),
    ))
}

fn rng_mask(rng: &mut gen::Prng, points: usize) -> u64 {
    let mut mask = 0;
    for k in 0..points.min(64) {
        if sample::uniform(rng) < 0.5 {
            mask |= 1 << k;
        }
    }
    mask
}

/// Banach-module bound, axiom (2), central homogeneity, and the triangle
/// inequality when the base is commutative.
pub fn axiom_suite(e: &dyn FinslerModule, samples: usize, seed: u64) -> Result<Vec<VerdictReport>> {
    let mut reports = alloc::vec![
        check_banach_module(e, samples, seed)?,
        check_finsler_axiom2(e, samples, seed)?,
        check_central_homogeneity(e, samples, seed)?,
    ];
    if e.base().is_commutative() {
        reports.push(check_commutative_triangle(e, samples, seed)?);
    }
    Ok(reports)
}
