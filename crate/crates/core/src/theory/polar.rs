//! Polarization, the parallelogram law and recovery of inner products.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::report::{Claim, Status, VerdictReport, Witness, Worst};
use crate::algebra::{maximal_commutative_ideal, AlgElement, FdAlgebra};
use crate::error::{Error, Result};
use crate::gen::{self, sample};
use crate::linalg::{vec_dot, vec_norm, CMatrix};
use crate::modules::{FinslerModule, FreeHilbertModule, ModVec, ModuleRef};
use crate::tolerance;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// `1/4 sum_k i^k rho(x + i^k y)^2`.
pub fn polarize(e: &dyn FinslerModule, x: &ModVec, y: &ModVec) -> Result<AlgElement> {
    let mut acc = AlgElement::zero(e.base());
    for ik in I_POWERS {
        let mut v = x.clone();
        v.axpy(ik, y);
        acc = &acc + &e.rho_sq(&v)?.scale(ik);
    }
    Ok(acc.scale_real(0.25))
}

/// `rho(x + y)^2 + rho(x - y)^2 - 2 rho(x)^2 - 2 rho(y)^2`.
pub fn parallelogram_element(e: &dyn FinslerModule, x: &ModVec, y: &ModVec) -> Result<AlgElement> {
    let sum = &e.rho_sq(&(x + y))? + &e.rho_sq(&(x - y))?;
    let twice = (&e.rho_sq(x)? + &e.rho_sq(y)?).scale_real(2.0);
    Ok(&sum - &twice)
}

/// Norm of [`parallelogram_element`].
pub fn parallelogram_defect(e: &dyn FinslerModule, x: &ModVec, y: &ModVec) -> Result<f64> {
    Ok(parallelogram_element(e, x, y)?.norm())
}

/// Defect divided by `||x||^2 + ||y||^2`; zero for `x = y = 0`.
pub fn relative_defect(e: &dyn FinslerModule, x: &ModVec, y: &ModVec) -> Result<f64> {
    let scale = sq(e.norm(x)?) + sq(e.norm(y)?);
    let d = parallelogram_defect(e, x, y)?;
    Ok(if scale > 0.0 { d / scale } else { d })
}

fn sq(t: f64) -> f64 {
    t * t
}

/// `a = xi xi*`, `b = xi zeta*` for a unit `zeta` orthogonal to `xi`: then
/// `a = a*`, `a xi = xi`, `ba = 0` and `bb* = a^2`.
pub fn rank_one_pair(xi: &[Complex64]) -> Result<(CMatrix, CMatrix)> {
    let n = xi.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let norm = vec_norm(xi);
    if (norm - 1.0).abs() > tolerance::EXACT {
        return Err(Error::NotUnitVector(norm));
    }
    // Gram-Schmidt on the basis vector least aligned with xi
    let j = (0..n)
        .min_by(|&p, &q| xi[p].norm().total_cmp(&xi[q].norm()))
        .expect("n >= 2");
    // zeta = e_j - conj(xi_j) xi
    let mut zeta: Vec<Complex64> = xi.iter().map(|x| -xi[j].conj() * x).collect();
    zeta[j] += Complex64::new(1.0, 0.0);
    // second pass for orthogonality at roundoff level
    let overlap = vec_dot(&zeta, xi);
    for (z, x) in zeta.iter_mut().zip(xi) {
        *z -= overlap * x;
    }
    let zn = vec_norm(&zeta);
    for z in &mut zeta {
        *z /= zn;
    }
    Ok((CMatrix::outer(xi, xi), CMatrix::outer(xi, &zeta)))
}

/// `[||a - a*||, ||a xi - xi||, ||ba||, ||bb* - a^2||]` (Frobenius / 2-norm).
pub fn rank_one_pair_residuals(a: &CMatrix, b: &CMatrix, xi: &[Complex64]) -> [f64; 4] {
    let axi = a.apply(xi);
    let diff: Vec<Complex64> = axi.iter().zip(xi).map(|(p, q)| p - q).collect();
    [
        a.hermitian_defect(),
        vec_norm(&diff),
        (b * a).frobenius_norm(),
        (b * &b.adjoint()).distance(&(a * a)),
    ]
}

/// Largest of [`rank_one_pair_residuals`] for the witness built from `xi`.
pub fn rank_one_residual(xi: &[Complex64]) -> Result<f64> {
    let (a, b) = rank_one_pair(xi)?;
    Ok(rank_one_pair_residuals(&a, &b, xi)
        .into_iter()
        .fold(0.0, f64::max))
}

/// Polarization against the construction inner product `sum_i x_i y_i*`.
pub fn check_polarization(
    e: &FreeHilbertModule,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let x = e.sample_vector(&mut rng);
        let y = e.sample_vector(&mut rng);
        let scale = 1.0 + e.norm(&x)? * e.norm(&y)?;
        let r = polarize(e, &x, &y)?.distance(&e.inner(&x, &y)?) / scale;
        worst.offer(r, &[&x, &y], &[]);
    }
    Ok(worst.report(
        Claim::Polarization,
        tolerance::EXACT,
        samples,
        seed,
        String::new(),
    ))
}

/// The parallelogram defect lives in the maximal commutative ideal.
pub fn parallelogram_mod_ideal_residual(
    e: &dyn FinslerModule,
    x: &ModVec,
    y: &ModVec,
) -> Result<f64> {
    let ideal = maximal_commutative_ideal(e.base());
    let c = parallelogram_element(e, x, y)?;
    let scale = 1.0 + sq(e.norm(x)?) + sq(e.norm(y)?);
    Ok(c.norm_on(&ideal.complement()) / scale)
}

pub fn check_parallelogram_mod_ideal(
    e: &dyn FinslerModule,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let x = e.sample_vector(&mut rng);
        let y = e.sample_vector(&mut rng);
        worst.offer(parallelogram_mod_ideal_residual(e, &x, &y)?, &[&x, &y], &[]);
    }
    let note = if e.base().is_commutative() {
        String::from("vacuous: commutative base")
    } else {
        String::new()
    };
    Ok(worst.report(
        Claim::ParallelogramModIdeal,
        tolerance::CERTIFICATE,
        samples,
        seed,
        note,
    ))
}

/// Sampled residuals of the polarized inner product's axioms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HilbertCertificate {
    pub max_defect: f64,
    pub additivity: f64,
    /// Includes the `i`-step and rational real multiples.
    pub homogeneity: f64,
    pub symmetry: f64,
    /// `<x, x> = rho(x)^2`.
    pub diagonal: f64,
    /// `<ax, y> = a <x, y>` together with
    /// `a rho(x + i^k y)^2 a* = rho(ax + i^k ay)^2`.
    pub module_linearity: f64,
    pub samples: usize,
}

impl HilbertCertificate {
    pub fn max_residual(&self) -> f64 {
        self.max_defect
            .max(self.additivity)
            .max(self.homogeneity)
            .max(self.symmetry)
            .max(self.diagonal)
            .max(self.module_linearity)
    }

    pub fn holds(&self) -> bool {
        self.max_residual() <= tolerance::CERTIFICATE
    }
}

/// A module with the inner product recovered by polarization.
#[derive(Debug, Clone)]
pub struct HilbertStructure {
    pub module: ModuleRef,
    pub certificate: HilbertCertificate,
}

impl HilbertStructure {
    pub fn inner(&self, x: &ModVec, y: &ModVec) -> Result<AlgElement> {
        polarize(self.module.as_ref(), x, y)
    }
}

/// A pair on which the parallelogram law fails.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectWitness {
    pub x: ModVec,
    pub y: ModVec,
    /// `||parallelogram_element(x, y)||`.
    pub defect: f64,
    pub relative_defect: f64,
}

#[derive(Debug, Clone)]
pub enum Hilbertization {
    Hilbert(HilbertStructure),
    Refused(DefectWitness),
    /// Worst relative defect between the accept and reject thresholds.
    Inconclusive(DefectWitness),
}

impl Hilbertization {
    pub fn is_hilbert(&self) -> bool {
        matches!(self, Hilbertization::Hilbert(_))
    }

    pub fn structure(&self) -> Option<&HilbertStructure> {
        match self {
            Hilbertization::Hilbert(h) => Some(h),
            _ => None,
        }
    }
}

/// Probe pairs: basis pairs first (capped), then Gaussian samples.
fn probe_pairs(
    e: &dyn FinslerModule,
    rng: &mut gen::Prng,
    samples: usize,
) -> Vec<(ModVec, ModVec)> {
    let basis = e.basis();
    let mut pairs = Vec::new();
    'outer: for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if pairs.len() >= samples {
                break 'outer;
            }
            pairs.push((basis[i].clone(), basis[j].clone()));
        }
    }
    for _ in 0..samples {
        pairs.push((e.sample_vector(rng), e.sample_vector(rng)));
    }
    pairs
}

/// Recover a `B`-valued inner product from `rho` by polarization, or refuse
/// with a pair violating the parallelogram law.
pub fn hilbertize(e: &ModuleRef, samples: usize, seed: u64) -> Result<Hilbertization> {
    hilbertize_with(e, &[], samples, seed)
}

/// [`hilbertize`] with extra caller-supplied probe pairs checked first.
pub fn hilbertize_with(
    e: &ModuleRef,
    probes: &[(ModVec, ModVec)],
    samples: usize,
    seed: u64,
) -> Result<Hilbertization> {
    let m = e.as_ref();
    let mut rng = gen::rng(seed);
    let mut pairs: Vec<(ModVec, ModVec)> = probes.to_vec();
    pairs.extend(probe_pairs(m, &mut rng, samples));

    let mut worst: Option<DefectWitness> = None;
    for (x, y) in &pairs {
        let defect = parallelogram_defect(m, x, y)?;
        let scale = sq(m.norm(x)?) + sq(m.norm(y)?);
        let relative = if scale > 0.0 { defect / scale } else { defect };
        if worst.as_ref().is_none_or(|w| relative > w.relative_defect) {
            worst = Some(DefectWitness {
                x: x.clone(),
                y: y.clone(),
                defect,
                relative_defect: relative,
            });
        }
    }
    if let Some(w) = worst.as_ref() {
        if w.relative_defect >= tolerance::HILBERT_REJECT {
            return Ok(Hilbertization::Refused(w.clone()));
        }
        if w.relative_defect > tolerance::HILBERT_ACCEPT {
            return Ok(Hilbertization::Inconclusive(w.clone()));
        }
    }
    let mut cert = certify_inner_product(m, &mut rng, samples)?;
    cert.max_defect = worst.map(|w| w.relative_defect).unwrap_or(0.0);
    Ok(Hilbertization::Hilbert(HilbertStructure {
        module: e.clone(),
        certificate: cert,
    }))
}

fn certify_inner_product(
    e: &dyn FinslerModule,
    rng: &mut gen::Prng,
    samples: usize,
) -> Result<HilbertCertificate> {
    let rationals = [
        Complex64::new(3.0 / 7.0, 0.0),
        Complex64::new(-5.0 / 2.0, 0.0),
        Complex64::new(2.0 / 3.0, -1.0 / 4.0),
    ];
    let mut c = HilbertCertificate {
        samples,
        ..HilbertCertificate::default()
    };
    for s in 0..samples {
        let x = e.sample_vector(rng);
        let y = e.sample_vector(rng);
        let z = e.sample_vector(rng);
        let a = sample::gaussian_element(rng, e.base());
        let (nx, ny, nz) = (e.norm(&x)?, e.norm(&y)?, e.norm(&z)?);
        let xy = polarize(e, &x, &y)?;
        let scale = 1.0 + (nx + nz) * ny;

        let sum = polarize(e, &(&x + &z), &y)?;
        let parts = &xy + &polarize(e, &z, &y)?;
        c.additivity = c.additivity.max(sum.distance(&parts) / scale);

        let lambda = if s % 4 == 0 {
            I_POWERS[1]
        } else {
            rationals[s % 3]
        };
        let scaled = polarize(e, &x.scale(lambda), &y)?;
        c.homogeneity = c
            .homogeneity
            .max(scaled.distance(&xy.scale(lambda)) / (1.0 + lambda.norm() * nx * ny));

        let yx = polarize(e, &y, &x)?;
        c.symmetry = c.symmetry.max(xy.adjoint().distance(&yx) / scale);

        let xx = polarize(e, &x, &x)?;
        c.diagonal = c
            .diagonal
            .max(xx.distance(&e.rho_sq(&x)?) / (1.0 + nx * nx));

        let ax = e.act(&a, &x)?;
        let ay = e.act(&a, &y)?;
        let na = a.norm();
        let lin = polarize(e, &ax, &y)?.distance(&(&a * &xy)) / (1.0 + na * nx * ny);
        let mut conj: f64 = 0.0;
        for ik in I_POWERS {
            let mut v = x.clone();
            v.axpy(ik, &y);
            let mut av = ax.clone();
            av.axpy(ik, &ay);
            let lhs = &(&a * &e.rho_sq(&v)?) * &a.adjoint();
            let nv = na * e.norm(&v)?;
            conj = conj.max(lhs.distance(&e.rho_sq(&av)?) / (1.0 + nv * nv));
        }
        c.module_linearity = c.module_linearity.max(lin).max(conj);
    }
    Ok(c)
}

/// [`hilbertize`] as a report: passes iff an inner product was recovered.
pub fn check_hilbertize(e: &ModuleRef, samples: usize, seed: u64) -> Result<VerdictReport> {
    let outcome = hilbertize(e, samples, seed)?;
    let (status, residual, witness, note) = match outcome {
        Hilbertization::Hilbert(h) => {
            let r = h.certificate.max_residual();
            let status = if h.certificate.holds() {
                Status::Pass
            } else {
                Status::Fail
            };
            (status, r, None, String::from("inner product recovered"))
        }
        Hilbertization::Refused(w) => (
            Status::Fail,
            w.relative_defect,
            Some(Witness {
                vectors: alloc::vec![w.x, w.y],
                elements: Vec::new(),
                residual: w.defect,
            }),
            alloc::format!("refused: parallelogram defect {:.6e}", w.defect),
        ),
        Hilbertization::Inconclusive(w) => (
            Status::Fail,
            w.relative_defect,
            Some(Witness {
                vectors: alloc::vec![w.x, w.y],
                elements: Vec::new(),
                residual: w.defect,
            }),
            String::from("inconclusive: raise sample count"),
        ),
    };
    Ok(VerdictReport {
        claim: Claim::Hilbertize,
        status,
        max_residual: residual,
        tolerance: tolerance::HILBERT_ACCEPT,
        witness,
        samples,
        seed,
        note,
    })
}

/// Rank-one witnesses for random unit vectors in every block of size at
/// least 2; the residual is the largest of the four identities.
pub fn check_rank_one_witness(
    algebra: &FdAlgebra,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut worst = Worst::new();
    let dims: Vec<usize> = algebra
        .block_dims()
        .iter()
        .copied()
        .filter(|&n| n >= 2)
        .collect();
    for _ in 0..samples {
        for &n in &dims {
            let xi = sample::unit_vector(&mut rng, n);
            let r = rank_one_residual(&xi)?;
            worst.offer(r, &[&ModVec::new(xi)], &[]);
        }
    }
    let note = if dims.is_empty() {
        String::from("vacuous: no block of size 2 or more")
    } else {
        String::new()
    };
    Ok(worst.report(Claim::RankOneWitness, 1e-12, samples, seed, note))
}
