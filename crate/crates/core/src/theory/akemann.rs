//! `||b - c|| = sup { | ||aba|| - ||aca|| | : a >= 0, ||a|| <= 1 }` for
//! positive `b`, `c`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::report::{Claim, Status, VerdictReport, Witness};
use crate::algebra::{AlgElement, FdAlgebra};
use crate::error::{Error, Result};
use crate::gen::{self, sample};
use crate::linalg::{herm_eig, CMatrix};
use crate::modules::{FinslerModule, ModVec};
use crate::tolerance;

/// A feasible `a` and the gap it achieves against `target = ||b - c||`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapWitness {
    pub a: AlgElement,
    pub achieved_gap: f64,
    pub target: f64,
}

impl GapWitness {
    /// `a >= 0`, `||a|| <= 1` and `gap <= target`, with the usual slack.
    pub fn is_feasible(&self) -> bool {
        self.a.is_positive()
            && self.a.norm() <= 1.0 + tolerance::EXACT
            && self.achieved_gap <= self.target + tolerance::AXIOM
    }
}

fn require_positive(x: &AlgElement) -> Result<()> {
    match x.positivity_witness() {
        None => Ok(()),
        Some((block, eigenvalue)) => Err(Error::NotPositive { block, eigenvalue }),
    }
}

/// `| ||aba|| - ||aca|| |`.
pub fn gap(a: &AlgElement, b: &AlgElement, c: &AlgElement) -> f64 {
    let aba = &(a * b) * a;
    let aca = &(a * c) * a;
    (aba.norm() - aca.norm()).abs()
}

/// Exact maximizer: `a = xi xi*` for a unit eigenvector `xi` of `b - c` at
/// an eigenvalue of largest modulus, in the block where it occurs.
///
/// Then `aba = <b xi, xi> a` and `aca = <c xi, xi> a`, so the gap is
/// `|<(b - c) xi, xi>| = ||b - c||`.
pub fn akemann_gap_witness(b: &AlgElement, c: &AlgElement) -> Result<GapWitness> {
    require_positive(b)?;
    require_positive(c)?;
    let d = b.checked_sub(c)?;
    let algebra = b.algebra();
    let mut best: Option<(usize, f64, Vec<Complex64>)> = None;
    for (k, block) in d.blocks().iter().enumerate() {
        let eig = herm_eig(&block.hermitian_part())?;
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            if best.as_ref().is_none_or(|(_, m, _)| l.abs() > *m) {
                best = Some((k, l.abs(), eig.eigenvector(i)));
            }
        }
    }
    let mut a = AlgElement::zero(&algebra);
    if let Some((k, _, xi)) = best {
        *a.block_mut(k) = CMatrix::outer(&xi, &xi);
    }
    Ok(GapWitness {
        achieved_gap: gap(&a, b, c),
        target: d.norm(),
        a,
    })
}

/// Clamp the spectrum of each (Hermitian part of a) block to `[0, 1]`.
fn project_to_unit_ball(a: &AlgElement) -> Result<AlgElement> {
    let blocks = a
        .blocks()
        .iter()
        .map(|m| Ok(herm_eig(&m.hermitian_part())?.map(|l| l.clamp(0.0, 1.0))))
        .collect::<Result<Vec<_>>>()?;
    AlgElement::from_blocks(&a.algebra(), blocks)
}

fn random_contraction(rng: &mut gen::Prng, algebra: &FdAlgebra) -> Result<AlgElement> {
    let p = sample::positive_element(rng, algebra);
    let n = p.norm();
    let p = if n > 0.0 { p.scale_real(1.0 / n) } else { p };
    project_to_unit_ball(&p)
}

/// Projected random ascent over the positive unit ball.
///
/// `iterations` is the total budget, split over random restarts. Every
/// iterate is projected back to `0 <= a <= 1`, so the returned witness is
/// feasible by construction.
pub fn akemann_gap_search(
    b: &AlgElement,
    c: &AlgElement,
    iterations: usize,
    seed: u64,
) -> Result<GapWitness> {
    require_positive(b)?;
    require_positive(c)?;
    let target = b.checked_sub(c)?.norm();
    let algebra = b.algebra();
    let mut rng = gen::rng(seed);

    let restarts = (iterations / 500).clamp(1, 20);
    let per_restart = iterations / restarts;
    let mut best_a = AlgElement::zero(&algebra);
    let mut best_gap = 0.0;
    for _ in 0..restarts {
        let mut a = random_contraction(&mut rng, &algebra)?;
        let mut current = gap(&a, b, c);
        let mut step = 0.5;
        for _ in 0..per_restart {
            let direction = sample::gaussian_element(&mut rng, &algebra);
            let trial = project_to_unit_ball(&(&a + &direction.scale_real(step)))?;
            let g = gap(&trial, b, c);
            if g > current {
                a = trial;
                current = g;
                step = (step * 1.5).min(1.0);
            } else {
                step = (step * 0.93).max(1e-9);
            }
        }
        if current > best_gap {
            best_gap = current;
            best_a = a;
        }
    }
    Ok(GapWitness {
        achieved_gap: best_gap,
        a: best_a,
        target,
    })
}

/// Random positive pairs, each checked against the exact witness.
pub fn check_akemann_identity(
    algebra: &FdAlgebra,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut worst = 0.0;
    let mut witness = None;
    for _ in 0..samples {
        let b = sample::positive_element(&mut rng, algebra);
        let c = sample::positive_element(&mut rng, algebra);
        let w = akemann_gap_witness(&b, &c)?;
        let mut residual = (w.achieved_gap - w.target).abs() / (1.0 + w.target);
        if !w.is_feasible() {
            residual = residual.max(f64::INFINITY);
        }
        if residual > worst || witness.is_none() {
            worst = residual;
            witness = Some(Witness {
                vectors: Vec::new(),
                elements: alloc::vec![b, c, w.a],
                residual,
            });
        }
    }
    let pass = worst <= tolerance::CERTIFICATE;
    Ok(VerdictReport {
        claim: Claim::AkemannIdentity,
        status: if pass { Status::Pass } else { Status::Fail },
        max_residual: worst,
        tolerance: tolerance::CERTIFICATE,
        witness: if pass { None } else { witness },
        samples,
        seed,
        note: String::new(),
    })
}

/// Residual of an Akemann witness `(b, c, a)`.
pub fn akemann_residual(b: &AlgElement, c: &AlgElement, a: &AlgElement) -> Result<f64> {
    let target = b.checked_sub(c)?.norm();
    let w = GapWitness {
        a: a.clone(),
        achieved_gap: gap(a, b, c),
        target,
    };
    if !w.is_feasible() {
        return Ok(f64::INFINITY);
    }
    Ok((w.achieved_gap - target).abs() / (1.0 + target))
}

/// Tell `rho` from an alternative `rho'` through the norms they induce.
///
/// For a sampled `x` with `rho(x)^2 != rho'(x)^2`, the exact Akemann witness
/// `a` for the pair gives `| ||ax||_rho^2 - ||ax||_rho'^2 |` equal to
/// `||rho(x)^2 - rho'(x)^2||`; the check demands at least half of it.
pub fn distinguishing_witness(
    e: &dyn FinslerModule,
    rho_alt: &dyn Fn(&ModVec) -> Result<AlgElement>,
    samples: usize,
    seed: u64,
) -> Result<VerdictReport> {
    let mut rng = gen::rng(seed);
    let mut found: Option<(ModVec, AlgElement, f64, f64)> = None;
    let mut worst_shortfall: f64 = 0.0;
    for _ in 0..samples {
        let x = e.sample_vector(&mut rng);
        let r = e.rho_sq(&x)?;
        let r_alt = {
            let s = rho_alt(&x)?;
            &s * &s
        };
        let diff = (&r - &r_alt).norm();
        if diff <= tolerance::AXIOM * (1.0 + r.norm()) {
            continue;
        }
        let w = akemann_gap_witness(&r, &r_alt)?;
        let ax = e.act(&w.a, &x)?;
        let n = e.norm(&ax)?;
        let n_alt = rho_alt(&ax)?.norm();
        let separation = (n * n - n_alt * n_alt).abs();
        worst_shortfall = worst_shortfall.max((0.5 * diff - separation).max(0.0) / (1.0 + diff));
        if found.as_ref().is_none_or(|(_, _, d, _)| diff > *d) {
            found = Some((x, w.a, diff, separation));
        }
    }
    let pass = worst_shortfall <= tolerance::AXIOM;
    let (note, witness) = match found {
        None => (String::from("indistinguishable on samples"), None),
        Some((x, a, diff, separation)) => (
            format!(
                "distinguished: ||rho^2 - rho'^2|| = {diff:.6e}, norm gap on ax = {separation:.6e}"
            ),
            Some(Witness {
                vectors: alloc::vec![x],
                elements: alloc::vec![a],
                residual: worst_shortfall,
            }),
        ),
    };
    Ok(VerdictReport {
        claim: Claim::RhoUniqueness,
        status: if pass { Status::Pass } else { Status::Fail },
        max_residual: worst_shortfall,
        tolerance: tolerance::AXIOM,
        witness,
        samples,
        seed,
        note,
    })
}
