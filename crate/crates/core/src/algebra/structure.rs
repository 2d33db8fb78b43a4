use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::{quotient_hom, AlgElement, FdAlgebra, Ideal, PullbackAlgebra, Slot, StarHom};
use crate::error::{Error, Result};
use crate::gen::sample;

/// Intersection of the kernels of all irreducible representations of
/// dimension greater than one.
///
/// The irreducible representations of a block algebra are its block
/// projections, so this is the sum of the 1-dimensional blocks.
pub fn maximal_commutative_ideal(algebra: &FdAlgebra) -> Ideal {
    let mut blocks: Vec<usize> = (0..algebra.num_blocks()).collect();
    for (k, &n) in algebra.block_dims().iter().enumerate() {
        if n > 1 {
            // ker of the projection onto block k
            blocks.retain(|&j| j != k);
        }
    }
    Ideal::new(algebra, &blocks).expect("block subset is valid")
}

/// Evidence that an ideal is the maximal commutative one.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutativeIdealCertificate {
    pub commutative: bool,
    /// Largest sampled `||[i, a]||` for `i` in the ideal, `a` in the algebra.
    pub central_residual: f64,
    /// Every commutative block subset is contained in the ideal. Checked by
    /// enumeration for up to 16 blocks, by a per-block argument beyond.
    pub contains_all_commutative: bool,
}

impl CommutativeIdealCertificate {
    pub fn holds(&self) -> bool {
        self.commutative
            && self.central_residual <= crate::tolerance::EXACT
            && self.contains_all_commutative
    }
}

pub fn certify_maximal_commutative<R: Rng + ?Sized>(
    ideal: &Ideal,
    rng: &mut R,
    samples: usize,
) -> CommutativeIdealCertificate {
    let algebra = ideal.algebra();
    let mut central_residual: f64 = 0.0;
    let unit = ideal.unit();
    for _ in 0..samples {
        let i = &unit * &sample::gaussian_element(rng, algebra);
        let a = sample::gaussian_element(rng, algebra);
        let scale = 1.0 + i.norm() * a.norm();
        central_residual = central_residual.max(i.commutator(&a).norm() / scale);
    }
    let m = algebra.num_blocks();
    let contains_all_commutative = if m <= 16 {
        (0u32..1 << m).all(|mask| {
            let subset: Vec<usize> = (0..m).filter(|&k| mask & (1 << k) != 0).collect();
            let candidate = Ideal::new(algebra, &subset).expect("subset is valid");
            !candidate.is_commutative() || candidate.is_subset_of(ideal)
        })
    } else {
        // A block subset is commutative iff each of its singletons is.
        (0..m).all(|k| {
            let single = Ideal::new(algebra, &[k]).expect("single block");
            !single.is_commutative() || ideal.contains_block(k)
        })
    };
    CommutativeIdealCertificate {
        commutative: ideal.is_commutative(),
        central_residual,
        contains_all_commutative,
    }
}

/// Evaluation of the scalar in a 1-dimensional block: a character of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeFunctional {
    algebra: FdAlgebra,
    block: usize,
}

impl MultiplicativeFunctional {
    pub fn block(&self) -> usize {
        self.block
    }

    pub fn eval(&self, a: &AlgElement) -> Result<Complex64> {
        if !a.belongs_to(&self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(a.block(self.block)[(0, 0)])
    }

    /// `ker(eps)`: every block except this one.
    pub fn kernel(&self) -> Ideal {
        let blocks: Vec<usize> = (0..self.algebra.num_blocks())
            .filter(|&k| k != self.block)
            .collect();
        Ideal::new(&self.algebra, &blocks).expect("block subset is valid")
    }
}

pub fn multiplicative_functionals(algebra: &FdAlgebra) -> Vec<MultiplicativeFunctional> {
    algebra
        .one_dim_blocks()
        .into_iter()
        .map(|block| MultiplicativeFunctional {
            algebra: algebra.clone(),
            block,
        })
        .collect()
}

/// `A = C0(X) (+)_{C0(Y)} B` with `I` the maximal commutative ideal, `J` the
/// common kernel of the characters of `A`, `X = Prim(A/J)`, `B = A/I` and
/// `Y = Prim(A/(I+J))`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealDecomposition {
    pub commutative_ideal: Ideal,
    pub character_kernel: Ideal,
    /// Block indices of `A` making up `X`.
    pub points: Vec<usize>,
    pub noncommutative_part: FdAlgebra,
    /// Block indices of `A` making up `Y`; always empty in finite dimension.
    pub glue_points: Vec<usize>,
    /// `A/J (+)_{A/(I+J)} A/I`, laid out in the block order of `A`.
    pub pullback: PullbackAlgebra,
}

/// Decompose `A` along its maximal commutative ideal.
pub fn decompose(algebra: &FdAlgebra) -> IdealDecomposition {
    let i = maximal_commutative_ideal(algebra);
    let chars = multiplicative_functionals(algebra);
    let mut j = Ideal::whole(algebra);
    for eps in &chars {
        j = j.intersection(&eps.kernel());
    }
    let sum = i.sum(&j);
    let glue_points = sum.complement();

    let to_commutative = quotient_hom(&j);
    let to_noncommutative = quotient_hom(&i);
    let glue_of = |from: &Ideal| -> StarHom {
        let free = from.complement();
        let sources: Vec<usize> = glue_points
            .iter()
            .map(|y| {
                free.iter()
                    .position(|k| k == y)
                    .expect("Y lies outside both ideals")
            })
            .collect();
        StarHom::routing(&from.quotient_algebra(), &sources).expect("Y routing is valid")
    };
    let phi = glue_of(&j);
    let psi = glue_of(&i);
    let comp_j = j.complement();
    let comp_i = i.complement();
    let layout = (0..algebra.num_blocks())
        .map(|k| {
            if let Some(y) = glue_points.iter().position(|&g| g == k) {
                Slot::Glue(y)
            } else if let Some(p) = comp_j.iter().position(|&g| g == k) {
                Slot::Left(p)
            } else {
                Slot::Right(
                    comp_i
                        .iter()
                        .position(|&g| g == k)
                        .expect("I and J cover A"),
                )
            }
        })
        .collect();
    let pullback =
        PullbackAlgebra::with_layout(phi, psi, layout).expect("decomposition layout is valid");
    debug_assert_eq!(to_commutative.target(), pullback.left());
    debug_assert_eq!(to_noncommutative.target(), pullback.right());

    IdealDecomposition {
        points: comp_j,
        noncommutative_part: i.quotient_algebra(),
        commutative_ideal: i,
        character_kernel: j,
        glue_points,
        pullback,
    }
}

/// Sampled evidence for the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCertificate {
    pub disjoint: bool,
    pub quotient_commutative: bool,
    /// `| ||a|| - ||iso(a)|| |`, relative.
    pub isometry_residual: f64,
    /// Multiplicativity and *-preservation of `a -> (a + J, a + I)`.
    pub hom_residual: f64,
    /// Failure to recover `a` from `(a + J, a + I)` through the pullback.
    pub bijection_residual: f64,
}

impl DecompositionCertificate {
    pub fn holds(&self) -> bool {
        self.disjoint
            && self.quotient_commutative
            && self.isometry_residual <= crate::tolerance::EXACT
            && self.hom_residual <= crate::tolerance::EXACT
            && self.bijection_residual <= crate::tolerance::EXACT
    }
}

impl IdealDecomposition {
    pub fn algebra(&self) -> &FdAlgebra {
        self.commutative_ideal.algebra()
    }

    /// `a -> (a + J, a + I)`.
    pub fn split(&self, a: &AlgElement) -> Result<(AlgElement, AlgElement)> {
        Ok((
            quotient_hom(&self.character_kernel).apply(a)?,
            quotient_hom(&self.commutative_ideal).apply(a)?,
        ))
    }

    pub fn certify<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        samples: usize,
    ) -> DecompositionCertificate {
        let algebra = self.algebra().clone();
        let mut isometry: f64 = 0.0;
        let mut hom: f64 = 0.0;
        let mut bijection: f64 = 0.0;
        for _ in 0..samples {
            let a = sample::gaussian_element(rng, &algebra);
            let b = sample::gaussian_element(rng, &algebra);
            let (a1, a2) = self.split(&a).expect("sample lies in A");
            let (b1, b2) = self.split(&b).expect("sample lies in A");
            let (ab1, ab2) = self.split(&(&a * &b)).expect("sample lies in A");
            let (s1, s2) = self.split(&a.adjoint()).expect("sample lies in A");
            let scale = 1.0 + a.norm() * b.norm();
            hom = hom
                .max(ab1.distance(&(&a1 * &b1)) / scale)
                .max(ab2.distance(&(&a2 * &b2)) / scale)
                .max(s1.distance(&a1.adjoint()) / scale)
                .max(s2.distance(&a2.adjoint()) / scale);
            let pair_norm = a1.norm().max(a2.norm());
            isometry = isometry.max((a.norm() - pair_norm).abs() / (1.0 + a.norm()));
            bijection = match self.pullback.glue(&a1, &a2) {
                Ok(back) => bijection.max(back.distance(&a) / (1.0 + a.norm())),
                Err(_) => f64::INFINITY,
            };
        }
        DecompositionCertificate {
            disjoint: self
                .commutative_ideal
                .intersection(&self.character_kernel)
                .is_zero(),
            quotient_commutative: self.character_kernel.quotient_algebra().is_commutative(),
            isometry_residual: isometry,
            hom_residual: hom,
            bijection_residual: bijection,
        }
    }
}
