use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::{AlgElement, FdAlgebra};
use crate::error::{Error, Result};
use crate::gen::sample;
use crate::linalg::CMatrix;
use crate::tolerance;

/// A closed two-sided ideal: the sum of a subset of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    algebra: FdAlgebra,
    blocks: Vec<usize>,
}

impl Ideal {
    pub fn new(algebra: &FdAlgebra, blocks: &[usize]) -> Result<Self> {
        let mut sorted = blocks.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != blocks.len() {
            return Err(Error::InvalidIdeal(format!("repeated block in {blocks:?}")));
        }
        if let Some(&k) = sorted.iter().find(|&&k| k >= algebra.num_blocks()) {
            return Err(Error::InvalidIdeal(format!(
                "block {k} out of range for {} blocks",
                algebra.num_blocks()
            )));
        }
        Ok(Self {
            algebra: algebra.clone(),
            blocks: sorted,
        })
    }

    pub fn zero(algebra: &FdAlgebra) -> Self {
        Self {
            algebra: algebra.clone(),
            blocks: Vec::new(),
        }
    }

    pub fn whole(algebra: &FdAlgebra) -> Self {
        Self {
            algebra: algebra.clone(),
            blocks: (0..algebra.num_blocks()).collect(),
        }
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn contains_block(&self, k: usize) -> bool {
        self.blocks.binary_search(&k).is_ok()
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.algebra.num_blocks())
            .filter(|k| !self.contains_block(*k))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks
            .iter()
            .all(|&k| self.algebra.block_dims()[k] == 1)
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.blocks.iter().all(|&k| other.contains_block(k))
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        blocks.sort_unstable();
        blocks.dedup();
        Ideal {
            algebra: self.algebra.clone(),
            blocks,
        }
    }

    pub fn intersection(&self, other: &Ideal) -> Ideal {
        Ideal {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .copied()
                .filter(|&k| other.contains_block(k))
                .collect(),
        }
    }

    /// Central projection onto the ideal: the identity on its blocks.
    pub fn unit(&self) -> AlgElement {
        let blocks = self
            .algebra
            .block_dims()
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                if self.contains_block(k) {
                    CMatrix::identity(n)
                } else {
                    CMatrix::zeros(n, n)
                }
            })
            .collect();
        AlgElement::from_blocks_unchecked(blocks)
    }

    /// `x` vanishes outside the ideal's blocks.
    pub fn contains(&self, x: &AlgElement) -> bool {
        x.belongs_to(&self.algebra)
            && self
                .complement()
                .iter()
                .all(|&k| x.block(k).max_abs() <= tolerance::EXACT * (1.0 + x.norm()))
    }

    /// `A / I`, realized on the complementary blocks in their original order.
    pub fn quotient_algebra(&self) -> FdAlgebra {
        self.algebra.restrict(&self.complement())
    }
}

/// One target block of a [`StarHom`]: `phi(x)_k = U x_{source} U^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub source_block: usize,
    pub conjugator: CMatrix,
}

impl Route {
    pub fn plain(source_block: usize, n: usize) -> Self {
        Self {
            source_block,
            conjugator: CMatrix::identity(n),
        }
    }
}

/// A *-homomorphism in block-routing form: every target block is a unitary
/// conjugate of one source block.
#[derive(Debug, Clone, PartialEq)]
pub struct StarHom {
    source: FdAlgebra,
    target: FdAlgebra,
    routes: Vec<Route>,
}

impl StarHom {
    pub fn new(source: &FdAlgebra, target: &FdAlgebra, routes: Vec<Route>) -> Result<Self> {
        if routes.len() != target.num_blocks() {
            return Err(Error::InvalidHom(format!(
                "{} routes for {} target blocks",
                routes.len(),
                target.num_blocks()
            )));
        }
        for (k, route) in routes.iter().enumerate() {
            let n = target.block_dims()[k];
            let Some(&m) = source.block_dims().get(route.source_block) else {
                return Err(Error::InvalidHom(format!(
                    "target block {k} routed from missing source block {}",
                    route.source_block
                )));
            };
            if m != n {
                return Err(Error::InvalidHom(format!(
                    "target block {k} has dimension {n}, source block {} has {m}",
                    route.source_block
                )));
            }
            if route.conjugator.shape() != (n, n) {
                return Err(Error::InvalidHom(format!(
                    "conjugator of block {k} has wrong shape"
                )));
            }
            let u = &route.conjugator;
            let defect = (&u.adjoint() * u).distance(&CMatrix::identity(n));
            if defect > tolerance::EXACT {
                return Err(Error::InvalidHom(format!(
                    "conjugator of block {k} is not unitary (defect {defect:e})"
                )));
            }
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            routes,
        })
    }

    /// Plain block routing with identity conjugators.
    pub fn routing(source: &FdAlgebra, source_blocks: &[usize]) -> Result<Self> {
        let target = source.restrict(source_blocks);
        let routes = source_blocks
            .iter()
            .map(|&s| Route::plain(s, source.block_dims()[s]))
            .collect();
        Self::new(source, &target, routes)
    }

    pub fn identity(algebra: &FdAlgebra) -> Self {
        let all: Vec<usize> = (0..algebra.num_blocks()).collect();
        Self::routing(algebra, &all).expect("identity routing is valid")
    }

    pub fn source(&self) -> &FdAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FdAlgebra {
        &self.target
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn apply(&self, x: &AlgElement) -> Result<AlgElement> {
        if !x.belongs_to(&self.source) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &AlgElement) -> AlgElement {
        AlgElement::from_blocks_unchecked(
            self.routes
                .iter()
                .map(|r| {
                    let u = &r.conjugator;
                    &(u * x.block(r.source_block)) * &u.adjoint()
                })
                .collect(),
        )
    }

    /// Surjective iff no source block feeds two target blocks.
    pub fn is_surjective(&self) -> bool {
        let mut seen: Vec<usize> = self.routes.iter().map(|r| r.source_block).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn kernel(&self) -> Ideal {
        let blocks: Vec<usize> = (0..self.source.num_blocks())
            .filter(|&s| self.routes.iter().all(|r| r.source_block != s))
            .collect();
        Ideal::new(&self.source, &blocks).expect("kernel blocks are in range")
    }

    /// Target block fed by source block `s`, if any.
    pub fn target_of(&self, s: usize) -> Option<usize> {
        self.routes.iter().position(|r| r.source_block == s)
    }

    /// A preimage of `d` vanishing on the kernel. Requires surjectivity.
    pub fn lift(&self, d: &AlgElement) -> Result<AlgElement> {
        if !self.is_surjective() {
            return Err(Error::NotSurjective);
        }
        if !d.belongs_to(&self.target) {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = AlgElement::zero(&self.source);
        for (k, r) in self.routes.iter().enumerate() {
            let u = &r.conjugator;
            *out.block_mut(r.source_block) = &(&u.adjoint() * d.block(k)) * u;
        }
        Ok(out)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &StarHom) -> Result<StarHom> {
        if next.source != self.target {
            return Err(Error::AlgebraMismatch);
        }
        let routes = next
            .routes
            .iter()
            .map(|r| {
                let inner = &self.routes[r.source_block];
                Route {
                    source_block: inner.source_block,
                    conjugator: &r.conjugator * &inner.conjugator,
                }
            })
            .collect();
        StarHom::new(&self.source, &next.target, routes)
    }

    /// Largest sampled violation of multiplicativity and *-preservation.
    pub fn certify<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let a = sample::gaussian_element(rng, &self.source);
            let b = sample::gaussian_element(rng, &self.source);
            let pa = self.apply_unchecked(&a);
            let pb = self.apply_unchecked(&b);
            let scale = 1.0 + a.norm() * b.norm();
            let mult = self.apply_unchecked(&(&a * &b)).distance(&(&pa * &pb)) / scale;
            let star = self.apply_unchecked(&a.adjoint()).distance(&pa.adjoint()) / scale;
            worst = worst.max(mult).max(star);
        }
        worst
    }
}

/// Quotient map `A -> A/I` onto the complementary blocks.
pub fn quotient_hom(ideal: &Ideal) -> StarHom {
    StarHom::routing(ideal.algebra(), &ideal.complement()).expect("complement routing is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    #[test]
    fn ideal_validation() {
        let a = FdAlgebra::new(vec![1, 2, 1]).unwrap();
        assert!(Ideal::new(&a, &[3]).is_err());
        assert!(Ideal::new(&a, &[0, 0]).is_err());
        let i = Ideal::new(&a, &[2, 0]).unwrap();
        assert_eq!(i.blocks(), &[0, 2]);
        assert_eq!(i.complement(), vec![1]);
        assert!(i.is_commutative());
        assert!(i.unit().is_central());
    }

    #[test]
    fn quotient_homs() {
        let a = FdAlgebra::new(vec![1, 2]).unwrap();
        let id = quotient_hom(&Ideal::zero(&a));
        assert_eq!(id.target(), &a);
        let to_zero = quotient_hom(&Ideal::whole(&a));
        assert!(to_zero.target().is_zero());
        let onto_m2 = quotient_hom(&Ideal::new(&a, &[0]).unwrap());
        assert_eq!(onto_m2.target(), &FdAlgebra::matrix(2));
        assert_eq!(onto_m2.kernel().blocks(), &[0]);
        assert!(onto_m2.is_surjective());
    }

    #[test]
    fn conjugated_routes_are_homomorphisms() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
        let src = FdAlgebra::new(vec![2, 3, 1]).unwrap();
        let tgt = FdAlgebra::new(vec![3, 2]).unwrap();
        let hom = StarHom::new(
            &src,
            &tgt,
            vec![
                Route {
                    source_block: 1,
                    conjugator: sample::unitary(&mut rng, 3),
                },
                Route {
                    source_block: 0,
                    conjugator: sample::unitary(&mut rng, 2),
                },
            ],
        )
        .unwrap();
        assert!(hom.certify(&mut rng, 20) < 1e-12);
        assert!(hom.is_surjective());
        assert_eq!(hom.kernel().blocks(), &[2]);
        let d = sample::gaussian_element(&mut rng, &tgt);
        let back = hom.apply(&hom.lift(&d).unwrap()).unwrap();
        assert!(back.distance(&d) < 1e-12);
    }

    #[test]
    fn rejects_bad_routes() {
        let src = FdAlgebra::new(vec![2]).unwrap();
        let tgt = FdAlgebra::new(vec![3]).unwrap();
        assert!(StarHom::new(&src, &tgt, vec![Route::plain(0, 3)]).is_err());
        let mut bad = CMatrix::identity(2);
        bad[(0, 0)] = num_complex::Complex64::new(2.0, 0.0);
        let r = Route {
            source_block: 0,
            conjugator: bad,
        };
        assert!(StarHom::new(&src, &src, vec![r]).is_err());
        let diag = StarHom::new(
            &src,
            &FdAlgebra::new(vec![2, 2]).unwrap(),
            vec![Route::plain(0, 2), Route::plain(0, 2)],
        )
        .unwrap();
        assert!(!diag.is_surjective());
        assert_eq!(
            diag.lift(&AlgElement::zero(diag.target())),
            Err(Error::NotSurjective)
        );
    }
}
