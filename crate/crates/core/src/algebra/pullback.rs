use alloc::format;
use alloc::vec::Vec;

use super::{AlgElement, FdAlgebra, Ideal, Route, StarHom};
use crate::error::{Error, Result};
use crate::tolerance;

/// Where a block of the pullback algebra comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// A block of the left algebra killed by `phi`.
    Left(usize),
    /// A block of the right algebra killed by `psi`.
    Right(usize),
    /// A block of the glue algebra, shared by both sides.
    Glue(usize),
}

/// `B1 (+)_D B2 = {(b1, b2) : phi(b1) = psi(b2)}` for surjective `phi`, `psi`.
///
/// The pullback of block algebras is again a block algebra: one block per
/// unrouted block of either side plus one per glue block. `layout` fixes the
/// order of those blocks in [`PullbackAlgebra::algebra`].
#[derive(Debug, Clone, PartialEq)]
pub struct PullbackAlgebra {
    phi: StarHom,
    psi: StarHom,
    layout: Vec<Slot>,
    algebra: FdAlgebra,
}

impl PullbackAlgebra {
    /// Pullback with blocks ordered: left-only, right-only, glue.
    pub fn new(phi: StarHom, psi: StarHom) -> Result<Self> {
        let layout = Self::default_layout(&phi, &psi);
        Self::with_layout(phi, psi, layout)
    }

    pub fn with_layout(phi: StarHom, psi: StarHom, layout: Vec<Slot>) -> Result<Self> {
        if phi.target() != psi.target() {
            return Err(Error::InvalidHom(
                "phi and psi have different targets".into(),
            ));
        }
        if !phi.is_surjective() || !psi.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let mut expected = Self::default_layout(&phi, &psi);
        let mut given = layout.clone();
        let key = |s: &Slot| match *s {
            Slot::Left(j) => (0, j),
            Slot::Right(j) => (1, j),
            Slot::Glue(k) => (2, k),
        };
        expected.sort_by_key(key);
        given.sort_by_key(key);
        if expected != given {
            return Err(Error::InvalidHom(format!(
                "layout {layout:?} does not enumerate the pullback blocks"
            )));
        }
        let dims = layout
            .iter()
            .map(|s| match *s {
                Slot::Left(j) => phi.source().block_dims()[j],
                Slot::Right(j) => psi.source().block_dims()[j],
                Slot::Glue(k) => phi.target().block_dims()[k],
            })
            .collect();
        Ok(Self {
            algebra: FdAlgebra::new(dims)?,
            phi,
            psi,
            layout,
        })
    }

    fn default_layout(phi: &StarHom, psi: &StarHom) -> Vec<Slot> {
        let mut layout: Vec<Slot> = phi
            .kernel()
            .blocks()
            .iter()
            .map(|&j| Slot::Left(j))
            .collect();
        layout.extend(psi.kernel().blocks().iter().map(|&j| Slot::Right(j)));
        layout.extend((0..phi.target().num_blocks()).map(Slot::Glue));
        layout
    }

    /// The pullback as a block algebra.
    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn left(&self) -> &FdAlgebra {
        self.phi.source()
    }

    pub fn right(&self) -> &FdAlgebra {
        self.psi.source()
    }

    pub fn glue_algebra(&self) -> &FdAlgebra {
        self.phi.target()
    }

    pub fn phi(&self) -> &StarHom {
        &self.phi
    }

    pub fn psi(&self) -> &StarHom {
        &self.psi
    }

    pub fn layout(&self) -> &[Slot] {
        &self.layout
    }

    fn position(&self, slot: Slot) -> usize {
        self.layout
            .iter()
            .position(|&s| s == slot)
            .expect("layout enumerates every slot")
    }

    fn slots_where(&self, pred: impl Fn(&Slot) -> bool) -> Vec<usize> {
        (0..self.layout.len())
            .filter(|&i| pred(&self.layout[i]))
            .collect()
    }

    /// `ker(pi_1)`: the right-only blocks.
    pub fn left_projection_kernel(&self) -> Ideal {
        Ideal::new(
            &self.algebra,
            &self.slots_where(|s| matches!(s, Slot::Right(_))),
        )
        .expect("slot positions are in range")
    }

    /// `ker(pi_2)`: the left-only blocks.
    pub fn right_projection_kernel(&self) -> Ideal {
        Ideal::new(
            &self.algebra,
            &self.slots_where(|s| matches!(s, Slot::Left(_))),
        )
        .expect("slot positions are in range")
    }

    /// `ker(phi o pi_1) = ker(psi o pi_2)`: everything but the glue blocks.
    pub fn glue_kernel(&self) -> Ideal {
        Ideal::new(
            &self.algebra,
            &self.slots_where(|s| !matches!(s, Slot::Glue(_))),
        )
        .expect("slot positions are in range")
    }

    /// `pi_1 : A -> B1`.
    pub fn left_projection(&self) -> StarHom {
        let routes = (0..self.left().num_blocks())
            .map(|j| match self.phi.target_of(j) {
                Some(k) => Route {
                    source_block: self.position(Slot::Glue(k)),
                    conjugator: self.phi.routes()[k].conjugator.adjoint(),
                },
                None => Route::plain(self.position(Slot::Left(j)), self.left().block_dims()[j]),
            })
            .collect();
        StarHom::new(&self.algebra, self.left(), routes).expect("projection routes are valid")
    }

    /// `pi_2 : A -> B2`.
    pub fn right_projection(&self) -> StarHom {
        let routes = (0..self.right().num_blocks())
            .map(|j| match self.psi.target_of(j) {
                Some(k) => Route {
                    source_block: self.position(Slot::Glue(k)),
                    conjugator: self.psi.routes()[k].conjugator.adjoint(),
                },
                None => Route::plain(self.position(Slot::Right(j)), self.right().block_dims()[j]),
            })
            .collect();
        StarHom::new(&self.algebra, self.right(), routes).expect("projection routes are valid")
    }

    /// `phi o pi_1 : A -> D`.
    pub fn glue_projection(&self) -> StarHom {
        let routes = (0..self.glue_algebra().num_blocks())
            .map(|k| {
                Route::plain(
                    self.position(Slot::Glue(k)),
                    self.glue_algebra().block_dims()[k],
                )
            })
            .collect();
        StarHom::new(&self.algebra, self.glue_algebra(), routes).expect("glue routes are valid")
    }

    /// `a -> (pi_1(a), pi_2(a))`.
    pub fn embed(&self, a: &AlgElement) -> Result<(AlgElement, AlgElement)> {
        if !a.belongs_to(&self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok((
            self.left_projection().apply_unchecked(a),
            self.right_projection().apply_unchecked(a),
        ))
    }

    /// Relative compatibility residual `||phi(b1) - psi(b2)||`.
    pub fn glue_residual(&self, b1: &AlgElement, b2: &AlgElement) -> Result<f64> {
        let d1 = self.phi.apply(b1)?;
        let d2 = self.psi.apply(b2)?;
        Ok(d1.distance(&d2) / (1.0 + b1.norm().max(b2.norm())))
    }

    pub fn contains(&self, b1: &AlgElement, b2: &AlgElement) -> bool {
        self.glue_residual(b1, b2)
            .map(|r| r <= tolerance::EXACT)
            .unwrap_or(false)
    }

    /// The pullback element with projections `b1`, `b2`.
    pub fn glue(&self, b1: &AlgElement, b2: &AlgElement) -> Result<AlgElement> {
        let residual = self.glue_residual(b1, b2)?;
        if residual > tolerance::EXACT {
            return Err(Error::GlueMismatch { residual });
        }
        let d = self.phi.apply_unchecked(b1);
        let blocks = self
            .layout
            .iter()
            .map(|s| match *s {
                Slot::Left(j) => b1.block(j).clone(),
                Slot::Right(j) => b2.block(j).clone(),
                Slot::Glue(k) => d.block(k).clone(),
            })
            .collect();
        Ok(AlgElement::from_blocks_unchecked(blocks))
    }

    /// Like [`PullbackAlgebra::glue`] but without the compatibility check; glue
    /// blocks take the mean of `phi(b1)` and `psi(b2)`.
    pub fn assemble(&self, b1: &AlgElement, b2: &AlgElement) -> Result<AlgElement> {
        let d1 = self.phi.apply(b1)?;
        let d2 = self.psi.apply(b2)?;
        let blocks = self
            .layout
            .iter()
            .map(|s| match *s {
                Slot::Left(j) => b1.block(j).clone(),
                Slot::Right(j) => b2.block(j).clone(),
                Slot::Glue(k) => (d1.block(k) + d2.block(k)).scale_real(0.5),
            })
            .collect();
        Ok(AlgElement::from_blocks_unchecked(blocks))
    }

    /// Element projecting to `b1` on the left and to `c` modulo `ker(psi)` on
    /// the right: `b2 = c + lift(phi(b1) - psi(c))`.
    pub fn construct(&self, b1: &AlgElement, c: &AlgElement) -> Result<AlgElement> {
        let correction = &self.phi.apply(b1)? - &self.psi.apply(c)?;
        let b2 = c + &self.psi.lift(&correction)?;
        self.glue(b1, &b2)
    }
}

/// Identity routes for a full direct sum `B1 (+) B2 = B1 (+)_0 B2`.
pub fn direct_sum(left: &FdAlgebra, right: &FdAlgebra) -> PullbackAlgebra {
    let zero = FdAlgebra::zero();
    let phi = StarHom::new(left, &zero, Vec::new()).expect("map to zero");
    let psi = StarHom::new(right, &zero, Vec::new()).expect("map to zero");
    PullbackAlgebra::new(phi, psi).expect("maps to zero are surjective")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::sample;
    use crate::linalg::CMatrix;
    use alloc::vec;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// B1 = C^2, B2 = C + M2, D = C, phi = 2nd coordinate, psi = 1st block.
    fn example() -> PullbackAlgebra {
        let b1 = FdAlgebra::commutative(2);
        let b2 = FdAlgebra::new(vec![1, 2]).unwrap();
        let d = FdAlgebra::commutative(1);
        let phi = StarHom::routing(&b1, &[1]).unwrap();
        let psi = StarHom::routing(&b2, &[0]).unwrap();
        assert_eq!(phi.target(), &d);
        PullbackAlgebra::new(phi, psi).unwrap()
    }

    fn pair(x1: f64, x2: f64, y: f64) -> (AlgElement, AlgElement) {
        let b1 = AlgElement::diagonal(&[c(x1), c(x2)]);
        let b2 = AlgElement::from_blocks(
            &FdAlgebra::new(vec![1, 2]).unwrap(),
            vec![CMatrix::scalar(1, c(y)), CMatrix::identity(2)],
        )
        .unwrap();
        (b1, b2)
    }

    #[test]
    fn membership_follows_the_glue_coordinate() {
        let pb = example();
        let (b1, b2) = pair(1.0, 2.0, 2.0);
        assert!(pb.contains(&b1, &b2));
        let (b1, b2) = pair(1.0, 2.0, 3.0);
        assert!(!pb.contains(&b1, &b2));
        assert!(matches!(pb.glue(&b1, &b2), Err(Error::GlueMismatch { .. })));
        // blocks: left-only point 0, right-only M2, glue C
        assert_eq!(pb.algebra().block_dims(), &[1, 2, 1]);
    }

    #[test]
    fn zero_glue_is_direct_sum() {
        let b1 = FdAlgebra::new(vec![2, 1]).unwrap();
        let b2 = FdAlgebra::new(vec![3]).unwrap();
        let pb = direct_sum(&b1, &b2);
        assert_eq!(pb.algebra(), &b1.direct_sum(&b2));
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
        let x = sample::gaussian_element(&mut rng, &b1);
        let y = sample::gaussian_element(&mut rng, &b2);
        assert!(pb.contains(&x, &y));
    }

    #[test]
    fn construct_and_project_back() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(9);
        let b1 = FdAlgebra::new(vec![2, 1]).unwrap();
        let b2 = FdAlgebra::new(vec![3, 2]).unwrap();
        let d = FdAlgebra::matrix(2);
        let phi = StarHom::new(
            &b1,
            &d,
            vec![Route {
                source_block: 0,
                conjugator: sample::unitary(&mut rng, 2),
            }],
        )
        .unwrap();
        let psi = StarHom::new(
            &b2,
            &d,
            vec![Route {
                source_block: 1,
                conjugator: sample::unitary(&mut rng, 2),
            }],
        )
        .unwrap();
        let pb = PullbackAlgebra::new(phi, psi).unwrap();
        for _ in 0..10 {
            let x = sample::gaussian_element(&mut rng, &b1);
            let c2 = sample::gaussian_element(&mut rng, &b2);
            let a = pb.construct(&x, &c2).unwrap();
            let (p1, p2) = pb.embed(&a).unwrap();
            assert!(p1.distance(&x) < 1e-12);
            // p2 agrees with c2 off the kernel of psi... and on it
            assert!(p2.block(0).distance(c2.block(0)) < 1e-12);
            assert!(pb.contains(&p1, &p2));
            // projections are homomorphisms
            assert!(pb.left_projection().certify(&mut rng, 3) < 1e-12);
            assert!(pb.right_projection().certify(&mut rng, 3) < 1e-12);
        }
    }

    #[test]
    fn rejects_non_surjective_maps() {
        let b = FdAlgebra::matrix(2);
        let d = FdAlgebra::new(vec![2, 2]).unwrap();
        let phi = StarHom::new(&b, &d, vec![Route::plain(0, 2), Route::plain(0, 2)]).unwrap();
        let psi = StarHom::routing(&d, &[0, 1]).unwrap();
        assert_eq!(
            PullbackAlgebra::new(phi, psi).unwrap_err(),
            Error::NotSurjective
        );
    }
}
