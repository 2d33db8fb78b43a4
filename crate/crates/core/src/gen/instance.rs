use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::config::{GenConfig, ModuleFamily};
use super::{sample, Prng};
use crate::algebra::{decompose, AlgElement, FdAlgebra, PullbackAlgebra, Route, StarHom};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::modules::{
    BundleSectionModule, FiberNorm, FinslerModule, FreeHilbertModule, ModVec, ModuleRef,
    PullbackModule, QuotientModule,
};
use crate::theory::parallelogram_defect;

fn pick<T: Copy>(rng: &mut Prng, pool: &[T]) -> T {
    pool[sample::index(rng, pool.len())]
}

/// Uniform in `lo..=hi`.
fn between(rng: &mut Prng, lo: usize, hi: usize) -> usize {
    lo + sample::index(rng, hi - lo + 1)
}

fn permutation(rng: &mut Prng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, sample::index(rng, i + 1));
    }
    p
}

/// `M_{n_1} + ... + M_{n_m}` with `1 <= m <= max_blocks`, dims from the pool.
pub fn gen_algebra(cfg: &GenConfig, rng: &mut Prng) -> Result<FdAlgebra> {
    cfg.validate()?;
    let m = between(rng, 1, cfg.max_blocks);
    FdAlgebra::new((0..m).map(|_| pick(rng, &cfg.dim_pool)).collect())
}

/// `g g*` with Gaussian `g`.
pub fn gen_positive(algebra: &FdAlgebra, rng: &mut Prng) -> AlgElement {
    sample::positive_element(rng, algebra)
}

pub fn gen_vector(e: &dyn FinslerModule, rng: &mut Prng) -> ModVec {
    e.sample_vector(rng)
}

fn gen_fiber(cfg: &GenConfig, rng: &mut Prng, dim: usize) -> Result<FiberNorm> {
    let p = pick(rng, &cfg.fiber_p_pool);
    let weights = (0..dim).map(|_| 0.5 + 1.5 * sample::uniform(rng)).collect();
    FiberNorm::weighted(p, weights)
}

fn gen_bundle(cfg: &GenConfig, rng: &mut Prng, points: usize) -> Result<BundleSectionModule> {
    let fibers = (0..points)
        .map(|_| {
            let d = between(rng, 1, cfg.max_fiber_dim);
            gen_fiber(cfg, rng, d)
        })
        .collect::<Result<_>>()?;
    Ok(BundleSectionModule::over_points(fibers))
}

fn families_for(cfg: &GenConfig, algebra: &FdAlgebra) -> Vec<ModuleFamily> {
    cfg.module_families
        .iter()
        .copied()
        .filter(|f| *f != ModuleFamily::Bundle || algebra.is_commutative())
        .collect()
}

/// A module over `algebra` from one of the enabled families; bundles only
/// over commutative bases.
pub fn gen_module(algebra: &FdAlgebra, cfg: &GenConfig, rng: &mut Prng) -> Result<ModuleRef> {
    cfg.validate()?;
    let families = families_for(cfg, algebra);
    if families.is_empty() {
        return Err(Error::ConfigInvalid(
            "no enabled module family applies to a noncommutative base".into(),
        ));
    }
    gen_module_of(pick(rng, &families), algebra, cfg, rng)
}

/// A module of the given family over `algebra`.
pub fn gen_module_of(
    family: ModuleFamily,
    algebra: &FdAlgebra,
    cfg: &GenConfig,
    rng: &mut Prng,
) -> Result<ModuleRef> {
    cfg.validate()?;
    Ok(match family {
        ModuleFamily::Free => Arc::new(FreeHilbertModule::new(
            algebra,
            between(rng, 1, cfg.max_rank),
        )),
        ModuleFamily::Bundle => {
            if !algebra.is_commutative() {
                return Err(Error::NotCommutativeBase);
            }
            Arc::new(gen_bundle(cfg, rng, algebra.num_blocks())?)
        }
        ModuleFamily::Quotient => Arc::new(gen_quotient(algebra, cfg, rng)?),
        ModuleFamily::Pullback => Arc::new(gen_decomposed(algebra, cfg, rng)?),
    })
}

/// `E / IE` for a module `E` over `algebra (+) M_k`, realized over
/// `algebra` through a surjection with random unitary conjugators.
fn gen_quotient(algebra: &FdAlgebra, cfg: &GenConfig, rng: &mut Prng) -> Result<QuotientModule> {
    let extra = pick(rng, &cfg.dim_pool);
    let m = algebra.num_blocks();
    let at = sample::index(rng, m + 1);
    let mut dims = algebra.block_dims().to_vec();
    dims.insert(at, extra);
    let big = FdAlgebra::new(dims)?;
    let routes = algebra
        .block_dims()
        .iter()
        .enumerate()
        .map(|(k, &n)| Route {
            source_block: if k < at { k } else { k + 1 },
            conjugator: sample::unitary(rng, n),
        })
        .collect();
    let hom = StarHom::new(&big, algebra, routes)?;
    let parent: ModuleRef = if big.is_commutative() && sample::uniform(rng) < 0.5 {
        Arc::new(gen_bundle(cfg, rng, big.num_blocks())?)
    } else {
        Arc::new(FreeHilbertModule::new(&big, between(rng, 1, cfg.max_rank)))
    };
    QuotientModule::along(parent, hom)
}

/// A bundle over the points of `A` glued, over the empty space, to a free
/// module over the matrix blocks.
fn gen_decomposed(algebra: &FdAlgebra, cfg: &GenConfig, rng: &mut Prng) -> Result<PullbackModule> {
    let d = decompose(algebra);
    let pb = d.pullback;
    let left: ModuleRef = Arc::new(gen_bundle(cfg, rng, pb.left().num_blocks())?);
    let right: ModuleRef = Arc::new(FreeHilbertModule::new(
        pb.right(),
        between(rng, 1, cfg.max_rank),
    ));
    let glue: ModuleRef = Arc::new(FreeHilbertModule::new(pb.glue_algebra(), 0));
    let (d1, d2) = (left.dim(), right.dim());
    PullbackModule::new(
        pb,
        left,
        right,
        glue,
        CMatrix::zeros(0, d1),
        CMatrix::zeros(0, d2),
    )
}

/// A pullback module with a nonzero glue module, with its ingredients.
#[derive(Debug, Clone)]
pub struct GluedInstance {
    pub algebra: PullbackAlgebra,
    pub module: PullbackModule,
}

/// Side of a glued instance: its algebra, the blocks feeding the glue, and
/// whether it carries an `l^2` bundle instead of a free module.
struct Side {
    algebra: FdAlgebra,
    glue_sources: Vec<usize>,
    bundle: bool,
}

fn gen_side(
    cfg: &GenConfig,
    rng: &mut Prng,
    glue: &FdAlgebra,
    extra_max: usize,
    bundle: bool,
) -> Result<Side> {
    let extra = between(rng, if extra_max == 0 { 0 } else { 1 }, extra_max);
    let mut dims: Vec<usize> = glue.block_dims().to_vec();
    for _ in 0..extra {
        dims.push(if bundle { 1 } else { pick(rng, &cfg.dim_pool) });
    }
    let order = permutation(rng, dims.len());
    // block order[i] of the side holds dims[i]
    let mut placed = vec![0; dims.len()];
    for (i, &slot) in order.iter().enumerate() {
        placed[slot] = dims[i];
    }
    Ok(Side {
        algebra: FdAlgebra::new(placed)?,
        glue_sources: order[..glue.num_blocks()].to_vec(),
        bundle,
    })
}

/// `psi(x)_{i,k} = U_k sum_j W_ij x_{j, s(k)}` from the free module over
/// the side to the free module of the same rank over the glue algebra.
fn glue_map(
    side: &Side,
    glue: &FreeHilbertModule,
    conjugators: &[CMatrix],
    w: &CMatrix,
) -> Result<CMatrix> {
    let r = glue.rank();
    let d = glue.base();
    let f = FreeHilbertModule::new(&side.algebra, r);
    let n = f.dim();
    let mut m = CMatrix::zeros(glue.dim(), n);
    for col in 0..n {
        let x = ModVec::unit(n, col);
        // parts[k][j]: component j at the source block of glue block k
        let comps = f.components(&x)?;
        let parts: Vec<Vec<&CMatrix>> = side
            .glue_sources
            .iter()
            .map(|&s| comps.iter().map(|c| c.block(s)).collect())
            .collect();
        let mut hs = Vec::with_capacity(r);
        for i in 0..r {
            let blocks = (0..d.num_blocks())
                .map(|k| {
                    let nk = d.block_dims()[k];
                    let mut acc = CMatrix::zeros(nk, nk);
                    for j in 0..r {
                        acc = &acc + &parts[k][j].scale(w[(i, j)]);
                    }
                    &conjugators[k] * &acc
                })
                .collect();
            hs.push(AlgElement::from_blocks(d, blocks)?);
        }
        let h = glue.from_components(&hs)?;
        for row in 0..glue.dim() {
            m[(row, col)] = h[row];
        }
    }
    Ok(m)
}

/// A pullback module `F1 (+)_H F2` with `H` free of rank `r` over a
/// nonzero glue algebra `D`, `F2` free over `B2` and `F1` either free over
/// `B1` or, when `D` is commutative, a bundle with `l^2` fibers of dim `r`
/// at the glue points. Both gluing maps mix ranks by a random unitary and
/// conjugate blocks by the homomorphisms' unitaries.
pub fn gen_glued(cfg: &GenConfig, rng: &mut Prng) -> Result<GluedInstance> {
    cfg.validate()?;
    let r = between(rng, 1, cfg.max_rank);
    let g = between(rng, 1, cfg.max_blocks.min(2));
    let glue_alg = FdAlgebra::new((0..g).map(|_| pick(rng, &cfg.dim_pool)).collect())?;
    let bundle_left = glue_alg.is_commutative() && sample::uniform(rng) < 0.5;
    let left = gen_side(cfg, rng, &glue_alg, 2, bundle_left)?;
    let right = gen_side(cfg, rng, &glue_alg, 2, false)?;

    let hom = |side: &Side, rng: &mut Prng| -> Result<(StarHom, Vec<CMatrix>)> {
        let us: Vec<CMatrix> = glue_alg
            .block_dims()
            .iter()
            .map(|&n| sample::unitary(rng, n))
            .collect();
        let routes = side
            .glue_sources
            .iter()
            .zip(&us)
            .map(|(&s, u)| Route {
                source_block: s,
                conjugator: u.clone(),
            })
            .collect();
        Ok((StarHom::new(&side.algebra, &glue_alg, routes)?, us))
    };
    let (phi, us) = hom(&left, rng)?;
    let (psi, vs) = hom(&right, rng)?;
    let algebra = PullbackAlgebra::new(phi, psi)?;

    let h = FreeHilbertModule::new(&glue_alg, r);
    let (left_module, left_bundle): (ModuleRef, Option<BundleSectionModule>) = if left.bundle {
        let fibers = (0..left.algebra.num_blocks())
            .map(|k| {
                if left.glue_sources.contains(&k) {
                    FiberNorm::lp(2.0, r)
                } else {
                    let dim = between(rng, 1, cfg.max_fiber_dim);
                    gen_fiber(cfg, rng, dim)
                }
            })
            .collect::<Result<_>>()?;
        let b = BundleSectionModule::over_points(fibers);
        (Arc::new(b.clone()), Some(b))
    } else {
        (Arc::new(FreeHilbertModule::new(&left.algebra, r)), None)
    };
    let right_module: ModuleRef = Arc::new(FreeHilbertModule::new(&right.algebra, r));

    let w1 = sample::unitary(rng, r);
    let w2 = sample::unitary(rng, r);
    let psi_left = match &left_bundle {
        Some(b) => bundle_glue_map(&left, b, &h, &us, &w1)?,
        None => glue_map(&left, &h, &us, &w1)?,
    };
    let psi_right = glue_map(&right, &h, &vs, &w2)?;
    let module = PullbackModule::new(
        algebra.clone(),
        left_module,
        right_module,
        Arc::new(h),
        psi_left,
        psi_right,
    )?;
    Ok(GluedInstance { algebra, module })
}

fn bundle_glue_map(
    side: &Side,
    bundle: &BundleSectionModule,
    glue: &FreeHilbertModule,
    phases: &[CMatrix],
    w: &CMatrix,
) -> Result<CMatrix> {
    let r = glue.rank();
    let d = glue.base();
    let n = bundle.dim();
    let mut m = CMatrix::zeros(glue.dim(), n);
    for col in 0..n {
        let x = ModVec::unit(n, col);
        let mut hs = Vec::with_capacity(r);
        for i in 0..r {
            let values: Vec<Complex64> = side
                .glue_sources
                .iter()
                .enumerate()
                .map(|(k, &s)| {
                    let v = bundle.section(&x, s);
                    let mixed: Complex64 = (0..r).map(|j| w[(i, j)] * v[j]).sum();
                    phases[k][(0, 0)] * mixed
                })
                .collect();
            hs.push(AlgElement::central(d, &values));
        }
        let h = glue.from_components(&hs)?;
        for row in 0..glue.dim() {
            m[(row, col)] = h[row];
        }
    }
    Ok(m)
}

/// A bundle with a non-`l^2` fiber and a pair on which the parallelogram
/// law fails.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub module: Arc<BundleSectionModule>,
    /// Block carrying the witness fiber.
    pub block: usize,
    pub p: f64,
    pub x: ModVec,
    pub y: ModVec,
    /// `parallelogram_defect(x, y)`.
    pub defect: f64,
}

/// Smallest defect a counterexample may carry.
pub const MIN_COUNTEREXAMPLE_DEFECT: f64 = 0.1;

/// Unweighted `l^p` fibers (`p != 2`, dim >= 2 at the witness block) on
/// the 1-dimensional blocks of `algebra`, zero on the matrix blocks.
pub fn gen_counterexample(
    algebra: &FdAlgebra,
    cfg: &GenConfig,
    rng: &mut Prng,
) -> Result<Counterexample> {
    cfg.validate()?;
    let points = algebra.one_dim_blocks();
    if points.is_empty() {
        return Err(Error::NoCommutativeIdeal);
    }
    let pool: Vec<f64> = cfg
        .fiber_p_pool
        .iter()
        .copied()
        .filter(|&p| p != 2.0)
        .collect();
    if pool.is_empty() {
        return Err(Error::ConfigInvalid(
            "fiber_p_pool has no exponent other than 2".into(),
        ));
    }
    let p = pick(rng, &pool);
    let block = points[sample::index(rng, points.len())];
    let top = cfg.max_fiber_dim.max(2);
    let fibers = (0..algebra.num_blocks())
        .map(|k| {
            if k == block {
                FiberNorm::lp(p, between(rng, 2, top))
            } else if points.contains(&k) {
                FiberNorm::lp(p, between(rng, 1, top))
            } else {
                Ok(FiberNorm::zero())
            }
        })
        .collect::<Result<_>>()?;
    let module = Arc::new(BundleSectionModule::new(algebra, fibers)?);
    let range = module.fiber_range(block);
    let x = ModVec::unit(module.dim(), range.start);
    let y = ModVec::unit(module.dim(), range.start + 1);
    let defect = parallelogram_defect(module.as_ref(), &x, &y)?;
    if defect.is_nan() || defect < MIN_COUNTEREXAMPLE_DEFECT {
        return Err(Error::ConfigInvalid(alloc::format!(
            "exponent {p} gives defect {defect:e} below {MIN_COUNTEREXAMPLE_DEFECT}"
        )));
    }
    Ok(Counterexample {
        module,
        block,
        p,
        x,
        y,
        defect,
    })
}
