use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::{FinslerModule, ModVec, ModuleDescription};
use crate::algebra::{AlgElement, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Weighted `l^p` norm on `C^d`: `(sum_i w_i |v_i|^p)^{1/p}`, or
/// `max_i w_i |v_i|` for `p = inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberNorm {
    p: f64,
    weights: Vec<f64>,
}

impl FiberNorm {
    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        Self::weighted(p, vec![1.0; dim])
    }

    pub fn weighted(p: f64, weights: Vec<f64>) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidFiber(format!("exponent {p} is below 1")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidFiber(format!("weight {w} is not positive")));
        }
        Ok(Self { p, weights })
    }

    /// The zero space.
    pub fn zero() -> Self {
        Self {
            p: 2.0,
            weights: Vec::new(),
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Fiber norm comes from an inner product.
    pub fn is_euclidean(&self) -> bool {
        self.p == 2.0 || self.dim() <= 1
    }

    pub fn norm(&self, v: &[Complex64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim());
        if self.p == f64::INFINITY {
            return v
                .iter()
                .zip(&self.weights)
                .map(|(z, w)| w * z.norm())
                .fold(0.0, f64::max);
        }
        if self.p == 2.0 {
            let s: f64 = v
                .iter()
                .zip(&self.weights)
                .map(|(z, w)| w * z.norm_sqr())
                .sum();
            return Float::sqrt(s);
        }
        // scale by the largest term to keep powf in range
        let top = v
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| Float::powf(*w, 1.0 / self.p) * z.norm())
            .fold(0.0, f64::max);
        if top == 0.0 {
            return 0.0;
        }
        let s: f64 = v
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * Float::powf(z.norm() / top, self.p))
            .sum();
        top * Float::powf(s, 1.0 / self.p)
    }
}

/// Sections of a bundle of normed spaces over the 1-dimensional blocks of
/// the base, extended by zero over the matrix blocks.
///
/// `f` in the base acts pointwise: `(fx)(t) = f(t) x(t)`, and
/// `rho(x)(t) = ||x(t)||_t`. Coordinates: the fibers one after another.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleSectionModule {
    base: FdAlgebra,
    fibers: Vec<FiberNorm>,
    offsets: Vec<usize>,
}

impl BundleSectionModule {
    /// One fiber per block of `base`; blocks of size above 1 need the zero
    /// fiber.
    pub fn new(base: &FdAlgebra, fibers: Vec<FiberNorm>) -> Result<Self> {
        if fibers.len() != base.num_blocks() {
            return Err(Error::InvalidFiber(format!(
                "{} fibers for {} blocks",
                fibers.len(),
                base.num_blocks()
            )));
        }
        for (k, (f, &n)) in fibers.iter().zip(base.block_dims()).enumerate() {
            if n > 1 && f.dim() > 0 {
                return Err(Error::InvalidFiber(format!(
                    "block {k} is {n}x{n}; only the zero fiber is allowed there"
                )));
            }
        }
        let mut offsets = Vec::with_capacity(fibers.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for f in &fibers {
            acc += f.dim();
            offsets.push(acc);
        }
        Ok(Self {
            base: base.clone(),
            fibers,
            offsets,
        })
    }

    /// Bundle over the points of `C^m`.
    pub fn over_points(fibers: Vec<FiberNorm>) -> Self {
        let base = FdAlgebra::commutative(fibers.len());
        Self::new(&base, fibers).expect("every block is 1-dimensional")
    }

    pub fn fibers(&self) -> &[FiberNorm] {
        &self.fibers
    }

    /// Coordinate range of the fiber over block `k`.
    pub fn fiber_range(&self, k: usize) -> core::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn section<'a>(&self, x: &'a ModVec, k: usize) -> &'a [Complex64] {
        &x.as_slice()[self.fiber_range(k)]
    }

    /// Restriction to the given blocks, as a module over the restricted base.
    pub fn restrict(&self, blocks: &[usize]) -> Self {
        let fibers = blocks.iter().map(|&k| self.fibers[k].clone()).collect();
        Self::new(&self.base.restrict(blocks), fibers).expect("restriction of a valid bundle")
    }

    /// Coordinates of `x` over the given blocks.
    pub fn restrict_vector(&self, x: &ModVec, blocks: &[usize]) -> ModVec {
        let mut coords = Vec::new();
        for &k in blocks {
            coords.extend_from_slice(self.section(x, k));
        }
        ModVec::new(coords)
    }
}

impl FinslerModule for BundleSectionModule {
    fn base(&self) -> &FdAlgebra {
        &self.base
    }

    fn dim(&self) -> usize {
        self.offsets[self.fibers.len()]
    }

    fn act(&self, a: &AlgElement, x: &ModVec) -> Result<ModVec> {
        if !a.belongs_to(&self.base) {
            return Err(Error::AlgebraMismatch);
        }
        x.check_len(self.dim())?;
        let mut out = x.clone();
        for k in 0..self.fibers.len() {
            if self.fibers[k].dim() == 0 {
                continue;
            }
            let f = a.block(k)[(0, 0)];
            for c in &mut out.as_mut_slice()[self.fiber_range(k)] {
                *c *= f;
            }
        }
        Ok(out)
    }

    fn rho(&self, x: &ModVec) -> Result<AlgElement> {
        x.check_len(self.dim())?;
        let blocks = self
            .base
            .block_dims()
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                if n == 1 {
                    CMatrix::scalar(
                        1,
                        Complex64::new(self.fibers[k].norm(self.section(x, k)), 0.0),
                    )
                } else {
                    CMatrix::zeros(n, n)
                }
            })
            .collect();
        AlgElement::from_blocks(&self.base, blocks)
    }

    fn family(&self) -> &'static str {
        "bundle"
    }

    fn describe(&self) -> ModuleDescription {
        ModuleDescription::Bundle {
            base: self.base.clone(),
            fibers: self.fibers.clone(),
        }
    }
}
