use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Module families the generators can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleFamily {
    Free,
    /// Only over commutative bases.
    Bundle,
    Quotient,
    /// Glued over the decomposition of the base along its commutative ideal.
    Pullback,
}

impl ModuleFamily {
    pub const ALL: [ModuleFamily; 4] = [
        ModuleFamily::Free,
        ModuleFamily::Bundle,
        ModuleFamily::Quotient,
        ModuleFamily::Pullback,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ModuleFamily::Free => "free",
            ModuleFamily::Bundle => "bundle",
            ModuleFamily::Quotient => "quotient",
            ModuleFamily::Pullback => "pullback",
        }
    }
}

impl fmt::Display for ModuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ModuleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModuleFamily::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown module family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_blocks: usize,
    pub dim_pool: Vec<usize>,
    pub module_families: Vec<ModuleFamily>,
    /// Exponents for bundle fibers; `f64::INFINITY` is the sup norm.
    pub fiber_p_pool: Vec<f64>,
    pub samples: usize,
    /// Largest rank of generated free modules.
    pub max_rank: usize,
    /// Largest dimension of a generated bundle fiber.
    pub max_fiber_dim: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_blocks: 3,
            dim_pool: vec![1, 2, 3],
            module_families: ModuleFamily::ALL.to_vec(),
            fiber_p_pool: vec![1.0, 1.5, 2.0, 3.0, f64::INFINITY],
            samples: 20,
            max_rank: 2,
            max_fiber_dim: 3,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.samples == 0 {
            return fail("samples must be at least 1".into());
        }
        if self.dim_pool.is_empty() {
            return fail("dim_pool is empty".into());
        }
        if self.dim_pool.contains(&0) {
            return fail("dim_pool contains 0".into());
        }
        if self.max_blocks == 0 {
            return fail("max_blocks must be at least 1".into());
        }
        if self.module_families.is_empty() {
            return fail("module_families is empty".into());
        }
        if self.fiber_p_pool.is_empty() {
            return fail("fiber_p_pool is empty".into());
        }
        if let Some(p) = self.fiber_p_pool.iter().find(|p| p.is_nan() || **p < 1.0) {
            return fail(format!("fiber exponent {p} is below 1"));
        }
        if self.max_rank == 0 || self.max_fiber_dim == 0 {
            return fail("max_rank and max_fiber_dim must be at least 1".into());
        }
        Ok(())
    }
}
