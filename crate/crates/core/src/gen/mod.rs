//! Seeded generation of algebras, elements and modules.
//!
//! All randomness comes from xoshiro256++; instance `i` of a run with seed
//! `s` draws from the stream obtained by seeding with `s` and jumping `i`
//! times, so instances can be generated independently and in any order.

mod config;
mod instance;
pub mod sample;

pub use config::{GenConfig, ModuleFamily};
pub use instance::{
    gen_algebra, gen_counterexample, gen_glued, gen_module, gen_module_of, gen_positive,
    gen_vector, Counterexample, GluedInstance, MIN_COUNTEREXAMPLE_DEFECT,
};

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Prng = Xoshiro256PlusPlus;

/// Identifies the generator in serialized corpora.
pub const PRNG_NAME: &str = "xoshiro256++/splitmix64-seed/jump-streams";

/// Randomness for instance `index` of a run.
pub fn instance_rng(cfg: &GenConfig, index: u64) -> Prng {
    stream(cfg.seed, index)
}

pub fn rng(seed: u64) -> Prng {
    Prng::seed_from_u64(seed)
}

/// Stream `index` of `seed`: 2^128 steps apart from its neighbours.
pub fn stream(seed: u64, index: u64) -> Prng {
    let mut r = rng(seed);
    for _ in 0..index {
        r.jump();
    }
    r
}

/// A 64-bit seed derived from stream `index` of `seed`.
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    use rand::Rng;
    stream(seed, index).next_u64()
}
