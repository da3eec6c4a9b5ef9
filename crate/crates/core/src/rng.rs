//! The single pseudo-random generator used throughout the crate.
//!
//! Every random choice is drawn from PCG-64 (`Lcg128Xsl64`, the XSL-RR
//! 128/64 permuted congruential generator from `rand_pcg`), seeded with
//! `SeedableRng::seed_from_u64`. Both the generator and the seed expansion
//! are value-stable, so a seed reproduces the same stream on every platform.
//!
//! Independent consumers that share a user seed derive their own stream with
//! [`substream`], which mixes a fixed per-purpose salt into the seed.

use rand::SeedableRng;
use rand_pcg::Pcg64;

pub type Prng = Pcg64;

pub fn seeded(seed: u64) -> Prng {
    Pcg64::seed_from_u64(seed)
}

/// Stream salts for consumers that share one user seed.
#[derive(Clone, Copy, Debug)]
#[repr(u64)]
pub enum Stream {
    /// Edge draws of the binomial sample. Uses the seed unchanged.
    Sample = 0,
    Repair = 0x7265_7061_6972_0001,
    Discrepancy = 0x6469_7363_7265_0002,
    Split = 0x7370_6c69_7400_0003,
}

pub fn substream(seed: u64, stream: Stream) -> Prng {
    seeded(seed ^ stream as u64)
}
