//! Seeded randomness with labeled substreams.
//!
//! Every randomized component of this crate draws from a ChaCha generator
//! keyed by a user-supplied master seed and positioned on a labeled
//! substream. Two parties holding the same seed and label always see the
//! same bits, which is exactly the shared-random-string assumption of the
//! simultaneous model, and it keeps any run reproducible from its report.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Substream domains. The domain tag occupies the high byte of the ChaCha
/// stream id so that indices from different components can never collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Per-repetition vertex samples of the ls estimator.
    LsSample = 1,
    /// Per-repetition vertex colorings of the edge-sampling primitive.
    Coloring = 2,
    /// Per-(player, repetition) edge picks inside the sampling primitive.
    PlayerPick = 3,
    /// Referee-side weighted picks inside the sampling primitive.
    RefereePick = 4,
    /// Random vertex partitions.
    Partition = 5,
    /// Random arrival orders.
    VertexOrder = 6,
    /// Graph generators.
    GraphGen = 7,
    /// Per-trial seeds in sweeps and test harnesses.
    Trial = 8,
}

/// A generator positioned on the substream `(domain, a, b)` of `seed`.
///
/// `a` and `b` must fit in 28 bits each; repetition counts and player
/// indices are far below that.
pub fn substream(seed: u64, domain: Domain, a: u64, b: u64) -> ChaCha8Rng {
    debug_assert!(a < (1 << 28) && b < (1 << 28));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << 56) | (a << 28) | b);
    rng
}

/// Derives a fresh 64-bit seed from a master seed and two indices
/// (splitmix-style finalizer). Used where a component wants a plain seed
/// of its own, e.g. per-trial generator seeds in sweeps.
pub fn derive_seed(master: u64, label: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(label.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
