//! Counter-based random streams.
//!
//! Every particle gets its own ChaCha stream per step, selected by hashing
//! `(step, swarm, particle)`. The draws therefore do not depend on the
//! order in which swarms or particles are processed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const INIT_STREAM: u64 = u64::MAX;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_id(step: usize, swarm: usize, particle: usize) -> u64 {
    let h = splitmix64(step as u64);
    let h = splitmix64(h ^ swarm as u64);
    let id = splitmix64(h ^ particle as u64);
    if id == INIT_STREAM {
        0
    } else {
        id
    }
}

/// Stream for the initial positions and weights of a run.
pub fn init_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INIT_STREAM);
    rng
}

/// Fills `out` with standard normals keyed by `(seed, step, swarm,
/// particle)`; coordinate `i` is the `i`-th draw of that stream.
pub fn fill_normals(seed: u64, step: usize, swarm: usize, particle: usize, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(step, swarm, particle));
    for o in out.iter_mut() {
        *o = StandardNormal.sample(&mut rng);
    }
}
