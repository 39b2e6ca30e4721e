use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for trajectory `index` under `master`. ChaCha is
/// counter based, so the stream does not depend on which thread runs it or
/// in what order.
pub fn trajectory_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(master);
    r.set_stream(index);
    r
}
