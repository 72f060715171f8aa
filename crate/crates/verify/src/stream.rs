use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// The random stream of one trial: ChaCha8 keyed by
/// `SHA-256(seed ‖ check id ‖ 0 ‖ trial)`. Streams of different checks never
/// depend on each other, so adding a check leaves the rest unchanged.
pub fn substream(seed: u64, check_id: &str, trial: usize) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(check_id.as_bytes());
    h.update([0u8]);
    h.update((trial as u64).to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}
