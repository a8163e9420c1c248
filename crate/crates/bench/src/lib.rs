//! Fixtures shared by the criterion benches.

use ext_forge::gf2::BitMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A reproducible dense random matrix.
pub fn random_matrix(seed: u64, rows: usize, cols: usize) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits: Vec<bool> = (0..rows * cols).map(|_| rng.random()).collect();
    BitMatrix::from_fn(rows, cols, |r, c| bits[r * cols + c])
}
