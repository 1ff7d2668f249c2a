//! Inputs shared by the benchmarks.

use genus_pls::embedding::EmbeddingScheme;
use genus_pls::SurfaceKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SIZES: [u32; 3] = [64, 256, 1024];

/// A fixed random embedding of about `n` vertices on the given surface.
pub fn instance(n: u32, surface: SurfaceKind) -> EmbeddingScheme {
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(n));
    genus_pls::generate::random_embedded(n, surface, &mut rng)
}

pub fn torus(genus: u32) -> SurfaceKind {
    SurfaceKind { orientable: true, genus }
}
