use super::{EmbeddingError, EmbeddingProvider, FeatureVector};
use crate::text::canonicalize;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
// second, independent offset basis for the sign hash
const SIGN_OFFSET: u64 = 0x84222325_cbf29ce4;

fn fnv1a(offset: u64, bytes: &[u8]) -> u64 {
    bytes.iter().fold(offset, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Character 3-gram feature hashing.
///
/// The canonical text is padded with `^`/`$` boundary marks so one- and
/// two-character terms still produce a gram. Each gram adds ±1 to the bucket
/// chosen by one FNV-1a hash, with the sign taken from a second. Empty text
/// maps to the first basis vector.
pub fn hash_embed(text: &str, dim: usize) -> FeatureVector {
    assert!(dim >= 8, "hash_embed needs dim >= 8, got {dim}");
    let canon = canonicalize(text);
    let mut v = vec![0.0; dim];
    if canon.is_empty() {
        v[0] = 1.0;
        return FeatureVector(v);
    }
    let chars: Vec<char> = std::iter::once('^')
        .chain(canon.chars())
        .chain(std::iter::once('$'))
        .collect();
    let mut buf = [0u8; 12];
    for w in chars.windows(3) {
        let mut n = 0;
        for c in w {
            n += c.encode_utf8(&mut buf[n..]).len();
        }
        let gram = &buf[..n];
        let bucket = (fnv1a(FNV_OFFSET, gram) % dim as u64) as usize;
        let sign = if fnv1a(SIGN_OFFSET, gram) >> 63 == 0 { 1.0 } else { -1.0 };
        v[bucket] += sign;
    }
    // colliding grams can cancel to zero
    FeatureVector::normalized(v).unwrap_or_else(|| {
        let mut e = vec![0.0; dim];
        e[0] = 1.0;
        FeatureVector(e)
    })
}

/// Offline deterministic provider backed by [`hash_embed`].
#[derive(Debug, Clone, Copy)]
pub struct HashProvider {
    dim: usize,
}

impl HashProvider {
    pub fn new(dim: usize) -> Self {
        HashProvider { dim: dim.max(8) }
    }
}

impl Default for HashProvider {
    fn default() -> Self {
        HashProvider::new(super::FEATURE_DIM)
    }
}

impl EmbeddingProvider for HashProvider {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Result<FeatureVector, EmbeddingError> {
        Ok(hash_embed(text, self.dim))
    }
}
