//! Seeded random generation of words, endomorphisms and IA elements.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::word::{Automorphism, Endomorphism, Letter, Word};

/// The generator used everywhere for reproducible sampling.
pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A reduced word obtained from `len` uniformly random letters.
pub fn random_word(rng: &mut SampleRng, rank: usize, len: usize) -> Word {
    let letters = (0..len).map(|_| Letter::new(rng.random_range(1..=rank), rng.random_bool(0.5)));
    Word::from_letters(rank, letters).expect("indices within rank")
}

/// Random images of length at most `max_len` (not necessarily invertible).
pub fn random_endomorphism(rng: &mut SampleRng, rank: usize, max_len: usize) -> Endomorphism {
    let images = (0..rank)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            random_word(rng, rank, len)
        })
        .collect();
    Endomorphism::new(images).expect("uniform rank")
}

/// A product of `len` random factors drawn from `pool` and their inverses.
pub fn random_product(rng: &mut SampleRng, pool: &[Automorphism], len: usize) -> Automorphism {
    let rank = pool[0].rank();
    let mut acc = Automorphism::identity(rank);
    for _ in 0..len {
        let g = &pool[rng.random_range(0..pool.len())];
        let g = if rng.random_bool(0.5) { g.inverse() } else { g.clone() };
        acc = Automorphism::compose(&acc, &g).expect("same rank");
    }
    acc
}

/// A uniformly random element of `pool`.
pub fn choose<'a, T>(rng: &mut SampleRng, pool: &'a [T]) -> &'a T {
    &pool[rng.random_range(0..pool.len())]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = random_word(&mut rng(5), 3, 20);
        let b = random_word(&mut rng(5), 3, 20);
        assert_eq!(a, b);
        let e = random_endomorphism(&mut rng(1), 3, 4);
        assert!(e.images().iter().all(|w| w.len() <= 4));
    }
}
