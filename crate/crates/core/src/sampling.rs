//! Seeded random inputs shared by tests, the verifier and the benchmarks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lie::{AlgebraElement, Covector, DIM};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `[-r, r]^7`.
pub fn uniform_element<R: Rng + ?Sized>(rng: &mut R, r: f64) -> AlgebraElement {
    AlgebraElement(std::array::from_fn(|_| rng.gen_range(-r..=r)))
}

pub fn uniform_covector<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Covector {
    Covector(std::array::from_fn(|_| rng.gen_range(-r..=r)))
}

fn signed_magnitude<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let m = rng.gen_range(0.25..=2.0);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Each coordinate is exactly zero with probability 1/3, otherwise `+-[0.25, 2]`.
///
/// Exact zeros hit every boundary case of the rank conditions; the gap around zero keeps
/// the nonzero cases well conditioned.
pub fn structured_covector<R: Rng + ?Sized>(rng: &mut R) -> Covector {
    Covector(std::array::from_fn(|_| {
        if rng.gen_bool(1.0 / 3.0) {
            0.0
        } else {
            signed_magnitude(rng)
        }
    }))
}

/// A point of `V`: uniform in `[-2, 2]^7` except `x*_4`, `x*_5` drawn from `+-[0.25, 2]`.
pub fn point_in_v<R: Rng + ?Sized>(rng: &mut R) -> Covector {
    let mut v = uniform_covector(rng, 2.0);
    v[3] = signed_magnitude(rng);
    v[4] = signed_magnitude(rng);
    v
}

/// Sets the entries in `zero` to 0 and every other entry to `+-[0.25, 2]`.
pub fn covector_with_zeros<R: Rng + ?Sized>(rng: &mut R, zero: &[usize]) -> Covector {
    let mut f = Covector([0.0; DIM]);
    for i in 0..DIM {
        if !zero.contains(&i) {
            f[i] = signed_magnitude(rng);
        }
    }
    f
}
