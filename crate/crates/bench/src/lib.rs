//! Deterministic inputs shared by the benchmarks.

use g52::sampling;
use g52::{AlgebraElement, Covector};

/// `n` elements uniform in `[-2, 2]^7` and `n` points of `V`, from a fixed seed.
pub struct Inputs {
    pub elements: Vec<AlgebraElement>,
    pub points: Vec<Covector>,
}

impl Inputs {
    pub fn new(n: usize, seed: u64) -> Self {
        let mut rng = sampling::rng(seed);
        let elements = (0..n).map(|_| sampling::uniform_element(&mut rng, 2.0)).collect();
        let points = (0..n).map(|_| sampling::point_in_v(&mut rng)).collect();
        Inputs { elements, points }
    }
}
