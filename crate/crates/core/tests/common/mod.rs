//! Shared helpers of the integration tests.
#![allow(dead_code)]

pub mod brute;

use llab_core::rational::Q;
use llab_core::reeb::{cz_index, Axis, EllipsoidSpec};
use rand::Rng;

/// A random rational `p/q` with `q ≤ max_den` in the open interval `(lo, hi)`.
pub fn random_q<R: Rng>(rng: &mut R, lo: Q, hi: Q, max_den: i64) -> Q {
    loop {
        let den = rng.gen_range(2..=max_den);
        let num = rng.gen_range(1..den * 2);
        let x = Q::new(num, den);
        if x > lo && x < hi {
            return x;
        }
    }
}

/// True when no iterate up to `mult` of either axis orbit is degenerate.
pub fn nondegenerate(spec: &EllipsoidSpec, mult: u32) -> bool {
    (1..=mult).all(|m| cz_index(spec, Axis::Minus, m).is_ok() && cz_index(spec, Axis::Plus, m).is_ok())
}
