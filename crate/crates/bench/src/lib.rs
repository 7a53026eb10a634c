//! Deterministic fixtures shared by the benchmarks.

use mmtv_core::hypothesis::{mean_at_least, mean_at_most};
use mmtv_core::{HypothesisSet, Pmf, Rational, SampleSpace, Scalar};

/// Mean-at-most-3/10 vs mean-at-least-7/10 on an evenly spaced grid of `points` values in [0, 1].
pub fn mean_separation<T: Scalar>(points: usize) -> (HypothesisSet<T>, HypothesisSet<T>) {
    assert!(points >= 2);
    let grid: Vec<Rational> = (0..points)
        .map(|i| Rational::ratio(i as i64, points as i64 - 1))
        .collect();
    let space = SampleSpace::from_grid(&grid).unwrap();
    (
        mean_at_most(space.clone(), T::ratio(3, 10)).unwrap(),
        mean_at_least(space, T::ratio(7, 10)).unwrap(),
    )
}

/// Two generator families of size `k` on `n` atoms with pseudo-random
/// integer weights; the families lean towards opposite ends of the space.
pub fn dense_families<T: Scalar>(n: usize, k: usize) -> (HypothesisSet<T>, HypothesisSet<T>) {
    let space = SampleSpace::indexed(n).unwrap();
    let family = |seed: usize, flip: bool| -> Vec<Pmf<T>> {
        (0..k)
            .map(|j| {
                let w: Vec<i64> = (0..n)
                    .map(|i| {
                        let pos = if flip { n - 1 - i } else { i };
                        (1 + (pos * 7 + j * 13 + seed) % 11 + pos) as i64
                    })
                    .collect();
                let total: i64 = w.iter().sum();
                Pmf::new(space.clone(), w.iter().map(|&x| T::ratio(x, total)).collect()).unwrap()
            })
            .collect()
    };
    (
        HypothesisSet::generators(space.clone(), family(1, true)).unwrap(),
        HypothesisSet::generators(space.clone(), family(5, false)).unwrap(),
    )
}
