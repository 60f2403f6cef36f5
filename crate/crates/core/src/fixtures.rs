//! Shared test derivators.

use crate::derivator::Derivator;

/// g(x) = x on [0, 0.5], x + 1 on (0.5, 1].
pub fn fixture_a() -> Derivator<f64> {
    Derivator::new((0.0, 1.0), vec![(0.0, 0.0), (1.0, 1.0)], vec![(0.5, 1.0)]).unwrap()
}

/// Pure-jump step derivator on [0, 3] with unit gaps at 0, 1, 2.
pub fn fixture_bprime() -> Derivator<f64> {
    Derivator::new(
        (0.0, 3.0),
        vec![(0.0, 0.0), (3.0, 0.0)],
        vec![(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)],
    )
    .unwrap()
}

/// g = id on [0, 1], no jumps.
pub fn fixture_c() -> Derivator<f64> {
    Derivator::new((0.0, 1.0), vec![(0.0, 0.0), (1.0, 1.0)], vec![]).unwrap()
}

/// Continuous derivator with a flat stretch on [0.4, 0.6].
pub fn fixture_flat() -> Derivator<f64> {
    Derivator::new(
        (0.0, 1.0),
        vec![(0.0, 0.0), (0.4, 0.4), (0.6, 0.4), (1.0, 0.8)],
        vec![],
    )
    .unwrap()
}
