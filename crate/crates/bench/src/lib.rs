//! Fixed inputs shared by the benchmarks.

use cfree_core::cumulants::{MeasurePair, MomentSequence};
use cfree_core::rational::ratio;
use cfree_core::Rational;

/// Deterministic moments `m_n = (-1)^n (n + 2) / (2n + 1)`, `n = 1..=order`.
pub fn sample_moments(order: usize, shift: i64) -> MomentSequence {
    let mut m: Vec<Rational> = vec![ratio(1, 1)];
    for n in 1..=order as i64 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        m.push(ratio(sign * (n + 2 + shift), 2 * n + 1));
    }
    MomentSequence::new(m).expect("order >= 1")
}

pub fn sample_pair(order: usize, shift: i64) -> MeasurePair {
    MeasurePair::new(sample_moments(order, shift), sample_moments(order, shift + 1)).expect("equal orders")
}
