//! Weight initialization.

use rand_distr::{Distribution, Normal};

use crate::scalar::Scalar;

/// Zero-mean Gaussian draws with standard deviation `sqrt(2 / fan_in)`,
/// the scaling suited to ReLU networks.
///
/// Draws happen in `f64` and are then cast, so `f32` and `f64` models built
/// from the same seed hold the same values up to rounding.
pub fn he_gaussian<E: Scalar>(rng: &mut impl rand::Rng, fan_in: usize, len: usize) -> Vec<E> {
    let std = (2.0 / fan_in as f64).sqrt();
    let normal = Normal::new(0.0, std).expect("std is finite and positive");
    (0..len).map(|_| E::from_f64(normal.sample(rng))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn sample_std_tracks_the_he_scale() {
        let fan_in = 512;
        let v: Vec<f64> = he_gaussian(&mut seeded(1, 0), fan_in, 512 * 512);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64;
        let expected = (2.0 / fan_in as f64).sqrt();
        assert!(
            (var.sqrt() - expected).abs() < 0.1 * expected,
            "sample std {} vs expected {}",
            var.sqrt(),
            expected
        );
    }

    #[test]
    fn deterministic_for_a_fixed_seed() {
        let a: Vec<f32> = he_gaussian(&mut seeded(9, 4), 64, 100);
        let b: Vec<f32> = he_gaussian(&mut seeded(9, 4), 64, 100);
        assert_eq!(a, b);
    }
}
