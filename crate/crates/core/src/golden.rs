//! Golden-ratio constants that keep showing up in pentagram geometry.

/// `(1 + sqrt 5) / 2`.
pub const PHI: f64 = 1.618_033_988_749_895;

/// `sqrt 5`, the largest eigenvalue any 3D pentagram operator can reach.
pub const SQRT_5: f64 = 2.236_067_977_499_79;

/// `sin^2 a = sin^2 b` for the regular pentagram, `PHI - 1 = 1 / PHI`.
pub const REGULAR_SIN_SQ: f64 = PHI - 1.0;

/// `PHI^-5`, both the Hardy maximum and the gap `2 - A_min`.
pub const PHI_INV_5: f64 = 0.090_169_943_749_474_24;

/// Smallest possible overlap sum `A = 2 - PHI^-5` over 3D pentagrams.
pub const A_MIN: f64 = 2.0 - PHI_INV_5;

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;

    #[test]
    fn constants_agree_with_their_definitions() {
        assert!((PHI - (1.0 + 5.0.sqrt()) / 2.0).abs() < 1e-15);
        assert!((SQRT_5 - 5.0.sqrt()).abs() < 1e-15);
        assert!((PHI - 1.0 / (PHI - 1.0)).abs() < 1e-14);
        assert!((PHI_INV_5 - PHI.powi(-5)).abs() < 1e-16);
    }
}
