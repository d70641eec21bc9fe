//! Physical constants (CGS) and γ-scaled unit helpers.

use std::f64::consts::PI;

/// Speed of light in cm/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;

/// Absolute carrier angular frequency ω0 = 2πc/λ for `lambda` in cm.
pub fn carrier_angular_frequency(lambda: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / lambda
}

/// Converts a duration in seconds to units of 1/γ.
pub fn seconds_to_scaled(seconds: f64, gamma: f64) -> f64 {
    seconds * gamma
}

/// Converts a duration in units of 1/γ to seconds.
pub fn scaled_to_seconds(scaled: f64, gamma: f64) -> f64 {
    scaled / gamma
}
