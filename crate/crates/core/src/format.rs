//! Round-trip-safe decimal formatting for output files.

/// Shortest decimal string that parses back to exactly `x`.
///
/// Plain notation for magnitudes in [1e-4, 1e15), scientific otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
