//! Number formatting shared by the text formats.

/// Renders `x` rounded to 12 significant digits with trailing zeros dropped.
/// Negative zero prints as `0`.
pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        "0".into()
    } else {
        rounded.to_string()
    }
}

/// Radians to degrees, formatted with [`num`].
pub fn degrees(rad: f64) -> String {
    num(rad.to_degrees())
}
