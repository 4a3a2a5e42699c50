/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Text form of a float at 15 significant digits: plain decimal for
/// moderate magnitudes, scientific otherwise.
pub fn fmt15(x: f64) -> String {
    let r = round15(x);
    if r == 0.0 {
        return "0".into();
    }
    let mag = r.abs();
    if (1e-5..1e16).contains(&mag) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}
