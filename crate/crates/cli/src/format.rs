//! Stable number formatting shared by the CSV and JSON writers.

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let y: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

/// Shortest round-trip text of `round12(x)`.
pub fn fmt12(x: f64) -> String {
    serde_json::to_string(&round12(x)).expect("f64 serializes")
}

pub fn fmt12_opt(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_default()
}

pub fn round12_opt(x: Option<f64>) -> Option<f64> {
    x.map(round12)
}
