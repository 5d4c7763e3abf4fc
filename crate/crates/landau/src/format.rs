//! Fixed CSV number formatting.

/// Significant digits written for every floating value.
pub const SIGNIFICANT: usize = 15;

/// Positional notation with 15 significant digits; never an exponent.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round to 15 significant digits first so the exponent accounts for carries.
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
    let rounded: f64 = sci.parse().unwrap();
    format!("{:.*}", decimals, rounded)
}

/// Joins a header and rows into CSV text with `\n` line endings.
pub fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}
