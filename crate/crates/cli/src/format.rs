//! Locale-independent number formatting for CSV and JSON outputs.

use serde_json::Value;

/// Significant digits written to CSV files.
pub const CSV_DIGITS: usize = 12;

/// `x` with `digits` significant digits in `%g` style: plain decimal for
/// moderate exponents, scientific notation otherwise, trailing zeros
/// removed. Non-finite values print as `nan`, `inf` or `-inf`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV cell for a real number.
pub fn csv_f(x: f64) -> String {
    fmt_sig(x, CSV_DIGITS)
}

/// CSV cell for an optional real number (empty when absent).
pub fn csv_opt(x: Option<f64>) -> String {
    x.map(csv_f).unwrap_or_default()
}

/// JSON number; non-finite values become `null`. Values are written in the
/// shortest form that reads back to the identical double (at most 17
/// significant digits).
pub fn json_f(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Quotes a CSV field when it contains a separator, quote or newline.
pub fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
