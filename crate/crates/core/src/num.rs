//! Numeric output formatting shared by every file writer.

use serde::Serializer;

/// Significant digits used for all numeric output.
pub const SIG_DIGITS: usize = 9;

/// Round `x` to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal text of `x` rounded to [`SIG_DIGITS`] significant digits.
pub fn fmt_sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        // drop the sign of negative zero
        return "0".to_string();
    }
    format!("{r}")
}

pub(crate) fn ser_sig<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

pub(crate) fn ser_sig_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| round_sig(*x)))
}
