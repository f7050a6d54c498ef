//! Number formatting for reports and the solutions file.

use planar_cc::Interval;

/// C's `%.{digits}g`: shortest of fixed and scientific notation with
/// `digits` significant digits, trailing zeros removed.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let p = digits.max(1);
    // Rounding to p digits may bump the exponent, so take it from the
    // rounded scientific form.
    let sci = format!("{:.*e}", p - 1, x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= p as i32 {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `[lo, hi]` with ten significant digits.
pub fn fmt_interval(iv: Interval) -> String {
    format!("[{}, {}]", fmt_g(iv.lo(), 10), fmt_g(iv.hi(), 10))
}

/// Hexadecimal float in the style of C's `%a`, exact for every finite value.
pub fn to_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    let dot = if digits.is_empty() { "" } else { "." };
    let esign = if exp < 0 { '-' } else { '+' };
    format!("{sign}0x{lead}{dot}{digits}p{esign}{}", exp.abs())
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("malformed hexadecimal float {0:?}")]
pub struct HexParseError(pub String);

/// Inverse of [`to_hex`]. Accepts only the forms it produces (at most 13
/// fraction digits, leading digit 0 or 1).
pub fn from_hex(s: &str) -> Result<f64, HexParseError> {
    let err = || HexParseError(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = match body {
        "inf" => f64::INFINITY,
        "nan" => f64::NAN,
        _ => {
            let body = body.strip_prefix("0x").ok_or_else(err)?;
            let (m, e) = body.split_once('p').ok_or_else(err)?;
            let exp: i32 = e.parse().map_err(|_| err())?;
            let (lead, digits) = m.split_once('.').unwrap_or((m, ""));
            if digits.len() > 13 || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
                return Err(err());
            }
            let frac = if digits.is_empty() {
                0
            } else {
                u64::from_str_radix(digits, 16).map_err(|_| err())? << (4 * (13 - digits.len()))
            };
            match lead {
                "0" if frac == 0 => 0.0,
                "0" if exp == -1022 => f64::from_bits(frac),
                "1" if (-1022..=1023).contains(&exp) => f64::from_bits((((exp + 1023) as u64) << 52) | frac),
                _ => return Err(err()),
            }
        }
    };
    Ok(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_c() {
        assert_eq!(fmt_g(0.7469007911234, 10), "0.7469007911");
        assert_eq!(fmt_g(-1.141274668e-14, 10), "-1.141274668e-14");
        assert_eq!(fmt_g(3.0, 10), "3");
        assert_eq!(fmt_g(1e-5, 10), "1e-05");
        assert_eq!(fmt_g(0.01, 10), "0.01");
        assert_eq!(fmt_g(50.74714105, 10), "50.74714105");
        assert_eq!(fmt_g(0.008260404371, 10), "0.008260404371");
        assert_eq!(fmt_g(12345678901.0, 10), "1.23456789e+10");
        assert_eq!(fmt_g(0.99999999999, 10), "1");
    }

    #[test]
    fn hex_examples() {
        assert_eq!(to_hex(1.0), "0x1p+0");
        assert_eq!(to_hex(-0.75), "-0x1.8p-1");
        assert_eq!(to_hex(0.0), "0x0p+0");
        assert_eq!(to_hex(f64::from_bits(1)), "0x0.0000000000001p-1022");
        for x in [1.0, -0.75, 0.1, f64::MAX, f64::MIN_POSITIVE, f64::from_bits(1), -0.0, 1e-300] {
            let y = from_hex(&to_hex(x)).unwrap();
            assert_eq!(y.to_bits(), x.to_bits(), "{x}");
        }
        assert!(from_hex("0x2p+0").is_err());
        assert!(from_hex("1.5").is_err());
    }
}
