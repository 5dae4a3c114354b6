//! C-style `%.12e` float formatting for byte-stable CSV output.

pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

#[cfg(test)]
mod tests {
    use super::sci;

    #[test]
    fn matches_printf() {
        assert_eq!(sci(1.234567890123), "1.234567890123e+00");
        assert_eq!(sci(-0.00042), "-4.200000000000e-04");
        assert_eq!(sci(6.02e123), "6.020000000000e+123");
        assert_eq!(sci(0.0), "0.000000000000e+00");
        assert_eq!(sci(f64::NEG_INFINITY), "-inf");
    }
}
