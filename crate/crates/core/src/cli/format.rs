//! Number formatting for CSV output.

/// Formats `x` like C's `%g` with six significant digits: fixed notation for
/// exponents in `[-4, 6)`, scientific otherwise, trailing zeros removed.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round first: the exponent must be taken after rounding (9.999999 → 10).
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_g;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (0.5, "0.5"),
            (0.822, "0.822"),
            (1.0 / 3.0, "0.333333"),
            (19.3246, "19.3246"),
            (1466.6135, "1466.61"),
            (10000.0, "10000"),
            (123456789.0, "1.23457e+08"),
            (0.00012345678, "0.000123457"),
            (0.0000123, "1.23e-05"),
            (9.9999996, "10"),
            (-0.0625, "-0.0625"),
            (0.00383, "0.00383"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x}");
        }
    }
}
