//! Fixed 12-significant-digit number formatting for CSV output.

pub const SIG_DIGITS: usize = 12;

pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.prec$e}", prec = SIG_DIGITS - 1);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-4..12).contains(&exp) {
        let rounded: f64 = sci.parse().unwrap_or(x);
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{rounded:.decimals$}")
    } else {
        sci
    }
}

/// Rounds away values that are zero at 12 significant digits relative to 1.
pub fn clean(x: f64) -> f64 {
    if x.abs() < 1e-13 {
        0.0
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.0), "1.00000000000");
        assert_eq!(num(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(num(-123.456), "-123.456000000");
        assert_eq!(num(1.5e-7), "1.50000000000e-7");
        assert_eq!(num(0.99999999999999), "1.00000000000");
        assert_eq!(num(9.9999999999999e11), "1.00000000000e12");
        assert_eq!(clean(3e-17), 0.0);
    }
}
