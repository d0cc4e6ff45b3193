//! Text forms of numbers shared by every CSV and JSON artifact: floats with
//! 17 significant digits (lossless, locale-free, '.' decimal) and exact
//! rationals as `p/q`.

use spectre_core::Rational;

/// `x` with 17 significant digits, trailing zeros dropped; positional for
/// decimal exponents in `-5..17`, scientific (`1.5e-7`) otherwise.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific notation");
    let exponent: i32 = exponent.parse().expect("decimal exponent");
    if (-5..17).contains(&exponent) {
        let fixed = format!("{x:.*}", (16 - exponent) as usize);
        trim_fraction(&fixed).to_string()
    } else {
        format!("{}e{exponent}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Exact `p/q` in lowest terms, `q ≥ 1` (integers as `p/1`).
pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn optional_rational(r: Option<&Rational>) -> String {
    r.map(rational).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(float(1.0 / 7.0), "0.14285714285714285");
        assert_eq!(float(4.0), "4");
        assert_eq!(float(-2.5), "-2.5");
        assert_eq!(float(0.0), "0");
        assert_eq!(float(1e-7), "9.9999999999999995e-8");
        assert_eq!(float(1.5e20), "1.5e20");
        assert_eq!(float(0.010257), "0.010257");
        assert_eq!(float(f64::INFINITY), "inf");
    }

    #[test]
    fn floats_round_trip() {
        for x in [1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 123456789.12345679, 1.0 - 1e-16, 6.02e23, 5e-324] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(rational(&Rational::new(2, 14)), "1/7");
        assert_eq!(rational(&Rational::from_integer(0)), "0/1");
        assert_eq!(rational(&Rational::new(-1, 6)), "-1/6");
        assert_eq!(optional_rational(None), "");
    }
}
