//! Parsing and printing of complex points.
//!
//! Points are comma-separated tokens of the form `re`, `re+imi`, `re-imi`,
//! or a pure imaginary like `0.3i` / `-i`.

use num_complex::Complex64;

/// Parse a comma-separated point like `0.5,0.25` or `0.3+0.1i,-0.2i`.
pub fn parse_point(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',')
        .map(|tok| parse_complex(tok.trim()))
        .collect()
}

/// Parse one complex token.
pub fn parse_complex(tok: &str) -> Result<Complex64, String> {
    if tok.is_empty() {
        return Err("empty complex token".into());
    }
    if let Some(body) = tok.strip_suffix('i') {
        // Either a pure imaginary or re±im i. Split at the last sign that is
        // not an exponent sign and not the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = body[..i]
                    .parse()
                    .map_err(|e| format!("bad real part {:?}: {e}", &body[..i]))?;
                let im_str = &body[i..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str
                        .parse()
                        .map_err(|e| format!("bad imaginary part {im_str:?}: {e}"))?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse()
                        .map_err(|e| format!("bad imaginary token {tok:?}: {e}"))?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = tok
            .parse()
            .map_err(|e| format!("bad real token {tok:?}: {e}"))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Format a complex number as a parseable token with full precision.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:?}", z.re)
    } else if z.im > 0.0 {
        format!("{:?}+{:?}i", z.re, z.im)
    } else {
        format!("{:?}-{:?}i", z.re, -z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_real_and_complex_tokens() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(
            parse_complex("0.5+0.25i").unwrap(),
            Complex64::new(0.5, 0.25)
        );
        assert_eq!(
            parse_complex("-0.3-0.1i").unwrap(),
            Complex64::new(-0.3, -0.1)
        );
        assert_eq!(parse_complex("0.3i").unwrap(), Complex64::new(0.0, 0.3));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(
            parse_complex("1e-3+2e-4i").unwrap(),
            Complex64::new(1e-3, 2e-4)
        );
    }

    #[test]
    fn parses_points() {
        let p = parse_point("0.5,0.5").unwrap();
        assert_eq!(p.len(), 2);
        assert!(parse_point("0.5,,0.3").is_err());
    }

    #[test]
    fn format_round_trips() {
        for z in [
            Complex64::new(0.1234567890123456, -0.987654321),
            Complex64::new(-1.5e-7, 0.0),
            Complex64::new(0.0, 2.5),
        ] {
            let s = format_complex(z);
            assert_eq!(parse_complex(&s).unwrap(), z, "token {s}");
        }
    }
}
