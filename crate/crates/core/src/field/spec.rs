use super::Tower;
use crate::error::{Error, Result};

// "p", "p^e" or "p^(a*b)"
fn parse_power(s: &str) -> Option<(u32, u32)> {
    let (p, e) = match s.split_once('^') {
        None => return s.parse().ok().map(|p| (p, 1)),
        Some(pe) => pe,
    };
    let p = p.parse().ok()?;
    let e = match e.strip_prefix('(').and_then(|e| e.strip_suffix(')')) {
        Some(prod) => prod
            .split('*')
            .map(|f| f.parse::<u32>().ok())
            .try_fold(1u32, |acc, f| acc.checked_mul(f?))?,
        None => e.parse().ok()?,
    };
    Some((p, e))
}

fn parse_gf(s: &str) -> Option<(u32, u32)> {
    parse_power(s.strip_prefix("gf(")?.strip_suffix(')')?)
}

/// Parses "gf(p^(s*t))/gf(p^s)" into (p, s, t).
pub fn parse_field_spec(spec: &str) -> Result<(u32, u32, u32)> {
    let bad = || Error::InvalidFieldSpec(spec.to_string());
    let compact: String = spec
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    let (top, bottom) = compact.split_once(")/").ok_or_else(bad)?;
    let (p, n) = parse_gf(&format!("{top})")).ok_or_else(bad)?;
    let (pb, s) = parse_gf(bottom).ok_or_else(bad)?;
    if p != pb || s == 0 || n % s != 0 {
        return Err(bad());
    }
    Ok((p, s, n / s))
}

impl Tower {
    pub fn from_spec(spec: &str) -> Result<Tower> {
        let (p, s, t) = parse_field_spec(spec)?;
        Tower::new(p, s, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_field_spec("gf(2^4)/gf(2)").unwrap(), (2, 1, 4));
        assert_eq!(parse_field_spec("gf(2^6)/gf(2^2)").unwrap(), (2, 2, 3));
        assert_eq!(
            parse_field_spec("GF(2^(2*3)) / gf(2^2)").unwrap(),
            (2, 2, 3)
        );
        assert_eq!(parse_field_spec("gf(5^2)/gf(5)").unwrap(), (5, 1, 2));
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "gf(2^4)",
            "gf(2^4)/gf(3)",
            "gf(2^5)/gf(2^2)",
            "banana",
            "gf(x^2)/gf(x)",
        ] {
            assert!(parse_field_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn spec_string_round_trips() {
        for spec in ["gf(2^4)/gf(2)", "gf(2^6)/gf(2^2)", "gf(3^2)/gf(3)"] {
            assert_eq!(Tower::from_spec(spec).unwrap().spec(), spec);
        }
    }
}
