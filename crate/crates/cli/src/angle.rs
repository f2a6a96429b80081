//! Angles as they appear in documents and on the command line.
//!
//! Accepted forms: a bare number (radians), `pi`, `5*pi`, `-3pi/4`, `pi/2`,
//! and fractions of a full turn such as `1/4 turn` or `0.3 turns`. Fractions
//! of a turn with a denominator dividing four land exactly on `1, i, -1, -i`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub radians: f64,
    /// `(num, den)` when the angle is `num / den` of a turn.
    turns: Option<(i64, i64)>,
}

impl Angle {
    pub fn radians(radians: f64) -> Self {
        Angle { radians, turns: None }
    }

    fn turns(num: i64, den: i64) -> Self {
        Angle { radians: TAU * num as f64 / den as f64, turns: Some((num, den)) }
    }

    /// The point `e^{i angle}` of the unit circle.
    pub fn unit(&self) -> Complex64 {
        if let Some((num, den)) = self.turns {
            if (4 * num) % den == 0 {
                return match (4 * num / den).rem_euclid(4) {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
            }
        }
        Complex64::from_polar(1.0, self.radians)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// `a`, `a/b` or a decimal, as a multiple of a turn.
fn turn_fraction(s: &str) -> Result<Angle, String> {
    if let Some((a, b)) = s.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
        let den: i64 = b.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
        if den == 0 {
            return Err(format!("zero denominator in '{s}'"));
        }
        let g = gcd(num, den).max(1) * den.signum();
        return Ok(Angle::turns(num / g, den / g));
    }
    if let Ok(n) = s.trim().parse::<i64>() {
        return Ok(Angle::turns(n, 1));
    }
    Ok(Angle::radians(TAU * number(s)?))
}

/// `[c][*]pi[/q]`.
fn pi_multiple(s: &str) -> Result<Angle, String> {
    let (head, den) = match s.split_once('/') {
        Some((h, q)) => (h, number(q)?),
        None => (s, 1.0),
    };
    if den == 0.0 {
        return Err(format!("zero denominator in '{s}'"));
    }
    let coeff = head.trim().strip_suffix("pi").ok_or_else(|| format!("cannot read angle '{s}'"))?;
    let coeff = coeff.trim().trim_end_matches('*').trim();
    let c = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => number(c)?,
    };
    // integral coefficient and denominator keep the exact turn fraction
    if c.fract() == 0.0 && den.fract() == 0.0 && c.abs() < 1e12 && den.abs() < 1e12 {
        let (num, den) = (c as i64, 2 * den as i64);
        let g = gcd(num, den).max(1) * den.signum();
        return Ok(Angle::turns(num / g, den / g));
    }
    Ok(Angle::radians(c * PI / den))
}

impl std::str::FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().to_ascii_lowercase();
        if let Some(rest) = t.strip_suffix("turns").or_else(|| t.strip_suffix("turn")) {
            return turn_fraction(rest);
        }
        if t.contains("pi") {
            return pi_multiple(&t);
        }
        Ok(Angle::radians(number(&t)?))
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct AngleVisitor;

        impl Visitor<'_> for AngleVisitor {
            type Value = Angle;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an angle in radians or a string such as \"pi/2\" or \"1/4 turn\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle::radians(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle::radians(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Angle, E> {
                Ok(Angle::radians(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Angle, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(AngleVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn pi_forms() {
        assert_eq!(parse("5*pi").radians, 5.0 * PI);
        assert_eq!(parse("pi/2").radians, PI / 2.0);
        assert_eq!(parse("-3pi/4").radians, -0.75 * PI);
        assert_eq!(parse("pi").unit(), Complex64::new(-1.0, 0.0));
        assert_eq!(parse("0.5 * pi").radians, 0.5 * PI);
    }

    #[test]
    fn turn_forms() {
        assert_eq!(parse("1/4 turn").unit(), Complex64::new(0.0, 1.0));
        assert_eq!(parse("3/4 turns").unit(), Complex64::new(0.0, -1.0));
        assert_eq!(parse("2 turns").unit(), Complex64::new(1.0, 0.0));
        assert!((parse("1/3 turn").radians - TAU / 3.0).abs() < 1e-15);
        assert!((parse("0.1 turn").radians - TAU / 10.0).abs() < 1e-15);
    }

    #[test]
    fn radians_and_errors() {
        assert_eq!(parse("1.5").radians, 1.5);
        assert!("pie".parse::<Angle>().is_err());
        assert!("1/0 turn".parse::<Angle>().is_err());
        assert!("pi/0".parse::<Angle>().is_err());
    }
}
