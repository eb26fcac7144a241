//! Exact rationals, stored in units of `π`, and their `"p/q"` text form.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number. Areas and actions are rationals in units of `π`.
pub type Q = Ratio<i64>;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(numer, denom)
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(n)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(text: &str) -> Result<Q> {
    let text = text.trim();
    let bad = || Error::Config(format!("malformed rational {text:?}: expected \"p/q\""));
    let (p, d) = match text.split_once('/') {
        Some((p, d)) => (p.trim(), d.trim()),
        None => (text, "1"),
    };
    let p: i64 = p.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Q::new(p, d))
}

/// Canonical text form: `"p/q"` in lowest terms, `"p/1"` for integers.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `⌊x⌋` as an integer.
pub fn floor_q(x: &Q) -> i64 {
    x.numer().div_floor(x.denom())
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

/// Parses a list `"p/q,p/q,..."`.
pub fn parse_q_list(text: &str) -> Result<Vec<Q>> {
    text.split(',').map(parse_q).collect()
}

/// Serde adapter storing a [`Q`] as a `"p/q"` string.
pub mod q_str {
    use super::{format_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_q(&text).map_err(serde::de::Error::custom)
    }
}

/// `Option<Q>` variant of [`q_str`].
pub mod opt_q {
    use super::{format_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&format_q(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?.map(|t| parse_q(&t).map_err(serde::de::Error::custom)).transpose()
    }
}

/// Serde adapter storing an `f64` as a decimal string. Plain JSON numbers
/// are accepted on input as well.
pub mod real_str {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{x:?}"))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Real {
        Text(String),
        Number(f64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Real::deserialize(d)? {
            Real::Number(x) => Ok(x),
            Real::Text(t) => t
                .trim()
                .parse::<f64>()
                .map_err(|_| de::Error::custom(format!("malformed real {t:?}"))),
        }
    }
}

/// `Option<f64>` variant of [`real_str`].
pub mod opt_real_str {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&format!("{v:?}")),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::real_str")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("17/10").unwrap(), q(17, 10));
        assert_eq!(parse_q(" 4 / 8 ").unwrap(), q(1, 2));
        assert_eq!(parse_q("3").unwrap(), q_int(3));
        assert_eq!(format_q(&q(41, 100)), "41/100");
        assert_eq!(format_q(&q_int(2)), "2/1");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("0.5").is_err());
        assert!(parse_q("a/b").is_err());
    }

    #[test]
    fn floor_handles_negatives() {
        assert_eq!(floor_q(&q(7, 2)), 3);
        assert_eq!(floor_q(&q(-7, 2)), -4);
        assert_eq!(floor_q(&q(4, 2)), 2);
    }

    #[test]
    fn list_parsing() {
        let v = parse_q_list("17/10,41/100").unwrap();
        assert_eq!(v, vec![q(17, 10), q(41, 100)]);
    }
}
