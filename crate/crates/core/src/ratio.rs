//! Text form `p/q` for exact ratios, with serde adapters.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Deserializer, Serializer};

use crate::Rational;

/// Parses `p/q` or an integer.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.trim().parse().ok()?, q.trim().parse::<u64>().ok()?);
            (q != 0).then(|| Rational::new(p, q))
        }
        None => s.parse().ok().map(Rational::from_integer),
    }
}

pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal with `sig` significant digits, computed exactly.
pub fn to_decimal(r: &Rational, sig: usize) -> String {
    struct Dec<'a>(&'a Rational, usize);
    impl fmt::Display for Dec<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let (n, d) = (*self.0.numer() as u128, *self.0.denom() as u128);
            let int = n / d;
            let mut rem = n % d;
            let int_digits = if int == 0 { 0 } else { int.to_string_len() };
            let frac_digits =
                self.1
                    .saturating_sub(int_digits)
                    .max(if int == 0 { self.1 } else { 0 });
            // leading zeros after the point do not count as significant
            let mut digits = Vec::new();
            let mut significant = int_digits;
            let mut seen_nonzero = int != 0;
            let mut produced = 0;
            while produced < frac_digits + 40 && significant < self.1 && rem != 0 {
                rem *= 10;
                let dgt = (rem / d) as u8;
                rem %= d;
                digits.push(dgt);
                produced += 1;
                if dgt != 0 {
                    seen_nonzero = true;
                }
                if seen_nonzero {
                    significant += 1;
                }
            }
            // round half up on the next digit
            let next = if rem == 0 { 0 } else { ((rem * 10) / d) as u8 };
            let mut int = int;
            if next >= 5 {
                let mut k = digits.len();
                loop {
                    if k == 0 {
                        int += 1;
                        break;
                    }
                    k -= 1;
                    if digits[k] == 9 {
                        digits[k] = 0;
                    } else {
                        digits[k] += 1;
                        break;
                    }
                }
            }
            while digits.last() == Some(&0) {
                digits.pop();
            }
            write!(f, "{int}")?;
            if !digits.is_empty() {
                f.write_str(".")?;
                for d in digits {
                    write!(f, "{d}")?;
                }
            }
            Ok(())
        }
    }
    trait Len {
        fn to_string_len(self) -> usize;
    }
    impl Len for u128 {
        fn to_string_len(self) -> usize {
            let mut n = self;
            let mut c = 0;
            while n > 0 {
                n /= 10;
                c += 1;
            }
            c
        }
    }
    format!("{}", Dec(r, sig))
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Serde adapter for a single ratio.
pub mod text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad ratio `{s}`")))
    }
}

/// Serde adapter for an optional ratio.
pub mod opt_text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad ratio `{s}`"))))
            .transpose()
    }
}

/// Serde adapter for a list of ratios.
pub mod list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).ok_or_else(|| serde::de::Error::custom(format!("bad ratio `{s}`"))))
            .collect()
    }
}

/// Serde adapter for an optional list of ratios.
pub mod opt_list {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(list) => {
                let mut seq = s.serialize_seq(Some(list.len()))?;
                for r in list {
                    seq.serialize_element(&format(r))?;
                }
                seq.end()
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        let v: Option<Vec<String>> = Option::deserialize(d)?;
        v.map(|list| {
            list.iter()
                .map(|s| {
                    parse(s).ok_or_else(|| serde::de::Error::custom(format!("bad ratio `{s}`")))
                })
                .collect()
        })
        .transpose()
    }
}
