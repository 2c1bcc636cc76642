//! Exact rational helpers.
//!
//! Every quantity in this crate is a [`Q`], an arbitrary-precision rational
//! kept in lowest terms with a positive denominator. Rationals travel through
//! text and JSON as `"p/q"` strings (integers as `"p"`), never as decimals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qb(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// Parses `"p"`, `"p/q"`, or a signed variant of either.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("not an exact rational: `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(Q::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in `{s}`")));
            }
            Ok(Q::new(n, d))
        }
    }
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn is_integral(x: &Q) -> bool {
    x.denom().is_one()
}

/// Serde adapter storing a [`Q`] as a `"p/q"` string.
pub mod q_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Q>` as an array of `"p/q"` strings.
pub mod q_vec {
    use super::*;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_q(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Serde adapter for square matrices of rationals.
pub mod q_mat {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_q(s).map_err(de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        let (top, bottom) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in bottom {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &p;
            for (x, y) in row.iter_mut().zip(pivot_row).skip(col) {
                *x -= &f * y;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-187/2").unwrap(), qf(-187, 2));
        assert_eq!(parse_q(" 366 ").unwrap(), q(366));
        assert_eq!(parse_q("4/-2").unwrap(), q(-2));
        assert_eq!(fmt_q(&qf(6, -4)), "-3/2");
        assert_eq!(fmt_q(&q(42)), "42");
        assert!(parse_q("1.5").is_err());
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(determinant(&m), q(5));
        let s = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(determinant(&s), q(0));
        let p = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(determinant(&p), q(-1));
    }
}
