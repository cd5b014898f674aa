//! Small numeric helpers shared across the crate: exactly rounded summation
//! and the extended-real JSON encoding.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exactly rounded floating-point sum (Shewchuk partials, as in Python's
/// `math.fsum`).
///
/// The result depends only on the multiset of inputs, so it is invariant
/// under permutation and odd under negation. Falls back to naive summation
/// if an intermediate overflows.
pub fn fsum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    let mut naive = 0.0;
    for mut x in values {
        naive += x;
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }
    if partials.iter().any(|p| !p.is_finite()) {
        return naive;
    }

    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    // Round-half-even correction when the remaining partials push the tie.
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        let yr = x - hi;
        if y == yr {
            hi = x;
        }
    }
    hi
}

/// Exactly rounded mean of a slice.
pub fn mean(values: &[f64]) -> f64 {
    fsum(values.iter().copied()) / values.len() as f64
}

/// Exactly rounded `(1/n) Σ a_i b_i` (products are rounded individually).
pub fn mean_product(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    fsum(a.iter().zip(b).map(|(x, y)| x * y)) / a.len() as f64
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn norm2(values: &[f64]) -> f64 {
    fsum(values.iter().map(|v| v * v)).sqrt()
}

/// Ascending copy ordered by `f64::total_cmp`.
pub fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Value of the extended real line `(-inf, +inf]` as it appears in reports.
///
/// Finite values encode as JSON numbers; `+inf` encodes as the string
/// `"inf"` since JSON has no infinity literal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal(pub f64);

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal(v)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("+inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                Ok(ExtReal(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
                match v {
                    "inf" | "+inf" => Ok(ExtReal(f64::INFINITY)),
                    "-inf" => Ok(ExtReal(f64::NEG_INFINITY)),
                    "nan" => Ok(ExtReal(f64::NAN)),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        d.deserialize_any(ExtVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fsum_is_exactly_rounded() {
        assert_eq!(fsum([0.1; 10]), 1.0);
        assert_eq!(fsum([1e100, 1.0, -1e100]), 1.0);
        assert_eq!(fsum([]), 0.0);
        let xs = [0.3, -0.1, 2.5e-17, 7.0, -6.9];
        let neg: Vec<f64> = xs.iter().map(|v| -v).collect();
        assert_eq!(fsum(neg), -fsum(xs));
    }

    #[test]
    fn ext_real_json() {
        let s = serde_json::to_string(&[ExtReal(1.5), ExtReal::INFINITY]).unwrap();
        assert_eq!(s, r#"[1.5,"inf"]"#);
        let back: Vec<ExtReal> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![ExtReal(1.5), ExtReal::INFINITY]);
    }
}
