//! Non-negative reals stored by their natural logarithm.
//!
//! Expectations such as `P q^f` overflow every fixed-width float long before
//! the graph sizes of interest, so they travel through the crate as
//! [`LogValue`]s. Zero is represented by a logarithm of `-inf`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Div, Mul};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, PartialEq)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    /// Wraps a natural logarithm. NaN is rejected by a debug assertion.
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan(), "LogValue from NaN");
        LogValue(ln)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0, "LogValue holds non-negative magnitudes, got {x}");
        LogValue(x.ln())
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        LogValue(ln_biguint(x))
    }

    /// Panics on negative input.
    pub fn from_ratio(x: &BigRational) -> Self {
        assert!(!x.is_negative(), "LogValue holds non-negative magnitudes");
        if x.is_zero() {
            return Self::ZERO;
        }
        let num = x.numer().magnitude();
        let den = x.denom().magnitude();
        LogValue(ln_biguint(num) - ln_biguint(den))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }

    /// The plain value; overflows to `inf` for large magnitudes.
    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn powf(self, exponent: f64) -> Self {
        if self.is_zero() {
            return if exponent == 0.0 { Self::ONE } else { Self::ZERO };
        }
        LogValue(self.0 * exponent)
    }

    /// `self + other` via the log-sum-exp identity.
    pub fn plus(self, other: LogValue) -> LogValue {
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        if lo == f64::NEG_INFINITY {
            return LogValue(hi);
        }
        LogValue(hi + (lo - hi).exp().ln_1p())
    }

    /// Stable sum of many terms: shift by the maximum, add in linear space.
    pub fn sum_slice(terms: &[LogValue]) -> LogValue {
        let max = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        if max == f64::INFINITY {
            return LogValue(f64::INFINITY);
        }
        let mut acc = 0.0f64;
        let mut comp = 0.0f64;
        for t in terms {
            let y = (t.0 - max).exp() - comp;
            let s = acc + y;
            comp = (s - acc) - y;
            acc = s;
        }
        LogValue(max + acc.ln())
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        LogValue(self.0 + rhs.0)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        assert!(!rhs.is_zero(), "LogValue division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        LogValue(self.0 - rhs.0)
    }
}

impl Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        let terms: Vec<LogValue> = iter.collect();
        LogValue::sum_slice(&terms)
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogValue(ln = {})", self.0)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let log10 = self.log10();
        let exp = log10.floor();
        write!(f, "{:.6}e{}", 10f64.powf(log10 - exp), exp as i64)
    }
}

// Serialized as the natural log; zero becomes `null`.
impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_some(&self.0)
        } else {
            s.serialize_none()
        }
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ln: Option<f64> = Option::deserialize(d)?;
        Ok(ln.map(LogValue).unwrap_or(LogValue::ZERO))
    }
}

/// Natural log of an arbitrary-precision integer, accurate to ~1 ulp of the
/// mantissa. `ln 0 = -inf`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 leading bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one_behave() {
        let x = LogValue::from_f64(3.0);
        assert_eq!(x * LogValue::ZERO, LogValue::ZERO);
        assert_eq!(x * LogValue::ONE, x);
        assert_eq!(x.plus(LogValue::ZERO), x);
        assert!(LogValue::ZERO < LogValue::ONE);
        assert_eq!(LogValue::sum_slice(&[]), LogValue::ZERO);
    }

    #[test]
    fn large_biguint_logs() {
        let x = BigUint::from(3u32).pow(5000);
        let expected = 5000.0 * 3f64.ln();
        assert!((ln_biguint(&x) - expected).abs() < 1e-10 * expected);
    }

    proptest! {
        #[test]
        fn log_sum_matches_exact_rational_sum(xs in proptest::collection::vec((1u64..1_000_000, 1u64..1_000), 1..20)) {
            let mut exact = BigRational::zero();
            let mut logs = Vec::new();
            for &(num, den) in &xs {
                let r = BigRational::new(BigInt::from(num), BigInt::from(den));
                logs.push(LogValue::from_ratio(&r));
                exact += r;
            }
            let via_logs: LogValue = logs.iter().copied().sum();
            let pairwise = logs.iter().copied().fold(LogValue::ZERO, LogValue::plus);
            let truth = LogValue::from_ratio(&exact);
            prop_assert!((via_logs.ln() - truth.ln()).abs() < 1e-12);
            prop_assert!((pairwise.ln() - truth.ln()).abs() < 1e-12);
        }

        #[test]
        fn ordering_is_monotone_in_magnitude(a in 0.0f64..1e6, b in 0.0f64..1e6) {
            let (la, lb) = (LogValue::from_f64(a), LogValue::from_f64(b));
            prop_assert_eq!(a.partial_cmp(&b), la.partial_cmp(&lb));
        }
    }
}
