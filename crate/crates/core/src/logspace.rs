//! Non-negative reals stored as natural logs.

use std::fmt;
use std::ops::{Div, Mul};

use serde::{Serialize, Serializer};

/// `ln(w)` for a weight `w >= 0`; `-inf` is zero. Never NaN.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct LogWeight(f64);

impl LogWeight {
    pub const ZERO: LogWeight = LogWeight(f64::NEG_INFINITY);
    pub const ONE: LogWeight = LogWeight(0.0);

    pub fn from_ln(ln: f64) -> Self {
        assert!(
            !ln.is_nan() && ln != f64::INFINITY,
            "invalid log weight {ln}"
        );
        LogWeight(ln)
    }

    pub fn from_linear(w: f64) -> Self {
        assert!(w >= 0.0, "negative weight {w}");
        LogWeight::from_ln(w.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn linear(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `ln(a + b)`.
    pub fn plus(self, other: LogWeight) -> LogWeight {
        LogWeight(log_add(self.0, other.0))
    }

    /// Multiply by `k` copies of an integer factor, e.g. `4^k`.
    pub fn times_count(self, count: usize) -> LogWeight {
        if count == 0 {
            LogWeight::ZERO
        } else {
            LogWeight(self.0 + (count as f64).ln())
        }
    }
}

impl Mul for LogWeight {
    type Output = LogWeight;

    fn mul(self, rhs: LogWeight) -> LogWeight {
        if self.is_zero() || rhs.is_zero() {
            LogWeight::ZERO
        } else {
            LogWeight(self.0 + rhs.0)
        }
    }
}

impl Div for LogWeight {
    type Output = LogWeight;

    fn div(self, rhs: LogWeight) -> LogWeight {
        assert!(!rhs.is_zero(), "division by a zero weight");
        if self.is_zero() {
            LogWeight::ZERO
        } else {
            LogWeight(self.0 - rhs.0)
        }
    }
}

impl std::iter::Sum for LogWeight {
    fn sum<I: Iterator<Item = LogWeight>>(iter: I) -> LogWeight {
        let mut acc = LogSum::new();
        for w in iter {
            acc.add(w.0);
        }
        acc.total()
    }
}

impl std::iter::Product for LogWeight {
    fn product<I: Iterator<Item = LogWeight>>(iter: I) -> LogWeight {
        iter.fold(LogWeight::ONE, Mul::mul)
    }
}

impl fmt::Display for LogWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for LogWeight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_zero() {
            s.serialize_none()
        } else {
            s.serialize_f64(self.0)
        }
    }
}

/// `ln(e^a + e^b)`.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Streaming log-sum-exp that rescales when a larger term arrives.
#[derive(Clone, Copy, Debug)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl LogSum {
    pub fn new() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    pub fn total(&self) -> LogWeight {
        if self.max == f64::NEG_INFINITY {
            LogWeight::ZERO
        } else {
            LogWeight(self.max + self.scaled.ln())
        }
    }
}

impl Default for LogSum {
    fn default() -> Self {
        LogSum::new()
    }
}
