use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring tag: the integers or a prime field.
///
/// Coefficients are always stored as [`BigInt`]; over `F_p` they are kept
/// normalised in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Prime(u32),
}

impl Ring {
    /// The prime field `F_p`; rejects non-primes.
    pub fn prime(p: u32) -> Result<Ring> {
        if is_prime(p as u64) {
            Ok(Ring::Prime(p))
        } else {
            Err(Error::NotPrime(p as u64))
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Ring::Integers => 0,
            Ring::Prime(p) => p,
        }
    }

    pub fn reduce(self, c: BigInt) -> BigInt {
        match self {
            Ring::Integers => c,
            Ring::Prime(p) => c.mod_floor(&BigInt::from(p)),
        }
    }

    pub fn reduce_ref(self, c: &BigInt) -> BigInt {
        self.reduce(c.clone())
    }

    pub fn from_i64(self, c: i64) -> BigInt {
        self.reduce(BigInt::from(c))
    }

    pub fn zero(self) -> BigInt {
        BigInt::zero()
    }

    pub fn one(self) -> BigInt {
        self.reduce(BigInt::one())
    }

    pub(crate) fn check_same(self, other: Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// JSON number when it fits in an `i64`, decimal string otherwise.
pub fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_validated() {
        assert!(Ring::prime(2).is_ok());
        assert!(Ring::prime(97).is_ok());
        assert_eq!(Ring::prime(9), Err(Error::NotPrime(9)));
        assert!(Ring::prime(1).is_err());
    }

    #[test]
    fn reduction_is_non_negative() {
        let r = Ring::Prime(5);
        assert_eq!(r.from_i64(-1), BigInt::from(4));
        assert_eq!(r.from_i64(10), BigInt::zero());
        assert_eq!(Ring::Integers.from_i64(-7), BigInt::from(-7));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(30, 15), 155117520);
    }
}

