//! Exact dyadic rationals `num / 2^exp2`.
//!
//! Every measure and every metric value in the crate is a [`Dyadic`]: the
//! odometer-invariant measure gives each depth-`d` cylinder mass `2^-d`, so
//! nothing else is ever needed.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A dyadic rational in canonical form: `num` is odd, or `num == 0` and
/// `exp2 == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp2: u64,
}

impl Dyadic {
    /// Builds `num / 2^exp2` and reduces it.
    pub fn new(num: impl Into<BigInt>, exp2: u64) -> Self {
        let mut num = num.into();
        if num.is_zero() {
            return Self::zero();
        }
        let twos = num.trailing_zeros().unwrap_or(0).min(exp2);
        num >>= twos;
        Dyadic {
            num,
            exp2: exp2 - twos,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp2: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigInt::one(),
            exp2: 0,
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    /// `2^-k`.
    pub fn pow2_inv(k: u64) -> Self {
        Dyadic {
            num: BigInt::one(),
            exp2: k,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exp2(&self) -> u64 {
        self.exp2
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp2 == 0
    }

    /// The integer value, when this is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.num.clone())
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp2: self.exp2,
        }
    }

    /// Lossy decimal view, for human-readable output only.
    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::NAN);
        let e = i32::try_from(self.exp2).unwrap_or(i32::MAX);
        n * 2f64.powi(-e)
    }

    /// Brings two values to a common exponent, returning the scaled numerators.
    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        let e = self.exp2.max(other.exp2);
        let a = &self.num << (e - self.exp2);
        let b = &other.num << (e - other.exp2);
        (a, b, e)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp2)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `"p/2^k"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<BigInt>().map(Dyadic::from_integer).map_err(|_| bad()),
            Some((p, q)) => {
                let num = p.trim().parse::<BigInt>().map_err(|_| bad())?;
                let exp = q.trim().strip_prefix("2^").ok_or_else(bad)?;
                let exp2 = exp.parse::<u64>().map_err(|_| bad())?;
                Ok(Dyadic::new(num, exp2))
            }
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp2 + rhs.exp2)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp2: self.exp2,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| &acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let x = Dyadic::new(4, 3);
        assert_eq!(x.numerator(), &BigInt::from(1));
        assert_eq!(x.exp2(), 1);
        assert_eq!(Dyadic::new(0, 7).exp2(), 0);
        assert_eq!(Dyadic::new(-12, 2), Dyadic::from_integer(-3));
        assert_eq!(Dyadic::new(6, 0).exp2(), 0);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Dyadic::new(1, 2).to_string(), "1/2^2");
        assert_eq!(Dyadic::new(3, 2).to_string(), "3/2^2");
        assert_eq!(Dyadic::zero().to_string(), "0/2^0");
        assert_eq!(d("6/2^3"), Dyadic::new(3, 2));
        assert_eq!(d("-5"), Dyadic::from_integer(-5));
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("x/2^1".parse::<Dyadic>().is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(d("1/2^1") + d("1/2^2"), d("3/2^2"));
        assert_eq!(d("1/2^1") - d("1/2^1"), Dyadic::zero());
        assert_eq!(d("3/2^2") * d("1/2^1"), d("3/2^3"));
        assert_eq!((-d("3/2^2")).abs(), d("3/2^2"));
        assert!(d("1/2^3") < d("1/2^2"));
        assert!(d("-1/2^1") < Dyadic::zero());
        let total: Dyadic = (1..=10).map(|n| Dyadic::pow2_inv(n + 1)).sum();
        assert_eq!(total, Dyadic::new(1023, 11));
    }

    fn arb() -> impl Strategy<Value = Dyadic> {
        (any::<i64>(), 0u64..80).prop_map(|(n, e)| Dyadic::new(n, e))
    }

    proptest! {
        #[test]
        fn field_laws(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert_eq!(a.to_string().parse::<Dyadic>().unwrap(), a);
        }
    }
}
