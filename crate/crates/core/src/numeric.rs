//! Exact arithmetic in `Z[1/n]` and `Q`.
//!
//! An [`NAdic`] stores `m / n^k` with the smallest possible `k`. For composite
//! bases this is the only canonical form available: `5/10` can not be written
//! with a mantissa coprime to 10, but its minimal exponent is still unique.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rationals are always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Checks that `n` is a valid base and narrows it.
pub fn check_base(n: u64) -> Result<u32> {
    if n < 2 || n > u32::MAX as u64 {
        return Err(Error::InvalidBase(n));
    }
    Ok(n as u32)
}

pub fn pow_n(n: u32, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(n), k as usize)
}

/// `n^e` as a rational; `e` may be negative.
pub fn rat_pow_n(n: u32, e: i64) -> Rat {
    let p = pow_n(n, e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(p)
    } else {
        Rat::new(BigInt::one(), p)
    }
}

/// Largest divisor of `q` that shares no prime factor with `n`.
pub fn n_coprime_part(q: &BigInt, n: u32) -> BigInt {
    let mut q = q.abs();
    let n = BigInt::from(n);
    loop {
        let g = q.gcd(&n);
        if g.is_one() {
            return q;
        }
        while (&q % &g).is_zero() {
            q /= &g;
        }
    }
}

/// Multiplicative order of `n` modulo `m`; `m` must be coprime to `n`.
/// The order modulo 1 is 1.
pub fn multiplicative_order(n: u32, m: &BigInt) -> u64 {
    assert!(m.is_positive(), "modulus must be positive");
    if m.is_one() {
        return 1;
    }
    let n_big = BigInt::from(n);
    assert!(n_big.gcd(m).is_one(), "{n} is not a unit modulo {m}");
    let start = &n_big % m;
    let mut acc = start.clone();
    let mut order = 1u64;
    while !acc.is_one() {
        acc = (acc * &n_big) % m;
        order += 1;
    }
    order
}

/// Parses `p`, `p/q` or `p/q^e` into a rational.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let bad = |msg: &str| Error::Syntax {
        pos: 0,
        msg: format!("{msg} in rational {text:?}"),
    };
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (text, None),
    };
    let p: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let q = match den {
        None => BigInt::one(),
        Some(den) => {
            let (base, exp) = match den.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<u32>().map_err(|_| bad("bad exponent"))?),
                None => (den, 1),
            };
            let base: BigInt = base.parse().map_err(|_| bad("bad denominator"))?;
            num_traits::pow(base, exp as usize)
        }
    };
    if q.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(p, q))
}

pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// An exact element `m / n^k` of `Z[1/n]` in canonical (minimal exponent) form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NAdic {
    m: BigInt,
    k: u32,
    n: u32,
}

impl NAdic {
    /// Builds `m / n^k` and strips factors of `n` until the exponent is minimal.
    pub fn normalize(m: BigInt, k: u32, n: u32) -> Self {
        assert!(n >= 2, "base must be >= 2");
        let mut m = m;
        let mut k = k;
        if m.is_zero() {
            return NAdic { m, k: 0, n };
        }
        let base = BigInt::from(n);
        while k > 0 {
            let (q, r) = m.div_rem(&base);
            if !r.is_zero() {
                break;
            }
            m = q;
            k -= 1;
        }
        NAdic { m, k, n }
    }

    pub fn zero(n: u32) -> Self {
        Self::normalize(BigInt::zero(), 0, n)
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(BigInt::one(), n)
    }

    pub fn from_int(m: impl Into<BigInt>, n: u32) -> Self {
        Self::normalize(m.into(), 0, n)
    }

    /// Converts a rational, returning `None` unless its denominator divides a power of `n`.
    pub fn from_rat(x: &Rat, n: u32) -> Option<Self> {
        let q = x.denom();
        if !n_coprime_part(q, n).is_one() {
            return None;
        }
        // every prime of q divides n, so q | n^k once n^k >= q
        let mut k = 0u32;
        let mut nk = BigInt::one();
        while !(&nk % q).is_zero() {
            nk *= n;
            k += 1;
        }
        let m = x.numer() * (nk / q);
        Some(Self::normalize(m, k, n))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn base(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.k == 0
    }

    pub fn signum(&self) -> Ordering {
        self.m.sign_cmp_zero()
    }

    pub fn abs(&self) -> Self {
        NAdic {
            m: self.m.abs(),
            k: self.k,
            n: self.n,
        }
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(self.m.clone(), pow_n(self.n, self.k))
    }

    /// Approximate value, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.to_rat().to_f64().unwrap_or(f64::NAN)
    }

    /// `self * n^e`.
    pub fn scale_pow(&self, e: i64) -> Self {
        if e >= 0 {
            let e = e as u32;
            if e <= self.k {
                NAdic::normalize(self.m.clone(), self.k - e, self.n)
            } else {
                NAdic::normalize(&self.m * pow_n(self.n, e - self.k), 0, self.n)
            }
        } else {
            NAdic::normalize(self.m.clone(), self.k + e.unsigned_abs() as u32, self.n)
        }
    }

    fn same_base(&self, other: &Self) {
        assert_eq!(
            self.n, other.n,
            "mixed bases: Z[1/{}] and Z[1/{}]",
            self.n, other.n
        );
    }

    /// Mantissas of both operands brought to the common exponent `max(k1, k2)`.
    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        self.same_base(other);
        let k = self.k.max(other.k);
        let a = &self.m * pow_n(self.n, k - self.k);
        let b = &other.m * pow_n(self.n, k - other.k);
        (a, b, k)
    }

    /// Text form `m/n^k`, e.g. `3/2^1`.
    pub fn to_text(&self) -> String {
        format!("{}/{}^{}", self.m, self.n, self.k)
    }

    /// Parses the text form, integers, or any `p/q` whose value lies in `Z[1/n]`.
    pub fn parse(text: &str, n: u32) -> Result<Self> {
        let x = parse_rat(text)?;
        NAdic::from_rat(&x, n).ok_or_else(|| Error::NotInZ1n {
            value: text.trim().to_string(),
            n,
        })
    }
}

trait SignCmp {
    fn sign_cmp_zero(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp_zero(&self) -> Ordering {
        if self.is_negative() {
            Ordering::Less
        } else if self.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Debug for NAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for NAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.m)
        } else {
            write!(f, "{}/{}^{}", self.m, self.n, self.k)
        }
    }
}

impl PartialOrd for NAdic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NAdic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl Add for &NAdic {
    type Output = NAdic;
    fn add(self, rhs: &NAdic) -> NAdic {
        let (a, b, k) = self.aligned(rhs);
        NAdic::normalize(a + b, k, self.n)
    }
}

impl Sub for &NAdic {
    type Output = NAdic;
    fn sub(self, rhs: &NAdic) -> NAdic {
        let (a, b, k) = self.aligned(rhs);
        NAdic::normalize(a - b, k, self.n)
    }
}

impl Mul for &NAdic {
    type Output = NAdic;
    fn mul(self, rhs: &NAdic) -> NAdic {
        self.same_base(rhs);
        NAdic::normalize(&self.m * &rhs.m, self.k + rhs.k, self.n)
    }
}

impl Neg for &NAdic {
    type Output = NAdic;
    fn neg(self) -> NAdic {
        NAdic {
            m: -&self.m,
            k: self.k,
            n: self.n,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for NAdic {
            type Output = NAdic;
            fn $method(self, rhs: NAdic) -> NAdic {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for NAdic {
    type Output = NAdic;
    fn neg(self) -> NAdic {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nadic(m: i64, k: u32, n: u32) -> NAdic {
        NAdic::normalize(BigInt::from(m), k, n)
    }

    fn parts(x: &NAdic) -> (i64, u32) {
        (x.mantissa().to_i64().unwrap(), x.exponent())
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(parts(&nadic(6, 1, 2)), (3, 0));
        assert_eq!(parts(&nadic(5, 1, 10)), (5, 1));
        assert_eq!(parts(&nadic(0, 7, 3)), (0, 0));
        assert_eq!(parts(&nadic(100, 3, 10)), (1, 1));
    }

    #[test]
    fn arithmetic_examples() {
        let half = nadic(1, 1, 2);
        let quarter = nadic(1, 2, 2);
        assert_eq!(parts(&(&half + &quarter)), (3, 2));
        assert_eq!(parts(&(&nadic(3, 1, 2) * &nadic(2, 0, 2))), (3, 0));
        assert_eq!(nadic(3, 2, 2).cmp(&nadic(1, 0, 2)), Ordering::Less);
        assert_eq!(parts(&-&half), (-1, 1));
    }

    #[test]
    fn scale_pow_examples() {
        assert_eq!(parts(&nadic(3, 2, 2).scale_pow(2)), (3, 0));
        assert_eq!(parts(&nadic(3, 0, 2).scale_pow(-1)), (3, 1));
        assert_eq!(parts(&nadic(1, 0, 5).scale_pow(3)), (125, 0));
        assert_eq!(parts(&nadic(10, 0, 10).scale_pow(-1)), (1, 0));
    }

    #[test]
    fn composite_base_half() {
        let half = NAdic::parse("1/2", 10).unwrap();
        assert_eq!(parts(&half), (5, 1));
        assert!(NAdic::parse("1/3", 10).is_err());
        assert_eq!(NAdic::parse("3/2^1", 10).unwrap().to_text(), "15/10^1");
    }

    #[test]
    fn text_form() {
        assert_eq!(nadic(3, 1, 2).to_text(), "3/2^1");
        assert_eq!(NAdic::parse("3/2^1", 2).unwrap(), nadic(3, 1, 2));
        assert_eq!(NAdic::parse("-7", 3).unwrap(), nadic(-7, 0, 3));
        assert!(matches!(
            NAdic::parse("1/6", 2),
            Err(Error::NotInZ1n { .. })
        ));
    }

    #[test]
    #[should_panic(expected = "mixed bases")]
    fn mixing_bases_panics() {
        let _ = &nadic(1, 0, 2) + &nadic(1, 0, 3);
    }

    #[test]
    fn order_and_coprime_part() {
        assert_eq!(multiplicative_order(2, &BigInt::from(3)), 2);
        assert_eq!(multiplicative_order(10, &BigInt::from(7)), 6);
        assert_eq!(multiplicative_order(2, &BigInt::from(1)), 1);
        assert_eq!(n_coprime_part(&BigInt::from(12), 2), BigInt::from(3));
        assert_eq!(n_coprime_part(&BigInt::from(60), 10), BigInt::from(3));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb(n: u32) -> impl Strategy<Value = NAdic> {
            (-5000i64..5000, 0u32..6).prop_map(move |(m, k)| nadic(m, k, n))
        }

        fn base() -> impl Strategy<Value = u32> {
            prop_oneof![Just(2u32), Just(3), Just(6), Just(10)]
        }

        proptest! {
            #[test]
            fn add_neg_is_zero((_n, x) in base().prop_flat_map(|n| (Just(n), arb(n)))) {
                let z = &x + &(-&x);
                prop_assert!(z.is_zero());
                prop_assert_eq!(z.exponent(), 0);
            }

            #[test]
            fn ring_laws((x, y, z) in base().prop_flat_map(|n| (arb(n), arb(n), arb(n)))) {
                prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
                prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            }

            #[test]
            fn cmp_matches_cross_multiplication((x, y) in base().prop_flat_map(|n| (arb(n), arb(n)))) {
                let n = x.base();
                let lhs = x.mantissa() * pow_n(n, y.exponent());
                let rhs = y.mantissa() * pow_n(n, x.exponent());
                prop_assert_eq!(x.cmp(&y), lhs.cmp(&rhs));
                prop_assert_eq!(x.cmp(&y), x.to_rat().cmp(&y.to_rat()));
            }

            #[test]
            fn canonical_exponent_is_minimal(x in base().prop_flat_map(arb)) {
                if x.exponent() > 0 {
                    prop_assert!(!(x.mantissa() % BigInt::from(x.base())).is_zero());
                }
                prop_assert_eq!(NAdic::from_rat(&x.to_rat(), x.base()).unwrap(), x.clone());
                prop_assert_eq!(NAdic::parse(&x.to_text(), x.base()).unwrap(), x);
            }
        }
    }
}
