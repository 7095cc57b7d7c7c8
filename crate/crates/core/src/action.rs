//! The affine action `rho(a^r b^s)(x) = n^-s x + r` on the line.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::numeric::{multiplicative_order, n_coprime_part, rat_pow_n, NAdic, Rat};
use crate::reals::BasePoint;

/// `x -> slope * x + intercept` with `slope = n^-s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    slope: Rat,
    intercept: NAdic,
}

impl AffineMap {
    pub fn of(g: &GroupElement) -> Self {
        AffineMap {
            slope: rat_pow_n(g.base(), -g.s()),
            intercept: g.r().clone(),
        }
    }

    pub fn slope(&self) -> &Rat {
        &self.slope
    }

    pub fn intercept(&self) -> &NAdic {
        &self.intercept
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let r = &self.slope * other.intercept.to_rat() + self.intercept.to_rat();
        AffineMap {
            slope: &self.slope * &other.slope,
            intercept: NAdic::from_rat(&r, self.intercept.base()).expect("Z[1/n] is closed"),
        }
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        &self.slope * x + self.intercept.to_rat()
    }
}

pub fn act_rat(g: &GroupElement, x: &Rat) -> Rat {
    AffineMap::of(g).apply(x)
}

pub fn act_nadic(g: &GroupElement, x: &NAdic) -> NAdic {
    &x.scale_pow(-g.s()) + g.r()
}

/// Rational and quadratic points only; streams support sign queries but not evaluation.
pub fn act(g: &GroupElement, x: &BasePoint) -> Result<BasePoint> {
    if let BasePoint::Stream(_) = x {
        return Err(Error::StreamUnsupported("act"));
    }
    Ok(image(g, x))
}

/// `rho(g)(x)` for any point, streams included (as a transformed view).
pub(crate) fn image(g: &GroupElement, x: &BasePoint) -> BasePoint {
    x.affine_image(&rat_pow_n(g.base(), -g.s()), &g.r().to_rat())
}

/// The unique fixed point `r / (1 - n^-s)` of an element with `s != 0`.
pub fn fixed_point(g: &GroupElement) -> Result<Rat> {
    if g.s() == 0 {
        return Err(Error::NoFixedPoint(g.to_string()));
    }
    let one = Rat::one();
    Ok(g.r().to_rat() / (one - rat_pow_n(g.base(), -g.s())))
}

/// The generator `a^r b^-s` of the stabilizer of `x`, with `s >= 1` minimal.
///
/// `s` is the order of `n` modulo the `n`-coprime part of the denominator
/// of `x`, and `r = -(n^s - 1) x`, so that `n^s x + r = x`.
pub fn stabilizer_generator(x: &Rat, n: u32) -> GroupElement {
    let q_prime = n_coprime_part(x.denom(), n);
    let s = multiplicative_order(n, &q_prime) as i64;
    let factor = rat_pow_n(n, s) - Rat::one();
    let r = -(factor * x);
    let r = NAdic::from_rat(&r, n).expect("(n^s - 1) x lies in Z[1/n] by choice of s");
    let g = GroupElement::new(r, -s);
    debug_assert_eq!(&act_rat(&g, x), x);
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitWitness {
    Witness(GroupElement),
    NotEquivalent,
}

/// Finds `g` with `rho(g)(eps) = delta`, for two rationals or two quadratics.
///
/// For rationals the solutions form a coset of the stabilizer; the one with
/// smallest `|s|`, then smallest `|r|`, is returned.
pub fn orbit_witness(eps: &BasePoint, delta: &BasePoint, n: u32) -> Result<OrbitWitness> {
    match (eps, delta) {
        (BasePoint::Rational(x), BasePoint::Rational(y)) => Ok(rational_witness(x, y, n)),
        (BasePoint::Quadratic(x), BasePoint::Quadratic(y)) => {
            if x.d() != y.d() {
                return Ok(OrbitWitness::NotEquivalent);
            }
            let ratio = y.v() / x.v();
            let Some(s) = neg_log_n(&ratio, n) else {
                return Ok(OrbitWitness::NotEquivalent);
            };
            let r = y.u() - rat_pow_n(n, -s) * x.u();
            Ok(match NAdic::from_rat(&r, n) {
                Some(r) => OrbitWitness::Witness(GroupElement::new(r, s)),
                None => OrbitWitness::NotEquivalent,
            })
        }
        (BasePoint::Stream(_), _) | (_, BasePoint::Stream(_)) => Err(Error::StreamUnsupported("orbit_witness")),
        _ => Err(Error::MixedKinds),
    }
}

/// `s` with `x = n^-s`, if any.
fn neg_log_n(x: &Rat, n: u32) -> Option<i64> {
    if !x.is_positive() {
        return None;
    }
    let (num, den) = (x.numer(), x.denom());
    let (big, sign) = if num.is_one() {
        (den, 1i64)
    } else if den.is_one() {
        (num, -1i64)
    } else {
        return None;
    };
    let nb = BigInt::from(n);
    let mut v = big.clone();
    let mut e = 0i64;
    while !v.is_one() {
        let (q, r) = v.div_rem(&nb);
        if !r.is_zero() {
            return None;
        }
        v = q;
        e += 1;
    }
    Some(sign * e)
}

fn rational_witness(x: &Rat, y: &Rat, n: u32) -> OrbitWitness {
    let bx = n_coprime_part(x.denom(), n);
    let by = n_coprime_part(y.denom(), n);
    if bx != by {
        return OrbitWitness::NotEquivalent;
    }
    let ord = multiplicative_order(n, &bx) as i64;
    let solve = |s: i64| NAdic::from_rat(&(y - rat_pow_n(n, -s) * x), n);
    let Some(s0) = (0..ord).find(|&s| solve(s).is_some()) else {
        return OrbitWitness::NotEquivalent;
    };
    let mut candidates = vec![s0];
    if s0 != 0 {
        candidates.push(s0 - ord);
    }
    let best = candidates
        .into_iter()
        .map(|s| (s, solve(s).expect("coset of a solution")))
        .min_by(|(s1, r1), (s2, r2)| {
            s1.abs()
                .cmp(&s2.abs())
                .then_with(|| r1.abs().cmp(&r2.abs()))
                .then_with(|| s1.cmp(s2))
        })
        .expect("nonempty");
    OrbitWitness::Witness(GroupElement::new(best.1, best.0))
}
