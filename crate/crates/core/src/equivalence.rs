//! Orbit equivalence of the affine action, reduced to tail equivalence of
//! base-`n` digit sequences of fractional parts.
//!
//! If `n^q y = n^p x + t` with `t` an integer, the expansions of `{x}` and
//! `{y}` agree after dropping `p` and `q` digits respectively, and conversely
//! such a shift gives back the group element `a^(t/n^q) b^(q-p)` sending `x`
//! to `y`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::action::act_rat;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::numeric::{pow_n, NAdic, Rat};
use crate::reals::{digits, rational_expansion, BasePoint};

/// A base-`n` digit sequence: exactly eventually periodic, or a finite prefix of an infinite stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitWord {
    /// `pre period period ...` with a primitive period stored as its
    /// lexicographically least rotation, and the shortest `pre` compatible with that.
    Periodic { pre: Vec<u32>, period: Vec<u32> },
    Prefix(Vec<u32>),
}

impl DigitWord {
    /// Canonical form of `pre period^ω`.
    pub fn periodic(pre: Vec<u32>, period: Vec<u32>) -> DigitWord {
        assert!(!period.is_empty(), "period must be nonempty");
        let mut period = primitive_root(&period).to_vec();
        let mut pre = pre;
        while let (Some(&p), Some(&q)) = (pre.last(), period.last()) {
            if p != q {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        let j = least_rotation(&period);
        pre.extend_from_slice(&period[..j]);
        period.rotate_left(j);
        DigitWord::Periodic { pre, period }
    }

    pub fn digit(&self, i: usize) -> Option<u32> {
        match self {
            DigitWord::Periodic { pre, period } => Some(if i < pre.len() {
                pre[i]
            } else {
                period[(i - pre.len()) % period.len()]
            }),
            DigitWord::Prefix(d) => d.get(i).copied(),
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<u32> {
        (0..len).map_while(|i| self.digit(i)).collect()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DigitWord::Periodic { .. })
    }

    /// Digit text: one ASCII digit per symbol for `n <= 10`, comma separated otherwise.
    pub fn render(digits: &[u32], n: u32) -> String {
        if n <= 10 {
            digits.iter().map(|d| char::from_digit(*d, 10).unwrap()).collect()
        } else {
            digits.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
    }
}

/// Shortest word whose repetition gives `w`.
fn primitive_root(w: &[u32]) -> &[u32] {
    let len = w.len();
    for p in 1..=len {
        if len.is_multiple_of(p) && (p..len).all(|i| w[i] == w[i - p]) {
            return &w[..p];
        }
    }
    w
}

fn least_rotation(w: &[u32]) -> usize {
    (0..w.len())
        .min_by(|&i, &j| {
            let a = w[i..].iter().chain(&w[..i]);
            let b = w[j..].iter().chain(&w[..j]);
            a.cmp(b)
        })
        .unwrap_or(0)
}

/// Shift offsets with `A(p + k) = B(q + k)` for every `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailWitness {
    pub p: usize,
    pub q: usize,
}

impl fmt::Display for TailWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailDecision {
    /// `exact` is false when the witness only matched on finite prefixes.
    Equivalent { witness: TailWitness, exact: bool },
    NotEquivalent,
    Unknown,
}

/// `{x}` in base `n`: exact for rationals, `budget` digits otherwise.
pub fn reduce(x: &BasePoint, n: u32, budget: usize) -> Result<DigitWord> {
    match x {
        BasePoint::Rational(q) => {
            let e = rational_expansion(q, n);
            Ok(DigitWord::periodic(e.pre, e.period))
        }
        _ => Ok(DigitWord::Prefix(digits(x, n, budget)?.digits)),
    }
}

/// Candidate shifts in order of `(p + q, p)`.
fn shifts(max_p: usize, max_q: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=max_p + max_q).flat_map(move |sum| {
        (0..=sum.min(max_p))
            .filter(move |&p| sum - p <= max_q)
            .map(move |p| (p, sum - p))
    })
}

pub fn tail_equivalent(a: &DigitWord, b: &DigitWord) -> TailDecision {
    match (a, b) {
        (DigitWord::Periodic { pre: pa, period: la }, DigitWord::Periodic { pre: pb, period: lb }) => {
            if la != lb {
                return TailDecision::NotEquivalent;
            }
            let l = la.len();
            for (p, q) in shifts(pa.len() + l, pb.len() + l) {
                // once both sides are inside the shared period, one period of agreement suffices
                let span = pa.len().saturating_sub(p).max(pb.len().saturating_sub(q)) + l;
                if (0..span).all(|k| a.digit(p + k) == b.digit(q + k)) {
                    return TailDecision::Equivalent {
                        witness: TailWitness { p, q },
                        exact: true,
                    };
                }
            }
            unreachable!("aligned periods always give a witness")
        }
        _ => {
            let len = match (a, b) {
                (DigitWord::Prefix(x), DigitWord::Prefix(y)) => x.len().min(y.len()),
                (DigitWord::Prefix(x), _) | (_, DigitWord::Prefix(x)) => x.len(),
                _ => unreachable!(),
            };
            let da = a.prefix(len);
            let db = b.prefix(len);
            let budget = len / 4;
            if budget == 0 {
                return TailDecision::Unknown;
            }
            for (p, q) in shifts(budget, budget) {
                let span = (len - p).min(len - q);
                if (0..span).all(|k| da[p + k] == db[q + k]) {
                    return TailDecision::Equivalent {
                        witness: TailWitness { p, q },
                        exact: false,
                    };
                }
            }
            TailDecision::Unknown
        }
    }
}

/// The element `a^(t/n^q) b^(q-p)` with `t = n^q y - n^p x`, which sends `x` to `y`.
pub fn witness_to_group(x: &BasePoint, y: &BasePoint, w: TailWitness, n: u32) -> Result<GroupElement> {
    let (Some(x), Some(y)) = (x.as_rat(), y.as_rat()) else {
        return Err(Error::InvalidWitness("group witnesses need rational points".into()));
    };
    let scale = |e: usize| Rat::from_integer(pow_n(n, e as u32));
    let t = scale(w.q) * y - scale(w.p) * x;
    if !t.is_integer() {
        return Err(Error::InvalidWitness(format!("residual {t} is not an integer for shift {w}")));
    }
    let r = NAdic::from_int(t.to_integer(), n).scale_pow(-(w.q as i64));
    let s = w.q as i64 - w.p as i64;
    Ok(GroupElement::new(r, s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub x: Rat,
    pub y: Rat,
    pub witness: Option<TailWitness>,
    pub reconstructed: Option<GroupElement>,
    pub passed: bool,
}

/// Sends `x` along `g`, checks the two digit words are tail equivalent, and
/// rebuilds an element taking `x` to the image from the shift alone.
pub fn reduction_roundtrip_check(x: &Rat, g: &GroupElement) -> RoundtripReport {
    let n = g.base();
    let y = act_rat(g, x);
    let (px, py) = (BasePoint::Rational(x.clone()), BasePoint::Rational(y.clone()));
    let wa = reduce(&px, n, 0).expect("rationals reduce exactly");
    let wb = reduce(&py, n, 0).expect("rationals reduce exactly");
    let mut report = RoundtripReport {
        x: x.clone(),
        y: y.clone(),
        witness: None,
        reconstructed: None,
        passed: false,
    };
    if let TailDecision::Equivalent { witness, .. } = tail_equivalent(&wa, &wb) {
        report.witness = Some(witness);
        if let Ok(h) = witness_to_group(&px, &py, witness, n) {
            report.passed = act_rat(&h, x) == y;
            report.reconstructed = Some(h);
        }
    }
    report
}

/// Decides orbit equivalence of two rationals through their digit words.
pub fn digit_orbit_equivalent(x: &Rat, y: &Rat, n: u32) -> Option<GroupElement> {
    let (px, py) = (BasePoint::Rational(x.clone()), BasePoint::Rational(y.clone()));
    let wa = reduce(&px, n, 0).ok()?;
    let wb = reduce(&py, n, 0).ok()?;
    match tail_equivalent(&wa, &wb) {
        TailDecision::Equivalent { witness, .. } => witness_to_group(&px, &py, witness, n).ok(),
        _ => None,
    }
}

/// `[lo, lo + n^-k)` from the first `k` digits, lifted by the integer part.
pub fn truncation(int_part: &BigInt, word: &DigitWord, n: u32, k: usize) -> (Rat, Rat) {
    let int = Rat::from_integer(int_part.clone());
    let mut acc = Rat::zero();
    let mut unit = Rat::from_integer(1.into());
    let base = Rat::from_integer(n.into());
    for i in 0..k {
        unit /= &base;
        acc += &unit * Rat::from_integer(word.digit(i).expect("enough digits").into());
    }
    let lo = int + acc;
    let hi = &lo + unit;
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    fn word(x: Rat, n: u32) -> DigitWord {
        reduce(&BasePoint::Rational(x), n, 0).unwrap()
    }

    fn periodic(pre: &[u32], period: &[u32]) -> DigitWord {
        DigitWord::Periodic {
            pre: pre.to_vec(),
            period: period.to_vec(),
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(word(rat(1, 3), 2), periodic(&[], &[0, 1]));
        assert_eq!(word(rat(5, 4), 2), periodic(&[0, 1], &[0]));
        assert_eq!(word(rat(1, 2), 3), periodic(&[], &[1]));
        // 2/3 = 0.1010..., stored with the least rotation "01"
        assert_eq!(word(rat(2, 3), 2), periodic(&[1], &[0, 1]));
    }

    #[test]
    fn canonical_form_is_unique() {
        let w = DigitWord::periodic(vec![0, 1, 0, 1], vec![0, 1, 0, 1]);
        assert_eq!(w, periodic(&[], &[0, 1]));
        let w = DigitWord::periodic(vec![1, 1], vec![1]);
        assert_eq!(w, periodic(&[], &[1]));
        let w = DigitWord::periodic(vec![2], vec![1, 0]);
        assert_eq!(w, periodic(&[2, 1], &[0, 1]));
    }

    #[test]
    fn translation_invariance() {
        for n in [2u32, 3, 10] {
            for (p, q) in [(1, 3), (5, 7), (-2, 9), (3, 8)] {
                for m in -3..=3 {
                    assert_eq!(word(rat(p, q), n), word(rat(p, q) + rat(m, 1), n));
                }
            }
        }
    }

    #[test]
    fn tail_examples() {
        let a = word(rat(1, 3), 2);
        let b = word(rat(2, 3), 2);
        assert_eq!(
            tail_equivalent(&a, &b),
            TailDecision::Equivalent {
                witness: TailWitness { p: 0, q: 1 },
                exact: true
            }
        );
        assert_eq!(
            tail_equivalent(&a, &a),
            TailDecision::Equivalent {
                witness: TailWitness { p: 0, q: 0 },
                exact: true
            }
        );
        assert_eq!(tail_equivalent(&a, &word(rat(1, 5), 2)), TailDecision::NotEquivalent);
    }

    #[test]
    fn witness_examples() {
        let n = 2;
        let (x, y) = (BasePoint::rational(1, 3), BasePoint::rational(2, 3));
        let g = witness_to_group(&x, &y, TailWitness { p: 0, q: 1 }, n).unwrap();
        assert_eq!(act_rat(&g, &rat(1, 3)), rat(2, 3));
        let id = witness_to_group(&x, &x, TailWitness { p: 0, q: 0 }, n).unwrap();
        assert!(id.is_identity());

        let (x, y) = (rat(1, 4), rat(5, 8));
        let TailDecision::Equivalent { witness, .. } = tail_equivalent(&word(x.clone(), 2), &word(y.clone(), 2)) else {
            panic!("1/4 and 5/8 are equivalent");
        };
        let g = witness_to_group(&BasePoint::Rational(x.clone()), &BasePoint::Rational(y.clone()), witness, 2).unwrap();
        assert_eq!(act_rat(&g, &x), y);
        // independent search over small (p, q, t)
        let found = (0..4u32).any(|p| {
            (0..4u32).any(|q| {
                (-8i64..8).any(|t| {
                    Rat::from_integer(pow_n(2, q)) * &y == Rat::from_integer(pow_n(2, p)) * &x + rat(t, 1)
                })
            })
        });
        assert!(found);
    }

    #[test]
    fn invalid_witness_rejected() {
        let r = witness_to_group(&BasePoint::rational(1, 3), &BasePoint::rational(1, 5), TailWitness { p: 0, q: 0 }, 2);
        assert!(matches!(r, Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn roundtrip_examples() {
        let g = Group::new(2).unwrap();
        let r = reduction_roundtrip_check(&rat(1, 3), &g.a());
        assert!(r.passed);
        assert_eq!(r.witness, Some(TailWitness { p: 0, q: 0 }));
        let r = reduction_roundtrip_check(&rat(1, 3), &g.b().pow(2));
        assert!(r.passed);
        assert_eq!(r.witness, Some(TailWitness { p: 0, q: 2 }));
    }

    #[test]
    fn prefix_semidecision() {
        let s2 = reduce(&BasePoint::sqrt(2).unwrap(), 2, 128).unwrap();
        let moved = BasePoint::sqrt(2).unwrap().affine_image(&rat(1, 4), &rat(3, 4));
        let m = reduce(&moved, 2, 128).unwrap();
        match tail_equivalent(&s2, &m) {
            TailDecision::Equivalent { witness, exact } => {
                assert!(!exact);
                assert_eq!(witness, TailWitness { p: 0, q: 2 });
            }
            other => panic!("{other:?}"),
        }
        let s3 = reduce(&BasePoint::sqrt(3).unwrap(), 2, 128).unwrap();
        assert_eq!(tail_equivalent(&s2, &s3), TailDecision::Unknown);
        assert_eq!(tail_equivalent(&DigitWord::Prefix(vec![0, 1]), &s2), TailDecision::Unknown);
    }

    #[test]
    fn render_digits() {
        assert_eq!(DigitWord::render(&[0, 1, 9], 10), "019");
        assert_eq!(DigitWord::render(&[0, 11, 3], 12), "0,11,3");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point() -> impl Strategy<Value = (u32, Rat)> {
            (prop_oneof![Just(2u32), Just(3), Just(10)], -200i64..200, 1i64..=64).prop_map(|(n, p, q)| (n, rat(p, q)))
        }

        proptest! {
            #[test]
            fn roundtrip_rebuilds_an_element((n, x) in point(), w in "[aAbB]{0,6}") {
                let g = Group::new(n as u64).unwrap().parse_word(&w).unwrap();
                let r = reduction_roundtrip_check(&x, &g);
                prop_assert!(r.passed, "{:?}", r);
            }

            #[test]
            fn canonical_form_ignores_presentation(pre in proptest::collection::vec(0u32..3, 0..5),
                                                   period in proptest::collection::vec(0u32..3, 1..5),
                                                   extra in 0usize..6, reps in 1usize..3) {
                let base = DigitWord::periodic(pre.clone(), period.clone());
                // unroll some of the periodic part into the preperiod and repeat the period
                let mut longer = pre.clone();
                for i in 0..extra {
                    longer.push(period[i % period.len()]);
                }
                let shift = extra % period.len();
                let mut rotated = period.clone();
                rotated.rotate_left(shift);
                let rotated = rotated.repeat(reps);
                prop_assert_eq!(DigitWord::periodic(longer, rotated), base.clone());
                let word = base;
                for i in 0..(pre.len() + 3 * period.len()) {
                    let want = if i < pre.len() { pre[i] } else { period[(i - pre.len()) % period.len()] };
                    prop_assert_eq!(word.digit(i), Some(want));
                }
            }

            #[test]
            fn integer_shifts_keep_the_word((n, x) in point(), m in -50i64..50) {
                prop_assert_eq!(word(x.clone(), n), word(x + rat(m, 1), n));
            }
        }
    }
}
