//! Recovering the type and base point of a cone from membership queries.
//!
//! An affine member `g` with `s != 0` has a rational fixed point `f`, and
//! `rho(g)(x) - x = (n^-s - 1)(x - f)`. For a cone pointing right (`a` is a
//! member), members with slope below 1 must have `f` at or right of the base
//! point and members with slope above 1 must have `f` at or left of it, so the
//! fixed points of the queried members squeeze the base point from both sides.
//! A cone pointing left mirrors this.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{ConeDescriptor, ConeOracle, ConeTag, Membership, Pm};
use crate::action::{act_rat, fixed_point};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::numeric::{pow_n, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identification {
    /// Every tag the answers leave open, sorted.
    pub tags: Vec<ConeTag>,
    /// Largest fixed point known to lie at or left of the base point.
    pub lower: Option<Rat>,
    /// Smallest fixed point known to lie at or right of the base point.
    pub upper: Option<Rat>,
    /// `[lower, upper]` rounded outward to the grid `n^-precision`.
    pub interval: Option<(Rat, Rat)>,
    /// Set when a bracket endpoint is held in place by a member fixing it.
    pub exact_base: Option<Rat>,
    pub queries: usize,
}

/// Which side of the base point a rational was placed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutSide {
    Left,
    Right,
    Unplaced,
}

/// The members seen so far, used to place rationals in the left or right cut.
pub struct CutEnumerator {
    orientation: Pm,
    members: Vec<GroupElement>,
}

impl CutEnumerator {
    pub fn new(orientation: Pm, members: Vec<GroupElement>) -> Self {
        CutEnumerator { orientation, members }
    }

    /// For a right-pointing cone, `q` is right of the base point when some
    /// member with `s > 0` has `rho(g)(q) <= q`, and left of it when some member
    /// with `s <= 0` does. Left-pointing cones swap the slope condition and the
    /// direction of the comparison.
    pub fn classify(&self, q: &Rat) -> CutSide {
        let mut left = false;
        let mut right = false;
        for g in &self.members {
            let moved = act_rat(g, q);
            match self.orientation {
                Pm::Plus if moved <= *q => {
                    if g.s() > 0 {
                        right = true;
                    } else {
                        left = true;
                    }
                }
                Pm::Minus if moved >= *q => {
                    if g.s() < 0 {
                        right = true;
                    } else {
                        left = true;
                    }
                }
                _ => {}
            }
        }
        match (left, right) {
            (true, false) => CutSide::Left,
            (false, true) => CutSide::Right,
            // both can only happen at a rational base point fixed by members on each side
            (true, true) => CutSide::Unplaced,
            (false, false) => CutSide::Unplaced,
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Bracket {
    lower: Option<Rat>,
    upper: Option<Rat>,
}

impl Bracket {
    fn push(&mut self, orientation: Pm, g: &GroupElement) {
        let f = fixed_point(g).expect("s != 0");
        let bounds_above = (g.s() > 0) == (orientation == Pm::Plus);
        if bounds_above {
            if self.upper.as_ref().is_none_or(|u| f < *u) {
                self.upper = Some(f);
            }
        } else if self.lower.as_ref().is_none_or(|l| f > *l) {
            self.lower = Some(f);
        }
    }
}

fn grid_floor(x: &Rat, n: u32, precision: u32) -> Rat {
    let den = pow_n(n, precision);
    let y = x * Rat::from_integer(den.clone());
    Rat::new(y.numer().div_floor(y.denom()), den)
}

fn grid_ceil(x: &Rat, n: u32, precision: u32) -> Rat {
    let den = pow_n(n, precision);
    let y = x * Rat::from_integer(den.clone());
    let c: BigInt = y.numer().div_ceil(y.denom());
    Rat::new(c, den)
}

/// Queries `oracle` on the ball of radius `radius` and narrows down its type
/// and base point.
///
/// A bracket endpoint is reported as the exact base when it has not moved
/// since half the radius while the other endpoint kept tightening; irrational
/// base points are approached from both sides, rational ones get stuck on the
/// side their stabilizer pins. Bi-orderings are reported alone when they agree
/// with every answer.
pub fn identify<O: ConeOracle + ?Sized>(
    oracle: &O,
    group: Group,
    radius: usize,
    precision: u32,
) -> Result<Identification> {
    let n = group.n();
    let ball = group.ball(radius);
    let answers: Vec<Membership> = ball
        .iter()
        .map(|g| if g.is_identity() { Membership::No } else { oracle.query(g) })
        .collect();
    let queries = ball.len() - 1;

    for (i, g) in ball.iter().enumerate() {
        if g.is_identity() {
            continue;
        }
        let j = ball.position(&g.inv()).expect("ball closed under inverses");
        let (x, y) = (answers[i], answers[j]);
        if x != Membership::Unknown && y != Membership::Unknown && x == y {
            return Err(Error::InconsistentOracle(format!(
                "{g} and its inverse are {}",
                if x.is_yes() { "both members" } else { "both non-members" }
            )));
        }
    }

    if radius == 0 {
        return Ok(Identification {
            tags: ConeTag::ALL.to_vec(),
            lower: None,
            upper: None,
            interval: None,
            exact_base: None,
            queries,
        });
    }

    let decided = || {
        ball.iter()
            .zip(&answers)
            .filter(|(g, m)| !g.is_identity() && **m != Membership::Unknown)
    };
    let mut inf_tags = Vec::new();
    for t in ConeTag::ALL {
        if let ConeTag::Inf(x, y) = t {
            let c = ConeDescriptor::inf(x, y);
            if decided().all(|(g, m)| c.member(g) == *m) {
                inf_tags.push(t);
            }
        }
    }
    if !inf_tags.is_empty() {
        return Ok(Identification {
            tags: inf_tags,
            lower: None,
            upper: None,
            interval: None,
            exact_base: None,
            queries,
        });
    }

    let orientation = if answers[ball.position(&group.a()).expect("radius >= 1")].is_yes() {
        Pm::Plus
    } else {
        Pm::Minus
    };

    // brackets built from members of word length <= l, for every l
    let mut by_length: Vec<Bracket> = vec![Bracket::default(); radius + 1];
    for (i, g) in ball.iter().enumerate() {
        if answers[i] != Membership::Yes || g.s() == 0 {
            continue;
        }
        by_length[ball.word_length(i)].push(orientation, g);
    }
    for l in 1..=radius {
        let prev = by_length[l - 1].clone();
        for f in prev.lower.iter() {
            if by_length[l].lower.as_ref().is_none_or(|x| f > x) {
                by_length[l].lower = Some(f.clone());
            }
        }
        for f in prev.upper.iter() {
            if by_length[l].upper.as_ref().is_none_or(|x| f < x) {
                by_length[l].upper = Some(f.clone());
            }
        }
    }
    let full = by_length[radius].clone();
    let (Some(lower), Some(upper)) = (full.lower.clone(), full.upper.clone()) else {
        return Err(Error::InconsistentOracle(
            "answers fit no bi-ordering yet bound the base point on one side only".into(),
        ));
    };
    if lower > upper {
        return Err(Error::InconsistentOracle(format!(
            "fixed-point bracket is empty: {lower} > {upper}"
        )));
    }

    let half = by_length[radius.div_ceil(2)].clone();
    let stuck = |now: &Option<Rat>, then: &Option<Rat>| now.is_some() && now == then;
    let lower_pinned = stuck(&full.lower, &half.lower) && full.upper != half.upper;
    let upper_pinned = stuck(&full.upper, &half.upper) && full.lower != half.lower;

    // Q at a pinned lower endpoint: its stabilizer member bounds from below,
    // which for a right-pointing cone means slope above 1, i.e. second sign +.
    let mut tags = Vec::new();
    let mut exact = Vec::new();
    if lower_pinned || lower == upper {
        tags.push(ConeTag::Q(orientation, orientation));
        exact.push(lower.clone());
    }
    if upper_pinned || lower == upper {
        tags.push(ConeTag::Q(orientation, orientation.flip()));
        exact.push(upper.clone());
    }
    if tags.is_empty() {
        tags.push(ConeTag::P(orientation));
    }
    tags.sort();
    tags.dedup();
    exact.dedup();

    let exact_base = match exact.as_slice() {
        [f] => Some(f.clone()),
        _ => None,
    };
    let interval = match &exact_base {
        Some(f) => Some((f.clone(), f.clone())),
        None => Some((grid_floor(&lower, n, precision), grid_ceil(&upper, n, precision))),
    };
    Ok(Identification {
        tags,
        lower: Some(lower),
        upper: Some(upper),
        interval,
        exact_base,
        queries,
    })
}

impl Identification {
    pub fn width(&self) -> Option<Rat> {
        self.interval.as_ref().map(|(lo, hi)| hi - lo)
    }

    pub fn contains(&self, x: &crate::reals::BasePoint) -> Option<bool> {
        use crate::reals::{compare_to_rat, Sign};
        let (lo, hi) = self.interval.as_ref()?;
        let above = compare_to_rat(x, lo);
        let below = compare_to_rat(x, hi);
        Some(above != Sign::Negative && below != Sign::Positive && above != Sign::Unknown && below != Sign::Unknown)
    }
}

/// Orders rationals so the tightest placed grid points can be compared with
/// the bracket; used by tests and the CLI report.
pub fn cut_extremes(cuts: &CutEnumerator, grid: &[Rat]) -> (Option<Rat>, Option<Rat>) {
    let mut left: Option<Rat> = None;
    let mut right: Option<Rat> = None;
    for q in grid {
        match cuts.classify(q) {
            CutSide::Left => {
                if left.as_ref().is_none_or(|l| q.cmp(l) == Ordering::Greater) {
                    left = Some(q.clone());
                }
            }
            CutSide::Right => {
                if right.as_ref().is_none_or(|r| q.cmp(r) == Ordering::Less) {
                    right = Some(q.clone());
                }
            }
            CutSide::Unplaced => {}
        }
    }
    (left, right)
}
