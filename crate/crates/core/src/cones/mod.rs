//! The ten families of positive cones on `BS(1,n)`.
//!
//! * `Pinf**`: the four bi-orderings read off the signs of `s`, then `r`.
//! * `P+`, `P-`: points moved right (left) of an irrational base point.
//! * `Q**`: points moved right (left) of a rational base point, with elements
//!   fixing it ordered by the side they move `eps + 1` to.

mod check;
mod identify;

pub use check::{cone_axioms_check, AxiomReport, Violation};
pub use identify::{cut_extremes, identify, CutEnumerator, CutSide, Identification};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::action::image;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::reals::{sign_affine_form, BasePoint, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Membership {
    fn from(b: bool) -> Self {
        if b {
            Membership::Yes
        } else {
            Membership::No
        }
    }
}

impl Membership {
    pub fn is_yes(self) -> bool {
        self == Membership::Yes
    }
}

/// A `+`/`-` decoration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pm {
    Plus,
    Minus,
}

impl Pm {
    pub fn flip(self) -> Pm {
        match self {
            Pm::Plus => Pm::Minus,
            Pm::Minus => Pm::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pm::Plus => '+',
            Pm::Minus => '-',
        }
    }

    fn parse(c: char) -> Option<Pm> {
        match c {
            '+' => Some(Pm::Plus),
            '-' => Some(Pm::Minus),
            _ => None,
        }
    }

    fn sign(self) -> Sign {
        match self {
            Pm::Plus => Sign::Positive,
            Pm::Minus => Sign::Negative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConeTag {
    /// Decorations are the required signs of `s`, then of `r` when `s = 0`.
    Inf(Pm, Pm),
    /// Irrational base point.
    P(Pm),
    /// Rational base point; the second decoration orders its stabilizer.
    Q(Pm, Pm),
}

impl ConeTag {
    pub const ALL: [ConeTag; 10] = [
        ConeTag::Inf(Pm::Plus, Pm::Plus),
        ConeTag::Inf(Pm::Plus, Pm::Minus),
        ConeTag::Inf(Pm::Minus, Pm::Plus),
        ConeTag::Inf(Pm::Minus, Pm::Minus),
        ConeTag::P(Pm::Plus),
        ConeTag::P(Pm::Minus),
        ConeTag::Q(Pm::Plus, Pm::Plus),
        ConeTag::Q(Pm::Plus, Pm::Minus),
        ConeTag::Q(Pm::Minus, Pm::Plus),
        ConeTag::Q(Pm::Minus, Pm::Minus),
    ];

    pub fn reversed(self) -> ConeTag {
        match self {
            ConeTag::Inf(x, y) => ConeTag::Inf(x.flip(), y.flip()),
            ConeTag::P(x) => ConeTag::P(x.flip()),
            ConeTag::Q(x, y) => ConeTag::Q(x.flip(), y.flip()),
        }
    }

    pub fn needs_base(self) -> bool {
        !matches!(self, ConeTag::Inf(..))
    }
}

impl fmt::Display for ConeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeTag::Inf(x, y) => write!(f, "Pinf{}{}", x.symbol(), y.symbol()),
            ConeTag::P(x) => write!(f, "P{}", x.symbol()),
            ConeTag::Q(x, y) => write!(f, "Q{}{}", x.symbol(), y.symbol()),
        }
    }
}

impl FromStr for ConeTag {
    type Err = Error;

    /// Accepts `Pinf++`, `P∞++`, `P+`, `Q+-`, ...
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownTag(s.to_string());
        let t = s.trim();
        let (head, signs) = if let Some(rest) = t.strip_prefix("Pinf").or_else(|| t.strip_prefix("P∞")) {
            ("inf", rest)
        } else if let Some(rest) = t.strip_prefix('P') {
            ("p", rest)
        } else if let Some(rest) = t.strip_prefix('Q') {
            ("q", rest)
        } else {
            return Err(bad());
        };
        let signs: Vec<Pm> = signs.chars().map(Pm::parse).collect::<Option<_>>().ok_or_else(bad)?;
        match (head, signs.as_slice()) {
            ("inf", [x, y]) => Ok(ConeTag::Inf(*x, *y)),
            ("p", [x]) => Ok(ConeTag::P(*x)),
            ("q", [x, y]) => Ok(ConeTag::Q(*x, *y)),
            _ => Err(bad()),
        }
    }
}

/// A cone type together with its base point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeDescriptor {
    tag: ConeTag,
    base: Option<BasePoint>,
}

impl ConeDescriptor {
    pub fn new(tag: ConeTag, base: Option<BasePoint>) -> Result<Self> {
        let ok = match (tag, &base) {
            (ConeTag::Inf(..), None) => true,
            (ConeTag::P(_), Some(b)) => b.is_irrational(),
            (ConeTag::Q(..), Some(b)) => b.is_rational(),
            _ => false,
        };
        if !ok {
            return Err(Error::TagBaseMismatch {
                tag: tag.to_string(),
                base: base.map_or_else(|| "none".to_string(), |b| b.to_string()),
            });
        }
        Ok(ConeDescriptor { tag, base })
    }

    pub fn inf(s_sign: Pm, r_sign: Pm) -> Self {
        ConeDescriptor {
            tag: ConeTag::Inf(s_sign, r_sign),
            base: None,
        }
    }

    pub fn tag(&self) -> ConeTag {
        self.tag
    }

    pub fn base(&self) -> Option<&BasePoint> {
        self.base.as_ref()
    }

    /// Membership of `g`. The identity is never a member.
    pub fn member(&self, g: &GroupElement) -> Membership {
        if g.is_identity() {
            return Membership::No;
        }
        match (self.tag, &self.base) {
            (ConeTag::Inf(x, y), _) => {
                let want = if g.s() != 0 {
                    (g.s() > 0, x == Pm::Plus)
                } else {
                    (g.r().signum() == Ordering::Greater, y == Pm::Plus)
                };
                Membership::from(want.0 == want.1)
            }
            (ConeTag::P(x), Some(eps)) => match sign_affine_form(eps, g) {
                Sign::Unknown => Membership::Unknown,
                sign => Membership::from(sign == x.sign()),
            },
            (ConeTag::Q(x, y), Some(eps)) => match sign_affine_form(eps, g) {
                Sign::Unknown => Membership::Unknown,
                // fixed: rho(g)(eps + 1) > eps + 1 exactly when the slope n^-s exceeds 1
                Sign::Zero => Membership::from((g.s() < 0) == (y == Pm::Plus)),
                sign => Membership::from(sign == x.sign()),
            },
            _ => unreachable!("validated at construction"),
        }
    }

    /// The cone of the reversed ordering.
    pub fn reverse(&self) -> ConeDescriptor {
        ConeDescriptor {
            tag: self.tag.reversed(),
            base: self.base.clone(),
        }
    }

    /// `g(P) = g P g^-1`: the bi-orderings are fixed, every other cone
    /// keeps its type and moves its base point to `rho(g)(eps)`.
    pub fn conjugate(&self, g: &GroupElement) -> ConeDescriptor {
        ConeDescriptor {
            tag: self.tag,
            base: self.base.as_ref().map(|eps| image(g, eps)),
        }
    }

    /// `g < h` iff `g^-1 h` is in the cone; `None` if that membership is unknown.
    pub fn order_compare(&self, g: &GroupElement, h: &GroupElement) -> Option<Ordering> {
        if g == h {
            return Some(Ordering::Equal);
        }
        match self.member(&g.inv().mul(h)) {
            Membership::Yes => Some(Ordering::Less),
            Membership::No => Some(Ordering::Greater),
            Membership::Unknown => None,
        }
    }
}

impl fmt::Display for ConeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            None => write!(f, "{}", self.tag),
            Some(b) => write!(f, "{}[{}]", self.tag, b),
        }
    }
}

/// A black-box membership test.
pub trait ConeOracle {
    fn query(&self, g: &GroupElement) -> Membership;
}

impl ConeOracle for ConeDescriptor {
    fn query(&self, g: &GroupElement) -> Membership {
        self.member(g)
    }
}

/// Adapts a closure into an oracle.
pub struct FnOracle<F>(pub F);

impl<F: Fn(&GroupElement) -> Membership> ConeOracle for FnOracle<F> {
    fn query(&self, g: &GroupElement) -> Membership {
        (self.0)(g)
    }
}

/// Membership in the cone induced by the action and a sequence of points:
/// decided at the first point `g` moves, by the direction it moves it.
pub fn cone_from_action(points: &[BasePoint], g: &GroupElement) -> Result<Membership> {
    if g.is_identity() {
        return Ok(Membership::No);
    }
    for x in points {
        match sign_affine_form(x, g) {
            Sign::Zero => continue,
            Sign::Positive => return Ok(Membership::Yes),
            Sign::Negative => return Ok(Membership::No),
            Sign::Unknown => return Ok(Membership::Unknown),
        }
    }
    Err(Error::InsufficientPoints(g.to_string()))
}
