//! Base points: exact rationals, quadratic irrationals, and budgeted digit streams.
//!
//! Every query the cones need reduces to the sign of a linear form `c*x + d`
//! with rational `c, d`. Rationals and quadratic irrationals answer exactly by
//! integer casework; streams bracket `x` between digit truncations and give up
//! with [`Sign::Unknown`] once the budget is spent.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::numeric::{format_rat, parse_rat, pow_n, rat_pow_n, Rat};

pub const DEFAULT_BUDGET: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    /// The digit budget ran out while the bracket still straddled zero.
    Unknown,
}

impl Sign {
    pub fn of_rat(x: &Rat) -> Sign {
        if x.is_positive() {
            Sign::Positive
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
            s => s,
        }
    }
}

/// `u + v*sqrt(d)` with `v != 0` and `d > 1` squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    u: Rat,
    v: Rat,
    d: BigInt,
}

impl QuadSurd {
    /// Square factors of `d` are moved into `v`; a perfect square `d` is rejected.
    pub fn new(u: Rat, v: Rat, d: BigInt) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::InvalidBasePoint("quadratic part v must be nonzero".into()));
        }
        if !d.is_positive() {
            return Err(Error::InvalidBasePoint(format!("radicand {d} must be positive")));
        }
        let (outside, inside) = square_split(&d);
        if inside.is_one() {
            return Err(Error::InvalidBasePoint(format!("{d} is a perfect square")));
        }
        Ok(QuadSurd {
            u,
            v: v * Rat::from_integer(outside),
            d: inside,
        })
    }

    pub fn sqrt(d: u64) -> Result<Self> {
        QuadSurd::new(Rat::zero(), Rat::one(), BigInt::from(d))
    }

    pub fn u(&self) -> &Rat {
        &self.u
    }

    pub fn v(&self) -> &Rat {
        &self.v
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// `slope * self + offset`.
    pub fn affine(&self, slope: &Rat, offset: &Rat) -> QuadSurd {
        QuadSurd {
            u: slope * &self.u + offset,
            v: slope * &self.v,
            d: self.d.clone(),
        }
    }

    /// `floor(self * n^i)` by integer square roots.
    pub fn floor_scaled(&self, n: u32, i: u32) -> BigInt {
        let scale = Rat::from_integer(pow_n(n, i));
        let u = &self.u * &scale;
        let v = &self.v * &scale;
        let c = u.denom().lcm(v.denom());
        let a = u.numer() * (&c / u.denom());
        let b = v.numer() * (&c / v.denom());
        // b*sqrt(d) is irrational, so it sits strictly between consecutive integers
        let w = (&b * &b * &self.d).sqrt();
        let floor_y = if b.is_positive() { w } else { -w - 1 };
        (a + floor_y).div_floor(&c)
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        self.u.to_f64().unwrap_or(f64::NAN) + self.v.to_f64().unwrap_or(f64::NAN) * d.sqrt()
    }
}

/// Writes `d = outside^2 * inside` with `inside` squarefree.
fn square_split(d: &BigInt) -> (BigInt, BigInt) {
    let mut inside = d.clone();
    let mut outside = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= inside {
        let sq = &p * &p;
        while (&inside % &sq).is_zero() {
            inside /= &sq;
            outside *= &p;
        }
        p += 1;
    }
    (outside, inside)
}

/// Sign of `a + b*sqrt(d)` for squarefree `d > 1`.
pub fn sign_quadratic(a: &Rat, b: &Rat, d: &BigInt) -> Sign {
    let sa = Sign::of_rat(a);
    let sb = Sign::of_rat(b);
    match (sa, sb) {
        (_, Sign::Zero) => sa,
        (Sign::Zero, _) => sb,
        _ if sa == sb => sa,
        _ => {
            let a2 = a * a;
            let b2d = b * b * Rat::from_integer(d.clone());
            if a2 > b2d {
                sa
            } else {
                sb
            }
        }
    }
}

type DigitFn = dyn Fn(usize) -> u32 + Send + Sync;

/// A real given by its integer part and a base-`n` digit oracle for the
/// fractional part: `int_part + sum_i digit(i) * n^-(i+1)`.
///
/// The oracle is treated as pure and is called at most once per index; the
/// memo behind it is guarded by a mutex, so a stream may be shared across threads.
pub struct DigitStream {
    name: String,
    n: u32,
    int_part: BigInt,
    budget: usize,
    oracle: Box<DigitFn>,
    memo: Mutex<Vec<u32>>,
}

impl fmt::Debug for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitStream")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("int_part", &self.int_part)
            .field("budget", &self.budget)
            .finish()
    }
}

impl DigitStream {
    pub fn from_fn<F>(name: impl Into<String>, n: u32, int_part: BigInt, budget: usize, oracle: F) -> Result<Self>
    where
        F: Fn(usize) -> u32 + Send + Sync + 'static,
    {
        if budget == 0 {
            return Err(Error::InvalidBasePoint("digit budget must be positive".into()));
        }
        Ok(DigitStream {
            name: name.into(),
            n,
            int_part,
            budget,
            oracle: Box::new(oracle),
            memo: Mutex::new(Vec::new()),
        })
    }

    /// Digits of `sqrt(d)`, computed from integer square roots.
    pub fn sqrt(d: u64, n: u32, budget: usize) -> Result<Self> {
        let dd = BigInt::from(d);
        let int_part = dd.sqrt();
        let name = format!("sqrt:{d}");
        DigitStream::from_fn(name, n, int_part, budget, move |i| {
            let hi = (&dd * pow_n(n, 2 * (i as u32 + 1))).sqrt();
            let lo = (&dd * pow_n(n, 2 * i as u32)).sqrt();
            (hi - lo * n).to_u32().expect("digit in range")
        })
    }

    /// `sum_j n^-(j!)`, a Liouville number.
    pub fn liouville(n: u32, budget: usize) -> Result<Self> {
        DigitStream::from_fn("liouville", n, BigInt::zero(), budget, |i| {
            let pos = i + 1;
            let mut f = 1usize;
            let mut j = 1usize;
            while f < pos {
                j += 1;
                f *= j;
            }
            u32::from(f == pos)
        })
    }

    /// The digits of a rational, served as a stream. Sign queries at points
    /// it is compared against exactly will come back unknown.
    pub fn rational(x: Rat, n: u32, budget: usize) -> Result<Self> {
        let digits = rational_expansion(&x, n);
        let int_part = x.numer().div_floor(x.denom());
        let name = format!("rat:{}", format_rat(&x));
        DigitStream::from_fn(name, n, int_part, budget, move |i| digits.digit(i))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> u32 {
        self.n
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn int_part(&self) -> &BigInt {
        &self.int_part
    }

    /// The `i`-th fractional digit (0-based).
    pub fn digit(&self, i: usize) -> Result<u32> {
        if i >= self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        let mut memo = self.memo.lock().expect("digit memo poisoned");
        while memo.len() <= i {
            let j = memo.len();
            let d = (self.oracle)(j);
            assert!(d < self.n, "digit {d} out of range for base {}", self.n);
            memo.push(d);
        }
        Ok(memo[i])
    }

    /// `[lo, hi]` bracketing the value after `k` digits.
    fn bracket(&self, k: usize) -> Result<(Rat, Rat)> {
        let mut acc = self.int_part.clone();
        for i in 0..k {
            acc = acc * self.n + self.digit(i)?;
        }
        let den = pow_n(self.n, k as u32);
        let lo = Rat::new(acc.clone(), den.clone());
        let hi = Rat::new(acc + 1, den);
        Ok((lo, hi))
    }

    fn schedule(&self) -> impl Iterator<Item = usize> {
        let budget = self.budget;
        let mut k = 8usize.min(budget);
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let cur = k;
            if k == budget {
                done = true;
            }
            k = (k * 2).min(budget);
            Some(cur)
        })
    }
}

/// A digit stream seen through an affine change of coordinates `slope*x + offset`.
#[derive(Clone, Debug)]
pub struct StreamPoint {
    source: Arc<DigitStream>,
    slope: Rat,
    offset: Rat,
}

impl StreamPoint {
    pub fn new(source: Arc<DigitStream>) -> Self {
        StreamPoint {
            source,
            slope: Rat::one(),
            offset: Rat::zero(),
        }
    }

    pub fn source(&self) -> &Arc<DigitStream> {
        &self.source
    }

    pub fn slope(&self) -> &Rat {
        &self.slope
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn is_untransformed(&self) -> bool {
        self.slope.is_one() && self.offset.is_zero()
    }

    fn affine(&self, slope: &Rat, offset: &Rat) -> StreamPoint {
        StreamPoint {
            source: self.source.clone(),
            slope: slope * &self.slope,
            offset: slope * &self.offset + offset,
        }
    }

    /// Bracket of the transformed value after `k` source digits.
    fn bracket(&self, k: usize) -> Result<(Rat, Rat)> {
        let (lo, hi) = self.source.bracket(k)?;
        let a = &self.slope * lo + &self.offset;
        let b = &self.slope * hi + &self.offset;
        Ok(if a <= b { (a, b) } else { (b, a) })
    }
}

impl PartialEq for StreamPoint {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.source, &other.source) && self.slope == other.slope && self.offset == other.offset
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasePoint {
    Rational(Rat),
    Quadratic(QuadSurd),
    Stream(StreamPoint),
}

impl BasePoint {
    pub fn rational(p: i64, q: i64) -> Self {
        BasePoint::Rational(Rat::new(p.into(), q.into()))
    }

    pub fn sqrt(d: u64) -> Result<Self> {
        Ok(BasePoint::Quadratic(QuadSurd::sqrt(d)?))
    }

    pub fn stream(source: DigitStream) -> Self {
        BasePoint::Stream(StreamPoint::new(Arc::new(source)))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BasePoint::Rational(_) => "rat",
            BasePoint::Quadratic(_) => "quad",
            BasePoint::Stream(_) => "stream",
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, BasePoint::Rational(_))
    }

    /// True when the point is known to be irrational (quadratic surds, and
    /// streams, which are accepted as irrational on trust).
    pub fn is_irrational(&self) -> bool {
        !self.is_rational()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            BasePoint::Rational(x) => Some(x),
            _ => None,
        }
    }

    /// `slope * self + offset`, defined for every representation.
    pub fn affine_image(&self, slope: &Rat, offset: &Rat) -> BasePoint {
        match self {
            BasePoint::Rational(x) => BasePoint::Rational(slope * x + offset),
            BasePoint::Quadratic(q) => BasePoint::Quadratic(q.affine(slope, offset)),
            BasePoint::Stream(s) => BasePoint::Stream(s.affine(slope, offset)),
        }
    }

    pub fn plus_one(&self) -> BasePoint {
        self.affine_image(&Rat::one(), &Rat::one())
    }

    /// Approximate value, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        match self {
            BasePoint::Rational(x) => x.to_f64().unwrap_or(f64::NAN),
            BasePoint::Quadratic(q) => q.to_f64(),
            BasePoint::Stream(s) => match s.bracket(s.source.budget.min(60)) {
                Ok((lo, _)) => lo.to_f64().unwrap_or(f64::NAN),
                Err(_) => f64::NAN,
            },
        }
    }

    /// Literal syntax: `rat:p/q`, `quad:u,v,d`, or `stream:<name>` where the
    /// name is `sqrt:D`, `liouville` or `rat:p/q`. A bare rational is also accepted.
    pub fn parse_literal(text: &str, n: u32, budget: usize) -> Result<BasePoint> {
        let text = text.trim();
        let bad = |msg: String| Error::InvalidBasePoint(msg);
        if let Some(rest) = text.strip_prefix("rat:") {
            return Ok(BasePoint::Rational(parse_rat(rest)?));
        }
        if let Some(rest) = text.strip_prefix("quad:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(bad(format!("expected quad:u,v,d, got {text:?}")));
            }
            let u = parse_rat(parts[0])?;
            let v = parse_rat(parts[1])?;
            let d: BigInt = parts[2]
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad radicand {:?}", parts[2])))?;
            return Ok(BasePoint::Quadratic(QuadSurd::new(u, v, d)?));
        }
        if let Some(name) = text.strip_prefix("stream:") {
            return Ok(BasePoint::stream(builtin_stream(name, n, budget)?));
        }
        parse_rat(text)
            .map(BasePoint::Rational)
            .map_err(|_| bad(format!("unrecognised base point {text:?}")))
    }
}

/// Looks up a named stream: `sqrt:D`, `liouville`, `rat:p/q`.
pub fn builtin_stream(name: &str, n: u32, budget: usize) -> Result<DigitStream> {
    if let Some(d) = name.strip_prefix("sqrt:") {
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|_| Error::InvalidBasePoint(format!("bad radicand in {name:?}")))?;
        return DigitStream::sqrt(d, n, budget);
    }
    if name == "liouville" {
        return DigitStream::liouville(n, budget);
    }
    if let Some(x) = name.strip_prefix("rat:") {
        return DigitStream::rational(parse_rat(x)?, n, budget);
    }
    Err(Error::InvalidBasePoint(format!("unknown stream {name:?}")))
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Rational(x) => write!(f, "rat:{}", format_rat(x)),
            BasePoint::Quadratic(q) => write!(f, "quad:{},{},{}", format_rat(&q.u), format_rat(&q.v), q.d),
            BasePoint::Stream(s) if s.is_untransformed() => write!(f, "stream:{}", s.source.name),
            BasePoint::Stream(s) => write!(
                f,
                "stream:{}*{}+{}",
                format_rat(&s.slope),
                s.source.name,
                format_rat(&s.offset)
            ),
        }
    }
}

/// Sign of `c*x + d`.
pub fn sign_linear(x: &BasePoint, c: &Rat, d: &Rat) -> Sign {
    match x {
        BasePoint::Rational(x) => Sign::of_rat(&(c * x + d)),
        BasePoint::Quadratic(q) => sign_quadratic(&(c * &q.u + d), &(c * &q.v), &q.d),
        BasePoint::Stream(s) => {
            if c.is_zero() {
                return Sign::of_rat(d);
            }
            for k in s.source.schedule() {
                let Ok((lo, hi)) = s.bracket(k) else {
                    return Sign::Unknown;
                };
                let a = Sign::of_rat(&(c * &lo + d));
                let b = Sign::of_rat(&(c * &hi + d));
                if a == b && a != Sign::Zero {
                    return a;
                }
            }
            Sign::Unknown
        }
    }
}

/// Sign of `rho(g)(eps) - eps = (n^-s - 1) eps + r`.
pub fn sign_affine_form(eps: &BasePoint, g: &GroupElement) -> Sign {
    let c = rat_pow_n(g.base(), -g.s()) - Rat::one();
    sign_linear(eps, &c, &g.r().to_rat())
}

/// Sign of `eps - q`.
pub fn compare_to_rat(eps: &BasePoint, q: &Rat) -> Sign {
    sign_linear(eps, &Rat::one(), &-q)
}

/// An eventually periodic base-`n` digit sequence `pre period period ...`,
/// with minimal preperiod and primitive period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub pre: Vec<u32>,
    pub period: Vec<u32>,
}

impl Expansion {
    pub fn digit(&self, i: usize) -> u32 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }
}

/// Base-`n` expansion of the fractional part of `x` by long division.
pub fn rational_expansion(x: &Rat, n: u32) -> Expansion {
    let q = x.denom().clone();
    let mut rem = x.numer().mod_floor(&q);
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        if let Some(&start) = seen.get(&rem) {
            let period = digits.split_off(start);
            return Expansion { pre: digits, period };
        }
        seen.insert(rem.clone(), digits.len());
        let t = &rem * n;
        let (d, r) = t.div_rem(&q);
        digits.push(d.to_u32().expect("digit below base"));
        rem = r;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digits {
    pub digits: Vec<u32>,
    /// `(preperiod length, period length)` when the expansion is known to be
    /// eventually periodic.
    pub periodicity: Option<(usize, usize)>,
}

/// `floor(x * n^i)`, exact for rationals and quadratics, budgeted for streams.
pub fn floor_scaled(x: &BasePoint, n: u32, i: u32) -> Result<BigInt> {
    match x {
        BasePoint::Rational(x) => {
            let y = x * Rat::from_integer(pow_n(n, i));
            Ok(y.numer().div_floor(y.denom()))
        }
        BasePoint::Quadratic(q) => Ok(q.floor_scaled(n, i)),
        BasePoint::Stream(s) => {
            let scale = Rat::from_integer(pow_n(n, i));
            for k in s.source.schedule() {
                let (lo, hi) = s.bracket(k)?;
                let (lo, hi) = (lo * &scale, hi * &scale);
                let flo = lo.numer().div_floor(lo.denom());
                let fhi = hi.numer().div_floor(hi.denom());
                let hi_is_int = hi.is_integer() && lo != hi;
                if flo == fhi && !hi_is_int {
                    return Ok(flo);
                }
            }
            Err(Error::BudgetExhausted {
                budget: s.source.budget,
            })
        }
    }
}

/// The first `count` base-`n` digits of the fractional part of `x`.
pub fn digits(x: &BasePoint, n: u32, count: usize) -> Result<Digits> {
    match x {
        BasePoint::Rational(q) => {
            let e = rational_expansion(q, n);
            Ok(Digits {
                digits: (0..count).map(|i| e.digit(i)).collect(),
                periodicity: Some((e.pre.len(), e.period.len())),
            })
        }
        BasePoint::Stream(s) if s.is_untransformed() => {
            if s.source.n != n {
                return Err(Error::InvalidBasePoint(format!(
                    "stream {} has base {}, not {n}",
                    s.source.name, s.source.n
                )));
            }
            let digits = (0..count).map(|i| s.source.digit(i)).collect::<Result<_>>()?;
            Ok(Digits {
                digits,
                periodicity: None,
            })
        }
        _ => {
            let mut out = Vec::with_capacity(count);
            let mut prev = floor_scaled(x, n, 0)?;
            for i in 1..=count {
                let cur = floor_scaled(x, n, i as u32)?;
                let d = &cur - &prev * n;
                out.push(d.to_u32().expect("digit below base"));
                prev = cur;
            }
            Ok(Digits {
                digits: out,
                periodicity: None,
            })
        }
    }
}
