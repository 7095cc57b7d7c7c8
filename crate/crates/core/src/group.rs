//! `BS(1,n) = <a, b | b^-1 a b = a^n>` in normal form `a^r b^s`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::Result;
use crate::numeric::{check_base, NAdic};
use crate::word;

/// The element `a^r b^s`, with `r` in `Z[1/n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    r: NAdic,
    s: i64,
}

impl GroupElement {
    pub fn new(r: NAdic, s: i64) -> Self {
        GroupElement { r, s }
    }

    pub fn identity(n: u32) -> Self {
        GroupElement::new(NAdic::zero(n), 0)
    }

    pub fn a(n: u32) -> Self {
        GroupElement::new(NAdic::one(n), 0)
    }

    pub fn b(n: u32) -> Self {
        GroupElement::new(NAdic::zero(n), 1)
    }

    /// The translation `a^r`.
    pub fn translation(r: NAdic) -> Self {
        GroupElement::new(r, 0)
    }

    pub fn r(&self) -> &NAdic {
        &self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn base(&self) -> u32 {
        self.r.base()
    }

    pub fn is_identity(&self) -> bool {
        self.s == 0 && self.r.is_zero()
    }

    /// `(r, s)(r', s') = (r + n^-s r', s + s')`, read off by composing the affine maps.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            r: &self.r + &other.r.scale_pow(-self.s),
            s: self.s + other.s,
        }
    }

    pub fn inv(&self) -> GroupElement {
        GroupElement {
            r: -&self.r.scale_pow(self.s),
            s: -self.s,
        }
    }

    pub fn pow(&self, e: i64) -> GroupElement {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = GroupElement::identity(self.base());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 h g`.
    pub fn conjugate_by(&self, g: &GroupElement) -> GroupElement {
        g.inv().mul(self).mul(g)
    }

    /// A word that parses back to this element; empty for the identity.
    pub fn to_word(&self) -> String {
        let mut parts = Vec::new();
        if !self.r.is_zero() {
            if self.r.is_integer() {
                parts.push(format!("a^{}", self.r.mantissa()));
            } else {
                parts.push(format!("a^{{{}}}", self.r.to_text()));
            }
        }
        if self.s != 0 {
            parts.push(format!("b^{}", self.s));
        }
        parts.join(" ")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, s={})", self.r, self.s)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("id")
        } else {
            f.write_str(&self.to_word())
        }
    }
}

/// A fixed `BS(1,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Group {
    n: u32,
}

impl Group {
    pub fn new(n: u64) -> Result<Self> {
        Ok(Group { n: check_base(n)? })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.n)
    }

    pub fn a(&self) -> GroupElement {
        GroupElement::a(self.n)
    }

    pub fn b(&self) -> GroupElement {
        GroupElement::b(self.n)
    }

    /// `a, a^-1, b, b^-1`.
    pub fn generators(&self) -> [GroupElement; 4] {
        [self.a(), self.a().inv(), self.b(), self.b().inv()]
    }

    pub fn parse_word(&self, text: &str) -> Result<GroupElement> {
        word::parse(text, self.n)
    }

    pub fn ball(&self, radius: usize) -> Ball {
        Ball::new(*self, radius)
    }

    /// The fixed enumeration `g_0 = id, g_1, g_2, ...` of the whole group.
    pub fn enumeration(&self) -> Enumeration {
        Enumeration { n: self.n, raw: 0 }
    }

    pub fn enumerate(&self, i: usize) -> GroupElement {
        self.enumeration().nth(i).expect("enumeration is infinite")
    }

    /// Position of `g` in the raw pairing sequence. The index of `g` in
    /// [`Group::enumeration`] is at most this.
    pub fn raw_index(&self, g: &GroupElement) -> Option<u128> {
        let w = zigzag_index(g.r().mantissa())?;
        let inner = cantor_pair(w, g.r().exponent() as u128)?;
        let s = zigzag_index(&BigInt::from(g.s()))?;
        cantor_pair(inner, s)
    }
}

/// All products of at most `radius` generators, deduplicated, sorted by
/// (first word length, s, r).
#[derive(Clone, Debug)]
pub struct Ball {
    radius: usize,
    elements: Vec<GroupElement>,
    lengths: Vec<usize>,
    index: HashMap<GroupElement, usize>,
}

impl Ball {
    fn new(group: Group, radius: usize) -> Self {
        let gens = group.generators();
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut layers: Vec<Vec<GroupElement>> = vec![vec![group.identity()]];
        seen.insert(group.identity());
        for _ in 0..radius {
            let mut next = Vec::new();
            for g in layers.last().unwrap() {
                for x in &gens {
                    let h = g.mul(x);
                    if seen.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            layers.push(next);
        }
        let mut elements = Vec::with_capacity(seen.len());
        let mut lengths = Vec::with_capacity(seen.len());
        for (len, mut layer) in layers.into_iter().enumerate() {
            layer.sort_by(|g, h| g.s().cmp(&h.s()).then_with(|| g.r().cmp(h.r())));
            lengths.extend(std::iter::repeat_n(len, layer.len()));
            elements.extend(layer);
        }
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        Ball {
            radius,
            elements,
            lengths,
            index,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elements.iter()
    }

    /// Word length of the `i`-th element.
    pub fn word_length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Every element except the identity.
    pub fn nontrivial(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter().filter(|g| !g.is_identity())
    }
}

impl<'a> IntoIterator for &'a Ball {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Walks the Cantor pairing of (mantissa, exponent) against s, both integer
/// coordinates folded through `0, 1, -1, 2, -2, ...`, skipping pairs that
/// are not canonical.
#[derive(Clone, Debug)]
pub struct Enumeration {
    n: u32,
    raw: u128,
}

impl Iterator for Enumeration {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        loop {
            let (inner, s_idx) = cantor_unpair(self.raw);
            self.raw += 1;
            let (m_idx, k) = cantor_unpair(inner);
            let m = zigzag(m_idx);
            let Ok(k) = u32::try_from(k) else { continue };
            let candidate = NAdic::normalize(m.clone(), k, self.n);
            if candidate.exponent() != k || candidate.mantissa() != &m {
                continue;
            }
            let s = zigzag(s_idx).to_i64()?;
            return Some(GroupElement::new(candidate, s));
        }
    }
}

fn zigzag(i: u128) -> BigInt {
    let half = BigInt::from(i.div_ceil(2));
    if i % 2 == 1 {
        half
    } else {
        -half
    }
}

fn zigzag_index(x: &BigInt) -> Option<u128> {
    let mag = x.abs().to_u128()?;
    if x.is_positive() {
        mag.checked_mul(2)?.checked_sub(1)
    } else {
        mag.checked_mul(2)
    }
}

fn cantor_pair(x: u128, y: u128) -> Option<u128> {
    let w = x.checked_add(y)?;
    w.checked_mul(w + 1).map(|t| t / 2 + y)
}

fn cantor_unpair(z: u128) -> (u128, u128) {
    // largest w with w(w+1)/2 <= z
    let mut w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u128;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}
