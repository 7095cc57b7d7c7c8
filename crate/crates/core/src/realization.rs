//! Finite stages of the dynamical realization of an ordering.
//!
//! Elements are taken in enumeration order and tagged with dyadic rationals:
//! a new maximum gets `max + 1`, a new minimum `min - 1`, and anything else
//! the midpoint of the two tagged neighbours it falls between. Tags are never
//! revised, so each stage extends the previous one.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::cones::ConeDescriptor;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::numeric::NAdic;

/// Dyadic tags live in `Z[1/2]` whatever the group's base.
pub type Tag = NAdic;

fn tag_int(v: i64) -> Tag {
    NAdic::from_int(v, 2)
}

#[derive(Clone, Debug)]
pub struct RealizationStage {
    cone: ConeDescriptor,
    elements: Vec<GroupElement>,
    tags: Vec<Tag>,
    index: HashMap<GroupElement, usize>,
    /// Element indices sorted by tag.
    sorted: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeOrbitReport {
    Free,
    /// A nontrivial element shares the identity's tag.
    Violation(GroupElement),
}

impl RealizationStage {
    /// The first `stage` elements of the group's enumeration.
    pub fn build(cone: &ConeDescriptor, group: Group, stage: usize) -> Result<Self> {
        let elements: Vec<GroupElement> = group.enumeration().take(stage.max(1)).collect();
        Self::build_from(cone, elements)
    }

    /// Runs the induction over an explicit sequence, whose first element must be the identity.
    pub fn build_from(cone: &ConeDescriptor, elements: Vec<GroupElement>) -> Result<Self> {
        assert!(
            elements.first().is_some_and(GroupElement::is_identity),
            "enumerations start at the identity"
        );
        let mut st = RealizationStage {
            cone: cone.clone(),
            elements: Vec::with_capacity(elements.len()),
            tags: Vec::with_capacity(elements.len()),
            index: HashMap::new(),
            sorted: Vec::new(),
        };
        for g in elements {
            st.push(g)?;
        }
        Ok(st)
    }

    /// Tags the next element and extends the stage by one.
    pub fn push(&mut self, g: GroupElement) -> Result<()> {
        if self.index.contains_key(&g) {
            return Err(Error::DuplicateElement(g.to_string()));
        }
        // binary search for g among the tagged elements in order
        let mut lo = 0usize;
        let mut hi = self.sorted.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            let other = &self.elements[self.sorted[mid]];
            match self.cone.order_compare(other, &g).ok_or(Error::Undecided)? {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => unreachable!("duplicates rejected above"),
            }
        }
        let tag = if self.sorted.is_empty() {
            tag_int(0)
        } else if lo == self.sorted.len() {
            &self.tags[*self.sorted.last().unwrap()] + &tag_int(1)
        } else if lo == 0 {
            &self.tags[self.sorted[0]] - &tag_int(1)
        } else {
            let sum = &self.tags[self.sorted[lo - 1]] + &self.tags[self.sorted[lo]];
            sum.scale_pow(-1)
        };
        let i = self.elements.len();
        self.index.insert(g.clone(), i);
        self.elements.push(g);
        self.tags.push(tag);
        self.sorted.insert(lo, i);
        Ok(())
    }

    pub fn cone(&self) -> &ConeDescriptor {
        &self.cone
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn tag(&self, i: usize) -> &Tag {
        &self.tags[i]
    }

    pub fn tag_of(&self, g: &GroupElement) -> Option<&Tag> {
        self.index.get(g).map(|&i| &self.tags[i])
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, &Tag)> {
        self.elements.iter().zip(&self.tags)
    }

    /// Indices in increasing tag order.
    pub fn sorted_indices(&self) -> &[usize] {
        &self.sorted
    }

    /// `g(t(g_i)) = t(g g_i)`, when `g g_i` is tagged.
    pub fn partial_act(&self, g: &GroupElement, i: usize) -> Option<&Tag> {
        self.tag_of(&g.mul(&self.elements[i]))
    }

    /// `g` is positive iff it moves `t(id) = 0` up; `None` if `g` is untagged.
    pub fn recover_cone(&self, g: &GroupElement) -> Option<bool> {
        let zero = self.tag_of(&GroupElement::identity(g.base()))?;
        self.tag_of(g).map(|t| t > zero)
    }

    /// Membership of `g` in `P^h = h^-1 P h`, read at the point `t(h^-1)`:
    /// `D(g)(t(h^-1)) > t(h^-1)`. `None` unless both `h^-1` and `g h^-1` are tagged.
    pub fn recover_conjugate(&self, h: &GroupElement, g: &GroupElement) -> Option<bool> {
        let h_inv = h.inv();
        let at = self.tag_of(&h_inv)?;
        let moved = self.tag_of(&g.mul(&h_inv))?;
        Some(moved > at)
    }

    pub fn check_free_orbit(&self) -> FreeOrbitReport {
        let Some(id) = self.elements.first() else {
            return FreeOrbitReport::Free;
        };
        let zero = &self.tags[0];
        for (g, t) in self.entries() {
            if g != id && t == zero {
                return FreeOrbitReport::Violation(g.clone());
            }
        }
        FreeOrbitReport::Free
    }

    /// First pair `(i, j)` whose tag order disagrees with the cone's order.
    pub fn check_order_embedding(&self) -> Result<Option<(usize, usize)>> {
        for i in 0..self.len() {
            for j in 0..self.len() {
                let by_order = self.cone.order_compare(&self.elements[i], &self.elements[j]).ok_or(Error::Undecided)?;
                if by_order != self.tags[i].cmp(&self.tags[j]) {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// For tests and corrupted-stage checks: a stage from raw parts.
    pub fn from_parts(cone: ConeDescriptor, entries: Vec<(GroupElement, Tag)>) -> Self {
        let mut sorted: Vec<usize> = (0..entries.len()).collect();
        sorted.sort_by(|&i, &j| entries[i].1.cmp(&entries[j].1));
        let index = entries.iter().enumerate().map(|(i, (g, _))| (g.clone(), i)).collect();
        let (elements, tags) = entries.into_iter().unzip();
        RealizationStage {
            cone,
            elements,
            tags,
            index,
            sorted,
        }
    }

    /// `index,element,tag,approx` rows, one per element in tag order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,element,tag,approx\n");
        for &i in &self.sorted {
            out.push_str(&format!(
                "{},\"{}\",{},{}\n",
                i,
                self.elements[i],
                self.tags[i].to_text(),
                self.tags[i].to_f64()
            ));
        }
        out
    }
}
