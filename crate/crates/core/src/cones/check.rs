use std::fmt;

use super::{ConeOracle, Membership};
use crate::group::{Group, GroupElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IdentityMember,
    /// Both `g` and `g^-1` are members.
    Disjointness(GroupElement),
    /// Neither `g` nor `g^-1` is a member.
    Trichotomy(GroupElement),
    /// `g` and `h` are members but `gh` is not.
    Closure(GroupElement, GroupElement),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityMember => write!(f, "identity is a member"),
            Violation::Disjointness(g) => write!(f, "disjointness: {g} and its inverse are both members"),
            Violation::Trichotomy(g) => write!(f, "trichotomy: neither {g} nor its inverse is a member"),
            Violation::Closure(g, h) => write!(f, "closure: {g} and {h} are members, their product is not"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub radius: usize,
    pub elements: usize,
    pub members: usize,
    pub products_checked: usize,
    pub violation: Option<Violation>,
    /// Elements whose membership came back unknown; they are left out of every check.
    pub inconclusive: Vec<GroupElement>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.inconclusive.is_empty()
    }
}

/// Checks the positive-cone axioms restricted to the ball of radius `radius`:
/// `id` not a member, `P ∩ P^-1 = ∅`, `P ∪ P^-1 ∪ {id} = G`, and `PP ⊆ P` for
/// every product that lands back in the ball. Stops at the first violation.
pub fn cone_axioms_check<O: ConeOracle + ?Sized>(oracle: &O, group: Group, radius: usize) -> AxiomReport {
    let ball = group.ball(radius);
    let answers: Vec<Membership> = ball
        .iter()
        .map(|g| if g.is_identity() { Membership::No } else { oracle.query(g) })
        .collect();
    let mut report = AxiomReport {
        radius,
        elements: ball.len(),
        members: answers.iter().filter(|m| m.is_yes()).count(),
        products_checked: 0,
        violation: None,
        inconclusive: ball
            .iter()
            .zip(&answers)
            .filter(|(_, m)| **m == Membership::Unknown)
            .map(|(g, _)| g.clone())
            .collect(),
    };
    if oracle.query(&group.identity()) == Membership::Yes {
        report.violation = Some(Violation::IdentityMember);
        return report;
    }
    for (i, g) in ball.iter().enumerate() {
        if g.is_identity() {
            continue;
        }
        let j = ball.position(&g.inv()).expect("balls are closed under inversion");
        match (answers[i], answers[j]) {
            (Membership::Yes, Membership::Yes) => {
                report.violation = Some(Violation::Disjointness(g.clone()));
                return report;
            }
            (Membership::No, Membership::No) => {
                report.violation = Some(Violation::Trichotomy(g.clone()));
                return report;
            }
            _ => {}
        }
    }
    let members: Vec<&GroupElement> = ball
        .iter()
        .zip(&answers)
        .filter(|(_, m)| m.is_yes())
        .map(|(g, _)| g)
        .collect();
    for g in &members {
        for h in &members {
            let gh = g.mul(h);
            if let Some(k) = ball.position(&gh) {
                report.products_checked += 1;
                if answers[k] == Membership::No {
                    report.violation = Some(Violation::Closure((*g).clone(), (*h).clone()));
                    return report;
                }
            }
        }
    }
    report
}
