//! The invariant suite behind `ordlab check-all`.
//!
//! Each check returns a [`CheckResult`]; a check that could not be finished
//! within the digit budget reports [`Outcome::Unknown`] rather than a pass.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{act, act_rat, orbit_witness, stabilizer_generator, OrbitWitness};
use crate::cones::{cone_axioms_check, identify, ConeDescriptor, ConeTag, Membership};
use crate::equivalence::{digit_orbit_equivalent, reduce, reduction_roundtrip_check, truncation};
use crate::group::{Ball, Group, GroupElement};
use crate::numeric::{multiplicative_order, n_coprime_part, Rat};
use crate::realization::{FreeOrbitReport, RealizationStage};
use crate::reals::{compare_to_rat, floor_scaled, BasePoint, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, outcome: Outcome, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            outcome,
            detail: detail.into(),
        }
    }

    fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(name, Outcome::Pass, detail)
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(name, Outcome::Fail, detail)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Unknown => "UNKNOWN",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub n: u32,
    pub radius: usize,
    /// Radius used for separating distinct cones.
    pub separation_radius: usize,
    /// Radius of the conjugation coherence check, which is quadratic in the ball size.
    pub conjugation_radius: usize,
    pub stage: usize,
    pub samples: usize,
    pub seed: u64,
    pub irrational_bases: Vec<BasePoint>,
    pub rational_bases: Vec<BasePoint>,
}

impl SuiteConfig {
    pub fn new(n: u32) -> Self {
        SuiteConfig {
            n,
            radius: 5,
            separation_radius: 8,
            conjugation_radius: 4,
            stage: 64,
            samples: 200,
            seed: 0,
            irrational_bases: vec![BasePoint::sqrt(2).unwrap(), BasePoint::sqrt(3).unwrap()],
            rational_bases: vec![
                BasePoint::rational(0, 1),
                BasePoint::rational(1, 3),
                BasePoint::rational(5, 6),
            ],
        }
    }
}

/// The four bi-orderings, both `P` cones at every irrational base and all four `Q` cones at every rational one.
pub fn sample_cones(irrational: &[BasePoint], rational: &[BasePoint]) -> Vec<ConeDescriptor> {
    let mut out = Vec::new();
    for tag in ConeTag::ALL {
        match tag {
            ConeTag::Inf(..) => out.push(ConeDescriptor::new(tag, None).unwrap()),
            ConeTag::P(_) => out.extend(irrational.iter().map(|b| ConeDescriptor::new(tag, Some(b.clone())).unwrap())),
            ConeTag::Q(..) => out.extend(rational.iter().map(|b| ConeDescriptor::new(tag, Some(b.clone())).unwrap())),
        }
    }
    out
}

/// One cone of each of the ten types.
pub fn ten_cones(irrational: &BasePoint, rational: &BasePoint) -> Vec<ConeDescriptor> {
    sample_cones(std::slice::from_ref(irrational), std::slice::from_ref(rational))
}

fn membership_outcome(m: Membership) -> Option<bool> {
    match m {
        Membership::Yes => Some(true),
        Membership::No => Some(false),
        Membership::Unknown => None,
    }
}

pub fn check_axioms(cones: &[ConeDescriptor], group: Group, radius: usize) -> CheckResult {
    let name = format!("cone axioms on ball({radius})");
    let mut products = 0;
    for c in cones {
        let r = cone_axioms_check(c, group, radius);
        if let Some(v) = r.violation {
            return CheckResult::fail(name, format!("{c}: {v}"));
        }
        if !r.inconclusive.is_empty() {
            return CheckResult::new(name, Outcome::Unknown, format!("{c}: {} undecided", r.inconclusive.len()));
        }
        products += r.products_checked;
    }
    CheckResult::pass(name, format!("{} cones, {products} products", cones.len()))
}

/// An element of the ball in exactly one of the two cones.
pub fn separating_element<'a>(p: &ConeDescriptor, q: &ConeDescriptor, ball: &'a Ball) -> Option<&'a GroupElement> {
    ball.iter().find(|g| {
        matches!(
            (membership_outcome(p.member(g)), membership_outcome(q.member(g))),
            (Some(x), Some(y)) if x != y
        )
    })
}

pub fn check_distinct(cones: &[ConeDescriptor], group: Group, radius: usize) -> CheckResult {
    let name = format!("distinctness on ball({radius})");
    let ball = group.ball(radius);
    let mut pairs = 0;
    for (i, p) in cones.iter().enumerate() {
        for q in &cones[i + 1..] {
            if separating_element(p, q, &ball).is_none() {
                return CheckResult::fail(name, format!("{p} and {q} agree on the ball"));
            }
            pairs += 1;
        }
    }
    CheckResult::pass(name, format!("{pairs} pairs separated"))
}

/// `member(g(P), h) = member(P, g^-1 h g)` on the ball, and bi-orderings fixed by conjugation.
pub fn check_conjugation(cones: &[ConeDescriptor], group: Group, radius: usize, inf_radius: usize) -> CheckResult {
    let name = format!("conjugation coherence on ball({radius})");
    let ball = group.ball(radius);
    let mut checked = 0usize;
    for c in cones {
        for g in &ball {
            let moved = c.conjugate(g);
            for h in &ball {
                let lhs = moved.member(h);
                let rhs = c.member(&h.conjugate_by(g));
                if lhs == Membership::Unknown || rhs == Membership::Unknown {
                    return CheckResult::new(name, Outcome::Unknown, format!("{c}: undecided at g = {g}, h = {h}"));
                }
                if lhs != rhs {
                    return CheckResult::fail(name, format!("{c}: g = {g}, h = {h}"));
                }
                checked += 1;
            }
        }
    }
    let big = group.ball(inf_radius);
    for c in cones.iter().filter(|c| matches!(c.tag(), ConeTag::Inf(..))) {
        for g in &big {
            if &c.conjugate(g) != c {
                return CheckResult::fail(name, format!("{c} moved by {g}"));
            }
            if let Some(h) = big.iter().find(|h| c.member(h) != c.member(&h.conjugate_by(g))) {
                return CheckResult::fail(name, format!("{c} not invariant: g = {g}, h = {h}"));
            }
        }
    }
    CheckResult::pass(name, format!("{checked} identities, bi-orderings fixed on ball({inf_radius})"))
}

/// Rational points: the generator fixes `x` and every ball element fixing `x` is one of its powers.
/// Irrational points: nothing nontrivial in the ball fixes them.
pub fn check_stabilizers(points: &[BasePoint], group: Group, radius: usize) -> CheckResult {
    let name = format!("stabilizers on ball({radius})");
    let ball = group.ball(radius);
    for x in points {
        match x {
            BasePoint::Rational(q) => {
                let gen = stabilizer_generator(q, group.n());
                if gen.is_identity() || act_rat(&gen, q) != *q {
                    return CheckResult::fail(name, format!("generator {gen} does not fix {x}"));
                }
                for g in ball.iter().filter(|g| act_rat(g, q) == *q) {
                    let is_power = g.s() % gen.s() == 0 && gen.pow(g.s() / gen.s()) == *g;
                    if !is_power {
                        return CheckResult::fail(name, format!("{g} fixes {x} but is not a power of {gen}"));
                    }
                }
            }
            BasePoint::Quadratic(_) => {
                if let Some(g) = ball.nontrivial().find(|g| act(g, x).is_ok_and(|y| &y == x)) {
                    return CheckResult::fail(name, format!("{g} fixes {x}"));
                }
            }
            BasePoint::Stream(_) => {
                return CheckResult::new(name, Outcome::Unknown, format!("{x}: fixed points of streams are not decidable"));
            }
        }
    }
    CheckResult::pass(name, format!("{} points", points.len()))
}

fn random_rational(rng: &mut ChaCha8Rng, max_den: i64) -> Rat {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(-4 * q..=4 * q);
    Rat::new(p.into(), q.into())
}

/// Seeded roundtrips `x -> g(x) -> witness -> g'`, plus agreement of the direct
/// orbit test with the digit-based decision on random pairs.
pub fn check_reduction(group: Group, radius: usize, samples: usize, seed: u64) -> CheckResult {
    let name = format!("reduction roundtrip, {samples} samples");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ball = group.ball(radius);
    let n = group.n();
    for _ in 0..samples {
        let x = random_rational(&mut rng, 64);
        let g = ball.elements().choose(&mut rng).unwrap();
        let r = reduction_roundtrip_check(&x, g);
        if !r.passed {
            return CheckResult::fail(name, format!("x = {x}, g = {g}"));
        }
    }
    for i in 0..samples {
        let x = random_rational(&mut rng, 64);
        let y = if i % 2 == 0 {
            act_rat(ball.elements().choose(&mut rng).unwrap(), &x)
        } else {
            random_rational(&mut rng, 64)
        };
        let direct = orbit_witness(&BasePoint::Rational(x.clone()), &BasePoint::Rational(y.clone()), n)
            .expect("rationals are decidable");
        let digital = digit_orbit_equivalent(&x, &y, n);
        let agree = match (&direct, &digital) {
            (OrbitWitness::Witness(g), Some(h)) => act_rat(g, &x) == y && act_rat(h, &x) == y,
            (OrbitWitness::NotEquivalent, None) => true,
            _ => false,
        };
        if !agree {
            return CheckResult::fail(name, format!("orbit tests disagree on {x}, {y}"));
        }
    }
    CheckResult::pass(name, "all witnesses rebuilt, orbit tests agree")
}

pub fn check_realization(cones: &[ConeDescriptor], group: Group, stage: usize) -> CheckResult {
    let name = format!("realization at stage {stage}");
    for c in cones {
        let st = match RealizationStage::build(c, group, stage) {
            Ok(st) => st,
            Err(e) => return CheckResult::new(name, Outcome::Unknown, format!("{c}: {e}")),
        };
        if !st.tag(0).is_zero() {
            return CheckResult::fail(name, format!("{c}: identity tagged {}", st.tag(0)));
        }
        match st.check_order_embedding() {
            Ok(None) => {}
            Ok(Some((i, j))) => {
                return CheckResult::fail(name, format!("{c}: {} and {} out of order", st.element(i), st.element(j)))
            }
            Err(e) => return CheckResult::new(name, Outcome::Unknown, format!("{c}: {e}")),
        }
        if let FreeOrbitReport::Violation(g) = st.check_free_orbit() {
            return CheckResult::fail(name, format!("{c}: {g} fixes 0"));
        }
        for (g, _) in st.entries() {
            if st.recover_cone(g) != membership_outcome(c.member(g)) {
                return CheckResult::fail(name, format!("{c}: recovered membership of {g} is wrong"));
            }
        }
        for (h, _) in st.entries() {
            let conj = c.conjugate(&h.inv());
            for (g, _) in st.entries() {
                if let Some(found) = st.recover_conjugate(h, g) {
                    if Some(found) != membership_outcome(conj.member(g)) {
                        return CheckResult::fail(name, format!("{c}: conjugate recovery at h = {h}, g = {g}"));
                    }
                }
            }
        }
    }
    CheckResult::pass(name, format!("{} cones", cones.len()))
}

pub fn check_identification(cones: &[ConeDescriptor], group: Group, radius: usize, precision: u32) -> CheckResult {
    let name = format!("identification on ball({radius})");
    for c in cones {
        let id = match identify(c, group, radius, precision) {
            Ok(id) => id,
            Err(e) => return CheckResult::new(name, Outcome::Unknown, format!("{c}: {e}")),
        };
        if !id.tags.contains(&c.tag()) {
            return CheckResult::fail(name, format!("{c}: tags {:?}", id.tags));
        }
        if let Some(b) = c.base() {
            if id.contains(b) == Some(false) {
                return CheckResult::fail(name, format!("{c}: base outside the interval"));
            }
            if let (Some(e), Some(x)) = (&id.exact_base, b.as_rat()) {
                if e != x {
                    return CheckResult::fail(name, format!("{c}: exact base {e}"));
                }
            }
        }
    }
    CheckResult::pass(name, format!("{} cones", cones.len()))
}

/// Truncations bracket `x` within `n^-k`, and rational periods divide the
/// order of `n` modulo the `n`-coprime part of the denominator.
pub fn check_digits(points: &[BasePoint], n: u32, max_k: usize, budget: usize) -> CheckResult {
    let name = format!("digit truncations up to {max_k}");
    for x in points {
        let word = match reduce(x, n, budget.max(max_k)) {
            Ok(w) => w,
            Err(e) => return CheckResult::new(name, Outcome::Unknown, format!("{x}: {e}")),
        };
        let int = match floor_scaled(x, n, 0) {
            Ok(i) => i,
            Err(e) => return CheckResult::new(name, Outcome::Unknown, format!("{x}: {e}")),
        };
        for k in 0..=max_k.min(budget) {
            let (lo, hi) = truncation(&int, &word, n, k);
            let above = compare_to_rat(x, &lo);
            let below = compare_to_rat(x, &hi);
            if above == Sign::Unknown || below == Sign::Unknown {
                return CheckResult::new(name, Outcome::Unknown, format!("{x}: undecided at k = {k}"));
            }
            if above == Sign::Negative || below != Sign::Negative {
                return CheckResult::fail(name, format!("{x}: truncation {k} misses"));
            }
        }
        if let (BasePoint::Rational(q), crate::equivalence::DigitWord::Periodic { period, .. }) = (x, &word) {
            let ord = multiplicative_order(n, &n_coprime_part(q.denom(), n));
            if !ord.is_multiple_of(period.len() as u64) {
                return CheckResult::fail(name, format!("{x}: period {} does not divide {ord}", period.len()));
            }
        }
    }
    CheckResult::pass(name, format!("{} points", points.len()))
}

/// Every check at the configured sizes, in a fixed order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let group = Group::new(cfg.n as u64).expect("valid base");
    let cones = sample_cones(&cfg.irrational_bases, &cfg.rational_bases);
    let ten = ten_cones(&cfg.irrational_bases[0], &cfg.rational_bases[0]);
    let points: Vec<BasePoint> = cfg.rational_bases.iter().chain(&cfg.irrational_bases).cloned().collect();
    let mut digit_points = points.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    digit_points.extend((0..16).map(|_| BasePoint::Rational(random_rational(&mut rng, 64))));
    vec![
        check_axioms(&cones, group, cfg.radius),
        check_distinct(&cones, group, cfg.separation_radius),
        check_conjugation(&cones, group, cfg.conjugation_radius, cfg.conjugation_radius + 2),
        check_stabilizers(&points, group, cfg.radius + 1),
        check_reduction(group, cfg.radius, cfg.samples, cfg.seed),
        check_realization(&ten, group, cfg.stage),
        check_identification(&ten, group, 8, 4),
        check_digits(&digit_points, cfg.n, 64, 256),
    ]
}
