//! Exit criteria, one line each. Every check uses its own brute-force
//! evaluation of the action and of cone membership where it can, rather than
//! the library's checkers.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordlab::action::{act, orbit_witness, stabilizer_generator, OrbitWitness};
use ordlab::cones::{identify, ConeDescriptor, ConeTag, Membership, Pm};
use ordlab::equivalence::{reduce, tail_equivalent, witness_to_group, DigitWord, TailDecision};
use ordlab::realization::RealizationStage;
use ordlab::reals::{digits, QuadSurd};
use ordlab::{BasePoint, Group, GroupElement, Rat};

const BASES: [u64; 3] = [2, 3, 10];

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

/// `n^-s x + r`, computed from the normal form.
fn apply(g: &GroupElement, x: &Rat) -> Rat {
    let n = Rat::from_integer(g.base().into());
    let mut slope = Rat::one();
    for _ in 0..g.s().abs() {
        slope *= &n;
    }
    if g.s() > 0 {
        slope = slope.recip();
    }
    slope * x + g.r().to_rat()
}

fn quad(u: Rat, v: Rat, d: i64) -> BasePoint {
    BasePoint::Quadratic(QuadSurd::new(u, v, d.into()).unwrap())
}

fn irrational_bases() -> Vec<BasePoint> {
    vec![BasePoint::sqrt(2).unwrap(), BasePoint::sqrt(3).unwrap()]
}

fn rational_bases() -> Vec<BasePoint> {
    vec![BasePoint::rational(0, 1), BasePoint::rational(1, 3), BasePoint::rational(5, 6)]
}

fn sampled_cones() -> Vec<ConeDescriptor> {
    let mut out = Vec::new();
    for tag in ConeTag::ALL {
        match tag {
            ConeTag::Inf(..) => out.push(ConeDescriptor::new(tag, None).unwrap()),
            ConeTag::P(_) => out.extend(irrational_bases().into_iter().map(|b| ConeDescriptor::new(tag, Some(b)).unwrap())),
            ConeTag::Q(..) => out.extend(rational_bases().into_iter().map(|b| ConeDescriptor::new(tag, Some(b)).unwrap())),
        }
    }
    out
}

fn ten_cones() -> Vec<ConeDescriptor> {
    ConeTag::ALL
        .iter()
        .map(|&t| {
            let base = match t {
                ConeTag::Inf(..) => None,
                ConeTag::P(_) => Some(BasePoint::sqrt(2).unwrap()),
                ConeTag::Q(..) => Some(BasePoint::rational(1, 3)),
            };
            ConeDescriptor::new(t, base).unwrap()
        })
        .collect()
}

fn yes(c: &ConeDescriptor, g: &GroupElement) -> bool {
    match c.member(g) {
        Membership::Yes => true,
        Membership::No => false,
        Membership::Unknown => panic!("{c}: membership of {g} undecided"),
    }
}

type Criterion = fn() -> Result<String, String>;

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn record(&mut self, id: &str, result: Result<String, String>, started: Instant) {
        let secs = started.elapsed().as_secs_f64();
        let (ok, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let line = format!("[{}] criterion {id}: {detail} ({secs:.1}s)", if ok { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push((ok, line));
    }
}

fn axioms() -> Result<String, String> {
    let mut products = 0usize;
    for n in BASES {
        let group = Group::new(n).unwrap();
        let ball = group.ball(5);
        let set: HashSet<&GroupElement> = ball.iter().collect();
        for c in sampled_cones() {
            let members: Vec<&GroupElement> = ball.iter().filter(|g| yes(&c, g)).collect();
            if members.iter().any(|g| g.is_identity()) {
                return Err(format!("n={n} {c}: identity is a member"));
            }
            for g in ball.nontrivial() {
                let (p, q) = (yes(&c, g), yes(&c, &g.inv()));
                if p == q {
                    return Err(format!("n={n} {c}: {g} and its inverse are {}", if p { "both members" } else { "both outside" }));
                }
            }
            for g in &members {
                for h in &members {
                    let gh = g.mul(h);
                    if set.contains(&gh) {
                        products += 1;
                        if !yes(&c, &gh) {
                            return Err(format!("n={n} {c}: {g} * {h} leaves the cone"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("n in {{2,3,10}}, {} cones, ball(5), {products} products, zero violations", sampled_cones().len()))
}

fn distinctness() -> Result<String, String> {
    let cones = sampled_cones();
    let mut failures = Vec::new();
    for n in BASES {
        let ball = Group::new(n).unwrap().ball(8);
        for (i, p) in cones.iter().enumerate() {
            for q in &cones[i + 1..] {
                if !ball.iter().any(|g| yes(p, g) != yes(q, g)) {
                    failures.push(format!("n={n}: {p} = {q} on ball(8)"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{} pairs separated in ball(8) for every n", cones.len() * (cones.len() - 1) / 2))
    } else {
        Err(failures.join("; "))
    }
}

fn conjugation() -> Result<String, String> {
    let mut count = 0usize;
    for n in BASES {
        let group = Group::new(n).unwrap();
        let ball = group.ball(4);
        for c in sampled_cones() {
            for g in &ball {
                let moved = c.conjugate(g);
                for h in &ball {
                    let pulled = g.inv().mul(h).mul(g);
                    if yes(&moved, h) != yes(&c, &pulled) {
                        return Err(format!("n={n} {c}: g = {g}, h = {h}"));
                    }
                    count += 1;
                }
            }
        }
        let big = group.ball(6);
        for c in sampled_cones().into_iter().filter(|c| matches!(c.tag(), ConeTag::Inf(..))) {
            for g in &big {
                let moved = c.conjugate(g);
                if moved != c {
                    return Err(format!("n={n} {c}: moved by {g}"));
                }
                if let Some(h) = big.iter().find(|h| yes(&c, h) != yes(&c, &g.inv().mul(h).mul(g))) {
                    return Err(format!("n={n} {c}: not conjugation invariant at g = {g}, h = {h}"));
                }
            }
        }
    }
    Ok(format!("{count} identities on ball(4), bi-orderings fixed on ball(6)"))
}

fn stabilizers() -> Result<String, String> {
    for n in [2u64, 10] {
        let group = Group::new(n).unwrap();
        let ball = group.ball(6);
        for x in [rat(0, 1), rat(1, 3), rat(1, 7), rat(5, 6)] {
            let gen = stabilizer_generator(&x, n as u32);
            if gen.is_identity() || apply(&gen, &x) != x {
                return Err(format!("n={n}: generator {gen} does not fix {x}"));
            }
            let fixers: HashSet<&GroupElement> = ball.iter().filter(|g| apply(g, &x) == x).collect();
            let powers: HashSet<&GroupElement> = (-6..=6)
                .filter_map(|k| ball.position(&gen.pow(k)).map(|i| &ball.elements()[i]))
                .collect();
            if fixers != powers {
                return Err(format!("n={n} x={x}: fixers {} vs powers {}", fixers.len(), powers.len()));
            }
        }
        let eps = [
            BasePoint::sqrt(2).unwrap(),
            BasePoint::sqrt(3).unwrap(),
            quad(rat(2, 3), rat(1, 5), 11),
            quad(rat(-1, 2), rat(3, 1), 7),
        ];
        for e in &eps {
            if let Some(g) = ball.nontrivial().find(|g| act(g, e).unwrap() == *e) {
                return Err(format!("n={n}: {g} fixes {e}"));
            }
        }
    }
    Ok("recipe generators fix x, ball(6) fixers are exactly their powers, quadratic points have free orbits".into())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rat {
    let q = rng.gen_range(1..=64i64);
    let p = rng.gen_range(-3 * q..=3 * q);
    rat(p, q)
}

fn reduction() -> Result<String, String> {
    for n in BASES {
        let group = Group::new(n).unwrap();
        let ball = group.ball(5);
        let mut rng = ChaCha8Rng::seed_from_u64(20 + n);
        for _ in 0..200 {
            let x = random_rational(&mut rng);
            let g = ball.elements().choose(&mut rng).unwrap();
            let y = apply(g, &x);
            let (px, py) = (BasePoint::Rational(x.clone()), BasePoint::Rational(y.clone()));
            let (wx, wy) = (reduce(&px, n as u32, 64).unwrap(), reduce(&py, n as u32, 64).unwrap());
            let TailDecision::Equivalent { witness, exact: true } = tail_equivalent(&wx, &wy) else {
                return Err(format!("n={n}: no forward witness for {x} -> {y}"));
            };
            let back = witness_to_group(&px, &py, witness, n as u32).map_err(|e| e.to_string())?;
            if apply(&back, &x) != y {
                return Err(format!("n={n}: {back} does not send {x} to {y}"));
            }
        }
        let mut agreed = 0;
        for i in 0..200 {
            let x = random_rational(&mut rng);
            let y = if i % 2 == 0 {
                apply(ball.elements().choose(&mut rng).unwrap(), &x)
            } else {
                random_rational(&mut rng)
            };
            for (a, b) in [(&x, &y), (&y, &x)] {
                let (pa, pb) = (BasePoint::Rational(a.clone()), BasePoint::Rational(b.clone()));
                let direct = orbit_witness(&pa, &pb, n as u32).map_err(|e| e.to_string())?;
                let wa = reduce(&pa, n as u32, 64).unwrap();
                let wb = reduce(&pb, n as u32, 64).unwrap();
                let digital = tail_equivalent(&wa, &wb);
                match (&direct, &digital) {
                    (OrbitWitness::Witness(g), TailDecision::Equivalent { witness, .. }) => {
                        let h = witness_to_group(&pa, &pb, *witness, n as u32).map_err(|e| e.to_string())?;
                        if apply(g, a) != *b || apply(&h, a) != *b {
                            return Err(format!("n={n}: witnesses for {a} -> {b} are wrong"));
                        }
                    }
                    (OrbitWitness::NotEquivalent, TailDecision::NotEquivalent) => {}
                    _ => return Err(format!("n={n}: {a} vs {b}: {direct:?} against {digital:?}")),
                }
            }
            agreed += 1;
        }
        assert_eq!(agreed, 200);
    }
    Ok("200 roundtrips and 200 two-way orbit agreements for each n in {2,3,10}".into())
}

fn realization() -> Result<String, String> {
    let mut triples = 0usize;
    for n in BASES {
        let group = Group::new(n).unwrap();
        for c in ten_cones() {
            let st = RealizationStage::build(&c, group, 64).map_err(|e| e.to_string())?;
            if st.len() != 64 || !st.element(0).is_identity() || !st.tag(0).is_zero() {
                return Err(format!("n={n} {c}: stage does not start at t(id) = 0"));
            }
            for i in 0..64 {
                for j in 0..64 {
                    if i == j {
                        continue;
                    }
                    let less = yes(&c, &st.element(i).inv().mul(st.element(j)));
                    if less != (st.tag(i) < st.tag(j)) {
                        return Err(format!("n={n} {c}: tags of {} and {} out of order", st.element(i), st.element(j)));
                    }
                }
                if i > 0 && st.tag(i).is_zero() {
                    return Err(format!("n={n} {c}: {} fixes 0", st.element(i)));
                }
                if st.recover_cone(st.element(i)) != Some(yes(&c, st.element(i))) {
                    return Err(format!("n={n} {c}: recover_cone wrong at {}", st.element(i)));
                }
            }
            for h in (0..64).map(|i| st.element(i)) {
                for g in (0..64).map(|i| st.element(i)) {
                    if let Some(found) = st.recover_conjugate(h, g) {
                        triples += 1;
                        if found != yes(&c, &h.mul(g).mul(&h.inv())) {
                            return Err(format!("n={n} {c}: conjugate recovery at h = {h}, g = {g}"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("ten cones at N = 64 for each n, {triples} conjugate triples"))
}

fn identification() -> Result<String, String> {
    let group = Group::new(2).unwrap();
    let p = ConeDescriptor::new(ConeTag::P(Pm::Plus), Some(BasePoint::sqrt(2).unwrap())).unwrap();
    let id = identify(&p, group, 8, 4).map_err(|e| e.to_string())?;
    let (lo, hi) = id.interval.clone().ok_or("no interval")?;
    let two = rat(2, 1);
    let contains = !lo.is_positive() || &lo * &lo <= two;
    let contains = contains && hi.is_positive() && &hi * &hi >= two;
    let width_ok = &hi - &lo <= rat(1, 16);
    if id.tags != vec![ConeTag::P(Pm::Plus)] || !contains || !width_ok {
        return Err(format!("P+ at sqrt 2: tags {:?}, interval [{lo}, {hi}]", id.tags));
    }
    let q = ConeDescriptor::new(ConeTag::Q(Pm::Plus, Pm::Plus), Some(BasePoint::rational(1, 3))).unwrap();
    let qid = identify(&q, group, 8, 4).map_err(|e| e.to_string())?;
    if qid.exact_base != Some(rat(1, 3)) {
        return Err(format!("Q++ at 1/3: exact base {:?}", qid.exact_base));
    }
    Ok(format!("sqrt 2 in [{lo}, {hi}] with tags {{P+}}, Q++ base recovered as 1/3"))
}

/// Order of `n` modulo `m` by repeated multiplication.
fn order_mod(n: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = n % m;
    let mut k = 1;
    while x != 1 {
        x = x * n % m;
        k += 1;
    }
    k
}

fn coherence() -> Result<String, String> {
    let mut checked = 0usize;
    for n in BASES {
        let nb = BigInt::from(n);
        for q in 1..=64i64 {
            for p in [-q - 1, 1, q - 1, 2 * q + 1] {
                let x = rat(p, q);
                let word = reduce(&BasePoint::Rational(x.clone()), n as u32, 64).unwrap();
                let floor = x.floor().to_integer();
                let mut scale = BigInt::one();
                for k in 0..=64usize {
                    // floor(x n^k) from the digits, against direct division
                    let mut acc = floor.clone();
                    for i in 0..k {
                        acc = acc * &nb + BigInt::from(word.digit(i).unwrap());
                    }
                    let direct = (x.numer() * &scale).div_floor(x.denom());
                    if acc != direct {
                        return Err(format!("n={n} x={x}: truncation {k} misses"));
                    }
                    scale *= &nb;
                    checked += 1;
                }
                let DigitWord::Periodic { period, .. } = word else {
                    return Err("rational reduced to a prefix".into());
                };
                let mut m = q as u64;
                for f in 2..=n {
                    if n % f == 0 {
                        while m.is_multiple_of(f) {
                            m /= f;
                        }
                    }
                }
                let ord = order_mod(n, m);
                if !ord.is_multiple_of(period.len() as u64) {
                    return Err(format!("n={n} x={x}: period {} does not divide {ord}", period.len()));
                }
            }
        }
        for d in [2i64, 3, 5] {
            let e = BasePoint::sqrt(d as u64).unwrap();
            let ds = digits(&e, n as u32, 64).unwrap().digits;
            let d = Rat::from_integer(d.into());
            let mut lo = Rat::from_integer(ordlab::reals::floor_scaled(&e, n as u32, 0).unwrap());
            let mut unit = Rat::one();
            for k in 0..=ds.len() {
                let hi = &lo + &unit;
                if !(&lo * &lo <= d && d < &hi * &hi) {
                    return Err(format!("n={n}: truncation {k} of sqrt {d} misses"));
                }
                if let Some(&dk) = ds.get(k) {
                    unit /= Rat::from_integer(nb.clone());
                    lo += &unit * Rat::from_integer(dk.into());
                }
                checked += 1;
            }
        }
    }
    if checked.is_zero() {
        return Err("nothing checked".into());
    }
    Ok(format!("{checked} truncations bracket x within n^-k, k <= 64, periods divide the order"))
}

fn main() -> ExitCode {
    let mut report = Report { lines: Vec::new() };
    let criteria: [(&str, Criterion); 8] = [
        ("1 cone axioms", axioms),
        ("2 distinctness", distinctness),
        ("3 conjugation", conjugation),
        ("4 stabilizers", stabilizers),
        ("5 reduction", reduction),
        ("6 realization", realization),
        ("7 identification", identification),
        ("8 digit coherence", coherence),
    ];
    for (id, check) in criteria {
        let started = Instant::now();
        report.record(id, check(), started);
    }
    let failed = report.lines.iter().filter(|(ok, _)| !ok).count();
    println!("{} of {} criteria passed", report.lines.len() - failed, report.lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
