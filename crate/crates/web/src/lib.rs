//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string;
//! failures come back as `{"error": "..."}` so the page only has one shape to handle.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use ordlab::cones::{ConeDescriptor, ConeTag, Membership};
use ordlab::equivalence::{reduce, tail_equivalent, witness_to_group, TailDecision};
use ordlab::json::{digit_word_to_json, element_to_json};
use ordlab::realization::RealizationStage;
use ordlab::reals::DEFAULT_BUDGET;
use ordlab::{BasePoint, Group};

/// Caps that keep a single call interactive.
const MAX_STAGE: usize = 512;
const MAX_RADIUS: usize = 7;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn group(n: u32) -> Result<Group, String> {
    Group::new(n as u64).map_err(|e| e.to_string())
}

fn cone(n: u32, tag: &str, base: &str) -> Result<ConeDescriptor, String> {
    let tag: ConeTag = tag.parse().map_err(|e: ordlab::Error| e.to_string())?;
    let base = match base.trim() {
        "" => None,
        b => Some(BasePoint::parse_literal(b, n, DEFAULT_BUDGET).map_err(|e| e.to_string())?),
    };
    ConeDescriptor::new(tag, base).map_err(|e| e.to_string())
}

fn realize_inner(n: u32, tag: &str, base: &str, stage: usize) -> Result<Value, String> {
    if stage == 0 || stage > MAX_STAGE {
        return Err(format!("stage must be between 1 and {MAX_STAGE}"));
    }
    let c = cone(n, tag, base)?;
    let st = RealizationStage::build(&c, group(n)?, stage).map_err(|e| e.to_string())?;
    let points: Vec<Value> = st
        .sorted_indices()
        .iter()
        .map(|&i| {
            let g = st.element(i);
            json!({
                "index": i,
                "word": g.to_word(),
                "element": element_to_json(g),
                "tag": st.tag(i).to_text(),
                "x": st.tag(i).to_f64(),
                "positive": st.recover_cone(g) == Some(true),
            })
        })
        .collect();
    Ok(json!({ "cone": c.to_string(), "points": points }))
}

fn membership_inner(n: u32, tag: &str, base: &str, radius: usize) -> Result<Value, String> {
    if radius > MAX_RADIUS {
        return Err(format!("radius must be at most {MAX_RADIUS}"));
    }
    let c = cone(n, tag, base)?;
    let ball = group(n)?.ball(radius);
    let points: Vec<Value> = ball
        .iter()
        .map(|g| {
            let m = match c.member(g) {
                Membership::Yes => json!(true),
                Membership::No => json!(false),
                Membership::Unknown => Value::Null,
            };
            json!({ "r": g.r().to_f64(), "s": g.s(), "word": g.to_word(), "member": m })
        })
        .collect();
    let members = points.iter().filter(|p| p["member"] == true).count();
    Ok(json!({ "cone": c.to_string(), "size": ball.len(), "members": members, "points": points }))
}

fn digits_inner(n: u32, x: &str, y: &str, budget: usize) -> Result<Value, String> {
    group(n)?;
    let budget = budget.clamp(16, 4096);
    let px = BasePoint::parse_literal(x, n, budget).map_err(|e| e.to_string())?;
    let wx = reduce(&px, n, budget).map_err(|e| e.to_string())?;
    let mut out = json!({ "x": digit_word_to_json(&wx, n) });
    if y.trim().is_empty() {
        return Ok(out);
    }
    let py = BasePoint::parse_literal(y, n, budget).map_err(|e| e.to_string())?;
    let wy = reduce(&py, n, budget).map_err(|e| e.to_string())?;
    out["y"] = digit_word_to_json(&wy, n);
    let decision = tail_equivalent(&wx, &wy);
    out["decision"] = match &decision {
        TailDecision::Equivalent { witness, exact } => {
            let mut d = json!({ "equivalent": true, "p": witness.p, "q": witness.q, "exact": exact });
            if let Ok(g) = witness_to_group(&px, &py, *witness, n) {
                d["element"] = element_to_json(&g);
                d["word"] = json!(g.to_word());
            }
            d
        }
        TailDecision::NotEquivalent => json!({ "equivalent": false }),
        TailDecision::Unknown => json!({ "equivalent": null }),
    };
    Ok(out)
}

/// Dyadic tags of the first `stage` enumerated elements, in order.
#[wasm_bindgen]
pub fn realize(n: u32, tag: &str, base: &str, stage: usize) -> String {
    respond(realize_inner(n, tag, base, stage))
}

/// Membership of every element of the ball, placed at `(r, s)`.
#[wasm_bindgen]
pub fn membership(n: u32, tag: &str, base: &str, radius: usize) -> String {
    respond(membership_inner(n, tag, base, radius))
}

/// Digit words of one or two points, with the tail decision and group witness when `y` is given.
#[wasm_bindgen]
pub fn digit_words(n: u32, x: &str, y: &str, budget: usize) -> String {
    respond(digits_inner(n, x, y, budget))
}
