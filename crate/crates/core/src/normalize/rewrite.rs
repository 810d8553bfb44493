//! The individual rewrite steps. Every step rebuilds the touched nodes with
//! [`Proof::apply`], so a step either yields a proof checked rule by rule
//! with the original conclusion, or fails.

use thiserror::Error;

use crate::context::OccId;
use crate::proof::{fmt_path, Path, Proof, Rule, RuleKind, RuleViolation};

use super::{child, d_conj, redexes_at, RedexKind, RedexSite};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("no node at {}", fmt_path(.0))]
    NoNode(Path),
    #[error("at {}: {reason}", fmt_path(.path))]
    NotApplicable { path: Path, reason: String },
}

fn not_applicable(path: &[usize], reason: impl Into<String>) -> RewriteError {
    RewriteError::NotApplicable { path: path.to_vec(), reason: reason.into() }
}

fn node<'a>(p: &'a Proof, at: &[usize]) -> Result<&'a Proof, RewriteError> {
    p.get(at).ok_or_else(|| RewriteError::NoNode(at.to_vec()))
}

/// Splices `new` in at `at`, provided it proves the same sequent.
fn splice(p: &Proof, at: &[usize], new: Result<Proof, RuleViolation>) -> Result<Proof, RewriteError> {
    let new = new.map_err(|v| not_applicable(at, format!("rebuilt rule fails: {v}")))?;
    let old = &p.get(at).expect("checked path").conclusion;
    if &new.conclusion != old {
        return Err(not_applicable(at, format!("rewrite would conclude {} instead of {old}", new.conclusion)));
    }
    Ok(p.replace(at, new))
}

/// Replaces the axiom introducing `id` by `delta`, rebuilding every rule on
/// the way down.
fn graft(p: &Proof, id: &OccId, delta: &Proof) -> Result<Proof, RuleViolation> {
    if !p.conclusion.lhs.contains(id) {
        return Ok(p.clone());
    }
    if p.rule == Rule::Axiom {
        return Ok(delta.clone());
    }
    let premises = p.premises.iter().map(|q| graft(q, id, delta)).collect::<Result<Vec<_>, _>>()?;
    if p.rule == Rule::Entropy {
        let lhs = p.conclusion.lhs.replace_leaf(id, &delta.conclusion.lhs).expect("id is present");
        Proof::entropy(premises.into_iter().next().expect("entropy premise"), lhs)
    } else {
        Proof::apply(p.rule.clone(), premises)
    }
}

/// Contracts a plain redex. Implication redexes graft the argument onto the
/// discharged hypothesis, left product redexes graft both components onto
/// the carved pair, right product redexes keep the type premise.
pub fn contract(p: &Proof, site: &RedexSite) -> Result<Proof, RewriteError> {
    let at = &site.location;
    let e = node(p, at)?;
    let mut here = Vec::new();
    redexes_at(p, at, &mut here);
    if !here.contains(site) {
        return Err(not_applicable(at, format!("no {} here", site.kind)));
    }
    let new = match site.kind {
        RedexKind::LtoRedex | RedexKind::LfromRedex | RedexKind::LltoRedex => {
            let i = e.kind().principal_premise().expect("elimination");
            let intro = &e.premises[i];
            let arg = &e.premises[1 - i];
            let d = intro.rule.discharged().expect("introduction");
            graft(&intro.premises[0], d, arg)
        }
        RedexKind::OdotLeft | RedexKind::OtimesLeft => {
            let (a, b) = e.rule.carved().expect("product elimination");
            let intro = &e.premises[0];
            graft(&e.premises[1], a, &intro.premises[0]).and_then(|q| graft(&q, b, &intro.premises[1]))
        }
        RedexKind::OdotRight | RedexKind::OtimesRight => Ok(e.premises[0].clone()),
    };
    splice(p, at, new)
}

/// Moves the product elimination at `at` above the rule producing its body,
/// into the premise of that rule holding both carved hypotheses.
pub fn raise_product_elim(p: &Proof, at: &[usize]) -> Result<Proof, RewriteError> {
    let r = node(p, at)?;
    let Some((a, b)) = r.rule.carved() else {
        return Err(not_applicable(at, "not a product elimination"));
    };
    let upper = &r.premises[1];
    if upper.premises.is_empty() {
        return Err(not_applicable(at, "the body is a leaf"));
    }
    let Some(j) = upper.premises.iter().position(|q| q.conclusion.lhs.contains(a) && q.conclusion.lhs.contains(b)) else {
        return Err(not_applicable(at, format!("`{a}` and `{b}` are joined by the rule above")));
    };
    let new = Proof::apply(r.rule.clone(), vec![r.premises[0].clone(), upper.premises[j].clone()]).and_then(|inner| {
        let mut premises = upper.premises.clone();
        premises[j] = inner;
        if upper.rule == Rule::Entropy {
            Proof::entropy(premises.pop().expect("entropy premise"), r.conclusion.lhs.clone())
        } else {
            upper.reapply(premises)
        }
    });
    splice(p, at, new)
}

/// Moves the product elimination or entropy producing the principal premise
/// of the implicative elimination at `at` below it.
pub fn raise_implicative_elim(p: &Proof, at: &[usize]) -> Result<Proof, RewriteError> {
    let r = node(p, at)?;
    if !r.kind().is_implicative_elim() {
        return Err(not_applicable(at, "not an implicative elimination"));
    }
    let i = r.kind().principal_premise().expect("elimination");
    let q = &r.premises[i];
    let mut premises = r.premises.clone();
    let new = match q.kind() {
        k if k.is_product_elim() => {
            premises[i] = q.premises[1].clone();
            Proof::apply(r.rule.clone(), premises).and_then(|inner| Proof::apply(q.rule.clone(), vec![q.premises[0].clone(), inner]))
        }
        RuleKind::Entropy => {
            premises[i] = q.premises[0].clone();
            Proof::apply(r.rule.clone(), premises).and_then(|inner| Proof::entropy(inner, r.conclusion.lhs.clone()))
        }
        _ => return Err(not_applicable(at, "the principal premise is neither a product elimination nor entropy")),
    };
    splice(p, at, new)
}

/// Moves the product elimination at `at` above the product elimination or
/// entropy producing its type premise: `R(P(d0, d1), d2)` becomes
/// `P(d0, R(d1, d2))` and `R(E(d1), d2)` becomes `E(R(d1, d2))`.
pub fn lift_through_type_premise(p: &Proof, at: &[usize]) -> Result<Proof, RewriteError> {
    let r = node(p, at)?;
    if !r.kind().is_product_elim() {
        return Err(not_applicable(at, "not a product elimination"));
    }
    let t = &r.premises[0];
    let body = r.premises[1].clone();
    let new = match t.kind() {
        k if k.is_product_elim() => Proof::apply(r.rule.clone(), vec![t.premises[1].clone(), body])
            .and_then(|inner| Proof::apply(t.rule.clone(), vec![t.premises[0].clone(), inner])),
        RuleKind::Entropy => Proof::apply(r.rule.clone(), vec![t.premises[0].clone(), body])
            .and_then(|inner| Proof::entropy(inner, r.conclusion.lhs.clone())),
        _ => return Err(not_applicable(at, "the type premise is neither a product elimination nor entropy")),
    };
    splice(p, at, new)
}

/// Path of the product elimination carving `pair`; carved pairs are unique
/// because occurrence ids are.
fn locate(p: &Proof, pair: &(OccId, OccId)) -> Path {
    p.paths()
        .into_iter()
        .find(|path| {
            p.get(path).expect("path").rule.carved().is_some_and(|(a, b)| (a, b) == (&pair.0, &pair.1))
        })
        .expect("product elimination is still present")
}

fn carved_pair(p: &Proof, at: &[usize]) -> (OccId, OccId) {
    let (a, b) = p.get(at).expect("path").rule.carved().expect("product elimination");
    (a.clone(), b.clone())
}

/// One step of the Lambek product-raising phase: the product elimination
/// at `at` climbs over the product eliminations above it and then over the
/// next other rule, which lowers its `d_conj` by one.
///
/// Product eliminations below it that it reaches through product
/// eliminations only, and whose hypotheses come from its type premise,
/// would see their own distance grow; they are first moved into that type
/// premise. Those with one hypothesis from its type premise and the other
/// from the premise it enters are dragged along into that premise, so the
/// total distance drops by exactly one.
pub fn lambek_h_step(p: &Proof, at: &[usize]) -> Result<Proof, RewriteError> {
    if !node(p, at)?.kind().is_product_elim() {
        return Err(not_applicable(at, "not a product elimination"));
    }
    if d_conj(p, at).unwrap_or(0) == 0 {
        return Err(not_applicable(at, "already directly below the rule joining its hypotheses"));
    }
    let me = carved_pair(p, at);
    let from_type = p.get(at).expect("path").premises[0].conclusion.lhs.ids();
    let mut p = p.clone();

    // Ancestors to move into the type premise, deepest first.
    let mut waiting: Vec<(OccId, OccId)> = Vec::new();
    for n in (0..at.len()).rev() {
        let q = p.get(&at[..n]).expect("prefix");
        if !q.kind().is_product_elim() {
            break;
        }
        let (a, b) = q.rule.carved().expect("product elimination");
        if from_type.contains(a) && from_type.contains(b) {
            waiting.push((a.clone(), b.clone()));
        }
    }
    for pair in waiting {
        loop {
            let r_at = locate(&p, &me);
            let q_at = locate(&p, &pair);
            if q_at.len() > r_at.len() && q_at.starts_with(&r_at) {
                break;
            }
            p = raise_product_elim(&p, &q_at)?;
        }
    }

    let dragged = dependants(&p, &locate(&p, &me));
    climb(&mut p, &me)?;
    for pair in &dragged {
        climb(&mut p, pair)?;
    }
    Ok(p)
}

/// The product eliminations below the one at `at`, reached through product
/// eliminations only, that need a hypothesis from its type premise (or from
/// that of another dependant) and otherwise only hypotheses of the premise
/// it is about to enter. Nearest first.
fn dependants(p: &Proof, at: &[usize]) -> Vec<(OccId, OccId)> {
    let mut top = at.to_vec();
    while p.get(&top).expect("path").kind().is_product_elim() {
        top.push(1);
    }
    top.pop();
    let (a, _) = carved_pair(p, at);
    let crossed = p.get(&child(&top, 1)).expect("body");
    let entered = crossed
        .premises
        .iter()
        .map(|q| q.conclusion.lhs.ids())
        .find(|ids| ids.contains(&a))
        .unwrap_or_default();
    let mut needed = p.get(at).expect("path").premises[0].conclusion.lhs.ids();
    let mut out = Vec::new();
    for n in (0..at.len()).rev() {
        let q = p.get(&at[..n]).expect("prefix");
        if !q.kind().is_product_elim() {
            break;
        }
        let (x, y) = q.rule.carved().expect("product elimination");
        let inside = |id: &OccId| needed.contains(id) || entered.contains(id);
        if (needed.contains(x) || needed.contains(y)) && inside(x) && inside(y) {
            out.push((x.clone(), y.clone()));
            needed.extend(q.premises[0].conclusion.lhs.ids());
        }
    }
    out
}

/// Raises the product elimination carving `pair` over the product
/// eliminations above it and then over one other rule.
fn climb(p: &mut Proof, pair: &(OccId, OccId)) -> Result<(), RewriteError> {
    loop {
        let r_at = locate(p, pair);
        let above = p.get(&child(&r_at, 1)).expect("body");
        let crossing = !above.kind().is_product_elim();
        *p = raise_product_elim(p, &r_at)?;
        if crossing {
            return Ok(());
        }
    }
}
