//! The deterministic normalization loops and the exhaustive successor
//! relation used to cross-check them.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::proof::{fmt_path, Path, Proof, RuleKind};

use super::rewrite::{
    contract, lambek_h_step, lift_through_type_premise, raise_implicative_elim, raise_product_elim, RewriteError,
};
use super::{d_conj, find_extended_redexes, find_redexes, is_normal, measure, Measure, Mode, RedexKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Contract(RedexKind),
    /// A product elimination climbs towards the rule joining its hypotheses.
    RaiseProduct,
    /// A product elimination or entropy moves below an implicative
    /// elimination.
    RaiseImplicative,
    /// A product elimination moves above the one producing its type premise.
    LiftProduct,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Contract(k) => write!(f, "contract {k}"),
            StepKind::RaiseProduct => f.write_str("raise-product"),
            StepKind::RaiseImplicative => f.write_str("raise-implicative"),
            StepKind::LiftProduct => f.write_str("lift-product"),
        }
    }
}

/// One rewrite and the measure of the proof it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub path: Path,
    pub measure: Measure,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub proof: Proof,
    pub initial: Measure,
    pub steps: Vec<Step>,
    /// The result has no redex left; false when fuel ran out or the
    /// strategy got stuck.
    pub normal: bool,
    pub fuel_exhausted: bool,
}

impl Outcome {
    /// One line per step: `step <i>: <kind> at <path> measure <a,b,c>`,
    /// with the measure of the proof after the step.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("step {}: {} at {} measure {}\n", i + 1, s.kind, fmt_path(&s.path), s.measure));
        }
        out
    }

    /// Steps that failed to decrease the measure strictly.
    pub fn measure_violations(&self) -> Vec<usize> {
        let mut prev = self.initial;
        let mut out = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            if s.measure >= prev {
                out.push(i + 1);
            }
            prev = s.measure;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("not a proof of the Lambek calculus with product")]
    NotLambek,
    #[error("strategy step failed: {0}")]
    Rewrite(#[from] RewriteError),
}

/// Lowest first, then left to right.
fn lowest_first(paths: &mut [Path]) {
    paths.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
}

fn next_step(p: &Proof, mode: Mode) -> Result<Option<(StepKind, Path, Proof)>, RewriteError> {
    if let Some(site) = find_redexes(p).into_iter().next() {
        let q = contract(p, &site)?;
        return Ok(Some((StepKind::Contract(site.kind), site.location, q)));
    }
    let extended = find_extended_redexes(p);
    let least = |product: bool| -> Option<Path> {
        let mut sites: Vec<_> = extended
            .iter()
            .filter(|r| r.k > 0 && p.get(&r.elim).expect("elim").kind().is_product_elim() == product)
            .collect();
        let k = sites.iter().map(|r| r.k).min()?;
        sites.retain(|r| r.k == k);
        let mut paths: Vec<Path> = sites.into_iter().map(|r| r.elim.clone()).collect();
        lowest_first(&mut paths);
        paths.into_iter().next()
    };
    match mode {
        Mode::Pcmll => {
            if let Some(at) = least(false) {
                let q = raise_implicative_elim(p, &at)?;
                return Ok(Some((StepKind::RaiseImplicative, at, q)));
            }
        }
        Mode::Lambek => {
            let mut far: Vec<Path> = p
                .paths()
                .into_iter()
                .filter(|x| p.get(x).expect("path").kind().is_product_elim() && d_conj(p, x).unwrap_or(0) > 0)
                .collect();
            lowest_first(&mut far);
            let mut first_err = None;
            for at in far {
                match lambek_h_step(p, &at) {
                    Ok(q) => return Ok(Some((StepKind::RaiseProduct, at, q))),
                    Err(e) => {
                        first_err.get_or_insert(e);
                    }
                }
            }
            if let Some(e) = first_err {
                return Err(e);
            }
        }
    }
    if let Some(at) = least(true) {
        let q = lift_through_type_premise(p, &at)?;
        return Ok(Some((StepKind::LiftProduct, at, q)));
    }
    Ok(None)
}

/// Default step budget: ten times the squared rule count.
pub fn default_fuel(p: &Proof) -> usize {
    10 * p.size() * p.size()
}

/// Normalizes with the deterministic strategy: contract the leftmost
/// innermost redex; otherwise, in the full calculus, shorten the shortest
/// lowest implicative extended redex, and in the Lambek fragment raise the
/// lowest product elimination that is not yet directly below the rule
/// joining its hypotheses; otherwise shorten the shortest lowest product
/// extended redex.
pub fn normalize(p: &Proof, mode: Mode, fuel: Option<usize>) -> Result<Outcome, NormalizeError> {
    if mode == Mode::Lambek && !p.is_lambek() {
        return Err(NormalizeError::NotLambek);
    }
    let fuel = fuel.unwrap_or_else(|| default_fuel(p));
    let initial = measure(p, mode);
    let mut cur = p.clone();
    let mut steps = Vec::new();
    let mut fuel_exhausted = false;
    while let Some((kind, path, next)) = next_step(&cur, mode)? {
        if steps.len() == fuel {
            fuel_exhausted = true;
            break;
        }
        cur = next;
        steps.push(Step { kind, path, measure: measure(&cur, mode) });
    }
    let normal = !fuel_exhausted && is_normal(&cur, mode);
    Ok(Outcome { proof: cur, initial, steps, normal, fuel_exhausted })
}

/// Every single rewrite of `p`, at any site, that strictly decreases the
/// mode's measure. Duplicated results are dropped.
pub fn successors(p: &Proof, mode: Mode) -> Vec<(StepKind, Path, Proof)> {
    let here = measure(p, mode);
    let mut out: Vec<(StepKind, Path, Proof)> = Vec::new();
    let mut push = |kind, path: &Path, q: Result<Proof, RewriteError>| {
        if let Ok(q) = q {
            if measure(&q, mode) < here && !out.iter().any(|(_, _, r)| r == &q) {
                out.push((kind, path.clone(), q));
            }
        }
    };
    for site in find_redexes(p) {
        push(StepKind::Contract(site.kind), &site.location, contract(p, &site));
    }
    for path in p.paths() {
        let kind = p.get(&path).expect("path").kind();
        if kind.is_product_elim() {
            push(StepKind::RaiseProduct, &path, raise_product_elim(p, &path));
            if mode == Mode::Lambek {
                push(StepKind::RaiseProduct, &path, lambek_h_step(p, &path));
            }
            push(StepKind::LiftProduct, &path, lift_through_type_premise(p, &path));
        }
        if kind.is_implicative_elim() {
            push(StepKind::RaiseImplicative, &path, raise_implicative_elim(p, &path));
        }
    }
    out
}

/// The end points of every maximal rewrite sequence from `p`, where a step
/// is anything [`successors`] offers. Results are alpha-normalized, sorted
/// and deduplicated. A proof may end up here without being normal if no
/// rewrite applies to it; callers should check [`is_normal`].
pub fn terminal_forms(p: &Proof, mode: Mode) -> Vec<Proof> {
    fn go(p: &Proof, mode: Mode, memo: &mut HashMap<Proof, Vec<Proof>>) -> Vec<Proof> {
        if let Some(r) = memo.get(p) {
            return r.clone();
        }
        let next = successors(p, mode);
        let mut out: Vec<Proof> = if next.is_empty() {
            vec![p.alpha_normalize()]
        } else {
            next.iter().flat_map(|(_, _, q)| go(q, mode, memo)).collect()
        };
        out.sort_by_cached_key(|q| q.to_string());
        out.dedup();
        memo.insert(p.clone(), out.clone());
        out
    }
    go(p, mode, &mut HashMap::new())
}

/// Lifts every product elimination whose type premise is another product
/// elimination through it, `R(P(d0, d1), d2)` to `P(d0, R(d1, d2))`, until
/// none is left. Normal forms that differ only in how such eliminations
/// nest agree after this.
pub fn unnest_product_elims(p: &Proof) -> Proof {
    let mut cur = p.clone();
    'outer: loop {
        for path in cur.paths() {
            let q = cur.get(&path).expect("path");
            if q.kind().is_product_elim() && q.premises[0].kind().is_product_elim() {
                if let Ok(next) = lift_through_type_premise(&cur, &path) {
                    cur = next;
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

/// Sorts chains of commutative product eliminations stacked through their
/// bodies by the printed conclusion of their type premises, wherever two
/// neighbours are independent. Normal forms of the full calculus are only
/// unique up to such permutations.
pub fn canonical_otimes_chains(p: &Proof) -> Proof {
    let key = |q: &Proof| q.premises[0].conclusion.to_string();
    let mut cur = p.clone();
    'outer: loop {
        for path in cur.paths() {
            let upper = cur.get(&path).expect("path");
            if upper.kind() != RuleKind::OtimesE || upper.premises[1].kind() != RuleKind::OtimesE {
                continue;
            }
            let lower = &upper.premises[1];
            if key(lower) >= key(upper) {
                continue;
            }
            let swapped = Proof::apply(upper.rule.clone(), vec![upper.premises[0].clone(), lower.premises[1].clone()])
                .and_then(|inner| Proof::apply(lower.rule.clone(), vec![lower.premises[0].clone(), inner]));
            if let Ok(s) = swapped {
                if s.conclusion == upper.conclusion {
                    cur = cur.replace(&path, s);
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}
