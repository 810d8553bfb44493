//! Redex detection, the rewrite steps, the two termination measures, the
//! normalization strategies and the sub-formula check.
//!
//! A k-extended-redex is an elimination whose principal premise (the type
//! premise, for product eliminations) is produced, after k rules that keep
//! the right-hand side, by the matching introduction. Only product
//! eliminations (through their body) and entropy keep the right-hand side,
//! so those are the only rules the search walks through.

mod rewrite;
mod strategy;

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{subformulas, Formula};
use crate::proof::{Path, Proof, RuleKind};

pub use rewrite::{
    contract, lambek_h_step, lift_through_type_premise, raise_implicative_elim, raise_product_elim, RewriteError,
};
pub use strategy::{canonical_otimes_chains, normalize, successors, terminal_forms, unnest_product_elims, NormalizeError, Outcome, Step, StepKind};

/// Which calculus a proof is normalized in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Lambek,
    Pcmll,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lambek => "lambek",
            Mode::Pcmll => "pcmll",
        })
    }
}

/// A lexicographically ordered triple: `⟨n, h, g⟩` for the Lambek
/// fragment, `⟨r, e, g⟩` for the full calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Measure {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RedexKind {
    LfromRedex,
    LtoRedex,
    LltoRedex,
    OdotLeft,
    OdotRight,
    OtimesLeft,
    OtimesRight,
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RedexKind::LfromRedex => "lfrom-redex",
            RedexKind::LtoRedex => "lto-redex",
            RedexKind::LltoRedex => "llto-redex",
            RedexKind::OdotLeft => "odot-left-redex",
            RedexKind::OdotRight => "odot-right-redex",
            RedexKind::OtimesLeft => "otimes-left-redex",
            RedexKind::OtimesRight => "otimes-right-redex",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RedexSite {
    pub kind: RedexKind,
    pub location: Path,
}

/// An elimination and its conjoined introduction, `k` rules apart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedRedex {
    pub elim: Path,
    pub intro: Path,
    pub k: usize,
}

fn child(path: &[usize], i: usize) -> Path {
    let mut p = path.to_vec();
    p.push(i);
    p
}

/// Walks up from `start` through product eliminations (via their body) and
/// entropy until some other rule; returns that rule's path and the number
/// of rules passed.
fn walk_preserving(p: &Proof, start: Path) -> (Path, usize) {
    let mut path = start;
    let mut k = 0;
    loop {
        let node = p.get(&path).expect("walk path");
        let next = match node.kind() {
            RuleKind::Entropy => 0,
            k if k.is_product_elim() => 1,
            _ => return (path, k),
        };
        path.push(next);
        k += 1;
    }
}

/// The extended redex whose elimination is at `elim`, if any. For product
/// eliminations this is the left form, with the introduction feeding the
/// type premise.
pub fn extended_redex_at(p: &Proof, elim: &[usize]) -> Option<ExtendedRedex> {
    let node = p.get(elim)?;
    let kind = node.kind();
    let intro = kind.matching_intro()?;
    let start = if kind.is_product_elim() { 0 } else { kind.principal_premise()? };
    let (top, k) = walk_preserving(p, child(elim, start));
    let t = p.get(&top)?;
    let target = crate::proof::eliminated_formula(node)?;
    (t.kind() == intro && &t.conclusion.rhs == target).then(|| ExtendedRedex { elim: elim.to_vec(), intro: top, k })
}

/// Whether the product elimination at `elim` has, as its body, the matching
/// introduction applied to the two carved axioms (entropy steps between
/// them can only be identities and are skipped).
fn right_redex_at(p: &Proof, elim: &[usize]) -> bool {
    let Some(node) = p.get(elim) else { return false };
    let Some((a, b)) = node.rule.carved() else { return false };
    let intro = node.kind().matching_intro().expect("product elimination");
    let mut body = &node.premises[1];
    while body.kind() == RuleKind::Entropy {
        body = &body.premises[0];
    }
    body.kind() == intro
        && body.conclusion.rhs == node.premises[0].conclusion.rhs
        && body.premises[0].rule == crate::proof::Rule::Axiom
        && body.premises[1].rule == crate::proof::Rule::Axiom
        && body.premises[0].conclusion.lhs.contains(a)
        && body.premises[1].conclusion.lhs.contains(b)
}

fn redexes_at(p: &Proof, path: &[usize], out: &mut Vec<RedexSite>) {
    let node = p.get(path).expect("path");
    let site = |kind| RedexSite { kind, location: path.to_vec() };
    if extended_redex_at(p, path).is_some_and(|r| r.k == 0) {
        out.push(site(match node.kind() {
            RuleKind::LtoE => RedexKind::LtoRedex,
            RuleKind::LfromE => RedexKind::LfromRedex,
            RuleKind::LltoE => RedexKind::LltoRedex,
            RuleKind::OdotE => RedexKind::OdotLeft,
            _ => RedexKind::OtimesLeft,
        }));
    }
    if right_redex_at(p, path) {
        out.push(site(if node.kind() == RuleKind::OdotE { RedexKind::OdotRight } else { RedexKind::OtimesRight }));
    }
}

/// Every plain redex, leftmost-innermost first (post-order).
pub fn find_redexes(p: &Proof) -> Vec<RedexSite> {
    let mut out = Vec::new();
    for path in p.paths_postorder() {
        redexes_at(p, &path, &mut out);
    }
    out
}

/// Every extended redex (implicative and left product forms), in
/// post-order of the elimination.
pub fn find_extended_redexes(p: &Proof) -> Vec<ExtendedRedex> {
    p.paths_postorder().into_iter().filter_map(|path| extended_redex_at(p, &path)).collect()
}

/// Path of the rule where the two hypotheses carved by the product
/// elimination at `at` meet, i.e. the nearest common ancestor of their
/// axioms.
fn split_point(p: &Proof, at: &[usize]) -> Option<Path> {
    let node = p.get(at)?;
    let (a, b) = node.rule.carved()?;
    let body = &node.premises[1];
    let pa = body.hypothesis_path(a)?;
    let pb = body.hypothesis_path(b)?;
    let common = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
    let mut out = child(at, 1);
    out.extend_from_slice(&pa[..common]);
    Some(out)
}

/// Number of rules other than product eliminations strictly between the
/// product elimination at `at` and the rule joining its two carved
/// hypotheses.
pub fn d_conj(p: &Proof, at: &[usize]) -> Option<usize> {
    let split = split_point(p, at)?;
    let count = (at.len() + 1..split.len())
        .filter(|&n| !p.get(&split[..n]).expect("prefix").kind().is_product_elim())
        .count();
    Some(count)
}

fn least(ks: Vec<usize>) -> usize {
    ks.into_iter().min().unwrap_or(0)
}

/// `⟨n, h, g⟩`: rule count, total `d_conj` over product eliminations, and
/// the least `k` among product extended redexes (0 when there is none).
pub fn measure_l(p: &Proof) -> Measure {
    let mut h = 0;
    let mut gs = Vec::new();
    for path in p.paths() {
        if p.get(&path).expect("path").kind().is_product_elim() {
            h += d_conj(p, &path).unwrap_or(0);
            if let Some(r) = extended_redex_at(p, &path) {
                gs.push(r.k);
            }
        }
    }
    Measure { a: p.size(), b: h, c: least(gs) }
}

/// `⟨r, e, g⟩`: rule count, the least `k` among implicative extended
/// redexes and the least among product ones (0 when there is none).
pub fn measure_pcmll(p: &Proof) -> Measure {
    let (mut es, mut gs) = (Vec::new(), Vec::new());
    for r in find_extended_redexes(p) {
        if p.get(&r.elim).expect("elim").kind().is_product_elim() {
            gs.push(r.k);
        } else {
            es.push(r.k);
        }
    }
    Measure { a: p.size(), b: least(es), c: least(gs) }
}

pub fn measure(p: &Proof, mode: Mode) -> Measure {
    match mode {
        Mode::Lambek => measure_l(p),
        Mode::Pcmll => measure_pcmll(p),
    }
}

/// No redex or extended redex of any kind remains; in the Lambek fragment
/// every product elimination also sits directly below the rule joining its
/// hypotheses, up to other product eliminations.
pub fn is_normal(p: &Proof, mode: Mode) -> bool {
    if !find_redexes(p).is_empty() || !find_extended_redexes(p).is_empty() {
        return false;
    }
    match mode {
        Mode::Pcmll => true,
        Mode::Lambek => p
            .paths()
            .iter()
            .filter(|path| p.get(path).expect("path").kind().is_product_elim())
            .all(|path| d_conj(p, path) == Some(0)),
    }
}

/// A formula that is not a sub-formula of any hypothesis, proper axiom or
/// the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaViolation {
    pub path: Path,
    pub formula: Formula,
}

impl fmt::Display for SubformulaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {} is not a sub-formula of a hypothesis or the conclusion", crate::proof::fmt_path(&self.path), self.formula)
    }
}

/// Checks that every formula of every sequent is a sub-formula of an open
/// hypothesis of the conclusion, of a proper axiom used, or of the
/// conclusion formula. Offending nodes are reported in pre-order by their
/// right-hand side; a hypothesis formula is the right-hand side of its axiom.
pub fn check_subformula_property(p: &Proof) -> Result<(), Vec<SubformulaViolation>> {
    let mut universe: BTreeSet<Formula> = subformulas(&p.conclusion.rhs);
    for o in p.conclusion.lhs.leaves() {
        universe.extend(subformulas(&o.formula));
    }
    for path in p.paths() {
        let node = p.get(&path).expect("path");
        if node.kind() == RuleKind::ProperAxiom {
            universe.extend(subformulas(&node.conclusion.rhs));
        }
    }
    let mut out = Vec::new();
    for path in p.paths() {
        let node = p.get(&path).expect("path");
        if !universe.contains(&node.conclusion.rhs) {
            out.push(SubformulaViolation { path, formula: node.conclusion.rhs.clone() });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests;
