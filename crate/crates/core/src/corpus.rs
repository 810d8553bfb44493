//! Proof corpora for property checks: exhaustive enumeration of small proofs
//! and a random generator.
//!
//! Both work on proof skeletons under their most general typing. Atoms act
//! as type variables while a proof is assembled, and a binary rule unifies
//! its premises' formulas instead of requiring them to be equal. Every proof
//! is a substitution instance of the enumerated skeleton with its shape, and
//! the rewrites of [`crate::normalize`] commute with substitution. So
//! enumerating skeletons covers every choice of axiom formulas.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::context::{all_orders, entropy_leq, OccId, Occurrence, SpTerm};
use crate::formula::Formula;
use crate::normalize::Mode;
use crate::proof::{Proof, Rule, RuleKind};

type Subst = HashMap<Arc<str>, Formula>;

fn resolve(f: &Formula, s: &Subst) -> Formula {
    match f {
        Formula::Atom(v) => match s.get(v) {
            Some(g) => resolve(g, s),
            None => f.clone(),
        },
        Formula::NcProd(a, b) => Formula::nc_prod(resolve(a, s), resolve(b, s)),
        Formula::CProd(a, b) => Formula::c_prod(resolve(a, s), resolve(b, s)),
        Formula::LDiv(a, b) => Formula::ldiv(resolve(a, s), resolve(b, s)),
        Formula::RDiv(a, b) => Formula::rdiv(resolve(a, s), resolve(b, s)),
        Formula::LinImp(a, b) => Formula::lin_imp(resolve(a, s), resolve(b, s)),
    }
}

fn occurs(v: &str, f: &Formula) -> bool {
    match f {
        Formula::Atom(w) => &**w == v,
        _ => f.children().into_iter().any(|c| occurs(v, c)),
    }
}

fn unify(x: &Formula, y: &Formula, s: &mut Subst) -> bool {
    let (x, y) = (resolve(x, s), resolve(y, s));
    match (&x, &y) {
        (Formula::Atom(v), Formula::Atom(w)) if v == w => true,
        (Formula::Atom(v), g) | (g, Formula::Atom(v)) => {
            if occurs(v, g) {
                return false;
            }
            s.insert(v.clone(), g.clone());
            true
        }
        (Formula::NcProd(a, b), Formula::NcProd(c, d))
        | (Formula::CProd(a, b), Formula::CProd(c, d))
        | (Formula::LDiv(a, b), Formula::LDiv(c, d))
        | (Formula::RDiv(a, b), Formula::RDiv(c, d))
        | (Formula::LinImp(a, b), Formula::LinImp(c, d)) => unify(a, c, s) && unify(b, d, s),
        _ => false,
    }
}

const NAMES: [&str; 25] =
    ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z"];

fn var_name(i: usize) -> String {
    if i < NAMES.len() {
        NAMES[i].to_string()
    } else {
        format!("v{i}")
    }
}

/// Renames atoms by first appearance (right-hand sides in pre-order) and
/// hypotheses by [`Proof::alpha_normalize`], so that skeletons equal up to
/// naming become equal.
pub fn canonical(p: &Proof) -> Proof {
    let mut order: Vec<Arc<str>> = Vec::new();
    fn walk(p: &Proof, order: &mut Vec<Arc<str>>) {
        collect_atoms(&p.conclusion.rhs, order);
        p.premises.iter().for_each(|q| walk(q, order));
    }
    walk(p, &mut order);
    let map: HashMap<Arc<str>, Formula> =
        order.iter().enumerate().map(|(i, v)| (v.clone(), Formula::atom(&var_name(i)))).collect();
    p.map_formulas(&|f| resolve_once(f, &map)).alpha_normalize()
}

fn collect_atoms(f: &Formula, order: &mut Vec<Arc<str>>) {
    match f {
        Formula::Atom(v) => {
            if !order.contains(v) {
                order.push(v.clone());
            }
        }
        _ => f.children().into_iter().for_each(|c| collect_atoms(c, order)),
    }
}

/// Simultaneous substitution (no chasing of bindings).
fn resolve_once(f: &Formula, s: &HashMap<Arc<str>, Formula>) -> Formula {
    match f {
        Formula::Atom(v) => s.get(v).cloned().unwrap_or_else(|| f.clone()),
        Formula::NcProd(a, b) => Formula::nc_prod(resolve_once(a, s), resolve_once(b, s)),
        Formula::CProd(a, b) => Formula::c_prod(resolve_once(a, s), resolve_once(b, s)),
        Formula::LDiv(a, b) => Formula::ldiv(resolve_once(a, s), resolve_once(b, s)),
        Formula::RDiv(a, b) => Formula::rdiv(resolve_once(a, s), resolve_once(b, s)),
        Formula::LinImp(a, b) => Formula::lin_imp(resolve_once(a, s), resolve_once(b, s)),
    }
}

/// Renames `q`'s hypotheses and atoms away from those of a canonical proof.
fn apart(q: &Proof, tag: &str) -> Proof {
    let mut order = Vec::new();
    fn walk(p: &Proof, order: &mut Vec<Arc<str>>) {
        collect_atoms(&p.conclusion.rhs, order);
        p.premises.iter().for_each(|q| walk(q, order));
    }
    walk(q, &mut order);
    let map: HashMap<Arc<str>, Formula> =
        order.iter().map(|v| (v.clone(), Formula::atom(&format!("{tag}{v}")))).collect();
    q.map_formulas(&|f| resolve_once(f, &map)).rename(&|id| OccId::new(&format!("{tag}{id}")))
}

fn fresh(tag: &str) -> Formula {
    Formula::atom(&format!("{tag}fresh"))
}

fn mode_kinds(mode: Mode) -> (&'static [RuleKind], &'static [RuleKind]) {
    match mode {
        Mode::Lambek => (
            &[RuleKind::LtoI, RuleKind::LfromI],
            &[RuleKind::LtoE, RuleKind::LfromE, RuleKind::OdotI, RuleKind::OdotE],
        ),
        Mode::Pcmll => (
            &[RuleKind::LtoI, RuleKind::LfromI, RuleKind::LltoI, RuleKind::Entropy],
            &[
                RuleKind::LtoE,
                RuleKind::LfromE,
                RuleKind::LltoE,
                RuleKind::OdotI,
                RuleKind::OdotE,
                RuleKind::OtimesI,
                RuleKind::OtimesE,
            ],
        ),
    }
}

/// Every way to apply the unary rule `kind` to `p`.
fn unary(p: &Proof, kind: RuleKind) -> Vec<Proof> {
    let lhs = &p.conclusion.lhs;
    let mut out = Vec::new();
    let discharge = |d: &OccId, rule: Rule, out: &mut Vec<Proof>| {
        if let Ok(q) = Proof::apply(rule, vec![p.clone()]) {
            debug_assert!(q.rule.discharged() == Some(d));
            out.push(q);
        }
    };
    match kind {
        RuleKind::LtoI | RuleKind::LfromI | RuleKind::LltoI => {
            let candidates: Vec<&Occurrence> = match lhs {
                SpTerm::Leaf(o) => vec![o],
                SpTerm::Seq(cs) if kind == RuleKind::LtoI => leaf(&cs[0]).into_iter().collect(),
                SpTerm::Seq(cs) if kind == RuleKind::LfromI => leaf(&cs[cs.len() - 1]).into_iter().collect(),
                SpTerm::Par(cs) if kind == RuleKind::LltoI => cs.iter().filter_map(leaf).collect(),
                _ => Vec::new(),
            };
            for o in candidates {
                let rule = match kind {
                    RuleKind::LtoI => Rule::LtoI(o.id.clone()),
                    RuleKind::LfromI => Rule::LfromI(o.id.clone()),
                    _ => Rule::LltoI(o.id.clone()),
                };
                discharge(&o.id, rule, &mut out);
            }
        }
        RuleKind::Entropy => {
            let leaves: Vec<Occurrence> = lhs.leaves().into_iter().cloned().collect();
            if leaves.len() >= 2 {
                for t in all_orders(&leaves) {
                    if &t != lhs && entropy_leq(&t, lhs) {
                        out.extend(Proof::entropy(p.clone(), t).ok());
                    }
                }
            }
        }
        _ => unreachable!("not a unary rule"),
    }
    out
}

fn leaf(t: &SpTerm) -> Option<&Occurrence> {
    match t {
        SpTerm::Leaf(o) => Some(o),
        _ => None,
    }
}

/// Pairs of hypotheses a product elimination of the given kind may carve.
fn carvable(lhs: &SpTerm, kind: RuleKind) -> Vec<(Occurrence, Occurrence)> {
    let mut out = Vec::new();
    fn go(t: &SpTerm, kind: RuleKind, out: &mut Vec<(Occurrence, Occurrence)>) {
        match t {
            SpTerm::Seq(cs) => {
                if kind == RuleKind::OdotE {
                    for w in cs.windows(2) {
                        if let (Some(a), Some(b)) = (leaf(&w[0]), leaf(&w[1])) {
                            out.push((a.clone(), b.clone()));
                        }
                    }
                }
                cs.iter().for_each(|c| go(c, kind, out));
            }
            SpTerm::Par(cs) => {
                if kind == RuleKind::OtimesE {
                    let ls: Vec<&Occurrence> = cs.iter().filter_map(leaf).collect();
                    for a in &ls {
                        for b in &ls {
                            if a.id != b.id {
                                out.push(((*a).clone(), (*b).clone()));
                            }
                        }
                    }
                }
                cs.iter().for_each(|c| go(c, kind, out));
            }
            _ => {}
        }
    }
    go(lhs, kind, &mut out);
    out
}

/// Every way to apply the binary rule `kind` to `p` and a renamed-apart `q`
/// after unifying their formulas.
fn binary(p: &Proof, q: &Proof, kind: RuleKind) -> Vec<Proof> {
    let tag = "Z";
    let beta = fresh(tag);
    let mut goals: Vec<(Vec<(Formula, Formula)>, Rule)> = Vec::new();
    let (x, y) = (&p.conclusion.rhs, &q.conclusion.rhs);
    match kind {
        RuleKind::LtoE => goals.push((vec![(y.clone(), Formula::ldiv(x.clone(), beta))], Rule::LtoE)),
        RuleKind::LltoE => goals.push((vec![(y.clone(), Formula::lin_imp(x.clone(), beta))], Rule::LltoE)),
        RuleKind::LfromE => goals.push((vec![(x.clone(), Formula::rdiv(beta, y.clone()))], Rule::LfromE)),
        RuleKind::OdotI => goals.push((Vec::new(), Rule::OdotI)),
        RuleKind::OtimesI => goals.push((Vec::new(), Rule::OtimesI)),
        RuleKind::OdotE | RuleKind::OtimesE => {
            for (a, b) in carvable(&q.conclusion.lhs, kind) {
                let prod = if kind == RuleKind::OdotE {
                    Formula::nc_prod(a.formula.clone(), b.formula.clone())
                } else {
                    Formula::c_prod(a.formula.clone(), b.formula.clone())
                };
                let rule = if kind == RuleKind::OdotE { Rule::OdotE(a.id, b.id) } else { Rule::OtimesE(a.id, b.id) };
                goals.push((vec![(x.clone(), prod)], rule));
            }
        }
        _ => unreachable!("not a binary rule"),
    }
    let mut out = Vec::new();
    for (eqs, rule) in goals {
        let mut s = Subst::new();
        if eqs.iter().all(|(l, r)| unify(l, r, &mut s)) {
            let sub = |f: &Formula| resolve(f, &s);
            let premises = vec![p.map_formulas(&sub), q.map_formulas(&sub)];
            out.extend(Proof::apply(rule, premises).ok());
        }
    }
    out
}

/// All proof skeletons with at most `max_nodes` rules, grouped by size
/// (index 0 is empty). Each is canonical under [`canonical`]; axioms carry
/// distinct atoms unless a rule forces them equal.
pub fn enumerate(mode: Mode, max_nodes: usize) -> Vec<Vec<Proof>> {
    let mut levels: Vec<Vec<Proof>> = (0..=max_nodes).map(|_| Vec::new()).collect();
    for_each_skeleton(mode, max_nodes, |p| levels[p.size()].push(p.clone()));
    levels
}

/// Calls `visit` once per skeleton of [`enumerate`], smallest first, without
/// keeping the largest level in memory. That level is deduplicated by a
/// 128-bit fingerprint of the canonical proof.
pub fn for_each_skeleton(mode: Mode, max_nodes: usize, mut visit: impl FnMut(&Proof)) {
    let (unaries, binaries) = mode_kinds(mode);
    let mut levels: Vec<Vec<Proof>> = vec![Vec::new()];
    for n in 1..=max_nodes {
        let last = n == max_nodes;
        let mut seen: HashSet<u128> = HashSet::new();
        let mut level = Vec::new();
        let mut keep = |q: Proof| {
            let c = canonical(&q);
            if seen.insert(fingerprint(&c)) {
                visit(&c);
                if !last {
                    level.push(c);
                }
            }
        };
        if n == 1 {
            keep(Proof::axiom("h0", Formula::atom("a")));
        }
        for p in levels.get(n - 1).into_iter().flatten() {
            for &k in unaries {
                unary(p, k).into_iter().for_each(&mut keep);
            }
        }
        for i in 1..n.saturating_sub(1) {
            let j = n - 1 - i;
            for p in &levels[i] {
                for q in &levels[j] {
                    let q = apart(q, "Y");
                    for &k in binaries {
                        binary(p, &q, k).into_iter().for_each(&mut keep);
                    }
                }
            }
        }
        levels.push(level);
    }
}

fn fingerprint(p: &Proof) -> u128 {
    let half = |salt: u8| {
        let mut h = DefaultHasher::new();
        salt.hash(&mut h);
        p.hash(&mut h);
        h.finish() as u128
    };
    half(0) << 64 | half(1)
}

/// A random proof with at most `max_nodes` rules whose formulas are built
/// from `atoms`: a random skeleton, with its remaining type variables then
/// replaced by random atoms.
pub fn random_proof(rng: &mut impl Rng, mode: Mode, max_nodes: usize, atoms: &[&str]) -> Proof {
    assert!(max_nodes >= 1 && !atoms.is_empty());
    let mut counter = 0usize;
    let skeleton = loop {
        let n = rng.gen_range(1..=max_nodes);
        if let Some(p) = grow(rng, mode, n, &mut counter, 8) {
            break p;
        }
    };
    let mut vars = Vec::new();
    fn walk(p: &Proof, order: &mut Vec<Arc<str>>) {
        collect_atoms(&p.conclusion.rhs, order);
        p.premises.iter().for_each(|q| walk(q, order));
    }
    walk(&skeleton, &mut vars);
    let map: HashMap<Arc<str>, Formula> =
        vars.into_iter().map(|v| (v, Formula::atom(atoms.choose(rng).expect("atoms")))).collect();
    skeleton.map_formulas(&|f| resolve_once(f, &map)).alpha_normalize()
}

/// A random skeleton with exactly `n` rules, or `None` after `tries` failed
/// attempts at some level.
fn grow(rng: &mut impl Rng, mode: Mode, n: usize, counter: &mut usize, tries: usize) -> Option<Proof> {
    *counter += 1;
    let id = *counter;
    if n == 1 {
        return Some(Proof::axiom(OccId::new(&format!("x{id}")), Formula::atom(&format!("t{id}"))));
    }
    let (unaries, binaries) = mode_kinds(mode);
    for _ in 0..tries {
        // Binary rules dominate: they are where the types get interesting.
        if n == 2 || rng.gen_bool(0.3) {
            let kind = *unaries.choose(rng).expect("unary rules");
            let p = grow(rng, mode, n - 1, counter, tries)?;
            if let Some(q) = unary(&p, kind).choose(rng) {
                return Some(q.clone());
            }
        } else {
            let kind = *binaries.choose(rng).expect("binary rules");
            let i = rng.gen_range(1..n - 1);
            let p = grow(rng, mode, i, counter, tries)?;
            let q = grow(rng, mode, n - 1 - i, counter, tries)?;
            let q = apart(&q, &format!("Y{id}"));
            if let Some(r) = binary(&p, &q, kind).choose(rng) {
                return Some(r.clone());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::normalize::{canonical_otimes_chains, normalize, terminal_forms};
    use crate::proof::check;

    fn counts(mode: Mode, max: usize) -> Vec<usize> {
        enumerate(mode, max).iter().skip(1).map(|l| l.len()).collect()
    }

    #[test]
    fn skeleton_counts() {
        // Up to three nodes by hand: the axiom; one implication introduction
        // per direction; one binary rule over two axioms per rule. Beyond
        // that the numbers are frozen from this enumerator.
        assert_eq!(counts(Mode::Lambek, 6), [1, 2, 3, 16, 59, 146]);
        assert_eq!(counts(Mode::Pcmll, 6), [1, 3, 5, 37, 186, 669]);
    }

    #[test]
    fn skeletons_are_canonical_checked_and_distinct() {
        for mode in [Mode::Lambek, Mode::Pcmll] {
            let mut seen = HashSet::new();
            for (n, level) in enumerate(mode, 6).iter().enumerate() {
                for p in level {
                    assert_eq!(p.size(), n);
                    check(p).unwrap();
                    assert_eq!(&canonical(p), p);
                    assert!(mode == Mode::Pcmll || p.is_lambek());
                    assert!(seen.insert(p.clone()), "duplicate {p}");
                }
            }
        }
    }

    #[test]
    fn strategy_reaches_the_only_normal_form_of_small_proofs() {
        for mode in [Mode::Lambek, Mode::Pcmll] {
            for_each_skeleton(mode, 7, |p| {
                let out = normalize(p, mode, None).unwrap();
                assert!(out.normal && out.measure_violations().is_empty(), "{p}");
                let nf = canonical_otimes_chains(&out.proof).alpha_normalize();
                for q in terminal_forms(p, mode) {
                    assert_eq!(canonical_otimes_chains(&q).alpha_normalize(), nf, "{p}");
                }
            });
        }
    }

    #[test]
    fn random_proofs_are_checked_and_seeded() {
        for mode in [Mode::Lambek, Mode::Pcmll] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut sizes = HashSet::new();
            for _ in 0..300 {
                let p = random_proof(&mut rng, mode, 12, &["a", "b"]);
                check(&p).unwrap();
                assert!(p.size() <= 12);
                assert!(mode == Mode::Pcmll || p.is_lambek());
                sizes.insert(p.size());
            }
            assert!(sizes.len() > 5, "{sizes:?}");
            let again = |seed| random_proof(&mut ChaCha8Rng::seed_from_u64(seed), mode, 12, &["a", "b"]);
            assert_eq!(again(3), again(3));
        }
    }
}
