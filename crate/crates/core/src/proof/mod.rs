//! Natural-deduction proofs: rules, the checking kernel, principal branches
//! and conjoined introduction/elimination pairs.

mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::context::{entropy_leq, find_equiv_pair, substitute, OccId, PairMode, SpTerm};
use crate::formula::Formula;

pub use text::{format_proof, format_proof_file, parse_proof, parse_proof_file, ProofFile};
pub(crate) use text::write_word;

/// Premise indices from the root down to a node.
pub type Path = Vec<usize>;

/// Formats a path as dot-separated premise indices, `root` when empty.
pub fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: SpTerm,
    pub rhs: Formula,
}

impl Sequent {
    pub fn new(lhs: SpTerm, rhs: Formula) -> Sequent {
        Sequent { lhs, rhs }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lhs.is_empty() {
            write!(f, "|- {}", self.rhs)
        } else {
            write!(f, "{} |- {}", self.lhs, self.rhs)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Axiom,
    ProperAxiom,
    LtoE,
    LfromE,
    LltoE,
    LtoI,
    LfromI,
    LltoI,
    OdotI,
    OdotE,
    OtimesI,
    OtimesE,
    Entropy,
}

impl RuleKind {
    pub const ALL: [RuleKind; 13] = [
        RuleKind::Axiom,
        RuleKind::ProperAxiom,
        RuleKind::LtoE,
        RuleKind::LfromE,
        RuleKind::LltoE,
        RuleKind::LtoI,
        RuleKind::LfromI,
        RuleKind::LltoI,
        RuleKind::OdotI,
        RuleKind::OdotE,
        RuleKind::OtimesI,
        RuleKind::OtimesE,
        RuleKind::Entropy,
    ];

    /// The name used in the proof text format.
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Axiom => "ax",
            RuleKind::ProperAxiom => "lex",
            RuleKind::LtoE => "lto_e",
            RuleKind::LfromE => "lfrom_e",
            RuleKind::LltoE => "llto_e",
            RuleKind::LtoI => "lto_i",
            RuleKind::LfromI => "lfrom_i",
            RuleKind::LltoI => "llto_i",
            RuleKind::OdotI => "odot_i",
            RuleKind::OdotE => "odot_e",
            RuleKind::OtimesI => "otimes_i",
            RuleKind::OtimesE => "otimes_e",
            RuleKind::Entropy => "entropy",
        }
    }

    pub fn from_name(name: &str) -> Option<RuleKind> {
        RuleKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            RuleKind::Axiom | RuleKind::ProperAxiom => 0,
            RuleKind::LtoI | RuleKind::LfromI | RuleKind::LltoI | RuleKind::Entropy => 1,
            _ => 2,
        }
    }

    pub fn is_product_elim(self) -> bool {
        matches!(self, RuleKind::OdotE | RuleKind::OtimesE)
    }

    pub fn is_implicative_elim(self) -> bool {
        matches!(self, RuleKind::LtoE | RuleKind::LfromE | RuleKind::LltoE)
    }

    pub fn is_elim(self) -> bool {
        self.is_product_elim() || self.is_implicative_elim()
    }

    pub fn is_intro(self) -> bool {
        matches!(
            self,
            RuleKind::LtoI | RuleKind::LfromI | RuleKind::LltoI | RuleKind::OdotI | RuleKind::OtimesI
        )
    }

    /// The introduction conjoined to this elimination.
    pub fn matching_intro(self) -> Option<RuleKind> {
        match self {
            RuleKind::LtoE => Some(RuleKind::LtoI),
            RuleKind::LfromE => Some(RuleKind::LfromI),
            RuleKind::LltoE => Some(RuleKind::LltoI),
            RuleKind::OdotE => Some(RuleKind::OdotI),
            RuleKind::OtimesE => Some(RuleKind::OtimesI),
            _ => None,
        }
    }

    /// The premise the principal branch continues through: the only premise
    /// of unary rules, the body premise of product eliminations and the
    /// implication-carrying premise of implicative eliminations.
    pub fn principal_premise(self) -> Option<usize> {
        match self {
            RuleKind::LtoI | RuleKind::LfromI | RuleKind::LltoI | RuleKind::Entropy => Some(0),
            RuleKind::LtoE | RuleKind::LltoE | RuleKind::OdotE | RuleKind::OtimesE => Some(1),
            RuleKind::LfromE => Some(0),
            _ => None,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rule instance with its bookkeeping: the discharged occurrence of an
/// implication introduction, or the carved pair `(a, b)` of a product
/// elimination.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom,
    ProperAxiom(Arc<str>),
    LtoE,
    LfromE,
    LltoE,
    LtoI(OccId),
    LfromI(OccId),
    LltoI(OccId),
    OdotI,
    OdotE(OccId, OccId),
    OtimesI,
    OtimesE(OccId, OccId),
    Entropy,
}

impl Rule {
    pub fn kind(&self) -> RuleKind {
        match self {
            Rule::Axiom => RuleKind::Axiom,
            Rule::ProperAxiom(_) => RuleKind::ProperAxiom,
            Rule::LtoE => RuleKind::LtoE,
            Rule::LfromE => RuleKind::LfromE,
            Rule::LltoE => RuleKind::LltoE,
            Rule::LtoI(_) => RuleKind::LtoI,
            Rule::LfromI(_) => RuleKind::LfromI,
            Rule::LltoI(_) => RuleKind::LltoI,
            Rule::OdotI => RuleKind::OdotI,
            Rule::OdotE(..) => RuleKind::OdotE,
            Rule::OtimesI => RuleKind::OtimesI,
            Rule::OtimesE(..) => RuleKind::OtimesE,
            Rule::Entropy => RuleKind::Entropy,
        }
    }

    pub fn discharged(&self) -> Option<&OccId> {
        match self {
            Rule::LtoI(d) | Rule::LfromI(d) | Rule::LltoI(d) => Some(d),
            _ => None,
        }
    }

    pub fn carved(&self) -> Option<(&OccId, &OccId)> {
        match self {
            Rule::OdotE(a, b) | Rule::OtimesE(a, b) => Some((a, b)),
            _ => None,
        }
    }

    fn rename(&self, f: &impl Fn(&OccId) -> OccId) -> Rule {
        match self {
            Rule::LtoI(d) => Rule::LtoI(f(d)),
            Rule::LfromI(d) => Rule::LfromI(f(d)),
            Rule::LltoI(d) => Rule::LltoI(f(d)),
            Rule::OdotE(a, b) => Rule::OdotE(f(a), f(b)),
            Rule::OtimesE(a, b) => Rule::OtimesE(f(a), f(b)),
            r => r.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Arity,
    Shape,
    Entropy,
    Equivalence,
    Discharge,
    ProperAxiom,
    DuplicateId,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Arity => "arity",
            ViolationKind::Shape => "shape",
            ViolationKind::Entropy => "entropy",
            ViolationKind::Equivalence => "equivalence",
            ViolationKind::Discharge => "discharge",
            ViolationKind::ProperAxiom => "proper axiom",
            ViolationKind::DuplicateId => "duplicate occurrence",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {}: {rule}: {kind} violation: {detail}", fmt_path(.path))]
pub struct RuleViolation {
    pub path: Path,
    pub rule: RuleKind,
    pub kind: ViolationKind,
    pub detail: String,
}

/// The proper axioms `⊢ w : T` a proof may use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    entries: BTreeMap<Arc<str>, BTreeSet<Formula>>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn insert(&mut self, word: &str, formula: Formula) {
        self.entries.entry(word.into()).or_default().insert(formula);
    }

    pub fn admits(&self, word: &str, formula: &Formula) -> bool {
        self.entries.get(word).is_some_and(|fs| fs.contains(formula))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.entries.iter().flat_map(|(w, fs)| fs.iter().map(move |f| (&**w, f)))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.values().flatten()
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct ProofNode {
    pub rule: Rule,
    pub premises: Vec<Proof>,
    pub conclusion: Sequent,
}

/// An immutable, cheaply clonable proof tree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Proof(Arc<ProofNode>);

impl std::ops::Deref for Proof {
    type Target = ProofNode;

    fn deref(&self) -> &ProofNode {
        &self.0
    }
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_proof(self))
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_proof(self))
    }
}

type Local = (ViolationKind, String);

fn local(kind: ViolationKind, detail: impl Into<String>) -> Local {
    (kind, detail.into())
}

/// The conclusion a rule yields from the given premises, for every rule
/// except the leaves and entropy (whose conclusion is not determined).
fn infer(rule: &Rule, premises: &[Proof]) -> Result<Sequent, Local> {
    use ViolationKind::*;
    let kind = rule.kind();
    if premises.len() != kind.arity() {
        return Err(local(Arity, format!("expected {} premises, found {}", kind.arity(), premises.len())));
    }
    let c = |i: usize| &premises[i].conclusion;
    match rule {
        Rule::Axiom | Rule::ProperAxiom(_) | Rule::Entropy => {
            Err(local(Shape, "conclusion is not determined by premises"))
        }
        Rule::LtoE | Rule::LltoE => {
            let (arg, fun) = (c(0), c(1));
            let (want, result) = match (&fun.rhs, kind) {
                (Formula::LDiv(a, r), RuleKind::LtoE) | (Formula::LinImp(a, r), RuleKind::LltoE) => (a, r),
                _ => return Err(local(Shape, format!("right premise concludes {}, not an implication of the right kind", fun.rhs))),
            };
            if **want != arg.rhs {
                return Err(local(Shape, format!("argument {} does not match {}", arg.rhs, want)));
            }
            let lhs = if kind == RuleKind::LtoE {
                SpTerm::seq([arg.lhs.clone(), fun.lhs.clone()])
            } else {
                SpTerm::par([arg.lhs.clone(), fun.lhs.clone()])
            };
            Ok(Sequent::new(lhs, (**result).clone()))
        }
        Rule::LfromE => {
            let (fun, arg) = (c(0), c(1));
            let Formula::RDiv(result, want) = &fun.rhs else {
                return Err(local(Shape, format!("left premise concludes {}, not a `/`", fun.rhs)));
            };
            if **want != arg.rhs {
                return Err(local(Shape, format!("argument {} does not match {}", arg.rhs, want)));
            }
            Ok(Sequent::new(SpTerm::seq([fun.lhs.clone(), arg.lhs.clone()]), (**result).clone()))
        }
        Rule::LtoI(d) | Rule::LfromI(d) | Rule::LltoI(d) => {
            let prem = c(0);
            let Some(occ) = prem.lhs.find(d) else {
                return Err(local(Discharge, format!("`{d}` is not a hypothesis of the premise")));
            };
            let rest = match (&prem.lhs, kind) {
                (SpTerm::Leaf(_), _) => Some(SpTerm::Empty),
                (SpTerm::Seq(cs), RuleKind::LtoI) if is_leaf(&cs[0], d) => Some(SpTerm::seq(cs[1..].to_vec())),
                (SpTerm::Seq(cs), RuleKind::LfromI) if is_leaf(&cs[cs.len() - 1], d) => {
                    Some(SpTerm::seq(cs[..cs.len() - 1].to_vec()))
                }
                (SpTerm::Par(cs), RuleKind::LltoI) if cs.iter().any(|x| is_leaf(x, d)) => {
                    Some(SpTerm::par(cs.iter().filter(|x| !is_leaf(x, d)).cloned()))
                }
                _ => None,
            };
            let Some(rest) = rest else {
                let place = match kind {
                    RuleKind::LtoI => "first in series with",
                    RuleKind::LfromI => "last in series with",
                    _ => "in parallel with",
                };
                return Err(local(Discharge, format!("`{d}` is not {place} the rest of the context")));
            };
            let a = occ.formula.clone();
            let f = match kind {
                RuleKind::LtoI => Formula::ldiv(a, prem.rhs.clone()),
                RuleKind::LfromI => Formula::rdiv(prem.rhs.clone(), a),
                _ => Formula::lin_imp(a, prem.rhs.clone()),
            };
            Ok(Sequent::new(rest, f))
        }
        Rule::OdotI | Rule::OtimesI => {
            let (l, r) = (c(0), c(1));
            Ok(if kind == RuleKind::OdotI {
                Sequent::new(SpTerm::seq([l.lhs.clone(), r.lhs.clone()]), Formula::nc_prod(l.rhs.clone(), r.rhs.clone()))
            } else {
                Sequent::new(SpTerm::par([l.lhs.clone(), r.lhs.clone()]), Formula::c_prod(l.rhs.clone(), r.rhs.clone()))
            })
        }
        Rule::OdotE(a, b) | Rule::OtimesE(a, b) => {
            let (ty, body) = (c(0), c(1));
            let (fa, fb, mode) = match (&ty.rhs, kind) {
                (Formula::NcProd(x, y), RuleKind::OdotE) => (x, y, PairMode::Seq),
                (Formula::CProd(x, y), RuleKind::OtimesE) => (x, y, PairMode::Par),
                _ => return Err(local(Shape, format!("left premise concludes {}, not a product of the right kind", ty.rhs))),
            };
            for (id, want) in [(a, fa), (b, fb)] {
                match body.lhs.find(id) {
                    Some(o) if o.formula == **want => {}
                    Some(o) => return Err(local(Shape, format!("`{id}` has type {}, expected {}", o.formula, want))),
                    None => return Err(local(Shape, format!("`{id}` is not a hypothesis of the right premise"))),
                }
            }
            let Some(hole) = find_equiv_pair(&body.lhs, a, b, mode) else {
                let how = if mode == PairMode::Seq { "adjacent in order" } else { "equivalent and incomparable" };
                return Err(local(Equivalence, format!("`{a}` and `{b}` are not {how} in {}", body.lhs)));
            };
            let lhs = substitute(&hole, &ty.lhs).map_err(|e| local(DuplicateId, e.to_string()))?;
            Ok(Sequent::new(lhs, body.rhs.clone()))
        }
    }
}

fn is_leaf(t: &SpTerm, id: &OccId) -> bool {
    matches!(t, SpTerm::Leaf(o) if &o.id == id)
}

impl Proof {
    /// Assembles a node without validating it; see [`check`].
    pub fn from_parts(rule: Rule, premises: Vec<Proof>, conclusion: Sequent) -> Proof {
        Proof(Arc::new(ProofNode { rule, premises, conclusion }))
    }

    /// The axiom `id:A ⊢ A`.
    pub fn axiom(id: impl Into<OccId>, formula: Formula) -> Proof {
        let lhs = SpTerm::leaf(id, formula.clone());
        Proof::from_parts(Rule::Axiom, Vec::new(), Sequent::new(lhs, formula))
    }

    /// The proper axiom `⊢ word : A`.
    pub fn proper_axiom(word: &str, formula: Formula) -> Proof {
        Proof::from_parts(Rule::ProperAxiom(word.into()), Vec::new(), Sequent::new(SpTerm::Empty, formula))
    }

    /// Applies a rule, computing its conclusion. Entropy and leaves are
    /// rejected; use [`Proof::entropy`] and the leaf constructors.
    pub fn apply(rule: Rule, premises: Vec<Proof>) -> Result<Proof, RuleViolation> {
        match infer(&rule, &premises) {
            Ok(conclusion) => Ok(Proof::from_parts(rule, premises, conclusion)),
            Err((kind, detail)) => Err(RuleViolation { path: Vec::new(), rule: rule.kind(), kind, detail }),
        }
    }

    /// Relaxes the premise's context to `lhs`, which must be a suborder.
    pub fn entropy(premise: Proof, lhs: SpTerm) -> Result<Proof, RuleViolation> {
        if !entropy_leq(&lhs, &premise.conclusion.lhs) {
            return Err(RuleViolation {
                path: Vec::new(),
                rule: RuleKind::Entropy,
                kind: ViolationKind::Entropy,
                detail: format!("{} is not a suborder of {}", lhs, premise.conclusion.lhs),
            });
        }
        let rhs = premise.conclusion.rhs.clone();
        Ok(Proof::from_parts(Rule::Entropy, vec![premise], Sequent::new(lhs, rhs)))
    }

    /// Rebuilds this node's rule over new premises (entropy keeps its
    /// conclusion context).
    pub fn reapply(&self, premises: Vec<Proof>) -> Result<Proof, RuleViolation> {
        match self.rule {
            Rule::Entropy => Proof::entropy(premises.into_iter().next().expect("entropy premise"), self.conclusion.lhs.clone()),
            _ => Proof::apply(self.rule.clone(), premises),
        }
    }

    pub fn kind(&self) -> RuleKind {
        self.rule.kind()
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn get(&self, path: &[usize]) -> Option<&Proof> {
        let mut p = self;
        for &i in path {
            p = p.premises.get(i)?;
        }
        Some(p)
    }

    /// Replaces the subproof at `path`. Ancestors keep their rules and
    /// conclusions, so `new` must conclude what the old subproof did.
    pub fn replace(&self, path: &[usize], new: Proof) -> Proof {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => {
                let mut premises = self.premises.clone();
                premises[i] = premises[i].replace(rest, new);
                Proof::from_parts(self.rule.clone(), premises, self.conclusion.clone())
            }
        }
    }

    /// All node paths in pre-order (node before its premises, premises left
    /// to right).
    pub fn paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        fn go(p: &Proof, path: &mut Path, out: &mut Vec<Path>) {
            out.push(path.clone());
            for (i, q) in p.premises.iter().enumerate() {
                path.push(i);
                go(q, path, out);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Paths in post-order: premises left to right, then the node.
    pub fn paths_postorder(&self) -> Vec<Path> {
        let mut out = Vec::new();
        fn go(p: &Proof, path: &mut Path, out: &mut Vec<Path>) {
            for (i, q) in p.premises.iter().enumerate() {
                path.push(i);
                go(q, path, out);
                path.pop();
            }
            out.push(path.clone());
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Path of the axiom leaf introducing `id`.
    pub fn hypothesis_path(&self, id: &OccId) -> Option<Path> {
        fn go(p: &Proof, id: &OccId, path: &mut Path) -> bool {
            if p.rule == Rule::Axiom {
                return p.conclusion.lhs.contains(id);
            }
            for (i, q) in p.premises.iter().enumerate() {
                path.push(i);
                if go(q, id, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
        let mut path = Vec::new();
        go(self, id, &mut path).then_some(path)
    }

    /// Ids of all axiom leaves in pre-order.
    pub fn axiom_ids(&self) -> Vec<OccId> {
        let mut out = Vec::new();
        fn go(p: &Proof, out: &mut Vec<OccId>) {
            if p.rule == Rule::Axiom {
                out.extend(p.conclusion.lhs.leaves().into_iter().map(|o| o.id.clone()));
            }
            p.premises.iter().for_each(|q| go(q, out));
        }
        go(self, &mut out);
        out
    }

    /// Renames every occurrence id through `f`.
    pub fn rename(&self, f: &impl Fn(&OccId) -> OccId) -> Proof {
        Proof::from_parts(
            self.rule.rename(f),
            self.premises.iter().map(|q| q.rename(f)).collect(),
            Sequent::new(self.conclusion.lhs.rename(f), self.conclusion.rhs.clone()),
        )
    }

    /// Rewrites every formula through `f`. The result is a proof again when
    /// `f` is a substitution of atoms.
    pub fn map_formulas(&self, f: &impl Fn(&Formula) -> Formula) -> Proof {
        Proof::from_parts(
            self.rule.clone(),
            self.premises.iter().map(|q| q.map_formulas(f)).collect(),
            Sequent::new(self.conclusion.lhs.map_formulas(f), f(&self.conclusion.rhs)),
        )
    }

    /// Renames hypotheses to `h0, h1, …` in pre-order of their axioms, so
    /// that proofs differing only in occurrence names compare equal.
    pub fn alpha_normalize(&self) -> Proof {
        let map: HashMap<OccId, OccId> = self
            .axiom_ids()
            .into_iter()
            .enumerate()
            .map(|(i, id)| (id, OccId::new(&format!("h{i}"))))
            .collect();
        self.rename(&|id| map.get(id).cloned().unwrap_or_else(|| id.clone()))
    }

    /// Every formula in a Lambek-with-product proof uses only `\ / ⊙`, every
    /// context is a sequence, and no rule is commutative or entropy.
    pub fn is_lambek(&self) -> bool {
        fn lambek_formula(f: &Formula) -> bool {
            match f {
                Formula::Atom(_) => true,
                Formula::NcProd(a, b) | Formula::LDiv(a, b) | Formula::RDiv(a, b) => {
                    lambek_formula(a) && lambek_formula(b)
                }
                _ => false,
            }
        }
        let rule_ok = !matches!(
            self.kind(),
            RuleKind::LltoE | RuleKind::LltoI | RuleKind::OtimesI | RuleKind::OtimesE | RuleKind::Entropy
        );
        rule_ok
            && self.conclusion.lhs.is_sequence()
            && lambek_formula(&self.conclusion.rhs)
            && self.conclusion.lhs.leaves().iter().all(|o| lambek_formula(&o.formula))
            && self.premises.iter().all(Proof::is_lambek)
    }
}

/// Checks every node against its rule schema in kernel mode, where proper
/// axioms are rejected.
pub fn check(p: &Proof) -> Result<(), RuleViolation> {
    check_with(p, None)
}

/// Checks `p`, admitting the proper axioms of `signature`.
pub fn check_in(p: &Proof, signature: &Signature) -> Result<(), RuleViolation> {
    check_with(p, Some(signature))
}

fn check_with(p: &Proof, signature: Option<&Signature>) -> Result<(), RuleViolation> {
    fn go(p: &Proof, sig: Option<&Signature>, path: &mut Path, seen: &mut BTreeSet<OccId>) -> Result<(), RuleViolation> {
        for (i, q) in p.premises.iter().enumerate() {
            path.push(i);
            go(q, sig, path, seen)?;
            path.pop();
        }
        let violation = |kind, detail: String| RuleViolation { path: path.clone(), rule: p.kind(), kind, detail };
        let want_arity = p.kind().arity();
        if p.premises.len() != want_arity {
            return Err(violation(
                ViolationKind::Arity,
                format!("expected {want_arity} premises, found {}", p.premises.len()),
            ));
        }
        let concl = &p.conclusion;
        match &p.rule {
            Rule::Axiom => {
                let SpTerm::Leaf(o) = &concl.lhs else {
                    return Err(violation(ViolationKind::Shape, "an axiom has exactly one hypothesis".into()));
                };
                if o.formula != concl.rhs {
                    return Err(violation(ViolationKind::Shape, format!("{} does not prove {}", o, concl.rhs)));
                }
                if !seen.insert(o.id.clone()) {
                    return Err(violation(ViolationKind::DuplicateId, format!("`{}` is introduced twice", o.id)));
                }
            }
            Rule::ProperAxiom(word) => {
                if !concl.lhs.is_empty() {
                    return Err(violation(ViolationKind::Shape, "a proper axiom has no hypotheses".into()));
                }
                match sig {
                    None => {
                        return Err(violation(
                            ViolationKind::ProperAxiom,
                            format!("proper axiom `{word}` used without a lexicon"),
                        ))
                    }
                    Some(s) if !s.admits(word, &concl.rhs) => {
                        return Err(violation(
                            ViolationKind::ProperAxiom,
                            format!("`{word}` : {} is not in the lexicon", concl.rhs),
                        ))
                    }
                    Some(_) => {}
                }
            }
            Rule::Entropy => {
                let prem = &p.premises[0].conclusion;
                if prem.rhs != concl.rhs {
                    return Err(violation(ViolationKind::Shape, "entropy changes the right-hand side".into()));
                }
                if !entropy_leq(&concl.lhs, &prem.lhs) {
                    return Err(violation(
                        ViolationKind::Entropy,
                        format!("{} is not a suborder of {}", concl.lhs, prem.lhs),
                    ));
                }
            }
            rule => match infer(rule, &p.premises) {
                Err((kind, detail)) => return Err(violation(kind, detail)),
                Ok(want) if &want != concl => {
                    return Err(violation(ViolationKind::Shape, format!("concludes {concl}, the rule yields {want}")))
                }
                Ok(_) => {}
            },
        }
        Ok(())
    }
    go(p, signature, &mut Vec::new(), &mut BTreeSet::new())
}

/// The principal branch from `node` upward, starting with `node` itself.
pub fn principal_branch(p: &Proof, node: &[usize]) -> Vec<Path> {
    let mut out = Vec::new();
    let mut path = node.to_vec();
    let Some(mut cur) = p.get(node) else {
        return out;
    };
    loop {
        out.push(path.clone());
        match cur.kind().principal_premise() {
            Some(i) if i < cur.premises.len() => {
                path.push(i);
                cur = &cur.premises[i];
            }
            _ => return out,
        }
    }
}

/// The introduction conjoined to the elimination at `elim`: the closest node
/// on its principal branch that introduces the eliminated connective with
/// the eliminated formula as its conclusion.
pub fn conjoined(p: &Proof, elim: &[usize]) -> Option<Path> {
    let node = p.get(elim)?;
    let intro = node.kind().matching_intro()?;
    let target = eliminated_formula(node)?;
    // The introduction of a product sits in the type premise, which is not
    // on the elimination's own principal branch.
    let branch = if node.kind().is_product_elim() {
        let mut ty = elim.to_vec();
        ty.push(0);
        principal_branch(p, &ty)
    } else {
        principal_branch(p, elim).into_iter().skip(1).collect()
    };
    branch.into_iter().find(|q| {
        let n = p.get(q).expect("branch path");
        n.kind() == intro && &n.conclusion.rhs == target
    })
}

/// The formula an elimination node eliminates.
pub fn eliminated_formula(node: &Proof) -> Option<&Formula> {
    let i = match node.kind() {
        RuleKind::LtoE | RuleKind::LltoE => 1,
        RuleKind::LfromE | RuleKind::OdotE | RuleKind::OtimesE => 0,
        _ => return None,
    };
    Some(&node.premises.get(i)?.conclusion.rhs)
}
