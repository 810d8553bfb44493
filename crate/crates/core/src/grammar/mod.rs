//! Categorial minimalist grammars on top of the kernel.
//!
//! A lexicon gives each word its formulas. Derivations use two derived
//! rules. Merge is an implicative elimination followed by entropy, which
//! flattens the two contexts into one commutative context. Move is a
//! commutative product elimination. Every sequent carries a string label
//! made of words and hypothesis variables. Each derivation node keeps the
//! kernel proof it stands for, so nothing is built that [`check`] would
//! reject.
//!
//! [`check`]: crate::proof::check

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::context::{OccId, SpTerm};
use crate::formula::{parse_formula, subformulas, Formula};
use crate::proof::{write_word, Proof, Rule, RuleViolation, Sequent, Signature};
use crate::syntax::ParseError;

#[cfg(test)]
mod tests;

/// Kernel name of silent lexical entries.
pub const SILENT: &str = "ε";

/// Spelling of silent entries in lexicon files.
pub const SILENT_IN_FILES: &str = "EPS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: expected `word<TAB>formula`")]
    MissingTab { line: usize },
    #[error("line {line}: empty word")]
    EmptyWord { line: usize },
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
}

/// A lexical entry; `word` is `None` for silent entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub word: Option<Arc<str>>,
    pub formula: Formula,
}

/// A finite multimap from words to formulas. Entries are kept sorted, so
/// everything computed from a lexicon is independent of insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeSet<Entry>,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    pub fn insert(&mut self, word: Option<&str>, formula: Formula) {
        self.entries.insert(Entry { word: word.map(Arc::from), formula });
    }

    /// Reads the `word<TAB>formula` format. Blank lines and lines starting
    /// with `#` are skipped; the word `EPS` marks a silent entry.
    pub fn parse(text: &str) -> Result<Lexicon, LexiconError> {
        let mut lex = Lexicon::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let (word, formula) = raw.split_once('\t').ok_or(LexiconError::MissingTab { line })?;
            let word = word.trim();
            if word.is_empty() {
                return Err(LexiconError::EmptyWord { line });
            }
            let formula = parse_formula(formula).map_err(|source| LexiconError::Formula { line, source })?;
            lex.insert((word != SILENT_IN_FILES).then_some(word), formula);
        }
        Ok(lex)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn formulas_of<'a>(&'a self, word: &'a str) -> impl Iterator<Item = &'a Formula> + 'a {
        self.entries.iter().filter(move |e| e.word.as_deref() == Some(word)).map(|e| &e.formula)
    }

    /// The proper axioms the expansions of derivations over this lexicon use.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for e in &self.entries {
            sig.insert(e.word.as_deref().unwrap_or(SILENT), e.formula.clone());
        }
        sig
    }

    /// Formulas a hypothesis may carry in a derivation: the components of
    /// the commutative products occurring in the lexicon. Only move
    /// discharges hypotheses, and it needs exactly such a pair.
    pub fn movable(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        for e in &self.entries {
            for f in subformulas(&e.formula) {
                if let Formula::CProd(a, b) = f {
                    out.insert((*a).clone());
                    out.insert((*b).clone());
                }
            }
        }
        out
    }
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{}\t{}", e.word.as_deref().unwrap_or(SILENT_IN_FILES), e.formula)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Word(Arc<str>),
    Var(OccId),
}

/// A sequence of words and hypothesis variables. Silent words leave no
/// token.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Label(pub Vec<Token>);

impl Label {
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.iter().filter_map(|t| match t {
            Token::Word(w) => Some(&**w),
            Token::Var(_) => None,
        })
    }

    pub fn vars(&self) -> impl Iterator<Item = &OccId> {
        self.0.iter().filter_map(|t| match t {
            Token::Var(v) => Some(v),
            Token::Word(_) => None,
        })
    }

    fn rename(&self, f: &impl Fn(&OccId) -> OccId) -> Label {
        Label(
            self.0
                .iter()
                .map(|t| match t {
                    Token::Var(v) => Token::Var(f(v)),
                    w => w.clone(),
                })
                .collect(),
        )
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match t {
                Token::Word(w) => f.write_str(w)?,
                Token::Var(v) => f.write_str(v.as_str())?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSequent {
    pub sequent: Sequent,
    pub label: Label,
}

impl fmt::Display for LabeledSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut label = String::new();
        write_word(&mut label, &self.label.to_string());
        write!(f, "{} label: {label}", self.sequent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DerivedRule {
    /// A lexical entry `⊢ w : A`; `None` is a silent one.
    Lex(Option<Arc<str>>),
    /// A hypothesis `x:A ⊢ x : A`.
    Hyp,
    /// Argument on the left: premises `[argument, functor]`.
    MergeLeft,
    /// Argument on the right: premises `[functor, argument]`.
    MergeRight,
    /// Premises `[A ⊗ B, body]`; the type premise's label replaces the
    /// first variable and the second one vanishes.
    Move(OccId, OccId),
}

impl DerivedRule {
    pub fn name(&self) -> &'static str {
        match self {
            DerivedRule::Lex(_) => "lex",
            DerivedRule::Hyp => "ax",
            DerivedRule::MergeLeft => "merge_left",
            DerivedRule::MergeRight => "merge_right",
            DerivedRule::Move(..) => "move",
        }
    }

    pub fn is_merge(&self) -> bool {
        matches!(self, DerivedRule::MergeLeft | DerivedRule::MergeRight)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("`{left}` and `{right}` do not merge")]
    NoMerge { left: Formula, right: Formula },
    #[error("no hypotheses `{a}` and `{b}` to move `{a} * {b}` into")]
    NoMovablePair { a: Formula, b: Formula },
    #[error("`{0}` is not a commutative product")]
    NotMovable(Formula),
    #[error("hypothesis `{0}` occurs in both premises")]
    SharedHypothesis(OccId),
    #[error(transparent)]
    Kernel(#[from] RuleViolation),
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct DerivationNode {
    pub rule: DerivedRule,
    pub premises: Vec<LabeledDerivation>,
    pub label: Label,
    /// The kernel proof this subtree expands to.
    pub proof: Proof,
}

/// A derivation in the merge/move algebra; cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledDerivation(Arc<DerivationNode>);

impl std::ops::Deref for LabeledDerivation {
    type Target = DerivationNode;

    fn deref(&self) -> &DerivationNode {
        &self.0
    }
}

fn node(rule: DerivedRule, premises: Vec<LabeledDerivation>, label: Label, proof: Proof) -> LabeledDerivation {
    LabeledDerivation(Arc::new(DerivationNode { rule, premises, label, proof }))
}

fn disjoint(d1: &LabeledDerivation, d2: &LabeledDerivation) -> Result<(), GrammarError> {
    let ids = d1.sequent().lhs.ids();
    match d2.sequent().lhs.ids().into_iter().find(|id| ids.contains(id)) {
        Some(id) => Err(GrammarError::SharedHypothesis(id)),
        None => Ok(()),
    }
}

/// Implicative elimination then entropy to the parallel context.
fn merged(rule: Rule, premises: [&LabeledDerivation; 2]) -> Result<Proof, GrammarError> {
    let inner = Proof::apply(rule, premises.iter().map(|d| d.proof.clone()).collect())?;
    let flat = SpTerm::par(premises.iter().map(|d| d.sequent().lhs.clone()));
    Ok(Proof::entropy(inner, flat)?)
}

impl LabeledDerivation {
    pub fn lex(word: Option<&str>, formula: Formula) -> LabeledDerivation {
        let label = Label(word.map(|w| Token::Word(w.into())).into_iter().collect());
        let proof = Proof::proper_axiom(word.unwrap_or(SILENT), formula);
        node(DerivedRule::Lex(word.map(Arc::from)), Vec::new(), label, proof)
    }

    pub fn hypothesis(id: impl Into<OccId>, formula: Formula) -> LabeledDerivation {
        let id = id.into();
        let label = Label(vec![Token::Var(id.clone())]);
        node(DerivedRule::Hyp, Vec::new(), label, Proof::axiom(id, formula))
    }

    /// Merges with the argument on the left: `arg : A` and `fun : A \ C`.
    pub fn merge_left(arg: &LabeledDerivation, fun: &LabeledDerivation) -> Result<LabeledDerivation, GrammarError> {
        match fun.rhs() {
            Formula::LDiv(a, _) if **a == *arg.rhs() => {}
            _ => return Err(GrammarError::NoMerge { left: arg.rhs().clone(), right: fun.rhs().clone() }),
        }
        disjoint(arg, fun)?;
        let proof = merged(Rule::LtoE, [arg, fun])?;
        let label = Label([&arg.label.0[..], &fun.label.0[..]].concat());
        Ok(node(DerivedRule::MergeLeft, vec![arg.clone(), fun.clone()], label, proof))
    }

    /// Merges with the argument on the right: `fun : C / A` and `arg : A`.
    pub fn merge_right(fun: &LabeledDerivation, arg: &LabeledDerivation) -> Result<LabeledDerivation, GrammarError> {
        match fun.rhs() {
            Formula::RDiv(_, a) if **a == *arg.rhs() => {}
            _ => return Err(GrammarError::NoMerge { left: fun.rhs().clone(), right: arg.rhs().clone() }),
        }
        disjoint(fun, arg)?;
        let proof = merged(Rule::LfromE, [fun, arg])?;
        let label = Label([&fun.label.0[..], &arg.label.0[..]].concat());
        Ok(node(DerivedRule::MergeRight, vec![fun.clone(), arg.clone()], label, proof))
    }

    /// Merges in whichever direction the types allow, trying `d1` as the
    /// left argument of `d2` first.
    pub fn merge(d1: &LabeledDerivation, d2: &LabeledDerivation) -> Result<LabeledDerivation, GrammarError> {
        match (d1.rhs(), d2.rhs()) {
            (a, Formula::LDiv(b, _)) if a == &**b => LabeledDerivation::merge_left(d1, d2),
            _ => LabeledDerivation::merge_right(d1, d2),
        }
    }

    /// Moves `ty : A ⊗ B` into the first pair of hypotheses `x:A`, `y:B` of
    /// `body` in canonical context order that the kernel accepts.
    pub fn move_into(ty: &LabeledDerivation, body: &LabeledDerivation) -> Result<LabeledDerivation, GrammarError> {
        let Formula::CProd(a, b) = ty.rhs() else {
            return Err(GrammarError::NotMovable(ty.rhs().clone()));
        };
        for (x, y) in LabeledDerivation::pairs(body, a, b) {
            if let Ok(d) = LabeledDerivation::move_at(ty, body, &x, &y) {
                return Ok(d);
            }
        }
        Err(GrammarError::NoMovablePair { a: (**a).clone(), b: (**b).clone() })
    }

    /// Candidate hypothesis pairs for moving `a ⊗ b` into `body`.
    fn pairs(body: &LabeledDerivation, a: &Formula, b: &Formula) -> Vec<(OccId, OccId)> {
        let leaves = body.sequent().lhs.leaves();
        let mut out = Vec::new();
        for x in leaves.iter().filter(|o| o.formula == *a) {
            for y in leaves.iter().filter(|o| o.formula == *b && o.id != x.id) {
                out.push((x.id.clone(), y.id.clone()));
            }
        }
        out
    }

    /// Moves `ty` into the hypotheses `x` and `y` of `body`.
    pub fn move_at(
        ty: &LabeledDerivation,
        body: &LabeledDerivation,
        x: &OccId,
        y: &OccId,
    ) -> Result<LabeledDerivation, GrammarError> {
        disjoint(ty, body)?;
        let proof = Proof::apply(Rule::OtimesE(x.clone(), y.clone()), vec![ty.proof.clone(), body.proof.clone()])?;
        let mut label = Vec::new();
        for t in &body.label.0 {
            match t {
                Token::Var(v) if v == x => label.extend(ty.label.0.iter().cloned()),
                Token::Var(v) if v == y => {}
                t => label.push(t.clone()),
            }
        }
        Ok(node(DerivedRule::Move(x.clone(), y.clone()), vec![ty.clone(), body.clone()], Label(label), proof))
    }

    pub fn sequent(&self) -> &Sequent {
        &self.proof.conclusion
    }

    pub fn rhs(&self) -> &Formula {
        &self.proof.conclusion.rhs
    }

    pub fn conclusion(&self) -> LabeledSequent {
        LabeledSequent { sequent: self.sequent().clone(), label: self.label.clone() }
    }

    /// The kernel proof; it passes `check_in` against the lexicon's
    /// signature.
    pub fn expand(&self) -> Proof {
        self.proof.clone()
    }

    /// Number of merge and move nodes.
    pub fn size(&self) -> usize {
        self.merges() + self.moves()
    }

    pub fn merges(&self) -> usize {
        self.count(&|r| r.is_merge())
    }

    pub fn moves(&self) -> usize {
        self.count(&|r| matches!(r, DerivedRule::Move(..)))
    }

    fn count(&self, pred: &impl Fn(&DerivedRule) -> bool) -> usize {
        usize::from(pred(&self.rule)) + self.premises.iter().map(|d| d.count(pred)).sum::<usize>()
    }

    /// The rule tree without hypothesis names, e.g.
    /// `merge_right(lex(che), lex(cosa))`.
    pub fn skeleton(&self) -> String {
        let head = match &self.rule {
            DerivedRule::Lex(w) => return format!("lex({})", w.as_deref().unwrap_or(SILENT)),
            DerivedRule::Hyp => return format!("ax({})", self.rhs()),
            r => r.name(),
        };
        let args: Vec<String> = self.premises.iter().map(|d| d.skeleton()).collect();
        format!("{head}({})", args.join(", "))
    }

    pub fn rename(&self, f: &impl Fn(&OccId) -> OccId) -> LabeledDerivation {
        let rule = match &self.rule {
            DerivedRule::Move(x, y) => DerivedRule::Move(f(x), f(y)),
            r => r.clone(),
        };
        let premises = self.premises.iter().map(|d| d.rename(f)).collect();
        node(rule, premises, self.label.rename(f), self.proof.rename(f))
    }

    /// Renames hypotheses `x1`, `x2`, … in left-to-right leaf order.
    pub fn canonical(&self) -> LabeledDerivation {
        fn leaves(d: &LabeledDerivation, out: &mut Vec<OccId>) {
            if d.rule == DerivedRule::Hyp {
                out.extend(d.sequent().lhs.ids());
            }
            d.premises.iter().for_each(|p| leaves(p, out));
        }
        let mut ids = Vec::new();
        leaves(self, &mut ids);
        let map: HashMap<OccId, OccId> =
            ids.into_iter().enumerate().map(|(i, id)| (id, OccId::new(&format!("x{}", i + 1)))).collect();
        self.rename(&|id| map.get(id).cloned().unwrap_or_else(|| id.clone()))
    }

    fn write(&self, out: &mut String, indent: usize) {
        out.push_str(&" ".repeat(indent));
        out.push('(');
        out.push_str(self.rule.name());
        match &self.rule {
            DerivedRule::Lex(w) => {
                out.push(' ');
                write_word(out, w.as_deref().unwrap_or(SILENT));
            }
            DerivedRule::Move(x, y) => {
                out.push_str(&format!(" {x} {y}"));
            }
            _ => {}
        }
        out.push_str(&format!(" {}", self.conclusion()));
        for d in &self.premises {
            out.push('\n');
            d.write(out, indent + 2);
        }
        out.push(')');
    }
}

/// Indented text in the proof format, with a `label:` after each sequent.
impl fmt::Display for LabeledDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write(&mut out, 0);
        f.write_str(&out)
    }
}

/// Whether `part` occurs in `whole` as a (scattered) subsequence.
fn subsequence<'a>(part: impl IntoIterator<Item = &'a str>, whole: &[&str]) -> bool {
    let mut rest = whole.iter();
    part.into_iter().all(|w| rest.any(|v| *v == w))
}

/// All derivations of `⊢ words : goal` with at most `bound` merge and move
/// nodes, up to renaming of hypotheses, smallest first and then by text.
///
/// The search is bottom-up by size. It keeps a partial derivation only when
/// its words appear in the sentence in the same order (neither rule ever
/// reorders words) and when its open hypotheses could still be discharged
/// by the moves the bound leaves room for.
pub fn derive(lexicon: &Lexicon, words: &[&str], goal: &Formula, bound: usize) -> Vec<LabeledDerivation> {
    let mut levels: Vec<Vec<LabeledDerivation>> = Vec::new();
    let mut leaves = Vec::new();
    for e in lexicon.entries() {
        if e.word.as_deref().is_none_or(|w| words.contains(&w)) {
            leaves.push(LabeledDerivation::lex(e.word.as_deref(), e.formula.clone()));
        }
    }
    for f in lexicon.movable() {
        leaves.push(LabeledDerivation::hypothesis("x1", f));
    }
    levels.push(leaves);

    let viable = |d: &LabeledDerivation, n: usize| {
        subsequence(d.label.words(), words) && d.sequent().lhs.len() <= 2 * (bound - n)
    };
    for n in 1..=bound {
        let mut seen = HashSet::new();
        let mut level = Vec::new();
        for i in 0..n {
            let j = n - 1 - i;
            for d1 in &levels[i] {
                for q in &levels[j] {
                    let apart = || q.rename(&|id| OccId::new(&format!("r{id}")));
                    let mut found = Vec::new();
                    if matches!(q.rhs(), Formula::LDiv(a, _) if **a == *d1.rhs()) {
                        found.extend(LabeledDerivation::merge_left(d1, &apart()).ok());
                    }
                    if matches!(d1.rhs(), Formula::RDiv(_, a) if **a == *q.rhs()) {
                        found.extend(LabeledDerivation::merge_right(d1, &apart()).ok());
                    }
                    if let Formula::CProd(a, b) = d1.rhs() {
                        let body = apart();
                        for (x, y) in LabeledDerivation::pairs(&body, a, b) {
                            found.extend(LabeledDerivation::move_at(d1, &body, &x, &y).ok());
                        }
                    }
                    for d in found {
                        if viable(&d, n) {
                            let d = d.canonical();
                            if seen.insert(d.clone()) {
                                level.push(d);
                            }
                        }
                    }
                }
            }
        }
        levels.push(level);
    }

    let mut out: Vec<LabeledDerivation> = levels
        .into_iter()
        .flatten()
        .filter(|d| d.sequent().lhs.is_empty() && d.rhs() == goal && d.label.words().eq(words.iter().copied()))
        .collect();
    out.sort_by_cached_key(|d| (d.size(), d.to_string()));
    out
}
