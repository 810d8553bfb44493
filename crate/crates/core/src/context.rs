//! Series-parallel contexts: ordered multisets of formula occurrences built
//! from series `<a ; b>` and parallel `(a, b)` composition.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{self, Formula};
use crate::syntax::{ParseError, Parser, Tok};

/// Identity of one hypothesis occurrence, stable across the rules of a proof.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccId(Arc<str>);

impl OccId {
    pub fn new(name: &str) -> OccId {
        OccId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for OccId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for OccId {
    fn from(s: &str) -> Self {
        OccId::new(s)
    }
}

/// A formula occurrence. Ordered by (printed formula, id), which is the
/// canonical order of parallel children.
#[derive(Debug, Clone)]
pub struct Occurrence {
    key: Arc<str>,
    pub formula: Formula,
    pub id: OccId,
}

impl Occurrence {
    pub fn new(id: impl Into<OccId>, formula: Formula) -> Occurrence {
        Occurrence { key: formula.to_string().into(), formula, id: id.into() }
    }
}

impl PartialEq for Occurrence {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.key == other.key
    }
}

impl Eq for Occurrence {}

impl std::hash::Hash for Occurrence {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl PartialOrd for Occurrence {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Occurrence {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.key, &self.id).cmp(&(&other.key, &other.id))
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.id, self.formula)
    }
}

/// A series-parallel term.
///
/// Canonical terms (the only ones the public constructors produce) have no
/// `Seq` directly inside a `Seq`, no `Par` directly inside a `Par`, at least
/// two children per composite, sorted `Par` children, and `Empty` only at the
/// root. `Hole` appears only inside a [`HoleContext`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpTerm {
    Empty,
    Hole,
    Leaf(Occurrence),
    Seq(Vec<SpTerm>),
    Par(Vec<SpTerm>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairMode {
    /// `<a ; b>` with `a` immediately before `b`.
    Seq,
    /// `(a, b)`, incomparable siblings.
    Par,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("occurrence `{0}` appears twice")]
    IdCollision(OccId),
}

impl SpTerm {
    pub fn leaf(id: impl Into<OccId>, formula: Formula) -> SpTerm {
        SpTerm::Leaf(Occurrence::new(id, formula))
    }

    /// Canonical series composition of `items`.
    pub fn seq(items: impl IntoIterator<Item = SpTerm>) -> SpTerm {
        SpTerm::Seq(items.into_iter().collect()).canonicalize()
    }

    /// Canonical parallel composition of `items`.
    pub fn par(items: impl IntoIterator<Item = SpTerm>) -> SpTerm {
        SpTerm::Par(items.into_iter().collect()).canonicalize()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SpTerm::Empty)
    }

    /// Flattens, drops empty parts, collapses singletons and sorts parallel
    /// children. Idempotent.
    pub fn canonicalize(self) -> SpTerm {
        match self {
            SpTerm::Seq(children) => compose(children, true),
            SpTerm::Par(children) => compose(children, false),
            t => t,
        }
    }

    /// Occurrences from left to right (parallel children in canonical order).
    pub fn leaves(&self) -> Vec<&Occurrence> {
        let mut out = Vec::new();
        self.walk_leaves(&mut |o| out.push(o));
        out
    }

    fn walk_leaves<'a>(&'a self, f: &mut impl FnMut(&'a Occurrence)) {
        match self {
            SpTerm::Leaf(o) => f(o),
            SpTerm::Seq(cs) | SpTerm::Par(cs) => cs.iter().for_each(|c| c.walk_leaves(f)),
            SpTerm::Empty | SpTerm::Hole => {}
        }
    }

    pub fn len(&self) -> usize {
        self.leaves().len()
    }

    pub fn contains(&self, id: &OccId) -> bool {
        self.find(id).is_some()
    }

    pub fn find(&self, id: &OccId) -> Option<&Occurrence> {
        match self {
            SpTerm::Leaf(o) if &o.id == id => Some(o),
            SpTerm::Seq(cs) | SpTerm::Par(cs) => cs.iter().find_map(|c| c.find(id)),
            _ => None,
        }
    }

    pub fn ids(&self) -> BTreeSet<OccId> {
        self.leaves().into_iter().map(|o| o.id.clone()).collect()
    }

    /// The id-to-formula map of the occurrences.
    pub fn domain(&self) -> BTreeMap<OccId, Formula> {
        self.leaves().into_iter().map(|o| (o.id.clone(), o.formula.clone())).collect()
    }

    /// Whether the term uses only series composition.
    pub fn is_sequence(&self) -> bool {
        match self {
            SpTerm::Par(_) => false,
            SpTerm::Seq(cs) => cs.iter().all(SpTerm::is_sequence),
            _ => true,
        }
    }

    /// Replaces the leaf `id` by `delta`, re-canonicalizing. Returns `None`
    /// when `id` does not occur.
    pub fn replace_leaf(&self, id: &OccId, delta: &SpTerm) -> Option<SpTerm> {
        fn go(t: &SpTerm, id: &OccId, delta: &SpTerm) -> Option<SpTerm> {
            match t {
                SpTerm::Leaf(o) if &o.id == id => Some(delta.clone()),
                SpTerm::Seq(cs) | SpTerm::Par(cs) => {
                    let i = cs.iter().position(|c| c.contains(id))?;
                    let mut cs2 = cs.clone();
                    cs2[i] = go(&cs[i], id, delta)?;
                    Some(match t {
                        SpTerm::Seq(_) => SpTerm::seq(cs2),
                        _ => SpTerm::par(cs2),
                    })
                }
                _ => None,
            }
        }
        go(self, id, delta)
    }

    /// Renames occurrence ids through `f`, re-canonicalizing.
    pub fn rename(&self, f: &impl Fn(&OccId) -> OccId) -> SpTerm {
        match self {
            SpTerm::Leaf(o) => SpTerm::Leaf(Occurrence { key: o.key.clone(), formula: o.formula.clone(), id: f(&o.id) }),
            SpTerm::Seq(cs) => SpTerm::seq(cs.iter().map(|c| c.rename(f))),
            SpTerm::Par(cs) => SpTerm::par(cs.iter().map(|c| c.rename(f))),
            t => t.clone(),
        }
    }

    /// Rewrites every occurrence's formula through `f`, re-canonicalizing.
    pub fn map_formulas(&self, f: &impl Fn(&Formula) -> Formula) -> SpTerm {
        match self {
            SpTerm::Leaf(o) => SpTerm::leaf(o.id.clone(), f(&o.formula)),
            SpTerm::Seq(cs) => SpTerm::seq(cs.iter().map(|c| c.map_formulas(f))),
            SpTerm::Par(cs) => SpTerm::par(cs.iter().map(|c| c.map_formulas(f))),
            t => t.clone(),
        }
    }

    /// Positions of every leaf: the chain of (parent is series, child index).
    fn positions(&self) -> HashMap<&OccId, Vec<(bool, usize)>> {
        fn go<'a>(
            t: &'a SpTerm,
            path: &mut Vec<(bool, usize)>,
            out: &mut HashMap<&'a OccId, Vec<(bool, usize)>>,
        ) {
            match t {
                SpTerm::Leaf(o) => {
                    out.insert(&o.id, path.clone());
                }
                SpTerm::Seq(cs) | SpTerm::Par(cs) => {
                    let series = matches!(t, SpTerm::Seq(_));
                    for (i, c) in cs.iter().enumerate() {
                        path.push((series, i));
                        go(c, path, out);
                        path.pop();
                    }
                }
                SpTerm::Empty | SpTerm::Hole => {}
            }
        }
        let mut out = HashMap::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

fn compose(children: Vec<SpTerm>, series: bool) -> SpTerm {
    let mut flat = Vec::with_capacity(children.len());
    for c in children {
        match c.canonicalize() {
            SpTerm::Empty => {}
            SpTerm::Seq(gs) if series => flat.extend(gs),
            SpTerm::Par(gs) if !series => flat.extend(gs),
            g => flat.push(g),
        }
    }
    match flat.len() {
        0 => SpTerm::Empty,
        1 => flat.pop().unwrap(),
        _ if series => SpTerm::Seq(flat),
        _ => {
            flat.sort();
            SpTerm::Par(flat)
        }
    }
}

/// Every canonical sp-term over exactly the given occurrences, each once.
pub fn all_orders(leaves: &[Occurrence]) -> Vec<SpTerm> {
    if leaves.len() <= 1 {
        return leaves.iter().map(|o| SpTerm::Leaf(o.clone())).collect();
    }
    let n = leaves.len();
    let mut out = BTreeSet::new();
    // The part holding the first occurrence goes left of a series split
    // only half the time, so every split is tried in both orders.
    for mask in 1..(1u32 << n) - 1 {
        let (left, right): (Vec<_>, Vec<_>) = (0..n).partition(|i| mask & (1 << i) != 0);
        let left: Vec<Occurrence> = left.into_iter().map(|i| leaves[i].clone()).collect();
        let right: Vec<Occurrence> = right.into_iter().map(|i| leaves[i].clone()).collect();
        for x in all_orders(&left) {
            for y in all_orders(&right) {
                out.insert(SpTerm::seq([x.clone(), y.clone()]));
                out.insert(SpTerm::par([x.clone(), y.clone()]));
            }
        }
    }
    out.into_iter().collect()
}

/// Canonical form of an arbitrary sp-tree.
pub fn canonicalize(raw: SpTerm) -> SpTerm {
    raw.canonicalize()
}

/// The strict partial order denoted by `ctx`, as explicit pairs `(x, y)`
/// meaning `x < y`.
pub fn order_pairs(ctx: &SpTerm) -> BTreeSet<(Occurrence, Occurrence)> {
    let mut out = BTreeSet::new();
    fn go(t: &SpTerm, out: &mut BTreeSet<(Occurrence, Occurrence)>) {
        if let SpTerm::Seq(cs) | SpTerm::Par(cs) = t {
            if matches!(t, SpTerm::Seq(_)) {
                for (i, earlier) in cs.iter().enumerate() {
                    for later in &cs[i + 1..] {
                        for x in earlier.leaves() {
                            for y in later.leaves() {
                                out.insert((x.clone(), y.clone()));
                            }
                        }
                    }
                }
            }
            cs.iter().for_each(|c| go(c, out));
        }
    }
    go(ctx, &mut out);
    out
}

fn before(p: &[(bool, usize)], q: &[(bool, usize)]) -> bool {
    for (&(series, i), &(_, j)) in p.iter().zip(q) {
        if i != j {
            return series && i < j;
        }
    }
    false
}

/// `g2 ⊏ g1`: both contexts hold the same occurrences (matched by id, with
/// equal formulas) and every order constraint of `g2` also holds in `g1`.
pub fn entropy_leq(g2: &SpTerm, g1: &SpTerm) -> bool {
    let (l2, l1) = (g2.leaves(), g1.leaves());
    if l2.len() != l1.len() {
        return false;
    }
    let pos1 = g1.positions();
    if pos1.len() != l1.len() {
        return false;
    }
    for o in &l2 {
        match g1.find(&o.id) {
            Some(p) if p.formula == o.formula => {}
            _ => return false,
        }
    }
    // Walk the series nodes of g2 and test each induced pair against g1.
    fn respects(t: &SpTerm, pos1: &HashMap<&OccId, Vec<(bool, usize)>>) -> bool {
        match t {
            SpTerm::Seq(cs) | SpTerm::Par(cs) => {
                if matches!(t, SpTerm::Seq(_)) {
                    for (i, earlier) in cs.iter().enumerate() {
                        for later in &cs[i + 1..] {
                            for x in earlier.leaves() {
                                for y in later.leaves() {
                                    if !before(&pos1[&x.id], &pos1[&y.id]) {
                                        return false;
                                    }
                                }
                            }
                        }
                    }
                }
                cs.iter().all(|c| respects(c, pos1))
            }
            _ => true,
        }
    }
    respects(g2, &pos1)
}

/// A context with exactly one hole.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HoleContext(SpTerm);

impl HoleContext {
    /// The trivial context `[ ]`.
    pub fn hole() -> HoleContext {
        HoleContext(SpTerm::Hole)
    }

    /// Wraps `term` if it contains exactly one hole.
    pub fn new(term: SpTerm) -> Option<HoleContext> {
        fn holes(t: &SpTerm) -> usize {
            match t {
                SpTerm::Hole => 1,
                SpTerm::Seq(cs) | SpTerm::Par(cs) => cs.iter().map(holes).sum(),
                _ => 0,
            }
        }
        (holes(&term) == 1).then(|| HoleContext(term.canonicalize()))
    }

    pub fn term(&self) -> &SpTerm {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == SpTerm::Hole
    }
}

impl fmt::Display for HoleContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Plugs `delta` into the hole of `holectx`.
pub fn substitute(holectx: &HoleContext, delta: &SpTerm) -> Result<SpTerm, ContextError> {
    let outer = holectx.0.ids();
    if let Some(id) = delta.leaves().into_iter().map(|o| &o.id).find(|id| outer.contains(*id)) {
        return Err(ContextError::IdCollision(id.clone()));
    }
    fn plug(t: &SpTerm, delta: &SpTerm) -> SpTerm {
        match t {
            SpTerm::Hole => delta.clone(),
            SpTerm::Seq(cs) => SpTerm::Seq(cs.iter().map(|c| plug(c, delta)).collect()),
            SpTerm::Par(cs) => SpTerm::Par(cs.iter().map(|c| plug(c, delta)).collect()),
            t => t.clone(),
        }
    }
    Ok(plug(&holectx.0, delta).canonicalize())
}

/// Carves the pair `{a, b}` out of `ctx` when it forms a module of the order
/// (`∀x ∉ {a,b}: x<a ⇔ x<b and a<x ⇔ b<x`), with `a < b` in series mode and
/// `a`, `b` incomparable in parallel mode.
pub fn find_equiv_pair(ctx: &SpTerm, a: &OccId, b: &OccId, mode: PairMode) -> Option<HoleContext> {
    if a == b {
        return None;
    }
    fn is_leaf(t: &SpTerm, id: &OccId) -> bool {
        matches!(t, SpTerm::Leaf(o) if &o.id == id)
    }
    fn go(t: &SpTerm, a: &OccId, b: &OccId, mode: PairMode) -> Option<SpTerm> {
        let (SpTerm::Seq(cs) | SpTerm::Par(cs)) = t else {
            return None;
        };
        let ia = cs.iter().position(|c| is_leaf(c, a));
        let ib = cs.iter().position(|c| is_leaf(c, b));
        if let (Some(ia), Some(ib)) = (ia, ib) {
            let ok = match (t, mode) {
                (SpTerm::Seq(_), PairMode::Seq) => ib == ia + 1,
                (SpTerm::Par(_), PairMode::Par) => true,
                _ => false,
            };
            if !ok {
                return None;
            }
            if cs.len() == 2 {
                return Some(SpTerm::Hole);
            }
            let mut rest: Vec<SpTerm> = Vec::with_capacity(cs.len() - 1);
            for (i, c) in cs.iter().enumerate() {
                if i == ia {
                    rest.push(SpTerm::Hole);
                } else if i != ib {
                    rest.push(c.clone());
                }
            }
            return Some(match t {
                SpTerm::Seq(_) => SpTerm::Seq(rest),
                _ => SpTerm::Par(rest).canonicalize(),
            });
        }
        let i = cs.iter().position(|c| c.contains(a))?;
        if !cs[i].contains(b) {
            return None;
        }
        let inner = go(&cs[i], a, b, mode)?;
        let mut cs2 = cs.clone();
        cs2[i] = inner;
        Some(match t {
            SpTerm::Seq(_) => SpTerm::Seq(cs2),
            _ => SpTerm::Par(cs2).canonicalize(),
        })
    }
    go(ctx, a, b, mode).map(HoleContext)
}

impl fmt::Display for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpTerm::Empty => Ok(()),
            SpTerm::Hole => f.write_str("[]"),
            SpTerm::Leaf(o) => write!(f, "{o}"),
            SpTerm::Seq(cs) => {
                f.write_str("<")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ; ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(">")
            }
            SpTerm::Par(cs) => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses a non-empty context such as `<x:a ; (y:b, z:c)>`.
pub fn parse_context(text: &str) -> Result<SpTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let t = context(&mut p)?;
    p.finish()?;
    let mut seen = BTreeSet::new();
    for o in t.leaves() {
        if !seen.insert(o.id.clone()) {
            return Err(ParseError { line: 1, column: 1, message: format!("occurrence `{}` appears twice", o.id) });
        }
    }
    Ok(t)
}

pub(crate) fn context(p: &mut Parser) -> Result<SpTerm, ParseError> {
    let (close, sep, series) = match p.peek() {
        Tok::Lt => (Tok::Gt, Tok::Semi, true),
        Tok::LParen => (Tok::RParen, Tok::Comma, false),
        _ => return item(p),
    };
    p.next();
    let mut items = vec![item(p)?];
    while p.eat(&sep) {
        items.push(item(p)?);
    }
    if items.len() < 2 {
        return Err(p.error(format!("expected {sep}")));
    }
    p.expect(&close)?;
    Ok(if series { SpTerm::seq(items) } else { SpTerm::par(items) })
}

fn item(p: &mut Parser) -> Result<SpTerm, ParseError> {
    match p.peek() {
        Tok::Lt | Tok::LParen => context(p),
        _ => {
            let name = p.ident("an occurrence name")?;
            p.expect(&Tok::Colon)?;
            let f = formula::formula(p)?;
            Ok(SpTerm::leaf(name.as_str(), f))
        }
    }
}
