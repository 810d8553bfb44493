//! Formulas over atoms and the five connectives `⊙ ⊗ \ / ⊸`.
//!
//! ASCII surface syntax: `o` is `⊙`, `*` is `⊗`, `\` and `/` are the two
//! directional implications and `-o` is `⊸`. Products bind tighter than
//! implications, `\` associates to the right and `/` to the left, so
//! `k \ d \ v / d` reads `(k \ (d \ v)) / d`. A `-o` chain cannot be mixed
//! with `\` or `/` without parentheses.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::syntax::{ParseError, Parser, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    /// Non-commutative product `A ⊙ B`.
    NcProd(Arc<Formula>, Arc<Formula>),
    /// Commutative product `A ⊗ B`.
    CProd(Arc<Formula>, Arc<Formula>),
    /// `A \ C`, stored as (argument, result).
    LDiv(Arc<Formula>, Arc<Formula>),
    /// `C / A`, stored as (result, argument).
    RDiv(Arc<Formula>, Arc<Formula>),
    /// `A ⊸ C`, stored as (argument, result).
    LinImp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn nc_prod(a: Formula, b: Formula) -> Formula {
        Formula::NcProd(Arc::new(a), Arc::new(b))
    }

    pub fn c_prod(a: Formula, b: Formula) -> Formula {
        Formula::CProd(Arc::new(a), Arc::new(b))
    }

    /// `arg \ result`
    pub fn ldiv(arg: Formula, result: Formula) -> Formula {
        Formula::LDiv(Arc::new(arg), Arc::new(result))
    }

    /// `result / arg`
    pub fn rdiv(result: Formula, arg: Formula) -> Formula {
        Formula::RDiv(Arc::new(result), Arc::new(arg))
    }

    /// `arg -o result`
    pub fn lin_imp(arg: Formula, result: Formula) -> Formula {
        Formula::LinImp(Arc::new(arg), Arc::new(result))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn is_product(&self) -> bool {
        matches!(self, Formula::NcProd(..) | Formula::CProd(..))
    }

    pub fn is_implication(&self) -> bool {
        matches!(self, Formula::LDiv(..) | Formula::RDiv(..) | Formula::LinImp(..))
    }

    /// Immediate subformulas, left to right as written.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => Vec::new(),
            Formula::NcProd(a, b)
            | Formula::CProd(a, b)
            | Formula::LDiv(a, b)
            | Formula::RDiv(a, b)
            | Formula::LinImp(a, b) => vec![a, b],
        }
    }

    /// Number of atom and connective nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Atom names in left-to-right order, with repetitions.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a str>) {
            match f {
                Formula::Atom(a) => out.push(a),
                _ => f.children().into_iter().for_each(|c| walk(c, out)),
            }
        }
        walk(self, &mut out);
        out
    }

    /// LaTeX rendering with the usual connective symbols.
    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        write_latex(self, &mut s, false);
        s
    }
}

fn write_latex(f: &Formula, out: &mut String, paren: bool) {
    let (a, op, b) = match f {
        Formula::Atom(a) => {
            out.push_str(a);
            return;
        }
        Formula::NcProd(a, b) => (a, "\\odot", b),
        Formula::CProd(a, b) => (a, "\\otimes", b),
        Formula::LDiv(a, b) => (a, "\\backslash", b),
        Formula::RDiv(a, b) => (a, "/", b),
        Formula::LinImp(a, b) => (a, "\\multimap", b),
    };
    if paren {
        out.push('(');
    }
    write_latex(a, out, !a.is_atom());
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_latex(b, out, !b.is_atom());
    if paren {
        out.push(')');
    }
}

/// Parses a formula in the ASCII surface syntax.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = formula(&mut p)?;
    p.finish()?;
    Ok(f)
}

/// Formats `f` so that `parse_formula` reads it back unchanged.
pub fn format_formula(f: &Formula) -> String {
    f.to_string()
}

/// All subformulas of `f`, including `f` itself.
pub fn subformulas(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if out.insert(g.clone()) {
            stack.extend(g.children());
        }
    }
    out
}

pub(crate) fn formula(p: &mut Parser) -> Result<Formula, ParseError> {
    let first = product(p)?;
    match p.peek() {
        Tok::Lolli => {
            let f = lolli_chain(p, first)?;
            if matches!(p.peek(), Tok::Backslash | Tok::Slash) {
                return Err(p.error("mixing `-o` with `\\` or `/` requires parentheses".into()));
            }
            Ok(f)
        }
        Tok::Backslash | Tok::Slash => {
            let f = slash_chain(p, first)?;
            if p.peek() == &Tok::Lolli {
                return Err(p.error("mixing `-o` with `\\` or `/` requires parentheses".into()));
            }
            Ok(f)
        }
        _ => Ok(first),
    }
}

fn lolli_chain(p: &mut Parser, arg: Formula) -> Result<Formula, ParseError> {
    if !p.eat(&Tok::Lolli) {
        return Ok(arg);
    }
    let next = product(p)?;
    let result = lolli_chain(p, next)?;
    Ok(Formula::lin_imp(arg, result))
}

fn slash_chain(p: &mut Parser, first: Formula) -> Result<Formula, ParseError> {
    let mut acc = backslash_chain(p, first)?;
    while p.eat(&Tok::Slash) {
        let next = product(p)?;
        let arg = backslash_chain(p, next)?;
        acc = Formula::rdiv(acc, arg);
    }
    Ok(acc)
}

fn backslash_chain(p: &mut Parser, arg: Formula) -> Result<Formula, ParseError> {
    if !p.eat(&Tok::Backslash) {
        return Ok(arg);
    }
    let next = product(p)?;
    let result = backslash_chain(p, next)?;
    Ok(Formula::ldiv(arg, result))
}

fn product(p: &mut Parser) -> Result<Formula, ParseError> {
    let mut acc = primary(p)?;
    loop {
        if p.eat(&Tok::Odot) {
            acc = Formula::nc_prod(acc, primary(p)?);
        } else if p.eat(&Tok::Star) {
            acc = Formula::c_prod(acc, primary(p)?);
        } else {
            return Ok(acc);
        }
    }
}

fn primary(p: &mut Parser) -> Result<Formula, ParseError> {
    match p.peek().clone() {
        Tok::Ident(name) => {
            p.next();
            Ok(Formula::Atom(name.into()))
        }
        Tok::LParen => {
            p.next();
            let f = formula(p)?;
            p.expect(&Tok::RParen)?;
            Ok(f)
        }
        t => Err(p.error(format!("expected an atom or `(`, found {t}"))),
    }
}

// Printing mirrors the three precedence levels of the parser: products,
// `\`-chains (right-nested) and `/`-chains (left-nested), plus `-o` chains.

struct Prod<'a>(&'a Formula);
struct Primary<'a>(&'a Formula);

impl fmt::Display for Primary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Atom(a) => f.write_str(a),
            g => write!(f, "({g})"),
        }
    }
}

impl fmt::Display for Prod<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::NcProd(a, b) => write!(f, "{} o {}", Prod(a), Primary(b)),
            Formula::CProd(a, b) => write!(f, "{} * {}", Prod(a), Primary(b)),
            g => write!(f, "{}", Primary(g)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::LDiv(a, r) => {
                write!(f, "{} \\ ", Prod(a))?;
                match &**r {
                    Formula::LDiv(..) => write!(f, "{r}"),
                    _ => write!(f, "{}", Prod(r)),
                }
            }
            Formula::RDiv(r, a) => {
                match &**r {
                    Formula::LDiv(..) | Formula::RDiv(..) => write!(f, "{r}")?,
                    _ => write!(f, "{}", Prod(r))?,
                }
                write!(f, " / {}", Prod(a))
            }
            Formula::LinImp(a, r) => {
                write!(f, "{} -o ", Prod(a))?;
                match &**r {
                    Formula::LinImp(..) => write!(f, "{r}"),
                    _ => write!(f, "{}", Prod(r)),
                }
            }
            g => write!(f, "{}", Prod(g)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn parses_single_atom() {
        assert_eq!(parse_formula("a").unwrap(), a("a"));
    }

    #[test]
    fn parses_lexicon_entries() {
        let que = Formula::rdiv(Formula::c_prod(a("wh"), Formula::c_prod(a("k"), a("d"))), a("n"));
        assert_eq!(parse_formula("wh * (k * d) / n").unwrap(), que);
        let fai = Formula::rdiv(Formula::ldiv(a("k"), Formula::ldiv(a("d"), a("v"))), a("d"));
        assert_eq!(parse_formula("k \\ d \\ v / d").unwrap(), fai);
        assert_eq!(
            parse_formula("k \\ t / v").unwrap(),
            Formula::rdiv(Formula::ldiv(a("k"), a("t")), a("v"))
        );
    }

    #[test]
    fn slash_is_left_associative_and_lolli_right_associative() {
        assert_eq!(
            parse_formula("a / b / c").unwrap(),
            Formula::rdiv(Formula::rdiv(a("a"), a("b")), a("c"))
        );
        assert_eq!(
            parse_formula("a -o b -o c").unwrap(),
            Formula::lin_imp(a("a"), Formula::lin_imp(a("b"), a("c")))
        );
        assert_eq!(
            parse_formula("a o b * c").unwrap(),
            Formula::c_prod(Formula::nc_prod(a("a"), a("b")), a("c"))
        );
    }

    #[test]
    fn rejects_mixed_lolli_chains() {
        assert!(parse_formula("a -o b / c").is_err());
        assert!(parse_formula("a \\ b -o c").is_err());
        assert!(parse_formula("a -o (b / c)").is_ok());
    }

    #[test]
    fn reports_error_position() {
        let e = parse_formula("a \\ (b *").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        assert!(parse_formula("").is_err());
        assert!(parse_formula("a b").is_err());
    }

    #[test]
    fn formats_examples() {
        assert_eq!(format_formula(&a("a")), "a");
        assert_eq!(format_formula(&Formula::ldiv(a("c"), a("d"))), "c \\ d");
        let que = Formula::rdiv(Formula::c_prod(a("wh"), Formula::c_prod(a("k"), a("d"))), a("n"));
        assert_eq!(format_formula(&que), "wh * (k * d) / n");
        let fai = Formula::rdiv(Formula::ldiv(a("k"), Formula::ldiv(a("d"), a("v"))), a("d"));
        assert_eq!(format_formula(&fai), "k \\ d \\ v / d");
        assert_eq!(format_formula(&Formula::ldiv(a("a"), Formula::rdiv(a("b"), a("c")))), "a \\ (b / c)");
    }

    #[test]
    fn subformulas_of_lexicon_entry() {
        let que = parse_formula("wh * (k * d) / n").unwrap();
        let got: Vec<String> = subformulas(&que).iter().map(|f| f.to_string()).collect();
        let mut want: Vec<String> = ["wh * (k * d) / n", "wh * (k * d)", "wh", "k * d", "k", "d", "n"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        want.sort();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        assert_eq!(got_sorted, want);
        assert_eq!(subformulas(&a("a")).len(), 1);
        assert_eq!(subformulas(&Formula::ldiv(a("c"), a("d"))).len(), 3);
    }

    /// Every small formula over two atoms, up to the given depth.
    fn enumerate(depth: usize) -> Vec<Formula> {
        if depth == 1 {
            return vec![a("p"), a("q")];
        }
        let smaller = enumerate(depth - 1);
        let mut out = smaller.clone();
        for x in &smaller {
            for y in &smaller {
                if x.depth().max(y.depth()) == depth - 1 {
                    out.push(Formula::nc_prod(x.clone(), y.clone()));
                    out.push(Formula::c_prod(x.clone(), y.clone()));
                    out.push(Formula::ldiv(x.clone(), y.clone()));
                    out.push(Formula::rdiv(x.clone(), y.clone()));
                    out.push(Formula::lin_imp(x.clone(), y.clone()));
                }
            }
        }
        out
    }

    #[test]
    fn round_trip_over_enumerated_formulas() {
        let all = enumerate(3);
        assert!(all.len() > 1000);
        for f in all {
            let text = format_formula(&f);
            assert_eq!(parse_formula(&text).as_ref(), Ok(&f), "{text}");
        }
    }

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![Just(a("a")), Just(a("b")), Just(a("c")), Just(a("wh"))];
        leaf.prop_recursive(6, 64, 2, |inner| {
            (0..5u8, inner.clone(), inner).prop_map(|(k, x, y)| match k {
                0 => Formula::nc_prod(x, y),
                1 => Formula::c_prod(x, y),
                2 => Formula::ldiv(x, y),
                3 => Formula::rdiv(x, y),
                _ => Formula::lin_imp(x, y),
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip(f in arb_formula()) {
            prop_assert_eq!(parse_formula(&format_formula(&f)).unwrap(), f);
        }

        #[test]
        fn subformula_closure(f in arb_formula()) {
            let subs = subformulas(&f);
            prop_assert!(subs.contains(&f));
            prop_assert!(subs.len() <= f.size());
            for g in &subs {
                prop_assert!(subformulas(g).is_subset(&subs));
            }
        }

        #[test]
        fn redundant_parentheses_are_ignored(f in arb_formula()) {
            let text = format!("(({}))", format_formula(&f));
            prop_assert_eq!(parse_formula(&text).unwrap(), f);
        }
    }
}
