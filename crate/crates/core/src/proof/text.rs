//! The proof text format.
//!
//! ```text
//! file     := signature? proof
//! signature:= "(" "signature" ("(" WORD "|-" formula ")")* ")"
//! proof    := "(" RULE arg* sequent proof* ")"
//! sequent  := context? "|-" formula
//! ```
//!
//! `RULE` is one of `ax lex lto_e lfrom_e llto_e lto_i lfrom_i llto_i odot_i
//! odot_e otimes_i otimes_e entropy`. `lex` takes the word, the implication
//! introductions take the discharged occurrence name and the product
//! eliminations take the two carved occurrence names. Words are identifiers
//! or double-quoted strings; `#` starts a comment.

use crate::context;
use crate::formula;
use crate::syntax::{ParseError, Parser, Tok};

use super::{Proof, Rule, RuleKind, Sequent, Signature};
use crate::context::{OccId, SpTerm};

/// A proof together with the proper axioms it declares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofFile {
    pub signature: Signature,
    pub proof: Proof,
}

/// Parses a proof, with an optional leading signature block.
pub fn parse_proof_file(text: &str) -> Result<ProofFile, ParseError> {
    let mut p = Parser::new(text)?;
    let mut signature = Signature::new();
    if p.peek() == &Tok::LParen && p.peek_at(1) == &Tok::Ident("signature".into()) {
        p.next();
        p.next();
        while p.eat(&Tok::LParen) {
            let word = word(&mut p)?;
            p.expect(&Tok::Turnstile)?;
            let f = formula::formula(&mut p)?;
            p.expect(&Tok::RParen)?;
            signature.insert(&word, f);
        }
        p.expect(&Tok::RParen)?;
    }
    let proof = proof(&mut p)?;
    p.finish()?;
    Ok(ProofFile { signature, proof })
}

/// Parses a proof; a signature block, if present, is ignored.
pub fn parse_proof(text: &str) -> Result<Proof, ParseError> {
    parse_proof_file(text).map(|f| f.proof)
}

fn word(p: &mut Parser) -> Result<String, ParseError> {
    match p.next() {
        Tok::Ident(s) | Tok::Str(s) => Ok(s),
        t => Err(p.error(format!("expected a word, found {t}"))),
    }
}

fn proof(p: &mut Parser) -> Result<Proof, ParseError> {
    p.expect(&Tok::LParen)?;
    let name = p.ident("a rule name")?;
    let Some(kind) = RuleKind::from_name(&name) else {
        return Err(p.error(format!("unknown rule `{name}`")));
    };
    let occ = |p: &mut Parser| p.ident("an occurrence name").map(|s| OccId::new(&s));
    let rule = match kind {
        RuleKind::Axiom => Rule::Axiom,
        RuleKind::ProperAxiom => Rule::ProperAxiom(word(p)?.into()),
        RuleKind::LtoE => Rule::LtoE,
        RuleKind::LfromE => Rule::LfromE,
        RuleKind::LltoE => Rule::LltoE,
        RuleKind::LtoI => Rule::LtoI(occ(p)?),
        RuleKind::LfromI => Rule::LfromI(occ(p)?),
        RuleKind::LltoI => Rule::LltoI(occ(p)?),
        RuleKind::OdotI => Rule::OdotI,
        RuleKind::OdotE => Rule::OdotE(occ(p)?, occ(p)?),
        RuleKind::OtimesI => Rule::OtimesI,
        RuleKind::OtimesE => Rule::OtimesE(occ(p)?, occ(p)?),
        RuleKind::Entropy => Rule::Entropy,
    };
    let conclusion = sequent(p)?;
    let mut premises = Vec::new();
    while p.peek() == &Tok::LParen {
        premises.push(proof(p)?);
    }
    p.expect(&Tok::RParen)?;
    Ok(Proof::from_parts(rule, premises, conclusion))
}

pub(crate) fn sequent(p: &mut Parser) -> Result<Sequent, ParseError> {
    let lhs = if p.peek() == &Tok::Turnstile { SpTerm::Empty } else { context::context(p)? };
    p.expect(&Tok::Turnstile)?;
    let rhs = formula::formula(p)?;
    Ok(Sequent::new(lhs, rhs))
}

pub(crate) fn write_word(out: &mut String, w: &str) {
    let plain = w.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && w != "o";
    if plain {
        out.push_str(w);
    } else {
        out.push('"');
        for c in w.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
    }
}

pub(crate) fn rule_head(rule: &Rule) -> String {
    let mut s = rule.kind().name().to_string();
    match rule {
        Rule::ProperAxiom(w) => {
            s.push(' ');
            write_word(&mut s, w);
        }
        Rule::LtoI(d) | Rule::LfromI(d) | Rule::LltoI(d) => {
            s.push(' ');
            s.push_str(d.as_str());
        }
        Rule::OdotE(a, b) | Rule::OtimesE(a, b) => {
            s.push_str(&format!(" {a} {b}"));
        }
        _ => {}
    }
    s
}

fn write_proof(p: &Proof, depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push('(');
    out.push_str(&rule_head(&p.rule));
    out.push(' ');
    out.push_str(&p.conclusion.to_string());
    for q in &p.premises {
        out.push('\n');
        write_proof(q, depth + 1, out);
    }
    out.push(')');
}

/// Formats a proof, one rule per line, premises indented under their
/// conclusion.
pub fn format_proof(p: &Proof) -> String {
    let mut out = String::new();
    write_proof(p, 0, &mut out);
    out
}

/// Formats a proof file; the signature block is omitted when empty.
pub fn format_proof_file(file: &ProofFile) -> String {
    let mut out = String::new();
    if !file.signature.is_empty() {
        out.push_str("(signature");
        for (w, f) in file.signature.iter() {
            out.push_str("\n  (");
            write_word(&mut out, w);
            out.push_str(&format!(" |- {f})"));
        }
        out.push_str(")\n");
    }
    write_proof(&file.proof, 0, &mut out);
    out.push('\n');
    out
}
