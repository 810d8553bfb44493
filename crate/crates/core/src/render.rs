//! Proof trees for people: an indented text layout and LaTeX for the
//! `bussproofs` package.

use crate::proof::{Proof, Rule, Sequent};

fn rule_text(rule: &Rule) -> String {
    let name = rule.kind().name();
    match rule {
        Rule::ProperAxiom(w) => format!("{name} {w}"),
        Rule::LtoI(d) | Rule::LfromI(d) | Rule::LltoI(d) => format!("{name} {d}"),
        Rule::OdotE(a, b) | Rule::OtimesE(a, b) => format!("{name} {a} {b}"),
        _ => name.to_string(),
    }
}

/// One sequent per line, premises indented under their conclusion, the
/// rule in brackets.
pub fn render_text(p: &Proof) -> String {
    fn go(p: &Proof, depth: usize, out: &mut String) {
        out.push_str(&format!("{}{}  [{}]\n", "  ".repeat(depth), p.conclusion, rule_text(&p.rule)));
        for q in &p.premises {
            go(q, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(p, 0, &mut out);
    out
}

/// Math-mode LaTeX for a sequent, built from its text form.
pub fn latex_sequent(s: &Sequent) -> String {
    latex_tokens(&s.to_string())
}

fn latex_tokens(text: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_alphanumeric() || c == '_' || c == '\'' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if word == "o" {
                out.push_str("\\odot ");
            } else if word.chars().count() == 1 {
                out.push_str(&word);
            } else {
                out.push_str(&format!("\\mathit{{{}}}", word.replace('_', "\\_")));
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        match (c, next) {
            ('-', Some('o')) => {
                out.push_str("\\multimap ");
                i += 2;
                continue;
            }
            ('|', Some('-')) => {
                out.push_str("\\vdash ");
                i += 2;
                continue;
            }
            _ => {}
        }
        match c {
            '*' => out.push_str("\\otimes "),
            '\\' => out.push_str("\\backslash "),
            '<' => out.push_str("\\langle "),
            '>' => out.push_str("\\rangle "),
            ':' => out.push_str("{:}"),
            ' ' => {}
            c => out.push(c),
        }
        i += 1;
    }
    out.trim_end().to_string()
}

fn latex_rule(rule: &Rule) -> String {
    let sym = match rule {
        Rule::Axiom | Rule::ProperAxiom(_) => return String::new(),
        Rule::LtoE => "\\backslash_e",
        Rule::LfromE => "/_e",
        Rule::LltoE => "\\multimap_e",
        Rule::LtoI(_) => "\\backslash_i",
        Rule::LfromI(_) => "/_i",
        Rule::LltoI(_) => "\\multimap_i",
        Rule::OdotI => "\\odot_i",
        Rule::OdotE(..) => "\\odot_e",
        Rule::OtimesI => "\\otimes_i",
        Rule::OtimesE(..) => "\\otimes_e",
        Rule::Entropy => "\\mathit{ent}",
    };
    format!("\\RightLabel{{\\scriptsize ${sym}$}}\n")
}

/// A `prooftree` environment for `bussproofs`. Proper axioms show their
/// word before the turnstile's right side.
pub fn render_latex(p: &Proof) -> String {
    fn go(p: &Proof, out: &mut String) {
        for q in &p.premises {
            go(q, out);
        }
        let seq = match &p.rule {
            Rule::ProperAxiom(w) => format!("\\vdash \\textrm{{{}}}{{:}}\\,{}", w.replace('_', "\\_"), latex_tokens(&p.conclusion.rhs.to_string())),
            _ => latex_sequent(&p.conclusion),
        };
        let cmd = match p.premises.len() {
            0 => "AxiomC",
            1 => "UnaryInfC",
            2 => "BinaryInfC",
            _ => "TrinaryInfC",
        };
        out.push_str(&latex_rule(&p.rule));
        out.push_str(&format!("\\{cmd}{{${seq}$}}\n"));
    }
    let mut out = String::from("\\begin{prooftree}\n");
    go(p, &mut out);
    out.push_str("\\end{prooftree}\n");
    out
}
