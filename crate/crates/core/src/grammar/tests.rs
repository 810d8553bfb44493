use super::*;
use crate::normalize::{check_subformula_property, normalize, Mode};
use crate::proof::check_in;

const ITALIAN: &str = include_str!("../../../../lexicon/italian.lex");

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn lex(w: Option<&str>, s: &str) -> LabeledDerivation {
    LabeledDerivation::lex(w, f(s))
}

fn hyp(id: &str, s: &str) -> LabeledDerivation {
    LabeledDerivation::hypothesis(id, f(s))
}

fn merge(a: &LabeledDerivation, b: &LabeledDerivation) -> LabeledDerivation {
    LabeledDerivation::merge(a, b).unwrap()
}

fn mv(a: &LabeledDerivation, b: &LabeledDerivation) -> LabeledDerivation {
    LabeledDerivation::move_into(a, b).unwrap()
}

/// The analysis of "che cosa fai" built by hand, bottom-up.
fn reference() -> LabeledDerivation {
    let fai = merge(&lex(Some("fai"), "k \\ d \\ v / d"), &hyp("d1", "d"));
    let vp = merge(&hyp("k1", "k"), &fai);
    let vp = mv(&hyp("kd", "k * d"), &vp);
    let vp = merge(&hyp("d2", "d"), &vp);
    let ip = merge(&lex(None, "k \\ t / v"), &vp);
    let ip = merge(&hyp("k2", "k"), &ip);
    let ip = mv(&lex(None, "k * d"), &ip);
    let cp = merge(&lex(None, "wh \\ c / t"), &ip);
    let cp = merge(&hyp("w", "wh"), &cp);
    let wh = merge(&lex(Some("che"), "wh * (k * d) / n"), &lex(Some("cosa"), "n"));
    mv(&wh, &cp)
}

#[test]
fn reads_lexicon_files() {
    let lex = Lexicon::parse(ITALIAN).unwrap();
    assert_eq!(lex.entries().count(), 6);
    assert_eq!(lex.formulas_of("fai").collect::<Vec<_>>(), vec![&f("k \\ d \\ v / d")]);
    assert_eq!(lex.entries().filter(|e| e.word.is_none()).count(), 3);
    assert_eq!(Lexicon::parse(&lex.to_string()).unwrap(), lex);
    let movable: Vec<String> = lex.movable().iter().map(|f| f.to_string()).collect();
    assert_eq!(movable.len(), 4);
    for m in ["wh", "k * d", "k", "d"] {
        assert!(movable.contains(&m.to_string()), "{m}");
    }

    assert_eq!(Lexicon::parse("a b\n"), Err(LexiconError::MissingTab { line: 1 }));
    assert!(matches!(Lexicon::parse("# c\n\nw\ta /\n"), Err(LexiconError::Formula { line: 3, .. })));
    assert_eq!(Lexicon::parse("\ta\n"), Err(LexiconError::EmptyWord { line: 1 }));
}

#[test]
fn merges_concatenate_labels_and_flatten_contexts() {
    let wh = merge(&lex(Some("che"), "wh * (k * d) / n"), &lex(Some("cosa"), "n"));
    assert_eq!(wh.conclusion().to_string(), "|- wh * (k * d) label: \"che cosa\"");
    assert_eq!(wh.rule, DerivedRule::MergeRight);

    let fai = merge(&lex(Some("fai"), "k \\ d \\ v / d"), &hyp("y", "d"));
    assert_eq!(fai.conclusion().to_string(), "y:d |- k \\ d \\ v label: \"fai y\"");
    let vp = merge(&hyp("x", "k"), &fai);
    assert_eq!(vp.rule, DerivedRule::MergeLeft);
    assert_eq!(vp.sequent().lhs, SpTerm::par([SpTerm::leaf("x", f("k")), SpTerm::leaf("y", f("d"))]));
    assert_eq!(vp.label.to_string(), "x fai y");
    assert_eq!(vp.expand().size(), 7);
    assert_eq!(vp.expand().premises[0].kind(), crate::proof::RuleKind::LtoE);

    assert!(matches!(
        LabeledDerivation::merge(&hyp("a", "a"), &hyp("b", "b")),
        Err(GrammarError::NoMerge { .. })
    ));
    assert_eq!(
        LabeledDerivation::merge(&hyp("y", "k"), &fai),
        Err(GrammarError::SharedHypothesis(OccId::new("y")))
    );
}

#[test]
fn moves_substitute_the_moved_label() {
    let body = merge(&hyp("k1", "k"), &merge(&lex(Some("fai"), "k \\ d \\ v / d"), &hyp("d1", "d")));
    let moved = mv(&hyp("z", "k * d"), &body);
    assert_eq!(moved.rule, DerivedRule::Move(OccId::new("k1"), OccId::new("d1")));
    assert_eq!(moved.conclusion().to_string(), "z:k * d |- d \\ v label: \"z fai\"");

    let closed = mv(&lex(None, "k * d"), &body);
    assert!(closed.sequent().lhs.is_empty());
    assert_eq!(closed.label.to_string(), "fai");

    assert!(matches!(
        LabeledDerivation::move_into(&hyp("z", "k * v"), &body),
        Err(GrammarError::NoMovablePair { .. })
    ));
    assert!(matches!(LabeledDerivation::move_into(&hyp("z", "k"), &body), Err(GrammarError::NotMovable(_))));
}

#[test]
fn the_reference_analysis() {
    let d = reference();
    assert_eq!(d.label.to_string(), "che cosa fai");
    assert_eq!(d.conclusion().to_string(), "|- c label: \"che cosa fai\"");
    assert_eq!((d.merges(), d.moves()), (8, 3));
    let lexicon = Lexicon::parse(ITALIAN).unwrap();
    let proof = d.expand();
    check_in(&proof, &lexicon.signature()).unwrap();
    assert!(proof.size() > 20);
    let nf = normalize(&proof, Mode::Pcmll, None).unwrap();
    assert!(nf.normal);
    check_subformula_property(&nf.proof).unwrap();
}

#[test]
fn derives_the_question() {
    let lexicon = Lexicon::parse(ITALIAN).unwrap();
    let found = derive(&lexicon, &["che", "cosa", "fai"], &f("c"), 12);
    assert!(!found.is_empty());
    let want = reference().skeleton();
    assert!(found.iter().any(|d| d.skeleton() == want), "{}", found[0].skeleton());
    for d in &found {
        assert_eq!(d.label.to_string(), "che cosa fai");
        check_in(&d.expand(), &lexicon.signature()).unwrap();
    }
    assert!(derive(&lexicon, &["che", "cosa", "fai"], &f("c"), 10).is_empty());
    assert!(derive(&lexicon, &["cosa", "che", "fai"], &f("c"), 12).is_empty());
}

#[test]
fn derivations_ignore_lexicon_order() {
    let lexicon = Lexicon::parse(ITALIAN).unwrap();
    let mut reversed = Lexicon::new();
    for e in lexicon.entries().collect::<Vec<_>>().into_iter().rev() {
        reversed.insert(e.word.as_deref(), e.formula.clone());
    }
    let words = ["che", "cosa", "fai"];
    assert_eq!(derive(&lexicon, &words, &f("c"), 11), derive(&reversed, &words, &f("c"), 11));
}

#[test]
fn trivial_searches() {
    assert!(derive(&Lexicon::new(), &["w"], &f("c"), 3).is_empty());
    let mut one = Lexicon::new();
    one.insert(Some("w"), f("c"));
    let found = derive(&one, &["w"], &f("c"), 1);
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].rule, DerivedRule::Lex(Some("w".into())));
    assert_eq!(found[0].expand(), Proof::proper_axiom("w", f("c")));
}
