use super::*;
use crate::proof::{check, check_in, parse_proof, parse_proof_file, Rule};

fn pf(text: &str) -> Proof {
    let p = parse_proof(text).unwrap();
    check(&p).unwrap();
    p
}

fn m(a: usize, b: usize, c: usize) -> Measure {
    Measure { a, b, c }
}

const EX1: &str = include_str!("../../../../corpus/exformnorm_ex1.proof");
const EX2: &str = include_str!("../../../../corpus/exformnorm_ex2.proof");
const MIX1: &str = include_str!("../../../../corpus/exformnorm2_ex1.proof");
const MIX2: &str = include_str!("../../../../corpus/exformnorm2_ex2.proof");

fn corpus(text: &str) -> Proof {
    parse_proof_file(text).unwrap().proof
}

const LTO_REDEX: &str = "(lto_e <x:d ; z:d \\ c> |- c
  (ax x:d |- d)
  (lto_i y z:d \\ c |- d \\ c
    (lto_e <y:d ; z:d \\ c> |- c
      (ax y:d |- d)
      (ax z:d \\ c |- d \\ c))))";

#[test]
fn finds_plain_redexes() {
    assert_eq!(find_redexes(&Proof::axiom("x", Formula::atom("a"))), vec![]);
    let p = pf("(lto_e x:a |- a (ax x:a |- a) (lto_i y |- a \\ a (ax y:a |- a)))");
    assert_eq!(find_redexes(&p), vec![RedexSite { kind: RedexKind::LtoRedex, location: vec![] }]);

    let right = pf("(otimes_e a b w:a * b |- a * b
      (ax w:a * b |- a * b)
      (otimes_i (a:a, b:b) |- a * b (ax a:a |- a) (ax b:b |- b)))");
    assert_eq!(find_redexes(&right), vec![RedexSite { kind: RedexKind::OtimesRight, location: vec![] }]);

    // Left and right at once; the left one is listed first.
    let both = pf("(odot_e a b <x:a ; y:b> |- a o b
      (odot_i <x:a ; y:b> |- a o b (ax x:a |- a) (ax y:b |- b))
      (odot_i <a:a ; b:b> |- a o b (ax a:a |- a) (ax b:b |- b)))");
    let kinds: Vec<_> = find_redexes(&both).into_iter().map(|s| s.kind).collect();
    assert_eq!(kinds, vec![RedexKind::OdotLeft, RedexKind::OdotRight]);

    // Leftmost-innermost order.
    let nested = pf("(lto_e x:a |- a
      (lto_e x:a |- a (ax x:a |- a) (lto_i y |- a \\ a (ax y:a |- a)))
      (lto_i z |- a \\ a (ax z:a |- a)))");
    let sites: Vec<_> = find_redexes(&nested).into_iter().map(|s| s.location).collect();
    assert_eq!(sites, vec![vec![0], vec![]]);
}

#[test]
fn contracts_implication_redexes_by_grafting() {
    let p = pf(LTO_REDEX);
    let site = find_redexes(&p).remove(0);
    let q = contract(&p, &site).unwrap();
    check(&q).unwrap();
    assert_eq!(q.conclusion, p.conclusion);
    assert_eq!(q.size(), p.size() - 3);
    assert_eq!(q, pf("(lto_e <x:d ; z:d \\ c> |- c (ax x:d |- d) (ax z:d \\ c |- d \\ c))"));
    let bogus = RedexSite { kind: RedexKind::LfromRedex, location: vec![] };
    assert!(matches!(contract(&p, &bogus), Err(RewriteError::NotApplicable { .. })));
}

#[test]
fn contracts_product_redexes() {
    let right = pf("(odot_e a b <x:c ; y:c \\ (a o b)> |- a o b
      (lto_e <x:c ; y:c \\ (a o b)> |- a o b (ax x:c |- c) (ax y:c \\ (a o b) |- c \\ (a o b)))
      (odot_i <a:a ; b:b> |- a o b (ax a:a |- a) (ax b:b |- b)))");
    let q = contract(&right, &RedexSite { kind: RedexKind::OdotRight, location: vec![] }).unwrap();
    assert_eq!(q, right.premises[0]);

    let left = pf("(otimes_e a b (x:a, y:b, z:c) |- (a * b) * c
      (otimes_i (x:a, y:b) |- a * b (ax x:a |- a) (ax y:b |- b))
      (otimes_i (a:a, b:b, z:c) |- (a * b) * c
        (otimes_i (a:a, b:b) |- a * b (ax a:a |- a) (ax b:b |- b))
        (ax z:c |- c)))");
    let q = contract(&left, &RedexSite { kind: RedexKind::OtimesLeft, location: vec![] }).unwrap();
    check(&q).unwrap();
    assert_eq!(q.conclusion, left.conclusion);
    assert_eq!(q.to_string(), "(otimes_i (x:a, y:b, z:c) |- a * b * c
  (otimes_i (x:a, y:b) |- a * b
    (ax x:a |- a)
    (ax y:b |- b))
  (ax z:c |- c))");
}

#[test]
fn raises_product_eliminations() {
    // Over an implication introduction.
    let ex1 = corpus(EX1);
    let q = raise_product_elim(&ex1, &[1]).unwrap();
    assert_eq!(q.get(&[1]).unwrap().kind(), RuleKind::LtoI);
    assert_eq!(q.get(&[1, 0]).unwrap().kind(), RuleKind::OdotE);
    assert_eq!(q.conclusion, ex1.conclusion);
    assert_eq!(q.size(), ex1.size());

    // Over entropy.
    let p = pf("(otimes_e a b (x:c, w:a * b) |- c o (a * b)
      (ax w:a * b |- a * b)
      (entropy (x:c, a:a, b:b) |- c o (a * b)
        (odot_i <x:c ; (a:a, b:b)> |- c o (a * b)
          (ax x:c |- c)
          (otimes_i (a:a, b:b) |- a * b (ax a:a |- a) (ax b:b |- b)))))");
    let q = raise_product_elim(&p, &[]).unwrap();
    check(&q).unwrap();
    assert_eq!(q.kind(), RuleKind::Entropy);
    assert_eq!(q.premises[0].kind(), RuleKind::OtimesE);
    assert_eq!(q.premises[0].conclusion.lhs.to_string(), "<x:c ; w:a * b>");

    // Over a non-commutative product elimination, into its body.
    let p = pf("(otimes_e a b <v:c o d ; w:a * b> |- (c o d) o (a * b)
      (ax w:a * b |- a * b)
      (odot_e c d <v:c o d ; (a:a, b:b)> |- (c o d) o (a * b)
        (ax v:c o d |- c o d)
        (odot_i <c:c ; d:d ; (a:a, b:b)> |- (c o d) o (a * b)
          (odot_i <c:c ; d:d> |- c o d (ax c:c |- c) (ax d:d |- d))
          (otimes_i (a:a, b:b) |- a * b (ax a:a |- a) (ax b:b |- b)))))");
    let q = raise_product_elim(&p, &[]).unwrap();
    check(&q).unwrap();
    assert_eq!(q.rule, Rule::OdotE("c".into(), "d".into()));
    assert_eq!(q.premises[1].rule, Rule::OtimesE("a".into(), "b".into()));

    // Up to the introduction joining its hypotheses, and no further.
    let r = raise_product_elim(&q, &[1]).unwrap();
    assert_eq!(r.get(&[1, 1]).unwrap().kind(), RuleKind::OtimesE);
    assert!(raise_product_elim(&r, &[1, 1]).is_err());
    assert!(raise_product_elim(&q, &[0]).is_err());
}

#[test]
fn lowers_product_eliminations_and_entropy_under_implicative_ones() {
    let p = pf("(lto_e <x:x ; (w:a * b, g:a -o b -o (x \\ y))> |- y
      (ax x:x |- x)
      (otimes_e a b (w:a * b, g:a -o b -o (x \\ y)) |- x \\ y
        (ax w:a * b |- a * b)
        (llto_e (b:b, a:a, g:a -o b -o (x \\ y)) |- x \\ y
          (ax b:b |- b)
          (llto_e (a:a, g:a -o b -o (x \\ y)) |- b -o (x \\ y)
            (ax a:a |- a)
            (ax g:a -o b -o (x \\ y) |- a -o b -o (x \\ y))))))");
    let q = raise_implicative_elim(&p, &[]).unwrap();
    check(&q).unwrap();
    assert_eq!(q.kind(), RuleKind::OtimesE);
    assert_eq!(q.premises[1].kind(), RuleKind::LtoE);

    let p = pf("(lto_e <x:x ; (z:z, y:z \\ (x \\ y))> |- y
      (ax x:x |- x)
      (entropy (z:z, y:z \\ (x \\ y)) |- x \\ y
        (lto_e <z:z ; y:z \\ (x \\ y)> |- x \\ y
          (ax z:z |- z)
          (ax y:z \\ (x \\ y) |- z \\ (x \\ y)))))");
    let q = raise_implicative_elim(&p, &[]).unwrap();
    check(&q).unwrap();
    assert_eq!(q.kind(), RuleKind::Entropy);
    assert_eq!(q.premises[0].conclusion.lhs.to_string(), "<x:x ; z:z ; y:z \\ x \\ y>");

    // One application on the first commutative example yields its target
    // display.
    let mix1 = corpus(MIX1);
    let want = corpus(include_str!("../../../../corpus/exformnorm2_ex1.expected.proof"));
    assert_eq!(raise_implicative_elim(&mix1, &[]).unwrap(), want);
    assert!(raise_implicative_elim(&mix1, &[1]).is_err());
}

#[test]
fn lifts_through_type_premises() {
    let mix2 = corpus(MIX2);
    let want = corpus(include_str!("../../../../corpus/exformnorm2_ex2.expected.proof"));
    assert_eq!(lift_through_type_premise(&mix2, &[]).unwrap(), want);
    assert!(lift_through_type_premise(&mix2, &[0]).is_err());
}

#[test]
fn measures_of_the_examples() {
    let ax = Proof::axiom("x", Formula::atom("a"));
    assert_eq!(measure_l(&ax), m(1, 0, 0));
    assert_eq!(measure_pcmll(&ax), m(1, 0, 0));

    let ex1 = corpus(EX1);
    assert_eq!(d_conj(&ex1, &[1]), Some(1));
    assert_eq!(extended_redex_at(&ex1, &[]), Some(ExtendedRedex { elim: vec![], intro: vec![1, 1], k: 1 }));
    assert_eq!(measure_l(&ex1), m(12, 1, 0));

    let ex2 = corpus(EX2);
    assert_eq!(d_conj(&ex2, &[]), Some(1));
    assert_eq!(measure_l(&ex2), m(11, 1, 0));

    assert_eq!(measure_pcmll(&corpus(MIX1)), m(12, 1, 0));
    assert_eq!(measure_pcmll(&corpus(MIX2)), m(15, 0, 1));
}

#[test]
fn normalizes_the_examples() {
    for (text, normal, mode) in [
        (EX1, include_str!("../../../../corpus/exformnorm_ex1.normal.proof"), Mode::Lambek),
        (EX2, include_str!("../../../../corpus/exformnorm_ex2.normal.proof"), Mode::Lambek),
        (MIX1, include_str!("../../../../corpus/exformnorm2_ex1.normal.proof"), Mode::Pcmll),
        (MIX2, include_str!("../../../../corpus/exformnorm2_ex2.normal.proof"), Mode::Pcmll),
    ] {
        let file = parse_proof_file(text).unwrap();
        assert!(!is_normal(&file.proof, mode));
        let out = normalize(&file.proof, mode, None).unwrap();
        assert!(out.normal);
        assert!(out.measure_violations().is_empty());
        check_in(&out.proof, &file.signature).unwrap();
        assert_eq!(out.proof, parse_proof_file(normal).unwrap().proof);
        assert_eq!(check_subformula_property(&out.proof), Ok(()));
    }
    let ex2 = normalize(&corpus(EX2), Mode::Lambek, None).unwrap();
    assert_eq!(ex2.trace(), "step 1: raise-product at root measure 11,0,0\n");
}

#[test]
fn axioms_are_normal() {
    let ax = Proof::axiom("x", Formula::atom("a"));
    for mode in [Mode::Lambek, Mode::Pcmll] {
        assert!(is_normal(&ax, mode));
        let out = normalize(&ax, mode, None).unwrap();
        assert_eq!(out.proof, ax);
        assert!(out.steps.is_empty() && out.normal);
    }
}

#[test]
fn lambek_mode_rejects_commutative_proofs() {
    assert_eq!(normalize(&corpus(MIX2), Mode::Lambek, None).unwrap_err(), NormalizeError::NotLambek);
}

#[test]
fn fuel_exhaustion_is_flagged() {
    let out = normalize(&corpus(MIX2), Mode::Pcmll, Some(1)).unwrap();
    assert!(out.fuel_exhausted && !out.normal);
    assert_eq!(out.steps.len(), 1);
}

#[test]
fn subformula_property() {
    assert_eq!(check_subformula_property(&Proof::axiom("x", Formula::atom("a"))), Ok(()));
    let cut = pf("(llto_e x:d |- d (ax x:d |- d) (llto_i y |- d -o d (ax y:d |- d)))");
    let errs = check_subformula_property(&cut).unwrap_err();
    assert_eq!(errs, vec![SubformulaViolation { path: vec![1], formula: crate::formula::parse_formula("d -o d").unwrap() }]);
    let fixed = normalize(&cut, Mode::Pcmll, None).unwrap().proof;
    assert_eq!(check_subformula_property(&fixed), Ok(()));
    // The examples violate it before normalization.
    assert!(check_subformula_property(&corpus(EX1)).is_err());
}

#[test]
fn otimes_chains_are_sorted_when_independent() {
    let sorted = pf("(otimes_e a b (v:a * b, w:c * d) |- (a * b) * (c * d)
      (ax v:a * b |- a * b)
      (otimes_e c d (w:c * d, a:a, b:b) |- (a * b) * (c * d)
        (ax w:c * d |- c * d)
        (otimes_i (a:a, b:b, c:c, d:d) |- (a * b) * (c * d)
          (otimes_i (a:a, b:b) |- a * b (ax a:a |- a) (ax b:b |- b))
          (otimes_i (c:c, d:d) |- c * d (ax c:c |- c) (ax d:d |- d)))))");
    let unsorted = pf("(otimes_e c d (v:a * b, w:c * d) |- (a * b) * (c * d)
      (ax w:c * d |- c * d)
      (otimes_e a b (v:a * b, c:c, d:d) |- (a * b) * (c * d)
        (ax v:a * b |- a * b)
        (otimes_i (a:a, b:b, c:c, d:d) |- (a * b) * (c * d)
          (otimes_i (a:a, b:b) |- a * b (ax a:a |- a) (ax b:b |- b))
          (otimes_i (c:c, d:d) |- c * d (ax c:c |- c) (ax d:d |- d)))))");
    assert_eq!(canonical_otimes_chains(&sorted), sorted);
    assert_eq!(canonical_otimes_chains(&unsorted), sorted);

    // A dependent pair keeps its order.
    let dependent = pf("(otimes_e a b w:a * b |- a * b
      (ax w:a * b |- a * b)
      (otimes_e x y (a:a, b:b) |- a * b
        (otimes_i (a:a, b:b) |- a * b (ax a:a |- a) (ax b:b |- b))
        (otimes_i (x:a, y:b) |- a * b (ax x:a |- a) (ax y:b |- b))))");
    assert_eq!(canonical_otimes_chains(&dependent), dependent);
}
