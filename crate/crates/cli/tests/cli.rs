use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn pcmll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcmll")).current_dir(root()).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Golden files carry a leading comment; the rest is the command's output.
fn golden(name: &str) -> String {
    let text = fs::read_to_string(root().join("corpus").join(name)).unwrap();
    text.lines().skip_while(|l| l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

const EXAMPLES: [(&str, &str); 4] = [
    ("exformnorm_ex1", "lambek"),
    ("exformnorm_ex2", "lambek"),
    ("exformnorm2_ex1", "pcmll"),
    ("exformnorm2_ex2", "pcmll"),
];

#[test]
fn check_accepts_an_axiom() {
    let o = pcmll(&["check", "corpus/axiom.proof"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK\n");
}

#[test]
fn check_reports_the_violation() {
    let path = std::env::temp_dir().join(format!("pcmll-bad-{}.proof", std::process::id()));
    fs::write(&path, "(lto_e |- b (ax x:a |- a) (ax f:a \\ b |- b))").unwrap();
    let o = pcmll(&["check", path.to_str().unwrap()]);
    fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(1));
    assert!(!stdout(&o).is_empty());
    assert_ne!(stdout(&o), "OK\n");
}

#[test]
fn normalize_reproduces_the_golden_files() {
    for (name, mode) in EXAMPLES {
        let input = format!("corpus/{name}.proof");
        let o = pcmll(&["normalize", &input, "--mode", mode]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert_eq!(stdout(&o), golden(&format!("{name}.normal.proof")), "{name}");
        assert_eq!(o.stdout, pcmll(&["normalize", &input, "--mode", mode]).stdout, "{name} is not deterministic");
    }
}

#[test]
fn golden_files_check_and_have_the_subformula_property() {
    for (name, _) in EXAMPLES {
        let file = format!("corpus/{name}.normal.proof");
        assert_eq!(stdout(&pcmll(&["check", &file])), "OK\n", "{name}");
        assert_eq!(stdout(&pcmll(&["subformula", &file])), "OK\n", "{name}");
    }
}

#[test]
fn detour_inputs_lack_the_subformula_property() {
    // The other two inputs keep every formula inside a hypothesis or the
    // conclusion even before normalization.
    for name in ["exformnorm_ex1", "exformnorm2_ex2"] {
        let o = pcmll(&["subformula", &format!("corpus/{name}.proof")]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(stdout(&o).contains("is not a sub-formula"), "{name}");
    }
}

#[test]
fn trace_goes_to_stderr() {
    let o = pcmll(&["normalize", "corpus/exformnorm_ex1.proof", "--mode", "lambek", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("exformnorm_ex1.normal.proof"));
    let trace = stderr(&o);
    assert!(!trace.is_empty());
    for (i, line) in trace.lines().enumerate() {
        assert!(line.starts_with(&format!("step {}: ", i + 1)), "{line}");
        let (_, m) = line.rsplit_once(" measure ").expect("measure");
        assert_eq!(m.split(',').filter(|n| n.parse::<usize>().is_ok()).count(), 3, "{line}");
    }
}

#[test]
fn lambek_mode_rejects_commutative_proofs() {
    let o = pcmll(&["normalize", "corpus/exformnorm2_ex1.proof", "--mode", "lambek"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
}

#[test]
fn derive_parses_the_question() {
    let o = pcmll(&["derive", "lexicon/italian.lex", "che cosa fai", "c", "--bound", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let headers: Vec<&str> = out.lines().filter(|l| l.starts_with("# derivation ")).collect();
    assert!(!headers.is_empty());
    assert!(headers[0].starts_with(&format!("# derivation 1 of {}:", headers.len())), "{}", headers[0]);
    let roots = out.lines().filter(|l| l.starts_with('(') && l.contains("|- c label: \"che cosa fai\"")).count();
    assert_eq!(roots, headers.len());
}

#[test]
fn expanded_derivations_are_kernel_proofs() {
    let o = pcmll(&["derive", "lexicon/italian.lex", "che cosa fai", "c", "--limit", "1", "--expand"]);
    assert_eq!(o.status.code(), Some(0));
    let path = std::env::temp_dir().join(format!("pcmll-derived-{}.proof", std::process::id()));
    fs::write(&path, stdout(&o)).unwrap();
    let checked = pcmll(&["check", path.to_str().unwrap()]);
    let normal = pcmll(&["normalize", path.to_str().unwrap(), "--mode", "pcmll"]);
    fs::remove_file(&path).ok();
    assert_eq!(stdout(&checked), "OK\n");
    assert_eq!(normal.status.code(), Some(0), "{}", stderr(&normal));
}

#[test]
fn derive_without_a_parse_fails() {
    let o = pcmll(&["derive", "lexicon/italian.lex", "cosa che fai", "c"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no parse\n");
}

#[test]
fn render_formats() {
    let text = pcmll(&["render", "corpus/exformnorm_ex1.proof"]);
    assert_eq!(text.status.code(), Some(0));
    let first = stdout(&text).lines().next().unwrap().to_string();
    assert!(first.starts_with("|- A / B  ["), "{first}");
    assert_eq!(stdout(&pcmll(&["render", "corpus/axiom.proof", "--format", "latex"])), "\\begin{prooftree}\n\\AxiomC{$x{:}a\\vdash a$}\n\\end{prooftree}\n");
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let missing = pcmll(&["check", "corpus/missing.proof"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("corpus/missing.proof"));

    let path = std::env::temp_dir().join(format!("pcmll-truncated-{}.proof", std::process::id()));
    fs::write(&path, "(ax x:a |-\n").unwrap();
    let truncated = pcmll(&["check", path.to_str().unwrap()]);
    fs::remove_file(&path).ok();
    assert_eq!(truncated.status.code(), Some(2));
    assert!(stderr(&truncated).contains(":2:1:"), "{}", stderr(&truncated));

    assert_eq!(pcmll(&["normalize", "corpus/axiom.proof", "--mode", "linear"]).status.code(), Some(2));
    assert_eq!(pcmll(&["derive", "lexicon/italian.lex", "fai", "c /"]).status.code(), Some(2));
    assert_eq!(pcmll(&[]).status.code(), Some(2));
}
