use std::path::PathBuf;

use subatomic_core::{builtin, Derivation, RuleKind, SeqDerivation};
use subatomic_interp::is_tame;
use subatomic_oracle::{random_derivation_in, CorpusSpec};

use crate::{run, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("subatomic-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

struct Run {
    code: u8,
    out: String,
    err: String,
}

fn sub(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("subatomic").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

#[test]
fn lint_samlls_down_passes() {
    let r = sub(&["lint", "-s", "samlls.down"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("conditions 1–5: pass"), "{}", r.out);
}

#[test]
fn lint_full_classical_fails_condition_two() {
    let r = sub(&["lint", "-s", "saks", "--json"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["splittable"], false);
    let failed: Vec<u64> =
        v["verdicts"].as_array().unwrap().iter().filter(|x| x["pass"] == false).map(|x| x["condition"].as_u64().unwrap()).collect();
    assert_eq!(failed, vec![2]);
}

#[test]
fn lint_reads_system_files() {
    let dir = scratch("lint");
    let file = dir.join("bvu.sas");
    let src = subatomic_core::system::builtin_source("sabvu.down").unwrap();
    let edited: String = src.lines().filter(|l| l.trim() != "assign par o o = one").map(|l| format!("{l}\n")).collect();
    assert_ne!(src, edited);
    std::fs::write(&file, edited).unwrap();
    let r = sub(&["lint", "-s", file.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.out.contains("condition 3: fail"), "{}", r.out);
}

#[test]
fn check_pi0() {
    let r = sub(&["check", "-s", "samlls", "--proof", &data("pi0.sad")]);
    assert_eq!(r.code, EXIT_OK, "{}{}", r.out, r.err);
    assert!(r.out.contains("conclusion ((bot a one) par (one a bot))"));
}

#[test]
fn check_reports_the_failing_line() {
    let dir = scratch("check");
    let file = dir.join("bad.sad");
    std::fs::write(&file, "seq samlls\nstart one\nstep = @. (bot par one)\nstep = @. bot\n").unwrap();
    let r = sub(&["check", "-s", "samlls", file.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.out.contains("bad.sad:4: step 2 @."), "{}", r.out);

    std::fs::write(&file, "(step =\n  (form one)\n  (form (one ten )))\n").unwrap();
    let r = sub(&["check", "-s", "samlls", file.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("bad.sad:3:"), "{}", r.err);

    let r = sub(&["check", "-s", "samlls.down", &data("detour.sad")]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.out.contains("unknown rule `atom.up`"), "{}", r.out);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sub(&["frobnicate"]).code, EXIT_ERROR);
    assert_eq!(sub(&["lint", "-s", "no-such-system"]).code, EXIT_ERROR);
    assert_eq!(sub(&["check", "-s", "samlls", "/no/such/file.sad"]).code, EXIT_ERROR);
    assert_eq!(sub(&["split", "-s", "samlls", "--at", "x.y", &data("pi0.sad")]).code, EXIT_ERROR);
    assert_eq!(sub(&["--help"]).code, EXIT_OK);
}

#[test]
fn cut_elim_detour_has_no_up_rules() {
    let dir = scratch("cutelim");
    let out = dir.join("out.sad");
    let r = sub(&["cut-elim", "-s", "samlls", &data("detour.sad"), "-o", out.to_str().unwrap(), "--trace"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.err.contains("up-rule steps 1 → 0"), "{}", r.err);
    assert!(r.err.lines().any(|l| l.starts_with("case ")));
    let sys = builtin("samlls").unwrap();
    let d = Derivation::parse_any(&std::fs::read_to_string(&out).unwrap(), &sys.sig).unwrap();
    d.check(&builtin("samlls.down").unwrap()).unwrap();
    assert!(d.rules_used().iter().all(|r| sys.rule(r.as_str()).is_none_or(|s| s.kind == RuleKind::Down)));
    assert_eq!(sys.render(&d.conclusion()), "((bot a one) par (one a bot))");
}

#[test]
fn cut_elim_json_reports_measures() {
    let r = sub(&["cut-elim", "-s", "samlls", &data("detour.sad"), "--json"]);
    assert_eq!(r.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["up_steps"]["input"], 1);
    assert_eq!(v["up_steps"]["output"], 0);
    let sys = builtin("samlls").unwrap();
    let d = Derivation::parse_any(v["document"].as_str().unwrap(), &sys.sig).unwrap();
    assert_eq!(v["size"]["output"].as_u64().unwrap() as usize, d.size());
}

#[test]
fn split_writes_three_documents() {
    let dir = scratch("split");
    let r = sub(&["split", "-s", "samlls", "--at", "l", &data("pi0.sad"), "-o", dir.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let base = builtin("samlls.down").unwrap();
    for name in ["psi", "phi1", "phi2"] {
        let text = std::fs::read_to_string(dir.join(format!("{name}.sad"))).unwrap();
        Derivation::parse_any(&text, &base.sig).unwrap().check(&base).unwrap();
    }
    let phi1 = Derivation::parse_any(&std::fs::read_to_string(dir.join("phi1.sad")).unwrap(), &base.sig).unwrap();
    let q1 = r.out.lines().find_map(|l| l.strip_prefix("q1 ")).unwrap();
    assert_eq!(base.render(&phi1.conclusion()), format!("(bot par {q1})"));
}

#[test]
fn split_stdout_documents_reparse() {
    let r = sub(&["split", "-s", "samlls", "--at", "r", &data("pi0.sad"), "--seq"]);
    assert_eq!(r.code, EXIT_OK);
    let base = builtin("samlls.down").unwrap();
    let docs: Vec<&str> = r.out.split("seq samlls\n").skip(1).collect();
    assert_eq!(docs.len(), 3);
    for d in docs {
        let (_, s) = SeqDerivation::parse(d, &base.sig).unwrap();
        s.check(&base).unwrap();
    }
}

#[test]
fn split_rejects_plus_positions() {
    let r = sub(&["split", "-s", "samlls", "--at", ".", &data("pi0.sad")]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.err.contains("no connective other than `+`"), "{}", r.err);
}

#[test]
fn ctxred_emits_zeta_and_chi() {
    let r = sub(&["ctxred", "-s", "samlls", "--at", "r", &data("pi0.sad"), "--json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    let k = v["k"].as_str().unwrap();
    assert_eq!(v["zeta"]["conclusion"].as_str().unwrap(), format!("((one a bot) par {k})"));
    assert_eq!(v["chi"]["conclusion"], "((bot a one) par (one a bot))");
    let base = builtin("samlls.down").unwrap();
    for key in ["zeta", "chi"] {
        Derivation::parse_any(v[key]["document"].as_str().unwrap(), &base.sig).unwrap().check(&base).unwrap();
    }
}

#[test]
fn interpret_and_represent_documents() {
    let r = sub(&["interpret", "-s", "mll", &data("pi0.sad")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, "seq smlls\nstart one\nstep ai.down @. (a par ~a)\n");

    let dir = scratch("interp");
    let file = dir.join("pi0.sd");
    std::fs::write(&file, &r.out).unwrap();
    let back = sub(&["represent", "-s", "mll", file.to_str().unwrap()]);
    assert_eq!(back.code, EXIT_OK, "{}", back.err);
    let sys = builtin("samlls").unwrap();
    let d = Derivation::parse_any(&back.out, &sys.sig).unwrap();
    d.check(&sys).unwrap();
    assert_eq!(sys.render(&d.conclusion()), "((bot a one) par (one a bot))");

    assert_eq!(sub(&["interpret", "-s", "classical", "(((f a t) or t) and (t b f))"]).out, "((a or t) and ~b)\n");
    assert_eq!(sub(&["represent", "-s", "classical", "(a and ~b)"]).out, "((f a t) and (t b f))\n");
}

#[test]
fn interpret_rejects_uninterpretable_formulae() {
    let r = sub(&["interpret", "-s", "classical", "((f a t) b t)"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.err.contains("not interpretable"), "{}", r.err);
}

#[test]
fn interpret_rejects_wild_derivations() {
    let sys = builtin("saks.down").unwrap();
    let wild = (0..200)
        .map(|seed| random_derivation_in(&sys, &CorpusSpec { steps: 8, ..CorpusSpec::new("saks.down", seed) }).unwrap())
        .find(|d| !is_tame(d, &sys))
        .expect("some random proof applies a rule under an atom");
    let dir = scratch("wild");
    let file = dir.join("wild.sad");
    std::fs::write(&file, wild.render(&sys.sig)).unwrap();
    let r = sub(&["interpret", "-s", "classical", file.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.err.contains("not tame"), "{}", r.err);
}

#[test]
fn prove_answers() {
    let r = sub(&["prove", "-s", "samlls", "-d", "4", "((bot a one) par (one a bot))"]);
    assert_eq!(r.code, EXIT_OK);
    let sys = builtin("samlls").unwrap();
    Derivation::parse_any(&r.out, &sys.sig).unwrap().check(&sys).unwrap();

    let r = sub(&["prove", "-s", "samlls", "-d", "4", "((bot a one) ten (one a bot))", "--json"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["status"], "unprovable");
}

#[test]
fn gen_is_seeded() {
    let a = sub(&["gen", "-s", "samlls", "--seed", "5", "-n", "2", "--cuts", "1"]);
    let b = sub(&["gen", "-s", "samlls", "--seed", "5", "-n", "2", "--cuts", "1"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
    let c = sub(&["gen", "-s", "samlls", "--seed", "6", "-n", "2", "--cuts", "1"]);
    assert_ne!(a.out, c.out);

    let dir = scratch("gen");
    let r = sub(&["gen", "-s", "sabvu", "-n", "3", "-o", dir.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(dir.join("manifest.json").is_file());
    for i in 0..3 {
        let f = dir.join(format!("{i:04}.sad"));
        assert_eq!(sub(&["check", "-s", "sabvu", "--proof", f.to_str().unwrap()]).code, EXIT_OK);
    }
}

#[test]
fn audit_reports() {
    let r = sub(&["audit", "-s", "mll", "--samples", "200", "--seed", "1"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("no counterexamples"));
    let again = sub(&["audit", "-s", "mll", "--samples", "200", "--seed", "1"]);
    assert_eq!(r.out, again.out);
}
