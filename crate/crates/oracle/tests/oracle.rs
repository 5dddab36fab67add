use subatomic_core::*;
use subatomic_oracle::*;

fn mll() -> SystemDef {
    builtin("samlls.down").unwrap()
}

#[test]
fn pi0_formula_is_provable() {
    let m = mll();
    let f = m.parse("((bot a one) par (one a bot))").unwrap();
    let out = prove(&f, &m, &SearchConfig { depth: 6, ..Default::default() });
    let d = out.proof().expect("proof found");
    d.check(&m).unwrap();
    assert_eq!(d.premiss(), m.one_formula());
    assert_eq!(d.conclusion(), f);
    assert!(d.rules_used().iter().any(|r| r.as_str() == "atom.down"));
}

#[test]
fn atom_times_its_negation_is_unprovable() {
    let m = mll();
    let f = m.parse("((bot a one) ten (one a bot))").unwrap();
    let out = prove(&f, &m, &SearchConfig { depth: 6, ..Default::default() });
    assert!(matches!(out, SearchOutcome::Absent { exhaustive: true }), "{out:?}");
}

#[test]
fn one_has_a_zero_step_proof() {
    let m = mll();
    let d = prove(&m.one_formula(), &m, &SearchConfig::default()).proof().cloned().unwrap();
    assert_eq!(d.num_steps(), 0);
    let d = prove(&m.parse("(one ten (bot par one))").unwrap(), &m, &SearchConfig::default());
    let d = d.proof().unwrap();
    assert!(d.rules_used().iter().all(|r| r.is_eq()));
}

#[test]
fn budget_exhaustion_is_reported() {
    let m = builtin("samlls").unwrap();
    let f = m.parse("(((bot a one) ten (one b bot)) par ((one a bot) par (bot b one)))").unwrap();
    let out = prove(&f, &m, &SearchConfig { depth: 6, budget: 10, ..Default::default() });
    assert!(matches!(out, SearchOutcome::BudgetExhausted));
    let out = prove(&f, &m, &SearchConfig { depth: 6, ..Default::default() });
    out.proof().unwrap().check(&m).unwrap();
}

#[test]
fn search_without_memo_agrees() {
    let m = mll();
    for s in ["((bot a one) par (one a bot))", "((bot a one) ten (one a bot))", "(one par (one par (bot ten bot)))"] {
        let f = m.parse(s).unwrap();
        let a = prove(&f, &m, &SearchConfig { depth: 2, ..Default::default() });
        let b = prove(&f, &m, &SearchConfig { depth: 2, memo: false, ..Default::default() });
        assert_eq!(a.is_found(), b.is_found(), "{s}");
        if let Some(d) = b.proof() {
            d.check(&m).unwrap();
        }
    }
}

#[test]
fn enumeration_counts() {
    let m = mll();
    let small: Vec<String> = enumerate_formulae(&m, 1, 1).iter().map(|f| m.render(f)).collect();
    assert_eq!(small, ["one", "bot"]);
    let three: Vec<String> = enumerate_formulae(&m, 3, 1).iter().map(|f| m.render(f)).collect();
    assert_eq!(three.len(), 6);
    assert!(three.contains(&"(bot a one)".to_string()));
    assert!(!three.contains(&"(bot par bot)".to_string()));
    assert!(!three.contains(&"(one ten bot)".to_string()));
    assert_eq!(enumerate_formulae(&m, 3, 2).len(), 8);
    assert_eq!(enumerate_formulae(&m, 5, 1).len(), 30);
    assert_eq!(enumerate_formulae(&m, 7, 2).len(), 770);
}

#[test]
fn enumeration_is_deduplicated_and_deterministic() {
    let m = mll();
    let a = enumerate_formulae(&m, 5, 2);
    assert_eq!(a, enumerate_formulae(&m, 5, 2));
    let mut classes: Vec<Formula> = a.iter().map(|f| m.theory.canonical(f, Subset::Full)).collect();
    classes.sort();
    classes.dedup();
    assert_eq!(classes.len(), a.len());
}

#[test]
fn random_proofs_without_cuts_use_down_rules_only() {
    for sys in ["samlls", "saks", "sabvu", "sabv"] {
        let s = resolve(sys).unwrap();
        for seed in 0..20 {
            let d = random_derivation(&CorpusSpec::new(sys, seed)).unwrap();
            d.check(&s).unwrap();
            assert_eq!(d.premiss(), s.one_formula());
            assert_eq!(count_cuts(&s, &d), Some(0));
        }
    }
}

#[test]
fn injected_cuts_are_counted_exactly() {
    for sys in ["samlls", "saks", "sabvu"] {
        let s = resolve(sys).unwrap();
        for seed in 0..20 {
            for (cuts, size) in [(1, 0), (2, 0), (1, 5), (3, 7)] {
                let spec = CorpusSpec { cuts, cut_size: size, ..CorpusSpec::new(sys, seed) };
                let d = random_derivation(&spec).unwrap();
                d.check(&s).unwrap();
                assert_eq!(count_cuts(&s, &d), Some(cuts), "{sys} seed {seed}");
            }
        }
    }
}

#[test]
fn cut_kinds_are_respected() {
    let s = resolve("samlls").unwrap();
    for seed in 0..10 {
        for kind in [CutKind::Atom, CutKind::NonAtom] {
            let spec = CorpusSpec { cuts: 1, cut_kind: kind, cut_size: 5, ..CorpusSpec::new("samlls", seed) };
            let d = random_derivation(&spec).unwrap().sequentialize();
            let st = d.steps.iter().find(|st| st.rule.as_str().ends_with(".up")).unwrap();
            let beta = st.result.get(&st.path).unwrap().conn().unwrap();
            assert_eq!(s.sig.conn(beta).is_atom, kind == CutKind::Atom);
        }
    }
    let spec = CorpusSpec { cuts: 1, ..CorpusSpec::new("samlls.down", 0) };
    assert!(matches!(random_derivation(&spec), Err(GenError::NoCut(_))));
}

#[test]
fn tame_proofs_keep_rules_outside_atoms() {
    let s = resolve("saks").unwrap();
    for seed in 0..20 {
        let spec = CorpusSpec { cuts: 2, cut_size: 5, tame: true, cut_kind: CutKind::NonAtom, ..CorpusSpec::new("saks", seed) };
        let d = random_derivation(&spec).unwrap().sequentialize();
        for (i, st) in d.steps.iter().enumerate() {
            if st.rule.is_eq() {
                continue;
            }
            let f = d.before(i);
            for k in 0..st.path.len() {
                let c = f.get(&st.path[..k]).unwrap().conn().unwrap();
                assert!(!s.sig.conn(c).is_atom, "seed {seed}: rule under an atom");
            }
        }
    }
}

#[test]
fn generation_is_deterministic() {
    let s = resolve("samlls").unwrap();
    let spec = CorpusSpec { cuts: 2, cut_size: 5, ..CorpusSpec::new("samlls", 42) };
    let a = random_derivation(&spec).unwrap().render(&s.sig);
    let b = random_derivation(&spec).unwrap().render(&s.sig);
    assert_eq!(a, b);
    let other = random_derivation(&CorpusSpec { seed: 43, ..spec }).unwrap().render(&s.sig);
    assert_ne!(a, other);
}

#[test]
fn corpus_has_a_manifest() {
    let dir = std::env::temp_dir().join(format!("subatomic-corpus-{}", std::process::id()));
    let specs: Vec<CorpusSpec> = (0..3).map(|i| CorpusSpec { cuts: 1, ..CorpusSpec::new("samlls", i) }).collect();
    let files = write_corpus(&dir, &specs).unwrap();
    assert_eq!(files.len(), 3);
    let s = resolve("samlls").unwrap();
    for f in &files {
        let d = Derivation::parse_any(&std::fs::read_to_string(f).unwrap(), &s.sig).unwrap();
        d.check(&s).unwrap();
    }
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    let entries = manifest["derivations"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert_eq!(entries[1]["seed"], 1);
    assert_eq!(entries[1]["cuts"], 1);
    assert_eq!(entries[1]["system"], "samlls");
    std::fs::remove_dir_all(&dir).unwrap();
}
