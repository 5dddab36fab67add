use subatomic_core::*;
use subatomic_split::*;

const PI0: &str = "\
(step =
  (form one)
  (step =
    (form (one a one))
    (step atom.down
      (form ((bot par one) a (one par bot)))
      (form ((bot a one) par (one a bot))))))";

fn mll() -> SystemDef {
    builtin("samlls").unwrap()
}

fn seq_proof(sys: &SystemDef, lines: &[(&str, &str, &str)]) -> Derivation {
    let mut s = SeqDerivation::new(sys.one_formula());
    for (rule, path, f) in lines {
        let path = parse_path(path).unwrap();
        let next = s.conclusion().replace(&path, sys.parse(f).unwrap()).unwrap();
        s.push(RuleRef::named(rule), path, next);
    }
    s.check(sys).unwrap();
    s.to_derivation()
}

fn assert_split(sys: &SystemDef, phi: &Derivation, path: &[Dir]) -> SplitResult {
    let sp = Splitter::new(sys).unwrap();
    let r = sp.shallow_split(phi, path).unwrap();
    let f = phi.conclusion();
    let plus = sys.plus.unwrap();
    let Some(Formula::App(alpha, a, b)) = f.get(path) else { panic!() };
    let (last, parent) = path.split_last().unwrap_or((&Dir::L, &[]));
    let c = if path.is_empty() {
        Formula::Const(sys.zero().unwrap())
    } else {
        let sib = f.get(&[parent, &[if *last == Dir::L { Dir::R } else { Dir::L }]].concat()).unwrap().clone();
        f.replace(parent, sib).unwrap()
    };
    for d in [&r.psi, &r.phi1, &r.phi2] {
        d.check(sp.base()).unwrap();
    }
    assert_eq!(r.psi.premiss(), Formula::app(sys.sig.dual(*alpha), r.q1.clone(), r.q2.clone()));
    assert_eq!(r.psi.conclusion(), c);
    assert_eq!(r.phi1.conclusion(), Formula::app(plus, (**a).clone(), r.q1.clone()));
    assert_eq!(r.phi2.conclusion(), Formula::app(plus, (**b).clone(), r.q2.clone()));
    assert!(sys.equal(&r.phi1.premiss(), &sys.one_formula()));
    assert!(sys.equal(&r.phi2.premiss(), &sys.one_formula()));
    assert!(r.phi1.length_plus(sys) + r.phi2.length_plus(sys) <= phi.length_plus(sys));
    r
}

#[test]
fn pi0_splits_at_either_factor() {
    let m = mll();
    let d = Derivation::parse(PI0, &m.sig).unwrap();
    assert_split(&m, &d, &[Dir::L]);
    assert_split(&m, &d, &[Dir::R]);
}

#[test]
fn base_case_from_an_equality() {
    let m = mll();
    let d = seq_proof(&m, &[("=", ".", "((bot a bot) par one)")]);
    let r = assert_split(&m, &d, &[Dir::L]);
    assert_eq!(m.render(&r.q1), "one");
    assert_eq!(m.render(&r.q2), "one");
}

#[test]
fn dual_lemma_examples() {
    let m = mll();
    let sp = Splitter::new(&m).unwrap();
    let bot = m.sig.constant("bot").unwrap();
    let one = m.sig.constant("one").unwrap();
    let d = seq_proof(&m, &[("=", ".", "(bot par one)")]);
    let out = sp.derive_from_dual(&d, bot).unwrap();
    assert_eq!(m.render(&out.premiss()), "one");
    assert_eq!(m.render(&out.conclusion()), "one");
    let d = seq_proof(&m, &[("=", ".", "(one par bot)")]);
    let out = sp.derive_from_dual(&d, one).unwrap();
    assert_eq!(m.render(&out.premiss()), "bot");
    assert_eq!(m.render(&out.conclusion()), "bot");

    let k = builtin("saks.down").unwrap();
    let sp = Splitter::new(&k).unwrap();
    let d = seq_proof(
        &k,
        &[
            ("=", ".", "(f or t)"),
            ("=", "r", "(t a t)"),
            ("=", "r", "((f or t) a (t or f))"),
            ("atom.down", "r", "((f a t) or (t a f))"),
        ],
    );
    let out = sp.derive_from_dual(&d, k.sig.constant("f").unwrap()).unwrap();
    out.check(&k).unwrap();
    assert_eq!(k.render(&out.premiss()), "t");
    assert_eq!(k.render(&out.conclusion()), "((f a t) or (t a f))");
}

fn detour(m: &SystemDef) -> Derivation {
    seq_proof(
        m,
        &[
            ("=", ".", "(one ten one)"),
            ("=", "l", "(one a one)"),
            ("=", "l", "((bot par one) a (one par bot))"),
            ("atom.down", "l", "((bot a one) par (one a bot))"),
            ("=", "r", "(one a one)"),
            ("=", "r", "((one par bot) a (bot par one))"),
            ("atom.down", "r", "((one a bot) par (bot a one))"),
            ("ten.down", ".", "(((bot a one) ten (one a bot)) par ((one a bot) par (bot a one)))"),
            ("=", "r", "((bot a one) par (one a bot))"),
            ("=", ".", "(((bot a one) ten (one a bot)) par ((bot a one) par (one a bot)))"),
            ("atom.up", "l", "((bot ten one) a (one ten bot))"),
            ("=", "l", "(bot a bot)"),
            ("=", "l", "bot"),
            ("=", ".", "((bot a one) par (one a bot))"),
        ],
    )
}

#[test]
fn mll_detour_cut_is_eliminated() {
    let m = mll();
    let d = detour(&m);
    let sp = Splitter::new(&m).unwrap();
    let out = sp.eliminate_cut_once(&d).unwrap();
    out.check(&m).unwrap();
    assert_eq!(out.conclusion(), d.conclusion());
    assert_eq!(out.premiss(), d.premiss());
    assert!(out.rules_used().iter().all(|r| !r.as_str().ends_with(".up")));
}

#[test]
fn context_reduction_reassembles() {
    let m = mll();
    let d = detour(&m).sequentialize();
    let prefix = SeqDerivation { start: d.start.clone(), steps: d.steps[..10].to_vec() };
    let phi = prefix.to_derivation();
    let sp = Splitter::new(&m).unwrap();
    let hole = parse_path("l").unwrap();
    let r = sp.context_reduce(&phi, &hole).unwrap();
    assert!(m.equal(&r.h.plug(&m.one_formula()), &m.one_formula()));
    r.zeta.check(&m).unwrap();
    let a = phi.conclusion().get(&hole).unwrap().clone();
    assert_eq!(r.zeta.conclusion(), Formula::app(m.plus.unwrap(), a, r.k.clone()));
    let whole = r.fill(&r.zeta, &m).unwrap();
    assert_eq!(whole.conclusion(), phi.conclusion());
    assert!(m.equal(&whole.premiss(), &m.one_formula()));
}
