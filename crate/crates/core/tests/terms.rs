mod common;

use std::collections::HashMap;

use common::*;
use proptest::prelude::*;
use subatomic_core::*;

fn mll() -> SystemDef {
    builtin("samlls.down").unwrap()
}

fn kl() -> SystemDef {
    builtin("saks.down").unwrap()
}

#[test]
fn negation_examples() {
    let s = kl();
    let f = s.parse("(f a t)").unwrap();
    assert_eq!(s.render(&s.sig.negate(&f)), "(t a f)");
    assert_eq!(s.render(&s.sig.negate(&s.parse("t").unwrap())), "f");
    let m = mll();
    let g = m.parse("((bot ten one) par bot)").unwrap();
    assert_eq!(m.sig.negate(&m.sig.negate(&g)), g);
    assert_eq!(m.render(&m.sig.negate(&g)), "((one par bot) ten one)");
}

#[test]
fn canonical_examples() {
    let s = kl();
    let c = |t: &str, sub| s.render(&s.theory.canonical(&s.parse(t).unwrap(), sub));
    assert_eq!(c("((f a t) and t)", Subset::Full), "(f a t)");
    assert_eq!(c("(f a f)", Subset::Full), "f");
    let m = mll();
    let f = m.parse("(one ten one)").unwrap();
    assert_eq!(m.theory.canonical(&f, Subset::PlusOnly), f);
}

#[test]
fn equality_examples() {
    let m = mll();
    let e = |a: &str, b: &str| m.equal(&m.parse(a).unwrap(), &m.parse(b).unwrap());
    assert!(e("((bot par one) ten one)", "one"));
    assert!(!e("(bot a one)", "(one a bot)"));
    assert!(e("(bot par bot)", "bot"));
}

#[test]
fn plug_examples() {
    let s = kl();
    let t = s.parse("t").unwrap();
    assert_eq!(Context::hole().plug(&t), t);
    let k = s.sig.parse_context("(hole or t)").unwrap();
    assert_eq!(s.render(&k.plug(&s.parse("(f a t)").unwrap())), "((f a t) or t)");
    let k = s.sig.parse_context("((t and hole) or f)").unwrap();
    assert_eq!(s.render(&k.plug(&s.parse("f").unwrap())), "((t and f) or f)");
    assert_eq!(k.render(&s.sig), "((t and hole) or f)");
}

#[test]
fn plus_factor_examples() {
    let m = mll();
    let fs = |t: &str| {
        let mut v: Vec<String> = m.theory.plus_factors(&m.parse(t).unwrap()).unwrap().iter().map(|f| m.render(f)).collect();
        v.sort();
        v
    };
    assert_eq!(fs("((bot a one) par (one a bot))"), ["(bot a one)", "(one a bot)"]);
    assert_eq!(fs("(bot par ((one ten one) par bot))"), ["(one ten one)"]);
    assert_eq!(fs("(one ten one)"), ["(one ten one)"]);
    assert!(fs("(bot par bot)").is_empty());
}

#[test]
fn parse_errors_carry_positions() {
    let m = mll();
    match m.parse("(one ten\n  zap)") {
        Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(m.parse("(one ten one"), Err(Error::Parse { .. })));
    assert!(matches!(m.parse("one one"), Err(Error::Parse { .. })));
}

#[test]
fn inconsistent_algebra_is_rejected() {
    let doc = "system bad\nconstants f t\none t\nnegation f <-> t\n\
               connective and dual=or polarity=strong assoc comm unit=t\n\
               connective or dual=and polarity=weak assoc comm unit=f\n\
               assign and f t = t\n";
    assert!(matches!(load_system(doc), Err(Error::Theory(_))));
}

/// Equivalence classes of all formulae up to `max` nodes, computed by closing
/// the hand-written axioms under context and symmetry.
fn brute_force_classes(sys: &SystemDef, ax: &Axioms, conns: &[ConnId], max: usize, bound: usize) {
    let consts: Vec<ConstId> = sys.sig.consts().collect();
    let universe = all_formulae(&consts, conns, bound);
    let index: HashMap<Formula, usize> = universe.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let mut parent: Vec<usize> = (0..universe.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, f) in universe.iter().enumerate() {
        for g in ax.neighbours(f, bound) {
            if let Some(&j) = index.get(&g) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let small: Vec<usize> = (0..universe.len()).filter(|&i| universe[i].size() <= max).collect();
    let mut by_canon: HashMap<Formula, usize> = HashMap::new();
    let mut by_class: HashMap<usize, Formula> = HashMap::new();
    for &i in &small {
        let c = sys.theory.canonical(&universe[i], Subset::Full);
        let cls = find(&mut parent, i);
        if let Some(&j) = by_canon.get(&c) {
            assert_eq!(find(&mut parent, j), cls, "{} and {} share a canonical form but are not provably equal",
                sys.render(&universe[i]), sys.render(&universe[j]));
        } else {
            by_canon.insert(c.clone(), i);
        }
        if let Some(c0) = by_class.get(&cls) {
            assert_eq!(c0, &c, "{} is provably equal to a formula with another canonical form", sys.render(&universe[i]));
        } else {
            by_class.insert(cls, c);
        }
    }
}

#[test]
fn equality_agrees_with_brute_force_closure_mll() {
    let m = mll();
    let ax = Axioms::mll(&m);
    brute_force_classes(&m, &ax, &conns_of(&m, &["ten", "par", "a"]), 7, 9);
}

#[test]
fn equality_agrees_with_brute_force_closure_classical() {
    let s = kl();
    let ax = Axioms::classical(&s);
    brute_force_classes(&s, &ax, &conns_of(&s, &["and", "or", "a"]), 7, 9);
}

fn mll_formula() -> BoxedStrategy<Formula> {
    let m = mll();
    formula_strategy(m.sig.clone(), conns_of(&m, &["ten", "par", "a", "b"]), 4)
}

fn kl_formula() -> BoxedStrategy<Formula> {
    let s = kl();
    formula_strategy(s.sig.clone(), conns_of(&s, &["and", "or", "a", "b"]), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn negation_is_an_involution(f in mll_formula()) {
        let m = mll();
        prop_assert_eq!(m.sig.negate(&m.sig.negate(&f)), f);
    }

    #[test]
    fn equality_is_an_equivalence(f in kl_formula(), w1 in prop::collection::vec(any::<usize>(), 0..6), w2 in prop::collection::vec(any::<usize>(), 0..6)) {
        let s = kl();
        let ax = Axioms::classical(&s);
        let g = random_walk(&ax, &f, &w1, f.size() + 4);
        let h = random_walk(&ax, &g, &w2, f.size() + 4);
        prop_assert!(s.equal(&f, &f));
        prop_assert!(s.equal(&f, &g) && s.equal(&g, &f));
        prop_assert!(s.equal(&g, &h));
        prop_assert!(s.equal(&f, &h));
    }

    #[test]
    fn equality_is_a_congruence(k in mll_formula(), f in mll_formula(), pick in any::<usize>(), w in prop::collection::vec(any::<usize>(), 1..6)) {
        let m = mll();
        let ax = Axioms::mll(&m);
        let paths = k.all_paths();
        let ctx = Context::around(&k, &paths[pick % paths.len()]).unwrap();
        let g = random_walk(&ax, &f, &w, f.size() + 4);
        prop_assert!(m.equal(&ctx.plug(&f), &ctx.plug(&g)));
    }

    #[test]
    fn equality_is_closed_under_negation(f in mll_formula(), w in prop::collection::vec(any::<usize>(), 1..6)) {
        let m = mll();
        let ax = Axioms::mll(&m);
        let g = random_walk(&ax, &f, &w, f.size() + 4);
        prop_assert!(m.equal(&m.sig.negate(&f), &m.sig.negate(&g)));
    }

    #[test]
    fn canonical_is_idempotent(f in kl_formula()) {
        let s = kl();
        for sub in [Subset::Full, Subset::PlusOnly, Subset::Empty] {
            let c = s.theory.canonical(&f, sub);
            prop_assert_eq!(s.theory.canonical(&c, sub), c.clone());
            prop_assert!(s.theory.equal(&f, &c, sub));
        }
    }

    #[test]
    fn canonical_ignores_factor_order(fs in prop::collection::vec(mll_formula(), 1..5), rot in any::<usize>()) {
        let m = mll();
        let par = m.sig.connective("par").unwrap();
        let build = |v: &[Formula]| v.iter().cloned().reduce(|a, b| Formula::app(par, a, b)).unwrap();
        let mut g = fs.clone();
        let k = rot % g.len();
        g.rotate_left(k);
        g.reverse();
        for sub in [Subset::Full, Subset::PlusOnly] {
            prop_assert_eq!(m.theory.canonical(&build(&fs), sub), m.theory.canonical(&build(&g), sub));
        }
    }

    #[test]
    fn traces_are_single_axiom_chains(f in kl_formula()) {
        let s = kl();
        let (c, steps) = s.theory.trace(&f, Subset::Full);
        let mut cur = f.clone();
        for st in &steps {
            let x = cur.get(&st.path).unwrap();
            let y = st.result.get(&st.path).unwrap();
            prop_assert_eq!(cur.replace(&st.path, y.clone()).unwrap(), st.result.clone());
            prop_assert!(s.theory.single_axiom(x, y).is_some());
            cur = st.result.clone();
        }
        prop_assert_eq!(cur, c);
    }

    #[test]
    fn rendering_round_trips(f in kl_formula()) {
        let s = kl();
        prop_assert_eq!(s.parse(&s.render(&f)).unwrap(), f);
    }
}
