#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use subatomic_core::*;

/// Axioms written out by hand, independently of the library's closure.
pub struct Axioms {
    pub assoc: Vec<ConnId>,
    pub comm: Vec<ConnId>,
    pub units: Vec<(ConnId, ConstId)>,
    pub assign: Vec<(ConnId, ConstId, ConstId, ConstId)>,
}

impl Axioms {
    pub fn new(sys: &SystemDef, assoc: &[&str], comm: &[&str], units: &[(&str, &str)], assign: &[(&str, &str, &str, &str)]) -> Axioms {
        let s = &sys.sig;
        let c = |n: &str| s.connective(n).unwrap();
        let k = |n: &str| s.constant(n).unwrap();
        Axioms {
            assoc: assoc.iter().map(|n| c(n)).collect(),
            comm: comm.iter().map(|n| c(n)).collect(),
            units: units.iter().map(|(g, u)| (c(g), k(u))).collect(),
            assign: assign.iter().map(|(g, v, w, u)| (c(g), k(v), k(w), k(u))).collect(),
        }
    }

    pub fn mll(sys: &SystemDef) -> Axioms {
        Axioms::new(
            sys,
            &["ten", "par"],
            &["ten", "par"],
            &[("ten", "one"), ("par", "bot")],
            &[("a", "bot", "bot", "bot"), ("a", "one", "one", "one")],
        )
    }

    pub fn classical(sys: &SystemDef) -> Axioms {
        Axioms::new(
            sys,
            &["and", "or"],
            &["and", "or"],
            &[("and", "t"), ("or", "f")],
            &[("and", "f", "f", "f"), ("or", "t", "t", "t"), ("a", "f", "f", "f"), ("a", "t", "t", "t")],
        )
    }

    /// Every formula reachable from `f` by one axiom instance, either direction,
    /// at any position, whose size stays within `max_size`.
    pub fn neighbours(&self, f: &Formula, max_size: usize) -> Vec<Formula> {
        let mut out = Vec::new();
        for p in f.all_paths() {
            let x = f.get(&p).unwrap();
            for y in self.root_rewrites(x) {
                let g = f.replace(&p, y).unwrap();
                if g.size() <= max_size {
                    out.push(g);
                }
            }
        }
        out
    }

    fn root_rewrites(&self, x: &Formula) -> Vec<Formula> {
        let mut out = Vec::new();
        for &(g, u) in &self.units {
            out.push(Formula::app(g, x.clone(), Formula::Const(u)));
            out.push(Formula::app(g, Formula::Const(u), x.clone()));
        }
        if let Some(c) = x.as_const() {
            for &(g, v, w, u) in &self.assign {
                if u == c {
                    out.push(Formula::app(g, Formula::Const(v), Formula::Const(w)));
                }
            }
        }
        if let Formula::App(g, a, b) = x {
            if self.comm.contains(g) {
                out.push(Formula::app(*g, (**b).clone(), (**a).clone()));
            }
            if self.assoc.contains(g) {
                if let Formula::App(h, a1, a2) = &**a {
                    if h == g {
                        out.push(Formula::app(*g, (**a1).clone(), Formula::app(*g, (**a2).clone(), (**b).clone())));
                    }
                }
                if let Formula::App(h, b1, b2) = &**b {
                    if h == g {
                        out.push(Formula::app(*g, Formula::app(*g, (**a).clone(), (**b1).clone()), (**b2).clone()));
                    }
                }
            }
            for &(h, u) in &self.units {
                if h == *g && b.as_const() == Some(u) {
                    out.push((**a).clone());
                }
                if h == *g && a.as_const() == Some(u) {
                    out.push((**b).clone());
                }
            }
            for &(h, v, w, u) in &self.assign {
                if h == *g && a.as_const() == Some(v) && b.as_const() == Some(w) {
                    out.push(Formula::Const(u));
                }
            }
        }
        out
    }
}

/// All formulae with at most `max_size` nodes over the given symbols.
pub fn all_formulae(consts: &[ConstId], conns: &[ConnId], max_size: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = consts.iter().map(|&c| Formula::Const(c)).collect();
    }
    for n in (3..=max_size).step_by(2) {
        let mut v = Vec::new();
        for ls in (1..n - 1).step_by(2) {
            let rs = n - 1 - ls;
            for &g in conns {
                for l in &by_size[ls] {
                    for r in &by_size[rs] {
                        v.push(Formula::app(g, l.clone(), r.clone()));
                    }
                }
            }
        }
        by_size[n] = v;
    }
    by_size.into_iter().flatten().collect()
}

pub fn formula_strategy(sig: Arc<Signature>, conns: Vec<ConnId>, depth: u32) -> BoxedStrategy<Formula> {
    let consts: Vec<ConstId> = sig.consts().collect();
    let leaf = proptest::sample::select(consts).prop_map(Formula::Const);
    leaf.prop_recursive(depth, 64, 2, move |inner| {
        (proptest::sample::select(conns.clone()), inner.clone(), inner).prop_map(|(g, l, r)| Formula::app(g, l, r))
    })
    .boxed()
}

pub fn conns_of(sys: &SystemDef, names: &[&str]) -> Vec<ConnId> {
    names.iter().map(|n| sys.sig.connective(n).unwrap()).collect()
}

/// A random walk of `choices.len()` single-axiom rewrites.
pub fn random_walk(ax: &Axioms, f: &Formula, choices: &[usize], max_size: usize) -> Formula {
    let mut cur = f.clone();
    for &c in choices {
        let ns = ax.neighbours(&cur, max_size.max(f.size()));
        if !ns.is_empty() {
            cur = ns[c % ns.len()].clone();
        }
    }
    cur
}

/// A random forward derivation: each choice picks either a rule application
/// anywhere in the current formula or a single-axiom equality step.
pub fn random_seq(sys: &SystemDef, ax: &Axioms, start: Formula, choices: &[usize], max_size: usize) -> SeqDerivation {
    let mut s = SeqDerivation::new(start);
    for &c in choices {
        let cur = s.conclusion().clone();
        let mut rules = Vec::new();
        for p in cur.all_paths() {
            for r in &sys.rules {
                if r.match_premiss(&sys.sig, cur.get(&p).unwrap()).is_some() {
                    rules.push((RuleRef::named(&r.name), p.clone()));
                }
            }
        }
        if !rules.is_empty() && c % 3 == 0 {
            let (r, p) = &rules[(c / 3) % rules.len()];
            let (next, _) = apply_at(r, p, &cur, sys).unwrap();
            s.push(r.clone(), p.clone(), next);
        } else {
            let ns = ax.neighbours(&cur, max_size);
            if !ns.is_empty() {
                s.push_eq(sys, ns[c % ns.len()].clone());
            }
        }
    }
    s
}
