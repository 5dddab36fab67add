//! Exhaustive enumeration of small formulae.

use std::collections::HashSet;

use subatomic_core::{ConnId, Formula, Subset, SystemDef};

/// The connectives used for enumeration: all non-atoms and the first `atoms` atoms.
pub fn alphabet(sys: &SystemDef, atoms: usize) -> Vec<ConnId> {
    let sig = &sys.sig;
    let mut out: Vec<ConnId> = sig.conns().filter(|c| !sig.conn(*c).is_atom).collect();
    out.extend(sig.atoms().take(atoms));
    out
}

/// All formulae of at most `max_nodes` nodes over the constants of `sys` and
/// [`alphabet`], one per canonical class, smallest first.
pub fn enumerate_formulae(sys: &SystemDef, max_nodes: usize, atoms: usize) -> Vec<Formula> {
    let conns = alphabet(sys, atoms);
    // by_size[n] holds every tree of exactly n nodes
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_nodes + 1];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        let mut trees = Vec::new();
        if n == 1 {
            trees.extend(sys.sig.consts().map(Formula::Const));
        } else {
            for &c in &conns {
                for l in (1..n - 1).step_by(2) {
                    let r = n - 1 - l;
                    for a in &by_size[l] {
                        for b in &by_size[r] {
                            trees.push(Formula::app(c, a.clone(), b.clone()));
                        }
                    }
                }
            }
        }
        for t in &trees {
            if seen.insert(sys.theory.canonical(t, Subset::Full)) {
                out.push(t.clone());
            }
        }
        by_size[n] = trees;
    }
    out
}
