//! Bounded backward proof search over canonical forms.

use std::cell::RefCell;
use std::sync::Arc;

use rustc_hash::FxHashSet as HashSet;

use subatomic_core::{
    ConnId, ConnRef, Derivation, Dir, Formula, Instance, RuleKind, RuleRef, RuleScheme, SeqDerivation, Subset,
    SystemDef,
};

use crate::shape::{decompositions, views};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of rule steps in a proof.
    pub depth: usize,
    /// Maximum number of premiss candidates generated.
    pub budget: usize,
    /// Skip canonical forms already reached at an earlier level.
    pub memo: bool,
    /// How far premisses may grow beyond the goal, in nodes.
    pub slack: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { depth: 6, budget: 200_000, memo: true, slack: 2 }
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Derivation),
    /// No proof within the bounds; `exhaustive` when no candidates were left
    /// to explore before the depth bound.
    Absent { exhaustive: bool },
    BudgetExhausted,
}

impl SearchOutcome {
    pub fn proof(&self) -> Option<&Derivation> {
        match self {
            SearchOutcome::Found(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

#[derive(Debug)]
struct Move {
    rule: String,
    redex: Vec<Dir>,
    premiss: Formula,
    conclusion: Formula,
}

struct Node {
    form: Formula,
    parent: Option<(usize, Arc<Move>)>,
}

/// Searches for a proof of `f` from `one`, rule steps first-found by breadth.
pub fn prove(f: &Formula, sys: &SystemDef, cfg: &SearchConfig) -> SearchOutcome {
    let s = Searcher::new(sys, f, cfg);
    s.run(f)
}

struct Searcher<'a> {
    sys: &'a SystemDef,
    /// Literal premisses already canonicalized.
    tried: RefCell<HashSet<Formula>>,
    cfg: &'a SearchConfig,
    atoms: Vec<ConnId>,
    max_size: usize,
}

impl<'a> Searcher<'a> {
    fn new(sys: &'a SystemDef, f: &Formula, cfg: &'a SearchConfig) -> Self {
        let mut atoms: Vec<ConnId> = sys.sig.atoms().filter(|a| !f.paths_of(*a).is_empty()).collect();
        atoms.sort();
        let canon = sys.theory.canonical(f, Subset::Full);
        Searcher { sys, tried: RefCell::default(), cfg, atoms, max_size: canon.size().max(f.size()) + cfg.slack }
    }

    fn canon(&self, f: &Formula) -> Formula {
        self.sys.theory.canonical(f, Subset::Full)
    }

    fn run(&self, f: &Formula) -> SearchOutcome {
        let goal = self.canon(f);
        let one = self.canon(&self.sys.one_formula());
        let mut nodes = vec![Node { form: goal.clone(), parent: None }];
        if goal == one {
            return SearchOutcome::Found(self.rebuild(&nodes, 0, f));
        }
        let mut seen: HashSet<Formula> = HashSet::default();
        seen.insert(goal);
        let mut frontier = vec![0usize];
        let mut spent = 0usize;
        for _ in 0..self.cfg.depth {
            let mut next = Vec::new();
            for &i in &frontier {
                let form = nodes[i].form.clone();
                for (p, mv) in self.expand(&form) {
                    spent += 1;
                    if spent > self.cfg.budget {
                        return SearchOutcome::BudgetExhausted;
                    }
                    if self.cfg.memo && !seen.insert(p.clone()) {
                        continue;
                    }
                    nodes.push(Node { form: p.clone(), parent: Some((i, Arc::new(mv))) });
                    let id = nodes.len() - 1;
                    if p == one {
                        return SearchOutcome::Found(self.rebuild(&nodes, id, f));
                    }
                    next.push(id);
                }
            }
            if next.is_empty() {
                return SearchOutcome::Absent { exhaustive: true };
            }
            frontier = next;
        }
        SearchOutcome::Absent { exhaustive: false }
    }

    /// Forward proof from `one` along the parent chain of node `id`.
    fn rebuild(&self, nodes: &[Node], mut id: usize, goal: &Formula) -> Derivation {
        let mut s = SeqDerivation::new(self.sys.one_formula());
        while let Some((parent, mv)) = &nodes[id].parent {
            s.push_eq(self.sys, mv.premiss.clone());
            s.push(RuleRef::named(&mv.rule), mv.redex.clone(), mv.conclusion.clone());
            id = *parent;
        }
        s.push_eq(self.sys, goal.clone());
        debug_assert!(s.check(self.sys).is_ok());
        s.to_derivation()
    }

    fn admitted(&self, r: ConnRef) -> Vec<ConnId> {
        match r {
            ConnRef::Conn(c) => vec![c],
            ConnRef::Atom => self.atoms.clone(),
        }
    }

    /// Every premiss class one inverted rule step away from `c`.
    fn expand(&self, c: &Formula) -> Vec<(Formula, Move)> {
        let sig = &self.sys.sig;
        let th = &self.sys.theory;
        let mut out = Vec::new();
        let mut local: HashSet<Formula> = HashSet::default();
        if !self.cfg.memo {
            self.tried.borrow_mut().clear();
        }
        for path in c.all_paths() {
            let n = c.get(&path).unwrap();
            for rule in &self.sys.rules {
                for beta in self.admitted(rule.beta) {
                    let vs = views(th, sig, n, beta);
                    if vs.is_empty() {
                        continue;
                    }
                    for alpha in self.admitted(rule.alpha) {
                        let alpha2 = match rule.kind {
                            RuleKind::Down => sig.weak(alpha),
                            RuleKind::Up => alpha,
                        };
                        for v in &vs {
                            let xs = decompositions(th, sig, &v.x, alpha);
                            if xs.is_empty() {
                                continue;
                            }
                            let ys = decompositions(th, sig, &v.y, alpha2);
                            for (a, cc) in &xs {
                                for (b, d) in &ys {
                                    let inst = Instance {
                                        alpha,
                                        beta,
                                        a: a.clone(),
                                        b: b.clone(),
                                        c: cc.clone(),
                                        d: d.clone(),
                                    };
                                    self.candidate(c, &path, rule, v, beta, &inst, &mut local, &mut out);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn candidate(
        &self,
        c: &Formula,
        path: &[Dir],
        rule: &RuleScheme,
        v: &crate::shape::View,
        beta: ConnId,
        inst: &Instance,
        local: &mut HashSet<Formula>,
        out: &mut Vec<(Formula, Move)>,
    ) {
        let sig = &self.sys.sig;
        let prem = rule.premiss_of(sig, inst);
        let (lp, at) = v.wrap(sig, beta, prem);
        let premiss = c.replace(path, lp).unwrap();
        if !self.tried.borrow_mut().insert(premiss.clone()) {
            return;
        }
        let key = self.canon(&premiss);
        if key.size() > self.max_size || !local.insert(key.clone()) {
            return;
        }
        let (lc, _) = v.wrap(sig, beta, rule.conclusion_of(sig, inst));
        let conclusion = c.replace(path, lc).unwrap();
        debug_assert!(self.sys.equal(&conclusion, c));
        let mut redex = path.to_vec();
        redex.extend(at);
        out.push((key, Move { rule: rule.name.clone(), redex, premiss, conclusion }));
    }
}
