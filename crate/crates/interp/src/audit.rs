//! Sampled check of the preservability conditions of an interpretation map.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subatomic_core::{ConnId, ConstId, Formula, Subset};

use crate::formula::OrdinaryFormula;
use crate::map::InterpretationMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// 0 for `I(R(g)) = g`, otherwise the preservability condition.
    pub condition: u8,
    pub formula: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub samples: usize,
    pub interpretable: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl AuditReport {
    pub fn passes(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn failed(&self) -> Vec<u8> {
        let mut v: Vec<u8> = self.counterexamples.iter().map(|c| c.condition).collect();
        v.sort();
        v.dedup();
        v
    }
}

const MAX_REPORTED: usize = 20;

/// A random ordinary formula with at most `max_nodes` nodes over the first `atoms` atoms.
pub fn random_ordinary(m: &InterpretationMap, rng: &mut impl Rng, max_nodes: usize, atoms: usize) -> OrdinaryFormula {
    let sig = m.sig();
    let consts: Vec<ConstId> = sig.consts().collect();
    let conns: Vec<ConnId> = sig.conns().filter(|c| !sig.conn(*c).is_atom).collect();
    let atoms: Vec<ConnId> = sig.atoms().take(atoms).collect();
    gen(rng, max_nodes.max(1), &consts, &conns, &atoms)
}

fn gen(rng: &mut impl Rng, nodes: usize, consts: &[ConstId], conns: &[ConnId], atoms: &[ConnId]) -> OrdinaryFormula {
    if nodes < 3 || rng.gen_bool(0.2) {
        return match atoms.choose(rng) {
            Some(a) if rng.gen_bool(0.6) => OrdinaryFormula::Atom(*a, rng.gen()),
            _ => OrdinaryFormula::Const(*consts.choose(rng).unwrap()),
        };
    }
    let left = rng.gen_range(1..nodes - 1);
    let l = gen(rng, left, consts, conns, atoms);
    let r = gen(rng, nodes - 1 - left, consts, conns, atoms);
    OrdinaryFormula::app(*conns.choose(rng).unwrap(), l, r)
}

/// Samples formulae and checks `I(R(g)) = g` and conditions 1 to 4; condition 5 is read off the signature.
pub fn audit_preservable(m: &InterpretationMap, samples: usize, seed: u64) -> AuditReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Auditor { m, report: AuditReport { samples, interpretable: 0, counterexamples: Vec::new() } };
    let sig = m.sig();
    for c in sig.atoms() {
        let info = sig.conn(c);
        if info.comm || info.assoc || info.unit.is_some() {
            a.report.counterexamples.push(Counterexample {
                condition: 5,
                formula: info.name.clone(),
                detail: "atom is commutative, associative or unitary".into(),
            });
        }
    }
    for _ in 0..samples {
        let g = random_ordinary(m, &mut rng, 9, 2);
        let back = m.interpret(&m.represent(&g));
        if back.as_ref() != Ok(&g) {
            let detail = match back {
                Ok(h) => format!("interprets back as `{}`", m.render(&h)),
                Err(e) => e.to_string(),
            };
            a.fail(0, m.render(&g), detail);
        }
        let f = if rng.gen_bool(0.5) { disguise(m, &m.represent(&g), &mut rng) } else { random_subatomic(m, &mut rng, 7) };
        a.sample(&f, &mut rng);
    }
    a.report
}

struct Auditor<'a> {
    m: &'a InterpretationMap,
    report: AuditReport,
}

impl Auditor<'_> {
    fn fail(&mut self, condition: u8, formula: String, detail: String) {
        if self.report.counterexamples.len() < MAX_REPORTED {
            self.report.counterexamples.push(Counterexample { condition, formula, detail });
        }
    }

    fn sample(&mut self, f: &Formula, rng: &mut ChaCha8Rng) {
        let m = self.m;
        if !m.is_interpretable(f) {
            return;
        }
        self.report.interpretable += 1;
        let render = |g: &Formula| m.system.render(g);
        for _ in 0..3 {
            let g = plus_variant(m, f, rng);
            if !m.is_interpretable(&g) {
                self.fail(1, render(f), format!("=₊-equal `{}` is not interpretable", render(&g)));
            }
        }
        for p in f.all_paths() {
            let sub = f.get(&p).unwrap();
            if !m.is_interpretable(sub) {
                self.fail(2, render(f), format!("subformula `{}` is not interpretable", render(sub)));
            }
            if let Formula::App(c, l, r) = sub {
                if m.sig().conn(*c).is_atom && m.is_interpretable(sub) {
                    self.complements(*c, l, r);
                }
            }
        }
        let neg = m.sig().negate(f);
        if !m.is_interpretable(&neg) {
            self.fail(4, render(f), format!("negation `{}` is not interpretable", render(&neg)));
        }
    }

    /// Condition 3 over a small pool of candidate complements.
    fn complements(&mut self, atom: ConnId, l: &Formula, r: &Formula) {
        let m = self.m;
        let Some(plus) = m.system.plus else { return };
        let one = m.system.one_formula();
        let pool = small_formulae(m);
        let comp = |x: &Formula| -> Vec<Formula> {
            pool.iter().filter(|y| m.system.equal(&Formula::app(plus, x.clone(), (*y).clone()), &one)).cloned().collect()
        };
        let (ls, rs) = (comp(l), comp(r));
        for x in &ls {
            for y in &rs {
                let g = Formula::app(atom, x.clone(), y.clone());
                if !m.is_interpretable(&g) {
                    let whole = Formula::app(atom, l.clone(), r.clone());
                    self.fail(3, m.system.render(&whole), format!("`{}` is not interpretable", m.system.render(&g)));
                    return;
                }
            }
        }
    }
}

/// Constants and one-connective formulae over constants.
fn small_formulae(m: &InterpretationMap) -> Vec<Formula> {
    let sig = m.sig();
    let consts: Vec<Formula> = sig.consts().map(Formula::Const).collect();
    let mut out = consts.clone();
    for c in sig.conns().filter(|c| !sig.conn(*c).is_atom) {
        for x in &consts {
            for y in &consts {
                out.push(Formula::app(c, x.clone(), y.clone()));
            }
        }
    }
    out
}

fn random_subatomic(m: &InterpretationMap, rng: &mut ChaCha8Rng, nodes: usize) -> Formula {
    let sig = m.sig();
    if nodes < 3 || rng.gen_bool(0.25) {
        return Formula::Const(sig.consts().nth(rng.gen_range(0..sig.num_consts())).unwrap());
    }
    let conns: Vec<ConnId> = sig.conns().collect();
    let left = rng.gen_range(1..nodes - 1);
    let l = random_subatomic(m, rng, left);
    let r = random_subatomic(m, rng, nodes - 1 - left);
    Formula::app(*conns.choose(rng).unwrap(), l, r)
}

/// Replaces some constants by equal compound formulae.
fn disguise(m: &InterpretationMap, f: &Formula, rng: &mut ChaCha8Rng) -> Formula {
    let pool: Vec<Formula> = small_formulae(m).into_iter().filter(|g| g.size() > 1).collect();
    let mut g = f.clone();
    for p in f.all_paths() {
        let Some(Formula::Const(_)) = f.get(&p) else { continue };
        if rng.gen_bool(0.5) {
            let here = f.get(&p).unwrap();
            let eq: Vec<&Formula> = pool.iter().filter(|h| m.system.equal(h, here)).collect();
            if let Some(h) = eq.choose(rng) {
                g = g.replace(&p, (*h).clone()).unwrap();
            }
        }
    }
    g
}

/// A random `=₊`-equal variant: commuted `+` nodes and an added `+`-unit.
fn plus_variant(m: &InterpretationMap, f: &Formula, rng: &mut ChaCha8Rng) -> Formula {
    let Some(plus) = m.system.plus else { return f.clone() };
    let mut g = m.system.theory.canonical(f, Subset::PlusOnly);
    for p in g.all_paths() {
        if let Some(Formula::App(c, l, r)) = g.get(&p) {
            if *c == plus && rng.gen_bool(0.5) {
                let swapped = Formula::app(plus, (**r).clone(), (**l).clone());
                g = g.replace(&p, swapped).unwrap();
            }
        }
    }
    let paths = g.all_paths();
    let p = paths.choose(rng).unwrap();
    let zero = Formula::Const(m.sig().conn(plus).unit.expect("+ has a unit"));
    let sub = g.get(p).unwrap().clone();
    g.replace(p, Formula::app(plus, sub, zero)).unwrap()
}
