//! Seeded random proofs built forward from `one`, with cuts injected through
//! an identity-cut detour.

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subatomic_core::{
    resolve, ConnId, ConnRef, Context, Derivation, Dir, Formula, RuleKind, RuleRef, RuleScheme, SeqDerivation,
    SystemDef,
};

use crate::enumerate::alphabet;
use crate::shape::const_splits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutKind {
    Any,
    Atom,
    NonAtom,
}

impl CutKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CutKind::Any => "any",
            CutKind::Atom => "atom",
            CutKind::NonAtom => "non-atom",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub system: String,
    pub seed: u64,
    /// Expansions stop once the formula reaches this many nodes.
    pub max_nodes: usize,
    /// Number of atoms drawn from the signature.
    pub atoms: usize,
    /// Target number of down-rule steps before cut injection.
    pub steps: usize,
    pub cuts: usize,
    pub cut_kind: CutKind,
    /// Node bound for each side of a cut formula. With 0 the cut formula is
    /// built from constants and spliced into the interior of the proof;
    /// otherwise it is random and the proof continues below the cut.
    pub cut_size: usize,
    /// Keep every rule step outside the scope of atoms.
    pub tame: bool,
}

impl CorpusSpec {
    pub fn new(system: &str, seed: u64) -> CorpusSpec {
        CorpusSpec {
            system: system.to_string(),
            seed,
            max_nodes: 15,
            atoms: 2,
            steps: 6,
            cuts: 0,
            cut_kind: CutKind::Any,
            cut_size: 0,
            tame: false,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "system": self.system,
            "seed": self.seed,
            "max_nodes": self.max_nodes,
            "atoms": self.atoms,
            "steps": self.steps,
            "cuts": self.cuts,
            "cut_kind": self.cut_kind.as_str(),
            "cut_size": self.cut_size,
            "tame": self.tame,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error(transparent)]
    Core(#[from] subatomic_core::Error),
    #[error("no cut of kind `{0}` can be injected in this system")]
    NoCut(&'static str),
    #[error("gave up after {0} attempts")]
    GaveUp(usize),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

const ATTEMPTS: usize = 50;

pub fn random_derivation(spec: &CorpusSpec) -> Result<Derivation, GenError> {
    let sys = resolve(&spec.system)?;
    random_derivation_in(&sys, spec)
}

/// A checking proof in `sys` built by random forward rule application.
/// Its equality steps are single axiom instances.
pub fn random_derivation_in(sys: &SystemDef, spec: &CorpusSpec) -> Result<Derivation, GenError> {
    let mut g = Gen::new(sys, spec);
    let cuts = if spec.cuts > 0 { g.cut_choices() } else { Vec::new() };
    if spec.cuts > 0 && cuts.is_empty() {
        return Err(GenError::NoCut(spec.cut_kind.as_str()));
    }
    for _ in 0..ATTEMPTS {
        let mut s = SeqDerivation::new(sys.one_formula());
        g.grow(&mut s, spec.steps);
        let mut ok = true;
        for _ in 0..spec.cuts {
            let choice = cuts.choose(&mut g.rng).unwrap().clone();
            let next = if spec.cut_size == 0 {
                g.inject(&s, &choice)
            } else {
                g.inject_open(&s, &choice)
            };
            match next {
                Some(t) => s = t,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && s.check(sys).is_ok() {
            return Ok(s.atomize(sys).to_derivation());
        }
    }
    Err(GenError::GaveUp(ATTEMPTS))
}

/// Writes one derivation document per spec plus `manifest.json`.
pub fn write_corpus(dir: &Path, specs: &[CorpusSpec]) -> Result<Vec<PathBuf>, GenError> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let sys = resolve(&spec.system)?;
        let d = random_derivation_in(&sys, spec)?;
        let name = format!("{i:04}.sad");
        let path = dir.join(&name);
        std::fs::write(&path, d.render(&sys.sig) + "\n")?;
        let mut e = spec.to_json();
        e["file"] = serde_json::Value::String(name);
        e["size"] = serde_json::json!(d.size());
        entries.push(e);
        files.push(path);
    }
    let manifest = serde_json::json!({ "derivations": entries });
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest).unwrap() + "\n")?;
    Ok(files)
}

#[derive(Debug, Clone)]
struct CutChoice {
    rule: String,
    beta: ConnId,
    a: Formula,
    b: Formula,
}

struct Gen<'a> {
    sys: &'a SystemDef,
    spec: &'a CorpusSpec,
    rng: ChaCha8Rng,
    conns: Vec<ConnId>,
    base: Vec<&'a RuleScheme>,
    plus: ConnId,
    zero: Formula,
}

impl<'a> Gen<'a> {
    fn new(sys: &'a SystemDef, spec: &'a CorpusSpec) -> Gen<'a> {
        let plus = sys.plus.expect("system has a + connective");
        let base = sys
            .rules
            .iter()
            .filter(|r| r.kind == RuleKind::Down && r.beta == ConnRef::Conn(plus))
            .collect();
        Gen {
            sys,
            spec,
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            conns: alphabet(sys, spec.atoms),
            base,
            plus,
            zero: Formula::Const(sys.zero().expect("+ has a unit")),
        }
    }

    fn under_atom(&self, f: &Formula, p: &[Dir]) -> bool {
        (0..p.len()).any(|i| f.get(&p[..i]).and_then(|g| g.conn()).is_some_and(|c| self.sys.sig.conn(c).is_atom))
    }

    fn redexes(&self, f: &Formula) -> Vec<(Vec<Dir>, &'a RuleScheme)> {
        let mut out = Vec::new();
        for p in f.all_paths() {
            if self.spec.tame && self.under_atom(f, &p) {
                continue;
            }
            let x = f.get(&p).unwrap();
            for r in &self.base {
                if r.match_premiss(&self.sys.sig, x).is_some() {
                    out.push((p.clone(), *r));
                }
            }
        }
        out
    }

    /// Replaces a trailing `=` step so consecutive equalities stay merged.
    fn eq_to(&self, s: &mut SeqDerivation, target: Formula) {
        if s.steps.last().is_some_and(|st| st.rule.is_eq()) {
            s.steps.pop();
        }
        s.push_eq(self.sys, target);
    }

    /// A random `=`-rewrite of the subformula `x` into a larger one.
    fn expansion(&mut self, x: &Formula) -> Option<Formula> {
        let sig = &self.sys.sig;
        let th = &self.sys.theory;
        let mut opts: Vec<Formula> = Vec::new();
        if let Some(c) = x.as_const() {
            for &g in &self.conns {
                for (v, w) in const_splits(th, sig, g, c) {
                    opts.push(Formula::app(g, Formula::Const(v), Formula::Const(w)));
                }
            }
        }
        opts.push(Formula::app(self.plus, x.clone(), self.zero.clone()));
        opts.push(Formula::app(self.plus, self.zero.clone(), x.clone()));
        let g = *self.conns.choose(&mut self.rng)?;
        if let Some(u) = sig.conn(g).unit {
            opts.push(Formula::app(g, x.clone(), Formula::Const(u)));
        }
        opts.choose(&mut self.rng).cloned()
    }

    /// Wraps a child of a non-`+` node into a `+`-composition to create redexes.
    fn prepare(&mut self, f: &Formula) -> Option<Formula> {
        let sig = &self.sys.sig;
        let th = &self.sys.theory;
        let spots: Vec<Vec<Dir>> = f
            .all_paths()
            .into_iter()
            .filter(|p| f.get(p).and_then(|g| g.conn()).is_some_and(|c| c != self.plus))
            .flat_map(|p| [Dir::L, Dir::R].map(|d| subatomic_core::term::join(&p, &[d])))
            .filter(|p| f.get(p).and_then(|g| g.conn()) != Some(self.plus))
            .collect();
        let p = spots.choose(&mut self.rng)?.clone();
        let x = f.get(&p).unwrap().clone();
        let mut opts = vec![
            Formula::app(self.plus, x.clone(), self.zero.clone()),
            Formula::app(self.plus, self.zero.clone(), x.clone()),
        ];
        if let Some(c) = x.as_const() {
            for (v, w) in const_splits(th, sig, self.plus, c) {
                opts.push(Formula::app(self.plus, Formula::Const(v), Formula::Const(w)));
            }
        }
        let y = opts.choose(&mut self.rng)?.clone();
        f.replace(&p, y)
    }

    /// Extends `s` by about `steps` random rule steps and equalities.
    fn grow(&mut self, s: &mut SeqDerivation, steps: usize) {
        let mut applied = 0;
        let mut rounds = 0;
        while applied < steps && rounds < 40 * (steps + 1) {
            rounds += 1;
            let f = s.conclusion().clone();
            let red = self.redexes(&f);
            let full = f.size() + 2 > self.spec.max_nodes;
            if !red.is_empty() && (full || self.rng.gen_bool(0.5)) {
                let (p, r) = red.choose(&mut self.rng).unwrap().clone();
                let inst = r.match_premiss(&self.sys.sig, f.get(&p).unwrap()).unwrap();
                let y = r.conclusion_of(&self.sys.sig, &inst);
                s.push(RuleRef::named(&r.name), p.clone(), f.replace(&p, y).unwrap());
                applied += 1;
                continue;
            }
            if full {
                break;
            }
            let next = if self.rng.gen_bool(0.4) {
                self.prepare(&f)
            } else {
                let paths = f.all_paths();
                let p = paths.choose(&mut self.rng).unwrap().clone();
                let x = f.get(&p).unwrap().clone();
                self.expansion(&x).and_then(|y| f.replace(&p, y))
            };
            if let Some(g) = next {
                self.eq_to(s, g);
            }
        }
    }

    fn random_formula(&mut self, nodes: usize) -> Formula {
        let consts: Vec<_> = self.sys.sig.consts().collect();
        if nodes < 3 || self.rng.gen_bool(0.3) {
            return Formula::Const(*consts.choose(&mut self.rng).unwrap());
        }
        let g = *self.conns.choose(&mut self.rng).unwrap();
        if self.spec.tame && self.sys.sig.conn(g).is_atom {
            // atoms of tame proofs only take constants
            let a = *consts.choose(&mut self.rng).unwrap();
            let b = *consts.choose(&mut self.rng).unwrap();
            return Formula::app(g, Formula::Const(a), Formula::Const(b));
        }
        let l = self.rng.gen_range(1..nodes - 1);
        let a = self.random_formula(l);
        let b = self.random_formula(nodes - 1 - l);
        Formula::app(g, a, b)
    }

    fn cut_choices(&self) -> Vec<CutChoice> {
        let sig = &self.sys.sig;
        let one = self.sys.one_formula();
        let mut out = Vec::new();
        for r in &self.sys.rules {
            if !self.sys.is_cut(r) {
                continue;
            }
            let betas: Vec<ConnId> = match r.beta {
                ConnRef::Conn(c) => vec![c],
                ConnRef::Atom => self.conns.iter().copied().filter(|c| sig.conn(*c).is_atom).collect(),
            };
            for beta in betas {
                let is_atom = sig.conn(beta).is_atom;
                if self.spec.cut_kind == CutKind::Atom && !is_atom || self.spec.cut_kind == CutKind::NonAtom && is_atom {
                    continue;
                }
                if self.sys.down_rule(sig.strong(beta)).is_none() {
                    continue;
                }
                for a in sig.consts() {
                    for b in sig.consts() {
                        let (a, b) = (Formula::Const(a), Formula::Const(b));
                        let c = CutChoice { rule: r.name.clone(), beta, a, b };
                        let Some(d) = self.detour(&c) else { continue };
                        if self.spec.cut_size > 0 || self.sys.equal(d.conclusion(), &one) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        out
    }

    /// `one → (X + X̄)` by down rules, built by induction on `X`.
    fn identity(&self, x: &Formula) -> Option<SeqDerivation> {
        let sig = &self.sys.sig;
        let one = self.sys.one_formula();
        let plus = self.plus;
        let mut s = SeqDerivation::new(one.clone());
        match x {
            Formula::Const(_) => {
                let target = Formula::app(plus, x.clone(), sig.negate(x));
                if !self.sys.equal(&target, &one) {
                    return None;
                }
                s.push_eq(self.sys, target);
            }
            Formula::App(beta, a, b) => {
                let delta = sig.strong(*beta);
                // for weak β the δ↓ conclusion has the β-node on its right
                let (l, r) = if delta == *beta {
                    ((**a).clone(), (**b).clone())
                } else {
                    (sig.negate(a), sig.negate(b))
                };
                let unit = Formula::app(delta, one.clone(), one.clone());
                if !self.sys.equal(&unit, &one) {
                    return None;
                }
                s.push_eq(self.sys, unit);
                s.extend_in(&Context::around(s.conclusion(), &[Dir::L])?, &self.identity(&l)?);
                s.extend_in(&Context::around(s.conclusion(), &[Dir::R])?, &self.identity(&r)?);
                let rule = self.sys.down_rule(delta)?;
                let inst = rule.match_premiss(sig, s.conclusion())?;
                s.push(RuleRef::named(&rule.name), Vec::new(), rule.conclusion_of(sig, &inst));
                s.push_eq(self.sys, Formula::app(plus, x.clone(), sig.negate(x)));
            }
        }
        Some(s)
    }

    /// `one → (((A × Ā) β (B × B̄)) + (X̄ + X))` through one cut on `X`.
    fn detour(&self, c: &CutChoice) -> Option<SeqDerivation> {
        let sig = &self.sys.sig;
        let times = self.sys.times?;
        let plus = self.plus;
        let x = Formula::app(c.beta, c.a.clone(), c.b.clone());
        let id1 = self.identity(&x)?;
        let id2 = self.identity(&sig.negate(&x))?;
        let mut s = SeqDerivation::new(self.sys.one_formula());
        s.push_eq(self.sys, Formula::app(times, self.sys.one_formula(), self.sys.one_formula()));
        s.extend_in(&Context::around(s.conclusion(), &[Dir::L])?, &id1);
        s.extend_in(&Context::around(s.conclusion(), &[Dir::R])?, &id2);
        let tdown = self.sys.down_rule(times)?;
        let inst = tdown.match_premiss(sig, s.conclusion())?;
        let f = tdown.conclusion_of(sig, &inst);
        s.push(RuleRef::named(&tdown.name), Vec::new(), f.clone());
        let cut = self.sys.rule(&c.rule)?;
        let inst = cut.match_premiss(sig, f.get(&[Dir::L])?)?;
        let g = f.replace(&[Dir::L], cut.conclusion_of(sig, &inst))?;
        s.push(RuleRef::named(&c.rule), vec![Dir::L], g);
        debug_assert!(s.conclusion().conn() == Some(plus));
        if s.check(self.sys).is_err() {
            return None;
        }
        Some(s)
    }

    /// Appends a detour on a random cut formula at a `one` of the conclusion,
    /// then continues the proof.
    fn inject_open(&mut self, s: &SeqDerivation, c: &CutChoice) -> Option<SeqDerivation> {
        let n = self.spec.cut_size;
        let c = CutChoice { a: self.random_formula(n), b: self.random_formula(n), ..c.clone() };
        let det = self.detour(&c)?;
        let f = s.conclusion().clone();
        let spots: Vec<Vec<Dir>> = f
            .const_paths(self.sys.one)
            .into_iter()
            .filter(|p| !(self.spec.tame && self.under_atom(&f, p)))
            .collect();
        let q = spots.choose(&mut self.rng)?.clone();
        let mut out = s.clone();
        out.extend_in(&Context::around(&f, &q)?, &det);
        self.grow(&mut out, 2);
        Some(out)
    }

    /// Splices the detour at a literal `one` of a random intermediate formula.
    fn inject(&mut self, s: &SeqDerivation, c: &CutChoice) -> Option<SeqDerivation> {
        let det = self.detour(c)?;
        let one = self.sys.one;
        let mut spots = Vec::new();
        for i in 0..=s.len() {
            let f = s.before(i);
            for p in f.const_paths(one) {
                if !(self.spec.tame && self.under_atom(f, &p)) {
                    spots.push((i, p));
                }
            }
        }
        let (i, q) = spots.choose(&mut self.rng)?.clone();
        let before = s.before(i).clone();
        let mut out = SeqDerivation { start: s.start.clone(), steps: s.steps[..i].to_vec() };
        out.extend_in(&Context::around(&before, &q)?, &det);
        out.push_eq(self.sys, before);
        out.steps.extend_from_slice(&s.steps[i..]);
        Some(out)
    }
}

/// The number of up-rule steps in `d`, or `None` if one of them is not a cut.
pub fn count_cuts(sys: &SystemDef, d: &Derivation) -> Option<usize> {
    let mut n = 0;
    for r in d.rules_used() {
        if let RuleRef::Named(name) = &r {
            let scheme = sys.rule(name)?;
            if scheme.kind == RuleKind::Up {
                if !sys.is_cut(scheme) {
                    return None;
                }
                n += 1;
            }
        }
    }
    Some(n)
}
