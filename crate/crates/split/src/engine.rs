//! Shared machinery: sequential proofs under construction, `+`-sums,
//! equality padding and medial steps.

use subatomic_core::term::is_prefix;
use subatomic_core::{
    ConnId, ConstId, Context, Dir, Formula, RuleKind, RuleRef, SeqDerivation, SeqStep, Subset, SystemDef,
};

use crate::{SplitError, TraceEntry};

pub(crate) type Seq = SeqDerivation;

pub(crate) fn flip(d: Dir) -> Dir {
    match d {
        Dir::L => Dir::R,
        Dir::R => Dir::L,
    }
}

pub(crate) fn cat(p: &[Dir], q: &[Dir]) -> Vec<Dir> {
    let mut v = p.to_vec();
    v.extend_from_slice(q);
    v
}

pub(crate) struct Engine<'a> {
    pub sys: &'a SystemDef,
    pub plus: ConnId,
    pub times: ConnId,
    pub zero: Formula,
    pub one: Formula,
    pub trace: Option<Vec<TraceEntry>>,
    fuel: usize,
}

impl<'a> Engine<'a> {
    /// `sys` must pass the splittability lint.
    pub fn new(sys: &'a SystemDef, trace: bool) -> Engine<'a> {
        Engine {
            sys,
            plus: sys.plus.expect("lint guarantees +"),
            times: sys.times.expect("lint guarantees ×"),
            zero: Formula::Const(sys.zero().expect("lint guarantees a unit for +")),
            one: sys.one_formula(),
            trace: if trace { Some(Vec::new()) } else { None },
            fuel: 5_000_000,
        }
    }

    pub fn burn(&mut self) -> Result<(), SplitError> {
        if self.fuel == 0 {
            return Err(SplitError::Internal("recursion budget exhausted".into()));
        }
        self.fuel -= 1;
        Ok(())
    }

    pub fn log(&mut self, case: u8, f: &Formula) {
        if let Some(t) = &mut self.trace {
            t.push(TraceEntry { case, formula: f.clone() });
        }
    }

    pub fn app(&self, c: ConnId, l: Formula, r: Formula) -> Formula {
        Formula::app(c, l, r)
    }

    pub fn sum(&self, l: Formula, r: Formula) -> Formula {
        Formula::app(self.plus, l, r)
    }

    pub fn neg(&self, f: &Formula) -> Formula {
        self.sys.sig.negate(f)
    }

    pub fn dual(&self, c: ConnId) -> ConnId {
        self.sys.sig.dual(c)
    }

    pub fn strong(&self, c: ConnId) -> ConnId {
        self.sys.sig.strong(c)
    }

    pub fn weak(&self, c: ConnId) -> ConnId {
        self.sys.sig.weak(c)
    }

    pub fn unit_of(&self, c: ConnId) -> Option<ConstId> {
        self.sys.sig.conn(c).unit
    }

    /// `f` with the node at `d` spliced out of its `+`-parent.
    pub fn remove(&self, f: &Formula, d: &[Dir]) -> Formula {
        self.remove_opt(f, d).unwrap_or_else(|| self.zero.clone())
    }

    pub fn remove_opt(&self, f: &Formula, d: &[Dir]) -> Option<Formula> {
        let (last, parent) = d.split_last()?;
        let sib = f.get(&cat(parent, &[flip(*last)])).expect("sibling exists").clone();
        Some(f.replace(parent, sib).expect("parent exists"))
    }

    /// Paths of the maximal non-`+` subformulae reachable through `+` nodes.
    pub fn factor_paths(&self, f: &Formula) -> Vec<Vec<Dir>> {
        let mut out = Vec::new();
        let mut stack = vec![Vec::new()];
        while let Some(p) = stack.pop() {
            let g = f.get(&p).unwrap();
            if g.conn() == Some(self.plus) {
                stack.push(cat(&p, &[Dir::R]));
                stack.push(cat(&p, &[Dir::L]));
            } else {
                out.push(p);
            }
        }
        out
    }

    pub fn local_cost(&self, x: &Formula, y: &Formula) -> usize {
        usize::from(!self.sys.equal_plus(x, y))
    }

    /// Appends equality steps from the current conclusion to `target`.
    /// A `+`-equality whose local endpoints are not `+`-equal is spelled out axiom by axiom.
    pub fn eq_to(&self, s: &mut Seq, target: Formula) {
        let cur = s.conclusion().clone();
        let Some(p) = self.sys.eq_path(&cur, &target) else { return };
        let (x, y) = (cur.get(&p).unwrap(), target.get(&p).unwrap());
        if self.sys.equal_plus(x, y) || !self.sys.equal_plus(&cur, &target) {
            s.push(RuleRef::Eq, p, target);
            return;
        }
        let chain = self.sys.theory.explain(&cur, &target, Subset::PlusOnly).expect("+-equal");
        for st in chain {
            s.push(RuleRef::Eq, st.path, st.result);
        }
    }

    /// Appends `sub` at `path`; the subformula there must be `sub.start`.
    pub fn lift(&self, s: &mut Seq, path: &[Dir], sub: &Seq) {
        let ctx = Context::around(s.conclusion(), path).expect("lift path exists");
        debug_assert_eq!(s.conclusion().get(path), Some(&sub.start));
        s.extend_in(&ctx, sub);
    }

    /// Applies the down rule for the connective at `path`.
    pub fn down_at(&self, s: &mut Seq, path: &[Dir]) -> Result<(), SplitError> {
        let cur = s.conclusion().clone();
        let x = cur.get(path).expect("redex exists");
        let c = x.conn().expect("redex is an application");
        let rule = self
            .sys
            .down_rule(c)
            .ok_or_else(|| SplitError::Internal(format!("no down rule for `{}`", self.sys.sig.conn_name(c))))?;
        let inst = rule.match_premiss(&self.sys.sig, x).ok_or_else(|| {
            SplitError::Internal(format!("`{}` is not a premiss of `{}`", self.sys.render(x), rule.name))
        })?;
        let y = rule.conclusion_of(&self.sys.sig, &inst);
        s.push(RuleRef::named(&rule.name), path.to_vec(), cur.replace(path, y).unwrap());
        Ok(())
    }

    /// Rewrites `((X₁ + Y₁) δ (X₂ + Y₂))` at `path` into `((X₁ x X₂) + (Y₁ y Y₂))`,
    /// where `x` is `x_conn` and `{x, y} = {δ, δᵐ}`. Returns `y`.
    pub fn medial(&self, s: &mut Seq, path: &[Dir], x_conn: ConnId) -> Result<ConnId, SplitError> {
        let cur = s.conclusion().clone();
        let f = cur.get(path).expect("medial redex exists").clone();
        let Formula::App(delta, l, r) = &f else { unreachable!("medial on a constant") };
        let delta = *delta;
        let parts = |g: &Formula| -> (Formula, Formula) {
            assert_eq!(g.conn(), Some(self.plus), "medial arguments are sums");
            (g.left().unwrap().clone(), g.right().unwrap().clone())
        };
        let ((x1, y1), (x2, y2)) = (parts(l), parts(r));
        let dm = self.weak(delta);
        let at = |s: &Seq, g: Formula| s.conclusion().replace(path, g).unwrap();
        if delta == self.plus {
            let t = self.sum(self.sum(x1, x2), self.sum(y1, y2));
            let t = at(s, t);
            self.eq_to(s, t);
            return Ok(self.plus);
        }
        if x_conn == delta {
            self.down_at(s, path)?;
            return Ok(dm);
        }
        assert_eq!(x_conn, dm, "medial connective must be δ or δᵐ");
        let swapped = self.app(delta, self.sum(y1.clone(), x1.clone()), self.sum(y2.clone(), x2.clone()));
        let t = at(s, swapped);
        self.eq_to(s, t);
        self.down_at(s, path)?;
        let back = self.sum(self.app(dm, x1, x2), self.app(delta, y1, y2));
        let t = at(s, back);
        self.eq_to(s, t);
        Ok(delta)
    }

    /// A proof of `target`, which must be equal to the distinguished unit.
    pub fn unit_proof(&self, target: Formula) -> Seq {
        let mut s = Seq::new(self.one.clone());
        self.eq_to(&mut s, target);
        s
    }

    /// `(p₁ conn p₂)` for two proofs; the premiss is a unit tree.
    pub fn beside(&self, conn: ConnId, p1: &Seq, p2: &Seq) -> Seq {
        let mut s = Seq::new(self.app(conn, p1.start.clone(), p2.start.clone()));
        self.lift(&mut s, &[Dir::L], p1);
        self.lift(&mut s, &[Dir::R], p2);
        s
    }

    /// Whether `f` is built from the distinguished unit by connectives `γ` with `1 γ 1 = 1`,
    /// other than `+`. Proofs composed side by side start at such formulae.
    pub fn is_unit_tree(&self, f: &Formula) -> bool {
        fn shape(f: &Formula, one: &Formula, plus: ConnId) -> bool {
            match f {
                Formula::Const(_) => f == one,
                Formula::App(c, l, r) => *c != plus && shape(l, one, plus) && shape(r, one, plus),
            }
        }
        shape(f, &self.one, self.plus) && self.sys.equal(f, &self.one)
    }

    /// Makes the premiss a unit tree and replaces each equality step by single axiom instances.
    pub fn refine(&self, s: &Seq) -> Result<Seq, SplitError> {
        let keep = self.is_unit_tree(&s.start);
        let mut out = Seq::new(if keep { s.start.clone() } else { self.one.clone() });
        if !keep {
            if !self.sys.equal(&s.start, &self.one) {
                return Err(SplitError::Precondition(format!(
                    "premiss `{}` is not equal to `{}`",
                    self.sys.render(&s.start),
                    self.sys.render(&self.one)
                )));
            }
            self.refine_eq(&mut out, &s.start);
        }
        for (i, st) in s.steps.iter().enumerate() {
            if st.rule.is_eq() {
                let prev = s.before(i);
                if prev == &st.result {
                    continue;
                }
                let x = prev.get(&st.path).unwrap();
                let y = st.result.get(&st.path).unwrap();
                if self.sys.theory.single_axiom(x, y).is_some() {
                    out.steps.push(st.clone());
                } else {
                    self.refine_eq(&mut out, &st.result);
                }
            } else {
                out.steps.push(st.clone());
            }
        }
        Ok(out)
    }

    fn refine_eq(&self, out: &mut Seq, target: &Formula) {
        let cur = out.conclusion().clone();
        let Some(p) = self.sys.eq_path(&cur, target) else { return };
        let (x, y) = (cur.get(&p).unwrap(), target.get(&p).unwrap());
        let ctx = Context::around(&cur, &p).unwrap();
        let (subset, chain) = if self.sys.equal_plus(x, y) {
            (Subset::PlusOnly, self.sys.theory.explain(x, y, Subset::PlusOnly))
        } else {
            (Subset::Full, self.sys.theory.explain(x, y, Subset::Full))
        };
        let chain = chain.unwrap_or_else(|| panic!("equality step is not valid under {subset:?}"));
        for st in chain {
            out.steps.push(SeqStep { rule: RuleRef::Eq, path: cat(&p, &st.path), result: ctx.plug(&st.result) });
        }
    }

    /// Fuses runs of equality steps where that does not raise the measure.
    pub fn fuse(&self, s: &Seq) -> Seq {
        let mut out = Seq::new(s.start.clone());
        let n = s.steps.len();
        let mut i = 0;
        while i < n {
            if !s.steps[i].rule.is_eq() {
                out.steps.push(s.steps[i].clone());
                i += 1;
                continue;
            }
            let mut j = i;
            while j < n && s.steps[j].rule.is_eq() {
                j += 1;
            }
            let from = s.before(i).clone();
            let to = s.steps[j - 1].result.clone();
            let cost: usize = (i..j).map(|k| s.step_cost(k, self.sys)).sum();
            match self.sys.eq_path(&from, &to) {
                None => {}
                Some(p) => {
                    let fused = self.local_cost(from.get(&p).unwrap(), to.get(&p).unwrap());
                    if fused <= cost {
                        out.push(RuleRef::Eq, p, to);
                    } else {
                        out.steps.extend_from_slice(&s.steps[i..j]);
                    }
                }
            }
            i = j;
        }
        out
    }

    /// The first up-rule step of `s`, with rules resolved in `full`.
    pub fn first_up(&self, s: &Seq, full: &SystemDef) -> Option<usize> {
        s.steps.iter().position(|st| match &st.rule {
            RuleRef::Named(n) => full.rule(n).is_some_and(|r| r.kind == RuleKind::Up),
            RuleRef::Eq => false,
        })
    }

    pub fn prefix_steps(s: &Seq, n: usize) -> Seq {
        Seq { start: s.start.clone(), steps: s.steps[..n].to_vec() }
    }
}

/// Whether `p` lies strictly below `d`.
pub(crate) fn strictly_under(p: &[Dir], d: &[Dir]) -> bool {
    p.len() > d.len() && is_prefix(d, p)
}
