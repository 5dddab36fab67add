//! Context reduction and the reassembly of proofs around a cut.

use subatomic_core::{ConstId, Dir, Formula, RuleKind, SystemDef};

use crate::engine::{cat, Engine, Seq};
use crate::SplitError;

/// `ζ: A + k` and `χ: h{hole + k} → S{hole}`, with the hole marked by [`ConstId::HOLE`].
pub(crate) struct Reduction {
    pub k: Formula,
    pub h: Formula,
    pub hole: Vec<Dir>,
    pub zeta: Seq,
    pub chi: Seq,
}

pub(crate) fn hole() -> Formula {
    Formula::Const(ConstId::HOLE)
}

pub(crate) fn substitute_seq(s: &Seq, with: &Formula) -> Seq {
    let mut out = Seq::new(s.start.substitute(ConstId::HOLE, with));
    for st in &s.steps {
        out.push(st.rule.clone(), st.path.clone(), st.result.substitute(ConstId::HOLE, with));
    }
    out
}

impl Engine<'_> {
    /// Context reduction of a refined proof at `hole`.
    pub(crate) fn reduce(&mut self, phi: &Seq, at: &[Dir]) -> Result<Reduction, SplitError> {
        self.burn()?;
        let f = phi.conclusion().clone();
        let target = f.replace(at, hole()).expect("hole path exists");
        let above = (0..at.len()).find(|&i| f.get(&at[..i]).and_then(|g| g.conn()) != Some(self.plus));
        let Some(i) = above else {
            let a = f.get(at).unwrap().clone();
            let k = self.remove(&f, at);
            let mut zeta = phi.clone();
            self.eq_to(&mut zeta, self.sum(a, k.clone()));
            let mut chi = Seq::new(self.sum(hole(), k.clone()));
            self.eq_to(&mut chi, target);
            return Ok(Reduction { k, h: hole(), hole: vec![], zeta, chi });
        };
        let q = &at[..i];
        let beta = f.get(q).unwrap().conn().unwrap();
        let side = at[i];
        let rest = &at[i + 1..];
        let r = self.split(phi, phi.len(), q)?;
        let c = self.strong(beta);
        let (inner, beside) = if side == Dir::L { (&r.phi1, &r.phi2) } else { (&r.phi2, &r.phi1) };
        let w = self.refine(inner)?;
        let sub = self.reduce(&w, &cat(&[Dir::L], rest))?;
        let other = beside.start.clone();
        let (h, chi_start) = if side == Dir::L {
            (self.app(c, sub.h.clone(), other.clone()), self.app(c, sub.chi.start.clone(), other))
        } else {
            (self.app(c, other.clone(), sub.h.clone()), self.app(c, other, sub.chi.start.clone()))
        };
        let mut chi = Seq::new(chi_start);
        self.lift(&mut chi, &[side], &sub.chi);
        self.lift(&mut chi, &[crate::engine::flip(side)], beside);
        if self.medial(&mut chi, &[], beta)? != self.dual(beta) {
            return Err(SplitError::Internal("medial produced an unexpected connective".into()));
        }
        self.lift(&mut chi, &[Dir::R], &r.psi);
        self.eq_to(&mut chi, target);
        Ok(Reduction { k: sub.k, h, hole: cat(&[side], &sub.hole), zeta: sub.zeta, chi })
    }

    /// Replaces the up-rule step `idx` of `phi` by a derivation in the down fragment.
    /// The steps before `idx` must all be in the down fragment.
    pub(crate) fn eliminate_at(&mut self, full: &SystemDef, phi: &Seq, idx: usize) -> Result<Seq, SplitError> {
        let st = &phi.steps[idx];
        let name = st.rule.as_str();
        let rule = full.rule(name).ok_or_else(|| SplitError::Precondition(format!("unknown rule `{name}`")))?;
        if rule.kind != RuleKind::Up || !full.is_cut(rule) {
            return Err(SplitError::NotACut(name.to_string()));
        }
        let before = phi.before(idx);
        let p = st.path.clone();
        let prem = before.get(&p).unwrap().clone();
        let concl = st.result.get(&p).unwrap().clone();
        let beta = concl.conn().unwrap();
        let parts = |x: &Formula| (x.left().unwrap().clone(), x.right().unwrap().clone());
        let (ab, cd) = parts(&prem);
        let ((a, b), (c, d)) = (parts(&ab), parts(&cd));

        let prefix = self.refine(&Engine::prefix_steps(phi, idx))?;
        let red = self.reduce(&prefix, &p)?;
        let w = self.refine(&red.zeta)?;
        let r = self.split(&w, w.len(), &[Dir::L])?;
        let times = self.times;
        let x = |this: &Self, l: Formula, r: Formula| this.app(times, l, r);

        let mut inner;
        if beta != self.plus {
            let w3 = self.refine(&r.phi1)?;
            let s1 = self.split(&w3, w3.len(), &[Dir::L])?;
            let w4 = self.refine(&r.phi2)?;
            let s2 = self.split(&w4, w4.len(), &[Dir::L])?;
            let bm = self.strong(beta);
            inner = Seq::new(self.app(
                bm,
                x(self, s1.phi1.start.clone(), s2.phi1.start.clone()),
                x(self, s1.phi2.start.clone(), s2.phi2.start.clone()),
            ));
            self.lift(&mut inner, &[Dir::L, Dir::L], &s1.phi1);
            self.lift(&mut inner, &[Dir::L, Dir::R], &s2.phi1);
            self.down_at(&mut inner, &[Dir::L])?;
            self.lift(&mut inner, &[Dir::R, Dir::L], &s1.phi2);
            self.lift(&mut inner, &[Dir::R, Dir::R], &s2.phi2);
            self.down_at(&mut inner, &[Dir::R])?;
            let bbar = self.dual(beta);
            if self.medial(&mut inner, &[], beta)? != bbar {
                return Err(SplitError::Internal("medial produced an unexpected connective".into()));
            }
            if self.medial(&mut inner, &[Dir::R], bbar)? != self.dual(bm) {
                return Err(SplitError::Internal("medial produced an unexpected connective".into()));
            }
            self.lift(&mut inner, &[Dir::R, Dir::L], &s1.psi);
            self.lift(&mut inner, &[Dir::R, Dir::R], &s2.psi);
        } else {
            let w4 = self.refine(&r.phi2)?;
            let s2 = self.split(&w4, w4.len(), &[Dir::L])?;
            inner = Seq::new(x(
                self,
                x(self, r.phi1.start.clone(), s2.phi1.start.clone()),
                s2.phi2.start.clone(),
            ));
            self.lift(&mut inner, &[Dir::L, Dir::L], &r.phi1);
            self.lift(&mut inner, &[Dir::L, Dir::R], &s2.phi1);
            let t = x(
                self,
                x(self, self.sum(a.clone(), self.sum(b.clone(), r.q1.clone())), self.sum(c.clone(), s2.q1.clone())),
                s2.phi2.start.clone(),
            );
            self.eq_to(&mut inner, t);
            self.down_at(&mut inner, &[Dir::L])?;
            self.lift(&mut inner, &[Dir::R], &s2.phi2);
            let ac = x(self, a, c);
            let t = x(
                self,
                self.sum(b.clone(), self.sum(ac.clone(), self.sum(r.q1.clone(), s2.q1.clone()))),
                self.sum(d.clone(), s2.q2.clone()),
            );
            self.eq_to(&mut inner, t);
            self.down_at(&mut inner, &[])?;
            let t = self.sum(concl.clone(), self.sum(r.q1.clone(), self.sum(s2.q1.clone(), s2.q2.clone())));
            self.eq_to(&mut inner, t);
            self.lift(&mut inner, &[Dir::R, Dir::R], &s2.psi);
        }
        self.lift(&mut inner, &[Dir::R], &r.psi);
        debug_assert_eq!(inner.conclusion(), &self.sum(concl.clone(), red.k.clone()));

        let mut out = Seq::new(red.h.replace(&red.hole, inner.start.clone()).unwrap());
        self.lift(&mut out, &red.hole, &inner);
        out.extend(&substitute_seq(&red.chi, &concl));
        debug_assert_eq!(out.conclusion(), &st.result);
        out.steps.extend_from_slice(&phi.steps[idx + 1..]);
        Ok(out)
    }
}
