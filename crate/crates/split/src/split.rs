//! Shallow splitting, one bottom step at a time.

use subatomic_core::term::is_prefix;
use subatomic_core::{Axiom, Dir, Formula};

use crate::engine::{cat, flip, strictly_under, Engine, Seq};
use crate::SplitError;

/// `ψ: (q1 ᾱ q2) → C`, `φ₁: A + q1`, `φ₂: B + q2`.
pub(crate) struct Split {
    pub q1: Formula,
    pub q2: Formula,
    pub psi: Seq,
    pub phi1: Seq,
    pub phi2: Seq,
}

fn internal(msg: impl Into<String>) -> SplitError {
    SplitError::Internal(msg.into())
}

impl Engine<'_> {
    /// Splits the first `n` steps of `phi` at the `α`-node `d` of their conclusion.
    pub(crate) fn split(&mut self, phi: &Seq, n: usize, d: &[Dir]) -> Result<Split, SplitError> {
        self.burn()?;
        let f = phi.before(n).clone();
        let Some(Formula::App(alpha, a, b)) = f.get(d) else {
            return Err(internal(format!("no connective at the split position of `{}`", self.sys.render(&f))));
        };
        let (alpha, a, b) = (*alpha, (**a).clone(), (**b).clone());
        let c = self.remove(&f, d);
        let abar = self.dual(alpha);

        if n == 0 {
            return self.split_base(&f, d, alpha, a, b);
        }

        let st = phi.steps[n - 1].clone();
        let g = phi.before(n - 1).clone();
        let p = st.path.clone();

        if !is_prefix(&p, d) && !is_prefix(d, &p) {
            self.log(1, &f);
            let mut r = self.split(phi, n - 1, d)?;
            let (last, parent) = d.split_last().expect("disjoint paths are not the root");
            let mapped = if p.len() > parent.len() && is_prefix(parent, &p) {
                debug_assert_eq!(p[parent.len()], flip(*last));
                cat(parent, &p[parent.len() + 1..])
            } else {
                p.clone()
            };
            debug_assert_eq!(r.psi.conclusion(), &self.remove(&g, d));
            r.psi.push(st.rule.clone(), mapped, c);
            return Ok(r);
        }

        if strictly_under(&p, d) {
            let side = p[d.len()];
            self.log(if side == Dir::L { 5 } else { 6 }, &f);
            let mut r = self.split(phi, n - 1, d)?;
            let rest = cat(&[Dir::L], &p[d.len() + 1..]);
            let target = if side == Dir::L { &mut r.phi1 } else { &mut r.phi2 };
            let sub = if side == Dir::L { a } else { b };
            let next = target.conclusion().replace(&[Dir::L], sub).unwrap();
            target.push(st.rule.clone(), rest, next);
            return Ok(r);
        }

        // The step rewrites a node on the way to `d`, or `d` itself.
        let gp = g.get(&p).unwrap().clone();
        let fp = f.get(&p).unwrap().clone();
        if st.rule.is_eq() {
            let ax = self
                .sys
                .theory
                .single_axiom(&gp, &fp)
                .ok_or_else(|| internal("equality step is not a single axiom instance"))?;
            if self.sys.theory.is_plus_axiom(ax) {
                return self.transport(phi, n, d, &f, &g, &c);
            }
            match ax {
                Axiom::Unit { conn, side, intro: false } => {
                    return self.split_unit_elim(phi, n, d, &p, conn, side, &f, &c, abar);
                }
                _ if p.len() != d.len() => {
                    return Err(internal(format!("unexpected {:?} above the split position", ax)));
                }
                Axiom::Comm { .. } => {
                    self.log(10, &f);
                    let r = self.split(phi, n - 1, d)?;
                    let mut psi = Seq::new(self.app(abar, r.q2.clone(), r.q1.clone()));
                    self.eq_to(&mut psi, self.app(abar, r.q1.clone(), r.q2.clone()));
                    psi.extend(&r.psi);
                    return Ok(Split { q1: r.q2, q2: r.q1, psi, phi1: r.phi2, phi2: r.phi1 });
                }
                Axiom::Assoc { to_right: true, .. } => {
                    self.log(11, &f);
                    let r = self.split(phi, n - 1, d)?;
                    let w = self.refine(&r.phi1)?;
                    let r2 = self.split(&w, w.len(), &[Dir::L])?;
                    let mut phi2 = self.beside(self.strong(alpha), &r2.phi2, &r.phi2);
                    self.medial_expect(&mut phi2, alpha, abar)?;
                    let q2 = self.app(abar, r2.q2.clone(), r.q2.clone());
                    let mut psi = Seq::new(self.app(abar, r2.q1.clone(), q2.clone()));
                    self.eq_to(&mut psi, self.app(abar, self.app(abar, r2.q1.clone(), r2.q2.clone()), r.q2.clone()));
                    self.lift(&mut psi, &[Dir::L], &r2.psi);
                    psi.extend(&r.psi);
                    return Ok(Split { q1: r2.q1, q2, psi, phi1: r2.phi1, phi2 });
                }
                Axiom::Assoc { to_right: false, .. } => {
                    self.log(12, &f);
                    let r = self.split(phi, n - 1, d)?;
                    let w = self.refine(&r.phi2)?;
                    let r2 = self.split(&w, w.len(), &[Dir::L])?;
                    let mut phi1 = self.beside(self.strong(alpha), &r.phi1, &r2.phi1);
                    self.medial_expect(&mut phi1, alpha, abar)?;
                    let q1 = self.app(abar, r.q1.clone(), r2.q1.clone());
                    let mut psi = Seq::new(self.app(abar, q1.clone(), r2.q2.clone()));
                    self.eq_to(&mut psi, self.app(abar, r.q1.clone(), self.app(abar, r2.q1.clone(), r2.q2.clone())));
                    self.lift(&mut psi, &[Dir::R], &r2.psi);
                    psi.extend(&r.psi);
                    return Ok(Split { q1, q2: r2.q2, psi, phi1, phi2: r2.phi2 });
                }
                Axiom::Unit { side, intro: true, .. } => {
                    let prefix = Engine::prefix_steps(phi, n - 1);
                    let (u, other, case) = if side == Dir::R { (b.clone(), a.clone(), 13) } else { (a.clone(), b.clone(), 14) };
                    self.log(case, &f);
                    let ubar = self.neg(&u);
                    let mut main = prefix;
                    self.eq_to(&mut main, self.sum(other, c.clone()));
                    let unit = self.unit_proof(self.sum(u, ubar.clone()));
                    let (q1, q2, phi1, phi2) =
                        if side == Dir::R { (c.clone(), ubar, main, unit) } else { (ubar, c.clone(), unit, main) };
                    let mut psi = Seq::new(self.app(abar, q1.clone(), q2.clone()));
                    self.eq_to(&mut psi, c);
                    return Ok(Split { q1, q2, psi, phi1, phi2 });
                }
                Axiom::Assign { intro: true, .. } => {
                    self.log(15, &f);
                    let mut omega = Engine::prefix_steps(phi, n - 1);
                    self.eq_to(&mut omega, self.sum(gp.clone(), c.clone()));
                    let psi_u = self.dual_lemma(&omega, &gp)?;
                    let (q1, q2) = (self.neg(&a), self.neg(&b));
                    let mut psi = Seq::new(self.app(abar, q1.clone(), q2.clone()));
                    self.eq_to(&mut psi, self.neg(&gp));
                    psi.extend(&psi_u);
                    let phi1 = self.unit_proof(self.sum(a, q1.clone()));
                    let phi2 = self.unit_proof(self.sum(b, q2.clone()));
                    return Ok(Split { q1, q2, psi, phi1, phi2 });
                }
                _ => return Err(internal(format!("unclassified equality step {:?}", ax))),
            }
        }

        // A logical rule at a proper prefix of `d`.
        let Formula::App(gamma, _, _) = &gp else { unreachable!("rule redex is an application") };
        let gamma = *gamma;
        if gamma == self.plus {
            return Err(SplitError::Unsupported(format!("down rule on `{}`", self.sys.sig.conn_name(gamma))));
        }
        if p.len() == d.len() {
            return Err(internal("rule conclusion at the split position is not a sum"));
        }
        let side = d[p.len()];
        let gm = self.weak(gamma);
        if side == Dir::R && gm == self.plus {
            if d.len() == p.len() + 1 {
                return Err(internal("split position is a sum"));
            }
            return self.split_times(phi, n, d, &p, &f, &c, abar);
        }
        if d.len() != p.len() + 1 {
            return Err(internal("split position is below a non-sum rule conclusion"));
        }
        self.log(if side == Dir::L { 7 } else if gamma == gm { 9 } else { 8 }, &f);
        let parts = |x: &Formula| (x.left().unwrap().clone(), x.right().unwrap().clone());
        let (p12, p34) = parts(&gp);
        let ((p1, p2), (p3, p4)) = (parts(&p12), parts(&p34));
        let r = self.split(phi, n - 1, &p)?;
        let (aa, c1, bb, c2, x) = if side == Dir::L { (p1, p2, p3, p4, gm) } else { (p2, p1, p4, p3, gamma) };
        let q1 = self.sum(c1, r.q1.clone());
        let q2 = self.sum(c2, r.q2.clone());
        let mut phi1 = r.phi1;
        self.eq_to(&mut phi1, self.sum(aa, q1.clone()));
        let mut phi2 = r.phi2;
        self.eq_to(&mut phi2, self.sum(bb, q2.clone()));
        let mut psi = Seq::new(self.app(abar, q1.clone(), q2.clone()));
        let y = self.medial(&mut psi, &[], x)?;
        if y != self.dual(gamma) {
            return Err(internal("medial produced an unexpected connective"));
        }
        self.lift(&mut psi, &[Dir::R], &r.psi);
        self.eq_to(&mut psi, c);
        Ok(Split { q1, q2, psi, phi1, phi2 })
    }

    fn medial_expect(&self, s: &mut Seq, x: subatomic_core::ConnId, y: subatomic_core::ConnId) -> Result<(), SplitError> {
        if self.medial(s, &[], x)? != y {
            return Err(internal("medial produced an unexpected connective"));
        }
        Ok(())
    }

    fn split_base(
        &mut self,
        f: &Formula,
        d: &[Dir],
        alpha: subatomic_core::ConnId,
        a: Formula,
        b: Formula,
    ) -> Result<Split, SplitError> {
        self.log(15, f);
        let abar = self.dual(alpha);
        if !d.is_empty() || !self.is_unit_tree(f) {
            return Err(internal("premiss is not a unit tree"));
        }
        let z = self.zero.clone();
        let mut psi = Seq::new(self.app(abar, z.clone(), z.clone()));
        if !self.sys.equal(psi.conclusion(), &z) {
            return Err(SplitError::Unsupported(format!("premiss `{}`", self.sys.render(f))));
        }
        self.eq_to(&mut psi, z.clone());
        let mut phi1 = Seq::new(a.clone());
        self.eq_to(&mut phi1, self.sum(a, z.clone()));
        let mut phi2 = Seq::new(b.clone());
        self.eq_to(&mut phi2, self.sum(b, z.clone()));
        Ok(Split { q1: z.clone(), q2: z, psi, phi1, phi2 })
    }

    /// A `+`-equality at or above `d`: locate the same factor before the step.
    fn transport(&mut self, phi: &Seq, n: usize, d: &[Dir], f: &Formula, g: &Formula, c: &Formula) -> Result<Split, SplitError> {
        self.log(0, f);
        let fd = f.get(d).unwrap();
        let d2 = self
            .factor_paths(g)
            .into_iter()
            .find(|q| g.get(q) == Some(fd) && self.sys.equal_plus(&self.remove(g, q), c))
            .ok_or_else(|| internal("factor lost across a +-equality"))?;
        let mut r = self.split(phi, n - 1, &d2)?;
        self.eq_to(&mut r.psi, c.clone());
        Ok(r)
    }

    /// `(X γ u) → X` at a prefix `p` of `d`.
    #[allow(clippy::too_many_arguments)]
    fn split_unit_elim(
        &mut self,
        phi: &Seq,
        n: usize,
        d: &[Dir],
        p: &[Dir],
        gamma: subatomic_core::ConnId,
        side: Dir,
        f: &Formula,
        c: &Formula,
        abar: subatomic_core::ConnId,
    ) -> Result<Split, SplitError> {
        self.log(if side == Dir::R { 3 } else { 4 }, f);
        let fp = f.get(p).unwrap().clone();
        let u = Formula::Const(self.unit_of(gamma).ok_or_else(|| internal("unit axiom without a unit"))?);
        let ubar = self.neg(&u);
        let r = self.split(phi, n - 1, p)?;
        let (main, unit_side) = if side == Dir::R { (&r.phi1, &r.phi2) } else { (&r.phi2, &r.phi1) };
        let psi_u = self.dual_lemma(unit_side, &u)?;
        let e = &d[p.len()..];
        let w = self.refine(main)?;
        let r2 = self.split(&w, w.len(), &cat(&[Dir::L], e))?;
        let rest = self.remove_opt(&fp, e);
        let gbar = self.dual(gamma);
        let t = if side == Dir::R { self.app(gbar, r.q1.clone(), ubar) } else { self.app(gbar, ubar, r.q2.clone()) };
        let (full, tpath) = match rest {
            None => (t, vec![]),
            Some(rest) => (self.sum(rest, t), vec![Dir::R]),
        };
        let mut psi = Seq::new(self.app(abar, r2.q1.clone(), r2.q2.clone()));
        psi.extend(&r2.psi);
        self.eq_to(&mut psi, full);
        let upath = cat(&tpath, &[side]);
        self.lift(&mut psi, &upath, &psi_u);
        self.lift(&mut psi, &tpath, &r.psi);
        self.eq_to(&mut psi, c.clone());
        Ok(Split { q1: r2.q1, q2: r2.q2, psi, phi1: r2.phi1, phi2: r2.phi2 })
    }

    /// `×↓` at `p` with the split position inside the right-hand `+` of its conclusion.
    #[allow(clippy::too_many_arguments)]
    fn split_times(
        &mut self,
        phi: &Seq,
        n: usize,
        d: &[Dir],
        p: &[Dir],
        f: &Formula,
        c: &Formula,
        abar: subatomic_core::ConnId,
    ) -> Result<Split, SplitError> {
        self.log(2, f);
        let g = phi.before(n - 1);
        let gp = g.get(p).unwrap().clone();
        let fp = f.get(p).unwrap().clone();
        let parts = |x: &Formula| (x.left().unwrap().clone(), x.right().unwrap().clone());
        let (p12, p34) = parts(&gp);
        let ((p1, p2), (p3, p4)) = (parts(&p12), parts(&p34));
        let r = self.split(phi, n - 1, p)?;
        let e = &d[p.len() + 1..];
        let (which, e2) = (e[0], &e[1..]);
        let x = self.remove(&fp, &d[p.len()..]);
        let inner = if which == Dir::L { &r.phi1 } else { &r.phi2 };
        let w = self.refine(inner)?;
        let r2 = self.split(&w, w.len(), &cat(&[Dir::L, Dir::R], e2))?;
        let times = self.times;
        let mut psi = Seq::new(self.app(abar, r2.q1.clone(), r2.q2.clone()));
        let m = r2.psi.start.clone();
        debug_assert_eq!(psi.start, m);
        let shaped = |this: &Self, pa: Formula, pb: Formula, h: Formula, e2: &[Dir]| {
            let rem = this.remove_opt(&pb, e2);
            let inner = match rem {
                None => h,
                Some(r) => this.sum(r, h),
            };
            this.sum(pa, inner)
        };
        if which == Dir::L {
            let other = r.phi2.start.clone();
            self.eq_to(&mut psi, self.app(times, m, other));
            self.lift(&mut psi, &[Dir::L], &r2.psi);
            self.lift(&mut psi, &[Dir::R], &r.phi2);
            let left = shaped(self, p1, p2, r.q1.clone(), e2);
            let right = self.sum(p3, self.sum(p4, r.q2.clone()));
            self.eq_to(&mut psi, self.app(times, left, right));
        } else {
            let other = r.phi1.start.clone();
            self.eq_to(&mut psi, self.app(times, other, m));
            self.lift(&mut psi, &[Dir::R], &r2.psi);
            self.lift(&mut psi, &[Dir::L], &r.phi1);
            let left = self.sum(p1, self.sum(p2, r.q1.clone()));
            let right = shaped(self, p3, p4, r.q2.clone(), e2);
            self.eq_to(&mut psi, self.app(times, left, right));
        }
        self.down_at(&mut psi, &[])?;
        self.eq_to(&mut psi, self.sum(x, self.sum(r.q1.clone(), r.q2.clone())));
        self.lift(&mut psi, &[Dir::R], &r.psi);
        self.eq_to(&mut psi, c.clone());
        Ok(Split { q1: r2.q1, q2: r2.q2, psi, phi1: r2.phi1, phi2: r2.phi2 })
    }

    /// From a proof of `u + C`, a derivation `ū → C`.
    pub(crate) fn dual_lemma(&self, omega: &Seq, u: &Formula) -> Result<Seq, SplitError> {
        let concl = omega.conclusion();
        if concl.conn() != Some(self.plus) || concl.left() != Some(u) {
            return Err(SplitError::Precondition(format!(
                "`{}` is not of the form `{} + C`",
                self.sys.render(concl),
                self.sys.render(u)
            )));
        }
        let cc = concl.right().unwrap().clone();
        let ubar = self.neg(u);
        let mut s = Seq::new(ubar.clone());
        self.eq_to(&mut s, self.app(self.times, self.sum(ubar, self.zero.clone()), omega.start.clone()));
        self.lift(&mut s, &[Dir::R], omega);
        self.down_at(&mut s, &[])?;
        self.eq_to(&mut s, cc);
        Ok(s)
    }
}
