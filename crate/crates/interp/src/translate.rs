//! Step-by-step translation between tame subatomic derivations and ordinary ones.

use subatomic_core::{
    match_rule_instance, ConnId, Context, Derivation, Dir, Formula, RuleKind, RuleRef, RuleScheme, SeqDerivation,
};

use crate::formula::OrdinaryFormula;
use crate::map::InterpretationMap;
use crate::ordinary::{instance, Conns, OrdinaryDerivation, OrdinaryRule, OrdinarySystem};
use crate::tame::under_atom;
use crate::{InterpError, Result};

/// Interprets a tame derivation as an ordinary derivation in `target`.
/// Runs of equality steps become at most one ordinary equality step.
pub fn interpret_derivation(d: &Derivation, m: &InterpretationMap, target: &OrdinarySystem) -> Result<OrdinaryDerivation> {
    let k = Conns::of(m)?;
    let s = d.sequentialize();
    let mut out = OrdinaryDerivation::new(m.interpret(&s.start)?);
    for (i, st) in s.steps.iter().enumerate() {
        let fail = |msg: String| InterpError::Translation { step: i + 1, msg };
        let before = s.before(i);
        let ib = m.interpret(before).map_err(|e| fail(e.to_string()))?;
        let ia = m.interpret(&st.result).map_err(|e| fail(e.to_string()))?;
        if ib == ia {
            continue;
        }
        if st.rule.is_eq() {
            if out.steps.last().is_some_and(|l| l.rule.is_none()) {
                out.steps.pop();
            }
            out.push_eq(m, ia);
            continue;
        }
        if under_atom(m.sig(), before, &st.path) {
            return Err(fail(format!("`{}` is applied in the scope of an atom", st.rule)));
        }
        let rule = m.system.rule(st.rule.as_str()).ok_or_else(|| fail(format!("unknown rule `{}`", st.rule)))?;
        let local = local_steps(m, &k, rule, before.get(&st.path).unwrap(), st.result.get(&st.path).unwrap(), &ib, &st.path)
            .map_err(fail)?;
        if let Some(r) = local.rules_used().into_iter().find(|r| !target.has(*r)) {
            return Err(fail(format!("`{}` needs `{}`, which {} lacks", st.rule, r.name(), target.name)));
        }
        out.extend_at(&st.path, &local);
        debug_assert_eq!(out.conclusion(), &ia);
    }
    Ok(out)
}

/// An ordinary derivation from the interpreted redex to the interpreted contractum.
fn local_steps(
    m: &InterpretationMap,
    k: &Conns,
    rule: &RuleScheme,
    redex: &Formula,
    contractum: &Formula,
    ib: &OrdinaryFormula,
    path: &[Dir],
) -> std::result::Result<OrdinaryDerivation, String> {
    let sig = m.sig();
    let x = ib.get(path).expect("path outside atoms").clone();
    let y = m.interpret(contractum).map_err(|e| e.to_string())?;
    let mut out = OrdinaryDerivation::new(x.clone());
    if m.ordinary_equal(&x, &y) {
        out.push_eq(m, y);
        return Ok(out);
    }
    let inst = match_rule_instance(&m.system, rule, redex, contractum).ok_or("not a rule instance")?;
    let atom = [inst.alpha, inst.beta].into_iter().find(|c| sig.conn(*c).is_atom);
    let ord = OrdinaryFormula::app;
    let apply = |out: &mut OrdinaryDerivation, r: OrdinaryRule, at: Vec<Dir>, to: OrdinaryFormula| {
        let whole = out.conclusion().replace(&at, to).unwrap();
        out.push(Some(r), at, whole);
    };
    if let Some(a) = atom {
        let lit = |c: ConnId| ord(c, OrdinaryFormula::Atom(a, true), OrdinaryFormula::Atom(a, false));
        let one = OrdinaryFormula::Const(m.system.one);
        let zero = OrdinaryFormula::Const(sig.neg_const(m.system.one));
        let (from, r, to) = if m.ordinary_equal(&x, &one) && m.ordinary_equal(&y, &lit(k.weak)) {
            (one, OrdinaryRule::AiDown, lit(k.weak))
        } else if m.ordinary_equal(&x, &lit(k.strong)) && m.ordinary_equal(&y, &zero) {
            (lit(k.strong), OrdinaryRule::AiUp, zero)
        } else {
            return Err(format!("`{}` → `{}` matches no atomic rule", m.render(&x), m.render(&y)));
        };
        out.push_eq(m, from);
        apply(&mut out, r, vec![], to);
        out.push_eq(m, y);
        return Ok(out);
    }
    let part = |f: &OrdinaryFormula, p: &[Dir]| f.get(p).unwrap().clone();
    let (a, b, c, d) = (part(&x, &[Dir::L, Dir::L]), part(&x, &[Dir::L, Dir::R]), part(&x, &[Dir::R, Dir::L]), part(&x, &[Dir::R, Dir::R]));
    let (alpha, beta) = (inst.alpha, inst.beta);
    match rule.kind {
        RuleKind::Down if Some(alpha) == k.seq && beta == k.weak => {
            apply(&mut out, OrdinaryRule::SeqDown, vec![], y);
        }
        RuleKind::Down if alpha == k.strong && beta == k.weak => {
            // ((A w B) s (C w D)) → ((A s (C w D)) w B) = (((C w D) s A) w B) → (((C s A) w D) w B)
            let (s, w) = (k.strong, k.weak);
            apply(&mut out, OrdinaryRule::Switch, vec![], ord(w, ord(s, a.clone(), ord(w, c.clone(), d.clone())), b.clone()));
            out.push_eq(m, ord(w, ord(s, ord(w, c.clone(), d.clone()), a.clone()), b.clone()));
            apply(&mut out, OrdinaryRule::Switch, vec![Dir::L], ord(w, ord(s, c, a), d));
            out.push_eq(m, y);
        }
        RuleKind::Up if alpha == k.strong && Some(beta) == k.seq => {
            apply(&mut out, OrdinaryRule::SeqUp, vec![], y);
        }
        RuleKind::Up if alpha == k.strong && beta == k.weak => {
            // ((A w B) s (C s D)) = (((A w B) s C) s D) → (((A s C) w B) s D) = ((B w (A s C)) s D) → ((B s D) w (A s C))
            let (s, w) = (k.strong, k.weak);
            out.push_eq(m, ord(s, ord(s, ord(w, a.clone(), b.clone()), c.clone()), d.clone()));
            apply(&mut out, OrdinaryRule::Switch, vec![Dir::L], ord(w, ord(s, a.clone(), c.clone()), b.clone()));
            out.push_eq(m, ord(s, ord(w, b.clone(), ord(s, a.clone(), c.clone())), d.clone()));
            apply(&mut out, OrdinaryRule::Switch, vec![], ord(w, ord(s, b, d), ord(s, a, c)));
            out.push_eq(m, y);
        }
        _ => return Err(format!("`{}` has no ordinary counterpart", rule.name)),
    }
    Ok(out)
}

/// Represents an ordinary derivation as a tame subatomic one in `m.system`.
pub fn represent_derivation(d: &OrdinaryDerivation, m: &InterpretationMap) -> Result<Derivation> {
    let k = Conns::of(m)?;
    let sys = &m.system;
    let sig = m.sig();
    let (u1, u2) = (Formula::Const(m.u1), Formula::Const(m.u2));
    let find = |kind: RuleKind, alpha: ConnId, beta: ConnId| {
        sys.rules.iter().find(|r| r.kind == kind && r.alpha.admits(alpha, sig) && r.beta.admits(beta, sig))
    };
    let mut s = SeqDerivation::new(m.represent(&d.start));
    for (i, st) in d.steps.iter().enumerate() {
        let fail = |msg: String| InterpError::Translation { step: i + 1, msg };
        let target = m.represent(&st.result);
        let Some(rule) = st.rule else {
            s.push(RuleRef::Eq, st.path.clone(), target);
            continue;
        };
        let p = st.path.clone();
        let ctx = Context::around(s.conclusion(), &p).ok_or_else(|| fail("no subformula at the step path".into()))?;
        let before = d.before(i).get(&p).cloned().ok_or_else(|| fail("no subformula at the step path".into()))?;
        let after = st.result.get(&p).cloned().ok_or_else(|| fail("no subformula at the step path".into()))?;
        if !instance(m, &k, rule, &before, &after) {
            return Err(fail(format!("not an instance of {}", rule.name())));
        }
        let missing = |what: &str| fail(format!("{} has no {what} rule", sys.name));
        let named = |r: &RuleScheme| RuleRef::named(&r.name);
        let app = Formula::app;
        match rule {
            OrdinaryRule::AiDown => {
                let a = atom_of(&after).ok_or_else(|| fail("expected an atom".into()))?;
                let r = find(RuleKind::Down, a, k.weak).ok_or_else(|| missing("atom down"))?;
                let prem = app(a, app(k.weak, u1.clone(), u2.clone()), app(k.weak, u2.clone(), u1.clone()));
                s.push(RuleRef::Eq, p.clone(), ctx.plug(&prem));
                s.push(named(r), p, target);
            }
            OrdinaryRule::AiUp => {
                let a = atom_of(&before).ok_or_else(|| fail("expected an atom".into()))?;
                let r = find(RuleKind::Up, k.strong, a).ok_or_else(|| missing("atom up"))?;
                let conc = app(a, app(k.strong, u1.clone(), u2.clone()), app(k.strong, u2.clone(), u1.clone()));
                s.push(named(r), p.clone(), ctx.plug(&conc));
                s.push(RuleRef::Eq, p, target);
            }
            OrdinaryRule::Switch => {
                let r = find(RuleKind::Down, k.strong, k.weak).ok_or_else(|| missing("switch"))?;
                let zero = Formula::Const(sig.conn(k.weak).unit.ok_or_else(|| missing("unit"))?);
                let redex = s.conclusion().get(&p).unwrap().clone();
                let (xy, z) = (redex.left().unwrap().clone(), redex.right().unwrap().clone());
                let (xx, yy) = (xy.left().unwrap().clone(), xy.right().unwrap().clone());
                let rp = [p.as_slice(), &[Dir::R]].concat();
                s.push(RuleRef::Eq, rp.clone(), ctx.plug(&app(k.strong, xy, app(k.weak, z.clone(), zero.clone()))));
                s.push(named(r), p, ctx.plug(&app(k.weak, app(k.strong, xx, z), app(k.weak, yy, zero))));
                s.push(RuleRef::Eq, rp, target);
            }
            OrdinaryRule::SeqDown | OrdinaryRule::SeqUp => {
                let seq = k.seq.ok_or_else(|| missing("seq"))?;
                let r = if rule == OrdinaryRule::SeqDown {
                    find(RuleKind::Down, seq, k.weak).ok_or_else(|| missing("seq down"))?
                } else {
                    find(RuleKind::Up, k.strong, seq).ok_or_else(|| missing("seq up"))?
                };
                s.push(named(r), p, target);
            }
        }
    }
    let out = s.to_derivation();
    out.check(sys)?;
    Ok(out)
}

fn atom_of(f: &OrdinaryFormula) -> Option<ConnId> {
    match f {
        OrdinaryFormula::App(_, l, _) => match &**l {
            OrdinaryFormula::Atom(a, _) => Some(*a),
            _ => None,
        },
        _ => None,
    }
}
