//! Tameness: no rule instance in the scope of an atom other than equalities.

use subatomic_core::{Derivation, Dir, Formula, RuleRef, Signature, SystemDef};

/// Whether some proper ancestor of `path` in `f` is an atom.
pub(crate) fn under_atom(sig: &Signature, f: &Formula, path: &[Dir]) -> bool {
    (0..path.len()).any(|k| f.get(&path[..k]).and_then(Formula::conn).is_some_and(|c| sig.conn(c).is_atom))
}

pub fn is_tame(d: &Derivation, sys: &SystemDef) -> bool {
    let s = d.sequentialize();
    s.steps.iter().enumerate().all(|(i, st)| st.rule.is_eq() || !under_atom(&sys.sig, s.before(i), &st.path))
}

/// Replaces each rule step in the scope of an atom whose premiss and conclusion
/// are both equal to the distinguished unit by an equality step.
pub fn tame_repair(d: &Derivation, sys: &SystemDef) -> Derivation {
    let one = sys.one_formula();
    let mut s = d.sequentialize();
    for i in 0..s.steps.len() {
        let st = &s.steps[i];
        if st.rule.is_eq() || !under_atom(&sys.sig, s.before(i), &st.path) {
            continue;
        }
        let x = s.before(i).get(&st.path).unwrap();
        let y = st.result.get(&st.path).unwrap();
        if sys.equal(x, &one) && sys.equal(y, &one) {
            s.steps[i].rule = RuleRef::Eq;
        }
    }
    s.to_derivation()
}
