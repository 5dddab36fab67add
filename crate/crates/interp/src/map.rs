//! Natural interpretation `I` and its representation `R`.

use subatomic_core::{resolve, ConstId, Dir, Formula, Signature, Subset, SystemDef};

use crate::formula::OrdinaryFormula;
use crate::{InterpError, Result};

/// A natural interpretation of `system`: constants and non-atom connectives
/// stand for themselves, `(u1 a u2)` is `a` and `(u2 a u1)` is `~a`.
#[derive(Debug, Clone)]
pub struct InterpretationMap {
    pub system: SystemDef,
    pub u1: ConstId,
    pub u2: ConstId,
}

impl InterpretationMap {
    pub fn new(system: SystemDef, u1: ConstId, u2: ConstId) -> InterpretationMap {
        InterpretationMap { system, u1, u2 }
    }

    /// `classical`, `mll` and `bv`, or any system whose units are `f`/`t` or `bot`/`one`.
    pub fn builtin(name: &str) -> Result<InterpretationMap> {
        let system = match name {
            "classical" => "saks",
            "mll" => "samlls",
            "bv" => "sabvu",
            other => other,
        };
        Self::for_system(resolve(system)?)
    }

    /// The natural map of a system with constants `f`, `t` (classical) or `bot`, `one` (linear).
    pub fn for_system(system: SystemDef) -> Result<InterpretationMap> {
        let pick = |a: &str, b: &str| Some((system.sig.constant(a).ok()?, system.sig.constant(b).ok()?));
        let (u1, u2) = pick("f", "t")
            .or_else(|| pick("bot", "one"))
            .ok_or_else(|| InterpError::Map(format!("no natural interpretation for `{}`", system.name)))?;
        Ok(InterpretationMap { system, u1, u2 })
    }

    pub fn sig(&self) -> &Signature {
        &self.system.sig
    }

    pub fn interpret(&self, a: &Formula) -> Result<OrdinaryFormula> {
        self.interp(a, &mut Vec::new()).map_err(|path| InterpError::NotInterpretable { formula: self.system.render(a), path })
    }

    pub fn is_interpretable(&self, a: &Formula) -> bool {
        self.interp(a, &mut Vec::new()).is_ok()
    }

    fn interp(&self, a: &Formula, path: &mut Vec<Dir>) -> std::result::Result<OrdinaryFormula, Vec<Dir>> {
        let sig = self.sig();
        match a {
            Formula::Const(c) => Ok(OrdinaryFormula::Const(*c)),
            Formula::App(c, l, r) if !sig.conn(*c).is_atom => {
                path.push(Dir::L);
                let l = self.interp(l, path)?;
                path.pop();
                path.push(Dir::R);
                let r = self.interp(r, path)?;
                path.pop();
                Ok(OrdinaryFormula::app(*c, l, r))
            }
            Formula::App(c, l, r) => {
                let th = &self.system.theory;
                let (u1, u2) = (th.rep(self.u1), th.rep(self.u2));
                let args = (th.canonical(l, Subset::Full).as_const(), th.canonical(r, Subset::Full).as_const());
                match args {
                    (Some(x), Some(y)) if x == u1 && y == u2 => Ok(OrdinaryFormula::Atom(*c, true)),
                    (Some(x), Some(y)) if x == u2 && y == u1 => Ok(OrdinaryFormula::Atom(*c, false)),
                    _ => match th.canonical(a, Subset::Full).as_const() {
                        Some(k) => Ok(OrdinaryFormula::Const(k)),
                        None => Err(path.clone()),
                    },
                }
            }
        }
    }

    pub fn represent(&self, g: &OrdinaryFormula) -> Formula {
        match g {
            OrdinaryFormula::Const(c) => Formula::Const(*c),
            OrdinaryFormula::Atom(a, true) => Formula::app(*a, Formula::Const(self.u1), Formula::Const(self.u2)),
            OrdinaryFormula::Atom(a, false) => Formula::app(*a, Formula::Const(self.u2), Formula::Const(self.u1)),
            OrdinaryFormula::App(c, l, r) => Formula::app(*c, self.represent(l), self.represent(r)),
        }
    }

    /// Ordinary equality: the representations are equal in the subatomic theory.
    pub fn ordinary_equal(&self, g: &OrdinaryFormula, h: &OrdinaryFormula) -> bool {
        g == h || self.system.equal(&self.represent(g), &self.represent(h))
    }

    pub fn parse(&self, text: &str) -> Result<OrdinaryFormula> {
        Ok(OrdinaryFormula::parse(text, self.sig())?)
    }

    pub fn render(&self, g: &OrdinaryFormula) -> String {
        g.render(self.sig())
    }
}
