//! Ordinary deep-inference systems and their sequential derivations.

use subatomic_core::lex::{tokenize, Tokens};
use subatomic_core::{parse_path, render_path, ConnId, Dir, Error, Path, Polarity};

use crate::formula::OrdinaryFormula;
use crate::map::InterpretationMap;
use crate::{InterpError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrdinaryRule {
    /// `1 → (a ⅋ ~a)`
    AiDown,
    /// `(a ⊗ ~a) → ⊥`
    AiUp,
    /// `((A ⅋ B) ⊗ C) → ((A ⊗ C) ⅋ B)`
    Switch,
    /// `((A ⅋ B) ◁ (C ⅋ D)) → ((A ◁ C) ⅋ (B ◁ D))`
    SeqDown,
    /// `((A ◁ B) ⊗ (C ◁ D)) → ((A ⊗ C) ◁ (B ⊗ D))`
    SeqUp,
}

impl OrdinaryRule {
    pub const ALL: [OrdinaryRule; 5] =
        [OrdinaryRule::AiDown, OrdinaryRule::AiUp, OrdinaryRule::Switch, OrdinaryRule::SeqDown, OrdinaryRule::SeqUp];

    pub fn name(self) -> &'static str {
        match self {
            OrdinaryRule::AiDown => "ai.down",
            OrdinaryRule::AiUp => "ai.up",
            OrdinaryRule::Switch => "s",
            OrdinaryRule::SeqDown => "q.down",
            OrdinaryRule::SeqUp => "q.up",
        }
    }

    pub fn from_name(s: &str) -> Option<OrdinaryRule> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }
}

pub const ORDINARY_SYSTEMS: [&str; 3] = ["sks.linear", "smlls", "sbv"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinarySystem {
    pub name: String,
    pub rules: Vec<OrdinaryRule>,
}

impl OrdinarySystem {
    pub fn has(&self, r: OrdinaryRule) -> bool {
        self.rules.contains(&r)
    }
}

pub fn ordinary_system(name: &str) -> Option<OrdinarySystem> {
    use OrdinaryRule::*;
    let rules = match name {
        "sks.linear" => vec![AiDown, Switch],
        "smlls" => vec![AiDown, AiUp, Switch],
        "sbv" => vec![AiDown, AiUp, Switch, SeqDown, SeqUp],
        _ => return None,
    };
    Some(OrdinarySystem { name: name.to_string(), rules })
}

/// The connectives the ordinary rules are stated over.
pub(crate) struct Conns {
    pub strong: ConnId,
    pub weak: ConnId,
    pub seq: Option<ConnId>,
}

impl Conns {
    pub fn of(m: &InterpretationMap) -> Result<Conns> {
        let sig = m.sig();
        let strong = m.system.times.ok_or_else(|| InterpError::Map(format!("`{}` declares no times", m.system.name)))?;
        let seq = sig.conns().find(|&c| !sig.conn(c).is_atom && sig.conn(c).polarity == Polarity::Both);
        Ok(Conns { strong, weak: sig.dual(strong), seq })
    }
}

/// Whether `x → y` is an instance of `rule`.
pub(crate) fn instance(m: &InterpretationMap, k: &Conns, rule: OrdinaryRule, x: &OrdinaryFormula, y: &OrdinaryFormula) -> bool {
    use OrdinaryFormula::{App, Atom, Const};
    let one = m.system.one;
    let zero = m.sig().neg_const(one);
    let split = |f: &OrdinaryFormula, c: ConnId| match f {
        App(d, l, r) if *d == c => Some(((**l).clone(), (**r).clone())),
        _ => None,
    };
    let opposite = |f: &OrdinaryFormula, c: ConnId| match f {
        App(d, l, r) if *d == c => matches!((&**l, &**r), (Atom(a, true), Atom(b, false)) if a == b),
        _ => false,
    };
    match rule {
        OrdinaryRule::AiDown => *x == Const(one) && opposite(y, k.weak),
        OrdinaryRule::AiUp => opposite(x, k.strong) && *y == Const(zero),
        OrdinaryRule::Switch => (|| {
            let (ab, c) = split(x, k.strong)?;
            let (a, b) = split(&ab, k.weak)?;
            Some(*y == OrdinaryFormula::app(k.weak, OrdinaryFormula::app(k.strong, a, c), b))
        })()
        .unwrap_or(false),
        OrdinaryRule::SeqDown | OrdinaryRule::SeqUp => (|| {
            let seq = k.seq?;
            let (outer, inner) = if rule == OrdinaryRule::SeqDown { (seq, k.weak) } else { (k.strong, seq) };
            let (ab, cd) = split(x, outer)?;
            let ((a, b), (c, d)) = (split(&ab, inner)?, split(&cd, inner)?);
            Some(*y == OrdinaryFormula::app(inner, OrdinaryFormula::app(outer, a, c), OrdinaryFormula::app(outer, b, d)))
        })()
        .unwrap_or(false),
    }
}

/// One step: `rule` is `None` for an equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinaryStep {
    pub rule: Option<OrdinaryRule>,
    pub path: Path,
    pub result: OrdinaryFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinaryDerivation {
    pub start: OrdinaryFormula,
    pub steps: Vec<OrdinaryStep>,
}

impl OrdinaryDerivation {
    pub fn new(start: OrdinaryFormula) -> OrdinaryDerivation {
        OrdinaryDerivation { start, steps: Vec::new() }
    }

    pub fn conclusion(&self) -> &OrdinaryFormula {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn before(&self, i: usize) -> &OrdinaryFormula {
        if i == 0 {
            &self.start
        } else {
            &self.steps[i - 1].result
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, rule: Option<OrdinaryRule>, path: Path, result: OrdinaryFormula) {
        self.steps.push(OrdinaryStep { rule, path, result });
    }

    /// Appends an equality step to `target`, placed as deep as the equality allows.
    pub fn push_eq(&mut self, m: &InterpretationMap, target: OrdinaryFormula) {
        let cur = self.conclusion();
        let Some(mut p) = cur.diff_path(&target) else { return };
        while !p.is_empty() && !m.ordinary_equal(cur.get(&p).unwrap(), target.get(&p).unwrap()) {
            p.pop();
        }
        self.push(None, p, target);
    }

    /// Appends `sub` at `path`; the subformula there must be `sub.start`.
    pub fn extend_at(&mut self, path: &[Dir], sub: &OrdinaryDerivation) {
        for s in &sub.steps {
            let whole = self.conclusion().replace(path, s.result.clone()).expect("path exists");
            let mut p = path.to_vec();
            p.extend_from_slice(&s.path);
            self.push(s.rule, p, whole);
        }
    }

    pub fn rules_used(&self) -> Vec<OrdinaryRule> {
        self.steps.iter().filter_map(|s| s.rule).collect()
    }

    pub fn check(&self, m: &InterpretationMap, sys: &OrdinarySystem) -> Result<()> {
        let k = Conns::of(m)?;
        for (i, s) in self.steps.iter().enumerate() {
            let fail = |msg: String| InterpError::Check { step: i + 1, msg };
            let prev = self.before(i);
            let (Some(x), Some(y)) = (prev.get(&s.path), s.result.get(&s.path)) else {
                return Err(fail(format!("no subformula at @{}", render_path(&s.path))));
            };
            if prev.replace(&s.path, y.clone()).as_ref() != Some(&s.result) {
                return Err(fail("the step changes its context".into()));
            }
            match s.rule {
                None if m.ordinary_equal(x, y) => {}
                None => return Err(fail(format!("`{}` and `{}` are not equal", m.render(x), m.render(y)))),
                Some(r) if !sys.has(r) => return Err(fail(format!("`{}` is not a rule of {}", r.name(), sys.name))),
                Some(r) if instance(m, &k, r, x, y) => {}
                Some(r) => {
                    return Err(fail(format!("`{}` → `{}` is not an instance of {}", m.render(x), m.render(y), r.name())));
                }
            }
        }
        Ok(())
    }

    pub fn render(&self, m: &InterpretationMap, system: &str) -> String {
        let mut s = format!("seq {system}\nstart {}\n", m.render(&self.start));
        for st in &self.steps {
            let rule = st.rule.map_or("=", |r| r.name());
            s.push_str(&format!("step {rule} @{} {}\n", render_path(&st.path), m.render(&st.result)));
        }
        s
    }

    /// Parses the sequential format; returns the system name from the header, if any.
    pub fn parse(text: &str, m: &InterpretationMap) -> Result<(Option<String>, OrdinaryDerivation)> {
        let mut system = None;
        let mut start = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let toks = tokenize(line, line_no);
            let head = &toks[0];
            let end = (line_no, line.chars().count() + 1);
            let formula = |from: usize| -> Result<OrdinaryFormula> {
                let mut ts = Tokens::from_tokens(toks[from..].to_vec(), end);
                let f = OrdinaryFormula::parse_tokens(&mut ts, m.sig())?;
                ts.finish()?;
                Ok(f)
            };
            match head.text.as_str() {
                "seq" => system = toks.get(1).map(|t| t.text.clone()),
                "start" => start = Some(formula(1)?),
                "step" => {
                    if toks.len() < 4 {
                        return Err(Error::parse(head.line, head.col, "expected `step <rule> @<path> <formula>`").into());
                    }
                    let rule = match toks[1].text.as_str() {
                        "=" => None,
                        name => Some(OrdinaryRule::from_name(name).ok_or_else(|| InterpError::UnknownRule(name.to_string()))?),
                    };
                    let path = parse_path(&toks[2].text)
                        .filter(|_| toks[2].text.starts_with('@'))
                        .ok_or_else(|| Error::parse(toks[2].line, toks[2].col, "expected a path such as `@l.r` or `@.`"))?;
                    steps.push(OrdinaryStep { rule, path, result: formula(3)? });
                }
                other => return Err(Error::parse(head.line, head.col, format!("unexpected `{other}`")).into()),
            }
        }
        let start = start.ok_or_else(|| Error::parse(1, 1, "missing `start` line"))?;
        Ok((system, OrdinaryDerivation { start, steps }))
    }
}
