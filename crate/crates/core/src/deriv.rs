//! Open-deduction derivations and their sequential form.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lex::Tokens;
use crate::system::{RuleRef, SystemDef};
use crate::term::{parse_path, render_path, ConnId, Context, Dir, Formula, Path, Signature, Symbol};
use crate::theory::Subset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    Leaf(Formula),
    /// `Infer(upper, ρ, lower)`: the conclusion of `upper` is rewritten by ρ
    /// into the premiss of `lower`.
    Infer(Arc<Derivation>, RuleRef, Arc<Derivation>),
    Comp(ConnId, Arc<Derivation>, Arc<Derivation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqStep {
    pub rule: RuleRef,
    pub path: Path,
    pub result: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqDerivation {
    pub start: Formula,
    pub steps: Vec<SeqStep>,
}

impl Derivation {
    pub fn leaf(f: Formula) -> Derivation {
        Derivation::Leaf(f)
    }

    pub fn infer(upper: Derivation, rule: RuleRef, lower: Derivation) -> Derivation {
        Derivation::Infer(Arc::new(upper), rule, Arc::new(lower))
    }

    pub fn comp(conn: ConnId, left: Derivation, right: Derivation) -> Derivation {
        Derivation::Comp(conn, Arc::new(left), Arc::new(right))
    }

    /// A single step `from → to` by `rule` at the root.
    pub fn step(from: Formula, rule: RuleRef, to: Formula) -> Derivation {
        Derivation::infer(Derivation::Leaf(from), rule, Derivation::Leaf(to))
    }

    pub fn premiss(&self) -> Formula {
        match self {
            Derivation::Leaf(f) => f.clone(),
            Derivation::Infer(u, _, _) => u.premiss(),
            Derivation::Comp(c, l, r) => Formula::app(*c, l.premiss(), r.premiss()),
        }
    }

    pub fn conclusion(&self) -> Formula {
        match self {
            Derivation::Leaf(f) => f.clone(),
            Derivation::Infer(_, _, l) => l.conclusion(),
            Derivation::Comp(c, l, r) => Formula::app(*c, l.conclusion(), r.conclusion()),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Derivation::Leaf(_))
    }

    /// Number of inference nodes.
    pub fn num_steps(&self) -> usize {
        match self {
            Derivation::Leaf(_) => 0,
            Derivation::Infer(u, _, l) => 1 + u.num_steps() + l.num_steps(),
            Derivation::Comp(_, l, r) => l.num_steps() + r.num_steps(),
        }
    }

    /// Total number of formula nodes over all leaves.
    pub fn size(&self) -> usize {
        match self {
            Derivation::Leaf(f) => f.size(),
            Derivation::Infer(u, _, l) => u.size() + l.size(),
            Derivation::Comp(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn check(&self, sys: &SystemDef) -> Result<()> {
        let mut node = Vec::new();
        check_node(self, sys, &mut node).map(|_| ())
    }

    pub fn sequentialize(&self) -> SeqDerivation {
        let mut raw = Vec::new();
        collect_steps(self, &mut Vec::new(), &mut raw);
        let start = self.premiss();
        let mut cur = start.clone();
        let mut steps = Vec::with_capacity(raw.len());
        for (rule, path, after) in raw {
            cur = cur.replace(&path, after).expect("step path exists");
            steps.push(SeqStep { rule, path, result: cur.clone() });
        }
        SeqDerivation { start, steps }
    }

    pub fn length_plus(&self, sys: &SystemDef) -> usize {
        self.sequentialize().length_plus(sys)
    }

    pub fn rules_used(&self) -> Vec<RuleRef> {
        self.sequentialize().steps.into_iter().map(|s| s.rule).collect()
    }

    pub fn render(&self, sig: &Signature) -> String {
        let mut s = String::new();
        render_deriv(self, sig, 0, &mut s);
        s
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Derivation> {
        let mut toks = Tokens::new(text);
        let d = parse_deriv(&mut toks, sig)?;
        toks.finish()?;
        Ok(d)
    }

    /// Parses either the tree format or the sequential export format.
    pub fn parse_any(text: &str, sig: &Signature) -> Result<Derivation> {
        let first = text.lines().map(|l| l.trim()).find(|l| !l.is_empty() && !l.starts_with('#'));
        if first.is_some_and(|l| l.starts_with("seq") || l.starts_with("start")) {
            Ok(SeqDerivation::parse(text, sig)?.1.to_derivation())
        } else {
            Derivation::parse(text, sig)
        }
    }

    /// Replaces every occurrence of the placeholder constant by `with`.
    pub fn substitute(&self, c: crate::term::ConstId, with: &Formula) -> Derivation {
        match self {
            Derivation::Leaf(f) => Derivation::Leaf(f.substitute(c, with)),
            Derivation::Infer(u, r, l) => Derivation::infer(u.substitute(c, with), r.clone(), l.substitute(c, with)),
            Derivation::Comp(k, l, r) => Derivation::comp(*k, l.substitute(c, with), r.substitute(c, with)),
        }
    }
}

fn node_name(node: &[&'static str]) -> String {
    if node.is_empty() {
        "root".to_string()
    } else {
        node.join("/")
    }
}

fn check_node(d: &Derivation, sys: &SystemDef, node: &mut Vec<&'static str>) -> Result<(Formula, Formula)> {
    match d {
        Derivation::Leaf(f) => Ok((f.clone(), f.clone())),
        Derivation::Comp(c, l, r) => {
            node.push("left");
            let (lp, lc) = check_node(l, sys, node)?;
            node.pop();
            node.push("right");
            let (rp, rc) = check_node(r, sys, node)?;
            node.pop();
            Ok((Formula::app(*c, lp, rp), Formula::app(*c, lc, rc)))
        }
        Derivation::Infer(u, rule, l) => {
            node.push("upper");
            let (up, uc) = check_node(u, sys, node)?;
            node.pop();
            node.push("lower");
            let (lp, lc) = check_node(l, sys, node)?;
            node.pop();
            validate_step(sys, rule, &uc, &lp).map_err(|msg| Error::Check { node: node_name(node), msg })?;
            Ok((up, lc))
        }
    }
}

/// Checks one rule instance `from → to`; the error message names both formulae.
pub fn validate_step(sys: &SystemDef, rule: &RuleRef, from: &Formula, to: &Formula) -> std::result::Result<(), String> {
    match rule {
        RuleRef::Eq => {
            if sys.equal(from, to) {
                Ok(())
            } else {
                Err(format!("`{}` and `{}` are not equal in the theory", sys.render(from), sys.render(to)))
            }
        }
        RuleRef::Named(n) => {
            let scheme = sys.rule(n).ok_or_else(|| format!("unknown rule `{n}` in system `{}`", sys.name))?;
            if scheme.matches(&sys.sig, from, to).is_some() {
                Ok(())
            } else {
                Err(format!("`{}` → `{}` is not an instance of `{n}`", sys.render(from), sys.render(to)))
            }
        }
    }
}

fn collect_steps(d: &Derivation, prefix: &mut Path, out: &mut Vec<(RuleRef, Path, Formula)>) {
    match d {
        Derivation::Leaf(_) => {}
        Derivation::Infer(u, rule, l) => {
            collect_steps(u, prefix, out);
            out.push((rule.clone(), prefix.clone(), l.premiss()));
            collect_steps(l, prefix, out);
        }
        Derivation::Comp(_, l, r) => {
            prefix.push(Dir::L);
            collect_steps(l, prefix, out);
            prefix.pop();
            prefix.push(Dir::R);
            collect_steps(r, prefix, out);
            prefix.pop();
        }
    }
}

/// `φ ; ψ`, defined when the conclusion of `φ` is the premiss of `ψ`.
pub fn compose_seq(phi: &Derivation, psi: &Derivation) -> Result<Derivation> {
    let (c, p) = (phi.conclusion(), psi.premiss());
    if c != p {
        return Err(Error::Compose(format!("conclusion and premiss differ: {c:?} vs {p:?}")));
    }
    Ok(compose_unchecked(phi, psi))
}

fn compose_unchecked(phi: &Derivation, psi: &Derivation) -> Derivation {
    match (phi, psi) {
        (Derivation::Leaf(_), _) => psi.clone(),
        (_, Derivation::Leaf(_)) => phi.clone(),
        (Derivation::Infer(u, r, l), _) => Derivation::Infer(u.clone(), r.clone(), Arc::new(compose_unchecked(l, psi))),
        (_, Derivation::Infer(u, r, l)) => Derivation::Infer(Arc::new(compose_unchecked(phi, u)), r.clone(), l.clone()),
        (Derivation::Comp(a, l1, r1), Derivation::Comp(b, l2, r2)) => {
            debug_assert_eq!(a, b);
            Derivation::comp(*a, compose_unchecked(l1, l2), compose_unchecked(r1, r2))
        }
    }
}

/// `K{φ}`: wraps `d` in connective compositions along the hole path.
pub fn plug_derivation(ctx: &Context, d: &Derivation) -> Derivation {
    let mut cur = d.clone();
    for fr in ctx.frames.iter().rev() {
        let sib = Derivation::Leaf(fr.sibling.clone());
        cur = match fr.dir {
            Dir::L => Derivation::comp(fr.conn, cur, sib),
            Dir::R => Derivation::comp(fr.conn, sib, cur),
        };
    }
    cur
}

/// Applies `rule` at `path` of `f`. For `=`, the applied axiom is the first
/// step of the rewrite of the subformula towards its canonical form.
pub fn apply_at(rule: &RuleRef, path: &[Dir], f: &Formula, sys: &SystemDef) -> Result<(Formula, Derivation)> {
    let x = f.get(path).ok_or_else(|| Error::NoMatch(format!("no subformula at path {}", render_path(path))))?;
    let y = match rule {
        RuleRef::Named(n) => {
            let scheme = sys.rule(n).ok_or_else(|| Error::System(format!("unknown rule `{n}`")))?;
            let inst = scheme
                .match_premiss(&sys.sig, x)
                .ok_or_else(|| Error::NoMatch(format!("`{}` does not match the premiss of `{n}`", sys.render(x))))?;
            scheme.conclusion_of(&sys.sig, &inst)
        }
        RuleRef::Eq => {
            let (_, steps) = sys.theory.trace(x, Subset::Full);
            steps
                .first()
                .map(|s| s.result.clone())
                .ok_or_else(|| Error::NoMatch(format!("`{}` is already in canonical form", sys.render(x))))?
        }
    };
    let ctx = Context::around(f, path).expect("path exists");
    let out = ctx.plug(&y);
    Ok((out, plug_derivation(&ctx, &Derivation::step(x.clone(), rule.clone(), y))))
}

fn render_deriv(d: &Derivation, sig: &Signature, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent + 2);
    match d {
        Derivation::Leaf(f) => {
            out.push_str("(form ");
            out.push_str(&sig.render(f));
            out.push(')');
        }
        Derivation::Infer(u, r, l) => {
            out.push_str("(step ");
            out.push_str(r.as_str());
            out.push('\n');
            out.push_str(&pad);
            render_deriv(u, sig, indent + 2, out);
            out.push('\n');
            out.push_str(&pad);
            render_deriv(l, sig, indent + 2, out);
            out.push(')');
        }
        Derivation::Comp(c, l, r) => {
            out.push_str("(comp ");
            out.push_str(sig.conn_name(*c));
            out.push('\n');
            out.push_str(&pad);
            render_deriv(l, sig, indent + 2, out);
            out.push('\n');
            out.push_str(&pad);
            render_deriv(r, sig, indent + 2, out);
            out.push(')');
        }
    }
}

fn parse_deriv(toks: &mut Tokens, sig: &Signature) -> Result<Derivation> {
    toks.expect("(")?;
    let kw = toks.next()?;
    let d = match kw.text.as_str() {
        "form" => Derivation::Leaf(sig.parse_tokens(toks)?),
        "step" => {
            let r = toks.next()?;
            if r.text == "(" || r.text == ")" {
                return Err(Error::parse(r.line, r.col, "expected a rule name"));
            }
            let u = parse_deriv(toks, sig)?;
            let l = parse_deriv(toks, sig)?;
            Derivation::infer(u, RuleRef::named(&r.text), l)
        }
        "comp" => {
            let c = toks.next()?;
            let conn = match sig.lookup(&c.text) {
                Some(Symbol::Conn(k)) => k,
                _ => return Err(Error::parse(c.line, c.col, format!("`{}` is not a declared connective", c.text))),
            };
            let l = parse_deriv(toks, sig)?;
            let r = parse_deriv(toks, sig)?;
            Derivation::comp(conn, l, r)
        }
        other => return Err(Error::parse(kw.line, kw.col, format!("expected `form`, `step` or `comp`, found `{other}`"))),
    };
    toks.expect(")")?;
    Ok(d)
}

impl SeqDerivation {
    pub fn new(start: Formula) -> SeqDerivation {
        SeqDerivation { start, steps: Vec::new() }
    }

    pub fn conclusion(&self) -> &Formula {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.start)
    }

    /// The formula before step `i`.
    pub fn before(&self, i: usize) -> &Formula {
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

    pub fn push(&mut self, rule: RuleRef, path: Path, result: Formula) {
        self.steps.push(SeqStep { rule, path, result });
    }

    /// Appends an equality step to `target`, placed as deep as the theory of `sys` allows.
    pub fn push_eq(&mut self, sys: &SystemDef, target: Formula) {
        if let Some(path) = sys.eq_path(self.conclusion(), &target) {
            self.steps.push(SeqStep { rule: RuleRef::Eq, path, result: target });
        }
    }

    /// Appends the steps of `other` lifted into `ctx`; `ctx{other.start}` must be the current conclusion.
    pub fn extend_in(&mut self, ctx: &Context, other: &SeqDerivation) {
        debug_assert_eq!(ctx.plug(&other.start), *self.conclusion());
        let prefix = ctx.path();
        for s in &other.steps {
            let mut path = prefix.clone();
            path.extend_from_slice(&s.path);
            self.steps.push(SeqStep { rule: s.rule.clone(), path, result: ctx.plug(&s.result) });
        }
    }

    pub fn extend(&mut self, other: &SeqDerivation) {
        self.extend_in(&Context::hole(), other);
    }

    pub fn lift(&self, ctx: &Context) -> SeqDerivation {
        let mut out = SeqDerivation::new(ctx.plug(&self.start));
        out.extend_in(ctx, self);
        out
    }

    /// Checks every step; the error names the step index and both formulae.
    pub fn check(&self, sys: &SystemDef) -> Result<()> {
        for (i, s) in self.steps.iter().enumerate() {
            let prev = self.before(i);
            let node = format!("step {} @{}", i + 1, render_path(&s.path));
            let x = prev.get(&s.path).ok_or_else(|| Error::Check { node: node.clone(), msg: "redex path does not exist".into() })?;
            let y = s.result.get(&s.path).ok_or_else(|| Error::Check { node: node.clone(), msg: "redex path does not exist in result".into() })?;
            if prev.replace(&s.path, y.clone()).as_ref() != Some(&s.result) {
                return Err(Error::Check { node, msg: "step changes the formula outside its redex".into() });
            }
            validate_step(sys, &s.rule, x, y).map_err(|msg| Error::Check { node, msg })?;
        }
        Ok(())
    }

    /// Cost of each step: 0 for `=` steps whose redexes are `=₊`-equal, otherwise 1.
    pub fn step_cost(&self, i: usize, sys: &SystemDef) -> usize {
        let s = &self.steps[i];
        if !s.rule.is_eq() {
            return 1;
        }
        let x = self.before(i).get(&s.path);
        let y = s.result.get(&s.path);
        match (x, y) {
            (Some(x), Some(y)) if sys.equal_plus(x, y) => 0,
            _ => 1,
        }
    }

    pub fn length_plus(&self, sys: &SystemDef) -> usize {
        (0..self.steps.len()).map(|i| self.step_cost(i, sys)).sum()
    }

    pub fn to_derivation(&self) -> Derivation {
        let mut acc: Option<Derivation> = None;
        for i in (0..self.steps.len()).rev() {
            let s = &self.steps[i];
            let prev = self.before(i);
            let ctx = Context::around(prev, &s.path).expect("step path exists");
            let x = prev.get(&s.path).unwrap().clone();
            let y = s.result.get(&s.path).unwrap().clone();
            let d = plug_derivation(&ctx, &Derivation::step(x, s.rule.clone(), y));
            acc = Some(match acc {
                None => d,
                Some(rest) => compose_unchecked(&d, &rest),
            });
        }
        acc.unwrap_or_else(|| Derivation::Leaf(self.start.clone()))
    }

    /// Spells out every equality step as a chain of single axiom instances.
    pub fn atomize(&self, sys: &SystemDef) -> SeqDerivation {
        let mut out = SeqDerivation::new(self.start.clone());
        for (i, s) in self.steps.iter().enumerate() {
            let prev = self.before(i);
            let (x, y) = (prev.get(&s.path).unwrap(), s.result.get(&s.path).unwrap());
            if !s.rule.is_eq() || sys.theory.single_axiom(x, y).is_some() {
                out.steps.push(s.clone());
                continue;
            }
            let subset = if sys.equal_plus(x, y) { Subset::PlusOnly } else { Subset::Full };
            let ctx = Context::around(prev, &s.path).expect("step path exists");
            for st in sys.theory.explain(x, y, subset).expect("equality step holds") {
                let mut path = s.path.clone();
                path.extend_from_slice(&st.path);
                out.steps.push(SeqStep { rule: RuleRef::Eq, path, result: ctx.plug(&st.result) });
            }
        }
        out
    }

    /// Absorbs maximal runs of equality steps whose endpoints are equal modulo `subset`.
    /// The surviving steps are linked modulo `subset` rather than syntactically.
    pub fn cos_normalize(&self, sys: &SystemDef, subset: Subset) -> SeqDerivation {
        if subset == Subset::Empty {
            return self.clone();
        }
        let mut out = SeqDerivation::new(self.start.clone());
        let n = self.steps.len();
        let mut i = 0;
        while i < n {
            if !self.steps[i].rule.is_eq() {
                out.steps.push(self.steps[i].clone());
                i += 1;
                continue;
            }
            let mut j = i;
            while j < n && self.steps[j].rule.is_eq() {
                j += 1;
            }
            let from = self.before(i);
            let absorbed = (i..j).rev().find(|&k| sys.theory.equal(from, &self.steps[k].result, subset));
            match absorbed {
                Some(k) => i = k + 1,
                None => {
                    out.steps.push(self.steps[i].clone());
                    i += 1;
                }
            }
        }
        out
    }

    pub fn render(&self, sig: &Signature, system: &str) -> String {
        let mut s = format!("seq {system}\nstart {}\n", sig.render(&self.start));
        for st in &self.steps {
            s.push_str(&format!("step {} @{} {}\n", st.rule, render_path(&st.path), sig.render(&st.result)));
        }
        s
    }

    /// Parses the sequential export format; returns the system name from the header, if any.
    pub fn parse(text: &str, sig: &Signature) -> Result<(Option<String>, SeqDerivation)> {
        let mut system = None;
        let mut start = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let toks = crate::lex::tokenize(line, line_no);
            let head = &toks[0];
            match head.text.as_str() {
                "seq" => system = toks.get(1).map(|t| t.text.clone()),
                "start" => {
                    let end = (line_no, line.chars().count() + 1);
                    let mut ts = Tokens::from_tokens(toks[1..].to_vec(), end);
                    start = Some(sig.parse_tokens(&mut ts)?);
                    ts.finish()?;
                }
                "step" => {
                    if toks.len() < 4 {
                        return Err(Error::parse(head.line, head.col, "expected `step <rule> @<path> <formula>`"));
                    }
                    let path = parse_path(&toks[2].text)
                        .filter(|_| toks[2].text.starts_with('@'))
                        .ok_or_else(|| Error::parse(toks[2].line, toks[2].col, "expected a path such as `@l.r` or `@.`"))?;
                    let end = (line_no, line.chars().count() + 1);
                    let mut ts = Tokens::from_tokens(toks[3..].to_vec(), end);
                    let result = sig.parse_tokens(&mut ts)?;
                    ts.finish()?;
                    let prev = steps.last().map(|s: &SeqStep| &s.result).or(start.as_ref());
                    let fits = prev.is_some_and(|p| {
                        p.get(&path).is_some() && result.get(&path).is_some_and(|y| p.replace(&path, y.clone()).as_ref() == Some(&result))
                    });
                    if !fits {
                        let msg = format!("step does not rewrite the previous formula at @{}", render_path(&path));
                        return Err(Error::parse(toks[2].line, toks[2].col, msg));
                    }
                    steps.push(SeqStep { rule: RuleRef::named(&toks[1].text), path, result });
                }
                other => return Err(Error::parse(head.line, head.col, format!("unexpected `{other}`"))),
            }
        }
        let start = start.ok_or_else(|| Error::parse(1, 1, "missing `start` line"))?;
        Ok((system, SeqDerivation { start, steps }))
    }
}
