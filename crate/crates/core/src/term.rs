//! Signatures, subatomic formulae, paths and one-hole contexts.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lex::Tokens;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstId(pub u32);

impl ConstId {
    /// Placeholder constant used for derivations with a hole. It obeys no axiom.
    pub const HOLE: ConstId = ConstId(u32::MAX);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Strong,
    Weak,
    Both,
}

impl Polarity {
    pub fn parse(s: &str) -> Option<Polarity> {
        match s {
            "strong" => Some(Polarity::Strong),
            "weak" => Some(Polarity::Weak),
            "both" => Some(Polarity::Both),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Strong => "strong",
            Polarity::Weak => "weak",
            Polarity::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectiveInfo {
    pub name: String,
    pub dual: ConnId,
    pub polarity: Polarity,
    pub is_atom: bool,
    pub assoc: bool,
    pub comm: bool,
    pub unit: Option<ConstId>,
}

/// A connective declaration before names are resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnDecl {
    pub name: String,
    pub dual: String,
    pub polarity: Polarity,
    pub is_atom: bool,
    pub assoc: bool,
    pub comm: bool,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Const(ConstId),
    Conn(ConnId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    consts: Vec<String>,
    const_neg: Vec<ConstId>,
    conns: Vec<ConnectiveInfo>,
    lookup: HashMap<String, Symbol>,
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '(' || c == ')')
}

impl Signature {
    pub fn build(consts: &[String], negations: &[(String, String)], decls: &[ConnDecl]) -> Result<Signature> {
        let mut lookup = HashMap::new();
        for (i, c) in consts.iter().enumerate() {
            if !valid_token(c) {
                return Err(Error::Signature(format!("invalid constant token `{c}`")));
            }
            if lookup.insert(c.clone(), Symbol::Const(ConstId(i as u32))).is_some() {
                return Err(Error::Signature(format!("symbol `{c}` declared twice")));
            }
        }
        for (i, d) in decls.iter().enumerate() {
            if !valid_token(&d.name) {
                return Err(Error::Signature(format!("invalid connective token `{}`", d.name)));
            }
            if lookup.insert(d.name.clone(), Symbol::Conn(ConnId(i as u32))).is_some() {
                return Err(Error::Signature(format!("symbol `{}` declared twice", d.name)));
            }
        }
        let const_of = |name: &str| match lookup.get(name) {
            Some(Symbol::Const(c)) => Ok(*c),
            _ => Err(Error::Signature(format!("`{name}` is not a declared constant"))),
        };
        let conn_of = |name: &str| match lookup.get(name) {
            Some(Symbol::Conn(c)) => Ok(*c),
            _ => Err(Error::Signature(format!("`{name}` is not a declared connective"))),
        };

        let mut neg: Vec<Option<ConstId>> = vec![None; consts.len()];
        for (a, b) in negations {
            let (x, y) = (const_of(a)?, const_of(b)?);
            for (p, q) in [(x, y), (y, x)] {
                match neg[p.0 as usize] {
                    Some(old) if old != q => {
                        return Err(Error::Signature(format!(
                            "negation of `{}` declared both as `{}` and `{}`",
                            consts[p.0 as usize], consts[old.0 as usize], consts[q.0 as usize]
                        )))
                    }
                    _ => neg[p.0 as usize] = Some(q),
                }
            }
        }
        let mut const_neg = Vec::with_capacity(consts.len());
        for (i, n) in neg.iter().enumerate() {
            match n {
                Some(c) => const_neg.push(*c),
                None => return Err(Error::Signature(format!("constant `{}` has no negation", consts[i]))),
            }
        }

        let mut conns = Vec::with_capacity(decls.len());
        for d in decls {
            let unit = match &d.unit {
                Some(u) => Some(const_of(u)?),
                None => None,
            };
            conns.push(ConnectiveInfo {
                name: d.name.clone(),
                dual: conn_of(&d.dual)?,
                polarity: d.polarity,
                is_atom: d.is_atom,
                assoc: d.assoc,
                comm: d.comm,
                unit,
            });
        }
        for i in 0..conns.len() {
            let c = &conns[i];
            let dual = &conns[c.dual.0 as usize];
            if conns[dual.dual.0 as usize].name != c.name {
                return Err(Error::Signature(format!(
                    "dual is not involutive: dual({}) = {} but dual({}) = {}",
                    c.name, dual.name, dual.name, conns[dual.dual.0 as usize].name
                )));
            }
            let self_dual = c.dual.0 as usize == i;
            if self_dual != (c.polarity == Polarity::Both) {
                return Err(Error::Signature(format!(
                    "connective `{}` must have polarity=both exactly when it is self-dual",
                    c.name
                )));
            }
            if !self_dual && c.polarity == dual.polarity {
                return Err(Error::Signature(format!(
                    "connectives `{}` and `{}` form a dual pair but have the same polarity",
                    c.name, dual.name
                )));
            }
            if c.is_atom && (c.assoc || c.comm || c.unit.is_some() || !self_dual) {
                return Err(Error::Signature(format!(
                    "atom `{}` must be self-dual, non-associative, non-commutative and without unit",
                    c.name
                )));
            }
        }
        // Complete the pairwise attributes so that the theory is closed under negation.
        for i in 0..conns.len() {
            let j = conns[i].dual.0 as usize;
            let assoc = conns[i].assoc || conns[j].assoc;
            let comm = conns[i].comm || conns[j].comm;
            conns[i].assoc = assoc;
            conns[i].comm = comm;
            conns[j].assoc = assoc;
            conns[j].comm = comm;
            if let Some(u) = conns[i].unit {
                let nu = const_neg[u.0 as usize];
                match conns[j].unit {
                    None => conns[j].unit = Some(nu),
                    Some(v) if v != nu => {
                        return Err(Error::Signature(format!(
                            "unit of `{}` is `{}`, so the unit of its dual `{}` must be `{}`, not `{}`",
                            conns[i].name, consts[u.0 as usize], conns[j].name,
                            consts[nu.0 as usize], consts[v.0 as usize]
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Signature { consts: consts.to_vec(), const_neg, conns, lookup })
    }

    pub fn num_consts(&self) -> usize {
        self.consts.len()
    }

    pub fn num_conns(&self) -> usize {
        self.conns.len()
    }

    pub fn consts(&self) -> impl Iterator<Item = ConstId> {
        (0..self.consts.len() as u32).map(ConstId)
    }

    pub fn conns(&self) -> impl Iterator<Item = ConnId> {
        (0..self.conns.len() as u32).map(ConnId)
    }

    pub fn const_name(&self, c: ConstId) -> &str {
        if c == ConstId::HOLE {
            "hole"
        } else {
            &self.consts[c.0 as usize]
        }
    }

    pub fn conn(&self, c: ConnId) -> &ConnectiveInfo {
        &self.conns[c.0 as usize]
    }

    pub fn conn_name(&self, c: ConnId) -> &str {
        &self.conns[c.0 as usize].name
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.lookup.get(name).copied()
    }

    pub fn constant(&self, name: &str) -> Result<ConstId> {
        match self.lookup(name) {
            Some(Symbol::Const(c)) => Ok(c),
            _ => Err(Error::Signature(format!("`{name}` is not a declared constant"))),
        }
    }

    pub fn connective(&self, name: &str) -> Result<ConnId> {
        match self.lookup(name) {
            Some(Symbol::Conn(c)) => Ok(c),
            _ => Err(Error::Signature(format!("`{name}` is not a declared connective"))),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = ConnId> + '_ {
        self.conns().filter(|c| self.conn(*c).is_atom)
    }

    pub fn neg_const(&self, c: ConstId) -> ConstId {
        if c == ConstId::HOLE {
            c
        } else {
            self.const_neg[c.0 as usize]
        }
    }

    pub fn dual(&self, c: ConnId) -> ConnId {
        self.conn(c).dual
    }

    /// The strong connective of the dual pair containing `c`.
    pub fn strong(&self, c: ConnId) -> ConnId {
        match self.conn(c).polarity {
            Polarity::Weak => self.dual(c),
            _ => c,
        }
    }

    /// The weak connective of the dual pair containing `c`.
    pub fn weak(&self, c: ConnId) -> ConnId {
        match self.conn(c).polarity {
            Polarity::Strong => self.dual(c),
            _ => c,
        }
    }

    pub fn negate(&self, f: &Formula) -> Formula {
        match f {
            Formula::Const(c) => Formula::Const(self.neg_const(*c)),
            Formula::App(c, l, r) => Formula::app(self.dual(*c), self.negate(l), self.negate(r)),
        }
    }

    pub fn render(&self, f: &Formula) -> String {
        let mut s = String::new();
        self.render_into(f, &mut s);
        s
    }

    fn render_into(&self, f: &Formula, out: &mut String) {
        match f {
            Formula::Const(c) => out.push_str(self.const_name(*c)),
            Formula::App(c, l, r) => {
                out.push('(');
                self.render_into(l, out);
                out.push(' ');
                out.push_str(self.conn_name(*c));
                out.push(' ');
                self.render_into(r, out);
                out.push(')');
            }
        }
    }

    pub fn parse(&self, text: &str) -> Result<Formula> {
        let mut toks = Tokens::new(text);
        let f = self.parse_tokens(&mut toks)?;
        toks.finish()?;
        Ok(f)
    }

    pub fn parse_tokens(&self, toks: &mut Tokens) -> Result<Formula> {
        self.parse_inner(toks, false)
    }

    /// Parses a context: a formula in which the token `hole` occurs exactly once.
    pub fn parse_context(&self, text: &str) -> Result<Context> {
        let mut toks = Tokens::new(text);
        let f = self.parse_inner(&mut toks, true)?;
        toks.finish()?;
        let paths = f.const_paths(ConstId::HOLE);
        if paths.len() != 1 {
            return Err(Error::parse(1, 1, "a context must contain exactly one `hole`"));
        }
        Ok(Context::around(&f, &paths[0]).expect("hole path exists"))
    }

    fn parse_inner(&self, toks: &mut Tokens, allow_hole: bool) -> Result<Formula> {
        let t = toks.next()?;
        if t.text == "(" {
            let l = self.parse_inner(toks, allow_hole)?;
            let ct = toks.next()?;
            let conn = match self.lookup(&ct.text) {
                Some(Symbol::Conn(c)) => c,
                _ => return Err(Error::parse(ct.line, ct.col, format!("`{}` is not a declared connective", ct.text))),
            };
            let r = self.parse_inner(toks, allow_hole)?;
            toks.expect(")")?;
            return Ok(Formula::app(conn, l, r));
        }
        match self.lookup(&t.text) {
            Some(Symbol::Const(c)) => Ok(Formula::Const(c)),
            None if allow_hole && t.text == "hole" => Ok(Formula::Const(ConstId::HOLE)),
            _ => Err(Error::parse(t.line, t.col, format!("`{}` is not a declared constant", t.text))),
        }
    }
}

#[derive(Clone, Debug, Hash, PartialOrd, Ord)]
pub enum Formula {
    Const(ConstId),
    App(ConnId, Arc<Formula>, Arc<Formula>),
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Formula::Const(a), Formula::Const(b)) => a == b,
            (Formula::App(c, l, r), Formula::App(d, l2, r2)) => {
                c == d && (Arc::ptr_eq(l, l2) || l == l2) && (Arc::ptr_eq(r, r2) || r == r2)
            }
            _ => false,
        }
    }
}

impl Eq for Formula {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    L,
    R,
}

pub type Path = Vec<Dir>;

pub fn render_path(p: &[Dir]) -> String {
    if p.is_empty() {
        return ".".to_string();
    }
    p.iter().map(|d| if *d == Dir::L { "l" } else { "r" }).collect::<Vec<_>>().join(".")
}

pub fn parse_path(s: &str) -> Option<Path> {
    let s = s.strip_prefix('@').unwrap_or(s);
    if s == "." || s.is_empty() {
        return Some(Vec::new());
    }
    s.split('.')
        .map(|x| match x {
            "l" => Some(Dir::L),
            "r" => Some(Dir::R),
            _ => None,
        })
        .collect()
}

pub fn is_prefix(p: &[Dir], q: &[Dir]) -> bool {
    p.len() <= q.len() && q[..p.len()] == *p
}

pub fn join(p: &[Dir], q: &[Dir]) -> Path {
    let mut v = p.to_vec();
    v.extend_from_slice(q);
    v
}

impl Formula {
    pub fn app(c: ConnId, l: Formula, r: Formula) -> Formula {
        Formula::App(c, Arc::new(l), Arc::new(r))
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Formula::Const(_))
    }

    pub fn as_const(&self) -> Option<ConstId> {
        match self {
            Formula::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn conn(&self) -> Option<ConnId> {
        match self {
            Formula::App(c, _, _) => Some(*c),
            _ => None,
        }
    }

    pub fn is_app_of(&self, c: ConnId) -> bool {
        self.conn() == Some(c)
    }

    pub fn left(&self) -> Option<&Formula> {
        match self {
            Formula::App(_, l, _) => Some(l),
            _ => None,
        }
    }

    pub fn right(&self) -> Option<&Formula> {
        match self {
            Formula::App(_, _, r) => Some(r),
            _ => None,
        }
    }

    pub fn child(&self, d: Dir) -> Option<&Formula> {
        match d {
            Dir::L => self.left(),
            Dir::R => self.right(),
        }
    }

    /// Number of nodes (constants and connective applications).
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) => 1,
            Formula::App(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) => 0,
            Formula::App(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn get(&self, path: &[Dir]) -> Option<&Formula> {
        let mut f = self;
        for d in path {
            f = f.child(*d)?;
        }
        Some(f)
    }

    pub fn replace(&self, path: &[Dir], new: Formula) -> Option<Formula> {
        match path.split_first() {
            None => Some(new),
            Some((d, rest)) => match self {
                Formula::Const(_) => None,
                Formula::App(c, l, r) => Some(match d {
                    Dir::L => Formula::App(*c, Arc::new(l.replace(rest, new)?), r.clone()),
                    Dir::R => Formula::App(*c, l.clone(), Arc::new(r.replace(rest, new)?)),
                }),
            },
        }
    }

    /// The deepest path at which `self` and `other` differ, or `None` if identical.
    pub fn diff_path(&self, other: &Formula) -> Option<Path> {
        if self == other {
            return None;
        }
        let mut path = Vec::new();
        let (mut a, mut b) = (self, other);
        loop {
            match (a, b) {
                (Formula::App(c, l, r), Formula::App(d, l2, r2)) if c == d => {
                    let dl = l != l2;
                    let dr = r != r2;
                    if dl && !dr {
                        path.push(Dir::L);
                        a = l;
                        b = l2;
                    } else if dr && !dl {
                        path.push(Dir::R);
                        a = r;
                        b = r2;
                    } else {
                        return Some(path);
                    }
                }
                _ => return Some(path),
            }
        }
    }

    pub fn contains_const(&self, c: ConstId) -> bool {
        match self {
            Formula::Const(d) => *d == c,
            Formula::App(_, l, r) => l.contains_const(c) || r.contains_const(c),
        }
    }

    pub fn const_paths(&self, c: ConstId) -> Vec<Path> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(f: &Formula, c: ConstId, cur: &mut Path, out: &mut Vec<Path>) {
            match f {
                Formula::Const(d) => {
                    if *d == c {
                        out.push(cur.clone());
                    }
                }
                Formula::App(_, l, r) => {
                    cur.push(Dir::L);
                    go(l, c, cur, out);
                    cur.pop();
                    cur.push(Dir::R);
                    go(r, c, cur, out);
                    cur.pop();
                }
            }
        }
        go(self, c, &mut cur, &mut out);
        out
    }

    pub fn substitute(&self, c: ConstId, with: &Formula) -> Formula {
        match self {
            Formula::Const(d) if *d == c => with.clone(),
            Formula::Const(_) => self.clone(),
            Formula::App(k, l, r) => {
                if !self.contains_const(c) {
                    return self.clone();
                }
                Formula::app(*k, l.substitute(c, with), r.substitute(c, with))
            }
        }
    }

    /// All paths of nodes whose connective is `c`, pre-order.
    pub fn paths_of(&self, c: ConnId) -> Vec<Path> {
        let mut out = Vec::new();
        self.visit(&mut Vec::new(), &mut |p, f| {
            if f.is_app_of(c) {
                out.push(p.to_vec());
            }
        });
        out
    }

    /// Pre-order traversal with paths.
    pub fn visit(&self, path: &mut Path, f: &mut dyn FnMut(&[Dir], &Formula)) {
        f(path, self);
        if let Formula::App(_, l, r) = self {
            path.push(Dir::L);
            l.visit(path, f);
            path.pop();
            path.push(Dir::R);
            r.visit(path, f);
            path.pop();
        }
    }

    pub fn all_paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        self.visit(&mut Vec::new(), &mut |p, _| out.push(p.to_vec()));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub conn: ConnId,
    /// Side of the hole below this frame.
    pub dir: Dir,
    pub sibling: Formula,
}

/// A formula with exactly one hole. Frames are listed outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Context {
    pub frames: Vec<Frame>,
}

impl Context {
    pub fn hole() -> Context {
        Context { frames: Vec::new() }
    }

    pub fn is_hole(&self) -> bool {
        self.frames.is_empty()
    }

    /// The context of `f` around the subformula at `path`.
    pub fn around(f: &Formula, path: &[Dir]) -> Option<Context> {
        let mut frames = Vec::with_capacity(path.len());
        let mut cur = f;
        for d in path {
            match cur {
                Formula::App(c, l, r) => {
                    let (next, sib) = match d {
                        Dir::L => (l, r),
                        Dir::R => (r, l),
                    };
                    frames.push(Frame { conn: *c, dir: *d, sibling: (**sib).clone() });
                    cur = next;
                }
                Formula::Const(_) => return None,
            }
        }
        Some(Context { frames })
    }

    pub fn single(conn: ConnId, dir: Dir, sibling: Formula) -> Context {
        Context { frames: vec![Frame { conn, dir, sibling }] }
    }

    pub fn path(&self) -> Path {
        self.frames.iter().map(|f| f.dir).collect()
    }

    pub fn plug(&self, f: &Formula) -> Formula {
        let mut cur = f.clone();
        for fr in self.frames.iter().rev() {
            cur = match fr.dir {
                Dir::L => Formula::app(fr.conn, cur, fr.sibling.clone()),
                Dir::R => Formula::app(fr.conn, fr.sibling.clone(), cur),
            };
        }
        cur
    }

    /// `self{inner{·}}`.
    pub fn compose(&self, inner: &Context) -> Context {
        let mut frames = self.frames.clone();
        frames.extend(inner.frames.iter().cloned());
        Context { frames }
    }

    pub fn render(&self, sig: &Signature) -> String {
        sig.render(&self.plug(&Formula::Const(ConstId::HOLE)))
    }
}

pub struct Show<'a>(pub &'a Signature, pub &'a Formula);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render(self.1))
    }
}
