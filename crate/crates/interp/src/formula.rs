//! Ordinary formulae: constants, signed atoms and non-atom connectives.

use subatomic_core::lex::Tokens;
use subatomic_core::term::Symbol;
use subatomic_core::{ConnId, ConstId, Dir, Error, Path, Signature};

/// A formula of the ordinary logic, over the constants and connectives of a
/// subatomic signature. `Atom(a, true)` is `a`, `Atom(a, false)` is `~a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrdinaryFormula {
    Const(ConstId),
    Atom(ConnId, bool),
    App(ConnId, Box<OrdinaryFormula>, Box<OrdinaryFormula>),
}

impl OrdinaryFormula {
    pub fn app(c: ConnId, l: OrdinaryFormula, r: OrdinaryFormula) -> OrdinaryFormula {
        OrdinaryFormula::App(c, Box::new(l), Box::new(r))
    }

    pub fn size(&self) -> usize {
        match self {
            OrdinaryFormula::App(_, l, r) => 1 + l.size() + r.size(),
            _ => 1,
        }
    }

    pub fn get(&self, path: &[Dir]) -> Option<&OrdinaryFormula> {
        let mut cur = self;
        for d in path {
            cur = match (cur, d) {
                (OrdinaryFormula::App(_, l, _), Dir::L) => l,
                (OrdinaryFormula::App(_, _, r), Dir::R) => r,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn replace(&self, path: &[Dir], new: OrdinaryFormula) -> Option<OrdinaryFormula> {
        let Some((d, rest)) = path.split_first() else { return Some(new) };
        match self {
            OrdinaryFormula::App(c, l, r) => Some(match d {
                Dir::L => OrdinaryFormula::app(*c, l.replace(rest, new)?, (**r).clone()),
                Dir::R => OrdinaryFormula::app(*c, (**l).clone(), r.replace(rest, new)?),
            }),
            _ => None,
        }
    }

    /// The deepest path below which `self` and `other` agree.
    pub fn diff_path(&self, other: &OrdinaryFormula) -> Option<Path> {
        if self == other {
            return None;
        }
        let mut path = Vec::new();
        let (mut a, mut b) = (self, other);
        while let (OrdinaryFormula::App(c, l, r), OrdinaryFormula::App(d, l2, r2)) = (a, b) {
            if c != d || (l != l2) == (r != r2) {
                break;
            }
            if l != l2 {
                path.push(Dir::L);
                (a, b) = (l, l2);
            } else {
                path.push(Dir::R);
                (a, b) = (r, r2);
            }
        }
        Some(path)
    }

    pub fn negate(&self, sig: &Signature) -> OrdinaryFormula {
        match self {
            OrdinaryFormula::Const(c) => OrdinaryFormula::Const(sig.neg_const(*c)),
            OrdinaryFormula::Atom(a, pos) => OrdinaryFormula::Atom(*a, !pos),
            OrdinaryFormula::App(c, l, r) => OrdinaryFormula::app(sig.dual(*c), l.negate(sig), r.negate(sig)),
        }
    }

    pub fn render(&self, sig: &Signature) -> String {
        match self {
            OrdinaryFormula::Const(c) => sig.const_name(*c).to_string(),
            OrdinaryFormula::Atom(a, true) => sig.conn_name(*a).to_string(),
            OrdinaryFormula::Atom(a, false) => format!("~{}", sig.conn_name(*a)),
            OrdinaryFormula::App(c, l, r) => format!("({} {} {})", l.render(sig), sig.conn_name(*c), r.render(sig)),
        }
    }

    pub fn parse(text: &str, sig: &Signature) -> subatomic_core::Result<OrdinaryFormula> {
        let mut toks = Tokens::new(text);
        let f = Self::parse_tokens(&mut toks, sig)?;
        toks.finish()?;
        Ok(f)
    }

    pub fn parse_tokens(toks: &mut Tokens, sig: &Signature) -> subatomic_core::Result<OrdinaryFormula> {
        let t = toks.next()?;
        if t.text == "(" {
            let l = Self::parse_tokens(toks, sig)?;
            let ct = toks.next()?;
            let conn = match sig.lookup(&ct.text) {
                Some(Symbol::Conn(c)) if !sig.conn(c).is_atom => c,
                _ => return Err(Error::parse(ct.line, ct.col, format!("`{}` is not an ordinary connective", ct.text))),
            };
            let r = Self::parse_tokens(toks, sig)?;
            toks.expect(")")?;
            return Ok(OrdinaryFormula::app(conn, l, r));
        }
        let (name, pos) = match t.text.strip_prefix('~') {
            Some(rest) => (rest, false),
            None => (t.text.as_str(), true),
        };
        match sig.lookup(name) {
            Some(Symbol::Conn(a)) if sig.conn(a).is_atom => Ok(OrdinaryFormula::Atom(a, pos)),
            Some(Symbol::Const(c)) if pos => Ok(OrdinaryFormula::Const(c)),
            _ => Err(Error::parse(t.line, t.col, format!("`{}` is not a constant or atom", t.text))),
        }
    }
}
