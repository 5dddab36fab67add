//! Proof-system definitions: documents, built-ins, rule schemes, rule
//! matching and the splittability lint.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lex::tokenize;
use crate::term::{ConnDecl, ConnId, ConstId, Formula, Path, Polarity, Signature, Symbol};
use crate::theory::{Subset, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Down,
    Up,
}

/// A connective position in a rule scheme: a fixed connective or any atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConnRef {
    Conn(ConnId),
    Atom,
}

impl ConnRef {
    pub fn admits(self, c: ConnId, sig: &Signature) -> bool {
        match self {
            ConnRef::Conn(d) => d == c,
            ConnRef::Atom => sig.conn(c).is_atom,
        }
    }

    pub fn render(self, sig: &Signature) -> String {
        match self {
            ConnRef::Conn(c) => sig.conn_name(c).to_string(),
            ConnRef::Atom => "@atom".to_string(),
        }
    }
}

/// A medial-shaped rule.
///
/// Down: `((A β B) α (C β D)) → ((A α C) β (B αᵐ D))`.
/// Up: `((A β B) α (C βᴹ D)) → ((A α C) β (B α D))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleScheme {
    pub name: String,
    pub kind: RuleKind,
    pub alpha: ConnRef,
    pub beta: ConnRef,
}

/// The metavariable assignment of a rule instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub alpha: ConnId,
    pub beta: ConnId,
    pub a: Formula,
    pub b: Formula,
    pub c: Formula,
    pub d: Formula,
}

/// A rule reference inside a derivation: a named scheme or theory equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleRef {
    Eq,
    Named(String),
}

impl RuleRef {
    pub fn named(s: &str) -> RuleRef {
        if s == "=" {
            RuleRef::Eq
        } else {
            RuleRef::Named(s.to_string())
        }
    }

    pub fn is_eq(&self) -> bool {
        matches!(self, RuleRef::Eq)
    }

    pub fn as_str(&self) -> &str {
        match self {
            RuleRef::Eq => "=",
            RuleRef::Named(s) => s,
        }
    }
}

impl fmt::Display for RuleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl RuleScheme {
    /// Matches `premiss → conclusion` structurally against the scheme.
    pub fn matches(&self, sig: &Signature, premiss: &Formula, conclusion: &Formula) -> Option<Instance> {
        let inst = self.match_premiss(sig, premiss)?;
        if self.conclusion_of(sig, &inst) == *conclusion {
            Some(inst)
        } else {
            None
        }
    }

    pub fn match_premiss(&self, sig: &Signature, premiss: &Formula) -> Option<Instance> {
        let Formula::App(alpha, l, r) = premiss else { return None };
        let (Formula::App(beta, a, b), Formula::App(beta2, c, d)) = (&**l, &**r) else { return None };
        if !self.alpha.admits(*alpha, sig) || !self.beta.admits(*beta, sig) {
            return None;
        }
        let want = match self.kind {
            RuleKind::Down => *beta,
            RuleKind::Up => sig.strong(*beta),
        };
        if *beta2 != want {
            return None;
        }
        Some(Instance {
            alpha: *alpha,
            beta: *beta,
            a: (**a).clone(),
            b: (**b).clone(),
            c: (**c).clone(),
            d: (**d).clone(),
        })
    }

    pub fn match_conclusion(&self, sig: &Signature, conclusion: &Formula) -> Option<Instance> {
        let Formula::App(beta, l, r) = conclusion else { return None };
        let (Formula::App(alpha, a, c), Formula::App(alpha2, b, d)) = (&**l, &**r) else { return None };
        if !self.alpha.admits(*alpha, sig) || !self.beta.admits(*beta, sig) {
            return None;
        }
        let want = match self.kind {
            RuleKind::Down => sig.weak(*alpha),
            RuleKind::Up => *alpha,
        };
        if *alpha2 != want {
            return None;
        }
        Some(Instance {
            alpha: *alpha,
            beta: *beta,
            a: (**a).clone(),
            b: (**b).clone(),
            c: (**c).clone(),
            d: (**d).clone(),
        })
    }

    pub fn premiss_of(&self, sig: &Signature, i: &Instance) -> Formula {
        let beta2 = match self.kind {
            RuleKind::Down => i.beta,
            RuleKind::Up => sig.strong(i.beta),
        };
        Formula::app(
            i.alpha,
            Formula::app(i.beta, i.a.clone(), i.b.clone()),
            Formula::app(beta2, i.c.clone(), i.d.clone()),
        )
    }

    pub fn conclusion_of(&self, sig: &Signature, i: &Instance) -> Formula {
        let alpha2 = match self.kind {
            RuleKind::Down => sig.weak(i.alpha),
            RuleKind::Up => i.alpha,
        };
        Formula::app(
            i.beta,
            Formula::app(i.alpha, i.a.clone(), i.c.clone()),
            Formula::app(alpha2, i.b.clone(), i.d.clone()),
        )
    }

    pub fn render(&self, sig: &Signature) -> String {
        format!(
            "rule {} {} alpha={} beta={}",
            self.name,
            if self.kind == RuleKind::Down { "down" } else { "up" },
            self.alpha.render(sig),
            self.beta.render(sig)
        )
    }
}

#[derive(Debug, Clone)]
pub struct SystemDef {
    pub name: String,
    pub sig: Arc<Signature>,
    pub theory: Theory,
    pub rules: Vec<RuleScheme>,
    pub one: ConstId,
    pub times: Option<ConnId>,
    pub plus: Option<ConnId>,
}

/// Verdict for one splittability condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub condition: u8,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintReport {
    pub system: String,
    pub verdicts: Vec<Verdict>,
}

impl LintReport {
    pub fn passes(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failed(&self) -> Vec<u8> {
        self.verdicts.iter().filter(|v| !v.pass).map(|v| v.condition).collect()
    }
}

impl fmt::Display for LintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            write!(f, "condition {}: {}", v.condition, if v.pass { "pass" } else { "fail" })?;
            if !v.witnesses.is_empty() {
                write!(f, " ({})", v.witnesses.join("; "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub const BUILTIN_NAMES: [&str; 8] = ["saks.down", "saks", "samlls.down", "samlls", "sabvu.down", "sabvu", "sabv.down", "sabv"];

const CLASSICAL: &str = "\
# classical logic: atoms as superpositions of the truth values f and t
constants f t
one t
negation f <-> t
connective and dual=or polarity=strong assoc comm unit=t
connective or dual=and polarity=weak assoc comm unit=f
atoms a b c d
times and
assign and f f = f
assign @atom f f = f
rule atom.down down alpha=@atom beta=or
rule and.down down alpha=and beta=or
";

const CLASSICAL_UP: &str = "\
rule atom.up up alpha=and beta=@atom
rule or.up up alpha=and beta=or
rule m down alpha=or beta=and
rule atom.c down alpha=or beta=@atom
rule atom.cbar down alpha=@atom beta=and
";

const MLL: &str = "\
# multiplicative linear logic
constants one bot
one one
negation one <-> bot
connective ten dual=par polarity=strong assoc comm unit=one
connective par dual=ten polarity=weak assoc comm unit=bot
atoms a b c d
times ten
assign @atom bot bot = bot
rule atom.down down alpha=@atom beta=par
rule ten.down down alpha=ten beta=par
";

const MLL_UP: &str = "\
rule atom.up up alpha=ten beta=@atom
rule par.up up alpha=ten beta=par
";

const BVU: &str = "\
# BV with three distinct units
constants one bot o
one one
negation one <-> bot
negation o <-> o
connective ten dual=par polarity=strong assoc comm unit=one
connective par dual=ten polarity=weak assoc comm unit=bot
connective seq dual=seq polarity=both assoc unit=o
atoms a b c d
times ten
assign par o o = one
assign @atom one one = one
assign seq one one = one
rule atom.down down alpha=@atom beta=par
rule ten.down down alpha=ten beta=par
rule seq.down down alpha=seq beta=par
";

const BVU_UP: &str = "\
rule atom.up up alpha=ten beta=@atom
rule par.up up alpha=ten beta=par
rule seq.up up alpha=ten beta=seq
";

const BV_IDENTIFY: &str = "\
identify one = o
";

/// The document text of a built-in system.
pub fn builtin_source(name: &str) -> Option<String> {
    let (body, extra): (&str, &[&str]) = match name {
        "saks.down" => (CLASSICAL, &[]),
        "saks" => (CLASSICAL, &[CLASSICAL_UP]),
        "samlls.down" => (MLL, &[]),
        "samlls" => (MLL, &[MLL_UP]),
        "sabvu.down" => (BVU, &[]),
        "sabvu" => (BVU, &[BVU_UP]),
        "sabv.down" => (BVU, &[BV_IDENTIFY]),
        "sabv" => (BVU, &[BVU_UP, BV_IDENTIFY]),
        _ => return None,
    };
    let mut s = format!("system {name}\n{body}");
    for e in extra {
        s.push_str(e);
    }
    Some(s)
}

pub fn builtin(name: &str) -> Result<SystemDef> {
    let src = builtin_source(name).ok_or_else(|| Error::System(format!("unknown built-in system `{name}`")))?;
    load_system(&src)
}

/// Loads a built-in by name, or parses `text_or_name` as a document.
pub fn resolve(text_or_name: &str) -> Result<SystemDef> {
    if builtin_source(text_or_name).is_some() {
        builtin(text_or_name)
    } else {
        load_system(text_or_name)
    }
}

enum RawRule {
    Scheme { name: String, kind: RuleKind, alpha: String, beta: String, line: usize, col: usize },
}

struct RawAssign {
    conn: String,
    v: String,
    w: String,
    u: String,
    line: usize,
    col: usize,
}

pub fn load_system(text: &str) -> Result<SystemDef> {
    let mut name = None;
    let mut consts: Vec<String> = Vec::new();
    let mut one = None;
    let mut negations = Vec::new();
    let mut decls: Vec<ConnDecl> = Vec::new();
    let mut times = None;
    let mut assigns = Vec::new();
    let mut idents = Vec::new();
    let mut rules = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let toks = tokenize(line, line_no);
        let Some(head) = toks.first() else { continue };
        let args: Vec<&str> = toks[1..].iter().map(|t| t.text.as_str()).collect();
        let err = |k: usize, msg: String| {
            let t = toks.get(k).unwrap_or(&toks[toks.len() - 1]);
            Error::parse(t.line, t.col, msg)
        };
        match head.text.as_str() {
            "system" => {
                if args.len() != 1 {
                    return Err(err(0, "expected `system <name>`".into()));
                }
                name = Some(args[0].to_string());
            }
            "constants" => {
                if args.is_empty() {
                    return Err(err(0, "expected at least one constant".into()));
                }
                consts.extend(args.iter().map(|s| s.to_string()));
            }
            "one" => {
                if args.len() != 1 {
                    return Err(err(0, "expected `one <constant>`".into()));
                }
                one = Some((args[0].to_string(), toks[1].line, toks[1].col));
            }
            "negation" => {
                if args.len() != 3 || args[1] != "<->" {
                    return Err(err(0, "expected `negation <constant> <-> <constant>`".into()));
                }
                negations.push((args[0].to_string(), args[2].to_string()));
            }
            "connective" => {
                if args.is_empty() {
                    return Err(err(0, "expected a connective name".into()));
                }
                let mut d = ConnDecl {
                    name: args[0].to_string(),
                    dual: String::new(),
                    polarity: Polarity::Strong,
                    is_atom: false,
                    assoc: false,
                    comm: false,
                    unit: None,
                };
                let mut has_pol = false;
                for (k, a) in args.iter().enumerate().skip(1) {
                    if let Some(v) = a.strip_prefix("dual=") {
                        d.dual = v.to_string();
                    } else if let Some(v) = a.strip_prefix("polarity=") {
                        d.polarity = Polarity::parse(v).ok_or_else(|| err(k + 1, format!("unknown polarity `{v}`")))?;
                        has_pol = true;
                    } else if let Some(v) = a.strip_prefix("unit=") {
                        d.unit = Some(v.to_string());
                    } else if *a == "assoc" {
                        d.assoc = true;
                    } else if *a == "comm" {
                        d.comm = true;
                    } else {
                        return Err(err(k + 1, format!("unknown connective attribute `{a}`")));
                    }
                }
                if d.dual.is_empty() || !has_pol {
                    return Err(err(0, "a connective needs `dual=` and `polarity=`".into()));
                }
                decls.push(d);
            }
            "atoms" => {
                for a in &args {
                    decls.push(ConnDecl {
                        name: a.to_string(),
                        dual: a.to_string(),
                        polarity: Polarity::Both,
                        is_atom: true,
                        assoc: false,
                        comm: false,
                        unit: None,
                    });
                }
            }
            "times" => {
                if args.len() != 1 {
                    return Err(err(0, "expected `times <connective>`".into()));
                }
                times = Some((args[0].to_string(), toks[1].line, toks[1].col));
            }
            "assign" => {
                if args.len() != 5 || args[3] != "=" {
                    return Err(err(0, "expected `assign <conn> <const> <const> = <const>`".into()));
                }
                assigns.push(RawAssign {
                    conn: args[0].to_string(),
                    v: args[1].to_string(),
                    w: args[2].to_string(),
                    u: args[4].to_string(),
                    line: toks[1].line,
                    col: toks[1].col,
                });
            }
            "identify" => {
                if args.len() != 3 || args[1] != "=" {
                    return Err(err(0, "expected `identify <const> = <const>`".into()));
                }
                idents.push((args[0].to_string(), args[2].to_string(), toks[1].line, toks[1].col));
            }
            "rule" => {
                if args.len() != 4 {
                    return Err(err(0, "expected `rule <name> <down|up> alpha=<conn> beta=<conn>`".into()));
                }
                let kind = match args[1] {
                    "down" => RuleKind::Down,
                    "up" => RuleKind::Up,
                    other => return Err(err(2, format!("rule kind must be `down` or `up`, found `{other}`"))),
                };
                let alpha = args[2].strip_prefix("alpha=").ok_or_else(|| err(3, "expected `alpha=<conn>`".into()))?;
                let beta = args[3].strip_prefix("beta=").ok_or_else(|| err(4, "expected `beta=<conn>`".into()))?;
                rules.push(RawRule::Scheme {
                    name: args[0].to_string(),
                    kind,
                    alpha: alpha.to_string(),
                    beta: beta.to_string(),
                    line: toks[1].line,
                    col: toks[1].col,
                });
            }
            other => return Err(err(0, format!("unknown declaration `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| Error::parse(1, 1, "missing `system <name>` line"))?;
    let sig = Arc::new(Signature::build(&consts, &negations, &decls)?);
    let (one_name, l, c) = one.ok_or_else(|| Error::System("missing `one <constant>` declaration".into()))?;
    let one = sig.constant(&one_name).map_err(|e| Error::parse(l, c, e.to_string()))?;
    let times = match times {
        Some((t, l, c)) => {
            let id = sig.connective(&t).map_err(|e| Error::parse(l, c, e.to_string()))?;
            if sig.conn(id).polarity != Polarity::Strong {
                return Err(Error::System(format!("the distinguished connective `{t}` must be strong")));
            }
            Some(id)
        }
        None => None,
    };
    let plus = times.map(|t| sig.dual(t));

    let conn_ref = |s: &str, l: usize, c: usize| -> Result<ConnRef> {
        if s == "@atom" {
            return Ok(ConnRef::Atom);
        }
        sig.connective(s).map(ConnRef::Conn).map_err(|e| Error::parse(l, c, e.to_string()))
    };
    let mut assignments = Vec::new();
    for a in &assigns {
        let g = conn_ref(&a.conn, a.line, a.col)?;
        let cst = |s: &str| sig.constant(s).map_err(|e| Error::parse(a.line, a.col, e.to_string()));
        let (v, w, u) = (cst(&a.v)?, cst(&a.w)?, cst(&a.u)?);
        match g {
            ConnRef::Conn(g) => assignments.push((g, v, w, u)),
            ConnRef::Atom => {
                for at in sig.atoms() {
                    assignments.push((at, v, w, u));
                }
            }
        }
    }
    let mut identifications = Vec::new();
    for (a, b, l, c) in &idents {
        let x = sig.constant(a).map_err(|e| Error::parse(*l, *c, e.to_string()))?;
        let y = sig.constant(b).map_err(|e| Error::parse(*l, *c, e.to_string()))?;
        identifications.push((x, y));
    }
    let theory = Theory::new(sig.clone(), &assignments, &identifications, plus)?;

    let mut schemes: Vec<RuleScheme> = Vec::new();
    for r in rules {
        let RawRule::Scheme { name, kind, alpha, beta, line, col } = r;
        if name == "=" || schemes.iter().any(|s| s.name == name) {
            return Err(Error::parse(line, col, format!("rule name `{name}` is reserved or declared twice")));
        }
        schemes.push(RuleScheme { name, kind, alpha: conn_ref(&alpha, line, col)?, beta: conn_ref(&beta, line, col)? });
    }
    if let Some(Symbol::Conn(_)) = sig.lookup("@atom") {
        return Err(Error::System("`@atom` is reserved".into()));
    }
    Ok(SystemDef { name, sig, theory, rules: schemes, one, times, plus })
}

impl SystemDef {
    pub fn rule(&self, name: &str) -> Option<&RuleScheme> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn one_formula(&self) -> Formula {
        Formula::Const(self.one)
    }

    pub fn zero(&self) -> Option<ConstId> {
        self.plus.and_then(|p| self.sig.conn(p).unit)
    }

    pub fn equal(&self, a: &Formula, b: &Formula) -> bool {
        self.theory.equal(a, b, Subset::Full)
    }

    /// The deepest position at which `a` and `b` differ and their subformulae are equal.
    pub fn eq_path(&self, a: &Formula, b: &Formula) -> Option<Path> {
        let mut p = a.diff_path(b)?;
        while !p.is_empty() && !self.equal(a.get(&p).unwrap(), b.get(&p).unwrap()) {
            p.pop();
        }
        Some(p)
    }

    pub fn equal_plus(&self, a: &Formula, b: &Formula) -> bool {
        self.plus.is_some() && self.theory.equal(a, b, Subset::PlusOnly)
    }

    pub fn parse(&self, text: &str) -> Result<Formula> {
        self.sig.parse(text)
    }

    pub fn render(&self, f: &Formula) -> String {
        self.sig.render(f)
    }

    /// The down rule `((A + B) α (C + D)) → ((A α C) + (B αᵐ D))` for `alpha`.
    pub fn down_rule(&self, alpha: ConnId) -> Option<&RuleScheme> {
        let plus = self.plus?;
        let exact = self.rules.iter().find(|r| {
            r.kind == RuleKind::Down && r.alpha == ConnRef::Conn(alpha) && r.beta == ConnRef::Conn(plus)
        });
        exact.or_else(|| {
            self.rules.iter().find(|r| {
                r.kind == RuleKind::Down && r.alpha.admits(alpha, &self.sig) && r.beta == ConnRef::Conn(plus)
            })
        })
    }

    pub fn is_cut(&self, rule: &RuleScheme) -> bool {
        rule.kind == RuleKind::Up && self.times.is_some() && rule.alpha == ConnRef::Conn(self.times.unwrap())
    }

    /// The same system restricted to its down rules.
    pub fn down_fragment(&self) -> SystemDef {
        let mut s = self.clone();
        s.rules.retain(|r| r.kind == RuleKind::Down);
        s
    }

    pub fn lint(&self) -> LintReport {
        let sig = &self.sig;
        let mut verdicts = Vec::new();

        let mut w1 = Vec::new();
        match self.times {
            None => w1.push("no distinguished strong connective declared".to_string()),
            Some(t) => {
                let unit = sig.conn(t).unit;
                if !unit.is_some_and(|u| self.theory.rep(u) == self.theory.rep(self.one)) {
                    w1.push(format!("`{}` does not have unit `{}`", sig.conn_name(t), sig.const_name(self.one)));
                }
                let p = sig.dual(t);
                if sig.conn(p).polarity != Polarity::Weak || sig.conn(p).unit.is_none() {
                    w1.push(format!("dual `{}` is not a weak connective with a unit", sig.conn_name(p)));
                }
            }
        }
        verdicts.push(Verdict { condition: 1, pass: w1.is_empty(), witnesses: w1 });

        let mut w2 = Vec::new();
        if let Some(plus) = self.plus {
            for r in &self.rules {
                if r.kind != RuleKind::Down {
                    w2.push(format!("rule `{}` is not a down rule", r.name));
                } else if r.beta != ConnRef::Conn(plus) {
                    w2.push(format!("rule `{}` has inner connective `{}`", r.name, r.beta.render(sig)));
                }
            }
            for c in sig.conns() {
                if c == plus {
                    continue;
                }
                let n = self
                    .rules
                    .iter()
                    .filter(|r| r.kind == RuleKind::Down && r.beta == ConnRef::Conn(plus) && r.alpha.admits(c, sig))
                    .count();
                if n == 0 {
                    w2.push(format!("missing down rule for `{}`", sig.conn_name(c)));
                } else if n > 1 {
                    w2.push(format!("more than one down rule for `{}`", sig.conn_name(c)));
                }
            }
        } else {
            w2.push("no distinguished + connective".into());
        }
        verdicts.push(Verdict { condition: 2, pass: w2.is_empty(), witnesses: w2 });

        let mut w3 = Vec::new();
        if let Some(plus) = self.plus {
            for u in sig.consts() {
                let f = Formula::app(plus, Formula::Const(u), Formula::Const(sig.neg_const(u)));
                if !self.equal(&f, &self.one_formula()) {
                    w3.push(format!("u={}", sig.const_name(u)));
                }
            }
        } else {
            w3.push("no distinguished + connective".into());
        }
        verdicts.push(Verdict { condition: 3, pass: w3.is_empty(), witnesses: w3 });

        let mut w4 = Vec::new();
        if let Some(plus) = self.plus {
            let info = sig.conn(plus);
            if !info.assoc {
                w4.push(format!("`{}` is not associative", info.name));
            }
            if !info.comm {
                w4.push(format!("`{}` is not commutative", info.name));
            }
        } else {
            w4.push("no distinguished + connective".into());
        }
        verdicts.push(Verdict { condition: 4, pass: w4.is_empty(), witnesses: w4 });

        let mut w5 = Vec::new();
        let one = self.one_formula();
        for c in sig.conns() {
            let f = Formula::app(sig.strong(c), one.clone(), one.clone());
            if !self.equal(&f, &one) {
                w5.push(format!("alpha={}", sig.conn_name(c)));
            }
        }
        verdicts.push(Verdict { condition: 5, pass: w5.is_empty(), witnesses: w5 });

        LintReport { system: self.name.clone(), verdicts }
    }

    /// Renders the system back into document form.
    pub fn to_document(&self) -> String {
        let sig = &self.sig;
        let mut s = format!("system {}\n", self.name);
        s.push_str("constants");
        for c in sig.consts() {
            s.push(' ');
            s.push_str(sig.const_name(c));
        }
        s.push('\n');
        s.push_str(&format!("one {}\n", sig.const_name(self.one)));
        for c in sig.consts() {
            let n = sig.neg_const(c);
            if c <= n {
                s.push_str(&format!("negation {} <-> {}\n", sig.const_name(c), sig.const_name(n)));
            }
        }
        let atoms: Vec<_> = sig.atoms().collect();
        for c in sig.conns().filter(|c| !sig.conn(*c).is_atom) {
            let i = sig.conn(c);
            s.push_str(&format!("connective {} dual={} polarity={}", i.name, sig.conn_name(i.dual), i.polarity.as_str()));
            if i.assoc {
                s.push_str(" assoc");
            }
            if i.comm {
                s.push_str(" comm");
            }
            if let Some(u) = i.unit {
                s.push_str(&format!(" unit={}", sig.const_name(u)));
            }
            s.push('\n');
        }
        if !atoms.is_empty() {
            s.push_str("atoms");
            for a in &atoms {
                s.push(' ');
                s.push_str(sig.conn_name(*a));
            }
            s.push('\n');
        }
        if let Some(t) = self.times {
            s.push_str(&format!("times {}\n", sig.conn_name(t)));
        }
        for (g, v, w, u) in self.theory.assignments() {
            s.push_str(&format!(
                "assign {} {} {} = {}\n",
                sig.conn_name(g), sig.const_name(v), sig.const_name(w), sig.const_name(u)
            ));
        }
        for (a, b) in self.theory.identifications() {
            s.push_str(&format!("identify {} = {}\n", sig.const_name(a), sig.const_name(b)));
        }
        for r in &self.rules {
            s.push_str(&r.render(sig));
            s.push('\n');
        }
        s
    }
}

/// Free-standing form of [`RuleScheme::matches`].
pub fn match_rule_instance(sys: &SystemDef, rule: &RuleScheme, premiss: &Formula, conclusion: &Formula) -> Option<Instance> {
    rule.matches(&sys.sig, premiss, conclusion)
}
