//! Equational theories and the decision procedure for theory equality.
//!
//! Canonical forms are computed by one list-normalization routine that can
//! optionally record every rewrite as a single axiom instance, so the same
//! code both decides equality and explains it.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::term::{ConnId, ConstId, Dir, Formula, Path, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subset {
    Full,
    /// Associativity, commutativity, unit and constant assignments of `+`.
    PlusOnly,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `((A γ B) γ C) → (A γ (B γ C))` when `to_right`, the converse otherwise.
    Assoc { conn: ConnId, to_right: bool },
    Comm { conn: ConnId },
    /// `side` is the position of the unit in the larger formula.
    Unit { conn: ConnId, side: Dir, intro: bool },
    Assign { conn: ConnId, intro: bool },
    Identify,
}

impl Axiom {
    pub fn inverse(self) -> Axiom {
        match self {
            Axiom::Assoc { conn, to_right } => Axiom::Assoc { conn, to_right: !to_right },
            Axiom::Comm { conn } => Axiom::Comm { conn },
            Axiom::Unit { conn, side, intro } => Axiom::Unit { conn, side, intro: !intro },
            Axiom::Assign { conn, intro } => Axiom::Assign { conn, intro: !intro },
            Axiom::Identify => Axiom::Identify,
        }
    }

    pub fn conn(self) -> Option<ConnId> {
        match self {
            Axiom::Assoc { conn, .. } | Axiom::Comm { conn } | Axiom::Unit { conn, .. } | Axiom::Assign { conn, .. } => {
                Some(conn)
            }
            Axiom::Identify => None,
        }
    }

    pub fn describe(self, sig: &Signature) -> String {
        match self {
            Axiom::Assoc { conn, .. } => format!("assoc({})", sig.conn_name(conn)),
            Axiom::Comm { conn } => format!("comm({})", sig.conn_name(conn)),
            Axiom::Unit { conn, .. } => format!("unit({})", sig.conn_name(conn)),
            Axiom::Assign { conn, .. } => format!("assign({})", sig.conn_name(conn)),
            Axiom::Identify => "identify".to_string(),
        }
    }
}

/// One single-axiom rewrite inside a larger formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqStep {
    pub path: Path,
    pub axiom: Axiom,
    pub result: Formula,
}

#[derive(Debug, Clone, Copy)]
enum Witness {
    Assign(ConstId),
    UnitRight,
    UnitLeft,
}

#[derive(Debug, Clone, Copy)]
struct FoldEntry {
    result: ConstId,
    first: ConstId,
    second: ConstId,
    swapped: bool,
    witness: Witness,
}

type FoldTable = rustc_hash::FxHashMap<(ConnId, ConstId, ConstId), FoldEntry>;

#[derive(Debug, Clone)]
pub struct Theory {
    sig: Arc<Signature>,
    assignments: BTreeMap<(ConnId, ConstId, ConstId), ConstId>,
    identifications: BTreeSet<(ConstId, ConstId)>,
    plus: Option<ConnId>,
    rep: Vec<ConstId>,
    id_adj: Vec<Vec<ConstId>>,
    full_fold: FoldTable,
    plus_fold: FoldTable,
}

impl Theory {
    /// Builds a theory from the connective attributes of `sig` plus the given
    /// constant assignments `(γ, v, w, u)` meaning `v γ w = u` and identifications.
    /// Both lists are closed under negation here.
    pub fn new(
        sig: Arc<Signature>,
        assignments: &[(ConnId, ConstId, ConstId, ConstId)],
        identifications: &[(ConstId, ConstId)],
        plus: Option<ConnId>,
    ) -> Result<Theory> {
        let mut table: BTreeMap<(ConnId, ConstId, ConstId), ConstId> = BTreeMap::new();
        for &(g, v, w, u) in assignments {
            let dual = (sig.dual(g), sig.neg_const(v), sig.neg_const(w), sig.neg_const(u));
            for (g, v, w, u) in [(g, v, w, u), dual] {
                if let Some(old) = table.insert((g, v, w), u) {
                    if old != u {
                        return Err(Error::Theory(format!(
                            "inconsistent constant algebra: `({} {} {})` is assigned both `{}` and `{}`",
                            sig.const_name(v), sig.conn_name(g), sig.const_name(w),
                            sig.const_name(old), sig.const_name(u)
                        )));
                    }
                }
            }
        }
        let mut ids = BTreeSet::new();
        for &(a, b) in identifications {
            if a != b {
                ids.insert((a.min(b), a.max(b)));
                let (na, nb) = (sig.neg_const(a), sig.neg_const(b));
                if na != nb {
                    ids.insert((na.min(nb), na.max(nb)));
                }
            }
        }
        let n = sig.num_consts();
        let mut id_adj = vec![Vec::new(); n];
        for &(a, b) in &ids {
            id_adj[a.0 as usize].push(b);
            id_adj[b.0 as usize].push(a);
        }
        let mut rep: Vec<ConstId> = (0..n as u32).map(ConstId).collect();
        for start in 0..n {
            if rep[start].0 as usize != start {
                continue;
            }
            let mut queue = VecDeque::from([ConstId(start as u32)]);
            let mut seen = HashSet::from([ConstId(start as u32)]);
            while let Some(c) = queue.pop_front() {
                rep[c.0 as usize] = ConstId(start as u32);
                for &d in &id_adj[c.0 as usize] {
                    if seen.insert(d) {
                        queue.push_back(d);
                    }
                }
            }
        }
        let mut th = Theory {
            sig,
            assignments: table,
            identifications: ids,
            plus,
            rep,
            id_adj,
            full_fold: FoldTable::default(),
            plus_fold: FoldTable::default(),
        };
        th.full_fold = th.build_fold(Subset::Full)?;
        if plus.is_some() {
            th.plus_fold = th.build_fold(Subset::PlusOnly)?;
        }
        th.check_confluence(Subset::Full)?;
        if plus.is_some() {
            th.check_confluence(Subset::PlusOnly)?;
        }
        Ok(th)
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn plus(&self) -> Option<ConnId> {
        self.plus
    }

    pub fn assignments(&self) -> impl Iterator<Item = (ConnId, ConstId, ConstId, ConstId)> + '_ {
        self.assignments.iter().map(|(&(g, v, w), &u)| (g, v, w, u))
    }

    pub fn identifications(&self) -> impl Iterator<Item = (ConstId, ConstId)> + '_ {
        self.identifications.iter().copied()
    }

    pub fn rep(&self, c: ConstId) -> ConstId {
        if c == ConstId::HOLE {
            c
        } else {
            self.rep[c.0 as usize]
        }
    }

    fn active(&self, g: ConnId, subset: Subset) -> bool {
        match subset {
            Subset::Full => true,
            Subset::PlusOnly => Some(g) == self.plus,
            Subset::Empty => false,
        }
    }

    fn const_rep(&self, c: ConstId, subset: Subset) -> ConstId {
        match subset {
            Subset::Full => self.rep(c),
            _ => c,
        }
    }

    fn unit_rep(&self, g: ConnId, subset: Subset) -> Option<ConstId> {
        self.sig.conn(g).unit.map(|u| self.const_rep(u, subset))
    }

    fn table(&self, subset: Subset) -> &FoldTable {
        match subset {
            Subset::PlusOnly => &self.plus_fold,
            _ => &self.full_fold,
        }
    }

    /// The value of `v γ w` in the constant algebra of `subset`, if any.
    pub fn fold_const(&self, g: ConnId, v: ConstId, w: ConstId, subset: Subset) -> Option<ConstId> {
        if !self.active(g, subset) {
            return None;
        }
        let (v, w) = (self.const_rep(v, subset), self.const_rep(w, subset));
        self.table(subset).get(&(g, v, w)).map(|e| e.result)
    }

    fn build_fold(&self, subset: Subset) -> Result<FoldTable> {
        let sig = &self.sig;
        let mut t = FoldTable::default();
        let put = |t: &mut FoldTable, g: ConnId, v: ConstId, w: ConstId, e: FoldEntry| -> Result<()> {
            match t.get(&(g, v, w)) {
                Some(old) if old.result != e.result => Err(Error::Theory(format!(
                    "inconsistent constant algebra: `({} {} {})` equals both `{}` and `{}`",
                    sig.const_name(v), sig.conn_name(g), sig.const_name(w),
                    sig.const_name(old.result), sig.const_name(e.result)
                ))),
                Some(_) => Ok(()),
                None => {
                    t.insert((g, v, w), e);
                    Ok(())
                }
            }
        };
        let r = |c: ConstId| self.const_rep(c, subset);
        for (&(g, a, b), &c) in &self.assignments {
            if !self.active(g, subset) {
                continue;
            }
            let e = FoldEntry { result: r(c), first: a, second: b, swapped: false, witness: Witness::Assign(c) };
            put(&mut t, g, r(a), r(b), e)?;
        }
        for g in sig.conns() {
            if !self.active(g, subset) {
                continue;
            }
            if let Some(u) = sig.conn(g).unit {
                for x in sig.consts() {
                    let e = FoldEntry { result: r(x), first: x, second: u, swapped: false, witness: Witness::UnitRight };
                    put(&mut t, g, r(x), r(u), e)?;
                    let e = FoldEntry { result: r(x), first: u, second: x, swapped: false, witness: Witness::UnitLeft };
                    put(&mut t, g, r(u), r(x), e)?;
                }
            }
        }
        let direct: Vec<_> = t.iter().map(|(k, e)| (*k, *e)).collect();
        for ((g, v, w), e) in direct {
            if sig.conn(g).comm {
                put(&mut t, g, w, v, FoldEntry { swapped: true, ..e })?;
            }
        }
        Ok(t)
    }

    /// Every order of folding a short constant expression must agree.
    fn check_confluence(&self, subset: Subset) -> Result<()> {
        let sig = &self.sig;
        let reps: Vec<ConstId> = {
            let mut v: Vec<ConstId> = sig.consts().map(|c| self.const_rep(c, subset)).collect();
            v.sort();
            v.dedup();
            v
        };
        let max_len = if reps.len() <= 6 { 4 } else { 3 };
        for g in sig.conns() {
            let info = sig.conn(g);
            if !self.active(g, subset) || !info.assoc {
                continue;
            }
            let mut seqs: Vec<Vec<ConstId>> = vec![Vec::new()];
            for len in 1..=max_len {
                seqs = seqs
                    .iter()
                    .flat_map(|s| reps.iter().map(move |c| {
                        let mut s = s.clone();
                        s.push(*c);
                        s
                    }))
                    .collect();
                if len < 3 {
                    continue;
                }
                let mut memo = HashMap::new();
                for s in &seqs {
                    let nfs = self.all_normal_forms(g, s.clone(), subset, &mut memo);
                    if nfs.len() > 1 {
                        let show = |v: &Vec<ConstId>| {
                            v.iter().map(|c| sig.const_name(*c).to_string()).collect::<Vec<_>>().join(" ")
                        };
                        return Err(Error::Theory(format!(
                            "constant algebra is not confluent for `{}` on [{}]: normal forms {}",
                            info.name,
                            show(s),
                            nfs.iter().map(|v| format!("[{}]", show(v))).collect::<Vec<_>>().join(", ")
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn all_normal_forms(
        &self,
        g: ConnId,
        s: Vec<ConstId>,
        subset: Subset,
        memo: &mut HashMap<Vec<ConstId>, BTreeSet<Vec<ConstId>>>,
    ) -> BTreeSet<Vec<ConstId>> {
        if let Some(r) = memo.get(&s) {
            return r.clone();
        }
        let comm = self.sig.conn(g).comm;
        let unit = self.unit_rep(g, subset);
        let mut succ = Vec::new();
        if s.len() > 1 {
            for i in 0..s.len() {
                if Some(s[i]) == unit {
                    let mut t = s.clone();
                    t.remove(i);
                    succ.push(t);
                }
            }
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if !comm && j != i + 1 {
                    continue;
                }
                if let Some(e) = self.table(subset).get(&(g, s[i], s[j])) {
                    let mut t = s.clone();
                    t.remove(j);
                    t[i] = e.result;
                    succ.push(t);
                }
            }
        }
        let mut out = BTreeSet::new();
        if succ.is_empty() {
            let mut k = s.clone();
            if comm {
                k.sort();
            }
            out.insert(k);
        } else {
            for t in succ {
                out.extend(self.all_normal_forms(g, t, subset, memo));
            }
        }
        memo.insert(s, out.clone());
        out
    }

    pub fn canonical(&self, f: &Formula, subset: Subset) -> Formula {
        let mut n = Normalizer { th: self, subset, tracer: None };
        n.norm(f, &mut Vec::new())
    }

    pub fn equal(&self, a: &Formula, b: &Formula, subset: Subset) -> bool {
        a == b || self.canonical(a, subset) == self.canonical(b, subset)
    }

    /// Rewrites `f` into its canonical form one axiom instance at a time.
    pub fn trace(&self, f: &Formula, subset: Subset) -> (Formula, Vec<EqStep>) {
        let mut n = Normalizer { th: self, subset, tracer: Some(Tracer { whole: f.clone(), steps: Vec::new() }) };
        let c = n.norm(f, &mut Vec::new());
        let t = n.tracer.expect("tracer present");
        debug_assert_eq!(t.whole, c);
        (c, t.steps)
    }

    /// A chain of single-axiom steps from `a` to `b`, if they are equal.
    pub fn explain(&self, a: &Formula, b: &Formula, subset: Subset) -> Option<Vec<EqStep>> {
        let (ca, mut steps) = self.trace(a, subset);
        let (cb, back) = self.trace(b, subset);
        if ca != cb {
            return None;
        }
        for i in (0..back.len()).rev() {
            let result = if i == 0 { b.clone() } else { back[i - 1].result.clone() };
            steps.push(EqStep { path: back[i].path.clone(), axiom: back[i].axiom.inverse(), result });
        }
        Some(steps)
    }

    /// The axiom `x = y` instantiates at the root, if `x` and `y` differ by exactly one.
    pub fn single_axiom(&self, x: &Formula, y: &Formula) -> Option<Axiom> {
        if let Some(a) = self.single_axiom_dir(x, y) {
            return Some(a);
        }
        self.single_axiom_dir(y, x).map(Axiom::inverse)
    }

    fn single_axiom_dir(&self, x: &Formula, y: &Formula) -> Option<Axiom> {
        match x {
            Formula::Const(c) => {
                let d = y.as_const()?;
                let key = ((*c).min(d), (*c).max(d));
                if c != &d && self.identifications.contains(&key) {
                    return Some(Axiom::Identify);
                }
                None
            }
            Formula::App(g, a, b) => {
                let info = self.sig.conn(*g);
                if info.comm {
                    if let Formula::App(h, c, d) = y {
                        if h == g && c == b && d == a {
                            return Some(Axiom::Comm { conn: *g });
                        }
                    }
                }
                if info.assoc {
                    if let (Formula::App(h, a1, a2), Formula::App(k, c, d)) = (&**a, y) {
                        if h == g && k == g {
                            if let Formula::App(m, d1, d2) = &**d {
                                if m == g && a1 == c && a2 == d1 && b == d2 {
                                    return Some(Axiom::Assoc { conn: *g, to_right: true });
                                }
                            }
                        }
                    }
                }
                if let Some(u) = info.unit {
                    if b.as_const() == Some(u) && **a == *y {
                        return Some(Axiom::Unit { conn: *g, side: Dir::R, intro: false });
                    }
                    if a.as_const() == Some(u) && **b == *y {
                        return Some(Axiom::Unit { conn: *g, side: Dir::L, intro: false });
                    }
                }
                if let (Some(v), Some(w), Some(u)) = (a.as_const(), b.as_const(), y.as_const()) {
                    if self.assignments.get(&(*g, v, w)) == Some(&u) {
                        return Some(Axiom::Assign { conn: *g, intro: false });
                    }
                }
                None
            }
        }
    }

    /// Whether `axiom` is one of the axioms of `+`.
    pub fn is_plus_axiom(&self, axiom: Axiom) -> bool {
        self.plus.is_some() && axiom.conn() == self.plus
    }

    /// The non-unit `+`-factors of `f` modulo the `+` axioms.
    pub fn plus_factors(&self, f: &Formula) -> Result<Vec<Formula>> {
        let plus = self.plus.ok_or_else(|| Error::Config("no distinguished + connective".into()))?;
        let c = self.canonical(f, Subset::PlusOnly);
        let unit = self.sig.conn(plus).unit;
        let mut out = Vec::new();
        let mut cur = &c;
        loop {
            match cur {
                Formula::App(g, l, r) if *g == plus => {
                    out.push((**l).clone());
                    cur = r;
                }
                other => {
                    if other.as_const().is_none() || other.as_const() != unit {
                        out.push(other.clone());
                    }
                    break;
                }
            }
        }
        Ok(out)
    }

    fn identify_route(&self, from: ConstId, to: ConstId) -> Vec<ConstId> {
        if from == to {
            return Vec::new();
        }
        let mut prev: HashMap<ConstId, ConstId> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        prev.insert(from, from);
        while let Some(c) = queue.pop_front() {
            if c == to {
                break;
            }
            for &d in &self.id_adj[c.0 as usize] {
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(d) {
                    e.insert(c);
                    queue.push_back(d);
                }
            }
        }
        let mut route = vec![to];
        let mut c = to;
        while prev[&c] != from {
            c = prev[&c];
            route.push(c);
        }
        route.reverse();
        route
    }
}

struct Tracer {
    whole: Formula,
    steps: Vec<EqStep>,
}

struct Normalizer<'a> {
    th: &'a Theory,
    subset: Subset,
    tracer: Option<Tracer>,
}

fn with(path: &[Dir], d: Dir) -> Path {
    let mut p = path.to_vec();
    p.push(d);
    p
}

fn spine(path: &[Dir], i: usize) -> Path {
    let mut p = path.to_vec();
    p.extend(std::iter::repeat(Dir::R).take(i));
    p
}

impl Normalizer<'_> {
    fn emit(&mut self, path: &[Dir], axiom: Axiom, sub: Formula) {
        if let Some(t) = &mut self.tracer {
            t.whole = t.whole.replace(path, sub).expect("traced path exists");
            t.steps.push(EqStep { path: path.to_vec(), axiom, result: t.whole.clone() });
        }
    }

    fn current(&self, path: &[Dir]) -> Formula {
        self.tracer.as_ref().expect("tracing").whole.get(path).expect("traced path exists").clone()
    }

    fn tracing(&self) -> bool {
        self.tracer.is_some()
    }

    fn identify(&mut self, path: &[Dir], from: ConstId, to: ConstId) {
        if !self.tracing() || from == to {
            return;
        }
        for c in self.th.identify_route(from, to) {
            self.emit(path, Axiom::Identify, Formula::Const(c));
        }
    }

    fn norm(&mut self, f: &Formula, path: &mut Path) -> Formula {
        match f {
            Formula::Const(c) => {
                let r = self.th.const_rep(*c, self.subset);
                self.identify(path, *c, r);
                Formula::Const(r)
            }
            Formula::App(g, l, r) => {
                path.push(Dir::L);
                let l2 = self.norm(l, path);
                path.pop();
                path.push(Dir::R);
                let r2 = self.norm(r, path);
                path.pop();
                if !self.th.active(*g, self.subset) {
                    return Formula::app(*g, l2, r2);
                }
                if self.th.sig.conn(*g).assoc {
                    self.norm_list(*g, l2, r2, path)
                } else {
                    self.norm_binary(*g, l2, r2, path)
                }
            }
        }
    }

    fn drop_unit(&mut self, path: &[Dir], g: ConnId, side: Dir, keep: Formula) {
        if !self.tracing() {
            return;
        }
        let unit = self.th.sig.conn(g).unit.expect("connective has a unit");
        let here = self.current(path);
        let item = here.child(side).and_then(Formula::as_const).expect("unit item is a constant");
        self.identify(&with(path, side), item, unit);
        self.emit(path, Axiom::Unit { conn: g, side, intro: false }, keep);
    }

    fn fold(&mut self, path: &[Dir], g: ConnId, e: FoldEntry) {
        if !self.tracing() {
            return;
        }
        if e.swapped {
            let here = self.current(path);
            let (l, r) = (here.left().unwrap().clone(), here.right().unwrap().clone());
            self.emit(path, Axiom::Comm { conn: g }, Formula::app(g, r, l));
        }
        let here = self.current(path);
        let (l, r) = (here.left().unwrap().as_const().unwrap(), here.right().unwrap().as_const().unwrap());
        self.identify(&with(path, Dir::L), l, e.first);
        self.identify(&with(path, Dir::R), r, e.second);
        let produced = match e.witness {
            Witness::Assign(c) => {
                self.emit(path, Axiom::Assign { conn: g, intro: false }, Formula::Const(c));
                c
            }
            Witness::UnitRight => {
                self.emit(path, Axiom::Unit { conn: g, side: Dir::R, intro: false }, Formula::Const(e.first));
                e.first
            }
            Witness::UnitLeft => {
                self.emit(path, Axiom::Unit { conn: g, side: Dir::L, intro: false }, Formula::Const(e.second));
                e.second
            }
        };
        self.identify(path, produced, e.result);
    }

    fn norm_binary(&mut self, g: ConnId, l: Formula, r: Formula, path: &[Dir]) -> Formula {
        let info = self.th.sig.conn(g);
        let unit = self.th.unit_rep(g, self.subset);
        if unit.is_some() && r.as_const() == unit {
            self.drop_unit(path, g, Dir::R, l.clone());
            return l;
        }
        if unit.is_some() && l.as_const() == unit {
            self.drop_unit(path, g, Dir::L, r.clone());
            return r;
        }
        if let (Some(v), Some(w)) = (l.as_const(), r.as_const()) {
            if let Some(e) = self.th.table(self.subset).get(&(g, v, w)).copied() {
                self.fold(path, g, e);
                return Formula::Const(e.result);
            }
        }
        if info.comm && r < l {
            self.emit(path, Axiom::Comm { conn: g }, Formula::app(g, r.clone(), l.clone()));
            return Formula::app(g, r, l);
        }
        Formula::app(g, l, r)
    }

    fn flatten_trace(&mut self, g: ConnId, path: &[Dir]) {
        let mut p = path.to_vec();
        loop {
            let here = self.current(&p);
            match &here {
                Formula::App(h, a, c) if *h == g => {
                    if let Formula::App(k, x, y) = &**a {
                        if *k == g {
                            let rot = Formula::app(g, (**x).clone(), Formula::app(g, (**y).clone(), (**c).clone()));
                            self.emit(&p, Axiom::Assoc { conn: g, to_right: true }, rot);
                            continue;
                        }
                    }
                    p.push(Dir::R);
                }
                _ => break,
            }
        }
    }

    fn chain_items(g: ConnId, f: &Formula, out: &mut Vec<Formula>) {
        let mut cur = f;
        loop {
            match cur {
                Formula::App(h, a, b) if *h == g => {
                    Self::chain_items(g, a, out);
                    cur = b;
                }
                other => {
                    out.push(other.clone());
                    break;
                }
            }
        }
    }

    fn norm_list(&mut self, g: ConnId, l: Formula, r: Formula, path: &[Dir]) -> Formula {
        let info = self.th.sig.conn(g);
        let comm = info.comm;
        let unit = self.th.unit_rep(g, self.subset);
        let mut items = Vec::new();
        Self::chain_items(g, &l, &mut items);
        Self::chain_items(g, &r, &mut items);
        if self.tracing() {
            self.flatten_trace(g, path);
        }
        loop {
            let mut changed = false;
            let mut i = 0;
            while i < items.len() && items.len() > 1 {
                if unit.is_some() && items[i].as_const() == unit {
                    let k = items.len();
                    if i + 1 < k {
                        let rest = self.tracer.as_ref().map(|_| self.current(&spine(path, i + 1)));
                        if let Some(rest) = rest {
                            self.drop_unit(&spine(path, i), g, Dir::L, rest);
                        }
                    } else if self.tracing() {
                        let keep = self.current(&with(&spine(path, k - 2), Dir::L));
                        self.drop_unit(&spine(path, k - 2), g, Dir::R, keep);
                    }
                    items.remove(i);
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if comm {
                let n = items.len();
                for pass in 0..n {
                    let mut swapped = false;
                    for j in 0..n - 1 - pass.min(n - 1) {
                        if items[j + 1] < items[j] {
                            self.swap(g, path, j, n);
                            items.swap(j, j + 1);
                            swapped = true;
                        }
                    }
                    if !swapped {
                        break;
                    }
                }
            }
            let table = self.th.table(self.subset);
            let mut found = None;
            'outer: for i in 0..items.len() {
                let Some(v) = items[i].as_const() else { continue };
                for j in i + 1..items.len() {
                    if !comm && j != i + 1 {
                        break;
                    }
                    if let Some(w) = items[j].as_const() {
                        if let Some(e) = table.get(&(g, v, w)) {
                            found = Some((i, j, *e));
                            break 'outer;
                        }
                    }
                }
            }
            if let Some((i, j, e)) = found {
                let n = items.len();
                for k in (i + 1..j).rev() {
                    self.swap(g, path, k, n);
                    items.swap(k, k + 1);
                }
                if self.tracing() {
                    let at = spine(path, i);
                    if i + 2 < n {
                        let here = self.current(&at);
                        let (x, rest) = (here.left().unwrap().clone(), here.right().unwrap().clone());
                        let (y, tail) = (rest.left().unwrap().clone(), rest.right().unwrap().clone());
                        self.emit(&at, Axiom::Assoc { conn: g, to_right: false }, Formula::app(g, Formula::app(g, x, y), tail));
                        self.fold(&with(&at, Dir::L), g, e);
                    } else {
                        self.fold(&at, g, e);
                    }
                }
                items[i] = Formula::Const(e.result);
                items.remove(i + 1);
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let mut it = items.into_iter().rev();
        let mut acc = it.next().expect("list never empties");
        for x in it {
            acc = Formula::app(g, x, acc);
        }
        acc
    }

    /// Swaps items `j` and `j+1` of a right-nested chain of `n` items.
    fn swap(&mut self, g: ConnId, path: &[Dir], j: usize, n: usize) {
        if !self.tracing() {
            return;
        }
        let at = spine(path, j);
        let here = self.current(&at);
        let (x, rest) = (here.left().unwrap().clone(), here.right().unwrap().clone());
        if j + 2 < n {
            let (y, tail) = (rest.left().unwrap().clone(), rest.right().unwrap().clone());
            self.emit(&at, Axiom::Assoc { conn: g, to_right: false }, Formula::app(g, Formula::app(g, x.clone(), y.clone()), tail.clone()));
            self.emit(&with(&at, Dir::L), Axiom::Comm { conn: g }, Formula::app(g, y.clone(), x.clone()));
            self.emit(&at, Axiom::Assoc { conn: g, to_right: true }, Formula::app(g, y, Formula::app(g, x, tail)));
        } else {
            self.emit(&at, Axiom::Comm { conn: g }, Formula::app(g, rest, x));
        }
    }
}
