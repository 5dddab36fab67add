//! Splitting canonical formulae into binary views around a connective.

use subatomic_core::{ConnId, ConstId, Formula, Signature, Subset, Theory};

/// The maximal `c`-factors of `f`, left to right.
pub fn flatten(f: &Formula, c: ConnId) -> Vec<Formula> {
    let mut out = Vec::new();
    collect(f, c, &mut out);
    out
}

fn collect(f: &Formula, c: ConnId, out: &mut Vec<Formula>) {
    match f {
        Formula::App(g, l, r) if *g == c => {
            collect(l, c, out);
            collect(r, c, out);
        }
        _ => out.push(f.clone()),
    }
}

/// The right-nested `c`-chain of `items`; the unit of `c` when empty.
pub fn chain(sig: &Signature, c: ConnId, items: &[Formula]) -> Option<Formula> {
    match items.split_last() {
        None => sig.conn(c).unit.map(Formula::Const),
        Some((last, init)) => {
            Some(init.iter().rev().fold(last.clone(), |acc, x| Formula::app(c, x.clone(), acc)))
        }
    }
}

/// The path of item `k` inside the right-nested chain of `n` items.
pub fn chain_path(k: usize, n: usize) -> Vec<subatomic_core::Dir> {
    let mut p = vec![subatomic_core::Dir::R; k];
    if k + 1 < n {
        p.push(subatomic_core::Dir::L);
    }
    p
}

/// All `(v, w)` with `(v g w) = c` in the constant algebra.
pub fn const_splits(th: &Theory, sig: &Signature, g: ConnId, c: ConstId) -> Vec<(ConstId, ConstId)> {
    let target = th.rep(c);
    let mut out = Vec::new();
    for v in sig.consts() {
        for w in sig.consts() {
            if th.fold_const(g, v, w, Subset::Full) == Some(target) {
                out.push((v, w));
            }
        }
    }
    out
}

/// `f` read as `(pre… c (x c y) c post…)`.
#[derive(Debug, Clone)]
pub struct View {
    pub pre: Vec<Formula>,
    pub x: Formula,
    pub y: Formula,
    pub post: Vec<Formula>,
}

impl View {
    fn bare(x: Formula, y: Formula) -> View {
        View { pre: Vec::new(), x, y, post: Vec::new() }
    }

    /// The formula with `z` in place of `(x c y)`, and the path of `z`.
    pub fn wrap(&self, sig: &Signature, c: ConnId, z: Formula) -> (Formula, Vec<subatomic_core::Dir>) {
        let mut items = self.pre.clone();
        items.push(z);
        items.extend(self.post.iter().cloned());
        let k = self.pre.len();
        let n = items.len();
        (chain(sig, c, &items).expect("nonempty"), chain_path(k, n))
    }
}

/// Subsets are enumerated exhaustively up to this many factors.
const FULL_SUBSETS: usize = 4;

/// Ways of reading `f` as a `c`-composition containing `(x c y)`.
pub fn views(th: &Theory, sig: &Signature, f: &Formula, c: ConnId) -> Vec<View> {
    let info = sig.conn(c);
    let mut out = Vec::new();
    if let Some(k) = f.as_const() {
        for (v, w) in const_splits(th, sig, c, k) {
            out.push(View::bare(Formula::Const(v), Formula::Const(w)));
        }
    }
    if !info.assoc {
        if let Formula::App(g, l, r) = f {
            if *g == c {
                out.push(View::bare((**l).clone(), (**r).clone()));
            }
        }
        return out;
    }
    let items = flatten(f, c);
    let m = items.len();
    let unit = info.unit.is_some();
    let mk = |xs: &[Formula]| chain(sig, c, xs);
    if info.comm {
        let mut push = |xs: Vec<Formula>, ys: Vec<Formula>, rest: Vec<Formula>| {
            if (xs.is_empty() || ys.is_empty()) && !unit || xs.is_empty() && ys.is_empty() {
                return;
            }
            out.push(View { pre: Vec::new(), x: mk(&xs).unwrap(), y: mk(&ys).unwrap(), post: rest });
        };
        if m <= FULL_SUBSETS {
            let total = 3usize.pow(m as u32);
            for code in 0..total {
                let (mut xs, mut ys, mut rest) = (Vec::new(), Vec::new(), Vec::new());
                let mut k = code;
                for it in &items {
                    match k % 3 {
                        0 => rest.push(it.clone()),
                        1 => xs.push(it.clone()),
                        _ => ys.push(it.clone()),
                    }
                    k /= 3;
                }
                push(xs, ys, rest);
            }
        } else {
            for i in 0..m {
                let others = |skip: &[usize]| -> Vec<Formula> {
                    items.iter().enumerate().filter(|(k, _)| !skip.contains(k)).map(|(_, x)| x.clone()).collect()
                };
                push(vec![items[i].clone()], Vec::new(), others(&[i]));
                push(Vec::new(), vec![items[i].clone()], others(&[i]));
                push(vec![items[i].clone()], others(&[i]), Vec::new());
                push(others(&[i]), vec![items[i].clone()], Vec::new());
                for j in 0..m {
                    if i != j {
                        push(vec![items[i].clone()], vec![items[j].clone()], others(&[i, j]));
                    }
                }
            }
        }
    } else {
        for i in 0..=m {
            for k in i..=m {
                for j in k..=m {
                    let (xs, ys) = (&items[i..k], &items[k..j]);
                    if xs.is_empty() && ys.is_empty() || (xs.is_empty() || ys.is_empty()) && !unit {
                        continue;
                    }
                    out.push(View {
                        pre: items[..i].to_vec(),
                        x: mk(xs).unwrap(),
                        y: mk(ys).unwrap(),
                        post: items[j..].to_vec(),
                    });
                }
            }
        }
    }
    out
}

/// Ways of reading `f` as a binary `c`-composition `(a c b)`.
pub fn decompositions(th: &Theory, sig: &Signature, f: &Formula, c: ConnId) -> Vec<(Formula, Formula)> {
    let info = sig.conn(c);
    let mut out = Vec::new();
    if let Some(k) = f.as_const() {
        for (v, w) in const_splits(th, sig, c, k) {
            out.push((Formula::Const(v), Formula::Const(w)));
        }
    }
    if let Some(u) = info.unit {
        out.push((f.clone(), Formula::Const(u)));
        out.push((Formula::Const(u), f.clone()));
    }
    if !info.assoc {
        if let Formula::App(g, l, r) = f {
            if *g == c {
                out.push(((**l).clone(), (**r).clone()));
            }
        }
        return out;
    }
    let items = flatten(f, c);
    let m = items.len();
    if m < 2 {
        return out;
    }
    if info.comm && m <= 2 * FULL_SUBSETS {
        for mask in 1..(1u32 << m) - 1 {
            let (a, b): (Vec<_>, Vec<_>) = items.iter().enumerate().partition(|(i, _)| mask & (1 << i) != 0);
            let a: Vec<Formula> = a.into_iter().map(|(_, x)| x.clone()).collect();
            let b: Vec<Formula> = b.into_iter().map(|(_, x)| x.clone()).collect();
            out.push((chain(sig, c, &a).unwrap(), chain(sig, c, &b).unwrap()));
        }
    } else {
        for k in 1..m {
            out.push((chain(sig, c, &items[..k]).unwrap(), chain(sig, c, &items[k..]).unwrap()));
        }
    }
    out
}
