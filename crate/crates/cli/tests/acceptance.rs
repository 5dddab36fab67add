//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p subatomic-tool --test acceptance`; extra arguments
//! select criteria by number, e.g. `-- 2 6`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use subatomic_core::system::builtin_source;
use subatomic_core::{builtin, load_system, resolve, ConstId, Derivation, Dir, Formula, RuleKind, SystemDef};
use subatomic_interp::{is_tame, random_ordinary, tame_repair, InterpretationMap};
use subatomic_oracle::{
    count_cuts, enumerate_formulae, prove, random_derivation_in, CorpusSpec, CutKind, SearchConfig, SearchOutcome,
};
use subatomic_split::Splitter;

type Verdict = Result<String, String>;

struct Criterion {
    number: u8,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Verdict,
}

const CRITERIA: [Criterion; 8] = [
    Criterion { number: 1, title: "splittability lint", limit: Some(Duration::from_secs(1)), run: lint },
    Criterion { number: 2, title: "shallow splitting contract", limit: Some(Duration::from_secs(60)), run: shallow_splitting },
    Criterion { number: 3, title: "context reduction contract", limit: Some(Duration::from_secs(60)), run: context_reduction },
    Criterion { number: 4, title: "cut elimination agrees with search", limit: Some(Duration::from_secs(300)), run: cut_admissibility },
    Criterion { number: 5, title: "size and runtime report", limit: None, run: size_report },
    Criterion { number: 6, title: "interpretation round trip and examples", limit: Some(Duration::from_secs(5)), run: interpretation },
    Criterion { number: 7, title: "tameness preservation", limit: None, run: tameness },
    Criterion { number: 8, title: "dual lemma", limit: None, run: dual_lemma },
];

fn main() -> ExitCode {
    let wanted: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| wanted.is_empty() || wanted.contains(&c.number)) {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let verdict = match (verdict, c.limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            (v, _) => v,
        };
        let (mark, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {} ({}): {mark} [{took:.2?}] {detail}", c.number, c.title);
        failed += usize::from(verdict.is_err());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}

fn sys(name: &str) -> SystemDef {
    resolve(name).unwrap()
}

fn spec(system: &str, seed: u64) -> CorpusSpec {
    CorpusSpec::new(system, seed)
}

/// Paths of the non-`+` nodes whose ancestors are all `+`.
fn factor_paths(sys: &SystemDef, f: &Formula) -> Vec<Vec<Dir>> {
    let plus = sys.plus.unwrap();
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(p) = stack.pop() {
        match f.get(&p).unwrap() {
            Formula::App(c, _, _) if *c == plus => {
                for d in [Dir::R, Dir::L] {
                    let mut q = p.clone();
                    q.push(d);
                    stack.push(q);
                }
            }
            Formula::App(..) => out.push(p),
            Formula::Const(_) => {}
        }
    }
    out
}

/// `f` with the factor at `path` removed, or the `+`-unit when `path` is the root.
fn remainder(sys: &SystemDef, f: &Formula, path: &[Dir]) -> Formula {
    match path.split_last() {
        None => Formula::Const(sys.zero().unwrap()),
        Some((last, parent)) => {
            let sib = [parent, &[if *last == Dir::L { Dir::R } else { Dir::L }]].concat();
            f.replace(parent, f.get(&sib).unwrap().clone()).unwrap()
        }
    }
}

fn up_free(sys: &SystemDef, d: &Derivation) -> bool {
    d.rules_used().iter().all(|r| sys.rule(r.as_str()).is_none_or(|s| s.kind == RuleKind::Down))
}

fn under_atom(sys: &SystemDef, f: &Formula, path: &[Dir]) -> bool {
    (0..path.len()).any(|k| f.get(&path[..k]).and_then(Formula::conn).is_some_and(|c| sys.sig.conn(c).is_atom))
}

fn lint() -> Verdict {
    let mut errs = Vec::new();
    for name in ["samlls.down", "saks.down", "sabvu.down", "sabv.down"] {
        let r = builtin(name).unwrap().lint();
        if !r.passes() {
            errs.push(format!("{name} fails {:?}", r.failed()));
        }
    }
    let full = builtin("saks").unwrap().lint();
    if full.failed() != vec![2] {
        errs.push(format!("saks fails {:?}, expected [2]", full.failed()));
    }
    let src = builtin_source("sabvu.down").unwrap();
    let edited: String = src.lines().filter(|l| l.trim() != "assign par o o = one").map(|l| format!("{l}\n")).collect();
    if edited == src {
        errs.push("`assign par o o = one` not found in sabvu.down".into());
    }
    let r = load_system(&edited).unwrap().lint();
    let c3 = r.verdicts.iter().find(|v| v.condition == 3).unwrap();
    let witness = c3.witnesses.iter().any(|w| w.split(|c: char| !c.is_alphanumeric()).any(|t| t == "o"));
    if c3.pass || !witness {
        errs.push(format!("edited sabvu.down: condition 3 pass={} witnesses {:?}", c3.pass, c3.witnesses));
    }
    if errs.is_empty() {
        Ok(format!("4 systems splittable; saks fails condition 2; without `par o o` condition 3 fails ({})", c3.witnesses.join("; ")))
    } else {
        Err(errs.join("; "))
    }
}

const SPLIT_LOGICS: [&str; 3] = ["samlls.down", "saks.down", "sabvu.down"];

fn shallow_splitting() -> Verdict {
    const PER_ALPHA: usize = 50;
    let mut total = 0;
    let mut errs = Vec::new();
    let mut cover = Vec::new();
    for name in SPLIT_LOGICS {
        let s = sys(name);
        let sp = Splitter::new(&s).unwrap();
        let plus = s.plus.unwrap();
        let alphas: Vec<_> = s.sig.conns().filter(|c| *c != plus && (!s.sig.conn(*c).is_atom || s.sig.atoms().take(2).any(|a| a == *c))).collect();
        for alpha in alphas {
            let mut done = 0;
            let mut seed = 0;
            while done < PER_ALPHA && seed < 20_000 {
                seed += 1;
                let sp_ = CorpusSpec { steps: 1 + (seed as usize % 9), max_nodes: 10 + (seed as usize % 14), ..spec(name, seed) };
                let Ok(phi) = random_derivation_in(&s, &sp_) else { continue };
                let f = phi.conclusion();
                let Some(path) = factor_paths(&s, &f).into_iter().find(|p| f.get(p).and_then(Formula::conn) == Some(alpha)) else {
                    continue;
                };
                done += 1;
                if let Err(e) = check_split(&s, &sp, &phi, &path) {
                    errs.push(format!("{name} seed {seed}: {e}"));
                }
            }
            cover.push(format!("{name}/{}: {done}", s.sig.conn_name(alpha)));
            if done < PER_ALPHA {
                errs.push(format!("{name}: only {done} proofs with a `{}` factor", s.sig.conn_name(alpha)));
            }
            total += done;
        }
    }
    if errs.is_empty() && total >= 500 {
        Ok(format!("{total} splits, all contracts hold ({})", cover.join(", ")))
    } else {
        Err(format!("{total} splits; {} failures: {}", errs.len(), errs.iter().take(5).cloned().collect::<Vec<_>>().join(" | ")))
    }
}

fn check_split(s: &SystemDef, sp: &Splitter, phi: &Derivation, path: &[Dir]) -> Result<(), String> {
    let r = sp.shallow_split(phi, path).map_err(|e| e.to_string())?;
    let f = phi.conclusion();
    let plus = s.plus.unwrap();
    let Some(Formula::App(alpha, a, b)) = f.get(path) else { unreachable!() };
    for (n, d) in [("psi", &r.psi), ("phi1", &r.phi1), ("phi2", &r.phi2)] {
        d.check(sp.base()).map_err(|e| format!("{n}: {e}"))?;
    }
    let want = [
        (r.psi.premiss(), Formula::app(s.sig.dual(*alpha), r.q1.clone(), r.q2.clone())),
        (r.psi.conclusion(), remainder(s, &f, path)),
        (r.phi1.conclusion(), Formula::app(plus, (**a).clone(), r.q1.clone())),
        (r.phi2.conclusion(), Formula::app(plus, (**b).clone(), r.q2.clone())),
    ];
    for (got, exp) in want {
        if got != exp {
            return Err(format!("endpoint `{}` should be `{}`", s.render(&got), s.render(&exp)));
        }
    }
    if !s.equal(&r.phi1.premiss(), &s.one_formula()) || !s.equal(&r.phi2.premiss(), &s.one_formula()) {
        return Err("premiss of a split proof is not the unit".into());
    }
    let (m, m1, m2) = (phi.length_plus(s), r.phi1.length_plus(s), r.phi2.length_plus(s));
    if m1 + m2 > m {
        return Err(format!("measure {m1} + {m2} > {m}"));
    }
    Ok(())
}

fn context_reduction() -> Verdict {
    const PER_LOGIC: u64 = 110;
    let mut errs = Vec::new();
    let (mut total, mut atoms, mut depths) = (0, 0, std::collections::BTreeSet::new());
    for name in SPLIT_LOGICS {
        let s = sys(name);
        let sp = Splitter::new(&s).unwrap();
        for seed in 0..PER_LOGIC {
            let phi = random_derivation_in(&s, &CorpusSpec { steps: 2 + (seed as usize % 8), max_nodes: 18, ..spec(name, seed) }).unwrap();
            let f = phi.conclusion();
            let paths = f.all_paths();
            let deep: Vec<_> = paths.iter().filter(|p| under_atom(&s, &f, p)).collect();
            let hole = match (seed % 3, deep.is_empty()) {
                (0, false) => deep[(seed as usize / 3) % deep.len()].clone(),
                _ => paths[(seed as usize * 7) % paths.len()].clone(),
            };
            total += 1;
            atoms += usize::from(under_atom(&s, &f, &hole));
            depths.insert(hole.len());
            if let Err(e) = check_reduction(&s, &sp, &phi, &hole) {
                errs.push(format!("{name} seed {seed}: {e}"));
            }
        }
    }
    let detail = format!("{total} reductions, {atoms} holes under atoms, hole depths {depths:?}");
    if errs.is_empty() && total >= 300 && atoms > 0 && depths.len() >= 3 {
        Ok(detail)
    } else {
        Err(format!("{detail}; {} failures: {}", errs.len(), errs.iter().take(5).cloned().collect::<Vec<_>>().join(" | ")))
    }
}

fn check_reduction(s: &SystemDef, sp: &Splitter, phi: &Derivation, hole: &[Dir]) -> Result<(), String> {
    let r = sp.context_reduce(phi, hole).map_err(|e| e.to_string())?;
    let one = s.one_formula();
    if !s.equal(&r.h.plug(&one), &one) {
        return Err(format!("h{{1}} = `{}` is not 1", s.render(&r.h.plug(&one))));
    }
    r.zeta.check(s).map_err(|e| format!("zeta: {e}"))?;
    let f = phi.conclusion();
    let a = f.get(hole).unwrap().clone();
    if r.zeta.conclusion() != Formula::app(s.plus.unwrap(), a, r.k.clone()) || !s.equal(&r.zeta.premiss(), &one) {
        return Err("zeta has the wrong endpoints".into());
    }
    let whole = r.fill(&r.zeta, s).map_err(|e| format!("reassembly: {e}"))?;
    if whole.conclusion() != f || !s.equal(&whole.premiss(), &one) {
        return Err("reassembled proof has the wrong endpoints".into());
    }
    Ok(())
}

/// Compares search with and without up rules on `formulae`, eliminating the cuts of every witness.
fn compare_search(full: &SystemDef, formulae: &[Formula], cfg: &SearchConfig) -> (usize, usize, Vec<String>) {
    let down = full.down_fragment();
    let sp = Splitter::new(full).unwrap();
    let (mut provable, mut with_cuts) = (0, 0);
    let mut errs = Vec::new();
    for f in formulae {
        let a = prove(f, full, cfg);
        let b = prove(f, &down, cfg);
        if matches!(a, SearchOutcome::BudgetExhausted) || matches!(b, SearchOutcome::BudgetExhausted) {
            errs.push(format!("`{}`: search budget exhausted", full.render(f)));
            continue;
        }
        if a.is_found() != b.is_found() {
            errs.push(format!("`{}`: with cuts {}, without {}", full.render(f), a.is_found(), b.is_found()));
        }
        let Some(d) = a.proof() else { continue };
        provable += 1;
        if !up_free(full, d) {
            with_cuts += 1;
        }
        match sp.eliminate_cuts(d) {
            Ok(e) if e.check(&down).is_ok() && up_free(full, &e) && e.conclusion() == d.conclusion() => {}
            Ok(_) => errs.push(format!("`{}`: eliminate_cuts output is wrong", full.render(f))),
            Err(e) => errs.push(format!("`{}`: {e}", full.render(f))),
        }
    }
    (provable, with_cuts, errs)
}

fn cut_admissibility() -> Verdict {
    let mll = sys("samlls");
    let formulae = enumerate_formulae(&mll, 7, 2);
    let cfg = SearchConfig { depth: 4, ..SearchConfig::default() };
    let (p1, c1, mut errs) = compare_search(&mll, &formulae, &cfg);

    let bv = sys("sabvu");
    let pool = enumerate_formulae(&bv, 7, 1);
    let stride = (pool.len() / 120).max(1);
    let sample: Vec<Formula> = pool.iter().step_by(stride).take(120).cloned().collect();
    let (p2, c2, e2) = compare_search(&bv, &sample, &cfg);
    errs.extend(e2);
    let detail = format!(
        "MLL: {} formulae, {p1} provable, {c1} witnesses with cuts; BVU: {} formulae, {p2} provable, {c2} witnesses with cuts; depth {}",
        formulae.len(),
        sample.len(),
        cfg.depth
    );
    if errs.is_empty() && sample.len() >= 100 {
        Ok(detail)
    } else {
        Err(format!("{detail}; {} disagreements: {}", errs.len(), errs.iter().take(5).cloned().collect::<Vec<_>>().join(" | ")))
    }
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn size_report() -> Verdict {
    let mut rows = Vec::new();
    let mut errs = Vec::new();
    for name in ["samlls", "saks", "sabvu"] {
        let s = sys(name);
        let sp = Splitter::new(&s).unwrap();
        for seed in 0..60u64 {
            let cs = CorpusSpec { cuts: 1 + (seed as usize % 3), cut_size: seed as usize % 6, steps: 2 + (seed as usize % 10), max_nodes: 12 + (seed as usize % 16), ..spec(name, seed) };
            let Ok(phi) = random_derivation_in(&s, &cs) else { continue };
            let start = Instant::now();
            match sp.eliminate_cuts(&phi) {
                Ok(d) => rows.push((name, phi.size(), d.size(), start.elapsed().as_secs_f64())),
                Err(e) => errs.push(format!("{name} seed {seed}: {e}")),
            }
        }
    }
    if !errs.is_empty() || rows.is_empty() {
        return Err(format!("{} eliminations failed: {}", errs.len(), errs.iter().take(3).cloned().collect::<Vec<_>>().join(" | ")));
    }
    let mut ratios: Vec<f64> = rows.iter().map(|r| r.2 as f64 / r.1 as f64).collect();
    ratios.sort_by(f64::total_cmp);
    let q = |p: f64| ratios[((ratios.len() - 1) as f64 * p).round() as usize];
    let size_slope = loglog_slope(&rows.iter().map(|r| (r.1 as f64, r.2 as f64)).collect::<Vec<_>>());
    let time_slope = loglog_slope(&rows.iter().map(|r| (r.1 as f64, r.3)).collect::<Vec<_>>());
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let csv: String = std::iter::once("system,input_size,output_size,seconds\n".to_string())
        .chain(rows.iter().map(|r| format!("{},{},{},{:.6}\n", r.0, r.1, r.2, r.3)))
        .collect();
    std::fs::write(dir.join("cut_elimination_sizes.csv"), csv).map_err(|e| e.to_string())?;
    if !ratios.iter().all(|r| r.is_finite()) {
        return Err("unbounded size ratio".into());
    }
    Ok(format!(
        "{} proofs; size ratio min {:.2} median {:.2} p90 {:.2} max {:.2}; fitted exponents size {size_slope:.2}, time {time_slope:.2}",
        rows.len(),
        q(0.0),
        q(0.5),
        q(0.9),
        q(1.0)
    ))
}

fn interpretation() -> Verdict {
    use rand::SeedableRng;
    let mut errs = Vec::new();
    for logic in ["classical", "mll", "bv"] {
        let m = InterpretationMap::builtin(logic).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for i in 0..1000 {
            let g = random_ordinary(&m, &mut rng, 1 + i % 15, 3);
            if m.interpret(&m.represent(&g)).as_ref() != Ok(&g) {
                errs.push(format!("{logic}: I(R(`{}`)) differs", m.render(&g)));
            }
        }
    }
    let classical = InterpretationMap::builtin("classical").unwrap();
    let mll = InterpretationMap::builtin("mll").unwrap();
    let example = |m: &InterpretationMap, text: &str| m.interpret(&m.system.parse(text).unwrap()).map(|g| m.render(&g));
    let checks = [
        ("classical A", example(&classical, "(((f a t) or t) and (t b f))"), Some("((a or t) and ~b)")),
        ("classical B", example(&classical, "(((t b f) and t) a f)"), None),
        ("MLL C", example(&mll, "(((one par bot) a one) ten bot)"), Some("(a ten bot)")),
        ("MLL non-interpretable", example(&mll, "((one par one) a bot)"), None),
    ];
    for (what, got, want) in checks {
        match (got, want) {
            (Ok(g), Some(w)) if g == w => {}
            (Err(_), None) => {}
            (Ok(g), Some(w)) => errs.push(format!("{what}: got `{g}`, the worked example states `{w}`")),
            (Ok(g), None) => errs.push(format!("{what}: interpreted as `{g}`, expected not interpretable")),
            (Err(e), Some(w)) => errs.push(format!("{what}: {e}, expected `{w}`")),
        }
    }
    if errs.is_empty() {
        Ok("3000 round trips exact; worked examples reproduced".into())
    } else {
        Err(errs.join("; "))
    }
}

fn tameness() -> Verdict {
    let mut errs = Vec::new();
    let (mut non_atom, mut atom, mut repaired) = (0, 0, 0);
    for name in ["samlls", "sabvu", "saks"] {
        let s = sys(name);
        let sp = Splitter::new(&s).unwrap();
        let mut seed = 0;
        let mut done = 0;
        while done < 40 && seed < 2000 {
            seed += 1;
            let cs = CorpusSpec { cuts: 1 + (seed as usize % 2), cut_kind: CutKind::NonAtom, tame: true, cut_size: seed as usize % 5, ..spec(name, seed) };
            let Ok(phi) = random_derivation_in(&s, &cs) else { continue };
            if !is_tame(&phi, &s) || count_cuts(&s, &phi).unwrap_or(0) == 0 {
                continue;
            }
            done += 1;
            match sp.eliminate_cuts(&phi) {
                Ok(d) if is_tame(&d, &s) => {}
                Ok(_) => errs.push(format!("{name} seed {seed}: output is not tame")),
                Err(e) => errs.push(format!("{name} seed {seed}: {e}")),
            }
        }
        non_atom += done;
    }
    let s = sys("saks");
    let sp = Splitter::new(&s).unwrap();
    for seed in 0..60u64 {
        let cs = CorpusSpec { cuts: 1, cut_kind: CutKind::Atom, tame: true, ..spec("saks", seed) };
        let Ok(phi) = random_derivation_in(&s, &cs) else { continue };
        if !is_tame(&phi, &s) {
            continue;
        }
        atom += 1;
        match sp.eliminate_cuts(&phi) {
            Ok(d) => {
                if is_tame(&d, &s) {
                    continue;
                }
                let r = tame_repair(&d, &s);
                repaired += 1;
                if r.check(&s).is_err() || !is_tame(&r, &s) || r.conclusion() != d.conclusion() {
                    errs.push(format!("saks atom cut seed {seed}: not tame after repair"));
                }
            }
            Err(e) => errs.push(format!("saks atom cut seed {seed}: {e}")),
        }
    }
    let detail = format!("{non_atom} non-atom cut proofs; {atom} saks atom cut proofs, {repaired} needed repair");
    if errs.is_empty() && non_atom >= 100 && atom > 0 {
        Ok(detail)
    } else {
        Err(format!("{detail}; {} failures: {}", errs.len(), errs.iter().take(5).cloned().collect::<Vec<_>>().join(" | ")))
    }
}

fn dual_lemma() -> Verdict {
    let mut errs = Vec::new();
    let (mut total, mut nonzero) = (0, 0);
    for name in ["samlls.down", "saks.down", "sabvu.down", "sabv.down"] {
        let s = sys(name);
        let sp = Splitter::new(&s).unwrap();
        let plus = s.plus.unwrap();
        for seed in 0..60u64 {
            let phi = random_derivation_in(&s, &CorpusSpec { steps: 1 + (seed as usize % 7), max_nodes: 16, ..spec(name, seed) }).unwrap();
            let f = phi.conclusion();
            let factors = s.theory.plus_factors(&f).unwrap();
            let consts: Vec<ConstId> = factors.iter().filter_map(Formula::as_const).collect();
            let u = consts.get(seed as usize % consts.len().max(1)).copied().unwrap_or_else(|| s.zero().unwrap());
            let mut rest = factors.clone();
            if let Some(i) = rest.iter().position(|x| x.as_const() == Some(u)) {
                rest.remove(i);
            }
            let c = rest.into_iter().reduce(|a, b| Formula::app(plus, a, b)).unwrap_or(Formula::Const(s.zero().unwrap()));
            let mut seq = phi.sequentialize();
            seq.push_eq(&s, Formula::app(plus, Formula::Const(u), c.clone()));
            total += 1;
            nonzero += usize::from(Some(u) != s.zero());
            match sp.derive_from_dual(&seq.to_derivation(), u) {
                Ok(d) if d.check(&s).is_ok() && d.premiss() == Formula::Const(s.sig.neg_const(u)) && d.conclusion() == c => {}
                Ok(_) => errs.push(format!("{name} seed {seed}: wrong endpoints or invalid derivation")),
                Err(e) => errs.push(format!("{name} seed {seed}: {e}")),
            }
        }
    }
    let detail = format!("{total} proofs of `u + C`, {nonzero} with u other than the `+`-unit");
    if errs.is_empty() && total >= 200 {
        Ok(detail)
    } else {
        Err(format!("{detail}; {} failures: {}", errs.len(), errs.iter().take(5).cloned().collect::<Vec<_>>().join(" | ")))
    }
}

