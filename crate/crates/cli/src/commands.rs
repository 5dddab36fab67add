use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use subatomic_core::{render_path, Derivation, Formula, LintReport, RuleKind, SystemDef};
use subatomic_interp::{
    audit_preservable, interpret_derivation, is_tame, ordinary_system, represent_derivation, InterpError,
    InterpretationMap, OrdinaryDerivation, OrdinarySystem,
};
use subatomic_oracle::{prove, random_derivation_in, write_corpus, CorpusSpec, CutKind, SearchConfig, SearchOutcome};
use subatomic_split::{SplitError, Splitter, TraceEntry};

use crate::input::{self, diag, interp_diag, is_derivation, Source};
use crate::{Command, CutKindArg, Ctx, Fail, Outcome, Res};

pub(crate) fn dispatch(ctx: &mut Ctx, cmd: Command) -> Res {
    match cmd {
        Command::Check { system, proof, files } => check(ctx, &system, proof, &files),
        Command::Lint { system } => lint(ctx, &system),
        Command::Split { system, at, file, out, trace } => split(ctx, &system, &at, &file, out.as_deref(), trace),
        Command::Ctxred { system, at, file, out, trace } => ctxred(ctx, &system, &at, &file, out.as_deref(), trace),
        Command::CutElim { system, file, once, out, trace } => cut_elim(ctx, &system, &file, once, out.as_deref(), trace),
        Command::Interpret { system, target, input } => interpret(ctx, &system, target.as_deref(), &input),
        Command::Represent { system, input } => represent(ctx, &system, &input),
        Command::Prove { system, depth, budget, slack, no_memo, formula } => {
            let cfg = SearchConfig { depth, budget, slack, memo: !no_memo };
            prove_cmd(ctx, &system, &cfg, &formula)
        }
        Command::Gen { system, seed, count, out, steps, max_nodes, atoms, cuts, cut_kind, cut_size, tame } => {
            let cut_kind = match cut_kind {
                CutKindArg::Any => CutKind::Any,
                CutKindArg::Atom => CutKind::Atom,
                CutKindArg::NonAtom => CutKind::NonAtom,
            };
            let base = CorpusSpec { max_nodes, atoms, steps, cuts, cut_kind, cut_size, tame, ..CorpusSpec::new(&system, seed) };
            gen(ctx, &system, &base, count, out.as_deref())
        }
        Command::Audit { system, samples, seed } => audit(ctx, &system, samples, seed),
    }
}

impl Ctx<'_> {
    fn doc(&self, d: &Derivation, sys: &SystemDef) -> String {
        if self.seq {
            d.sequentialize().render(&sys.sig, &sys.name)
        } else {
            d.render(&sys.sig) + "\n"
        }
    }

    fn json_out(&mut self, v: &Value) -> Result<(), Fail> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"))?;
        Ok(())
    }

    fn trace(&mut self, sys: &SystemDef, trace: &[TraceEntry]) -> Result<(), Fail> {
        for t in trace {
            writeln!(self.err, "case {} {}", t.case, sys.render(&t.formula))?;
        }
        Ok(())
    }
}

fn trace_json(sys: &SystemDef, trace: &[TraceEntry]) -> Value {
    trace.iter().map(|t| json!({ "case": t.case, "formula": sys.render(&t.formula) })).collect()
}

fn parse_derivation(src: &Source, sys: &SystemDef) -> Result<Derivation, Fail> {
    Derivation::parse_any(&src.text, &sys.sig).map_err(|e| Fail(diag(&src.label, &e)))
}

/// Exit 1 for answers about the input, exit 2 for misuse.
fn split_failure(ctx: &mut Ctx, label: &str, e: SplitError) -> Res {
    match e {
        SplitError::NotSplittable(_) | SplitError::Core(subatomic_core::Error::Check { .. }) => {
            let msg = match &e {
                SplitError::Core(c) => diag(label, c),
                _ => format!("{label}: {e}"),
            };
            writeln!(ctx.err, "{msg}")?;
            Ok(Outcome::No)
        }
        SplitError::Core(c) => Err(Fail(diag(label, &c))),
        other => Err(Fail(format!("{label}: {other}"))),
    }
}

fn write_docs(dir: &Path, docs: &[(&str, &str)]) -> Result<(), Fail> {
    std::fs::create_dir_all(dir).map_err(|e| Fail(format!("{}: {e}", dir.display())))?;
    for (name, text) in docs {
        let p = dir.join(format!("{name}.sad"));
        std::fs::write(&p, text).map_err(|e| Fail(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn up_steps(sys: &SystemDef, d: &Derivation) -> usize {
    d.rules_used().iter().filter(|r| sys.rule(r.as_str()).is_some_and(|s| s.kind == RuleKind::Up)).count()
}

fn check(ctx: &mut Ctx, system: &str, proof: bool, files: &[String]) -> Res {
    let sys = input::system(system)?;
    let mut reports = Vec::new();
    let mut invalid = false;
    let mut malformed = false;
    for f in files {
        let src = input::read_file(f)?;
        let d = match Derivation::parse_any(&src.text, &sys.sig) {
            Ok(d) => d,
            Err(e) => {
                malformed = true;
                let msg = diag(&src.label, &e);
                reports.push(json!({ "file": f, "valid": false, "error": msg }));
                if !ctx.json {
                    writeln!(ctx.err, "{msg}")?;
                }
                continue;
            }
        };
        let mut res = input::check_document(&src, &sys, &d);
        if res.is_ok() && proof && !sys.equal(&d.premiss(), &sys.one_formula()) {
            res = Err(format!("{}: premiss `{}` is not equal to `{}`", src.label, sys.render(&d.premiss()), sys.render(&sys.one_formula())));
        }
        match res {
            Ok(()) => {
                let (n, len) = (d.num_steps(), d.length_plus(&sys));
                reports.push(json!({
                    "file": f, "valid": true, "steps": n, "length_plus": len, "size": d.size(),
                    "premiss": sys.render(&d.premiss()), "conclusion": sys.render(&d.conclusion()),
                }));
                if !ctx.json {
                    writeln!(ctx.out, "{}: valid ({n} steps, |φ|₊ = {len})", src.label)?;
                    writeln!(ctx.out, "  premiss    {}", sys.render(&d.premiss()))?;
                    writeln!(ctx.out, "  conclusion {}", sys.render(&d.conclusion()))?;
                }
            }
            Err(msg) => {
                invalid = true;
                reports.push(json!({ "file": f, "valid": false, "error": msg }));
                if !ctx.json {
                    writeln!(ctx.out, "{msg}")?;
                }
            }
        }
    }
    if ctx.json {
        ctx.json_out(&json!({ "system": sys.name, "files": reports }))?;
    }
    if malformed {
        return Err(Fail("malformed input".into()));
    }
    Ok(if invalid { Outcome::No } else { Outcome::Yes })
}

fn lint_json(r: &LintReport) -> Value {
    json!({
        "system": r.system,
        "splittable": r.passes(),
        "verdicts": r.verdicts.iter().map(|v| json!({ "condition": v.condition, "pass": v.pass, "witnesses": v.witnesses })).collect::<Vec<_>>(),
    })
}

fn lint(ctx: &mut Ctx, system: &str) -> Res {
    let sys = input::system(system)?;
    let r = sys.lint();
    if ctx.json {
        ctx.json_out(&lint_json(&r))?;
    } else {
        writeln!(ctx.out, "system {}", r.system)?;
        write!(ctx.out, "{r}")?;
        if r.passes() {
            writeln!(ctx.out, "conditions 1–5: pass")?;
        } else {
            let failed: Vec<String> = r.failed().iter().map(u8::to_string).collect();
            writeln!(ctx.out, "not splittable: condition {} fails", failed.join(", "))?;
        }
    }
    Ok(if r.passes() { Outcome::Yes } else { Outcome::No })
}

fn split(ctx: &mut Ctx, system: &str, at: &str, file: &str, out: Option<&Path>, trace: bool) -> Res {
    let sys = input::system(system)?;
    let path = input::path(at)?;
    let src = input::read_file(file)?;
    let phi = parse_derivation(&src, &sys)?;
    let sp = match Splitter::new(&sys) {
        Ok(sp) => sp.with_trace(trace),
        Err(e) => return split_failure(ctx, &src.label, e),
    };
    let r = match sp.shallow_split(&phi, &path) {
        Ok(r) => r,
        Err(e) => return split_failure(ctx, &src.label, e),
    };
    let base = sp.base();
    let (psi, phi1, phi2) = (ctx.doc(&r.psi, base), ctx.doc(&r.phi1, base), ctx.doc(&r.phi2, base));
    let measure = json!({
        "phi": phi.length_plus(&sys), "phi1": r.phi1.length_plus(&sys), "phi2": r.phi2.length_plus(&sys),
    });
    if let Some(dir) = out {
        write_docs(dir, &[("psi", &psi), ("phi1", &phi1), ("phi2", &phi2)])?;
    }
    if trace && !ctx.json {
        ctx.trace(&sys, &r.trace)?;
    }
    if ctx.json {
        ctx.json_out(&json!({
            "system": base.name, "at": render_path(&path),
            "q1": sys.render(&r.q1), "q2": sys.render(&r.q2),
            "psi": { "premiss": sys.render(&r.psi.premiss()), "conclusion": sys.render(&r.psi.conclusion()), "document": psi },
            "phi1": { "premiss": sys.render(&r.phi1.premiss()), "conclusion": sys.render(&r.phi1.conclusion()), "document": phi1 },
            "phi2": { "premiss": sys.render(&r.phi2.premiss()), "conclusion": sys.render(&r.phi2.conclusion()), "document": phi2 },
            "measure": measure,
            "trace": trace_json(&sys, &r.trace),
        }))?;
    } else if out.is_none() {
        writeln!(ctx.out, "# q1 {}", sys.render(&r.q1))?;
        writeln!(ctx.out, "# q2 {}", sys.render(&r.q2))?;
        writeln!(ctx.out, "# psi: {} → {}", sys.render(&r.psi.premiss()), sys.render(&r.psi.conclusion()))?;
        write!(ctx.out, "{psi}")?;
        writeln!(ctx.out, "# phi1: proof of {}", sys.render(&r.phi1.conclusion()))?;
        write!(ctx.out, "{phi1}")?;
        writeln!(ctx.out, "# phi2: proof of {}", sys.render(&r.phi2.conclusion()))?;
        write!(ctx.out, "{phi2}")?;
        writeln!(ctx.out, "# |phi|+ = {}, |phi1|+ = {}, |phi2|+ = {}", measure["phi"], measure["phi1"], measure["phi2"])?;
    } else {
        writeln!(ctx.out, "q1 {}\nq2 {}", sys.render(&r.q1), sys.render(&r.q2))?;
    }
    Ok(Outcome::Yes)
}

fn ctxred(ctx: &mut Ctx, system: &str, at: &str, file: &str, out: Option<&Path>, trace: bool) -> Res {
    let sys = input::system(system)?;
    let hole = input::path(at)?;
    let src = input::read_file(file)?;
    let phi = parse_derivation(&src, &sys)?;
    let sp = match Splitter::new(&sys) {
        Ok(sp) => sp.with_trace(trace),
        Err(e) => return split_failure(ctx, &src.label, e),
    };
    let r = match sp.context_reduce(&phi, &hole) {
        Ok(r) => r,
        Err(e) => return split_failure(ctx, &src.label, e),
    };
    let base = sp.base();
    let a = phi.conclusion().get(&hole).expect("hole exists").clone();
    let chi = r.chi_at(&a);
    let (zeta_doc, chi_doc) = (ctx.doc(&r.zeta, base), ctx.doc(&chi, base));
    if let Some(dir) = out {
        write_docs(dir, &[("zeta", &zeta_doc), ("chi", &chi_doc)])?;
    }
    if trace && !ctx.json {
        ctx.trace(&sys, &r.trace)?;
    }
    let context = r.h.render(&sys.sig);
    if ctx.json {
        ctx.json_out(&json!({
            "system": base.name, "at": render_path(&hole),
            "k": sys.render(&r.k), "context": context,
            "zeta": { "premiss": sys.render(&r.zeta.premiss()), "conclusion": sys.render(&r.zeta.conclusion()), "document": zeta_doc },
            "chi": { "premiss": sys.render(&chi.premiss()), "conclusion": sys.render(&chi.conclusion()), "document": chi_doc },
            "trace": trace_json(&sys, &r.trace),
        }))?;
    } else if out.is_none() {
        writeln!(ctx.out, "# k {}", sys.render(&r.k))?;
        writeln!(ctx.out, "# context {context}")?;
        writeln!(ctx.out, "# zeta: proof of {}", sys.render(&r.zeta.conclusion()))?;
        write!(ctx.out, "{zeta_doc}")?;
        writeln!(ctx.out, "# chi: {} → {}", sys.render(&chi.premiss()), sys.render(&chi.conclusion()))?;
        write!(ctx.out, "{chi_doc}")?;
    } else {
        writeln!(ctx.out, "k {}\ncontext {context}", sys.render(&r.k))?;
    }
    Ok(Outcome::Yes)
}

fn cut_elim(ctx: &mut Ctx, system: &str, file: &str, once: bool, out: Option<&Path>, trace: bool) -> Res {
    let sys = input::system(system)?;
    let src = input::read_file(file)?;
    let phi = parse_derivation(&src, &sys)?;
    let sp = match Splitter::new(&sys) {
        Ok(sp) => sp.with_trace(trace),
        Err(e) => return split_failure(ctx, &src.label, e),
    };
    let start = Instant::now();
    let res = if once { sp.eliminate_cut_once(&phi).map(|d| (d, Vec::new())) } else { sp.eliminate_cuts_traced(&phi) };
    let (d, log) = match res {
        Ok(x) => x,
        Err(e) => return split_failure(ctx, &src.label, e),
    };
    let millis = start.elapsed().as_secs_f64() * 1000.0;
    let doc = ctx.doc(&d, &sys);
    if let Some(p) = out {
        std::fs::write(p, &doc).map_err(|e| Fail(format!("{}: {e}", p.display())))?;
    }
    if trace && !ctx.json {
        ctx.trace(&sys, &log)?;
    }
    let (before, after) = (up_steps(&sys, &phi), up_steps(&sys, &d));
    if ctx.json {
        ctx.json_out(&json!({
            "system": sys.name,
            "up_steps": { "input": before, "output": after },
            "size": { "input": phi.size(), "output": d.size() },
            "length_plus": { "input": phi.length_plus(&sys), "output": d.length_plus(&sys) },
            "conclusion": sys.render(&d.conclusion()),
            "document": doc,
            "trace": trace_json(&sys, &log),
        }))?;
    } else {
        if out.is_none() {
            write!(ctx.out, "{doc}")?;
        }
        writeln!(
            ctx.err,
            "{}: up-rule steps {before} → {after}, size {} → {}, {millis:.1} ms",
            src.label,
            phi.size(),
            d.size()
        )?;
    }
    Ok(Outcome::Yes)
}

fn default_target(m: &InterpretationMap) -> Option<&'static str> {
    let n = m.system.name.as_str();
    if n.starts_with("saks") {
        Some("sks.linear")
    } else if n.starts_with("samlls") {
        Some("smlls")
    } else if n.starts_with("sabv") {
        Some("sbv")
    } else {
        None
    }
}

fn target(m: &InterpretationMap, name: Option<&str>) -> Result<OrdinarySystem, Fail> {
    let name = name.or_else(|| default_target(m)).ok_or_else(|| Fail("no default target; pass `--target`".into()))?;
    ordinary_system(name).ok_or_else(|| Fail(format!("unknown ordinary system `{name}`; use sks.linear, smlls or sbv")))
}

/// Exit 1 when the input is not interpretable or not translatable.
fn interp_failure(ctx: &mut Ctx, label: &str, e: InterpError) -> Res {
    match e {
        InterpError::NotInterpretable { .. } | InterpError::Translation { .. } | InterpError::Check { .. } => {
            writeln!(ctx.err, "{}", interp_diag(label, &e))?;
            Ok(Outcome::No)
        }
        other => Err(Fail(interp_diag(label, &other))),
    }
}

fn interpret(ctx: &mut Ctx, system: &str, target_name: Option<&str>, arg: &str) -> Res {
    let m = input::map(system)?;
    let src = input::read_file_or_text(arg)?;
    let sys = &m.system;
    if !is_derivation(&src.text) {
        let f = sys.parse(&src.text).map_err(|e| Fail(diag(&src.label, &e)))?;
        let g = match m.interpret(&f) {
            Ok(g) => g,
            Err(e) => return interp_failure(ctx, &src.label, e),
        };
        if ctx.json {
            ctx.json_out(&json!({ "system": sys.name, "formula": sys.render(&f), "interpretation": m.render(&g) }))?;
        } else {
            writeln!(ctx.out, "{}", m.render(&g))?;
        }
        return Ok(Outcome::Yes);
    }
    let t = target(&m, target_name)?;
    let d = parse_derivation(&src, sys)?;
    if let Err(msg) = input::check_document(&src, sys, &d) {
        writeln!(ctx.err, "{msg}")?;
        return Ok(Outcome::No);
    }
    if !is_tame(&d, sys) {
        writeln!(ctx.err, "{}: derivation is not tame", src.label)?;
        return Ok(Outcome::No);
    }
    let o = match interpret_derivation(&d, &m, &t) {
        Ok(o) => o,
        Err(e) => return interp_failure(ctx, &src.label, e),
    };
    if let Err(e) = o.check(&m, &t) {
        return interp_failure(ctx, &src.label, e);
    }
    let doc = o.render(&m, &t.name);
    if ctx.json {
        let rules: Vec<&str> = o.rules_used().iter().map(|r| r.name()).collect();
        ctx.json_out(&json!({ "system": sys.name, "target": t.name, "steps": o.len(), "rules": rules, "document": doc }))?;
    } else {
        write!(ctx.out, "{doc}")?;
    }
    Ok(Outcome::Yes)
}

fn represent(ctx: &mut Ctx, system: &str, arg: &str) -> Res {
    let m = input::map(system)?;
    let src = input::read_file_or_text(arg)?;
    let sys = &m.system;
    if !is_derivation(&src.text) {
        let g = m.parse(&src.text).map_err(|e| Fail(interp_diag(&src.label, &e)))?;
        let f = m.represent(&g);
        if ctx.json {
            ctx.json_out(&json!({ "system": sys.name, "formula": m.render(&g), "representation": sys.render(&f) }))?;
        } else {
            writeln!(ctx.out, "{}", sys.render(&f))?;
        }
        return Ok(Outcome::Yes);
    }
    let (header, o) = OrdinaryDerivation::parse(&src.text, &m).map_err(|e| Fail(interp_diag(&src.label, &e)))?;
    let t = target(&m, header.as_deref())?;
    if let Err(e) = o.check(&m, &t) {
        return interp_failure(ctx, &src.label, e);
    }
    let d = match represent_derivation(&o, &m) {
        Ok(d) => d,
        Err(e) => return interp_failure(ctx, &src.label, e),
    };
    let doc = ctx.doc(&d, sys);
    if ctx.json {
        ctx.json_out(&json!({ "system": sys.name, "tame": is_tame(&d, sys), "steps": d.num_steps(), "document": doc }))?;
    } else {
        write!(ctx.out, "{doc}")?;
    }
    Ok(Outcome::Yes)
}

fn prove_cmd(ctx: &mut Ctx, system: &str, cfg: &SearchConfig, arg: &str) -> Res {
    let sys = input::system(system)?;
    let src = input::read_file_or_text(arg)?;
    let f: Formula = sys.parse(src.text.trim()).map_err(|e| Fail(diag(&src.label, &e)))?;
    let outcome = prove(&f, &sys, cfg);
    let (status, answer) = match &outcome {
        SearchOutcome::Found(_) => ("found", Outcome::Yes),
        SearchOutcome::Absent { exhaustive: true } => ("unprovable", Outcome::No),
        SearchOutcome::Absent { exhaustive: false } => ("absent", Outcome::No),
        SearchOutcome::BudgetExhausted => ("budget-exhausted", Outcome::No),
    };
    let doc = outcome.proof().map(|d| ctx.doc(d, &sys));
    if ctx.json {
        ctx.json_out(&json!({
            "system": sys.name, "formula": sys.render(&f), "depth": cfg.depth, "status": status, "document": doc,
        }))?;
    } else {
        match (&doc, &outcome) {
            (Some(doc), _) => write!(ctx.out, "{doc}")?,
            (None, SearchOutcome::Absent { exhaustive: true }) => writeln!(ctx.out, "unprovable: search space exhausted")?,
            (None, SearchOutcome::Absent { .. }) => writeln!(ctx.out, "no proof within {} rule steps", cfg.depth)?,
            (None, _) => writeln!(ctx.out, "unknown: search budget of {} exhausted", cfg.budget)?,
        }
    }
    Ok(answer)
}

fn gen(ctx: &mut Ctx, system: &str, base: &CorpusSpec, count: u64, out: Option<&Path>) -> Res {
    let sys = input::system(system)?;
    let name = if Path::new(system).is_file() { sys.to_document() } else { system.to_string() };
    let specs: Vec<CorpusSpec> =
        (0..count).map(|i| CorpusSpec { system: name.clone(), seed: base.seed + i, ..base.clone() }).collect();
    if let Some(dir) = out {
        let files = write_corpus(dir, &specs).map_err(|e| Fail(e.to_string()))?;
        if ctx.json {
            let names: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
            ctx.json_out(&json!({ "system": sys.name, "files": names }))?;
        } else {
            writeln!(ctx.out, "wrote {} derivations and manifest.json to {}", files.len(), dir.display())?;
        }
        return Ok(Outcome::Yes);
    }
    let mut items = Vec::new();
    for spec in &specs {
        let d = random_derivation_in(&sys, spec).map_err(|e| Fail(format!("seed {}: {e}", spec.seed)))?;
        let doc = ctx.doc(&d, &sys);
        if ctx.json {
            let mut e = spec.to_json();
            e["system"] = json!(sys.name);
            e["document"] = json!(doc);
            items.push(e);
        } else {
            if count > 1 {
                writeln!(ctx.out, "# seed {}", spec.seed)?;
            }
            write!(ctx.out, "{doc}")?;
        }
    }
    if ctx.json {
        ctx.json_out(&json!({ "derivations": items }))?;
    }
    Ok(Outcome::Yes)
}

fn audit(ctx: &mut Ctx, system: &str, samples: usize, seed: u64) -> Res {
    let m = input::map(system)?;
    let r = audit_preservable(&m, samples, seed);
    if ctx.json {
        ctx.json_out(&json!({
            "system": m.system.name,
            "samples": r.samples,
            "interpretable": r.interpretable,
            "preservable": r.passes(),
            "counterexamples": r.counterexamples.iter().map(|c| json!({ "condition": c.condition, "formula": c.formula, "detail": c.detail })).collect::<Vec<_>>(),
        }))?;
    } else {
        writeln!(ctx.out, "system {}: {} samples, {} interpretable", m.system.name, r.samples, r.interpretable)?;
        for c in &r.counterexamples {
            writeln!(ctx.out, "condition {}: `{}`: {}", c.condition, c.formula, c.detail)?;
        }
        if r.passes() {
            writeln!(ctx.out, "no counterexamples")?;
        }
    }
    Ok(if r.passes() { Outcome::Yes } else { Outcome::No })
}
