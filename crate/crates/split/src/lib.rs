//! Splitting for subatomic proof systems: the dual lemma, shallow splitting,
//! context reduction and cut elimination.
//!
//! Every operation takes proofs in a splittable system and returns derivations
//! in its down fragment (the down rules whose `β` is `+`). All outputs are
//! checked before they are returned.

mod engine;
mod reduce;
mod split;

use std::thread;

use subatomic_core::{
    compose_seq, plug_derivation, ConnRef, ConstId, Context, Derivation, Dir, Error, Formula, RuleKind, RuleRef,
    SeqDerivation, SystemDef,
};
use thiserror::Error;

use engine::{Engine, Seq};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("system is not splittable:\n{0}")]
    NotSplittable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("rule `{0}` is not a cut")]
    NotACut(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Core(#[from] Error),
}

pub type Result<T> = std::result::Result<T, SplitError>;

/// One recursive call of the splitting procedure: the case that handled the
/// bottom step and the conclusion it was applied to. Case 0 is the transport
/// of a factor across a `+`-equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub case: u8,
    pub formula: Formula,
}

/// The result of splitting a proof of `(A α B) + C`.
#[derive(Debug, Clone)]
pub struct SplitResult {
    pub q1: Formula,
    pub q2: Formula,
    /// From `(q1 ᾱ q2)` to `C`.
    pub psi: Derivation,
    /// A proof of `A + q1`.
    pub phi1: Derivation,
    /// A proof of `B + q2`.
    pub phi2: Derivation,
    pub trace: Vec<TraceEntry>,
}

/// The result of context reduction of a proof of `S{A}`.
#[derive(Debug, Clone)]
pub struct ContextReduction {
    pub k: Formula,
    /// A provable context: `h{1}` equals the distinguished unit.
    pub h: Context,
    /// A proof of `A + k`.
    pub zeta: Derivation,
    chi: SeqDerivation,
    pub trace: Vec<TraceEntry>,
}

impl ContextReduction {
    /// `χ` with the hole marked by [`ConstId::HOLE`]: from `h{hole + k}` to `S{hole}`.
    pub fn chi_open(&self) -> &SeqDerivation {
        &self.chi
    }

    /// `χ` instantiated at `x`: from `h{x + k}` to `S{x}`.
    pub fn chi_at(&self, x: &Formula) -> Derivation {
        reduce::substitute_seq(&self.chi, x).to_derivation()
    }

    /// Plugs a derivation of `x + k` into `h` and continues with `χ` at `x`.
    pub fn fill(&self, delta: &Derivation, sys: &SystemDef) -> Result<Derivation> {
        let concl = delta.conclusion();
        let x = match (&concl, concl.conn()) {
            (Formula::App(_, l, r), Some(c)) if Some(c) == sys.plus && **r == self.k => (**l).clone(),
            _ => {
                return Err(SplitError::Precondition(format!(
                    "`{}` is not of the form `X + {}`",
                    sys.render(&concl),
                    sys.render(&self.k)
                )))
            }
        };
        let d = compose_seq(&plug_derivation(&self.h, delta), &self.chi_at(&x))?;
        d.check(sys)?;
        Ok(d)
    }
}

const STACK: usize = 512 << 20;

/// The splitting procedures for one system.
pub struct Splitter<'a> {
    sys: &'a SystemDef,
    base: SystemDef,
    trace: bool,
}

impl<'a> Splitter<'a> {
    /// Fails unless the down fragment of `sys` passes the splittability lint.
    pub fn new(sys: &'a SystemDef) -> Result<Splitter<'a>> {
        let mut base = sys.clone();
        let plus = sys.plus;
        base.rules.retain(|r| r.kind == RuleKind::Down && plus.is_some_and(|p| r.beta == ConnRef::Conn(p)));
        let report = base.lint();
        if !report.passes() {
            return Err(SplitError::NotSplittable(report.to_string().trim_end().to_string()));
        }
        Ok(Splitter { sys, base, trace: false })
    }

    /// Records the case taken by every recursive call.
    pub fn with_trace(mut self, on: bool) -> Self {
        self.trace = on;
        self
    }

    /// The down fragment in which all outputs live.
    pub fn base(&self) -> &SystemDef {
        &self.base
    }

    fn run<T: Send>(&self, job: impl FnOnce(&mut Engine) -> Result<T> + Send) -> Result<(T, Vec<TraceEntry>)> {
        let base = &self.base;
        let trace = self.trace;
        thread::scope(|s| {
            let handle = thread::Builder::new()
                .stack_size(STACK)
                .spawn_scoped(s, move || {
                    let mut e = Engine::new(base, trace);
                    let out = job(&mut e)?;
                    Ok((out, e.trace.take().unwrap_or_default()))
                })
                .map_err(|e| SplitError::Internal(format!("cannot start worker: {e}")))?;
            handle.join().unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(SplitError::Internal(format!("splitting panicked: {msg}")))
            })
        })
    }

    /// Checks `phi`, requires its premiss to equal the distinguished unit and
    /// returns its sequential form. Up-rule steps are accepted only when `up` is set.
    fn prepare(&self, phi: &Derivation, up: bool) -> Result<Seq> {
        phi.check(self.sys)?;
        let seq = phi.sequentialize();
        if !self.sys.equal(&seq.start, &self.sys.one_formula()) {
            return Err(SplitError::Precondition(format!(
                "premiss `{}` is not equal to `{}`",
                self.sys.render(&seq.start),
                self.sys.render(&self.sys.one_formula())
            )));
        }
        for st in &seq.steps {
            if let RuleRef::Named(n) = &st.rule {
                if self.base.rule(n).is_some() {
                    continue;
                }
                let is_up = self.sys.rule(n).is_some_and(|r| r.kind == RuleKind::Up);
                if !(up && is_up) {
                    return Err(SplitError::Unsupported(format!("rule `{n}` is outside the down fragment")));
                }
            }
        }
        Ok(seq)
    }

    fn finish(&self, e: &Engine, s: &Seq, what: &str) -> Result<Derivation> {
        let d = e.fuse(s).to_derivation();
        d.check(&self.base).map_err(|err| SplitError::Internal(format!("{what} does not check: {err}")))?;
        Ok(d)
    }

    fn split_target(&self, f: &Formula, d: &[Dir]) -> Result<()> {
        let plus = self.base.plus;
        match f.get(d) {
            Some(Formula::App(c, _, _)) if Some(*c) != plus => {}
            _ => {
                return Err(SplitError::Precondition(format!(
                    "no connective other than `+` at @{} in `{}`",
                    subatomic_core::render_path(d),
                    self.sys.render(f)
                )))
            }
        }
        let under = (0..d.len()).all(|i| f.get(&d[..i]).and_then(|g| g.conn()) == plus);
        if !under {
            return Err(SplitError::Precondition(format!(
                "@{} is not a `+`-factor of the conclusion",
                subatomic_core::render_path(d)
            )));
        }
        Ok(())
    }

    /// From a proof of `u + C`, a derivation from `ū` to `C`.
    pub fn derive_from_dual(&self, phi: &Derivation, u: ConstId) -> Result<Derivation> {
        let seq = self.prepare(phi, false)?;
        let concl = seq.conclusion().clone();
        let uf = Formula::Const(u);
        let c = match (&concl, concl.conn()) {
            (Formula::App(_, l, r), Some(p)) if Some(p) == self.base.plus && self.base.equal_plus(l, &uf) => {
                (**r).clone()
            }
            _ => {
                return Err(SplitError::Precondition(format!(
                    "`{}` is not of the form `{} + C`",
                    self.sys.render(&concl),
                    self.sys.render(&uf)
                )))
            }
        };
        let (d, _) = self.run(|e| {
            let mut w = e.refine(&seq)?;
            e.eq_to(&mut w, e.sum(uf.clone(), c.clone()));
            let s = e.dual_lemma(&w, &uf)?;
            self.finish(e, &s, "dual derivation")
        })?;
        Ok(d)
    }

    /// Shallow splitting of a proof at the `+`-factor at `path` of its conclusion.
    pub fn shallow_split(&self, phi: &Derivation, path: &[Dir]) -> Result<SplitResult> {
        let seq = self.prepare(phi, false)?;
        self.split_target(seq.conclusion(), path)?;
        let ((q1, q2, psi, phi1, phi2), trace) = self.run(|e| {
            let w = e.refine(&seq)?;
            let r = e.split(&w, w.len(), path)?;
            Ok((
                r.q1,
                r.q2,
                self.finish(e, &r.psi, "ψ")?,
                self.finish(e, &r.phi1, "φ₁")?,
                self.finish(e, &r.phi2, "φ₂")?,
            ))
        })?;
        Ok(SplitResult { q1, q2, psi, phi1, phi2, trace })
    }

    /// Context reduction of a proof of `S{A}` with `A` at `hole`.
    pub fn context_reduce(&self, phi: &Derivation, hole: &[Dir]) -> Result<ContextReduction> {
        let seq = self.prepare(phi, false)?;
        if seq.conclusion().get(hole).is_none() {
            return Err(SplitError::Precondition(format!("no subformula at @{}", subatomic_core::render_path(hole))));
        }
        let ((k, h, zeta, chi), trace) = self.run(|e| {
            let w = e.refine(&seq)?;
            let r = e.reduce(&w, hole)?;
            let chi = e.fuse(&r.chi);
            chi.check(&self.base).map_err(|err| SplitError::Internal(format!("χ does not check: {err}")))?;
            let h = Context::around(&r.h, &r.hole).expect("hole path exists");
            Ok((r.k, h, self.finish(e, &r.zeta, "ζ")?, chi))
        })?;
        Ok(ContextReduction { k, h, zeta, chi, trace })
    }

    /// Eliminates the only up-rule step of `phi`.
    pub fn eliminate_cut_once(&self, phi: &Derivation) -> Result<Derivation> {
        let seq = self.prepare(phi, true)?;
        let ups = self.up_steps(&seq);
        match ups.as_slice() {
            [_] => Ok(self.eliminate(phi, seq)?.0),
            [] => Err(SplitError::Precondition("no up-rule step".into())),
            _ => Err(SplitError::Precondition(format!("{} up-rule steps; expected one", ups.len()))),
        }
    }

    /// Eliminates every up-rule step, topmost first.
    pub fn eliminate_cuts(&self, phi: &Derivation) -> Result<Derivation> {
        Ok(self.eliminate_cuts_traced(phi)?.0)
    }

    /// Like [`Splitter::eliminate_cuts`], also returning the splitting trace.
    pub fn eliminate_cuts_traced(&self, phi: &Derivation) -> Result<(Derivation, Vec<TraceEntry>)> {
        let seq = self.prepare(phi, true)?;
        if self.up_steps(&seq).is_empty() {
            return Ok((phi.clone(), Vec::new()));
        }
        self.eliminate(phi, seq)
    }

    fn up_steps(&self, seq: &Seq) -> Vec<usize> {
        (0..seq.len())
            .filter(|&i| match &seq.steps[i].rule {
                RuleRef::Named(n) => self.sys.rule(n).is_some_and(|r| r.kind == RuleKind::Up),
                RuleRef::Eq => false,
            })
            .collect()
    }

    fn eliminate(&self, phi: &Derivation, seq: Seq) -> Result<(Derivation, Vec<TraceEntry>)> {
        let premiss = phi.premiss();
        let sys = self.sys;
        self.run(|e| {
            let mut cur = seq;
            while let Some(i) = e.first_up(&cur, sys) {
                cur = e.eliminate_at(sys, &cur, i)?;
            }
            if cur.start != premiss {
                let mut s = Seq::new(premiss.clone());
                s.push_eq(sys, cur.start.clone());
                s.steps.extend(cur.steps);
                cur = s;
            }
            let d = e.fuse(&cur).to_derivation();
            d.check(sys).map_err(|err| SplitError::Internal(format!("cut-free proof does not check: {err}")))?;
            Ok(d)
        })
    }
}
