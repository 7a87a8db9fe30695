//! Command interpreter behind the `holboard` binary.
//!
//! A [`Session`] owns a kernel, a term index, a blackboard with a
//! `formulas` store, the stock agents and the configured provers. Each
//! input line is one command; terms are written in THF syntax and may
//! mention names introduced with `let`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use holboard_board::agents::{Agent, ExternalAgent, Formula, ParamodulationAgent, Rewrite, RewriteAgent, FORMULAS};
use holboard_board::blackboard::{Blackboard, ContextId, SplitKind};
use holboard_board::config::Config;
use holboard_board::external::{ProverMode, ProverSpec};
use holboard_board::mock::{Behavior, MockProver};
use holboard_board::scheduler::{run_loop, SchedulerConfig};
use holboard_core::index::TermIndex;
use holboard_core::normalize::{beta_normalize, eta_long};
use holboard_core::pretty::term_string;
use holboard_core::tptp::{self, elab, printer, Dialect, Elaborated, Elaborator, IncludeConfig, SzsStatus};
use holboard_core::{Head, Kernel, Strategy, Style, TermRef};

const HELP: &str = "\
commands:
  load <file>                      read a TPTP problem onto the root context
  parse <annotated formulas>       same, from inline TPTP text
  formulas [<ctx>]                 formulas visible in a context
  let <name> = <term>              bind a name to a THF term
  show <term> [named|nameless|spine|thf]
  type <term>                      type of a term
  normalize <term> [SS|SL|LS|LL|BASE]
  eta <term>                       β-normal η-long form
  index <term>                     add a term to the index
  query-head <symbol>              indexed terms with this head
  occurrences <term>               positions of a subterm in indexed terms
  context                          the context tree
  split <ctx> and|or <n>           split a leaf context
  status <ctx> [<status>]          show or set a leaf status
  agents [on|off <name>...]        list or toggle the stock agents
  provers                          list provers
  provers add <name> remote <url> <seconds> [<dialect>]
  provers add <name> local <seconds> <dialect> <command>...
  provers mock <name> <status> [<seconds>]
  provers bind <name> <ctx>        restrict a prover to one leaf
  run [<rounds>]                   run the scheduler
  stats                            timings and counters (printed to stderr)
  help
  quit";

/// Output of one command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reply {
    /// Transcript text.
    pub out: String,
    /// Text meant for stderr only.
    pub err: String,
    pub quit: bool,
}

impl Reply {
    fn text(out: impl Into<String>) -> Self {
        Reply {
            out: out.into(),
            ..Reply::default()
        }
    }
}

struct StockAgent {
    name: &'static str,
    enabled: bool,
    agent: Arc<dyn Agent>,
}

struct Prover {
    spec: ProverSpec,
    context: Option<ContextId>,
    /// Shown instead of the url for in-process mock endpoints.
    mock: Option<(SzsStatus, MockProver)>,
}

pub struct Session {
    k: Arc<Kernel>,
    bb: Blackboard,
    index: TermIndex,
    bindings: BTreeMap<String, TermRef>,
    agents: Vec<StockAgent>,
    provers: Vec<Prover>,
    pub scheduler: SchedulerConfig,
    base_dir: PathBuf,
    timings: Vec<(String, Duration)>,
}

type Res = Result<String, String>;

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Self {
        let k = Kernel::shared();
        let bb = Blackboard::new();
        bb.register_store::<Formula>(FORMULAS).expect("fresh board");
        let rewrite = |kind: Rewrite| Arc::new(RewriteAgent::new(k.clone(), kind)) as Arc<dyn Agent>;
        let agents = vec![
            StockAgent { name: "simplify", enabled: false, agent: rewrite(Rewrite::Simplify) },
            StockAgent { name: "nnf", enabled: false, agent: rewrite(Rewrite::Nnf) },
            StockAgent { name: "prenex", enabled: false, agent: rewrite(Rewrite::Prenex) },
            StockAgent { name: "skolemize", enabled: false, agent: rewrite(Rewrite::Skolemize) },
            StockAgent {
                name: "paramodulation",
                enabled: false,
                agent: Arc::new(ParamodulationAgent::new(k.clone())),
            },
        ];
        Session {
            k,
            bb,
            index: TermIndex::new(),
            bindings: BTreeMap::new(),
            agents,
            provers: Vec::new(),
            scheduler: SchedulerConfig::default(),
            base_dir: PathBuf::from("."),
            timings: Vec::new(),
        }
    }

    /// Applies provers and agent settings from a configuration file.
    pub fn configure(&mut self, config: &Config) -> Result<(), String> {
        for spec in &config.provers {
            self.add_prover(spec.clone(), None)?;
        }
        for (name, settings) in &config.agents {
            let k = self.k.clone();
            let a = self
                .agents
                .iter_mut()
                .find(|a| a.name == name)
                .ok_or_else(|| format!("unknown agent `{name}` in configuration"))?;
            if let Some(bid) = settings.bid {
                if !(bid >= 0.0 && bid.is_finite()) {
                    return Err(format!("agent `{name}`: bid must be a non-negative number"));
                }
                a.agent = match a.name {
                    "simplify" => Arc::new(RewriteAgent::new(k, Rewrite::Simplify).with_weight(bid)),
                    "nnf" => Arc::new(RewriteAgent::new(k, Rewrite::Nnf).with_weight(bid)),
                    "prenex" => Arc::new(RewriteAgent::new(k, Rewrite::Prenex).with_weight(bid)),
                    "skolemize" => Arc::new(RewriteAgent::new(k, Rewrite::Skolemize).with_weight(bid)),
                    _ => Arc::new(ParamodulationAgent::new(k).with_bid(bid)),
                };
            }
            a.enabled = settings.enabled.unwrap_or(true);
        }
        Ok(())
    }

    /// Directory that relative `load` paths are resolved against.
    pub fn set_base_dir(&mut self, dir: &Path) {
        self.base_dir = dir.to_path_buf();
    }

    pub fn kernel(&self) -> &Arc<Kernel> {
        &self.k
    }

    pub fn blackboard(&self) -> &Blackboard {
        &self.bb
    }

    /// Runs one command line. Never panics: internal failures come back
    /// as diagnostics.
    pub fn execute(&mut self, line: &str) -> Reply {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Reply::default();
        }
        let start = Instant::now();
        let reply = match catch_unwind(AssertUnwindSafe(|| self.dispatch(line))) {
            Ok(r) => r,
            Err(p) => {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Reply::text(format!("internal error: {msg}"))
            }
        };
        let verb = line.split_whitespace().next().unwrap_or_default().to_owned();
        self.timings.push((verb, start.elapsed()));
        reply
    }

    fn dispatch(&mut self, line: &str) -> Reply {
        let (verb, rest) = match line.split_once(char::is_whitespace) {
            Some((v, r)) => (v, r.trim()),
            None => (line, ""),
        };
        let result = match verb {
            "help" => Ok(HELP.to_owned()),
            "quit" | "exit" => {
                return Reply {
                    quit: true,
                    ..Reply::default()
                }
            }
            "load" => self.load(rest),
            "parse" => self.parse(rest),
            "formulas" => self.formulas(rest),
            "let" => self.bind(rest),
            "show" => self.show(rest),
            "type" => self.type_of(rest),
            "normalize" => self.normalize(rest),
            "eta" => self.eta(rest),
            "index" => self.index(rest),
            "query-head" => self.query_head(rest),
            "occurrences" => self.occurrences(rest),
            "context" => Ok(self.bb.dump().trim_end().to_owned()),
            "split" => self.split(rest),
            "status" => self.status(rest),
            "agents" => self.agents(rest),
            "provers" => self.provers(rest),
            "run" => self.run(rest),
            "stats" => return Reply { err: self.stats(), ..Reply::default() },
            other => Err(format!("unknown command `{other}`\n{HELP}")),
        };
        match result {
            Ok(out) => Reply::text(out),
            Err(e) => Reply::text(format!("error: {e}")),
        }
    }

    fn term(&self, text: &str) -> Result<TermRef, String> {
        if text.is_empty() {
            return Err("expected a term".into());
        }
        let e = tptp::parse_expr(text, Dialect::Thf).map_err(|e| e.to_string())?;
        Elaborator::new(&self.k)
            .with_definitions(&self.bindings)
            .term(&e, Dialect::Thf, None)
            .map_err(|e| e.to_string())
    }

    fn thf(&self, t: &TermRef) -> String {
        match tptp::from_kernel(&self.k, t, Dialect::Thf) {
            Ok(e) => printer::formula(&e, Dialect::Thf),
            Err(_) => term_string(&self.k, t, Style::Named),
        }
    }

    fn type_text(&self, t: &TermRef) -> String {
        printer::type_text(&elab::type_to_expr(&self.k, t.ty()), Dialect::Thf)
    }

    fn context_arg(&self, s: &str) -> Result<ContextId, String> {
        let id = s
            .strip_prefix('c')
            .and_then(|n| n.parse::<u32>().ok())
            .ok_or_else(|| format!("expected a context like c0, got `{s}`"))?;
        let c = ContextId(id);
        self.bb.context(c).map_err(|e| e.to_string())?;
        Ok(c)
    }

    fn add_formulas(&mut self, items: Vec<tptp::AnnotatedFormula>, source: &str) -> Res {
        let el = Elaborator::new(&self.k);
        let mut formulas = Vec::new();
        let mut declarations = 0;
        for f in &items {
            match el.elaborate(f).map_err(|e| e.to_string())? {
                Elaborated::Formula(term) => formulas.push(Formula {
                    name: f.name.clone(),
                    role: f.role,
                    term,
                }),
                Elaborated::Declaration(_) => declarations += 1,
            }
        }
        let n = formulas.len();
        let root = self.bb.root();
        let mut delta = holboard_board::Delta::new();
        for f in formulas {
            delta = delta.insert(FORMULAS, f, root);
        }
        self.bb.apply(delta).map_err(|e| e.to_string())?;
        Ok(format!("{source}: {n} formulas, {declarations} declarations"))
    }

    fn load(&mut self, rest: &str) -> Res {
        if rest.is_empty() {
            return Err("usage: load <file>".into());
        }
        let path = self.base_dir.join(rest);
        let items = tptp::parse_file(&path, &IncludeConfig::default()).map_err(|e| match e {
            tptp::TptpError::Io { message, .. } => format!("cannot read `{rest}`: {message}"),
            other => other.to_string(),
        })?;
        self.add_formulas(items, rest)
    }

    fn parse(&mut self, rest: &str) -> Res {
        let items = tptp::parse(rest).map_err(|e| e.to_string())?;
        if items.is_empty() {
            return Err("no annotated formulas".into());
        }
        self.add_formulas(items, "parsed")
    }

    fn formulas(&self, rest: &str) -> Res {
        let c = if rest.is_empty() { self.bb.root() } else { self.context_arg(rest)? };
        let fs = self.bb.query::<Formula>(FORMULAS, c).map_err(|e| e.to_string())?;
        if fs.is_empty() {
            return Ok("no formulas".into());
        }
        let mut out = String::new();
        for (id, f) in fs {
            let _ = writeln!(out, "{id} {} ({}): {}", f.name, f.role, self.thf(&f.term));
        }
        out.pop();
        Ok(out)
    }

    fn bind(&mut self, rest: &str) -> Res {
        let (name, body) = rest.split_once('=').ok_or("usage: let <name> = <term>")?;
        let name = name.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(format!("`{name}` is not a lowercase identifier"));
        }
        let t = self.term(body.trim())?;
        let ty = self.type_text(&t);
        self.bindings.insert(name.to_owned(), t);
        Ok(format!("{name} : {ty}"))
    }

    fn show(&self, rest: &str) -> Res {
        let (text, style) = match rest.rsplit_once(char::is_whitespace) {
            Some((t, s)) if matches!(s, "named" | "nameless" | "spine" | "thf") => (t.trim(), s),
            _ => (rest, "thf"),
        };
        let t = self.term(text)?;
        Ok(match style {
            "thf" => self.thf(&t),
            s => term_string(&self.k, &t, s.parse().expect("checked style")),
        })
    }

    fn type_of(&self, rest: &str) -> Res {
        Ok(self.type_text(&self.term(rest)?))
    }

    fn normalize(&self, rest: &str) -> Res {
        let (text, strategy) = match rest.rsplit_once(char::is_whitespace) {
            Some((t, s)) if Strategy::ALL.iter().any(|st| st.name() == s) => (t.trim(), s.parse().expect("known")),
            _ => (rest, Strategy::SS),
        };
        let t = self.term(text)?;
        let (nf, stats) = beta_normalize(&self.k, &t, strategy).map_err(|e| e.to_string())?;
        Ok(format!("{}\nsteps: {}", self.thf(&nf), stats.reduction_steps))
    }

    fn eta(&self, rest: &str) -> Res {
        let t = self.term(rest)?;
        let (nf, _) = beta_normalize(&self.k, &t, Strategy::SS).map_err(|e| e.to_string())?;
        Ok(self.thf(&eta_long(&self.k, &nf)))
    }

    fn index(&mut self, rest: &str) -> Res {
        let t = self.term(rest)?;
        let long = self.index.insert(&self.k, &t).map_err(|e| e.to_string())?;
        Ok(format!("indexed {} ({} terms)", self.thf(&long), self.index.len()))
    }

    fn query_head(&self, rest: &str) -> Res {
        let name = elab::symbol_name(rest);
        let id = self.k.signature().lookup(&name).ok_or_else(|| format!("unknown symbol `{rest}`"))?;
        let head = Head::Const(id, self.k.constant(id).ty().clone());
        let mut hits: Vec<String> = self.index.by_head(&head).iter().map(|t| self.thf(t)).collect();
        hits.sort();
        Ok(if hits.is_empty() { "no terms".into() } else { hits.join("\n") })
    }

    fn occurrences(&self, rest: &str) -> Res {
        let t = self.term(rest)?;
        let (nf, _) = beta_normalize(&self.k, &t, Strategy::SS).map_err(|e| e.to_string())?;
        let sub = eta_long(&self.k, &nf);
        let mut hits: Vec<String> = self
            .index
            .occurrences(&sub)
            .iter()
            .map(|(parent, pos)| format!("{} at {pos}", self.thf(parent)))
            .collect();
        hits.sort();
        Ok(if hits.is_empty() { "no occurrences".into() } else { hits.join("\n") })
    }

    fn split(&mut self, rest: &str) -> Res {
        let args: Vec<&str> = rest.split_whitespace().collect();
        let [ctx, kind, n] = args[..] else {
            return Err("usage: split <ctx> and|or <n>".into());
        };
        let c = self.context_arg(ctx)?;
        let kind = match kind {
            "and" | "AND" => SplitKind::And,
            "or" | "OR" => SplitKind::Or,
            other => return Err(format!("expected and/or, got `{other}`")),
        };
        let n: usize = n.parse().map_err(|_| format!("expected a count, got `{n}`"))?;
        let kids = self.bb.split(c, kind, n).map_err(|e| e.to_string())?;
        let names: Vec<String> = kids.iter().map(ToString::to_string).collect();
        Ok(format!("{c} {kind}: {}", names.join(", ")))
    }

    fn status(&mut self, rest: &str) -> Res {
        let args: Vec<&str> = rest.split_whitespace().collect();
        match args[..] {
            [] => Ok(format!("{} {}", self.bb.root(), self.bb.status(self.bb.root()).map_err(|e| e.to_string())?)),
            [ctx] => {
                let c = self.context_arg(ctx)?;
                Ok(format!("{c} {}", self.bb.status(c).map_err(|e| e.to_string())?))
            }
            [ctx, s] => {
                let c = self.context_arg(ctx)?;
                let s: SzsStatus = s.parse()?;
                let events = self.bb.set_status(c, s).map_err(|e| e.to_string())?;
                if events.is_empty() {
                    return Ok("unchanged".into());
                }
                let lines: Vec<String> = events
                    .iter()
                    .map(|e| format!("{} {}", e.context, e.status.expect("status event")))
                    .collect();
                Ok(lines.join("\n"))
            }
            _ => Err("usage: status <ctx> [<status>]".into()),
        }
    }

    fn agents(&mut self, rest: &str) -> Res {
        let args: Vec<&str> = rest.split_whitespace().collect();
        if let Some((&switch, names)) = args.split_first() {
            let on = match switch {
                "on" => true,
                "off" => false,
                _ => return Err("usage: agents [on|off <name>...]".into()),
            };
            if names.is_empty() {
                return Err("name at least one agent".into());
            }
            for n in names {
                if !self.agents.iter().any(|a| a.name == *n) {
                    return Err(format!("unknown agent `{n}`"));
                }
            }
            for a in &mut self.agents {
                if names.contains(&a.name) {
                    a.enabled = on;
                }
            }
        }
        let mut out: Vec<String> = self
            .agents
            .iter()
            .map(|a| format!("{} {}", a.name, if a.enabled { "on" } else { "off" }))
            .collect();
        for p in &self.provers {
            out.push(format!("{} on (prover)", external_name(p)));
        }
        Ok(out.join("\n"))
    }

    fn add_prover(&mut self, spec: ProverSpec, mock: Option<(SzsStatus, MockProver)>) -> Result<(), String> {
        spec.validate().map_err(|e| e.to_string())?;
        if self.provers.iter().any(|p| p.spec.name == spec.name) {
            return Err(format!("prover `{}` already exists", spec.name));
        }
        self.provers.push(Prover { spec, context: None, mock });
        Ok(())
    }

    fn provers(&mut self, rest: &str) -> Res {
        let args: Vec<&str> = rest.split_whitespace().collect();
        let dialect = |s: &str| Dialect::from_keyword(s).ok_or_else(|| format!("unknown dialect `{s}`"));
        let seconds = |s: &str| s.parse::<u64>().map_err(|_| format!("expected seconds, got `{s}`"));
        match args[..] {
            [] => {}
            ["add", name, "remote", url, limit] => self.add_prover(ProverSpec::remote(name, url, seconds(limit)?, Dialect::Thf), None)?,
            ["add", name, "remote", url, limit, d] => self.add_prover(ProverSpec::remote(name, url, seconds(limit)?, dialect(d)?), None)?,
            ["add", name, "local", limit, d, ref command @ ..] if !command.is_empty() => {
                self.add_prover(ProverSpec::local(name, command, seconds(limit)?, dialect(d)?), None)?
            }
            ["mock", name, status] | ["mock", name, status, _] => {
                let status: SzsStatus = status.parse()?;
                let limit = args.get(3).map(|s| seconds(s)).transpose()?.unwrap_or(5);
                let server = MockProver::start(Behavior::Status(status)).map_err(|e| format!("cannot start mock prover: {e}"))?;
                let spec = ProverSpec::remote(name, &server.url(), limit, Dialect::Thf);
                self.add_prover(spec, Some((status, server)))?;
            }
            ["bind", name, ctx] => {
                let c = self.context_arg(ctx)?;
                let p = self
                    .provers
                    .iter_mut()
                    .find(|p| p.spec.name == name)
                    .ok_or_else(|| format!("unknown prover `{name}`"))?;
                p.context = Some(c);
            }
            ["remove", name] => {
                let before = self.provers.len();
                self.provers.retain(|p| p.spec.name != name);
                if self.provers.len() == before {
                    return Err(format!("unknown prover `{name}`"));
                }
            }
            _ => return Err("usage: provers [add|mock|bind|remove ...] (see help)".into()),
        }
        if self.provers.is_empty() {
            return Ok("no provers".into());
        }
        let lines: Vec<String> = self.provers.iter().map(describe_prover).collect();
        Ok(lines.join("\n"))
    }

    fn run(&mut self, rest: &str) -> Res {
        let mut config = self.scheduler.clone();
        if !rest.is_empty() {
            config.max_rounds = rest.parse().map_err(|_| format!("expected a round limit, got `{rest}`"))?;
        }
        let mut agents: Vec<Arc<dyn Agent>> = self.agents.iter().filter(|a| a.enabled).map(|a| a.agent.clone()).collect();
        for p in &self.provers {
            let a = ExternalAgent::new(self.k.clone(), p.spec.clone());
            agents.push(Arc::new(match p.context {
                Some(c) => a.bound_to(c),
                None => a,
            }));
        }
        let start = Instant::now();
        let report = run_loop(&self.bb, &agents, &config);
        self.timings.push(("run (scheduler)".into(), start.elapsed()));
        let mut out = report.trace.join("\n");
        let _ = write!(out, "\nresult: {}", report.status);
        Ok(out)
    }

    fn stats(&self) -> String {
        let b = self.k.stats();
        let i = self.index.stats();
        let mut out = format!(
            "kernel: {} terms, {} types, {} substitutions, {} construction requests\nindex: {} terms, {} heads, {} subterms, {} occurrences\n",
            b.terms, b.types, b.substitutions, b.requests, i.terms, i.distinct_heads, i.distinct_subterms, i.occurrences
        );
        for (verb, d) in self.timings.iter().rev().take(10).rev() {
            let _ = writeln!(out, "{verb}: {:.3} ms", d.as_secs_f64() * 1e3);
        }
        out
    }
}

fn external_name(p: &Prover) -> String {
    match p.context {
        Some(c) => format!("{}/{c}", p.spec.name),
        None => p.spec.name.clone(),
    }
}

fn describe_prover(p: &Prover) -> String {
    let how = match (&p.mock, &p.spec.mode) {
        (Some((s, _)), _) => format!("mock answering {s}"),
        (None, ProverMode::Remote { url }) => format!("remote {url}"),
        (None, ProverMode::Local { command }) => format!("local `{}`", command.join(" ")),
    };
    let bound = p.context.map(|c| format!(", bound to {c}")).unwrap_or_default();
    format!("{} {how}, {}s, {}{bound}", p.spec.name, p.spec.time_limit, p.spec.dialect)
}

/// Runs `text` line by line. The transcript echoes each command after
/// `> ` followed by its output; blank lines and `#` comments are skipped.
/// Stops at `quit`.
pub fn run_script(session: &mut Session, text: &str) -> String {
    let mut transcript = String::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let reply = session.execute(trimmed);
        let _ = writeln!(transcript, "> {trimmed}");
        if !reply.out.is_empty() {
            transcript.push_str(&reply.out);
            transcript.push('\n');
        }
        if !reply.err.is_empty() {
            eprint!("{}", reply.err);
        }
        if reply.quit {
            break;
        }
    }
    transcript
}

/// Runs a script file; relative `load` paths resolve against its
/// directory.
pub fn run_script_file(session: &mut Session, path: &Path) -> Result<String, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
    if let Some(dir) = path.parent() {
        session.set_base_dir(dir);
    }
    Ok(run_script(session, &text))
}
