//! Client for external TPTP provers, run as local processes or reached
//! over an HTTP form endpoint in the style of SystemOnTPTP.

use std::fmt;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use holboard_core::tptp::{self, elab, printer, AnnotatedFormula, Dialect, Role, Statement, SzsStatus, TptpError};
use holboard_core::{Kernel, TermRef};
use thiserror::Error;

/// Extra wall-clock time granted on top of a prover's time limit.
pub const GRACE: Duration = Duration::from_secs(1);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProverMode {
    /// Command line; `{problem}` is replaced by the problem file path
    /// (appended if absent), `{timelimit}` by the limit in seconds.
    Local { command: Vec<String> },
    /// Form endpoint URL.
    Remote { url: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverSpec {
    pub name: String,
    pub mode: ProverMode,
    /// Seconds.
    pub time_limit: u64,
    pub dialect: Dialect,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("prover `{0}`: time limit must be positive")]
    ZeroTimeLimit(String),
    #[error("prover `{0}`: empty command")]
    EmptyCommand(String),
    #[error("prover `{0}`: bad endpoint url `{1}`")]
    BadUrl(String, String),
}

impl ProverSpec {
    pub fn local(name: &str, command: &[&str], time_limit: u64, dialect: Dialect) -> Self {
        ProverSpec {
            name: name.to_owned(),
            mode: ProverMode::Local {
                command: command.iter().map(|s| s.to_string()).collect(),
            },
            time_limit,
            dialect,
        }
    }

    pub fn remote(name: &str, url: &str, time_limit: u64, dialect: Dialect) -> Self {
        ProverSpec {
            name: name.to_owned(),
            mode: ProverMode::Remote { url: url.to_owned() },
            time_limit,
            dialect,
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.time_limit == 0 {
            return Err(SpecError::ZeroTimeLimit(self.name.clone()));
        }
        match &self.mode {
            ProverMode::Local { command } if command.is_empty() => Err(SpecError::EmptyCommand(self.name.clone())),
            ProverMode::Remote { url } => match url::Url::parse(url) {
                Ok(u) if matches!(u.scheme(), "http" | "https") => Ok(()),
                _ => Err(SpecError::BadUrl(self.name.clone(), url.clone())),
            },
            ProverMode::Local { .. } => Ok(()),
        }
    }

    pub fn deadline(&self) -> Duration {
        Duration::from_secs(self.time_limit) + GRACE
    }
}

impl fmt::Display for ProverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mode {
            ProverMode::Local { command } => write!(f, "{} local `{}`", self.name, command.join(" "))?,
            ProverMode::Remote { url } => write!(f, "{} remote {url}", self.name)?,
        }
        write!(f, " {}s {}", self.time_limit, self.dialect)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverResult {
    pub status: SzsStatus,
    /// Prover output, or the diagnostic for failures.
    pub raw_output: String,
    pub wall_time: Duration,
}

/// Problem text: one annotated formula per line.
pub fn problem_text(problem: &[AnnotatedFormula]) -> String {
    let mut out = String::new();
    for f in problem {
        out.push_str(&printer::annotated(f));
        out.push('\n');
    }
    out
}

/// A problem in `dialect`: type declarations first, then the formulas in
/// order with conjectures moved to the end.
pub fn render_problem(
    k: &Kernel,
    entries: &[(String, Role, TermRef)],
    dialect: Dialect,
) -> Result<Vec<AnnotatedFormula>, TptpError> {
    let terms: Vec<TermRef> = entries.iter().map(|(_, _, t)| t.clone()).collect();
    let mut out = elab::declarations(k, &terms, dialect);
    let (conjectures, rest): (Vec<_>, Vec<_>) = entries.iter().partition(|(_, r, _)| *r == Role::Conjecture);
    for (name, role, t) in rest.into_iter().chain(conjectures) {
        out.push(AnnotatedFormula {
            dialect,
            name: elab::quote_symbol(name),
            role: *role,
            statement: Statement::Logic(tptp::from_kernel(k, t, dialect)?),
            annotations: Vec::new(),
        });
    }
    Ok(out)
}

/// Sends `problem` to the prover and classifies the answer. Never fails:
/// launch and connection problems come back as Error, a missed deadline as
/// Timeout, output without a status line as Unknown.
pub fn submit(problem: &[AnnotatedFormula], spec: &ProverSpec) -> ProverResult {
    let start = Instant::now();
    let text = problem_text(problem);
    let (status, raw_output) = match spec.validate() {
        Err(e) => (SzsStatus::Error, e.to_string()),
        Ok(()) => match &spec.mode {
            ProverMode::Local { command } => run_local(command, &text, spec),
            ProverMode::Remote { url } => run_remote(url, &text, spec),
        },
    };
    ProverResult {
        status,
        raw_output,
        wall_time: start.elapsed(),
    }
}

fn classify(output: String) -> (SzsStatus, String) {
    (tptp::find_szs(&output).unwrap_or(SzsStatus::Unknown), output)
}

fn run_local(command: &[String], text: &str, spec: &ProverSpec) -> (SzsStatus, String) {
    let file = match tempfile::Builder::new().suffix(".p").tempfile() {
        Ok(f) => f,
        Err(e) => return (SzsStatus::Error, format!("cannot create problem file: {e}")),
    };
    if let Err(e) = file.as_file().write_all(text.as_bytes()) {
        return (SzsStatus::Error, format!("cannot write problem file: {e}"));
    }
    let path = file.path().to_string_lossy().into_owned();
    let limit = spec.time_limit.to_string();
    let mut args: Vec<String> = command
        .iter()
        .map(|a| a.replace("{problem}", &path).replace("{timelimit}", &limit))
        .collect();
    if !command.iter().any(|a| a.contains("{problem}")) {
        args.push(path);
    }
    let mut child = match Command::new(&args[0])
        .args(&args[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return (SzsStatus::Error, format!("cannot launch `{}`: {e}", args[0])),
    };
    let mut stdout = child.stdout.take().expect("piped");
    let mut stderr = child.stderr.take().expect("piped");
    let out_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });
    let deadline = Instant::now() + spec.deadline();
    let exit = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if Instant::now() >= deadline => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(e) => return (SzsStatus::Error, format!("lost `{}`: {e}", args[0])),
        }
    };
    let Some(exit) = exit else {
        return (SzsStatus::Timeout, format!("killed after {}s", spec.deadline().as_secs_f64()));
    };
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    match tptp::find_szs(&out) {
        Some(s) => (s, out),
        None if !exit.success() => (SzsStatus::Error, format!("{out}{err}exit status: {exit}")),
        None => (SzsStatus::Unknown, out),
    }
}

/// Form fields of a remote request, named after SystemOnTPTP's.
pub fn form_fields(text: &str, spec: &ProverSpec) -> Vec<(String, String)> {
    vec![
        ("ProblemSource".to_owned(), "FORMULAE".to_owned()),
        ("FORMULAEProblem".to_owned(), text.to_owned()),
        ("SubmitButton".to_owned(), "RunSelectedSystems".to_owned()),
        (format!("System___{}", spec.name), spec.name.clone()),
        (format!("TimeLimit___{}", spec.name), spec.time_limit.to_string()),
    ]
}

fn run_remote(url: &str, text: &str, spec: &ProverSpec) -> (SzsStatus, String) {
    let client = match reqwest::blocking::Client::builder().timeout(spec.deadline()).build() {
        Ok(c) => c,
        Err(e) => return (SzsStatus::Error, format!("http client: {e}")),
    };
    let response = client.post(url).form(&form_fields(text, spec)).send();
    let response = match response {
        Ok(r) => r,
        Err(e) if e.is_timeout() => return (SzsStatus::Timeout, format!("no reply within {}s", spec.deadline().as_secs_f64())),
        Err(e) => return (SzsStatus::Error, format!("request to {url} failed: {e}")),
    };
    let code = response.status();
    let body = match response.text() {
        Ok(b) => b,
        Err(e) if e.is_timeout() => return (SzsStatus::Timeout, format!("reply not finished within {}s", spec.deadline().as_secs_f64())),
        Err(e) => return (SzsStatus::Error, format!("reading reply from {url}: {e}")),
    };
    if !code.is_success() {
        return (SzsStatus::Error, format!("HTTP {code}\n{body}"));
    }
    classify(body)
}
