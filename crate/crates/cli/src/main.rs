use std::io::{BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use holboard_board::config::Config;
use holboard_cli::{run_script_file, Session};

/// Interactive shell for the holboard kernel and blackboard.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Run the commands in this file and print the transcript.
    #[arg(long, short)]
    script: Option<PathBuf>,
    /// TOML file with provers and agent settings.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Winners executed at once per auction round.
    #[arg(long, default_value_t = 4)]
    max_parallel: usize,
    /// Deadline for one `run`, in seconds.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    /// Round limit for one `run`.
    #[arg(long, default_value_t = 1000)]
    max_rounds: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.max_parallel == 0 {
        eprintln!("--max-parallel must be at least 1");
        return ExitCode::from(2);
    }
    let mut session = Session::new();
    session.scheduler.max_parallel = args.max_parallel;
    session.scheduler.timeout = Duration::from_secs(args.timeout);
    session.scheduler.max_rounds = args.max_rounds;
    if let Some(path) = &args.config {
        let applied = Config::load(path).map_err(|e| e.to_string()).and_then(|c| session.configure(&c));
        if let Err(e) = applied {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    }
    if let Some(path) = &args.script {
        return match run_script_file(&mut session, path) {
            Ok(transcript) => {
                print!("{transcript}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        };
    }
    repl(&mut session);
    ExitCode::SUCCESS
}

fn repl(session: &mut Session) {
    let interactive = std::io::stdin().is_terminal();
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            print!("holboard> ");
            let _ = std::io::stdout().flush();
        }
        let Some(Ok(line)) = lines.next() else {
            break;
        };
        let reply = session.execute(&line);
        if !reply.out.is_empty() {
            println!("{}", reply.out);
        }
        if !reply.err.is_empty() {
            eprint!("{}", reply.err);
        }
        if reply.quit {
            break;
        }
    }
}
