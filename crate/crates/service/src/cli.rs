//! The `ndlab` command line.
//!
//! Exit codes: 0 when a proof closes (or the command succeeded), 1 when a
//! `check` script ends by refuting its exercise, 2 on any error or an
//! unfinished proof. A refute exercise therefore passes `check` with exit 1.
//!
//! Environment fallbacks: `NDLAB_DATA_DIR`, `NDLAB_PORT`, `NDLAB_HOST`.

use std::io::{BufRead, IsTerminal, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use ndlab_core::corpus;
use ndlab_core::exercise::{ExercisePack, ExerciseSpec, Mode, View};
use ndlab_core::generate::{generate_batch, GeneratorConfig};
use ndlab_core::kernel::tree_to_text;
use ndlab_core::tactic::{ProofStatus, Runner, StepReport};

use crate::session::goals_of;
use crate::store::{SessionFile, Store};

#[derive(Parser, Debug)]
#[command(name = "ndlab", version, about = "Natural-deduction workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Prove,
    Refute,
    Mystery,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Prove => Mode::Prove,
            ModeArg::Refute => Mode::Refute,
            ModeArg::Mystery => Mode::Mystery,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Run a script against an exercise and report how it ends.
    Check {
        /// Exercise id, a JSON exercise file, or `PACK.json#ID`.
        exercise: String,
        script: PathBuf,
        #[arg(long, env = "NDLAB_DATA_DIR")]
        data_dir: Option<PathBuf>,
    },
    /// Work on an exercise interactively.
    Repl {
        exercise: String,
        #[arg(long, env = "NDLAB_DATA_DIR")]
        data_dir: Option<PathBuf>,
    },
    /// Generate an exercise pack; the output depends only on the arguments.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        symbols: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        hypotheses: usize,
        #[arg(long, default_value_t = 200)]
        max_attempts: usize,
        /// Write the pack here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "NDLAB_DATA_DIR", default_value = "ndlab-data")]
        data_dir: PathBuf,
        #[arg(long, env = "NDLAB_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "NDLAB_HOST", default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
    /// Replay a session file and print its frames.
    Replay {
        session_file: PathBuf,
        /// Print the replay log as JSON.
        #[arg(long)]
        json: bool,
    },
}

/// Finds an exercise by file path, `pack#id`, data-dir id, or corpus id.
pub fn resolve_exercise(spec: &str, data_dir: Option<&Path>) -> anyhow::Result<ExerciseSpec> {
    let (file, id) = match spec.split_once('#') {
        Some((f, i)) => (f, Some(i)),
        None => (spec, None),
    };
    if Path::new(file).is_file() {
        let text = std::fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
        let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {file}"))?;
        if value.get("exercises").is_none() {
            return Ok(ExerciseSpec::from_json(&value)?);
        }
        let pack = ExercisePack::from_json_str(&text)?;
        return match (id, pack.exercises.len()) {
            (Some(id), _) => pack
                .exercises
                .into_iter()
                .find(|e| e.id == id)
                .ok_or_else(|| anyhow!("{file} has no exercise `{id}`")),
            (None, 1) => Ok(pack.exercises.into_iter().next().unwrap()),
            (None, n) => bail!("{file} holds {n} exercises; name one as {file}#ID"),
        };
    }
    if let Some(dir) = data_dir {
        return Ok(Store::open(dir)?.exercise(spec)?);
    }
    corpus::exercise(spec)
        .cloned()
        .ok_or_else(|| anyhow!("no exercise `{spec}` (not a file or a corpus id)"))
}

fn print_goals(runner: &Runner, out: &mut impl Write) -> std::io::Result<()> {
    let goals = goals_of(runner.state());
    if goals.is_empty() {
        writeln!(out, "no open goals")?;
    }
    for g in goals {
        let hyps: Vec<String> = g.hypotheses.iter().map(|h| format!("{}: {}", h.label, h.formula)).collect();
        writeln!(out, "goal {}: {} |- {}", g.id, hyps.join(", "), g.conclusion)?;
    }
    Ok(())
}

fn print_report(r: &StepReport, out: &mut impl Write) -> std::io::Result<()> {
    for step in &r.applied {
        writeln!(out, "  [goal {}] {}", step.goal, step.step)?;
    }
    for d in &r.diagnostics {
        writeln!(out, "  note: {d}")?;
    }
    if let Some(trace) = &r.refutation {
        writeln!(out, "{}", serde_json::to_string_pretty(trace).unwrap_or_default())?;
    }
    Ok(())
}

fn status_code(s: ProofStatus) -> i32 {
    match s {
        ProofStatus::Proved => 0,
        ProofStatus::Refuted => 1,
        ProofStatus::Open => 2,
    }
}

fn check(exercise: &str, script: &Path, data_dir: Option<&Path>) -> anyhow::Result<i32> {
    let spec = resolve_exercise(exercise, data_dir)?;
    let text = std::fs::read_to_string(script).with_context(|| format!("reading {}", script.display()))?;
    let mut runner = Runner::new(spec)?;
    if let Err((line, e)) = runner.run_script(&text) {
        eprintln!("{}:{line}: {}: {e}", script.display(), e.kind());
        return Ok(2);
    }
    match runner.status() {
        ProofStatus::Proved => println!("proved"),
        ProofStatus::Refuted => println!("refuted"),
        ProofStatus::Open => {
            println!("open: {} goal(s) remain", runner.state().open_goals().len());
        }
    }
    Ok(status_code(runner.status()))
}

fn repl(exercise: &str, data_dir: Option<&Path>) -> anyhow::Result<i32> {
    let spec = resolve_exercise(exercise, data_dir)?;
    let mut runner = Runner::new(spec)?;
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    let mut out = std::io::stdout();
    print_goals(&runner, &mut out)?;
    loop {
        if interactive {
            write!(out, "> ")?;
            out.flush()?;
        }
        let mut line = String::new();
        if stdin.lock().read_line(&mut line)? == 0 {
            break;
        }
        match line.trim() {
            ":quit" | ":q" => break,
            ":goals" => print_goals(&runner, &mut out)?,
            ":hint" => match runner.hint(None) {
                Ok(h) => writeln!(out, "hint: {}", h.text)?,
                Err(e) => writeln!(out, "error: {e}")?,
            },
            ":palette" => {
                if let Some(g) = runner.state().open_goals().first() {
                    for r in runner.state().list_applicable(*g)? {
                        writeln!(out, "  {r}")?;
                    }
                }
            }
            ":tree" => match runner.proof_tree() {
                Some(t) => write!(out, "{}", tree_to_text(t))?,
                None => writeln!(out, "no finished proof")?,
            },
            _ => match runner.execute(&line) {
                Ok(None) => {}
                Ok(Some(r)) => {
                    print_report(&r, &mut out)?;
                    match r.status {
                        ProofStatus::Open => print_goals(&runner, &mut out)?,
                        ProofStatus::Proved => writeln!(out, "proved")?,
                        ProofStatus::Refuted => writeln!(out, "refuted")?,
                    }
                }
                Err(e) => writeln!(out, "error: {}: {e}", e.kind())?,
            },
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn gen(
    seed: u64,
    mode: Mode,
    count: usize,
    symbols: usize,
    depth: usize,
    hypotheses: usize,
    max_attempts: usize,
    out: Option<&Path>,
) -> anyhow::Result<i32> {
    let mut config = GeneratorConfig::new(seed, mode);
    config.num_symbols = symbols;
    config.max_depth = depth;
    config.num_hypotheses = hypotheses;
    config.max_attempts = max_attempts;
    let exercises = generate_batch(&config, count)?;
    let pack = ExercisePack {
        name: format!("generated-{seed}"),
        exercises,
    };
    let text = pack.to_json_string(View::Instructor) + "\n";
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn replay_file(path: &Path, json: bool) -> anyhow::Result<i32> {
    let file = SessionFile::read(path)?;
    let (log, runner) = file.replay()?;
    if json {
        println!("{}", serde_json::to_string_pretty(&log)?);
    } else {
        for f in &log.frames {
            let cmd = f.command.as_deref().unwrap_or("(start)");
            println!("{:>3}  {}  {} open  {}", f.index, &f.hash[..12], f.goals.len(), cmd);
        }
        let rejected = file.events.iter().filter(|e| !e.outcome.is_accepted()).count();
        println!("{} events, {rejected} rejected, status {:?}", file.events.len(), runner.status());
    }
    Ok(0)
}

fn serve(data_dir: &Path, host: std::net::IpAddr, port: u16) -> anyhow::Result<i32> {
    let store = Arc::new(Store::open(data_dir)?);
    let addr = SocketAddr::new(host, port);
    eprintln!("serving {} on http://{addr}", data_dir.display());
    tokio::runtime::Runtime::new()?.block_on(crate::api::serve(store, addr))?;
    Ok(0)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Cmd::Check {
            exercise,
            script,
            data_dir,
        } => check(&exercise, &script, data_dir.as_deref()),
        Cmd::Repl { exercise, data_dir } => repl(&exercise, data_dir.as_deref()),
        Cmd::Gen {
            seed,
            mode,
            count,
            symbols,
            depth,
            hypotheses,
            max_attempts,
            out,
        } => gen(seed, mode.into(), count, symbols, depth, hypotheses, max_attempts, out.as_deref()),
        Cmd::Serve { data_dir, port, host } => serve(&data_dir, host, port),
        Cmd::Replay { session_file, json } => replay_file(&session_file, json),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        2
    })
}
