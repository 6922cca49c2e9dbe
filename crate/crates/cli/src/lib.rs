//! The `ccrsim` command line: run or check a CCRScript file.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ccrscript::frontend::{compile, InstructionStream, ScriptError};
use ccrscript::output::{render_svg, write_report, write_trace, SvgOptions};
use ccrscript::scene::scan_timeline;
use ccrscript::scheduler::{schedule, ScheduleError, Timeline};
use ccrscript::Config;
use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
/// Unreadable input, bad arguments, parse or expansion errors, failed writes.
pub const EXIT_SCRIPT: i32 = 1;
/// Path planning or speed profile failures.
pub const EXIT_PLAN: i32 = 2;
/// Scene warnings under `--strict`.
pub const EXIT_WARNINGS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ccrsim", version, about = "Simulate CCRScript robot choreographies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a script and write the requested outputs.
    Run {
        file: PathBuf,
        /// Sampling step in seconds for the trace, the SVG and the scene scan.
        #[arg(long, default_value_t = 0.02, value_parser = positive_seconds)]
        dt: f64,
        /// Write the pose trace (JSON lines) to a file, or `-` for stdout.
        #[arg(long)]
        trace: Option<String>,
        /// Write an SVG drawing of the scene and trajectories.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the timing report to a file, or `-` for stdout.
        #[arg(long)]
        report: Option<String>,
        /// Default speed limits and turning radius (`key = value` lines).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Exit with status 3 if any robot enters an illegal position.
        #[arg(long)]
        strict: bool,
    },
    /// Parse and plan a script without writing outputs.
    Check {
        file: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(v) => Err(format!("must be a positive number of seconds, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

/// Failure carrying the exit status it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn script_error(path: &Path, e: &ScriptError) -> Failure {
    Failure::new(EXIT_SCRIPT, format!("{}:{}: error: {}", path.display(), e.span, e.kind))
}

fn schedule_error(path: &Path, stream: &InstructionStream, e: &ScheduleError) -> Failure {
    let message = match e.instruction().map(|i| &stream.instructions[i]) {
        Some(ins) => {
            let detail = match e {
                ScheduleError::Geometry { source, .. } => source.to_string(),
                ScheduleError::Motion { source, .. } => source.to_string(),
                other => other.to_string(),
            };
            format!("{}:{}: error: {}: {detail}", path.display(), ins.span, ins.text)
        }
        None => format!("{}: error: {e}", path.display()),
    };
    Failure::new(EXIT_PLAN, message)
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_SCRIPT, format!("cannot read {}: {e}", path.display())))?;
    Config::from_toml_str(&text).map_err(|e| Failure::new(EXIT_SCRIPT, format!("{}: {e}", path.display())))
}

fn load(file: &Path, config: Option<&Path>) -> Result<(InstructionStream, Timeline), Failure> {
    let config = load_config(config)?;
    let source = fs::read_to_string(file)
        .map_err(|e| Failure::new(EXIT_SCRIPT, format!("cannot read {}: {e}", file.display())))?;
    let stream = compile(&source).map_err(|e| script_error(file, &e))?;
    let timeline = schedule(&stream, &config).map_err(|e| schedule_error(file, &stream, &e))?;
    Ok((stream, timeline))
}

fn emit(target: &str, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    let result = if target == "-" {
        stdout.write_all(bytes)
    } else {
        fs::write(target, bytes)
    };
    result.map_err(|e| Failure::new(EXIT_SCRIPT, format!("cannot write {target}: {e}")))
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Check { file, config } => {
            let (stream, timeline) = load(&file, config.as_deref())?;
            let _ = writeln!(
                stdout,
                "{}: ok, {} robots, {} instructions, {:.3} s",
                file.display(),
                stream.robots.len(),
                stream.instructions.len(),
                timeline.duration()
            );
            Ok(EXIT_OK)
        }
        Command::Run {
            file,
            dt,
            trace,
            svg,
            report,
            config,
            strict,
        } => {
            let (stream, timeline) = load(&file, config.as_deref())?;
            for notice in timeline.notices() {
                let at = notice
                    .instruction
                    .map(|i| format!(":{}", stream.instructions[i].span))
                    .unwrap_or_default();
                let _ = writeln!(stderr, "{}{at}: note: {}", file.display(), notice.message);
            }
            let warnings = scan_timeline(&stream.scene, &timeline, dt);
            for w in &warnings {
                let _ = writeln!(stderr, "{}: warning: {w}", file.display());
            }
            if let Some(target) = trace {
                let mut buf = Vec::new();
                write_trace(&timeline, dt, &mut buf)
                    .map_err(|e| Failure::new(EXIT_SCRIPT, format!("cannot write trace: {e}")))?;
                emit(&target, &buf, stdout)?;
            }
            if let Some(path) = svg {
                let doc = render_svg(&stream.scene, &stream.robots, &timeline, &SvgOptions { dt });
                fs::write(&path, doc)
                    .map_err(|e| Failure::new(EXIT_SCRIPT, format!("cannot write {}: {e}", path.display())))?;
            }
            if let Some(target) = report {
                emit(&target, write_report(&stream, &timeline).as_bytes(), stdout)?;
            }
            Ok(if strict && !warnings.is_empty() {
                EXIT_WARNINGS
            } else {
                EXIT_OK
            })
        }
    }
}

/// Runs the command line with `args` (program name first) and returns the exit status.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCRIPT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let code = match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.message);
            f.code
        }
    };
    let _ = stdout.flush();
    code
}

/// Entry point used by the binary.
pub fn main_with_std() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
