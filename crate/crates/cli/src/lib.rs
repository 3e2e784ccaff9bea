//! The `pww` command line: `check`, `prove`, `relate`, `render` and
//! `convert` over construction files.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pww_core::construction::{parse_goal, parse_source, print, GoalError, ParseError};
use pww_core::engine::{prove, ProveError, SaturationLimits, SaturationReport};
use pww_core::ggb::{export_ggb, import_ggb, supported_commands, GgbError};
use pww_core::numeric::{check_conjecture, instantiate, relate, NumericError, Verdict};
use pww_core::proof::{document_for_run, render_html, ProofDocument, ProofError, ViewerAssets};
use pww_core::{Construction, GoalStatement, Label, NumericModel, Tolerances};

/// Process exit statuses. Scripts rely on these values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Proved = 0,
    Refuted = 1,
    Unknown = 2,
    InputError = 3,
    Unsupported = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::InputError,
            CliError::Unsupported(_) => ExitCode::Unsupported,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GoalError> for CliError {
    fn from(e: GoalError) -> Self {
        CliError::Input(format!("bad goal: {e}"))
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ProveError> for CliError {
    fn from(e: ProveError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ProofError> for CliError {
    fn from(e: ProofError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "pww", version, about = "Numeric check, synthetic proof and visual proof export for constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a conjecture on random witnesses.
    Check(CheckArgs),
    /// Check, then prove a conjecture and write the proof document.
    Prove(ProveArgs),
    /// List relations that hold numerically among selected objects.
    Relate(RelateArgs),
    /// Turn a proof document into a standalone HTML page.
    Render(RenderArgs),
    /// Convert between the construction language and .ggb archives.
    Convert(ConvertArgs),
}

#[derive(Args, Debug)]
struct NumericArgs {
    /// Construction file (.ggb archives are detected by content).
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent witnesses for the numeric check.
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    eq_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    deg_tol: f64,
    #[arg(short, long)]
    quiet: bool,
}

impl NumericArgs {
    fn tolerances(&self) -> Result<Tolerances, CliError> {
        let t = Tolerances { eq_tol: self.eq_tol, deg_tol: self.deg_tol, samples: self.samples };
        if !t.is_valid() || t.samples == 0 {
            return Err(CliError::Input("need 0 < eq-tol < deg-tol < 1 and samples > 0".into()));
        }
        Ok(t)
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    common: NumericArgs,
    /// Conjecture, e.g. "coll O G H". Overrides a goal line in the file.
    #[arg(long)]
    goal: Option<String>,
}

#[derive(Args, Debug)]
struct ProveArgs {
    #[command(flatten)]
    common: NumericArgs,
    #[arg(long)]
    goal: Option<String>,
    #[arg(long, default_value_t = 12)]
    max_level: usize,
    #[arg(long, default_value_t = 100_000)]
    max_facts: usize,
    #[arg(long, default_value_t = 10_000)]
    timeout_ms: u64,
    /// Output path for the proof document, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct RelateArgs {
    #[command(flatten)]
    common: NumericArgs,
    /// Comma separated objects to relate; all points when omitted.
    #[arg(long, value_delimiter = ',')]
    select: Vec<String>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Proof document (JSON).
    input: PathBuf,
    /// Viewer bundle: a directory with viewer.js (and viewer.css) or a script.
    #[arg(long, default_value = "viewer/dist")]
    viewer: PathBuf,
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Dsl,
    Ggb,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    input: PathBuf,
    /// Target format; defaults to the other one.
    #[arg(long)]
    to: Option<Format>,
    /// Seed of the witness written into exported archives.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "-")]
    out: String,
    /// On unsupported content, also list the supported commands.
    #[arg(long)]
    explain_unsupported: bool,
    #[arg(short, long)]
    quiet: bool,
}

/// Single-line saturation summary; empty when quiet.
pub fn emit_report(report: &SaturationReport, quiet: bool) -> String {
    if quiet {
        return String::new();
    }
    format!(
        "levels={} facts={} stopped={} elapsed_ms={}",
        report.levels,
        report.fact_count,
        report.stopped.name(),
        report.elapsed.as_millis()
    )
}

struct Input {
    construction: Construction,
    goals: Vec<GoalStatement>,
    format: Format,
}

fn is_zip(bytes: &[u8]) -> bool {
    bytes.starts_with(b"PK\x03\x04")
}

fn ggb_error(e: GgbError, explain: bool) -> CliError {
    match e {
        GgbError::Unsupported(_) => {
            let mut msg = e.to_string();
            if explain {
                msg.push_str("\nsupported commands:");
                for c in supported_commands() {
                    msg.push_str(&format!("\n  {c}"));
                }
            }
            CliError::Unsupported(msg)
        }
        other => CliError::Input(other.to_string()),
    }
}

fn load(path: &Path, explain: bool) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    if is_zip(&bytes) {
        let g = import_ggb(&bytes).map_err(|e| ggb_error(e, explain))?;
        return Ok(Input { construction: g.construction, goals: Vec::new(), format: Format::Ggb });
    }
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8 text", path.display())))?;
    let s = parse_source(&text)?;
    Ok(Input { construction: s.construction, goals: s.goals, format: Format::Dsl })
}

fn goal_for(input: &Input, flag: Option<&str>) -> Result<GoalStatement, CliError> {
    match flag {
        Some(text) => Ok(parse_goal(text, &input.construction)?),
        None => input.goals.first().cloned().ok_or_else(|| CliError::Input("no goal: pass --goal or add a goal line".into())),
    }
}

fn write_output(out: &str, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    if out == "-" {
        stdout.write_all(bytes).map_err(|e| CliError::Input(format!("cannot write output: {e}")))
    } else {
        fs::write(out, bytes).map_err(|e| CliError::Input(format!("cannot write {out}: {e}")))
    }
}

fn print_witness(w: &NumericModel, stdout: &mut dyn Write) {
    let _ = writeln!(stdout, "counter-witness (seed {}):", w.seed());
    for (label, p) in w.points() {
        let _ = writeln!(stdout, "  {label} = ({:.12}, {:.12})", p.x, p.y);
    }
}

/// Numeric gate shared by `check` and `prove`. `Ok(None)` means it passed.
fn gate(
    c: &Construction,
    g: &GoalStatement,
    args: &NumericArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Option<ExitCode>, CliError> {
    let t = args.tolerances()?;
    match check_conjecture(c, g, &t, args.seed) {
        Verdict::HoldsNumerically => Ok(None),
        Verdict::Fails(w) => {
            if !args.quiet {
                let _ = writeln!(stderr, "refuted: {g} is false");
            }
            print_witness(&w, stdout);
            Ok(Some(ExitCode::Refuted))
        }
        Verdict::Degenerate(e) => Err(e.into()),
    }
}

fn check(a: CheckArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<ExitCode, CliError> {
    let input = load(&a.common.input, false)?;
    let g = goal_for(&input, a.goal.as_deref())?;
    if let Some(code) = gate(&input.construction, &g, &a.common, stdout, stderr)? {
        return Ok(code);
    }
    let _ = writeln!(stdout, "holds: {g} on {} witnesses", a.common.samples);
    Ok(ExitCode::Proved)
}

fn prove_cmd(a: ProveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<ExitCode, CliError> {
    let input = load(&a.common.input, false)?;
    let g = goal_for(&input, a.goal.as_deref())?;
    let lim = SaturationLimits {
        max_levels: a.max_level,
        max_facts: a.max_facts,
        time_budget: Duration::from_millis(a.timeout_ms),
    };
    if !lim.is_valid() {
        return Err(CliError::Input("saturation limits must be positive".into()));
    }
    let t = a.common.tolerances()?;
    if let Some(code) = gate(&input.construction, &g, &a.common, stdout, stderr)? {
        return Ok(code);
    }
    let run = prove(&input.construction, &g, &lim, a.common.seed, &t)?;
    let line = emit_report(&run.report, a.common.quiet);
    if !line.is_empty() {
        let _ = writeln!(stderr, "{line}");
    }
    if run.root.is_none() {
        if !a.common.quiet {
            let _ = writeln!(stderr, "unknown: {g} was not derived");
        }
        return Ok(ExitCode::Unknown);
    }
    let doc = document_for_run(&input.construction, &run)?;
    write_output(&a.out, doc.to_json().as_bytes(), stdout)?;
    Ok(ExitCode::Proved)
}

fn relate_cmd(a: RelateArgs, stdout: &mut dyn Write) -> Result<ExitCode, CliError> {
    let input = load(&a.common.input, false)?;
    let c = &input.construction;
    let t = a.common.tolerances()?;
    let selection: Vec<Label> = if a.select.is_empty() {
        c.steps().iter().filter(|s| s.kind.defines() == pww_core::construction::ObjectType::Point).map(|s| s.label.clone()).collect()
    } else {
        a.select
            .iter()
            .map(|name| {
                let l = Label::new(name.trim()).ok_or_else(|| CliError::Input(format!("bad label `{name}`")))?;
                c.object_type(&l).map(|_| l.clone()).ok_or_else(|| CliError::Input(format!("unknown object `{name}`")))
            })
            .collect::<Result<_, _>>()?
    };
    // Surface degenerate constructions as input errors rather than an empty list.
    instantiate(c, a.common.seed, &t)?;
    for g in relate(c, &selection, &t, a.common.seed) {
        let _ = writeln!(stdout, "{g}");
    }
    Ok(ExitCode::Proved)
}

fn render_cmd(a: RenderArgs, stdout: &mut dyn Write) -> Result<ExitCode, CliError> {
    let text = fs::read_to_string(&a.input)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", a.input.display())))?;
    let doc = ProofDocument::from_json(&text)?;
    let assets = ViewerAssets::load(&a.viewer)?;
    write_output(&a.out, render_html(&doc, &assets).as_bytes(), stdout)?;
    Ok(ExitCode::Proved)
}

fn convert_cmd(a: ConvertArgs, stdout: &mut dyn Write) -> Result<ExitCode, CliError> {
    let input = load(&a.input, a.explain_unsupported)?;
    let to = a.to.unwrap_or(match input.format {
        Format::Dsl => Format::Ggb,
        Format::Ggb => Format::Dsl,
    });
    let bytes = match to {
        Format::Dsl => print(&input.construction).into_bytes(),
        Format::Ggb => {
            let w = instantiate(&input.construction, a.seed, &Tolerances::default())?;
            export_ggb(&input.construction, &w).map_err(|e| ggb_error(e, a.explain_unsupported))?
        }
    };
    write_output(&a.out, &bytes, stdout)?;
    Ok(ExitCode::Proved)
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::InputError as i32 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => check(a, stdout, stderr),
        Command::Prove(a) => prove_cmd(a, stdout, stderr),
        Command::Relate(a) => relate_cmd(a, stdout),
        Command::Render(a) => render_cmd(a, stdout),
        Command::Convert(a) => convert_cmd(a, stdout),
    };
    match result {
        Ok(code) => code as i32,
        Err(e) => {
            let _ = writeln!(stderr, "pww: {e}");
            e.exit_code() as i32
        }
    }
}
