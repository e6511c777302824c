mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use polymmp::document::{DocumentError, InputDocument};
use polymmp::horospherical::{HoroError, PolarizedEmbedding};
use polymmp::mmp::{self, FamilyData, MmpError};
use polymmp::parametric::{Decomposition, FamilyError};
use polymmp::report::{OracleSummary, Report};

/// Exact minimal model program for polarized horospherical varieties.
#[derive(Debug, Parser)]
#[command(name = "polymmp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full MMP: classes, steps, terminal data and genericity.
    Run(Common),
    /// Class decomposition of the family only.
    Classes(Common),
    /// Singularities and genericity of the input variety.
    Check(Common),
    /// Base and general fiber of the final Mori fibration.
    Fiber(Common),
    /// One frame per class: SVG pictures or CSV vertex tables.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Oracle::Sweep)]
    oracle: Oracle,
    /// Directory receiving the report (or the frames for `render`) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = render::Image::Svg)]
    image: render::Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Sweep,
    Brute,
    Both,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Mmp(#[from] MmpError),
}

const EXIT_IO: u8 = 1;
const EXIT_SCHEMA: u8 = 3;
const EXIT_INVARIANT: u8 = 4;
const EXIT_NOT_AMPLE: u8 = 5;
const EXIT_NOT_Q_GORENSTEIN: u8 = 6;
const EXIT_INTERNAL: u8 = 7;

fn horo_code(e: &HoroError) -> u8 {
    match e {
        HoroError::NotAmple(_) => EXIT_NOT_AMPLE,
        HoroError::NotQGorenstein(_) => EXIT_NOT_Q_GORENSTEIN,
        _ => EXIT_INVARIANT,
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } => EXIT_SCHEMA,
            CliError::Write { .. } => EXIT_IO,
            CliError::Document(DocumentError::Syntax(_) | DocumentError::Version { .. }) => EXIT_SCHEMA,
            CliError::Document(DocumentError::Invalid { source, .. }) => horo_code(source),
            CliError::Mmp(MmpError::Horo(h)) => horo_code(h),
            CliError::Mmp(MmpError::Family(FamilyError::StartOutsideStable(_) | FamilyError::Unbounded)) => {
                EXIT_NOT_AMPLE
            }
            CliError::Mmp(MmpError::Family(FamilyError::Internal(_))) => EXIT_INTERNAL,
            CliError::Mmp(MmpError::Family(_)) => EXIT_INVARIANT,
            CliError::Mmp(MmpError::OracleMismatch { .. } | MmpError::Internal { .. }) => EXIT_INTERNAL,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load(path: &Path) -> Result<(InputDocument, PolarizedEmbedding), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let doc = InputDocument::from_json(&text)?;
    let embedding = doc.to_embedding()?;
    Ok((doc, embedding))
}

fn oracle(data: &FamilyData, dec: &Decomposition, mode: Oracle) -> Result<Option<OracleSummary>, CliError> {
    let label = match mode {
        Oracle::Sweep => return Ok(None),
        Oracle::Brute => "brute",
        Oracle::Both => "both",
    };
    let brute = polymmp::brute::brute_decomposition(&data.family).map_err(MmpError::from)?;
    let agreed = brute == dec.intervals();
    if mode == Oracle::Both && !agreed {
        mmp::oracle_check(data, dec)?;
    }
    Ok(Some(OracleSummary { mode: label.into(), agreed, intervals: brute.iter().map(ToString::to_string).collect() }))
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run(c) => {
            let (doc, e) = load(&c.input)?;
            let data = mmp::build_family(&e)?;
            let (dec, trace) = mmp::run_mmp(&data)?;
            let mut report = Report::new("run", doc.name, &e).with_trace(trace);
            report.oracle = oracle(&data, &dec, c.oracle)?;
            emit(&report, &c)
        }
        Command::Classes(c) => {
            let (doc, e) = load(&c.input)?;
            let data = mmp::prepare(&e)?;
            let dec = data.family.iterated_decomposition().map_err(MmpError::from)?;
            let mut report = Report::new("classes", doc.name, &e);
            report.family = Some(mmp::summarize(&data));
            if c.oracle != Oracle::Brute {
                report.classes = Some(mmp::class_records(&data, &dec)?);
            }
            report.oracle = oracle(&data, &dec, c.oracle)?;
            emit(&report, &c)
        }
        Command::Check(c) => {
            let (doc, e) = load(&c.input)?;
            let data = mmp::prepare(&e)?;
            let view = data.input_view()?;
            let mut report = Report::new("check", doc.name, &e);
            let descriptor = mmp::describe(&data, &view);
            if !descriptor.flags.q_gorenstein {
                report.message = Some("not Q-Gorenstein: the MMP requires a Q-Gorenstein input".into());
            }
            report.input = Some(descriptor);
            report.genericity = Some(mmp::is_general_divisor(&data.rows, &data.b_tilde));
            emit(&report, &c)
        }
        Command::Fiber(c) => {
            let (doc, e) = load(&c.input)?;
            let data = mmp::build_family(&e)?;
            let (dec, trace) = mmp::run_mmp(&data)?;
            let mut report = Report::new("fiber", doc.name, &e);
            report.terminal = trace.terminal;
            report.message = trace.message;
            report.oracle = oracle(&data, &dec, c.oracle)?;
            emit(&report, &c)
        }
        Command::Render(r) => {
            let c = &r.common;
            let (doc, e) = load(&c.input)?;
            let data = mmp::prepare(&e)?;
            let dec = data.family.iterated_decomposition().map_err(MmpError::from)?;
            let frames = render::frames(&data, &dec)?;
            let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("render"));
            fs::create_dir_all(&dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
            let written = render::write_all(&frames, &dir, r.image, doc.name.as_deref())
                .map_err(|(path, source)| CliError::Write { path, source })?;
            for w in &written.notes {
                eprintln!("{w}");
            }
            for p in &written.files {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}

fn emit(report: &Report, c: &Common) -> Result<(), CliError> {
    let (body, file) = match c.format {
        Format::Json => (report.to_json() + "\n", "report.json"),
        Format::Text => (report.to_text(), "report.txt"),
    };
    match &c.out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
            let path = dir.join(file);
            fs::write(&path, body).map_err(|source| CliError::Write { path: path.clone(), source })?;
            println!("{}", path.display());
            Ok(())
        }
    }
}
