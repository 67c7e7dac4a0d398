//! Command-line front end. Exit codes: 0 all checks pass, 1 a check failed,
//! 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks::{self, Category, QfaCheck, RunConfig};
use crate::document::DiagramDocument;
use crate::error::Error;
use crate::report::{CheckReport, Params, ReportFile};

#[derive(Parser, Debug)]
#[command(name = "zdpic", version, about = "Z_d charged planar diagrams and their check suites")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Qudit dimension; suites default to their own range of d.
    #[arg(long, global = true)]
    pub d: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random samples per d (each suite has its own default).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Absolute tolerance replacing every per-check default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report file here; `-` streams one report per line to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Normalize a diagram document, or evaluate it when closed.
    Eval {
        /// Document path, `-` for stdin; the neutral circle when omitted.
        file: Option<PathBuf>,
    },
    /// String Fourier transform against the DFT.
    Sft,
    /// Pauli pictures and the diagram/matrix dictionary.
    Gates,
    /// Quantum Fourier analysis inequalities.
    Qfa {
        #[arg(value_enum)]
        check: QfaArg,
    },
    /// Reflection positivity certificates.
    Rp,
    /// Quon Paulis, GHZ and Max states.
    States,
    /// Braided parafermions.
    Braids {
        #[arg(long, default_value_t = 4)]
        pairs: usize,
        #[arg(long, default_value_t = 2)]
        degree_cap: usize,
    },
    /// 6j self-duality.
    Sixj {
        #[arg(long, value_enum, default_value_t = CategoryArg::Zd)]
        category: CategoryArg,
        #[arg(long)]
        tuples: Option<usize>,
    },
    /// Every suite.
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum QfaArg {
    Hy,
    Schur,
    Entropy,
    Uncertainty,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum CategoryArg {
    Zd,
    Fib,
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Eval { .. } => "eval".into(),
        Command::Sft => "sft".into(),
        Command::Gates => "gates".into(),
        Command::Qfa { check } => format!("qfa {}", format!("{check:?}").to_lowercase()),
        Command::Rp => "rp".into(),
        Command::States => "states".into(),
        Command::Braids { .. } => "braids".into(),
        Command::Sixj { .. } => "sixj".into(),
        Command::All => "all".into(),
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn read_document(file: &Option<PathBuf>, d: Option<u32>) -> Result<DiagramDocument, Failure> {
    let text = match file {
        None => return Ok(DiagramDocument::neutral_circle(d.unwrap_or(3))?),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| Failure::Usage(e.to_string()))?;
            s
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
    };
    Ok(DiagramDocument::parse(&text)?)
}

fn eval_command(g: &Global, file: &Option<PathBuf>, out: &mut dyn Write) -> Result<Vec<CheckReport>, Failure> {
    let doc = read_document(file, g.d)?;
    let (value, nf) = checks::eval_document(&doc)?;
    let params = Params { d: Some(doc.d), seed: g.seed, tol: 0.0, ..Params::default() };
    let mut report = CheckReport::new("eval.document", "document parses and normalizes", params)
        .count("terms", nf.terms.len() as u64)
        .with_pass(true);
    if !g.quiet {
        match &value {
            Some(v) => {
                let z = v.to_complex();
                let _ = writeln!(out, "value = {v}");
                let _ = writeln!(out, "      ≈ {:.15} {:+.15}i   (δ = √{})", z.re, z.im, doc.d);
            }
            None => {
                let _ = write!(out, "{}", nf.to_json());
            }
        }
    }
    if let Some(v) = value {
        let z = v.to_complex();
        report = report.value("re", z.re).value("im", z.im);
    }
    Ok(vec![report])
}

fn dispatch(g: &Global, command: &Command, out: &mut dyn Write) -> Result<Vec<CheckReport>, Failure> {
    if let Some(d) = g.d {
        if d < 2 {
            return Err(Failure::Usage(format!("--d must be at least 2, got {d}")));
        }
    }
    if let Some(t) = g.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be a non-negative number, got {t}")));
        }
    }
    if g.samples == Some(0) {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let cfg = RunConfig { d: g.d, seed: g.seed, samples: g.samples, tol: g.tol };
    let reports = match command {
        Command::Eval { file } => return eval_command(g, file, out),
        Command::Sft => checks::sft_suite(&cfg)?,
        Command::Gates => checks::gates_suite(&cfg)?,
        Command::Qfa { check } => {
            let w = match check {
                QfaArg::Hy => QfaCheck::HausdorffYoung,
                QfaArg::Schur => QfaCheck::Schur,
                QfaArg::Entropy => QfaCheck::Entropy,
                QfaArg::Uncertainty => QfaCheck::Uncertainty,
            };
            checks::qfa_suite(&cfg, w)?
        }
        Command::Rp => checks::rp_suite(&cfg)?,
        Command::States => checks::states_suite(&cfg)?,
        Command::Braids { pairs, degree_cap } => checks::braids_suite(&cfg, *pairs, *degree_cap)?,
        Command::Sixj { category, tuples } => {
            let c = match category {
                CategoryArg::Zd => Category::Zd,
                CategoryArg::Fib => Category::Fibonacci,
            };
            checks::sixj_suite(&cfg, c, *tuples)?
        }
        Command::All => checks::all_suites(&cfg)?,
    };
    Ok(reports)
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    let g = &cli.global;
    let reports = match dispatch(g, &cli.command, out) {
        Ok(r) => r,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 2;
        }
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 1;
        }
    };
    let file = ReportFile::new(&command_name(&cli.command), g.seed, reports);
    if !g.quiet && !matches!(cli.command, Command::Eval { .. }) {
        for r in &file.reports {
            let _ = writeln!(out, "{}", r.summary_line());
        }
        let failed = file.reports.iter().filter(|r| !r.pass).count();
        let _ = writeln!(out, "{} checks, {} failed", file.reports.len(), failed);
    }
    for r in file.reports.iter().filter(|r| !r.pass) {
        let _ = writeln!(err, "{}", serde_json::to_string(r).expect("reports serialize"));
    }
    match &g.json {
        Some(p) if p.as_os_str() == "-" => {
            let _ = write!(out, "{}", file.to_json_lines());
        }
        Some(p) => {
            if let Err(e) = std::fs::write(p, file.to_json()) {
                let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
                return 2;
            }
        }
        None => {}
    }
    if file.pass {
        0
    } else {
        1
    }
}
