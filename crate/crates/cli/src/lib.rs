//! Command-line front end: argument parsing, file formats and reports.

pub mod format;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use npi_core::homology::{find_weight_homomorphisms, h1_structure, is_generalized_wirtinger};
use npi_core::logs::{adian_npi_check, artin_presentation, lof_npi_check, lof_random, LofSpec};
use npi_core::minima::Mode;
use npi_core::oracle::npi_scan;
use npi_core::orders::TargetSpec;

use crate::format::{parse_input, print_log, print_presentation, Input};
use crate::report::{
    concat_attempts, cover_check, full_report, input_presentation, render_attempt, render_cover, render_hypotheses,
    render_text, PhiSpec, ReportError, ReportOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "npi", version, about = "Non-positive immersion checks for group presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PhiArgs {
    /// z, zlex:D, braid:N or braid:N:opp
    #[arg(long, default_value = "z")]
    target: TargetSpec,
    /// auto, all-ones, standard, or name=value,...
    #[arg(long, default_value = "auto")]
    phi: PhiSpec,
    /// Largest absolute weight tried by `--phi auto`
    #[arg(long, default_value_t = 3)]
    bound: i64,
    /// min, max or both
    #[arg(long, default_value = "both")]
    mode: String,
}

impl PhiArgs {
    fn options(&self) -> Result<ReportOptions, ReportError> {
        let modes = match self.mode.as_str() {
            "both" => vec![Mode::Min, Mode::Max],
            m => vec![m.parse::<Mode>().map_err(|e| ReportError::Usage(e.to_string()))?],
        };
        Ok(ReportOptions {
            target: self.target,
            phi: self.phi.clone(),
            bound: self.bound,
            modes,
            ..ReportOptions::default()
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report structural problems in the input
    Validate { file: PathBuf },
    /// Abelianization and the generalized Wirtinger test
    H1 { file: PathBuf },
    /// Surjections onto Z up to a weight bound
    Phi {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Minima or maxima multisets of each relator
    Minima {
        file: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
    },
    /// Weak concatenability with certificate or failure witness
    Concat {
        file: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
    },
    /// Forest criterion for a labelled oriented graph
    Lot { file: PathBuf },
    /// Forest criterion for an Adian presentation
    Adian { file: PathBuf },
    /// Artin presentation of a labelled graph, with the forest criterion
    Artin { file: PathBuf },
    /// Slim-cover certificate check over a finite window
    Cover {
        file: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
        /// LO,HI
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Bounded search for immersions with positive Euler characteristic
    Immerse {
        file: PathBuf,
        /// MAX_EDGES,MAX_FACES
        #[arg(long, default_value = "6,2")]
        bounds: String,
    },
    /// Every applicable check, ending in a verdict
    Report {
        file: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Also run the immersion scan with MAX_EDGES,MAX_FACES
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print a seeded random reduced labelled oriented graph
    LofSample {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        seed: u64,
        /// Keep only graphs whose underlying graph is a forest
        #[arg(long)]
        forest: bool,
    },
}

fn pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T), ReportError> {
    let bad = || ReportError::Usage(format!("bad {what} {s:?}; expected two comma-separated numbers"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn load(path: &PathBuf) -> Result<Input, ReportError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ReportError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text).map_err(|e| ReportError::Usage(format!("{}: {e}", path.display())))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn execute(cmd: Command) -> Result<String, ReportError> {
    let usage = |e: &dyn std::fmt::Display| ReportError::Usage(e.to_string());
    let internal = |e: &dyn std::fmt::Display| ReportError::Internal(e.to_string());
    Ok(match cmd {
        Command::Validate { file } => {
            let p = input_presentation(&load(&file)?)?;
            let d = p.validate();
            if d.is_empty() {
                "ok\n".to_string()
            } else {
                d.iter().map(|x| format!("{x}\n")).collect()
            }
        }
        Command::H1 { file } => {
            let p = input_presentation(&load(&file)?)?;
            let h = h1_structure(&p);
            let w = is_generalized_wirtinger(&p);
            format!(
                "H1 = {h}\ngeneralized Wirtinger: {}{}\n",
                if w.holds { "yes" } else { "no" },
                if w.reason.is_empty() { String::new() } else { format!(" ({})", w.reason) }
            )
        }
        Command::Phi { file, bound } => {
            let p = input_presentation(&load(&file)?)?;
            let found = find_weight_homomorphisms(&p, bound).map_err(|e| usage(&e))?;
            found
                .iter()
                .map(|c| {
                    let w: Vec<String> =
                        p.generators.iter().zip(&c.weights.weights).map(|(g, v)| format!("{g}={v}")).collect();
                    format!("{}\n", w.join(","))
                })
                .collect()
        }
        Command::Minima { file, phi } | Command::Concat { file, phi } => {
            let p = input_presentation(&load(&file)?)?;
            let (attempts, note) = concat_attempts(&p, &phi.options()?)?;
            let mut out = String::new();
            for a in &attempts {
                render_attempt(&mut out, &a.echo);
            }
            if let Some(n) = note {
                out.push_str(&format!("phi search: {n}\n"));
            }
            out
        }
        Command::Lot { file } => match load(&file)? {
            Input::Log(l) => {
                let f = lof_npi_check(&l).map_err(|e| internal(&e))?;
                let mut out = String::new();
                render_hypotheses(&mut out, &f.hypotheses);
                out.push_str(&format!("verdict: {}\n", f.verdict));
                out
            }
            other => return Err(ReportError::Usage(format!("expected a labelled oriented graph, got {other}"))),
        },
        Command::Adian { file } => {
            let p = input_presentation(&load(&file)?)?;
            let (reduced, _) = p.cyclically_reduced();
            let f = adian_npi_check(&reduced).map_err(|e| internal(&e))?;
            let mut out = String::new();
            render_hypotheses(&mut out, &f.hypotheses);
            out.push_str(&format!("verdict: {}\n", f.verdict));
            out
        }
        Command::Artin { file } => match load(&file)? {
            Input::Artin(g) => {
                let p = artin_presentation(&g).map_err(|e| usage(&e))?;
                let f = adian_npi_check(&p).map_err(|e| internal(&e))?;
                let mut out = print_presentation(&p);
                render_hypotheses(&mut out, &f.hypotheses);
                out.push_str(&format!("verdict: {}\n", f.verdict));
                out
            }
            other => return Err(ReportError::Usage(format!("expected an Artin graph, got {other}"))),
        },
        Command::Cover { file, phi, window } => {
            let p = input_presentation(&load(&file)?)?;
            let mut opts = phi.options()?;
            if opts.target != TargetSpec::Int {
                return Err(ReportError::Usage("the cover check needs an integer target".into()));
            }
            opts.window = window.as_deref().map(|w| pair(w, "window")).transpose()?;
            let (attempts, _) = concat_attempts(&p, &opts)?;
            let Some((q, w, cert, mode)) =
                attempts.iter().find_map(|a| a.int_data.as_ref().map(|(q, w, c)| (q, w, c, a.echo.mode)))
            else {
                return Ok("no concatenable integer weighting found; nothing to certify\n".into());
            };
            let echo = cover_check(q, w, cert, mode, opts.window).map_err(|e| usage(&e))?;
            let mut out = String::new();
            render_cover(&mut out, &echo);
            out
        }
        Command::Immerse { file, bounds } => {
            let p = input_presentation(&load(&file)?)?;
            let (e, f) = pair::<usize>(&bounds, "bounds")?;
            let (reduced, _) = p.cyclically_reduced();
            let scan = npi_scan(&reduced, e, f).map_err(|e| usage(&e))?;
            let mut out = format!(
                "{} complexes up to {e} edges and {f} faces; {} candidates\n",
                scan.enumerated,
                scan.candidates.len()
            );
            for c in &scan.candidates {
                out.push_str(&format!(
                    "  chi {} with {} vertices, {} edges, {} faces{}\n",
                    c.chi,
                    c.complex.vertices,
                    c.complex.edges.len(),
                    c.complex.faces.len(),
                    c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
                ));
            }
            out
        }
        Command::Report { file, phi, window, oracle, json: as_json } => {
            let input = load(&file)?;
            let mut opts = phi.options()?;
            opts.window = window.as_deref().map(|w| pair(w, "window")).transpose()?;
            opts.oracle = oracle.as_deref().map(|o| pair(o, "oracle bounds")).transpose()?;
            let doc = full_report(&input, &opts)?;
            if as_json {
                json(&doc)
            } else {
                render_text(&doc)
            }
        }
        Command::LofSample { vertices, seed, forest } => {
            let l = lof_random(LofSpec { vertices, forest }, seed).map_err(|e| usage(&e))?;
            print_log(&l)
        }
    })
}

/// Runs the command line `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e @ ReportError::Usage(_)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(e @ ReportError::Internal(_)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INTERNAL
        }
    }
}
