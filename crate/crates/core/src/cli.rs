//! Command-line entry points. Exit codes: 0 pass, 1 certificate failure,
//! 2 invalid input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::builder::{build_all, BuildError, BuildParams, CertificateParams};
use crate::groups::{catalog_groups, commutator_power_certificate, reduce};
use crate::io::{self, IoError};
use crate::tree::{mn_presentation, presentation_full, presentation_leaf};
use crate::verify::{self, LimitTarget, Report, DEFAULT_SEARCH_GUARD};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kleinian-tree", version, about = "Tree-of-triangle-groups presentations, finite quotients and Kleinian representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum View {
    Full,
    Leaf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the presentation of the depth-N truncation.
    Presentation {
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "full")]
        view: View,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count homomorphisms to every catalog group for depths 1..=N.
    Quotients {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        /// JSON file for the table rows.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the representation of the depth-N truncation.
    Build {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 4.0)]
        l0: f64,
        #[arg(long, default_value_t = 1.4)]
        growth: f64,
        #[arg(long, default_value_t = 64.0)]
        lmax: f64,
        #[arg(long, default_value = "rep.json")]
        out: PathBuf,
    },
    /// Run every certificate on a built representation.
    Verify {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, default_value_t = 3)]
        radius_old: usize,
        #[arg(long, default_value_t = 6)]
        radius_new: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        syllables: usize,
        #[arg(long, default_value_t = 10_000)]
        jorgensen_pairs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Sample the limit set of the whole group.
    Limitset {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 30)]
        word_len: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// PPM (P6) image of the window [-2, 2]^2.
        #[arg(long)]
        png_out: Option<PathBuf>,
        #[arg(long)]
        points_out: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        width: usize,
        #[arg(long, default_value_t = 1024)]
        height: usize,
    },
    /// Commutator-power certificates over the catalog and the witness words.
    Example2 {
        #[arg(long, default_value_t = 16)]
        max_order: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("write failed: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Build(BuildError::InvalidParameter(_) | BuildError::Tree(_)) => EXIT_INVALID,
            CliError::Build(_) => EXIT_FAIL,
            _ => EXIT_INVALID,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Parses `argv` (including the program name) and runs the subcommand,
/// writing human-readable output to `out` and diagnostics to `err`.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn exit_for(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    Ok(io::write_bytes(path, text.as_bytes())?)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Presentation { depth, view, out: path } => {
            let p = match view {
                View::Full => presentation_full(depth),
                View::Leaf => presentation_leaf(depth),
            }
            .map_err(invalid)?;
            let text = p.to_text();
            match path {
                Some(path) => write_text(&path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_PASS)
        }
        Command::Quotients { depth, max_order, out: path } => {
            let catalog = catalog_groups(max_order).map_err(invalid)?;
            let rows = verify::quotient_experiment(depth, &catalog, DEFAULT_SEARCH_GUARD).map_err(invalid)?;
            writeln!(out, "{:>2}  {:<12} {:>5} {:>10} {:>10}  {:<8} consistent", "n", "group", "order", "homs", "nontrivial", "coprime")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>2}  {:<12} {:>5} {:>10} {:>10}  {:<8} {}",
                    r.n, r.group, r.order, r.hom_count, r.nontrivial_count, r.gcd_flag, r.consistent
                )?;
            }
            if let Some(path) = path {
                io::save_json(&path, &rows)?;
            }
            Ok(exit_for(rows.iter().all(|r| r.consistent)))
        }
        Command::Build { depth, l0, growth, lmax, out: path } => {
            let params = BuildParams {
                certificate: CertificateParams::default(),
                l0,
                growth,
                l_max: lmax,
            };
            let levels = build_all(depth, &params)?;
            for tuned in &levels[1..] {
                let attempt = tuned.ladder.last().expect("a passing attempt");
                writeln!(
                    out,
                    "level {}: L = {} (tried {}), margins: nesting {:.3e}, old side {:.3e}, new side {:.3e}",
                    tuned.rep.depth,
                    attempt.l,
                    tuned.ladder.len(),
                    attempt.nesting_margin,
                    attempt.old_margin,
                    attempt.new_margin
                )?;
            }
            let mut rep = levels.last().expect("depth >= 1").rep.clone();
            rep.provenance = Some(format!("kleinian-tree build --depth {depth} --l0 {l0} --growth {growth} --lmax {lmax}"));
            io::save_rep(&path, &rep)?;
            writeln!(out, "wrote {}", path.display())?;
            Ok(EXIT_PASS)
        }
        Command::Verify {
            rep,
            radius_old,
            radius_new,
            samples,
            syllables,
            jorgensen_pairs,
            seed,
            out: path,
        } => {
            if radius_old < 1 || radius_new < 1 {
                return Err(invalid("word radii must be at least 1"));
            }
            let rep = io::load_rep(&rep)?;
            let params = CertificateParams {
                word_radius_old: radius_old,
                word_radius_new: radius_new,
                margin_floor: rep.tolerances.margin_floor,
                identity_tol: rep.tolerances.identity_tol,
            };
            let reports = verify_all(&rep, &params, samples, syllables, jorgensen_pairs, seed)?;
            for r in &reports {
                writeln!(out, "{:<24} {}  min margin {:e}", r.check, if r.pass { "pass" } else { "FAIL" }, r.min_margin)?;
                for f in &r.failures {
                    writeln!(err, "  {f}")?;
                }
            }
            let pass = reports.iter().all(|r| r.pass);
            io::save_json(&path, &VerifyOutput { pass, reports: &reports })?;
            Ok(exit_for(pass))
        }
        Command::Limitset {
            rep,
            count,
            word_len,
            seed,
            png_out,
            points_out,
            width,
            height,
        } => {
            if width == 0 || height == 0 {
                return Err(invalid("image dimensions must be positive"));
            }
            let rep = io::load_rep(&rep)?;
            let sample = verify::limit_points(&rep, &LimitTarget::WholeGroup, count, word_len, seed)?;
            if let Some(path) = png_out {
                let (bytes, stats) = io::render_ppm(&sample.points, width, height);
                io::write_bytes(&path, &bytes)?;
                writeln!(out, "rendered {} points to {}", stats.drawn, path.display())?;
                writeln!(err, "{} points outside the window, {} at infinity dropped", stats.outside_window, stats.at_infinity)?;
            }
            if let Some(path) = points_out {
                let (text, dropped) = io::points_csv(&sample.points);
                write_text(&path, &text)?;
                writeln!(out, "wrote {} points to {}", sample.points.len() - dropped, path.display())?;
                if dropped > 0 {
                    writeln!(err, "{dropped} points at infinity dropped")?;
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Example2 { max_order, n_max } => {
            let mut pass = true;
            for n in 1..=n_max {
                let m = mn_presentation(n).map_err(invalid)?;
                let reduced = reduce(&m.rewrite);
                let ok = !reduced.is_empty();
                pass &= ok;
                writeln!(out, "n = {n}: {} -> {} ({})", m.witness, reduced, if ok { "nontrivial in the free group" } else { "TRIVIAL" })?;
            }
            for h in catalog_groups(max_order).map_err(invalid)? {
                let report = commutator_power_certificate(&h);
                pass &= report.passed();
                writeln!(out, "{:<12} pairs {:>4} failures {}", report.group, report.pairs_checked, report.failures.len())?;
            }
            Ok(exit_for(pass))
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    pass: bool,
    reports: &'a [Report],
}

/// Relators, nesting, precise invariance at every level, word separation
/// and the Jorgensen scan.
pub fn verify_all(
    rep: &crate::builder::RepTable,
    params: &CertificateParams,
    samples: usize,
    syllables: usize,
    jorgensen_pairs: usize,
    seed: u64,
) -> Result<Vec<Report>, BuildError> {
    let mut reports = vec![
        verify::check_relators(rep, params.identity_tol)?.to_report(),
        verify::check_nesting(rep, params.margin_floor)?.to_report(),
    ];
    for k in 2..=rep.depth {
        reports.push(verify::check_precise_invariance(rep, k, params)?.to_report());
    }
    reports.push(verify::check_separation_words(rep, samples, syllables, seed, params.margin_floor)?.to_report());
    reports.push(verify::jorgensen_scan(rep, jorgensen_pairs, seed).to_report());
    Ok(reports)
}
