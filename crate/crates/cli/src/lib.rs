//! Command implementations behind the `pathalg` binary.
//!
//! [`run`] parses arguments and returns what the process would write and
//! its exit code: 0 pass, 1 hypothesis unmet, 2 theorem violation, 3 input
//! error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use pathalg::document::{self, QuiverDocument};
use pathalg::dual::quadratic_dual;
use pathalg::preproj::{fstar_oracle, koszul_complex_maps, preproj_presentation};
use pathalg::resolution::{default_depth, finite_bound, koszul_witness_with, ReportDisplay};
use pathalg::trivext::{TrivialExtension, TwistSpec};
use pathalg::verify::{verify_main_theorem, Outcome};
use pathalg::znq::{is_complete_tau_slice, slice_presentation, strip_levels, znq_window, SliceSpec};
use pathalg::{Error, GradedBasis, Presentation};

#[derive(Parser)]
#[command(name = "pathalg", version, about = "Exact computations with graded quiver algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Twist {
    Nu,
    Id,
}

#[derive(Subcommand)]
enum Command {
    /// Homogeneity, quadraticity and a bounded Koszul witness.
    Check {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Quadratic dual as a quiver document.
    Dual { file: PathBuf },
    /// Presentation of the twisted trivial extension and its quadraticity verdict.
    Trivext {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "nu")]
        twist: Twist,
    },
    /// Presentation of the higher preprojective algebra of the quadratic dual.
    Preproj {
        file: PathBuf,
        /// Cross-check every ζ relation against the Koszul bimodule complex.
        #[arg(long)]
        verify_oracle: bool,
    },
    /// Runs every stage of the theorem check and reports.
    VerifyTheorem {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Window of the translation quiver, or a slice of it.
    Znq {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        /// JSON file `{"levels": {"<vertex>": <level>, ...}}`.
        #[arg(long)]
        slice: Option<PathBuf>,
        /// Drop level suffixes from slice names.
        #[arg(long, requires = "slice")]
        strip: bool,
    },
    /// Graded dimension tables.
    Hilbert {
        file: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceFile {
    levels: BTreeMap<String, i64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotHomogeneous | Error::NotQuadratic(_) | Error::NotFiniteDimensional(_) | Error::Cyclic => 1,
            Error::Inconsistent(_) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 3, message }
}

type CmdResult = Result<(String, u8), Failure>;

macro_rules! note {
    ($buf:expr, $($arg:tt)*) => {{
        let _ = writeln!($buf, $($arg)*);
    }};
}

fn read_document(path: &FsPath) -> Result<(Presentation, Option<usize>), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let doc = QuiverDocument::from_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let p = doc.to_presentation().map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok((p, doc.n))
}

fn finite_basis(p: &Presentation) -> Result<GradedBasis, Failure> {
    Ok(GradedBasis::finite(p, finite_bound(p))?)
}

fn warn_hint(err: &mut String, hint: Option<usize>, n: Option<usize>) {
    if let (Some(h), Some(n)) = (hint, n) {
        if h != n {
            note!(err, "warning: document declares n = {h} but maximal bound paths have length {n}");
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn check(err: &mut String, file: &FsPath, depth: Option<usize>) -> CmdResult {
    let (p, hint) = read_document(file)?;
    let gb = finite_basis(&p)?;
    let n = gb.homogeneity_degree();
    warn_hint(err, hint, n);
    let mut out = String::new();
    match n {
        Some(n) => writeln!(out, "n-homogeneous: yes (n = {n})").unwrap(),
        None => writeln!(out, "n-homogeneous: no").unwrap(),
    }
    writeln!(out, "graded dims: {}", join(&gb.dims())).unwrap();
    writeln!(out, "quadratic presentation: {}", yes_no(p.is_quadratic())).unwrap();
    let depth = depth.unwrap_or_else(|| default_depth(n));
    if p.is_quadratic() {
        let w = koszul_witness_with(&gb, depth)?;
        writeln!(out, "Koszul witness (depth {depth}): {}", yes_no(w.passed())).unwrap();
        write!(out, "{}", ReportDisplay { report: &w, names: p.quiver().vertex_names() }).unwrap();
        if !out.ends_with('\n') {
            out.push('\n');
        }
    } else {
        writeln!(out, "Koszul witness (depth {depth}): n/a").unwrap();
    }
    Ok((out, 0))
}

fn dual(file: &FsPath) -> CmdResult {
    let (p, _) = read_document(file)?;
    let d = quadratic_dual(&p)?;
    Ok((document::serialize(&d, None), 0))
}

fn trivext(err: &mut String, file: &FsPath, twist: Twist) -> CmdResult {
    let (p, hint) = read_document(file)?;
    let gb = finite_basis(&p)?;
    warn_hint(err, hint, gb.homogeneity_degree());
    let te = TrivialExtension::build(&gb, |q, n| match twist {
        Twist::Nu => TwistSpec::nu(q, n),
        Twist::Id => TwistSpec::identity(q),
    })?;
    let pres = te.relations.presentation();
    let quadratic = te.quadraticity.is_quadratic();
    let value = json!({
        "twist": te.relations.twist.label(),
        "quadratic": quadratic,
        "quadraticity": te.quadraticity,
        "presentation": QuiverDocument::from_presentation(&pres, Some(te.algebra.n())),
    });
    if !quadratic {
        note!(err, "trivial extension not quadratic: theorem hypothesis unmet");
    }
    Ok((pretty(&value), if quadratic { 0 } else { 1 }))
}

fn preproj(err: &mut String, file: &FsPath, verify_oracle: bool) -> CmdResult {
    let (p, hint) = read_document(file)?;
    let gb = finite_basis(&p)?;
    let n = gb.homogeneity_degree().ok_or(Error::NotHomogeneous)?;
    warn_hint(err, hint, Some(n));
    let pp = preproj_presentation(&gb, n)?;
    let mut code = 0;
    if verify_oracle {
        let complex = koszul_complex_maps(&gb, n)?;
        let mut agree = 0;
        for (q, z) in &pp.zeta {
            match fstar_oracle(&complex, &pp.raq, q) {
                Some(o) if &o == z => agree += 1,
                other => {
                    let got = other.map_or("0".to_string(), |o| o.render(&pp.raq.quiver));
                    note!(
                        err,
                        "oracle mismatch for {}: ζ = {}, oracle = {got}",
                        p.quiver().render(q),
                        z.render(&pp.raq.quiver)
                    );
                    code = 2;
                }
            }
        }
        note!(err, "oracle: {agree} of {} ζ relations agree", pp.zeta.len());
    }
    Ok((document::serialize(&pp.presentation(), Some(n + 1)), code))
}

fn verify_theorem(err: &mut String, file: &FsPath, depth: Option<usize>, format: Format) -> CmdResult {
    let (p, hint) = read_document(file)?;
    let n = GradedBasis::finite(&p, finite_bound(&p)).ok().and_then(|gb| gb.homogeneity_degree());
    warn_hint(err, hint, n);
    let depth = depth.unwrap_or_else(|| default_depth(n.or(hint)));
    let report = verify_main_theorem(&p, depth);
    note!(err, "elapsed: {:.3}s", report.elapsed.as_secs_f64());
    if report.outcome != Outcome::Pass {
        if let Some(d) = &report.diagnostic {
            note!(err, "{d}");
        }
    }
    let out = match format {
        Format::Text => format!("{report}\n"),
        Format::Machine => pretty(&report.to_json()),
    };
    Ok((out, report.outcome.exit_code() as u8))
}

fn znq(err: &mut String, file: &FsPath, from: i64, to: i64, slice: Option<&FsPath>, strip: bool) -> CmdResult {
    let (p, _) = read_document(file)?;
    let w = znq_window(&p, from, to)?;
    let Some(slice) = slice else {
        return Ok((document::serialize(&w.presentation, Some(w.n)), 0));
    };
    let text = std::fs::read_to_string(slice).map_err(|e| input_error(format!("{}: {e}", slice.display())))?;
    let spec: SliceFile =
        serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", slice.display())))?;
    let spec = SliceSpec { levels: spec.levels };
    if !is_complete_tau_slice(&w, &spec)? {
        return Err(input_error("invalid slice: level assignment is not convex".into()));
    }
    let sp = slice_presentation(&w, &spec)?;
    let sp = if strip { strip_levels(&sp)? } else { sp };
    let n = finite_basis(&sp)?.homogeneity_degree();
    match n {
        Some(n) => note!(err, "slice algebra is {n}-homogeneous"),
        None => note!(err, "slice algebra is not homogeneous"),
    }
    Ok((document::serialize(&sp, n), 0))
}

fn hilbert(file: &FsPath, max_degree: usize, format: Format) -> CmdResult {
    let (p, _) = read_document(file)?;
    let gb = GradedBasis::new(&p, max_degree);
    let q = p.quiver();
    let dims = gb.dims();
    let blocks = gb.block_dims();
    let out = match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "dims: {}", join(&dims)).unwrap();
            for (t, b) in blocks.iter().enumerate() {
                writeln!(out, "degree {t}: {}", dims[t]).unwrap();
                for ((i, j), d) in b {
                    writeln!(out, "    {} -> {}: {d}", q.vertex_name(*i), q.vertex_name(*j)).unwrap();
                }
            }
            out
        }
        Format::Machine => {
            let rows: Vec<_> = blocks
                .iter()
                .enumerate()
                .flat_map(|(t, b)| {
                    b.iter().map(move |((i, j), d)| {
                        json!({"degree": t, "source": q.vertex_name(*i), "target": q.vertex_name(*j), "dim": d})
                    })
                })
                .collect();
            pretty(&json!({"max_degree": max_degree, "dims": dims, "blocks": rows}))
        }
    };
    Ok((out, 0))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}


/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Invocation { stdout: String::new(), stderr: text, code: 3 }
            } else {
                Invocation { stdout: text, stderr: String::new(), code: 0 }
            };
        }
    };
    let mut err = String::new();
    let result = match &cli.command {
        Command::Check { file, depth } => check(&mut err, file, *depth),
        Command::Dual { file } => dual(file),
        Command::Trivext { file, twist } => trivext(&mut err, file, *twist),
        Command::Preproj { file, verify_oracle } => preproj(&mut err, file, *verify_oracle),
        Command::VerifyTheorem { file, depth, format } => verify_theorem(&mut err, file, *depth, *format),
        Command::Znq { file, from, to, slice, strip } => znq(&mut err, file, *from, *to, slice.as_deref(), *strip),
        Command::Hilbert { file, max_degree, format } => hilbert(file, *max_degree, *format),
    };
    match result {
        Ok((stdout, code)) => Invocation { stdout, stderr: err, code },
        Err(f) => {
            note!(err, "error: {}", f.message);
            Invocation { stdout: String::new(), stderr: err, code: f.code }
        }
    }
}
