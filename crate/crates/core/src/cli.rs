//! The `framephase` command line.
//!
//! Exit codes: 0 success (`Injective`, `NecessaryConditionsPass`, `Unique`,
//! `HeuristicSuccess`), 1 error or usage error, 2 `NotInjective` (or no
//! witness exists, for `witness`), 3 `Ambiguous`, 4 `NoSolution` or
//! `HeuristicFail`. `certify` and `reconstruct` write only JSON to stdout.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::experiments::Preset;
use crate::frames::{decode_vector, encode_vector, gen_full_spark, gen_random, gen_repeated_tail, gen_windowed_fourier, AnyFrame, Entry, Frame};
use crate::injectivity::{
    certify, complex_regime, complex_size_witness, witness_pair, CertificateBasis, ComplexRegime, SearchBudget, Verdict,
    DEFAULT_MAX_FRAME_SIZE,
};
use crate::linalg::{Field, Scalar, Tolerance, DEFAULT_RANK_EPS, DEFAULT_RESIDUAL_EPS};
use crate::magnitude::{magnitude_map, MagnitudeVector, SignPattern};
use crate::reconstruct::{reconstruct_complex, reconstruct_real, ComplexOptions, ReconstructionResult, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_INJECTIVE: i32 = 2;

/// Environment variable limiting the worker thread count.
pub const THREADS_ENV: &str = "FRAMEPHASE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "framephase", version, about = "Phase retrieval for finite frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct TolArgs {
    /// Residual tolerance for magnitude and membership checks.
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_EPS)]
    pub tol: f64,
    /// Relative threshold for numerical rank decisions.
    #[arg(long, default_value_t = DEFAULT_RANK_EPS)]
    pub rank_eps: f64,
}

impl TolArgs {
    fn tolerance(&self) -> Result<Tolerance, Error> {
        Tolerance::new(self.rank_eps, self.tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Random,
    FullSpark,
    RepeatedTail,
    Gabor,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a frame file.
    Gen {
        #[arg(long, value_parser = parse_field, default_value = "real")]
        field: Field,
        /// Dimension (signal length for gabor).
        #[arg(long)]
        n: usize,
        /// Number of vectors; implied by the window and hop for gabor.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value = "random")]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Window for gabor, comma separated (default: all ones, length N).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Time step for gabor.
        #[arg(long, default_value_t = 1)]
        hop: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether magnitudes determine every signal up to phase.
    Certify {
        frame: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
        /// Largest frame size for the exhaustive subset search.
        #[arg(long, default_value_t = DEFAULT_MAX_FRAME_SIZE)]
        max_m: usize,
    },
    /// Write the magnitudes of the frame coefficients of a signal.
    Measure {
        frame: PathBuf,
        /// Signal entries, comma separated; complex entries as `1+2i`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "x_file", required_unless_present = "x_file")]
        x: Option<String>,
        /// JSON array with the signal entries.
        #[arg(long)]
        x_file: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Recover the signal (up to phase) from a measurement file.
    Reconstruct {
        frame: PathBuf,
        measurements: PathBuf,
        #[arg(long, default_value_t = crate::reconstruct::complex::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = crate::reconstruct::complex::DEFAULT_MAX_ITERS)]
        max_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Produce two signals with equal magnitudes on different rays.
    Witness {
        frame: PathBuf,
        /// One-based indices of S; default: the first failing subset.
        #[arg(long)]
        subset: Option<String>,
        /// Also write the witness JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run a Monte-Carlo experiment preset and write JSON and CSV reports.
    Experiment {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        /// Override the preset's trials per cell.
        #[arg(long)]
        trials: Option<usize>,
        /// Record per-trial wall-clock time (reports stop being reproducible).
        #[arg(long)]
        timing: bool,
    },
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse::<Field>().map_err(|e| e.to_string())
}

/// Parses and runs one invocation, returning the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Sizes the global thread pool from `FRAMEPHASE_THREADS`, if set.
pub fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::InvalidParameters(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidParameters(e.to_string()))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Gen {
            field,
            n,
            m,
            kind,
            seed,
            window,
            hop,
            out: path,
        } => cmd_gen(field, n, m, kind, seed, window.as_deref(), hop, &path, err),
        Command::Certify { frame, tol, max_m } => {
            let tol = tol.tolerance()?;
            let frame = AnyFrame::read(&frame, &tol)?;
            let budget = SearchBudget {
                max_frame_size: max_m,
                ..Default::default()
            };
            match &frame {
                AnyFrame::Real(f) => cmd_certify(f, &tol, &budget, out, err),
                AnyFrame::Complex(f) => cmd_certify(f, &tol, &budget, out, err),
            }
        }
        Command::Measure {
            frame,
            x,
            x_file,
            out: path,
            tol,
        } => {
            let tol = tol.tolerance()?;
            let frame = AnyFrame::read(&frame, &tol)?;
            let a = match &frame {
                AnyFrame::Real(f) => measure(f, x.as_deref(), x_file.as_deref())?,
                AnyFrame::Complex(f) => measure(f, x.as_deref(), x_file.as_deref())?,
            };
            a.write(&path)?;
            writeln!(err, "wrote {} magnitudes to {}", a.len(), path.display())?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct {
            frame,
            measurements,
            restarts,
            max_iters,
            seed,
            tol,
        } => {
            let tol = tol.tolerance()?;
            let frame = AnyFrame::read(&frame, &tol)?;
            let a = MagnitudeVector::read(&measurements)?;
            let opts = ComplexOptions { restarts, max_iters, seed };
            cmd_reconstruct(&frame, &a, &opts, &tol, out, err)
        }
        Command::Witness {
            frame,
            subset,
            out: path,
            tol,
        } => {
            let tol = tol.tolerance()?;
            let frame = AnyFrame::read(&frame, &tol)?;
            match &frame {
                AnyFrame::Real(f) => cmd_witness(f, subset.as_deref(), path.as_deref(), &tol, out, err),
                AnyFrame::Complex(f) => cmd_witness(f, subset.as_deref(), path.as_deref(), &tol, out, err),
            }
        }
        Command::Experiment {
            preset,
            seed,
            out_dir,
            trials,
            timing,
        } => {
            let preset: Preset = preset.parse()?;
            let mut cfg = preset.config(seed);
            if let Some(t) = trials {
                cfg.trials = t;
            }
            cfg.timing = timing;
            let report = preset.run(&cfg)?;
            let (json, csv) = report.write(&out_dir)?;
            out.write_all(report.summary().as_bytes())?;
            writeln!(err, "wrote {} and {}", json.display(), csv.display())?;
            Ok(EXIT_OK)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    field: Field,
    n: usize,
    m: Option<usize>,
    kind: Kind,
    seed: u64,
    window: Option<&str>,
    hop: usize,
    path: &Path,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let need_m = || m.ok_or_else(|| Error::InvalidParameters("--m is required for this kind".into()));
    let frame: AnyFrame = match (kind, field) {
        (Kind::Gabor, Field::Real) => {
            return Err(Error::InvalidParameters("windowed Fourier frames are complex; use --field complex".into()))
        }
        (Kind::Gabor, Field::Complex) => {
            let window = match window {
                Some(w) => parse_list::<f64>(w)?,
                None => vec![1.0; n],
            };
            let f = gen_windowed_fourier(&window, n, hop)?;
            if let Some(m) = m {
                if m != f.len() {
                    return Err(Error::InvalidParameters(format!(
                        "window length {} and hop {hop} give M = {} vectors, not {m}",
                        window.len(),
                        f.len()
                    )));
                }
            }
            f.into()
        }
        (Kind::Random, Field::Real) => gen_random::<f64>(n, need_m()?, seed)?.into(),
        (Kind::Random, Field::Complex) => gen_random::<Complex64>(n, need_m()?, seed)?.into(),
        (Kind::FullSpark, Field::Real) => gen_full_spark::<f64>(n, need_m()?, seed)?.into(),
        (Kind::FullSpark, Field::Complex) => gen_full_spark::<Complex64>(n, need_m()?, seed)?.into(),
        (Kind::RepeatedTail, Field::Real) => gen_repeated_tail::<f64>(n, need_m()?, seed)?.into(),
        (Kind::RepeatedTail, Field::Complex) => gen_repeated_tail::<Complex64>(n, need_m()?, seed)?.into(),
    };
    frame.write(path)?;
    let tol = Tolerance::default();
    let bounds = match &frame {
        AnyFrame::Real(f) => f.frame_operator(&tol)?.1,
        AnyFrame::Complex(f) => f.frame_operator(&tol)?.1,
    };
    writeln!(
        err,
        "wrote {} frame with N = {}, M = {} to {}\nframe bounds: A = {:.6e}, B = {:.6e}",
        frame.field(),
        frame.dim(),
        frame.len(),
        path.display(),
        bounds.lower,
        bounds.upper
    )?;
    Ok(EXIT_OK)
}

fn cmd_certify<T: Scalar>(
    frame: &Frame<T>,
    tol: &Tolerance,
    budget: &SearchBudget,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let cert = certify(frame, tol, budget)?;
    out.write_all(cert.to_json().as_bytes())?;
    let (n, m) = (frame.dim(), frame.len());
    match (cert.verdict, cert.basis) {
        (Verdict::NotInjective, CertificateBasis::ComplexSizeBound) => writeln!(
            err,
            "not injective: a complex frame for C^{n} needs at least 2N = {} vectors, this one has M = {m}",
            2 * n
        )?,
        (Verdict::NotInjective, _) => writeln!(
            err,
            "not injective: neither the vectors indexed by S = {:?} nor the rest span (complement property fails)",
            cert.failing_subset.map(|s| one_based(&s)).unwrap_or_default()
        )?,
        (Verdict::Injective, CertificateBasis::OneDimensional) => {
            writeln!(err, "injective: in dimension one a single magnitude fixes the ray")?
        }
        (Verdict::Injective, _) => writeln!(err, "injective: the complement property holds")?,
        (Verdict::NecessaryConditionsPass, _) => {
            let note = match complex_regime(n, m) {
                ComplexRegime::Unknown => "unknown regime (2N ≤ M < 4N−2): this frame may or may not be injective",
                _ => "M ≥ 4N−2: generic frames of this size are injective, but no per-frame proof is available",
            };
            writeln!(err, "necessary conditions pass; {note}")?
        }
    }
    Ok(match cert.verdict {
        Verdict::NotInjective => EXIT_NOT_INJECTIVE,
        _ => EXIT_OK,
    })
}

fn one_based(s: &SignPattern) -> Vec<usize> {
    s.indices().into_iter().map(|i| i + 1).collect()
}

fn parse_list<V: std::str::FromStr>(s: &str) -> Result<Vec<V>, Error> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<V>().map_err(|_| Error::Parse(format!("cannot parse {t:?}")))
        })
        .collect()
}

fn parse_signal<T: Scalar>(text: &str) -> Result<Vec<T>, Error> {
    match T::FIELD {
        Field::Real => Ok(parse_list::<f64>(text)?.into_iter().map(T::from_real).collect()),
        Field::Complex => parse_list::<Complex64>(text)?
            .into_iter()
            .map(|c| T::from_parts(c.re, c.im).ok_or_else(|| Error::Parse("entry outside the field".into())))
            .collect(),
    }
}

fn measure<T: Scalar>(frame: &Frame<T>, x: Option<&str>, x_file: Option<&Path>) -> Result<MagnitudeVector, Error> {
    let x: Vec<T> = match (x, x_file) {
        (Some(text), None) => parse_signal(text)?,
        (None, Some(path)) => {
            let entries: Vec<Entry> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            decode_vector(&entries)?
        }
        _ => return Err(Error::InvalidParameters("give exactly one of --x and --x-file".into())),
    };
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::Parse("signal has non-finite entries".into()));
    }
    magnitude_map(frame, &x)
}

fn cmd_reconstruct(
    frame: &AnyFrame,
    a: &MagnitudeVector,
    opts: &ComplexOptions,
    tol: &Tolerance,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    fn report<T: Scalar>(r: &ReconstructionResult<T>, out: &mut dyn Write) -> Result<i32, Error> {
        out.write_all(r.to_json().as_bytes())?;
        Ok(r.status.exit_code())
    }
    if a.len() != frame.len() {
        return Err(Error::DimensionMismatch {
            expected: frame.len(),
            actual: a.len(),
        });
    }
    match frame {
        AnyFrame::Real(f) => match reconstruct_real(f, a, tol) {
            Ok(r) => {
                let note = match r.status {
                    Status::Unique => "unique solution",
                    Status::Ambiguous => "several rays share these magnitudes",
                    _ => "no signal has these magnitudes",
                };
                writeln!(err, "{note} ({} rays, {} sign prefixes explored)", r.rays.len(), r.patterns_explored)?;
                report(&r, out)
            }
            Err(Error::SearchAborted {
                patterns_explored,
                partial_rays,
            }) => {
                writeln!(
                    err,
                    "sign search aborted after {patterns_explored} prefixes; partial rays: {}",
                    serde_json::to_string(&partial_rays)?
                )?;
                Ok(EXIT_ERROR)
            }
            Err(e) => Err(e),
        },
        AnyFrame::Complex(f) => {
            let r = reconstruct_complex(f, a, opts, tol)?;
            let regime = match complex_regime(f.dim(), f.len()) {
                ComplexRegime::BelowSizeBound => "M ≤ 2N−1, so other rays with these magnitudes exist",
                ComplexRegime::Unknown => "unknown regime (2N ≤ M < 4N−2)",
                ComplexRegime::GenericallyInjective => "M ≥ 4N−2",
            };
            writeln!(
                err,
                "heuristic result {:?} after {} restarts, best residual {:.3e}; {regime}",
                r.status, r.restarts_used, r.best_residual
            )?;
            report(&r, out)
        }
    }
}

#[derive(Serialize)]
struct WitnessJson {
    failing_subset: Option<Vec<usize>>,
    x: Vec<Entry>,
    y: Vec<Entry>,
    magnitudes: Vec<f64>,
}

fn cmd_witness<T: Scalar>(
    frame: &Frame<T>,
    subset: Option<&str>,
    path: Option<&Path>,
    tol: &Tolerance,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let (s, witness) = match subset {
        Some(text) => {
            let idx: Vec<usize> = parse_list::<usize>(text)?;
            if idx.iter().any(|&i| i == 0 || i > frame.len()) {
                return Err(Error::InvalidSubset(format!("indices must lie in 1..={}", frame.len())));
            }
            let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
            let s = SignPattern::from_indices(frame.len(), &zero_based)?;
            (Some(s), witness_pair(frame, &s, tol)?)
        }
        None => {
            let cert = certify(frame, tol, &SearchBudget::default())?;
            match cert.witness {
                Some(w) => (cert.failing_subset, w),
                None if T::FIELD == Field::Complex && frame.dim() >= 2 && frame.len() + 1 == 2 * frame.dim() => {
                    (None, complex_size_witness(frame, tol)?)
                }
                None => {
                    writeln!(err, "no witness: the frame passes the complement property")?;
                    return Ok(EXIT_NOT_INJECTIVE);
                }
            }
        }
    };
    let doc = WitnessJson {
        failing_subset: s.map(|s| one_based(&s)),
        x: encode_vector(&witness.x),
        y: encode_vector(&witness.y),
        magnitudes: magnitude_map(frame, &witness.x)?.values().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    out.write_all(text.as_bytes())?;
    if let Some(p) = path {
        std::fs::write(p, &text)?;
    }
    writeln!(err, "witness verified: equal magnitudes, different rays")?;
    Ok(EXIT_OK)
}
