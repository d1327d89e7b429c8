//! Monte-Carlo experiments on random frames.
//!
//! Every trial in a cell draws its frame from `seed ^ trial`, and its test
//! signal (and any transforms) from separate streams of the same seed, so
//! reports are reproducible bit for bit. Trials run in parallel and are
//! aggregated from counts only. Sampling can only be *consistent* with a
//! generic claim; a rate of 1.0 is not a proof.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::frames::{gen_random, Frame};
use crate::injectivity::{certify, complement_property, transform_witness, SearchBudget, Verdict};
use crate::linalg::{self, DenseMatrix, Field, Scalar, Tolerance};
use crate::magnitude::{magnitude_map, ray_equal, SignPattern};
use crate::reconstruct::{enumerate_ambiguities, reconstruct_complex, reconstruct_real, ComplexOptions, Status};

/// Recovered rays are compared with the truth at this tolerance; the
/// complex heuristic only converges to about this accuracy.
pub const RECOVERY_RAY_EPS: f64 = 1e-6;
/// Parseval frames must have a frame operator this close to the identity.
pub const PARSEVAL_EPS: f64 = 1e-8;
pub const DEFAULT_TRANSFORMS: usize = 5;
/// Thin-set pairs constructed per dense-interior run.
pub const THIN_SET_CASES: usize = 10;

/// How `M` depends on `N` within a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MRule {
    TwoNMinusTwo,
    TwoNMinusOne,
    TwoN,
    FourNMinusTwo,
    Fixed(usize),
}

impl MRule {
    /// `None` when the rule gives a negative size.
    pub fn size(self, n: usize) -> Option<usize> {
        match self {
            MRule::TwoNMinusTwo => (2 * n).checked_sub(2),
            MRule::TwoNMinusOne => (2 * n).checked_sub(1),
            MRule::TwoN => Some(2 * n),
            MRule::FourNMinusTwo => (4 * n).checked_sub(2),
            MRule::Fixed(m) => Some(m),
        }
    }
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::TwoNMinusTwo => f.write_str("2N-2"),
            MRule::TwoNMinusOne => f.write_str("2N-1"),
            MRule::TwoN => f.write_str("2N"),
            MRule::FourNMinusTwo => f.write_str("4N-2"),
            MRule::Fixed(m) => write!(f, "{m}"),
        }
    }
}

impl FromStr for MRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "2N-2" => Ok(MRule::TwoNMinusTwo),
            "2N-1" => Ok(MRule::TwoNMinusOne),
            "2N" => Ok(MRule::TwoN),
            "4N-2" => Ok(MRule::FourNMinusTwo),
            other => other
                .parse()
                .map(MRule::Fixed)
                .map_err(|_| Error::Parse(format!("unknown M rule {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub field: Field,
    pub n_min: usize,
    pub n_max: usize,
    pub m_rules: Vec<MRule>,
    /// Trials per cell; zero yields an empty report.
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerance,
    /// Restarts for complex reconstruction.
    pub restarts: usize,
    /// Random invertible transforms per frame in the equivalence experiment.
    pub transforms: usize,
    /// Record wall-clock time per trial. Off by default so that reports are
    /// byte-identical across runs.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(field: Field, n_min: usize, n_max: usize, m_rules: Vec<MRule>, trials: usize, seed: u64) -> Self {
        Self {
            field,
            n_min,
            n_max,
            m_rules,
            trials,
            seed,
            tol: Tolerance::default(),
            restarts: crate::reconstruct::complex::DEFAULT_RESTARTS,
            transforms: DEFAULT_TRANSFORMS,
            timing: false,
        }
    }

    /// The `(N, M)` cells of the sweep, in order.
    pub fn cells(&self) -> Result<Vec<(usize, usize)>, Error> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidParameters(format!(
                "N range {}..={} is empty or contains 0",
                self.n_min, self.n_max
            )));
        }
        let mut cells = Vec::new();
        for n in self.n_min..=self.n_max {
            for rule in &self.m_rules {
                match rule.size(n) {
                    Some(m) if m >= n => cells.push((n, m)),
                    _ => {
                        return Err(Error::InvalidParameters(format!(
                            "M = {rule} gives fewer than N = {n} vectors; M ≥ N required"
                        )))
                    }
                }
            }
        }
        Ok(cells)
    }

    fn require_field(&self, field: Field) -> Result<(), Error> {
        if self.field != field {
            return Err(Error::FieldMismatch {
                expected: field,
                actual: self.field,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigRecord {
    pub field: Field,
    pub n_min: usize,
    pub n_max: usize,
    pub m_rules: Vec<String>,
    pub trials: usize,
    pub seed: u64,
    pub rank_eps: f64,
    pub residual_eps: f64,
    pub restarts: usize,
    pub transforms: usize,
}

impl From<&ExperimentConfig> for ConfigRecord {
    fn from(c: &ExperimentConfig) -> Self {
        Self {
            field: c.field,
            n_min: c.n_min,
            n_max: c.n_max,
            m_rules: c.m_rules.iter().map(ToString::to_string).collect(),
            trials: c.trials,
            seed: c.seed,
            rank_eps: c.tol.rank_eps(),
            residual_eps: c.tol.residual_eps(),
            restarts: c.restarts,
            transforms: c.transforms,
        }
    }
}

/// One `(field, N, M)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellReport {
    pub field: Field,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    /// Fraction of frames not shown to be non-injective: certified
    /// `Injective` (real) or passing every necessary condition (complex).
    pub inj_rate: f64,
    /// Fraction of trials whose test signal was recovered as the unique
    /// solution. In the equivalence experiment: fraction of frames on which
    /// every transformed verdict agreed.
    pub rec_rate: f64,
    /// Fraction certified `NotInjective` with a re-verified witness.
    pub not_injective_rate: f64,
    /// Number of trials by count of rays found for the test signal.
    pub ambiguity_counts: BTreeMap<usize, usize>,
    pub mean_ms: f64,
    pub seed: u64,
}

/// A constructed pair `x`, `y = D_S x` with equal magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinSetRecord {
    pub n: usize,
    pub m: usize,
    pub frame_seed: u64,
    /// One-based coordinates flipped by `D_S`, in the basis where the
    /// frame contains the canonical basis.
    pub subset: Vec<usize>,
    /// One-based index of the frame vector with no zero entry.
    pub k0: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub magnitude_gap: f64,
    pub distinct_rays: bool,
    /// Rays found by the exact search on the magnitudes of `x`.
    pub rays_found: usize,
}

impl ThinSetRecord {
    pub fn verified(&self, tol: &Tolerance) -> bool {
        let scale = 1.0 + self.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.magnitude_gap <= tol.residual_eps() * scale && self.distinct_rays && self.rays_found >= 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: ConfigRecord,
    pub cells: Vec<CellReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub thin_set: Vec<ThinSetRecord>,
}

pub const CSV_HEADER: &str = "field,N,M,trials,inj_rate,rec_rate,mean_ms,seed";

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                c.field, c.n, c.m, c.trials, c.inj_rate, c.rec_rate, c.mean_ms, c.seed
            ));
        }
        out
    }

    /// Fixed-width table for terminals.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{}\n{:<8} {:>3} {:>3} {:>6} {:>9} {:>9} {:>9}\n",
            self.experiment, "field", "N", "M", "trials", "inj_rate", "not_inj", "rec_rate"
        );
        for c in &self.cells {
            out.push_str(&format!(
                "{:<8} {:>3} {:>3} {:>6} {:>9.4} {:>9.4} {:>9.4}\n",
                c.field.as_str(),
                c.n,
                c.m,
                c.trials,
                c.inj_rate,
                c.not_injective_rate,
                c.rec_rate
            ));
        }
        if !self.thin_set.is_empty() {
            let tol = Tolerance::new(self.config.rank_eps, self.config.residual_eps).expect("valid stored tolerance");
            let ok = self.thin_set.iter().filter(|r| r.verified(&tol)).count();
            out.push_str(&format!("thin-set pairs verified: {ok}/{}\n", self.thin_set.len()));
        }
        out
    }

    /// Writes `<experiment>.json` and `<experiment>.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf), Error> {
        std::fs::create_dir_all(dir)?;
        let json = dir.join(format!("{}.json", self.experiment));
        let csv = dir.join(format!("{}.csv", self.experiment));
        std::fs::write(&json, self.to_json())?;
        std::fs::write(&csv, self.to_csv())?;
        Ok((json, csv))
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Outcome {
    passes: bool,
    not_injective: bool,
    recovered: bool,
    rays: usize,
    ms: f64,
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ trial as u64
}

/// Stream 0 is reserved for the frame generator.
fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_vector<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    (0..n).map(|_| T::sample_gaussian(rng)).collect()
}

fn run_cell(
    cfg: &ExperimentConfig,
    n: usize,
    m: usize,
    trial: impl Fn(u64) -> Result<Outcome, Error> + Sync,
) -> Result<CellReport, Error> {
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            let mut o = trial(trial_seed(cfg.seed, t))?;
            o.ms = if cfg.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            Ok(o)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let k = outcomes.len() as f64;
    let rate = |f: fn(&Outcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as f64 / k;
    let mut ambiguity_counts = BTreeMap::new();
    for o in &outcomes {
        *ambiguity_counts.entry(o.rays).or_insert(0) += 1;
    }
    Ok(CellReport {
        field: cfg.field,
        n,
        m,
        trials: cfg.trials,
        inj_rate: rate(|o| o.passes),
        rec_rate: rate(|o| o.recovered),
        not_injective_rate: rate(|o| o.not_injective),
        ambiguity_counts,
        mean_ms: outcomes.iter().map(|o| o.ms).sum::<f64>() / k,
        seed: cfg.seed,
    })
}

fn report(name: &str, cfg: &ExperimentConfig, cells: Vec<CellReport>) -> ExperimentReport {
    ExperimentReport {
        experiment: name.to_string(),
        config: cfg.into(),
        cells,
        thin_set: Vec::new(),
    }
}

/// Certifies random real frames and recovers one random signal per frame.
pub fn run_real_genericity(cfg: &ExperimentConfig) -> Result<ExperimentReport, Error> {
    cfg.require_field(Field::Real)?;
    let cells = cfg.cells()?;
    if cfg.trials == 0 {
        return Ok(report("real-genericity", cfg, Vec::new()));
    }
    let budget = SearchBudget::default();
    let tol = &cfg.tol;
    let cells = cells
        .into_iter()
        .map(|(n, m)| {
            run_cell(cfg, n, m, |seed| {
                let frame = gen_random::<f64>(n, m, seed)?;
                let cert = complement_property(&frame, tol, &budget)?;
                let not_injective = match &cert.witness {
                    Some(w) => cert.verdict == Verdict::NotInjective && w.verify(&frame, tol)?,
                    None => false,
                };
                let x = random_vector::<f64>(&mut stream_rng(seed, 1), n);
                let result = reconstruct_real(&frame, &magnitude_map(&frame, &x)?, tol)?;
                Ok(Outcome {
                    passes: cert.is_injective(),
                    not_injective,
                    recovered: result.status == Status::Unique && ray_equal(result.rays[0].representative(), &x, tol),
                    rays: result.rays.len(),
                    ms: 0.0,
                })
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(report("real-genericity", cfg, cells))
}

/// A real thin-set pair together with the data that produced it.
#[derive(Debug, Clone)]
pub struct ThinSetPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub subset: SignPattern,
    pub k0: usize,
}

/// Constructs `x` and `y = D_S x` with equal magnitudes for a real frame
/// with `N < M < 2N−1`.
///
/// The frame is first mapped to an equivalent one `G = {R f_i}` containing
/// the canonical basis. With `S` the first `M−N+1` coordinates, `x_S` is
/// chosen orthogonal to the restriction to `S` of every non-basis `g_k`, so
/// that `⟨x, (I − D_S) g_k⟩ = 0`; `x_{S^∁}` is random. Returns `None` when no
/// non-basis vector has all entries nonzero.
pub fn thin_set_pair(frame: &Frame<f64>, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<Option<ThinSetPair>, Error> {
    let (n, m) = (frame.dim(), frame.len());
    if !(n < m && m + 1 < 2 * n) {
        return Err(Error::InvalidParameters(format!(
            "thin-set construction needs N < M < 2N−1 (got N = {n}, M = {m})"
        )));
    }
    let basis_idx = (0..m)
        .combinations(n)
        .find(|idx| linalg::rank(&frame.subset_matrix(idx), tol) == n)
        .ok_or(Error::Singular)?;
    let r = linalg::inverse(&frame.subset_matrix(&basis_idx), tol)?;
    let g = frame.apply_invertible(&r, tol)?;
    let others: Vec<usize> = (0..m).filter(|i| !basis_idx.contains(i)).collect();

    let nonzero = |k: usize| {
        let v = g.vector(k);
        let scale = linalg::scalar::norm(v);
        v.iter().all(|e| e.abs() > tol.residual_eps().sqrt() * scale)
    };
    let Some(&k0) = others.iter().find(|&&k| nonzero(k)) else {
        return Ok(None);
    };

    let s_len = m - n + 1;
    let s: Vec<usize> = (0..s_len).collect();
    let constraints = DenseMatrix::from_rows(&others.iter().map(|&k| g.vector(k)[..s_len].to_vec()).collect::<Vec<_>>())?;
    let null = linalg::null_space(&constraints, tol);
    let coeffs = random_vector::<f64>(rng, null.cols());
    let mut x = null.mul_vec(&coeffs)?;
    x.extend(random_vector::<f64>(rng, n - s_len));
    let subset = SignPattern::from_indices(n, &s)?;
    let y = subset.apply(&x)?;

    // magnitudes transform as |⟨x, R f⟩| = |⟨Rᵀx, f⟩|
    let rt = r.transpose();
    Ok(Some(ThinSetPair {
        x: rt.mul_vec(&x)?,
        y: rt.mul_vec(&y)?,
        subset,
        k0,
    }))
}

/// Random-signal recovery rate plus exact thin-set constructions for a real
/// `N < M < 2N−1`, where injectivity fails but almost every signal is still
/// determined.
pub fn run_dense_interior_real(n: usize, m: usize, trials: usize, seed: u64) -> Result<ExperimentReport, Error> {
    run_dense_interior_with(&ExperimentConfig::new(Field::Real, n, n, vec![MRule::Fixed(m)], trials, seed))
}

pub fn run_dense_interior_with(cfg: &ExperimentConfig) -> Result<ExperimentReport, Error> {
    cfg.require_field(Field::Real)?;
    let cells = cfg.cells()?;
    for &(n, m) in &cells {
        if !(n < m && m + 1 < 2 * n) {
            return Err(Error::InvalidParameters(format!(
                "dense-interior experiment needs N < M < 2N−1 (got N = {n}, M = {m})"
            )));
        }
    }
    if cfg.trials == 0 {
        return Ok(report("dense-interior", cfg, Vec::new()));
    }
    let tol = &cfg.tol;
    let budget = SearchBudget::default();
    let mut out = Vec::new();
    let mut thin_set = Vec::new();
    for (n, m) in cells {
        out.push(run_cell(cfg, n, m, |seed| {
            let frame = gen_random::<f64>(n, m, seed)?;
            let cert = complement_property(&frame, tol, &budget)?;
            let x = random_vector::<f64>(&mut stream_rng(seed, 1), n);
            let rays = enumerate_ambiguities(&frame, &x, tol)?;
            Ok(Outcome {
                passes: cert.is_injective(),
                not_injective: cert.verdict == Verdict::NotInjective,
                recovered: rays.len() == 1 && ray_equal(rays[0].representative(), &x, tol),
                rays: rays.len(),
                ms: 0.0,
            })
        })?);

        let records = (0..THIN_SET_CASES.min(cfg.trials))
            .into_par_iter()
            .map(|t| thin_set_case(n, m, trial_seed(cfg.seed, t), tol))
            .collect::<Result<Vec<_>, _>>()?;
        thin_set.extend(records);
    }
    let mut r = report("dense-interior", cfg, out);
    r.thin_set = thin_set;
    Ok(r)
}

const MAX_THIN_SET_RESAMPLES: u64 = 1000;

fn thin_set_case(n: usize, m: usize, seed: u64, tol: &Tolerance) -> Result<ThinSetRecord, Error> {
    for bump in 0..MAX_THIN_SET_RESAMPLES {
        let frame_seed = seed.wrapping_add(bump << 32);
        let frame = gen_random::<f64>(n, m, frame_seed)?;
        let Some(pair) = thin_set_pair(&frame, &mut stream_rng(frame_seed, 2), tol)? else {
            continue;
        };
        let a = magnitude_map(&frame, &pair.x)?;
        let b = magnitude_map(&frame, &pair.y)?;
        return Ok(ThinSetRecord {
            n,
            m,
            frame_seed,
            subset: pair.subset.indices().into_iter().map(|i| i + 1).collect(),
            k0: pair.k0 + 1,
            magnitude_gap: a.distance(&b),
            distinct_rays: !ray_equal(&pair.x, &pair.y, tol),
            rays_found: enumerate_ambiguities(&frame, &pair.x, tol)?.len(),
            x: pair.x,
            y: pair.y,
        });
    }
    Err(Error::InvalidParameters("no frame with a fully nonzero non-basis vector found".into()))
}

pub const COMPLEX_MAX_N: usize = 3;

/// Size-bound failures, necessary-condition passes, and heuristic recovery
/// of random signals for complex frames.
pub fn run_complex_genericity(cfg: &ExperimentConfig) -> Result<ExperimentReport, Error> {
    cfg.require_field(Field::Complex)?;
    if cfg.n_max > COMPLEX_MAX_N {
        return Err(Error::InvalidParameters(format!(
            "complex experiments are limited to N ≤ {COMPLEX_MAX_N}"
        )));
    }
    let cells = cfg.cells()?;
    if cfg.trials == 0 {
        return Ok(report("complex", cfg, Vec::new()));
    }
    let tol = &cfg.tol;
    let loose = Tolerance::new(tol.rank_eps(), RECOVERY_RAY_EPS)?;
    let budget = SearchBudget::default();
    let cells = cells
        .into_iter()
        .map(|(n, m)| {
            run_cell(cfg, n, m, |seed| {
                let frame = gen_random::<Complex64>(n, m, seed)?;
                let cert = certify(&frame, tol, &budget)?;
                let not_injective = match &cert.witness {
                    Some(w) => cert.verdict == Verdict::NotInjective && w.verify(&frame, tol)?,
                    None => false,
                };
                let x = random_vector::<Complex64>(&mut stream_rng(seed, 1), n);
                let a = magnitude_map(&frame, &x)?;
                let opts = ComplexOptions {
                    restarts: cfg.restarts,
                    seed,
                    ..Default::default()
                };
                let result = reconstruct_complex(&frame, &a, &opts, tol)?;
                let recovered = result.status == Status::HeuristicSuccess && {
                    let r = result.rays[0].representative();
                    let gap = magnitude_map(&frame, r)?.distance(&a);
                    gap <= RECOVERY_RAY_EPS * (1.0 + a.norm()) && ray_equal(r, &x, &loose)
                };
                Ok(Outcome {
                    passes: cert.verdict != Verdict::NotInjective,
                    not_injective,
                    recovered,
                    rays: result.rays.len(),
                    ms: 0.0,
                })
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(report("complex", cfg, cells))
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize, tol: &Tolerance) -> DenseMatrix<f64> {
    loop {
        let rows: Vec<Vec<f64>> = (0..n).map(|_| random_vector(rng, n)).collect();
        let r = DenseMatrix::from_rows(&rows).expect("square rows");
        if linalg::rank(&r, tol) == n {
            return r;
        }
    }
}

/// Certificate verdicts of `F`, of `{R f_i}` for random invertible `R`, and
/// of the canonical dual and canonical Parseval frames must all coincide;
/// witnesses must survive the map `x ↦ R^{−*} x`.
pub fn run_equivalence_invariance(cfg: &ExperimentConfig) -> Result<ExperimentReport, Error> {
    cfg.require_field(Field::Real)?;
    let cells = cfg.cells()?;
    if cfg.trials == 0 {
        return Ok(report("equivalence", cfg, Vec::new()));
    }
    let tol = &cfg.tol;
    let budget = SearchBudget::default();
    let cells = cells
        .into_iter()
        .map(|(n, m)| {
            run_cell(cfg, n, m, |seed| {
                let frame = gen_random::<f64>(n, m, seed)?;
                let cert = complement_property(&frame, tol, &budget)?;
                let verdict = cert.verdict;
                let mut agree = true;
                let mut witnesses_ok = cert.witness.is_none() || cert.witness.as_ref().unwrap().verify(&frame, tol)?;
                let mut rng = stream_rng(seed, 3);
                for _ in 0..cfg.transforms {
                    let r = random_invertible(&mut rng, n, tol);
                    let g = frame.apply_invertible(&r, tol)?;
                    agree &= complement_property(&g, tol, &budget)?.verdict == verdict;
                    if let Some(w) = &cert.witness {
                        witnesses_ok &= transform_witness(w, &r, tol)?.verify(&g, tol)?;
                    }
                }
                let dual = frame.canonical_dual(tol)?;
                let parseval = frame.canonical_parseval(tol)?;
                agree &= complement_property(&dual, tol, &budget)?.verdict == verdict;
                agree &= complement_property(&parseval, tol, &budget)?.verdict == verdict;
                let (s, _) = parseval.frame_operator(tol)?;
                agree &= s.sub(&DenseMatrix::identity(n))?.max_abs() <= PARSEVAL_EPS;
                Ok(Outcome {
                    passes: cert.is_injective(),
                    not_injective: verdict == Verdict::NotInjective && witnesses_ok,
                    recovered: agree && witnesses_ok,
                    rays: 0,
                    ms: 0.0,
                })
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(report("equivalence", cfg, cells))
}

/// Named experiment setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    RealGenericity,
    Sharpness,
    DenseInterior,
    Complex,
    Equivalence,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::RealGenericity,
        Preset::Sharpness,
        Preset::DenseInterior,
        Preset::Complex,
        Preset::Equivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::RealGenericity => "real-genericity",
            Preset::Sharpness => "sharpness",
            Preset::DenseInterior => "dense-interior",
            Preset::Complex => "complex",
            Preset::Equivalence => "equivalence",
        }
    }

    pub fn config(self, seed: u64) -> ExperimentConfig {
        use MRule::*;
        match self {
            Preset::RealGenericity => ExperimentConfig::new(Field::Real, 2, 5, vec![TwoNMinusOne, TwoN], 100, seed),
            Preset::Sharpness => ExperimentConfig::new(Field::Real, 2, 5, vec![TwoNMinusTwo], 100, seed),
            Preset::DenseInterior => ExperimentConfig::new(Field::Real, 3, 3, vec![Fixed(4)], 500, seed),
            Preset::Complex => ExperimentConfig::new(Field::Complex, 2, 3, vec![TwoNMinusOne, TwoN, FourNMinusTwo], 100, seed),
            Preset::Equivalence => ExperimentConfig::new(Field::Real, 3, 3, vec![Fixed(4), Fixed(5)], 50, seed),
        }
    }

    pub fn run(self, cfg: &ExperimentConfig) -> Result<ExperimentReport, Error> {
        let mut report = match self {
            Preset::RealGenericity | Preset::Sharpness => run_real_genericity(cfg)?,
            Preset::DenseInterior => run_dense_interior_with(cfg)?,
            Preset::Complex => run_complex_genericity(cfg)?,
            Preset::Equivalence => run_equivalence_invariance(cfg)?,
        };
        report.experiment = self.name().to_string();
        Ok(report)
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown preset {s:?}; expected one of {}",
                    Preset::ALL.iter().map(|p| p.name()).join(", ")
                ))
            })
    }
}
