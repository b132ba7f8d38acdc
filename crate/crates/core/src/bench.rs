//! Intersection benchmark: over-approximations by logical and polynomial
//! logical zonotopes against the exact constrained intersection.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::oracle::{enumerate_lz, enumerate_points, lz_point_count, EnumerationBudget};
use crate::setreps::{canonicalize, intersect, intersect_overapprox_lz, mink_and, Cplz, IdAllocator, Lz};

pub const DEFAULT_REPS: usize = 10;

/// Uniform vector in `{0,1}^n`.
pub fn random_vector<R: Rng>(n: usize, rng: &mut R) -> BitVector {
    let words: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.gen()).collect();
    BitVector::from_words(n, &words)
}

/// Center and `gens` generator columns drawn uniformly.
pub fn random_lz<R: Rng>(n: usize, gens: usize, rng: &mut R) -> Lz {
    let center = random_vector(n, rng);
    let cols = (0..gens).map(|_| random_vector(n, rng)).collect();
    Lz::new(center, BitMatrix::from_columns(n, cols).expect("column length")).expect("generator rows")
}

/// The pair used by trial `trial` of a run seeded with `seed`.
pub fn trial_pair(dim: usize, gens: usize, seed: u64, trial: usize) -> (Lz, Lz) {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, trial));
    let a = random_lz(dim, gens, &mut rng);
    let b = random_lz(dim, gens, &mut rng);
    (a, b)
}

pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    /// Logical zonotope over-approximation.
    Lz,
    /// Polynomial logical zonotope over-approximation (Minkowski AND).
    Plz,
    /// Exact constrained intersection.
    Cplz,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub trial: usize,
    /// Seed of this trial's generator; `None` for sets read from files.
    pub seed: Option<u64>,
    pub dim: usize,
    pub gens: usize,
    pub rep: Approach,
    pub op: &'static str,
    pub size: u128,
    pub generators: usize,
    pub factors: usize,
    pub time_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub rep: Approach,
    pub median_size: u128,
    pub median_time_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub distribution: &'static str,
    pub dim: usize,
    pub gens: usize,
    pub seed: Option<u64>,
    pub trials: usize,
    pub reps: usize,
    pub records: Vec<BenchRecord>,
    pub summary: Vec<Summary>,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Median wall time of `reps` runs after one discarded warm-up, and the
/// last result.
fn timed<T>(reps: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, Duration)> {
    f()?;
    let mut times = Vec::with_capacity(reps);
    let mut out = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let r = f()?;
        times.push(start.elapsed());
        out = Some(r);
    }
    times.sort_unstable();
    Ok((out.expect("at least one repetition"), times[times.len() / 2]))
}

fn lower_median<T: Copy + PartialOrd>(mut v: Vec<T>) -> T {
    v.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    v[(v.len() - 1) / 2]
}

/// Sets of one case in every form the three approaches need.
pub struct Case {
    pub lz: (Lz, Lz),
    pub cplz: (Cplz, Cplz),
}

impl Case {
    pub fn from_lz(a: Lz, b: Lz, alloc: &IdAllocator) -> Case {
        let ca = a.promote(alloc).promote();
        let cb = b.promote(alloc).promote();
        Case {
            lz: (a, b),
            cplz: (ca, cb),
        }
    }
}

/// Runs the three approaches on one case and checks that the exact result
/// is contained in both over-approximations.
pub fn run_case(
    case: &Case,
    trial: usize,
    seed: Option<u64>,
    reps: usize,
    alloc: &IdAllocator,
    budget: &EnumerationBudget,
) -> Result<Vec<BenchRecord>> {
    let (la, lb) = &case.lz;
    let (ca, cb) = &case.cplz;
    let dim = la.dim();
    let gens = la.num_generators().max(lb.num_generators());

    let (lz, t_lz) = timed(reps, || intersect_overapprox_lz(la, lb))?;
    let (plz, t_plz) = timed(reps, || mink_and(ca, cb, alloc))?;
    let (exact, t_exact) = timed(reps, || intersect(ca, cb, alloc))?;

    let lz_points = enumerate_lz(&lz, budget)?;
    let plz_points = enumerate_points(&canonicalize(&plz), budget)?;
    let exact_points = enumerate_points(&canonicalize(&exact), budget)?;
    if !exact_points.is_subset(&plz_points) || !exact_points.is_subset(&lz_points) {
        return Err(Error::Internal(format!(
            "containment violated in trial {trial}: exact result escapes an over-approximation"
        )));
    }

    let record = |rep, size, generators, factors, t: Duration| BenchRecord {
        trial,
        seed,
        dim,
        gens,
        rep,
        op: "intersect",
        size,
        generators,
        factors,
        time_ms: t.as_secs_f64() * 1e3,
    };
    Ok(vec![
        record(Approach::Lz, lz_point_count(&lz), lz.num_generators(), lz.num_generators(), t_lz),
        record(
            Approach::Plz,
            plz_points.len() as u128,
            plz.num_generators(),
            plz.num_factors(),
            t_plz,
        ),
        record(
            Approach::Cplz,
            exact_points.len() as u128,
            exact.num_generators(),
            exact.num_factors(),
            t_exact,
        ),
    ])
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub dim: usize,
    /// Generators per set; `dim - 1` when absent.
    pub gens: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub reps: usize,
}

impl BenchConfig {
    pub fn gens(&self) -> usize {
        self.gens.unwrap_or(self.dim.saturating_sub(1))
    }
}

pub fn summarize(records: &[BenchRecord]) -> Vec<Summary> {
    [Approach::Lz, Approach::Plz, Approach::Cplz]
        .into_iter()
        .filter_map(|rep| {
            let rs: Vec<&BenchRecord> = records.iter().filter(|r| r.rep == rep).collect();
            (!rs.is_empty()).then(|| Summary {
                rep,
                median_size: lower_median(rs.iter().map(|r| r.size).collect()),
                median_time_ms: lower_median(rs.iter().map(|r| r.time_ms).collect()),
            })
        })
        .collect()
}

/// Random-pair intersection benchmark.
pub fn run_intersect_bench(cfg: &BenchConfig, budget: &EnumerationBudget) -> Result<BenchReport> {
    if cfg.dim == 0 || cfg.trials == 0 {
        return Err(Error::InvalidArgument("dimension and trial count must be positive".into()));
    }
    let alloc = IdAllocator::new();
    let gens = cfg.gens();
    let mut records = Vec::with_capacity(3 * cfg.trials);
    for trial in 0..cfg.trials {
        let (a, b) = trial_pair(cfg.dim, gens, cfg.seed, trial);
        let case = Case::from_lz(a, b, &alloc);
        records.extend(run_case(
            &case,
            trial,
            Some(trial_seed(cfg.seed, trial)),
            cfg.reps,
            &alloc,
            budget,
        )?);
    }
    Ok(BenchReport {
        distribution: "chacha8, uniform center and generator columns",
        dim: cfg.dim,
        gens,
        seed: Some(cfg.seed),
        trials: cfg.trials,
        reps: cfg.reps,
        summary: summarize(&records),
        records,
    })
}
