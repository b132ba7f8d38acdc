//! Point-domain ground truth.
//!
//! [`enumerate_points`] expands a set by sweeping every factor assignment
//! `α ∈ {0,1}^p` in ascending order, keeping those that satisfy the
//! constraints. The sweep is split across rayon workers for larger `p`;
//! each worker fills a private set and the sets are merged at the end.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bits::{span_basis, BitVector, Gate};
use crate::error::{Error, Result};
use crate::setreps::{Cplz, Lz};

/// Hard ceiling on `p`: assignments are packed into one `u64`.
pub const MAX_ENUMERABLE_FACTORS: usize = 63;

pub const DEFAULT_MAX_FACTORS: usize = 24;
pub const DEFAULT_MAX_POINTS: usize = 1 << 24;

/// Environment variable overriding [`DEFAULT_MAX_FACTORS`].
pub const MAX_FACTORS_ENV: &str = "LOGICZONO_MAX_FACTORS";

const PARALLEL_MIN_FACTORS: usize = 12;
const CHUNK_BITS: usize = 10;

/// A deduplicated set of points of one dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSet {
    n: usize,
    points: HashSet<BitVector>,
}

impl PointSet {
    pub fn new(n: usize) -> Self {
        PointSet {
            n,
            points: HashSet::new(),
        }
    }

    pub fn from_points<I: IntoIterator<Item = BitVector>>(n: usize, points: I) -> Result<Self> {
        let mut set = PointSet::new(n);
        for p in points {
            set.insert(p)?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, point: BitVector) -> Result<bool> {
        if point.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: point.len(),
            });
        }
        Ok(self.points.insert(point))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &BitVector) -> bool {
        self.points.contains(point)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitVector> {
        self.points.iter()
    }

    /// Points in bitstring order.
    pub fn sorted(&self) -> Vec<BitVector> {
        let mut v: Vec<_> = self.points.iter().cloned().collect();
        v.sort();
        v
    }

    pub fn set_eq(&self, other: &PointSet) -> bool {
        sets_equal(self, other)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.n == other.n && self.points.is_subset(&other.points)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet {
            n: self.n,
            points: self.points.intersection(&other.points).cloned().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point set serializes")
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.sorted().iter().map(|p| p.to_bitstring()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    max_factors: usize,
    max_points: usize,
}

impl EnumerationBudget {
    pub fn new(max_factors: usize, max_points: usize) -> Result<Self> {
        if max_factors == 0 || max_points == 0 {
            return Err(Error::InvalidArgument(
                "enumeration caps must be positive".into(),
            ));
        }
        Ok(EnumerationBudget {
            max_factors,
            max_points,
        })
    }

    /// Default budget with `max_factors` taken from `LOGICZONO_MAX_FACTORS`
    /// when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_FACTORS_ENV) {
            Ok(v) => {
                let k = v.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidArgument(format!("{MAX_FACTORS_ENV}={v:?} is not a count"))
                })?;
                Self::new(k, DEFAULT_MAX_POINTS)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn max_factors(&self) -> usize {
        self.max_factors
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    pub fn with_max_factors(self, max_factors: usize) -> Result<Self> {
        Self::new(max_factors, self.max_points)
    }

    fn check_factors(&self, p: usize) -> Result<()> {
        let limit = self.max_factors.min(MAX_ENUMERABLE_FACTORS);
        if p > limit {
            return Err(Error::BudgetExceeded {
                what: "factor count",
                value: p,
                limit,
            });
        }
        Ok(())
    }

    fn check_points(&self, count: usize) -> Result<()> {
        if count > self.max_points {
            return Err(Error::BudgetExceeded {
                what: "point count",
                value: count,
                limit: self.max_points,
            });
        }
        Ok(())
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_factors: DEFAULT_MAX_FACTORS,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

/// Flattened view of one set for the α sweep: every monomial as a factor
/// mask, every coefficient column as raw words.
struct Sweep {
    n: usize,
    center: Vec<u64>,
    gen_masks: Vec<u64>,
    gens: Vec<Vec<u64>>,
    con_masks: Vec<u64>,
    cons: Vec<Vec<u64>>,
    rhs: Vec<u64>,
    assignments: u64,
}

impl Sweep {
    fn new(set: &Cplz, budget: &EnumerationBudget) -> Result<Self> {
        let p = set.num_factors();
        budget.check_factors(p)?;
        Ok(Sweep {
            n: set.dim(),
            center: set.center().words().to_vec(),
            gen_masks: set.exponents().columns().iter().map(|e| e.to_u64()).collect(),
            gens: set.generators().columns().iter().map(|g| g.words().to_vec()).collect(),
            con_masks: set
                .constraint_exponents()
                .columns()
                .iter()
                .map(|e| e.to_u64())
                .collect(),
            cons: set
                .constraint_generators()
                .columns()
                .iter()
                .map(|a| a.words().to_vec())
                .collect(),
            rhs: set.constraint_rhs().words().to_vec(),
            assignments: 1u64 << p,
        })
    }

    #[inline]
    fn admissible(&self, alpha: u64, scratch: &mut [u64]) -> bool {
        if self.cons.is_empty() {
            return self.rhs.iter().all(|&w| w == 0);
        }
        scratch.copy_from_slice(&self.rhs);
        for (mask, col) in self.con_masks.iter().zip(&self.cons) {
            if mask & !alpha == 0 {
                for (s, w) in scratch.iter_mut().zip(col) {
                    *s ^= w;
                }
            }
        }
        scratch.iter().all(|&w| w == 0)
    }

    #[inline]
    fn point(&self, alpha: u64, out: &mut [u64]) {
        out.copy_from_slice(&self.center);
        for (mask, col) in self.gen_masks.iter().zip(&self.gens) {
            if mask & !alpha == 0 {
                for (o, w) in out.iter_mut().zip(col) {
                    *o ^= w;
                }
            }
        }
    }

    fn scratch(&self) -> (Vec<u64>, Vec<u64>) {
        (vec![0; self.rhs.len()], vec![0; self.center.len()])
    }

    fn collect_range(
        &self,
        range: std::ops::Range<u64>,
        budget: &EnumerationBudget,
    ) -> Result<HashSet<BitVector>> {
        let (mut con, mut pt) = self.scratch();
        let mut out = HashSet::new();
        for alpha in range {
            if self.admissible(alpha, &mut con) {
                self.point(alpha, &mut pt);
                out.insert(BitVector::from_words(self.n, &pt));
                budget.check_points(out.len())?;
            }
        }
        Ok(out)
    }

    fn first_admissible(&self) -> Option<u64> {
        if self.assignments < 1 << PARALLEL_MIN_FACTORS {
            let (mut con, _) = self.scratch();
            return (0..self.assignments).find(|&a| self.admissible(a, &mut con));
        }
        let chunk = 1u64 << CHUNK_BITS;
        (0..self.assignments / chunk)
            .into_par_iter()
            .filter_map(|i| {
                let (mut con, _) = self.scratch();
                (i * chunk..(i + 1) * chunk).find(|&a| self.admissible(a, &mut con))
            })
            .find_first(|_| true)
    }
}

/// Every point of `set`, deduplicated.
pub fn enumerate_points(set: &Cplz, budget: &EnumerationBudget) -> Result<PointSet> {
    let sweep = Sweep::new(set, budget)?;
    let points = if sweep.assignments < 1 << PARALLEL_MIN_FACTORS {
        sweep.collect_range(0..sweep.assignments, budget)?
    } else {
        let chunk = 1u64 << CHUNK_BITS;
        let chunks = sweep.assignments / chunk;
        (0..chunks)
            .into_par_iter()
            .map(|i| sweep.collect_range(i * chunk..(i + 1) * chunk, budget))
            .try_reduce(HashSet::new, |mut a, b| {
                let (small, big) = if a.len() < b.len() { (a, b) } else { (b, std::mem::take(&mut a)) };
                let mut big = big;
                big.extend(small);
                budget.check_points(big.len())?;
                Ok(big)
            })?
    };
    Ok(PointSet {
        n: set.dim(),
        points,
    })
}

/// Some member of `set`, from the first admissible assignment in ascending
/// order, or `None` when the set is empty.
pub fn find_point(set: &Cplz, budget: &EnumerationBudget) -> Result<Option<BitVector>> {
    let sweep = Sweep::new(set, budget)?;
    Ok(sweep.first_admissible().map(|alpha| {
        let mut pt = vec![0; sweep.center.len()];
        sweep.point(alpha, &mut pt);
        BitVector::from_words(sweep.n, &pt)
    }))
}

pub fn is_empty(set: &Cplz, budget: &EnumerationBudget) -> Result<bool> {
    Ok(find_point(set, budget)?.is_none())
}

pub fn contains(set: &Cplz, x: &BitVector, budget: &EnumerationBudget) -> Result<bool> {
    if x.len() != set.dim() {
        return Err(Error::Dimension {
            expected: set.dim(),
            found: x.len(),
        });
    }
    let sweep = Sweep::new(set, budget)?;
    let target = x.words();
    Ok((0..sweep.assignments).into_par_iter().any(|alpha| {
        let (mut con, mut pt) = sweep.scratch();
        if !sweep.admissible(alpha, &mut con) {
            return false;
        }
        sweep.point(alpha, &mut pt);
        pt == target
    }))
}

/// `{gate(z1, z2) | z1 ∈ p1, z2 ∈ p2}`.
pub fn pointset_gate(gate: Gate, p1: &PointSet, p2: &PointSet) -> Result<PointSet> {
    if p1.n != p2.n {
        return Err(Error::Dimension {
            expected: p1.n,
            found: p2.n,
        });
    }
    let mut out = PointSet::new(p1.n);
    for a in &p1.points {
        for b in &p2.points {
            out.points.insert(a.gate(gate, b)?);
        }
    }
    Ok(out)
}

pub fn pointset_not(p: &PointSet) -> PointSet {
    PointSet {
        n: p.n,
        points: p.points.iter().map(BitVector::complement).collect(),
    }
}

pub fn sets_equal(p1: &PointSet, p2: &PointSet) -> bool {
    p1.n == p2.n && p1.points == p2.points
}

/// Points of a logical zonotope: `c` plus its generators' GF(2) span,
/// enumerated over a reduced basis so that redundant generators cost
/// nothing.
pub fn enumerate_lz(lz: &Lz, budget: &EnumerationBudget) -> Result<PointSet> {
    let basis = span_basis(lz.generators().columns());
    budget.check_factors(basis.len())?;
    budget.check_points(1usize << basis.len())?;
    let mut out = PointSet::new(lz.dim());
    for beta in 0u64..1 << basis.len() {
        let mut x = lz.center().clone();
        for (k, b) in basis.iter().enumerate() {
            if beta >> k & 1 == 1 {
                x.xor_assign(b);
            }
        }
        out.points.insert(x);
    }
    Ok(out)
}

/// `|L| = 2^rank(G)`, saturating at `u128::MAX`.
pub fn lz_point_count(lz: &Lz) -> u128 {
    let rank = lz.generators().rank();
    if rank >= 128 {
        u128::MAX
    } else {
        1u128 << rank
    }
}
