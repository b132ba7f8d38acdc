//! The three zonotope-family set representations over GF(2).
//!
//! * [`LogicalZonotope`] `⟨c, G⟩`: `c ⊕ Σ β_i g_i` for independent `β`.
//! * [`PolyLogicalZonotope`] `⟨c, G, E, id⟩`: each generator is gated by a
//!   monomial of shared factors `α`, selected by the columns of `E`.
//! * [`ConstrainedPolyLogicalZonotope`] `⟨c, G, E, A, b, R, id⟩`: admissible
//!   `α` additionally satisfy `⊕_i mono_R_i(α) A_i = b`.
//!
//! Exponent convention: `α^0 = 1`, `α^1 = α`, so a monomial is the AND of the
//! factors whose exponent bit is set, and an all-zero exponent column is the
//! constant `1`.

mod canon;
mod ids;
pub mod io;
mod lz;
mod ops;
mod points;

pub use canon::canonicalize;
pub use ids::{FactorId, IdAllocator};
pub use lz::{intersect_overapprox_lz, lz_and, lz_canonicalize, lz_gate, lz_not, lz_xor};
pub use ops::{
    apply_gate, derived_gate, exact_and, exact_xor, intersect, merge_id, mink_and, mink_xor,
    negate, stack, OpMode,
};

use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};

pub type Lz = LogicalZonotope;
pub type Plz = PolyLogicalZonotope;
pub type Cplz = ConstrainedPolyLogicalZonotope;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalZonotope {
    center: BitVector,
    generators: BitMatrix,
}

impl LogicalZonotope {
    pub fn new(center: BitVector, generators: BitMatrix) -> Result<Self> {
        if generators.rows() != center.len() {
            return Err(Error::invalid_set(format!(
                "generator rows {} != dimension {}",
                generators.rows(),
                center.len()
            )));
        }
        Ok(LogicalZonotope { center, generators })
    }

    pub fn singleton(point: BitVector) -> Self {
        let n = point.len();
        LogicalZonotope {
            center: point,
            generators: BitMatrix::empty(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &BitVector {
        &self.center
    }

    pub fn generators(&self) -> &BitMatrix {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.cols()
    }

    /// `E = I_h` with fresh identifiers.
    pub fn promote(&self, alloc: &IdAllocator) -> PolyLogicalZonotope {
        let h = self.num_generators();
        PolyLogicalZonotope {
            center: self.center.clone(),
            generators: self.generators.clone(),
            exponents: BitMatrix::identity(h),
            ids: alloc.unique_id(h),
        }
    }

    /// Smallest logical zonotope through all `points`: the first point as
    /// center, one generator per further point. Exact for at most two points,
    /// or whenever the points already form an affine subspace.
    pub fn enclose_points(points: &[BitVector]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid_set("empty point list"))?;
        let mut generators = BitMatrix::empty(first.len());
        for p in &points[1..] {
            let g = p.gate(crate::bits::Gate::Xor, first)?;
            if !g.is_zero() && !generators.columns().contains(&g) {
                generators.push_column(g)?;
            }
        }
        LogicalZonotope::new(first.clone(), generators)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyLogicalZonotope {
    center: BitVector,
    generators: BitMatrix,
    exponents: BitMatrix,
    ids: Vec<FactorId>,
}

impl PolyLogicalZonotope {
    pub fn new(
        center: BitVector,
        generators: BitMatrix,
        exponents: BitMatrix,
        ids: Vec<FactorId>,
    ) -> Result<Self> {
        check_generator_part(&center, &generators, &exponents, &ids)?;
        Ok(PolyLogicalZonotope {
            center,
            generators,
            exponents,
            ids,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &BitVector {
        &self.center
    }

    pub fn generators(&self) -> &BitMatrix {
        &self.generators
    }

    pub fn exponents(&self) -> &BitMatrix {
        &self.exponents
    }

    pub fn ids(&self) -> &[FactorId] {
        &self.ids
    }

    pub fn num_generators(&self) -> usize {
        self.generators.cols()
    }

    pub fn num_factors(&self) -> usize {
        self.ids.len()
    }

    /// Same set with no constraints.
    pub fn promote(&self) -> ConstrainedPolyLogicalZonotope {
        let p = self.ids.len();
        ConstrainedPolyLogicalZonotope {
            center: self.center.clone(),
            generators: self.generators.clone(),
            exponents: self.exponents.clone(),
            constraint_generators: BitMatrix::empty(0),
            constraint_rhs: BitVector::zeros(0),
            constraint_exponents: BitMatrix::empty(p),
            ids: self.ids.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedPolyLogicalZonotope {
    center: BitVector,
    generators: BitMatrix,
    exponents: BitMatrix,
    constraint_generators: BitMatrix,
    constraint_rhs: BitVector,
    constraint_exponents: BitMatrix,
    ids: Vec<FactorId>,
}

fn check_generator_part(
    center: &BitVector,
    generators: &BitMatrix,
    exponents: &BitMatrix,
    ids: &[FactorId],
) -> Result<()> {
    if generators.rows() != center.len() {
        return Err(Error::invalid_set(format!(
            "G has {} rows but the center has dimension {}",
            generators.rows(),
            center.len()
        )));
    }
    if exponents.cols() != generators.cols() {
        return Err(Error::invalid_set(format!(
            "E has {} columns but G has {}",
            exponents.cols(),
            generators.cols()
        )));
    }
    if exponents.rows() != ids.len() {
        return Err(Error::invalid_set(format!(
            "E has {} rows but there are {} identifiers",
            exponents.rows(),
            ids.len()
        )));
    }
    if ids.contains(&0) {
        return Err(Error::invalid_set("identifiers must be positive"));
    }
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid_set("identifiers must be distinct"));
    }
    Ok(())
}

impl ConstrainedPolyLogicalZonotope {
    pub fn new(
        center: BitVector,
        generators: BitMatrix,
        exponents: BitMatrix,
        constraint_generators: BitMatrix,
        constraint_rhs: BitVector,
        constraint_exponents: BitMatrix,
        ids: Vec<FactorId>,
    ) -> Result<Self> {
        check_generator_part(&center, &generators, &exponents, &ids)?;
        if constraint_exponents.rows() != ids.len() {
            return Err(Error::invalid_set(format!(
                "R has {} rows but there are {} identifiers",
                constraint_exponents.rows(),
                ids.len()
            )));
        }
        if constraint_generators.cols() != constraint_exponents.cols() {
            return Err(Error::invalid_set(format!(
                "A has {} columns but R has {}",
                constraint_generators.cols(),
                constraint_exponents.cols()
            )));
        }
        if constraint_generators.rows() != constraint_rhs.len() {
            return Err(Error::invalid_set(format!(
                "A has {} rows but b has length {}",
                constraint_generators.rows(),
                constraint_rhs.len()
            )));
        }
        Ok(ConstrainedPolyLogicalZonotope {
            center,
            generators,
            exponents,
            constraint_generators,
            constraint_rhs,
            constraint_exponents,
            ids,
        })
    }

    /// Assembles a set from parts already known to be consistent.
    pub(crate) fn from_parts(
        center: BitVector,
        generators: BitMatrix,
        exponents: BitMatrix,
        constraint_generators: BitMatrix,
        constraint_rhs: BitVector,
        constraint_exponents: BitMatrix,
        ids: Vec<FactorId>,
    ) -> Self {
        let set = ConstrainedPolyLogicalZonotope {
            center,
            generators,
            exponents,
            constraint_generators,
            constraint_rhs,
            constraint_exponents,
            ids,
        };
        debug_assert!(set.validate().is_ok(), "{:?}", set.validate());
        set
    }

    fn validate(&self) -> Result<()> {
        Self::new(
            self.center.clone(),
            self.generators.clone(),
            self.exponents.clone(),
            self.constraint_generators.clone(),
            self.constraint_rhs.clone(),
            self.constraint_exponents.clone(),
            self.ids.clone(),
        )
        .map(|_| ())
    }

    pub fn singleton(point: BitVector) -> Self {
        LogicalZonotope::singleton(point)
            .promote(&IdAllocator::new())
            .promote()
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &BitVector {
        &self.center
    }

    pub fn generators(&self) -> &BitMatrix {
        &self.generators
    }

    pub fn exponents(&self) -> &BitMatrix {
        &self.exponents
    }

    pub fn constraint_generators(&self) -> &BitMatrix {
        &self.constraint_generators
    }

    pub fn constraint_rhs(&self) -> &BitVector {
        &self.constraint_rhs
    }

    pub fn constraint_exponents(&self) -> &BitMatrix {
        &self.constraint_exponents
    }

    pub fn ids(&self) -> &[FactorId] {
        &self.ids
    }

    /// h
    pub fn num_generators(&self) -> usize {
        self.generators.cols()
    }

    /// p
    pub fn num_factors(&self) -> usize {
        self.ids.len()
    }

    /// m
    pub fn num_constraints(&self) -> usize {
        self.constraint_generators.rows()
    }

    /// q
    pub fn num_constraint_terms(&self) -> usize {
        self.constraint_generators.cols()
    }

    pub fn is_unconstrained(&self) -> bool {
        self.num_constraints() == 0 && self.num_constraint_terms() == 0
    }

    /// Drops the (empty) constraint part. Fails when constraints exist.
    pub fn to_poly(&self) -> Result<PolyLogicalZonotope> {
        if self.num_constraints() != 0 {
            return Err(Error::invalid_set(
                "set carries constraints and has no polynomial logical zonotope form",
            ));
        }
        Ok(PolyLogicalZonotope {
            center: self.center.clone(),
            generators: self.generators.clone(),
            exponents: self.exponents.clone(),
            ids: self.ids.clone(),
        })
    }

    /// Replaces the identifier vector, keeping the matrices.
    pub fn with_ids(mut self, ids: Vec<FactorId>) -> Result<Self> {
        if ids.len() != self.ids.len() {
            return Err(Error::Dimension {
                expected: self.ids.len(),
                found: ids.len(),
            });
        }
        self.ids = ids;
        self.validate()?;
        Ok(self)
    }

    /// Same set over identifiers that were never issued before.
    pub fn relabel_fresh(self, alloc: &IdAllocator) -> Self {
        let ids = alloc.unique_id(self.ids.len());
        ConstrainedPolyLogicalZonotope { ids, ..self }
    }

    /// Exact representation of an explicit point list; see
    /// [`points::from_points`].
    pub fn from_points(points: &[BitVector], alloc: &IdAllocator) -> Result<Self> {
        points::from_points(points, alloc)
    }
}

impl From<PolyLogicalZonotope> for ConstrainedPolyLogicalZonotope {
    fn from(p: PolyLogicalZonotope) -> Self {
        p.promote()
    }
}
