//! Generator-space logic on constrained polynomial logical zonotopes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Cplz, FactorId, IdAllocator};
use crate::bits::{BitMatrix, BitVector, Gate};
use crate::error::{Error, Result};

/// How two operands' factors relate.
///
/// `Minkowski` treats the operands as independent (fresh identifiers for the
/// result); `Exact` aligns shared identifiers so that a set appearing twice
/// stays correlated with itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpMode {
    Minkowski,
    #[default]
    Exact,
}

impl std::str::FromStr for OpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minkowski" => Ok(OpMode::Minkowski),
            "exact" => Ok(OpMode::Exact),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}`"))),
        }
    }
}

fn check_dims(c1: &Cplz, c2: &Cplz) -> Result<()> {
    if c1.dim() != c2.dim() {
        return Err(Error::Dimension {
            expected: c1.dim(),
            found: c2.dim(),
        });
    }
    Ok(())
}

/// Union of several identifier vectors in first-seen order, with the row
/// position of every operand's identifiers inside the union.
fn union_ids(id_lists: &[&[FactorId]]) -> (Vec<FactorId>, Vec<Vec<usize>>) {
    let mut merged = Vec::new();
    let mut index: HashMap<FactorId, usize> = HashMap::new();
    let positions = id_lists
        .iter()
        .map(|ids| {
            ids.iter()
                .map(|&id| {
                    *index.entry(id).or_insert_with(|| {
                        merged.push(id);
                        merged.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    (merged, positions)
}

fn realign(c: &Cplz, merged: &[FactorId], positions: &[usize]) -> Cplz {
    let p = merged.len();
    Cplz::from_parts(
        c.center.clone(),
        c.generators.clone(),
        c.exponents.scatter_rows(p, positions),
        c.constraint_generators.clone(),
        c.constraint_rhs.clone(),
        c.constraint_exponents.scatter_rows(p, positions),
        merged.to_vec(),
    )
}

/// Rewrites both operands over the union of their identifiers: `c1`'s ids
/// first, then the ids only `c2` has. Rows for foreign ids are zero, so the
/// point sets do not change.
pub fn merge_id(c1: &Cplz, c2: &Cplz) -> (Cplz, Cplz) {
    let (merged, positions) = union_ids(&[&c1.ids, &c2.ids]);
    (
        realign(c1, &merged, &positions[0]),
        realign(c2, &merged, &positions[1]),
    )
}

/// `{x1 ⊕ x2 | x1 ∈ c1, x2 ∈ c2}` with independent factors.
pub fn mink_xor(c1: &Cplz, c2: &Cplz, alloc: &IdAllocator) -> Result<Cplz> {
    check_dims(c1, c2)?;
    let p = c1.num_factors() + c2.num_factors();
    Ok(Cplz::from_parts(
        c1.center.xor(&c2.center),
        c1.generators.hcat(&c2.generators)?,
        c1.exponents.blkdiag(&c2.exponents),
        c1.constraint_generators.blkdiag(&c2.constraint_generators),
        c1.constraint_rhs.concat(&c2.constraint_rhs),
        c1.constraint_exponents.blkdiag(&c2.constraint_exponents),
        alloc.unique_id(p),
    ))
}

/// Generator block shared by the Minkowski and exact AND:
/// `[c1 g2_j.., c2 g1_i.., g1_i g2_j..]` (i outer, j inner).
fn and_generators(c1: &Cplz, c2: &Cplz) -> BitMatrix {
    let g1 = c1.generators.columns();
    let g2 = c2.generators.columns();
    let mut cols = Vec::with_capacity(g1.len() + g2.len() + g1.len() * g2.len());
    cols.extend(g2.iter().map(|g| c1.center.and(g)));
    cols.extend(g1.iter().map(|g| c2.center.and(g)));
    for a in g1 {
        cols.extend(g2.iter().map(|b| a.and(b)));
    }
    BitMatrix::from_columns(c1.dim(), cols).expect("AND generator shapes")
}

/// `{x1 ∧ x2 | x1 ∈ c1, x2 ∈ c2}` with independent factors.
///
/// The result carries `p1 + p2` fresh identifiers, one per row of the
/// exponent matrix.
pub fn mink_and(c1: &Cplz, c2: &Cplz, alloc: &IdAllocator) -> Result<Cplz> {
    check_dims(c1, c2)?;
    let (p1, p2) = (c1.num_factors(), c2.num_factors());
    let zero1 = BitVector::zeros(p1);
    let zero2 = BitVector::zeros(p2);
    let e1 = c1.exponents.columns();
    let e2 = c2.exponents.columns();
    let mut exps = Vec::with_capacity(e1.len() + e2.len() + e1.len() * e2.len());
    exps.extend(e2.iter().map(|e| zero1.concat(e)));
    exps.extend(e1.iter().map(|e| e.concat(&zero2)));
    for a in e1 {
        exps.extend(e2.iter().map(|b| a.concat(b)));
    }
    Ok(Cplz::from_parts(
        c1.center.and(&c2.center),
        and_generators(c1, c2),
        BitMatrix::from_columns(p1 + p2, exps)?,
        c1.constraint_generators.blkdiag(&c2.constraint_generators),
        c1.constraint_rhs.concat(&c2.constraint_rhs),
        c1.constraint_exponents.blkdiag(&c2.constraint_exponents),
        alloc.unique_id(p1 + p2),
    ))
}

/// Complements every point: `c ⊕ 1`, everything else unchanged.
pub fn negate(c: &Cplz) -> Cplz {
    Cplz {
        center: c.center.complement(),
        ..c.clone()
    }
}

/// Constraint part of an exact operation: both operands' constraints over
/// the shared identifier rows.
fn merged_constraints(c1: &Cplz, c2: &Cplz) -> Result<(BitMatrix, BitVector, BitMatrix)> {
    Ok((
        c1.constraint_generators.blkdiag(&c2.constraint_generators),
        c1.constraint_rhs.concat(&c2.constraint_rhs),
        c1.constraint_exponents.hcat(&c2.constraint_exponents)?,
    ))
}

/// XOR under shared factors: `{x(α) ⊕ y(α)}`.
pub fn exact_xor(c1: &Cplz, c2: &Cplz) -> Result<Cplz> {
    check_dims(c1, c2)?;
    let (c1, c2) = merge_id(c1, c2);
    let (a, b, r) = merged_constraints(&c1, &c2)?;
    Ok(Cplz::from_parts(
        c1.center.xor(&c2.center),
        c1.generators.hcat(&c2.generators)?,
        c1.exponents.hcat(&c2.exponents)?,
        a,
        b,
        r,
        c1.ids,
    ))
}

/// AND under shared factors: `{x(α) ∧ y(α)}`. Product monomials take the
/// elementwise max (OR) of the two exponent columns since `α² = α`.
pub fn exact_and(c1: &Cplz, c2: &Cplz) -> Result<Cplz> {
    check_dims(c1, c2)?;
    let (c1, c2) = merge_id(c1, c2);
    let p = c1.num_factors();
    let e1 = c1.exponents.columns();
    let e2 = c2.exponents.columns();
    let mut exps = Vec::with_capacity(e1.len() + e2.len() + e1.len() * e2.len());
    exps.extend(e2.iter().cloned());
    exps.extend(e1.iter().cloned());
    for a in e1 {
        exps.extend(e2.iter().map(|b| a.or(b)));
    }
    let (a, b, r) = merged_constraints(&c1, &c2)?;
    Ok(Cplz::from_parts(
        c1.center.and(&c2.center),
        and_generators(&c1, &c2),
        BitMatrix::from_columns(p, exps)?,
        a,
        b,
        r,
        c1.ids,
    ))
}

fn base_xor(c1: &Cplz, c2: &Cplz, alloc: &IdAllocator, mode: OpMode) -> Result<Cplz> {
    match mode {
        OpMode::Minkowski => mink_xor(c1, c2, alloc),
        OpMode::Exact => exact_xor(c1, c2),
    }
}

fn base_and(c1: &Cplz, c2: &Cplz, alloc: &IdAllocator, mode: OpMode) -> Result<Cplz> {
    match mode {
        OpMode::Minkowski => mink_and(c1, c2, alloc),
        OpMode::Exact => exact_and(c1, c2),
    }
}

/// XNOR, NAND, OR and NOR built from XOR/AND and NOT.
pub fn derived_gate(
    gate: Gate,
    c1: &Cplz,
    c2: &Cplz,
    alloc: &IdAllocator,
    mode: OpMode,
) -> Result<Cplz> {
    check_dims(c1, c2)?;
    match gate {
        Gate::Xnor => Ok(negate(&base_xor(c1, c2, alloc, mode)?)),
        Gate::Nand => Ok(negate(&base_and(c1, c2, alloc, mode)?)),
        // OR(a, b) = NAND(¬a, ¬b)
        Gate::Or => Ok(negate(&base_and(&negate(c1), &negate(c2), alloc, mode)?)),
        Gate::Nor => Ok(base_and(&negate(c1), &negate(c2), alloc, mode)?),
        Gate::Xor | Gate::And => Err(Error::InvalidArgument(format!(
            "{gate} is a base operation, not a derived gate"
        ))),
    }
}

/// Any of the six gates in the given mode.
pub fn apply_gate(gate: Gate, c1: &Cplz, c2: &Cplz, alloc: &IdAllocator, mode: OpMode) -> Result<Cplz> {
    match gate {
        Gate::Xor => base_xor(c1, c2, alloc, mode),
        Gate::And => base_and(c1, c2, alloc, mode),
        _ => derived_gate(gate, c1, c2, alloc, mode),
    }
}

/// Exact intersection.
///
/// Keeps `⟨c1, G1, [E1; 0]⟩`, carries both constraint systems and couples
/// the two parameterizations with `[G1 G2] = c1 ⊕ c2` over fresh factors
/// `α = [α1; α2]`.
pub fn intersect(c1: &Cplz, c2: &Cplz, alloc: &IdAllocator) -> Result<Cplz> {
    check_dims(c1, c2)?;
    let (p1, p2) = (c1.num_factors(), c2.num_factors());
    let h1 = c1.num_generators();
    let exponents = c1.exponents.vstack(&BitMatrix::zeros(p2, h1))?;
    let coupling = c1.generators.hcat(&c2.generators)?;
    let a = c1
        .constraint_generators
        .blkdiag(&c2.constraint_generators)
        .blkdiag(&coupling);
    let b = c1
        .constraint_rhs
        .concat(&c2.constraint_rhs)
        .concat(&c1.center.xor(&c2.center));
    let r = c1
        .constraint_exponents
        .blkdiag(&c2.constraint_exponents)
        .hcat(&c1.exponents.blkdiag(&c2.exponents))?;
    Ok(Cplz::from_parts(
        c1.center.clone(),
        c1.generators.clone(),
        exponents,
        a,
        b,
        r,
        alloc.unique_id(p1 + p2),
    ))
}

/// Cartesian product `[x1; x2; ...]` of sets that may share identifiers.
/// Shared factors stay shared, so correlations between the parts are kept.
pub fn stack(sets: &[&Cplz]) -> Cplz {
    let id_lists: Vec<&[FactorId]> = sets.iter().map(|s| s.ids()).collect();
    let (merged, positions) = union_ids(&id_lists);
    let p = merged.len();
    let n: usize = sets.iter().map(|s| s.dim()).sum();

    let mut center = BitVector::zeros(0);
    let mut gens = Vec::new();
    let mut exps = Vec::new();
    let mut a = BitMatrix::zeros(0, 0);
    let mut b = BitVector::zeros(0);
    let mut r = BitMatrix::empty(p);
    let mut offset = 0;
    for (set, pos) in sets.iter().zip(&positions) {
        center = center.concat(&set.center);
        let before = BitVector::zeros(offset);
        let after = BitVector::zeros(n - offset - set.dim());
        for (g, e) in set.generators.columns().iter().zip(set.exponents.columns()) {
            gens.push(before.concat(g).concat(&after));
            exps.push(e.scatter(p, pos));
        }
        a = a.blkdiag(&set.constraint_generators);
        b = b.concat(&set.constraint_rhs);
        r = r
            .hcat(&set.constraint_exponents.scatter_rows(p, pos))
            .expect("merged rows");
        offset += set.dim();
    }
    Cplz::from_parts(
        center,
        BitMatrix::from_columns(n, gens).expect("stacked generators"),
        BitMatrix::from_columns(p, exps).expect("stacked exponents"),
        a,
        b,
        r,
        merged,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_points, pointset_gate, EnumerationBudget, PointSet};
    use crate::setreps::{Lz, Plz};

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn pts(set: &Cplz) -> PointSet {
        enumerate_points(set, &EnumerationBudget::default()).unwrap()
    }

    fn ps(n: usize, points: &[&str]) -> PointSet {
        PointSet::from_points(n, points.iter().map(|s| bv(s))).unwrap()
    }

    /// `c ⊕ α g` over one factor with the given id.
    fn two_point(c: &str, g: &str, id: FactorId) -> Cplz {
        let c = bv(c);
        let n = c.len();
        Plz::new(
            c,
            BitMatrix::from_columns(n, vec![bv(g)]).unwrap(),
            BitMatrix::identity(1),
            vec![id],
        )
        .unwrap()
        .promote()
    }

    fn single(c: &str) -> Cplz {
        Cplz::singleton(bv(c))
    }

    #[test]
    fn merge_id_identical_ids() {
        let x = two_point("0", "1", 1);
        let (a, b) = merge_id(&x, &x);
        assert_eq!(a.ids(), &[1]);
        assert_eq!(a.exponents(), x.exponents());
        assert_eq!(b.exponents(), x.exponents());
    }

    #[test]
    fn merge_id_disjoint_ids() {
        let x = two_point("0", "1", 1);
        let y = two_point("0", "1", 2);
        let (a, b) = merge_id(&x, &y);
        assert_eq!(a.ids(), &[1, 2]);
        assert_eq!(b.ids(), &[1, 2]);
        assert_eq!(a.exponents().columns(), &[bv("10")]);
        assert_eq!(b.exponents().columns(), &[bv("01")]);
    }

    #[test]
    fn merge_id_aligns_rows_by_identifier() {
        // x uses ids [1,3]; y uses [3,2] with a monomial in both.
        let x = Plz::new(
            bv("000"),
            BitMatrix::from_columns(3, vec![bv("100"), bv("010")]).unwrap(),
            BitMatrix::identity(2),
            vec![1, 3],
        )
        .unwrap()
        .promote();
        let y = Plz::new(
            bv("001"),
            BitMatrix::from_columns(3, vec![bv("001"), bv("110")]).unwrap(),
            BitMatrix::from_columns(2, vec![bv("11"), bv("01")]).unwrap(),
            vec![3, 2],
        )
        .unwrap()
        .promote();
        let (a, b) = merge_id(&x, &y);
        assert_eq!(a.ids(), &[1, 3, 2]);
        assert_eq!(b.ids(), &[1, 3, 2]);
        assert_eq!(b.exponents().columns(), &[bv("011"), bv("001")]);
        assert!(pts(&a).set_eq(&pts(&x)));
        assert!(pts(&b).set_eq(&pts(&y)));
    }

    #[test]
    fn mink_xor_examples() {
        let alloc = IdAllocator::new();
        let r = mink_xor(&single("1"), &single("0"), &alloc).unwrap();
        assert!(pts(&r).set_eq(&ps(1, &["1"])));

        let r = mink_xor(&two_point("0", "1", 1), &single("1"), &alloc).unwrap();
        assert!(pts(&r).set_eq(&ps(1, &["0", "1"])));

        let r = mink_xor(&two_point("00", "10", 1), &two_point("00", "01", 2), &alloc).unwrap();
        assert!(pts(&r).set_eq(&ps(2, &["00", "01", "10", "11"])));
        assert_eq!(r.num_generators(), 2);
        assert_eq!(r.num_factors(), 2);
    }

    #[test]
    fn mink_xor_treats_shared_ids_independently() {
        let alloc = IdAllocator::new();
        let x = two_point("0", "1", 1);
        let r = mink_xor(&x, &x, &alloc).unwrap();
        assert!(pts(&r).set_eq(&ps(1, &["0", "1"])));
        assert!(r.ids().iter().all(|&id| id != 1 || alloc.peek() > 1));
    }

    #[test]
    fn mink_and_examples() {
        let alloc = IdAllocator::new();
        let r = mink_and(&single("1"), &single("1"), &alloc).unwrap();
        assert!(pts(&r).set_eq(&ps(1, &["1"])));
        let r = mink_and(&two_point("0", "1", 1), &single("1"), &alloc).unwrap();
        assert!(pts(&r).set_eq(&ps(1, &["0", "1"])));
        let r = mink_and(&two_point("0", "1", 1), &two_point("0", "1", 2), &alloc).unwrap();
        assert!(pts(&r).set_eq(&ps(1, &["0", "1"])));
        assert_eq!(r.num_generators(), 1 + 1 + 1);
        assert_eq!(r.exponents().columns(), &[bv("01"), bv("10"), bv("11")]);
    }

    #[test]
    fn negate_examples() {
        assert!(pts(&negate(&single("10"))).set_eq(&ps(2, &["01"])));
        let c = two_point("00", "10", 1);
        assert!(pts(&negate(&c)).set_eq(&ps(2, &["11", "01"])));
        assert_eq!(negate(&negate(&c)), c);
    }

    #[test]
    fn derived_gate_examples() {
        let alloc = IdAllocator::new();
        for mode in [OpMode::Minkowski, OpMode::Exact] {
            let r = derived_gate(Gate::Nand, &single("1"), &single("1"), &alloc, mode).unwrap();
            assert!(pts(&r).set_eq(&ps(1, &["0"])));
            let r = derived_gate(Gate::Nor, &single("0"), &single("0"), &alloc, mode).unwrap();
            assert!(pts(&r).set_eq(&ps(1, &["1"])));
            let r = derived_gate(Gate::Or, &two_point("0", "1", 1), &single("0"), &alloc, mode).unwrap();
            assert!(pts(&r).set_eq(&ps(1, &["0", "1"])));
        }
        assert!(derived_gate(Gate::Xor, &single("1"), &single("1"), &alloc, OpMode::Exact).is_err());
    }

    #[test]
    fn derived_gates_follow_truth_tables_on_singletons() {
        let alloc = IdAllocator::new();
        for gate in Gate::ALL {
            for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
                let x = Cplz::singleton(BitVector::from_bools([a]));
                let y = Cplz::singleton(BitVector::from_bools([b]));
                let want = BitVector::from_bools([gate.apply_bit(a, b)]);
                for mode in [OpMode::Minkowski, OpMode::Exact] {
                    let r = apply_gate(gate, &x, &y, &alloc, mode).unwrap();
                    let got = pts(&r);
                    assert_eq!(got.len(), 1);
                    assert!(got.contains(&want), "{gate} {a} {b} {mode:?}");
                }
            }
        }
    }

    #[test]
    fn exact_xor_examples() {
        let x = two_point("0", "1", 1);
        assert!(pts(&exact_xor(&x, &x).unwrap()).set_eq(&ps(1, &["0"])));
        assert!(pts(&exact_xor(&x, &single("1")).unwrap()).set_eq(&ps(1, &["0", "1"])));
        let y = two_point("0", "1", 2);
        let r = exact_xor(&x, &y).unwrap();
        assert_eq!(r.ids(), &[1, 2]);
        assert!(pts(&r).set_eq(&ps(1, &["0", "1"])));
    }

    #[test]
    fn exact_and_examples() {
        let x = two_point("01", "11", 1);
        assert!(pts(&exact_and(&x, &x).unwrap()).set_eq(&pts(&x)));
        assert!(pts(&exact_and(&single("1"), &single("0")).unwrap()).set_eq(&ps(1, &["0"])));
        let a = two_point("0", "1", 1);
        let b = two_point("0", "1", 2);
        let exact = pts(&exact_and(&a, &b).unwrap());
        let alloc = IdAllocator::new();
        alloc.observe(&[1, 2]);
        let mink = pts(&mink_and(&a, &b, &alloc).unwrap());
        assert!(exact.set_eq(&ps(1, &["0", "1"])));
        assert!(exact.set_eq(&mink));
    }

    #[test]
    fn exact_and_exponent_layout() {
        let x = two_point("1", "1", 1);
        let y = two_point("1", "1", 2);
        let r = exact_and(&x, &y).unwrap();
        // [E2 cols, E1 cols, max(E1_i, E2_j)]
        assert_eq!(r.exponents().columns(), &[bv("01"), bv("10"), bv("11")]);
        assert_eq!(r.ids(), &[1, 2]);
    }

    #[test]
    fn intersect_examples() {
        let alloc = IdAllocator::new();
        let r = intersect(&two_point("0", "1", 1), &single("1"), &alloc).unwrap();
        assert!(pts(&r).set_eq(&ps(1, &["1"])));
        let r = intersect(&single("0"), &single("1"), &alloc).unwrap();
        assert!(pts(&r).is_empty());
    }

    #[test]
    fn intersect_shape() {
        let alloc = IdAllocator::new();
        let x = two_point("00", "10", 1);
        let y = mink_xor(&two_point("00", "01", 2), &two_point("00", "11", 3), &alloc).unwrap();
        let r = intersect(&x, &y, &alloc).unwrap();
        assert_eq!(r.num_constraints(), 2);
        assert_eq!(r.num_constraint_terms(), 1 + 2);
        assert_eq!(r.num_factors(), 3);
        assert_eq!(r.exponents().rows(), 3);
    }

    #[test]
    fn dimension_errors() {
        let alloc = IdAllocator::new();
        let a = single("1");
        let b = single("10");
        assert!(matches!(mink_xor(&a, &b, &alloc), Err(Error::Dimension { .. })));
        assert!(matches!(mink_and(&a, &b, &alloc), Err(Error::Dimension { .. })));
        assert!(matches!(exact_xor(&a, &b), Err(Error::Dimension { .. })));
        assert!(matches!(exact_and(&a, &b), Err(Error::Dimension { .. })));
        assert!(matches!(intersect(&a, &b, &alloc), Err(Error::Dimension { .. })));
        assert!(matches!(
            derived_gate(Gate::Or, &a, &b, &alloc, OpMode::Exact),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn stack_keeps_shared_factors() {
        let x = two_point("0", "1", 1);
        let s = stack(&[&x, &x]);
        assert!(pts(&s).set_eq(&ps(2, &["00", "11"])));
        let y = two_point("1", "1", 2);
        let s = stack(&[&x, &y]);
        assert!(pts(&s).set_eq(&ps(2, &["01", "00", "11", "10"])));
        let lz = Lz::singleton(bv("1")).promote(&IdAllocator::new()).promote();
        assert_eq!(stack(&[&lz]).dim(), 1);
    }

    #[test]
    fn pointset_gate_agrees_on_small_example() {
        let alloc = IdAllocator::new();
        let x = two_point("00", "10", 1);
        let y = two_point("00", "01", 2);
        let want = pointset_gate(Gate::Xor, &pts(&x), &pts(&y)).unwrap();
        assert!(pts(&mink_xor(&x, &y, &alloc).unwrap()).set_eq(&want));
    }
}
