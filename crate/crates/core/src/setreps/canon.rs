use std::collections::{HashMap, HashSet};

use super::Cplz;
use crate::bits::{BitMatrix, BitVector};

/// Merges terms that share a monomial: `XOR`s their coefficient columns and
/// folds the constant monomial (all-zero exponent) into `constant`. Terms
/// whose coefficient cancels to zero are dropped. First-seen order is kept.
fn collect_terms(
    coefficients: &BitMatrix,
    exponents: &BitMatrix,
    constant: &mut BitVector,
) -> (Vec<BitVector>, Vec<BitVector>) {
    let mut slot: HashMap<&BitVector, usize> = HashMap::new();
    let mut coefs: Vec<BitVector> = Vec::new();
    let mut monos: Vec<BitVector> = Vec::new();
    for (g, e) in coefficients.columns().iter().zip(exponents.columns()) {
        if e.is_zero() {
            constant.xor_assign(g);
            continue;
        }
        match slot.get(e) {
            Some(&i) => coefs[i].xor_assign(g),
            None => {
                slot.insert(e, coefs.len());
                coefs.push(g.clone());
                monos.push(e.clone());
            }
        }
    }
    let keep: Vec<bool> = coefs.iter().map(|g| !g.is_zero()).collect();
    let mut k = keep.iter();
    coefs.retain(|_| *k.next().unwrap());
    let mut k = keep.iter();
    monos.retain(|_| *k.next().unwrap());
    (coefs, monos)
}

/// Simplifies a set without changing its points.
///
/// Generators: constant monomials fold into the center, generators with the
/// same monomial merge (so identical `(g, e)` pairs cancel), zero generators
/// go. Constraints get the same treatment with `b` as the constant, then
/// trivially satisfied rows (`0 = 0`) and duplicate rows are removed.
/// Finally, factors that no monomial mentions are dropped.
pub fn canonicalize(set: &Cplz) -> Cplz {
    let mut center = set.center.clone();
    let (gens, exps) = collect_terms(&set.generators, &set.exponents, &mut center);

    let mut rhs = set.constraint_rhs.clone();
    let (acols, rcols) = collect_terms(
        &set.constraint_generators,
        &set.constraint_exponents,
        &mut rhs,
    );
    let q = acols.len();
    let a = BitMatrix::from_columns(set.num_constraints(), acols).expect("constraint columns");

    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    let mut b = Vec::new();
    for (r, row) in a.row_vectors().into_iter().enumerate() {
        let bit = rhs.get(r);
        if row.is_zero() && !bit {
            continue;
        }
        if seen.insert((row.clone(), bit)) {
            rows.push(row);
            b.push(bit);
        }
    }
    let a = BitMatrix::from_rows(q, &rows).expect("constraint rows");
    let b = BitVector::from_bools(b);

    let p = set.num_factors();
    let mut used = BitVector::zeros(p);
    for e in exps.iter().chain(&rcols) {
        used.or_assign(e);
    }
    let live: Vec<usize> = used.ones_iter().collect();
    let ids = live.iter().map(|&k| set.ids[k]).collect();
    let e = BitMatrix::from_columns(p, exps)
        .expect("exponent columns")
        .gather_rows(&live);
    let r = BitMatrix::from_columns(p, rcols)
        .expect("constraint exponent columns")
        .gather_rows(&live);

    Cplz::from_parts(
        center,
        BitMatrix::from_columns(set.dim(), gens).expect("generator columns"),
        e,
        a,
        b,
        r,
        ids,
    )
}
