//! Operations on plain logical zonotopes. Every generator has its own
//! independent factor, so AND can only be over-approximated.

use std::collections::HashSet;

use super::Lz;
use crate::bits::{BitMatrix, BitVector, Gate};
use crate::error::{Error, Result};

fn check_dims(l1: &Lz, l2: &Lz) -> Result<()> {
    if l1.dim() != l2.dim() {
        return Err(Error::Dimension {
            expected: l1.dim(),
            found: l2.dim(),
        });
    }
    Ok(())
}

/// `⟨c1 ⊕ c2, [G1 G2]⟩`, exact.
pub fn lz_xor(l1: &Lz, l2: &Lz) -> Result<Lz> {
    check_dims(l1, l2)?;
    Lz::new(l1.center.xor(&l2.center), l1.generators.hcat(&l2.generators)?)
}

pub fn lz_not(l: &Lz) -> Lz {
    Lz {
        center: l.center.complement(),
        generators: l.generators.clone(),
    }
}

/// Over-approximated AND: `⟨c1 c2, [c1 g2_j, c2 g1_i, g1_i g2_j]⟩` with each
/// product `β1_i β2_j` relaxed to a new independent factor.
pub fn lz_and(l1: &Lz, l2: &Lz) -> Result<Lz> {
    check_dims(l1, l2)?;
    let g1 = l1.generators.columns();
    let g2 = l2.generators.columns();
    let mut cols = Vec::with_capacity(g1.len() + g2.len() + g1.len() * g2.len());
    cols.extend(g2.iter().map(|g| l1.center.and(g)));
    cols.extend(g1.iter().map(|g| l2.center.and(g)));
    for a in g1 {
        cols.extend(g2.iter().map(|b| a.and(b)));
    }
    Lz::new(
        l1.center.and(&l2.center),
        BitMatrix::from_columns(l1.dim(), cols)?,
    )
}

/// Over-approximation of `L1 ∩ L2`: every common point `z` satisfies
/// `z = z ∧ z`, so it lies in the AND of the two zonotopes.
pub fn intersect_overapprox_lz(l1: &Lz, l2: &Lz) -> Result<Lz> {
    lz_and(l1, l2)
}

/// Any gate; derived gates go through NOT and AND/XOR.
pub fn lz_gate(gate: Gate, l1: &Lz, l2: &Lz) -> Result<Lz> {
    match gate {
        Gate::Xor => lz_xor(l1, l2),
        Gate::And => lz_and(l1, l2),
        Gate::Xnor => Ok(lz_not(&lz_xor(l1, l2)?)),
        Gate::Nand => Ok(lz_not(&lz_and(l1, l2)?)),
        Gate::Or => Ok(lz_not(&lz_and(&lz_not(l1), &lz_not(l2))?)),
        Gate::Nor => lz_and(&lz_not(l1), &lz_not(l2)),
    }
}

/// Drops zero and repeated generators. With independent factors a repeated
/// generator adds nothing to the span, so the point set is unchanged.
pub fn lz_canonicalize(l: &Lz) -> Lz {
    let mut seen: HashSet<&BitVector> = HashSet::new();
    let cols = l
        .generators
        .columns()
        .iter()
        .filter(|g| !g.is_zero() && seen.insert(*g))
        .cloned()
        .collect();
    Lz {
        center: l.center.clone(),
        generators: BitMatrix::from_columns(l.dim(), cols).expect("same rows"),
    }
}
