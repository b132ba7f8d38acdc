use super::{Cplz, IdAllocator, Lz, Plz};
use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};

/// Exact set for an explicit list of points.
///
/// One or two points use the logical-zonotope form (first point as center,
/// the difference as generator). Longer lists are indexed by `m = ⌈log2 k⌉`
/// factors; the map from index to point is converted to its algebraic normal
/// form with a Möbius transform, giving one generator per nonzero
/// coefficient and the monomial's factor set as exponent column. Indices past
/// the list repeat the first point.
pub fn from_points(points: &[BitVector], alloc: &IdAllocator) -> Result<Cplz> {
    let mut unique: Vec<BitVector> = Vec::with_capacity(points.len());
    for p in points {
        if !unique.contains(p) {
            unique.push(p.clone());
        }
    }
    let first = unique
        .first()
        .ok_or_else(|| Error::invalid_set("empty point list"))?
        .clone();
    let n = first.len();
    if let Some(bad) = unique.iter().find(|p| p.len() != n) {
        return Err(Error::Dimension {
            expected: n,
            found: bad.len(),
        });
    }
    if unique.len() <= 2 {
        return Ok(Lz::enclose_points(&unique)?.promote(alloc).promote());
    }

    let m = usize::BITS as usize - (unique.len() - 1).leading_zeros() as usize;
    let size = 1usize << m;
    let mut table: Vec<BitVector> = (0..size)
        .map(|i| unique.get(i).unwrap_or(&first).clone())
        .collect();
    for bit in 0..m {
        for idx in 0..size {
            if idx & (1 << bit) != 0 {
                let lower = table[idx ^ (1 << bit)].clone();
                table[idx].xor_assign(&lower);
            }
        }
    }

    let mut gens = Vec::new();
    let mut exps = Vec::new();
    for (idx, coef) in table.iter().enumerate().skip(1) {
        if !coef.is_zero() {
            gens.push(coef.clone());
            exps.push(BitVector::from_u64(m, idx as u64));
        }
    }
    let plz = Plz::new(
        table[0].clone(),
        BitMatrix::from_columns(n, gens)?,
        BitMatrix::from_columns(m, exps)?,
        alloc.unique_id(m),
    )?;
    Ok(plz.promote())
}
