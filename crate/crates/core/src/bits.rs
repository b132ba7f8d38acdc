//! Bit-packed binary vectors and column-major binary matrices.
//!
//! Bits are packed least-significant-bit first into `u64` words: index 0 is
//! bit 0 of word 0. Bits past `len` are kept at zero so that equality and
//! hashing can work on whole words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

type Words = SmallVec<[u64; 2]>;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Two-input boolean gates applied bitwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Gate {
    Xor,
    And,
    Or,
    Xnor,
    Nand,
    Nor,
}

impl Gate {
    pub const ALL: [Gate; 6] = [
        Gate::Xor,
        Gate::And,
        Gate::Or,
        Gate::Xnor,
        Gate::Nand,
        Gate::Nor,
    ];

    #[inline]
    pub fn apply_word(self, a: u64, b: u64) -> u64 {
        match self {
            Gate::Xor => a ^ b,
            Gate::And => a & b,
            Gate::Or => a | b,
            Gate::Xnor => !(a ^ b),
            Gate::Nand => !(a & b),
            Gate::Nor => !(a | b),
        }
    }

    pub fn apply_bit(self, a: bool, b: bool) -> bool {
        self.apply_word(a as u64, b as u64) & 1 == 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::Xor => "XOR",
            Gate::And => "AND",
            Gate::Or => "OR",
            Gate::Xnor => "XNOR",
            Gate::Nand => "NAND",
            Gate::Nor => "NOR",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "XOR" => Ok(Gate::Xor),
            "AND" => Ok(Gate::And),
            "OR" => Ok(Gate::Or),
            "XNOR" => Ok(Gate::Xnor),
            "NAND" => Ok(Gate::Nand),
            "NOR" => Ok(Gate::Nor),
            _ => Err(Error::InvalidArgument(format!("unknown gate `{s}`"))),
        }
    }
}

/// A dense vector over {0,1}.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Words,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: SmallVec::from_elem(0, word_count(len)),
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: SmallVec::from_elem(!0, word_count(len)),
        };
        v.clear_padding();
        v
    }

    /// Vector with a single set bit at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Words::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        BitVector { len, words }
    }

    /// Low `len` bits of `value`, `len <= 64`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD_BITS, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_padding();
        }
        v
    }

    /// Vector over the given words; bits past `len` are cleared.
    pub fn from_words(len: usize, words: &[u64]) -> Self {
        assert_eq!(words.len(), word_count(len), "word count for {len} bits");
        let mut v = BitVector {
            len,
            words: SmallVec::from_slice(words),
        };
        v.clear_padding();
        v
    }

    /// Packs the vector into one word; only meaningful when `len <= 64`.
    #[inline]
    pub fn to_u64(&self) -> u64 {
        debug_assert!(self.len <= WORD_BITS);
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD_BITS] >> (index % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the set bits, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(w * WORD_BITS + bit)
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::Dimension {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    /// Bitwise `gate(self[i], other[i])`.
    pub fn gate(&self, gate: Gate, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        let mut out = BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| gate.apply_word(a, b))
                .collect(),
        };
        out.clear_padding();
        Ok(out)
    }

    pub fn complement(&self) -> BitVector {
        let mut out = BitVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_padding();
        out
    }

    /// In-place XOR. Panics on length mismatch; internal callers have already
    /// checked shapes.
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[inline]
    pub fn and_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    #[inline]
    pub fn or_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.and_assign(other);
        out
    }

    pub fn or(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.or_assign(other);
        out
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitVector) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    /// `[self; other]`
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in other.ones_iter() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Scatters bit `i` of `self` to position `positions[i]` of a fresh
    /// vector of length `new_len`.
    pub fn scatter(&self, new_len: usize, positions: &[usize]) -> BitVector {
        debug_assert_eq!(positions.len(), self.len);
        let mut out = BitVector::zeros(new_len);
        for i in self.ones_iter() {
            out.set(positions[i], true);
        }
        out
    }

    /// Picks the bits at `indices` into a new vector.
    pub fn gather(&self, indices: &[usize]) -> BitVector {
        BitVector::from_bools(indices.iter().map(|&i| self.get(i)))
    }

    pub fn to_bitstring(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub fn parse_bitstring(s: &str) -> Result<BitVector> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "invalid character {ch:?} at position {i} in bitstring {s:?}"
                    )))
                }
            }
        }
        Ok(BitVector::from_bools(bits))
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitVector::parse_bitstring(s)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_bitstring())
    }
}

/// Orders by length, then lexicographically on the bitstring form (index 0
/// first, `0 < 1`).
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (&a, &b) in self.words.iter().zip(&other.words) {
                let diff = a ^ b;
                if diff != 0 {
                    let low = diff & diff.wrapping_neg();
                    return if a & low != 0 {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitVector::parse_bitstring(&s).map_err(serde::de::Error::custom)
    }
}

pub fn elementwise_gate(gate: Gate, a: &BitVector, b: &BitVector) -> Result<BitVector> {
    a.gate(gate, b)
}

pub fn complement(a: &BitVector) -> BitVector {
    a.complement()
}

/// Column-major binary matrix: an ordered list of columns of equal length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitMatrix {
    rows: usize,
    columns: Vec<BitVector>,
}

impl BitMatrix {
    /// A `rows x 0` matrix.
    pub fn empty(rows: usize) -> Self {
        BitMatrix {
            rows,
            columns: Vec::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            columns: vec![BitVector::zeros(rows); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            rows: n,
            columns: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::Dimension {
                expected: rows,
                found: bad.len(),
            });
        }
        Ok(BitMatrix { rows, columns })
    }

    /// Builds a matrix from row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    found: row.len(),
                });
            }
            for c in row.ones_iter() {
                m.columns[c].set(r, true);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    #[inline]
    pub fn column(&self, i: usize) -> &BitVector {
        &self.columns[i]
    }

    #[inline]
    pub fn columns(&self) -> &[BitVector] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<BitVector> {
        self.columns
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.columns[col].get(row)
    }

    pub fn push_column(&mut self, col: BitVector) -> Result<()> {
        if col.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                found: col.len(),
            });
        }
        self.columns.push(col);
        Ok(())
    }

    /// Row `r` as a vector of length `cols`.
    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_bools(self.columns.iter().map(|c| c.get(r)))
    }

    pub fn row_vectors(&self) -> Vec<BitVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    /// `[self other]`
    pub fn hcat(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(BitMatrix {
            rows: self.rows,
            columns,
        })
    }

    /// `[self 0; 0 other]`
    pub fn blkdiag(&self, other: &BitMatrix) -> BitMatrix {
        let rows = self.rows + other.rows;
        let upper = BitVector::zeros(self.rows);
        let lower = BitVector::zeros(other.rows);
        let columns = self
            .columns
            .iter()
            .map(|c| c.concat(&lower))
            .chain(other.columns.iter().map(|c| upper.concat(c)))
            .collect();
        BitMatrix { rows, columns }
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols() != other.cols() {
            return Err(Error::Dimension {
                expected: self.cols(),
                found: other.cols(),
            });
        }
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.concat(b))
                .collect(),
        })
    }

    /// Moves row `i` to row `positions[i]` of a `new_rows`-row matrix; other
    /// rows are zero.
    pub fn scatter_rows(&self, new_rows: usize, positions: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: new_rows,
            columns: self
                .columns
                .iter()
                .map(|c| c.scatter(new_rows, positions))
                .collect(),
        }
    }

    pub fn gather_rows(&self, indices: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: indices.len(),
            columns: self.columns.iter().map(|c| c.gather(indices)).collect(),
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            rows: self.cols(),
            columns: self.row_vectors(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols()
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(i, c)| c.count_ones() == 1 && c.get(i))
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        span_basis(&self.columns).len()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{}", self.rows, self.cols())?;
        for c in &self.columns {
            write!(f, " {c}")?;
        }
        f.write_str(")")
    }
}

/// Reduced basis of the GF(2) span of `vectors` (Gaussian elimination).
pub fn span_basis(vectors: &[BitVector]) -> Vec<BitVector> {
    // Each basis vector is kept with its pivot = lowest set bit, and pivots
    // are eliminated from every other basis vector.
    let mut basis: Vec<(usize, BitVector)> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        for (pivot, b) in &basis {
            if v.get(*pivot) {
                v.xor_assign(b);
            }
        }
        let lowest = v.ones_iter().next();
        if let Some(pivot) = lowest {
            for (_, b) in basis.iter_mut() {
                if b.get(pivot) {
                    b.xor_assign(&v);
                }
            }
            basis.push((pivot, v));
        }
    }
    basis.into_iter().map(|(_, b)| b).collect()
}
