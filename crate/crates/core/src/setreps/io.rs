//! JSON set-exchange format.
//!
//! ```json
//! {"kind": "cplz", "n": 2, "c": "01", "G": ["10"], "E": ["1"],
//!  "A": ["1"], "b": "1", "R": ["1"], "id": [4]}
//! ```
//!
//! Matrices are lists of columns, each a bitstring as long as the row count.
//! Absent fields are empty. `{"points": [...]}` is accepted anywhere a set
//! is expected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Cplz, FactorId, IdAllocator, Lz, Plz};
use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Lz,
    Plz,
    Cplz,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SetKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<BitVector>,
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<BitVector>>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<BitVector>>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<BitVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<BitVector>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<BitVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<Vec<FactorId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<BitVector>>,
}

/// A set as read from a file, before choosing a working representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySet {
    Lz(Lz),
    Plz(Plz),
    Cplz(Cplz),
    Points(Vec<BitVector>),
}

fn matrix(rows: usize, cols: &Option<Vec<BitVector>>, what: &str) -> Result<BitMatrix> {
    let cols = cols.clone().unwrap_or_default();
    BitMatrix::from_columns(rows, cols).map_err(|e| match e {
        Error::Dimension { expected, found } => Error::invalid_set(format!(
            "{what} column has length {found}, expected {expected}"
        )),
        other => other,
    })
}

impl SetFile {
    pub fn parse(self) -> Result<AnySet> {
        if let Some(points) = self.points {
            if let Some(n) = self.n {
                if let Some(bad) = points.iter().find(|p| p.len() != n) {
                    return Err(Error::Dimension {
                        expected: n,
                        found: bad.len(),
                    });
                }
            }
            if points.is_empty() {
                return Err(Error::invalid_set("empty point list"));
            }
            return Ok(AnySet::Points(points));
        }
        let c = match (self.c, self.n) {
            (Some(c), Some(n)) if c.len() != n => {
                return Err(Error::invalid_set(format!(
                    "center has length {} but n = {n}",
                    c.len()
                )))
            }
            (Some(c), _) => c,
            (None, Some(n)) => BitVector::zeros(n),
            (None, None) => return Err(Error::invalid_set("set needs `c` or `n`")),
        };
        let n = c.len();
        let g = matrix(n, &self.g, "G")?;
        let kind = self.kind.unwrap_or(SetKind::Cplz);
        if kind == SetKind::Lz {
            return Ok(AnySet::Lz(Lz::new(c, g)?));
        }
        let ids = self.id.unwrap_or_default();
        let p = ids.len();
        let e = matrix(p, &self.e, "E")?;
        if kind == SetKind::Plz {
            return Ok(AnySet::Plz(Plz::new(c, g, e, ids)?));
        }
        let b = self.b.unwrap_or_else(|| BitVector::zeros(0));
        let a = matrix(b.len(), &self.a, "A")?;
        let r = matrix(p, &self.r, "R")?;
        Ok(AnySet::Cplz(Cplz::new(c, g, e, a, b, r, ids)?))
    }
}

fn columns(m: &BitMatrix) -> Option<Vec<BitVector>> {
    Some(m.columns().to_vec())
}

impl From<&Lz> for SetFile {
    fn from(l: &Lz) -> Self {
        SetFile {
            kind: Some(SetKind::Lz),
            n: Some(l.dim()),
            c: Some(l.center().clone()),
            g: columns(l.generators()),
            ..Default::default()
        }
    }
}

impl From<&Plz> for SetFile {
    fn from(p: &Plz) -> Self {
        SetFile {
            kind: Some(SetKind::Plz),
            n: Some(p.dim()),
            c: Some(p.center().clone()),
            g: columns(p.generators()),
            e: columns(p.exponents()),
            id: Some(p.ids().to_vec()),
            ..Default::default()
        }
    }
}

impl From<&Cplz> for SetFile {
    fn from(s: &Cplz) -> Self {
        SetFile {
            kind: Some(SetKind::Cplz),
            n: Some(s.dim()),
            c: Some(s.center().clone()),
            g: columns(s.generators()),
            e: columns(s.exponents()),
            a: columns(s.constraint_generators()),
            b: Some(s.constraint_rhs().clone()),
            r: columns(s.constraint_exponents()),
            id: Some(s.ids().to_vec()),
            points: None,
        }
    }
}

impl AnySet {
    pub fn from_json(text: &str) -> Result<AnySet> {
        serde_json::from_str::<SetFile>(text)?.parse()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<AnySet> {
        Self::from_json(&read_text(path.as_ref())?)
    }

    pub fn from_value(value: serde_json::Value) -> Result<AnySet> {
        serde_json::from_value::<SetFile>(value)?.parse()
    }

    pub fn dim(&self) -> usize {
        match self {
            AnySet::Lz(l) => l.dim(),
            AnySet::Plz(p) => p.dim(),
            AnySet::Cplz(c) => c.dim(),
            AnySet::Points(pts) => pts[0].len(),
        }
    }

    /// Constrained form. Logical zonotopes and point lists get fresh
    /// identifiers; identifiers already present are reserved in `alloc`.
    pub fn to_cplz(&self, alloc: &IdAllocator) -> Result<Cplz> {
        match self {
            AnySet::Lz(l) => Ok(l.promote(alloc).promote()),
            AnySet::Plz(p) => {
                alloc.observe(p.ids());
                Ok(p.promote())
            }
            AnySet::Cplz(c) => {
                alloc.observe(c.ids());
                Ok(c.clone())
            }
            AnySet::Points(pts) => Cplz::from_points(pts, alloc),
        }
    }

    /// Logical-zonotope form and whether it is exact. Point lists that are
    /// not an affine subspace are enclosed; polynomial sets convert only when
    /// every generator has its own single factor and there are no
    /// constraints.
    pub fn to_lz(&self) -> Result<(Lz, bool)> {
        match self {
            AnySet::Lz(l) => Ok((l.clone(), true)),
            AnySet::Points(pts) => {
                let lz = Lz::enclose_points(pts)?;
                let mut distinct = pts.clone();
                distinct.sort();
                distinct.dedup();
                let exact = lz.generators().rank() < usize::BITS as usize
                    && 1usize << lz.generators().rank() == distinct.len();
                Ok((lz, exact))
            }
            AnySet::Plz(p) => plz_as_lz(p).map(|l| (l, true)),
            AnySet::Cplz(c) => plz_as_lz(&c.to_poly()?).map(|l| (l, true)),
        }
    }
}

fn plz_as_lz(p: &Plz) -> Result<Lz> {
    let mut rows: Vec<usize> = Vec::new();
    for e in p.exponents().columns() {
        if e.count_ones() != 1 {
            return Err(Error::invalid_set(
                "exponent columns must each select one factor for a logical zonotope",
            ));
        }
        rows.push(e.ones_iter().next().unwrap());
    }
    rows.sort_unstable();
    if rows.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid_set(
            "generators share a factor; not a logical zonotope",
        ));
    }
    Lz::new(p.center().clone(), p.generators().clone())
}

/// Reads a whole file; the error names the path.
pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot open {}: {e}", path.display()),
        ))
    })
}

pub fn to_json(set: &Cplz) -> String {
    serde_json::to_string(&SetFile::from(set)).expect("set serializes")
}
