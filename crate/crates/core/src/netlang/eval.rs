use std::collections::BTreeMap;

use super::Expr;
use crate::bits::{BitVector, Gate};
use crate::error::{Error, Result};
use crate::setreps::{apply_gate, canonicalize, lz_canonicalize, lz_gate, lz_not, negate, Cplz, IdAllocator, Lz, OpMode};

/// Gate semantics over some set representation.
pub trait SetAlgebra {
    type Set: Clone;

    fn not(&self, s: &Self::Set) -> Self::Set;
    fn gate(&self, g: Gate, a: &Self::Set, b: &Self::Set) -> Result<Self::Set>;
}

/// Constrained polynomial zonotopes, in either operation mode.
pub struct CplzAlgebra<'a> {
    pub mode: OpMode,
    pub alloc: &'a IdAllocator,
    /// Canonicalize after every gate to keep representations small.
    pub canonicalize: bool,
}

impl SetAlgebra for CplzAlgebra<'_> {
    type Set = Cplz;

    fn not(&self, s: &Cplz) -> Cplz {
        negate(s)
    }

    fn gate(&self, g: Gate, a: &Cplz, b: &Cplz) -> Result<Cplz> {
        let out = apply_gate(g, a, b, self.alloc, self.mode)?;
        Ok(if self.canonicalize { canonicalize(&out) } else { out })
    }
}

/// Plain logical zonotopes; AND-type gates over-approximate.
pub struct LzAlgebra {
    pub canonicalize: bool,
}

impl SetAlgebra for LzAlgebra {
    type Set = Lz;

    fn not(&self, s: &Lz) -> Lz {
        lz_not(s)
    }

    fn gate(&self, g: Gate, a: &Lz, b: &Lz) -> Result<Lz> {
        let out = lz_gate(g, a, b)?;
        Ok(if self.canonicalize { lz_canonicalize(&out) } else { out })
    }
}

/// Evaluates `expr` with each variable bound to a set from `env`.
pub fn eval_with<A: SetAlgebra>(expr: &Expr, env: &BTreeMap<String, A::Set>, alg: &A) -> Result<A::Set> {
    match expr {
        Expr::Var(v) => env.get(v).cloned().ok_or_else(|| Error::UnboundVariable(v.clone())),
        Expr::Not(e) => Ok(alg.not(&eval_with(e, env, alg)?)),
        Expr::Gate(g, a, b) => {
            let a = eval_with(a, env, alg)?;
            let b = eval_with(b, env, alg)?;
            alg.gate(*g, &a, &b)
        }
    }
}

pub fn eval_expr_sets(expr: &Expr, env: &BTreeMap<String, Cplz>, mode: OpMode, alloc: &IdAllocator) -> Result<Cplz> {
    eval_with(
        expr,
        env,
        &CplzAlgebra {
            mode,
            alloc,
            canonicalize: false,
        },
    )
}

/// Evaluates `expr` on concrete bit vectors.
pub fn eval_expr_point(expr: &Expr, env: &BTreeMap<String, BitVector>) -> Result<BitVector> {
    match expr {
        Expr::Var(v) => env.get(v).cloned().ok_or_else(|| Error::UnboundVariable(v.clone())),
        Expr::Not(e) => Ok(eval_expr_point(e, env)?.complement()),
        Expr::Gate(g, a, b) => eval_expr_point(a, env)?.gate(*g, &eval_expr_point(b, env)?),
    }
}
