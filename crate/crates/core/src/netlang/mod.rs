//! Boolean-network description language.
//!
//! ```text
//! # comments run to end of line
//! state B1[10], B2[10]
//! input U1[10]
//! next B1 = U1 | (B2 ~^ B1)
//! next B2 = B2 ~^ (B1 & U1)
//! ```
//!
//! Operators, tightest first: `~` (NOT); `&` `~&` (AND, NAND); `^` `~^`
//! (XOR, XNOR); `|` `~|` (OR, NOR). Binary operators associate to the left.

mod eval;
mod parser;

pub use eval::{eval_expr_point, eval_expr_sets, eval_with, CplzAlgebra, LzAlgebra, SetAlgebra};
pub use parser::parse_network;

use std::collections::BTreeSet;
use std::fmt;

use crate::bits::Gate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Not(Box<Expr>),
    Gate(Gate, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn gate(g: Gate, a: Expr, b: Expr) -> Expr {
        Expr::Gate(g, Box::new(a), Box::new(b))
    }

    /// Distinct variable names, sorted.
    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Var(v) => {
                out.insert(v);
            }
            Expr::Not(e) => e.collect_vars(out),
            Expr::Gate(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Not(e) => 1 + e.depth(),
            Expr::Gate(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

pub(crate) fn gate_token(g: Gate) -> &'static str {
    match g {
        Gate::Xor => "^",
        Gate::And => "&",
        Gate::Or => "|",
        Gate::Xnor => "~^",
        Gate::Nand => "~&",
        Gate::Nor => "~|",
    }
}

/// Fully parenthesized concrete syntax; parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Not(e) => write!(f, "~{e}"),
            Expr::Gate(g, a, b) => write!(f, "({a} {} {b})", gate_token(*g)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub width: usize,
}

/// States and inputs in declaration order, and one update per state in the
/// same order as the states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSpec {
    states: Vec<VarDecl>,
    inputs: Vec<VarDecl>,
    updates: Vec<Expr>,
}

impl NetworkSpec {
    pub fn states(&self) -> &[VarDecl] {
        &self.states
    }

    pub fn inputs(&self) -> &[VarDecl] {
        &self.inputs
    }

    pub fn update(&self, state: &str) -> Option<&Expr> {
        self.states
            .iter()
            .position(|d| d.name == state)
            .map(|i| &self.updates[i])
    }

    /// `(state, next-state expression)` pairs in state order.
    pub fn updates(&self) -> impl Iterator<Item = (&VarDecl, &Expr)> {
        self.states.iter().zip(&self.updates)
    }

    pub fn width_of(&self, name: &str) -> Option<usize> {
        self.states
            .iter()
            .chain(&self.inputs)
            .find(|d| d.name == name)
            .map(|d| d.width)
    }

    pub fn state_bits(&self) -> usize {
        self.states.iter().map(|d| d.width).sum()
    }

    pub fn input_bits(&self) -> usize {
        self.inputs.iter().map(|d| d.width).sum()
    }

    /// Renders the network back to its text form.
    pub fn to_text(&self) -> String {
        let decl = |ds: &[VarDecl]| {
            ds.iter()
                .map(|d| format!("{}[{}]", d.name, d.width))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut out = format!("state {}\n", decl(&self.states));
        if !self.inputs.is_empty() {
            out.push_str(&format!("input {}\n", decl(&self.inputs)));
        }
        for (d, e) in self.updates() {
            out.push_str(&format!("next {} = {e}\n", d.name));
        }
        out
    }
}
