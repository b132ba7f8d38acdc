//! Shared generators and brute-force references for the integration tests.
//! Nothing here calls the library's enumeration or gate code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use logiczono::netlang::{Expr, NetworkSpec};
use logiczono::setreps::io::AnySet;
use logiczono::{BitMatrix, BitVector, Cplz, Gate, IdAllocator, Lz};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn bv(s: &str) -> BitVector {
    s.parse().unwrap()
}

pub fn random_bits<R: Rng>(n: usize, rng: &mut R) -> BitVector {
    BitVector::from_bools((0..n).map(|_| rng.gen::<bool>()))
}

fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
    BitMatrix::from_columns(rows, (0..cols).map(|_| random_bits(rows, rng)).collect()).unwrap()
}

/// Random constrained set with `n` dims, up to `max_h` generators, up to
/// `max_p` factors and up to `max_m` constraints.
pub fn random_cplz<R: Rng>(n: usize, max_h: usize, max_p: usize, max_m: usize, alloc: &IdAllocator, rng: &mut R) -> Cplz {
    let h = rng.gen_range(0..=max_h);
    let p = rng.gen_range(0..=max_p);
    let m = rng.gen_range(0..=max_m);
    let q = if m == 0 { 0 } else { rng.gen_range(1..=3) };
    Cplz::new(
        random_bits(n, rng),
        random_matrix(n, h, rng),
        random_matrix(p, h, rng),
        random_matrix(m, q, rng),
        random_bits(m, rng),
        random_matrix(p, q, rng),
        alloc.unique_id(p),
    )
    .unwrap()
}

pub fn random_lz<R: Rng>(n: usize, max_h: usize, rng: &mut R) -> Lz {
    let h = rng.gen_range(0..=max_h);
    Lz::new(random_bits(n, rng), random_matrix(n, h, rng)).unwrap()
}

fn monomial(exponents: &BitMatrix, col: usize, alpha: &[bool]) -> bool {
    (0..exponents.rows()).all(|k| !exponents.get(k, col) || alpha[k])
}

/// Points of a set straight from its definition, one assignment at a time.
pub fn naive_points(set: &Cplz) -> BTreeSet<Vec<bool>> {
    let p = set.num_factors();
    assert!(p <= 20, "naive enumeration limited to 20 factors");
    let n = set.dim();
    let mut out = BTreeSet::new();
    for bits in 0u32..1 << p {
        let alpha: Vec<bool> = (0..p).map(|k| bits >> k & 1 == 1).collect();
        let mut lhs = vec![false; set.num_constraints()];
        for i in 0..set.num_constraint_terms() {
            if monomial(set.constraint_exponents(), i, &alpha) {
                for (r, l) in lhs.iter_mut().enumerate() {
                    *l ^= set.constraint_generators().get(r, i);
                }
            }
        }
        if (0..lhs.len()).any(|r| lhs[r] != set.constraint_rhs().get(r)) {
            continue;
        }
        let mut x: Vec<bool> = (0..n).map(|r| set.center().get(r)).collect();
        for i in 0..set.num_generators() {
            if monomial(set.exponents(), i, &alpha) {
                for (r, xr) in x.iter_mut().enumerate() {
                    *xr ^= set.generators().get(r, i);
                }
            }
        }
        out.insert(x);
    }
    out
}

/// Points of a logical zonotope by closing `{c}` under XOR with each
/// generator; cheap for small dimensions whatever the generator count.
pub fn naive_lz_points(lz: &Lz) -> BTreeSet<Vec<bool>> {
    let mut out: BTreeSet<Vec<bool>> = BTreeSet::from([(0..lz.dim()).map(|r| lz.center().get(r)).collect()]);
    for i in 0..lz.num_generators() {
        let shifted: Vec<Vec<bool>> = out
            .iter()
            .map(|x| x.iter().enumerate().map(|(r, b)| b ^ lz.generators().get(r, i)).collect())
            .collect();
        out.extend(shifted);
    }
    out
}

pub fn to_bools(v: &BitVector) -> Vec<bool> {
    v.iter().collect()
}

pub fn gate_bool(g: Gate, a: bool, b: bool) -> bool {
    match g {
        Gate::Xor => a ^ b,
        Gate::And => a & b,
        Gate::Or => a | b,
        Gate::Xnor => !(a ^ b),
        Gate::Nand => !(a & b),
        Gate::Nor => !(a | b),
    }
}

pub fn naive_gate(g: Gate, s1: &BTreeSet<Vec<bool>>, s2: &BTreeSet<Vec<bool>>) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::new();
    for x in s1 {
        for y in s2 {
            out.insert(x.iter().zip(y).map(|(a, b)| gate_bool(g, *a, *b)).collect());
        }
    }
    out
}

/// Random expression of depth at most `depth` over `vars`.
pub fn random_expr<R: Rng>(vars: &[String], depth: usize, rng: &mut R) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return Expr::var(vars.choose(rng).unwrap().clone());
    }
    if rng.gen_bool(0.2) {
        return Expr::not(random_expr(vars, depth - 1, rng));
    }
    let g = *Gate::ALL.choose(rng).unwrap();
    Expr::gate(g, random_expr(vars, depth - 1, rng), random_expr(vars, depth - 1, rng))
}

/// Network text with `states` states and `inputs` inputs, all `width` bits.
pub fn random_network_text<R: Rng>(states: usize, inputs: usize, width: usize, depth: usize, rng: &mut R) -> String {
    let snames: Vec<String> = (0..states).map(|i| format!("x{i}")).collect();
    let unames: Vec<String> = (0..inputs).map(|i| format!("u{i}")).collect();
    let all: Vec<String> = snames.iter().chain(&unames).cloned().collect();
    let decl = |ns: &[String]| ns.iter().map(|n| format!("{n}[{width}]")).collect::<Vec<_>>().join(", ");
    let mut text = format!("state {}\n", decl(&snames));
    if inputs > 0 {
        text.push_str(&format!("input {}\n", decl(&unames)));
    }
    for s in &snames {
        text.push_str(&format!("next {s} = {}\n", random_expr(&all, depth, rng)));
    }
    text
}

/// Nonempty random subset of `{0,1}^width` with at most `max` points.
pub fn random_points<R: Rng>(width: usize, max: usize, rng: &mut R) -> Vec<BitVector> {
    let all: Vec<u64> = (0..1u64 << width).collect();
    let k = rng.gen_range(1..=max.min(all.len()));
    all.choose_multiple(rng, k).map(|&v| BitVector::from_u64(width, v)).collect()
}

fn eval_u64(e: &Expr, env: &BTreeMap<String, u64>, mask: u64) -> u64 {
    match e {
        Expr::Var(v) => env[v],
        Expr::Not(a) => !eval_u64(a, env, mask) & mask,
        Expr::Gate(g, a, b) => {
            let (x, y) = (eval_u64(a, env, mask), eval_u64(b, env, mask));
            let r = match g {
                Gate::Xor => x ^ y,
                Gate::And => x & y,
                Gate::Or => x | y,
                Gate::Xnor => !(x ^ y),
                Gate::Nand => !(x & y),
                Gate::Nor => !(x | y),
            };
            r & mask
        }
    }
}

fn cartesian(lists: &[Vec<u64>]) -> Vec<Vec<u64>> {
    lists.iter().fold(vec![vec![]], |acc, l| {
        acc.iter()
            .flat_map(|prefix| {
                l.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect()
    })
}

/// Reachable joint states after each step, by simulating every initial
/// state under every input combination. States are concatenated in
/// declaration order, first state's bit 0 first. Input sets are reused at
/// every step.
pub fn simulate(
    net: &NetworkSpec,
    init: &BTreeMap<String, Vec<BitVector>>,
    inputs: &BTreeMap<String, Vec<BitVector>>,
    steps: usize,
) -> Vec<BTreeSet<Vec<bool>>> {
    let widths: Vec<usize> = net.states().iter().map(|d| d.width).collect();
    let snames: Vec<&str> = net.states().iter().map(|d| d.name.as_str()).collect();
    let unames: Vec<&str> = net.inputs().iter().map(|d| d.name.as_str()).collect();
    let as_u64 = |vs: &Vec<BitVector>| vs.iter().map(|v| v.to_u64()).collect::<Vec<_>>();
    let mut current: BTreeSet<Vec<u64>> = cartesian(&snames.iter().map(|s| as_u64(&init[*s])).collect::<Vec<_>>())
        .into_iter()
        .collect();
    let input_combos = cartesian(&unames.iter().map(|u| as_u64(&inputs[*u])).collect::<Vec<_>>());
    let flatten = |s: &BTreeSet<Vec<u64>>| -> BTreeSet<Vec<bool>> {
        s.iter()
            .map(|st| {
                st.iter()
                    .zip(&widths)
                    .flat_map(|(v, w)| (0..*w).map(move |i| v >> i & 1 == 1))
                    .collect()
            })
            .collect()
    };
    let mut out = vec![flatten(&current)];
    for _ in 0..steps {
        let mut next = BTreeSet::new();
        for st in &current {
            for us in &input_combos {
                let mut env = BTreeMap::new();
                for (n, v) in snames.iter().zip(st) {
                    env.insert(n.to_string(), *v);
                }
                for (n, v) in unames.iter().zip(us) {
                    env.insert(n.to_string(), *v);
                }
                next.insert(
                    net.updates()
                        .map(|(d, e)| eval_u64(e, &env, (1u64 << d.width) - 1))
                        .collect::<Vec<_>>(),
                );
            }
        }
        current = next;
        out.push(flatten(&current));
    }
    out
}

pub fn points_bindings(m: &BTreeMap<String, Vec<BitVector>>) -> BTreeMap<String, AnySet> {
    m.iter().map(|(k, v)| (k.clone(), AnySet::Points(v.clone()))).collect()
}
