//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use logiczono::bench::{run_intersect_bench, BenchConfig};
use logiczono::netlang::parse_network;
use logiczono::oracle::EnumerationBudget;
use logiczono::reach::{check_unsafe, load_bindings, reach, InputSchedule, ReachOptions, ReachProblem, SafetySpec};
use logiczono::setreps::io::SetKind;
use logiczono::setreps::{
    apply_gate, exact_and, exact_xor, intersect, intersect_overapprox_lz, mink_and, mink_xor, negate,
};
use logiczono::{BitMatrix, BitVector, Cplz, Gate, IdAllocator, Lz, OpMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;
const PAIRS: usize = 500;
const DEPENDENT_SETS: usize = 200;
const NETWORKS: usize = 100;
const GATE_BUDGET: Duration = Duration::from_secs(60);
const REACH_BUDGET: Duration = Duration::from_secs(300);
const EXAMPLE_BUDGET: Duration = Duration::from_secs(30);
const GROWTH_SIZES: [usize; 4] = [2, 4, 8, 16];
const ORDERING_DIMS: [usize; 3] = [5, 7, 10];
const ORDERING_TRIALS: usize = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_pair(rng: &mut ChaCha8Rng, alloc: &IdAllocator) -> (Cplz, Cplz) {
    let n = rng.gen_range(1..=5);
    (random_cplz(n, 4, 5, 2, alloc, rng), random_cplz(n, 4, 5, 2, alloc, rng))
}

fn gate_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let alloc = IdAllocator::new();
    let mut checks = 0;
    for i in 0..PAIRS {
        let (a, b) = random_pair(&mut rng, &alloc);
        let (pa, pb) = (naive_points(&a), naive_points(&b));
        for g in Gate::ALL {
            let out = apply_gate(g, &a, &b, &alloc, OpMode::Minkowski).map_err(|e| e.to_string())?;
            ensure(naive_points(&out) == naive_gate(g, &pa, &pb), || format!("pair {i}, {g}"))?;
            checks += 1;
        }
        let neg: BTreeSet<Vec<bool>> = pa.iter().map(|x| x.iter().map(|v| !v).collect()).collect();
        ensure(naive_points(&negate(&a)) == neg, || format!("pair {i}, NOT"))?;
        checks += 1;
    }
    let t = start.elapsed();
    ensure(t < GATE_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{checks} checks over {PAIRS} pairs in {t:.2?}"))
}

fn dependency_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let alloc = IdAllocator::new();
    let mut done = 0;
    while done < DEPENDENT_SETS {
        let n = rng.gen_range(1..=5);
        let x = random_cplz(n, 4, 5, 2, &alloc, &mut rng);
        let px = naive_points(&x);
        if px.is_empty() {
            continue;
        }
        let xor = naive_points(&exact_xor(&x, &x).map_err(|e| e.to_string())?);
        ensure(xor == BTreeSet::from([vec![false; n]]), || format!("set {done}: X xor X = {xor:?}"))?;
        let and = naive_points(&exact_and(&x, &x).map_err(|e| e.to_string())?);
        ensure(and == px, || format!("set {done}: X and X differs from X"))?;
        done += 1;
    }
    Ok(format!("{DEPENDENT_SETS} nonempty sets"))
}

fn exact_intersection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let alloc = IdAllocator::new();
    for i in 0..PAIRS {
        let (a, b) = random_pair(&mut rng, &alloc);
        let out = intersect(&a, &b, &alloc).map_err(|e| e.to_string())?;
        let want: BTreeSet<Vec<bool>> = naive_points(&a).intersection(&naive_points(&b)).cloned().collect();
        ensure(naive_points(&out) == want, || format!("pair {i}: wrong points"))?;
        let rows = a.num_constraints() + b.num_constraints() + a.dim();
        let cols = a.num_constraint_terms() + b.num_constraint_terms() + a.num_generators() + b.num_generators();
        ensure(
            out.num_constraints() == rows && out.num_constraint_terms() == cols,
            || {
                format!(
                    "pair {i}: constraint shape {}x{}, expected {rows}x{cols}",
                    out.num_constraints(),
                    out.num_constraint_terms()
                )
            },
        )?;
    }
    Ok(format!("{PAIRS} pairs, points and constraint shape"))
}

fn overapprox_containment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let alloc = IdAllocator::new();
    for i in 0..PAIRS {
        let n = rng.gen_range(1..=6);
        let (la, lb) = (random_lz(n, 4, &mut rng), random_lz(n, 4, &mut rng));
        let (ca, cb) = (la.promote(&alloc).promote(), lb.promote(&alloc).promote());
        let exact = naive_points(&intersect(&ca, &cb, &alloc).map_err(|e| e.to_string())?);
        let plz = naive_points(&mink_and(&ca, &cb, &alloc).map_err(|e| e.to_string())?);
        let lz = naive_lz_points(&intersect_overapprox_lz(&la, &lb).map_err(|e| e.to_string())?);
        ensure(exact.is_subset(&plz), || format!("pair {i}: exact not in PLZ"))?;
        ensure(exact.is_subset(&lz), || format!("pair {i}: exact not in LZ"))?;
        ensure(plz.is_subset(&lz), || format!("pair {i}: PLZ not in LZ"))?;
    }
    let mut medians = Vec::new();
    for dim in ORDERING_DIMS {
        let cfg = BenchConfig {
            dim,
            gens: None,
            seed: SEED,
            trials: ORDERING_TRIALS,
            reps: 1,
        };
        let report = run_intersect_bench(&cfg, &EnumerationBudget::default()).map_err(|e| e.to_string())?;
        let m: Vec<u128> = report.summary.iter().map(|s| s.median_size).collect();
        ensure(m[2] <= m[1] && m[1] <= m[0], || format!("dim {dim}: medians lz/plz/cplz = {m:?}"))?;
        medians.push(format!("dim {dim}: {}/{}/{}", m[0], m[1], m[2]));
    }
    Ok(format!("{PAIRS} pairs; median sizes lz/plz/cplz {}", medians.join(", ")))
}

fn reach_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut max_factors = 0;
    for i in 0..NETWORKS {
        let width = rng.gen_range(1..=2);
        let states = rng.gen_range(1..=6 / width);
        let inputs = rng.gen_range(0..=4 / width);
        let steps = rng.gen_range(1..=4);
        let text = random_network_text(states, inputs, width, 4, &mut rng);
        let net = parse_network(&text).map_err(|e| format!("network {i}: {e}"))?;
        // Input sets of at most two points keep the per-step factor count
        // low enough to enumerate after four steps.
        let init: BTreeMap<String, Vec<BitVector>> = net
            .states()
            .iter()
            .map(|d| (d.name.clone(), random_points(width, 4, &mut rng)))
            .collect();
        let ins: BTreeMap<String, Vec<BitVector>> = net
            .inputs()
            .iter()
            .map(|d| (d.name.clone(), random_points(width, 2, &mut rng)))
            .collect();
        let truth = simulate(&net, &init, &ins, steps);
        let problem = ReachProblem::new(
            net,
            points_bindings(&init),
            InputSchedule::Constant(points_bindings(&ins)),
            steps,
        )
        .map_err(|e| e.to_string())?;
        let alloc = IdAllocator::new();
        let result = reach(&problem, &ReachOptions::default(), &alloc).map_err(|e| format!("network {i}: {e}"))?;
        for (k, step) in result.steps.iter().enumerate() {
            let stacked = step.sets.stacked(&result.state_order, &alloc);
            max_factors = max_factors.max(stacked.num_factors());
            let got = naive_points(&stacked);
            ensure(got == truth[k], || {
                format!("network {i} step {k}: {} points, expected {}\n{text}", got.len(), truth[k].len())
            })?;
        }
    }
    let t = start.elapsed();
    ensure(t < REACH_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{NETWORKS} networks, every step, at most {max_factors} factors, {t:.2?}"))
}

fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn example_run() -> Outcome {
    let text = std::fs::read_to_string(data_path("circuit3x10.bn")).map_err(|e| e.to_string())?;
    let init = load_bindings(data_path("ex1_init.json")).map_err(|e| e.to_string())?;
    let inputs = InputSchedule::load(data_path("ex1_u.json")).map_err(|e| e.to_string())?;
    let problem = ReachProblem::new(parse_network(&text).map_err(|e| e.to_string())?, init, inputs, 5)
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let exact = reach(
        &problem,
        &ReachOptions {
            enumerate: true,
            ..Default::default()
        },
        &IdAllocator::new(),
    )
    .map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let lz = reach(
        &problem,
        &ReachOptions {
            rep: SetKind::Lz,
            enumerate: true,
            ..Default::default()
        },
        &IdAllocator::new(),
    )
    .map_err(|e| e.to_string())?;
    let counts: Vec<u128> = exact.steps.iter().map(|s| s.points.unwrap()).collect();
    let lz_counts: Vec<u128> = lz.steps.iter().map(|s| s.points.unwrap()).collect();
    ensure(t < EXAMPLE_BUDGET, || format!("took {t:?}"))?;
    ensure(counts.windows(2).all(|w| w[0] <= w[1]), || format!("decreasing counts {counts:?}"))?;
    ensure(counts[4] == counts[5] && counts[3] == counts[4], || format!("no saturation {counts:?}"))?;
    ensure(lz_counts.iter().zip(&counts).all(|(l, e)| l >= e), || {
        format!("LZ {lz_counts:?} below exact {counts:?}")
    })?;

    let as_points = |path: &str| -> Result<BTreeMap<String, Vec<BitVector>>, String> {
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(data_path(path)).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        Ok(v.as_object()
            .unwrap()
            .iter()
            .map(|(k, s)| {
                let pts = s["points"].as_array().unwrap().iter().map(|p| bv(p.as_str().unwrap())).collect();
                (k.clone(), pts)
            })
            .collect())
    };
    let truth = simulate(problem.net(), &as_points("ex1_init.json")?, &as_points("ex1_u.json")?, 5);
    let sim: Vec<u128> = truth.iter().map(|s| s.len() as u128).collect();
    ensure(sim == counts, || format!("simulation {sim:?} vs reach {counts:?}"))?;
    Ok(format!("exact {counts:?} in {t:.2?}; LZ {lz_counts:?}"))
}

fn growth_trend() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let alloc = IdAllocator::new();
    let mut rows = Vec::new();
    for h in GROWTH_SIZES {
        let n = 8;
        let mk = |rng: &mut ChaCha8Rng| {
            let cols = (0..h).map(|_| random_bits(n, rng)).collect();
            Lz::new(random_bits(n, rng), BitMatrix::from_columns(n, cols).unwrap())
                .unwrap()
                .promote(&alloc)
                .promote()
        };
        let (a, b) = (mk(&mut rng), mk(&mut rng));
        let x = mink_xor(&a, &b, &alloc).map_err(|e| e.to_string())?;
        let y = mink_and(&a, &b, &alloc).map_err(|e| e.to_string())?;
        ensure(x.num_generators() == 2 * h, || format!("h={h}: xor has {}", x.num_generators()))?;
        ensure(y.num_generators() == 2 * h + h * h, || format!("h={h}: and has {}", y.num_generators()))?;
        ensure(x.num_factors() == 2 * h && y.num_factors() == 2 * h, || format!("h={h}: factor count"))?;
        rows.push(format!("h={h}: {}/{}", x.num_generators(), y.num_generators()));
    }
    Ok(format!("xor/and generators {}", rows.join(", ")))
}

fn safety_verdicts() -> Outcome {
    let alloc = IdAllocator::new();
    let net = parse_network("state b[1]\nnext b = ~b").map_err(|e| e.to_string())?;
    let init = BTreeMap::from([("b".to_string(), vec![bv("0")])]);
    let problem = ReachProblem::new(net, points_bindings(&init), InputSchedule::default(), 2).map_err(|e| e.to_string())?;
    let result = reach(&problem, &ReachOptions::default(), &alloc).map_err(|e| e.to_string())?;
    let spec = SafetySpec::from_json(r#"{"state":"b","unsafe":{"points":["0"]}}"#, &alloc).map_err(|e| e.to_string())?;
    let verdicts = check_unsafe(&result, &spec[0], &alloc, &EnumerationBudget::default()).map_err(|e| e.to_string())?;
    let labels: Vec<&str> = verdicts.iter().map(|v| if v.is_unsafe { "UNSAFE" } else { "SAFE" }).collect();
    ensure(labels == ["UNSAFE", "SAFE", "UNSAFE"], || format!("verdicts {labels:?}"))?;
    for v in verdicts.iter().filter(|v| v.is_unsafe) {
        let w = v.witness.as_ref().ok_or("missing witness")?;
        let reach_set = naive_points(&result.steps[v.step].sets.get_cplz("b", &alloc).unwrap());
        let unsafe_set = naive_points(&spec[0].unsafe_set);
        ensure(reach_set.contains(&to_bools(w)) && unsafe_set.contains(&to_bools(w)), || {
            format!("step {}: witness {w} not in both sets", v.step)
        })?;
    }
    ensure(verdicts[1].witness.is_none(), || "witness on a SAFE step".into())?;
    Ok(labels.join("/"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 minkowski gates match point sets", gate_equivalence),
        ("2 exact ops under shared factors", dependency_exactness),
        ("3 exact intersection", exact_intersection),
        ("4 over-approximation containment and ordering", overapprox_containment),
        ("5 reachability matches simulation", reach_exactness),
        ("6 example circuit run", example_run),
        ("7 generator growth", growth_trend),
        ("8 safety verdicts", safety_verdicts),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
