//! Forward reachability of boolean networks over set representations, and
//! safety checks against unsafe sets.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::netlang::{eval_with, CplzAlgebra, LzAlgebra, NetworkSpec};
use crate::oracle::{enumerate_points, find_point, lz_point_count, EnumerationBudget};
use crate::setreps::io::{read_text, AnySet, SetKind};
use crate::setreps::{canonicalize, intersect, stack, Cplz, FactorId, IdAllocator, Lz, OpMode};

pub type Bindings = BTreeMap<String, AnySet>;

/// Input sets, either one binding reused at every step or one per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSchedule {
    Constant(Bindings),
    PerStep(Vec<Bindings>),
}

impl Default for InputSchedule {
    fn default() -> Self {
        InputSchedule::Constant(Bindings::new())
    }
}

impl InputSchedule {
    pub fn at(&self, k: usize) -> Option<&Bindings> {
        match self {
            InputSchedule::Constant(b) => Some(b),
            InputSchedule::PerStep(v) => v.get(k),
        }
    }

    /// `{"U1": set, ...}` or `[{"U1": set, ...}, ...]`.
    pub fn from_json(text: &str) -> Result<Self> {
        match serde_json::from_str::<serde_json::Value>(text)? {
            serde_json::Value::Array(steps) => steps
                .into_iter()
                .map(bindings_from_value)
                .collect::<Result<Vec<_>>>()
                .map(InputSchedule::PerStep),
            other => bindings_from_value(other).map(InputSchedule::Constant),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&read_text(path.as_ref())?)
    }
}

fn bindings_from_value(value: serde_json::Value) -> Result<Bindings> {
    match value {
        serde_json::Value::Object(map) => map
            .into_iter()
            .map(|(k, v)| AnySet::from_value(v).map(|s| (k, s)))
            .collect(),
        _ => Err(Error::InvalidArgument(
            "bindings must be a JSON object mapping names to sets".into(),
        )),
    }
}

/// `{"B1": set, ...}`.
pub fn parse_bindings(text: &str) -> Result<Bindings> {
    bindings_from_value(serde_json::from_str(text)?)
}

pub fn load_bindings(path: impl AsRef<Path>) -> Result<Bindings> {
    parse_bindings(&read_text(path.as_ref())?)
}

#[derive(Clone, Debug)]
pub struct ReachProblem {
    net: NetworkSpec,
    init: Bindings,
    inputs: InputSchedule,
    steps: usize,
}

fn check_bindings(kind: &str, decls: &[crate::netlang::VarDecl], b: &Bindings) -> Result<()> {
    for d in decls {
        let set = b
            .get(&d.name)
            .ok_or_else(|| Error::InvalidArgument(format!("no {kind} set bound for `{}`", d.name)))?;
        if set.dim() != d.width {
            return Err(Error::InvalidArgument(format!(
                "{kind} set for `{}` has width {}, declared {}",
                d.name,
                set.dim(),
                d.width
            )));
        }
    }
    if let Some(extra) = b.keys().find(|k| !decls.iter().any(|d| &d.name == *k)) {
        return Err(Error::InvalidArgument(format!(
            "`{extra}` is not a declared {kind} variable"
        )));
    }
    Ok(())
}

impl ReachProblem {
    pub fn new(net: NetworkSpec, init: Bindings, inputs: InputSchedule, steps: usize) -> Result<Self> {
        check_bindings("state", net.states(), &init)?;
        for k in 0..steps {
            let b = inputs
                .at(k)
                .ok_or_else(|| Error::InvalidArgument(format!("no input sets given for step {k}")))?;
            check_bindings("input", net.inputs(), b)?;
        }
        Ok(ReachProblem {
            net,
            init,
            inputs,
            steps,
        })
    }

    pub fn net(&self) -> &NetworkSpec {
        &self.net
    }

    pub fn init(&self) -> &Bindings {
        &self.init
    }

    pub fn inputs(&self) -> &InputSchedule {
        &self.inputs
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

#[derive(Clone, Debug)]
pub struct ReachOptions {
    pub rep: SetKind,
    pub mode: OpMode,
    /// Count the points of the stacked state vector at every step.
    pub enumerate: bool,
    pub budget: EnumerationBudget,
}

impl Default for ReachOptions {
    fn default() -> Self {
        ReachOptions {
            rep: SetKind::Cplz,
            mode: OpMode::Exact,
            enumerate: false,
            budget: EnumerationBudget::default(),
        }
    }
}

/// State sets of one step, keyed by state name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepSets {
    Lz(BTreeMap<String, Lz>),
    Cplz(BTreeMap<String, Cplz>),
}

impl StepSets {
    /// Constrained form of one state's set. Logical zonotopes get fresh ids.
    pub fn get_cplz(&self, name: &str, alloc: &IdAllocator) -> Option<Cplz> {
        match self {
            StepSets::Lz(m) => m.get(name).map(|l| l.promote(alloc).promote()),
            StepSets::Cplz(m) => m.get(name).cloned(),
        }
    }

    /// All states stacked in the given order into one set.
    pub fn stacked(&self, order: &[String], alloc: &IdAllocator) -> Cplz {
        match self {
            StepSets::Cplz(m) => stack(&order.iter().map(|n| &m[n]).collect::<Vec<_>>()),
            StepSets::Lz(m) => {
                let sets: Vec<Cplz> = order.iter().map(|n| m[n].promote(alloc).promote()).collect();
                stack(&sets.iter().collect::<Vec<_>>())
            }
        }
    }

    pub fn total_generators(&self) -> usize {
        match self {
            StepSets::Lz(m) => m.values().map(|l| l.num_generators()).sum(),
            StepSets::Cplz(m) => m.values().map(|c| c.num_generators()).sum(),
        }
    }

    /// Distinct factors across all states.
    pub fn total_factors(&self) -> usize {
        match self {
            StepSets::Lz(m) => m.values().map(|l| l.num_generators()).sum(),
            StepSets::Cplz(m) => {
                let mut ids: Vec<FactorId> = m.values().flat_map(|c| c.ids().iter().copied()).collect();
                ids.sort_unstable();
                ids.dedup();
                ids.len()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepReport {
    pub step: usize,
    pub sets: StepSets,
    /// Cardinality of the stacked state vector, when requested.
    pub points: Option<u128>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct ReachResult {
    pub rep: SetKind,
    pub mode: OpMode,
    pub state_order: Vec<String>,
    pub steps: Vec<StepReport>,
}

impl ReachResult {
    pub fn total_time(&self) -> Duration {
        self.steps.iter().map(|s| s.elapsed).sum()
    }

    pub fn report(&self, verdicts: Vec<Verdict>) -> ReachReport {
        ReachReport {
            rep: self.rep,
            mode: self.mode,
            states: self.state_order.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| StepSummary {
                    step: s.step,
                    points: s.points,
                    generators: s.sets.total_generators(),
                    factors: s.sets.total_factors(),
                    time_ms: s.elapsed.as_secs_f64() * 1e3,
                })
                .collect(),
            total_time_ms: self.total_time().as_secs_f64() * 1e3,
            verdicts,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub step: usize,
    pub points: Option<u128>,
    pub generators: usize,
    pub factors: usize,
    pub time_ms: f64,
}

/// Machine-readable summary of a run.
#[derive(Clone, Debug, Serialize)]
pub struct ReachReport {
    pub rep: SetKind,
    pub mode: OpMode,
    pub states: Vec<String>,
    pub steps: Vec<StepSummary>,
    pub total_time_ms: f64,
    pub verdicts: Vec<Verdict>,
}

impl ReachReport {
    pub fn any_unsafe(&self) -> bool {
        self.verdicts.iter().any(|v| v.is_unsafe)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Gives every factor of `sets` a fresh id, keeping ids shared between sets
/// shared.
fn relabel_jointly(sets: BTreeMap<String, Cplz>, alloc: &IdAllocator) -> Result<BTreeMap<String, Cplz>> {
    let mut remap: HashMap<FactorId, FactorId> = HashMap::new();
    sets.into_iter()
        .map(|(name, set)| {
            let ids = set
                .ids()
                .iter()
                .map(|id| *remap.entry(*id).or_insert_with(|| alloc.unique_id(1)[0]))
                .collect();
            Ok((name, set.with_ids(ids)?))
        })
        .collect()
}

fn to_cplz_map(b: &Bindings, rep: SetKind, alloc: &IdAllocator) -> Result<BTreeMap<String, Cplz>> {
    b.iter()
        .map(|(name, s)| {
            let c = s.to_cplz(alloc)?;
            if rep == SetKind::Plz && !c.is_unconstrained() {
                return Err(Error::InvalidArgument(format!(
                    "set for `{name}` has constraints; use the cplz representation"
                )));
            }
            Ok((name.clone(), c))
        })
        .collect()
}

fn to_lz_map(b: &Bindings) -> Result<BTreeMap<String, Lz>> {
    b.iter().map(|(name, s)| Ok((name.clone(), s.to_lz()?.0))).collect()
}

fn count_points(sets: &StepSets, order: &[String], budget: &EnumerationBudget, alloc: &IdAllocator) -> Result<u128> {
    match sets {
        StepSets::Lz(m) => {
            let rank: u32 = m.values().map(|l| l.generators().rank() as u32).sum();
            if rank >= 128 {
                return Err(Error::BudgetExceeded {
                    what: "point count exponent",
                    value: rank as usize,
                    limit: 127,
                });
            }
            debug_assert!(m.len() != 1 || lz_point_count(m.values().next().unwrap()) == 1u128 << rank);
            Ok(1u128 << rank)
        }
        StepSets::Cplz(_) => Ok(enumerate_points(&sets.stacked(order, alloc), budget)?.len() as u128),
    }
}

/// Runs the network forward `problem.steps()` times with synchronous
/// updates. Inputs get fresh factors at every step; within a step all
/// updates share the factors of the state sets they read.
pub fn reach(problem: &ReachProblem, opts: &ReachOptions, alloc: &IdAllocator) -> Result<ReachResult> {
    let net = &problem.net;
    let order: Vec<String> = net.states().iter().map(|d| d.name.clone()).collect();
    let mut steps = Vec::with_capacity(problem.steps + 1);

    let mut current = match opts.rep {
        SetKind::Lz => StepSets::Lz(to_lz_map(&problem.init)?),
        rep => StepSets::Cplz(to_cplz_map(&problem.init, rep, alloc)?),
    };
    for k in 0..=problem.steps {
        let start = Instant::now();
        if k > 0 {
            let inputs = problem.inputs.at(k - 1).expect("checked by ReachProblem::new");
            current = match &current {
                StepSets::Lz(state) => {
                    let mut env = state.clone();
                    env.extend(to_lz_map(inputs)?);
                    let alg = LzAlgebra { canonicalize: true };
                    StepSets::Lz(
                        net.updates()
                            .collect::<Vec<_>>()
                            .par_iter()
                            .map(|(d, e)| Ok((d.name.clone(), eval_with(e, &env, &alg)?)))
                            .collect::<Result<_>>()?,
                    )
                }
                StepSets::Cplz(state) => {
                    let mut env = state.clone();
                    env.extend(relabel_jointly(to_cplz_map(inputs, opts.rep, alloc)?, alloc)?);
                    let alg = CplzAlgebra {
                        mode: opts.mode,
                        alloc,
                        canonicalize: true,
                    };
                    StepSets::Cplz(
                        net.updates()
                            .collect::<Vec<_>>()
                            .par_iter()
                            .map(|(d, e)| Ok((d.name.clone(), canonicalize(&eval_with(e, &env, &alg)?))))
                            .collect::<Result<_>>()?,
                    )
                }
            };
        }
        let elapsed = start.elapsed();
        let points = if opts.enumerate {
            Some(count_points(&current, &order, &opts.budget, alloc)?)
        } else {
            None
        };
        steps.push(StepReport {
            step: k,
            sets: current.clone(),
            points,
            elapsed,
        });
    }
    Ok(ReachResult {
        rep: opts.rep,
        mode: opts.mode,
        state_order: order,
        steps,
    })
}

#[derive(Clone, Debug)]
pub struct SafetySpec {
    pub state: String,
    pub unsafe_set: Cplz,
}

impl SafetySpec {
    /// `{"state": "B1", "unsafe": set}` or an array of such objects.
    pub fn from_json(text: &str, alloc: &IdAllocator) -> Result<Vec<SafetySpec>> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let items = match value {
            serde_json::Value::Array(v) => v,
            other => vec![other],
        };
        items
            .into_iter()
            .map(|item| {
                let mut obj = match item {
                    serde_json::Value::Object(o) => o,
                    _ => return Err(Error::InvalidArgument("safety entry must be an object".into())),
                };
                let state = obj
                    .remove("state")
                    .and_then(|s| s.as_str().map(str::to_owned))
                    .ok_or_else(|| Error::InvalidArgument("safety entry needs a `state` name".into()))?;
                let set = obj
                    .remove("unsafe")
                    .ok_or_else(|| Error::InvalidArgument("safety entry needs an `unsafe` set".into()))?;
                Ok(SafetySpec {
                    state,
                    unsafe_set: AnySet::from_value(set)?.to_cplz(alloc)?,
                })
            })
            .collect()
    }

    pub fn load(path: impl AsRef<Path>, alloc: &IdAllocator) -> Result<Vec<SafetySpec>> {
        Self::from_json(&read_text(path.as_ref())?, alloc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub step: usize,
    pub state: String,
    #[serde(rename = "unsafe")]
    pub is_unsafe: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BitVector>,
}

/// Per-step verdicts: UNSAFE when the reachable set of `spec.state` meets
/// the unsafe set, with a common point as witness.
pub fn check_unsafe(
    result: &ReachResult,
    spec: &SafetySpec,
    alloc: &IdAllocator,
    budget: &EnumerationBudget,
) -> Result<Vec<Verdict>> {
    let mut out = Vec::with_capacity(result.steps.len());
    for step in &result.steps {
        let reach_set = step
            .sets
            .get_cplz(&spec.state, alloc)
            .ok_or_else(|| Error::InvalidArgument(format!("`{}` is not a state", spec.state)))?;
        if reach_set.dim() != spec.unsafe_set.dim() {
            return Err(Error::Dimension {
                expected: reach_set.dim(),
                found: spec.unsafe_set.dim(),
            });
        }
        let unsafe_set = spec.unsafe_set.clone().relabel_fresh(alloc);
        let meet = canonicalize(&intersect(&reach_set, &unsafe_set, alloc)?);
        let witness = find_point(&meet, budget)?;
        out.push(Verdict {
            step: step.step,
            state: spec.state.clone(),
            is_unsafe: witness.is_some(),
            witness,
        });
    }
    Ok(out)
}
