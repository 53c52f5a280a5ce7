//! Timing harness comparing the three engines on random masses.
//!
//! Every row group (one operation on one random instance) is first run
//! untimed on each applicable engine; timings are only reported when all
//! results agree within [`AGREEMENT_TOLERANCE`].

use std::sync::Arc;
use std::time::Instant;

use focal_core::lattice::dense_len;
use focal_core::{
    closure, Engine, FrameOfDiscernment, Image, MassFunction, OrderDirection, SetFunction, WeightKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const AGREEMENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    /// m → q
    Zeta,
    /// q → m
    Mobius,
    /// q → w
    Weights,
    /// m1, m2 → normalized conjunctive combination
    Dempster,
}

impl Operation {
    pub const ALL: [Operation; 4] = [
        Operation::Zeta,
        Operation::Mobius,
        Operation::Weights,
        Operation::Dempster,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operation::Zeta => "zeta",
            Operation::Mobius => "mobius",
            Operation::Weights => "weights",
            Operation::Dempster => "dempster",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub supports: Vec<usize>,
    /// Seeds `first_seed .. first_seed + seeds`.
    pub seeds: u64,
    pub first_seed: u64,
    pub cap: u64,
    /// The naive engine is skipped above this frame size.
    pub naive_max_n: usize,
    /// Timed runs per cell; the minimum is reported.
    pub repeats: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub engine: String,
    pub operation: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub supp: usize,
    pub fp: usize,
    pub seed: u64,
    pub wall_ns: Option<u128>,
    pub ok: String,
}

/// Random mass on `n` elements: `Ω` plus `supp − 1` other distinct sets.
pub fn random_mass(n: usize, supp: usize, seed: u64) -> Result<MassFunction> {
    if n == 0 || n > 64 {
        return Err(CliError::Validation(format!("frame size {n} outside 1..=64")));
    }
    if supp == 0 || (n < 63 && supp as u64 > 1u64 << n) {
        return Err(CliError::Validation(format!("cannot draw {supp} distinct subsets of {n} elements")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame = Arc::new(FrameOfDiscernment::with_size(n)?);
    let mut sets = vec![frame.omega::<u64>()];
    while sets.len() < supp {
        let s = (0..n).filter(|_| rng.random_bool(0.5)).fold(0u64, |m, i| m | 1 << i);
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    let raw: Vec<f64> = sets.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    Ok(MassFunction::new(frame, sets.into_iter().zip(raw.into_iter().map(|v| v / total)))?)
}

enum Output {
    Image(Image<u64>),
    Function(SetFunction),
    Mass(MassFunction),
}

impl Output {
    fn get(&self, y: u64) -> f64 {
        match self {
            Output::Image(g) => g.get(y),
            Output::Function(f) => f.get(y),
            Output::Mass(m) => m.get(y),
        }
    }
}

struct Instance {
    m1: MassFunction,
    m2: MassFunction,
    cap: u64,
}

/// Untimed preparation (the commonality for operations that start from it).
fn prepare(op: Operation, e: Engine, inst: &Instance) -> focal_core::Result<Option<Image<u64>>> {
    match op {
        Operation::Mobius | Operation::Weights => {
            e.zeta(inst.m1.as_set_function(), OrderDirection::Superset, inst.cap).map(Some)
        }
        _ => Ok(None),
    }
}

fn execute(op: Operation, e: Engine, inst: &Instance, input: &Option<Image<u64>>) -> focal_core::Result<Output> {
    let cap = inst.cap;
    match (op, input) {
        (Operation::Zeta, _) => e
            .zeta(inst.m1.as_set_function(), OrderDirection::Superset, cap)
            .map(Output::Image),
        (Operation::Mobius, Some(q)) => e.mobius(q, cap).map(Output::Function),
        (Operation::Weights, Some(q)) => e.weights(q, WeightKind::Conjunctive, cap).map(Output::Function),
        (Operation::Dempster, _) => e.dempster(&inst.m1, &inst.m2, cap).map(Output::Mass),
        _ => unreachable!("input prepared for this operation"),
    }
}

fn focal_point_count(op: Operation, inst: &Instance) -> focal_core::Result<usize> {
    let frame = inst.m1.frame().clone();
    let mut gens = inst.m1.support();
    if op == Operation::Dempster {
        gens.extend(inst.m2.support());
    }
    Ok(closure(frame, &gens, OrderDirection::Superset)?.len())
}

/// Why an engine does not run on a frame of `n` elements, if it does not.
fn skip_reason(e: Engine, n: usize, cfg: &BenchConfig) -> Option<&'static str> {
    match e {
        Engine::Focal => None,
        _ if dense_len(n, cfg.cap).is_err() => Some("skipped-mem-cap"),
        Engine::Naive if n > cfg.naive_max_n => Some("skipped-size"),
        _ => None,
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        for &supp in &cfg.supports {
            for seed in cfg.first_seed..cfg.first_seed + cfg.seeds {
                let inst = Instance {
                    m1: random_mass(n, supp, seed)?,
                    m2: random_mass(n, supp, seed ^ 0x9e37_79b9_7f4a_7c15)?,
                    cap: cfg.cap,
                };
                for op in Operation::ALL {
                    rows.extend(run_group(op, n, supp, seed, &inst, cfg)?);
                }
            }
        }
    }
    Ok(rows)
}

fn run_group(op: Operation, n: usize, supp: usize, seed: u64, inst: &Instance, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let fp = focal_point_count(op, inst)?;
    let row = |e: Engine, wall_ns: Option<u128>, ok: &str| BenchRow {
        engine: e.name().to_string(),
        operation: op.name().to_string(),
        n,
        supp,
        fp,
        seed,
        wall_ns,
        ok: ok.to_string(),
    };
    let engines: Vec<Engine> = Engine::ALL
        .into_iter()
        .filter(|&e| skip_reason(e, n, cfg).is_none())
        .collect();

    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut failure = None;
    for &e in &engines {
        let run = prepare(op, e, inst).and_then(|input| {
            let out = execute(op, e, inst, &input)?;
            Ok((input, out))
        });
        match run {
            Ok((input, out)) => {
                inputs.push(input);
                outputs.push(out);
            }
            Err(err) => {
                log::warn!("{} {} N={n} seed={seed}: {err}", e.name(), op.name());
                failure = Some("error");
                break;
            }
        }
    }
    if failure.is_none() && outputs.len() > 1 {
        let worst = (0..1u64 << n)
            .flat_map(|y| outputs[1..].iter().map(move |o| (y, o)))
            .map(|(y, o)| (o.get(y) - outputs[0].get(y)).abs())
            .fold(0.0, f64::max);
        if worst.is_nan() || worst > AGREEMENT_TOLERANCE {
            log::warn!("{} N={n} seed={seed}: engines differ by {worst:e}; not timed", op.name());
            failure = Some("false");
        }
    }

    let mut out = Vec::new();
    let mut timed = engines.iter().zip(&inputs);
    for e in Engine::ALL {
        if let Some(reason) = skip_reason(e, n, cfg) {
            out.push(row(e, None, reason));
            continue;
        }
        if let Some(status) = failure {
            out.push(row(e, None, status));
            continue;
        }
        let (&engine, input) = timed.next().expect("engine was run");
        let mut best = u128::MAX;
        for _ in 0..cfg.repeats.max(1) {
            let start = Instant::now();
            let result = execute(op, engine, inst, input)?;
            best = best.min(start.elapsed().as_nanos());
            drop(result);
        }
        out.push(row(e, Some(best), "true"));
    }
    Ok(out)
}

pub fn to_csv(rows: &[BenchRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Validation(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Validation(e.to_string()))
}
