//! The `transform`, `fuse` and `ablate` subcommands as plain functions.

use std::sync::Arc;

use focal_core::{
    ablate_weight, cautious_combine, closure, commonality_to_conjunctive_weights, conjunctive_combine,
    disjunctive_combine, mass_to_commonality, normalize, transform, CautiousOptions, Engine,
    FrameOfDiscernment, MassFunction, OrderDirection, Representation,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::{labels, round_output, Evidence, Metadata};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetValue {
    pub set: Vec<String>,
    pub value: f64,
}

/// Output of `transform`: one value per focal point, in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformFile {
    pub representation: String,
    pub frame: Vec<String>,
    pub values: Vec<SetValue>,
}

#[derive(Debug, Clone)]
pub struct TransformOutput {
    pub file: TransformFile,
    /// Points the engine stored (`2^N` for dense engines).
    pub stored_points: usize,
    /// Focal points with the generators below each of them.
    pub focal_points: Vec<(u64, Vec<u64>)>,
    pub direction: OrderDirection,
}

fn set_values(frame: &FrameOfDiscernment, entries: impl IntoIterator<Item = (u64, f64)>) -> Vec<SetValue> {
    entries
        .into_iter()
        .map(|(s, v)| SetValue {
            set: labels(frame, s),
            value: round_output(v),
        })
        .collect()
}

pub fn run_transform(ev: &Evidence, to: Representation, engine: Engine, cap: u64) -> Result<TransformOutput> {
    let m = &ev.mass;
    let frame = m.frame();
    let listing = transform(m, to, engine, cap)?;
    let d = to.direction();
    let mut gens = m.support();
    match to {
        Representation::ConjunctiveWeights | Representation::MassFromConjunctiveWeights => {
            gens.push(frame.omega())
        }
        Representation::DisjunctiveWeights | Representation::MassFromDisjunctiveWeights => gens.push(0),
        _ => {}
    }
    let fp = closure(frame.clone(), &gens, d)?;
    let focal_points = fp
        .points()
        .iter()
        .map(|&p| {
            let below = fp.generators().iter().copied().filter(|&g| d.leq(g, p)).collect();
            (p, below)
        })
        .collect();
    Ok(TransformOutput {
        file: TransformFile {
            representation: to.name().to_string(),
            frame: frame.labels().to_vec(),
            values: set_values(frame, listing.entries),
        },
        stored_points: listing.stored_points,
        focal_points,
        direction: d,
    })
}

/// Human-readable closure listing: each focal point and where it comes from.
pub fn render_focal_points(frame: &FrameOfDiscernment, out: &TransformOutput) -> String {
    let join = match out.direction {
        OrderDirection::Subset => "union",
        OrderDirection::Superset => "intersection",
    };
    let mut s = format!(
        "{} focal points ({join}-closed), engine stored {}\n",
        out.focal_points.len(),
        out.stored_points
    );
    for (p, below) in &out.focal_points {
        let origin = if below.contains(p) {
            "generator".to_string()
        } else {
            let parts: Vec<String> = below.iter().map(|&g| frame.display(g)).collect();
            format!("{join} of {}", parts.join(", "))
        };
        s.push_str(&format!("  {}  <- {origin}\n", frame.display(*p)));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Rule {
    Dempster,
    Conjunctive,
    Disjunctive,
    Cautious,
}

#[derive(Debug, Clone, Copy)]
pub struct FuseOptions {
    pub rule: Rule,
    /// Discount factor for the cautious rule; `None` turns discounting off.
    pub alpha: Option<f64>,
    pub normalize: bool,
    pub engine: Engine,
    pub cap: u64,
}

/// Re-expresses `m` on `frame`, which must hold the same labels.
pub fn align(m: &MassFunction, frame: &Arc<FrameOfDiscernment>) -> Result<MassFunction> {
    let src = m.frame();
    if Arc::ptr_eq(src, frame) || src.labels() == frame.labels() {
        return Ok(MassFunction::new(frame.clone(), m.iter())?);
    }
    let mut a: Vec<&String> = src.labels().iter().collect();
    let mut b: Vec<&String> = frame.labels().iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return Err(CliError::Validation(format!(
            "frames differ: {:?} vs {:?}",
            src.labels(),
            frame.labels()
        )));
    }
    let entries = m
        .iter()
        .map(|(s, v)| Ok((frame.mask_of(&src.labels_of(s))?, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MassFunction::new(frame.clone(), entries)?)
}

/// Left fold of the inputs with the chosen rule.
pub fn run_fuse(inputs: &[Evidence], opts: FuseOptions) -> Result<Evidence> {
    let first = inputs
        .first()
        .ok_or_else(|| CliError::Validation("fuse needs at least one input".into()))?;
    if inputs.len() == 1 && !opts.normalize {
        return Ok(first.clone());
    }
    let frame = first.mass.frame().clone();
    let mut acc = first.mass.clone();
    for ev in &inputs[1..] {
        let next = align(&ev.mass, &frame)?;
        acc = match opts.rule {
            Rule::Dempster => opts.engine.dempster(&acc, &next, opts.cap)?,
            Rule::Conjunctive => conjunctive_combine(&acc, &next)?,
            Rule::Disjunctive => disjunctive_combine(&acc, &next)?,
            Rule::Cautious => {
                let out = cautious_combine(
                    &acc,
                    &next,
                    CautiousOptions {
                        alpha: opts.alpha,
                        ..Default::default()
                    },
                )?;
                for (i, d) in out.discounted.iter().enumerate() {
                    if *d {
                        log::warn!("cautious rule: source {} discounted before fusion", i + 1);
                    }
                }
                out.mass
            }
        };
    }
    if opts.normalize {
        acc = normalize(&acc)?;
    }
    let rounded = MassFunction::new(frame, acc.iter().map(|(s, v)| (s, round_output(v))))?;
    let rule = format!("{:?}", opts.rule).to_lowercase();
    Ok(Evidence {
        mass: rounded,
        metadata: Some(Metadata {
            source: Some(format!("{rule} fusion of {} inputs", inputs.len())),
            timestamp: None,
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub frame: Vec<String>,
    pub point: Vec<String>,
    pub old_weight: f64,
    pub new_weight: f64,
    pub weights: Vec<SetValue>,
    pub commonality: Vec<SetValue>,
    pub mass: Vec<SetValue>,
    pub is_valid_mass: bool,
}

/// Changes the conjunctive weight of `point` (labels) to `new_weight`.
pub fn run_ablate(ev: &Evidence, point: &[String], new_weight: f64) -> Result<AblationReport> {
    let m = &ev.mass;
    let frame = m.frame();
    let x: u64 = frame.mask_of(point)?;
    let q = mass_to_commonality(m)?;
    let w = commonality_to_conjunctive_weights(&q, frame.omega())?;
    let out = ablate_weight(m, &q, &w, x, new_weight)?;
    let mut mass: Vec<(u64, f64)> = out.mass.inner.iter().collect();
    mass.sort_by_key(|&(s, _)| (s.count_ones(), s));
    Ok(AblationReport {
        frame: frame.labels().to_vec(),
        point: labels(frame, x),
        old_weight: round_output(out.old_weight),
        new_weight: round_output(out.new_weight),
        weights: set_values(frame, out.weights.iter()),
        commonality: set_values(frame, out.commonality.iter()),
        mass: set_values(frame, mass),
        is_valid_mass: out.mass.is_valid_mass,
    })
}
