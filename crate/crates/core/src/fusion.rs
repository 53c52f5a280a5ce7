//! Evidence combination and the generalized conjunctive decomposition.

use std::collections::HashMap;
use std::sync::Arc;

use log::info;

use crate::dst::{
    commonality_to_conjunctive_weights, mass_to_commonality, weights_to_mass, MassFunction,
    WeightFunction, WeightKind,
};
use crate::error::{Error, Result};
use crate::focal::{closure, efficient_mobius, zeta_on_points, FocalFunction, InversionPath};
use crate::mask::SubsetMask;
use crate::order::OrderDirection;
use crate::par;
use crate::set_function::{Role, SetFunction, SUPPORT_EPS};

/// Default discount factor applied when a source gives no commonality to
/// the cautious domain.
pub const DEFAULT_ALPHA: f64 = 0.999;

/// Combines every pair of support elements with `op` and accumulates the
/// products. Rows are computed in parallel and merged in support order.
fn pairwise<M: SubsetMask>(
    m1: &MassFunction<M>,
    m2: &MassFunction<M>,
    op: impl Fn(M, M) -> M + Sync + Send,
) -> Result<MassFunction<M>> {
    m1.as_set_function().same_frame(m2.as_set_function())?;
    let e1 = m1.as_set_function().entries();
    let e2 = m2.as_set_function().entries();
    let rows = par::map(e1, |&(s1, v1)| {
        e2.iter()
            .map(|&(s2, v2)| (op(s1, s2), v1 * v2))
            .collect::<Vec<_>>()
    });
    let mut acc: HashMap<M, f64> = HashMap::new();
    let mut order: Vec<M> = Vec::new();
    for (k, v) in rows.into_iter().flatten() {
        acc.entry(k)
            .and_modify(|e| *e += v)
            .or_insert_with(|| {
                order.push(k);
                v
            });
    }
    let f = SetFunction::from_unique(
        m1.frame().clone(),
        Role::Additive,
        order.into_iter().map(|k| (k, acc[&k])),
    );
    MassFunction::from_set_function(f)
}

/// Unnormalized conjunctive rule: `m(y) = Σ_{s1 ∩ s2 = y} m1(s1)·m2(s2)`.
/// Conflict stays on the empty set.
pub fn conjunctive_combine<M: SubsetMask>(
    m1: &MassFunction<M>,
    m2: &MassFunction<M>,
) -> Result<MassFunction<M>> {
    pairwise(m1, m2, |a, b| a.intersection(b))
}

/// Disjunctive rule: `m(y) = Σ_{s1 ∪ s2 = y} m1(s1)·m2(s2)`.
pub fn disjunctive_combine<M: SubsetMask>(
    m1: &MassFunction<M>,
    m2: &MassFunction<M>,
) -> Result<MassFunction<M>> {
    pairwise(m1, m2, |a, b| a.union(b))
}

/// Removes the conflict and rescales by `K = 1 − m(∅)`.
pub fn normalize<M: SubsetMask>(m: &MassFunction<M>) -> Result<MassFunction<M>> {
    let k = 1.0 - m.conflict();
    if k <= SUPPORT_EPS {
        return Err(Error::TotalConflict(k));
    }
    let f = SetFunction::from_unique(
        m.frame().clone(),
        Role::Additive,
        m.iter().filter(|e| !e.0.is_empty()).map(|(s, v)| (s, v / k)),
    );
    MassFunction::from_set_function(f)
}

/// Dempster's rule: the conjunctive rule normalized by `K`.
pub fn dempster_combine<M: SubsetMask>(
    m1: &MassFunction<M>,
    m2: &MassFunction<M>,
) -> Result<MassFunction<M>> {
    normalize(&conjunctive_combine(m1, m2)?)
}

/// Conjunctive (`Superset`) or disjunctive (`Subset`) rule computed as a
/// pointwise product of zeta transforms on the closure of both supports,
/// followed by a Möbius inversion on those focal points.
pub fn combine_via_zeta<M: SubsetMask>(
    m1: &MassFunction<M>,
    m2: &MassFunction<M>,
    d: OrderDirection,
) -> Result<MassFunction<M>> {
    m1.as_set_function().same_frame(m2.as_set_function())?;
    let mut gens = m1.support();
    gens.extend(m2.support());
    let fp = Arc::new(closure(m1.frame().clone(), &gens, d)?);
    let g1 = zeta_on_points(m1.as_set_function(), fp.clone());
    let g2 = zeta_on_points(m2.as_set_function(), fp.clone());
    let product = g1.values().iter().zip(g2.values()).map(|(a, b)| a * b).collect();
    let g = FocalFunction::from_values(fp, Role::Additive, product);
    MassFunction::from_set_function(efficient_mobius(&g, InversionPath::Recursive)?)
}

/// Dempster's rule through commonalities on the meet-closure of both supports.
pub fn dempster_combine_via_commonalities<M: SubsetMask>(
    m1: &MassFunction<M>,
    m2: &MassFunction<M>,
) -> Result<MassFunction<M>> {
    normalize(&combine_via_zeta(m1, m2, OrderDirection::Superset)?)
}

/// Conjunctive weights over `C = ∪supp(m)`, which must itself be focal.
pub fn generalized_conjunctive_decomposition<M: SubsetMask>(
    m: &MassFunction<M>,
) -> Result<WeightFunction<M>> {
    let c = m.as_set_function().core_union();
    if m.get(c) <= 0.0 {
        return Err(Error::MaximumMissing);
    }
    let q = mass_to_commonality(m)?;
    commonality_to_conjunctive_weights(&q, c)
}

/// Discount factor and the set receiving the discounted mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountSpec<M: SubsetMask = u64> {
    pub alpha: f64,
    pub target: M,
}

/// Scales every mass by `alpha` and gives `1 − alpha` to `target`.
pub fn discount<M: SubsetMask>(m: &MassFunction<M>, spec: DiscountSpec<M>) -> Result<MassFunction<M>> {
    if !(spec.alpha > 0.0 && spec.alpha < 1.0) {
        return Err(Error::InvalidAlpha(spec.alpha));
    }
    if !spec.target.is_subset_of(m.frame().omega())
        || !m.as_set_function().core_union().is_subset_of(spec.target)
    {
        return Err(Error::InvalidTarget);
    }
    let entries = m
        .iter()
        .map(|(s, v)| (s, spec.alpha * v))
        .chain(std::iter::once((spec.target, 1.0 - spec.alpha)));
    MassFunction::new(m.frame().clone(), entries)
}

/// Moves the mass of every `B` to `B ∩ c`.
pub fn project_mass<M: SubsetMask>(m: &MassFunction<M>, c: M) -> Result<MassFunction<M>> {
    MassFunction::new(m.frame().clone(), m.iter().map(|(s, v)| (s.intersection(c), v)))
}

/// How two weight functions on the same domain are merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightOperator {
    /// Cautious rule.
    #[default]
    Min,
    /// Reproduces the conjunctive rule on the projected masses.
    Product,
}

impl WeightOperator {
    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            WeightOperator::Min => a.min(b),
            WeightOperator::Product => a * b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CautiousOptions {
    /// Discount factor used when a source gives no commonality to the
    /// domain; `None` turns discounting off.
    pub alpha: Option<f64>,
    pub operator: WeightOperator,
}

impl Default for CautiousOptions {
    fn default() -> Self {
        Self {
            alpha: Some(DEFAULT_ALPHA),
            operator: WeightOperator::Min,
        }
    }
}

/// Everything computed by [`cautious_combine`].
#[derive(Debug, Clone)]
pub struct CautiousOutcome<M: SubsetMask = u64> {
    /// Unnormalized result; conflict stays on the empty set.
    pub mass: MassFunction<M>,
    /// The decomposition domain `C = ∪supp(m1) ∩ ∪supp(m2)`.
    pub domain: M,
    pub weights: [WeightFunction<M>; 2],
    pub fused: WeightFunction<M>,
    /// Whether each source had to be discounted first.
    pub discounted: [bool; 2],
}

/// Cautious rule on the common domain `C`: project both masses onto `C`,
/// decompose each over `C`, merge weights below `C` with the chosen
/// operator, set the weight of `C` so the product of all weights is 1, and
/// recompose.
pub fn cautious_combine<M: SubsetMask>(
    m1: &MassFunction<M>,
    m2: &MassFunction<M>,
    options: CautiousOptions,
) -> Result<CautiousOutcome<M>> {
    m1.as_set_function().same_frame(m2.as_set_function())?;
    let frame = m1.frame().clone();
    let domain = m1
        .as_set_function()
        .core_union()
        .intersection(m2.as_set_function().core_union());

    let mut discounted = [false; 2];
    let mut weights = Vec::with_capacity(2);
    for (i, m) in [m1, m2].into_iter().enumerate() {
        let mut source = m.clone();
        let covers = m.iter().any(|(s, _)| domain.is_subset_of(s));
        if !covers {
            let alpha = options.alpha.ok_or_else(|| {
                Error::ZeroCommonality(frame.display(domain))
            })?;
            let target = m.as_set_function().core_union();
            info!(
                "source {} has no commonality on {}; discounting with alpha = {alpha} onto {}",
                i + 1,
                frame.display(domain),
                frame.display(target)
            );
            source = discount(m, DiscountSpec { alpha, target })?;
            discounted[i] = true;
        }
        let projected = project_mass(&source, domain)?;
        let q = mass_to_commonality(&projected)?;
        weights.push(commonality_to_conjunctive_weights(&q, domain)?);
    }
    let [w1, w2]: [WeightFunction<M>; 2] = weights.try_into().expect("two sources");

    let mut points: Vec<M> = w1.focal_points().points().to_vec();
    for &p in w2.focal_points().points() {
        if !w1.focal_points().contains(p) {
            points.push(p);
        }
    }
    let below: Vec<(M, f64)> = points
        .iter()
        .filter(|&&p| p != domain)
        .map(|&p| (p, options.operator.apply(w1.get(p), w2.get(p))))
        .collect();
    let product: f64 = below.iter().map(|e| e.1).product();
    let entries = below.into_iter().chain(std::iter::once((domain, 1.0 / product)));
    let fused = WeightFunction::new(frame, WeightKind::Conjunctive, domain, entries)?;
    let mass = weights_to_mass(&fused)?;
    Ok(CautiousOutcome {
        mass,
        domain,
        weights: [w1, w2],
        fused,
        discounted,
    })
}
