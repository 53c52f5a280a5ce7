//! Dempster-Shafer representations on focal points: masses, commonalities,
//! implicabilities, and conjunctive or disjunctive weights.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::focal::{
    closure, efficient_mobius, efficient_mobius_multiplicative, extend_zeta, zeta_on_points,
    FocalFunction, FocalPointSet, InversionPath,
};
use crate::frame::FrameOfDiscernment;
use crate::mask::SubsetMask;
use crate::order::OrderDirection;
use crate::set_function::{Role, SetFunction};

/// Tolerance on negative masses and on the total mass.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A normalized, nonnegative set function. `m(∅) > 0` is allowed.
#[derive(Clone, Debug)]
pub struct MassFunction<M: SubsetMask = u64> {
    inner: SetFunction<M>,
}

impl<M: SubsetMask> MassFunction<M> {
    pub fn new<I>(frame: Arc<FrameOfDiscernment>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, f64)>,
    {
        Self::from_set_function(SetFunction::new(frame, Role::Additive, entries)?)
    }

    /// Like [`MassFunction::new`] with a total tolerance chosen by the caller.
    pub fn with_tolerance<I>(frame: Arc<FrameOfDiscernment>, entries: I, tol: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (M, f64)>,
    {
        let f = SetFunction::new(frame, Role::Additive, entries)?;
        check_mass(&f, tol)?;
        Ok(Self::clamped(f))
    }

    /// Scales nonnegative entries so they sum to one.
    pub fn renormalized<I>(frame: Arc<FrameOfDiscernment>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, f64)>,
    {
        let f = SetFunction::new(frame, Role::Additive, entries)?;
        if let Some(&(k, v)) = f.entries().iter().find(|e| e.1 < 0.0) {
            return Err(Error::NotAMass(format!(
                "negative mass {v} on {}",
                f.frame().display(k)
            )));
        }
        let total = f.total();
        if total <= 0.0 {
            return Err(Error::NotAMass("total mass is zero".into()));
        }
        Self::from_set_function(f.map_values(|_, v| v / total))
    }

    pub fn from_set_function(f: SetFunction<M>) -> Result<Self> {
        if f.role() != Role::Additive {
            return Err(Error::NotAMass("multiplicative set function".into()));
        }
        check_mass(&f, MASS_TOLERANCE)?;
        Ok(Self::clamped(f))
    }

    /// Tiny negatives allowed by the tolerance are dropped.
    fn clamped(f: SetFunction<M>) -> Self {
        let inner = if f.entries().iter().any(|e| e.1 < 0.0) {
            f.map_values(|_, v| v.max(0.0))
        } else {
            f
        };
        Self { inner }
    }

    /// Mass with `m(Ω) = 1`.
    pub fn vacuous(frame: Arc<FrameOfDiscernment>) -> Self {
        let omega = frame.omega();
        Self {
            inner: SetFunction::from_unique(frame, Role::Additive, [(omega, 1.0)]),
        }
    }

    pub fn as_set_function(&self) -> &SetFunction<M> {
        &self.inner
    }

    pub fn into_inner(self) -> SetFunction<M> {
        self.inner
    }

    pub fn frame(&self) -> &Arc<FrameOfDiscernment> {
        self.inner.frame()
    }

    pub fn get(&self, x: M) -> f64 {
        self.inner.get(x)
    }

    pub fn support(&self) -> Vec<M> {
        self.inner.support()
    }

    pub fn iter(&self) -> impl Iterator<Item = (M, f64)> + '_ {
        self.inner.iter()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    /// Mass of the empty set, i.e. the conflict.
    pub fn conflict(&self) -> f64 {
        self.inner.get(M::empty())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.inner.max_abs_diff(&other.inner)
    }
}

/// Whether `f` satisfies the mass constraints within `tol`.
pub fn is_valid_mass<M: SubsetMask>(f: &SetFunction<M>, tol: f64) -> bool {
    check_mass(f, tol).is_ok()
}

fn check_mass<M: SubsetMask>(f: &SetFunction<M>, tol: f64) -> Result<()> {
    if let Some(&(k, v)) = f.entries().iter().find(|e| e.1 < -tol) {
        return Err(Error::NotAMass(format!(
            "negative mass {v} on {}",
            f.frame().display(k)
        )));
    }
    let total = f.total();
    if (total - 1.0).abs() > tol {
        return Err(Error::NotAMass(format!("masses sum to {total}")));
    }
    Ok(())
}

macro_rules! zeta_wrapper {
    ($name:ident, $dir:expr, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug)]
        pub struct $name<M: SubsetMask = u64>(FocalFunction<M>);

        impl<M: SubsetMask> $name<M> {
            pub const DIRECTION: OrderDirection = $dir;

            /// Wraps images given on a focal point set of the right direction.
            pub fn new(g: FocalFunction<M>) -> Result<Self> {
                if g.focal_points().direction() != $dir || g.role() != Role::Additive {
                    return Err(Error::InvalidFrame(concat!(
                        stringify!($name),
                        " needs additive values in its own order"
                    )
                    .into()));
                }
                Ok(Self(g))
            }

            pub fn focal(&self) -> &FocalFunction<M> {
                &self.0
            }

            pub fn focal_points(&self) -> &Arc<FocalPointSet<M>> {
                self.0.focal_points()
            }

            /// Image of any subset.
            pub fn get(&self, y: M) -> f64 {
                extend_zeta(&self.0, y)
            }

            pub fn iter(&self) -> impl Iterator<Item = (M, f64)> + '_ {
                self.0.iter()
            }

            pub fn frame(&self) -> &Arc<FrameOfDiscernment> {
                self.0.focal_points().frame()
            }
        }
    };
}

zeta_wrapper!(
    CommonalityFunction,
    OrderDirection::Superset,
    "`q(y) = Σ_{x ⊇ y} m(x)`, stored on the meet-closure of the support."
);
zeta_wrapper!(
    ImplicabilityFunction,
    OrderDirection::Subset,
    "`b(y) = Σ_{x ⊆ y} m(x)`, stored on the join-closure of the support."
);

fn zeta_of_mass<M: SubsetMask>(m: &MassFunction<M>, d: OrderDirection) -> Result<FocalFunction<M>> {
    let fp = closure(m.frame().clone(), &m.support(), d)?;
    Ok(zeta_on_points(m.as_set_function(), Arc::new(fp)))
}

pub fn mass_to_commonality<M: SubsetMask>(m: &MassFunction<M>) -> Result<CommonalityFunction<M>> {
    Ok(CommonalityFunction(zeta_of_mass(m, OrderDirection::Superset)?))
}

pub fn mass_to_implicability<M: SubsetMask>(
    m: &MassFunction<M>,
) -> Result<ImplicabilityFunction<M>> {
    Ok(ImplicabilityFunction(zeta_of_mass(m, OrderDirection::Subset)?))
}

pub fn commonality_to_mass<M: SubsetMask>(q: &CommonalityFunction<M>) -> Result<MassFunction<M>> {
    MassFunction::from_set_function(efficient_mobius(&q.0, InversionPath::Recursive)?)
}

pub fn implicability_to_mass<M: SubsetMask>(
    b: &ImplicabilityFunction<M>,
) -> Result<MassFunction<M>> {
    MassFunction::from_set_function(efficient_mobius(&b.0, InversionPath::Recursive)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// `w`, with `q(y) = Π_{x ⊇ y} w(x)^{-1}`.
    Conjunctive,
    /// `v`, with `b(y) = Π_{x ⊆ y} v(x)^{-1}`.
    Disjunctive,
}

impl WeightKind {
    pub fn direction(self) -> OrderDirection {
        match self {
            WeightKind::Conjunctive => OrderDirection::Superset,
            WeightKind::Disjunctive => OrderDirection::Subset,
        }
    }
}

/// Conjunctive or disjunctive weights on a focal point set whose least
/// element (in the weight's order) is `top`. Weights are 1 off the points.
#[derive(Clone, Debug)]
pub struct WeightFunction<M: SubsetMask = u64> {
    kind: WeightKind,
    top: M,
    points: Arc<FocalPointSet<M>>,
    values: Vec<f64>,
}

impl<M: SubsetMask> WeightFunction<M> {
    /// Builds weights from explicit values; unlisted points of the closure
    /// (and `top`) get weight 1.
    pub fn new<I>(frame: Arc<FrameOfDiscernment>, kind: WeightKind, top: M, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, f64)>,
    {
        let d = kind.direction();
        let mut map: HashMap<M, f64> = HashMap::new();
        for (k, v) in entries {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::ZeroWeight(v));
            }
            if !d.leq(top, k) {
                return Err(Error::InvalidTarget);
            }
            *map.entry(k).or_insert(1.0) *= v;
        }
        let mut gens: Vec<M> = map.keys().copied().collect();
        gens.push(top);
        let points = Arc::new(closure(frame, &gens, d)?);
        let values = points
            .points()
            .iter()
            .map(|p| map.get(p).copied().unwrap_or(1.0))
            .collect();
        Ok(Self {
            kind,
            top,
            points,
            values,
        })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn top(&self) -> M {
        self.top
    }

    pub fn focal_points(&self) -> &Arc<FocalPointSet<M>> {
        &self.points
    }

    pub fn frame(&self) -> &Arc<FrameOfDiscernment> {
        self.points.frame()
    }

    pub fn get(&self, y: M) -> f64 {
        self.points.position(y).map_or(1.0, |i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (M, f64)> + '_ {
        self.points.points().iter().copied().zip(self.values.iter().copied())
    }

    /// Points with weight different from 1.
    pub fn support(&self) -> Vec<M> {
        self.iter()
            .filter(|&(_, v)| !Role::Multiplicative.is_neutral(v))
            .map(|(p, _)| p)
            .collect()
    }

    /// Weights as a multiplicative set function (1 is pruned).
    pub fn as_set_function(&self) -> SetFunction<M> {
        SetFunction::from_unique(self.frame().clone(), Role::Multiplicative, self.iter())
    }
}

/// `w` with `top` as the greatest set of the domain
/// `{top ∩ s : s focal} ∪ {top}`. With `top = Ω` this is the usual
/// conjunctive decomposition; a smaller `top` decomposes the restriction to
/// subsets of `top`.
pub fn commonality_to_conjunctive_weights<M: SubsetMask>(
    q: &CommonalityFunction<M>,
    top: M,
) -> Result<WeightFunction<M>> {
    weights_from_zeta(&q.0, top, WeightKind::Conjunctive)
}

/// Dual of [`commonality_to_conjunctive_weights`]: domain
/// `{bottom ∪ s : s focal} ∪ {bottom}` in the inclusion order.
pub fn implicability_to_disjunctive_weights<M: SubsetMask>(
    b: &ImplicabilityFunction<M>,
    bottom: M,
) -> Result<WeightFunction<M>> {
    weights_from_zeta(&b.0, bottom, WeightKind::Disjunctive)
}

fn weights_from_zeta<M: SubsetMask>(
    g: &FocalFunction<M>,
    top: M,
    kind: WeightKind,
) -> Result<WeightFunction<M>> {
    let d = kind.direction();
    let fp = g.focal_points();
    let mut domain: Vec<M> = fp.points().iter().map(|&s| d.join(top, s)).collect();
    domain.push(top);
    let points = Arc::new(closure(fp.frame().clone(), &domain, d)?);
    let images: Vec<f64> = points.points().iter().map(|&y| extend_zeta(g, y)).collect();
    if let Some(i) = images.iter().position(|v| v.abs() <= crate::SUPPORT_EPS) {
        return Err(Error::ZeroCommonality(fp.frame().display(points.points()[i])));
    }
    let restricted = FocalFunction::from_values(points.clone(), Role::Multiplicative, images);
    let inverse = efficient_mobius_multiplicative(&restricted, InversionPath::Recursive)?;
    let values = points
        .points()
        .iter()
        .map(|&p| 1.0 / inverse.get(p))
        .collect();
    Ok(WeightFunction {
        kind,
        top,
        points,
        values,
    })
}

fn zeta_of_weights<M: SubsetMask>(w: &WeightFunction<M>) -> Result<FocalFunction<M>> {
    let inverse = SetFunction::from_unique(
        w.frame().clone(),
        Role::Multiplicative,
        w.iter().map(|(p, v)| (p, 1.0 / v)),
    );
    let g = zeta_on_points(&inverse, w.points.clone());
    Ok(FocalFunction::from_values(
        w.points.clone(),
        Role::Additive,
        g.values().to_vec(),
    ))
}

/// `q(y) = Π_{s ⊇ y} w(s)^{-1}` on the weight's focal points.
pub fn weights_to_commonality<M: SubsetMask>(w: &WeightFunction<M>) -> Result<CommonalityFunction<M>> {
    if w.kind != WeightKind::Conjunctive {
        return Err(Error::InvalidTarget);
    }
    Ok(CommonalityFunction(zeta_of_weights(w)?))
}

/// `b(y) = Π_{s ⊆ y} v(s)^{-1}` on the weight's focal points.
pub fn weights_to_implicability<M: SubsetMask>(
    v: &WeightFunction<M>,
) -> Result<ImplicabilityFunction<M>> {
    if v.kind != WeightKind::Disjunctive {
        return Err(Error::InvalidTarget);
    }
    Ok(ImplicabilityFunction(zeta_of_weights(v)?))
}

pub fn weights_to_mass<M: SubsetMask>(w: &WeightFunction<M>) -> Result<MassFunction<M>> {
    let g = zeta_of_weights(w)?;
    MassFunction::from_set_function(efficient_mobius(&g, InversionPath::Recursive)?)
}

/// Belief and plausibility queried lazily from the implicability.
#[derive(Clone, Debug)]
pub struct BeliefView<M: SubsetMask = u64> {
    b: ImplicabilityFunction<M>,
    conflict: f64,
}

impl<M: SubsetMask> BeliefView<M> {
    pub fn new(m: &MassFunction<M>) -> Result<Self> {
        Ok(Self {
            b: mass_to_implicability(m)?,
            conflict: m.conflict(),
        })
    }

    pub fn implicability(&self) -> &ImplicabilityFunction<M> {
        &self.b
    }

    /// `Bel(y) = b(y) − m(∅)`.
    pub fn belief(&self, y: M) -> f64 {
        self.b.get(y) - self.conflict
    }

    /// `Pl(y) = 1 − b(Ω \ y)`.
    pub fn plausibility(&self, y: M) -> f64 {
        1.0 - self.b.get(self.b.frame().complement(y))
    }
}

/// Result of merging frame elements that never appear apart in the support.
#[derive(Clone, Debug)]
pub struct Coarsening<M: SubsetMask = u64> {
    pub frame: Arc<FrameOfDiscernment>,
    pub mass: MassFunction<M>,
    /// Fine element indices of each coarse element.
    pub groups: Vec<Vec<usize>>,
    /// Coarse element index of each fine element.
    pub fine_to_coarse: Vec<usize>,
}

impl<M: SubsetMask> Coarsening<M> {
    /// Image of a fine subset that is a union of groups.
    pub fn coarse_mask(&self, fine: M) -> M {
        fine.elements()
            .fold(M::empty(), |acc, i| acc.with(self.fine_to_coarse[i]))
    }

    pub fn fine_mask(&self, coarse: M) -> M {
        coarse.elements().fold(M::empty(), |acc, c| {
            self.groups[c].iter().fold(acc, |a, &i| a.with(i))
        })
    }
}

/// Groups elements by their membership pattern across the support. The
/// coarse frame labels a group by joining its labels with `+`.
pub fn lossless_coarsen<M: SubsetMask>(m: &MassFunction<M>) -> Result<Coarsening<M>> {
    let fine = m.frame();
    let support = m.support();
    let mut ids: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut fine_to_coarse = Vec::with_capacity(fine.len());
    for i in 0..fine.len() {
        let signature: Vec<bool> = support.iter().map(|s| s.contains(i)).collect();
        let next = ids.len();
        let id = *ids.entry(signature).or_insert(next);
        if id == groups.len() {
            groups.push(Vec::new());
        }
        groups[id].push(i);
        fine_to_coarse.push(id);
    }
    let labels: Vec<String> = groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|&i| fine.labels()[i].as_str())
                .collect::<Vec<_>>()
                .join("+")
        })
        .collect();
    let frame = Arc::new(FrameOfDiscernment::new(labels)?);
    let mut out = Coarsening {
        frame: frame.clone(),
        mass: MassFunction::vacuous(frame.clone()),
        groups,
        fine_to_coarse,
    };
    let entries: Vec<(M, f64)> = m.iter().map(|(k, v)| (out.coarse_mask(k), v)).collect();
    out.mass = MassFunction {
        inner: SetFunction::from_unique(frame, Role::Additive, entries),
    };
    Ok(out)
}
