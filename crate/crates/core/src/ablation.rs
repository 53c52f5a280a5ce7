//! Propagating a change of one multiplicative weight to the zeta and Möbius
//! images without recomputing them.

use std::collections::HashMap;
use std::sync::Arc;

use crate::dst::{is_valid_mass, CommonalityFunction, MassFunction, WeightFunction, MASS_TOLERANCE};
use crate::error::{Error, Result};
use crate::focal::{efficient_mobius, FocalFunction, InversionPath};
use crate::fusion::project_mass;
use crate::mask::SubsetMask;
use crate::set_function::{Role, SetFunction, SUPPORT_EPS};

/// A set function summing to one whose values may be negative.
#[derive(Clone, Debug)]
pub struct SignedMass<M: SubsetMask = u64> {
    pub inner: SetFunction<M>,
    /// True when every value is nonnegative (within tolerance).
    pub is_valid_mass: bool,
}

impl<M: SubsetMask> SignedMass<M> {
    fn new(inner: SetFunction<M>) -> Self {
        let is_valid_mass = is_valid_mass(&inner, MASS_TOLERANCE);
        Self {
            inner,
            is_valid_mass,
        }
    }

    pub fn get(&self, y: M) -> f64 {
        self.inner.get(y)
    }

    /// The mass, if it is one.
    pub fn to_mass(&self) -> Result<MassFunction<M>> {
        MassFunction::from_set_function(self.inner.clone())
    }
}

/// Changes `h(x)` to `new_value`, where `g(y) = Π_{z ≤ y} h(z)` and `f` is
/// the additive Möbius transform of `g`. Returns `g'` on the same focal
/// points and `f' = f + (h'(x)/h(x) − 1)·f_{↑x}`, where `f_{↑x}` is the
/// Möbius transform of `g` restricted to the points above `x`.
pub fn perturb_multiplicative<M: SubsetMask>(
    h: &SetFunction<M>,
    g: &FocalFunction<M>,
    x: M,
    new_value: f64,
) -> Result<(FocalFunction<M>, SetFunction<M>)> {
    let fp = g.focal_points();
    let frame = fp.frame();
    if !fp.contains(x) {
        return Err(Error::NotAFocalPoint(frame.display(x)));
    }
    let old = h.get(x);
    if old.abs() <= SUPPORT_EPS {
        return Err(Error::ZeroImage(frame.display(x)));
    }
    if new_value.abs() <= SUPPORT_EPS {
        return Err(Error::ZeroImage(format!("new value at {}", frame.display(x))));
    }
    let ratio = new_value / old;
    let d = fp.direction();

    let values = g
        .iter()
        .map(|(y, v)| if d.leq(x, y) { v * ratio } else { v })
        .collect();
    let g_new = FocalFunction::from_values(fp.clone(), g.role(), values);

    let up = Arc::new(fp.up_set(x));
    let up_values = up.points().iter().map(|&p| g.at_point(p).expect("point")).collect();
    let f_up = efficient_mobius(
        &FocalFunction::from_values(up, Role::Additive, up_values),
        InversionPath::Recursive,
    )?;
    let f = efficient_mobius(g, InversionPath::Recursive)?;
    let f_new = SetFunction::from_unique(
        frame.clone(),
        Role::Additive,
        fp.points()
            .iter()
            .map(|&y| (y, f.get(y) + (ratio - 1.0) * f_up.get(y))),
    );
    Ok((g_new, f_new))
}

/// Outcome of changing one conjunctive weight.
#[derive(Clone, Debug)]
pub struct Ablation<M: SubsetMask = u64> {
    pub point: M,
    pub old_weight: f64,
    pub new_weight: f64,
    pub mass: SignedMass<M>,
    /// `q'` on the focal points of `q`.
    pub commonality: FocalFunction<M>,
    /// `w'` with the weight of the top rescaled so the mass stays normalized.
    pub weights: WeightFunction<M>,
}

/// Repeated ablations of one decomposition; projections `m↓x` are cached.
#[derive(Debug)]
pub struct AblationSession<'a, M: SubsetMask = u64> {
    m: &'a MassFunction<M>,
    q: &'a CommonalityFunction<M>,
    w: &'a WeightFunction<M>,
    projections: HashMap<M, MassFunction<M>>,
}

impl<'a, M: SubsetMask> AblationSession<'a, M> {
    pub fn new(m: &'a MassFunction<M>, q: &'a CommonalityFunction<M>, w: &'a WeightFunction<M>) -> Self {
        Self {
            m,
            q,
            w,
            projections: HashMap::new(),
        }
    }

    /// Sets `w(x)` to `new_weight` and renormalizes with the weight of the
    /// top: `q'(y) = q(y)` for `y ⊆ x`, `r·q(y)` otherwise, and
    /// `m' = r·m + (1 − r)·m↓x` on subsets of `x`, `r·m` elsewhere, with
    /// `r = w'(x)/w(x)`.
    pub fn ablate(&mut self, x: M, new_weight: f64) -> Result<Ablation<M>> {
        let frame = self.m.frame().clone();
        if x == self.w.top() || !self.w.focal_points().contains(x) {
            return Err(Error::NotAFocalPoint(frame.display(x)));
        }
        if !(new_weight.is_finite() && new_weight > 0.0) {
            return Err(Error::ZeroWeight(new_weight));
        }
        let old = self.w.get(x);
        let r = new_weight / old;

        let m = self.m;
        let projected = match self.projections.entry(x) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(project_mass(m, x)?),
        };
        let mut keys: Vec<M> = self.m.support();
        keys.extend(projected.support());
        keys.sort_unstable();
        keys.dedup();
        let mass = SetFunction::from_unique(
            frame.clone(),
            Role::Additive,
            keys.into_iter().map(|y| {
                let base = r * m.get(y);
                let v = if y.is_subset_of(x) {
                    base + (1.0 - r) * projected.get(y)
                } else {
                    base
                };
                (y, v)
            }),
        );

        let qf = self.q.focal();
        let values = qf
            .iter()
            .map(|(y, v)| if y.is_subset_of(x) { v } else { r * v })
            .collect();
        let commonality = FocalFunction::from_values(qf.focal_points().clone(), Role::Additive, values);

        let top = self.w.top();
        let weights = WeightFunction::new(
            frame,
            self.w.kind(),
            top,
            self.w.iter().map(|(p, v)| {
                if p == x {
                    (p, new_weight)
                } else if p == top {
                    (p, v / r)
                } else {
                    (p, v)
                }
            }),
        )?;
        Ok(Ablation {
            point: x,
            old_weight: old,
            new_weight,
            mass: SignedMass::new(mass),
            commonality,
            weights,
        })
    }
}

/// One-off ablation; see [`AblationSession::ablate`].
pub fn ablate_weight<M: SubsetMask>(
    m: &MassFunction<M>,
    q: &CommonalityFunction<M>,
    w: &WeightFunction<M>,
    x: M,
    new_weight: f64,
) -> Result<Ablation<M>> {
    AblationSession::new(m, q, w).ablate(x, new_weight)
}
