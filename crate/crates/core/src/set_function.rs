use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::FrameOfDiscernment;
use crate::mask::SubsetMask;

/// Values within this distance of the neutral element are not stored.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Whether a set function is aggregated by sums (neutral 0) or products (neutral 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Additive,
    Multiplicative,
}

impl Role {
    #[inline]
    pub fn neutral(self) -> f64 {
        match self {
            Role::Additive => 0.0,
            Role::Multiplicative => 1.0,
        }
    }

    #[inline]
    pub fn is_neutral(self, v: f64) -> bool {
        (v - self.neutral()).abs() <= SUPPORT_EPS
    }

    #[inline]
    pub(crate) fn combine(self, acc: f64, v: f64) -> f64 {
        match self {
            Role::Additive => acc + v,
            Role::Multiplicative => acc * v,
        }
    }
}

/// Sparse map from subsets to reals; absent keys evaluate to the neutral element.
///
/// Entries are kept in canonical `(popcount, mask)` order, so iteration and
/// everything derived from it is reproducible.
#[derive(Clone, Debug)]
pub struct SetFunction<M: SubsetMask = u64> {
    frame: Arc<FrameOfDiscernment>,
    role: Role,
    entries: Vec<(M, f64)>,
}

impl<M: SubsetMask> SetFunction<M> {
    /// Builds a set function, summing (or multiplying) duplicate keys and
    /// pruning values within [`SUPPORT_EPS`] of the neutral.
    pub fn new<I>(frame: Arc<FrameOfDiscernment>, role: Role, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, f64)>,
    {
        frame.check_width::<M>()?;
        let omega = frame.omega::<M>();
        let mut acc: HashMap<M, f64> = HashMap::new();
        for (k, v) in entries {
            if !k.is_subset_of(omega) {
                return Err(Error::InvalidFrame(format!(
                    "mask {k:?} has bits outside a frame of {} elements",
                    frame.len()
                )));
            }
            if !v.is_finite() {
                return Err(Error::NotAMass(format!("non-finite value {v}")));
            }
            acc.entry(k)
                .and_modify(|e| *e = role.combine(*e, v))
                .or_insert(v);
        }
        Ok(Self::from_unique(frame, role, acc))
    }

    /// Caller guarantees keys are distinct and within the frame.
    pub(crate) fn from_unique<I>(frame: Arc<FrameOfDiscernment>, role: Role, entries: I) -> Self
    where
        I: IntoIterator<Item = (M, f64)>,
    {
        let mut entries: Vec<(M, f64)> = entries
            .into_iter()
            .filter(|&(_, v)| !role.is_neutral(v))
            .collect();
        entries.sort_unstable_by(|a, b| a.0.canonical_cmp(&b.0));
        Self {
            frame,
            role,
            entries,
        }
    }

    pub fn zero(frame: Arc<FrameOfDiscernment>, role: Role) -> Self {
        Self {
            frame,
            role,
            entries: Vec::new(),
        }
    }

    pub fn frame(&self) -> &Arc<FrameOfDiscernment> {
        &self.frame
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn neutral(&self) -> f64 {
        self.role.neutral()
    }

    pub fn omega(&self) -> M {
        self.frame.omega()
    }

    pub fn get(&self, x: M) -> f64 {
        self.entries
            .binary_search_by(|e| e.0.canonical_cmp(&x))
            .map(|i| self.entries[i].1)
            .unwrap_or(self.role.neutral())
    }

    pub fn contains(&self, x: M) -> bool {
        self.entries
            .binary_search_by(|e| e.0.canonical_cmp(&x))
            .is_ok()
    }

    /// Stored entries in canonical order.
    pub fn entries(&self) -> &[(M, f64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (M, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn support(&self) -> Vec<M> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Union of all support elements.
    pub fn core_union(&self) -> M {
        self.entries
            .iter()
            .fold(M::empty(), |acc, &(k, _)| acc.union(k))
    }

    pub fn map_values(&self, f: impl Fn(M, f64) -> f64) -> Self {
        Self::from_unique(
            self.frame.clone(),
            self.role,
            self.entries.iter().map(|&(k, v)| (k, f(k, v))),
        )
    }

    /// Largest absolute difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let a = self
            .entries
            .iter()
            .map(|&(k, v)| (v - other.get(k)).abs());
        let b = other
            .entries
            .iter()
            .map(|&(k, v)| (v - self.get(k)).abs());
        a.chain(b).fold(0.0, f64::max)
    }

    pub fn same_frame(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }
}
