use crate::mask::SubsetMask;

/// Which inclusion order the powerset carries.
///
/// `Subset`: `≤` is `⊆`, join is `∪`, the minimum is `∅`.
/// `Superset`: `≤` is `⊇`, join is `∩`, the minimum is `Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderDirection {
    Subset,
    Superset,
}

impl OrderDirection {
    pub fn dual(self) -> Self {
        match self {
            OrderDirection::Subset => OrderDirection::Superset,
            OrderDirection::Superset => OrderDirection::Subset,
        }
    }

    #[inline]
    pub fn leq<M: SubsetMask>(self, x: M, y: M) -> bool {
        match self {
            OrderDirection::Subset => x.is_subset_of(y),
            OrderDirection::Superset => y.is_subset_of(x),
        }
    }

    #[inline]
    pub fn lt<M: SubsetMask>(self, x: M, y: M) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn comparable<M: SubsetMask>(self, x: M, y: M) -> bool {
        x.is_subset_of(y) || y.is_subset_of(x)
    }

    #[inline]
    pub fn join<M: SubsetMask>(self, x: M, y: M) -> M {
        match self {
            OrderDirection::Subset => x.union(y),
            OrderDirection::Superset => x.intersection(y),
        }
    }

    #[inline]
    pub fn meet<M: SubsetMask>(self, x: M, y: M) -> M {
        self.dual().join(x, y)
    }

    /// The least element of `(2^Ω, ≤)`.
    pub fn bottom<M: SubsetMask>(self, omega: M) -> M {
        match self {
            OrderDirection::Subset => M::empty(),
            OrderDirection::Superset => omega,
        }
    }

    pub fn top<M: SubsetMask>(self, omega: M) -> M {
        self.dual().bottom(omega)
    }

    /// Height of `x` above the bottom: a strictly monotone grading of the order.
    #[inline]
    pub fn rank<M: SubsetMask>(self, x: M, n: usize) -> u32 {
        match self {
            OrderDirection::Subset => x.count(),
            OrderDirection::Superset => n as u32 - x.count(),
        }
    }
}

/// `x ≤ y` in direction `d`.
#[inline]
pub fn leq<M: SubsetMask>(x: M, y: M, d: OrderDirection) -> bool {
    d.leq(x, y)
}

/// Supremum of `x` and `y` in direction `d`.
#[inline]
pub fn join<M: SubsetMask>(x: M, y: M, d: OrderDirection) -> M {
    d.join(x, y)
}
