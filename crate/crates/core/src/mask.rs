//! Fixed-width bitmasks denoting subsets of a frame of discernment.
//!
//! Bit `i` of a mask corresponds to the `i`-th label of the frame. Frames of
//! up to 64 elements use a plain `u64`; wider frames use [`WideMask`], whose
//! word count is fixed at compile time so the hot paths stay branch-free.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

/// A subset of a frame, stored as a bitmask.
///
/// `Ord` must be the numeric order of the mask read as an unsigned integer;
/// the canonical order used throughout the crate is `(popcount, numeric)`.
pub trait SubsetMask: Copy + Eq + Ord + Hash + Debug + Send + Sync + 'static {
    /// Number of frame elements this mask type can address.
    const CAPACITY: usize;

    fn empty() -> Self;
    /// The mask with the low `n` bits set.
    fn full(n: usize) -> Self;
    fn singleton(i: usize) -> Self;

    fn union(self, other: Self) -> Self;
    fn intersection(self, other: Self) -> Self;
    /// Elements of `self` not in `other`.
    fn difference(self, other: Self) -> Self;
    fn count(self) -> u32;
    fn contains(self, i: usize) -> bool;

    /// Dense index of the mask, when it fits in a `usize`.
    fn to_index(self) -> Option<usize>;
    fn from_index(index: usize) -> Self;

    #[inline]
    fn is_empty(self) -> bool {
        self == Self::empty()
    }

    #[inline]
    fn is_subset_of(self, other: Self) -> bool {
        self.difference(other).is_empty()
    }

    #[inline]
    fn with(self, i: usize) -> Self {
        self.union(Self::singleton(i))
    }

    /// Indices of the set bits, ascending.
    fn elements(self) -> Elements<Self> {
        Elements {
            mask: self,
            next: 0,
            remaining: self.count(),
        }
    }

    /// Ordering by `(popcount, numeric value)`.
    #[inline]
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.count().cmp(&other.count()).then_with(|| self.cmp(other))
    }
}

/// Iterator over the set bits of a mask.
pub struct Elements<M> {
    mask: M,
    next: usize,
    remaining: u32,
}

impl<M: SubsetMask> Iterator for Elements<M> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.remaining > 0 {
            let i = self.next;
            self.next += 1;
            if self.mask.contains(i) {
                self.remaining -= 1;
                return Some(i);
            }
        }
        None
    }
}

impl SubsetMask for u64 {
    const CAPACITY: usize = 64;

    #[inline]
    fn empty() -> Self {
        0
    }

    #[inline]
    fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n >= 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    #[inline]
    fn singleton(i: usize) -> Self {
        1u64 << i
    }

    #[inline]
    fn union(self, other: Self) -> Self {
        self | other
    }

    #[inline]
    fn intersection(self, other: Self) -> Self {
        self & other
    }

    #[inline]
    fn difference(self, other: Self) -> Self {
        self & !other
    }

    #[inline]
    fn count(self) -> u32 {
        self.count_ones()
    }

    #[inline]
    fn contains(self, i: usize) -> bool {
        i < 64 && (self >> i) & 1 == 1
    }

    #[inline]
    fn to_index(self) -> Option<usize> {
        usize::try_from(self).ok()
    }

    #[inline]
    fn from_index(index: usize) -> Self {
        index as u64
    }

    fn elements(self) -> Elements<Self> {
        Elements {
            mask: self,
            next: 0,
            remaining: self.count_ones(),
        }
    }
}

/// Multi-word mask for frames wider than 64 elements.
///
/// Words are little-endian: word 0 holds bits 0..64.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WideMask<const W: usize>(pub [u64; W]);

impl<const W: usize> Debug for WideMask<W> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WideMask(")?;
        for (k, w) in self.0.iter().enumerate().rev() {
            if k + 1 != W {
                write!(f, "_")?;
            }
            write!(f, "{w:016x}")?;
        }
        write!(f, ")")
    }
}

impl<const W: usize> PartialOrd for WideMask<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const W: usize> Ord for WideMask<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl<const W: usize> SubsetMask for WideMask<W> {
    const CAPACITY: usize = 64 * W;

    fn empty() -> Self {
        WideMask([0; W])
    }

    fn full(n: usize) -> Self {
        let mut words = [0u64; W];
        for (k, w) in words.iter_mut().enumerate() {
            let lo = k * 64;
            if n >= lo + 64 {
                *w = u64::MAX;
            } else if n > lo {
                *w = (1u64 << (n - lo)) - 1;
            }
        }
        WideMask(words)
    }

    fn singleton(i: usize) -> Self {
        let mut words = [0u64; W];
        words[i / 64] = 1u64 << (i % 64);
        WideMask(words)
    }

    #[inline]
    fn union(self, other: Self) -> Self {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(other.0) {
            *a |= b;
        }
        WideMask(out)
    }

    #[inline]
    fn intersection(self, other: Self) -> Self {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(other.0) {
            *a &= b;
        }
        WideMask(out)
    }

    #[inline]
    fn difference(self, other: Self) -> Self {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(other.0) {
            *a &= !b;
        }
        WideMask(out)
    }

    #[inline]
    fn count(self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    fn contains(self, i: usize) -> bool {
        i < Self::CAPACITY && (self.0[i / 64] >> (i % 64)) & 1 == 1
    }

    fn to_index(self) -> Option<usize> {
        if self.0.iter().skip(1).any(|&w| w != 0) {
            return None;
        }
        self.0.first().and_then(|&w| usize::try_from(w).ok())
    }

    fn from_index(index: usize) -> Self {
        let mut words = [0u64; W];
        if W > 0 {
            words[0] = index as u64;
        }
        WideMask(words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type W2 = WideMask<2>;

    #[test]
    fn full_masks() {
        assert_eq!(<u64 as SubsetMask>::full(0), 0);
        assert_eq!(<u64 as SubsetMask>::full(3), 0b111);
        assert_eq!(<u64 as SubsetMask>::full(64), u64::MAX);
        assert_eq!(W2::full(70).0, [u64::MAX, 0b11_1111]);
        assert_eq!(W2::full(64).0, [u64::MAX, 0]);
        assert_eq!(W2::full(128).count(), 128);
    }

    #[test]
    fn wide_ordering_is_numeric() {
        let low = W2::singleton(63);
        let high = W2::singleton(64);
        assert!(low < high);
        assert_eq!(
            low.canonical_cmp(&high),
            Ordering::Less,
            "same popcount, numeric tie-break"
        );
        assert_eq!(
            W2::singleton(100).canonical_cmp(&W2::singleton(0).with(1)),
            Ordering::Less
        );
    }

    #[test]
    fn elements_iterate_in_order() {
        let m: u64 = 0b1010_0101;
        assert_eq!(m.elements().collect::<Vec<_>>(), vec![0, 2, 5, 7]);
        let w = W2::singleton(3).with(64).with(127);
        assert_eq!(w.elements().collect::<Vec<_>>(), vec![3, 64, 127]);
    }

    #[test]
    fn subset_and_difference() {
        let a: u64 = 0b011;
        let b: u64 = 0b111;
        assert!(a.is_subset_of(b));
        assert!(!b.is_subset_of(a));
        assert_eq!(b.difference(a), 0b100);
        let wa = W2::singleton(65);
        let wb = wa.with(2);
        assert!(wa.is_subset_of(wb));
        assert_eq!(wb.difference(wa), W2::singleton(2));
        assert_eq!(wb.to_index(), None);
        assert_eq!(W2::from_index(5).to_index(), Some(5));
    }
}
