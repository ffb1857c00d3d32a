//! Subsets of the ground set `[n] = {1, ..., n}` as bitmasks.
//!
//! Element `i` lives at bit `i - 1`. Ordering is by bitmask value, which is the
//! "lexicographic" order every checker in this crate reports witnesses in.

use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set any enumeration in this crate will accept.
pub const MAX_N: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    // field order matters for the derived ordering
    bits: u32,
    n: u8,
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl Subset {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidSize(format!(
                "ground set size must be in 1..={MAX_N}, got {n}"
            )));
        }
        if bits & !full_mask(n) != 0 {
            return Err(Error::InvalidSize(format!(
                "bitmask {bits:#x} has elements above n = {n}"
            )));
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Like [`Subset::new`] for callers that already validated `n` and `bits`.
    pub(crate) fn raw(n: usize, bits: u32) -> Self {
        debug_assert!((1..=MAX_N).contains(&n) && bits & !full_mask(n) == 0);
        Self { bits, n: n as u8 }
    }

    pub fn empty(n: usize) -> Self {
        Self::raw(n, 0)
    }

    pub fn full(n: usize) -> Self {
        Self::raw(n, full_mask(n))
    }

    /// Builds a subset from 1-based elements.
    pub fn from_elems(n: usize, elems: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &e in elems {
            if e == 0 || e > n {
                return Err(Error::InvalidSize(format!("element {e} is outside 1..={n}")));
            }
            bits |= 1 << (e - 1);
        }
        Self::new(n, bits)
    }

    pub fn singleton(n: usize, i: usize) -> Self {
        Self::raw(n, 1 << (i - 1))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == full_mask(self.n())
    }

    /// Neither empty nor the whole ground set.
    pub fn is_nontrivial(self) -> bool {
        !self.is_empty() && !self.is_full()
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= self.n() && self.bits & (1 << (i - 1)) != 0
    }

    pub fn with(self, i: usize) -> Self {
        Self::raw(self.n(), self.bits | (1 << (i - 1)))
    }

    pub fn without(self, i: usize) -> Self {
        Self::raw(self.n(), self.bits & !(1 << (i - 1)))
    }

    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::raw(self.n(), self.bits | other.bits)
    }

    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::raw(self.n(), self.bits & other.bits)
    }

    pub fn complement(self) -> Self {
        Self::raw(self.n(), !self.bits & full_mask(self.n()))
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset_of(self, other: Self) -> bool {
        self.is_subset_of(other) && self.bits != other.bits
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (1..=self.n()).filter(move |&i| bits & (1 << (i - 1)) != 0)
    }

    /// All `2^n` subsets of `[n]` in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..=full_mask(n)).map(move |b| Subset::raw(n, b))
    }

    /// All subsets of `self` (including `self` and the empty set), ascending.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let n = self.n();
        let mask = self.bits;
        let mut cur = Some(0u32);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == mask {
                None
            } else {
                Some(((c | !mask).wrapping_add(1)) & mask)
            };
            Some(Subset::raw(n, c))
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bits_above_n() {
        assert!(Subset::new(3, 0b1000).is_err());
        assert!(Subset::new(0, 0).is_err());
        assert!(Subset::new(25, 0).is_err());
        assert!(Subset::new(24, (1 << 24) - 1).is_ok());
    }

    #[test]
    fn display_and_elements() {
        let s = Subset::from_elems(5, &[1, 3, 5]).unwrap();
        assert_eq!(s.to_string(), "{1,3,5}");
        assert_eq!(s.elements().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(s.complement().to_string(), "{2,4}");
        assert_eq!(Subset::empty(3).to_string(), "{}");
    }

    #[test]
    fn subsets_of_a_mask() {
        let s = Subset::from_elems(4, &[2, 4]).unwrap();
        let subs: Vec<u32> = s.subsets().map(|t| t.bits()).collect();
        assert_eq!(subs, vec![0, 2, 8, 10]);
        assert_eq!(Subset::empty(4).subsets().count(), 1);
    }

    proptest! {
        #[test]
        fn lattice_laws(n in 1usize..=12, a in any::<u32>(), b in any::<u32>()) {
            let m = (1u32 << n) - 1;
            let x = Subset::new(n, a & m).unwrap();
            let y = Subset::new(n, b & m).unwrap();
            prop_assert_eq!(x.union(y).complement(), x.complement().intersection(y.complement()));
            prop_assert!(x.intersection(y).is_subset_of(x));
            prop_assert_eq!(x.union(y).len() + x.intersection(y).len(), x.len() + y.len());
            prop_assert_eq!(x.subsets().count(), 1usize << x.len());
        }
    }
}
