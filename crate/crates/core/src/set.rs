//! Element indices and dense bit sets over them.

use std::cmp::Ordering;
use std::fmt;

/// Index of an element in the element table of its owner (a group or a
/// partial group).
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Elem(pub u32);

impl Elem {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Elem {
    fn from(i: usize) -> Self {
        Elem(i as u32)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of `0..universe` stored as a bit vector.
///
/// Ordering is lexicographic on the sorted member lists, which is the
/// canonical order used when sorting subgroups.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    universe: usize,
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet { universe, words: vec![0; universe.div_ceil(64)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(Elem::from(i));
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = Elem>>(universe: usize, it: I) -> Self {
        let mut s = Self::empty(universe);
        for e in it {
            s.insert(e);
        }
        s
    }

    pub fn singleton(universe: usize, e: Elem) -> Self {
        Self::from_iter(universe, [e])
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        let i = e.idx();
        i < self.universe && self.words[i >> 6] & (1 << (i & 63)) != 0
    }

    /// Returns true if `e` was newly inserted.
    #[inline]
    pub fn insert(&mut self, e: Elem) -> bool {
        let i = e.idx();
        assert!(i < self.universe, "element {i} outside universe {}", self.universe);
        let w = &mut self.words[i >> 6];
        let bit = 1u64 << (i & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn remove(&mut self, e: Elem) {
        let i = e.idx();
        if i < self.universe {
            self.words[i >> 6] &= !(1 << (i & 63));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(Elem::from(wi * 64 + tz))
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Elem> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        s
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        s
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let mut s = ElemSet::empty(130);
        assert!(s.insert(Elem(0)));
        assert!(!s.insert(Elem(0)));
        s.insert(Elem(129));
        s.insert(Elem(64));
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![Elem(0), Elem(64), Elem(129)]);
        s.remove(Elem(64));
        assert!(!s.contains(Elem(64)));
        assert!(ElemSet::singleton(130, Elem(0)).is_subset(&s));
    }

    #[test]
    fn order_is_lexicographic_on_members() {
        let a = ElemSet::from_iter(10, [Elem(1)]);
        let b = ElemSet::from_iter(10, [Elem(1), Elem(2)]);
        let c = ElemSet::from_iter(10, [Elem(0), Elem(9)]);
        assert!(a < b);
        assert!(c < a);
    }

    proptest! {
        #[test]
        fn set_algebra(xs in proptest::collection::vec(0usize..200, 0..40),
                       ys in proptest::collection::vec(0usize..200, 0..40)) {
            let a = ElemSet::from_iter(200, xs.iter().map(|&i| Elem::from(i)));
            let b = ElemSet::from_iter(200, ys.iter().map(|&i| Elem::from(i)));
            let u = a.union(&b);
            let i = a.intersection(&b);
            prop_assert!(a.is_subset(&u) && b.is_subset(&u));
            prop_assert!(i.is_subset(&a) && i.is_subset(&b));
            prop_assert_eq!(u.len() + i.len(), a.len() + b.len());
            prop_assert!(a.difference(&b).is_disjoint(&b));
            let sorted: Vec<_> = a.iter().collect();
            prop_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
