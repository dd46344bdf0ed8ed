//! Fixed-width vertex sets.

use std::cmp::Ordering;
use std::fmt;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 128;

/// A set of vertices `0..128` packed into a `u128`.
///
/// Ordering is lexicographic on the ascending vertex lists, so a proper
/// prefix sorts first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FaceSet(u128);

impl FaceSet {
    pub const EMPTY: FaceSet = FaceSet(0);

    pub fn from_bits(bits: u128) -> Self {
        FaceSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(v: usize) -> Self {
        FaceSet(1u128 << v)
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 128 {
            FaceSet(u128::MAX)
        } else {
            FaceSet((1u128 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 128 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u128 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u128 << v);
    }

    pub fn with(self, v: usize) -> Self {
        FaceSet(self.0 | 1u128 << v)
    }

    pub fn without(self, v: usize) -> Self {
        FaceSet(self.0 & !(1u128 << v))
    }

    pub fn union(self, o: Self) -> Self {
        FaceSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        FaceSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        FaceSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Position of `v` among the elements of `self`, counted from 0.
    pub fn rank_of(self, v: usize) -> usize {
        (self.0 & ((1u128 << v) - 1)).count_ones() as usize
    }

    /// Number of pairs `(a, b)` with `a` in `self`, `b` in `other` and `a > b`.
    pub fn inversions_with(self, other: Self) -> usize {
        other.iter().map(|b| (self.0 >> b >> 1).count_ones() as usize).sum()
    }

    /// All subsets, in increasing bit order of the packed representation.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, cur: 0, done: false }
    }

    /// Image under a vertex relabelling.
    pub fn map(self, f: &[usize]) -> Self {
        self.iter().fold(FaceSet::EMPTY, |acc, v| acc.with(f[v]))
    }
}

impl Ord for FaceSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let x = diff.trailing_zeros();
        let above = if x == 127 { 0 } else { u128::MAX << (x + 1) };
        if self.0 >> x & 1 == 1 {
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for FaceSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<usize> for FaceSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(FaceSet::EMPTY, |acc, v| acc.with(v))
    }
}

impl fmt::Debug for FaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for FaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    mask: u128,
    cur: u128,
    done: bool,
}

impl Iterator for Subsets {
    type Item = FaceSet;
    fn next(&mut self) -> Option<FaceSet> {
        if self.done {
            return None;
        }
        let out = FaceSet(self.cur);
        self.cur = self.cur.wrapping_sub(self.mask) & self.mask;
        if self.cur == 0 {
            self.done = true;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> FaceSet {
        v.iter().copied().collect()
    }

    #[test]
    fn lex_order_matches_sorted_lists() {
        let mut sets: Vec<FaceSet> = FaceSet::full(5).subsets().collect();
        sets.sort();
        let lists: Vec<Vec<usize>> = sets.iter().map(|f| f.to_vec()).collect();
        let mut sorted = lists.clone();
        sorted.sort();
        assert_eq!(lists, sorted);
    }

    #[test]
    fn subsets_enumerates_all() {
        assert_eq!(s(&[1, 4, 6]).subsets().count(), 8);
        assert_eq!(FaceSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn inversions_and_rank() {
        assert_eq!(s(&[2, 5]).inversions_with(s(&[1, 3])), 3);
        assert_eq!(s(&[0, 3, 7]).rank_of(7), 2);
    }
}
