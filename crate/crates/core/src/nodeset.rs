//! Fixed-width node sets.
//!
//! Every graph in this crate is desk-scale, so a set of node indices fits in a
//! single `u64`. Bit 63 is never a node: the statement calculus reuses it as
//! the aggregate selection target.

use std::fmt;

/// Largest number of nodes any graph may hold.
pub const MAX_NODES: usize = 63;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < 64);
        NodeSet(1 << v)
    }

    /// `{0, .., n-1}`
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_NODES);
        if n == 0 {
            NodeSet(0)
        } else {
            NodeSet(u64::MAX >> (64 - n))
        }
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < 64);
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn with(self, v: usize) -> Self {
        let mut s = self;
        s.insert(v);
        s
    }

    pub fn without(self, v: usize) -> Self {
        let mut s = self;
        s.remove(v);
        s
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: NodeSet) -> Self {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> Self {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> Self {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing index order.
    pub fn iter(self) -> NodeSetIter {
        NodeSetIter(self.0)
    }

    /// All subsets of `self` with exactly `k` members, in lexicographic order
    /// of their sorted member lists.
    pub fn subsets_of_size(self, k: usize) -> SubsetsOfSize {
        let members: Vec<usize> = self.iter().collect();
        let state = if k <= members.len() {
            Some((0..k).collect())
        } else {
            None
        };
        SubsetsOfSize { members, state }
    }

    /// All subsets of `self`, in no particular order.
    pub fn subsets(self) -> impl Iterator<Item = NodeSet> {
        let universe = self.0;
        let mut sub: u64 = 0;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = NodeSet(sub);
            sub = sub.wrapping_sub(universe) & universe;
            if sub == 0 {
                done = true;
            }
            Some(out)
        })
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct NodeSetIter(u64);

impl Iterator for NodeSetIter {
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

impl ExactSizeIterator for NodeSetIter {}

pub struct SubsetsOfSize {
    members: Vec<usize>,
    state: Option<Vec<usize>>,
}

impl Iterator for SubsetsOfSize {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        let idx = self.state.as_mut()?;
        let out: NodeSet = idx.iter().map(|&i| self.members[i]).collect();
        let n = self.members.len();
        let k = idx.len();
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
