use serde::{Deserialize, Serialize};

/// Dense bitset over the vertex universe `0..n` with a cached cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
    len: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for v in 0..universe as u32 {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = u32>>(universe: usize, it: I) -> Self {
        let mut s = Self::new(universe);
        for v in it {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        let v = v as usize;
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns `true` if `v` was newly inserted.
    ///
    /// Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: u32) -> bool {
        let i = v as usize;
        assert!(i < self.universe, "vertex {v} outside universe {}", self.universe);
        let word = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *word & bit == 0;
        *word |= bit;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, v: u32) -> bool {
        let i = v as usize;
        if i >= self.universe {
            return false;
        }
        let word = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let present = *word & bit != 0;
        *word &= !bit;
        self.len -= present as usize;
        present
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((wi * 64) as u32 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::from_iter(self.universe, (0..self.universe as u32).filter(|&v| !self.contains(v)))
    }
}
