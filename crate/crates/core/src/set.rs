//! Fixed-capacity bitsets over dense element ids.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of an element of the ground set. Ids are dense in `0..n`.
pub type ElementId = usize;

const WORD: usize = 64;

/// A subset of the ground set `0..capacity`, stored one bit per element.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    words: Vec<u64>,
    capacity: usize,
}

impl ElementSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            words: vec![0; capacity.div_ceil(WORD)],
            capacity,
        }
    }

    /// Builds a set from ids; panics if any id is outside `0..capacity`.
    pub fn from_ids<I: IntoIterator<Item = ElementId>>(capacity: usize, ids: I) -> Self {
        let mut set = Self::new(capacity);
        for id in ids {
            set.insert(id);
        }
        set
    }

    /// Set whose members are the bits of `mask` (for exhaustive enumeration, `capacity <= 64`).
    pub fn from_mask(capacity: usize, mask: u64) -> Self {
        assert!(capacity <= WORD, "mask sets hold at most 64 elements");
        let mut set = Self::new(capacity);
        if capacity > 0 {
            set.words[0] = mask;
        }
        set
    }

    pub fn full(capacity: usize) -> Self {
        Self::from_ids(capacity, 0..capacity)
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn contains(&self, id: ElementId) -> bool {
        id < self.capacity && self.words[id / WORD] >> (id % WORD) & 1 == 1
    }

    /// Inserts `id`; returns whether it was newly added.
    #[inline]
    pub fn insert(&mut self, id: ElementId) -> bool {
        assert!(id < self.capacity, "element {id} out of range 0..{}", self.capacity);
        let word = &mut self.words[id / WORD];
        let bit = 1u64 << (id % WORD);
        let fresh = *word & bit == 0;
        *word |= bit;
        fresh
    }

    /// Removes `id`; returns whether it was present.
    #[inline]
    pub fn remove(&mut self, id: ElementId) -> bool {
        if id >= self.capacity {
            return false;
        }
        let word = &mut self.words[id / WORD];
        let bit = 1u64 << (id % WORD);
        let present = *word & bit != 0;
        *word &= !bit;
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|id| other.contains(id))
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<ElementId> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Deserializes as a plain id list; capacity becomes `max + 1`.
impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<ElementId>::deserialize(deserializer)?;
        let capacity = ids.iter().max().map_or(0, |m| m + 1);
        Ok(Self::from_ids(capacity, ids))
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = ElementId;

    fn next(&mut self) -> Option<ElementId> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = ElementId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
