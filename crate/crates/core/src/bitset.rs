//! Compact row-index sets backed by 64-bit words.
//!
//! Covers of items and candidate subgroups are intersected millions of times
//! during search, so they are kept as bitsets over row indices.

/// A fixed-capacity set of row indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSet {
    words: Vec<u64>,
    len: usize,
}

impl RowSet {
    pub fn empty(len: usize) -> Self {
        RowSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = RowSet {
            words: vec![!0u64; len.div_ceil(64)],
            len,
        };
        set.trim_tail();
        set
    }

    /// Number of rows the set can address, not the number of set bits.
    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, idx: usize) {
        debug_assert!(idx < self.len);
        self.words[idx / 64] |= 1u64 << (idx % 64);
    }

    pub fn contains(&self, idx: usize) -> bool {
        debug_assert!(idx < self.len);
        self.words[idx / 64] & (1u64 << (idx % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn and(&self, other: &RowSet) -> RowSet {
        debug_assert_eq!(self.len, other.len);
        RowSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    /// Removes every row of `other` from `self`.
    pub fn subtract(&mut self, other: &RowSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Iterates set indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    pub fn to_indices(&self) -> Vec<u32> {
        self.iter().map(|i| i as u32).collect()
    }

    fn trim_tail(&mut self) {
        let spare = self.words.len() * 64 - self.len;
        if spare > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 >> spare;
            }
        }
    }
}

impl FromIterator<usize> for RowSet {
    /// Collects indices into a set sized to the largest index + 1; mostly a
    /// test convenience, prefer `empty`/`insert` with a known capacity.
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let idx: Vec<usize> = iter.into_iter().collect();
        let len = idx.iter().max().map_or(0, |&m| m + 1);
        let mut set = RowSet::empty(len);
        for i in idx {
            set.insert(i);
        }
        set
    }
}
