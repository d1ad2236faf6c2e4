//! Bit-packed symmetric adjacency storage.

/// Dense symmetric 0/1 matrix with an empty diagonal, one bit per entry.
///
/// Rows are contiguous `u64` words, so neighbor scans and row unions run at
/// 64 entries per word op.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitMatrix {
            n,
            words_per_row,
            words: vec![0; n * words_per_row],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.n);
        let w = self.words[i * self.words_per_row + j / 64];
        (w >> (j % 64)) & 1 == 1
    }

    /// Sets both (i, j) and (j, i).
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize) {
        debug_assert!(i != j);
        self.words[i * self.words_per_row + j / 64] |= 1 << (j % 64);
        self.words[j * self.words_per_row + i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Iterates the set column indices of row `i` in ascending order.
    pub fn iter_row(&self, i: usize) -> BitIter<'_> {
        BitIter {
            words: self.row(i),
            word_idx: 0,
            current: self.row(i).first().copied().unwrap_or(0),
        }
    }
}

pub(crate) struct BitIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * 64 + bit)
    }
}

/// Flat bit set over vertex ids, used for BFS frontiers and set algebra.
#[derive(Clone, Debug)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn union_row(&mut self, row: &[u64]) {
        for (w, r) in self.words.iter_mut().zip(row) {
            *w |= r;
        }
    }

    pub fn subtract(&mut self, other: &BitSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn iter(&self) -> BitIter<'_> {
        BitIter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_and_iterate() {
        let mut m = BitMatrix::new(130);
        m.set_sym(0, 129);
        m.set_sym(0, 63);
        m.set_sym(0, 64);
        assert!(m.get(129, 0));
        assert_eq!(m.iter_row(0).collect::<Vec<_>>(), vec![63, 64, 129]);
        assert_eq!(m.row_count(0), 3);
    }

    #[test]
    fn bitset_algebra() {
        let mut a = BitSet::new(100);
        a.insert(3);
        a.insert(99);
        let mut b = BitSet::new(100);
        b.insert(99);
        a.subtract(&b);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![3]);
        assert!(a.contains(3) && !a.contains(99));
    }
}
