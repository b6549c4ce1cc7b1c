use alloc::vec;
use alloc::vec::Vec;

/// Fixed-length bitset over `[0, len)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices(len: usize, it: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Self::new(len);
        for i in it {
            b.insert(i);
        }
        b
    }

    /// Returns true if the bit was newly set.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, m) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & m == 0;
        self.words[w] |= m;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            core::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let t = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }

    /// ORs bits `[src_lo, src_hi)` of `src` into `self`, moved by `delta`.
    /// Destination bits outside `[0, len)` must not be produced by the range.
    fn or_range_shifted(&mut self, src: &BitSet, src_lo: usize, src_hi: usize, delta: i64) {
        if src_lo >= src_hi {
            return;
        }
        let first = src_lo / 64;
        let last = (src_hi - 1) / 64;
        for w in first..=last {
            let mut v = src.words[w];
            if w == first {
                v &= !0u64 << (src_lo % 64);
            }
            if w == last && !src_hi.is_multiple_of(64) {
                v &= (1u64 << (src_hi % 64)) - 1;
            }
            if v == 0 {
                continue;
            }
            let base = (w * 64) as i64 + delta;
            let q = base.div_euclid(64);
            let r = base.rem_euclid(64) as u32;
            if q >= 0 && (q as usize) < self.words.len() {
                self.words[q as usize] |= v << r;
            }
            if r > 0 && q + 1 >= 0 && ((q + 1) as usize) < self.words.len() {
                self.words[(q + 1) as usize] |= v >> (64 - r);
            }
        }
    }

    /// ORs in `src` cyclically rotated up by `shift` modulo `len`.
    pub fn or_rotated(&mut self, src: &BitSet, shift: usize) {
        debug_assert_eq!(self.len, src.len);
        let n = self.len;
        let shift = shift % n;
        self.or_range_shifted(src, 0, n - shift, shift as i64);
        self.or_range_shifted(src, n - shift, n, shift as i64 - n as i64);
    }
}
