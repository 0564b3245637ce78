//! Dense bit matrices. Rows are u64 words; a relation on n elements costs
//! n * ceil(n/64) words and answers membership in O(1).

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    /// Square identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.bits[r * self.stride + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let slot = &mut self.bits[r * self.stride + c / 64];
        if v {
            *slot |= 1u64 << (c % 64);
        } else {
            *slot &= !(1u64 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// dst |= src, rows of the same matrix.
    pub fn or_row_into(&mut self, src: usize, dst: usize) {
        if src == dst {
            return;
        }
        let (a, b) = (src.min(dst), src.max(dst));
        let (lo, hi) = self.bits.split_at_mut(b * self.stride);
        let row_a = &lo[a * self.stride..(a + 1) * self.stride];
        let row_b = &mut hi[..self.stride];
        if src < dst {
            for (d, s) in row_b.iter_mut().zip(row_a.iter()) {
                *d |= *s;
            }
        } else {
            // src is the higher row; sources from hi into lo is not expressible
            // with one split, so copy first.
            let tmp: Vec<u64> = row_b.to_vec();
            let row_dst = &mut lo[a * self.stride..(a + 1) * self.stride];
            for (d, s) in row_dst.iter_mut().zip(tmp.iter()) {
                *d |= *s;
            }
        }
    }

    /// Sets every bit in the row (padding bits beyond `cols` stay zero).
    pub fn fill_row_ones(&mut self, r: usize) {
        let cols = self.cols;
        let stride = self.stride;
        let row = self.row_mut(r);
        for (w, word) in row.iter_mut().enumerate() {
            let lo = w * 64;
            *word = if lo + 64 <= cols {
                !0u64
            } else if lo >= cols {
                0
            } else {
                (1u64 << (cols - lo)) - 1
            };
        }
        debug_assert_eq!(row.len(), stride);
    }

    pub fn and_row_with(&mut self, r: usize, words: &[u64]) {
        for (d, s) in self.row_mut(r).iter_mut().zip(words.iter()) {
            *d &= *s;
        }
    }

    pub fn or_row_with(&mut self, r: usize, words: &[u64]) {
        for (d, s) in self.row_mut(r).iter_mut().zip(words.iter()) {
            *d |= *s;
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.iter_row(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Indices of set bits in row `r`, ascending.
    pub fn iter_row(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(r);
        let cols = self.cols;
        row.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + tz)
            })
            .filter(move |&c| c < cols)
        })
    }

    pub fn count_row(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Is row `r` a subset of the word slice `other`?
    pub fn row_is_subset(&self, r: usize, other: &[u64]) -> bool {
        self.row(r)
            .iter()
            .zip(other.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn row_is_all_ones(&self, r: usize) -> bool {
        self.count_row(r) == self.cols
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut m = BitMatrix::new(3, 70);
        m.set(1, 0, true);
        m.set(1, 69, true);
        assert!(m.get(1, 0));
        assert!(m.get(1, 69));
        assert!(!m.get(1, 68));
        m.set(1, 69, false);
        assert!(!m.get(1, 69));
    }

    #[test]
    fn iter_row_ascending() {
        let mut m = BitMatrix::new(2, 130);
        for c in [0, 5, 63, 64, 129] {
            m.set(0, c, true);
        }
        let got: Vec<usize> = m.iter_row(0).collect();
        assert_eq!(got, vec![0, 5, 63, 64, 129]);
        assert_eq!(m.count_row(0), 5);
    }

    #[test]
    fn transpose_involution() {
        let mut m = BitMatrix::new(4, 7);
        m.set(0, 6, true);
        m.set(3, 2, true);
        let t = m.transpose();
        assert!(t.get(6, 0));
        assert!(t.get(2, 3));
        assert_eq!(t.transpose(), m);
    }

    #[test]
    fn or_row_into_both_directions() {
        let mut m = BitMatrix::new(2, 10);
        m.set(0, 1, true);
        m.set(1, 8, true);
        m.or_row_into(0, 1);
        assert!(m.get(1, 1) && m.get(1, 8));
        m.or_row_into(1, 0);
        assert!(m.get(0, 8));
    }
}
