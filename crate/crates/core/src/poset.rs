//! Finite posets on elements 0..n-1: reflexive-transitive closure of a cover
//! list, cycle detection, transitive reduction, linear extensions and downset
//! enumeration.

use crate::bitmat::BitMatrix;
use crate::error::{Error, Result};

/// A set of elements as boxed words. Used for downsets of small posets.
pub type ElemSet = Box<[u64]>;

fn set_new(n: usize) -> ElemSet {
    vec![0u64; n.div_ceil(64).max(1)].into_boxed_slice()
}

fn set_insert(s: &mut ElemSet, i: usize) {
    s[i / 64] |= 1u64 << (i % 64);
}

pub fn set_contains(s: &ElemSet, i: usize) -> bool {
    (s[i / 64] >> (i % 64)) & 1 == 1
}

pub fn set_count(s: &ElemSet) -> usize {
    s.iter().map(|w| w.count_ones() as usize).sum()
}

pub fn set_is_subset(a: &ElemSet, b: &ElemSet) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x & !y == 0)
}

/// Numeric comparison, most significant word first.
fn set_cmp(a: &ElemSet, b: &ElemSet) -> std::cmp::Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    leq: BitMatrix,
    covers: Vec<(usize, usize)>,
}

impl Poset {
    /// Builds a poset from a cover list. The stored relation is the
    /// reflexive-transitive closure; the stored covers are the transitive
    /// reduction of that closure, sorted lexicographically.
    pub fn build(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
        for &(a, b) in covers {
            let bad = if a >= n { a } else { b };
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
            if a == b {
                return Err(Error::CycleDetected(a, b));
            }
        }
        let mut leq = BitMatrix::identity(n);
        for &(a, b) in covers {
            leq.set(a, b, true);
        }
        // Reachability closure over the cover graph.
        for k in 0..n {
            for i in 0..n {
                if leq.get(i, k) {
                    leq.or_row_into(k, i);
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq.get(i, j) && leq.get(j, i) {
                    return Err(Error::CycleDetected(i, j));
                }
            }
        }
        let covers = reduction(&leq);
        Ok(Poset { n, leq, covers })
    }

    /// Poset with no order besides reflexivity.
    pub fn antichain(n: usize) -> Poset {
        Poset {
            n,
            leq: BitMatrix::identity(n),
            covers: Vec::new(),
        }
    }

    /// Wraps a matrix that is already a reflexive, transitive, antisymmetric
    /// order, computing only the cover reduction.
    pub(crate) fn from_closed(leq: BitMatrix) -> Poset {
        let covers = reduction(&leq);
        Poset {
            n: leq.rows(),
            leq,
            covers,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq.get(x, y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq.get(x, y)
    }

    pub fn leq_matrix(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(_, b)| b == x)
            .map(|&(a, _)| a)
            .collect()
    }

    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(a, _)| a == x)
            .map(|&(_, b)| b)
            .collect()
    }

    /// Order dual: reverses the relation, keeps element identity.
    pub fn dual(&self) -> Poset {
        let leq = self.leq.transpose();
        let covers = self.covers.iter().map(|&(a, b)| (b, a)).collect::<Vec<_>>();
        let mut covers = covers;
        covers.sort_unstable();
        Poset {
            n: self.n,
            leq,
            covers,
        }
    }

    /// Kahn front-to-back walk over the cover graph, ties broken by element
    /// index. Always a linear extension: an element is emitted only after
    /// everything strictly below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut indegree = vec![0usize; self.n];
        for &(_, b) in &self.covers {
            indegree[b] += 1;
        }
        let mut queue: std::collections::VecDeque<usize> =
            (0..self.n).filter(|&x| indegree[x] == 0).collect();
        let mut out = Vec::with_capacity(self.n);
        while let Some(x) = queue.pop_front() {
            out.push(x);
            for y in self.upper_covers(x) {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        debug_assert_eq!(out.len(), self.n);
        out
    }

    /// All downsets, sorted by size then numeric mask value. The order is a
    /// linear extension of inclusion, so it doubles as a canonical numbering
    /// for the downset lattice.
    pub fn downsets(&self, cap: usize) -> Result<Vec<ElemSet>> {
        use std::collections::{HashSet, VecDeque};
        let mut seen: HashSet<ElemSet> = HashSet::new();
        let mut queue: VecDeque<ElemSet> = VecDeque::new();
        let empty = set_new(self.n);
        seen.insert(empty.clone());
        queue.push_back(empty);
        while let Some(d) = queue.pop_front() {
            for x in 0..self.n {
                if set_contains(&d, x) {
                    continue;
                }
                // d + x is a downset iff everything strictly below x is in d.
                let below_ok = (0..self.n).all(|y| !self.lt(y, x) || set_contains(&d, y));
                if !below_ok {
                    continue;
                }
                let mut next = d.clone();
                set_insert(&mut next, x);
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(Error::SizeLimitExceeded {
                            what: format!("downset lattice of a {}-element poset", self.n),
                            limit: cap,
                            needed: seen.len(),
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut all: Vec<ElemSet> = seen.into_iter().collect();
        all.sort_unstable_by(|a, b| set_count(a).cmp(&set_count(b)).then(set_cmp(a, b)));
        Ok(all)
    }

    /// Number of downsets, stopping early once `cap` is exceeded.
    pub fn count_downsets(&self, cap: usize) -> usize {
        match self.downsets(cap) {
            Ok(v) => v.len(),
            Err(_) => cap + 1,
        }
    }

    /// Restriction to the subset `keep` (re-indexed by position in `keep`).
    pub fn restrict(&self, keep: &[usize]) -> Poset {
        let m = keep.len();
        let mut leq = BitMatrix::new(m, m);
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if self.leq(x, y) {
                    leq.set(i, j, true);
                }
            }
        }
        let covers = reduction(&leq);
        Poset { n: m, leq, covers }
    }

    /// Renames elements so that `order[i]` becomes element `i`.
    pub fn permuted(&self, order: &[usize]) -> Poset {
        let mut pos = vec![0usize; self.n];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        let mut leq = BitMatrix::new(self.n, self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if self.leq(x, y) {
                    leq.set(pos[x], pos[y], true);
                }
            }
        }
        let mut covers: Vec<(usize, usize)> =
            self.covers.iter().map(|&(a, b)| (pos[a], pos[b])).collect();
        covers.sort_unstable();
        Poset {
            n: self.n,
            leq,
            covers,
        }
    }
}

/// Transitive reduction of a closed order: (x, y) is a cover iff x < y and no
/// z sits strictly between.
fn reduction(leq: &BitMatrix) -> Vec<(usize, usize)> {
    let n = leq.rows();
    let mut covers = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y || !leq.get(x, y) {
                continue;
            }
            let mut is_cover = true;
            for z in 0..n {
                if z != x && z != y && leq.get(x, z) && leq.get(z, y) {
                    is_cover = false;
                    break;
                }
            }
            if is_cover {
                covers.push((x, y));
            }
        }
    }
    covers.sort_unstable();
    covers
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_reduction_drop_implied_edge() {
        let p = Poset::build(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        let q = Poset::build(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.leq_matrix(), q.leq_matrix());
    }

    #[test]
    fn cycle_detected() {
        let err = Poset::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(_, _)));
        let err = Poset::build(2, &[(1, 1)]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(1, 1)));
    }

    #[test]
    fn index_out_of_range() {
        let err = Poset::build(2, &[(0, 5)]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 5, n: 2 }));
    }

    #[test]
    fn linear_extension_respects_order() {
        let p = Poset::build(5, &[(0, 1), (0, 2), (2, 3), (1, 4), (3, 4)]).unwrap();
        let ext = p.linear_extension();
        let mut pos = [0usize; 5];
        for (i, &x) in ext.iter().enumerate() {
            pos[x] = i;
        }
        for x in 0..5 {
            for y in 0..5 {
                if p.lt(x, y) {
                    assert!(pos[x] < pos[y]);
                }
            }
        }
    }

    #[test]
    fn downsets_of_antichain_and_vee() {
        let a2 = Poset::antichain(2);
        assert_eq!(a2.downsets(100).unwrap().len(), 4);
        // 0 < 2, 1 < 2
        let vee = Poset::build(3, &[(0, 2), (1, 2)]).unwrap();
        let ds = vee.downsets(100).unwrap();
        assert_eq!(ds.len(), 5);
        // Sorted by size: empty set first, full set last.
        assert_eq!(set_count(&ds[0]), 0);
        assert_eq!(set_count(&ds[4]), 3);
    }

    #[test]
    fn downsets_cap_exceeded() {
        let big = Poset::antichain(13);
        let err = big.downsets(4096).unwrap_err();
        assert!(matches!(err, Error::SizeLimitExceeded { .. }));
    }

    #[test]
    fn downsets_match_brute_force_filter() {
        // Independent route: filter all subsets for down-closedness.
        let p = Poset::build(4, &[(0, 1), (1, 3), (0, 2)]).unwrap();
        let brute: Vec<u64> = (0u64..16)
            .filter(|mask| {
                (0..4).all(|x| {
                    mask >> x & 1 == 0 || (0..4).all(|y| !p.lt(y, x) || mask >> y & 1 == 1)
                })
            })
            .collect();
        let ds = p.downsets(100).unwrap();
        let mut got: Vec<u64> = ds.iter().map(|s| s[0]).collect();
        got.sort_unstable();
        let mut want = brute;
        want.sort_unstable();
        assert_eq!(got, want);
    }

    #[test]
    fn dual_is_involution() {
        let p = Poset::build(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(p.dual().dual(), p);
        assert!(p.dual().leq(2, 1));
    }
}
