//! Finite lattices over dense element indices 0..n-1. Join and meet are
//! precomputed n*n tables; `is_lattice` and `is_distributive` are computed,
//! never asserted. Element numbering is preserved from the input poset;
//! generators emit a canonical numbering (a fixed linear extension with the
//! bottom first).

use crate::bitmat::BitMatrix;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poset::{set_is_subset, ElemSet, Poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NONE: u32 = u32::MAX;

#[derive(Clone)]
pub struct Lattice {
    name: String,
    poset: Poset,
    /// Transpose of leq: row x holds the down-set of x.
    down: BitMatrix,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: Option<usize>,
    top: Option<usize>,
    pub is_lattice: bool,
    pub is_distributive: bool,
    ji: Vec<usize>,
    mi: Vec<usize>,
    linext: Vec<usize>,
    downset_masks: Option<Vec<ElemSet>>,
}

impl Lattice {
    /// Computes tables, bounds, flags and irreducibles for an arbitrary finite
    /// poset. Total join/meet tables exist iff the poset is a lattice; partial
    /// entries are recorded as absent and `is_lattice` is set accordingly.
    pub fn from_poset(name: impl Into<String>, poset: Poset) -> Lattice {
        let n = poset.n();
        let down = poset.leq_matrix().transpose();
        let down_count: Vec<usize> = (0..n).map(|x| down.count_row(x)).collect();
        let up_count: Vec<usize> = (0..n).map(|x| poset.leq_matrix().count_row(x)).collect();

        let bottom = (0..n).find(|&x| poset.leq_matrix().row_is_all_ones(x));
        let top = (0..n).find(|&x| down.row_is_all_ones(x));

        let words = poset.leq_matrix().row(0).len().max(1);
        let mut join = vec![NONE; n * n];
        let mut meet = vec![NONE; n * n];
        let mut is_lattice = n > 0;
        let mut cand = vec![0u64; words];
        for x in 0..n {
            for y in x..n {
                // Least upper bound: the unique minimum-height common upper
                // bound, if it really is below every other candidate.
                for (w, slot) in cand.iter_mut().enumerate() {
                    *slot = poset.leq_matrix().row(x)[w] & poset.leq_matrix().row(y)[w];
                }
                let j = least_candidate(&cand, &down_count, |c| {
                    cand.iter()
                        .zip(poset.leq_matrix().row(c))
                        .all(|(m, up)| m & !up == 0)
                });
                for (w, slot) in cand.iter_mut().enumerate() {
                    *slot = down.row(x)[w] & down.row(y)[w];
                }
                let m = least_candidate(&cand, &up_count, |c| {
                    cand.iter().zip(down.row(c)).all(|(m, dn)| m & !dn == 0)
                });
                match j {
                    Some(v) => {
                        join[x * n + y] = v as u32;
                        join[y * n + x] = v as u32;
                    }
                    None => is_lattice = false,
                }
                match m {
                    Some(v) => {
                        meet[x * n + y] = v as u32;
                        meet[y * n + x] = v as u32;
                    }
                    None => is_lattice = false,
                }
            }
        }

        // Irreducibles by cover count: one lower cover makes a join
        // irreducible, one upper cover a meet irreducible.
        let mut lower = vec![0usize; n];
        let mut upper = vec![0usize; n];
        for &(a, b) in poset.covers() {
            upper[a] += 1;
            lower[b] += 1;
        }
        let ji: Vec<usize> = (0..n).filter(|&x| lower[x] == 1).collect();
        let mi: Vec<usize> = (0..n).filter(|&x| upper[x] == 1).collect();

        // A finite lattice is distributive iff it has as many elements as its
        // join-irreducible subposet has downsets.
        let is_distributive = is_lattice && {
            let sub = poset.restrict(&ji);
            sub.count_downsets(n) == n
        };

        let linext = poset.linear_extension();
        Lattice {
            name: name.into(),
            poset,
            down,
            join,
            meet,
            bottom,
            top,
            is_lattice,
            is_distributive,
            ji,
            mi,
            linext,
            downset_masks: None,
        }
    }

    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rename(mut self, name: impl Into<String>) -> Lattice {
        self.name = name.into();
        self
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.poset.lt(x, y)
    }

    /// Bit words of {y : y <= x}.
    pub(crate) fn down_words(&self, x: usize) -> &[u64] {
        self.down.row(x)
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.join[x * self.n() + y];
        (v != NONE).then_some(v as usize)
    }

    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.meet[x * self.n() + y];
        (v != NONE).then_some(v as usize)
    }

    /// Total-table join; callers must have checked `is_lattice`.
    pub fn join_of(&self, x: usize, y: usize) -> usize {
        let v = self.join[x * self.n() + y];
        debug_assert!(v != NONE);
        v as usize
    }

    pub fn meet_of(&self, x: usize, y: usize) -> usize {
        let v = self.meet[x * self.n() + y];
        debug_assert!(v != NONE);
        v as usize
    }

    /// Join over an element iterator; the empty join is the bottom.
    pub fn join_iter(&self, elems: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut acc = self.bottom?;
        for e in elems {
            acc = self.join(acc, e)?;
        }
        Some(acc)
    }

    /// Meet over an element iterator; the empty meet is the top.
    pub fn meet_iter(&self, elems: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut acc = self.top?;
        for e in elems {
            acc = self.meet(acc, e)?;
        }
        Some(acc)
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        self.poset.covers()
    }

    pub fn join_irreducibles(&self) -> &[usize] {
        &self.ji
    }

    pub fn meet_irreducibles(&self) -> &[usize] {
        &self.mi
    }

    /// Canonical linear extension used for map enumeration order.
    pub fn linext(&self) -> &[usize] {
        &self.linext
    }

    /// Downset bitmasks when the lattice was built by `downset_lattice`.
    pub fn downset_masks(&self) -> Option<&[ElemSet]> {
        self.downset_masks.as_deref()
    }

    pub fn require_lattice(&self) -> Result<()> {
        if self.is_lattice {
            Ok(())
        } else {
            Err(Error::NotALattice)
        }
    }

    pub fn require_distributive(&self) -> Result<()> {
        self.require_lattice()?;
        if self.is_distributive {
            Ok(())
        } else {
            Err(Error::NotDistributive)
        }
    }

    /// Order dual: same elements, reversed relation, recomputed tables.
    pub fn dual(&self) -> Lattice {
        Lattice::from_poset(format!("dual({})", self.name), self.poset.dual())
    }

    // ------------------------------------------------------------------
    // Generators. All emit a canonical numbering with the bottom at 0.
    // ------------------------------------------------------------------

    pub fn chain(n: usize) -> Result<Lattice> {
        Lattice::chain_limited(n, &Limits::default())
    }

    pub fn chain_limited(n: usize, limits: &Limits) -> Result<Lattice> {
        if n == 0 {
            return Err(Error::InvalidInput("chain requires n >= 1".into()));
        }
        if n > limits.lattice_size {
            return Err(Error::SizeLimitExceeded {
                what: format!("chain({n})"),
                limit: limits.lattice_size,
                needed: n,
            });
        }
        let covers: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Ok(Lattice::from_poset(
            format!("chain({n})"),
            Poset::build(n, &covers)?,
        ))
    }

    pub fn boolean(k: usize) -> Result<Lattice> {
        Lattice::boolean_limited(k, &Limits::default())
    }

    pub fn boolean_limited(k: usize, limits: &Limits) -> Result<Lattice> {
        Lattice::downset_lattice(&Poset::antichain(k), format!("boolean({k})"), limits)
    }

    /// Five elements, three incomparable atoms: the smallest modular
    /// non-distributive lattice.
    pub fn diamond_m3() -> Lattice {
        let covers = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)];
        Lattice::from_poset("m3", Poset::build(5, &covers).expect("fixed covers"))
    }

    /// Five elements with a short and a long side: the smallest
    /// non-modular lattice.
    pub fn pentagon_n5() -> Lattice {
        let covers = [(0, 1), (0, 2), (2, 3), (1, 4), (3, 4)];
        Lattice::from_poset("n5", Poset::build(5, &covers).expect("fixed covers"))
    }

    /// Componentwise order on pairs, renumbered canonically.
    pub fn product(a: &Lattice, b: &Lattice) -> Result<Lattice> {
        Lattice::product_limited(a, b, &Limits::default())
    }

    pub fn product_limited(a: &Lattice, b: &Lattice, limits: &Limits) -> Result<Lattice> {
        let (na, nb) = (a.n(), b.n());
        let n = na.saturating_mul(nb);
        if n > limits.lattice_size {
            return Err(Error::SizeLimitExceeded {
                what: format!("product of {} and {}", a.name, b.name),
                limit: limits.lattice_size,
                needed: n,
            });
        }
        let mut leq = BitMatrix::new(n, n);
        for xa in 0..na {
            for xb in 0..nb {
                for ya in 0..na {
                    for yb in 0..nb {
                        if a.leq(xa, ya) && b.leq(xb, yb) {
                            leq.set(xa * nb + xb, ya * nb + yb, true);
                        }
                    }
                }
            }
        }
        let poset = Poset::from_closed(leq);
        let order = poset.linear_extension();
        let canonical = poset.permuted(&order);
        Ok(Lattice::from_poset(
            format!("product({},{})", a.name, b.name),
            canonical,
        ))
    }

    /// Lattice of all downsets of `p`, ordered by inclusion. Element i is the
    /// i-th downset in (size, mask) order, so the numbering is canonical and
    /// the bottom (the empty downset) is 0. Join is union, meet intersection.
    pub fn downset_lattice(p: &Poset, name: impl Into<String>, limits: &Limits) -> Result<Lattice> {
        let masks = p.downsets(limits.lattice_size)?;
        let m = masks.len();
        let mut leq = BitMatrix::new(m, m);
        for i in 0..m {
            for j in 0..m {
                if set_is_subset(&masks[i], &masks[j]) {
                    leq.set(i, j, true);
                }
            }
        }
        let mut latt = Lattice::from_poset(name, Poset::from_closed(leq));
        latt.downset_masks = Some(masks);
        Ok(latt)
    }

    /// Downset lattice of a seeded random poset on `size` points. Edges are
    /// drawn independently with probability `edge_prob` respecting the index
    /// order, so the result is always a (distributive) lattice.
    pub fn from_random_poset(
        size: usize,
        edge_prob: f64,
        seed: u64,
        limits: &Limits,
    ) -> Result<Lattice> {
        if size == 0 {
            return Err(Error::InvalidInput(
                "random poset requires size >= 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&edge_prob) {
            return Err(Error::InvalidInput(format!(
                "edge probability {edge_prob} outside [0, 1]"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut covers = Vec::new();
        for i in 0..size {
            for j in (i + 1)..size {
                if rng.gen_bool(edge_prob) {
                    covers.push((i, j));
                }
            }
        }
        let poset = Poset::build(size, &covers)?;
        Lattice::downset_lattice(
            &poset,
            format!("random(size={size},p={edge_prob},seed={seed})"),
            limits,
        )
    }

    /// Recomputes every stored invariant through an independent route and
    /// reports per-check status with a first witness where meaningful.
    pub fn validate(&self) -> Diagnostics {
        let n = self.n();
        let mut checks = Vec::new();
        let mut lub_failure = None;
        let mut distributive_witness = None;

        let reflexive = (0..n).all(|x| self.leq(x, x));
        checks.push(Check::plain("reflexive", reflexive));

        let mut anti = None;
        'anti: for x in 0..n {
            for y in (x + 1)..n {
                if self.leq(x, y) && self.leq(y, x) {
                    anti = Some((x, y));
                    break 'anti;
                }
            }
        }
        checks.push(Check::witnessed(
            "antisymmetric",
            anti.is_none(),
            anti.map(|(x, y)| format!("{x} and {y}")),
        ));

        let mut trans = None;
        'trans: for x in 0..n {
            for y in 0..n {
                if !self.leq(x, y) {
                    continue;
                }
                for z in 0..n {
                    if self.leq(y, z) && !self.leq(x, z) {
                        trans = Some((x, y, z));
                        break 'trans;
                    }
                }
            }
        }
        checks.push(Check::witnessed(
            "transitive",
            trans.is_none(),
            trans.map(|(x, y, z)| format!("({x},{y},{z})")),
        ));

        let reduction_ok = {
            let rebuilt = Poset::build(n, self.poset.covers());
            match rebuilt {
                Ok(p) => {
                    p.leq_matrix() == self.poset.leq_matrix() && p.covers() == self.poset.covers()
                }
                Err(_) => false,
            }
        };
        checks.push(Check::plain("covers-are-reduction", reduction_ok));

        // Brute-force least upper bound / greatest lower bound per pair.
        let mut join_ok = true;
        let mut meet_ok = true;
        for x in 0..n {
            for y in 0..n {
                let ups: Vec<usize> = (0..n)
                    .filter(|&z| self.leq(x, z) && self.leq(y, z))
                    .collect();
                let lub = ups
                    .iter()
                    .copied()
                    .find(|&c| ups.iter().all(|&d| self.leq(c, d)));
                if self.join(x, y) != lub {
                    join_ok = false;
                    lub_failure.get_or_insert((x, y));
                }
                let downs: Vec<usize> = (0..n)
                    .filter(|&z| self.leq(z, x) && self.leq(z, y))
                    .collect();
                let glb = downs
                    .iter()
                    .copied()
                    .find(|&c| downs.iter().all(|&d| self.leq(d, c)));
                if self.meet(x, y) != glb {
                    meet_ok = false;
                    lub_failure.get_or_insert((x, y));
                }
            }
        }
        checks.push(Check::plain("join-is-lub", join_ok));
        checks.push(Check::plain("meet-is-glb", meet_ok));

        let total =
            (0..n).all(|x| (0..n).all(|y| self.join(x, y).is_some() && self.meet(x, y).is_some()));
        checks.push(Check::plain(
            "lattice-flag",
            (total && n > 0) == self.is_lattice,
        ));

        let bounds_ok = if self.is_lattice {
            match (self.bottom, self.top) {
                (Some(b), Some(t)) => {
                    (0..n).all(|x| self.leq(b, x)) && (0..n).all(|x| self.leq(x, t))
                }
                _ => false,
            }
        } else {
            true
        };
        checks.push(Check::plain("bounds", bounds_ok));

        // Irreducibles: cover counts against the order-theoretic definition.
        if self.is_lattice {
            let ji_def: Vec<usize> = (0..n)
                .filter(|&x| {
                    Some(x) != self.bottom
                        && self.join_iter((0..n).filter(|&y| self.lt(y, x))) != Some(x)
                })
                .collect();
            checks.push(Check::plain("join-irreducibles", ji_def == self.ji));
            let mi_def: Vec<usize> = (0..n)
                .filter(|&x| {
                    Some(x) != self.top
                        && self.meet_iter((0..n).filter(|&y| self.lt(x, y))) != Some(x)
                })
                .collect();
            checks.push(Check::plain("meet-irreducibles", mi_def == self.mi));

            // Every element is the join of the join-irreducibles below it.
            let birkhoff = (0..n).all(|x| {
                self.join_iter(self.ji.iter().copied().filter(|&j| self.leq(j, x))) == Some(x)
            });
            checks.push(Check::plain("join-of-irreducibles", birkhoff));

            // Distributivity by the definitional triple scan.
            let mut witness = None;
            'scan: for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = self.meet_of(x, self.join_of(y, z));
                        let rhs = self.join_of(self.meet_of(x, y), self.meet_of(x, z));
                        if lhs != rhs {
                            witness = Some((x, y, z));
                            break 'scan;
                        }
                    }
                }
            }
            distributive_witness = witness;
            checks.push(Check::witnessed(
                "distributive-flag",
                witness.is_none() == self.is_distributive,
                witness.map(|(x, y, z)| format!("({x},{y},{z})")),
            ));
        }

        Diagnostics {
            checks,
            lub_failure,
            distributive_witness,
        }
    }
}

/// Candidate with the smallest (rank, index) key that bounds all candidates.
fn least_candidate(cand: &[u64], rank: &[usize], verify: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (wi, &w) in cand.iter().enumerate() {
        let mut bits = w;
        while bits != 0 {
            let c = wi * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if c >= rank.len() {
                break;
            }
            if best.is_none_or(|b| rank[c] < rank[b]) {
                best = Some(c);
            }
        }
    }
    best.filter(|&c| verify(c))
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.poset.leq_matrix() == other.poset.leq_matrix()
            && self.join == other.join
            && self.meet == other.meet
    }
}

impl Eq for Lattice {}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Lattice({}, n={}, lattice={}, distributive={})",
            self.name,
            self.n(),
            self.is_lattice,
            self.is_distributive
        )
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Check {
    fn plain(name: &'static str, passed: bool) -> Check {
        Check {
            name,
            passed,
            witness: None,
        }
    }

    fn witnessed(name: &'static str, passed: bool, witness: Option<String>) -> Check {
        Check {
            name,
            passed,
            witness,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
    pub lub_failure: Option<(usize, usize)>,
    pub distributive_witness: Option<(usize, usize, usize)>,
}

impl Diagnostics {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{set_contains, set_count};

    #[test]
    fn chain_tables() {
        let c4 = Lattice::chain(4).unwrap();
        assert_eq!(c4.n(), 4);
        assert!(c4.is_lattice && c4.is_distributive);
        assert_eq!(c4.bottom(), Some(0));
        assert_eq!(c4.top(), Some(3));
        assert_eq!(c4.join(1, 2), Some(2));
        assert_eq!(c4.meet(1, 2), Some(1));
        assert_eq!(c4.covers(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(c4.join_irreducibles(), &[1, 2, 3]);
        assert!(c4.validate().ok());
    }

    #[test]
    fn boolean_two_is_canonical() {
        let b2 = Lattice::boolean(2).unwrap();
        assert_eq!(b2.n(), 4);
        assert_eq!(b2.covers(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(b2.join(1, 2), Some(3));
        assert_eq!(b2.meet(1, 2), Some(0));
        assert_eq!(b2.join_irreducibles(), &[1, 2]);
        assert_eq!(b2.meet_irreducibles(), &[1, 2]);
        assert!(b2.is_distributive);
        assert!(b2.validate().ok());
    }

    #[test]
    fn diamond_is_not_distributive_with_witness() {
        let m3 = Lattice::diamond_m3();
        assert!(m3.is_lattice);
        assert!(!m3.is_distributive);
        let d = m3.validate();
        assert!(d.ok());
        assert_eq!(d.distributive_witness, Some((1, 2, 3)));
    }

    #[test]
    fn pentagon_is_not_distributive_even_dualized() {
        let n5 = Lattice::pentagon_n5();
        assert!(n5.is_lattice && !n5.is_distributive);
        let dual = n5.dual();
        assert!(dual.is_lattice && !dual.is_distributive);
        assert!(dual.validate().ok());
    }

    #[test]
    fn four_element_non_lattice() {
        // 0 < a, 0 < b and nothing above both: no join for (a, b).
        let p = Poset::build(4, &[(0, 1), (0, 2)]).unwrap();
        let l = Lattice::from_poset("vee-plus-point", p);
        assert!(!l.is_lattice);
        assert_eq!(l.join(1, 2), None);
        let d = l.validate();
        assert!(d.ok());
    }

    #[test]
    fn join_meet_match_brute_force_on_zoo() {
        for l in [
            Lattice::chain(1).unwrap(),
            Lattice::chain(5).unwrap(),
            Lattice::boolean(3).unwrap(),
            Lattice::diamond_m3(),
            Lattice::pentagon_n5(),
        ] {
            assert!(l.validate().ok(), "{:?}", l);
        }
    }

    #[test]
    fn dual_is_involution_and_swaps_irreducibles() {
        let b3 = Lattice::boolean(3).unwrap();
        let d = b3.dual();
        assert_eq!(d.bottom(), b3.top());
        assert_eq!(d.join_irreducibles(), b3.meet_irreducibles());
        assert_eq!(d.dual(), b3);
        let c3 = Lattice::chain(3).unwrap();
        assert_eq!(c3.dual().dual(), c3);
        assert!(c3.dual().is_distributive);
    }

    #[test]
    fn product_of_chains_is_boolean_square() {
        let c2 = Lattice::chain(2).unwrap();
        let p = Lattice::product(&c2, &c2).unwrap();
        assert_eq!(p, Lattice::boolean(2).unwrap());
    }

    #[test]
    fn downset_lattice_of_vee() {
        let vee = Poset::build(3, &[(0, 2), (1, 2)]).unwrap();
        let l = Lattice::downset_lattice(&vee, "dl(vee)", &Limits::default()).unwrap();
        assert_eq!(l.n(), 5);
        assert_eq!(l.join_irreducibles().len(), 3);
        assert!(l.is_distributive);
        assert!(l.validate().ok());
        let masks = l.downset_masks().unwrap();
        assert_eq!(set_count(&masks[0]), 0);
        assert!(set_contains(&masks[4], 2));
    }

    #[test]
    fn random_poset_lattice_is_distributive() {
        let l = Lattice::from_random_poset(5, 0.4, 42, &Limits::default()).unwrap();
        assert!(l.is_lattice && l.is_distributive);
        assert!(l.validate().ok());
        let again = Lattice::from_random_poset(5, 0.4, 42, &Limits::default()).unwrap();
        assert_eq!(l, again);
    }

    #[test]
    fn size_cap_respected() {
        let limits = Limits {
            lattice_size: 10,
            ..Limits::default()
        };
        assert!(matches!(
            Lattice::chain_limited(11, &limits),
            Err(Error::SizeLimitExceeded { .. })
        ));
        assert!(matches!(
            Lattice::boolean_limited(4, &limits),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }
}
