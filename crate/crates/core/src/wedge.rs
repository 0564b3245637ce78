//! The wedge-below relation and its dual.
//!
//! `x` is wedge-below `y` when every subset `A` of the lattice with
//! `y <= join(A)` contains some `a >= x`. The co relation is the same
//! statement in the dual order: every `A` with `meet(A) <= y` contains
//! some `a <= x`.

use crate::bitmat::BitMatrix;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::limits::Limits;
use crate::witness::{Counterexample, Relation, Value, Witness};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WedgeKind {
    Wedge,
    CoWedge,
}

impl WedgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WedgeKind::Wedge => "wedge",
            WedgeKind::CoWedge => "co",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WedgeMethod {
    /// Scans every subset of the join-irreducibles. Works on any finite
    /// lattice, exponential in their count.
    Oracle,
    /// `x` below `y` iff some join-irreducible sits between them. Equivalent
    /// to the subset scan exactly on distributive lattices, so it refuses
    /// anything else.
    Fast,
}

impl WedgeMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            WedgeMethod::Oracle => "oracle",
            WedgeMethod::Fast => "fast",
        }
    }
}

#[derive(Clone, Debug)]
pub struct WedgeRelation {
    lattice: Arc<Lattice>,
    kind: WedgeKind,
    method: WedgeMethod,
    /// Row `y` holds `{x : x rel y}`.
    below: BitMatrix,
}

impl WedgeRelation {
    pub fn wedge(l: &Arc<Lattice>, method: WedgeMethod, limits: &Limits) -> Result<WedgeRelation> {
        let below = match method {
            WedgeMethod::Oracle => oracle_matrix(l, limits)?,
            WedgeMethod::Fast => fast_matrix(l)?,
        };
        Ok(WedgeRelation {
            lattice: l.clone(),
            kind: WedgeKind::Wedge,
            method,
            below,
        })
    }

    /// Built by running the chosen method on the dual lattice; element
    /// indices are shared, so the matrix carries over unchanged.
    pub fn co_wedge(
        l: &Arc<Lattice>,
        method: WedgeMethod,
        limits: &Limits,
    ) -> Result<WedgeRelation> {
        let d = Arc::new(l.dual());
        let below = match method {
            WedgeMethod::Oracle => oracle_matrix(&d, limits)?,
            WedgeMethod::Fast => fast_matrix(&d)?,
        };
        Ok(WedgeRelation {
            lattice: l.clone(),
            kind: WedgeKind::CoWedge,
            method,
            below,
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn kind(&self) -> WedgeKind {
        self.kind
    }

    pub fn method(&self) -> WedgeMethod {
        self.method
    }

    #[inline]
    pub fn holds(&self, x: usize, y: usize) -> bool {
        self.below.get(y, x)
    }

    /// `{x : x rel y}` in ascending index order.
    pub fn below_iter(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.below.iter_row(y)
    }

    pub fn count(&self) -> usize {
        (0..self.lattice.n()).map(|y| self.below.count_row(y)).sum()
    }

    /// All related pairs `(x, y)`, lexicographic.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.lattice.n();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.below.get(y, x) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Checks the defining laws of the relation against its lattice. Items
    /// with `Distributive` scope are theorems only under distributivity but
    /// are evaluated regardless, so a non-distributive input shows exactly
    /// which ones break.
    pub fn check_axioms(&self, limits: &Limits) -> WedgeDiagnostics {
        match self.kind {
            WedgeKind::Wedge => {
                axiom_checks(&self.lattice, &self.below, WEDGE_IDS, "wedge", limits)
            }
            WedgeKind::CoWedge => {
                let name = self.lattice.name().to_string();
                let d = Arc::new(self.lattice.dual().rename(name));
                axiom_checks(&d, &self.below, CO_IDS, "co", limits)
            }
        }
    }
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Subset-scan oracle. Scanning families drawn from the join-irreducibles is
/// enough: every element is the join of the irreducibles below it, so any
/// covering family refines to one of those, and refining a family only makes
/// the "contains a member above x" condition harder.
fn oracle_matrix(l: &Arc<Lattice>, limits: &Limits) -> Result<BitMatrix> {
    l.require_lattice()?;
    let n = l.n();
    let ji = l.join_irreducibles();
    let k = ji.len();
    if k > limits.oracle_ji {
        return Err(Error::SizeLimitExceeded {
            what: "join-irreducibles in the subset-scan oracle".into(),
            limit: limits.oracle_ji,
            needed: k,
        });
    }
    let mut below = BitMatrix::new(n, n);
    for y in 0..n {
        below.fill_row_ones(y);
    }
    let mut up_words = vec![0u64; words_for(n)];
    for mask in 0u64..(1u64 << k) {
        for w in up_words.iter_mut() {
            *w = 0;
        }
        let members = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| ji[i]);
        let join = l.join_iter(members.clone()).ok_or(Error::NotALattice)?;
        for q in members {
            for (w, s) in up_words.iter_mut().zip(l.down_words(q)) {
                *w |= *s;
            }
        }
        // A family covering y constrains {x : x rel y} to the union of its
        // members' down-sets.
        for y in 0..n {
            if l.leq(y, join) {
                below.and_row_with(y, &up_words);
            }
        }
    }
    Ok(below)
}

fn fast_matrix(l: &Arc<Lattice>) -> Result<BitMatrix> {
    l.require_distributive()?;
    let n = l.n();
    let mut below = BitMatrix::new(n, n);
    for &q in l.join_irreducibles() {
        for y in 0..n {
            if l.leq(q, y) {
                below.or_row_with(y, l.down_words(q));
            }
        }
    }
    Ok(below)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomScope {
    /// Holds on every finite lattice.
    General,
    /// Asserted only for distributive lattices.
    Distributive,
}

#[derive(Clone, Debug)]
pub struct AxiomItem {
    pub id: &'static str,
    pub scope: AxiomScope,
    pub counterexample: Option<Counterexample>,
}

impl AxiomItem {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct WedgeDiagnostics {
    pub items: Vec<AxiomItem>,
}

impl WedgeDiagnostics {
    pub fn ok(&self) -> bool {
        self.items.iter().all(AxiomItem::passed)
    }

    pub fn general_ok(&self) -> bool {
        self.items
            .iter()
            .filter(|i| i.scope == AxiomScope::General)
            .all(AxiomItem::passed)
    }

    pub fn find(&self, id: &str) -> Option<&AxiomItem> {
        self.items.iter().find(|i| i.id == id)
    }
}

const WEDGE_IDS: [&str; 6] = [
    "wedge-bounds",
    "wedge-down-closed",
    "wedge-up-closed",
    "wedge-below-order",
    "wedge-family-split",
    "wedge-join-identity",
];

const CO_IDS: [&str; 6] = [
    "co-bounds",
    "co-up-closed",
    "co-down-closed",
    "co-above-order",
    "co-family-split",
    "co-meet-identity",
];

const SCOPES: [AxiomScope; 6] = [
    AxiomScope::General,
    AxiomScope::General,
    AxiomScope::General,
    AxiomScope::General,
    AxiomScope::Distributive,
    AxiomScope::Distributive,
];

/// All statements are phrased over `l`; for the co relation the caller passes
/// the dual lattice and the dualized ids, which turns each item back into the
/// co statement over the original order.
fn axiom_checks(
    l: &Arc<Lattice>,
    below: &BitMatrix,
    ids: [&'static str; 6],
    construction: &str,
    limits: &Limits,
) -> WedgeDiagnostics {
    let n = l.n();
    let name = l.name();
    let cx = |law: &'static str, relation, witnesses, lhs, rhs| Counterexample {
        law: law.to_string(),
        relation,
        op: None,
        construction: Some(construction.to_string()),
        witnesses,
        lhs,
        rhs,
    };

    let mut items: Vec<AxiomItem> = ids
        .iter()
        .zip(SCOPES)
        .map(|(&id, scope)| AxiomItem {
            id,
            scope,
            counterexample: None,
        })
        .collect();

    let bottom = match l.bottom() {
        Some(b) => b,
        None => return WedgeDiagnostics { items },
    };

    // bounds: bottom is related to everything except itself.
    'bounds: for y in 0..n {
        let expect = y != bottom;
        if below.get(y, bottom) != expect {
            items[0].counterexample = Some(cx(
                ids[0],
                Relation::Eq,
                vec![
                    Witness::new("x", Value::element(name, bottom)),
                    Witness::new("y", Value::element(name, y)),
                ],
                Value::bool(!expect),
                Value::bool(expect),
            ));
            break 'bounds;
        }
    }

    // source side is down-closed: x2 <= x rel y implies x2 rel y.
    'down: for y in 0..n {
        let row = below.row(y).to_vec();
        for x in below.iter_row(y) {
            let down = l.down_words(x);
            if !subset_words(down, &row) {
                let x2 = first_excess(down, &row).expect("non-subset has a stray bit");
                items[1].counterexample = Some(cx(
                    ids[1],
                    Relation::Implies,
                    vec![
                        Witness::new("x", Value::element(name, x)),
                        Witness::new("x2", Value::element(name, x2)),
                        Witness::new("y", Value::element(name, y)),
                    ],
                    Value::bool(true),
                    Value::bool(false),
                ));
                break 'down;
            }
        }
    }

    // target side is up-closed: x rel y <= y2 implies x rel y2.
    'up: for y in 0..n {
        for y2 in 0..n {
            if !l.leq(y, y2) {
                continue;
            }
            let hi = below.row(y2).to_vec();
            if !below.row_is_subset(y, &hi) {
                let x = first_excess(below.row(y), &hi).expect("non-subset has a stray bit");
                items[2].counterexample = Some(cx(
                    ids[2],
                    Relation::Implies,
                    vec![
                        Witness::new("x", Value::element(name, x)),
                        Witness::new("y", Value::element(name, y)),
                        Witness::new("y2", Value::element(name, y2)),
                    ],
                    Value::bool(true),
                    Value::bool(false),
                ));
                break 'up;
            }
        }
    }

    // x rel y implies x <= y.
    'ord: for y in 0..n {
        if !below.row_is_subset(y, l.down_words(y)) {
            let x = first_excess(below.row(y), l.down_words(y)).expect("stray bit");
            items[3].counterexample = Some(cx(
                ids[3],
                Relation::Implies,
                vec![
                    Witness::new("x", Value::element(name, x)),
                    Witness::new("y", Value::element(name, y)),
                ],
                Value::bool(true),
                Value::bool(false),
            ));
            break 'ord;
        }
    }

    // family split: x rel join(F) iff x rel u for some u in F. Exhaustive
    // over subsets up to the family cap, then over the empty family,
    // singletons and pairs (pairs only while the scan stays small).
    let families = family_list(n, limits);
    'fam: for fam in &families {
        let join = l
            .join_iter(fam.iter().copied())
            .expect("joins are total in a lattice");
        for x in 0..n {
            let lhs = below.get(join, x);
            let rhs = fam.iter().any(|&u| below.get(u, x));
            if lhs != rhs {
                items[4].counterexample = Some(cx(
                    ids[4],
                    Relation::Eq,
                    vec![
                        Witness::new("x", Value::element(name, x)),
                        Witness::new("family", Value::element_set(name, fam.clone())),
                    ],
                    Value::bool(lhs),
                    Value::bool(rhs),
                ));
                break 'fam;
            }
        }
    }

    // every element is the join of its related set.
    for y in 0..n {
        let s = l
            .join_iter(below.iter_row(y))
            .expect("joins are total in a lattice");
        if s != y {
            items[5].counterexample = Some(cx(
                ids[5],
                Relation::Eq,
                vec![Witness::new("y", Value::element(name, y))],
                Value::element(name, s),
                Value::element(name, y),
            ));
            break;
        }
    }

    WedgeDiagnostics { items }
}

fn subset_words(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn first_excess(a: &[u64], b: &[u64]) -> Option<usize> {
    for (w, (x, y)) in a.iter().zip(b).enumerate() {
        let stray = x & !y;
        if stray != 0 {
            return Some(w * 64 + stray.trailing_zeros() as usize);
        }
    }
    None
}

fn family_list(n: usize, limits: &Limits) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n <= limits.exhaustive_family_carrier {
        for mask in 0u64..(1u64 << n) {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    } else {
        out.push(Vec::new());
        for i in 0..n {
            out.push(vec![i]);
        }
        if n <= 512 {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(vec![i, j]);
                }
            }
        }
    }
    out
}
