//! Finite map algebras as explicit operation tables, and the law checks that
//! run over them: associativity, units, closure, distributivity, nuclei and
//! quotients. Every failed check yields a replayable counterexample; scan
//! orders are fixed so the first witness is deterministic.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::limits::Limits;
use crate::maps::{
    classify, compose, compose_bullet, compose_dot, enumerate_endo, phi, pointwise_join,
    pointwise_meet, psi, same_lattice, MonotoneMap, Sampler,
};
use crate::wedge::{WedgeMethod, WedgeRelation};
use crate::witness::{Counterexample, Relation, Value, Witness};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

/// Seed for the pseudo-random tail of the family scan; fixed so exhaustive
/// runs are reproducible without any caller-provided seed.
pub(crate) const FAMILY_SEED: u64 = 0x716c_6162;

/// Both relations of one lattice, built once and shared.
#[derive(Clone, Debug)]
pub struct WedgeCtx {
    pub lattice: Arc<Lattice>,
    pub wedge: WedgeRelation,
    pub co: WedgeRelation,
}

impl WedgeCtx {
    /// Fast method, so distributive lattices only.
    pub fn new(l: &Arc<Lattice>, limits: &Limits) -> Result<WedgeCtx> {
        WedgeCtx::with_method(l, WedgeMethod::Fast, limits)
    }

    pub fn with_method(l: &Arc<Lattice>, method: WedgeMethod, limits: &Limits) -> Result<WedgeCtx> {
        Ok(WedgeCtx {
            lattice: l.clone(),
            wedge: WedgeRelation::wedge(l, method, limits)?,
            co: WedgeRelation::co_wedge(l, method, limits)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    Circ,
    Dot,
    Bullet,
}

impl OpKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OpKind::Circ => "circ",
            OpKind::Dot => "dot",
            OpKind::Bullet => "bullet",
        }
    }
}

/// `g * f` for the chosen operation (the left operand acts second).
pub fn apply_op(
    op: OpKind,
    ctx: Option<&WedgeCtx>,
    g: &MonotoneMap,
    f: &MonotoneMap,
) -> Result<MonotoneMap> {
    let need = || Error::InvalidInput(format!("{} composition needs a wedge context", op.as_str()));
    match op {
        OpKind::Circ => compose(g, f),
        OpKind::Dot => compose_dot(g, f, &ctx.ok_or_else(need)?.wedge),
        OpKind::Bullet => compose_bullet(g, f, &ctx.ok_or_else(need)?.co),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarrierFamily {
    All,
    SupPreserving,
    MeetPreserving,
}

impl CarrierFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            CarrierFamily::All => "all",
            CarrierFamily::SupPreserving => "sup",
            CarrierFamily::MeetPreserving => "meet",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MapAlgebra {
    label: String,
    lattice: Arc<Lattice>,
    op_label: String,
    carrier: Vec<MonotoneMap>,
    index: HashMap<Vec<u32>, u32>,
    table: Vec<u32>,
}

impl MapAlgebra {
    /// Enumerates the endomaps of `l`, keeps the requested subfamily, and
    /// tabulates the operation over it.
    pub fn enumerated(
        l: &Arc<Lattice>,
        ctx: Option<&WedgeCtx>,
        op: OpKind,
        family: CarrierFamily,
        limits: &Limits,
    ) -> Result<MapAlgebra> {
        let maps = enumerate_endo(l, limits.enumeration)?;
        let mut carrier = Vec::new();
        for f in maps {
            let keep = match family {
                CarrierFamily::All => true,
                CarrierFamily::SupPreserving => classify(&f)?.sup_preserving,
                CarrierFamily::MeetPreserving => classify(&f)?.meet_preserving,
            };
            if keep {
                carrier.push(f);
            }
        }
        let label = format!("{}({})", family.as_str(), op.as_str());
        MapAlgebra::from_carrier(label, op.as_str().to_string(), l, ctx, op, carrier, limits)
    }

    pub fn from_carrier(
        label: String,
        op_label: String,
        l: &Arc<Lattice>,
        ctx: Option<&WedgeCtx>,
        op: OpKind,
        carrier: Vec<MonotoneMap>,
        limits: &Limits,
    ) -> Result<MapAlgebra> {
        let m = carrier.len();
        if m.saturating_mul(m) > limits.op_table {
            return Err(Error::SizeLimitExceeded {
                what: format!("operation table for {m} maps"),
                limit: limits.op_table,
                needed: m.saturating_mul(m),
            });
        }
        let mut index = HashMap::with_capacity(m);
        for (i, f) in carrier.iter().enumerate() {
            if index.insert(f.image_raw().to_vec(), i as u32).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate map in carrier {label}"
                )));
            }
        }
        let mut table = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                let composed = apply_op(op, ctx, &carrier[i], &carrier[j])?;
                let idx = index.get(composed.image_raw()).copied().ok_or_else(|| {
                    Error::InvalidInput(format!("operation left the carrier {label}"))
                })?;
                table[i * m + j] = idx;
            }
        }
        Ok(MapAlgebra {
            label,
            lattice: l.clone(),
            op_label,
            carrier,
            index,
            table,
        })
    }

    /// The algebra of fixed points of a verified nucleus, with operation
    /// `(x, y) -> j(x * y)`.
    pub fn quotient(base: &MapAlgebra, j: &[u32], j_label: &str) -> Result<MapAlgebra> {
        match check_nucleus(base, j, j_label)? {
            LawOutcome::Pass => {}
            LawOutcome::Fail(cx) => return Err(Error::NucleusNotVerified(cx.to_string())),
        }
        let m = base.len();
        let fixed: Vec<usize> = (0..m).filter(|&i| j[i] as usize == i).collect();
        let mut pos = vec![u32::MAX; m];
        for (a, &i) in fixed.iter().enumerate() {
            pos[i] = a as u32;
        }
        let q = fixed.len();
        let carrier: Vec<MonotoneMap> = fixed.iter().map(|&i| base.carrier[i].clone()).collect();
        let mut index = HashMap::with_capacity(q);
        for (a, f) in carrier.iter().enumerate() {
            index.insert(f.image_raw().to_vec(), a as u32);
        }
        let mut table = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                let i = base.op_idx(fixed[a], fixed[b]);
                table[a * q + b] = pos[j[i] as usize];
            }
        }
        Ok(MapAlgebra {
            label: format!("quotient-{}({})", base.op_label, j_label),
            lattice: base.lattice.clone(),
            op_label: format!("{}/{}", base.op_label, j_label),
            carrier,
            index,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn op_label(&self) -> &str {
        &self.op_label
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn carrier(&self) -> &[MonotoneMap] {
        &self.carrier
    }

    pub fn map(&self, i: usize) -> &MonotoneMap {
        &self.carrier[i]
    }

    #[inline]
    pub fn op_idx(&self, i: usize, j: usize) -> usize {
        self.table[i * self.carrier.len() + j] as usize
    }

    pub fn index_of(&self, f: &MonotoneMap) -> Option<usize> {
        if !same_lattice(f.dom(), &self.lattice) || !same_lattice(f.cod(), &self.lattice) {
            return None;
        }
        self.index.get(f.image_raw()).map(|&i| i as usize)
    }

    fn pointwise_join_of(&self, members: &[usize]) -> MonotoneMap {
        pointwise_join(
            &self.lattice,
            &self.lattice,
            members.iter().map(|&i| &self.carrier[i]),
        )
        .expect("carrier maps share the algebra's lattice")
    }

    fn pointwise_meet_of(&self, members: &[usize]) -> MonotoneMap {
        pointwise_meet(
            &self.lattice,
            &self.lattice,
            members.iter().map(|&i| &self.carrier[i]),
        )
        .expect("carrier maps share the algebra's lattice")
    }

    /// Least carrier element above the pointwise join; equals the pointwise
    /// join itself whenever the carrier contains it.
    pub fn join_in(&self, members: &[usize]) -> Option<usize> {
        let target = self.pointwise_join_of(members);
        if let Some(i) = self.index_of(&target) {
            return Some(i);
        }
        let ups: Vec<usize> = (0..self.len())
            .filter(|&c| target.pointwise_leq(&self.carrier[c]))
            .collect();
        ups.iter().copied().find(|&c| {
            ups.iter()
                .all(|&d| self.carrier[c].pointwise_leq(&self.carrier[d]))
        })
    }

    /// Greatest carrier element below the pointwise meet.
    pub fn meet_in(&self, members: &[usize]) -> Option<usize> {
        let target = self.pointwise_meet_of(members);
        if let Some(i) = self.index_of(&target) {
            return Some(i);
        }
        let downs: Vec<usize> = (0..self.len())
            .filter(|&c| self.carrier[c].pointwise_leq(&target))
            .collect();
        downs.iter().copied().find(|&c| {
            downs
                .iter()
                .all(|&d| self.carrier[d].pointwise_leq(&self.carrier[c]))
        })
    }

    fn cx(
        &self,
        law: &str,
        relation: Relation,
        witnesses: Vec<Witness>,
        lhs: Value,
        rhs: Value,
    ) -> LawOutcome {
        LawOutcome::Fail(Box::new(Counterexample {
            law: law.to_string(),
            relation,
            op: Some(self.op_label.clone()),
            construction: Some(self.label.clone()),
            witnesses,
            lhs,
            rhs,
        }))
    }
}

#[derive(Clone, Debug)]
pub enum LawOutcome {
    Pass,
    Fail(Box<Counterexample>),
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, LawOutcome::Pass)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            LawOutcome::Pass => None,
            LawOutcome::Fail(cx) => Some(cx),
        }
    }
}

/// Families of carrier indices scanned by the closure and distributivity
/// checks: every subset up to the exhaustive cap, otherwise the empty family,
/// all singletons and pairs, then a fixed-seed pseudo-random tail.
pub(crate) fn family_indices(m: usize, limits: &Limits) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m <= limits.exhaustive_family_carrier {
        for mask in 0u64..(1u64 << m) {
            out.push((0..m).filter(|i| mask >> i & 1 == 1).collect());
        }
        return out;
    }
    out.push(Vec::new());
    for i in 0..m {
        out.push(vec![i]);
    }
    for i in 0..m {
        for j in i + 1..m {
            out.push(vec![i, j]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FAMILY_SEED);
    for _ in 0..limits.sampled_families {
        let size = rng.gen_range(3..=8usize).min(m);
        let mut fam: Vec<usize> = (0..size).map(|_| rng.gen_range(0..m)).collect();
        fam.sort_unstable();
        fam.dedup();
        out.push(fam);
    }
    out
}

fn family_value(alg: &MapAlgebra, members: &[usize]) -> Value {
    Value::MapFamily {
        maps: members.iter().map(|&i| alg.map(i).to_value()).collect(),
    }
}

/// `(x * y) * z == x * (y * z)` over the whole table.
pub fn check_associativity(alg: &MapAlgebra, limits: &Limits) -> Result<LawOutcome> {
    let m = alg.len();
    if (m as u64).pow(3) > limits.triples {
        return Err(Error::SizeLimitExceeded {
            what: format!("associativity scan over {m} maps"),
            limit: limits.triples as usize,
            needed: (m as u64).pow(3) as usize,
        });
    }
    let first = (0..m)
        .into_par_iter()
        .filter_map(|i| {
            for j in 0..m {
                let ij = alg.op_idx(i, j);
                for k in 0..m {
                    if alg.op_idx(ij, k) != alg.op_idx(i, alg.op_idx(j, k)) {
                        return Some((i, j, k));
                    }
                }
            }
            None
        })
        .min();
    Ok(match first {
        None => LawOutcome::Pass,
        Some((i, j, k)) => {
            let lhs = alg.map(alg.op_idx(alg.op_idx(i, j), k)).to_value();
            let rhs = alg.map(alg.op_idx(i, alg.op_idx(j, k))).to_value();
            alg.cx(
                "associativity",
                Relation::Eq,
                vec![
                    Witness::new("x", alg.map(i).to_value()),
                    Witness::new("y", alg.map(j).to_value()),
                    Witness::new("z", alg.map(k).to_value()),
                ],
                lhs,
                rhs,
            )
        }
    })
}

pub fn check_left_unit(alg: &MapAlgebra, u: usize) -> LawOutcome {
    for f in 0..alg.len() {
        if alg.op_idx(u, f) != f {
            return alg.cx(
                "left-unit",
                Relation::Eq,
                vec![
                    Witness::new("e", alg.map(u).to_value()),
                    Witness::new("f", alg.map(f).to_value()),
                ],
                alg.map(alg.op_idx(u, f)).to_value(),
                alg.map(f).to_value(),
            );
        }
    }
    LawOutcome::Pass
}

pub fn check_right_unit(alg: &MapAlgebra, u: usize) -> LawOutcome {
    for f in 0..alg.len() {
        if alg.op_idx(f, u) != f {
            return alg.cx(
                "right-unit",
                Relation::Eq,
                vec![
                    Witness::new("e", alg.map(u).to_value()),
                    Witness::new("f", alg.map(f).to_value()),
                ],
                alg.map(alg.op_idx(f, u)).to_value(),
                alg.map(f).to_value(),
            );
        }
    }
    LawOutcome::Pass
}

#[derive(Clone, Debug, Default)]
pub struct UnitSearch {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

pub fn find_units(alg: &MapAlgebra) -> UnitSearch {
    let mut out = UnitSearch::default();
    for u in 0..alg.len() {
        if check_left_unit(alg, u).passed() {
            out.left.push(u);
        }
        if check_right_unit(alg, u).passed() {
            out.right.push(u);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    /// The pointwise join/meet itself must belong to the carrier.
    Pointwise,
    /// A least upper bound / greatest lower bound within the carrier must
    /// exist (the right notion for quotient carriers).
    Least,
}

pub fn check_join_closure(
    alg: &MapAlgebra,
    kind: ClosureKind,
    limits: &Limits,
) -> Result<LawOutcome> {
    for fam in family_indices(alg.len(), limits) {
        let target = alg.pointwise_join_of(&fam);
        let ok = match kind {
            ClosureKind::Pointwise => alg.index_of(&target).is_some(),
            ClosureKind::Least => alg.join_in(&fam).is_some(),
        };
        if !ok {
            return Ok(alg.cx(
                "join-closure",
                Relation::Eq,
                vec![
                    Witness::new("family", family_value(alg, &fam)),
                    Witness::new("join", target.to_value()),
                ],
                Value::bool(false),
                Value::bool(true),
            ));
        }
    }
    Ok(LawOutcome::Pass)
}

pub fn check_meet_closure(
    alg: &MapAlgebra,
    kind: ClosureKind,
    limits: &Limits,
) -> Result<LawOutcome> {
    for fam in family_indices(alg.len(), limits) {
        let target = alg.pointwise_meet_of(&fam);
        let ok = match kind {
            ClosureKind::Pointwise => alg.index_of(&target).is_some(),
            ClosureKind::Least => alg.meet_in(&fam).is_some(),
        };
        if !ok {
            return Ok(alg.cx(
                "meet-closure",
                Relation::Eq,
                vec![
                    Witness::new("family", family_value(alg, &fam)),
                    Witness::new("meet", target.to_value()),
                ],
                Value::bool(false),
                Value::bool(true),
            ));
        }
    }
    Ok(LawOutcome::Pass)
}

/// `x * join(F) == join{x * f}` and `join(F) * x == join{f * x}`, joins taken
/// inside the carrier. Families with no carrier join are the closure check's
/// business and are skipped here.
pub fn check_sup_distributivity(alg: &MapAlgebra, limits: &Limits) -> Result<LawOutcome> {
    for fam in family_indices(alg.len(), limits) {
        let jf = match alg.join_in(&fam) {
            Some(i) => i,
            None => continue,
        };
        for x in 0..alg.len() {
            let left_ops: Vec<usize> = fam.iter().map(|&f| alg.op_idx(x, f)).collect();
            let lhs = alg.op_idx(x, jf);
            let rhs = alg.join_in(&left_ops);
            if rhs != Some(lhs) {
                let rhs_value = match rhs {
                    Some(r) => alg.map(r).to_value(),
                    None => Value::bool(false),
                };
                return Ok(alg.cx(
                    "sup-distributivity-left",
                    Relation::Eq,
                    vec![
                        Witness::new("x", alg.map(x).to_value()),
                        Witness::new("family", family_value(alg, &fam)),
                    ],
                    alg.map(lhs).to_value(),
                    rhs_value,
                ));
            }
            let right_ops: Vec<usize> = fam.iter().map(|&f| alg.op_idx(f, x)).collect();
            let lhs = alg.op_idx(jf, x);
            let rhs = alg.join_in(&right_ops);
            if rhs != Some(lhs) {
                let rhs_value = match rhs {
                    Some(r) => alg.map(r).to_value(),
                    None => Value::bool(false),
                };
                return Ok(alg.cx(
                    "sup-distributivity-right",
                    Relation::Eq,
                    vec![
                        Witness::new("x", alg.map(x).to_value()),
                        Witness::new("family", family_value(alg, &fam)),
                    ],
                    alg.map(lhs).to_value(),
                    rhs_value,
                ));
            }
        }
    }
    Ok(LawOutcome::Pass)
}

/// Dual law over carrier meets.
pub fn check_inf_distributivity(alg: &MapAlgebra, limits: &Limits) -> Result<LawOutcome> {
    for fam in family_indices(alg.len(), limits) {
        let mf = match alg.meet_in(&fam) {
            Some(i) => i,
            None => continue,
        };
        for x in 0..alg.len() {
            let left_ops: Vec<usize> = fam.iter().map(|&f| alg.op_idx(x, f)).collect();
            let lhs = alg.op_idx(x, mf);
            let rhs = alg.meet_in(&left_ops);
            if rhs != Some(lhs) {
                let rhs_value = match rhs {
                    Some(r) => alg.map(r).to_value(),
                    None => Value::bool(false),
                };
                return Ok(alg.cx(
                    "inf-distributivity-left",
                    Relation::Eq,
                    vec![
                        Witness::new("x", alg.map(x).to_value()),
                        Witness::new("family", family_value(alg, &fam)),
                    ],
                    alg.map(lhs).to_value(),
                    rhs_value,
                ));
            }
            let right_ops: Vec<usize> = fam.iter().map(|&f| alg.op_idx(f, x)).collect();
            let lhs = alg.op_idx(mf, x);
            let rhs = alg.meet_in(&right_ops);
            if rhs != Some(lhs) {
                let rhs_value = match rhs {
                    Some(r) => alg.map(r).to_value(),
                    None => Value::bool(false),
                };
                return Ok(alg.cx(
                    "inf-distributivity-right",
                    Relation::Eq,
                    vec![
                        Witness::new("x", alg.map(x).to_value()),
                        Witness::new("family", family_value(alg, &fam)),
                    ],
                    alg.map(lhs).to_value(),
                    rhs_value,
                ));
            }
        }
    }
    Ok(LawOutcome::Pass)
}

/// `sub` sits inside `sup`: member maps belong to `sup`, operations agree,
/// and `sub` is closed under pointwise joins of its own families.
pub fn check_subalgebra(sub: &MapAlgebra, sup: &MapAlgebra, limits: &Limits) -> Result<LawOutcome> {
    let construction = format!("{} <= {}", sub.label(), sup.label());
    let fail = |law: &str, witnesses, lhs, rhs| {
        Ok(LawOutcome::Fail(Box::new(Counterexample {
            law: law.to_string(),
            relation: Relation::Eq,
            op: Some(sup.op_label().to_string()),
            construction: Some(construction.clone()),
            witnesses,
            lhs,
            rhs,
        })))
    };
    let mut sup_idx = Vec::with_capacity(sub.len());
    for i in 0..sub.len() {
        match sup.index_of(sub.map(i)) {
            Some(s) => sup_idx.push(s),
            None => {
                return fail(
                    "subalgebra-membership",
                    vec![Witness::new("f", sub.map(i).to_value())],
                    Value::bool(false),
                    Value::bool(true),
                )
            }
        }
    }
    for i in 0..sub.len() {
        for j in 0..sub.len() {
            let inner = sub.map(sub.op_idx(i, j));
            let outer = sup.map(sup.op_idx(sup_idx[i], sup_idx[j]));
            if inner != outer {
                return fail(
                    "subalgebra-op",
                    vec![
                        Witness::new("g", sub.map(i).to_value()),
                        Witness::new("f", sub.map(j).to_value()),
                    ],
                    inner.to_value(),
                    outer.to_value(),
                );
            }
        }
    }
    for fam in family_indices(sub.len(), limits) {
        let target = sub.pointwise_join_of(&fam);
        if sub.index_of(&target).is_none() {
            return fail(
                "join-closure",
                vec![
                    Witness::new("family", family_value(sub, &fam)),
                    Witness::new("join", target.to_value()),
                ],
                Value::bool(false),
                Value::bool(true),
            );
        }
    }
    Ok(LawOutcome::Pass)
}

/// Nucleus laws for a closure operator given as a table over the carrier:
/// inflationary, monotone, idempotent, and `j(x) * j(y) <= j(x * y)`.
pub fn check_nucleus(base: &MapAlgebra, j: &[u32], j_label: &str) -> Result<LawOutcome> {
    let m = base.len();
    if j.len() != m {
        return Err(Error::InvalidInput(format!(
            "nucleus table has {} entries for a {m}-map carrier",
            j.len()
        )));
    }
    let construction = format!("nucleus:{}@{}", j_label, base.label());
    let fail = |law: &str, relation, witnesses, lhs: &MonotoneMap, rhs: &MonotoneMap| {
        Ok(LawOutcome::Fail(Box::new(Counterexample {
            law: law.to_string(),
            relation,
            op: Some(base.op_label().to_string()),
            construction: Some(construction.clone()),
            witnesses,
            lhs: lhs.to_value(),
            rhs: rhs.to_value(),
        })))
    };
    for i in 0..m {
        if !base.map(i).pointwise_leq(base.map(j[i] as usize)) {
            return fail(
                "nucleus-inflationary",
                Relation::Leq,
                vec![Witness::new("x", base.map(i).to_value())],
                base.map(i),
                base.map(j[i] as usize),
            );
        }
        if j[j[i] as usize] != j[i] {
            return fail(
                "nucleus-idempotent",
                Relation::Eq,
                vec![Witness::new("x", base.map(i).to_value())],
                base.map(j[j[i] as usize] as usize),
                base.map(j[i] as usize),
            );
        }
    }
    for i in 0..m {
        for k in 0..m {
            if base.map(i).pointwise_leq(base.map(k))
                && !base
                    .map(j[i] as usize)
                    .pointwise_leq(base.map(j[k] as usize))
            {
                return fail(
                    "nucleus-monotone",
                    Relation::Leq,
                    vec![
                        Witness::new("x", base.map(i).to_value()),
                        Witness::new("y", base.map(k).to_value()),
                    ],
                    base.map(j[i] as usize),
                    base.map(j[k] as usize),
                );
            }
            let lhs = base.op_idx(j[i] as usize, j[k] as usize);
            let rhs = j[base.op_idx(i, k)] as usize;
            if !base.map(lhs).pointwise_leq(base.map(rhs)) {
                return fail(
                    "nucleus-submultiplicative",
                    Relation::Leq,
                    vec![
                        Witness::new("x", base.map(i).to_value()),
                        Witness::new("y", base.map(k).to_value()),
                    ],
                    base.map(lhs),
                    base.map(rhs),
                );
            }
        }
    }
    Ok(LawOutcome::Pass)
}

/// Index of `psi` applied to each carrier map.
pub fn psi_table(alg: &MapAlgebra, ctx: &WedgeCtx) -> Result<Vec<u32>> {
    (0..alg.len())
        .map(|i| {
            let p = psi(alg.map(i), &ctx.wedge)?;
            alg.index_of(&p)
                .map(|x| x as u32)
                .ok_or_else(|| Error::InvalidInput("projection left the carrier".into()))
        })
        .collect()
}

pub fn phi_table(alg: &MapAlgebra, ctx: &WedgeCtx) -> Result<Vec<u32>> {
    (0..alg.len())
        .map(|i| {
            let p = phi(alg.map(i), &ctx.co)?;
            alg.index_of(&p)
                .map(|x| x as u32)
                .ok_or_else(|| Error::InvalidInput("projection left the carrier".into()))
        })
        .collect()
}

/// Right adjoint of the sup-projection: `kstar(s) = join { g : psi(g) <= s }`
/// (pointwise join; the full carrier contains it).
pub fn kstar_table(alg: &MapAlgebra, psi_t: &[u32]) -> Result<Vec<u32>> {
    (0..alg.len())
        .map(|s| {
            let fiber: Vec<&MonotoneMap> = (0..alg.len())
                .filter(|&g| alg.map(psi_t[g] as usize).pointwise_leq(alg.map(s)))
                .map(|g| alg.map(g))
                .collect();
            let join = pointwise_join(alg.lattice(), alg.lattice(), fiber)?;
            alg.index_of(&join)
                .map(|x| x as u32)
                .ok_or_else(|| Error::InvalidInput("adjoint left the carrier".into()))
        })
        .collect()
}

/// `j = kstar . psi` as a table.
pub fn compose_tables(outer: &[u32], inner: &[u32]) -> Vec<u32> {
    inner.iter().map(|&i| outer[i as usize]).collect()
}

/// Galois adjunction between the projection and its right adjoint:
/// `psi(f) <= s  iff  f <= kstar(s)`, with `s` ranging over `s_indices`.
pub fn check_adjunction(
    alg: &MapAlgebra,
    psi_t: &[u32],
    kstar_t: &[u32],
    s_indices: &[usize],
) -> LawOutcome {
    for (f, &pf) in psi_t.iter().enumerate() {
        for &s in s_indices {
            let lhs = alg.map(pf as usize).pointwise_leq(alg.map(s));
            let rhs = alg.map(f).pointwise_leq(alg.map(kstar_t[s] as usize));
            if lhs != rhs {
                return alg.cx(
                    "psi-adjunction",
                    Relation::Eq,
                    vec![
                        Witness::new("f", alg.map(f).to_value()),
                        Witness::new("s", alg.map(s).to_value()),
                    ],
                    Value::bool(lhs),
                    Value::bool(rhs),
                );
            }
        }
    }
    LawOutcome::Pass
}

fn sampled_cx(
    law: &str,
    op: Option<&str>,
    relation: Relation,
    witnesses: Vec<Witness>,
    lhs: Value,
    rhs: Value,
) -> LawOutcome {
    LawOutcome::Fail(Box::new(Counterexample {
        law: law.to_string(),
        relation,
        op: op.map(str::to_string),
        construction: None,
        witnesses,
        lhs,
        rhs,
    }))
}

/// Associativity on random triples; no carrier enumeration involved.
pub fn sampled_associativity(
    l: &Arc<Lattice>,
    ctx: Option<&WedgeCtx>,
    op: OpKind,
    seed: u64,
    count: usize,
) -> Result<LawOutcome> {
    let sampler = Sampler::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let x = sampler.draw(&mut rng);
        let y = sampler.draw(&mut rng);
        let z = sampler.draw(&mut rng);
        let lhs = apply_op(op, ctx, &apply_op(op, ctx, &x, &y)?, &z)?;
        let rhs = apply_op(op, ctx, &x, &apply_op(op, ctx, &y, &z)?)?;
        if lhs != rhs {
            return Ok(sampled_cx(
                "associativity",
                Some(op.as_str()),
                Relation::Eq,
                vec![
                    Witness::new("x", x.to_value()),
                    Witness::new("y", y.to_value()),
                    Witness::new("z", z.to_value()),
                ],
                lhs.to_value(),
                rhs.to_value(),
            ));
        }
    }
    Ok(LawOutcome::Pass)
}

/// Distributivity on random map + family draws, joins and meets pointwise
/// (the full monotone carrier is closed under both).
pub fn sampled_distributivity(
    l: &Arc<Lattice>,
    ctx: Option<&WedgeCtx>,
    op: OpKind,
    sup_side: bool,
    seed: u64,
    count: usize,
) -> Result<LawOutcome> {
    let sampler = Sampler::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let law = if sup_side {
        ("sup-distributivity-left", "sup-distributivity-right")
    } else {
        ("inf-distributivity-left", "inf-distributivity-right")
    };
    for _ in 0..count {
        let x = sampler.draw(&mut rng);
        let size = rng.gen_range(0..=4usize);
        let fam: Vec<MonotoneMap> = (0..size).map(|_| sampler.draw(&mut rng)).collect();
        let bound = if sup_side {
            pointwise_join(l, l, fam.iter())?
        } else {
            pointwise_meet(l, l, fam.iter())?
        };
        let fam_value = Value::MapFamily {
            maps: fam.iter().map(MonotoneMap::to_value).collect(),
        };

        let lhs = apply_op(op, ctx, &x, &bound)?;
        let parts: Vec<MonotoneMap> = fam
            .iter()
            .map(|f| apply_op(op, ctx, &x, f))
            .collect::<Result<_>>()?;
        let rhs = if sup_side {
            pointwise_join(l, l, parts.iter())?
        } else {
            pointwise_meet(l, l, parts.iter())?
        };
        if lhs != rhs {
            return Ok(sampled_cx(
                law.0,
                Some(op.as_str()),
                Relation::Eq,
                vec![
                    Witness::new("x", x.to_value()),
                    Witness::new("family", fam_value),
                ],
                lhs.to_value(),
                rhs.to_value(),
            ));
        }

        let lhs = apply_op(op, ctx, &bound, &x)?;
        let parts: Vec<MonotoneMap> = fam
            .iter()
            .map(|f| apply_op(op, ctx, f, &x))
            .collect::<Result<_>>()?;
        let rhs = if sup_side {
            pointwise_join(l, l, parts.iter())?
        } else {
            pointwise_meet(l, l, parts.iter())?
        };
        if lhs != rhs {
            return Ok(sampled_cx(
                law.1,
                Some(op.as_str()),
                Relation::Eq,
                vec![
                    Witness::new("x", x.to_value()),
                    Witness::new(
                        "family",
                        Value::MapFamily {
                            maps: fam.iter().map(MonotoneMap::to_value).collect(),
                        },
                    ),
                ],
                lhs.to_value(),
                rhs.to_value(),
            ));
        }
    }
    Ok(LawOutcome::Pass)
}

pub fn sampled_left_unit(
    l: &Arc<Lattice>,
    ctx: Option<&WedgeCtx>,
    op: OpKind,
    unit: &MonotoneMap,
    seed: u64,
    count: usize,
) -> Result<LawOutcome> {
    let sampler = Sampler::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let f = sampler.draw(&mut rng);
        let lhs = apply_op(op, ctx, unit, &f)?;
        if lhs != f {
            return Ok(sampled_cx(
                "left-unit",
                Some(op.as_str()),
                Relation::Eq,
                vec![
                    Witness::new("e", unit.to_value()),
                    Witness::new("f", f.to_value()),
                ],
                lhs.to_value(),
                f.to_value(),
            ));
        }
    }
    Ok(LawOutcome::Pass)
}

pub fn sampled_right_unit(
    l: &Arc<Lattice>,
    ctx: Option<&WedgeCtx>,
    op: OpKind,
    unit: &MonotoneMap,
    seed: u64,
    count: usize,
) -> Result<LawOutcome> {
    let sampler = Sampler::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let f = sampler.draw(&mut rng);
        let lhs = apply_op(op, ctx, &f, unit)?;
        if lhs != f {
            return Ok(sampled_cx(
                "right-unit",
                Some(op.as_str()),
                Relation::Eq,
                vec![
                    Witness::new("e", unit.to_value()),
                    Witness::new("f", f.to_value()),
                ],
                lhs.to_value(),
                f.to_value(),
            ));
        }
    }
    Ok(LawOutcome::Pass)
}

/// `g . f <= g o f <= g * f` pointwise on random pairs.
pub fn sampled_sandwich(
    l: &Arc<Lattice>,
    ctx: &WedgeCtx,
    seed: u64,
    count: usize,
) -> Result<LawOutcome> {
    let sampler = Sampler::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let g = sampler.draw(&mut rng);
        let f = sampler.draw(&mut rng);
        let dot = compose_dot(&g, &f, &ctx.wedge)?;
        let circ = compose(&g, &f)?;
        let bullet = compose_bullet(&g, &f, &ctx.co)?;
        if !dot.pointwise_leq(&circ) {
            return Ok(sampled_cx(
                "sandwich-dot-below-circ",
                None,
                Relation::Leq,
                vec![
                    Witness::new("g", g.to_value()),
                    Witness::new("f", f.to_value()),
                ],
                dot.to_value(),
                circ.to_value(),
            ));
        }
        if !circ.pointwise_leq(&bullet) {
            return Ok(sampled_cx(
                "sandwich-circ-below-bullet",
                None,
                Relation::Leq,
                vec![
                    Witness::new("g", g.to_value()),
                    Witness::new("f", f.to_value()),
                ],
                circ.to_value(),
                bullet.to_value(),
            ));
        }
    }
    Ok(LawOutcome::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(l: Lattice) -> Arc<Lattice> {
        Arc::new(l)
    }

    fn ctx_of(l: &Arc<Lattice>) -> WedgeCtx {
        WedgeCtx::new(l, &Limits::default()).unwrap()
    }

    fn all_dot(l: &Arc<Lattice>) -> (WedgeCtx, MapAlgebra) {
        let ctx = ctx_of(l);
        let alg = MapAlgebra::enumerated(
            l,
            Some(&ctx),
            OpKind::Dot,
            CarrierFamily::All,
            &Limits::default(),
        )
        .unwrap();
        (ctx, alg)
    }

    #[test]
    fn boolean_two_dot_algebra_shape() {
        let l = arc(Lattice::boolean(2).unwrap());
        let (_, alg) = all_dot(&l);
        assert_eq!(alg.len(), 36);
        assert!(check_associativity(&alg, &Limits::default())
            .unwrap()
            .passed());
        assert!(
            check_join_closure(&alg, ClosureKind::Pointwise, &Limits::default())
                .unwrap()
                .passed()
        );
        assert!(check_sup_distributivity(&alg, &Limits::default())
            .unwrap()
            .passed());
    }

    #[test]
    fn dot_unit_is_left_only() {
        let l = arc(Lattice::boolean(2).unwrap());
        let (_, alg) = all_dot(&l);
        let id = MonotoneMap::identity(&l);
        let u = alg.index_of(&id).unwrap();
        assert!(check_left_unit(&alg, u).passed());
        let out = check_right_unit(&alg, u);
        let cx = out
            .counterexample()
            .expect("f . id collapses to the projection");
        // Lexicographically first map that the projection moves.
        assert_eq!(
            cx.witness("f"),
            Some(&Value::Map {
                dom: "boolean(2)".into(),
                cod: "boolean(2)".into(),
                image: vec![0, 0, 0, 1]
            })
        );
        let units = find_units(&alg);
        assert_eq!(units.left, vec![u]);
        assert!(units.right.is_empty());
    }

    #[test]
    fn sup_circ_is_a_unital_quantale() {
        let l = arc(Lattice::boolean(2).unwrap());
        let alg = MapAlgebra::enumerated(
            &l,
            None,
            OpKind::Circ,
            CarrierFamily::SupPreserving,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(alg.len(), 16);
        assert!(check_associativity(&alg, &Limits::default())
            .unwrap()
            .passed());
        assert!(
            check_join_closure(&alg, ClosureKind::Pointwise, &Limits::default())
                .unwrap()
                .passed()
        );
        assert!(check_sup_distributivity(&alg, &Limits::default())
            .unwrap()
            .passed());
        let id = alg.index_of(&MonotoneMap::identity(&l)).unwrap();
        assert!(check_left_unit(&alg, id).passed());
        assert!(check_right_unit(&alg, id).passed());
    }

    #[test]
    fn circ_breaks_sup_distributivity_on_the_left() {
        let l = arc(Lattice::chain(2).unwrap());
        let alg = MapAlgebra::enumerated(
            &l,
            None,
            OpKind::Circ,
            CarrierFamily::All,
            &Limits::default(),
        )
        .unwrap();
        let out = check_sup_distributivity(&alg, &Limits::default()).unwrap();
        let cx = out
            .counterexample()
            .expect("plain composition is no quantale");
        assert_eq!(cx.law, "sup-distributivity-left");
        // First witness: the constant-top map against the empty family.
        assert_eq!(
            cx.witness("x"),
            Some(&Value::Map {
                dom: "chain(2)".into(),
                cod: "chain(2)".into(),
                image: vec![1, 1]
            })
        );
        assert_eq!(
            cx.witness("family"),
            Some(&Value::MapFamily { maps: vec![] })
        );

        let out = check_inf_distributivity(&alg, &Limits::default()).unwrap();
        let cx = out.counterexample().unwrap();
        assert_eq!(cx.law, "inf-distributivity-left");
        assert_eq!(
            cx.witness("x"),
            Some(&Value::Map {
                dom: "chain(2)".into(),
                cod: "chain(2)".into(),
                image: vec![0, 0]
            })
        );
    }

    #[test]
    fn nucleus_and_quotient_on_chain_two() {
        let l = arc(Lattice::chain(2).unwrap());
        let (ctx, alg) = all_dot(&l);
        let psi_t = psi_table(&alg, &ctx).unwrap();
        let kstar_t = kstar_table(&alg, &psi_t).unwrap();
        let j = compose_tables(&kstar_t, &psi_t);
        assert!(check_nucleus(&alg, &j, "psi-adjoint").unwrap().passed());
        let q = MapAlgebra::quotient(&alg, &j, "psi-adjoint").unwrap();
        // Fixed points correspond to the sup-preserving maps.
        assert_eq!(q.len(), 2);
        assert!(check_associativity(&q, &Limits::default())
            .unwrap()
            .passed());
        assert!(
            check_join_closure(&q, ClosureKind::Least, &Limits::default())
                .unwrap()
                .passed()
        );
        assert!(check_sup_distributivity(&q, &Limits::default())
            .unwrap()
            .passed());

        let s = (0..alg.len())
            .filter(|&i| psi_t[i] as usize == i)
            .collect::<Vec<_>>();
        assert!(check_adjunction(&alg, &psi_t, &kstar_t, &s).passed());
    }

    #[test]
    fn meet_maps_are_not_a_dot_subquantale() {
        let l = arc(Lattice::chain(2).unwrap());
        let (ctx, alg) = all_dot(&l);
        let sub = MapAlgebra::enumerated(
            &l,
            Some(&ctx),
            OpKind::Circ,
            CarrierFamily::MeetPreserving,
            &Limits::default(),
        )
        .unwrap();
        let out = check_subalgebra(&sub, &alg, &Limits::default()).unwrap();
        let cx = out.counterexample().expect("meet maps lack the bottom");
        // The empty family's join (constant bottom) is not meet-preserving,
        // but the op mismatch on a pair comes first in the scan order.
        assert!(cx.law == "subalgebra-op" || cx.law == "join-closure");
    }

    #[test]
    fn broken_nucleus_is_rejected() {
        let l = arc(Lattice::chain(2).unwrap());
        let (_, alg) = all_dot(&l);
        // Constant table collapsing everything to index 0 is not inflationary.
        let j = vec![0u32; alg.len()];
        let out = check_nucleus(&alg, &j, "collapse").unwrap();
        assert!(!out.passed());
        assert!(matches!(
            MapAlgebra::quotient(&alg, &j, "collapse"),
            Err(Error::NucleusNotVerified(_))
        ));
    }

    #[test]
    fn family_scan_is_exhaustive_when_small() {
        let limits = Limits::default();
        assert_eq!(family_indices(3, &limits).len(), 8);
        assert_eq!(family_indices(0, &limits).len(), 1);
        let big = family_indices(20, &limits);
        assert_eq!(big[0], Vec::<usize>::new());
        assert_eq!(big.len(), 1 + 20 + 190 + limits.sampled_families);
        // Deterministic across calls.
        assert_eq!(big, family_indices(20, &limits));
    }

    #[test]
    fn sampled_checks_pass_on_distributive_base() {
        let l = arc(Lattice::boolean(2).unwrap());
        let ctx = ctx_of(&l);
        assert!(sampled_associativity(&l, Some(&ctx), OpKind::Dot, 11, 200)
            .unwrap()
            .passed());
        assert!(
            sampled_distributivity(&l, Some(&ctx), OpKind::Dot, true, 12, 200)
                .unwrap()
                .passed()
        );
        assert!(
            sampled_distributivity(&l, Some(&ctx), OpKind::Bullet, false, 13, 200)
                .unwrap()
                .passed()
        );
        assert!(sampled_sandwich(&l, &ctx, 14, 200).unwrap().passed());
        let id = MonotoneMap::identity(&l);
        assert!(sampled_left_unit(&l, None, OpKind::Circ, &id, 15, 200)
            .unwrap()
            .passed());
        assert!(sampled_right_unit(&l, None, OpKind::Circ, &id, 16, 200)
            .unwrap()
            .passed());
    }

    #[test]
    fn join_in_picks_least_upper_bound() {
        let l = arc(Lattice::chain(3).unwrap());
        let (_, alg) = all_dot(&l);
        // Full carrier: pointwise joins are present.
        let a = alg
            .index_of(&MonotoneMap::new(&l, &l, &[0, 0, 2]).unwrap())
            .unwrap();
        let b = alg
            .index_of(&MonotoneMap::new(&l, &l, &[0, 1, 1]).unwrap())
            .unwrap();
        let j = alg.join_in(&[a, b]).unwrap();
        assert_eq!(alg.map(j).image(), vec![0, 1, 2]);
        let m = alg.meet_in(&[a, b]).unwrap();
        assert_eq!(alg.map(m).image(), vec![0, 0, 1]);
    }
}
