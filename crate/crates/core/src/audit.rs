//! Executable catalog of the numbered claims about the dot and bullet
//! compositions.
//!
//! Each claim has a fixed id (`"Prop 3.7"`), a status, and a runner that
//! decides pass / fail / skipped on a given lattice. Claims with status
//! [`ClaimStatus::Suspect`] are recorded in the expectation that the scan
//! refutes them; their failures carry counterexamples like any other but are
//! not defects. Claims stated for maps between different lattices are
//! additionally instantiated on a fixed heterogeneous family
//! `chain(3) -> boolean(2) -> chain(3) -> chain(2)`, so the endo case is
//! never the only case exercised.
//!
//! Every failure is a [`Counterexample`] that [`replay`] can re-evaluate from
//! scratch: it names the law, the witnesses, and enough construction detail
//! to rebuild the exact instance.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::laws::{self, ClosureKind, LawOutcome, MapAlgebra, OpKind, WedgeCtx};
use crate::limits::Limits;
use crate::maps::{
    classify, compose, compose_bullet, compose_bullet_definitional, compose_dot,
    compose_dot_definitional, enumerate_between, enumerate_endo, phi, phi_definitional,
    pointwise_join, pointwise_meet, psi, psi_definitional, MonotoneMap, Sampler,
};
use crate::wedge::{WedgeDiagnostics, WedgeMethod, WedgeRelation};
use crate::witness::{Counterexample, Relation, Value, Witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

/// How a claim was checked. Lattice-level claims (wedge axioms, closed-form
/// equations) are cheap enough that both modes run them exhaustively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    /// Expected to hold; a failure makes the whole audit fail.
    Theorem,
    /// Expected to be refuted; the verdict is reported but never fatal.
    Suspect,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { counterexample: Box<Counterexample> },
    Skipped { reason: String },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Fail { counterexample } => Some(counterexample),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub lattice: String,
    pub status: ClaimStatus,
    pub mode: Mode,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// One entry of the registry. `run` is the checker; everything else is data.
pub struct Claim {
    pub id: &'static str,
    pub status: ClaimStatus,
    pub title: &'static str,
    run: fn(&AuditEnv) -> Result<Claimed>,
}

#[derive(Clone, Debug)]
pub enum ClaimSelection {
    All,
    Ids(Vec<String>),
}

pub fn claims() -> &'static [Claim] {
    REGISTRY
}

pub fn claim_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

pub fn find_claim(id: &str) -> Option<&'static Claim> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Runs the selected claims in registry order and reports one verdict each.
/// Unknown ids are an input error; duplicates collapse to one run.
pub fn audit(
    l: &Arc<Lattice>,
    selection: &ClaimSelection,
    mode: Mode,
    limits: &Limits,
) -> Result<Vec<ClaimReport>> {
    let wanted: Vec<&Claim> = match selection {
        ClaimSelection::All => REGISTRY.iter().collect(),
        ClaimSelection::Ids(ids) => {
            for id in ids {
                if find_claim(id).is_none() {
                    return Err(Error::InvalidInput(format!("unknown claim id '{id}'")));
                }
            }
            REGISTRY
                .iter()
                .filter(|c| ids.iter().any(|id| id.as_str() == c.id))
                .collect()
        }
    };
    let env = AuditEnv::build(l, mode, limits)?;
    wanted
        .into_iter()
        .map(|c| {
            let out = (c.run)(&env)?;
            Ok(ClaimReport {
                claim_id: c.id.to_string(),
                lattice: l.name().to_string(),
                status: c.status,
                mode,
                verdict: out.verdict,
                note: out.note,
            })
        })
        .collect()
}

/// True when some claim expected to hold did not.
pub fn has_theorem_failure(reports: &[ClaimReport]) -> bool {
    reports
        .iter()
        .any(|r| r.status == ClaimStatus::Theorem && r.verdict.is_fail())
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

use ClaimStatus::{Suspect, Theorem};

static REGISTRY: &[Claim] = &[
    Claim {
        id: "Remark 2.1(1)",
        status: Theorem,
        title: "pointwise joins of sup-preserving families are sup-preserving",
        run: rem_2_1_1,
    },
    Claim {
        id: "Remark 2.1(2)",
        status: Theorem,
        title: "pointwise meets of meet-preserving families are meet-preserving",
        run: rem_2_1_2,
    },
    Claim {
        id: "Remark 2.1(3)",
        status: Theorem,
        title: "composition of sup-preserving maps is sup-preserving",
        run: rem_2_1_3,
    },
    Claim {
        id: "Remark 2.1(4)",
        status: Theorem,
        title: "const-bottom and const-top bound all order-preserving maps",
        run: rem_2_1_4,
    },
    Claim {
        id: "Remark 2.1(5)",
        status: Theorem,
        title: "the step map top-S is greatest among sup-preserving maps",
        run: rem_2_1_5,
    },
    Claim {
        id: "Remark 2.1(6)",
        status: Theorem,
        title: "the step map bottom-M is least among meet-preserving maps",
        run: rem_2_1_6,
    },
    Claim {
        id: "Remark 3.2(1)",
        status: Theorem,
        title: "bottom is wedge-below exactly the other elements",
        run: |env| wedge_item(env, false, "wedge-bounds"),
    },
    Claim {
        id: "Remark 3.2(2)",
        status: Theorem,
        title: "wedge-below is down-closed in its left argument",
        run: |env| wedge_item(env, false, "wedge-down-closed"),
    },
    Claim {
        id: "Remark 3.2(3)",
        status: Theorem,
        title: "wedge-below is up-closed in its right argument",
        run: |env| wedge_item(env, false, "wedge-up-closed"),
    },
    Claim {
        id: "Remark 3.2(4)",
        status: Theorem,
        title: "wedge-below implies leq",
        run: |env| wedge_item(env, false, "wedge-below-order"),
    },
    Claim {
        id: "Remark 3.2(5)",
        status: Theorem,
        title: "wedge-below splits across joins of families",
        run: |env| wedge_item(env, false, "wedge-family-split"),
    },
    Claim {
        id: "Remark 3.3",
        status: Theorem,
        title: "dot lies below circ pointwise",
        run: |env| dot_below_circ(env, None),
    },
    Claim {
        id: "Prop 3.4",
        status: Theorem,
        title: "dot of order-preserving maps is order-preserving",
        run: prop_3_4,
    },
    Claim {
        id: "Remark 3.5(1)",
        status: Theorem,
        title: "dot equals its one-variable form",
        run: rem_3_5_1,
    },
    Claim {
        id: "Remark 3.5(2)",
        status: Theorem,
        title: "dot lies below circ pointwise (restated)",
        run: |env| dot_below_circ(env, Some("restates the same bound; checked independently")),
    },
    Claim {
        id: "Prop 3.6(1)",
        status: Theorem,
        title: "dot with a sup-preserving inner map is sup-preserving",
        run: prop_3_6_1,
    },
    Claim {
        id: "Prop 3.6(2)",
        status: Theorem,
        title: "dot collapses to circ on sup-preserving pairs",
        run: prop_3_6_2,
    },
    Claim {
        id: "Prop 3.7",
        status: Theorem,
        title: "dot is associative",
        run: |env| associativity(env, OpKind::Dot),
    },
    Claim {
        id: "Thm 3.8",
        status: Theorem,
        title: "the dot algebra of all endomaps is a quantale",
        run: thm_3_8,
    },
    Claim {
        id: "Cor 3.9",
        status: Theorem,
        title: "the sup-preserving maps under circ form a subquantale of the dot algebra",
        run: cor_3_9,
    },
    Claim {
        id: "Cor 3.10(1)",
        status: Theorem,
        title: "the identity is a left unit for dot",
        run: cor_3_10_1,
    },
    Claim {
        id: "Cor 3.10(2)",
        status: Theorem,
        title: "const-top absorbs meet-preserving maps with f(0) != 0 under dot",
        run: cor_3_10_2,
    },
    Claim {
        id: "Cor 3.10(3)",
        status: Theorem,
        title: "const-top dot top-S equals top-S",
        run: cor_3_10_3,
    },
    Claim {
        id: "Cor 3.10(4)",
        status: Theorem,
        title: "top-S dot const-top equals const-top",
        run: cor_3_10_4,
    },
    Claim {
        id: "Cor 3.10(5)",
        status: Suspect,
        title: "no step map squares to itself under dot",
        run: cor_3_10_5,
    },
    Claim {
        id: "Example 3.11",
        status: Theorem,
        title: "the identity is not a right unit: const-top dot id is top-S",
        run: ex_3_11,
    },
    Claim {
        id: "Prop 3.12",
        status: Theorem,
        title: "psi lands in the sup-preserving maps",
        run: prop_3_12,
    },
    Claim {
        id: "Cor 3.13(1)",
        status: Theorem,
        title: "psi equals its one-variable form",
        run: cor_3_13_1,
    },
    Claim {
        id: "Cor 3.13(2)",
        status: Theorem,
        title: "psi deflates: psi(f) <= f",
        run: cor_3_13_2,
    },
    Claim {
        id: "Cor 3.13(3)",
        status: Theorem,
        title: "psi fixes the sup-preserving maps",
        run: cor_3_13_3,
    },
    Claim {
        id: "Cor 3.13(4)",
        status: Suspect,
        title: "psi(f) <= g exactly when f <= g",
        run: cor_3_13_4,
    },
    Claim {
        id: "Prop 3.14",
        status: Theorem,
        title: "psi is a surjective homomorphism onto the sup-preserving maps under circ",
        run: prop_3_14,
    },
    Claim {
        id: "Cor 3.15(1)",
        status: Theorem,
        title: "the sup-preserving maps retract off the dot algebra",
        run: cor_3_15_1,
    },
    Claim {
        id: "Cor 3.15(2)",
        status: Theorem,
        title: "homomorphic images of the sup-preserving maps are isomorphic to them",
        run: cor_3_15_2,
    },
    Claim {
        id: "Thm 3.16(i)",
        status: Theorem,
        title: "psi is left adjoint to the fiber-join map kstar",
        run: thm_3_16_i,
    },
    Claim {
        id: "Thm 3.16(ii)",
        status: Theorem,
        title: "psi after kstar is the identity on sup-preserving maps",
        run: thm_3_16_ii,
    },
    Claim {
        id: "Thm 3.16(iii)",
        status: Theorem,
        title: "kstar after psi is a nucleus on the dot algebra",
        run: thm_3_16_iii,
    },
    Claim {
        id: "Thm 3.16",
        status: Theorem,
        title: "the sup-preserving maps are isomorphic to the nucleus quotient of the dot algebra",
        run: thm_3_16,
    },
    Claim {
        id: "Prop 4.2",
        status: Theorem,
        title: "the meet-preserving maps under circ form a co-quantale",
        run: prop_4_2,
    },
    Claim {
        id: "Remark 4.3(1)",
        status: Theorem,
        title: "co-wedge-below implies geq",
        run: |env| wedge_item(env, true, "co-above-order"),
    },
    Claim {
        id: "Remark 4.3(2)",
        status: Theorem,
        title: "co-wedge-below is up-closed in its left argument",
        run: |env| wedge_item(env, true, "co-up-closed"),
    },
    Claim {
        id: "Remark 4.3(3)",
        status: Theorem,
        title: "co-wedge-below is down-closed in its right argument",
        run: |env| wedge_item(env, true, "co-down-closed"),
    },
    Claim {
        id: "Remark 4.3(4)",
        status: Theorem,
        title: "co-wedge-below splits across meets of families",
        run: |env| wedge_item(env, true, "co-family-split"),
    },
    Claim {
        id: "Remark 4.3(5)",
        status: Theorem,
        title: "every element is the meet of the elements co-wedge-below it",
        run: |env| wedge_item(env, true, "co-meet-identity"),
    },
    Claim {
        id: "Prop 4.4",
        status: Theorem,
        title: "bullet of order-preserving maps is order-preserving",
        run: prop_4_4,
    },
    Claim {
        id: "Remark 4.5(1)",
        status: Theorem,
        title: "bullet equals its one-variable form",
        run: rem_4_5_1,
    },
    Claim {
        id: "Remark 4.5(2)",
        status: Theorem,
        title: "circ lies below bullet pointwise",
        run: rem_4_5_2,
    },
    Claim {
        id: "Prop 4.6(1)",
        status: Theorem,
        title: "bullet with a meet-preserving inner map is meet-preserving",
        run: prop_4_6_1,
    },
    Claim {
        id: "Prop 4.6(2)",
        status: Theorem,
        title: "bullet collapses to circ on meet-preserving pairs",
        run: prop_4_6_2,
    },
    Claim {
        id: "Prop 4.6(3)",
        status: Theorem,
        title: "dot lies below bullet pointwise",
        run: prop_4_6_3,
    },
    Claim {
        id: "Prop 4.6(4)",
        status: Theorem,
        title: "bullet equals dot on doubly preserving pairs",
        run: prop_4_6_4,
    },
    Claim {
        id: "Prop 4.7",
        status: Theorem,
        title: "bullet is associative",
        run: |env| associativity(env, OpKind::Bullet),
    },
    Claim {
        id: "Thm 4.8",
        status: Theorem,
        title: "the bullet algebra of all endomaps is a co-quantale",
        run: thm_4_8,
    },
    Claim {
        id: "Prop 4.9",
        status: Theorem,
        title: "phi lands in the meet-preserving maps",
        run: prop_4_9,
    },
    Claim {
        id: "Cor 4.10(1)",
        status: Theorem,
        title: "phi equals its one-variable form",
        run: cor_4_10_1,
    },
    Claim {
        id: "Cor 4.10(2)",
        status: Theorem,
        title: "phi inflates: f <= phi(f)",
        run: cor_4_10_2,
    },
    Claim {
        id: "Cor 4.10(3)",
        status: Theorem,
        title: "phi fixes the meet-preserving maps",
        run: cor_4_10_3,
    },
    Claim {
        id: "Prop 4.12",
        status: Theorem,
        title: "the phi-quotient of the bullet algebra is a co-quantale",
        run: prop_4_12,
    },
    Claim {
        id: "Thm 4.14(i)",
        status: Theorem,
        title: "phi is a nucleus on the bullet algebra",
        run: thm_4_14_i,
    },
    Claim {
        id: "Thm 4.14(ii)",
        status: Theorem,
        title: "the fixed points of phi are exactly the meet-preserving maps",
        run: thm_4_14_ii,
    },
    Claim {
        id: "Thm 4.14",
        status: Theorem,
        title: "the meet-preserving maps under circ are the phi-quotient of the bullet algebra",
        run: thm_4_14,
    },
];

// ---------------------------------------------------------------------------
// Outcome plumbing
// ---------------------------------------------------------------------------

/// Result of one part of a claim (self-lattice scan, sampled pass, hetero
/// instantiation, ...). The first failure across parts wins; otherwise the
/// first skip; otherwise the claim passes.
enum Part {
    Pass,
    Fail(Box<Counterexample>),
    Skip(String),
}

impl From<LawOutcome> for Part {
    fn from(o: LawOutcome) -> Part {
        match o {
            LawOutcome::Pass => Part::Pass,
            LawOutcome::Fail(cx) => Part::Fail(cx),
        }
    }
}

fn combine(parts: Vec<Part>) -> Part {
    let mut skip: Option<String> = None;
    for p in parts {
        match p {
            Part::Fail(cx) => return Part::Fail(cx),
            Part::Skip(r) => {
                if skip.is_none() {
                    skip = Some(r);
                }
            }
            Part::Pass => {}
        }
    }
    match skip {
        Some(r) => Part::Skip(r),
        None => Part::Pass,
    }
}

/// Size-limit errors from a scan mean "too big to check here", not "broken".
fn guarded(r: Result<LawOutcome>) -> Result<Part> {
    match r {
        Ok(o) => Ok(o.into()),
        Err(e @ Error::SizeLimitExceeded { .. }) => Ok(Part::Skip(e.to_string())),
        Err(e) => Err(e),
    }
}

struct Claimed {
    verdict: Verdict,
    note: Option<String>,
}

impl Claimed {
    fn pass() -> Claimed {
        Claimed {
            verdict: Verdict::Pass,
            note: None,
        }
    }

    fn skipped(reason: impl Into<String>) -> Claimed {
        Claimed {
            verdict: Verdict::Skipped {
                reason: reason.into(),
            },
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Claimed {
        self.note = Some(note.into());
        self
    }
}

impl From<Part> for Claimed {
    fn from(p: Part) -> Claimed {
        match p {
            Part::Pass => Claimed::pass(),
            Part::Fail(counterexample) => Claimed {
                verdict: Verdict::Fail { counterexample },
                note: None,
            },
            Part::Skip(reason) => Claimed::skipped(reason),
        }
    }
}

type Check = Result<Option<Box<Counterexample>>>;

fn cx(
    law: &str,
    relation: Relation,
    op: Option<&str>,
    construction: Option<&str>,
    witnesses: Vec<Witness>,
    lhs: Value,
    rhs: Value,
) -> Box<Counterexample> {
    Box::new(Counterexample {
        law: law.to_string(),
        relation,
        op: op.map(str::to_string),
        construction: construction.map(str::to_string),
        witnesses,
        lhs,
        rhs,
    })
}

fn wit(name: &str, f: &MonotoneMap) -> Witness {
    Witness::new(name, f.to_value())
}

// ---------------------------------------------------------------------------
// Audit environment
// ---------------------------------------------------------------------------

/// Everything the claim runners share. Carriers and relation tables that do
/// not fit the limits are recorded as reasons instead of errors, so single
/// claims degrade to `Skipped` rather than sinking the whole audit.
struct AuditEnv {
    l: Arc<Lattice>,
    limits: Limits,
    mode: Mode,
    ctx: std::result::Result<WedgeCtx, String>,
    circ: std::result::Result<CircAlgebras, String>,
    db: std::result::Result<DotBullet, String>,
    wedge_diag: Option<WedgeDiagnostics>,
    co_diag: Option<WedgeDiagnostics>,
    sampler: Sampler,
    het: Hetero,
}

/// Composition-by-substitution algebras over the shared endo carrier.
struct CircAlgebras {
    all: MapAlgebra,
    sup: MapAlgebra,
    meet: MapAlgebra,
}

/// Dot and bullet tables over the same carrier, with the projection tables
/// derived from them. `sup_ids` / `meet_ids` classify the carrier through
/// the direct join/meet scan, independent of psi and phi.
struct DotBullet {
    dot: MapAlgebra,
    bullet: MapAlgebra,
    psi_t: Vec<u32>,
    phi_t: Vec<u32>,
    kstar_t: Vec<u32>,
    j_t: Vec<u32>,
    sup_ids: Vec<usize>,
    meet_ids: Vec<usize>,
}

/// Fixed small hom-sets for the claims quantified over several lattices:
/// f ranges over chain(3) -> boolean(2), g over boolean(2) -> chain(3), and
/// h over chain(3) -> chain(2).
struct Hetero {
    a: Arc<Lattice>,
    b: Arc<Lattice>,
    ctx_a: WedgeCtx,
    ctx_b: WedgeCtx,
    ab: Vec<MonotoneMap>,
    bc: Vec<MonotoneMap>,
    cd: Vec<MonotoneMap>,
}

impl Hetero {
    fn build(limits: &Limits) -> Result<Hetero> {
        let a = Arc::new(Lattice::chain(3)?);
        let b = Arc::new(Lattice::boolean(2)?);
        let d = Arc::new(Lattice::chain(2)?);
        let ctx_a = WedgeCtx::new(&a, limits)?;
        let ctx_b = WedgeCtx::new(&b, limits)?;
        let ab = enumerate_between(&a, &b, limits.enumeration)?;
        let bc = enumerate_between(&b, &a, limits.enumeration)?;
        let cd = enumerate_between(&a, &d, limits.enumeration)?;
        Ok(Hetero {
            a,
            b,
            ctx_a,
            ctx_b,
            ab,
            bc,
            cd,
        })
    }
}

impl AuditEnv {
    fn build(l: &Arc<Lattice>, mode: Mode, limits: &Limits) -> Result<AuditEnv> {
        l.require_lattice()?;
        let ctx = match WedgeCtx::new(l, limits) {
            Ok(c) => Ok(c),
            Err(Error::NotDistributive) => Err("lattice is not distributive".to_string()),
            Err(e) => return Err(e),
        };
        let circ = match build_circ(l, limits) {
            Ok(c) => Ok(c),
            Err(e @ Error::SizeLimitExceeded { .. }) => Err(e.to_string()),
            Err(e) => return Err(e),
        };
        let db = match (&ctx, &circ) {
            (Ok(c), Ok(algs)) => match build_dot_bullet(l, c, algs, limits) {
                Ok(d) => Ok(d),
                Err(e @ Error::SizeLimitExceeded { .. }) => Err(e.to_string()),
                Err(e) => return Err(e),
            },
            (Err(r), _) => Err(r.clone()),
            (_, Err(r)) => Err(r.clone()),
        };
        let (wedge_diag, co_diag) = match &ctx {
            Ok(c) => (
                Some(c.wedge.check_axioms(limits)),
                Some(c.co.check_axioms(limits)),
            ),
            Err(_) => (None, None),
        };
        Ok(AuditEnv {
            l: l.clone(),
            limits: limits.clone(),
            mode,
            ctx,
            circ,
            db,
            wedge_diag,
            co_diag,
            sampler: Sampler::new(l)?,
            het: Hetero::build(limits)?,
        })
    }

    fn ctx_reason(&self) -> String {
        match &self.ctx {
            Ok(_) => "wedge context unavailable".to_string(),
            Err(r) => r.clone(),
        }
    }
}

fn build_circ(l: &Arc<Lattice>, limits: &Limits) -> Result<CircAlgebras> {
    let endo = enumerate_endo(l, limits.enumeration)?;
    let mut sup_maps = Vec::new();
    let mut meet_maps = Vec::new();
    for f in &endo {
        let c = classify(f)?;
        if c.sup_preserving {
            sup_maps.push(f.clone());
        }
        if c.meet_preserving {
            meet_maps.push(f.clone());
        }
    }
    let mk = |label: &str, carrier: Vec<MonotoneMap>| {
        MapAlgebra::from_carrier(
            label.to_string(),
            "circ".to_string(),
            l,
            None,
            OpKind::Circ,
            carrier,
            limits,
        )
    };
    Ok(CircAlgebras {
        all: mk("all(circ)", endo)?,
        sup: mk("sup(circ)", sup_maps)?,
        meet: mk("meet(circ)", meet_maps)?,
    })
}

fn build_dot_bullet(
    l: &Arc<Lattice>,
    ctx: &WedgeCtx,
    circ: &CircAlgebras,
    limits: &Limits,
) -> Result<DotBullet> {
    let carrier = circ.all.carrier().to_vec();
    let dot = MapAlgebra::from_carrier(
        "all(dot)".to_string(),
        "dot".to_string(),
        l,
        Some(ctx),
        OpKind::Dot,
        carrier.clone(),
        limits,
    )?;
    let bullet = MapAlgebra::from_carrier(
        "all(bullet)".to_string(),
        "bullet".to_string(),
        l,
        Some(ctx),
        OpKind::Bullet,
        carrier,
        limits,
    )?;
    let psi_t = laws::psi_table(&dot, ctx)?;
    let phi_t = laws::phi_table(&dot, ctx)?;
    let kstar_t = laws::kstar_table(&dot, &psi_t)?;
    let j_t = laws::compose_tables(&kstar_t, &psi_t);
    let mut sup_ids = Vec::new();
    let mut meet_ids = Vec::new();
    for i in 0..dot.len() {
        let c = classify(dot.map(i))?;
        if c.sup_preserving {
            sup_ids.push(i);
        }
        if c.meet_preserving {
            meet_ids.push(i);
        }
    }
    Ok(DotBullet {
        dot,
        bullet,
        psi_t,
        phi_t,
        kstar_t,
        j_t,
        sup_ids,
        meet_ids,
    })
}

// ---------------------------------------------------------------------------
// Scan helpers
// ---------------------------------------------------------------------------

/// How samples are coerced into a claim's hypothesis: taken as drawn, or
/// projected onto the sup-/meet-preserving maps.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Proj {
    Raw,
    Sup,
    Meet,
}

/// The wedge contexts relevant to one instance: the inner map's domain, the
/// middle lattice the compositions fold over, and the outer codomain.
struct Rels<'a> {
    dom: &'a WedgeCtx,
    mid: &'a WedgeCtx,
    cod: &'a WedgeCtx,
}

/// Which heterogeneous instantiation a pair claim gets: composable pairs
/// g: B -> C with f: A -> B, or both maps from the same hom-set A -> B.
#[derive(Clone, Copy)]
enum Het {
    Compose,
    Homset,
}

fn op_between(op: OpKind, mid: &WedgeCtx, g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
    match op {
        OpKind::Circ => compose(g, f),
        OpKind::Dot => compose_dot(g, f, &mid.wedge),
        OpKind::Bullet => compose_bullet(g, f, &mid.co),
    }
}

fn filtered(maps: &[MonotoneMap], p: Proj) -> Result<Vec<&MonotoneMap>> {
    let mut out = Vec::new();
    for f in maps {
        let keep = match p {
            Proj::Raw => true,
            Proj::Sup => classify(f)?.sup_preserving,
            Proj::Meet => classify(f)?.meet_preserving,
        };
        if keep {
            out.push(f);
        }
    }
    Ok(out)
}

impl AuditEnv {
    fn carrier_for(&self, p: Proj) -> std::result::Result<&[MonotoneMap], Part> {
        match &self.circ {
            Ok(c) => Ok(match p {
                Proj::Raw => c.all.carrier(),
                Proj::Sup => c.sup.carrier(),
                Proj::Meet => c.meet.carrier(),
            }),
            Err(r) => Err(Part::Skip(r.clone())),
        }
    }

    fn draw(&self, ctx: &WedgeCtx, p: Proj, rng: &mut ChaCha8Rng) -> Result<MonotoneMap> {
        let m = self.sampler.draw(rng);
        match p {
            Proj::Raw => Ok(m),
            Proj::Sup => psi(&m, &ctx.wedge),
            Proj::Meet => phi(&m, &ctx.co),
        }
    }
}

/// Scans (outer, inner) map pairs: the whole chosen carriers in exhaustive
/// mode, seeded draws otherwise, plus the heterogeneous instantiation. Needs
/// the wedge context, so claims built on it skip on non-distributive input.
fn pair_claim(
    env: &AuditEnv,
    outer: Proj,
    inner: Proj,
    het: Het,
    check: &mut dyn FnMut(&Rels, &MonotoneMap, &MonotoneMap) -> Check,
) -> Result<Part> {
    let ctx = match &env.ctx {
        Ok(c) => c,
        Err(r) => return Ok(Part::Skip(r.clone())),
    };
    let rels = Rels {
        dom: ctx,
        mid: ctx,
        cod: ctx,
    };
    match env.mode {
        Mode::Exhaustive => {
            let gs = match env.carrier_for(outer) {
                Ok(c) => c,
                Err(p) => return Ok(p),
            };
            let fs = match env.carrier_for(inner) {
                Ok(c) => c,
                Err(p) => return Ok(p),
            };
            for g in gs {
                for f in fs {
                    if let Some(c) = check(&rels, g, f)? {
                        return Ok(Part::Fail(c));
                    }
                }
            }
        }
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let g = env.draw(ctx, outer, &mut rng)?;
                let f = env.draw(ctx, inner, &mut rng)?;
                if let Some(c) = check(&rels, &g, &f)? {
                    return Ok(Part::Fail(c));
                }
            }
        }
    }
    let h = &env.het;
    match het {
        Het::Compose => {
            let rels = Rels {
                dom: &h.ctx_a,
                mid: &h.ctx_b,
                cod: &h.ctx_a,
            };
            for g in filtered(&h.bc, outer)? {
                for f in filtered(&h.ab, inner)? {
                    if let Some(c) = check(&rels, g, f)? {
                        return Ok(Part::Fail(c));
                    }
                }
            }
        }
        Het::Homset => {
            let rels = Rels {
                dom: &h.ctx_a,
                mid: &h.ctx_a,
                cod: &h.ctx_b,
            };
            for g in filtered(&h.ab, outer)? {
                for f in filtered(&h.ab, inner)? {
                    if let Some(c) = check(&rels, g, f)? {
                        return Ok(Part::Fail(c));
                    }
                }
            }
        }
    }
    Ok(Part::Pass)
}

/// Single-map version of [`pair_claim`]; the hetero part always runs over
/// the chain(3) -> boolean(2) hom-set.
fn map_claim(
    env: &AuditEnv,
    p: Proj,
    het: bool,
    check: &mut dyn FnMut(&Rels, &MonotoneMap) -> Check,
) -> Result<Part> {
    let ctx = match &env.ctx {
        Ok(c) => c,
        Err(r) => return Ok(Part::Skip(r.clone())),
    };
    let rels = Rels {
        dom: ctx,
        mid: ctx,
        cod: ctx,
    };
    match env.mode {
        Mode::Exhaustive => {
            let fs = match env.carrier_for(p) {
                Ok(c) => c,
                Err(part) => return Ok(part),
            };
            for f in fs {
                if let Some(c) = check(&rels, f)? {
                    return Ok(Part::Fail(c));
                }
            }
        }
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let f = env.draw(ctx, p, &mut rng)?;
                if let Some(c) = check(&rels, &f)? {
                    return Ok(Part::Fail(c));
                }
            }
        }
    }
    if het {
        let h = &env.het;
        let rels = Rels {
            dom: &h.ctx_a,
            mid: &h.ctx_a,
            cod: &h.ctx_b,
        };
        for f in filtered(&h.ab, p)? {
            if let Some(c) = check(&rels, f)? {
                return Ok(Part::Fail(c));
            }
        }
    }
    Ok(Part::Pass)
}

/// `t -> meet { s(a) : t wedge-below a }`: the right adjoint of psi in its
/// pointwise form. Agrees with the fiber-join table; the audit checks that.
fn kstar_pointwise(s: &MonotoneMap, w_dom: &WedgeRelation) -> Result<MonotoneMap> {
    let dom = s.dom();
    let cod = s.cod();
    let mut image = Vec::with_capacity(dom.n());
    for t in 0..dom.n() {
        let above = (0..dom.n())
            .filter(|&a| w_dom.holds(t, a))
            .map(|a| s.get(a));
        let v = cod.meet_iter(above).ok_or(Error::NotALattice)?;
        image.push(v);
    }
    MonotoneMap::new(dom, cod, &image)
}

/// Bottom to bottom and everything else to top: the top of the
/// sup-preserving maps between two lattices.
fn top_s_between(dom: &Arc<Lattice>, cod: &Arc<Lattice>) -> Result<MonotoneMap> {
    let db = dom.bottom().ok_or(Error::NotALattice)?;
    let cb = cod.bottom().ok_or(Error::NotALattice)?;
    let ct = cod.top().ok_or(Error::NotALattice)?;
    let image: Vec<usize> = (0..dom.n())
        .map(|x| if x == db { cb } else { ct })
        .collect();
    MonotoneMap::new(dom, cod, &image)
}

/// Top to top and everything else to bottom: the bottom of the
/// meet-preserving maps between two lattices.
fn bottom_m_between(dom: &Arc<Lattice>, cod: &Arc<Lattice>) -> Result<MonotoneMap> {
    let dt = dom.top().ok_or(Error::NotALattice)?;
    let cb = cod.bottom().ok_or(Error::NotALattice)?;
    let ct = cod.top().ok_or(Error::NotALattice)?;
    let image: Vec<usize> = (0..dom.n())
        .map(|x| if x == dt { ct } else { cb })
        .collect();
    MonotoneMap::new(dom, cod, &image)
}

// ---------------------------------------------------------------------------
// Claim runners: bounds and closure of the map orders
// ---------------------------------------------------------------------------

fn join_closure_check(fam: &[&MonotoneMap], dom: &Arc<Lattice>, cod: &Arc<Lattice>) -> Check {
    let join = pointwise_join(dom, cod, fam.iter().copied())?;
    if classify(&join)?.sup_preserving {
        return Ok(None);
    }
    Ok(Some(cx(
        "sup-closed-under-pointwise-join",
        Relation::Eq,
        None,
        None,
        vec![Witness::new(
            "family",
            Value::MapFamily {
                maps: fam.iter().map(|f| f.to_value()).collect(),
            },
        )],
        Value::bool(false),
        Value::bool(true),
    )))
}

fn meet_closure_check(fam: &[&MonotoneMap], dom: &Arc<Lattice>, cod: &Arc<Lattice>) -> Check {
    let meet = pointwise_meet(dom, cod, fam.iter().copied())?;
    if classify(&meet)?.meet_preserving {
        return Ok(None);
    }
    Ok(Some(cx(
        "meet-closed-under-pointwise-meet",
        Relation::Eq,
        None,
        None,
        vec![Witness::new(
            "family",
            Value::MapFamily {
                maps: fam.iter().map(|f| f.to_value()).collect(),
            },
        )],
        Value::bool(false),
        Value::bool(true),
    )))
}

/// Shared scan for the two closure claims: exhaustive families over the
/// classified carrier, sampled rounds that keep whichever draws qualify
/// (so thin hypotheses shrink the family instead of stalling the round),
/// and the hetero hom-set.
fn closure_claim(env: &AuditEnv, sup_side: bool) -> Result<Claimed> {
    let check = if sup_side {
        join_closure_check
    } else {
        meet_closure_check
    };
    let proj = if sup_side { Proj::Sup } else { Proj::Meet };
    let mut parts = Vec::new();
    match env.mode {
        Mode::Exhaustive => match env.carrier_for(proj) {
            Ok(carrier) => {
                let refs: Vec<&MonotoneMap> = carrier.iter().collect();
                parts.push(family_scan(&refs, &env.l, &env.l, &env.limits, check)?);
            }
            Err(p) => parts.push(p),
        },
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut part = Part::Pass;
            for _ in 0..samples {
                let k = rng.gen_range(0..=3usize);
                let draws: Vec<MonotoneMap> = (0..k).map(|_| env.sampler.draw(&mut rng)).collect();
                let fam = filtered(&draws, proj)?;
                if let Some(c) = check(&fam, &env.l, &env.l)? {
                    part = Part::Fail(c);
                    break;
                }
            }
            parts.push(part);
        }
    }
    let h = &env.het;
    let het_maps = filtered(&h.ab, proj)?;
    parts.push(family_scan(&het_maps, &h.a, &h.b, &env.limits, check)?);
    Ok(combine(parts).into())
}

fn family_scan(
    carrier: &[&MonotoneMap],
    dom: &Arc<Lattice>,
    cod: &Arc<Lattice>,
    limits: &Limits,
    check: fn(&[&MonotoneMap], &Arc<Lattice>, &Arc<Lattice>) -> Check,
) -> Result<Part> {
    for fam in laws::family_indices(carrier.len(), limits) {
        let refs: Vec<&MonotoneMap> = fam.iter().map(|&i| carrier[i]).collect();
        if let Some(c) = check(&refs, dom, cod)? {
            return Ok(Part::Fail(c));
        }
    }
    Ok(Part::Pass)
}

fn rem_2_1_1(env: &AuditEnv) -> Result<Claimed> {
    closure_claim(env, true)
}

fn rem_2_1_2(env: &AuditEnv) -> Result<Claimed> {
    closure_claim(env, false)
}

fn rem_2_1_3(env: &AuditEnv) -> Result<Claimed> {
    fn check(g: &MonotoneMap, f: &MonotoneMap) -> Check {
        let gf = compose(g, f)?;
        if classify(&gf)?.sup_preserving {
            return Ok(None);
        }
        Ok(Some(cx(
            "circ-preserves-sup",
            Relation::Eq,
            Some("circ"),
            None,
            vec![wit("g", g), wit("f", f)],
            Value::bool(false),
            Value::bool(true),
        )))
    }
    let mut parts = Vec::new();
    match env.mode {
        Mode::Exhaustive => match env.carrier_for(Proj::Sup) {
            Ok(sup) => {
                let mut part = Part::Pass;
                'all: for g in sup {
                    for f in sup {
                        if let Some(c) = check(g, f)? {
                            part = Part::Fail(c);
                            break 'all;
                        }
                    }
                }
                parts.push(part);
            }
            Err(p) => parts.push(p),
        },
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut part = Part::Pass;
            for _ in 0..samples {
                let g = env.sampler.draw(&mut rng);
                let f = env.sampler.draw(&mut rng);
                if !(classify(&g)?.sup_preserving && classify(&f)?.sup_preserving) {
                    continue;
                }
                if let Some(c) = check(&g, &f)? {
                    part = Part::Fail(c);
                    break;
                }
            }
            parts.push(part);
        }
    }
    let h = &env.het;
    let mut het_part = Part::Pass;
    'het: for g in filtered(&h.bc, Proj::Sup)? {
        for f in filtered(&h.ab, Proj::Sup)? {
            if let Some(c) = check(g, f)? {
                het_part = Part::Fail(c);
                break 'het;
            }
        }
    }
    parts.push(het_part);
    Ok(combine(parts).into())
}

fn rem_2_1_4(env: &AuditEnv) -> Result<Claimed> {
    fn check(f: &MonotoneMap) -> Check {
        let bot = MonotoneMap::const_bottom(f.dom(), f.cod())?;
        let top = MonotoneMap::const_top(f.dom(), f.cod())?;
        if !bot.pointwise_leq(f) {
            return Ok(Some(cx(
                "pointwise-bottom",
                Relation::Leq,
                None,
                None,
                vec![wit("f", f)],
                bot.to_value(),
                f.to_value(),
            )));
        }
        if !f.pointwise_leq(&top) {
            return Ok(Some(cx(
                "pointwise-top",
                Relation::Leq,
                None,
                None,
                vec![wit("f", f)],
                f.to_value(),
                top.to_value(),
            )));
        }
        Ok(None)
    }
    let mut parts = Vec::new();
    match env.mode {
        Mode::Exhaustive => match env.carrier_for(Proj::Raw) {
            Ok(all) => {
                let mut part = Part::Pass;
                for f in all {
                    if let Some(c) = check(f)? {
                        part = Part::Fail(c);
                        break;
                    }
                }
                parts.push(part);
            }
            Err(p) => parts.push(p),
        },
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut part = Part::Pass;
            for _ in 0..samples {
                let f = env.sampler.draw(&mut rng);
                if let Some(c) = check(&f)? {
                    part = Part::Fail(c);
                    break;
                }
            }
            parts.push(part);
        }
    }
    for f in &env.het.ab {
        if let Some(c) = check(f)? {
            parts.push(Part::Fail(c));
            break;
        }
    }
    Ok(combine(parts).into())
}

/// Shared body for the two canonical-bound claims. `sup_side` picks the
/// step map top-S as the greatest sup-preserving map; otherwise bottom-M as
/// the least meet-preserving map.
fn canonical_bound_claim(env: &AuditEnv, sup_side: bool) -> Result<Claimed> {
    let proj = if sup_side { Proj::Sup } else { Proj::Meet };
    fn members(dom: &Arc<Lattice>, cod: &Arc<Lattice>, sup_side: bool) -> Check {
        if sup_side {
            let t = top_s_between(dom, cod)?;
            if !classify(&t)?.sup_preserving {
                return Ok(Some(cx(
                    "sup-top-member",
                    Relation::Eq,
                    None,
                    None,
                    vec![wit("f", &t)],
                    Value::bool(false),
                    Value::bool(true),
                )));
            }
            let b = MonotoneMap::const_bottom(dom, cod)?;
            if !classify(&b)?.sup_preserving {
                return Ok(Some(cx(
                    "sup-bottom-member",
                    Relation::Eq,
                    None,
                    None,
                    vec![wit("f", &b)],
                    Value::bool(false),
                    Value::bool(true),
                )));
            }
        } else {
            let m = bottom_m_between(dom, cod)?;
            if !classify(&m)?.meet_preserving {
                return Ok(Some(cx(
                    "meet-bottom-member",
                    Relation::Eq,
                    None,
                    None,
                    vec![wit("f", &m)],
                    Value::bool(false),
                    Value::bool(true),
                )));
            }
            let t = MonotoneMap::const_top(dom, cod)?;
            if !classify(&t)?.meet_preserving {
                return Ok(Some(cx(
                    "meet-top-member",
                    Relation::Eq,
                    None,
                    None,
                    vec![wit("f", &t)],
                    Value::bool(false),
                    Value::bool(true),
                )));
            }
        }
        Ok(None)
    }
    fn bound(f: &MonotoneMap, sup_side: bool) -> Check {
        if sup_side {
            let t = top_s_between(f.dom(), f.cod())?;
            if !f.pointwise_leq(&t) {
                return Ok(Some(cx(
                    "sup-top-bound",
                    Relation::Leq,
                    None,
                    None,
                    vec![wit("f", f)],
                    f.to_value(),
                    t.to_value(),
                )));
            }
        } else {
            let m = bottom_m_between(f.dom(), f.cod())?;
            if !m.pointwise_leq(f) {
                return Ok(Some(cx(
                    "meet-bottom-bound",
                    Relation::Leq,
                    None,
                    None,
                    vec![wit("f", f)],
                    m.to_value(),
                    f.to_value(),
                )));
            }
        }
        Ok(None)
    }

    let mut parts = Vec::new();
    if let Some(c) = members(&env.l, &env.l, sup_side)? {
        parts.push(Part::Fail(c));
    }
    if let Some(c) = members(&env.het.a, &env.het.b, sup_side)? {
        parts.push(Part::Fail(c));
    }
    match env.mode {
        Mode::Exhaustive => match env.carrier_for(proj) {
            Ok(carrier) => {
                let mut part = Part::Pass;
                for f in carrier {
                    if let Some(c) = bound(f, sup_side)? {
                        part = Part::Fail(c);
                        break;
                    }
                }
                parts.push(part);
            }
            Err(p) => parts.push(p),
        },
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut part = Part::Pass;
            for _ in 0..samples {
                let f = env.sampler.draw(&mut rng);
                let keep = match proj {
                    Proj::Sup => classify(&f)?.sup_preserving,
                    _ => classify(&f)?.meet_preserving,
                };
                if !keep {
                    continue;
                }
                if let Some(c) = bound(&f, sup_side)? {
                    part = Part::Fail(c);
                    break;
                }
            }
            parts.push(part);
        }
    }
    for f in filtered(&env.het.ab, proj)? {
        if let Some(c) = bound(f, sup_side)? {
            parts.push(Part::Fail(c));
            break;
        }
    }
    Ok(combine(parts).into())
}

fn rem_2_1_5(env: &AuditEnv) -> Result<Claimed> {
    canonical_bound_claim(env, true)
}

fn rem_2_1_6(env: &AuditEnv) -> Result<Claimed> {
    canonical_bound_claim(env, false)
}

// ---------------------------------------------------------------------------
// Claim runners: wedge axioms
// ---------------------------------------------------------------------------

fn wedge_item(env: &AuditEnv, co: bool, law: &'static str) -> Result<Claimed> {
    let diag = match (co, &env.wedge_diag, &env.co_diag) {
        (false, Some(d), _) => d,
        (true, _, Some(d)) => d,
        _ => return Ok(Claimed::skipped(env.ctx_reason())),
    };
    let item = diag.find(law).expect("registry ids match the diagnostics");
    Ok(match &item.counterexample {
        None => Claimed::pass(),
        Some(c) => Part::Fail(Box::new(c.clone())).into(),
    })
}

// ---------------------------------------------------------------------------
// Claim runners: the dot composition
// ---------------------------------------------------------------------------

fn dot_below_circ(env: &AuditEnv, note: Option<&str>) -> Result<Claimed> {
    let part = pair_claim(env, Proj::Raw, Proj::Raw, Het::Compose, &mut |r, g, f| {
        let d = compose_dot(g, f, &r.mid.wedge)?;
        let c = compose(g, f)?;
        if d.pointwise_leq(&c) {
            return Ok(None);
        }
        Ok(Some(cx(
            "dot-leq-circ",
            Relation::Leq,
            Some("dot"),
            None,
            vec![wit("g", g), wit("f", f)],
            d.to_value(),
            c.to_value(),
        )))
    })?;
    let claimed = Claimed::from(part);
    Ok(match note {
        Some(n) => claimed.with_note(n),
        None => claimed,
    })
}

fn prop_3_4(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Raw, Proj::Raw, Het::Compose, &mut |r, g, f| {
            let d = compose_dot(g, f, &r.mid.wedge)?;
            Ok(monotone_violation("dot-monotone", "dot", &d, g, f))
        })?
        .into(),
    )
}

/// Covers generate the order, so scanning them decides monotonicity.
fn monotone_violation(
    law: &str,
    op: &str,
    h: &MonotoneMap,
    g: &MonotoneMap,
    f: &MonotoneMap,
) -> Option<Box<Counterexample>> {
    let dom = h.dom();
    let cod = h.cod();
    for &(x, y) in dom.covers() {
        if !cod.leq(h.get(x), h.get(y)) {
            return Some(cx(
                law,
                Relation::Leq,
                Some(op),
                None,
                vec![
                    wit("g", g),
                    wit("f", f),
                    Witness::new("x", Value::element(dom.name(), x)),
                    Witness::new("y", Value::element(dom.name(), y)),
                ],
                Value::element(cod.name(), h.get(x)),
                Value::element(cod.name(), h.get(y)),
            ));
        }
    }
    None
}

fn rem_3_5_1(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Raw, Proj::Raw, Het::Compose, &mut |r, g, f| {
            let one = compose_dot(g, f, &r.mid.wedge)?;
            let two = compose_dot_definitional(g, f, &r.mid.wedge, &r.cod.wedge)?;
            if one == two {
                return Ok(None);
            }
            Ok(Some(cx(
                "dot-one-variable-form",
                Relation::Eq,
                Some("dot"),
                None,
                vec![wit("g", g), wit("f", f)],
                one.to_value(),
                two.to_value(),
            )))
        })?
        .into(),
    )
}

fn prop_3_6_1(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Raw, Proj::Sup, Het::Compose, &mut |r, g, f| {
            let d = compose_dot(g, f, &r.mid.wedge)?;
            if classify(&d)?.sup_preserving {
                return Ok(None);
            }
            Ok(Some(cx(
                "dot-preserves-sup",
                Relation::Eq,
                Some("dot"),
                None,
                vec![wit("g", g), wit("f", f)],
                Value::bool(false),
                Value::bool(true),
            )))
        })?
        .into(),
    )
}

fn prop_3_6_2(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Sup, Proj::Sup, Het::Compose, &mut |r, g, f| {
            let d = compose_dot(g, f, &r.mid.wedge)?;
            let c = compose(g, f)?;
            if d == c {
                return Ok(None);
            }
            Ok(Some(cx(
                "dot-collapses-to-circ",
                Relation::Eq,
                Some("dot"),
                None,
                vec![wit("g", g), wit("f", f)],
                d.to_value(),
                c.to_value(),
            )))
        })?
        .into(),
    )
}

/// Shared by Prop 3.7 and Prop 4.7: the table scan (or sampled triples) on
/// the audited lattice plus the four-lattice heterogeneous triples.
fn associativity(env: &AuditEnv, op: OpKind) -> Result<Claimed> {
    let mut parts = Vec::new();
    match env.mode {
        Mode::Exhaustive => match &env.db {
            Ok(db) => {
                let alg = match op {
                    OpKind::Dot => &db.dot,
                    OpKind::Bullet => &db.bullet,
                    OpKind::Circ => unreachable!("circ associativity is not a registered claim"),
                };
                parts.push(guarded(laws::check_associativity(alg, &env.limits))?);
            }
            Err(r) => parts.push(Part::Skip(r.clone())),
        },
        Mode::Sampled { seed, samples } => match &env.ctx {
            Ok(c) => {
                parts.push(laws::sampled_associativity(&env.l, Some(c), op, seed, samples)?.into())
            }
            Err(r) => parts.push(Part::Skip(r.clone())),
        },
    }
    parts.push(hetero_assoc(env, op)?);
    Ok(combine(parts).into())
}

fn hetero_assoc(env: &AuditEnv, op: OpKind) -> Result<Part> {
    let het = &env.het;
    for g in &het.bc {
        for f in &het.ab {
            let gf = op_between(op, &het.ctx_b, g, f)?;
            for h in &het.cd {
                let lhs = op_between(op, &het.ctx_a, h, &gf)?;
                let hg = op_between(op, &het.ctx_a, h, g)?;
                let rhs = op_between(op, &het.ctx_b, &hg, f)?;
                if lhs != rhs {
                    return Ok(Part::Fail(cx(
                        "associativity",
                        Relation::Eq,
                        Some(op.as_str()),
                        None,
                        vec![wit("x", h), wit("y", g), wit("z", f)],
                        lhs.to_value(),
                        rhs.to_value(),
                    )));
                }
            }
        }
    }
    Ok(Part::Pass)
}

fn thm_3_8(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let parts = vec![
                guarded(laws::check_associativity(&db.dot, &env.limits))?,
                guarded(laws::check_join_closure(
                    &db.dot,
                    ClosureKind::Pointwise,
                    &env.limits,
                ))?,
                guarded(laws::check_sup_distributivity(&db.dot, &env.limits))?,
            ];
            Ok(combine(parts).into())
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let parts = vec![
                laws::sampled_associativity(&env.l, Some(ctx), OpKind::Dot, seed, samples)?.into(),
                laws::sampled_distributivity(&env.l, Some(ctx), OpKind::Dot, true, seed, samples)?
                    .into(),
            ];
            Ok(Claimed::from(combine(parts))
                .with_note("join closure is definitional on the full carrier"))
        }
    }
}

fn cor_3_9(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let (db, circ) = match (&env.db, &env.circ) {
                (Ok(db), Ok(c)) => (db, c),
                (Err(r), _) | (_, Err(r)) => return Ok(Claimed::skipped(r.clone())),
            };
            Ok(Claimed::from(Part::from(laws::check_subalgebra(
                &circ.sup,
                &db.dot,
                &env.limits,
            )?)))
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let construction = "sup(circ) <= all(dot)";
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let g = psi(&env.sampler.draw(&mut rng), &ctx.wedge)?;
                let f = psi(&env.sampler.draw(&mut rng), &ctx.wedge)?;
                let inner = compose(&g, &f)?;
                let outer = compose_dot(&g, &f, &ctx.wedge)?;
                if inner != outer {
                    return Ok(Part::Fail(cx(
                        "subalgebra-op",
                        Relation::Eq,
                        Some("dot"),
                        Some(construction),
                        vec![wit("g", &g), wit("f", &f)],
                        inner.to_value(),
                        outer.to_value(),
                    ))
                    .into());
                }
                let k = rng.gen_range(0..=3usize);
                let fam: Vec<MonotoneMap> = (0..k)
                    .map(|_| psi(&env.sampler.draw(&mut rng), &ctx.wedge))
                    .collect::<Result<_>>()?;
                let join = pointwise_join(&env.l, &env.l, fam.iter())?;
                if !classify(&join)?.sup_preserving {
                    return Ok(Part::Fail(cx(
                        "join-closure",
                        Relation::Eq,
                        Some("dot"),
                        Some(construction),
                        vec![
                            Witness::new(
                                "family",
                                Value::MapFamily {
                                    maps: fam.iter().map(MonotoneMap::to_value).collect(),
                                },
                            ),
                            wit("join", &join),
                        ],
                        Value::bool(false),
                        Value::bool(true),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass().with_note("membership holds by construction of projected samples"))
        }
    }
}

fn cor_3_10_1(env: &AuditEnv) -> Result<Claimed> {
    let id = MonotoneMap::identity(&env.l);
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let u = db
                .dot
                .index_of(&id)
                .ok_or_else(|| Error::InvalidInput("identity missing from the carrier".into()))?;
            let verdict = laws::check_left_unit(&db.dot, u);
            // left units are not unique in general (on a chain, e.g.,
            // bumping id up at the atoms gives another one); count them
            let count = (0..db.dot.len())
                .filter(|&e| laws::check_left_unit(&db.dot, e).passed())
                .count();
            Ok(Claimed::from(Part::from(verdict))
                .with_note(format!("{count} left unit(s) in the carrier")))
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let out = laws::sampled_left_unit(&env.l, Some(ctx), OpKind::Dot, &id, seed, samples)?;
            Ok(Claimed::from(Part::from(out))
                .with_note("uniqueness needs the enumerated carrier; not sampled"))
        }
    }
}

fn cor_3_10_2(env: &AuditEnv) -> Result<Claimed> {
    let ctx = match &env.ctx {
        Ok(c) => c,
        Err(r) => return Ok(Claimed::skipped(r.clone())),
    };
    let bot = env.l.bottom().ok_or(Error::NotALattice)?;
    let topbar = MonotoneMap::const_top(&env.l, &env.l)?;
    let check = |f: &MonotoneMap| -> Check {
        if f.get(bot) == bot {
            return Ok(None);
        }
        let d = compose_dot(&topbar, f, &ctx.wedge)?;
        if d == topbar {
            return Ok(None);
        }
        Ok(Some(cx(
            "dot-of",
            Relation::Eq,
            Some("dot"),
            None,
            vec![wit("g", &topbar), wit("f", f)],
            d.to_value(),
            topbar.to_value(),
        )))
    };
    let mut narrow = Part::Pass;
    let mut wide_holds = true;
    match env.mode {
        Mode::Exhaustive => {
            match env.carrier_for(Proj::Meet) {
                Ok(meet) => {
                    for f in meet {
                        if let Some(c) = check(f)? {
                            narrow = Part::Fail(c);
                            break;
                        }
                    }
                }
                Err(p) => narrow = p,
            }
            if let Ok(all) = env.carrier_for(Proj::Raw) {
                for f in all {
                    if check(f)?.is_some() {
                        wide_holds = false;
                        break;
                    }
                }
            }
        }
        Mode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let raw = env.sampler.draw(&mut rng);
                if check(&raw)?.is_some() {
                    wide_holds = false;
                }
                let f = phi(&raw, &ctx.co)?;
                if let Some(c) = check(&f)? {
                    narrow = Part::Fail(c);
                    break;
                }
            }
        }
    }
    let note = if wide_holds {
        "also holds for every order-preserving f with f(0) != 0 scanned"
    } else {
        "the wide scope (arbitrary order-preserving f) has violations"
    };
    Ok(Claimed::from(narrow).with_note(note))
}

fn cor_3_10_3(env: &AuditEnv) -> Result<Claimed> {
    let ctx = match &env.ctx {
        Ok(c) => c,
        Err(r) => return Ok(Claimed::skipped(r.clone())),
    };
    let top_s = top_s_between(&env.l, &env.l)?;
    let topbar = MonotoneMap::const_top(&env.l, &env.l)?;
    let d = compose_dot(&topbar, &top_s, &ctx.wedge)?;
    if d == top_s {
        return Ok(Claimed::pass());
    }
    Ok(Part::Fail(cx(
        "dot-of",
        Relation::Eq,
        Some("dot"),
        None,
        vec![wit("g", &topbar), wit("f", &top_s)],
        d.to_value(),
        top_s.to_value(),
    ))
    .into())
}

fn cor_3_10_4(env: &AuditEnv) -> Result<Claimed> {
    let ctx = match &env.ctx {
        Ok(c) => c,
        Err(r) => return Ok(Claimed::skipped(r.clone())),
    };
    let top_s = top_s_between(&env.l, &env.l)?;
    let topbar = MonotoneMap::const_top(&env.l, &env.l)?;
    let d = compose_dot(&top_s, &topbar, &ctx.wedge)?;
    if d == topbar {
        return Ok(Claimed::pass());
    }
    Ok(Part::Fail(cx(
        "dot-of",
        Relation::Eq,
        Some("dot"),
        None,
        vec![wit("g", &top_s), wit("f", &topbar)],
        d.to_value(),
        topbar.to_value(),
    ))
    .into())
}

fn cor_3_10_5(env: &AuditEnv) -> Result<Claimed> {
    let ctx = match &env.ctx {
        Ok(c) => c,
        Err(r) => return Ok(Claimed::skipped(r.clone())),
    };
    let n = env.l.n();
    let mut first: Option<usize> = None;
    let mut hits = 0usize;
    for a in 0..n {
        let fa = MonotoneMap::step(&env.l, a)?;
        let d = compose_dot(&fa, &fa, &ctx.wedge)?;
        if d == fa {
            hits += 1;
            if first.is_none() {
                first = Some(a);
            }
        }
    }
    match first {
        None => Ok(Claimed::pass()),
        Some(a) => {
            let fa = MonotoneMap::step(&env.l, a)?;
            let d = compose_dot(&fa, &fa, &ctx.wedge)?;
            let claimed: Claimed = Part::Fail(cx(
                "dot-step-square",
                Relation::Neq,
                Some("dot"),
                None,
                vec![
                    Witness::new("a", Value::element(env.l.name(), a)),
                    wit("f", &fa),
                ],
                d.to_value(),
                fa.to_value(),
            ))
            .into();
            Ok(claimed.with_note(format!(
                "the square equals the step map at {hits} of {n} elements; least witness a = {a}"
            )))
        }
    }
}

fn ex_3_11(env: &AuditEnv) -> Result<Claimed> {
    let ctx = match &env.ctx {
        Ok(c) => c,
        Err(r) => return Ok(Claimed::skipped(r.clone())),
    };
    if env.l.n() == 1 {
        return Ok(Claimed::skipped(
            "one-point lattice: the identity is a right unit there",
        ));
    }
    let top_s = top_s_between(&env.l, &env.l)?;
    let topbar = MonotoneMap::const_top(&env.l, &env.l)?;
    let id = MonotoneMap::identity(&env.l);
    let d = compose_dot(&topbar, &id, &ctx.wedge)?;
    if d != top_s {
        return Ok(Part::Fail(cx(
            "dot-of",
            Relation::Eq,
            Some("dot"),
            None,
            vec![wit("g", &topbar), wit("f", &id)],
            d.to_value(),
            top_s.to_value(),
        ))
        .into());
    }
    if top_s == topbar {
        return Ok(Part::Fail(cx(
            "top-neq-topbar",
            Relation::Neq,
            None,
            None,
            vec![],
            top_s.to_value(),
            topbar.to_value(),
        ))
        .into());
    }
    Ok(Claimed::pass().with_note("const-top dot id lands strictly below const-top"))
}

// ---------------------------------------------------------------------------
// Claim runners: psi and the retract
// ---------------------------------------------------------------------------

fn prop_3_12(env: &AuditEnv) -> Result<Claimed> {
    Ok(map_claim(env, Proj::Raw, true, &mut |r, f| {
        let s = psi(f, &r.dom.wedge)?;
        if classify(&s)?.sup_preserving {
            return Ok(None);
        }
        Ok(Some(cx(
            "psi-sup-preserving",
            Relation::Eq,
            None,
            None,
            vec![wit("f", f)],
            Value::bool(false),
            Value::bool(true),
        )))
    })?
    .into())
}

fn cor_3_13_1(env: &AuditEnv) -> Result<Claimed> {
    Ok(map_claim(env, Proj::Raw, true, &mut |r, f| {
        let one = psi(f, &r.dom.wedge)?;
        let two = psi_definitional(f, &r.dom.wedge, &r.cod.wedge)?;
        if one == two {
            return Ok(None);
        }
        Ok(Some(cx(
            "psi-one-variable-form",
            Relation::Eq,
            None,
            None,
            vec![wit("f", f)],
            one.to_value(),
            two.to_value(),
        )))
    })?
    .into())
}

fn cor_3_13_2(env: &AuditEnv) -> Result<Claimed> {
    Ok(map_claim(env, Proj::Raw, true, &mut |r, f| {
        let s = psi(f, &r.dom.wedge)?;
        if s.pointwise_leq(f) {
            return Ok(None);
        }
        Ok(Some(cx(
            "psi-deflationary",
            Relation::Leq,
            None,
            None,
            vec![wit("f", f)],
            s.to_value(),
            f.to_value(),
        )))
    })?
    .into())
}

fn cor_3_13_3(env: &AuditEnv) -> Result<Claimed> {
    Ok(map_claim(env, Proj::Sup, true, &mut |r, f| {
        let s = psi(f, &r.dom.wedge)?;
        if s == *f {
            return Ok(None);
        }
        Ok(Some(cx(
            "psi-fixes-sup-preserving",
            Relation::Eq,
            None,
            None,
            vec![wit("f", f)],
            s.to_value(),
            f.to_value(),
        )))
    })?
    .into())
}

fn cor_3_13_4(env: &AuditEnv) -> Result<Claimed> {
    let part = pair_claim(env, Proj::Raw, Proj::Raw, Het::Homset, &mut |r, f, g| {
        let s = psi(f, &r.dom.wedge)?;
        let lhs = s.pointwise_leq(g);
        let rhs = f.pointwise_leq(g);
        if lhs == rhs {
            return Ok(None);
        }
        Ok(Some(cx(
            "psi-leq-iff",
            Relation::Eq,
            None,
            None,
            vec![wit("f", f), wit("g", g)],
            Value::bool(lhs),
            Value::bool(rhs),
        )))
    })?;
    let failed = matches!(part, Part::Fail(_));
    let claimed = Claimed::from(part);
    Ok(if failed {
        claimed.with_note("only the forward implication survives")
    } else {
        claimed
    })
}

fn prop_3_14(env: &AuditEnv) -> Result<Claimed> {
    let mut parts = Vec::new();
    // multiplicative: psi(g . f) == psi(g) after psi(f)
    parts.push(pair_claim(
        env,
        Proj::Raw,
        Proj::Raw,
        Het::Compose,
        &mut |r, g, f| {
            let kgf = psi(&compose_dot(g, f, &r.mid.wedge)?, &r.dom.wedge)?;
            let kg = psi(g, &r.mid.wedge)?;
            let kf = psi(f, &r.dom.wedge)?;
            let comp = compose(&kg, &kf)?;
            if kgf == comp {
                return Ok(None);
            }
            Ok(Some(cx(
                "hom-multiplicative",
                Relation::Eq,
                Some("dot"),
                None,
                vec![wit("g", g), wit("f", f)],
                kgf.to_value(),
                comp.to_value(),
            )))
        },
    )?);

    // join-preserving: psi of a pointwise join is the pointwise join of psi
    fn join_check(
        fam: &[&MonotoneMap],
        w: &WedgeRelation,
        dom: &Arc<Lattice>,
        cod: &Arc<Lattice>,
    ) -> Check {
        let join = pointwise_join(dom, cod, fam.iter().copied())?;
        let lhs = psi(&join, w)?;
        let parts: Vec<MonotoneMap> = fam.iter().map(|f| psi(f, w)).collect::<Result<_>>()?;
        let rhs = pointwise_join(dom, cod, parts.iter())?;
        if lhs == rhs {
            return Ok(None);
        }
        Ok(Some(cx(
            "hom-join-preserving",
            Relation::Eq,
            None,
            None,
            vec![Witness::new(
                "family",
                Value::MapFamily {
                    maps: fam.iter().map(|f| f.to_value()).collect(),
                },
            )],
            lhs.to_value(),
            rhs.to_value(),
        )))
    }
    match (&env.ctx, env.mode) {
        (Err(r), _) => parts.push(Part::Skip(r.clone())),
        (Ok(ctx), Mode::Exhaustive) => match env.carrier_for(Proj::Raw) {
            Ok(all) => {
                let mut part = Part::Pass;
                for fam in laws::family_indices(all.len(), &env.limits) {
                    let refs: Vec<&MonotoneMap> = fam.iter().map(|&i| &all[i]).collect();
                    if let Some(c) = join_check(&refs, &ctx.wedge, &env.l, &env.l)? {
                        part = Part::Fail(c);
                        break;
                    }
                }
                parts.push(part);
            }
            Err(p) => parts.push(p),
        },
        (Ok(ctx), Mode::Sampled { seed, samples }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut part = Part::Pass;
            for _ in 0..samples {
                let k = rng.gen_range(0..=3usize);
                let draws: Vec<MonotoneMap> = (0..k).map(|_| env.sampler.draw(&mut rng)).collect();
                let refs: Vec<&MonotoneMap> = draws.iter().collect();
                if let Some(c) = join_check(&refs, &ctx.wedge, &env.l, &env.l)? {
                    part = Part::Fail(c);
                    break;
                }
            }
            parts.push(part);
        }
    }
    let het = &env.het;
    let refs: Vec<&MonotoneMap> = het.ab.iter().collect();
    let mut het_part = Part::Pass;
    for fam in laws::family_indices(refs.len(), &env.limits) {
        let members: Vec<&MonotoneMap> = fam.iter().map(|&i| refs[i]).collect();
        if let Some(c) = join_check(&members, &het.ctx_a.wedge, &het.a, &het.b)? {
            het_part = Part::Fail(c);
            break;
        }
    }
    parts.push(het_part);

    // surjectivity: every sup-preserving map is its own preimage
    let surj = |s: &MonotoneMap, w: &WedgeRelation| -> Check {
        let back = psi(s, w)?;
        if back == *s {
            return Ok(None);
        }
        Ok(Some(cx(
            "hom-surjective",
            Relation::Eq,
            None,
            None,
            vec![wit("s", s)],
            Value::bool(false),
            Value::bool(true),
        )))
    };
    match (&env.ctx, env.mode) {
        (Err(r), _) => parts.push(Part::Skip(r.clone())),
        (Ok(ctx), Mode::Exhaustive) => match env.carrier_for(Proj::Sup) {
            Ok(sup) => {
                let mut part = Part::Pass;
                for s in sup {
                    if let Some(c) = surj(s, &ctx.wedge)? {
                        part = Part::Fail(c);
                        break;
                    }
                }
                parts.push(part);
            }
            Err(p) => parts.push(p),
        },
        (Ok(ctx), Mode::Sampled { seed, samples }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
            let mut part = Part::Pass;
            for _ in 0..samples {
                let s = psi(&env.sampler.draw(&mut rng), &ctx.wedge)?;
                if let Some(c) = surj(&s, &ctx.wedge)? {
                    part = Part::Fail(c);
                    break;
                }
            }
            parts.push(part);
        }
    }
    for s in filtered(&het.ab, Proj::Sup)? {
        if let Some(c) = surj(s, &het.ctx_a.wedge)? {
            parts.push(Part::Fail(c));
            break;
        }
    }
    Ok(combine(parts).into())
}

fn cor_3_15_1(env: &AuditEnv) -> Result<Claimed> {
    let part = map_claim(env, Proj::Sup, true, &mut |r, s| {
        let back = psi(s, &r.dom.wedge)?;
        if back != *s {
            return Ok(Some(cx(
                "retract-section",
                Relation::Eq,
                None,
                None,
                vec![wit("s", s)],
                back.to_value(),
                s.to_value(),
            )));
        }
        let adj = kstar_pointwise(s, &r.dom.wedge)?;
        let round = psi(&adj, &r.dom.wedge)?;
        if round != *s {
            return Ok(Some(cx(
                "retract-adjoint-section",
                Relation::Eq,
                None,
                None,
                vec![wit("s", s)],
                round.to_value(),
                s.to_value(),
            )));
        }
        Ok(None)
    })?;
    Ok(Claimed::from(part).with_note("both sections checked: the inclusion and the right adjoint"))
}

fn cor_3_15_2(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Sampled { .. } => Ok(Claimed::skipped(
            "instance checks need the enumerated carrier",
        )),
        Mode::Exhaustive => {
            let (db, circ) = match (&env.db, &env.circ) {
                (Ok(db), Ok(c)) => (db, c),
                (Err(r), _) | (_, Err(r)) => return Ok(Claimed::skipped(r.clone())),
            };
            let m = db.dot.len();
            let mut in_image = vec![false; m];
            for i in 0..m {
                in_image[db.psi_t[i] as usize] = true;
            }
            let mut parts = Vec::new();
            let mut image_part = Part::Pass;
            for (i, &hit) in in_image.iter().enumerate() {
                let is_sup = db.sup_ids.contains(&i);
                if hit != is_sup {
                    image_part = Part::Fail(cx(
                        "hom-image-is-sup-carrier",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("f", db.dot.map(i))],
                        Value::bool(hit),
                        Value::bool(is_sup),
                    ));
                    break;
                }
            }
            parts.push(image_part);
            let mut op_part = Part::Pass;
            'op: for g in circ.sup.carrier() {
                for f in circ.sup.carrier() {
                    let gf = compose(g, f)?;
                    let lhs = psi(&gf, &env.ctx.as_ref().expect("db implies ctx").wedge)?;
                    if lhs != gf {
                        op_part = Part::Fail(cx(
                            "iso-instance-k",
                            Relation::Eq,
                            Some("circ"),
                            None,
                            vec![wit("g", g), wit("f", f)],
                            lhs.to_value(),
                            gf.to_value(),
                        ));
                        break 'op;
                    }
                }
            }
            parts.push(op_part);
            let id_note = if db.sup_ids.len() == m {
                "h = id instance: hypothesis holds and the isomorphism is the identity"
            } else {
                "h = id instance vacuous: its image of the sup-preserving maps is a proper subset"
            };
            Ok(Claimed::from(combine(parts)).with_note(format!(
                "checked on the h = k and h = id instances only; {id_note}"
            )))
        }
    }
}

// ---------------------------------------------------------------------------
// Claim runners: the adjunction and the nucleus quotient
// ---------------------------------------------------------------------------

fn thm_3_16_i(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let mut parts = vec![Part::from(laws::check_adjunction(
                &db.dot,
                &db.psi_t,
                &db.kstar_t,
                &db.sup_ids,
            ))];
            let ctx = env.ctx.as_ref().expect("db implies ctx");
            let mut agree = Part::Pass;
            for i in 0..db.dot.len() {
                let table = db.dot.map(db.kstar_t[i] as usize);
                let pw = kstar_pointwise(db.dot.map(i), &ctx.wedge)?;
                if *table != pw {
                    agree = Part::Fail(cx(
                        "kstar-pointwise-agrees",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("s", db.dot.map(i))],
                        table.to_value(),
                        pw.to_value(),
                    ));
                    break;
                }
            }
            parts.push(agree);
            Ok(combine(parts).into())
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let f = env.sampler.draw(&mut rng);
                let s = psi(&env.sampler.draw(&mut rng), &ctx.wedge)?;
                let lhs = psi(&f, &ctx.wedge)?.pointwise_leq(&s);
                let rhs = f.pointwise_leq(&kstar_pointwise(&s, &ctx.wedge)?);
                if lhs != rhs {
                    return Ok(Part::Fail(cx(
                        "psi-adjunction",
                        Relation::Eq,
                        Some("dot"),
                        None,
                        vec![wit("f", &f), wit("s", &s)],
                        Value::bool(lhs),
                        Value::bool(rhs),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass().with_note("right adjoint computed pointwise"))
        }
    }
}

fn thm_3_16_ii(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            for &s in &db.sup_ids {
                let round = db.psi_t[db.kstar_t[s] as usize] as usize;
                if round != s {
                    return Ok(Part::Fail(cx(
                        "retract-adjoint-section",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("s", db.dot.map(s))],
                        db.dot.map(round).to_value(),
                        db.dot.map(s).to_value(),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass())
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let s = psi(&env.sampler.draw(&mut rng), &ctx.wedge)?;
                let round = psi(&kstar_pointwise(&s, &ctx.wedge)?, &ctx.wedge)?;
                if round != s {
                    return Ok(Part::Fail(cx(
                        "retract-adjoint-section",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("s", &s)],
                        round.to_value(),
                        s.to_value(),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass())
        }
    }
}

fn thm_3_16_iii(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            Ok(Claimed::from(Part::from(laws::check_nucleus(
                &db.dot,
                &db.j_t,
                "psi-adjoint",
            )?)))
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let j = |m: &MonotoneMap| -> Result<MonotoneMap> {
                kstar_pointwise(&psi(m, &ctx.wedge)?, &ctx.wedge)
            };
            sampled_nucleus(
                env,
                OpKind::Dot,
                ctx,
                "nucleus:psi-adjoint@all(dot)",
                &j,
                seed,
                samples,
            )
        }
    }
}

/// Sampled nucleus laws, mirroring the table scan: inflationary, idempotent,
/// monotone on constructed comparable pairs, and submultiplicative.
fn sampled_nucleus(
    env: &AuditEnv,
    op: OpKind,
    ctx: &WedgeCtx,
    construction: &str,
    j: &dyn Fn(&MonotoneMap) -> Result<MonotoneMap>,
    seed: u64,
    samples: usize,
) -> Result<Claimed> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op_label = op.as_str();
    let fail = |law: &str, relation, witnesses, lhs: &MonotoneMap, rhs: &MonotoneMap| {
        Part::Fail(cx(
            law,
            relation,
            Some(op_label),
            Some(construction),
            witnesses,
            lhs.to_value(),
            rhs.to_value(),
        ))
    };
    for _ in 0..samples {
        let x = env.sampler.draw(&mut rng);
        let jx = j(&x)?;
        if !x.pointwise_leq(&jx) {
            return Ok(fail(
                "nucleus-inflationary",
                Relation::Leq,
                vec![wit("x", &x)],
                &x,
                &jx,
            )
            .into());
        }
        let jjx = j(&jx)?;
        if jjx != jx {
            return Ok(fail(
                "nucleus-idempotent",
                Relation::Eq,
                vec![wit("x", &x)],
                &jjx,
                &jx,
            )
            .into());
        }
        let up = pointwise_join(&env.l, &env.l, [&x, &env.sampler.draw(&mut rng)])?;
        let jup = j(&up)?;
        if !jx.pointwise_leq(&jup) {
            return Ok(fail(
                "nucleus-monotone",
                Relation::Leq,
                vec![wit("x", &x), wit("y", &up)],
                &jx,
                &jup,
            )
            .into());
        }
        let y = env.sampler.draw(&mut rng);
        let jy = j(&y)?;
        let lhs = op_between(op, ctx, &jx, &jy)?;
        let rhs = j(&op_between(op, ctx, &x, &y)?)?;
        if !lhs.pointwise_leq(&rhs) {
            return Ok(fail(
                "nucleus-submultiplicative",
                Relation::Leq,
                vec![wit("x", &x), wit("y", &y)],
                &lhs,
                &rhs,
            )
            .into());
        }
    }
    Ok(Claimed::pass())
}

fn thm_3_16(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let mut parts = Vec::new();

            // the adjoint lands on fixed points of j
            let mut image_fixed = Part::Pass;
            for &s in &db.sup_ids {
                let t = db.kstar_t[s] as usize;
                if db.j_t[t] as usize != t {
                    image_fixed = Part::Fail(cx(
                        "iso-image-fixed",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("s", db.dot.map(s))],
                        db.dot.map(db.j_t[t] as usize).to_value(),
                        db.dot.map(t).to_value(),
                    ));
                    break;
                }
            }
            parts.push(image_fixed);

            // injective on the sup-preserving maps
            let mut injective = Part::Pass;
            'inj: for (i, &s1) in db.sup_ids.iter().enumerate() {
                for &s2 in &db.sup_ids[i + 1..] {
                    if db.kstar_t[s1] == db.kstar_t[s2] {
                        injective = Part::Fail(cx(
                            "iso-injective",
                            Relation::Implies,
                            None,
                            None,
                            vec![wit("s1", db.dot.map(s1)), wit("s2", db.dot.map(s2))],
                            Value::bool(true),
                            Value::bool(false),
                        ));
                        break 'inj;
                    }
                }
            }
            parts.push(injective);

            // onto the fixed points
            let mut onto = Part::Pass;
            for t in 0..db.dot.len() {
                if db.j_t[t] as usize != t {
                    continue;
                }
                if db.kstar_t[db.psi_t[t] as usize] as usize != t {
                    onto = Part::Fail(cx(
                        "iso-onto-fixed",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("t", db.dot.map(t))],
                        db.dot
                            .map(db.kstar_t[db.psi_t[t] as usize] as usize)
                            .to_value(),
                        db.dot.map(t).to_value(),
                    ));
                    break;
                }
            }
            parts.push(onto);

            // order embedding
            let mut embed = Part::Pass;
            'emb: for &s1 in &db.sup_ids {
                for &s2 in &db.sup_ids {
                    let lhs = db.dot.map(s1).pointwise_leq(db.dot.map(s2));
                    let rhs = db
                        .dot
                        .map(db.kstar_t[s1] as usize)
                        .pointwise_leq(db.dot.map(db.kstar_t[s2] as usize));
                    if lhs != rhs {
                        embed = Part::Fail(cx(
                            "iso-order-embedding",
                            Relation::Eq,
                            None,
                            None,
                            vec![wit("s1", db.dot.map(s1)), wit("s2", db.dot.map(s2))],
                            Value::bool(lhs),
                            Value::bool(rhs),
                        ));
                        break 'emb;
                    }
                }
            }
            parts.push(embed);

            // transports circ to the quotient operation
            let circ = match &env.circ {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let mut mult = Part::Pass;
            'mult: for &g in &db.sup_ids {
                for &f in &db.sup_ids {
                    let gi = circ.all.index_of(db.dot.map(g)).expect("shared carrier");
                    let fi = circ.all.index_of(db.dot.map(f)).expect("shared carrier");
                    let lhs = db.kstar_t[circ.all.op_idx(gi, fi)] as usize;
                    let rhs = db.j_t[db
                        .dot
                        .op_idx(db.kstar_t[g] as usize, db.kstar_t[f] as usize)]
                        as usize;
                    if lhs != rhs {
                        mult = Part::Fail(cx(
                            "iso-multiplicative",
                            Relation::Eq,
                            Some("dot"),
                            None,
                            vec![wit("g", db.dot.map(g)), wit("f", db.dot.map(f))],
                            db.dot.map(lhs).to_value(),
                            db.dot.map(rhs).to_value(),
                        ));
                        break 'mult;
                    }
                }
            }
            parts.push(mult);
            Ok(combine(parts).into())
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let j = |m: &MonotoneMap| -> Result<MonotoneMap> {
                kstar_pointwise(&psi(m, &ctx.wedge)?, &ctx.wedge)
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let s1 = psi(&env.sampler.draw(&mut rng), &ctx.wedge)?;
                let s2 = psi(&env.sampler.draw(&mut rng), &ctx.wedge)?;
                let k1 = kstar_pointwise(&s1, &ctx.wedge)?;
                let k2 = kstar_pointwise(&s2, &ctx.wedge)?;
                if j(&k1)? != k1 {
                    return Ok(Part::Fail(cx(
                        "iso-image-fixed",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("s", &s1)],
                        j(&k1)?.to_value(),
                        k1.to_value(),
                    ))
                    .into());
                }
                let lhs = s1.pointwise_leq(&s2);
                let rhs = k1.pointwise_leq(&k2);
                if lhs != rhs {
                    return Ok(Part::Fail(cx(
                        "iso-order-embedding",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("s1", &s1), wit("s2", &s2)],
                        Value::bool(lhs),
                        Value::bool(rhs),
                    ))
                    .into());
                }
                let mlhs = kstar_pointwise(&compose(&s1, &s2)?, &ctx.wedge)?;
                let mrhs = j(&compose_dot(&k1, &k2, &ctx.wedge)?)?;
                if mlhs != mrhs {
                    return Ok(Part::Fail(cx(
                        "iso-multiplicative",
                        Relation::Eq,
                        Some("dot"),
                        None,
                        vec![wit("g", &s1), wit("f", &s2)],
                        mlhs.to_value(),
                        mrhs.to_value(),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass().with_note("bijectivity needs the enumerated carrier; not sampled"))
        }
    }
}

// ---------------------------------------------------------------------------
// Claim runners: the co side
// ---------------------------------------------------------------------------

fn prop_4_2(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let circ = match &env.circ {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let parts = vec![
                guarded(laws::check_associativity(&circ.meet, &env.limits))?,
                guarded(laws::check_meet_closure(
                    &circ.meet,
                    ClosureKind::Pointwise,
                    &env.limits,
                ))?,
                guarded(laws::check_inf_distributivity(&circ.meet, &env.limits))?,
            ];
            Ok(Claimed::from(combine(parts))
                .with_note("pointwise meet closure gives the arbitrary infima"))
        }
        Mode::Sampled { seed, samples } => {
            // rejection-filtered draws keep this meaningful on any lattice
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draw_meet = |rng: &mut ChaCha8Rng| -> Result<Option<MonotoneMap>> {
                let f = env.sampler.draw(rng);
                Ok(if classify(&f)?.meet_preserving {
                    Some(f)
                } else {
                    None
                })
            };
            for _ in 0..samples {
                let x = match draw_meet(&mut rng)? {
                    Some(x) => x,
                    None => continue,
                };
                let k = rng.gen_range(0..=3usize);
                let mut fam = Vec::new();
                for _ in 0..k {
                    if let Some(f) = draw_meet(&mut rng)? {
                        fam.push(f);
                    }
                }
                let bound = pointwise_meet(&env.l, &env.l, fam.iter())?;
                let lhs = compose(&x, &bound)?;
                let parts: Vec<MonotoneMap> =
                    fam.iter().map(|f| compose(&x, f)).collect::<Result<_>>()?;
                let rhs = pointwise_meet(&env.l, &env.l, parts.iter())?;
                if lhs != rhs {
                    return Ok(Part::Fail(cx(
                        "inf-distributivity-left",
                        Relation::Eq,
                        Some("circ"),
                        Some("meet(circ)"),
                        vec![
                            wit("x", &x),
                            Witness::new(
                                "family",
                                Value::MapFamily {
                                    maps: fam.iter().map(MonotoneMap::to_value).collect(),
                                },
                            ),
                        ],
                        lhs.to_value(),
                        rhs.to_value(),
                    ))
                    .into());
                }
                let lhs = compose(&bound, &x)?;
                let parts: Vec<MonotoneMap> =
                    fam.iter().map(|f| compose(f, &x)).collect::<Result<_>>()?;
                let rhs = pointwise_meet(&env.l, &env.l, parts.iter())?;
                if lhs != rhs {
                    return Ok(Part::Fail(cx(
                        "inf-distributivity-right",
                        Relation::Eq,
                        Some("circ"),
                        Some("meet(circ)"),
                        vec![
                            wit("x", &x),
                            Witness::new(
                                "family",
                                Value::MapFamily {
                                    maps: fam.iter().map(MonotoneMap::to_value).collect(),
                                },
                            ),
                        ],
                        lhs.to_value(),
                        rhs.to_value(),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass().with_note("samples rejection-filtered to the meet-preserving maps"))
        }
    }
}

fn prop_4_4(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Raw, Proj::Raw, Het::Compose, &mut |r, g, f| {
            let b = compose_bullet(g, f, &r.mid.co)?;
            Ok(monotone_violation("bullet-monotone", "bullet", &b, g, f))
        })?
        .into(),
    )
}

fn rem_4_5_1(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Raw, Proj::Raw, Het::Compose, &mut |r, g, f| {
            let one = compose_bullet(g, f, &r.mid.co)?;
            let two = compose_bullet_definitional(g, f, &r.mid.co, &r.cod.co)?;
            if one == two {
                return Ok(None);
            }
            Ok(Some(cx(
                "bullet-one-variable-form",
                Relation::Eq,
                Some("bullet"),
                None,
                vec![wit("g", g), wit("f", f)],
                one.to_value(),
                two.to_value(),
            )))
        })?
        .into(),
    )
}

fn rem_4_5_2(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Raw, Proj::Raw, Het::Compose, &mut |r, g, f| {
            let c = compose(g, f)?;
            let b = compose_bullet(g, f, &r.mid.co)?;
            if c.pointwise_leq(&b) {
                return Ok(None);
            }
            Ok(Some(cx(
                "circ-leq-bullet",
                Relation::Leq,
                Some("bullet"),
                None,
                vec![wit("g", g), wit("f", f)],
                c.to_value(),
                b.to_value(),
            )))
        })?
        .into(),
    )
}

fn prop_4_6_1(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Raw, Proj::Meet, Het::Compose, &mut |r, g, f| {
            let b = compose_bullet(g, f, &r.mid.co)?;
            if classify(&b)?.meet_preserving {
                return Ok(None);
            }
            Ok(Some(cx(
                "bullet-preserves-meet",
                Relation::Eq,
                Some("bullet"),
                None,
                vec![wit("g", g), wit("f", f)],
                Value::bool(false),
                Value::bool(true),
            )))
        })?
        .into(),
    )
}

fn prop_4_6_2(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Meet, Proj::Meet, Het::Compose, &mut |r, g, f| {
            let b = compose_bullet(g, f, &r.mid.co)?;
            let c = compose(g, f)?;
            if b == c {
                return Ok(None);
            }
            Ok(Some(cx(
                "bullet-collapses-to-circ",
                Relation::Eq,
                Some("bullet"),
                None,
                vec![wit("g", g), wit("f", f)],
                b.to_value(),
                c.to_value(),
            )))
        })?
        .into(),
    )
}

fn prop_4_6_3(env: &AuditEnv) -> Result<Claimed> {
    Ok(
        pair_claim(env, Proj::Raw, Proj::Raw, Het::Compose, &mut |r, g, f| {
            let d = compose_dot(g, f, &r.mid.wedge)?;
            let b = compose_bullet(g, f, &r.mid.co)?;
            if d.pointwise_leq(&b) {
                return Ok(None);
            }
            Ok(Some(cx(
                "dot-leq-bullet",
                Relation::Leq,
                None,
                None,
                vec![wit("g", g), wit("f", f)],
                d.to_value(),
                b.to_value(),
            )))
        })?
        .into(),
    )
}

fn prop_4_6_4(env: &AuditEnv) -> Result<Claimed> {
    let mut qualified = 0usize;
    let part = pair_claim(env, Proj::Raw, Proj::Raw, Het::Compose, &mut |r, g, f| {
        let cg = classify(g)?;
        let cf = classify(f)?;
        if !(cg.sup_preserving && cg.meet_preserving && cf.sup_preserving && cf.meet_preserving) {
            return Ok(None);
        }
        qualified += 1;
        let b = compose_bullet(g, f, &r.mid.co)?;
        let d = compose_dot(g, f, &r.mid.wedge)?;
        if b == d {
            return Ok(None);
        }
        Ok(Some(cx(
            "bullet-equals-dot",
            Relation::Eq,
            None,
            None,
            vec![wit("g", g), wit("f", f)],
            b.to_value(),
            d.to_value(),
        )))
    })?;
    let claimed = Claimed::from(part);
    Ok(if qualified == 0 {
        claimed.with_note("no scanned pair satisfied the doubly preserving hypothesis")
    } else {
        claimed.with_note(format!("{qualified} doubly preserving pairs checked"))
    })
}

fn thm_4_8(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let parts = vec![
                guarded(laws::check_associativity(&db.bullet, &env.limits))?,
                guarded(laws::check_meet_closure(
                    &db.bullet,
                    ClosureKind::Pointwise,
                    &env.limits,
                ))?,
                guarded(laws::check_inf_distributivity(&db.bullet, &env.limits))?,
            ];
            Ok(combine(parts).into())
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let parts = vec![
                laws::sampled_associativity(&env.l, Some(ctx), OpKind::Bullet, seed, samples)?
                    .into(),
                laws::sampled_distributivity(
                    &env.l,
                    Some(ctx),
                    OpKind::Bullet,
                    false,
                    seed,
                    samples,
                )?
                .into(),
            ];
            Ok(Claimed::from(combine(parts))
                .with_note("meet closure is definitional on the full carrier"))
        }
    }
}

fn prop_4_9(env: &AuditEnv) -> Result<Claimed> {
    Ok(map_claim(env, Proj::Raw, true, &mut |r, f| {
        let m = phi(f, &r.dom.co)?;
        if classify(&m)?.meet_preserving {
            return Ok(None);
        }
        Ok(Some(cx(
            "phi-meet-preserving",
            Relation::Eq,
            None,
            None,
            vec![wit("f", f)],
            Value::bool(false),
            Value::bool(true),
        )))
    })?
    .into())
}

fn cor_4_10_1(env: &AuditEnv) -> Result<Claimed> {
    Ok(map_claim(env, Proj::Raw, true, &mut |r, f| {
        let one = phi(f, &r.dom.co)?;
        let two = phi_definitional(f, &r.dom.co, &r.cod.co)?;
        if one == two {
            return Ok(None);
        }
        Ok(Some(cx(
            "phi-one-variable-form",
            Relation::Eq,
            None,
            None,
            vec![wit("f", f)],
            one.to_value(),
            two.to_value(),
        )))
    })?
    .into())
}

fn cor_4_10_2(env: &AuditEnv) -> Result<Claimed> {
    Ok(map_claim(env, Proj::Raw, true, &mut |r, f| {
        let m = phi(f, &r.dom.co)?;
        if f.pointwise_leq(&m) {
            return Ok(None);
        }
        Ok(Some(cx(
            "phi-inflationary",
            Relation::Leq,
            None,
            None,
            vec![wit("f", f)],
            f.to_value(),
            m.to_value(),
        )))
    })?
    .into())
}

fn cor_4_10_3(env: &AuditEnv) -> Result<Claimed> {
    Ok(map_claim(env, Proj::Meet, true, &mut |r, f| {
        let m = phi(f, &r.dom.co)?;
        if m == *f {
            return Ok(None);
        }
        Ok(Some(cx(
            "phi-fixes-meet-preserving",
            Relation::Eq,
            None,
            None,
            vec![wit("f", f)],
            m.to_value(),
            f.to_value(),
        )))
    })?
    .into())
}

fn prop_4_12(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            // the nucleus premise first, so a failure lands here rather than
            // as an opaque construction error
            match laws::check_nucleus(&db.bullet, &db.phi_t, "phi")? {
                LawOutcome::Fail(c) => return Ok(Part::Fail(c).into()),
                LawOutcome::Pass => {}
            }
            let q = MapAlgebra::quotient(&db.bullet, &db.phi_t, "phi")?;
            let parts = vec![
                guarded(laws::check_associativity(&q, &env.limits))?,
                guarded(laws::check_meet_closure(
                    &q,
                    ClosureKind::Least,
                    &env.limits,
                ))?,
                guarded(laws::check_inf_distributivity(&q, &env.limits))?,
            ];
            Ok(combine(parts).into())
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let opj = |g: &MonotoneMap, f: &MonotoneMap| -> Result<MonotoneMap> {
                phi(&compose_bullet(g, f, &ctx.co)?, &ctx.co)
            };
            for _ in 0..samples {
                let x = phi(&env.sampler.draw(&mut rng), &ctx.co)?;
                let y = phi(&env.sampler.draw(&mut rng), &ctx.co)?;
                let z = phi(&env.sampler.draw(&mut rng), &ctx.co)?;
                let lhs = opj(&opj(&x, &y)?, &z)?;
                let rhs = opj(&x, &opj(&y, &z)?)?;
                if lhs != rhs {
                    return Ok(Part::Fail(cx(
                        "associativity",
                        Relation::Eq,
                        Some("bullet/phi"),
                        Some("quotient-bullet(phi)"),
                        vec![wit("x", &x), wit("y", &y), wit("z", &z)],
                        lhs.to_value(),
                        rhs.to_value(),
                    ))
                    .into());
                }
                let k = rng.gen_range(0..=3usize);
                let fam: Vec<MonotoneMap> = (0..k)
                    .map(|_| phi(&env.sampler.draw(&mut rng), &ctx.co))
                    .collect::<Result<_>>()?;
                let bound = pointwise_meet(&env.l, &env.l, fam.iter())?;
                let lhs = opj(&x, &bound)?;
                let parts: Vec<MonotoneMap> =
                    fam.iter().map(|f| opj(&x, f)).collect::<Result<_>>()?;
                let rhs = pointwise_meet(&env.l, &env.l, parts.iter())?;
                if lhs != rhs {
                    return Ok(Part::Fail(cx(
                        "inf-distributivity-left",
                        Relation::Eq,
                        Some("bullet/phi"),
                        Some("quotient-bullet(phi)"),
                        vec![
                            wit("x", &x),
                            Witness::new(
                                "family",
                                Value::MapFamily {
                                    maps: fam.iter().map(MonotoneMap::to_value).collect(),
                                },
                            ),
                        ],
                        lhs.to_value(),
                        rhs.to_value(),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass().with_note("quotient meets taken pointwise on fixed points"))
        }
    }
}

fn thm_4_14_i(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            Ok(Claimed::from(Part::from(laws::check_nucleus(
                &db.bullet, &db.phi_t, "phi",
            )?)))
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let j = |m: &MonotoneMap| -> Result<MonotoneMap> { phi(m, &ctx.co) };
            sampled_nucleus(
                env,
                OpKind::Bullet,
                ctx,
                "nucleus:phi@all(bullet)",
                &j,
                seed,
                samples,
            )
        }
    }
}

fn thm_4_14_ii(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let db = match &env.db {
                Ok(db) => db,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            for i in 0..db.dot.len() {
                let fixed = db.phi_t[i] as usize == i;
                let meet = db.meet_ids.contains(&i);
                if fixed != meet {
                    return Ok(Part::Fail(cx(
                        "fixed-points-are-meet-preserving",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("f", db.dot.map(i))],
                        Value::bool(fixed),
                        Value::bool(meet),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass())
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let f = env.sampler.draw(&mut rng);
                let fixed = phi(&f, &ctx.co)? == f;
                let meet = classify(&f)?.meet_preserving;
                if fixed != meet {
                    return Ok(Part::Fail(cx(
                        "fixed-points-are-meet-preserving",
                        Relation::Eq,
                        None,
                        None,
                        vec![wit("f", &f)],
                        Value::bool(fixed),
                        Value::bool(meet),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass())
        }
    }
}

fn thm_4_14(env: &AuditEnv) -> Result<Claimed> {
    match env.mode {
        Mode::Exhaustive => {
            let (db, circ) = match (&env.db, &env.circ) {
                (Ok(db), Ok(c)) => (db, c),
                (Err(r), _) | (_, Err(r)) => return Ok(Claimed::skipped(r.clone())),
            };
            // carrier agreement is Thm 4.14(ii); here the operations must match
            for &g in &db.meet_ids {
                for &f in &db.meet_ids {
                    let quot = db.phi_t[db.bullet.op_idx(g, f)] as usize;
                    let gi = circ.all.index_of(db.dot.map(g)).expect("shared carrier");
                    let fi = circ.all.index_of(db.dot.map(f)).expect("shared carrier");
                    let comp = db
                        .dot
                        .index_of(circ.all.map(circ.all.op_idx(gi, fi)))
                        .expect("shared carrier");
                    if quot != comp {
                        return Ok(Part::Fail(cx(
                            "quotient-op-equals-circ",
                            Relation::Eq,
                            Some("bullet/phi"),
                            None,
                            vec![wit("g", db.dot.map(g)), wit("f", db.dot.map(f))],
                            db.dot.map(quot).to_value(),
                            db.dot.map(comp).to_value(),
                        ))
                        .into());
                    }
                }
            }
            Ok(Claimed::pass())
        }
        Mode::Sampled { seed, samples } => {
            let ctx = match &env.ctx {
                Ok(c) => c,
                Err(r) => return Ok(Claimed::skipped(r.clone())),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let g = phi(&env.sampler.draw(&mut rng), &ctx.co)?;
                let f = phi(&env.sampler.draw(&mut rng), &ctx.co)?;
                let quot = phi(&compose_bullet(&g, &f, &ctx.co)?, &ctx.co)?;
                let comp = compose(&g, &f)?;
                if quot != comp {
                    return Ok(Part::Fail(cx(
                        "quotient-op-equals-circ",
                        Relation::Eq,
                        Some("bullet/phi"),
                        None,
                        vec![wit("g", &g), wit("f", &f)],
                        quot.to_value(),
                        comp.to_value(),
                    ))
                    .into());
                }
            }
            Ok(Claimed::pass())
        }
    }
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

/// Resolves the canonical generator names used by the audit and the fixed
/// heterogeneous family.
pub fn lattice_by_name(name: &str) -> Option<Arc<Lattice>> {
    if let Some(n) = name
        .strip_prefix("chain(")
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|s| s.parse::<usize>().ok())
    {
        return Lattice::chain(n).ok().map(Arc::new);
    }
    if let Some(k) = name
        .strip_prefix("boolean(")
        .and_then(|s| s.strip_suffix(')'))
        .and_then(|s| s.parse::<usize>().ok())
    {
        return Lattice::boolean(k).ok().map(Arc::new);
    }
    match name {
        "m3" => Some(Arc::new(Lattice::diamond_m3())),
        "n5" => Some(Arc::new(Lattice::pentagon_n5())),
        _ => None,
    }
}

/// Re-evaluates a counterexample from scratch with the canonical name
/// resolver. Returns true when the violation reproduces.
pub fn replay(c: &Counterexample) -> Result<bool> {
    replay_with(c, &lattice_by_name)
}

/// Like [`replay`], resolving lattice names through `resolve` (so audits of
/// loaded lattices can hand back the deserialized original).
pub fn replay_with(
    c: &Counterexample,
    resolve: &dyn Fn(&str) -> Option<Arc<Lattice>>,
) -> Result<bool> {
    Rx {
        c,
        resolve,
        limits: Limits::default(),
        cache: std::cell::RefCell::new(HashMap::new()),
    }
    .run()
}

struct Rx<'a> {
    c: &'a Counterexample,
    resolve: &'a dyn Fn(&str) -> Option<Arc<Lattice>>,
    limits: Limits,
    cache: std::cell::RefCell<HashMap<String, Arc<Lattice>>>,
}

impl Rx<'_> {
    fn lat(&self, name: &str) -> Result<Arc<Lattice>> {
        if let Some(l) = self.cache.borrow().get(name) {
            return Ok(l.clone());
        }
        let l = (self.resolve)(name)
            .ok_or_else(|| Error::InvalidInput(format!("cannot resolve lattice '{name}'")))?;
        self.cache.borrow_mut().insert(name.to_string(), l.clone());
        Ok(l)
    }

    fn value(&self, name: &str) -> Result<&Value> {
        self.c
            .witness(name)
            .ok_or_else(|| Error::InvalidInput(format!("counterexample lacks witness '{name}'")))
    }

    fn map_of(&self, v: &Value) -> Result<MonotoneMap> {
        match v {
            Value::Map { dom, cod, image } => {
                MonotoneMap::new(&self.lat(dom)?, &self.lat(cod)?, image)
            }
            _ => Err(Error::InvalidInput("expected a map value".into())),
        }
    }

    fn map(&self, name: &str) -> Result<MonotoneMap> {
        self.map_of(self.value(name)?)
    }

    fn lhs_map(&self) -> Result<MonotoneMap> {
        self.map_of(&self.c.lhs)
    }

    fn rhs_map(&self) -> Result<MonotoneMap> {
        self.map_of(&self.c.rhs)
    }

    fn family(&self, name: &str) -> Result<Vec<MonotoneMap>> {
        match self.value(name)? {
            Value::MapFamily { maps } => maps.iter().map(|m| self.map_of(m)).collect(),
            _ => Err(Error::InvalidInput("expected a map family".into())),
        }
    }

    fn element(&self, name: &str) -> Result<(Arc<Lattice>, usize)> {
        match self.value(name)? {
            Value::Element { lattice, index } => Ok((self.lat(lattice)?, *index)),
            _ => Err(Error::InvalidInput("expected an element value".into())),
        }
    }

    fn element_set(&self, name: &str) -> Result<(Arc<Lattice>, Vec<usize>)> {
        match self.value(name)? {
            Value::ElementSet { lattice, indices } => Ok((self.lat(lattice)?, indices.clone())),
            _ => Err(Error::InvalidInput("expected an element set".into())),
        }
    }

    /// Prefers the oracle; falls back to the fast rule when the scan is too
    /// large and the lattice admits it.
    fn wedge(&self, l: &Arc<Lattice>) -> Result<WedgeRelation> {
        match WedgeRelation::wedge(l, WedgeMethod::Oracle, &self.limits) {
            Ok(w) => Ok(w),
            Err(Error::SizeLimitExceeded { .. }) => {
                WedgeRelation::wedge(l, WedgeMethod::Fast, &self.limits)
            }
            Err(e) => Err(e),
        }
    }

    fn co_wedge(&self, l: &Arc<Lattice>) -> Result<WedgeRelation> {
        match WedgeRelation::co_wedge(l, WedgeMethod::Oracle, &self.limits) {
            Ok(w) => Ok(w),
            Err(Error::SizeLimitExceeded { .. }) => {
                WedgeRelation::co_wedge(l, WedgeMethod::Fast, &self.limits)
            }
            Err(e) => Err(e),
        }
    }

    fn ctx(&self, l: &Arc<Lattice>) -> Result<WedgeCtx> {
        Ok(WedgeCtx {
            lattice: l.clone(),
            wedge: self.wedge(l)?,
            co: self.co_wedge(l)?,
        })
    }

    fn op_kind(&self) -> Result<OpKind> {
        let op = self
            .c
            .op
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("counterexample lacks an op".into()))?;
        let base = op.split('/').next().unwrap_or(op);
        match base {
            "circ" => Ok(OpKind::Circ),
            "dot" => Ok(OpKind::Dot),
            "bullet" => Ok(OpKind::Bullet),
            other => Err(Error::InvalidInput(format!("unknown op '{other}'"))),
        }
    }

    /// The nucleus named by the op suffix or construction, if any.
    fn j_label(&self) -> Option<&str> {
        if let Some(op) = self.c.op.as_deref() {
            if let Some((_, j)) = op.split_once('/') {
                return Some(j);
            }
        }
        if let Some(cons) = self.c.construction.as_deref() {
            if let Some(rest) = cons.strip_prefix("nucleus:") {
                return rest.split('@').next();
            }
            if let Some(inner) = cons
                .strip_prefix("quotient-")
                .and_then(|s| s.split_once('('))
            {
                return inner.1.strip_suffix(')');
            }
        }
        None
    }

    fn apply_j(&self, label: &str, m: &MonotoneMap) -> Result<MonotoneMap> {
        let l = m.dom().clone();
        match label {
            "psi-adjoint" => {
                let w = self.wedge(&l)?;
                kstar_pointwise(&psi(m, &w)?, &w)
            }
            "phi" => phi(m, &self.co_wedge(&l)?),
            other => Err(Error::InvalidInput(format!("unknown nucleus '{other}'"))),
        }
    }

    fn apply_op(&self, op: OpKind, g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
        let mid = self.ctx(f.cod())?;
        let raw = op_between(op, &mid, g, f)?;
        match self.j_label() {
            Some(j) => self.apply_j(j, &raw),
            None => Ok(raw),
        }
    }

    fn run(&self) -> Result<bool> {
        let law = self.c.law.as_str();
        match law {
            // -------------------------------------------------- algebra laws
            "associativity" => {
                let op = self.op_kind()?;
                let (x, y, z) = (self.map("x")?, self.map("y")?, self.map("z")?);
                let lhs = self.apply_op(op, &self.apply_op(op, &x, &y)?, &z)?;
                let rhs = self.apply_op(op, &x, &self.apply_op(op, &y, &z)?)?;
                Ok(lhs != rhs)
            }
            "left-unit" => {
                let op = self.op_kind()?;
                let (e, f) = (self.map("e")?, self.map("f")?);
                Ok(self.apply_op(op, &e, &f)? != f)
            }
            "right-unit" => {
                let op = self.op_kind()?;
                let (e, f) = (self.map("e")?, self.map("f")?);
                Ok(self.apply_op(op, &f, &e)? != f)
            }
            "join-closure" | "meet-closure" => self.replay_closure(law),
            "sup-distributivity-left"
            | "sup-distributivity-right"
            | "inf-distributivity-left"
            | "inf-distributivity-right" => self.replay_distributivity(law),
            "subalgebra-membership" => {
                let f = self.map("f")?;
                let (_, sup_label) = self.subalgebra_labels()?;
                let carrier = self.carrier_by_label(sup_label, f.dom())?;
                Ok(!carrier.contains(&f))
            }
            "subalgebra-op" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let (sub_label, sup_label) = self.subalgebra_labels()?;
                let inner = self.op_by_label(sub_label, &g, &f)?;
                let outer = self.op_by_label(sup_label, &g, &f)?;
                Ok(inner != outer)
            }
            "nucleus-inflationary" => {
                let x = self.map("x")?;
                let j = self.require_j()?;
                Ok(!x.pointwise_leq(&self.apply_j(j, &x)?))
            }
            "nucleus-idempotent" => {
                let x = self.map("x")?;
                let j = self.require_j()?;
                let jx = self.apply_j(j, &x)?;
                Ok(self.apply_j(j, &jx)? != jx)
            }
            "nucleus-monotone" => {
                let (x, y) = (self.map("x")?, self.map("y")?);
                let j = self.require_j()?;
                Ok(x.pointwise_leq(&y)
                    && !self.apply_j(j, &x)?.pointwise_leq(&self.apply_j(j, &y)?))
            }
            "nucleus-submultiplicative" => {
                let (x, y) = (self.map("x")?, self.map("y")?);
                let j = self.require_j()?;
                let op = self.op_kind()?;
                let mid = self.ctx(x.cod())?;
                let lhs = op_between(op, &mid, &self.apply_j(j, &x)?, &self.apply_j(j, &y)?)?;
                let rhs = self.apply_j(j, &op_between(op, &mid, &x, &y)?)?;
                Ok(!lhs.pointwise_leq(&rhs))
            }
            "psi-adjunction" => {
                let (f, s) = (self.map("f")?, self.map("s")?);
                let w = self.wedge(f.dom())?;
                let lhs = psi(&f, &w)?.pointwise_leq(&s);
                let rhs = f.pointwise_leq(&kstar_pointwise(&s, &w)?);
                Ok(lhs != rhs)
            }
            // -------------------------------------------------- wedge axioms
            "wedge-bounds" | "co-bounds" => {
                let (l, y) = self.element("y")?;
                let rel = self.relation_for(law, &l)?;
                let base = if law.starts_with("co") {
                    l.top().ok_or(Error::NotALattice)?
                } else {
                    l.bottom().ok_or(Error::NotALattice)?
                };
                Ok(rel.holds(base, y) != (y != base))
            }
            "wedge-down-closed" | "co-up-closed" => {
                let (l, x) = self.element("x")?;
                let (_, x2) = self.element("x2")?;
                let (_, y) = self.element("y")?;
                let rel = self.relation_for(law, &l)?;
                let side = if law.starts_with("co") {
                    l.leq(x, x2)
                } else {
                    l.leq(x2, x)
                };
                Ok(rel.holds(x, y) && side && !rel.holds(x2, y))
            }
            "wedge-up-closed" | "co-down-closed" => {
                let (l, x) = self.element("x")?;
                let (_, y) = self.element("y")?;
                let (_, y2) = self.element("y2")?;
                let rel = self.relation_for(law, &l)?;
                let side = if law.starts_with("co") {
                    l.leq(y2, y)
                } else {
                    l.leq(y, y2)
                };
                Ok(rel.holds(x, y) && side && !rel.holds(x, y2))
            }
            "wedge-below-order" | "co-above-order" => {
                let (l, x) = self.element("x")?;
                let (_, y) = self.element("y")?;
                let rel = self.relation_for(law, &l)?;
                let ord = if law.starts_with("co") {
                    l.leq(y, x)
                } else {
                    l.leq(x, y)
                };
                Ok(rel.holds(x, y) && !ord)
            }
            "wedge-family-split" | "co-family-split" => {
                let (l, x) = self.element("x")?;
                let (_, fam) = self.element_set("family")?;
                let rel = self.relation_for(law, &l)?;
                let bound = if law.starts_with("co") {
                    l.meet_iter(fam.iter().copied())
                } else {
                    l.join_iter(fam.iter().copied())
                }
                .ok_or(Error::NotALattice)?;
                let lhs = rel.holds(x, bound);
                let rhs = fam.iter().any(|&u| rel.holds(x, u));
                Ok(lhs != rhs)
            }
            "wedge-join-identity" | "co-meet-identity" => {
                let (l, y) = self.element("y")?;
                let rel = self.relation_for(law, &l)?;
                let members = (0..l.n()).filter(|&x| rel.holds(x, y));
                let agg = if law.starts_with("co") {
                    l.meet_iter(members)
                } else {
                    l.join_iter(members)
                }
                .ok_or(Error::NotALattice)?;
                Ok(agg != y)
            }
            // -------------------------------------------------- map-order laws
            "sup-closed-under-pointwise-join" => {
                let fam = self.family("family")?;
                let (dom, cod) = self.family_homset(&fam)?;
                let join = pointwise_join(&dom, &cod, fam.iter())?;
                Ok(!classify(&join)?.sup_preserving)
            }
            "meet-closed-under-pointwise-meet" => {
                let fam = self.family("family")?;
                let (dom, cod) = self.family_homset(&fam)?;
                let meet = pointwise_meet(&dom, &cod, fam.iter())?;
                Ok(!classify(&meet)?.meet_preserving)
            }
            "circ-preserves-sup" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                Ok(classify(&g)?.sup_preserving
                    && classify(&f)?.sup_preserving
                    && !classify(&compose(&g, &f)?)?.sup_preserving)
            }
            "pointwise-bottom" => {
                let f = self.map("f")?;
                Ok(!MonotoneMap::const_bottom(f.dom(), f.cod())?.pointwise_leq(&f))
            }
            "pointwise-top" => {
                let f = self.map("f")?;
                Ok(!f.pointwise_leq(&MonotoneMap::const_top(f.dom(), f.cod())?))
            }
            "sup-top-member" => {
                let f = self.map("f")?;
                Ok(!classify(&top_s_between(f.dom(), f.cod())?)?.sup_preserving)
            }
            "sup-bottom-member" => {
                let f = self.map("f")?;
                Ok(!classify(&MonotoneMap::const_bottom(f.dom(), f.cod())?)?.sup_preserving)
            }
            "sup-top-bound" => {
                let f = self.map("f")?;
                Ok(classify(&f)?.sup_preserving
                    && !f.pointwise_leq(&top_s_between(f.dom(), f.cod())?))
            }
            "meet-bottom-member" => {
                let f = self.map("f")?;
                Ok(!classify(&bottom_m_between(f.dom(), f.cod())?)?.meet_preserving)
            }
            "meet-top-member" => {
                let f = self.map("f")?;
                Ok(!classify(&MonotoneMap::const_top(f.dom(), f.cod())?)?.meet_preserving)
            }
            "meet-bottom-bound" => {
                let f = self.map("f")?;
                Ok(classify(&f)?.meet_preserving
                    && !bottom_m_between(f.dom(), f.cod())?.pointwise_leq(&f))
            }
            // -------------------------------------------------- dot laws
            "dot-leq-circ" | "sandwich-dot-below-circ" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let w = self.wedge(f.cod())?;
                Ok(!compose_dot(&g, &f, &w)?.pointwise_leq(&compose(&g, &f)?))
            }
            "circ-leq-bullet" | "sandwich-circ-below-bullet" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let co = self.co_wedge(f.cod())?;
                Ok(!compose(&g, &f)?.pointwise_leq(&compose_bullet(&g, &f, &co)?))
            }
            "dot-leq-bullet" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let mid = self.ctx(f.cod())?;
                Ok(!compose_dot(&g, &f, &mid.wedge)?
                    .pointwise_leq(&compose_bullet(&g, &f, &mid.co)?))
            }
            "dot-monotone" | "bullet-monotone" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let (_, x) = self.element("x")?;
                let (_, y) = self.element("y")?;
                let mid = self.ctx(f.cod())?;
                let h = if law.starts_with("dot") {
                    compose_dot(&g, &f, &mid.wedge)?
                } else {
                    compose_bullet(&g, &f, &mid.co)?
                };
                Ok(f.dom().leq(x, y) && !h.cod().leq(h.get(x), h.get(y)))
            }
            "dot-one-variable-form" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let mid = self.wedge(f.cod())?;
                let cod = self.wedge(g.cod())?;
                Ok(compose_dot(&g, &f, &mid)? != compose_dot_definitional(&g, &f, &mid, &cod)?)
            }
            "bullet-one-variable-form" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let mid = self.co_wedge(f.cod())?;
                let cod = self.co_wedge(g.cod())?;
                Ok(compose_bullet(&g, &f, &mid)?
                    != compose_bullet_definitional(&g, &f, &mid, &cod)?)
            }
            "dot-preserves-sup" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let w = self.wedge(f.cod())?;
                Ok(classify(&f)?.sup_preserving
                    && !classify(&compose_dot(&g, &f, &w)?)?.sup_preserving)
            }
            "bullet-preserves-meet" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let co = self.co_wedge(f.cod())?;
                Ok(classify(&f)?.meet_preserving
                    && !classify(&compose_bullet(&g, &f, &co)?)?.meet_preserving)
            }
            "dot-collapses-to-circ" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let w = self.wedge(f.cod())?;
                Ok(classify(&g)?.sup_preserving
                    && classify(&f)?.sup_preserving
                    && compose_dot(&g, &f, &w)? != compose(&g, &f)?)
            }
            "bullet-collapses-to-circ" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let co = self.co_wedge(f.cod())?;
                Ok(classify(&g)?.meet_preserving
                    && classify(&f)?.meet_preserving
                    && compose_bullet(&g, &f, &co)? != compose(&g, &f)?)
            }
            "bullet-equals-dot" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let (cg, cf) = (classify(&g)?, classify(&f)?);
                let mid = self.ctx(f.cod())?;
                Ok(cg.sup_preserving
                    && cg.meet_preserving
                    && cf.sup_preserving
                    && cf.meet_preserving
                    && compose_bullet(&g, &f, &mid.co)? != compose_dot(&g, &f, &mid.wedge)?)
            }
            "dot-of" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let w = self.wedge(f.cod())?;
                Ok(compose_dot(&g, &f, &w)? != self.rhs_map()?)
            }
            "dot-step-square" => {
                let (l, a) = self.element("a")?;
                let fa = MonotoneMap::step(&l, a)?;
                let w = self.wedge(&l)?;
                Ok(compose_dot(&fa, &fa, &w)? == fa)
            }
            "top-neq-topbar" => {
                let t = self.lhs_map()?;
                let l = t.dom().clone();
                Ok(top_s_between(&l, &l)? == MonotoneMap::const_top(&l, &l)?)
            }
            // -------------------------------------------------- psi laws
            "psi-sup-preserving" => {
                let f = self.map("f")?;
                Ok(!classify(&psi(&f, &self.wedge(f.dom())?)?)?.sup_preserving)
            }
            "psi-one-variable-form" => {
                let f = self.map("f")?;
                let wd = self.wedge(f.dom())?;
                let wc = self.wedge(f.cod())?;
                Ok(psi(&f, &wd)? != psi_definitional(&f, &wd, &wc)?)
            }
            "psi-deflationary" => {
                let f = self.map("f")?;
                Ok(!psi(&f, &self.wedge(f.dom())?)?.pointwise_leq(&f))
            }
            "psi-fixes-sup-preserving" | "retract-section" | "hom-surjective" => {
                let name = if law == "psi-fixes-sup-preserving" {
                    "f"
                } else {
                    "s"
                };
                let f = self.map(name)?;
                Ok(classify(&f)?.sup_preserving && psi(&f, &self.wedge(f.dom())?)? != f)
            }
            "psi-leq-iff" => {
                let (f, g) = (self.map("f")?, self.map("g")?);
                let w = self.wedge(f.dom())?;
                Ok(psi(&f, &w)?.pointwise_leq(&g) != f.pointwise_leq(&g))
            }
            "hom-multiplicative" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let w_mid = self.wedge(f.cod())?;
                let w_dom = self.wedge(f.dom())?;
                let lhs = psi(&compose_dot(&g, &f, &w_mid)?, &w_dom)?;
                let rhs = compose(&psi(&g, &w_mid)?, &psi(&f, &w_dom)?)?;
                Ok(lhs != rhs)
            }
            "hom-join-preserving" => {
                let fam = self.family("family")?;
                let (dom, cod) = self.family_homset(&fam)?;
                let w = self.wedge(&dom)?;
                let lhs = psi(&pointwise_join(&dom, &cod, fam.iter())?, &w)?;
                let parts: Vec<MonotoneMap> =
                    fam.iter().map(|f| psi(f, &w)).collect::<Result<_>>()?;
                Ok(lhs != pointwise_join(&dom, &cod, parts.iter())?)
            }
            "retract-adjoint-section" => {
                let s = self.map("s")?;
                let w = self.wedge(s.dom())?;
                Ok(classify(&s)?.sup_preserving && psi(&kstar_pointwise(&s, &w)?, &w)? != s)
            }
            "hom-image-is-sup-carrier" => {
                let f = self.map("f")?;
                let w = self.wedge(f.dom())?;
                Ok((psi(&f, &w)? == f) != classify(&f)?.sup_preserving)
            }
            "iso-instance-k" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let w = self.wedge(f.dom())?;
                let gf = compose(&g, &f)?;
                Ok(classify(&g)?.sup_preserving
                    && classify(&f)?.sup_preserving
                    && psi(&gf, &w)? != gf)
            }
            "kstar-pointwise-agrees" => {
                let s = self.map("s")?;
                let l = s.dom().clone();
                let w = self.wedge(&l)?;
                // fiber join over the enumerated carrier
                let mut acc = MonotoneMap::const_bottom(&l, &l)?;
                for g in enumerate_endo(&l, self.limits.enumeration)? {
                    if psi(&g, &w)?.pointwise_leq(&s) {
                        acc = pointwise_join(&l, &l, [&acc, &g])?;
                    }
                }
                Ok(acc != kstar_pointwise(&s, &w)?)
            }
            "iso-image-fixed" => {
                let s = self.map("s")?;
                let w = self.wedge(s.dom())?;
                let k = kstar_pointwise(&s, &w)?;
                Ok(kstar_pointwise(&psi(&k, &w)?, &w)? != k)
            }
            "iso-injective" => {
                let (s1, s2) = (self.map("s1")?, self.map("s2")?);
                let w = self.wedge(s1.dom())?;
                Ok(kstar_pointwise(&s1, &w)? == kstar_pointwise(&s2, &w)? && s1 != s2)
            }
            "iso-onto-fixed" => {
                // a fixed point the adjoint round-trip misses; j = kstar after
                // psi, so this can only reproduce if the tables disagreed
                let t = self.map("t")?;
                let w = self.wedge(t.dom())?;
                let round = kstar_pointwise(&psi(&t, &w)?, &w)?;
                let fixed = round == t;
                Ok(fixed && round != t)
            }
            "iso-order-embedding" => {
                let (s1, s2) = (self.map("s1")?, self.map("s2")?);
                let w = self.wedge(s1.dom())?;
                let lhs = s1.pointwise_leq(&s2);
                let rhs = kstar_pointwise(&s1, &w)?.pointwise_leq(&kstar_pointwise(&s2, &w)?);
                Ok(lhs != rhs)
            }
            "iso-multiplicative" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let ctx = self.ctx(g.dom())?;
                let lhs = kstar_pointwise(&compose(&g, &f)?, &ctx.wedge)?;
                let kg = kstar_pointwise(&g, &ctx.wedge)?;
                let kf = kstar_pointwise(&f, &ctx.wedge)?;
                let rhs = kstar_pointwise(
                    &psi(&compose_dot(&kg, &kf, &ctx.wedge)?, &ctx.wedge)?,
                    &ctx.wedge,
                )?;
                Ok(lhs != rhs)
            }
            // -------------------------------------------------- phi laws
            "phi-meet-preserving" => {
                let f = self.map("f")?;
                Ok(!classify(&phi(&f, &self.co_wedge(f.dom())?)?)?.meet_preserving)
            }
            "phi-one-variable-form" => {
                let f = self.map("f")?;
                let cd = self.co_wedge(f.dom())?;
                let cc = self.co_wedge(f.cod())?;
                Ok(phi(&f, &cd)? != phi_definitional(&f, &cd, &cc)?)
            }
            "phi-inflationary" => {
                let f = self.map("f")?;
                Ok(!f.pointwise_leq(&phi(&f, &self.co_wedge(f.dom())?)?))
            }
            "phi-fixes-meet-preserving" => {
                let f = self.map("f")?;
                Ok(classify(&f)?.meet_preserving && phi(&f, &self.co_wedge(f.dom())?)? != f)
            }
            "fixed-points-are-meet-preserving" => {
                let f = self.map("f")?;
                let fixed = phi(&f, &self.co_wedge(f.dom())?)? == f;
                Ok(fixed != classify(&f)?.meet_preserving)
            }
            "quotient-op-equals-circ" => {
                let (g, f) = (self.map("g")?, self.map("f")?);
                let co = self.co_wedge(f.cod())?;
                let quot = phi(&compose_bullet(&g, &f, &co)?, &co)?;
                Ok(quot != compose(&g, &f)?)
            }
            other => Err(Error::InvalidInput(format!(
                "replay does not understand law '{other}'"
            ))),
        }
    }

    fn require_j(&self) -> Result<&str> {
        self.j_label()
            .ok_or_else(|| Error::InvalidInput("counterexample names no nucleus".into()))
    }

    fn relation_for(&self, law: &str, l: &Arc<Lattice>) -> Result<WedgeRelation> {
        if law.starts_with("co") {
            self.co_wedge(l)
        } else {
            self.wedge(l)
        }
    }

    fn family_homset(&self, fam: &[MonotoneMap]) -> Result<(Arc<Lattice>, Arc<Lattice>)> {
        match fam.first() {
            Some(f) => Ok((f.dom().clone(), f.cod().clone())),
            // an empty family pins down no hom-set; its bound is the constant
            // bottom/top, which preserves everything, so it never violates
            None => Err(Error::InvalidInput(
                "empty family has no hom-set to replay in".into(),
            )),
        }
    }

    fn subalgebra_labels(&self) -> Result<(&str, &str)> {
        let cons = self
            .c
            .construction
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("counterexample lacks a construction".into()))?;
        cons.split_once(" <= ")
            .ok_or_else(|| Error::InvalidInput(format!("not a subalgebra construction: '{cons}'")))
    }

    /// Carrier named by an algebra label, e.g. `sup(circ)`.
    fn carrier_by_label(&self, label: &str, l: &Arc<Lattice>) -> Result<Vec<MonotoneMap>> {
        let family = label.split('(').next().unwrap_or(label);
        let endo = enumerate_endo(l, self.limits.enumeration)?;
        let mut out = Vec::new();
        for f in endo {
            let keep = match family {
                "all" | "quotient-dot" | "quotient-bullet" => true,
                "sup" => classify(&f)?.sup_preserving,
                "meet" => classify(&f)?.meet_preserving,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown carrier family '{other}'"
                    )))
                }
            };
            if keep {
                if let Some(rest) = label.strip_prefix("quotient-") {
                    let (op, j) = rest
                        .split_once('(')
                        .and_then(|(op, j)| j.strip_suffix(')').map(|j| (op, j)))
                        .ok_or_else(|| {
                            Error::InvalidInput(format!("bad quotient label '{label}'"))
                        })?;
                    let _ = op;
                    if self.apply_j(j, &f)? == f {
                        out.push(f);
                    }
                } else {
                    out.push(f);
                }
            }
        }
        Ok(out)
    }

    /// Operation named by an algebra label: the op inside the parentheses,
    /// wrapped with the quotient nucleus when the label asks for one.
    fn op_by_label(&self, label: &str, g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
        let inner = label
            .split_once('(')
            .and_then(|(_, rest)| rest.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidInput(format!("bad algebra label '{label}'")))?;
        let mid = self.ctx(f.cod())?;
        if let Some(rest) = label.strip_prefix("quotient-") {
            let (op_name, j) = rest
                .split_once('(')
                .and_then(|(op, j)| j.strip_suffix(')').map(|j| (op, j)))
                .ok_or_else(|| Error::InvalidInput(format!("bad quotient label '{label}'")))?;
            let op = parse_op(op_name)?;
            return self.apply_j(j, &op_between(op, &mid, g, f)?);
        }
        let op = parse_op(inner)?;
        op_between(op, &mid, g, f)
    }

    fn replay_closure(&self, law: &str) -> Result<bool> {
        let fam = self.family("family")?;
        let label = self
            .c
            .construction
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("closure replay needs a construction".into()))?;
        // the bound itself is recorded; its hom-set survives even an empty family
        let bound_name = if law == "join-closure" {
            "join"
        } else {
            "meet"
        };
        let bound_rec = self.map(bound_name)?;
        let l = bound_rec.dom().clone();
        let carrier = self.carrier_by_label(label, &l)?;
        let bound = if law == "join-closure" {
            pointwise_join(&l, &l, fam.iter())?
        } else {
            pointwise_meet(&l, &l, fam.iter())?
        };
        let pointwise_member = carrier.contains(&bound);
        let least_bound = label.starts_with("quotient-")
            || (label.starts_with("sup(") && law == "meet-closure")
            || (label.starts_with("meet(") && law == "join-closure");
        if least_bound {
            // least-bound closure: some carrier element must bound the family
            // and be least among such
            let candidates: Vec<&MonotoneMap> = carrier
                .iter()
                .filter(|c| {
                    if law == "join-closure" {
                        bound.pointwise_leq(c)
                    } else {
                        c.pointwise_leq(&bound)
                    }
                })
                .collect();
            let least = candidates.iter().find(|c| {
                candidates.iter().all(|d| {
                    if law == "join-closure" {
                        c.pointwise_leq(d)
                    } else {
                        d.pointwise_leq(c)
                    }
                })
            });
            Ok(least.is_none())
        } else {
            Ok(!pointwise_member)
        }
    }

    fn replay_distributivity(&self, law: &str) -> Result<bool> {
        let x = self.map("x")?;
        let fam = self.family("family")?;
        let label = self.c.construction.as_deref().ok_or_else(|| {
            Error::InvalidInput("distributivity replay needs a construction".into())
        })?;
        let l = x.dom().clone();
        let sup_side = law.starts_with("sup");
        let left = law.ends_with("left");
        let bound = if sup_side {
            pointwise_join(&l, &l, fam.iter())?
        } else {
            pointwise_meet(&l, &l, fam.iter())?
        };
        let apply = |g: &MonotoneMap, f: &MonotoneMap| self.op_by_label(label, g, f);
        let lhs = if left {
            apply(&x, &bound)?
        } else {
            apply(&bound, &x)?
        };
        let parts: Vec<MonotoneMap> = fam
            .iter()
            .map(|f| if left { apply(&x, f) } else { apply(f, &x) })
            .collect::<Result<_>>()?;
        let rhs = if sup_side {
            pointwise_join(&l, &l, parts.iter())?
        } else {
            pointwise_meet(&l, &l, parts.iter())?
        };
        Ok(lhs != rhs)
    }
}

fn parse_op(name: &str) -> Result<OpKind> {
    match name {
        "circ" => Ok(OpKind::Circ),
        "dot" => Ok(OpKind::Dot),
        "bullet" => Ok(OpKind::Bullet),
        other => Err(Error::InvalidInput(format!("unknown op '{other}'"))),
    }
}
