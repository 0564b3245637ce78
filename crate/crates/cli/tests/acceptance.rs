//! Acceptance gate: ten criteria, one test (and one pass/fail line) each.
//! Everything is recomputed here from the public API or the binary —
//! no expected value is copied out of the implementation under test.

use qlab_core::audit::{self, ClaimSelection, Mode, Verdict};
use qlab_core::laws::{
    check_associativity, check_inf_distributivity, check_join_closure, check_meet_closure,
    check_nucleus, check_right_unit, check_sup_distributivity, compose_tables, kstar_table,
    phi_table, psi_table, CarrierFamily, ClosureKind, LawOutcome, MapAlgebra, OpKind, WedgeCtx,
};
use qlab_core::limits::Limits;
use qlab_core::maps::{
    classify, compose, compose_bullet, compose_dot, enumerate_between, enumerate_endo,
    pointwise_join, MonotoneMap,
};
use qlab_core::wedge::{WedgeMethod, WedgeRelation};
use qlab_core::{Lattice, Poset};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

fn limits() -> Limits {
    Limits::default()
}

fn chain(n: usize) -> Arc<Lattice> {
    Arc::new(Lattice::chain(n).unwrap())
}

fn boolean(k: usize) -> Arc<Lattice> {
    Arc::new(Lattice::boolean(k).unwrap())
}

/// The four pair-exhaustion lattices: every law over every map pair stays
/// enumerable (3, 10, 35, and 36 endomaps).
fn small_zoo() -> Vec<Arc<Lattice>> {
    vec![chain(2), chain(3), chain(4), boolean(2)]
}

/// Downset lattices of every naturally labeled poset on up to four points:
/// order relations drawn from the upper triangle cover every isomorphism
/// class, and the builder closes them transitively.
fn all_small_downset_lattices() -> Vec<Arc<Lattice>> {
    let limits = limits();
    let mut out = Vec::new();
    for n in 1usize..=4 {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..(1 << slots.len()) {
            let pairs: Vec<(usize, usize)> = slots
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &p)| p)
                .collect();
            let poset = Poset::build(n, &pairs).unwrap();
            let name = format!("downsets(n={n},mask={mask})");
            out.push(Arc::new(
                Lattice::downset_lattice(&poset, name, &limits).unwrap(),
            ));
        }
    }
    out
}

fn assert_pass(outcome: LawOutcome, what: &str) {
    if let LawOutcome::Fail(cx) = outcome {
        panic!("{what} failed: {cx}");
    }
}

#[test]
fn criterion_01_fast_wedge_matches_the_oracle_across_the_zoo() {
    let limits = limits();
    let started = Instant::now();
    let mut zoo: Vec<Arc<Lattice>> = (2..=6).map(chain).collect();
    zoo.push(boolean(2));
    zoo.push(boolean(3));
    zoo.extend(all_small_downset_lattices());
    for seed in 0..20 {
        zoo.push(Arc::new(
            Lattice::from_random_poset(5, 0.35, seed, &limits).unwrap(),
        ));
    }
    assert!(zoo.len() > 100);
    for l in &zoo {
        let fast = WedgeRelation::wedge(l, WedgeMethod::Fast, &limits).unwrap();
        let oracle = WedgeRelation::wedge(l, WedgeMethod::Oracle, &limits).unwrap();
        assert_eq!(
            fast.pairs(),
            oracle.pairs(),
            "wedge mismatch on {}",
            l.name()
        );
        let co_fast = WedgeRelation::co_wedge(l, WedgeMethod::Fast, &limits).unwrap();
        let co_oracle = WedgeRelation::co_wedge(l, WedgeMethod::Oracle, &limits).unwrap();
        assert_eq!(
            co_fast.pairs(),
            co_oracle.pairs(),
            "co-wedge mismatch on {}",
            l.name()
        );
    }
    assert!(
        started.elapsed() < Duration::from_secs(10),
        "budget blown: {:?}",
        started.elapsed()
    );
}

#[test]
fn criterion_02_quantale_and_co_quantale_laws_hold_exhaustively() {
    let limits = limits();
    let started = Instant::now();
    for l in small_zoo() {
        let ctx = WedgeCtx::new(&l, &limits).unwrap();
        let dot = MapAlgebra::enumerated(&l, Some(&ctx), OpKind::Dot, CarrierFamily::All, &limits)
            .unwrap();
        assert_pass(
            check_associativity(&dot, &limits).unwrap(),
            "dot associativity",
        );
        assert_pass(
            check_join_closure(&dot, ClosureKind::Pointwise, &limits).unwrap(),
            "dot join closure",
        );
        assert_pass(
            check_sup_distributivity(&dot, &limits).unwrap(),
            "dot sup-distributivity",
        );

        let bullet =
            MapAlgebra::enumerated(&l, Some(&ctx), OpKind::Bullet, CarrierFamily::All, &limits)
                .unwrap();
        assert_pass(
            check_associativity(&bullet, &limits).unwrap(),
            "bullet associativity",
        );
        assert_pass(
            check_meet_closure(&bullet, ClosureKind::Pointwise, &limits).unwrap(),
            "bullet meet closure",
        );
        assert_pass(
            check_inf_distributivity(&bullet, &limits).unwrap(),
            "bullet inf-distributivity",
        );
    }
    assert!(
        started.elapsed() < Duration::from_secs(60),
        "budget blown: {:?}",
        started.elapsed()
    );
}

#[test]
fn criterion_03_compositions_collapse_on_preserving_pairs() {
    let limits = limits();
    for l in small_zoo() {
        let ctx = WedgeCtx::new(&l, &limits).unwrap();
        let maps = enumerate_endo(&l, limits.enumeration).unwrap();
        let class: Vec<_> = maps.iter().map(|f| classify(f).unwrap()).collect();
        let mut sup_pairs = 0usize;
        let mut meet_pairs = 0usize;
        let mut both_pairs = 0usize;
        for (gi, g) in maps.iter().enumerate() {
            for (fi, f) in maps.iter().enumerate() {
                let plain = compose(g, f).unwrap();
                if class[gi].sup_preserving && class[fi].sup_preserving {
                    sup_pairs += 1;
                    assert_eq!(compose_dot(g, f, &ctx.wedge).unwrap(), plain);
                }
                if class[gi].meet_preserving && class[fi].meet_preserving {
                    meet_pairs += 1;
                    assert_eq!(compose_bullet(g, f, &ctx.co).unwrap(), plain);
                }
                let doubly = |c: &qlab_core::maps::MapClass| c.sup_preserving && c.meet_preserving;
                if doubly(&class[gi]) && doubly(&class[fi]) {
                    both_pairs += 1;
                    assert_eq!(
                        compose_bullet(g, f, &ctx.co).unwrap(),
                        compose_dot(g, f, &ctx.wedge).unwrap()
                    );
                }
            }
        }
        assert!(
            sup_pairs > 0 && meet_pairs > 0 && both_pairs > 0,
            "{}",
            l.name()
        );
    }
}

#[test]
fn criterion_04_sandwich_holds_for_all_pairs_including_heterogeneous() {
    let limits = limits();
    for l in small_zoo() {
        let ctx = WedgeCtx::new(&l, &limits).unwrap();
        let maps = enumerate_endo(&l, limits.enumeration).unwrap();
        for g in &maps {
            for f in &maps {
                let dot = compose_dot(g, f, &ctx.wedge).unwrap();
                let circ = compose(g, f).unwrap();
                let bullet = compose_bullet(g, f, &ctx.co).unwrap();
                assert!(dot.pointwise_leq(&circ), "{}", l.name());
                assert!(circ.pointwise_leq(&bullet), "{}", l.name());
            }
        }
    }

    // Heterogeneous carriers: f: A -> B, g: B -> C for every choice of the
    // three lattices; both wedges live on the middle lattice B.
    let carriers = [chain(2), chain(3), boolean(2)];
    for a in &carriers {
        for b in &carriers {
            let ctx = WedgeCtx::new(b, &limits).unwrap();
            let inner = enumerate_between(a, b, limits.enumeration).unwrap();
            for c in &carriers {
                let outer = enumerate_between(b, c, limits.enumeration).unwrap();
                for g in &outer {
                    for f in &inner {
                        let dot = compose_dot(g, f, &ctx.wedge).unwrap();
                        let circ = compose(g, f).unwrap();
                        let bullet = compose_bullet(g, f, &ctx.co).unwrap();
                        assert!(dot.pointwise_leq(&circ));
                        assert!(circ.pointwise_leq(&bullet));
                    }
                }
            }
        }
    }
}

#[test]
fn criterion_05_projection_is_a_hom_and_its_adjoint_an_isomorphism() {
    let limits = limits();
    for l in [chain(2), chain(3), boolean(2)] {
        let ctx = WedgeCtx::new(&l, &limits).unwrap();
        let alg = MapAlgebra::enumerated(&l, Some(&ctx), OpKind::Dot, CarrierFamily::All, &limits)
            .unwrap();
        let psi_t = psi_table(&alg, &ctx).unwrap();
        let kstar_t = kstar_table(&alg, &psi_t).unwrap();
        let j_t = compose_tables(&kstar_t, &psi_t);

        let s_ids: Vec<usize> = (0..alg.len())
            .filter(|&i| classify(alg.map(i)).unwrap().sup_preserving)
            .collect();

        // k is surjective onto the sup-preserving classified family...
        let mut image: Vec<usize> = psi_t.iter().map(|&x| x as usize).collect();
        image.sort_unstable();
        image.dedup();
        assert_eq!(image, s_ids, "psi image on {}", l.name());

        // ...preserves the operation (dot upstairs, plain composition on S)...
        for i in 0..alg.len() {
            for k in 0..alg.len() {
                let lhs = psi_t[alg.op_idx(i, k)] as usize;
                let rhs = compose(alg.map(psi_t[i] as usize), alg.map(psi_t[k] as usize)).unwrap();
                assert_eq!(alg.index_of(&rhs), Some(lhs), "hom break on {}", l.name());
            }
        }

        // ...and preserves joins (empty and binary generate the rest).
        let bottom = MonotoneMap::const_bottom(&l, &l).unwrap();
        assert_eq!(
            psi_t[alg.index_of(&bottom).unwrap()] as usize,
            alg.index_of(&bottom).unwrap()
        );
        for i in 0..alg.len() {
            for k in 0..alg.len() {
                let join = pointwise_join(&l, &l, [alg.map(i), alg.map(k)]).unwrap();
                let lhs = psi_t[alg.index_of(&join).unwrap()] as usize;
                let rhs = pointwise_join(
                    &l,
                    &l,
                    [alg.map(psi_t[i] as usize), alg.map(psi_t[k] as usize)],
                )
                .unwrap();
                assert_eq!(alg.index_of(&rhs), Some(lhs));
            }
        }

        // The adjoint embeds S(L) onto the fixed points of j, preserving and
        // reflecting order, and carrying composition to the quotient product.
        let fixed: Vec<usize> = (0..alg.len()).filter(|&i| j_t[i] as usize == i).collect();
        let mut image: Vec<usize> = s_ids.iter().map(|&s| kstar_t[s] as usize).collect();
        image.sort_unstable();
        assert_eq!(image, fixed, "adjoint image on {}", l.name());
        for &s in &s_ids {
            for &t in &s_ids {
                if s != t {
                    assert_ne!(kstar_t[s], kstar_t[t], "adjoint collision on {}", l.name());
                }
                let fwd = alg.map(s).pointwise_leq(alg.map(t));
                let back = alg
                    .map(kstar_t[s] as usize)
                    .pointwise_leq(alg.map(kstar_t[t] as usize));
                assert_eq!(fwd, back, "order embedding break on {}", l.name());

                let st = compose(alg.map(s), alg.map(t)).unwrap();
                let lhs = kstar_t[alg.index_of(&st).unwrap()] as usize;
                let rhs = j_t[alg.op_idx(kstar_t[s] as usize, kstar_t[t] as usize)] as usize;
                assert_eq!(lhs, rhs, "operation break on {}", l.name());
            }
        }

        // Sub-claims, individually.
        for i in 0..alg.len() {
            assert!(
                alg.map(i)
                    .pointwise_leq(alg.map(kstar_t[psi_t[i] as usize] as usize)),
                "id <= k* o k fails on {}",
                l.name()
            );
        }
        for &s in &s_ids {
            assert_eq!(
                psi_t[kstar_t[s] as usize] as usize,
                s,
                "k o k* != id on {}",
                l.name()
            );
        }
        assert_pass(
            check_nucleus(&alg, &j_t, "psi-adjoint").unwrap(),
            "nucleus axioms",
        );
    }
}

#[test]
fn criterion_06_phi_quotient_of_bullet_is_composition_on_meet_maps() {
    let limits = limits();
    for l in [chain(2), chain(3), boolean(2)] {
        let ctx = WedgeCtx::new(&l, &limits).unwrap();
        let bullet =
            MapAlgebra::enumerated(&l, Some(&ctx), OpKind::Bullet, CarrierFamily::All, &limits)
                .unwrap();
        let phi_t = phi_table(&bullet, &ctx).unwrap();
        assert_pass(
            check_nucleus(&bullet, &phi_t, "phi").unwrap(),
            "phi nucleus",
        );

        let fixed: Vec<usize> = (0..bullet.len())
            .filter(|&i| phi_t[i] as usize == i)
            .collect();
        let classified: Vec<usize> = (0..bullet.len())
            .filter(|&i| classify(bullet.map(i)).unwrap().meet_preserving)
            .collect();
        assert_eq!(fixed, classified, "fixed points on {}", l.name());

        let quotient = MapAlgebra::quotient(&bullet, &phi_t, "phi").unwrap();
        assert_eq!(quotient.len(), fixed.len());
        for i in 0..quotient.len() {
            for k in 0..quotient.len() {
                let q = quotient.map(quotient.op_idx(i, k));
                let plain = compose(quotient.map(i), quotient.map(k)).unwrap();
                assert_eq!(q, &plain, "quotient op differs from circ on {}", l.name());
            }
        }

        // The generic checker suite on the quotient structure itself.
        assert_pass(
            check_associativity(&quotient, &limits).unwrap(),
            "quotient associativity",
        );
        assert_pass(
            check_meet_closure(&quotient, ClosureKind::Least, &limits).unwrap(),
            "quotient meet closure",
        );
        assert_pass(
            check_inf_distributivity(&quotient, &limits).unwrap(),
            "quotient inf-distributivity",
        );
    }
}

#[test]
fn criterion_07_negative_results_come_with_replayable_witnesses() {
    let limits = limits();
    // Composition on the full carrier is not sup-distributive.
    let c2 = chain(2);
    let circ =
        MapAlgebra::enumerated(&c2, None, OpKind::Circ, CarrierFamily::All, &limits).unwrap();
    match check_sup_distributivity(&circ, &limits).unwrap() {
        LawOutcome::Pass => panic!("expected a sup-distributivity violation for circ"),
        LawOutcome::Fail(cx) => {
            assert!(cx.law.starts_with("sup-distributivity"));
            assert!(audit::replay(&cx).unwrap(), "witness does not replay: {cx}");
        }
    }

    // The identity is not a right unit for dot: topbar-dot-id lands on the
    // sup-preserving top, not on topbar.
    let b2 = boolean(2);
    let ctx = WedgeCtx::new(&b2, &limits).unwrap();
    let topbar = MonotoneMap::const_top(&b2, &b2).unwrap();
    let id = MonotoneMap::identity(&b2);
    let projected = compose_dot(&topbar, &id, &ctx.wedge).unwrap();
    assert_eq!(projected.image(), vec![0, 3, 3, 3]);
    assert_ne!(projected, topbar);

    let dot =
        MapAlgebra::enumerated(&b2, Some(&ctx), OpKind::Dot, CarrierFamily::All, &limits).unwrap();
    let id_idx = dot.index_of(&id).unwrap();
    match check_right_unit(&dot, id_idx) {
        LawOutcome::Pass => panic!("identity must not be a right unit for dot"),
        LawOutcome::Fail(cx) => {
            assert!(audit::replay(&cx).unwrap(), "witness does not replay: {cx}");
        }
    }
}

#[test]
fn criterion_08_suspect_claims_get_brute_forced_verdicts_not_dogma() {
    let limits = limits();
    let c2 = chain(2);
    let sel = ClaimSelection::Ids(vec!["Cor 3.10(5)".into(), "Cor 3.13(4)".into()]);
    let reports = audit::audit(&c2, &sel, Mode::Exhaustive, &limits).unwrap();
    assert_eq!(reports.len(), 2);
    for r in &reports {
        match &r.verdict {
            Verdict::Skipped { reason } => {
                panic!(
                    "{} must settle exhaustively, got skip: {reason}",
                    r.claim_id
                )
            }
            Verdict::Pass => panic!(
                "{} passed; the derivation says the exhaustive scan refutes it",
                r.claim_id
            ),
            Verdict::Fail { counterexample } => {
                assert!(
                    audit::replay(counterexample).unwrap(),
                    "suspect witness for {} does not replay",
                    r.claim_id
                );
            }
        }
    }
    assert!(
        !audit::has_theorem_failure(&reports),
        "suspect refutations must not flip the exit code"
    );
}

fn qlab(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_09_audit_reports_are_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let gen = qlab(dir.path(), &["gen", "boolean", "2", "--out", "b2.json"]);
    assert!(gen.status.success());
    let base = [
        "audit",
        "b2.json",
        "--claims",
        "all",
        "--mode",
        "exhaustive",
        "--format",
        "json",
    ];
    let mut one = base.to_vec();
    one.extend(["--workers", "1"]);
    let mut four = base.to_vec();
    four.extend(["--workers", "4"]);
    let a = qlab(dir.path(), &one);
    let b = qlab(dir.path(), &four);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout, "worker count leaked into the report");
}

#[test]
fn criterion_10_sampled_audit_scales_to_chain_8() {
    let limits = limits();
    let started = Instant::now();
    let c8 = chain(8);
    let sel = ClaimSelection::Ids(vec![
        "Prop 3.7".into(),      // dot associativity
        "Prop 4.7".into(),      // bullet associativity
        "Remark 3.5(2)".into(), // dot below circ
        "Remark 4.5(2)".into(), // circ below bullet
        "Prop 4.6(3)".into(),   // dot below bullet
    ]);
    let mode = Mode::Sampled {
        seed: 7,
        samples: 10_000,
    };
    let reports = audit::audit(&c8, &sel, mode, &limits).unwrap();
    for r in &reports {
        assert!(r.verdict.is_pass(), "{} violated on samples", r.claim_id);
    }
    assert!(
        started.elapsed() < Duration::from_secs(60),
        "budget blown: {:?}",
        started.elapsed()
    );
}
