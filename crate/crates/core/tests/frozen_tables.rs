//! Pinned small-instance facts, exercised through the public API only.
//! A failure here means the meaning of a relation, carrier, or projection
//! changed — not merely an implementation detail.

use qlab_core::laws::{
    compose_tables, kstar_table, psi_table, CarrierFamily, MapAlgebra, OpKind, WedgeCtx,
};
use qlab_core::limits::Limits;
use qlab_core::maps::{classify, enumerate_between, enumerate_endo};
use qlab_core::wedge::{WedgeMethod, WedgeRelation};
use qlab_core::{Lattice, MonotoneMap};
use std::sync::Arc;

fn chain(n: usize) -> Arc<Lattice> {
    Arc::new(Lattice::chain(n).unwrap())
}

fn boolean(k: usize) -> Arc<Lattice> {
    Arc::new(Lattice::boolean(k).unwrap())
}

#[test]
fn wedge_tables_on_the_two_smallest_lattices_are_pinned() {
    let limits = Limits::default();
    let c2 = chain(2);
    let w = WedgeRelation::wedge(&c2, WedgeMethod::Oracle, &limits).unwrap();
    assert_eq!(w.pairs(), vec![(0, 1), (1, 1)]);
    let co = WedgeRelation::co_wedge(&c2, WedgeMethod::Oracle, &limits).unwrap();
    assert_eq!(co.pairs(), vec![(0, 0), (1, 0)]);

    let b2 = boolean(2);
    let w = WedgeRelation::wedge(&b2, WedgeMethod::Oracle, &limits).unwrap();
    assert_eq!(
        w.pairs(),
        vec![(0, 1), (0, 2), (0, 3), (1, 1), (1, 3), (2, 2), (2, 3)]
    );
}

#[test]
fn diamond_wedge_degenerates_and_the_axiom_scan_says_so() {
    // No atom of m3 is wedge-below anything: every covering family made of
    // the other two atoms already reaches top. Only bottom sits below.
    let limits = Limits::default();
    let m3 = Arc::new(Lattice::diamond_m3());
    let w = WedgeRelation::wedge(&m3, WedgeMethod::Oracle, &limits).unwrap();
    assert_eq!(w.pairs(), vec![(0, 1), (0, 2), (0, 3), (0, 4)]);
    let diag = w.check_axioms(&limits);
    assert!(diag.general_ok());
    assert!(!diag.ok());
}

#[test]
fn endomap_counts_match_the_catalan_and_boolean_values() {
    let limits = Limits::default();
    for (l, expect) in [
        (chain(2), 3usize),
        (chain(3), 10),
        (chain(4), 35),
        (boolean(2), 36),
    ] {
        assert_eq!(
            enumerate_endo(&l, limits.enumeration).unwrap().len(),
            expect
        );
    }
}

#[test]
fn preserving_subfamilies_of_boolean_2_split_sixteen_apiece() {
    let b2 = boolean(2);
    let maps = enumerate_endo(&b2, 1_000_000).unwrap();
    let sup = maps
        .iter()
        .filter(|f| classify(f).unwrap().sup_preserving)
        .count();
    let meet = maps
        .iter()
        .filter(|f| classify(f).unwrap().meet_preserving)
        .count();
    assert_eq!((sup, meet), (16, 16));
}

#[test]
fn heterogeneous_hom_set_counts_are_pinned() {
    let (c2, c3, b2) = (chain(2), chain(3), boolean(2));
    assert_eq!(enumerate_between(&c3, &b2, 1_000_000).unwrap().len(), 16);
    assert_eq!(enumerate_between(&b2, &c3, 1_000_000).unwrap().len(), 20);
    assert_eq!(enumerate_between(&c3, &c2, 1_000_000).unwrap().len(), 4);
}

#[test]
fn projection_adjoint_and_nucleus_tables_on_chain_2_are_pinned() {
    // Carrier in image-lex order: 0 = [0,0], 1 = [0,1] (identity), 2 = [1,1].
    let limits = Limits::default();
    let c2 = chain(2);
    let ctx = WedgeCtx::new(&c2, &limits).unwrap();
    let alg =
        MapAlgebra::enumerated(&c2, Some(&ctx), OpKind::Dot, CarrierFamily::All, &limits).unwrap();
    assert_eq!(alg.len(), 3);
    assert_eq!(alg.map(1).image(), vec![0, 1]);

    let psi_t = psi_table(&alg, &ctx).unwrap();
    assert_eq!(psi_t, vec![0, 1, 1]);
    let kstar_t = kstar_table(&alg, &psi_t).unwrap();
    assert_eq!(kstar_t, vec![0, 2, 2]);
    let j_t = compose_tables(&kstar_t, &psi_t);
    assert_eq!(j_t, vec![0, 2, 2]);

    // The identity is not fixed by the nucleus; its class collapses upward.
    let fixed: Vec<usize> = (0..3).filter(|&i| j_t[i] as usize == i).collect();
    assert_eq!(fixed, vec![0, 2]);
}

#[test]
fn dot_with_identity_on_the_right_is_the_projection() {
    let limits = Limits::default();
    for l in [chain(3), boolean(2)] {
        let ctx = WedgeCtx::new(&l, &limits).unwrap();
        let id = MonotoneMap::identity(&l);
        for f in enumerate_endo(&l, limits.enumeration).unwrap() {
            let via_dot = qlab_core::maps::compose_dot(&f, &id, &ctx.wedge).unwrap();
            let via_psi = qlab_core::maps::psi(&f, &ctx.wedge).unwrap();
            assert_eq!(via_dot, via_psi);
            let back = qlab_core::maps::compose_dot(&id, &f, &ctx.wedge).unwrap();
            assert_eq!(back, f);
        }
    }
}
