use knotoid::invariants::{
    affine_index, arrow, bracket, close_theta, mock_alexander, unit_normalize_yamada, yamada_closure, yamada_raw,
};
use knotoid::moves::{apply, equivalent, find_sites, reach, simplify, Equivalence, MoveKind, ReachParams};
use knotoid::pipeline::{load_fixtures, Fixture};
use knotoid::{parse_pd, Diagram, MultiPoly};
use proptest::prelude::*;

fn fixtures() -> Vec<Fixture> {
    load_fixtures(concat!(env!("CARGO_MANIFEST_DIR"), "/data/appendix.jsonl")).unwrap()
}

fn small() -> Vec<Diagram> {
    fixtures().iter().filter(|f| f.crossings() <= 5).map(|f| parse_pd(&f.pd).unwrap()).collect()
}

fn by_name(name: &str) -> Diagram {
    let f = fixtures().into_iter().find(|f| f.name == name).unwrap();
    parse_pd(&f.pd).unwrap()
}

/// All five invariants; Yamada only up to a unit.
fn key(d: &Diagram) -> (MultiPoly, MultiPoly, MultiPoly, MultiPoly, MultiPoly) {
    (bracket(d), arrow(d), mock_alexander(d), affine_index(d), unit_normalize_yamada(&yamada_closure(d)))
}

fn cheap_key(d: &Diagram) -> (MultiPoly, MultiPoly, MultiPoly, MultiPoly) {
    (bracket(d), arrow(d), mock_alexander(d), affine_index(d))
}

#[test]
fn every_level_site_preserves_invariants() {
    // R3 sites, flype sites, flypes that change the diagram.
    let mut count = [0usize; 3];
    for d in small() {
        let k = key(&d);
        for s in find_sites(&d, &[MoveKind::R3, MoveKind::Flype, MoveKind::R2Minus]) {
            let e = apply(&d, &s).unwrap();
            e.validate().unwrap();
            assert_eq!(e.num_crossings() as i32, d.num_crossings() as i32 + s.kind.delta());
            assert_eq!(key(&e), k, "{s:?} on {d:?}");
            match s.kind {
                MoveKind::R3 => count[0] += 1,
                MoveKind::Flype => {
                    count[1] += 1;
                    count[2] += usize::from(e.code() != d.code());
                }
                _ => {}
            }
        }
    }
    assert!(count.iter().all(|&c| c > 0), "{count:?}");
}

#[test]
fn reach_without_budget_is_closed() {
    let d = by_name("K5_1");
    let p = ReachParams::new(0, true);
    let r = reach(&d, p);
    assert!(!r.capped);
    for c in &r.codes {
        let e = c.to_diagram();
        for s in find_sites(&e, &[MoveKind::R1Minus, MoveKind::R2Minus, MoveKind::R3, MoveKind::Flype]) {
            assert!(r.codes.contains(&apply(&e, &s).unwrap().code()));
        }
    }
}

#[test]
fn kinks_and_fingers_simplify_back() {
    let d = by_name("K3_1");
    let p = ReachParams::new(0, false);
    for s in find_sites(&d, &[MoveKind::R1Plus]) {
        let e = apply(&d, &s).unwrap();
        assert_eq!(simplify(&e, p).0.code(), d.code());
    }
}

#[test]
fn distinct_knotoids_short_circuit() {
    let p = ReachParams::new(2, true);
    assert_eq!(equivalent(&by_name("K2_1"), &by_name("K3_1"), p), Equivalence::Distinct);
}

#[test]
fn finger_then_level_moves_meet() {
    let d = by_name("K4_1");
    let sites = find_sites(&d, &[MoveKind::R2Plus]);
    let e = apply(&d, &sites[sites.len() / 2]).unwrap();
    assert_eq!(equivalent(&d, &e, ReachParams::new(1, false)), Equivalence::Equivalent);
}

fn walk(d: &Diagram, picks: &[(u8, u16)]) -> Diagram {
    let mut d = d.clone();
    for &(k, i) in picks {
        let kind = MoveKind::ALL[k as usize % 6];
        if d.num_crossings() as i32 + kind.delta() > 7 {
            continue;
        }
        let sites = find_sites(&d, &[kind]);
        if !sites.is_empty() {
            d = apply(&d, &sites[i as usize % sites.len()]).unwrap();
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn random_moves_preserve_invariants(
        start in 0usize..37,
        picks in prop::collection::vec((0u8..6, any::<u16>()), 1..4),
    ) {
        let ds = small_cached();
        let d = &ds[start % ds.len()];
        let e = walk(d, &picks);
        prop_assert!(e.validate().is_ok());
        prop_assert_eq!(cheap_key(&e), cheap_key(d));
        let (ge, gd) = (close_theta(&e), close_theta(d));
        // The Yamada state sum is exponential in the closure's crossings.
        if ge.num_crossings() <= 9 && gd.num_crossings() <= 9 {
            prop_assert_eq!(unit_normalize_yamada(&yamada_raw(&ge)), unit_normalize_yamada(&yamada_raw(&gd)));
        }
    }
}

fn small_cached() -> &'static [Diagram] {
    static CELL: std::sync::OnceLock<Vec<Diagram>> = std::sync::OnceLock::new();
    CELL.get_or_init(small)
}

#[test]
fn flype_sites_are_unique_per_tangle() {
    for d in small() {
        let sites = find_sites(&d, &[MoveKind::Flype]);
        let keys: std::collections::HashSet<_> = sites.iter().map(|s| (s.darts[0], s.tangle.clone())).collect();
        assert_eq!(keys.len(), sites.len(), "{d:?}");
    }
}
