use knotoid::invariants::{bracket, signature, unit_normalize_yamada, yamada_closure};
use knotoid::moves::{search_meet, Equivalence, ReachParams};
use knotoid::pipeline::{load_fixtures, Fixture};
use knotoid::pipeline::unoriented;
use knotoid::structure::{images, is_composite, is_concatenation, is_prime, mirror, reflect, reverse, rotate, symmetry_flags};
use knotoid::{parse_pd, Diagram};

fn fixtures() -> Vec<Fixture> {
    load_fixtures(concat!(env!("CARGO_MANIFEST_DIR"), "/data/appendix.jsonl")).unwrap()
}

fn upto(n: usize) -> Vec<(Fixture, Diagram)> {
    fixtures().into_iter().filter(|f| f.crossings() <= n).map(|f| {
        let d = parse_pd(&f.pd).unwrap();
        (f, d)
    }).collect()
}

#[test]
fn mirror_and_rotate_are_commuting_involutions() {
    for (f, d) in upto(6) {
        let c = d.code();
        assert_eq!(mirror(&mirror(&d)).code(), c, "{}", f.name);
        assert_eq!(rotate(&rotate(&d)).code(), c, "{}", f.name);
        assert_eq!(mirror(&rotate(&d)).code(), rotate(&mirror(&d)).code(), "{}", f.name);
        assert_eq!(reflect(&reflect(&d)).code(), c, "{}", f.name);
        for e in images(&d) {
            e.validate().unwrap();
            assert_eq!(e.num_crossings(), d.num_crossings());
        }
    }
}

#[test]
fn mirror_inverts_the_variable() {
    for (f, d) in upto(4) {
        let m = mirror(&d);
        assert_eq!(bracket(&m), bracket(&d).substitute_a_inverse(), "{}", f.name);
        assert_eq!(
            unit_normalize_yamada(&yamada_closure(&m)),
            unit_normalize_yamada(&yamada_closure(&d).substitute_a_inverse()),
            "{}",
            f.name
        );
    }
}

#[test]
fn reversal_is_an_involution_keeping_bracket_and_writhe() {
    for (f, d) in upto(6) {
        let v = reverse(&d);
        v.validate().unwrap();
        assert_eq!(reverse(&v).code(), d.code(), "{}", f.name);
        assert_eq!(bracket(&v), bracket(&d), "{}", f.name);
        assert_eq!(v.writhe(), d.writhe(), "{}", f.name);
        assert_eq!(unoriented(&v.code()), unoriented(&d.code()), "{}", f.name);
    }
}

#[test]
fn k5_13_is_not_reached_from_its_reverse() {
    // Its reverse shares every invariant; only the census's reversal
    // quotient puts the two in one class.
    let d = parse_pd(&fixtures().into_iter().find(|f| f.name == "K5_13").unwrap().pd).unwrap();
    let v = reverse(&d);
    assert_eq!(signature(&v), signature(&d));
    assert_eq!(search_meet(&d, &v, ReachParams::new(1, true)), Equivalence::NotConnected);
    assert_eq!(images(&d).len(), 8);
}

#[test]
fn rotation_keeps_the_bracket() {
    for (f, d) in upto(6) {
        assert_eq!(bracket(&rotate(&d)), bracket(&d), "{}", f.name);
    }
}

#[test]
fn rotation_keeps_writhe_and_mirror_negates_it() {
    for (_, d) in upto(6) {
        assert_eq!(rotate(&d).writhe(), d.writhe());
        assert_eq!(mirror(&d).writhe(), -d.writhe());
    }
}

#[test]
fn tabulated_knotoids_are_prime() {
    for (f, d) in upto(7) {
        assert!(is_prime(&d), "{}", f.name);
    }
}

#[test]
fn trefoil_summed_onto_an_arc_is_composite() {
    // K2_1 with a trefoil tied into an edge between its crossings.
    let d = parse_pd("[0],[0,1,2,3],[10,3,4,2],[1,8,5,7],[6,10,7,9],[8,6,9,5],[4]").unwrap();
    assert!(is_composite(&d));
    assert!(!is_concatenation(&d));
    assert!(!is_prime(&d));
}

#[test]
fn knot_on_the_last_arc_is_both() {
    let d = parse_pd("[0],[0,1,2,3],[1,3,4,2],[4,8,5,7],[6,10,7,9],[8,6,9,5],[10]").unwrap();
    assert!(is_composite(&d));
    assert!(is_concatenation(&d));
}

#[test]
fn two_arcs_joined_by_a_bridge_are_a_concatenation() {
    let d = parse_pd("[0],[0,1,2,3],[1,3,4,2],[4,5,6,7],[5,7,8,6],[8]").unwrap();
    assert!(is_concatenation(&d));
    assert!(!is_composite(&d));
}

#[test]
fn k2_1_is_not_rotated_within_two_fingers() {
    let d = parse_pd(&fixtures().into_iter().find(|f| f.name == "K2_1").unwrap().pd).unwrap();
    let r = rotate(&d);
    assert_eq!(signature(&r), signature(&d));
    assert_ne!(search_meet(&d, &r, ReachParams::new(2, false)), Equivalence::Equivalent);
}

#[test]
fn flags_match_the_table_up_to_four_crossings() {
    let stages = [ReachParams { max_states: 50_000, ..ReachParams::new(1, true) }, ReachParams { max_states: 50_000, ..ReachParams::new(2, true) }];
    for (f, d) in upto(4) {
        let flags = symmetry_flags(&d, &signature(&d), &stages);
        assert_eq!(flags.is_chiral(), f.chiral, "{}", f.name);
        assert_eq!(flags.is_rotatable(), f.rotatable, "{}", f.name);
    }
}
