//! One line per acceptance criterion. Run with
//! `cargo test -p knotoid --test acceptance`; set `KNOTOID_FULL=1` to add
//! the six-crossing census row and `KNOTOID_STRICT=1` to exit non-zero when
//! a criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use knotoid::invariants::{bracket, signature, unit_normalize_yamada, yamada_closure, InvariantSignature};
use knotoid::moves::{apply, find_sites, search_meet, Equivalence, MoveKind, ReachParams};
use knotoid::pipeline::{
    census_to_string, classify, load_fixtures, report_census, verify_fixtures, CensusRecord, ClassifyParams, Fixture,
};
use knotoid::structure::{images, is_composite, is_concatenation, is_prime, Rotatability};
use knotoid::{parse_em, parse_pd, print_em, print_pd, Diagram, MultiPoly};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn fixtures() -> Vec<Fixture> {
    load_fixtures(concat!(env!("CARGO_MANIFEST_DIR"), "/data/appendix.jsonl")).unwrap()
}

fn diagram(f: &Fixture) -> Diagram {
    parse_pd(&f.pd).unwrap()
}

fn column(records: &[CensusRecord], f: impl Fn(&knotoid::pipeline::CensusRow) -> usize) -> Vec<usize> {
    report_census(records).iter().map(f).collect()
}

fn census_counts(records: &[CensusRecord], n: usize, want: [&[usize]; 4]) -> Outcome {
    let got = [
        column(records, |r| r.total),
        column(records, |r| r.chiral_yes),
        column(records, |r| r.rotatable_yes),
        column(records, |r| r.possible_duplicates),
    ];
    let pass = got.iter().zip(want).all(|(g, w)| g.len() == n + 1 && g[..] == *w);
    outcome(pass, format!("total {:?} chiral {:?} rotatable {:?} duplicates {:?}", got[0], got[1], got[2], got[3]))
}

fn invariant_oracle(fx: &[Fixture]) -> Outcome {
    let rep = verify_fixtures(fx, Some(4));
    let matched: usize = rep.per_invariant.iter().map(|&(_, ok, _)| ok).sum();
    let total = rep.entries * 5;
    let spot = [
        ("K0_1", 4, "-A^4 - A^3 - 2*A^2 - A - 1"),
        ("K2_1", 0, "A^8 + A^6 - A^2"),
        ("K2_1", 3, "t - 2 + t^-1"),
        ("K4_1", 2, "-w^2 + 3 - w^-2"),
        ("K3_1", 1, "A^-4 + A^-12 - A^-16"),
    ];
    let spot_ok = spot.iter().all(|&(name, k, want)| {
        let f = fx.iter().find(|f| f.name == name).unwrap();
        let sig = signature(&diagram(f));
        sig.values()[k].1 == MultiPoly::parse(want).unwrap().to_string()
    });
    outcome(rep.all_pass() && total == 60 && spot_ok, format!("{matched}/{total} values match, spot list {}", if spot_ok { "ok" } else { "FAILED" }))
}

fn move_invariance(fx: &[Fixture]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let base: Vec<Diagram> = fx.iter().filter(|f| f.crossings() <= 6).map(diagram).collect();
    let small: Vec<&Diagram> = base.iter().filter(|d| d.num_crossings() <= 4).collect();
    let mut cache: BTreeMap<knotoid::Code, InvariantSignature> = BTreeMap::new();
    let mut sig = |d: &Diagram| cache.entry(d.code()).or_insert_with(|| signature(d)).clone();
    let mut per_kind = [0usize; 6];
    let mut failures = 0;
    let mut pairs = 0;
    while pairs < 1200 {
        let k = pairs % 6;
        let kind = MoveKind::ALL[k];
        // Crossing-reducing moves need something to undo: start from a
        // small fixture with one extra kink or finger.
        let d = match kind {
            MoveKind::R1Minus | MoveKind::R2Minus => {
                let s = *small.choose(&mut rng).unwrap();
                let up = if kind == MoveKind::R1Minus { MoveKind::R1Plus } else { MoveKind::R2Plus };
                let sites = find_sites(s, &[up]);
                apply(s, &sites[rng.gen_range(0..sites.len())]).unwrap()
            }
            MoveKind::R1Plus | MoveKind::R2Plus => (*small.choose(&mut rng).unwrap()).clone(),
            _ => base.choose(&mut rng).unwrap().clone(),
        };
        let sites = find_sites(&d, &[kind]);
        if sites.is_empty() {
            continue;
        }
        let e = apply(&d, &sites[rng.gen_range(0..sites.len())]).unwrap();
        if d.num_crossings() > 6 || e.validate().is_err() || sig(&e) != sig(&d) {
            failures += 1;
        }
        per_kind[k] += 1;
        pairs += 1;
    }
    outcome(failures == 0 && per_kind.iter().all(|&c| c > 0), format!("{pairs} pairs, per kind {per_kind:?}, {failures} failures"))
}

fn mirror_substitution(records: &[CensusRecord]) -> Outcome {
    let mut bad = Vec::new();
    for r in records {
        let d = r.diagram();
        let m = knotoid::structure::mirror(&d);
        let ok_bracket = bracket(&m) == bracket(&d).substitute_a_inverse();
        let ok_yamada = unit_normalize_yamada(&yamada_closure(&m))
            == unit_normalize_yamada(&yamada_closure(&d).substitute_a_inverse());
        if !(ok_bracket && ok_yamada) {
            bad.push(r.representative.clone());
        }
    }
    outcome(bad.is_empty() && !records.is_empty(), format!("{} representatives, failures {bad:?}", records.len()))
}

fn canonicalization(fx: &[Fixture]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checks = 0;
    let mut bad = BTreeSet::new();
    for f in fx.iter().filter(|f| f.crossings() <= 4) {
        let d = diagram(f);
        let c = d.code();
        if print_pd(&d) != f.pd || parse_em(&print_em(&d)).unwrap() != d {
            bad.insert(f.name.clone());
        }
        for _ in 0..100 {
            let n = d.num_vertices();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let shift: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
            let e = d.relabel(&perm, &shift);
            checks += 1;
            if e.code() != c || parse_em(&print_em(&e)).unwrap().code() != c || parse_pd(&print_pd(&e)).unwrap().code() != c {
                bad.insert(f.name.clone());
            }
        }
    }
    outcome(bad.is_empty(), format!("{checks} relabelings, failures {bad:?}"))
}

/// The census record of a fixture: same orbit signature, and the same
/// orbit of codes or a connecting search when the signature is shared.
fn match_record<'a>(f: &Fixture, records: &'a [CensusRecord]) -> Option<&'a CensusRecord> {
    let d = diagram(f);
    let key = |d: &Diagram| images(d).iter().map(signature).collect::<BTreeSet<_>>();
    let k = key(&d);
    let same: Vec<&CensusRecord> = records.iter().filter(|r| key(&r.diagram()) == k).collect();
    if same.len() <= 1 {
        return same.first().copied();
    }
    let codes: BTreeSet<_> = images(&d).iter().map(|e| e.code()).collect();
    if let Some(r) = same.iter().find(|r| codes.contains(&r.diagram().code())) {
        return Some(r);
    }
    let p = ReachParams { max_states: ClassifyParams::DEFAULT_SEARCH_CAP, ..ReachParams::new(2, true) };
    same.into_iter().find(|r| images(&d).iter().any(|e| search_meet(&r.diagram(), e, p) == Equivalence::Equivalent))
}

fn symmetry(fx: &[Fixture], records: &[CensusRecord]) -> Outcome {
    let mut achiral = BTreeSet::new();
    let mut rotatable = BTreeSet::new();
    let mut unmatched = Vec::new();
    let mut disagree = Vec::new();
    for f in fx.iter().filter(|f| f.crossings() <= 5) {
        let Some(r) = match_record(f, records) else {
            unmatched.push(f.name.clone());
            continue;
        };
        if !r.flags.is_chiral() {
            achiral.insert(f.name.clone());
        }
        if r.flags.is_rotatable() {
            rotatable.insert(f.name.clone());
        }
        if r.flags.is_chiral() != f.chiral || r.flags.is_rotatable() != f.rotatable {
            disagree.push(f.name.clone());
        }
    }
    // A verified non-rotatable flag needs an invariant that tells the
    // rotation apart.
    let overclaimed: Vec<&str> = records
        .iter()
        .filter(|r| {
            let d = r.diagram();
            r.flags.rotatable == Rotatability::NonRotatable && signature(&knotoid::structure::rotate(&d)) == signature(&d)
        })
        .map(|r| r.representative.as_str())
        .collect();
    let want_achiral: BTreeSet<String> = ["K0_1", "K4_1"].iter().map(|s| s.to_string()).collect();
    let want_rot: BTreeSet<String> =
        ["K0_1", "K3_1", "K4_1", "K5_1", "K5_2", "K5_14", "K5_15", "K5_24", "K5_25"].iter().map(|s| s.to_string()).collect();
    let pass = unmatched.is_empty() && disagree.is_empty() && overclaimed.is_empty() && achiral == want_achiral && rotatable == want_rot;
    outcome(
        pass,
        format!(
            "achiral {achiral:?}, rotatable {rotatable:?}, unmatched {unmatched:?}, disagreeing {disagree:?}, overclaimed {overclaimed:?}"
        ),
    )
}

fn prime_filter(fx: &[Fixture]) -> Outcome {
    let sum = parse_pd("[0],[0,1,2,3],[10,3,4,2],[1,8,5,7],[6,10,7,9],[8,6,9,5],[4]").unwrap();
    let product = parse_pd("[0],[0,1,2,3],[1,3,4,2],[4,5,6,7],[5,7,8,6],[8]").unwrap();
    let constructed = is_composite(&sum) && is_concatenation(&product) && !is_prime(&sum) && !is_prime(&product);
    let not_prime: Vec<&str> = fx.iter().filter(|f| !is_prime(&diagram(f))).map(|f| f.name.as_str()).collect();
    outcome(
        constructed && not_prime.is_empty(),
        format!("trefoil#K2_1 and K2_1.K2_1 detected: {constructed}; non-prime appendix entries {not_prime:?}"),
    )
}

fn determinism() -> Outcome {
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| census_to_string(&classify(&ClassifyParams::new(4)).unwrap().records))
    };
    let (a, b) = (run(1), run(8));
    outcome(a == b && !a.is_empty(), format!("{} bytes with 1 worker, {} bytes with 8, identical: {}", a.len(), b.len(), a == b))
}

fn main() {
    let fx = fixtures();
    let mut failed = 0;
    let mut report = |name: &str, f: &mut dyn FnMut() -> Option<Outcome>| {
        let t = Instant::now();
        match f() {
            Some(o) => {
                failed += usize::from(!o.pass);
                println!("{} {name}: {} ({:.1?})", if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed());
            }
            None => println!("SKIP {name}: set KNOTOID_FULL=1 to run"),
        }
    };

    let census = classify(&ClassifyParams::new(5)).unwrap().records;
    report("census counts up to 5 crossings", &mut || {
        Some(census_counts(
            &census,
            5,
            [&[1, 0, 1, 2, 8, 25], &[0, 0, 1, 2, 7, 25], &[1, 0, 0, 1, 1, 6], &[0; 6]],
        ))
    });
    report("census counts at 6 crossings", &mut || {
        std::env::var_os("KNOTOID_FULL").map(|_| {
            let records = classify(&ClassifyParams::new(6)).unwrap().records;
            let rows = report_census(&records);
            let r = rows.get(6).copied().unwrap_or_default();
            outcome(
                (r.total, r.chiral_yes, r.chiral_no, r.rotatable_yes, r.rotatable_no) == (82, 79, 3, 7, 75),
                format!("{r:?}"),
            )
        })
    });
    report("appendix invariants up to 4 crossings", &mut || Some(invariant_oracle(&fx)));
    report("move invariance", &mut || Some(move_invariance(&fx)));
    report("mirror substitution", &mut || Some(mirror_substitution(&census)));
    report("canonicalization", &mut || Some(canonicalization(&fx)));
    report("symmetry flags up to 5 crossings", &mut || Some(symmetry(&fx, &census)));
    report("prime filter", &mut || Some(prime_filter(&fx)));
    report("determinism across worker counts", &mut || Some(determinism()));

    if failed > 0 {
        println!("{failed} criteria failed");
        if std::env::var_os("KNOTOID_STRICT").is_some() {
            std::process::exit(1);
        }
    }
}
