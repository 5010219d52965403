//! Census orchestration, fixture verification, reports and persistence.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::diagram::{parse_em, parse_pd, print_em, print_pd, Code, Diagram};
use crate::enumerate::{assign_crossings, gen_shadows};
use crate::error::{EnumerateError, PipelineError};
use crate::invariants::{signature, InvariantSignature};
use crate::moves::{reach, search_meet, Equivalence, ReachParams};
use crate::poly::MultiPoly;
use crate::structure::{images, is_prime, reverse, symmetry_flags, SymmetryFlags};

/// One appendix entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub pd: String,
    pub em: String,
    pub bracket: String,
    pub arrow: String,
    pub mock: String,
    pub affine: String,
    pub yamada: String,
    pub chiral: bool,
    pub rotatable: bool,
    pub possible_duplicate: Option<String>,
}

impl Fixture {
    pub fn crossings(&self) -> usize {
        self.pd.matches('[').count().saturating_sub(2)
    }
}

pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>, PipelineError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| PipelineError::FixtureParse { line: i + 1, msg: e.to_string() }))
        .collect()
}

pub fn load_fixtures(path: impl AsRef<Path>) -> Result<Vec<Fixture>, PipelineError> {
    parse_fixtures(&std::fs::read_to_string(path)?)
}

/// Per-entry fixture comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub name: String,
    pub invariant: &'static str,
    pub got: String,
    pub want: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixtureReport {
    pub entries: usize,
    /// `(invariant, matches, mismatches)` in signature order.
    pub per_invariant: Vec<(&'static str, usize, usize)>,
    pub mismatches: Vec<Mismatch>,
    /// Entries whose codes failed to parse or round-trip.
    pub code_errors: Vec<(String, String)>,
}

impl FixtureReport {
    pub fn all_pass(&self) -> bool {
        self.mismatches.is_empty() && self.code_errors.is_empty()
    }
}

/// Recompute every invariant of every fixture with at most `max_crossings`
/// crossings and compare canonical prints.
pub fn verify_fixtures(fixtures: &[Fixture], max_crossings: Option<usize>) -> FixtureReport {
    let chosen: Vec<&Fixture> =
        fixtures.iter().filter(|f| max_crossings.map_or(true, |m| f.crossings() <= m)).collect();
    let results: Vec<Result<Vec<Mismatch>, String>> = chosen.par_iter().map(|f| check_fixture(f)).collect();
    let mut report = FixtureReport { entries: chosen.len(), ..FixtureReport::default() };
    let names = ["bracket", "arrow", "mock", "affine", "yamada"];
    let mut fails = [0usize; 5];
    let mut checked = 0;
    for (f, r) in chosen.iter().zip(results) {
        match r {
            Ok(ms) => {
                checked += 1;
                for m in ms {
                    fails[names.iter().position(|&n| n == m.invariant).unwrap()] += 1;
                    report.mismatches.push(m);
                }
            }
            Err(e) => report.code_errors.push((f.name.clone(), e)),
        }
    }
    report.per_invariant = names.iter().zip(fails).map(|(&n, k)| (n, checked - k, k)).collect();
    report
}

fn check_fixture(f: &Fixture) -> Result<Vec<Mismatch>, String> {
    let d = parse_pd(&f.pd).map_err(|e| e.to_string())?;
    let e = parse_em(&f.em).map_err(|e| e.to_string())?;
    if d != e {
        return Err("PD and EM codes describe different diagrams".into());
    }
    let sig = signature(&d);
    let want = [&f.bracket, &f.arrow, &f.mock, &f.affine, &f.yamada];
    let mut out = Vec::new();
    for ((name, got), want) in sig.values().into_iter().zip(want) {
        let want = MultiPoly::parse(want).map_err(|e| format!("{name}: {e}"))?.to_string();
        if got != want {
            out.push(Mismatch { name: f.name.clone(), invariant: name, got: got.to_string(), want });
        }
    }
    Ok(out)
}

pub const SCHEMA_VERSION: u32 = 1;

/// Stage schedule of a census run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyParams {
    pub max_n: usize,
    /// Successive simplification passes.
    pub reduce: Vec<ReachParams>,
    /// Classes whose minimal diagram is composite or a concatenation are
    /// dropped after each of this many leading passes.
    pub prime_stages: usize,
    /// Passes of the pairwise search inside equal-invariant groups.
    pub search: Vec<ReachParams>,
    /// Also identify a knotoid with its rotation during the search.
    pub rotation_augmented: bool,
    /// Passes used to decide chirality and rotatability.
    pub symmetry: Vec<ReachParams>,
}

impl ClassifyParams {
    /// States per search in the group and symmetry passes.
    pub const DEFAULT_SEARCH_CAP: usize = 50_000;

    /// Simplify with (r=0), (r=1), (r=1, flypes), (r=2), filtering primes
    /// after the first two; search with
    /// (r=1, flypes) then (r=2, flypes).
    pub fn new(max_n: usize) -> Self {
        let p = |r, f| ReachParams::new(r, f);
        let capped = |r, f| ReachParams { max_states: Self::DEFAULT_SEARCH_CAP, ..p(r, f) };
        ClassifyParams {
            max_n,
            reduce: vec![p(0, false), p(1, false), p(1, true), p(2, false)],
            prime_stages: 2,
            search: vec![capped(1, true), capped(2, true)],
            rotation_augmented: true,
            symmetry: vec![capped(1, true), capped(2, true)],
        }
    }

    pub fn with_state_cap(mut self, cap: usize) -> Self {
        for s in self.reduce.iter_mut().chain(&mut self.search).chain(&mut self.symmetry) {
            s.max_states = cap;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupStatus {
    /// Achiral: the record is its own mirror image.
    Unique,
    /// Stands for itself and its mirror image.
    MirrorPair,
    /// Shares all invariants with another record it could not be joined to.
    UnresolvedGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    /// (crossings, ordinal); ordinals follow code order.
    pub id: (usize, usize),
    pub representative: String,
    pub pd: String,
    pub em: String,
    pub signature: InvariantSignature,
    pub flags: SymmetryFlags,
    pub group_status: GroupStatus,
    /// Other records of an unresolved group.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partners: Vec<(usize, usize)>,
}

impl CensusRecord {
    pub fn crossings(&self) -> usize {
        self.id.0
    }

    pub fn diagram(&self) -> Diagram {
        parse_em(&self.representative).expect("census representative parses")
    }
}

/// Counts after each step of a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub records: Vec<CensusRecord>,
    pub funnel: Vec<(String, usize)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// The smaller index becomes the root.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Reach sets are computed in fixed-size chunks so that the outcome does
/// not depend on the number of workers.
const CHUNK: usize = 64;

fn crossing_order(a: &Code, b: &Code) -> std::cmp::Ordering {
    a.num_crossings().cmp(&b.num_crossings()).then_with(|| a.cmp(b))
}

/// The smaller of the codes of `c` and of its reverse. The tabulation does
/// not orient knotoids, so classes are keyed this way.
pub fn unoriented(c: &Code) -> Code {
    let r = reverse(&c.to_diagram()).code();
    if &r < c {
        r
    } else {
        c.clone()
    }
}

/// One simplification pass. Inputs whose reach sets meet are merged; a
/// candidate already inside an earlier reach set is merged without a
/// search of its own. Reach sets are compared by unoriented code, so a
/// diagram and its reverse share a class. Returns the minimal unoriented
/// code of every class.
pub fn reduce_stage(reps: &[Code], p: ReachParams) -> Vec<Code> {
    let reps: Vec<Code> = {
        let mut v: Vec<Code> = reps.iter().map(unoriented).collect();
        v.sort_by(crossing_order);
        v.dedup();
        v
    };
    let mut owner: FxHashMap<Code, usize> = FxHashMap::default();
    let mut uf = UnionFind::new(reps.len());
    let mut best: Vec<Code> = reps.clone();
    for start in (0..reps.len()).step_by(CHUNK) {
        let end = (start + CHUNK).min(reps.len());
        let todo: Vec<usize> = (start..end).filter(|&i| !owner.contains_key(&reps[i])).collect();
        let reached: Vec<Vec<Code>> = todo
            .par_iter()
            .map(|&i| reach(&reps[i].to_diagram(), p).codes.iter().map(unoriented).collect())
            .collect();
        let mut reached: FxHashMap<usize, Vec<Code>> = todo.into_iter().zip(reached).collect();
        for i in start..end {
            match reached.remove(&i) {
                Some(codes) => {
                    for c in codes {
                        if crossing_order(&c, &best[i]).is_lt() {
                            best[i] = c.clone();
                        }
                        match owner.get(&c) {
                            Some(&j) => uf.union(i, j),
                            None => {
                                owner.insert(c, i);
                            }
                        }
                    }
                }
                None => {
                    let j = owner[&reps[i]];
                    uf.union(i, j);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Code> = BTreeMap::new();
    for i in 0..reps.len() {
        let root = uf.find(i);
        let e = classes.entry(root).or_insert_with(|| best[i].clone());
        if crossing_order(&best[i], e).is_lt() {
            *e = best[i].clone();
        }
    }
    let mut v: Vec<Code> = classes.into_values().collect();
    v.sort_by(crossing_order);
    v.dedup();
    v
}

/// Every diagram from shadows with at most `max_n` crossings.
pub fn candidates(max_n: usize) -> Result<Vec<Code>, EnumerateError> {
    let mut all = Vec::new();
    for n in 0..=max_n {
        let shadows = gen_shadows(n)?;
        let codes: Vec<Code> = shadows.par_iter().flat_map_iter(|s| assign_crossings(s).into_iter().map(|d| d.code())).collect();
        all.extend(codes);
    }
    all.sort_by(crossing_order);
    all.dedup();
    Ok(all)
}

fn group_images(d: &Diagram, rotation: bool) -> Vec<Diagram> {
    let [id, m, r, mr, v, vm, vr, vmr] = images(d);
    if rotation {
        vec![id, m, r, mr, v, vm, vr, vmr]
    } else {
        vec![id, m, v, vm]
    }
}

/// Run the whole census.
pub fn classify(p: &ClassifyParams) -> Result<Census, EnumerateError> {
    let mut funnel = Vec::new();
    let clock = std::time::Instant::now();
    let mut reps = candidates(p.max_n)?;
    funnel.push(("candidates".to_string(), reps.len()));
    log::info!("{} candidates ({:.1?})", reps.len(), clock.elapsed());
    for (k, &stage) in p.reduce.iter().enumerate() {
        let reduced = reduce_stage(&reps, stage);
        funnel.push((format!("reduce {} (r={}{})", k + 1, stage.r, if stage.use_flypes { ", flypes" } else { "" }), reduced.len()));
        if k < p.prime_stages {
            reps = reduced.into_iter().filter(|c| is_prime(&c.to_diagram())).collect();
            funnel.push((format!("prime after reduce {}", k + 1), reps.len()));
        } else {
            reps = reduced;
        }
        log::info!("reduce {}: {} classes ({:.1?})", k + 1, reps.len(), clock.elapsed());
    }
    let diagrams: Vec<Diagram> = reps.iter().map(|c| c.to_diagram()).collect();
    // Signatures of every image under the symmetry group in use.
    let sigs: Vec<Vec<InvariantSignature>> = diagrams
        .par_iter()
        .map(|d| group_images(d, p.rotation_augmented).iter().map(signature).collect())
        .collect();
    let mut groups: BTreeMap<Vec<InvariantSignature>, Vec<usize>> = BTreeMap::new();
    for (i, s) in sigs.iter().enumerate() {
        let mut key = s.clone();
        key.sort();
        key.dedup();
        groups.entry(key).or_default().push(i);
    }
    funnel.push(("invariant groups".to_string(), groups.len()));
    log::info!("{} invariant groups ({:.1?})", groups.len(), clock.elapsed());
    // Join members of a group whose images meet.
    let classes: Vec<Vec<Vec<usize>>> = groups
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|members| join_group(members, &diagrams, &sigs, p))
        .collect();
    let mut records = Vec::new();
    for comps in &classes {
        let unresolved = comps.len() > 1;
        for comp in comps {
            let rep = comp.iter().map(|&i| &reps[i]).min_by(|a, b| crossing_order(a, b)).unwrap().clone();
            records.push((rep, comp[0], unresolved));
        }
    }
    funnel.push(("classes".to_string(), records.len()));
    log::info!("{} classes ({:.1?})", records.len(), clock.elapsed());
    records.sort_by(|a, b| crossing_order(&a.0, &b.0));
    let flags: Vec<SymmetryFlags> = records
        .par_iter()
        .map(|(c, i, _)| {
            let d = c.to_diagram();
            let sig = if &reps[*i] == c { sigs[*i][0].clone() } else { signature(&d) };
            symmetry_flags(&d, &sig, &p.symmetry)
        })
        .collect();
    log::info!("symmetry flags ({:.1?})", clock.elapsed());
    let mut out = Vec::with_capacity(records.len());
    let mut ordinal = vec![0usize; p.max_n + 1];
    for ((code, _, unresolved), flags) in records.iter().zip(flags) {
        let d = code.to_diagram();
        let n = d.num_crossings();
        ordinal[n] += 1;
        let group_status = if *unresolved {
            GroupStatus::UnresolvedGroup
        } else if flags.is_chiral() {
            GroupStatus::MirrorPair
        } else {
            GroupStatus::Unique
        };
        out.push(CensusRecord {
            id: (n, ordinal[n]),
            representative: code.to_em(),
            pd: print_pd(&d),
            em: print_em(&d),
            signature: signature(&d),
            flags,
            group_status,
            partners: Vec::new(),
        });
    }
    link_partners(&mut out, p.rotation_augmented);
    Ok(Census { records: out, funnel })
}

/// Components of one equal-invariant group.
fn join_group(members: &[usize], diagrams: &[Diagram], sigs: &[Vec<InvariantSignature>], p: &ClassifyParams) -> Vec<Vec<usize>> {
    let k = members.len();
    let mut uf = UnionFind::new(k);
    let imgs: Vec<Vec<Diagram>> = members.iter().map(|&i| group_images(&diagrams[i], p.rotation_augmented)).collect();
    // Members that are images of one another need no search.
    let codes: Vec<Vec<Code>> = imgs.iter().map(|v| v.iter().map(|d| d.code()).collect()).collect();
    for a in 0..k {
        for b in a + 1..k {
            if codes[b].contains(&codes[a][0]) {
                uf.union(a, b);
            }
        }
    }
    // Then one stage at a time between the remaining orbits. Moves commute
    // with the symmetries, so one member per orbit suffices.
    for &st in &p.search {
        for a in 0..k {
            for b in a + 1..k {
                if uf.find(a) != a || uf.find(b) != b || uf.find(a) == uf.find(b) {
                    continue;
                }
                let (i, j) = (members[a], members[b]);
                let met = imgs[b].iter().zip(&sigs[j]).filter(|(_, s)| **s == sigs[i][0]).any(|(img, _)| {
                    let t = std::time::Instant::now();
                    let e = search_meet(&diagrams[i], img, st);
                    log::debug!("join {} ~ {}: {e:?} at r={} ({:.1?})", codes[a][0].to_em(), img.code().to_em(), st.r, t.elapsed());
                    e == Equivalence::Equivalent
                });
                if met {
                    uf.union(a, b);
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..k {
        let r = uf.find(a);
        comps.entry(r).or_default().push(members[a]);
    }
    comps.into_values().collect()
}

/// Cross-link records of the same unresolved group.
fn link_partners(records: &mut [CensusRecord], rotation: bool) {
    let mut by_key: BTreeMap<Vec<InvariantSignature>, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        if r.group_status == GroupStatus::UnresolvedGroup {
            let mut key: Vec<InvariantSignature> = group_images(&r.diagram(), rotation).iter().map(signature).collect();
            key.sort();
            key.dedup();
            by_key.entry(key).or_default().push(i);
        }
    }
    for members in by_key.values() {
        for &i in members {
            records[i].partners = members.iter().filter(|&&j| j != i).map(|&j| records[j].id).collect();
        }
    }
}

#[derive(Serialize)]
struct LineOut<'a> {
    schema_version: u32,
    #[serde(flatten)]
    record: &'a CensusRecord,
}

/// JSON lines, ordered by crossing number and code.
pub fn census_to_string(records: &[CensusRecord]) -> String {
    let mut sorted: Vec<&CensusRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        let (ca, cb) = (parse_em(&a.representative).unwrap().code(), parse_em(&b.representative).unwrap().code());
        crossing_order(&ca, &cb)
    });
    let mut s = String::new();
    for r in sorted {
        s.push_str(&serde_json::to_string(&LineOut { schema_version: SCHEMA_VERSION, record: r }).expect("record serializes"));
        s.push('\n');
    }
    s
}

pub fn census_from_str(text: &str) -> Result<Vec<CensusRecord>, PipelineError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = |msg: String| PipelineError::CensusParse { line: i + 1, msg };
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let found = v.get("schema_version").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing schema_version".into()))?;
        if found != SCHEMA_VERSION as u64 {
            return Err(PipelineError::VersionMismatch { found: found as u32, expected: SCHEMA_VERSION });
        }
        out.push(serde_json::from_value(v).map_err(|e| bad(e.to_string()))?);
    }
    Ok(out)
}

pub fn persist(records: &[CensusRecord], path: impl AsRef<Path>) -> Result<(), PipelineError> {
    std::fs::write(path, census_to_string(records))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Vec<CensusRecord>, PipelineError> {
    census_from_str(&std::fs::read_to_string(path)?)
}

/// One row of the per-crossing summary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CensusRow {
    pub crossings: usize,
    pub total: usize,
    pub chiral_yes: usize,
    pub chiral_no: usize,
    pub rotatable_yes: usize,
    pub rotatable_no: usize,
    /// Records beyond the first in each unresolved group.
    pub possible_duplicates: usize,
}

/// Rows for every crossing number up to the largest present.
pub fn report_census(records: &[CensusRecord]) -> Vec<CensusRow> {
    let max = records.iter().map(|r| r.crossings()).max().unwrap_or(0);
    let mut rows: Vec<CensusRow> = (0..=max).map(|n| CensusRow { crossings: n, ..CensusRow::default() }).collect();
    for r in records {
        let row = &mut rows[r.crossings()];
        row.total += 1;
        if r.flags.is_chiral() {
            row.chiral_yes += 1;
        } else {
            row.chiral_no += 1;
        }
        if r.flags.is_rotatable() {
            row.rotatable_yes += 1;
        } else {
            row.rotatable_no += 1;
        }
        if r.group_status == GroupStatus::UnresolvedGroup && r.partners.iter().any(|&p| p < r.id) {
            row.possible_duplicates += 1;
        }
    }
    rows
}

pub fn census_total(rows: &[CensusRow]) -> CensusRow {
    rows.iter().fold(CensusRow::default(), |a, r| CensusRow {
        crossings: 0,
        total: a.total + r.total,
        chiral_yes: a.chiral_yes + r.chiral_yes,
        chiral_no: a.chiral_no + r.chiral_no,
        rotatable_yes: a.rotatable_yes + r.rotatable_yes,
        rotatable_no: a.rotatable_no + r.rotatable_no,
        possible_duplicates: a.possible_duplicates + r.possible_duplicates,
    })
}

/// `(invariant, unique, non_unique)`: records whose value no other record shares.
pub fn report_uniqueness(records: &[CensusRecord]) -> Vec<(&'static str, usize, usize)> {
    let names = ["bracket", "arrow", "mock", "affine", "yamada"];
    (0..5)
        .map(|k| {
            let mut count: BTreeMap<&str, usize> = BTreeMap::new();
            for r in records {
                *count.entry(r.signature.values()[k].1).or_default() += 1;
            }
            let unique = records.iter().filter(|r| count[r.signature.values()[k].1] == 1).count();
            (names[k], unique, records.len() - unique)
        })
        .collect()
}
