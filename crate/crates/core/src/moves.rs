//! Reidemeister moves and flypes, and budgeted exploration of move space.
//!
//! No site ever moves a strand across an endpoint: every pattern is a face
//! (or a tangle) with no endpoint inside it.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::diagram::{dart, slot_of, vertex_of, Code, Dart, Diagram, OverPair, Vertex, NO_DART};
use crate::error::MoveError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Minus,
    R1Plus,
    R2Minus,
    R2Plus,
    R3,
    Flype,
}

impl MoveKind {
    pub const ALL: [MoveKind; 6] =
        [MoveKind::R1Minus, MoveKind::R1Plus, MoveKind::R2Minus, MoveKind::R2Plus, MoveKind::R3, MoveKind::Flype];

    /// Change in crossing number.
    pub fn delta(self) -> i32 {
        match self {
            MoveKind::R1Minus => -1,
            MoveKind::R1Plus => 1,
            MoveKind::R2Minus => -2,
            MoveKind::R2Plus => 2,
            MoveKind::R3 | MoveKind::Flype => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoveSite {
    pub kind: MoveKind,
    /// R1-: the loop dart. R1+: the edge. R2-: the bigon darts. R2+: the
    /// two face darts whose edges are pushed together. R3: the triangle.
    /// Flype: the crossing dart entering the tangle, then the tangle's two
    /// far boundary darts.
    pub darts: Vec<Dart>,
    /// R1+: bit 0 picks the side of the kink, bit 1 its crossing type.
    /// R2+: 0 pushes the first edge over the second, 1 under it.
    pub param: u8,
    /// Flype only: the tangle's crossings.
    pub tangle: Vec<usize>,
}

impl MoveSite {
    fn new(kind: MoveKind, darts: Vec<Dart>, param: u8) -> Self {
        MoveSite { kind, darts, param, tangle: Vec::new() }
    }
}

/// All sites of the requested kinds.
pub fn find_sites(d: &Diagram, kinds: &[MoveKind]) -> Vec<MoveSite> {
    let faces = d.faces();
    let mut out = Vec::new();
    for &k in kinds {
        match k {
            MoveKind::R1Minus => r1_minus_sites(d, &faces, &mut out),
            MoveKind::R1Plus => r1_plus_sites(d, &mut out),
            MoveKind::R2Minus => r2_minus_sites(d, &faces, &mut out),
            MoveKind::R2Plus => r2_plus_sites(d, &faces, &mut out),
            MoveKind::R3 => r3_sites(d, &faces, &mut out),
            MoveKind::Flype => flype_sites(d, &mut out),
        }
    }
    debug_assert!(out.iter().all(|s| endpoint_free(d, s)));
    out
}

/// Forbidden-move guard: no endpoint lies inside the moved region.
pub fn endpoint_free(d: &Diagram, s: &MoveSite) -> bool {
    match s.kind {
        MoveKind::R1Plus | MoveKind::R2Plus => true,
        MoveKind::Flype => s.tangle.iter().all(|&v| d.is_crossing(v)) && d.is_crossing(vertex_of(s.darts[0])),
        _ => s.darts.iter().all(|&x| d.is_crossing(vertex_of(x))),
    }
}

fn r1_minus_sites(d: &Diagram, faces: &[Vec<Dart>], out: &mut Vec<MoveSite>) {
    for f in faces {
        if f.len() == 1 && d.is_crossing(vertex_of(f[0])) {
            out.push(MoveSite::new(MoveKind::R1Minus, vec![f[0]], 0));
        }
    }
}

fn r1_plus_sites(d: &Diagram, out: &mut Vec<MoveSite>) {
    for x in d.darts() {
        if x < d.mate(x) {
            for p in 0..4 {
                out.push(MoveSite::new(MoveKind::R1Plus, vec![x], p));
            }
        }
    }
}

fn r2_minus_sites(d: &Diagram, faces: &[Vec<Dart>], out: &mut Vec<MoveSite>) {
    for f in faces {
        if f.len() != 2 {
            continue;
        }
        let (x1, x2) = (f[0], f[1]);
        let (v1, v2) = (vertex_of(x1), vertex_of(x2));
        if v1 == v2 || !d.is_crossing(v1) || !d.is_crossing(v2) {
            continue;
        }
        // The strand along one bigon edge is over (or under) at both ends.
        if d.is_under(x1) == d.is_under(d.mate(x1)) {
            out.push(MoveSite::new(MoveKind::R2Minus, vec![x1, x2], 0));
        }
    }
}

fn r2_plus_sites(d: &Diagram, faces: &[Vec<Dart>], out: &mut Vec<MoveSite>) {
    for f in faces {
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                let (a, b) = (f[i], f[j]);
                for p in 0..2 {
                    out.push(MoveSite::new(MoveKind::R2Plus, vec![a, b], p));
                    // An edge with the face on both sides can be pushed
                    // across itself from either end.
                    if d.mate(a) == b {
                        out.push(MoveSite::new(MoveKind::R2Plus, vec![b, a], p));
                    }
                }
            }
        }
    }
}

fn r3_sites(d: &Diagram, faces: &[Vec<Dart>], out: &mut Vec<MoveSite>) {
    for f in faces {
        if f.len() != 3 {
            continue;
        }
        let vs = [vertex_of(f[0]), vertex_of(f[1]), vertex_of(f[2])];
        if vs[0] == vs[1] || vs[1] == vs[2] || vs[0] == vs[2] || vs.iter().any(|&v| !d.is_crossing(v)) {
            continue;
        }
        if f.iter().any(|&x| d.is_under(x) == d.is_under(d.mate(x))) {
            out.push(MoveSite::new(MoveKind::R3, f.clone(), 0));
        }
    }
}

/// Flypes: a crossing `c` whose adjacent slots `i` and `i-1` lead into a
/// tangle bounded by four edges. Walking the two corner faces of `c` beside
/// those edges gives the tangle's far boundary: the dart leaving the tangle
/// along the first face and the dart entering it along the second must
/// both border one common face.
fn flype_sites(d: &Diagram, out: &mut Vec<MoveSite>) {
    let (fidx, _) = d.face_index();
    let walk = |x: Dart| {
        let mut v = vec![x];
        let mut y = d.face_next(x);
        while y != x {
            v.push(y);
            y = d.face_next(y);
        }
        v
    };
    for c in (0..d.num_vertices()).filter(|&v| d.is_crossing(v)) {
        for i in 0..4 {
            let ci = dart(c, i);
            let cl = dart(c, (i + 3) % 4);
            let (nw, sw) = (d.mate(ci), d.mate(cl));
            if vertex_of(nw) == c || vertex_of(sw) == c || !d.is_crossing(vertex_of(nw)) || !d.is_crossing(vertex_of(sw)) {
                continue;
            }
            let north = walk(ci);
            let south = walk(dart(c, (i + 2) % 4));
            for &ne in &north[1..] {
                let f2 = fidx[d.mate(ne) as usize];
                for &se_out in &south[1..] {
                    let se = d.mate(se_out);
                    if fidx[se as usize] != f2 || ne == se || [ne, se].iter().any(|x| [ci, cl, nw, sw].contains(x)) {
                        continue;
                    }
                    if let Some(t) = tangle(d, c, [nw, sw, ne, se]) {
                        out.push(MoveSite { kind: MoveKind::Flype, darts: vec![ci, ne, se], param: 0, tangle: t });
                    }
                }
            }
        }
    }
}

/// Crossings reachable from `ends[0]` without using the four boundary
/// edges, provided that set is bounded by exactly those edges, holds no
/// endpoint and leaves `c` and the far sides of the boundary outside.
fn tangle(d: &Diagram, c: usize, ends: [Dart; 4]) -> Option<Vec<usize>> {
    let n = d.num_vertices();
    let mut inside = vec![false; n];
    let start = vertex_of(ends[0]);
    inside[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        if !d.is_crossing(v) || v == c {
            return None;
        }
        for s in 0..4 {
            let x = dart(v, s);
            if ends.contains(&x) {
                continue;
            }
            let w = vertex_of(d.mate(x));
            if !inside[w] {
                inside[w] = true;
                stack.push(w);
            }
        }
    }
    if ends.iter().any(|&e| !inside[vertex_of(e)] || inside[vertex_of(d.mate(e))]) {
        return None;
    }
    let members: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
    // Exactly four boundary edges.
    let boundary = members
        .iter()
        .flat_map(|&v| (0..4).map(move |s| dart(v, s)))
        .filter(|&x| !inside[vertex_of(d.mate(x))])
        .count();
    (boundary == 4).then_some(members)
}

/// Apply a site found on `d`.
pub fn apply(d: &Diagram, s: &MoveSite) -> Result<Diagram, MoveError> {
    if !site_matches(d, s) {
        return Err(MoveError::StaleSite);
    }
    Ok(match s.kind {
        MoveKind::R1Minus => remove_crossings(d, &[vertex_of(s.darts[0])]),
        MoveKind::R2Minus => remove_crossings(d, &[vertex_of(s.darts[0]), vertex_of(s.darts[1])]),
        MoveKind::R1Plus => add_kink(d, s.darts[0], s.param),
        MoveKind::R2Plus if d.mate(s.darts[0]) == s.darts[1] => push_self_finger(d, s.darts[0], s.darts[1], s.param == 0),
        MoveKind::R2Plus => push_finger(d, s.darts[0], s.darts[1], s.param == 0),
        MoveKind::R3 => slide_triangle(d, &s.darts),
        MoveKind::Flype => flype(d, s),
    })
}

fn site_matches(d: &Diagram, s: &MoveSite) -> bool {
    let nd = d.mates().len() as Dart;
    if s.darts.iter().any(|&x| x >= nd || d.mate(x) == NO_DART) {
        return false;
    }
    let face_of = |x: Dart, len: usize| {
        let mut y = x;
        for _ in 0..len {
            y = d.face_next(y);
        }
        y == x
    };
    match s.kind {
        MoveKind::R1Minus => d.is_crossing(vertex_of(s.darts[0])) && d.face_next(s.darts[0]) == s.darts[0],
        MoveKind::R2Minus => {
            let (a, b) = (s.darts[0], s.darts[1]);
            d.face_next(a) == b
                && d.face_next(b) == a
                && vertex_of(a) != vertex_of(b)
                && d.is_crossing(vertex_of(a))
                && d.is_crossing(vertex_of(b))
                && d.is_under(a) == d.is_under(d.mate(a))
        }
        MoveKind::R3 => {
            s.darts.len() == 3
                && face_of(s.darts[0], 3)
                && d.face_next(s.darts[0]) == s.darts[1]
                && d.face_next(s.darts[1]) == s.darts[2]
                && s.darts.iter().all(|&x| d.is_crossing(vertex_of(x)))
        }
        MoveKind::R1Plus => s.param < 4,
        MoveKind::R2Plus => {
            let (a, b) = (s.darts[0], s.darts[1]);
            let mut y = d.face_next(a);
            let mut same_face = false;
            while y != a {
                same_face |= y == b;
                y = d.face_next(y);
            }
            same_face
        }
        MoveKind::Flype => {
            let ci = s.darts[0];
            let c = vertex_of(ci);
            let cl = dart(c, (slot_of(ci) + 3) % 4);
            d.is_crossing(c)
                && tangle(d, c, [d.mate(ci), d.mate(cl), s.darts[1], s.darts[2]]).as_deref() == Some(&s.tangle[..])
        }
    }
}

/// Delete crossings, joining each strand straight through them.
fn remove_crossings(d: &Diagram, gone: &[usize]) -> Diagram {
    let n = d.num_vertices();
    let mut new_index = vec![usize::MAX; n];
    let mut verts = Vec::with_capacity(n - gone.len());
    for v in 0..n {
        if !gone.contains(&v) {
            new_index[v] = verts.len();
            verts.push(d.vertex(v));
        }
    }
    let mut mate = vec![NO_DART; 4 * verts.len()];
    for v in 0..n {
        if new_index[v] == usize::MAX {
            continue;
        }
        for s in 0..d.degree(v) {
            let mut m = d.mate(dart(v, s));
            while new_index[vertex_of(m)] == usize::MAX {
                m = d.mate(dart(vertex_of(m), (slot_of(m) + 2) % 4));
            }
            mate[4 * new_index[v] + s] = dart(new_index[vertex_of(m)], slot_of(m));
        }
    }
    Diagram::from_raw(verts, mate)
}

fn grow(d: &Diagram, extra: usize, over: OverPair) -> (Vec<Vertex>, Vec<Dart>) {
    let mut verts = d.vertices().to_vec();
    let mut mate = d.mates().to_vec();
    for _ in 0..extra {
        verts.push(Vertex::Crossing(over));
        mate.extend([NO_DART; 4]);
    }
    (verts, mate)
}

fn link(mate: &mut [Dart], a: Dart, b: Dart) {
    mate[a as usize] = b;
    mate[b as usize] = a;
}

/// Kink on the edge at `x`: the strand enters the new crossing at slot 0,
/// loops from slot 2 back to slot 1 or 3, and leaves through the other.
fn add_kink(d: &Diagram, x: Dart, param: u8) -> Diagram {
    let over = if param & 2 == 0 { OverPair::Odd } else { OverPair::Even };
    let (verts, mut mate) = grow(d, 1, over);
    let k = verts.len() - 1;
    let y = d.mate(x);
    let (back, out) = if param & 1 == 0 { (1, 3) } else { (3, 1) };
    link(&mut mate, x, dart(k, 0));
    link(&mut mate, dart(k, 2), dart(k, back));
    link(&mut mate, dart(k, out), y);
    Diagram::from_raw(verts, mate)
}

/// Push the edge of `a` across the edge of `b` through their common face.
/// Both edges keep the face on their left; the finger creates crossings
/// `p` (first met along `a`) and `q`.
fn push_finger(d: &Diagram, a: Dart, b: Dart, a_over: bool) -> Diagram {
    // Finger strand uses slots 1 and 3; `b`'s strand slots 0 and 2.
    let over = if a_over { OverPair::Odd } else { OverPair::Even };
    let (verts, mut mate) = grow(d, 2, over);
    let (p, q) = (verts.len() - 2, verts.len() - 1);
    let (ma, mb) = (d.mate(a), d.mate(b));
    link(&mut mate, a, dart(p, 3));
    link(&mut mate, dart(p, 1), dart(q, 1));
    link(&mut mate, dart(q, 3), ma);
    link(&mut mate, b, dart(q, 0));
    link(&mut mate, dart(q, 2), dart(p, 0));
    link(&mut mate, dart(p, 2), mb);
    Diagram::from_raw(verts, mate)
}

/// Same-edge finger: the piece of the edge next to `a` is pushed across
/// the piece next to `b = mate(a)`.
fn push_self_finger(d: &Diagram, a: Dart, b: Dart, a_over: bool) -> Diagram {
    let over = if a_over { OverPair::Odd } else { OverPair::Even };
    let (verts, mut mate) = grow(d, 2, over);
    let (p, q) = (verts.len() - 2, verts.len() - 1);
    link(&mut mate, a, dart(p, 3));
    link(&mut mate, dart(p, 1), dart(q, 1));
    link(&mut mate, dart(q, 3), dart(p, 2));
    link(&mut mate, dart(p, 0), dart(q, 2));
    link(&mut mate, dart(q, 0), b);
    Diagram::from_raw(verts, mate)
}

/// Rewire the ports of a region: `ports[k]` is the old boundary dart at
/// position k, `fresh[k]` the dart that occupies position k afterwards.
fn rewire(d: &Diagram, mate: &mut [Dart], ports: &[Dart], fresh: &[Dart]) {
    for k in 0..ports.len() {
        let m = d.mate(ports[k]);
        match ports.iter().position(|&p| p == m) {
            Some(j) => {
                mate[fresh[k] as usize] = fresh[j];
            }
            None => {
                mate[fresh[k] as usize] = m;
                mate[m as usize] = fresh[k];
            }
        }
    }
}

/// Reidemeister III: each strand's two outer ends trade places, which
/// carries the triangle across the opposite crossing.
fn slide_triangle(d: &Diagram, tri: &[Dart]) -> Diagram {
    let mut mate = d.mates().to_vec();
    let mut ports = Vec::with_capacity(6);
    let mut fresh = Vec::with_capacity(6);
    for k in 0..3 {
        let x = tri[k];
        let y = d.mate(x);
        let opp = |z: Dart| dart(vertex_of(z), (slot_of(z) + 2) % 4);
        let (px, py) = (opp(x), opp(y));
        ports.extend([px, py]);
        fresh.extend([py, px]);
    }
    rewire(d, &mut mate, &ports, &fresh);
    Diagram::from_raw(d.vertices().to_vec(), mate)
}

/// Flype: the tangle is turned over about the axis through `c` and `c`
/// moves to the tangle's far side.
fn flype(d: &Diagram, s: &MoveSite) -> Diagram {
    let ci = s.darts[0];
    let c = vertex_of(ci);
    let i = slot_of(ci);
    let cd = |k: usize| dart(c, (i + k) % 4);
    let (ne, se) = (s.darts[1], s.darts[2]);
    let (nw, sw) = (d.mate(cd(0)), d.mate(cd(3)));
    let mut inside = vec![false; d.num_vertices()];
    for &v in &s.tangle {
        inside[v] = true;
    }
    let refl = |x: Dart| {
        if inside[vertex_of(x)] {
            dart(vertex_of(x), (4 - slot_of(x)) % 4)
        } else {
            x
        }
    };
    let mut verts = d.vertices().to_vec();
    let mut mate = d.mates().to_vec();
    for &v in &s.tangle {
        if let Vertex::Crossing(p) = verts[v] {
            verts[v] = Vertex::Crossing(p.toggled());
        }
        for sl in 0..4 {
            let x = dart(v, sl);
            let y = d.mate(x);
            if inside[vertex_of(y)] {
                mate[refl(x) as usize] = refl(y);
            }
        }
    }
    // Positions around the region: the two outer slots of c, then the
    // tangle's far ends.
    let ports = [cd(1), cd(2), ne, se];
    let fresh = [refl(sw), refl(nw), cd(0), cd(3)];
    rewire(d, &mut mate, &ports, &fresh);
    link(&mut mate, cd(1), refl(se));
    link(&mut mate, cd(2), refl(ne));
    Diagram::from_raw(verts, mate)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReachParams {
    /// Crossing-increasing R2 moves allowed along any one path.
    pub r: u32,
    pub use_flypes: bool,
    /// Safety cap on distinct codes per search.
    pub max_states: usize,
}

impl ReachParams {
    pub const DEFAULT_MAX_STATES: usize = 5_000_000;

    pub fn new(r: u32, use_flypes: bool) -> Self {
        ReachParams { r, use_flypes, max_states: Self::DEFAULT_MAX_STATES }
    }

    fn level_kinds(&self) -> &'static [MoveKind] {
        if self.use_flypes {
            &[MoveKind::R1Minus, MoveKind::R2Minus, MoveKind::R3, MoveKind::Flype]
        } else {
            &[MoveKind::R1Minus, MoveKind::R2Minus, MoveKind::R3]
        }
    }
}

/// Children of `d`: (code, diagram, remaining budget).
fn expand(d: &Diagram, budget: u32, p: &ReachParams) -> Vec<(Code, Diagram, u32)> {
    let mut kinds = p.level_kinds().to_vec();
    if budget > 0 {
        kinds.push(MoveKind::R2Plus);
    }
    find_sites(d, &kinds)
        .into_iter()
        .map(|s| {
            let b = if s.kind == MoveKind::R2Plus { budget - 1 } else { budget };
            let child = apply(d, &s).expect("site was found on this diagram");
            (child.code(), child, b)
        })
        .collect()
}

/// Breadth-first search state for one side of a search.
pub struct Search {
    params: ReachParams,
    /// Best remaining budget seen per code.
    pub visited: FxHashMap<Code, u32>,
    /// Frontiers by remaining budget.
    buckets: Vec<Vec<Diagram>>,
    pub capped: bool,
}

impl Search {
    pub fn new(d: &Diagram, params: ReachParams) -> Self {
        let mut visited = FxHashMap::default();
        visited.insert(d.code(), params.r);
        let mut buckets = vec![Vec::new(); params.r as usize + 1];
        buckets[params.r as usize].push(d.clone());
        Search { params, visited, buckets, capped: false }
    }

    pub fn is_done(&self) -> bool {
        self.capped || self.buckets.iter().all(|b| b.is_empty())
    }

    /// Expand one breadth-first layer at the highest pending budget.
    /// Returns the codes that entered `visited` in this step.
    pub fn step(&mut self) -> Vec<Code> {
        let Some(level) = (0..self.buckets.len()).rev().find(|&b| !self.buckets[b].is_empty()) else {
            return Vec::new();
        };
        let layer = std::mem::take(&mut self.buckets[level]);
        let p = self.params;
        let children: Vec<Vec<(Code, Diagram, u32)>> = layer.par_iter().map(|d| expand(d, level as u32, &p)).collect();
        let mut fresh = Vec::new();
        for (code, child, b) in children.into_iter().flatten() {
            let better = match self.visited.get(&code) {
                Some(&old) => b > old,
                None => true,
            };
            if !better {
                continue;
            }
            if !self.visited.contains_key(&code) {
                if self.visited.len() >= self.params.max_states {
                    self.capped = true;
                    continue;
                }
                fresh.push(code.clone());
            }
            self.visited.insert(code, b);
            self.buckets[b as usize].push(child);
        }
        fresh
    }

    pub fn run(&mut self) {
        while !self.is_done() {
            self.step();
        }
    }
}

#[derive(Clone, Debug)]
pub struct Reach {
    pub codes: FxHashSet<Code>,
    /// The state cap was hit; `codes` is partial.
    pub capped: bool,
}

/// Every code reachable with at most `p.r` crossing-increasing R2 moves
/// per path, plus R1-, R2-, R3 (and flypes when enabled).
pub fn reach(d: &Diagram, p: ReachParams) -> Reach {
    let mut s = Search::new(d, p);
    s.run();
    Reach { codes: s.visited.into_keys().collect(), capped: s.capped }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// A common diagram was found.
    Equivalent,
    /// An invariant differs: definitely not equivalent.
    Distinct,
    /// Both searches were exhausted without meeting.
    NotConnected,
    /// A search hit the state cap first.
    Indeterminate,
}

/// Bidirectional search: both trees grow one layer at a time until they
/// share a code or are exhausted. The bracket is compared first.
pub fn equivalent(d1: &Diagram, d2: &Diagram, p: ReachParams) -> Equivalence {
    if crate::invariants::bracket(d1) != crate::invariants::bracket(d2) {
        return Equivalence::Distinct;
    }
    search_meet(d1, d2, p)
}

/// Bidirectional search without the invariant short-circuit.
pub fn search_meet(d1: &Diagram, d2: &Diagram, p: ReachParams) -> Equivalence {
    let mut a = Search::new(d1, p);
    let mut b = Search::new(d2, p);
    if b.visited.contains_key(&d1.code()) {
        return Equivalence::Equivalent;
    }
    loop {
        let a_open = !a.is_done();
        let b_open = !b.is_done();
        if !a_open && !b_open {
            break;
        }
        // Grow the smaller tree.
        let grow_a = a_open && (!b_open || a.visited.len() <= b.visited.len());
        let (me, other) = if grow_a { (&mut a, &b) } else { (&mut b, &a) };
        if me.step().iter().any(|c| other.visited.contains_key(c)) {
            return Equivalence::Equivalent;
        }
    }
    if a.capped || b.capped {
        Equivalence::Indeterminate
    } else {
        Equivalence::NotConnected
    }
}

/// A minimum-crossing element of the reachable set, ties broken by code.
/// The flag reports a capped search.
pub fn simplify(d: &Diagram, p: ReachParams) -> (Diagram, bool) {
    let r = reach(d, p);
    let best = r
        .codes
        .iter()
        .min_by(|x, y| x.num_crossings().cmp(&y.num_crossings()).then_with(|| x.cmp(y)))
        .expect("the start code is always reached");
    (best.to_diagram(), r.capped)
}
