//! The five knotoid invariants and the combined signature.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::diagram::{dart, slot_of, vertex_of, Dart, Diagram, OverPair, Vertex, NO_DART};
use crate::poly::{Lp, Monomial, MultiPoly, Var};

/// Orientation data of one crossing.
#[derive(Clone, Copy, Debug)]
struct Cross {
    /// `true` for slots the strand enters through.
    incoming: [bool; 4],
    sign: i32,
    /// First under slot (0 or 1).
    u: usize,
}

fn crossings(d: &Diagram) -> Vec<(usize, Cross)> {
    let signs = d.signs();
    let mut incoming = vec![[false; 4]; d.num_vertices()];
    for p in d.passages() {
        incoming[p.vertex][p.enter] = true;
    }
    (0..d.num_vertices())
        .filter(|&v| d.is_crossing(v))
        .map(|v| {
            let u = match d.vertex(v) {
                Vertex::Crossing(OverPair::Odd) => 0,
                _ => 1,
            };
            (v, Cross { incoming: incoming[v], sign: signs[v], u })
        })
        .collect()
}

/// Smoothing partner of slot `s` at a crossing whose first under slot is `u`.
/// The A-smoothing joins (u, u+1) and (u+2, u+3).
#[inline]
fn partner(s: usize, u: usize, a_smoothing: bool) -> usize {
    let even = (s + 4 - u) % 2 == 0;
    if even == a_smoothing {
        (s + 1) % 4
    } else {
        (s + 3) % 4
    }
}

fn delta() -> Lp {
    Lp::mono(-1, 2).add(&Lp::mono(-1, -2))
}

/// `(-A^3)^(-w)`.
fn writhe_factor(w: i32) -> Lp {
    Lp::mono(if w % 2 == 0 { 1 } else { -1 }, -3 * w)
}

/// Result of tracing one state: A-count minus B-count, closed loops, and
/// the number of surviving cusp pairs on the open segment.
struct StateSum {
    /// (a, loops, k) -> multiplicity
    counts: FxHashMap<(i32, u32, u32), i64>,
}

fn state_sum(d: &Diagram, with_cusps: bool) -> StateSum {
    let cs = crossings(d);
    let n = cs.len();
    assert!(n < 28, "state sum over {n} crossings is out of range");
    let mut local = vec![usize::MAX; d.num_vertices()];
    for (i, &(v, _)) in cs.iter().enumerate() {
        local[v] = i;
    }
    let mut counts: FxHashMap<(i32, u32, u32), i64> = FxHashMap::default();
    let mut seen = vec![false; d.mates().len()];
    let mut stack: Vec<bool> = Vec::new();
    let tail = d.tail_dart();
    for mask in 0u32..(1u32 << n) {
        seen.iter_mut().for_each(|x| *x = false);
        let a_count = n as i32 - 2 * mask.count_ones() as i32;
        let part = |m: Dart| -> Dart {
            let v = vertex_of(m);
            let i = local[v];
            let a = mask >> i & 1 == 0;
            dart(v, partner(slot_of(m), cs[i].1.u, a))
        };
        // Open segment.
        stack.clear();
        let mut x = tail;
        seen[x as usize] = true;
        loop {
            let m = d.mate(x);
            seen[m as usize] = true;
            if d.is_endpoint_dart(m) {
                break;
            }
            let p = part(m);
            seen[p as usize] = true;
            if with_cusps {
                let c = &cs[local[vertex_of(m)]].1;
                if c.incoming[slot_of(m)] == c.incoming[slot_of(p)] {
                    let left = slot_of(p) == (slot_of(m) + 1) % 4;
                    if stack.last() == Some(&left) {
                        stack.pop();
                    } else {
                        stack.push(left);
                    }
                }
            }
            x = p;
        }
        let k = (stack.len() / 2) as u32;
        // Closed loops.
        let mut loops = 0u32;
        for &(v, _) in &cs {
            for s in 0..4 {
                let start = dart(v, s);
                if seen[start as usize] {
                    continue;
                }
                loops += 1;
                let mut y = start;
                loop {
                    seen[y as usize] = true;
                    let m = d.mate(y);
                    seen[m as usize] = true;
                    y = part(m);
                    if y == start {
                        break;
                    }
                }
            }
        }
        *counts.entry((a_count, loops, k)).or_default() += 1;
    }
    StateSum { counts }
}

fn bracket_lp(d: &Diagram) -> Lp {
    let ss = state_sum(d, false);
    let dl = delta();
    let mut raw = Lp::zero();
    for (&(a, loops, _), &c) in &ss.counts {
        raw = raw.add(&dl.pow(loops).shift(a).scale(c));
    }
    raw.mul(&writhe_factor(d.writhe()))
}

/// Kauffman bracket normalized by `(-A^3)^(-writhe)`.
pub fn bracket(d: &Diagram) -> MultiPoly {
    bracket_lp(d).to_multi(Var::A)
}

/// The bracket multiplied by the unit `(-A^3)^k` that brings its lowest
/// exponent into {0, 1, 2}. This is the form tabulated in the census.
pub fn bracket_normalized(d: &Diagram) -> MultiPoly {
    unit_normalize_bracket(&bracket(d))
}

pub fn unit_normalize_bracket(p: &MultiPoly) -> MultiPoly {
    let Some((lo, _)) = p.exp_range(Var::A) else { return p.clone() };
    let k = -lo.div_euclid(3);
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let mut out = p.shift(Var::A, 3 * k);
    if sign < 0 {
        out = -out;
    }
    out
}

/// Arrow polynomial, same normalization as [`bracket`].
pub fn arrow(d: &Diagram) -> MultiPoly {
    let ss = state_sum(d, true);
    let dl = delta();
    let mut by_k: BTreeMap<u32, Lp> = BTreeMap::new();
    for (&(a, loops, k), &c) in &ss.counts {
        let e = by_k.entry(k).or_default();
        *e = e.add(&dl.pow(loops).shift(a).scale(c));
    }
    let wf = writhe_factor(d.writhe());
    let mut out = MultiPoly::zero();
    for (k, lp) in by_k {
        let p = lp.mul(&wf).to_multi(Var::A);
        let lam = if k == 0 { Monomial::one() } else { Monomial::var(Var::L(k as u16), 1) };
        out += &(&p * &MultiPoly::term(1, lam));
    }
    out
}

/// Affine index polynomial from the integer labelling of the flat strand.
pub fn affine_index(d: &Diagram) -> MultiPoly {
    let passages = d.passages();
    let signs = d.signs();
    // Entry slot of each pass, per crossing.
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); d.num_vertices()];
    for p in &passages {
        ins[p.vertex].push(p.enter);
    }
    let mut label = 0i32;
    let mut over_in = vec![0i32; d.num_vertices()];
    let mut under_out = vec![0i32; d.num_vertices()];
    for p in &passages {
        let other = if ins[p.vertex][0] == p.enter { ins[p.vertex][1] } else { ins[p.vertex][0] };
        let before = label;
        // The other strand runs from our right to our left.
        label += if other == (p.enter + 3) % 4 { 1 } else { -1 };
        if d.is_under(dart(p.vertex, p.enter)) {
            under_out[p.vertex] = label;
        } else {
            over_in[p.vertex] = before;
        }
    }
    let mut out = MultiPoly::zero();
    for v in (0..d.num_vertices()).filter(|&v| d.is_crossing(v)) {
        let w = over_in[v] - under_out[v];
        let s = signs[v] as i64;
        out += &MultiPoly::mono(s, Var::T, w);
        out += &MultiPoly::constant(-s);
    }
    out
}

/// Mock Alexander polynomial with the tail's face starred.
pub fn mock_alexander(d: &Diagram) -> MultiPoly {
    let cs = crossings(d);
    let n = cs.len();
    let (fidx, nf) = d.face_index();
    let star = fidx[d.tail_dart() as usize];
    assert_eq!(nf, n + 1, "an n-crossing diagram has n+1 faces");
    let mut col = vec![usize::MAX; nf];
    let mut c = 0;
    for (f, slot) in col.iter_mut().enumerate() {
        if f != star {
            *slot = c;
            c += 1;
        }
    }
    // weight[i][j]: crossing i placed in non-starred face j.
    let mut weight = vec![vec![Lp::zero(); n]; n];
    for (i, &(v, ref x)) in cs.iter().enumerate() {
        for k in 0..4 {
            let f = fidx[dart(v, k) as usize];
            if f == star {
                continue;
            }
            let (a, b) = (x.incoming[k], x.incoming[(k + 1) % 4]);
            let corner = match (a, b, x.sign > 0) {
                (true, true, true) => Lp::mono(-1, -1),
                (false, false, true) => Lp::mono(1, 1),
                (true, true, false) => Lp::mono(-1, 1),
                (false, false, false) => Lp::mono(1, -1),
                _ => Lp::mono(1, 0),
            };
            let j = col[f];
            weight[i][j] = weight[i][j].add(&corner);
        }
    }
    // Permanent by dynamic programming over used faces.
    let mut dp: Vec<Lp> = vec![Lp::zero(); 1 << n];
    dp[0] = Lp::mono(1, 0);
    for mask in 0usize..(1 << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        let cur = dp[mask].clone();
        for j in 0..n {
            if mask >> j & 1 == 0 && !weight[i][j].is_zero() {
                let next = mask | 1 << j;
                dp[next] = dp[next].add(&cur.mul(&weight[i][j]));
            }
        }
    }
    dp[(1 << n) - 1].to_multi(Var::W)
}

/// A spatial graph diagram: crossings plus graph vertices of any degree.
#[derive(Clone, Debug)]
pub struct ThetaCurve {
    first: Vec<u32>,
    mate: Vec<u32>,
    owner: Vec<u32>,
    /// First under slot for crossings, `None` for graph vertices.
    under: Vec<Option<u8>>,
}

impl ThetaCurve {
    fn new() -> Self {
        ThetaCurve { first: vec![0], mate: Vec::new(), owner: Vec::new(), under: Vec::new() }
    }

    fn add_vertex(&mut self, deg: usize, under: Option<u8>) -> u32 {
        let base = *self.first.last().unwrap();
        let v = self.under.len() as u32;
        self.first.push(base + deg as u32);
        self.mate.extend(std::iter::repeat(NO_DART).take(deg));
        self.owner.extend(std::iter::repeat(v).take(deg));
        self.under.push(under);
        base
    }

    fn link(&mut self, a: u32, b: u32) {
        self.mate[a as usize] = b;
        self.mate[b as usize] = a;
    }

    pub fn num_vertices(&self) -> usize {
        self.under.len()
    }

    pub fn num_crossings(&self) -> usize {
        self.under.iter().filter(|u| u.is_some()).count()
    }

    /// Degrees of the graph vertices (crossings excluded).
    pub fn graph_degrees(&self) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| self.under[v].is_none())
            .map(|v| (self.first[v + 1] - self.first[v]) as usize)
            .collect()
    }

    fn deg(&self, v: usize) -> u32 {
        self.first[v + 1] - self.first[v]
    }

    fn slot(&self, d: u32) -> u32 {
        d - self.first[self.owner[d as usize] as usize]
    }

    fn euler(&self) -> i64 {
        let nd = self.mate.len();
        let mut seen = vec![false; nd];
        let mut faces = 0i64;
        for d in 0..nd {
            if seen[d] {
                continue;
            }
            faces += 1;
            let mut x = d as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                let m = self.mate[x as usize];
                let v = self.owner[m as usize] as usize;
                let s = self.slot(m);
                x = self.first[v] + (s + self.deg(v) - 1) % self.deg(v);
            }
        }
        self.num_vertices() as i64 - nd as i64 / 2 + faces
    }
}

/// Double-sided closure: two arcs from tail to head through a shortest
/// chain of faces, one passing over every edge it meets and one under.
pub fn close_theta(d: &Diagram) -> ThetaCurve {
    let path = closure_path(d);
    let k = path.len();
    for bits in 0u64..(1u64 << (k + 2)) {
        let g = build_closure(d, &path, bits);
        if g.euler() == 2 {
            return g;
        }
    }
    unreachable!("some arc ordering of the closure is planar")
}

/// Darts crossed by the closure arcs, from the tail face to the head face.
fn closure_path(d: &Diagram) -> Vec<Dart> {
    let faces = d.faces();
    let (fidx, nf) = d.face_index();
    let ft = fidx[d.tail_dart() as usize];
    let fh = fidx[d.head_dart() as usize];
    let mut parent: Vec<Option<(usize, Dart)>> = vec![None; nf];
    let mut seen = vec![false; nf];
    seen[ft] = true;
    let mut queue = std::collections::VecDeque::from([ft]);
    while let Some(f) = queue.pop_front() {
        if f == fh {
            break;
        }
        for &x in &faces[f] {
            let g = fidx[d.mate(x) as usize];
            if !seen[g] {
                seen[g] = true;
                parent[g] = Some((f, x));
                queue.push_back(g);
            }
        }
    }
    let mut path = Vec::new();
    let mut f = fh;
    while f != ft {
        let (p, x) = parent[f].expect("dual graph is connected");
        path.push(x);
        f = p;
    }
    path.reverse();
    path
}

fn build_closure(d: &Diagram, path: &[Dart], bits: u64) -> ThetaCurve {
    let mut g = ThetaCurve::new();
    let mut map = vec![NO_DART; d.mates().len()];
    let mut ends = [[0u32; 3]; 2];
    for v in 0..d.num_vertices() {
        match d.vertex(v) {
            Vertex::Crossing(p) => {
                let u = if p == OverPair::Odd { 0 } else { 1 };
                let base = g.add_vertex(4, Some(u));
                for s in 0..4 {
                    map[dart(v, s) as usize] = base + s as u32;
                }
            }
            Vertex::Endpoint(role) => {
                let base = g.add_vertex(3, None);
                map[dart(v, 0) as usize] = base;
                ends[role as usize] = [base, base + 1, base + 2];
            }
        }
    }
    let bit = |i: usize| bits >> i & 1 == 1;
    let pick = |e: [u32; 3], b: bool| if b { (e[1], e[2]) } else { (e[2], e[1]) };
    let (tx, ty) = pick(ends[0], bit(0));
    let (hx, hy) = pick(ends[1], bit(1));
    let mut on_path = vec![false; d.mates().len()];
    let (mut px, mut py) = (tx, ty);
    for (i, &x) in path.iter().enumerate() {
        let y = d.mate(x);
        on_path[x as usize] = true;
        on_path[y as usize] = true;
        // Slots: 0 toward x, 1 into the next face, 2 toward y, 3 back.
        let over = g.add_vertex(4, Some(0));
        let under = g.add_vertex(4, Some(1));
        let (a, b) = if bit(i + 2) { (over, under) } else { (under, over) };
        g.link(map[x as usize], a);
        g.link(a + 2, b);
        g.link(b + 2, map[y as usize]);
        g.link(px, over + 3);
        g.link(py, under + 3);
        px = over + 1;
        py = under + 1;
    }
    g.link(px, hx);
    g.link(py, hy);
    for x in d.darts() {
        if !on_path[x as usize] {
            let m = d.mate(x);
            g.mate[map[x as usize] as usize] = map[m as usize];
        }
    }
    g
}

/// Flow polynomial of a multigraph, coefficients in `q` (index = power).
struct FlowMemo {
    memo: FxHashMap<Vec<u8>, Vec<i64>>,
}

fn poly_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] = out[i].checked_sub(x).expect("coefficient overflow");
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Multiply by `(q - 1)^k`.
fn times_q_minus_one(mut p: Vec<i64>, k: usize) -> Vec<i64> {
    for _ in 0..k {
        let mut out = vec![0i64; p.len() + 1];
        for (i, &x) in p.iter().enumerate() {
            out[i + 1] += x;
            out[i] -= x;
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        p = out;
    }
    p
}

impl FlowMemo {
    fn new() -> Self {
        FlowMemo { memo: FxHashMap::default() }
    }

    /// Deletion-contraction after loop, bridge and series reductions.
    fn flow(&mut self, nv: usize, edges: &[(u8, u8)]) -> Vec<i64> {
        let mut es: Vec<(u8, u8)> = Vec::with_capacity(edges.len());
        let mut loops = 0;
        for &(a, b) in edges {
            if a == b {
                loops += 1;
            } else {
                es.push((a.min(b), a.max(b)));
            }
        }
        // Series reduction: suppress degree-2 vertices.
        let mut alive = vec![true; nv];
        loop {
            let mut deg = vec![0u32; nv];
            for &(a, b) in &es {
                deg[a as usize] += 1;
                deg[b as usize] += 1;
            }
            if (0..nv).any(|v| deg[v] == 1) {
                return Vec::new();
            }
            let Some(v) = (0..nv).find(|&v| alive[v] && deg[v] == 2) else {
                for v in 0..nv {
                    if deg[v] == 0 {
                        alive[v] = false;
                    }
                }
                break;
            };
            let inc: Vec<usize> = (0..es.len()).filter(|&i| es[i].0 as usize == v || es[i].1 as usize == v).collect();
            let other = |e: (u8, u8)| if e.0 as usize == v { e.1 } else { e.0 };
            let (x, y) = (other(es[inc[0]]), other(es[inc[1]]));
            es.remove(inc[1]);
            es.remove(inc[0]);
            alive[v] = false;
            if x == y {
                loops += 1;
            } else {
                es.push((x.min(y), x.max(y)));
            }
        }
        if es.is_empty() {
            return times_q_minus_one(vec![1], loops);
        }
        if has_bridge(nv, &es) {
            return Vec::new();
        }
        // Relabel live vertices by degree, then by first appearance.
        let mut deg = vec![0u32; nv];
        for &(a, b) in &es {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut order: Vec<usize> = (0..nv).filter(|&v| deg[v] > 0).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
        let mut lab = vec![0u8; nv];
        for (i, &v) in order.iter().enumerate() {
            lab[v] = i as u8;
        }
        let mut rel: Vec<(u8, u8)> = es
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (lab[a as usize], lab[b as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        rel.sort_unstable();
        let m = order.len();
        let mut key = Vec::with_capacity(2 * rel.len() + 1);
        key.push(m as u8);
        for &(a, b) in &rel {
            key.push(a);
            key.push(b);
        }
        let base = if let Some(p) = self.memo.get(&key) {
            p.clone()
        } else {
            // Contract/delete an edge at the highest-degree vertex.
            let (a, b) = rel[0];
            let rest: Vec<(u8, u8)> = rel[1..].to_vec();
            let contracted: Vec<(u8, u8)> = rest
                .iter()
                .map(|&(x, y)| {
                    let f = |z: u8| if z == b { a } else { z };
                    (f(x), f(y))
                })
                .collect();
            let p = poly_sub(&self.flow(m, &contracted), &self.flow(m, &rest));
            self.memo.insert(key, p.clone());
            p
        };
        times_q_minus_one(base, loops)
    }
}

fn has_bridge(nv: usize, es: &[(u8, u8)]) -> bool {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (i, &(a, b)) in es.iter().enumerate() {
        adj[a as usize].push((b as usize, i));
        adj[b as usize].push((a as usize, i));
    }
    let mut disc = vec![usize::MAX; nv];
    let mut low = vec![0usize; nv];
    let mut t = 0;
    fn dfs(v: usize, pe: usize, adj: &[Vec<(usize, usize)>], disc: &mut [usize], low: &mut [usize], t: &mut usize) -> bool {
        disc[v] = *t;
        low[v] = *t;
        *t += 1;
        for &(w, e) in &adj[v] {
            if e == pe {
                continue;
            }
            if disc[w] == usize::MAX {
                if dfs(w, e, adj, disc, low, t) {
                    return true;
                }
                low[v] = low[v].min(low[w]);
                if low[w] > disc[v] {
                    return true;
                }
            } else {
                low[v] = low[v].min(disc[w]);
            }
        }
        false
    }
    for v in 0..nv {
        if disc[v] == usize::MAX && !adj[v].is_empty() && dfs(v, usize::MAX, &adj, &mut disc, &mut low, &mut t) {
            return true;
        }
    }
    false
}

/// Yamada polynomial of a spatial graph diagram, before normalization.
pub fn yamada_raw(g: &ThetaCurve) -> MultiPoly {
    let cross: Vec<usize> = (0..g.num_vertices()).filter(|&v| g.under[v].is_some()).collect();
    let m = cross.len();
    assert!(m <= 20, "Yamada state sum over {m} crossings is out of range");
    let mut memo = FlowMemo::new();
    // Per A-exponent, a polynomial in q.
    let mut acc: BTreeMap<i32, Vec<i64>> = BTreeMap::new();
    let nd = g.mate.len();
    let mut choice = vec![0u8; g.num_vertices()];
    let mut gv = vec![u8::MAX; g.num_vertices()];
    let mut seen = vec![false; nd];
    let mut edges: Vec<(u8, u8)> = Vec::new();
    let total = 3usize.pow(m as u32);
    for state in 0..total {
        let mut s = state;
        let mut a = 0i32;
        for &v in &cross {
            let c = (s % 3) as u8;
            s /= 3;
            choice[v] = c;
            a += match c {
                0 => 1,
                1 => -1,
                _ => 0,
            };
        }
        let mut nv = 0u8;
        for v in 0..g.num_vertices() {
            if g.under[v].is_none() || choice[v] == 2 {
                gv[v] = nv;
                nv += 1;
            } else {
                gv[v] = u8::MAX;
            }
        }
        let through = |y: u32| -> u32 {
            let v = g.owner[y as usize] as usize;
            let u = g.under[v].unwrap() as usize;
            let sl = g.slot(y) as usize;
            g.first[v] + partner(sl, u, choice[v] == 0) as u32
        };
        seen.iter_mut().for_each(|x| *x = false);
        edges.clear();
        for v in 0..g.num_vertices() {
            if gv[v] == u8::MAX {
                continue;
            }
            for x in g.first[v]..g.first[v + 1] {
                if seen[x as usize] {
                    continue;
                }
                seen[x as usize] = true;
                let mut y = g.mate[x as usize];
                while gv[g.owner[y as usize] as usize] == u8::MAX {
                    seen[y as usize] = true;
                    let z = through(y);
                    seen[z as usize] = true;
                    y = g.mate[z as usize];
                }
                seen[y as usize] = true;
                edges.push((gv[v], gv[g.owner[y as usize] as usize]));
            }
        }
        let mut free = 0;
        for x in 0..nd as u32 {
            if seen[x as usize] {
                continue;
            }
            free += 1;
            let mut y = x;
            while !seen[y as usize] {
                seen[y as usize] = true;
                let z = g.mate[y as usize];
                seen[z as usize] = true;
                y = through(z);
            }
        }
        let f = times_q_minus_one(memo.flow(nv as usize, &edges), free);
        if f.is_empty() {
            continue;
        }
        let sign = if (nv as usize + edges.len()) % 2 == 0 { 1 } else { -1 };
        let slot = acc.entry(a).or_default();
        if slot.len() < f.len() {
            slot.resize(f.len(), 0);
        }
        for (i, &c) in f.iter().enumerate() {
            slot[i] = slot[i].checked_add(sign * c).expect("coefficient overflow");
        }
    }
    // q = A + 2 + A^-1
    let q = Lp::mono(1, 1).add(&Lp::mono(2, 0)).add(&Lp::mono(1, -1));
    let mut out = Lp::zero();
    for (a, coeffs) in acc {
        let mut poly = Lp::zero();
        let mut qp = Lp::mono(1, 0);
        for &c in &coeffs {
            poly = poly.add(&qp.scale(c));
            qp = qp.mul(&q);
        }
        out = out.add(&poly.shift(a));
    }
    out.to_multi(Var::A)
}

/// Multiply by the unit `(-A)^k` that makes the lowest exponent 0.
pub fn unit_normalize_yamada(p: &MultiPoly) -> MultiPoly {
    let Some((lo, _)) = p.exp_range(Var::A) else { return p.clone() };
    let out = p.shift(Var::A, -lo);
    if lo % 2 == 0 {
        out
    } else {
        -out
    }
}

/// Yamada polynomial of the double-sided closure, normalized.
pub fn yamada_closure(d: &Diagram) -> MultiPoly {
    unit_normalize_yamada(&yamada_raw(&close_theta(d)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantSignature {
    pub bracket: String,
    pub arrow: String,
    pub mock: String,
    pub affine: String,
    pub yamada: String,
}

impl InvariantSignature {
    pub fn values(&self) -> [(&'static str, &str); 5] {
        [
            ("bracket", &self.bracket),
            ("arrow", &self.arrow),
            ("mock", &self.mock),
            ("affine", &self.affine),
            ("yamada", &self.yamada),
        ]
    }
}

/// All five invariants in canonical print. The bracket and Yamada values
/// carry the unit normalization used by the census tables.
pub fn signature(d: &Diagram) -> InvariantSignature {
    InvariantSignature {
        bracket: bracket_normalized(d).to_string(),
        arrow: arrow(d).to_string(),
        mock: mock_alexander(d).to_string(),
        affine: affine_index(d).to_string(),
        yamada: yamada_closure(d).to_string(),
    }
}

/// Signature without the Yamada value, for cheap prefiltering.
pub fn quick_key(d: &Diagram) -> (String, String, String, String) {
    (
        bracket_normalized(d).to_string(),
        arrow(d).to_string(),
        mock_alexander(d).to_string(),
        affine_index(d).to_string(),
    )
}

/// Lower bound on the height from the arrow and affine index values.
pub fn height_lower_bound(sig: &InvariantSignature) -> i64 {
    let arrow = MultiPoly::parse(&sig.arrow).map(|p| p.lambda_degree()).unwrap_or(0);
    let affine = MultiPoly::parse(&sig.affine)
        .ok()
        .and_then(|p| p.exp_range(Var::T))
        .map(|(lo, hi)| ((hi - lo) / 2) as i64)
        .unwrap_or(0);
    arrow.max(affine).max(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    const K21: &str = "[0],[0,1,2,3],[1,3,4,2],[4]";

    #[test]
    fn trivial_knotoid() {
        let d = Diagram::trivial();
        assert_eq!(bracket(&d), p("1"));
        assert_eq!(arrow(&d), p("1"));
        assert_eq!(affine_index(&d), p("0"));
        assert_eq!(mock_alexander(&d), p("1"));
        assert_eq!(yamada_closure(&d), p("-A^4 - A^3 - 2A^2 - A - 1"));
        assert_eq!(height_lower_bound(&signature(&d)), 0);
    }

    #[test]
    fn partner_is_an_involution() {
        for u in 0..2 {
            for a in [true, false] {
                for s in 0..4 {
                    let t = partner(s, u, a);
                    assert_ne!(t, s);
                    assert_eq!(partner(t, u, a), s);
                }
            }
        }
    }

    #[test]
    fn flow_polynomial_small_graphs() {
        let mut m = FlowMemo::new();
        // Theta graph: (q-1)(q-2).
        assert_eq!(m.flow(2, &[(0, 1), (0, 1), (0, 1)]), vec![2, -3, 1]);
        // Single loop: q - 1.
        assert_eq!(m.flow(1, &[(0, 0)]), vec![-1, 1]);
        // A bridge kills every flow.
        assert!(m.flow(2, &[(0, 0), (0, 1), (1, 1)]).is_empty());
        // K4: (q-1)(q-2)(q-3).
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(m.flow(4, &k4), vec![-6, 11, -6, 1]);
    }

    #[test]
    fn k21_values() {
        let d = parse_pd(K21).unwrap();
        assert_eq!(d.num_crossings(), 2);
        assert!(!d.is_knot_like());
        let sig = signature(&d);
        assert_eq!(height_lower_bound(&sig), 1);
    }
}
