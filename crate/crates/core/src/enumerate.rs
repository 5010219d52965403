//! Candidate diagrams: flat shadows, crossing assignment and ingestion of
//! planar_code graph files.
//!
//! Shadows are built strand-first. A Gauss word fixes the order in which
//! the strand from the tail meets the crossings; the strand enters slot 0
//! on its first visit to a crossing and slot 1 or 3 on the second. Every
//! single-strand rotation system arises this way, so filtering by Euler's
//! formula and deduplicating by code gives all shadows, both reflections
//! included.

use rayon::prelude::*;

use crate::diagram::{dart, slot_of, vertex_of, Code, Dart, Diagram, OverPair, Role, Vertex, NO_DART};
use crate::error::{DiagramError, EnumerateError};

/// Largest crossing number the generator accepts.
pub const MAX_SHADOW_CROSSINGS: usize = 8;

/// A flat 4-valent map with two legs. It may carry several components;
/// those never survive crossing assignment.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ShadowMap {
    verts: Vec<Vertex>,
    mate: Vec<Dart>,
}

impl std::fmt::Debug for ShadowMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.code() {
            Some(c) => write!(f, "ShadowMap({c})"),
            None => write!(f, "ShadowMap(multi-component, {} crossings)", self.num_crossings()),
        }
    }
}

impl ShadowMap {
    /// Checks everything a diagram needs except a single strand.
    pub fn new(verts: Vec<Vertex>, mate: Vec<Dart>) -> Result<ShadowMap, DiagramError> {
        match Diagram::new(verts.clone(), mate.clone()) {
            Ok(_) | Err(DiagramError::MultiComponent) => Ok(ShadowMap { verts, mate }),
            Err(e) => Err(e),
        }
    }

    pub fn num_crossings(&self) -> usize {
        self.verts.iter().filter(|v| matches!(v, Vertex::Crossing(_))).count()
    }

    pub fn is_single_strand(&self) -> bool {
        self.decorate(0).is_ok()
    }

    /// Crossing vertices in order of the strand's first visit, each with
    /// the slot it is first entered by. Crossings the strand never meets
    /// follow in index order with slot 0.
    fn first_visits(&self) -> Vec<(usize, usize)> {
        let n = self.verts.len();
        let tail = (0..n).find(|&v| self.verts[v] == Vertex::Endpoint(Role::Tail)).expect("shadow has a tail");
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut x = self.mate[dart(tail, 0) as usize];
        for _ in 0..2 * n {
            let v = vertex_of(x);
            if !matches!(self.verts[v], Vertex::Crossing(_)) {
                break;
            }
            if !seen[v] {
                seen[v] = true;
                out.push((v, slot_of(x)));
            }
            x = self.mate[dart(v, (slot_of(x) + 2) % 4) as usize];
        }
        for v in 0..n {
            if matches!(self.verts[v], Vertex::Crossing(_)) && !seen[v] {
                out.push((v, 0));
            }
        }
        out
    }

    /// The diagram whose k-th crossing (in first-visit order) is passed
    /// over on the first visit iff bit k of `bits` is set.
    pub fn decorate(&self, bits: u64) -> Result<Diagram, DiagramError> {
        let mut verts = self.verts.clone();
        for (k, (v, s)) in self.first_visits().into_iter().enumerate() {
            let first_under = bits >> k & 1 == 0;
            // Odd puts the even slots under.
            verts[v] = Vertex::Crossing(if (s % 2 == 0) == first_under { OverPair::Odd } else { OverPair::Even });
        }
        Diagram::new(verts, self.mate.clone())
    }

    /// Shadow identity: the code of the diagram passing under at every
    /// first visit. None for several components.
    pub fn code(&self) -> Option<Code> {
        self.decorate(0).ok().map(|d| d.code())
    }

    /// Reverse every cyclic order.
    pub fn reflect(&self) -> ShadowMap {
        let flip = |x: Dart| dart(vertex_of(x), (4 - slot_of(x)) % 4);
        let mut mate = self.mate.clone();
        for (x, &m) in self.mate.iter().enumerate() {
            if m != NO_DART {
                mate[flip(x as Dart) as usize] = flip(m);
            }
        }
        ShadowMap { verts: self.verts.clone(), mate }
    }

    /// Swap tail and head.
    pub fn reverse(&self) -> ShadowMap {
        let verts = self
            .verts
            .iter()
            .map(|v| match v {
                Vertex::Endpoint(Role::Tail) => Vertex::Endpoint(Role::Head),
                Vertex::Endpoint(Role::Head) => Vertex::Endpoint(Role::Tail),
                c => *c,
            })
            .collect();
        ShadowMap { verts, mate: self.mate.clone() }
    }

    fn from_code(c: &Code) -> ShadowMap {
        let d = c.to_diagram();
        ShadowMap { verts: d.vertices().to_vec(), mate: d.mates().to_vec() }
    }
}

/// Gauss words on `n` labels, labels first appearing in increasing order.
fn gauss_words(n: usize) -> Vec<Vec<u8>> {
    fn go(n: usize, word: &mut Vec<u8>, count: &mut [u8], started: usize, out: &mut Vec<Vec<u8>>) {
        if word.len() == 2 * n {
            out.push(word.clone());
            return;
        }
        for c in 0..started {
            if count[c] == 1 {
                count[c] = 2;
                word.push(c as u8);
                go(n, word, count, started, out);
                word.pop();
                count[c] = 1;
            }
        }
        if started < n {
            count[started] = 1;
            word.push(started as u8);
            go(n, word, count, started + 1, out);
            word.pop();
            count[started] = 0;
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![0; n], 0, &mut out);
    out
}

/// Shadow of a Gauss word; bit c of `dirs` makes the second visit to
/// crossing c enter slot 3 instead of slot 1.
fn word_shadow(n: usize, word: &[u8], dirs: u32) -> Option<Code> {
    let (tail, head) = (n, n + 1);
    let mut verts = vec![Vertex::Crossing(OverPair::Odd); n];
    verts.push(Vertex::Endpoint(Role::Tail));
    verts.push(Vertex::Endpoint(Role::Head));
    let mut mate = vec![NO_DART; 4 * (n + 2)];
    let mut seen = vec![false; n];
    let mut prev = dart(tail, 0);
    for &c in word {
        let c = c as usize;
        let (inn, out) = if !seen[c] {
            seen[c] = true;
            (0, 2)
        } else if dirs >> c & 1 == 0 {
            (1, 3)
        } else {
            (3, 1)
        };
        mate[prev as usize] = dart(c, inn);
        mate[dart(c, inn) as usize] = prev;
        prev = dart(c, out);
    }
    mate[prev as usize] = dart(head, 0);
    mate[dart(head, 0) as usize] = prev;
    // Every crossing is first entered at slot 0, so all Odd passes under
    // first everywhere.
    Diagram::new(verts, mate).ok().map(|d| d.code())
}

/// All single-strand shadows with `n` crossings, sorted by code.
pub fn gen_shadows(n: usize) -> Result<Vec<ShadowMap>, EnumerateError> {
    if n > MAX_SHADOW_CROSSINGS {
        return Err(EnumerateError::SizeCapExceeded(format!("{n} crossings (limit {MAX_SHADOW_CROSSINGS})")));
    }
    let words = gauss_words(n);
    let mut codes: Vec<Code> = words
        .par_iter()
        .flat_map_iter(|w| (0..1u32 << n).filter_map(move |dirs| word_shadow(n, w, dirs)))
        .collect();
    codes.par_sort_unstable();
    codes.dedup();
    Ok(codes.iter().map(ShadowMap::from_code).collect())
}

/// All crossing assignments of a shadow, canonical and sorted by code.
/// Assignments leaving several components are dropped.
pub fn assign_crossings(s: &ShadowMap) -> Vec<Diagram> {
    let n = s.num_crossings();
    let mut out: Vec<(Code, Diagram)> = (0..1u64 << n)
        .filter_map(|bits| s.decorate(bits).ok())
        .map(|d| {
            let c = d.code();
            (c.clone(), c.to_diagram())
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    out.into_iter().map(|(_, d)| d).collect()
}

#[derive(Clone, Debug, Default)]
pub struct Ingested {
    pub shadows: Vec<ShadowMap>,
    /// Graph records read.
    pub records: usize,
    /// Records with two legs and all other vertices 4-valent.
    pub kept: usize,
}

#[derive(Clone, Copy)]
enum Width {
    Bytes,
    Le,
    Be,
}

/// Read a planar_code stream. Each kept graph contributes both choices of
/// tail and both reflections, since the generator identifies reflections.
pub fn ingest_planar_code(data: &[u8]) -> Result<Ingested, EnumerateError> {
    let mut pos = 0;
    let mut width = Width::Bytes;
    if data.starts_with(b">>") {
        let end = data.windows(2).position(|w| w == b"<<").ok_or(EnumerateError::UnsupportedHeader)?;
        width = match &data[2..end] {
            b"planar_code" => Width::Bytes,
            b"planar_code le" => Width::Le,
            b"planar_code be" => Width::Be,
            _ => return Err(EnumerateError::UnsupportedHeader),
        };
        pos = end + 2;
    }
    let err = |offset: usize, msg: &str| EnumerateError::FormatError { offset, msg: msg.to_string() };
    let read = |pos: &mut usize, w: Width| -> Result<usize, EnumerateError> {
        let v = match w {
            Width::Bytes => data.get(*pos).map(|&b| b as usize),
            Width::Le => data.get(*pos..*pos + 2).map(|b| u16::from_le_bytes([b[0], b[1]]) as usize),
            Width::Be => data.get(*pos..*pos + 2).map(|b| u16::from_be_bytes([b[0], b[1]]) as usize),
        };
        let v = v.ok_or_else(|| err(*pos, "truncated record"))?;
        *pos += if matches!(w, Width::Bytes) { 1 } else { 2 };
        Ok(v)
    };
    let mut out = Ingested::default();
    let mut seen = std::collections::BTreeSet::new();
    while pos < data.len() {
        let start = pos;
        let mut w = width;
        let mut n = read(&mut pos, w)?;
        if n == 0 && matches!(w, Width::Bytes) {
            // Large graphs switch to little-endian shorts.
            w = Width::Le;
            n = read(&mut pos, w)?;
        }
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut list = Vec::new();
            loop {
                let at = pos;
                let x = read(&mut pos, w)?;
                if x == 0 {
                    break;
                }
                if x > n {
                    return Err(err(at, "neighbour out of range"));
                }
                list.push(x - 1);
            }
            adj.push(list);
        }
        out.records += 1;
        let legs = adj.iter().filter(|l| l.len() == 1).count();
        if legs != 2 || adj.iter().any(|l| l.len() != 1 && l.len() != 4) {
            continue;
        }
        out.kept += 1;
        let base = planar_to_shadow(&adj).map_err(|m| err(start, &m))?;
        for s in [base.clone(), base.reflect(), base.reverse(), base.reverse().reflect()] {
            match s.code() {
                Some(c) => {
                    if seen.insert(c.clone()) {
                        out.shadows.push(ShadowMap::from_code(&c));
                    }
                }
                None => out.shadows.push(s),
            }
        }
    }
    Ok(out)
}

/// Adjacency lists in clockwise order to a shadow.
fn planar_to_shadow(adj: &[Vec<usize>]) -> Result<ShadowMap, String> {
    let n = adj.len();
    let mut legs = (0..n).filter(|&v| adj[v].len() == 1);
    let (tail, head) = (legs.next().unwrap(), legs.next().unwrap());
    let verts: Vec<Vertex> = (0..n)
        .map(|v| {
            if v == tail {
                Vertex::Endpoint(Role::Tail)
            } else if v == head {
                Vertex::Endpoint(Role::Head)
            } else {
                Vertex::Crossing(OverPair::Odd)
            }
        })
        .collect();
    // Our slots run counterclockwise.
    let ccw: Vec<Vec<usize>> = adj.iter().map(|l| l.iter().rev().copied().collect()).collect();
    let mut mate = vec![NO_DART; 4 * n];
    for v in 0..n {
        for (s, &u) in ccw[v].iter().enumerate() {
            if u == v {
                return Err("loops are not supported".into());
            }
            // Parallel edges: the k-th copy seen from v is the k-th from
            // the end seen from u.
            let k = ccw[v][..s].iter().filter(|&&x| x == u).count();
            let back: Vec<usize> = (0..ccw[u].len()).filter(|&t| ccw[u][t] == v).collect();
            if back.len() != ccw[v].iter().filter(|&&x| x == u).count() {
                return Err("adjacency is not symmetric".into());
            }
            mate[dart(v, s) as usize] = dart(u, back[back.len() - 1 - k]);
        }
    }
    ShadowMap::new(verts, mate).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_counts() {
        assert_eq!(gauss_words(0).len(), 1);
        assert_eq!(gauss_words(3).len(), 15);
        assert_eq!(gauss_words(4).len(), 105);
    }

    #[test]
    fn zero_crossings() {
        let s = gen_shadows(0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(assign_crossings(&s[0]), vec![Diagram::trivial().canonical()]);
    }

    #[test]
    fn size_cap() {
        assert!(matches!(gen_shadows(9), Err(EnumerateError::SizeCapExceeded(_))));
    }

    #[test]
    fn empty_stream() {
        let r = ingest_planar_code(b">>planar_code<<").unwrap();
        assert_eq!((r.records, r.kept, r.shadows.len()), (0, 0, 0));
        assert_eq!(ingest_planar_code(b"").unwrap().records, 0);
        assert!(matches!(ingest_planar_code(b">>graph6<<"), Err(EnumerateError::UnsupportedHeader)));
    }
}
