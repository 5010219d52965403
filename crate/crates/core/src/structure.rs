//! Mirror and rotation, primeness filters, symmetry flags.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{dart, slot_of, vertex_of, Dart, Diagram, Role, Vertex};
use crate::invariants::{signature, InvariantSignature};
use crate::moves::{search_meet, Equivalence, ReachParams};

/// Switch every crossing.
pub fn mirror(d: &Diagram) -> Diagram {
    let verts = d
        .vertices()
        .iter()
        .map(|&v| match v {
            Vertex::Crossing(p) => Vertex::Crossing(p.toggled()),
            e => e,
        })
        .collect();
    Diagram::from_raw(verts, d.mates().to_vec())
}

/// Swap the roles of tail and head.
pub fn reverse(d: &Diagram) -> Diagram {
    let verts = d
        .vertices()
        .iter()
        .map(|&v| match v {
            Vertex::Endpoint(r) => Vertex::Endpoint(match r {
                Role::Tail => Role::Head,
                Role::Head => Role::Tail,
            }),
            c => c,
        })
        .collect();
    Diagram::from_raw(verts, d.mates().to_vec())
}

/// Reflect the diagram in a line of the plane and turn it over, i.e. the
/// half-turn of space about that line. Cyclic orders reverse and every
/// crossing switches, so crossing signs are kept.
pub fn rotate(d: &Diagram) -> Diagram {
    let flip = |x: Dart| dart(vertex_of(x), (4 - slot_of(x)) % 4);
    let mut mate = d.mates().to_vec();
    for x in d.darts() {
        mate[flip(x) as usize] = flip(d.mate(x));
    }
    mirror(&Diagram::from_raw(d.vertices().to_vec(), mate))
}

/// Reflection of the plane alone: mirror after rotate.
pub fn reflect(d: &Diagram) -> Diagram {
    mirror(&rotate(d))
}

/// The orbit under mirror, rotation and reversal:
/// `[d, m, r, mr]` followed by the same four for the reverse of `d`.
///
/// The tabulation does not tell a knotoid from its reverse, so every
/// comparison in the census runs over this whole orbit.
pub fn images(d: &Diagram) -> [Diagram; 8] {
    let m = mirror(d);
    let r = rotate(d);
    let mr = mirror(&r);
    let [vd, vm, vr, vmr] = [d, &m, &r, &mr].map(reverse);
    [d.clone(), m, r, mr, vd, vm, vr, vmr]
}

/// Edges as `(dart, mate)` with the smaller dart first.
fn edges(d: &Diagram) -> Vec<(Dart, Dart)> {
    d.darts().filter(|&x| x < d.mate(x)).map(|x| (x, d.mate(x))).collect()
}

/// Component labels after deleting the given edges.
fn components_without(d: &Diagram, cut: &[(Dart, Dart)]) -> Vec<usize> {
    let n = d.num_vertices();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for sl in 0..d.degree(v) {
                let x = dart(v, sl);
                let m = d.mate(x);
                if cut.iter().any(|&(a, b)| a == x || b == x) {
                    continue;
                }
                let w = vertex_of(m);
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

fn side_has_crossing(d: &Diagram, comp: &[usize], c: usize) -> bool {
    (0..d.num_vertices()).any(|v| comp[v] == c && d.is_crossing(v))
}

fn side_has_endpoint(d: &Diagram, comp: &[usize], c: usize) -> bool {
    (0..d.num_vertices()).any(|v| comp[v] == c && !d.is_crossing(v))
}

/// A connected sum with a classical knot: a circle meeting the diagram in
/// two edges that cuts off crossings and no endpoint, with crossings left
/// outside as well.
pub fn is_composite(d: &Diagram) -> bool {
    let es = edges(d);
    let (fidx, _) = d.face_index();
    // A circle can cross two edges only if they border the same two faces.
    let sides = |(x, y): (Dart, Dart)| {
        let (f, g) = (fidx[x as usize], fidx[y as usize]);
        (f.min(g), f.max(g))
    };
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            if sides(es[i]) != sides(es[j]) {
                continue;
            }
            let cut = [es[i], es[j]];
            let comp = components_without(d, &cut);
            for (a, b) in cut {
                let (ca, cb) = (comp[vertex_of(a)], comp[vertex_of(b)]);
                if ca == cb {
                    continue;
                }
                for k in [ca, cb] {
                    // Each cut edge has exactly one end on the knot side.
                    let attached = cut.iter().all(|&(x, y)| (comp[vertex_of(x)] == k) != (comp[vertex_of(y)] == k));
                    let rest = (0..d.num_vertices()).any(|v| comp[v] != k && d.is_crossing(v));
                    if attached && rest && !side_has_endpoint(d, &comp, k) && side_has_crossing(d, &comp, k) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// A concatenation: a bridge with crossings on both sides.
pub fn is_concatenation(d: &Diagram) -> bool {
    edges(d).into_iter().any(|e| {
        let comp = components_without(d, &[e]);
        let (a, b) = (comp[vertex_of(e.0)], comp[vertex_of(e.1)]);
        a != b && side_has_crossing(d, &comp, a) && side_has_crossing(d, &comp, b)
    })
}

pub fn is_prime(d: &Diagram) -> bool {
    !is_composite(d) && !is_concatenation(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    /// Connected to its mirror image by a search.
    Achiral,
    /// Separated from its mirror image by an invariant.
    Chiral,
    /// Same invariants as the mirror image, but no connection found.
    ConjecturedChiral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rotatability {
    Rotatable,
    NonRotatable,
    ConjecturedNonRotatable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetryFlags {
    pub chiral: Chirality,
    pub rotatable: Rotatability,
}

impl SymmetryFlags {
    pub fn is_chiral(&self) -> bool {
        self.chiral != Chirality::Achiral
    }

    pub fn is_rotatable(&self) -> bool {
        self.rotatable == Rotatability::Rotatable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Same,
    Different,
    Unknown,
}

/// Is `d` equivalent to `img` or to its reverse?
fn compare(d: &Diagram, sig: &InvariantSignature, img: &Diagram, stages: &[ReachParams]) -> Verdict {
    let both = [img.clone(), reverse(img)];
    if both.iter().any(|e| e.code() == d.code()) {
        return Verdict::Same;
    }
    let live: Vec<&Diagram> = both.iter().filter(|e| &signature(e) == sig).collect();
    if live.is_empty() {
        return Verdict::Different;
    }
    for &p in stages {
        if live.iter().any(|e| search_meet(d, e, p) == Equivalence::Equivalent) {
            return Verdict::Same;
        }
    }
    Verdict::Unknown
}

/// Flags for one representative, up to reversal. `stages` are tried in
/// order until the image is reached.
pub fn symmetry_flags(d: &Diagram, sig: &InvariantSignature, stages: &[ReachParams]) -> SymmetryFlags {
    let chiral = match compare(d, sig, &mirror(d), stages) {
        Verdict::Same => Chirality::Achiral,
        Verdict::Different => Chirality::Chiral,
        Verdict::Unknown => Chirality::ConjecturedChiral,
    };
    let rotatable = match compare(d, sig, &rotate(d), stages) {
        Verdict::Same => Rotatability::Rotatable,
        Verdict::Different => Rotatability::NonRotatable,
        Verdict::Unknown => Rotatability::ConjecturedNonRotatable,
    };
    SymmetryFlags { chiral, rotatable }
}

/// Flags for many representatives, in input order.
pub fn classify_symmetry(reps: &[(Diagram, InvariantSignature)], stages: &[ReachParams]) -> Vec<SymmetryFlags> {
    reps.par_iter().map(|(d, s)| symmetry_flags(d, s, stages)).collect()
}
