//! Spherical knotoid diagrams as rotation systems.
//!
//! Every vertex owns four dart slots; dart `4v + s` is slot `s` of vertex
//! `v`. Endpoints use slot 0 only. Slots are numbered in the rotation order
//! used by both the PD and the EM codes. Faces are traced by crossing an
//! edge and then stepping back one slot, which keeps the face on the left.

use std::fmt;

use crate::error::{DiagramError, SyntaxError};

pub type Dart = u32;
pub const NO_DART: Dart = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Tail,
    Head,
}

/// Which opposite slot pair carries the over-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OverPair {
    /// Slots 0 and 2 are over.
    Even,
    /// Slots 1 and 3 are over (slot 0 is an under slot).
    Odd,
}

impl OverPair {
    pub fn toggled(self) -> OverPair {
        match self {
            OverPair::Even => OverPair::Odd,
            OverPair::Odd => OverPair::Even,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Endpoint(Role),
    Crossing(OverPair),
}

impl Vertex {
    pub fn degree(self) -> usize {
        match self {
            Vertex::Endpoint(_) => 1,
            Vertex::Crossing(_) => 4,
        }
    }
}

#[inline]
pub fn dart(v: usize, s: usize) -> Dart {
    (4 * v + s) as Dart
}

#[inline]
pub fn vertex_of(d: Dart) -> usize {
    (d >> 2) as usize
}

#[inline]
pub fn slot_of(d: Dart) -> usize {
    (d & 3) as usize
}

/// One pass of the strand through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passage {
    pub vertex: usize,
    pub enter: usize,
    pub exit: usize,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    verts: Vec<Vertex>,
    mate: Vec<Dart>,
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({})", print_em(self))
    }
}

impl Diagram {
    /// Build and validate. `mate` has four entries per vertex; unused
    /// endpoint slots hold [`NO_DART`].
    pub fn new(verts: Vec<Vertex>, mate: Vec<Dart>) -> Result<Diagram, DiagramError> {
        let d = Diagram { verts, mate };
        d.validate()?;
        Ok(d)
    }

    /// Build without validation; callers guarantee a valid rotation system.
    pub(crate) fn from_raw(verts: Vec<Vertex>, mate: Vec<Dart>) -> Diagram {
        let d = Diagram { verts, mate };
        debug_assert_eq!(d.validate(), Ok(()), "{:?}", d.mate);
        d
    }

    /// The 0-crossing diagram: a single edge from tail to head.
    pub fn trivial() -> Diagram {
        Diagram::from_raw(
            vec![Vertex::Endpoint(Role::Tail), Vertex::Endpoint(Role::Head)],
            vec![4, NO_DART, NO_DART, NO_DART, 0, NO_DART, NO_DART, NO_DART],
        )
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.verts
    }

    pub fn vertex(&self, v: usize) -> Vertex {
        self.verts[v]
    }

    pub fn mates(&self) -> &[Dart] {
        &self.mate
    }

    pub fn num_vertices(&self) -> usize {
        self.verts.len()
    }

    pub fn num_crossings(&self) -> usize {
        self.verts.iter().filter(|v| matches!(v, Vertex::Crossing(_))).count()
    }

    pub fn num_edges(&self) -> usize {
        (4 * self.num_crossings() + 2) / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.verts[v].degree()
    }

    #[inline]
    pub fn mate(&self, d: Dart) -> Dart {
        self.mate[d as usize]
    }

    /// Darts in use, in vertex then slot order.
    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.verts
            .iter()
            .enumerate()
            .flat_map(|(v, k)| (0..k.degree()).map(move |s| dart(v, s)))
    }

    #[inline]
    pub fn rot_next(&self, d: Dart) -> Dart {
        let v = vertex_of(d);
        let n = self.degree(v);
        dart(v, (slot_of(d) + 1) % n)
    }

    #[inline]
    pub fn rot_prev(&self, d: Dart) -> Dart {
        let v = vertex_of(d);
        let n = self.degree(v);
        dart(v, (slot_of(d) + n - 1) % n)
    }

    /// Face successor: cross the edge, then step back one slot.
    #[inline]
    pub fn face_next(&self, d: Dart) -> Dart {
        self.rot_prev(self.mate(d))
    }

    pub fn is_crossing(&self, v: usize) -> bool {
        matches!(self.verts[v], Vertex::Crossing(_))
    }

    pub fn is_endpoint_dart(&self, d: Dart) -> bool {
        !self.is_crossing(vertex_of(d))
    }

    /// True when `d` sits on the under-strand of its crossing.
    #[inline]
    pub fn is_under(&self, d: Dart) -> bool {
        match self.verts[vertex_of(d)] {
            Vertex::Crossing(OverPair::Odd) => slot_of(d) % 2 == 0,
            Vertex::Crossing(OverPair::Even) => slot_of(d) % 2 == 1,
            Vertex::Endpoint(_) => false,
        }
    }

    pub fn endpoint(&self, role: Role) -> usize {
        self.verts
            .iter()
            .position(|&k| k == Vertex::Endpoint(role))
            .expect("diagram has both endpoints")
    }

    pub fn tail_dart(&self) -> Dart {
        dart(self.endpoint(Role::Tail), 0)
    }

    pub fn head_dart(&self) -> Dart {
        dart(self.endpoint(Role::Head), 0)
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        if self.mate.len() != 4 * self.verts.len() {
            return Err(DiagramError::BadDegrees("dart table size".into()));
        }
        let tails = self.verts.iter().filter(|&&k| k == Vertex::Endpoint(Role::Tail)).count();
        let heads = self.verts.iter().filter(|&&k| k == Vertex::Endpoint(Role::Head)).count();
        if tails != 1 || heads != 1 {
            return Err(DiagramError::BadDegrees(format!("{tails} tails and {heads} heads")));
        }
        for (v, k) in self.verts.iter().enumerate() {
            for s in 0..4 {
                let d = dart(v, s);
                let m = self.mate[d as usize];
                if s >= k.degree() {
                    if m != NO_DART {
                        return Err(DiagramError::BadDegrees(format!("endpoint {v} has extra slots")));
                    }
                    continue;
                }
                let ok = (m as usize) < self.mate.len()
                    && slot_of(m) < self.degree(vertex_of(m))
                    && m != d
                    && self.mate[m as usize] == d;
                if !ok {
                    return Err(DiagramError::InconsistentCode(format!("dart {v}:{s} is not matched")));
                }
            }
        }
        // Connectivity.
        let n = self.verts.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for s in 0..self.degree(v) {
                let w = vertex_of(self.mate(dart(v, s)));
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|&b| !b) {
            return Err(DiagramError::DisconnectedGraph);
        }
        let e = self.num_edges() as i64;
        let f = self.faces().len() as i64;
        let chi = n as i64 - e + f;
        if chi != 2 {
            return Err(DiagramError::NotSphere(chi));
        }
        if self.strand().len() != self.num_edges() {
            return Err(DiagramError::MultiComponent);
        }
        Ok(())
    }

    /// Face cycles. Each face is listed from its smallest dart.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; self.mate.len()];
        let mut out = Vec::new();
        for d in self.darts() {
            if seen[d as usize] {
                continue;
            }
            let mut face = Vec::new();
            let mut x = d;
            while !seen[x as usize] {
                seen[x as usize] = true;
                face.push(x);
                x = self.face_next(x);
            }
            out.push(face);
        }
        out
    }

    /// Face index of every dart, plus the face count.
    pub fn face_index(&self) -> (Vec<usize>, usize) {
        let mut idx = vec![usize::MAX; self.mate.len()];
        let mut count = 0;
        for d in self.darts() {
            if idx[d as usize] != usize::MAX {
                continue;
            }
            let mut x = d;
            while idx[x as usize] == usize::MAX {
                idx[x as usize] = count;
                x = self.face_next(x);
            }
            count += 1;
        }
        (idx, count)
    }

    /// Darts leaving each vertex along the strand, starting at the tail.
    /// Stops early (short result) on a closed loop or a malformed map.
    pub fn strand(&self) -> Vec<Dart> {
        let Some(t) = self.verts.iter().position(|&k| k == Vertex::Endpoint(Role::Tail)) else {
            return Vec::new();
        };
        let mut out = vec![dart(t, 0)];
        let mut d = dart(t, 0);
        let limit = self.num_edges();
        loop {
            let m = self.mate[d as usize];
            if m == NO_DART || out.len() > limit {
                return out;
            }
            let v = vertex_of(m);
            if !self.is_crossing(v) {
                return out;
            }
            d = dart(v, (slot_of(m) + 2) % 4);
            out.push(d);
        }
    }

    /// Crossing passages in strand order.
    pub fn passages(&self) -> Vec<Passage> {
        self.strand()[1..]
            .iter()
            .map(|&d| Passage { vertex: vertex_of(d), enter: (slot_of(d) + 2) % 4, exit: slot_of(d) })
            .collect()
    }

    /// Sign of every crossing (0 for endpoints). A crossing is positive
    /// when the under-strand's exit slot follows the over-strand's exit
    /// slot in rotation order.
    pub fn signs(&self) -> Vec<i32> {
        let mut over_out = vec![usize::MAX; self.verts.len()];
        let mut under_out = vec![usize::MAX; self.verts.len()];
        for p in self.passages() {
            if self.is_under(dart(p.vertex, p.exit)) {
                under_out[p.vertex] = p.exit;
            } else {
                over_out[p.vertex] = p.exit;
            }
        }
        (0..self.verts.len())
            .map(|v| {
                if !self.is_crossing(v) {
                    0
                } else if (under_out[v] + 4 - over_out[v]) % 4 == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }

    pub fn writhe(&self) -> i32 {
        self.signs().iter().sum()
    }

    pub fn is_knot_like(&self) -> bool {
        let (idx, _) = self.face_index();
        idx[self.tail_dart() as usize] == idx[self.head_dart() as usize]
    }

    /// Canonical relabeling: breadth-first from the tail, each crossing's
    /// slot 0 being the first under slot at or after the dart it was
    /// entered through. Returns the relabeled diagram.
    pub fn canonical(&self) -> Diagram {
        let (order, rot0) = self.bfs_order();
        let mut label = vec![0usize; self.verts.len()];
        for (i, &v) in order.iter().enumerate() {
            label[v] = i;
        }
        let mut verts = Vec::with_capacity(order.len());
        let mut mate = vec![NO_DART; 4 * order.len()];
        for (i, &v) in order.iter().enumerate() {
            let deg = self.degree(v);
            verts.push(match self.verts[v] {
                Vertex::Crossing(_) => Vertex::Crossing(OverPair::Odd),
                e => e,
            });
            for k in 0..deg {
                let m = self.mate(dart(v, (rot0[v] + k) % deg));
                let w = vertex_of(m);
                let t = (slot_of(m) + self.degree(w) - rot0[w]) % self.degree(w);
                mate[4 * i + k] = dart(label[w], t);
            }
        }
        Diagram { verts, mate }
    }

    fn bfs_order(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.verts.len();
        let mut rot0 = vec![usize::MAX; n];
        let t = self.endpoint(Role::Tail);
        rot0[t] = 0;
        let mut order = vec![t];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            let deg = self.degree(v);
            for k in 0..deg {
                let m = self.mate(dart(v, (rot0[v] + k) % deg));
                let w = vertex_of(m);
                if rot0[w] != usize::MAX {
                    continue;
                }
                rot0[w] = if !self.is_crossing(w) {
                    0
                } else if self.is_under(m) {
                    slot_of(m)
                } else {
                    (slot_of(m) + 1) % 4
                };
                order.push(w);
            }
        }
        (order, rot0)
    }

    /// Canonical code of this diagram.
    pub fn code(&self) -> Code {
        let (order, rot0) = self.bfs_order();
        let mut label = vec![0u8; self.verts.len()];
        for (i, &v) in order.iter().enumerate() {
            label[v] = i as u8;
        }
        let mut bytes = Vec::with_capacity(4 * order.len() + order.len());
        for &v in &order {
            let deg = self.degree(v);
            for k in 0..deg {
                let m = self.mate(dart(v, (rot0[v] + k) % deg));
                let w = vertex_of(m);
                let dw = self.degree(w);
                let t = (slot_of(m) + dw - rot0[w]) % dw;
                bytes.push(1 + 4 * label[w] + t as u8);
            }
            bytes.push(0);
        }
        Code(bytes.into_boxed_slice())
    }

    /// Relabel vertices by `perm` (old index -> new index) and shift each
    /// crossing's slot numbering by `shift[v]`. The result is isomorphic.
    pub fn relabel(&self, perm: &[usize], shift: &[usize]) -> Diagram {
        let n = self.verts.len();
        let mut verts = vec![Vertex::Endpoint(Role::Tail); n];
        let mut mate = vec![NO_DART; 4 * n];
        let sh = |v: usize| if self.is_crossing(v) { shift[v] % 4 } else { 0 };
        for v in 0..n {
            verts[perm[v]] = match self.verts[v] {
                Vertex::Crossing(p) if sh(v) % 2 == 1 => Vertex::Crossing(p.toggled()),
                k => k,
            };
            for s in 0..self.degree(v) {
                let m = self.mate(dart(v, s));
                let (w, t) = (vertex_of(m), slot_of(m));
                let ns = (s + sh(v)) % self.degree(v);
                let nt = (t + sh(w)) % self.degree(w);
                mate[4 * perm[v] + ns] = dart(perm[w], nt);
            }
        }
        Diagram::from_raw(verts, mate)
    }
}

/// Compact canonical code. Its byte order agrees with the lexicographic
/// order of the EM strings it prints as.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code(Box<[u8]>);

pub type CanonicalCode = Code;

impl Code {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Rebuild the diagram this code describes.
    pub fn to_diagram(&self) -> Diagram {
        let mut verts = Vec::new();
        let mut mate = Vec::new();
        let mut cur: Vec<Dart> = Vec::new();
        for &b in self.0.iter() {
            if b == 0 {
                let kind = if cur.len() == 1 {
                    if verts.is_empty() {
                        Vertex::Endpoint(Role::Tail)
                    } else {
                        Vertex::Endpoint(Role::Head)
                    }
                } else {
                    Vertex::Crossing(OverPair::Odd)
                };
                verts.push(kind);
                cur.resize(4, NO_DART);
                mate.append(&mut cur);
            } else {
                cur.push((b - 1) as Dart);
            }
        }
        Diagram::from_raw(verts, mate)
    }

    pub fn num_crossings(&self) -> usize {
        let mut n = 0;
        let mut run = 0;
        for &b in self.0.iter() {
            if b == 0 {
                if run == 4 {
                    n += 1;
                }
                run = 0;
            } else {
                run += 1;
            }
        }
        n
    }

    pub fn to_em(&self) -> String {
        let mut s = String::new();
        for &b in self.0.iter() {
            if b == 0 {
                s.push(',');
            } else {
                let v = ((b - 1) / 4) as usize;
                s.push(vertex_letter(v));
                s.push(char::from(b'0' + (b - 1) % 4));
            }
        }
        s.pop();
        s
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_em())
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code({})", self.to_em())
    }
}

fn vertex_letter(v: usize) -> char {
    if v < 26 {
        char::from(b'A' + v as u8)
    } else {
        char::from(b'a' + (v - 26) as u8)
    }
}

fn letter_vertex(c: u8) -> Option<usize> {
    match c {
        b'A'..=b'Z' => Some((c - b'A') as usize),
        b'a'..=b'z' => Some((c - b'a') as usize + 26),
        _ => None,
    }
}

/// Canonical code of `d`.
pub fn canonical_code(d: &Diagram) -> Code {
    d.code()
}

fn is_noise(c: u8) -> bool {
    c.is_ascii_whitespace() || matches!(c, b'"' | b'\'' | b'(' | b')')
}

/// Parse an EM code such as `B0,A0C0C3D0,B1D3D1B2,B3C2E0C1,D2` or the
/// appendix form `(B0, A0C0C3D0, ...)`.
pub fn parse_em(text: &str) -> Result<Diagram, DiagramError> {
    let b = text.as_bytes();
    let mut entries: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new()];
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if is_noise(c) || c == b'[' || c == b']' {
            i += 1;
        } else if c == b',' {
            entries.push(Vec::new());
            i += 1;
        } else if let Some(v) = letter_vertex(c) {
            let s = match b.get(i + 1) {
                Some(&x @ b'0'..=b'3') => (x - b'0') as usize,
                _ => return Err(SyntaxError { pos: i + 1, msg: "expected slot digit 0-3".into() }.into()),
            };
            entries.last_mut().unwrap().push((v, s, i));
            i += 2;
        } else {
            return Err(SyntaxError { pos: i, msg: format!("unexpected character {:?}", c as char) }.into());
        }
    }
    if entries.iter().any(|e| e.is_empty()) {
        return Err(SyntaxError { pos: b.len(), msg: "empty vertex entry".into() }.into());
    }
    let n = entries.len();
    let mut verts = Vec::with_capacity(n);
    let mut mate = vec![NO_DART; 4 * n];
    let mut endpoints = 0;
    for (v, e) in entries.iter().enumerate() {
        verts.push(match e.len() {
            1 => {
                endpoints += 1;
                Vertex::Endpoint(if endpoints == 1 { Role::Tail } else { Role::Head })
            }
            4 => Vertex::Crossing(OverPair::Odd),
            k => return Err(DiagramError::BadDegrees(format!("vertex {} has {k} slots", vertex_letter(v)))),
        });
        for (s, &(w, t, pos)) in e.iter().enumerate() {
            if w >= n {
                return Err(SyntaxError { pos, msg: "reference to a missing vertex".into() }.into());
            }
            mate[4 * v + s] = dart(w, t);
        }
    }
    if endpoints != 2 {
        return Err(DiagramError::BadDegrees(format!("{endpoints} endpoints")));
    }
    Diagram::new(verts, mate)
}

/// The same diagram with the tail listed before the head, which is how
/// both codes tell the endpoints apart.
fn tail_first(d: &Diagram) -> std::borrow::Cow<'_, Diagram> {
    let (t, h) = (d.endpoint(Role::Tail), d.endpoint(Role::Head));
    if t < h {
        return std::borrow::Cow::Borrowed(d);
    }
    let mut perm: Vec<usize> = (0..d.num_vertices()).collect();
    perm.swap(t, h);
    std::borrow::Cow::Owned(d.relabel(&perm, &vec![0; perm.len()]))
}

/// EM code of `d` in its own vertex order, except that the tail always
/// comes before the head.
pub fn print_em(d: &Diagram) -> String {
    let d = &*tail_first(d);
    let mut out = Vec::new();
    for v in 0..d.num_vertices() {
        let start = start_slot(d, v);
        let deg = d.degree(v);
        let mut s = String::new();
        for k in 0..deg {
            let m = d.mate(dart(v, (start + k) % deg));
            let w = vertex_of(m);
            let t = (slot_of(m) + d.degree(w) - start_slot(d, w)) % d.degree(w);
            s.push(vertex_letter(w));
            s.push(char::from(b'0' + t as u8));
        }
        out.push(s);
    }
    out.join(",")
}

/// First listed slot: an under slot for crossings.
fn start_slot(d: &Diagram, v: usize) -> usize {
    match d.vertex(v) {
        Vertex::Crossing(OverPair::Even) => 1,
        _ => 0,
    }
}

/// Parse a PD code such as `[0],[0,1,2,3],[1,4,5,2],[3,5,6,4],[6]`.
/// Each crossing lists its arcs in rotation order starting with an
/// under arc; the first endpoint is the tail.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    let b = text.as_bytes();
    let mut groups: Vec<Vec<(u64, usize)>> = Vec::new();
    let mut open = false;
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        match c {
            b'[' => {
                if open {
                    // Tolerate an outer list wrapper.
                    if groups.is_empty() || !groups.last().unwrap().is_empty() {
                        return Err(SyntaxError { pos: i, msg: "nested '['".into() }.into());
                    }
                    groups.pop();
                }
                groups.push(Vec::new());
                open = true;
                i += 1;
            }
            b']' => {
                open = false;
                i += 1;
            }
            b',' => i += 1,
            b'0'..=b'9' => {
                if !open {
                    return Err(SyntaxError { pos: i, msg: "arc label outside brackets".into() }.into());
                }
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let label = text[start..i]
                    .parse()
                    .map_err(|_| SyntaxError { pos: start, msg: "arc label too large".into() })?;
                groups.last_mut().unwrap().push((label, start));
            }
            _ if is_noise(c) => i += 1,
            _ => return Err(SyntaxError { pos: i, msg: format!("unexpected character {:?}", c as char) }.into()),
        }
    }
    if groups.is_empty() {
        return Err(SyntaxError { pos: 0, msg: "no vertices".into() }.into());
    }
    let n = groups.len();
    let mut verts = Vec::with_capacity(n);
    let mut ends: std::collections::HashMap<u64, Vec<Dart>> = Default::default();
    let mut endpoints = 0;
    for (v, g) in groups.iter().enumerate() {
        verts.push(match g.len() {
            1 => {
                endpoints += 1;
                Vertex::Endpoint(if endpoints == 1 { Role::Tail } else { Role::Head })
            }
            4 => Vertex::Crossing(OverPair::Odd),
            k => return Err(DiagramError::BadDegrees(format!("PD group {v} has {k} arcs"))),
        });
        for (s, &(label, _)) in g.iter().enumerate() {
            ends.entry(label).or_default().push(dart(v, s));
        }
    }
    if endpoints != 2 {
        return Err(DiagramError::BadDegrees(format!("{endpoints} endpoints")));
    }
    let mut mate = vec![NO_DART; 4 * n];
    for (label, ds) in &ends {
        if ds.len() != 2 {
            return Err(DiagramError::InconsistentCode(format!("arc {label} appears {} times", ds.len())));
        }
        mate[ds[0] as usize] = ds[1];
        mate[ds[1] as usize] = ds[0];
    }
    Diagram::new(verts, mate)
}

/// PD code of `d` in its own vertex order. Arcs are numbered by first
/// appearance, reading vertices in order and each crossing from an under
/// slot; on a canonical diagram this is the appendix normal form. The tail
/// comes before the head, as for [`print_em`].
pub fn print_pd(d: &Diagram) -> String {
    let d = &*tail_first(d);
    let mut label = vec![u32::MAX; 4 * d.num_vertices()];
    let mut next = 0u32;
    let mut groups = Vec::new();
    for v in 0..d.num_vertices() {
        let start = start_slot(d, v);
        let deg = d.degree(v);
        let mut g = Vec::new();
        for k in 0..deg {
            let x = dart(v, (start + k) % deg);
            if label[x as usize] == u32::MAX {
                label[x as usize] = next;
                label[d.mate(x) as usize] = next;
                next += 1;
            }
            g.push(label[x as usize].to_string());
        }
        groups.push(format!("[{}]", g.join(",")));
    }
    groups.join(",")
}

/// Parse either format: EM codes contain vertex letters, PD codes do not.
pub fn parse_code(text: &str) -> Result<Diagram, DiagramError> {
    if text.bytes().any(|c| c.is_ascii_alphabetic()) {
        parse_em(text)
    } else {
        parse_pd(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K32_PD: &str = "[0],[0,1,2,3],[1,4,5,2],[3,5,6,4],[6]";
    const K32_EM: &str = "B0,A0C0C3D0,B1D3D1B2,B3C2E0C1,D2";

    #[test]
    fn trivial_diagram() {
        let d = Diagram::trivial();
        assert_eq!(d.validate(), Ok(()));
        assert_eq!(d.faces().len(), 1);
        assert_eq!(d.writhe(), 0);
        assert!(d.is_knot_like());
        assert_eq!(d.code().to_em(), "B0,A0");
        assert_eq!(parse_em("(B0, A0)").unwrap().code(), d.code());
    }

    #[test]
    fn k32_codes() {
        let d = parse_pd(K32_PD).unwrap();
        assert_eq!(d.faces().len(), 4);
        assert_eq!(print_pd(&d), K32_PD);
        assert_eq!(print_em(&d), K32_EM);
        assert_eq!(print_em(&parse_em(K32_EM).unwrap()), K32_EM);
        assert_eq!(d.code().to_em(), K32_EM);
        assert_eq!(d.canonical(), d);
    }

    #[test]
    fn closed_loop_is_a_linkoid() {
        // A crossing whose two passes close up on each other, with the
        // tail and head joined directly.
        let verts = vec![Vertex::Endpoint(Role::Tail), Vertex::Endpoint(Role::Head), Vertex::Crossing(OverPair::Odd)];
        let mut mate = vec![NO_DART; 12];
        let mut link = |a: Dart, b: Dart| {
            mate[a as usize] = b;
            mate[b as usize] = a;
        };
        link(0, 4);
        link(dart(2, 0), dart(2, 1));
        link(dart(2, 2), dart(2, 3));
        let e = Diagram::new(verts, mate).unwrap_err();
        assert!(matches!(e, DiagramError::DisconnectedGraph | DiagramError::MultiComponent));
    }

    #[test]
    fn self_mated_crossing_is_multicomponent() {
        // Tail and head on opposite slots, the other two slots mated
        // together: the strand passes straight through, the loop is left.
        let verts = vec![Vertex::Endpoint(Role::Tail), Vertex::Endpoint(Role::Head), Vertex::Crossing(OverPair::Odd)];
        let mut mate = vec![NO_DART; 12];
        let mut link = |a: Dart, b: Dart| {
            mate[a as usize] = b;
            mate[b as usize] = a;
        };
        link(0, dart(2, 0));
        link(4, dart(2, 2));
        link(dart(2, 1), dart(2, 3));
        assert_eq!(Diagram::new(verts, mate).unwrap_err(), DiagramError::MultiComponent);
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_em("B0,A9"), Err(DiagramError::Syntax(_))));
        assert!(matches!(parse_pd("[0],[0,1,2,3],[1]"), Err(DiagramError::InconsistentCode(_))));
        assert!(matches!(parse_pd("[0],[0,x]"), Err(DiagramError::Syntax(SyntaxError { pos: 7, .. }))));
        assert!(matches!(parse_em("B0,A1"), Err(DiagramError::InconsistentCode(_))));
    }

    #[test]
    fn quoted_and_wrapped_inputs() {
        let d = parse_pd(K32_PD).unwrap();
        assert_eq!(parse_pd(&format!("\"[{K32_PD}]\"")).unwrap(), d);
        assert_eq!(parse_code(K32_PD).unwrap(), d);
        assert_eq!(parse_code(K32_EM).unwrap(), d);
        assert_eq!(parse_em("[B0],[A0C0C3D0],[B1D3D1B2],[B3C2E0C1],[D2]").unwrap(), d);
    }
}
