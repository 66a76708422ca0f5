//! Planar realization of DT codes as 4-valent combinatorial maps.
//!
//! Half-edges around each crossing are stored in counterclockwise slot order `0..4`. The
//! odd-labelled pass always enters at slot 0 and leaves at slot 2; the even-labelled pass
//! occupies slots 1 and 3 in one of two orientations. Realization searches those binary
//! choices for a genus-0 rotation system.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::codec::DtCode;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("DT code {0} has no planar realization")]
    NonRealizable(String),
    #[error("traversal of {0} does not close up as a single component")]
    NotAKnot(String),
    #[error("{0} crossings exceed the realization search limit of 63")]
    TooManyCrossings(usize),
    #[error("crossing index {index} out of range for {count} crossings")]
    IndexOutOfRange { index: usize, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strand {
    Odd,
    Even,
}

impl Strand {
    pub fn other(self) -> Strand {
        match self {
            Strand::Odd => Strand::Even,
            Strand::Even => Strand::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum End {
    Tail,
    Head,
}

/// One end of an edge, seen from the crossing it is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeEnd {
    pub edge: usize,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Crossing {
    pub odd_label: usize,
    pub even_label: usize,
    /// Counterclockwise.
    pub slots: [EdgeEnd; 4],
    pub over: Strand,
}

impl Crossing {
    /// Slots carrying the over-strand: `{0, 2}` or `{1, 3}`.
    pub fn over_parity(&self) -> usize {
        match self.over {
            Strand::Odd => 0,
            Strand::Even => 1,
        }
    }
}

/// Edge `k` runs along the knot from label `k + 1` to label `k + 2` (wrapping to 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub tail: (usize, usize),
    pub head: (usize, usize),
}

/// A face boundary as the cyclic sequence of half-edges `4 * crossing + slot` leaving the
/// boundary corners. Each half-edge names one side of its edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Face {
    pub darts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanarDiagram {
    pub crossings: Vec<Crossing>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    /// `corner_face[4c + s]` is the face containing the corner between slots `s` and `s + 1`.
    pub corner_face: Vec<usize>,
}

fn half_edge(c: usize, s: usize) -> usize {
    4 * c + s
}

fn rotate(h: usize) -> usize {
    (h & !3) | ((h + 1) & 3)
}

struct Shadow {
    crossings: Vec<Crossing>,
    edges: Vec<Edge>,
    twin: Vec<usize>,
}

impl Shadow {
    fn build(dt: &DtCode, orientation: &[bool]) -> Shadow {
        let n = dt.crossing_count();
        let labels = 2 * n;
        // crossing of each 1-based label
        let mut at = vec![0usize; labels + 1];
        for (i, &e) in dt.entries().iter().enumerate() {
            at[2 * i + 1] = i;
            at[e.unsigned_abs() as usize] = i;
        }
        let incoming = |label: usize| (label + labels - 2) % labels;
        let outgoing = |label: usize| label - 1;

        let mut edges = vec![Edge { tail: (0, 0), head: (0, 0) }; labels];
        let mut crossings = Vec::with_capacity(n);
        for (i, &e) in dt.entries().iter().enumerate() {
            let odd = 2 * i + 1;
            let even = e.unsigned_abs() as usize;
            let in_e = EdgeEnd { edge: incoming(even), end: End::Head };
            let out_e = EdgeEnd { edge: outgoing(even), end: End::Tail };
            let (s1, s3) = if orientation[i] { (out_e, in_e) } else { (in_e, out_e) };
            let slots = [
                EdgeEnd { edge: incoming(odd), end: End::Head },
                s1,
                EdgeEnd { edge: outgoing(odd), end: End::Tail },
                s3,
            ];
            for (s, ee) in slots.iter().enumerate() {
                match ee.end {
                    End::Tail => edges[ee.edge].tail = (i, s),
                    End::Head => edges[ee.edge].head = (i, s),
                }
            }
            crossings.push(Crossing {
                odd_label: odd,
                even_label: even,
                slots,
                over: if e > 0 { Strand::Odd } else { Strand::Even },
            });
        }
        debug_assert!((1..=labels).all(|l| at[l] < n));

        let mut twin = vec![0usize; 4 * n];
        for e in &edges {
            let t = half_edge(e.tail.0, e.tail.1);
            let h = half_edge(e.head.0, e.head.1);
            twin[t] = h;
            twin[h] = t;
        }
        Shadow { crossings, edges, twin }
    }

    fn count_faces(&self) -> usize {
        let mut seen = vec![false; self.twin.len()];
        let mut faces = 0;
        for start in 0..self.twin.len() {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                h = rotate(self.twin[h]);
            }
        }
        faces
    }

    fn into_diagram(self) -> PlanarDiagram {
        let mut face_of = vec![usize::MAX; self.twin.len()];
        let mut corner_face = vec![usize::MAX; self.twin.len()];
        let mut faces = Vec::new();
        for start in 0..self.twin.len() {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = faces.len();
            let mut darts = Vec::new();
            let mut h = start;
            while face_of[h] == usize::MAX {
                face_of[h] = f;
                darts.push(h);
                // arriving at twin(h), the walk turns through the corner after that slot
                corner_face[self.twin[h]] = f;
                h = rotate(self.twin[h]);
            }
            faces.push(Face { darts });
        }
        PlanarDiagram { crossings: self.crossings, edges: self.edges, faces, corner_face }
    }
}

/// Realizes `dt` on the sphere. Among genus-0 orientation choices the lexicographically
/// least one (crossing 0 most significant, even strand entering at slot 1 first) is kept.
pub fn realize(dt: &DtCode) -> Result<PlanarDiagram, DiagramError> {
    let n = dt.crossing_count();
    if n == 0 {
        return Ok(PlanarDiagram {
            crossings: vec![],
            edges: vec![],
            faces: vec![Face { darts: vec![] }],
            corner_face: vec![],
        });
    }
    if n > 63 {
        return Err(DiagramError::TooManyCrossings(n));
    }
    let mut orientation = vec![false; n];
    for mask in 0u64..(1u64 << n) {
        for (i, o) in orientation.iter_mut().enumerate() {
            *o = (mask >> (n - 1 - i)) & 1 == 1;
        }
        let shadow = Shadow::build(dt, &orientation);
        if shadow.count_faces() == n + 2 {
            let diagram = shadow.into_diagram();
            let back = diagram.traversal_dt()?;
            if back != *dt {
                return Err(DiagramError::NotAKnot(dt.to_string()));
            }
            return Ok(diagram);
        }
    }
    Err(DiagramError::NonRealizable(dt.to_string()))
}

/// Same shadow with the over/under data at crossing `position` (DT entry index) switched.
pub fn shadow_with_flip(diag: &PlanarDiagram, position: usize) -> Result<PlanarDiagram, DiagramError> {
    let count = diag.crossings.len();
    if position >= count {
        return Err(DiagramError::IndexOutOfRange { index: position, count });
    }
    let mut out = diag.clone();
    out.crossings[position].over = out.crossings[position].over.other();
    Ok(out)
}

impl PlanarDiagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        if self.crossings.is_empty() {
            return 2;
        }
        self.crossings.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    fn twin(&self, h: usize) -> usize {
        let ee = self.crossings[h / 4].slots[h % 4];
        let e = self.edges[ee.edge];
        let (c, s) = match ee.end {
            End::Tail => e.head,
            End::Head => e.tail,
        };
        half_edge(c, s)
    }

    /// Faces on the two sides of edge `e`.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        let edge = self.edges[e];
        let t = half_edge(edge.tail.0, edge.tail.1);
        let h = half_edge(edge.head.0, edge.head.1);
        let face_of_dart = |d: usize| self.corner_face[self.twin(d)];
        (face_of_dart(t), face_of_dart(h))
    }

    /// Walks the curve from label 1 and reads the DT code back off the map.
    pub fn traversal_dt(&self) -> Result<DtCode, DiagramError> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(DtCode::empty());
        }
        let fail = || {
            let entries: Vec<i64> = self.crossings.iter().map(|c| c.even_label as i64).collect();
            DiagramError::NotAKnot(format!("{entries:?}"))
        };
        // (crossing, entering slot) for labels 1..=2n
        let mut visits = Vec::with_capacity(2 * n);
        let (mut c, mut s) = (0usize, 0usize);
        for _ in 0..2 * n {
            visits.push((c, s));
            let out = self.crossings[c].slots[(s + 2) % 4];
            if out.end != End::Tail {
                return Err(fail());
            }
            (c, s) = self.edges[out.edge].head;
        }
        if (c, s) != (0, 0) {
            return Err(fail());
        }
        let mut odd_at = vec![None; n];
        let mut even_at = vec![None; n];
        for (k, &(c, s)) in visits.iter().enumerate() {
            let label = k + 1;
            let slot = if label % 2 == 1 { &mut odd_at[c] } else { &mut even_at[c] };
            if slot.is_some() {
                return Err(fail());
            }
            *slot = Some((label, s));
        }
        let mut entries = vec![0i64; n];
        for c in 0..n {
            let ((odd, odd_slot), (even, _)) = match (odd_at[c], even_at[c]) {
                (Some(o), Some(e)) => (o, e),
                _ => return Err(fail()),
            };
            let odd_over = odd_slot % 2 == self.crossings[c].over_parity();
            let idx = (odd - 1) / 2;
            entries[idx] = if odd_over { even as i64 } else { -(even as i64) };
        }
        DtCode::new(entries).map_err(|_| fail())
    }

    /// Shadow-only view: the diagram with all over/under data forgotten.
    pub fn same_shadow(&self, other: &PlanarDiagram) -> bool {
        self.edges == other.edges
            && self.faces == other.faces
            && self.crossings.len() == other.crossings.len()
            && self.crossings.iter().zip(&other.crossings).all(|(a, b)| a.slots == b.slots)
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.crossings.iter().enumerate() {
            let slots: Vec<String> = c
                .slots
                .iter()
                .map(|ee| format!("{}{}", ee.edge, if ee.end == End::Tail { "+" } else { "-" }))
                .collect();
            let _ = writeln!(
                out,
                "crossing {i}: labels {}/{} slots [{}] over {:?}",
                c.odd_label,
                c.even_label,
                slots.join(" "),
                c.over
            );
        }
        for (i, f) in self.faces.iter().enumerate() {
            let _ = writeln!(out, "face {i}: darts {:?}", f.darts);
        }
        out
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Color {
    White,
    Black,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Checkerboard {
    /// Indexed by face.
    pub color: Vec<Color>,
    /// Face indices of the white regions; `white_regions[0]` is the unbounded region `R_0`.
    pub white_regions: Vec<usize>,
}

impl Checkerboard {
    pub fn region_of_face(&self, face: usize) -> Option<usize> {
        self.white_regions.iter().position(|&f| f == face)
    }
}

/// The face treated as unbounded: least by its sorted list of incident edge indices.
pub fn unbounded_face(diag: &PlanarDiagram) -> usize {
    let key = |f: &Face| {
        let mut es: Vec<usize> = f.darts.iter().map(|&d| diag.crossings[d / 4].slots[d % 4].edge).collect();
        es.sort_unstable();
        es
    };
    (0..diag.faces.len()).min_by_key(|&i| key(&diag.faces[i])).unwrap_or(0)
}

/// Proper two-coloring of the faces with the unbounded face white.
pub fn checkerboard(diag: &PlanarDiagram) -> Checkerboard {
    let nf = diag.faces.len();
    let mut adj = vec![Vec::new(); nf];
    for e in 0..diag.edges.len() {
        let (a, b) = diag.edge_faces(e);
        adj[a].push(b);
        adj[b].push(a);
    }
    let root = unbounded_face(diag);
    let mut color = vec![None; nf];
    let mut queue = VecDeque::from([root]);
    color[root] = Some(Color::White);
    while let Some(f) = queue.pop_front() {
        let next = match color[f] {
            Some(Color::White) => Color::Black,
            _ => Color::White,
        };
        for &g in &adj[f] {
            if color[g].is_none() {
                color[g] = Some(next);
                queue.push_back(g);
            }
        }
    }
    let color: Vec<Color> = color.into_iter().map(|c| c.unwrap_or(Color::White)).collect();
    let mut white_regions = vec![root];
    white_regions.extend((0..nf).filter(|&f| f != root && color[f] == Color::White));
    Checkerboard { color, white_regions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_dt;

    fn dt(s: &str) -> DtCode {
        parse_dt(s).unwrap()
    }

    #[test]
    fn trefoil_has_five_faces() {
        let d = realize(&dt("[4, 6, 2]")).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edges.len(), 6);
        assert_eq!(d.faces.len(), 5);
        assert_eq!(d.euler_characteristic(), 2);
        assert_eq!(d.traversal_dt().unwrap(), dt("[4, 6, 2]"));
    }

    #[test]
    fn knot_11n162_has_thirteen_faces() {
        let code = dt("[6, -10, 12, 22, 16, -18, 8, 20, -4, 2, 14]");
        let d = realize(&code).unwrap();
        assert_eq!(d.faces.len(), 13);
        assert_eq!(d.euler_characteristic(), 2);
        assert_eq!(d.traversal_dt().unwrap(), code);
    }

    #[test]
    fn empty_code_is_degenerate_unknot() {
        let d = realize(&DtCode::empty()).unwrap();
        assert_eq!(d.faces.len(), 1);
        let cb = checkerboard(&d);
        assert_eq!(cb.white_regions, vec![0]);
    }

    #[test]
    fn single_crossing_code_is_a_kinked_unknot() {
        // the one-crossing figure-eight curve: 1 - 2 + 3 = 2
        let d = realize(&dt("[2]")).unwrap();
        assert_eq!(d.faces.len(), 3);
        assert_eq!(d.traversal_dt().unwrap(), dt("[2]"));
    }

    #[test]
    fn nonplanar_code_rejected() {
        // smallest non-realizable codes appear at five crossings
        assert!(matches!(realize(&dt("[4, 6, 8, 10, 2]")), Err(DiagramError::NonRealizable(_))));
        assert!(realize(&dt("[6, 8, 10, 2, 4]")).is_ok());
    }

    /// Gauss: in a planar curve every crossing is interlaced with an even number of others.
    fn gauss_even_interlacement(code: &DtCode) -> bool {
        let pairs: Vec<(i64, i64)> =
            code.entries().iter().enumerate().map(|(i, &e)| (2 * i as i64 + 1, e.abs())).collect();
        let inside = |x: i64, (a, b): (i64, i64)| a.min(b) < x && x < a.max(b);
        pairs.iter().all(|&p| {
            let crossed = pairs.iter().filter(|&&q| q != p && (inside(q.0, p) != inside(q.1, p))).count();
            crossed % 2 == 0
        })
    }

    fn permutations(n: usize) -> Vec<Vec<i64>> {
        fn go(v: &mut Vec<i64>, k: usize, out: &mut Vec<Vec<i64>>) {
            if k == v.len() {
                out.push(v.clone());
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                go(v, k + 1, out);
                v.swap(k, i);
            }
        }
        let mut out = vec![];
        go(&mut (1..=n as i64).map(|i| 2 * i).collect(), 0, &mut out);
        out
    }

    #[test]
    fn realizable_codes_satisfy_gauss_condition() {
        for n in 1..=6 {
            for p in permutations(n) {
                let code = DtCode::new(p).unwrap();
                if let Ok(d) = realize(&code) {
                    assert!(gauss_even_interlacement(&code), "{code}");
                    assert_eq!(d.euler_characteristic(), 2);
                    assert_eq!(d.traversal_dt().unwrap(), code);
                } else {
                    assert!(n >= 5, "{code}");
                }
            }
        }
    }

    #[test]
    fn flip_is_involution_and_keeps_shadow() {
        let d = realize(&dt("[4, 6, 2]")).unwrap();
        let f = shadow_with_flip(&d, 0).unwrap();
        assert_ne!(f, d);
        assert!(f.same_shadow(&d));
        assert_eq!(f.traversal_dt().unwrap(), dt("[-4, 6, 2]"));
        assert_eq!(shadow_with_flip(&f, 0).unwrap(), d);
        assert_eq!(
            shadow_with_flip(&d, 3),
            Err(DiagramError::IndexOutOfRange { index: 3, count: 3 })
        );
    }

    #[test]
    fn flip_matches_realizing_flipped_code() {
        let code = dt("[6, -10, 12, 22, 16, -18, 8, 20, -4, 2, 14]");
        let d = realize(&code).unwrap();
        let direct = realize(&code.with_flip(0)).unwrap();
        let flipped = shadow_with_flip(&d, 0).unwrap();
        assert_eq!(flipped, direct);
    }

    #[test]
    fn trefoil_checkerboard() {
        let d = realize(&dt("[4, 6, 2]")).unwrap();
        let cb = checkerboard(&d);
        assert_eq!(cb.color[cb.white_regions[0]], Color::White);
        assert_eq!(cb.white_regions[0], unbounded_face(&d));
        // alternating trefoil: one coloring has 2 white faces, the other 3
        let whites = cb.white_regions.len();
        assert!(whites == 2 || whites == 3);
        for e in 0..d.edges.len() {
            let (a, b) = d.edge_faces(e);
            assert_ne!(cb.color[a], cb.color[b]);
        }
        let flipped = shadow_with_flip(&d, 1).unwrap();
        assert_eq!(checkerboard(&flipped), cb);
    }
}
