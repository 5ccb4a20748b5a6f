//! Combinatorial model of the tube preimage `K_V`: 0-handles, 1-handles and
//! monkey-handles with rational boundary-arc lengths, the strip structure of
//! the I-bundle part, the three surgeries, good-complex certification, and
//! spine / pull-back boundary graph extraction.
//!
//! A handle occupies one triangle and meets 1 (0-handle), 2 (1-handle) or 3
//! (monkey-handle) of its sides; it carries one boundary arc per attached
//! side. Gluings identify `(handle, side)` germs in pairs, each germ used at
//! most once, and carry a parity flag pairing the two arc ends at the germ
//! either straight or swapped. Components of the 0/1-handle union are
//! therefore paths or cycles; the cycles are the strips, Möbius exactly when
//! the number of twisted gluings along the cycle is odd. Whether a strip is
//! essential in the ambient complex is not decidable from this data and is
//! supplied as an annotation.
//!
//! Arc lengths are exact rationals, so every length inequality in the
//! surgery chain is checked with tolerance zero.
//!
//! File format (line based):
//! `T <triangle_count>` (sets `ℓ(P) = 3·triangle_count`; override with
//! `L <ellP>`), `H <id> <kind> <tri> <sides...>`, `A <handle> <arc-id> <len>`,
//! `G <h1,s1> <h2,s2> [twisted]`, `S <strip-id> <essential|inessential>`.

use crate::metric_graph::{Edge, MetricGraph};
use num_rational::Rational64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

pub mod scenario;

pub type HandleId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HandleKind {
    H0,
    H1,
    Monkey,
}

impl HandleKind {
    pub fn side_count(self) -> usize {
        match self {
            Self::H0 => 1,
            Self::H1 => 2,
            Self::Monkey => 3,
        }
    }
}

impl fmt::Display for HandleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::H0 => write!(f, "H0"),
            Self::H1 => write!(f, "H1"),
            Self::Monkey => write!(f, "Monkey"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Handle {
    pub id: HandleId,
    pub kind: HandleKind,
    pub triangle: usize,
    /// Side indices within the triangle, one per attachment.
    pub sides: Vec<u8>,
    /// Boundary arc lengths, one per attached side (for a monkey-handle,
    /// arc `i` runs from side `i` to side `i+1 mod 3`; for a 1-handle the
    /// two arcs run parallel between the two sides; a 0-handle's single arc
    /// has both ends on its side).
    pub arcs: Vec<Rational64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub a: (HandleId, u8),
    pub b: (HandleId, u8),
    /// Swap the two arc ends at the germ instead of pairing them in order.
    pub twisted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Essentiality {
    Essential,
    Inessential,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleComplex {
    pub triangle_count: usize,
    /// Ambient presentation length; `3·triangle_count` for a triangular
    /// source presentation.
    pub ell_p: u64,
    pub handles: Vec<Handle>,
    pub gluings: Vec<Gluing>,
    /// Strip id (minimal handle id on the cycle) → annotation.
    pub strip_annotations: BTreeMap<HandleId, Essentiality>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ComplexError {
    DuplicateHandleId(HandleId),
    UnknownHandle(HandleId),
    ArcCountMismatch { handle: HandleId, expected: usize, got: usize },
    SideCountMismatch { handle: HandleId, expected: usize, got: usize },
    SideOutOfRange { handle: HandleId, side: u8 },
    DuplicateSide { handle: HandleId, side: u8 },
    NonpositiveArc { handle: HandleId, arc: usize },
    /// (handle, side) germ appears in more than one gluing.
    SideUsedTwice { handle: HandleId, side: u8 },
    UnknownSide { handle: HandleId, side: u8 },
    TwoMonkeysInTriangle { triangle: usize },
    MonkeyCountExceedsTriangles { monkeys: usize, triangles: usize },
    UnknownStrip(HandleId),
    WrongMonodromy { strip: HandleId, expected: &'static str },
    StripNotInessential(HandleId),
    HandleNotInStrip { handle: HandleId, strip: HandleId },
    NotA0Handle(HandleId),
    /// No embedded boundary loop through the 0-handle's arc.
    NoQualifyingLoop(HandleId),
    MissingAnnotation(HandleId),
    Parse { line: usize, message: String },
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateHandleId(h) => write!(f, "duplicate handle id {h}"),
            Self::UnknownHandle(h) => write!(f, "unknown handle {h}"),
            Self::ArcCountMismatch { handle, expected, got } => {
                write!(f, "handle {handle}: expected {expected} arcs, got {got}")
            }
            Self::SideCountMismatch { handle, expected, got } => {
                write!(f, "handle {handle}: expected {expected} sides, got {got}")
            }
            Self::SideOutOfRange { handle, side } => {
                write!(f, "handle {handle}: side {side} out of range")
            }
            Self::DuplicateSide { handle, side } => {
                write!(f, "handle {handle}: side {side} repeated")
            }
            Self::NonpositiveArc { handle, arc } => {
                write!(f, "handle {handle}: arc {arc} has nonpositive length")
            }
            Self::SideUsedTwice { handle, side } => {
                write!(f, "germ ({handle},{side}) used by two gluings")
            }
            Self::UnknownSide { handle, side } => {
                write!(f, "germ ({handle},{side}) does not exist")
            }
            Self::TwoMonkeysInTriangle { triangle } => {
                write!(f, "triangle {triangle} hosts two monkey-handles")
            }
            Self::MonkeyCountExceedsTriangles { monkeys, triangles } => {
                write!(f, "{monkeys} monkey-handles exceed {triangles} triangles")
            }
            Self::UnknownStrip(s) => write!(f, "no strip with id {s}"),
            Self::WrongMonodromy { strip, expected } => {
                write!(f, "strip {strip} is not an {expected}")
            }
            Self::StripNotInessential(s) => write!(f, "strip {s} is not annotated inessential"),
            Self::HandleNotInStrip { handle, strip } => {
                write!(f, "handle {handle} is not part of strip {strip}")
            }
            Self::NotA0Handle(h) => write!(f, "handle {h} is not a 0-handle"),
            Self::NoQualifyingLoop(h) => {
                write!(f, "no embedded boundary loop through 0-handle {h}")
            }
            Self::MissingAnnotation(s) => write!(f, "strip {s} has no essentiality annotation"),
            Self::Parse { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl std::error::Error for ComplexError {}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

/// One component of the 0/1-handle union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IBundleComponent {
    /// Open chain of handles (H1 interior, possibly H0 caps); the base of an
    /// interval fibration.
    Chain { handles: Vec<HandleId> },
    /// Cyclic chain of 1-handles: a strip.
    Strip(Strip),
}

/// A cyclic chain of 1-handles with its monodromy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strip {
    /// Minimal handle id on the cycle; stable under surgery elsewhere.
    pub id: HandleId,
    pub handles: Vec<HandleId>,
    /// `true` = orientation-reversing (Möbius band), `false` = annulus.
    pub reversing: bool,
}

impl Strip {
    pub fn is_mobius(&self) -> bool {
        self.reversing
    }
}

/// Decomposition report for a well-formed complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub h0_count: usize,
    pub h1_count: usize,
    pub monkey_count: usize,
    pub components: Vec<IBundleComponent>,
    pub strips: Vec<Strip>,
}

impl HandleComplex {
    pub fn new(
        triangle_count: usize,
        ell_p: u64,
        handles: Vec<Handle>,
        gluings: Vec<Gluing>,
        strip_annotations: BTreeMap<HandleId, Essentiality>,
    ) -> Result<Self, ComplexError> {
        let c = Self { triangle_count, ell_p, handles, gluings, strip_annotations };
        c.validate()?;
        Ok(c)
    }

    pub fn handle(&self, id: HandleId) -> Result<&Handle, ComplexError> {
        self.handles.iter().find(|h| h.id == id).ok_or(ComplexError::UnknownHandle(id))
    }

    fn validate(&self) -> Result<(), ComplexError> {
        let mut seen = BTreeMap::new();
        for h in &self.handles {
            if seen.insert(h.id, ()).is_some() {
                return Err(ComplexError::DuplicateHandleId(h.id));
            }
            let expected = h.kind.side_count();
            if h.sides.len() != expected {
                return Err(ComplexError::SideCountMismatch {
                    handle: h.id,
                    expected,
                    got: h.sides.len(),
                });
            }
            if h.arcs.len() != expected {
                return Err(ComplexError::ArcCountMismatch {
                    handle: h.id,
                    expected,
                    got: h.arcs.len(),
                });
            }
            for &s in &h.sides {
                if s >= 3 {
                    return Err(ComplexError::SideOutOfRange { handle: h.id, side: s });
                }
                if h.sides.iter().filter(|&&t| t == s).count() > 1 {
                    return Err(ComplexError::DuplicateSide { handle: h.id, side: s });
                }
            }
            for (i, a) in h.arcs.iter().enumerate() {
                if *a <= Rational64::zero() {
                    return Err(ComplexError::NonpositiveArc { handle: h.id, arc: i });
                }
            }
        }
        // Gluings form a matching on declared germs.
        let mut used: BTreeMap<(HandleId, u8), ()> = BTreeMap::new();
        for g in &self.gluings {
            for (h, s) in [g.a, g.b] {
                let handle = self.handle(h)?;
                if !handle.sides.contains(&s) {
                    return Err(ComplexError::UnknownSide { handle: h, side: s });
                }
                if used.insert((h, s), ()).is_some() {
                    return Err(ComplexError::SideUsedTwice { handle: h, side: s });
                }
            }
        }
        // At most one monkey-handle per triangle, hence at most
        // triangle_count in total.
        let mut monkey_tris = BTreeMap::new();
        let mut monkeys = 0usize;
        for h in &self.handles {
            if h.kind == HandleKind::Monkey {
                monkeys += 1;
                if monkey_tris.insert(h.triangle, ()).is_some() {
                    return Err(ComplexError::TwoMonkeysInTriangle { triangle: h.triangle });
                }
            }
        }
        if monkeys > self.triangle_count {
            return Err(ComplexError::MonkeyCountExceedsTriangles {
                monkeys,
                triangles: self.triangle_count,
            });
        }
        Ok(())
    }

    /// Partner germ of `(h, s)` under the gluing matching, with its parity.
    fn partner(&self, h: HandleId, s: u8) -> Option<((HandleId, u8), bool)> {
        for g in &self.gluings {
            if g.a == (h, s) {
                return Some((g.b, g.twisted));
            }
            if g.b == (h, s) {
                return Some((g.a, g.twisted));
            }
        }
        None
    }

    /// Total pull-back boundary length: the exact sum of all arc lengths.
    pub fn boundary_length(&self) -> Rational64 {
        self.handles.iter().flat_map(|h| h.arcs.iter()).sum()
    }

    pub fn boundary_edge_count(&self) -> usize {
        self.handles.iter().map(|h| h.arcs.len()).sum()
    }

    pub fn h0_arc_count(&self) -> usize {
        self.handles.iter().filter(|h| h.kind == HandleKind::H0).count()
    }

    pub fn monkey_count(&self) -> usize {
        self.handles.iter().filter(|h| h.kind == HandleKind::Monkey).count()
    }

    /// Strip boundary length: the arcs of the strip's 1-handles.
    pub fn strip_boundary_length(&self, strip: &Strip) -> Rational64 {
        strip
            .handles
            .iter()
            .map(|&id| {
                self.handle(id).map(|h| h.arcs.iter().sum()).unwrap_or_else(|_| Rational64::zero())
            })
            .sum()
    }

    /// Classify handles, verify well-formedness, and extract the I-bundle
    /// component structure with its strips.
    pub fn classify(&self) -> Result<Classification, ComplexError> {
        self.validate()?;
        let mut h0 = 0;
        let mut h1 = 0;
        let mut monkeys = 0;
        for h in &self.handles {
            match h.kind {
                HandleKind::H0 => h0 += 1,
                HandleKind::H1 => h1 += 1,
                HandleKind::Monkey => monkeys += 1,
            }
        }

        // Walk the 0/1-handle union. Each H0 has one germ, each H1 two, so
        // components are paths or cycles.
        let mut visited: BTreeMap<HandleId, ()> = BTreeMap::new();
        let mut components = Vec::new();
        let mut strips = Vec::new();
        let mut ids: Vec<HandleId> = self
            .handles
            .iter()
            .filter(|h| h.kind != HandleKind::Monkey)
            .map(|h| h.id)
            .collect();
        ids.sort_unstable();
        for &start in &ids {
            if visited.contains_key(&start) {
                continue;
            }
            match self.walk_component(start, &mut visited)? {
                WalkResult::Cycle { handles, parity } => {
                    let id = *handles.iter().min().expect("cycle is nonempty");
                    let strip = Strip { id, handles, reversing: parity };
                    strips.push(strip.clone());
                    components.push(IBundleComponent::Strip(strip));
                }
                WalkResult::Path { handles } => {
                    components.push(IBundleComponent::Chain { handles });
                }
            }
        }
        strips.sort_by_key(|s| s.id);
        Ok(Classification { h0_count: h0, h1_count: h1, monkey_count: monkeys, components, strips })
    }

    /// Walk away from a germ through gluing partners inside the 0/1-handle
    /// union. Returns the handles encountered (excluding `start`), the twist
    /// parity accumulated, and whether the walk closed back onto `start`.
    fn walk_from(
        &self,
        start: HandleId,
        first_side: u8,
        visited: &mut BTreeMap<HandleId, ()>,
    ) -> Result<(Vec<HandleId>, bool, bool), ComplexError> {
        let mut out = Vec::new();
        let mut parity = false;
        let mut cur = (start, first_side);
        loop {
            let Some(((nh, ns), twisted)) = self.partner(cur.0, cur.1) else {
                return Ok((out, parity, false));
            };
            parity ^= twisted;
            if nh == start {
                return Ok((out, parity, true));
            }
            let nhandle = self.handle(nh)?;
            if nhandle.kind == HandleKind::Monkey {
                return Ok((out, parity, false));
            }
            visited.insert(nh, ());
            out.push(nh);
            match nhandle.kind {
                HandleKind::H0 => return Ok((out, parity, false)),
                HandleKind::H1 => {
                    let other = nhandle
                        .sides
                        .iter()
                        .copied()
                        .find(|&s| s != ns)
                        .expect("1-handle has two distinct sides");
                    cur = (nh, other);
                }
                HandleKind::Monkey => unreachable!(),
            }
        }
    }

    fn walk_component(
        &self,
        start: HandleId,
        visited: &mut BTreeMap<HandleId, ()>,
    ) -> Result<WalkResult, ComplexError> {
        let start_handle = self.handle(start)?;
        visited.insert(start, ());
        match start_handle.kind {
            HandleKind::H0 => {
                let (handles, _, closed) = self.walk_from(start, start_handle.sides[0], visited)?;
                debug_assert!(!closed, "a 0-handle cannot lie on a cycle");
                let mut all = vec![start];
                all.extend(handles);
                Ok(WalkResult::Path { handles: all })
            }
            HandleKind::H1 => {
                let s0 = start_handle.sides[0];
                let s1 = start_handle.sides[1];
                let (fwd, fwd_parity, closed) = self.walk_from(start, s1, visited)?;
                if closed {
                    let mut handles = vec![start];
                    handles.extend(fwd);
                    return Ok(WalkResult::Cycle { handles, parity: fwd_parity });
                }
                let (bwd, _, closed_b) = self.walk_from(start, s0, visited)?;
                debug_assert!(!closed_b, "cycle must close on the forward walk");
                let mut handles: Vec<HandleId> = bwd.into_iter().rev().collect();
                handles.push(start);
                handles.extend(fwd);
                Ok(WalkResult::Path { handles })
            }
            HandleKind::Monkey => unreachable!("monkeys are filtered out"),
        }
    }

    /// Strip with the given id, if the complex currently has one.
    pub fn strip(&self, id: HandleId) -> Result<Strip, ComplexError> {
        let c = self.classify()?;
        c.strips.into_iter().find(|s| s.id == id).ok_or(ComplexError::UnknownStrip(id))
    }
}

enum WalkResult {
    Path { handles: Vec<HandleId> },
    Cycle { handles: Vec<HandleId>, parity: bool },
}

// ---------------------------------------------------------------------------
// Spine and boundary graph
// ---------------------------------------------------------------------------

impl HandleComplex {
    /// Spine of the complex: a vertex per 0-handle, junction, and
    /// monkey-handle (trivalent), an edge per 1-handle with length the
    /// shorter of its two arcs. Carries the first homology of the I-bundle
    /// part, with monkey vertices adding their junctions.
    pub fn spine(&self) -> Result<MetricGraph, ComplexError> {
        self.validate()?;
        let mut node_of: BTreeMap<(HandleId, u8), usize> = BTreeMap::new();
        let mut next = 0usize;
        let mut sorted: Vec<&Handle> = self.handles.iter().collect();
        sorted.sort_by_key(|h| h.id);
        // Monkeys and 0-handles claim one node for all their germs.
        for h in &sorted {
            if h.kind != HandleKind::H1 {
                let n = next;
                next += 1;
                for &s in &h.sides {
                    node_of.insert((h.id, s), n);
                }
            }
        }
        let mut edges = Vec::new();
        for h in &sorted {
            if h.kind != HandleKind::H1 {
                continue;
            }
            let mut ends = [0usize; 2];
            for (i, &s) in h.sides.iter().enumerate() {
                let key = (h.id, s);
                let node = if let Some(&n) = node_of.get(&key) {
                    n
                } else {
                    match self.partner(h.id, s) {
                        Some((p, _)) => {
                            let n = *node_of.entry(p).or_insert_with(|| {
                                let n = next;
                                next += 1;
                                n
                            });
                            node_of.insert(key, n);
                            n
                        }
                        None => {
                            let n = next;
                            next += 1;
                            node_of.insert(key, n);
                            n
                        }
                    }
                };
                ends[i] = node;
            }
            let length = *h.arcs.iter().min().expect("1-handle has arcs");
            edges.push(Edge { u: ends[0], v: ends[1], length: rat_to_f64(length) });
        }
        Ok(MetricGraph { vertex_count: next, edges })
    }

    /// Pull-back boundary as a metric graph: an edge per boundary arc (two
    /// per 1-handle, one per 0-handle, three per monkey-handle), arc ends
    /// identified across gluings by the germ pairing.
    pub fn boundary_graph(&self) -> Result<MetricGraph, ComplexError> {
        Ok(self.boundary_structure()?.graph)
    }

    fn boundary_structure(&self) -> Result<BoundaryStructure, ComplexError> {
        self.validate()?;
        // Arc ends: (handle, arc index, end index 0|1). Ends at a germ are
        // listed in arc-index order; a gluing pairs the two lists, straight
        // or swapped.
        let mut end_id: BTreeMap<(HandleId, usize, u8), usize> = BTreeMap::new();
        let mut n_ends = 0usize;
        let mut sorted: Vec<&Handle> = self.handles.iter().collect();
        sorted.sort_by_key(|h| h.id);
        for h in &sorted {
            for arc in 0..h.arcs.len() {
                for end in 0..2u8 {
                    end_id.insert((h.id, arc, end), n_ends);
                    n_ends += 1;
                }
            }
        }
        let mut parent: Vec<usize> = (0..n_ends).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        // Arc ends exposed at a germ, in canonical order.
        let exposed = |h: &Handle, side: u8| -> [(HandleId, usize, u8); 2] {
            let pos = h.sides.iter().position(|&s| s == side).expect("validated side");
            match h.kind {
                HandleKind::H0 => [(h.id, 0, 0), (h.id, 0, 1)],
                // Both arcs run between the two sides: end index = side
                // position.
                HandleKind::H1 => [(h.id, 0, pos as u8), (h.id, 1, pos as u8)],
                // Arc i runs from side i (end 0) to side i+1 mod 3 (end 1).
                HandleKind::Monkey => {
                    let incoming = (pos + 2) % 3;
                    [(h.id, incoming, 1), (h.id, pos, 0)]
                }
            }
        };
        for g in &self.gluings {
            let ha = self.handle(g.a.0)?;
            let hb = self.handle(g.b.0)?;
            let ea = exposed(ha, g.a.1);
            let eb = exposed(hb, g.b.1);
            let pairs: [(usize, usize); 2] =
                if g.twisted { [(0, 1), (1, 0)] } else { [(0, 0), (1, 1)] };
            for (i, j) in pairs {
                let x = end_id[&ea[i]];
                let y = end_id[&eb[j]];
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        // Compact vertex numbering by first appearance.
        let mut vertex_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex_count = 0usize;
        let mut edges = Vec::new();
        let mut arc_edges: BTreeMap<(HandleId, usize), usize> = BTreeMap::new();
        for h in &sorted {
            for (arc, len) in h.arcs.iter().enumerate() {
                let v_of = |end: u8,
                                parent: &mut [usize],
                                vertex_of: &mut BTreeMap<usize, usize>,
                                vertex_count: &mut usize| {
                    let r = find(parent, end_id[&(h.id, arc, end)]);
                    *vertex_of.entry(r).or_insert_with(|| {
                        let v = *vertex_count;
                        *vertex_count += 1;
                        v
                    })
                };
                let u = v_of(0, &mut parent, &mut vertex_of, &mut vertex_count);
                let v = v_of(1, &mut parent, &mut vertex_of, &mut vertex_count);
                arc_edges.insert((h.id, arc), edges.len());
                edges.push(Edge { u, v, length: rat_to_f64(*len) });
            }
        }
        Ok(BoundaryStructure { graph: MetricGraph { vertex_count, edges }, arc_edges })
    }

    /// Does an embedded boundary loop pass through this 0-handle's arc?
    /// Boundary vertices have valence ≤ 2, so embedded loops are exactly the
    /// cycle components: the arc lies on one iff its whole component has
    /// valence 2.
    pub fn boundary_loop_through_h0(&self, h0: HandleId) -> Result<bool, ComplexError> {
        let h = self.handle(h0)?;
        if h.kind != HandleKind::H0 {
            return Err(ComplexError::NotA0Handle(h0));
        }
        let bs = self.boundary_structure()?;
        let g = &bs.graph;
        let deg = g.degrees();
        let start_edge = bs.arc_edges[&(h0, 0)];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count];
        for e in &g.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut stack = vec![g.edges[start_edge].u, g.edges[start_edge].v];
        let mut seen = vec![false; g.vertex_count];
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if deg[v] != 2 {
                return Ok(false);
            }
            for &w in &adj[v] {
                if !seen[w] {
                    stack.push(w);
                }
            }
        }
        Ok(true)
    }
}

struct BoundaryStructure {
    graph: MetricGraph,
    arc_edges: BTreeMap<(HandleId, usize), usize>,
}

fn rat_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

// ---------------------------------------------------------------------------
// Surgeries
// ---------------------------------------------------------------------------

impl HandleComplex {
    fn remove_handle(&mut self, id: HandleId) {
        self.handles.retain(|h| h.id != id);
        self.gluings.retain(|g| g.a.0 != id && g.b.0 != id);
        self.strip_annotations.remove(&id);
    }

    fn next_handle_id(&self) -> HandleId {
        self.handles.iter().map(|h| h.id).max().map_or(0, |m| m + 1)
    }

    fn require_inessential(&self, strip_id: HandleId) -> Result<(), ComplexError> {
        match self.strip_annotations.get(&strip_id) {
            Some(Essentiality::Inessential) => Ok(()),
            Some(Essentiality::Essential) => Err(ComplexError::StripNotInessential(strip_id)),
            None => Err(ComplexError::MissingAnnotation(strip_id)),
        }
    }

    /// Cut an inessential annulus by removing one of its 1-handles. The
    /// boundary never lengthens and the spine rank drops by exactly one.
    pub fn surgery_annulus(
        mut self,
        strip_id: HandleId,
        h1: HandleId,
    ) -> Result<Self, ComplexError> {
        let strip = self.strip(strip_id)?;
        if strip.is_mobius() {
            return Err(ComplexError::WrongMonodromy { strip: strip_id, expected: "annulus" });
        }
        self.require_inessential(strip_id)?;
        if !strip.handles.contains(&h1) {
            return Err(ComplexError::HandleNotInStrip { handle: h1, strip: strip_id });
        }
        let before = self.boundary_length();
        let rank_before = crate::metric_graph::cycle_rank(&self.spine()?);
        self.remove_handle(h1);
        self.strip_annotations.remove(&strip_id);
        debug_assert!(self.boundary_length() <= before);
        debug_assert_eq!(
            crate::metric_graph::cycle_rank(&self.spine()?) + 1,
            rank_before
        );
        Ok(self)
    }

    /// Cut an inessential Möbius band: remove one of its 1-handles and attach
    /// a single 0-handle along a proper geodesic edge. The new arc measures
    /// half the strip boundary, so the boundary grows by strictly less than
    /// `length(∂B)`.
    pub fn surgery_mobius(
        mut self,
        strip_id: HandleId,
        h1: HandleId,
    ) -> Result<Self, ComplexError> {
        let strip = self.strip(strip_id)?;
        if !strip.is_mobius() {
            return Err(ComplexError::WrongMonodromy { strip: strip_id, expected: "mobius band" });
        }
        self.require_inessential(strip_id)?;
        if !strip.handles.contains(&h1) {
            return Err(ComplexError::HandleNotInStrip { handle: h1, strip: strip_id });
        }
        let before = self.boundary_length();
        let strip_boundary = self.strip_boundary_length(&strip);
        let rank_before = crate::metric_graph::cycle_rank(&self.spine()?);

        let removed = self.handle(h1)?.clone();
        // Germs freed by the removal, excluding h1's own.
        let mut freed: Vec<(HandleId, u8)> = Vec::new();
        for &s in &removed.sides {
            if let Some((p, _)) = self.partner(h1, s) {
                if p.0 != h1 {
                    freed.push(p);
                }
            }
        }
        freed.sort_unstable();
        self.remove_handle(h1);
        self.strip_annotations.remove(&strip_id);

        let new_id = self.next_handle_id();
        self.handles.push(Handle {
            id: new_id,
            kind: HandleKind::H0,
            triangle: removed.triangle,
            sides: vec![removed.sides[0]],
            arcs: vec![strip_boundary / 2],
        });
        if let Some(&target) = freed.first() {
            self.gluings.push(Gluing { a: (new_id, removed.sides[0]), b: target, twisted: false });
        }

        debug_assert!(self.boundary_length() <= before + strip_boundary);
        debug_assert_eq!(
            crate::metric_graph::cycle_rank(&self.spine()?) + 1,
            rank_before
        );
        Ok(self)
    }

    /// Remove a 0-handle lying on an embedded boundary loop; exactly one
    /// boundary edge disappears.
    pub fn surgery_0handle(mut self, h0: HandleId) -> Result<Self, ComplexError> {
        if !self.boundary_loop_through_h0(h0)? {
            return Err(ComplexError::NoQualifyingLoop(h0));
        }
        let edges_before = self.boundary_edge_count();
        self.remove_handle(h0);
        debug_assert_eq!(self.boundary_edge_count() + 1, edges_before);
        Ok(self)
    }
}

// ---------------------------------------------------------------------------
// Good complex
// ---------------------------------------------------------------------------

/// Exact bookkeeping from a `make_good` run. All lengths are rationals and
/// every inequality is checked with zero tolerance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodComplexCertificate {
    pub boundary_before: Rational64,
    pub boundary_after_annuli: Rational64,
    pub boundary_after_mobius: Rational64,
    pub boundary_final: Rational64,
    /// `after_mobius ≤ 2·after_annuli` (disjoint inessential Möbius bands).
    pub mobius_doubling_ok: bool,
    /// `final ≤ 2·after_mobius`.
    pub zero_handle_doubling_ok: bool,
    /// `final ≤ 4·before` (the chained bound).
    pub chained_bound_ok: bool,
    pub annuli_cut: usize,
    pub mobius_cut: usize,
    pub zero_handles_cut: usize,
    /// 0-handle edges remaining; at most `3·ℓ(P)`.
    pub h0_edges: usize,
    pub h0_edge_bound_ok: bool,
    pub monkey_count: usize,
    pub spine_rank: usize,
    pub strips_left: usize,
}

impl GoodComplexCertificate {
    pub fn all_ok(&self) -> bool {
        self.mobius_doubling_ok
            && self.zero_handle_doubling_ok
            && self.chained_bound_ok
            && self.h0_edge_bound_ok
    }
}

impl HandleComplex {
    /// Run the full surgery pipeline: cut every inessential annulus, then
    /// every inessential Möbius band, then remove 0-handles on embedded
    /// boundary loops until none remain. Requires an annotation for every
    /// strip. Returns the good complex and its exact certificate.
    pub fn make_good(self) -> Result<(Self, GoodComplexCertificate), ComplexError> {
        let classification = self.classify()?;
        for s in &classification.strips {
            if !self.strip_annotations.contains_key(&s.id) {
                return Err(ComplexError::MissingAnnotation(s.id));
            }
        }
        let monkeys_before = self.monkey_count();
        let boundary_before = self.boundary_length();

        let find_strip = |c: &Self, mobius: bool| -> Result<Option<Strip>, ComplexError> {
            Ok(c.classify()?
                .strips
                .into_iter()
                .find(|s| {
                    s.is_mobius() == mobius
                        && c.strip_annotations.get(&s.id) == Some(&Essentiality::Inessential)
                }))
        };

        // Pass 1: inessential annuli.
        let mut c = self;
        let mut annuli_cut = 0;
        while let Some(s) = find_strip(&c, false)? {
            let h1 = *s.handles.iter().min().expect("strip nonempty");
            c = c.surgery_annulus(s.id, h1)?;
            annuli_cut += 1;
        }
        let boundary_after_annuli = c.boundary_length();

        // Pass 2: inessential Möbius bands (strips are handle-disjoint, so
        // the cuts never interact).
        let mut mobius_cut = 0;
        while let Some(s) = find_strip(&c, true)? {
            let h1 = *s.handles.iter().min().expect("strip nonempty");
            c = c.surgery_mobius(s.id, h1)?;
            mobius_cut += 1;
        }
        let boundary_after_mobius = c.boundary_length();

        // Pass 3: 0-handle surgery until no embedded boundary loop carries a
        // 0-handle edge. Removals only destroy loops, never create them.
        let mut zero_handles_cut = 0;
        loop {
            let mut h0s: Vec<HandleId> = c
                .handles
                .iter()
                .filter(|h| h.kind == HandleKind::H0)
                .map(|h| h.id)
                .collect();
            h0s.sort_unstable();
            let mut target = None;
            for id in h0s {
                if c.boundary_loop_through_h0(id)? {
                    target = Some(id);
                    break;
                }
            }
            let Some(id) = target else { break };
            c = c.surgery_0handle(id)?;
            zero_handles_cut += 1;
        }
        let boundary_final = c.boundary_length();

        let h0_edges = c.h0_arc_count();
        let spine_rank = crate::metric_graph::cycle_rank(&c.spine()?);
        let strips_left = c.classify()?.strips.len();
        let cert = GoodComplexCertificate {
            boundary_before,
            boundary_after_annuli,
            boundary_after_mobius,
            boundary_final,
            mobius_doubling_ok: boundary_after_mobius <= boundary_after_annuli * 2,
            zero_handle_doubling_ok: boundary_final <= boundary_after_mobius * 2,
            chained_bound_ok: boundary_final <= boundary_before * 4,
            annuli_cut,
            mobius_cut,
            zero_handles_cut,
            h0_edges,
            h0_edge_bound_ok: (h0_edges as u64) <= 3 * c.ell_p,
            monkey_count: monkeys_before,
            spine_rank,
            strips_left,
        };
        debug_assert_eq!(c.monkey_count(), monkeys_before);
        Ok((c, cert))
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

pub fn parse(text: &str) -> Result<HandleComplex, ComplexError> {
    let mut triangle_count = None;
    let mut ell_p: Option<u64> = None;
    let mut handles: Vec<Handle> = Vec::new();
    let mut arcs: BTreeMap<(HandleId, usize), Rational64> = BTreeMap::new();
    let mut gluings = Vec::new();
    let mut annotations = BTreeMap::new();

    let err = |line: usize, message: String| ComplexError::Parse { line, message };

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut parts = s.split_whitespace();
        let tag = parts.next().expect("nonempty line");
        let mut field = |what: &str| -> Result<String, ComplexError> {
            parts
                .next()
                .map(str::to_string)
                .ok_or_else(|| err(line, format!("expected {what}")))
        };
        match tag {
            "T" => {
                let n: usize = field("triangle count")?
                    .parse()
                    .map_err(|_| err(line, "bad count".into()))?;
                triangle_count = Some(n);
            }
            "L" => {
                let n: u64 =
                    field("ellP")?.parse().map_err(|_| err(line, "bad ellP".into()))?;
                ell_p = Some(n);
            }
            "H" => {
                let id: usize =
                    field("id")?.parse().map_err(|_| err(line, "bad id".into()))?;
                let kind = match field("kind")?.as_str() {
                    "H0" => HandleKind::H0,
                    "H1" => HandleKind::H1,
                    "Monkey" => HandleKind::Monkey,
                    other => return Err(err(line, format!("unknown kind `{other}`"))),
                };
                let triangle: usize =
                    field("triangle")?.parse().map_err(|_| err(line, "bad triangle".into()))?;
                let mut sides = Vec::new();
                for p in parts.by_ref() {
                    sides.push(p.parse().map_err(|_| err(line, "bad side".into()))?);
                }
                handles.push(Handle { id, kind, triangle, sides, arcs: Vec::new() });
            }
            "A" => {
                let id: usize =
                    field("handle")?.parse().map_err(|_| err(line, "bad handle".into()))?;
                let arc: usize =
                    field("arc id")?.parse().map_err(|_| err(line, "bad arc id".into()))?;
                let len = parse_rational(&field("length")?)
                    .ok_or_else(|| err(line, "bad length (use p/q or integer)".into()))?;
                arcs.insert((id, arc), len);
            }
            "G" => {
                let a = parse_germ(&field("germ")?)
                    .ok_or_else(|| err(line, "bad germ, use h,s".into()))?;
                let b = parse_germ(&field("germ")?)
                    .ok_or_else(|| err(line, "bad germ, use h,s".into()))?;
                let twisted = match parts.next() {
                    None => false,
                    Some("twisted") => true,
                    Some(other) => return Err(err(line, format!("unknown flag `{other}`"))),
                };
                gluings.push(Gluing { a, b, twisted });
            }
            "S" => {
                let id: usize =
                    field("strip id")?.parse().map_err(|_| err(line, "bad strip".into()))?;
                let ann = match field("annotation")?.as_str() {
                    "essential" => Essentiality::Essential,
                    "inessential" => Essentiality::Inessential,
                    other => return Err(err(line, format!("unknown annotation `{other}`"))),
                };
                annotations.insert(id, ann);
            }
            other => return Err(err(line, format!("unknown record `{other}`"))),
        }
    }

    let triangle_count =
        triangle_count.ok_or_else(|| err(0, "missing `T <count>` line".into()))?;
    let mut consumed = 0usize;
    for h in &mut handles {
        for i in 0..h.kind.side_count() {
            if let Some(&len) = arcs.get(&(h.id, i)) {
                h.arcs.push(len);
                consumed += 1;
            }
        }
    }
    if consumed != arcs.len() {
        return Err(err(0, "arc record references an unknown handle or arc id".into()));
    }
    let ell_p = ell_p.unwrap_or(3 * triangle_count as u64);
    HandleComplex::new(triangle_count, ell_p, handles, gluings, annotations)
}

fn parse_rational(s: &str) -> Option<Rational64> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.parse().ok()?;
        let q: i64 = q.parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(Rational64::new(p, q))
    } else {
        s.parse::<i64>().ok().map(Rational64::from_integer)
    }
}

fn parse_germ(s: &str) -> Option<(HandleId, u8)> {
    let (h, side) = s.split_once(',')?;
    Some((h.parse().ok()?, side.parse().ok()?))
}

pub fn print(c: &HandleComplex) -> String {
    let mut out = format!("T {}\n", c.triangle_count);
    if c.ell_p != 3 * c.triangle_count as u64 {
        out.push_str(&format!("L {}\n", c.ell_p));
    }
    let mut handles: Vec<&Handle> = c.handles.iter().collect();
    handles.sort_by_key(|h| h.id);
    for h in &handles {
        let sides: Vec<String> = h.sides.iter().map(u8::to_string).collect();
        out.push_str(&format!("H {} {} {} {}\n", h.id, h.kind, h.triangle, sides.join(" ")));
    }
    for h in &handles {
        for (i, a) in h.arcs.iter().enumerate() {
            out.push_str(&format!("A {} {} {}/{}\n", h.id, i, a.numer(), a.denom()));
        }
    }
    for g in &c.gluings {
        let flag = if g.twisted { " twisted" } else { "" };
        out.push_str(&format!("G {},{} {},{}{}\n", g.a.0, g.a.1, g.b.0, g.b.1, flag));
    }
    for (id, ann) in &c.strip_annotations {
        let a = match ann {
            Essentiality::Essential => "essential",
            Essentiality::Inessential => "inessential",
        };
        out.push_str(&format!("S {id} {a}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::scenario;
    use super::*;
    use crate::metric_graph::cycle_rank;
    use crate::rng::SplitMix64;

    fn rat(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    #[test]
    fn classify_single_h0() {
        let c = scenario::single_h0();
        let cls = c.classify().unwrap();
        assert_eq!(cls.h0_count, 1);
        assert_eq!(cls.strips.len(), 0);
        assert_eq!(cls.components.len(), 1);
    }

    #[test]
    fn classify_band_of_three() {
        // Chain of three 1-handles: base graph is a path.
        let c = scenario::open_chain(3);
        let cls = c.classify().unwrap();
        assert_eq!(cls.h1_count, 3);
        assert_eq!(cls.strips.len(), 0);
        match &cls.components[0] {
            IBundleComponent::Chain { handles } => assert_eq!(handles.len(), 3),
            other => panic!("expected chain, got {other:?}"),
        }
        let spine = c.spine().unwrap();
        assert_eq!(spine.edges.len(), 3);
        assert_eq!(cycle_rank(&spine), 0);
    }

    #[test]
    fn empty_complex_has_empty_spine() {
        let c = HandleComplex::new(0, 0, Vec::new(), Vec::new(), BTreeMap::new()).unwrap();
        let spine = c.spine().unwrap();
        assert_eq!(spine.vertex_count, 0);
        assert!(spine.edges.is_empty());
        assert_eq!(c.boundary_graph().unwrap().vertex_count, 0);
    }

    #[test]
    fn boundary_edge_counts_by_kind() {
        // Two arcs per 1-handle, one per 0-handle, three per monkey-handle.
        let c = scenario::mixed();
        let cls = c.classify().unwrap();
        assert_eq!(
            c.boundary_edge_count(),
            2 * cls.h1_count + cls.h0_count + 3 * cls.monkey_count
        );
        // A monkey junction contributes exactly three more boundary edges.
        let with = scenario::single_monkey().boundary_edge_count();
        assert_eq!(with, 3);
    }

    #[test]
    fn classify_monkey() {
        let c = scenario::single_monkey();
        let cls = c.classify().unwrap();
        assert_eq!(cls.monkey_count, 1);
        // Spine: one trivalent vertex, no edges.
        let spine = c.spine().unwrap();
        assert_eq!(spine.vertex_count, 1);
        assert!(spine.edges.is_empty());
    }

    #[test]
    fn annulus_strip_structure() {
        let c = scenario::strip(5, false, Essentiality::Inessential);
        let cls = c.classify().unwrap();
        assert_eq!(cls.strips.len(), 1);
        assert!(!cls.strips[0].is_mobius());
        assert_eq!(cls.strips[0].handles.len(), 5);

        // Spine is a 5-cycle.
        let spine = c.spine().unwrap();
        assert_eq!(spine.edges.len(), 5);
        assert_eq!(cycle_rank(&spine), 1);

        // Boundary: two disjoint cycles, doubling the spine.
        let b = c.boundary_graph().unwrap();
        assert_eq!(b.edges.len(), 2 * spine.edges.len());
        assert_eq!(b.vertex_count, 2 * spine.vertex_count);
        assert_eq!(cycle_rank(&b), 2);
    }

    #[test]
    fn mobius_strip_structure() {
        let c = scenario::strip(3, true, Essentiality::Inessential);
        let cls = c.classify().unwrap();
        assert_eq!(cls.strips.len(), 1);
        assert!(cls.strips[0].is_mobius());

        // Boundary: a single cycle of doubled length.
        let b = c.boundary_graph().unwrap();
        assert_eq!(cycle_rank(&b), 1);
        assert_eq!(b.edges.len(), 6);
    }

    #[test]
    fn mobius_detection_is_parity() {
        // Two twists cancel: annulus again.
        let c = scenario::strip_with_twists(4, &[0, 2]);
        let cls = c.classify().unwrap();
        assert!(!cls.strips[0].is_mobius());
        let c = scenario::strip_with_twists(4, &[0, 1, 3]);
        let cls = c.classify().unwrap();
        assert!(cls.strips[0].is_mobius());
    }

    #[test]
    fn surgery_annulus_cuts_cycle() {
        let c = scenario::strip(4, false, Essentiality::Inessential);
        let before = c.boundary_length();
        let strip = c.classify().unwrap().strips[0].clone();
        let out = c.surgery_annulus(strip.id, strip.handles[0]).unwrap();
        assert!(out.boundary_length() <= before);
        let spine = out.spine().unwrap();
        assert_eq!(cycle_rank(&spine), 0);
        assert_eq!(out.handles.len(), 3);
    }

    #[test]
    fn surgery_annulus_rejects_essential() {
        let c = scenario::strip(4, false, Essentiality::Essential);
        let strip = c.classify().unwrap().strips[0].clone();
        assert!(matches!(
            c.surgery_annulus(strip.id, strip.handles[0]),
            Err(ComplexError::StripNotInessential(_))
        ));
    }

    #[test]
    fn surgery_annulus_isolates_other_strips() {
        let c = scenario::two_strips();
        let strips = c.classify().unwrap().strips;
        assert_eq!(strips.len(), 2);
        let cut = strips[0].clone();
        let keep = strips[1].clone();
        let out = c.surgery_annulus(cut.id, cut.handles[0]).unwrap();
        let after = out.classify().unwrap().strips;
        assert_eq!(after.len(), 1);
        assert_eq!(after[0].handles, keep.handles);
    }

    #[test]
    fn surgery_mobius_bookkeeping() {
        let c = scenario::strip(3, true, Essentiality::Inessential);
        let before = c.boundary_length();
        let strip = c.classify().unwrap().strips[0].clone();
        let strip_len = c.strip_boundary_length(&strip);
        let out = c.surgery_mobius(strip.id, strip.handles[0]).unwrap();
        // Rank dropped, one new 0-handle appeared.
        assert_eq!(cycle_rank(&out.spine().unwrap()), 0);
        assert_eq!(out.h0_arc_count(), 1);
        assert!(out.boundary_length() <= before + strip_len);
    }

    #[test]
    fn fig_pattern_paired_h0() {
        // Two 0-handles glued directly: their boundary is an embedded loop
        // with two 0-handle edges; surgery leaves a single 0-handle.
        let c = scenario::h0_pair();
        assert!(c.boundary_loop_through_h0(0).unwrap());
        assert!(c.boundary_loop_through_h0(1).unwrap());
        let out = c.surgery_0handle(0).unwrap();
        assert_eq!(out.h0_arc_count(), 1);
        assert!(!out.boundary_loop_through_h0(1).unwrap());
    }

    #[test]
    fn capped_chain_loses_one_cap() {
        let c = scenario::capped_chain(2);
        // Boundary of an H0–H1–H1–H0 chain is a single embedded loop.
        let b = c.boundary_graph().unwrap();
        assert_eq!(cycle_rank(&b), 1);
        let cap_arc = rat(1, 2);
        let (good, cert) = c.make_good().unwrap();
        assert_eq!(cert.zero_handles_cut, 1);
        assert_eq!(good.h0_arc_count(), 1);
        assert_eq!(cert.boundary_final, cert.boundary_before - cap_arc);
    }

    #[test]
    fn make_good_mixed_scenario() {
        // One inessential annulus, one inessential Möbius band, one glued
        // 0-handle pair; everything must be cut and certified.
        let c = scenario::mixed();
        let (good, cert) = c.make_good().unwrap();
        assert!(cert.all_ok(), "certificate: {cert:?}");
        assert_eq!(cert.annuli_cut, 1);
        assert_eq!(cert.mobius_cut, 1);
        assert!(cert.zero_handles_cut >= 1);
        // No inessential strip survives.
        let strips = good.classify().unwrap().strips;
        assert!(strips
            .iter()
            .all(|s| good.strip_annotations.get(&s.id) == Some(&Essentiality::Essential)));
        // No boundary loop through a 0-handle.
        for h in &good.handles {
            if h.kind == HandleKind::H0 {
                assert!(!good.boundary_loop_through_h0(h.id).unwrap());
            }
        }
    }

    #[test]
    fn make_good_identity_on_good_complex() {
        let c = scenario::strip(4, false, Essentiality::Essential);
        let before = c.clone();
        let (good, cert) = c.make_good().unwrap();
        assert_eq!(good, before);
        assert_eq!(cert.annuli_cut + cert.mobius_cut + cert.zero_handles_cut, 0);
        assert!(cert.all_ok());
    }

    #[test]
    fn make_good_requires_annotations() {
        let mut c = scenario::strip(4, false, Essentiality::Inessential);
        c.strip_annotations.clear();
        assert!(matches!(c.make_good(), Err(ComplexError::MissingAnnotation(_))));
    }

    #[test]
    fn make_good_randomized() {
        let mut rng = SplitMix64::new(0x600d);
        for _ in 0..100 {
            let c = scenario::random_complex(&mut rng);
            let monkeys = c.monkey_count();
            let (good, cert) = c.make_good().unwrap();
            assert!(cert.all_ok(), "certificate failed: {cert:?}");
            assert_eq!(good.monkey_count(), monkeys);
            for h in &good.handles {
                if h.kind == HandleKind::H0 {
                    assert!(!good.boundary_loop_through_h0(h.id).unwrap());
                }
            }
            let strips = good.classify().unwrap().strips;
            assert!(strips
                .iter()
                .all(|s| good.strip_annotations.get(&s.id) == Some(&Essentiality::Essential)));
        }
    }

    #[test]
    fn monkey_vertices_add_at_most_three_ranks() {
        // Joining up to three chain ends at a trivalent vertex raises the
        // spine rank by at most 3 per monkey-handle.
        let mut rng = SplitMix64::new(0x303);
        for _ in 0..200 {
            let c = scenario::random_complex(&mut rng);
            let monkeys = c.monkey_count();
            if monkeys == 0 {
                continue;
            }
            let with = cycle_rank(&c.spine().unwrap());
            let mut stripped = c.clone();
            let monkey_ids: Vec<HandleId> = stripped
                .handles
                .iter()
                .filter(|h| h.kind == HandleKind::Monkey)
                .map(|h| h.id)
                .collect();
            for id in monkey_ids {
                stripped.remove_handle(id);
            }
            let without = cycle_rank(&stripped.spine().unwrap());
            assert!(with <= without + 3 * monkeys, "{with} > {without} + 3*{monkeys}");
        }
    }

    #[test]
    fn boundary_rank_bounded_by_spine_plus_attachments() {
        let mut rng = SplitMix64::new(0xb0);
        for _ in 0..200 {
            let c = scenario::random_complex(&mut rng);
            let spine = c.spine().unwrap();
            let boundary = c.boundary_graph().unwrap();
            let extra = 6 * c.ell_p as usize;
            assert!(
                cycle_rank(&boundary) <= 2 * cycle_rank(&spine) + extra,
                "boundary rank {} vs spine rank {}",
                cycle_rank(&boundary),
                cycle_rank(&spine)
            );
        }
    }

    #[test]
    fn make_good_is_idempotent() {
        let mut rng = SplitMix64::new(0x1de);
        for _ in 0..50 {
            let c = scenario::random_complex(&mut rng);
            let (good, _) = c.make_good().unwrap();
            let (again, cert) = good.clone().make_good().unwrap();
            assert_eq!(again, good);
            assert_eq!(cert.annuli_cut + cert.mobius_cut + cert.zero_handles_cut, 0);
        }
    }

    #[test]
    fn boundary_vertices_have_valence_at_most_two() {
        // Germ pairings are a matching on arc ends, so the pull-back
        // boundary is a disjoint union of paths and cycles; the 0-handle
        // loop detection rests on this.
        let mut rng = SplitMix64::new(0x7a1);
        for _ in 0..200 {
            let c = scenario::random_complex(&mut rng);
            let b = c.boundary_graph().unwrap();
            assert!(b.degrees().iter().all(|&d| d <= 2));
        }
    }

    #[test]
    fn parse_never_panics_on_garbage() {
        let mut rng = SplitMix64::new(0xf22);
        let alphabet: Vec<char> =
            "THAGLS 0123456789,/ \n\t#essentialinessential-Monkey".chars().collect();
        for _ in 0..2000 {
            let len = rng.below(60) as usize;
            let text: String =
                (0..len).map(|_| alphabet[rng.below(alphabet.len() as u64) as usize]).collect();
            let _ = parse(&text); // any Result is fine, panics are not
        }
        assert!(matches!(
            parse("T 1\nH 0 H0 0 0\nA 0 0 1\nA 0 7 1\n"),
            Err(ComplexError::Parse { .. })
        ));
        assert!(matches!(
            parse("T 1\nH 0 H0 0 0\nA 0 0 1\nA 9 0 1\n"),
            Err(ComplexError::Parse { .. })
        ));
    }

    #[test]
    fn parse_print_roundtrip() {
        let mut rng = SplitMix64::new(0xf11e);
        for _ in 0..50 {
            let c = scenario::random_complex(&mut rng);
            let text = print(&c);
            let back = parse(&text).unwrap();
            assert_eq!(back, c, "roundtrip failed for:\n{text}");
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(matches!(parse("H 0 H0 0 0"), Err(ComplexError::Parse { .. })));
        assert!(parse("T 1\nH 0 H9 0 0").is_err());
        // Side used twice.
        let text = "T 3\nH 0 H0 0 0\nA 0 0 1\nH 1 H0 1 0\nA 1 0 1\nH 2 H0 2 1\nA 2 0 1\nG 0,0 1,0\nG 0,0 2,1\n";
        assert!(matches!(parse(text), Err(ComplexError::SideUsedTwice { .. })));
    }

    #[test]
    fn validation_catches_monkey_overflow() {
        let mk = |tri: usize, id: usize| Handle {
            id,
            kind: HandleKind::Monkey,
            triangle: tri,
            sides: vec![0, 1, 2],
            arcs: vec![rat(1, 1), rat(1, 1), rat(1, 1)],
        };
        assert!(matches!(
            HandleComplex::new(1, 3, vec![mk(0, 0), mk(0, 1)], Vec::new(), BTreeMap::new()),
            Err(ComplexError::TwoMonkeysInTriangle { .. })
        ));
        assert!(matches!(
            HandleComplex::new(1, 3, vec![mk(0, 0), mk(1, 1)], Vec::new(), BTreeMap::new()),
            Err(ComplexError::MonkeyCountExceedsTriangles { .. })
        ));
    }
}
