//! Labeled and quasi-labeled PSL₂(ℤ)-reduced graphs.
//!
//! A graph stores, per vertex label, its a-partner (itself for an a-loop), its
//! b-successor and its b-predecessor. Labels are positive integers; slots are
//! indexed by `label - 1` and trailing empty slots are never kept, so two
//! graphs with the same structure compare equal.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub type Label = u32;

/// One of the two generators, used when reporting adjacency defects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A,
    B,
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::A => "a",
            Gen::B => "b",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
struct Slot {
    a: Option<Label>,
    b: Option<Label>,
    b_inv: Option<Label>,
}

/// Position of a vertex inside its b-orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BKind {
    Loop,
    /// Tail of an isolated b-edge; carries the head.
    Tail(Label),
    /// Head of an isolated b-edge; carries the tail.
    Head(Label),
    Triangle,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Error)]
pub enum Violation {
    #[error("graph has no vertices")]
    Empty,
    #[error("root {0} is not a vertex")]
    RootNotVertex(Label),
    #[error("vertex {v} has an edge to {w}, which is not a vertex")]
    Dangling { v: Label, w: Label },
    #[error("a-edge {v}-{w} is not symmetric")]
    AsymmetricA { v: Label, w: Label },
    #[error("b is not injective: {u} and {v} both map to {target}")]
    NonInjectiveB { target: Label, u: Label, v: Label },
    #[error("non-closed b-orbit through vertex {0}")]
    NonClosedBOrbit(Label),
    #[error("vertex {v} is not adjacent to a {letter}-edge")]
    NotAdjacent { v: Label, letter: Gen },
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("labels are not exactly 1..{0}")]
    NotLabeled(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", fmt_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("rank is not a non-negative integer (6r = {0})")]
    NonIntegralRank(i64),
    #[error("b-orbit quotient is disconnected")]
    DisconnectedQuotient,
    #[error("root lacks both letters in a graph of size {0}")]
    BareRoot(usize),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Combinatorial type (n, k₂, k₃, ℓ₂, ℓ₃).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombType {
    pub n: u32,
    pub k2: u32,
    pub k3: u32,
    pub l2: u32,
    pub l3: u32,
}

impl CombType {
    pub const fn new(n: u32, k2: u32, k3: u32, l2: u32, l3: u32) -> Self {
        CombType { n, k2, k3, l2, l3 }
    }

    pub fn as_array(&self) -> [i64; 5] {
        [self.n, self.k2, self.k3, self.l2, self.l3].map(i64::from)
    }

    /// Builds a type from signed components, `None` if any is negative.
    pub fn from_signed(t: [i64; 5]) -> Option<Self> {
        let c = |x: i64| u32::try_from(x).ok();
        Some(CombType::new(c(t[0])?, c(t[1])?, c(t[2])?, c(t[3])?, c(t[4])?))
    }

    pub fn shifted(&self, delta: [i64; 5]) -> Option<Self> {
        let a = self.as_array();
        Self::from_signed([0, 1, 2, 3, 4].map(|i| a[i] + delta[i]))
    }

    /// φ(τ) = n − 2k₃ − 3ℓ₂ − 4ℓ₃.
    pub fn phi(&self) -> i64 {
        let [n, _, k3, l2, l3] = self.as_array();
        n - 2 * k3 - 3 * l2 - 4 * l3
    }

    /// Whether the type satisfies the edge-count identities of a cyclically
    /// reduced graph: n = 2k₂+ℓ₂ and 3 | n−2k₃−ℓ₃ with a non-negative quotient.
    pub fn is_balanced(&self) -> bool {
        let [n, k2, k3, l2, l3] = self.as_array();
        let rest = n - 2 * k3 - l3;
        n > 0 && n == 2 * k2 + l2 && rest >= 0 && rest % 3 == 0
    }

    /// Number of b-triangles, when balanced.
    pub fn triangles(&self) -> Option<u32> {
        self.is_balanced()
            .then(|| (self.n - 2 * self.k3 - self.l3) / 3)
    }
}

impl fmt::Display for CombType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.n, self.k2, self.k3, self.l2, self.l3)
    }
}

fn parse_tuple<const N: usize>(s: &str) -> Result<[u32; N], String> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated integers, got {s:?}"));
    }
    let mut out = [0u32; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("not a non-negative integer: {p:?}"))?;
    }
    Ok(out)
}

impl FromStr for CombType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let [n, k2, k3, l2, l3] = parse_tuple::<5>(s)?;
        Ok(CombType::new(n, k2, k3, l2, l3))
    }
}

/// Isomorphism type (ℓ₂, ℓ₃, r): the subgroup is ℤ₂^{*ℓ₂} * ℤ₃^{*ℓ₃} * F_r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoType {
    pub l2: u32,
    pub l3: u32,
    pub r: u32,
}

impl IsoType {
    pub const fn new(l2: u32, l3: u32, r: u32) -> Self {
        IsoType { l2, l3, r }
    }
}

impl fmt::Display for IsoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.l2, self.l3, self.r)
    }
}

impl FromStr for IsoType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let [l2, l3, r] = parse_tuple::<3>(s)?;
        Ok(IsoType::new(l2, l3, r))
    }
}

/// Constant used for the free rank when the root misses its a-edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RankConvention {
    /// r = 1/2 + φ/6, obtained through the completed graph.
    #[default]
    Completed,
    /// r = 2/3 + φ/6, kept for comparison runs.
    TwoThirds,
}

/// Which letter the root is missing, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootDefect {
    None,
    MissingA,
    MissingB,
    MissingBoth,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    slots: Vec<Option<Slot>>,
    n: usize,
    root: Option<Label>,
}

impl LabeledGraph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The trivial subgroup's graph: one rooted vertex, no edges.
    pub fn trivial() -> Self {
        let mut g = Self::empty();
        g.add_vertex(1);
        g.root = Some(1);
        g
    }

    pub fn delta1() -> Self {
        GraphBuilder::new().a_loop(1).b_loop(1).build_unchecked()
    }

    pub fn delta2() -> Self {
        GraphBuilder::new().a_edge(1, 2).b_edge(1, 2).build_unchecked()
    }

    pub fn delta3() -> Self {
        GraphBuilder::new().a_loop(1).a_loop(2).b_edge(1, 2).build_unchecked()
    }

    pub fn delta4() -> Self {
        GraphBuilder::new().a_edge(1, 2).b_loop(1).b_loop(2).build_unchecked()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Option<Label> {
        self.root
    }

    pub fn is_rooted(&self) -> bool {
        self.root.is_some()
    }

    pub fn max_label(&self) -> Label {
        self.slots.len() as Label
    }

    fn slot(&self, v: Label) -> Option<&Slot> {
        if v == 0 {
            return None;
        }
        self.slots.get(v as usize - 1).and_then(Option::as_ref)
    }

    fn slot_mut(&mut self, v: Label) -> &mut Slot {
        self.slots[v as usize - 1]
            .as_mut()
            .unwrap_or_else(|| panic!("vertex {v} is not present"))
    }

    pub fn contains(&self, v: Label) -> bool {
        self.slot(v).is_some()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| i as Label + 1)
    }

    pub fn a(&self, v: Label) -> Option<Label> {
        self.slot(v).and_then(|s| s.a)
    }

    pub fn b(&self, v: Label) -> Option<Label> {
        self.slot(v).and_then(|s| s.b)
    }

    pub fn b_inv(&self, v: Label) -> Option<Label> {
        self.slot(v).and_then(|s| s.b_inv)
    }

    pub fn has_a_loop(&self, v: Label) -> bool {
        self.a(v) == Some(v)
    }

    pub fn has_b_loop(&self, v: Label) -> bool {
        self.b(v) == Some(v)
    }

    pub fn is_a_adjacent(&self, v: Label) -> bool {
        self.a(v).is_some()
    }

    /// Outgoing or incoming b-edge.
    pub fn is_b_adjacent(&self, v: Label) -> bool {
        self.b(v).is_some() || self.b_inv(v).is_some()
    }

    /// Position of `v` in its b-orbit; assumes b-orbits are well formed.
    pub fn b_kind(&self, v: Label) -> Option<BKind> {
        match (self.b(v), self.b_inv(v)) {
            (Some(w), _) if w == v => Some(BKind::Loop),
            (Some(w), _) => Some(if self.b(w).is_some() {
                BKind::Triangle
            } else {
                BKind::Tail(w)
            }),
            (None, Some(u)) => Some(BKind::Head(u)),
            (None, None) => None,
        }
    }

    pub fn root_defect(&self) -> RootDefect {
        match self.root {
            None => RootDefect::None,
            Some(r) => match (self.is_a_adjacent(r), self.is_b_adjacent(r)) {
                (true, true) => RootDefect::None,
                (false, true) => RootDefect::MissingA,
                (true, false) => RootDefect::MissingB,
                (false, false) => RootDefect::MissingBoth,
            },
        }
    }

    pub fn a_loops(&self) -> Vec<Label> {
        self.labels().filter(|&v| self.has_a_loop(v)).collect()
    }

    pub fn b_loops(&self) -> Vec<Label> {
        self.labels().filter(|&v| self.has_b_loop(v)).collect()
    }

    /// Isolated a-edges as (min, max), sorted by minimum endpoint.
    pub fn isolated_a_edges(&self) -> Vec<(Label, Label)> {
        self.labels()
            .filter_map(|v| match self.a(v) {
                Some(w) if w > v => Some((v, w)),
                _ => None,
            })
            .collect()
    }

    /// Isolated b-edges as (tail, head), sorted by tail.
    pub fn isolated_b_edges(&self) -> Vec<(Label, Label)> {
        self.labels()
            .filter_map(|v| match self.b_kind(v) {
                Some(BKind::Tail(w)) => Some((v, w)),
                _ => None,
            })
            .collect()
    }

    /// b-triangles rotated so the least label comes first, sorted.
    pub fn b_triangles(&self) -> Vec<[Label; 3]> {
        self.labels()
            .filter_map(|v| {
                let w = self.b(v)?;
                let u = self.b(w)?;
                (w != v && v < w && v < u).then_some([v, w, u])
            })
            .collect()
    }

    // Raw edits. These do not maintain the reducedness invariants; callers
    // (builder, moves, samplers) are responsible for the final shape.

    pub(crate) fn add_vertex(&mut self, v: Label) {
        assert!(v >= 1, "labels are positive");
        let i = v as usize - 1;
        if self.slots.len() <= i {
            self.slots.resize(i + 1, None);
        }
        if self.slots[i].is_none() {
            self.slots[i] = Some(Slot::default());
            self.n += 1;
        }
    }

    /// Deletes `v` and every edge incident to it.
    pub(crate) fn remove_vertex(&mut self, v: Label) {
        let s = *self.slot(v).expect("vertex present");
        if let Some(w) = s.a {
            if w != v && self.a(w) == Some(v) {
                self.slot_mut(w).a = None;
            }
        }
        if let Some(w) = s.b {
            if w != v {
                self.slot_mut(w).b_inv = None;
            }
        }
        if let Some(u) = s.b_inv {
            if u != v {
                self.slot_mut(u).b = None;
            }
        }
        self.slots[v as usize - 1] = None;
        self.n -= 1;
        while matches!(self.slots.last(), Some(None)) {
            self.slots.pop();
        }
        if self.root == Some(v) {
            self.root = None;
        }
    }

    /// Sets a(v)=w and a(w)=v (an a-loop when v = w).
    pub(crate) fn set_a(&mut self, v: Label, w: Label) {
        self.slot_mut(v).a = Some(w);
        self.slot_mut(w).a = Some(v);
    }

    pub(crate) fn set_a_raw(&mut self, v: Label, w: Label) {
        self.slot_mut(v).a = Some(w);
    }

    /// Removes the a-edge at `v` on both ends.
    pub(crate) fn clear_a(&mut self, v: Label) {
        if let Some(w) = self.slot_mut(v).a.take() {
            if w != v && self.a(w) == Some(v) {
                self.slot_mut(w).a = None;
            }
        }
    }

    pub(crate) fn set_b(&mut self, v: Label, w: Label) {
        self.slot_mut(v).b = Some(w);
        self.slot_mut(w).b_inv = Some(v);
    }

    pub(crate) fn clear_b(&mut self, v: Label) {
        if let Some(w) = self.slot_mut(v).b.take() {
            if self.b_inv(w) == Some(v) {
                self.slot_mut(w).b_inv = None;
            }
        }
    }

    pub(crate) fn set_root(&mut self, root: Option<Label>) {
        self.root = root;
    }

    /// Same graph without its root.
    pub fn unrooted(&self) -> Self {
        let mut g = self.clone();
        g.root = None;
        g
    }

    pub fn with_root(&self, root: Label) -> Self {
        assert!(self.contains(root));
        let mut g = self.clone();
        g.root = Some(root);
        g
    }

    fn neighbours(&self, v: Label) -> impl Iterator<Item = Label> + '_ {
        let s = self.slot(v).copied().unwrap_or_default();
        [s.a, s.b, s.b_inv].into_iter().flatten()
    }

    /// Number of connected components (edges taken undirected).
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.slots.len() + 1];
        let mut comps = 0;
        let mut stack = Vec::new();
        for v in self.labels() {
            if seen[v as usize] {
                continue;
            }
            comps += 1;
            seen[v as usize] = true;
            stack.push(v);
            while let Some(x) = stack.pop() {
                for y in self.neighbours(x) {
                    if self.contains(y) && !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Labels are exactly {1..n}.
    pub fn is_labeled(&self) -> bool {
        self.slots.len() == self.n
    }

    /// Every check except the label-set shape.
    pub fn validate_quasi(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.n == 0 {
            return Err(vec![Violation::Empty]);
        }
        if let Some(r) = self.root {
            if !self.contains(r) {
                out.push(Violation::RootNotVertex(r));
            }
        }
        let mut preimage: Vec<Option<Label>> = vec![None; self.slots.len() + 1];
        let mut open_orbits = BTreeSet::new();
        for v in self.labels() {
            if let Some(w) = self.a(v) {
                if !self.contains(w) {
                    out.push(Violation::Dangling { v, w });
                } else if self.a(w) != Some(v) {
                    out.push(Violation::AsymmetricA { v, w });
                }
            }
            if let Some(w) = self.b(v) {
                if !self.contains(w) {
                    out.push(Violation::Dangling { v, w });
                    continue;
                }
                match preimage[w as usize] {
                    Some(u) => out.push(Violation::NonInjectiveB { target: w, u, v }),
                    None => preimage[w as usize] = Some(v),
                }
                if let Some(u) = self.b(w) {
                    if self.contains(u) && self.b(u) != Some(v) {
                        open_orbits.insert(v.min(w).min(u));
                    }
                }
            }
        }
        out.extend(open_orbits.into_iter().map(Violation::NonClosedBOrbit));
        for v in self.labels() {
            if Some(v) == self.root {
                continue;
            }
            if self.a(v).is_none() {
                out.push(Violation::NotAdjacent { v, letter: Gen::A });
            }
            if self.b(v).is_none() && preimage[v as usize].is_none() {
                out.push(Violation::NotAdjacent { v, letter: Gen::B });
            }
        }
        let comps = self.component_count();
        if comps > 1 {
            out.push(Violation::Disconnected(comps));
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Full validity, including labels being exactly {1..n}.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = match self.validate_quasi() {
            Ok(()) => Vec::new(),
            Err(v) => v,
        };
        if self.n > 0 && !self.is_labeled() {
            out.push(Violation::NotLabeled(self.n));
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn comb_type(&self) -> CombType {
        let mut t = CombType::new(self.n as u32, 0, 0, 0, 0);
        for v in self.labels() {
            match self.a(v) {
                Some(w) if w == v => t.l2 += 1,
                Some(w) if w > v => t.k2 += 1,
                _ => {}
            }
            match self.b_kind(v) {
                Some(BKind::Loop) => t.l3 += 1,
                Some(BKind::Tail(_)) => t.k3 += 1,
                _ => {}
            }
        }
        t
    }

    /// Every vertex is adjacent to both letters (the root is not exempt).
    pub fn is_cyclically_reduced(&self) -> bool {
        self.n > 0 && self.labels().all(|v| self.is_a_adjacent(v) && self.is_b_adjacent(v))
    }

    pub fn is_delta1_shaped(&self) -> bool {
        self.n == 1 && self.labels().all(|v| self.has_a_loop(v) && self.has_b_loop(v))
    }

    pub fn is_delta2_shaped(&self) -> bool {
        self.n == 2 && self.is_cyclically_reduced() && self.comb_type() == CombType::new(2, 1, 1, 0, 0)
    }

    pub fn is_delta3_shaped(&self) -> bool {
        self.n == 2 && self.is_cyclically_reduced() && self.comb_type() == CombType::new(2, 0, 1, 2, 0)
    }

    /// Loop-free with no isolated b-edge: type (s, s/2, 0, 0, 0).
    pub fn is_silhouette_shaped(&self) -> bool {
        let t = self.comb_type();
        self.is_cyclically_reduced() && t.l2 == 0 && t.l3 == 0 && t.k3 == 0
    }

    /// Isomorphism type of the subgroup this rooted graph represents. An
    /// unrooted graph is treated as cyclically reduced.
    pub fn iso_type(&self) -> Result<IsoType, GraphError> {
        self.iso_type_with(RankConvention::Completed)
    }

    pub fn iso_type_with(&self, conv: RankConvention) -> Result<IsoType, GraphError> {
        let t = self.comb_type();
        if self.n == 1 {
            let v = self.labels().next().expect("one vertex");
            return Ok(IsoType::new(self.has_a_loop(v) as u32, self.has_b_loop(v) as u32, 0));
        }
        let phi = t.phi();
        let six_r = match self.root_defect() {
            RootDefect::None => 6 + phi,
            RootDefect::MissingB => 2 + phi,
            RootDefect::MissingA => match conv {
                RankConvention::Completed => 3 + phi,
                RankConvention::TwoThirds => 4 + phi,
            },
            RootDefect::MissingBoth => return Err(GraphError::BareRoot(self.n)),
        };
        if six_r < 0 || six_r % 6 != 0 {
            return Err(GraphError::NonIntegralRank(six_r));
        }
        Ok(IsoType::new(t.l2, t.l3, (six_r / 6) as u32))
    }

    /// Isomorphism type computed from the first Betti number of the graph
    /// obtained by collapsing every b-orbit to a point.
    pub fn iso_type_via_collapse(&self) -> Result<IsoType, GraphError> {
        let size = self.slots.len() + 1;
        let mut uf = UnionFind::new(size);
        for v in self.labels() {
            if let Some(w) = self.b(v) {
                uf.union(v as usize, w as usize);
            }
        }
        let nodes: BTreeSet<usize> = self.labels().map(|v| uf.find(v as usize)).collect();
        let mut edges = 0i64;
        let mut quotient = UnionFind::new(size);
        for (v, w) in self.isolated_a_edges() {
            edges += 1;
            let (x, y) = (uf.find(v as usize), uf.find(w as usize));
            quotient.union(x, y);
        }
        let comps: BTreeSet<usize> = nodes.iter().map(|&x| quotient.find(x)).collect();
        if comps.len() != 1 {
            return Err(GraphError::DisconnectedQuotient);
        }
        let r = edges - nodes.len() as i64 + 1;
        let t = self.comb_type();
        Ok(IsoType::new(t.l2, t.l3, r as u32))
    }

    /// Applies an injective relabeling.
    pub fn relabel_with(&self, f: impl Fn(Label) -> Label) -> Self {
        let mut g = Self::empty();
        for v in self.labels() {
            g.add_vertex(f(v));
        }
        for v in self.labels() {
            let s = self.slot(v).expect("present");
            let fv = f(v);
            let t = g.slot_mut(fv);
            t.a = s.a.map(&f);
            t.b = s.b.map(&f);
            t.b_inv = s.b_inv.map(&f);
        }
        g.root = self.root.map(&f);
        g
    }

    /// Order-preserving relabeling onto {1..n}.
    pub fn relab(&self) -> Self {
        if self.is_labeled() {
            return self.clone();
        }
        let mut map = vec![0; self.slots.len() + 1];
        for (i, v) in self.labels().enumerate() {
            map[v as usize] = i as Label + 1;
        }
        self.relabel_with(|v| map[v as usize])
    }

    /// Relabels a labeled graph by `perm`, where `perm[v-1]` is the new label of `v`.
    pub fn permuted(&self, perm: &[Label]) -> Self {
        assert_eq!(perm.len(), self.slots.len());
        self.relabel_with(|v| perm[v as usize - 1])
    }

    /// Breadth-first relabeling from the root, exploring a then b then b⁻¹.
    pub fn bfs_relabel(&self) -> Self {
        let root = self.root.expect("bfs relabeling needs a root");
        let mut map = vec![0; self.slots.len() + 1];
        let mut next = 1;
        let mut queue = VecDeque::from([root]);
        map[root as usize] = next;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbours(v) {
                if map[w as usize] == 0 {
                    next += 1;
                    map[w as usize] = next;
                    queue.push_back(w);
                }
            }
        }
        assert_eq!(next as usize, self.n, "bfs relabeling needs a connected graph");
        self.relabel_with(|v| map[v as usize])
    }
}

/// Chainable constructor; mentioned vertices are created on the fly.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    g: LabeledGraph,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, v: Label) -> Self {
        self.g.add_vertex(v);
        self
    }

    pub fn vertices(mut self, n: Label) -> Self {
        for v in 1..=n {
            self.g.add_vertex(v);
        }
        self
    }

    pub fn a_loop(self, v: Label) -> Self {
        self.a_edge(v, v)
    }

    pub fn a_edge(mut self, v: Label, w: Label) -> Self {
        self.g.add_vertex(v);
        self.g.add_vertex(w);
        self.g.set_a(v, w);
        self
    }

    /// Sets a(v)=w only, for constructing invalid inputs.
    pub fn a_raw(mut self, v: Label, w: Label) -> Self {
        self.g.add_vertex(v);
        self.g.add_vertex(w);
        self.g.set_a_raw(v, w);
        self
    }

    pub fn b_loop(self, v: Label) -> Self {
        self.b_edge(v, v)
    }

    pub fn b_edge(mut self, v: Label, w: Label) -> Self {
        self.g.add_vertex(v);
        self.g.add_vertex(w);
        self.g.set_b(v, w);
        self
    }

    pub fn b_triangle(self, v: Label, w: Label, u: Label) -> Self {
        self.b_edge(v, w).b_edge(w, u).b_edge(u, v)
    }

    pub fn root(mut self, v: Label) -> Self {
        self.g.add_vertex(v);
        self.g.root = Some(v);
        self
    }

    /// Validates everything except the label-set shape.
    pub fn build(self) -> Result<LabeledGraph, GraphError> {
        self.g.validate_quasi().map_err(GraphError::Invalid)?;
        Ok(self.g)
    }

    pub fn build_unchecked(self) -> LabeledGraph {
        self.g
    }
}

/// Union-find over `0..n` with path halving.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn push(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i);
        i
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined.
    pub(crate) fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[ry] = rx;
        true
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn sample_h() -> LabeledGraph {
        GraphBuilder::new()
            .b_triangle(1, 2, 3)
            .b_triangle(4, 5, 6)
            .a_edge(1, 4)
            .a_edge(2, 5)
            .a_edge(3, 6)
            .root(1)
            .build()
            .unwrap()
    }

    pub(crate) fn sample_k() -> LabeledGraph {
        GraphBuilder::new()
            .b_triangle(1, 2, 3)
            .a_edge(1, 4)
            .a_edge(5, 3)
            .a_edge(2, 6)
            .b_edge(4, 5)
            .b_loop(6)
            .root(1)
            .build()
            .unwrap()
    }

    #[test]
    fn delta_graphs_are_valid() {
        for g in [
            LabeledGraph::delta1(),
            LabeledGraph::delta2(),
            LabeledGraph::delta3(),
            LabeledGraph::delta4(),
        ] {
            assert_eq!(g.validate(), Ok(()));
            assert!(g.is_cyclically_reduced());
        }
        assert_eq!(LabeledGraph::delta1().comb_type(), CombType::new(1, 0, 0, 1, 1));
        assert_eq!(LabeledGraph::delta4().comb_type(), CombType::new(2, 1, 0, 0, 2));
        assert!(LabeledGraph::delta2().is_delta2_shaped());
        assert!(LabeledGraph::delta3().is_delta3_shaped());
    }

    #[test]
    fn two_cycle_in_b_is_not_closed() {
        let g = GraphBuilder::new().b_edge(1, 2).b_edge(2, 1).build_unchecked();
        let errs = g.validate().unwrap_err();
        assert!(errs.contains(&Violation::NonClosedBOrbit(1)), "{errs:?}");
    }

    #[test]
    fn trivial_graph_is_valid_but_not_cyclically_reduced() {
        let g = LabeledGraph::trivial();
        assert_eq!(g.validate(), Ok(()));
        assert!(!g.is_cyclically_reduced());
        assert_eq!(g.iso_type(), Ok(IsoType::new(0, 0, 0)));
        assert!(g.unrooted().validate().is_err());
    }

    #[test]
    fn violations_are_reported() {
        let g = GraphBuilder::new().a_raw(1, 2).b_edge(1, 2).vertex(2).build_unchecked();
        let errs = g.validate().unwrap_err();
        assert!(errs.contains(&Violation::AsymmetricA { v: 1, w: 2 }));
        assert!(errs.contains(&Violation::NotAdjacent { v: 2, letter: Gen::A }));

        let g = GraphBuilder::new().b_edge(1, 3).b_edge(2, 3).a_edge(1, 2).a_loop(3).build_unchecked();
        assert!(g
            .validate()
            .unwrap_err()
            .contains(&Violation::NonInjectiveB { target: 3, u: 1, v: 2 }));

        let g = LabeledGraph::delta1().relabel_with(|_| 5);
        assert_eq!(g.validate(), Err(vec![Violation::NotLabeled(1)]));
        assert_eq!(g.validate_quasi(), Ok(()));

        let mut g = LabeledGraph::delta1();
        g.add_vertex(2);
        g.set_a(2, 2);
        g.set_b(2, 2);
        assert_eq!(g.validate(), Err(vec![Violation::Disconnected(2)]));
    }

    #[test]
    fn named_graph_types() {
        let h = sample_h();
        assert_eq!(h.comb_type(), CombType::new(6, 3, 0, 0, 0));
        assert_eq!(h.iso_type(), Ok(IsoType::new(0, 0, 2)));
        assert_eq!(h.iso_type_via_collapse(), Ok(IsoType::new(0, 0, 2)));
        let k = sample_k();
        assert_eq!(k.comb_type(), CombType::new(6, 3, 1, 0, 1));
        assert_eq!(k.iso_type(), k.iso_type_via_collapse());
    }

    #[test]
    fn rank_of_bab_needs_the_completed_constant() {
        // Root 1 on a triangle, with an a-edge between the other two vertices.
        let g = GraphBuilder::new().b_triangle(1, 2, 3).a_edge(2, 3).root(1).build().unwrap();
        assert_eq!(g.root_defect(), RootDefect::MissingA);
        assert_eq!(g.iso_type(), Ok(IsoType::new(0, 0, 1)));
        assert_eq!(g.iso_type_via_collapse(), Ok(IsoType::new(0, 0, 1)));
        assert_eq!(g.iso_type_with(RankConvention::TwoThirds), Err(GraphError::NonIntegralRank(7)));
    }

    #[test]
    fn size_one_table() {
        let a = GraphBuilder::new().a_loop(1).root(1).build().unwrap();
        let b = GraphBuilder::new().b_loop(1).root(1).build().unwrap();
        assert_eq!(a.iso_type(), Ok(IsoType::new(1, 0, 0)));
        assert_eq!(b.iso_type(), Ok(IsoType::new(0, 1, 0)));
        assert_eq!(LabeledGraph::delta1().with_root(1).iso_type(), Ok(IsoType::new(1, 1, 0)));
        for g in [a, b, LabeledGraph::delta1()] {
            assert_eq!(g.iso_type(), g.iso_type_via_collapse());
        }
    }

    #[test]
    fn collapse_of_aba() {
        let g = GraphBuilder::new().a_edge(1, 2).b_loop(2).root(1).build().unwrap();
        assert_eq!(g.iso_type_via_collapse(), Ok(IsoType::new(0, 1, 0)));
        assert_eq!(g.iso_type(), Ok(IsoType::new(0, 1, 0)));
    }

    #[test]
    fn relab_preserves_order() {
        let g = GraphBuilder::new().a_edge(4, 9).b_triangle(4, 7, 9).a_loop(7).build().unwrap();
        let r = g.relab();
        let expect = GraphBuilder::new().a_edge(1, 3).b_triangle(1, 2, 3).a_loop(2).build().unwrap();
        assert_eq!(r, expect);
        assert_eq!(r.relab(), r);
        let q = GraphBuilder::new().a_edge(4, 5).b_edge(4, 5).build().unwrap();
        assert_eq!(q.relab(), LabeledGraph::delta2());
    }

    #[test]
    fn remove_vertex_breaks_triangle_into_edge() {
        let mut g = GraphBuilder::new().b_triangle(1, 2, 3).build_unchecked();
        g.remove_vertex(2);
        assert_eq!(g.b(3), Some(1));
        assert_eq!(g.b(1), None);
        assert_eq!(g.b_kind(3), Some(BKind::Tail(1)));
        assert_eq!(g.b_kind(1), Some(BKind::Head(3)));
        g.remove_vertex(3);
        assert_eq!(g.max_label(), 1);
        assert_eq!(g.n(), 1);
    }

    #[test]
    fn phi_vanishes_on_move_deltas() {
        let deltas = [
            [-1, -1, 0, 1, -1],
            [-1, 0, 1, -1, 0],
            [-2, -1, -1, 0, 0],
            [-2, -1, -1, 0, 0],
            [-1, 0, -1, -1, 1],
        ];
        for d in deltas {
            let phi = d[0] - 2 * d[2] - 3 * d[3] - 4 * d[4];
            assert_eq!(phi, 0, "{d:?}");
        }
    }

    #[test]
    fn type_parsing() {
        assert_eq!("2,1,1,0,0".parse::<CombType>(), Ok(CombType::new(2, 1, 1, 0, 0)));
        assert_eq!("(6, 3,0,0,0)".parse::<CombType>(), Ok(CombType::new(6, 3, 0, 0, 0)));
        assert!("1,2".parse::<CombType>().is_err());
        assert_eq!("0,0,2".parse::<IsoType>(), Ok(IsoType::new(0, 0, 2)));
        assert_eq!(CombType::new(6, 3, 1, 0, 1).to_string(), "(6,3,1,0,1)");
    }
}
