//! Stallings graphs of finitely generated subgroups, built by folding a
//! bouquet of geodesic loops, closing b-triangles and pruning.

use std::collections::VecDeque;

use crate::graph::{Label, LabeledGraph, UnionFind};
use crate::words::{normalize, GeodesicWord, Letter, Word};

/// Working graph with vertex merging.
struct Folder {
    uf: UnionFind,
    a: Vec<Option<usize>>,
    b: Vec<Option<usize>>,
    b_inv: Vec<Option<usize>>,
    alive: Vec<bool>,
    pending: VecDeque<(usize, usize)>,
}

impl Folder {
    fn new() -> Self {
        Folder {
            uf: UnionFind::new(0),
            a: Vec::new(),
            b: Vec::new(),
            b_inv: Vec::new(),
            alive: Vec::new(),
            pending: VecDeque::new(),
        }
    }

    fn add_vertex(&mut self) -> usize {
        let id = self.a.len();
        self.a.push(None);
        self.b.push(None);
        self.b_inv.push(None);
        self.alive.push(true);
        self.uf.push();
        id
    }

    fn find(&mut self, x: usize) -> usize {
        self.uf.find(x)
    }

    fn rep(&mut self, x: Option<usize>) -> Option<usize> {
        x.map(|y| self.uf.find(y))
    }

    fn add_a(&mut self, v: usize, w: usize) {
        let (v, w) = (self.find(v), self.find(w));
        for (x, y) in [(v, w), (w, v)] {
            match self.rep(self.a[x]) {
                Some(t) if t != y => self.pending.push_back((t, y)),
                Some(_) => {}
                None => self.a[x] = Some(y),
            }
        }
    }

    fn add_b(&mut self, v: usize, w: usize) {
        let (v, w) = (self.find(v), self.find(w));
        match self.rep(self.b[v]) {
            Some(t) if t != w => self.pending.push_back((t, w)),
            Some(_) => {}
            None => self.b[v] = Some(w),
        }
        match self.rep(self.b_inv[w]) {
            Some(t) if t != v => self.pending.push_back((t, v)),
            Some(_) => {}
            None => self.b_inv[w] = Some(v),
        }
    }

    fn merge(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return;
        }
        self.uf.union(rx, ry);
        let (keep, gone) = (rx, ry);
        self.alive[gone] = false;
        for table in 0..3 {
            let get = |f: &Folder, i: usize| match table {
                0 => f.a[i],
                1 => f.b[i],
                _ => f.b_inv[i],
            };
            let (tk, tg) = (get(self, keep), get(self, gone));
            let merged = match (tk, tg) {
                (Some(p), Some(q)) => {
                    self.pending.push_back((p, q));
                    Some(p)
                }
                (p, q) => p.or(q),
            };
            match table {
                0 => self.a[keep] = merged,
                1 => self.b[keep] = merged,
                _ => self.b_inv[keep] = merged,
            }
        }
    }

    fn drain(&mut self) {
        while let Some((x, y)) = self.pending.pop_front() {
            self.merge(x, y);
        }
    }

    /// One pass of b-triangle closure; returns whether anything changed.
    fn close_triangles(&mut self) -> bool {
        let mut changed = false;
        for v in 0..self.alive.len() {
            if !self.alive[v] {
                continue;
            }
            let Some(w) = self.rep(self.b[v]) else { continue };
            let Some(u) = self.rep(self.b[w]) else { continue };
            if self.rep(self.b[u]) != Some(v) {
                self.add_b(u, v);
                self.drain();
                changed = true;
            }
        }
        changed
    }

    fn live(&mut self) -> Vec<usize> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }
}

/// Builds Γ(⟨gens⟩), canonically labeled by breadth-first order from the root.
pub fn build_stallings(gens: &[Word]) -> LabeledGraph {
    let mut f = Folder::new();
    let root = f.add_vertex();
    for g in gens {
        let w = normalize(g);
        let letters = w.letters();
        let mut cur = root;
        for (i, &l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() { root } else { f.add_vertex() };
            match l {
                Letter::A => f.add_a(cur, next),
                Letter::B => f.add_b(cur, next),
                Letter::Bi => f.add_b(next, cur),
            }
            cur = next;
        }
        f.drain();
    }
    loop {
        f.drain();
        if !f.close_triangles() {
            break;
        }
    }

    // Resolve to representatives and prune.
    let root = f.find(root);
    let live = f.live();
    let mut id = vec![usize::MAX; f.alive.len()];
    for (i, &v) in live.iter().enumerate() {
        id[v] = i;
    }
    let mut g = LabeledGraph::empty();
    for i in 0..live.len() {
        g.add_vertex(i as Label + 1);
    }
    for &v in &live {
        let lv = id[v] as Label + 1;
        if let Some(t) = f.rep(f.a[v]) {
            g.set_a_raw(lv, id[t] as Label + 1);
        }
        if let Some(t) = f.rep(f.b[v]) {
            g.set_b(lv, id[t] as Label + 1);
        }
    }
    let root_label = id[root] as Label + 1;
    g.set_root(Some(root_label));
    prune(&mut g);
    g.bfs_relabel()
}

/// Repeatedly deletes non-root vertices missing a letter.
fn prune(g: &mut LabeledGraph) {
    let root = g.root();
    let mut queue: Vec<Label> = g.labels().collect();
    while let Some(v) = queue.pop() {
        if Some(v) == root || !g.contains(v) {
            continue;
        }
        if g.is_a_adjacent(v) && g.is_b_adjacent(v) {
            continue;
        }
        let nbrs: Vec<Label> = [g.a(v), g.b(v), g.b_inv(v)].into_iter().flatten().collect();
        g.remove_vertex(v);
        queue.extend(nbrs.into_iter().filter(|&w| w != v));
    }
}

/// One step along a letter, if defined.
pub fn step(g: &LabeledGraph, v: Label, l: Letter) -> Option<Label> {
    match l {
        Letter::A => g.a(v),
        Letter::B => g.b(v),
        Letter::Bi => g.b_inv(v),
    }
}

/// Endpoint of reading `letters` from `v`, if every step is defined.
pub fn read(g: &LabeledGraph, v: Label, letters: &[Letter]) -> Option<Label> {
    letters.iter().try_fold(v, |x, &l| step(g, x, l))
}

/// Whether `w` lies in the subgroup represented by the rooted graph `g`.
pub fn member(g: &LabeledGraph, w: &Word) -> bool {
    let root = g.root().expect("membership needs a rooted graph");
    read(g, root, normalize(w).letters()) == Some(root)
}

/// A generating set read off a spanning tree: one word per edge outside the
/// tree, loops included.
pub fn generators(g: &LabeledGraph) -> Vec<GeodesicWord> {
    let root = g.root().expect("rooted graph");
    let mut path: Vec<Option<Word>> = vec![None; g.max_label() as usize + 1];
    let mut tree_edges = std::collections::HashSet::new();
    path[root as usize] = Some(Word::default());
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let pv = path[v as usize].clone().unwrap();
        for l in [Letter::A, Letter::B, Letter::Bi] {
            if let Some(w) = step(g, v, l) {
                if path[w as usize].is_none() {
                    path[w as usize] = Some(pv.concat(&Word(vec![l])));
                    tree_edges.insert(edge_key(v, w, l));
                    queue.push_back(w);
                }
            }
        }
    }
    let mut out = Vec::new();
    for v in g.labels() {
        let pv = path[v as usize].clone().expect("connected");
        for l in [Letter::A, Letter::B] {
            let Some(w) = step(g, v, l) else { continue };
            if l == Letter::A && w < v {
                continue;
            }
            if tree_edges.contains(&edge_key(v, w, l)) {
                continue;
            }
            let pw = path[w as usize].clone().expect("connected");
            let word = pv.concat(&Word(vec![l])).concat(&pw.inverse());
            let nf = normalize(&word);
            if !nf.is_empty() {
                out.push(nf);
            }
        }
    }
    out
}

/// Undirected key for an edge traversed along `l` from `v` to `w`.
fn edge_key(v: Label, w: Label, l: Letter) -> (Label, Label, bool) {
    match l {
        Letter::A => (v.min(w), v.max(w), true),
        Letter::B => (v, w, false),
        Letter::Bi => (w, v, false),
    }
}
