//! Exhaustive enumeration of small labeled graphs, used as ground truth.

use crate::graph::{Label, LabeledGraph};

const NONE: u8 = u8::MAX;

/// Partial involutions covering exactly `verts` (fixed points are a-loops),
/// as partner arrays of length n.
fn involutions_on(n: usize, verts: &[u8]) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, free: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let Some(&i) = free.first() else {
            out.push(cur.clone());
            return;
        };
        free.remove(0);
        cur[i as usize] = i;
        go(cur, free, out);
        for k in 0..free.len() {
            let j = free.remove(k);
            cur[i as usize] = j;
            cur[j as usize] = i;
            go(cur, free, out);
            cur[j as usize] = NONE;
            free.insert(k, j);
        }
        cur[i as usize] = NONE;
        free.insert(0, i);
    }
    let mut out = Vec::new();
    go(&mut vec![NONE; n], &mut verts.to_vec(), &mut out);
    out
}

/// b-structures covering exactly `verts`: every vertex is a b-loop, one
/// end of a directed isolated edge, or on an oriented triangle. Stored as
/// successor arrays.
fn b_structures_on(n: usize, verts: &[u8]) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, free: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let Some(&i) = free.first() else {
            out.push(cur.clone());
            return;
        };
        free.remove(0);
        let iu = i as usize;
        cur[iu] = i;
        go(cur, free, out);
        cur[iu] = NONE;
        for k in 0..free.len() {
            let j = free.remove(k);
            cur[iu] = j;
            go(cur, free, out);
            cur[iu] = NONE;
            cur[j as usize] = i;
            go(cur, free, out);
            cur[j as usize] = NONE;
            for m in k..free.len() {
                let l = free.remove(m);
                for (x, y) in [(j, l), (l, j)] {
                    cur[iu] = x;
                    cur[x as usize] = y;
                    cur[y as usize] = i;
                    go(cur, free, out);
                    cur[x as usize] = NONE;
                    cur[y as usize] = NONE;
                }
                cur[iu] = NONE;
                free.insert(m, l);
            }
            free.insert(k, j);
        }
        free.insert(0, i);
    }
    let mut out = Vec::new();
    go(&mut vec![NONE; n], &mut verts.to_vec(), &mut out);
    out
}

fn connected(a: &[u8], b: &[u8]) -> bool {
    let n = a.len();
    let mut parent = [0u8; 16];
    for (i, p) in parent.iter_mut().enumerate().take(n) {
        *p = i as u8;
    }
    fn find(p: &mut [u8; 16], mut x: u8) -> u8 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let mut comps = n;
    for i in 0..n {
        for t in [a[i], b[i]] {
            if t != NONE {
                let (x, y) = (find(&mut parent, i as u8), find(&mut parent, t));
                if x != y {
                    parent[y as usize] = x;
                    comps -= 1;
                }
            }
        }
    }
    comps == 1
}

fn assemble(a: &[u8], b: &[u8], root: Option<Label>) -> LabeledGraph {
    let mut g = LabeledGraph::empty();
    for v in 1..=a.len() as Label {
        g.add_vertex(v);
    }
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        let v = i as Label + 1;
        if x != NONE {
            g.set_a_raw(v, x as Label + 1);
        }
        if y != NONE {
            g.set_b(v, y as Label + 1);
        }
    }
    g.set_root(root);
    g
}

/// Streams every labeled cyclically reduced graph on [n] exactly once.
pub struct CyclicallyReduced {
    a: Vec<Vec<u8>>,
    b: Vec<Vec<u8>>,
    i: usize,
    j: usize,
}

pub fn enum_cyclically_reduced(n: usize) -> CyclicallyReduced {
    assert!((1..=15).contains(&n), "enumeration is for small sizes");
    let verts: Vec<u8> = (0..n as u8).collect();
    CyclicallyReduced { a: involutions_on(n, &verts), b: b_structures_on(n, &verts), i: 0, j: 0 }
}

impl Iterator for CyclicallyReduced {
    type Item = LabeledGraph;

    fn next(&mut self) -> Option<LabeledGraph> {
        while self.i < self.a.len() {
            let (i, j) = (self.i, self.j);
            self.j += 1;
            if self.j == self.b.len() {
                self.j = 0;
                self.i += 1;
            }
            if connected(&self.a[i], &self.b[j]) {
                return Some(assemble(&self.a[i], &self.b[j], None));
            }
        }
        None
    }
}

/// Streams every labeled rooted reduced graph on [n] exactly once. For each
/// root, the a-structure and the b-structure each either cover the root or
/// leave it bare.
pub struct Rooted {
    n: usize,
    include_trivial: bool,
    full_a: Vec<Vec<u8>>,
    full_b: Vec<Vec<u8>>,
    root: usize,
    a: Vec<Vec<u8>>,
    b: Vec<Vec<u8>>,
    /// Number of leading entries of `a` and `b` that cover the root.
    a_full: usize,
    b_full: usize,
    i: usize,
    j: usize,
}

pub fn enum_rooted(n: usize, include_trivial: bool) -> Rooted {
    assert!((1..=15).contains(&n), "enumeration is for small sizes");
    let verts: Vec<u8> = (0..n as u8).collect();
    let mut it = Rooted {
        n,
        include_trivial,
        full_a: involutions_on(n, &verts),
        full_b: b_structures_on(n, &verts),
        root: 0,
        a: Vec::new(),
        b: Vec::new(),
        a_full: 0,
        b_full: 0,
        i: 0,
        j: 0,
    };
    it.load_root();
    it
}

impl Rooted {
    fn load_root(&mut self) {
        let rest: Vec<u8> = (0..self.n as u8).filter(|&v| v as usize != self.root).collect();
        self.a = self.full_a.clone();
        self.a_full = self.a.len();
        self.a.extend(involutions_on(self.n, &rest));
        self.b = self.full_b.clone();
        self.b_full = self.b.len();
        self.b.extend(b_structures_on(self.n, &rest));
        self.i = 0;
        self.j = 0;
    }
}

impl Iterator for Rooted {
    type Item = LabeledGraph;

    fn next(&mut self) -> Option<LabeledGraph> {
        loop {
            if self.i == self.a.len() {
                self.root += 1;
                if self.root == self.n {
                    return None;
                }
                self.load_root();
            }
            let (i, j) = (self.i, self.j);
            self.j += 1;
            if self.j == self.b.len() {
                self.j = 0;
                self.i += 1;
            }
            let bare = i >= self.a_full && j >= self.b_full;
            let ok = if bare {
                self.n == 1 && self.include_trivial
            } else {
                connected(&self.a[i], &self.b[j])
            };
            if ok {
                return Some(assemble(&self.a[i], &self.b[j], Some(self.root as Label + 1)));
            }
        }
    }
}

/// Number of partial involutions and b-structures on [n], for sanity checks.
pub fn structure_counts(n: usize) -> (usize, usize) {
    let verts: Vec<u8> = (0..n as u8).collect();
    (involutions_on(n, &verts).len(), b_structures_on(n, &verts).len())
}
