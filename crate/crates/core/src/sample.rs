//! Uniform random generation: silhouette graphs, cyclically reduced graphs
//! of a given type, rooted graphs and subgroups of a given isomorphism type.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::count::{factorial, Count, CountCache, CountError, Family, IsoMode};
use crate::graph::{CombType, IsoType, Label, LabeledGraph};
use crate::moves::{a_edge_of_rank, invert_in_place, Alpha, Dir, Move, MoveKind, Sign};

pub const DEFAULT_REJECTION_CAP: u32 = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("size {0} is not a positive multiple of 6")]
    NotMultipleOfSix(u32),
    #[error("no graph of type {0}")]
    EmptyType(CombType),
    #[error("no rooted graph of type {0}")]
    EmptyRootedType(CombType),
    #[error("no subgroup of size {n} and isomorphism type {sigma}")]
    EmptyIsoType { n: u32, sigma: IsoType },
    #[error("size must be positive")]
    ZeroSize,
    #[error("gave up after {0} rejected draws")]
    RejectionCap(u32),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Deterministic random source. Every draw goes through `next_u64`, so the
/// output sequence only depends on the seed.
#[derive(Clone, Debug)]
pub struct Rng {
    inner: ChaCha8Rng,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream keyed by `seed` and a path of integers.
    pub fn child(seed: u64, keys: &[u64]) -> Self {
        let mut state = splitmix(seed);
        for &k in keys {
            state = splitmix(state ^ splitmix(k.wrapping_add(0x517c_c1b7_2722_0a95)));
        }
        let mut bytes = [0u8; 32];
        for (i, chunk) in bytes.chunks_mut(8).enumerate() {
            state = splitmix(state.wrapping_add(i as u64));
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        Rng { inner: ChaCha8Rng::from_seed(bytes) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in [0, k).
    pub fn below(&mut self, k: u64) -> u64 {
        assert!(k > 0, "empty range");
        let zone = u64::MAX - u64::MAX % k;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % k;
            }
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Uniform integer in [0, k) for an arbitrary-precision bound.
    pub fn below_big(&mut self, k: &BigUint) -> BigUint {
        assert!(!k.is_zero(), "empty range");
        if let Some(small) = k.to_u64() {
            return BigUint::from(self.below(small));
        }
        let bits = k.bits();
        let words = bits.div_ceil(64) as usize;
        let excess = words as u64 * 64 - bits;
        loop {
            let mut digits: Vec<u64> = (0..words).map(|_| self.next_u64()).collect();
            *digits.last_mut().unwrap() >>= excess;
            let x = BigUint::from_slice(
                &digits.iter().flat_map(|d| [*d as u32, (*d >> 32) as u32]).collect::<Vec<_>>(),
            );
            if &x < k {
                return x;
            }
        }
    }

    /// Index drawn with probability proportional to `weights`.
    pub fn weighted(&mut self, weights: &[Count]) -> usize {
        let total: Count = weights.iter().sum();
        let mut p = self.below_big(&total);
        for (i, w) in weights.iter().enumerate() {
            if &p < w {
                return i;
            }
            p -= w;
        }
        unreachable!("p below total")
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.index(i + 1);
            xs.swap(i, j);
        }
    }

    /// Uniform permutation of 1..=n as a vector (entry i is the image of i+1).
    pub fn permutation(&mut self, n: usize) -> Vec<Label> {
        let mut p: Vec<Label> = (1..=n as Label).collect();
        self.shuffle(&mut p);
        p
    }
}

/// A pair of fixpoint-free permutations of orders 2 and 3 drawn uniformly,
/// as a possibly disconnected graph on [n].
pub fn raw_pair(n: u32, rng: &mut Rng) -> Result<LabeledGraph, SampleError> {
    if n == 0 || !n.is_multiple_of(6) {
        return Err(SampleError::NotMultipleOfSix(n));
    }
    let p = rng.permutation(n as usize);
    let q = rng.permutation(n as usize);
    let mut g = LabeledGraph::empty();
    for v in 1..=n {
        g.add_vertex(v);
    }
    for pair in p.chunks(2) {
        g.set_a(pair[0], pair[1]);
    }
    for t in q.chunks(3) {
        g.set_b(t[0], t[1]);
        g.set_b(t[1], t[2]);
        g.set_b(t[2], t[0]);
    }
    Ok(g)
}

/// Uniform labeled silhouette graph of size n, by rejection of disconnected pairs.
pub fn sample_silhouette(n: u32, rng: &mut Rng) -> Result<LabeledGraph, SampleError> {
    sample_silhouette_capped(n, rng, DEFAULT_REJECTION_CAP)
}

pub fn sample_silhouette_capped(n: u32, rng: &mut Rng, cap: u32) -> Result<LabeledGraph, SampleError> {
    for _ in 0..cap.max(1) {
        let g = raw_pair(n, rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(SampleError::RejectionCap(cap))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub from: CombType,
    pub kind: MoveKind,
}

/// Types visited by the minimal sequence of a graph to be sampled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypePath {
    pub steps: Vec<PathStep>,
    pub terminal: CombType,
}

impl TypePath {
    pub fn kinds(&self) -> Vec<MoveKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }
}

const DELTA1: CombType = CombType::new(1, 0, 0, 1, 1);
const DELTA2: CombType = CombType::new(2, 1, 1, 0, 0);
const DELTA3: CombType = CombType::new(2, 0, 1, 2, 0);

fn is_terminal(t: &CombType) -> bool {
    *t == DELTA1 || *t == DELTA2 || (t.l2 == 0 && t.l3 == 0 && t.k3 == 0)
}

pub fn build_path(cache: &CountCache, tau: &CombType, rng: &mut Rng) -> Result<TypePath, SampleError> {
    if cache.s(tau)?.is_zero() {
        return Err(SampleError::EmptyType(*tau));
    }
    let mut steps = Vec::new();
    let mut t = *tau;
    while !is_terminal(&t) {
        let kind = if t == DELTA3 {
            MoveKind::Exc
        } else if t.l3 > 0 {
            MoveKind::Lambda3
        } else if t.l2 > 0 {
            let (w21, w22) = cache.lambda2_weights(&t)?;
            if rng.weighted(&[w21, w22]) == 0 {
                MoveKind::Lambda21
            } else {
                MoveKind::Lambda22
            }
        } else {
            MoveKind::Kappa3
        };
        steps.push(PathStep { from: t, kind });
        t = t.shifted(kind.delta().expect("type-changing move")).expect("non-negative type");
    }
    Ok(TypePath { steps, terminal: t })
}

fn terminal_graph(t: &CombType, rng: &mut Rng) -> Result<LabeledGraph, SampleError> {
    if *t == DELTA1 {
        Ok(LabeledGraph::delta1())
    } else if *t == DELTA2 {
        let g = LabeledGraph::delta2();
        Ok(if rng.coin() { g } else { g.permuted(&[2, 1]) })
    } else {
        sample_silhouette(t.n, rng)
    }
}

/// Uniform labeled cyclically reduced graph of type `tau`.
pub fn sample_cyclically_reduced(cache: &CountCache, tau: &CombType, rng: &mut Rng) -> Result<LabeledGraph, SampleError> {
    let path = build_path(cache, tau, rng)?;
    let mut g = terminal_graph(&path.terminal, rng)?;
    for step in path.steps.iter().rev() {
        let fresh = g.max_label() + 1;
        let m = match step.kind {
            MoveKind::Lambda3 => {
                let loops = g.a_loops();
                Move::Lambda3 { v: fresh, w: loops[rng.index(loops.len())] }
            }
            MoveKind::Lambda21 => {
                let edges = g.isolated_b_edges();
                Move::Lambda21 { v: fresh, w2: edges[rng.index(edges.len())].0 }
            }
            MoveKind::Lambda22 => {
                let loops = g.a_loops();
                let w2 = loops[rng.index(loops.len())];
                let dir = if rng.coin() { Dir::Out } else { Dir::In };
                Move::Lambda22 { v: fresh, w: fresh + 1, w2, dir }
            }
            MoveKind::Kappa3 => {
                let k2 = g.comb_type().k2;
                let rank = rng.below(k2 as u64) as u32 + 1;
                let sign = if rng.coin() { Sign::Minus } else { Sign::Plus };
                debug_assert!(a_edge_of_rank(&g, rank).is_some());
                Move::Kappa3 { v: fresh, w: fresh + 1, rank, sign }
            }
            MoveKind::Exc => Move::Exc { w: fresh },
            MoveKind::Unroot => unreachable!("paths never unroot"),
        };
        invert_in_place(&mut g, m).expect("inverse move is valid by construction");
    }
    let perm = rng.permutation(g.n());
    Ok(g.permuted(&perm))
}

/// Deletes the `index`-th a-loop (or b-loop) by label order and roots there.
fn root_at_deleted_loop(mut g: LabeledGraph, alpha: Alpha, index: usize) -> LabeledGraph {
    let loops = match alpha {
        Alpha::A => g.a_loops(),
        Alpha::B => g.b_loops(),
        Alpha::None => unreachable!(),
    };
    let v = loops[index];
    invert_in_place(&mut g, Move::Unroot { alpha, v }).expect("loop present");
    g
}

fn rooted_from_family(
    cache: &CountCache,
    family: Family,
    source: &CombType,
    rng: &mut Rng,
) -> Result<LabeledGraph, SampleError> {
    let g = sample_cyclically_reduced(cache, source, rng)?;
    Ok(match family {
        Family::Rooted => {
            let v = rng.below(g.n() as u64) as Label + 1;
            g.with_root(v)
        }
        Family::MissingA => {
            let i = rng.index(source.l2 as usize);
            root_at_deleted_loop(g, Alpha::A, i)
        }
        Family::MissingB => {
            let i = rng.index(source.l3 as usize);
            root_at_deleted_loop(g, Alpha::B, i)
        }
    })
}

/// Uniform labeled rooted reduced graph of type `tau`.
pub fn sample_rooted(cache: &CountCache, tau: &CombType, rng: &mut Rng) -> Result<LabeledGraph, SampleError> {
    let [n, k2, k3, l2, l3] = tau.as_array();
    let plus_a = CombType::from_signed([n, k2, k3, l2 + 1, l3]).unwrap();
    let plus_b = CombType::from_signed([n, k2, k3, l2, l3 + 1]).unwrap();
    let weights = [
        cache.s(tau)? * n as u64,
        cache.s(&plus_a)? * (l2 + 1) as u64,
        cache.s(&plus_b)? * (l3 + 1) as u64,
    ];
    if weights.iter().all(Zero::is_zero) {
        return Err(SampleError::EmptyRootedType(*tau));
    }
    match rng.weighted(&weights) {
        0 => rooted_from_family(cache, Family::Rooted, tau, rng),
        1 => rooted_from_family(cache, Family::MissingA, &plus_a, rng),
        _ => rooted_from_family(cache, Family::MissingB, &plus_b, rng),
    }
}

/// Uniform subgroup of size n and isomorphism type σ, as a labeled rooted graph.
pub fn sample_by_iso(
    cache: &CountCache,
    n: u32,
    sigma: &IsoType,
    mode: IsoMode,
    rng: &mut Rng,
) -> Result<LabeledGraph, SampleError> {
    let families = cache.iso_families(n, sigma, mode)?;
    if families.is_empty() {
        return Err(SampleError::EmptyIsoType { n, sigma: *sigma });
    }
    let weights: Vec<Count> = families.iter().map(|f| f.labeled.clone()).collect();
    let f = &families[rng.weighted(&weights)];
    rooted_from_family(cache, f.family, &f.source, rng)
}

/// Draws uniform (involution, b-structure) pairs on [n]: the involution's
/// fixed points are a-loops; the b-structure is a permutation with cycles of
/// length 1 and 3 plus directed isolated edges.
#[derive(Clone, Debug)]
pub struct RawGraphSampler {
    n: u32,
    /// Weight of j transpositions.
    involutions: Vec<Count>,
    /// (triangles, edges, weight).
    b_structures: Vec<(u32, u32, Count)>,
    b_weights: Vec<Count>,
}

impl RawGraphSampler {
    pub fn new(n: u32) -> Result<Self, SampleError> {
        if n == 0 {
            return Err(SampleError::ZeroSize);
        }
        let f = factorial(n);
        let pow = |b: u64, e: u32| (0..e).fold(Count::from(1u32), |acc, _| acc * b);
        let involutions = (0..=n / 2)
            .map(|j| &f / (pow(2, j) * factorial(j) * factorial(n - 2 * j)))
            .collect();
        let mut b_structures = Vec::new();
        for t in 0..=n / 3 {
            for e in 0..=(n - 3 * t) / 2 {
                let l = n - 3 * t - 2 * e;
                let w = &f / (pow(3, t) * factorial(t) * factorial(e) * factorial(l));
                b_structures.push((t, e, w));
            }
        }
        let b_weights = b_structures.iter().map(|x| x.2.clone()).collect();
        Ok(RawGraphSampler { n, involutions, b_structures, b_weights })
    }

    /// A uniform pair, connected or not.
    pub fn draw(&self, rng: &mut Rng) -> LabeledGraph {
        let n = self.n as usize;
        let mut g = LabeledGraph::empty();
        for v in 1..=self.n {
            g.add_vertex(v);
        }
        let j = rng.weighted(&self.involutions);
        let p = rng.permutation(n);
        for (i, &v) in p.iter().enumerate() {
            if i < 2 * j {
                if i % 2 == 1 {
                    g.set_a(p[i - 1], v);
                }
            } else {
                g.set_a(v, v);
            }
        }
        let (t, e, _) = self.b_structures[rng.weighted(&self.b_weights)];
        let (t, e) = (t as usize, e as usize);
        let q = rng.permutation(n);
        for c in q[..3 * t].chunks(3) {
            g.set_b(c[0], c[1]);
            g.set_b(c[1], c[2]);
            g.set_b(c[2], c[0]);
        }
        for c in q[3 * t..3 * t + 2 * e].chunks(2) {
            g.set_b(c[0], c[1]);
        }
        for &v in &q[3 * t + 2 * e..] {
            g.set_b(v, v);
        }
        g
    }

    /// A uniform cyclically reduced graph of size n, by rejection.
    pub fn draw_connected(&self, rng: &mut Rng, cap: u32) -> Result<LabeledGraph, SampleError> {
        for _ in 0..cap.max(1) {
            let g = self.draw(rng);
            if g.is_connected() {
                return Ok(g);
            }
        }
        Err(SampleError::RejectionCap(cap))
    }
}

/// Uniform cyclically reduced graph of size n: the type is that of a uniform
/// connected pair, and the graph is redrawn through the type-path sampler.
pub fn sample_of_size(
    cache: &CountCache,
    raw: &RawGraphSampler,
    rng: &mut Rng,
) -> Result<LabeledGraph, SampleError> {
    let tau = raw.draw_connected(rng, DEFAULT_REJECTION_CAP)?.comb_type();
    sample_cyclically_reduced(cache, &tau, rng)
}
