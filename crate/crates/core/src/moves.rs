//! λ₃, λ₂,₁, λ₂,₂, κ₃, exc and unroot moves, their inverses, minimal
//! sequences and silhouettes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{BKind, CombType, Label, LabeledGraph, RootDefect};

/// Orientation of the isolated b-edge removed by a λ₂,₂-move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    /// v → w
    Out,
    /// v ← w
    In,
}

/// Sign of a κ₃-move: `Minus` iff a(v) < a(w).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

/// Loop added when unrooting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alpha {
    A,
    B,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Lambda3 { v: Label, w: Label },
    Lambda21 { v: Label, w2: Label },
    Lambda22 { v: Label, w: Label, w2: Label, dir: Dir },
    Kappa3 { v: Label, w: Label, rank: u32, sign: Sign },
    Exc { w: Label },
    Unroot { alpha: Alpha, v: Label },
}

/// Move family, the letters of a move word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Lambda3,
    Lambda21,
    Lambda22,
    Kappa3,
    Exc,
    Unroot,
}

impl MoveKind {
    /// Change of combinatorial type; `None` for unroot.
    pub fn delta(self) -> Option<[i64; 5]> {
        match self {
            MoveKind::Lambda3 => Some([-1, -1, 0, 1, -1]),
            MoveKind::Lambda21 => Some([-1, 0, 1, -1, 0]),
            MoveKind::Lambda22 | MoveKind::Kappa3 => Some([-2, -1, -1, 0, 0]),
            MoveKind::Exc => Some([-1, 0, -1, -1, 1]),
            MoveKind::Unroot => None,
        }
    }

    fn order(self) -> u8 {
        match self {
            MoveKind::Unroot => 0,
            MoveKind::Lambda3 => 1,
            MoveKind::Lambda21 | MoveKind::Lambda22 => 2,
            MoveKind::Kappa3 => 3,
            MoveKind::Exc => 4,
        }
    }
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Lambda3 { .. } => MoveKind::Lambda3,
            Move::Lambda21 { .. } => MoveKind::Lambda21,
            Move::Lambda22 { .. } => MoveKind::Lambda22,
            Move::Kappa3 { .. } => MoveKind::Kappa3,
            Move::Exc { .. } => MoveKind::Exc,
            Move::Unroot { .. } => MoveKind::Unroot,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::Lambda3 { v, w } => write!(f, "lambda3 {v} {w}"),
            Move::Lambda21 { v, w2 } => write!(f, "lambda21 {v} {w2}"),
            Move::Lambda22 { v, w, w2, dir } => {
                let d = if dir == Dir::Out { "out" } else { "in" };
                write!(f, "lambda22 {v} {w} {w2} {d}")
            }
            Move::Kappa3 { v, w, rank, sign } => {
                let s = if sign == Sign::Minus { '-' } else { '+' };
                write!(f, "kappa3 {v} {w} {rank} {s}")
            }
            Move::Exc { w } => write!(f, "exc {w}"),
            Move::Unroot { alpha, v } => {
                let a = match alpha {
                    Alpha::A => "a",
                    Alpha::B => "b",
                    Alpha::None => "0",
                };
                write!(f, "unroot {a} {v}")
            }
        }
    }
}

impl FromStr for Move {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: Vec<&str> = s.split_whitespace().collect();
        let lab = |i: usize| -> Result<Label, String> {
            t.get(i)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| format!("bad move {s:?}"))
        };
        let bad = || format!("bad move {s:?}");
        let m = match t.first().copied() {
            Some("lambda3") if t.len() == 3 => Move::Lambda3 { v: lab(1)?, w: lab(2)? },
            Some("lambda21") if t.len() == 3 => Move::Lambda21 { v: lab(1)?, w2: lab(2)? },
            Some("lambda22") if t.len() == 5 => Move::Lambda22 {
                v: lab(1)?,
                w: lab(2)?,
                w2: lab(3)?,
                dir: match t[4] {
                    "out" => Dir::Out,
                    "in" => Dir::In,
                    _ => return Err(bad()),
                },
            },
            Some("kappa3") if t.len() == 5 => Move::Kappa3 {
                v: lab(1)?,
                w: lab(2)?,
                rank: lab(3)?,
                sign: match t[4] {
                    "-" => Sign::Minus,
                    "+" => Sign::Plus,
                    _ => return Err(bad()),
                },
            },
            Some("exc") if t.len() == 2 => Move::Exc { w: lab(1)? },
            Some("unroot") if t.len() == 3 => Move::Unroot {
                alpha: match t[1] {
                    "a" => Alpha::A,
                    "b" => Alpha::B,
                    "0" => Alpha::None,
                    _ => return Err(bad()),
                },
                v: lab(2)?,
            },
            _ => return Err(bad()),
        };
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move {mv} is not applicable: {reason}")]
    NotApplicable { mv: Move, reason: String },
    #[error("graph is not valid for inverting {0}")]
    NotValidFor(Move),
}

fn not_applicable(mv: Move, reason: impl Into<String>) -> MoveError {
    MoveError::NotApplicable { mv, reason: reason.into() }
}

/// 1-based rank of the isolated a-edge {x, y} by minimum endpoint.
pub fn a_edge_rank(g: &LabeledGraph, x: Label, y: Label) -> Option<u32> {
    if x == y || g.a(x) != Some(y) {
        return None;
    }
    let lo = x.min(y);
    let below = g.labels().take_while(|&v| v < lo).filter(|&v| matches!(g.a(v), Some(w) if w > v)).count();
    Some(below as u32 + 1)
}

/// The isolated a-edge of rank `i`, as (min, max).
pub fn a_edge_of_rank(g: &LabeledGraph, i: u32) -> Option<(Label, Label)> {
    if i == 0 {
        return None;
    }
    g.labels()
        .filter_map(|v| match g.a(v) {
            Some(w) if w > v => Some((v, w)),
            _ => None,
        })
        .nth(i as usize - 1)
}

fn require(cond: bool, mv: Move, reason: &str) -> Result<(), MoveError> {
    if cond {
        Ok(())
    } else {
        Err(not_applicable(mv, reason))
    }
}

/// Applies `m` in place after checking its applicability.
pub fn apply_in_place(g: &mut LabeledGraph, m: Move) -> Result<(), MoveError> {
    if !matches!(m, Move::Unroot { .. }) {
        require(!g.is_rooted(), m, "graph is rooted")?;
    }
    match m {
        Move::Lambda3 { v, w } => {
            require(g.has_b_loop(v), m, "v carries no b-loop")?;
            require(g.a(v) == Some(w) && v != w, m, "v-w is not an isolated a-edge")?;
            g.remove_vertex(v);
            g.set_a(w, w);
        }
        Move::Lambda21 { v, w2 } => {
            require(g.has_a_loop(v), m, "v carries no a-loop")?;
            require(g.b_kind(v) == Some(BKind::Triangle), m, "v is not on a b-triangle")?;
            require(g.b(v) == Some(w2), m, "w' does not follow v on its triangle")?;
            g.remove_vertex(v);
        }
        Move::Lambda22 { v, w, w2, dir } => {
            require(g.has_a_loop(v), m, "v carries no a-loop")?;
            let edge_ok = match dir {
                Dir::Out => g.b_kind(v) == Some(BKind::Tail(w)),
                Dir::In => g.b_kind(v) == Some(BKind::Head(w)),
            };
            require(edge_ok, m, "no isolated b-edge between v and w in that direction")?;
            require(g.a(w) == Some(w2) && w2 != w, m, "w-w' is not an isolated a-edge")?;
            g.remove_vertex(v);
            g.remove_vertex(w);
            g.set_a(w2, w2);
        }
        Move::Kappa3 { v, w, rank, sign } => {
            require(g.b_kind(v) == Some(BKind::Tail(w)), m, "v->w is not an isolated b-edge")?;
            let (Some(v2), Some(w2)) = (g.a(v), g.a(w)) else {
                return Err(not_applicable(m, "v or w lacks an a-edge"));
            };
            let distinct = v2 != v && w2 != w && v2 != w;
            require(distinct, m, "v, w, a(v), a(w) are not pairwise distinct")?;
            let expect_sign = if v2 < w2 { Sign::Minus } else { Sign::Plus };
            require(sign == expect_sign, m, "sign does not match the order of a(v), a(w)")?;
            let mut h = g.clone();
            h.remove_vertex(v);
            h.remove_vertex(w);
            h.set_a(v2, w2);
            require(a_edge_rank(&h, v2, w2) == Some(rank), m, "rank does not match the new a-edge")?;
            *g = h;
        }
        Move::Exc { w } => {
            require(g.is_delta3_shaped(), m, "graph is not a copy of Δ3")?;
            let Some(BKind::Head(v)) = g.b_kind(w) else {
                return Err(not_applicable(m, "w is not the head of the b-edge"));
            };
            g.remove_vertex(w);
            g.set_b(v, v);
        }
        Move::Unroot { alpha, v } => {
            require(g.root() == Some(v), m, "v is not the root")?;
            let expect = match g.root_defect() {
                RootDefect::None => Alpha::None,
                RootDefect::MissingA => Alpha::A,
                RootDefect::MissingB => Alpha::B,
                RootDefect::MissingBoth => {
                    return Err(not_applicable(m, "root lacks both letters"))
                }
            };
            require(alpha == expect, m, "alpha does not name the missing letter")?;
            match alpha {
                Alpha::A => g.set_a(v, v),
                Alpha::B => g.set_b(v, v),
                Alpha::None => {}
            }
            g.set_root(None);
        }
    }
    Ok(())
}

pub fn apply_move(g: &LabeledGraph, m: Move) -> Result<LabeledGraph, MoveError> {
    let mut h = g.clone();
    apply_in_place(&mut h, m)?;
    Ok(h)
}

/// Whether `g` can be the output of `m`, so that `m` can be inverted on it.
pub fn valid_for(g: &LabeledGraph, m: Move) -> bool {
    let unrooted = !g.is_rooted();
    match m {
        Move::Lambda3 { v, w } => unrooted && !g.contains(v) && g.has_a_loop(w),
        Move::Lambda21 { v, w2 } => {
            unrooted && !g.contains(v) && matches!(g.b_kind(w2), Some(BKind::Tail(_)))
        }
        Move::Lambda22 { v, w, w2, .. } => {
            unrooted && v != w && !g.contains(v) && !g.contains(w) && g.has_a_loop(w2)
        }
        Move::Kappa3 { v, w, rank, .. } => {
            unrooted
                && v != w
                && !g.contains(v)
                && !g.contains(w)
                && rank >= 1
                && a_edge_of_rank(g, rank).is_some()
        }
        Move::Exc { w } => unrooted && !g.contains(w) && g.is_delta1_shaped(),
        Move::Unroot { alpha, v } => {
            unrooted
                && g.contains(v)
                && match alpha {
                    Alpha::A => g.has_a_loop(v),
                    Alpha::B => g.has_b_loop(v),
                    Alpha::None => true,
                }
        }
    }
}

/// The unique graph Γ with apply_move(Γ, m) = g.
pub fn invert_in_place(g: &mut LabeledGraph, m: Move) -> Result<(), MoveError> {
    if !valid_for(g, m) {
        return Err(MoveError::NotValidFor(m));
    }
    match m {
        Move::Lambda3 { v, w } => {
            g.add_vertex(v);
            g.set_a(v, w);
            g.set_b(v, v);
        }
        Move::Lambda21 { v, w2 } => {
            let w = g.b(w2).expect("tail of an isolated edge");
            g.add_vertex(v);
            g.set_a(v, v);
            g.set_b(w, v);
            g.set_b(v, w2);
        }
        Move::Lambda22 { v, w, w2, dir } => {
            g.clear_a(w2);
            g.add_vertex(v);
            g.add_vertex(w);
            g.set_a(v, v);
            g.set_a(w, w2);
            match dir {
                Dir::Out => g.set_b(v, w),
                Dir::In => g.set_b(w, v),
            }
        }
        Move::Kappa3 { v, w, rank, sign } => {
            let (p, q) = a_edge_of_rank(g, rank).expect("checked by valid_for");
            let (v2, w2) = match sign {
                Sign::Minus => (p, q),
                Sign::Plus => (q, p),
            };
            g.clear_a(p);
            g.add_vertex(v);
            g.add_vertex(w);
            g.set_a(v, v2);
            g.set_a(w, w2);
            g.set_b(v, w);
        }
        Move::Exc { w } => {
            let v = g.labels().next().expect("one vertex");
            g.clear_b(v);
            g.add_vertex(w);
            g.set_a(w, w);
            g.set_b(v, w);
        }
        Move::Unroot { alpha, v } => {
            match alpha {
                Alpha::A => g.clear_a(v),
                Alpha::B => g.clear_b(v),
                Alpha::None => {}
            }
            g.set_root(Some(v));
        }
    }
    Ok(())
}

pub fn invert_move(g: &LabeledGraph, m: Move) -> Result<LabeledGraph, MoveError> {
    let mut h = g.clone();
    invert_in_place(&mut h, m)?;
    Ok(h)
}

/// The λ₂-move at an a-loop vertex `v` (not Δ₃), if any.
fn lambda2_at(g: &LabeledGraph, v: Label) -> Option<Move> {
    match g.b_kind(v)? {
        BKind::Triangle => Some(Move::Lambda21 { v, w2: g.b(v)? }),
        BKind::Tail(w) | BKind::Head(w) => {
            let w2 = g.a(w)?;
            if w2 == w {
                return None;
            }
            let dir = if g.b(v) == Some(w) { Dir::Out } else { Dir::In };
            Some(Move::Lambda22 { v, w, w2, dir })
        }
        BKind::Loop => None,
    }
}

/// The κ₃-move removing the isolated b-edge `v → w`, if defined.
fn kappa3_at(g: &LabeledGraph, v: Label, w: Label) -> Option<Move> {
    let (v2, w2) = (g.a(v)?, g.a(w)?);
    if v2 == v || w2 == w || v2 == w {
        return None;
    }
    let lo = v2.min(w2);
    // Rank of {v2, w2} once v and w are gone: isolated a-edges with smaller
    // minimum, not counting those through v or w.
    let below = g
        .labels()
        .take_while(|&x| x < lo)
        .filter(|&x| x != v && x != w && matches!(g.a(x), Some(y) if y > x && y != v && y != w))
        .count();
    let sign = if v2 < w2 { Sign::Minus } else { Sign::Plus };
    Some(Move::Kappa3 { v, w, rank: below as u32 + 1, sign })
}

/// The next move of the minimal sequence.
pub fn minimal_move(g: &LabeledGraph) -> Option<Move> {
    if let Some(r) = g.root() {
        let alpha = match g.root_defect() {
            RootDefect::None => Alpha::None,
            RootDefect::MissingA => Alpha::A,
            RootDefect::MissingB => Alpha::B,
            RootDefect::MissingBoth => return None,
        };
        return Some(Move::Unroot { alpha, v: r });
    }
    if g.is_delta1_shaped() || g.is_delta2_shaped() {
        return None;
    }
    if let Some(v) = g.labels().find(|&v| g.has_b_loop(v)) {
        return Some(Move::Lambda3 { v, w: g.a(v)? });
    }
    if g.is_delta3_shaped() {
        let (_, w) = g.isolated_b_edges()[0];
        return Some(Move::Exc { w });
    }
    if let Some(v) = g.labels().find(|&v| g.has_a_loop(v)) {
        return lambda2_at(g, v);
    }
    let (v, w) = g.labels().find_map(|v| match g.b_kind(v) {
        Some(BKind::Tail(w)) => Some((v, w)),
        _ => None,
    })?;
    kappa3_at(g, v, w)
}

/// Every λ/κ/exc move applicable to an unrooted graph.
pub fn applicable_moves(g: &LabeledGraph) -> Vec<Move> {
    let mut out = Vec::new();
    if g.is_rooted() {
        return minimal_move(g).into_iter().collect();
    }
    if g.is_delta3_shaped() {
        let (_, w) = g.isolated_b_edges()[0];
        out.push(Move::Exc { w });
        return out;
    }
    if g.n() <= 1 {
        return out;
    }
    for v in g.labels() {
        if g.has_b_loop(v) {
            if let Some(w) = g.a(v).filter(|&w| w != v) {
                out.push(Move::Lambda3 { v, w });
            }
        }
        if g.has_a_loop(v) {
            out.extend(lambda2_at(g, v));
        }
        if let Some(BKind::Tail(w)) = g.b_kind(v) {
            out.extend(kappa3_at(g, v, w));
        }
    }
    out
}

/// Moves of the minimal sequence, in order.
pub fn minimal_sequence(g: &LabeledGraph) -> Vec<Move> {
    let mut h = g.clone();
    let mut seq = Vec::new();
    while let Some(m) = minimal_move(&h) {
        apply_in_place(&mut h, m).expect("minimal move applies");
        seq.push(m);
    }
    seq
}

/// Endpoint of the minimal sequence, with the surviving labels.
pub fn quasi_silhouette(g: &LabeledGraph) -> LabeledGraph {
    let mut h = g.clone();
    while let Some(m) = minimal_move(&h) {
        apply_in_place(&mut h, m).expect("minimal move applies");
    }
    h
}

pub fn silhouette(g: &LabeledGraph) -> LabeledGraph {
    quasi_silhouette(g).relab()
}

/// Whether a word of move kinds lies in λ₃*(λ₂,₁+λ₂,₂)*κ₃*(1+exc), optionally
/// preceded by one unroot.
pub fn is_move_word(kinds: &[MoveKind]) -> bool {
    let body = match kinds.first() {
        Some(MoveKind::Unroot) => &kinds[1..],
        _ => kinds,
    };
    if body.contains(&MoveKind::Unroot) {
        return false;
    }
    if body.iter().filter(|k| **k == MoveKind::Exc).count() > 1 {
        return false;
    }
    body.windows(2).all(|p| p[0].order() <= p[1].order())
        && body.iter().position(|k| *k == MoveKind::Exc).is_none_or(|i| i + 1 == body.len())
}

/// Type after applying a move kind's delta.
pub fn shift_type(t: CombType, k: MoveKind) -> Option<CombType> {
    t.shifted(k.delta()?)
}
