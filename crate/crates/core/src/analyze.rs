//! ab-cycles, parabolicity and almost-malnormality.

use crate::graph::{BKind, Label, LabeledGraph};
use crate::words::{Letter, Word};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbCycle {
    /// v₁..v_m with b(a(vᵢ)) = vᵢ₊₁, starting at the least label.
    pub vertices: Vec<Label>,
    pub simple: bool,
}

impl AbCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The word (ab)^m read around the cycle.
    pub fn word(&self) -> Word {
        Word(vec![Letter::A, Letter::B]).pow(self.len())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyzeError {
    #[error("exponent {0} outside (0, 1/6)")]
    AlphaOutOfRange(f64),
}

fn ab_step(g: &LabeledGraph, v: Label) -> Option<Label> {
    g.a(v).and_then(|w| g.b(w))
}

/// Key identifying the b-orbit a vertex lies on, when that orbit is a triangle.
fn triangle_key(g: &LabeledGraph, v: Label) -> Option<Label> {
    match g.b_kind(v)? {
        BKind::Triangle => {
            let w = g.b(v)?;
            let u = g.b(w)?;
            Some(v.min(w).min(u))
        }
        _ => None,
    }
}

/// Every periodic orbit of v ↦ b(a(v)), each reported once.
pub fn ab_cycles(g: &LabeledGraph) -> Vec<AbCycle> {
    let size = g.max_label() as usize + 1;
    // 0 unvisited, 1 on the current walk, 2 finished
    let mut state = vec![0u8; size];
    let mut out = Vec::new();
    for start in g.labels() {
        if state[start as usize] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut v = start;
        loop {
            state[v as usize] = 1;
            walk.push(v);
            match ab_step(g, v) {
                Some(w) if state[w as usize] == 0 => v = w,
                Some(w) if state[w as usize] == 1 => {
                    let at = walk.iter().position(|&x| x == w).expect("on walk");
                    out.push(make_cycle(g, &walk[at..]));
                    break;
                }
                _ => break,
            }
        }
        for x in walk {
            state[x as usize] = 2;
        }
    }
    out.sort_by_key(|c| c.vertices[0]);
    out
}

fn make_cycle(g: &LabeledGraph, cyc: &[Label]) -> AbCycle {
    let at = (0..cyc.len()).min_by_key(|&i| cyc[i]).expect("nonempty");
    let vertices: Vec<Label> = cyc[at..].iter().chain(&cyc[..at]).copied().collect();
    let mut keys: Vec<Label> = vertices.iter().filter_map(|&v| triangle_key(g, v)).collect();
    let total = keys.len();
    keys.sort_unstable();
    keys.dedup();
    AbCycle { simple: keys.len() == total, vertices }
}

/// A loop anywhere in a connected graph conjugates into a loop at the root,
/// so any ab-cycle makes the subgroup parabolic.
pub fn is_parabolic(g: &LabeledGraph) -> bool {
    g.labels().any(|v| {
        let mut x = v;
        for _ in 0..g.n() {
            match ab_step(g, x) {
                Some(y) if y == v => return true,
                Some(y) => x = y,
                None => return false,
            }
        }
        false
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// A word of the form a b^±1 a b^±1 … labeling a loop at both vertices.
    pub word: Word,
    pub p: Label,
    pub q: Label,
}

fn b_pow(g: &LabeledGraph, v: Label, plus: bool) -> Option<Label> {
    if plus {
        g.b(v)
    } else {
        g.b_inv(v)
    }
}

/// Malnormality verdict. Not almost malnormal iff the off-diagonal pair graph
/// has a directed cycle; the cycle spells the witness.
pub fn is_almost_malnormal(g: &LabeledGraph) -> (bool, Option<Witness>) {
    let labels: Vec<Label> = g.labels().collect();
    let size = g.max_label() as usize + 1;
    let idx = |p: Label, q: Label| p as usize * size + q as usize;
    let arcs = |p: Label, q: Label| {
        let mut out = [None, None];
        if let (Some(x), Some(y)) = (g.a(p), g.a(q)) {
            for (k, plus) in [true, false].into_iter().enumerate() {
                if let (Some(x2), Some(y2)) = (b_pow(g, x, plus), b_pow(g, y, plus)) {
                    if x2 != y2 {
                        out[k] = Some((x2, y2, plus));
                    }
                }
            }
        }
        out
    };
    let mut state = vec![0u8; size * size];
    for &p0 in &labels {
        for &q0 in &labels {
            if p0 == q0 || state[idx(p0, q0)] != 0 {
                continue;
            }
            // iterative DFS: (node, next arc index, sign used to get here)
            let mut stack: Vec<((Label, Label), usize, bool)> = vec![((p0, q0), 0, true)];
            state[idx(p0, q0)] = 1;
            while let Some(top) = stack.last_mut() {
                let (p, q) = top.0;
                if top.1 == 2 {
                    state[idx(p, q)] = 2;
                    stack.pop();
                    continue;
                }
                let k = top.1;
                top.1 += 1;
                let Some((x, y, plus)) = arcs(p, q)[k] else { continue };
                match state[idx(x, y)] {
                    0 => {
                        state[idx(x, y)] = 1;
                        stack.push(((x, y), 0, plus));
                    }
                    1 => {
                        let at = stack.iter().position(|f| f.0 == (x, y)).expect("on stack");
                        let mut letters = Vec::new();
                        let signs = stack[at + 1..].iter().map(|f| f.2).chain([plus]);
                        for s in signs {
                            letters.push(Letter::A);
                            letters.push(if s { Letter::B } else { Letter::Bi });
                        }
                        let witness = Witness { word: Word(letters), p: x, q: y };
                        return (false, Some(witness));
                    }
                    _ => {}
                }
            }
        }
    }
    (true, None)
}

/// ⌊n^α⌋, guarded against rounding just below an integer.
pub fn band_max(n: usize, alpha: f64) -> usize {
    let x = (n as f64).powf(alpha);
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.floor() as usize
    }
}

fn check_alpha(alpha: f64) -> Result<(), AnalyzeError> {
    if alpha > 0.0 && alpha < 1.0 / 6.0 {
        Ok(())
    } else {
        Err(AnalyzeError::AlphaOutOfRange(alpha))
    }
}

/// Some simple ab-cycle has length in [2, ⌊n^α⌋].
pub fn has_small_simple_ab_cycle(g: &LabeledGraph, alpha: f64) -> Result<bool, AnalyzeError> {
    check_alpha(alpha)?;
    let m = band_max(g.n(), alpha);
    Ok(ab_cycles(g).iter().any(|c| c.simple && (2..=m).contains(&c.len())))
}

/// Same band, simplicity not required.
pub fn has_small_ab_cycle(g: &LabeledGraph, alpha: f64) -> Result<bool, AnalyzeError> {
    check_alpha(alpha)?;
    let m = band_max(g.n(), alpha);
    Ok(ab_cycles(g).iter().any(|c| (2..=m).contains(&c.len())))
}
