//! Line-oriented text format for graphs.
//!
//! ```text
//! psl2z-graph v1
//! n 2
//! root none
//! aloop 1 2
//! bedge 1>2
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Label, LabeledGraph, Violation};

pub const HEADER: &str = "psl2z-graph v1";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("record starting at line {line} is not a valid graph: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid { line: usize, violations: Vec<Violation> },
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical serialization; empty categories are omitted.
pub fn emit(g: &LabeledGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "n {}", g.n()).unwrap();
    match g.root() {
        Some(r) => writeln!(out, "root {r}").unwrap(),
        None => writeln!(out, "root none").unwrap(),
    }
    let mut line = |key: &str, body: String| {
        if !body.is_empty() {
            writeln!(out, "{key} {body}").unwrap();
        }
    };
    line("aloop", join(g.a_loops()));
    line("a", join(g.isolated_a_edges().into_iter().map(|(v, w)| format!("{v}-{w}"))));
    line("bloop", join(g.b_loops()));
    line("bedge", join(g.isolated_b_edges().into_iter().map(|(v, w)| format!("{v}>{w}"))));
    line("btri", join(g.b_triangles().into_iter().map(|[v, w, u]| format!("{v}>{w}>{u}"))));
    out
}

/// Records separated by blank lines.
pub fn emit_many<'a>(graphs: impl IntoIterator<Item = &'a LabeledGraph>) -> String {
    graphs.into_iter().map(emit).collect::<Vec<_>>().join("\n")
}

/// Parses exactly one record.
pub fn parse(text: &str) -> Result<LabeledGraph, CodecError> {
    let mut all = parse_many(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(CodecError::Syntax { line: 1, msg: "no graph record found".into() }),
        k => Err(CodecError::Syntax { line: 1, msg: format!("expected one graph record, found {k}") }),
    }
}

/// Parses a stream of records, each introduced by the header line.
pub fn parse_many(text: &str) -> Result<Vec<LabeledGraph>, CodecError> {
    let mut records: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == HEADER {
            records.push((lineno, Vec::new()));
            continue;
        }
        match records.last_mut() {
            Some((_, body)) => body.push((lineno, line)),
            None => {
                return Err(CodecError::Syntax {
                    line: lineno,
                    msg: format!("expected header {HEADER:?}"),
                })
            }
        }
    }
    records.into_iter().map(|(start, body)| parse_record(start, &body)).collect()
}

struct RecordState {
    n: Option<usize>,
    root: Option<Option<Label>>,
    a: HashMap<Label, Label>,
    b: HashMap<Label, Label>,
    b_in: HashMap<Label, Label>,
    mentioned: BTreeSet<Label>,
}

fn syntax(line: usize, msg: impl Into<String>) -> CodecError {
    CodecError::Syntax { line, msg: msg.into() }
}

fn label(line: usize, tok: &str) -> Result<Label, CodecError> {
    match tok.parse::<Label>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(syntax(line, format!("invalid vertex label {tok:?}"))),
    }
}

fn split_labels(line: usize, tok: &str, sep: char, arity: usize) -> Result<Vec<Label>, CodecError> {
    let parts: Vec<&str> = tok.split(sep).collect();
    if parts.len() != arity {
        return Err(syntax(line, format!("malformed item {tok:?}")));
    }
    parts.into_iter().map(|p| label(line, p)).collect()
}

impl RecordState {
    fn set_a(&mut self, line: usize, v: Label, w: Label) -> Result<(), CodecError> {
        for (x, y) in [(v, w), (w, v)] {
            if self.a.insert(x, y).is_some() {
                return Err(syntax(line, format!("vertex {x} has two a-edges")));
            }
            if x == y {
                break;
            }
        }
        self.mentioned.extend([v, w]);
        Ok(())
    }

    fn set_b(&mut self, line: usize, v: Label, w: Label) -> Result<(), CodecError> {
        if self.b.insert(v, w).is_some() {
            return Err(syntax(line, format!("vertex {v} has two outgoing b-edges")));
        }
        if self.b_in.insert(w, v).is_some() {
            return Err(syntax(line, format!("vertex {w} has two incoming b-edges")));
        }
        self.mentioned.extend([v, w]);
        Ok(())
    }
}

fn parse_record(start: usize, body: &[(usize, &str)]) -> Result<LabeledGraph, CodecError> {
    let mut st = RecordState {
        n: None,
        root: None,
        a: HashMap::new(),
        b: HashMap::new(),
        b_in: HashMap::new(),
        mentioned: BTreeSet::new(),
    };
    for &(line, text) in body {
        let mut toks = text.split_whitespace();
        let key = toks.next().expect("non-empty line");
        let items: Vec<&str> = toks.collect();
        match key {
            "n" => {
                if st.n.is_some() || items.len() != 1 {
                    return Err(syntax(line, "expected a single 'n <int>' line"));
                }
                st.n = Some(items[0].parse().map_err(|_| syntax(line, "invalid vertex count"))?);
            }
            "root" => {
                if st.root.is_some() || items.len() != 1 {
                    return Err(syntax(line, "expected a single 'root <int|none>' line"));
                }
                st.root = Some(match items[0] {
                    "none" => None,
                    tok => {
                        let r = label(line, tok)?;
                        st.mentioned.insert(r);
                        Some(r)
                    }
                });
            }
            "aloop" => {
                for tok in items {
                    let v = label(line, tok)?;
                    st.set_a(line, v, v)?;
                }
            }
            "a" => {
                for tok in items {
                    let p = split_labels(line, tok, '-', 2)?;
                    if p[0] == p[1] {
                        return Err(syntax(line, format!("a-edge {tok:?} is a loop; use aloop")));
                    }
                    st.set_a(line, p[0], p[1])?;
                }
            }
            "bloop" => {
                for tok in items {
                    let v = label(line, tok)?;
                    st.set_b(line, v, v)?;
                }
            }
            "bedge" => {
                for tok in items {
                    let p = split_labels(line, tok, '>', 2)?;
                    if p[0] == p[1] {
                        return Err(syntax(line, format!("b-edge {tok:?} is a loop; use bloop")));
                    }
                    st.set_b(line, p[0], p[1])?;
                }
            }
            "btri" => {
                for tok in items {
                    let p = split_labels(line, tok, '>', 3)?;
                    if p[0] == p[1] || p[1] == p[2] || p[0] == p[2] {
                        return Err(syntax(line, format!("b-triangle {tok:?} repeats a vertex")));
                    }
                    st.set_b(line, p[0], p[1])?;
                    st.set_b(line, p[1], p[2])?;
                    st.set_b(line, p[2], p[0])?;
                }
            }
            other => return Err(syntax(line, format!("unknown key {other:?}"))),
        }
    }
    let n = st.n.ok_or_else(|| syntax(start, "missing 'n' line"))?;
    let root = st.root.ok_or_else(|| syntax(start, "missing 'root' line"))?;
    if st.mentioned.len() > n {
        return Err(syntax(start, format!("{} labels used but n = {n}", st.mentioned.len())));
    }
    let mut g = LabeledGraph::empty();
    for &v in &st.mentioned {
        g.add_vertex(v);
    }
    let mut fill = 1;
    while g.n() < n {
        if !g.contains(fill) {
            g.add_vertex(fill);
        }
        fill += 1;
    }
    for (&v, &w) in &st.a {
        g.set_a_raw(v, w);
    }
    for (&v, &w) in &st.b {
        g.set_b(v, w);
    }
    g.set_root(root);
    g.validate_quasi()
        .map_err(|violations| CodecError::Invalid { line: start, violations })?;
    Ok(g)
}
