//! Plain-text quiver files.
//!
//! ```text
//! # comment
//! quiver a3
//! node 1
//! node 2
//! arrow a 1 2
//! dim 1 1
//! dim 2 1
//! ```
//!
//! Identifiers are single whitespace-free tokens. Every node needs exactly
//! one `dim` line; `quiver` is optional and defaults to `quiver`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::quiver::{DimensionVector, Quiver};

/// A parsed quiver file.
#[derive(Clone, Debug)]
pub struct QuiverFile {
    pub quiver: Quiver,
    pub dims: DimensionVector,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

impl QuiverFile {
    pub fn parse(text: &str, allow_cycles: bool) -> Result<Self> {
        let mut name: Option<String> = None;
        let mut nodes: Vec<(String, usize)> = Vec::new();
        let mut arrows: Vec<(String, String, String)> = Vec::new();
        let mut dims: HashMap<String, (i64, usize)> = HashMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let Some((&kw, args)) = tokens.split_first() else { continue };
            match (kw, args) {
                ("quiver", [n]) => {
                    if name.replace(n.to_string()).is_some() {
                        return Err(err(line, "second `quiver` line"));
                    }
                }
                ("node", [id]) => nodes.push((id.to_string(), line)),
                ("arrow", [id, t, h]) => arrows.push((id.to_string(), t.to_string(), h.to_string())),
                ("dim", [id, value]) => {
                    let v: i64 = value.parse().map_err(|_| err(line, format!("`{value}` is not an integer")))?;
                    if v < 0 {
                        return Err(err(line, format!("negative dimension {v}")));
                    }
                    if dims.insert(id.to_string(), (v, line)).is_some() {
                        return Err(err(line, format!("second dimension for node `{id}`")));
                    }
                }
                ("quiver" | "node" | "arrow" | "dim", _) => {
                    let want = match kw {
                        "arrow" => 3,
                        "dim" => 2,
                        _ => 1,
                    };
                    return Err(err(line, format!("`{kw}` takes {want} argument(s), got {}", args.len())));
                }
                _ => return Err(err(line, format!("unknown keyword `{kw}`"))),
            }
        }

        let mut entries = Vec::with_capacity(nodes.len());
        for (id, line) in &nodes {
            match dims.get(id) {
                Some(&(v, _)) => entries.push(v),
                None => return Err(err(*line, format!("missing dimension for node `{id}`"))),
            }
        }
        if let Some((id, (_, line))) = dims.iter().filter(|(id, _)| !nodes.iter().any(|(n, _)| n == *id)).min_by_key(|(_, v)| v.1) {
            return Err(err(*line, format!("dimension for undeclared node `{id}`")));
        }

        let node_ids: Vec<String> = nodes.into_iter().map(|(id, _)| id).collect();
        let quiver = Quiver::new(name.as_deref().unwrap_or("quiver"), &node_ids, &arrows, allow_cycles)?;
        let dims = quiver.dimension_vector(entries)?;
        Ok(QuiverFile { quiver, dims })
    }

    pub fn read(path: &Path, allow_cycles: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, allow_cycles)
    }

    /// Canonical form: name, nodes, arrows, dims, in declaration order.
    pub fn serialize(&self) -> String {
        to_canonical(&self.quiver, &self.dims)
    }
}

pub fn to_canonical(q: &Quiver, d: &DimensionVector) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "quiver {}", q.name());
    for n in q.nodes() {
        let _ = writeln!(s, "node {n}");
    }
    for a in q.arrows() {
        let _ = writeln!(s, "arrow {} {} {}", a.id, q.nodes()[a.tail], q.nodes()[a.head]);
    }
    for (n, v) in q.nodes().iter().zip(d.entries()) {
        let _ = writeln!(s, "dim {n} {v}");
    }
    s
}
