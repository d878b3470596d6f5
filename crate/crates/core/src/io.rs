//! Line-oriented instance files.
//!
//! ```text
//! n=3
//! 0 0 0 1
//! 1 1 0 1
//! 2 1 1 1.5
//! ```
//!
//! One `id x y r` line per node in ascending id order. Arcs are never stored;
//! they are rebuilt from the range rule on load.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{DiskGraph, DiskNode, GraphError};

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header declares {declared} nodes but file has {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Id numbering used in the file. Internally ids are always `0..n`;
/// `OneBased` writes and expects `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdBase {
    #[default]
    Zero,
    OneBased,
}

impl IdBase {
    fn offset(self) -> usize {
        match self {
            IdBase::Zero => 0,
            IdBase::OneBased => 1,
        }
    }
}

pub fn write_instance(g: &DiskGraph, base: IdBase) -> String {
    let mut out = String::new();
    writeln!(out, "n={}", g.n()).unwrap();
    for node in g.nodes() {
        writeln!(
            out,
            "{} {} {} {}",
            node.id + base.offset(),
            node.x,
            node.y,
            node.r
        )
        .unwrap();
    }
    out
}

pub fn read_instance(text: &str, base: IdBase) -> Result<DiskGraph, InstanceFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(InstanceFileError::Parse {
        line: 1,
        msg: "missing `n=<count>` header".into(),
    })?;
    let declared: usize = header
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| InstanceFileError::Parse {
            line: hline,
            msg: format!("expected `n=<count>`, found `{header}`"),
        })?;

    let mut nodes = Vec::with_capacity(declared);
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [id, x, y, r] = fields[..] else {
            return Err(InstanceFileError::Parse {
                line,
                msg: format!("expected `id x y r`, found {} fields", fields.len()),
            });
        };
        let err = |what: &str| InstanceFileError::Parse {
            line,
            msg: format!("bad {what}"),
        };
        let id: usize = id.parse().map_err(|_| err("id"))?;
        let x: f64 = x.parse().map_err(|_| err("x"))?;
        let y: f64 = y.parse().map_err(|_| err("y"))?;
        let r: f64 = r.parse().map_err(|_| err("r"))?;

        let expected = nodes.len() + base.offset();
        if id != expected {
            let msg = if id < expected {
                format!("id {id} is duplicate or out of order")
            } else {
                format!("id {id} is out of order, expected {expected}")
            };
            return Err(InstanceFileError::Parse { line, msg });
        }
        nodes.push(DiskNode::new(id - base.offset(), x, y, r));
    }
    if nodes.len() != declared {
        return Err(InstanceFileError::CountMismatch {
            declared,
            found: nodes.len(),
        });
    }
    Ok(DiskGraph::build(nodes)?)
}
