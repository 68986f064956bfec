//! Orbit graphs: limit points, a few representative points per chain, and the
//! map action between them.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use hyperdyn::dynamics::classify_periodic_point;
use hyperdyn::space::{point_at, ChainKind};
use hyperdyn::{PointRef, SymbolicSystem};

use crate::{system_report, SystemReport};

/// Chain indices drawn explicitly.
const SPAN: i64 = 3;

struct Node {
    id: String,
    label: String,
    shape: &'static str,
}

struct Edge {
    from: String,
    to: String,
    dashed: bool,
}

fn graph(system: &SymbolicSystem) -> (Vec<Node>, Vec<Edge>) {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let limit_id = |i: usize| system.limits()[i].id.clone();
    for (i, l) in system.limits().iter().enumerate() {
        let class = classify_periodic_point(system, PointRef::Limit(i)).expect("limits are periodic");
        nodes.push(Node {
            id: limit_id(i),
            label: format!("{} ({})", l.value, class.letter()),
            shape: "doublecircle",
        });
        let j = system.limit_perm()[i];
        if j != i {
            edges.push(Edge {
                from: limit_id(i),
                to: limit_id(j),
                dashed: false,
            });
        }
    }
    for c in system.chains() {
        let at = |k: i64| format!("{}[{k}]", c.id);
        match &c.kind {
            ChainKind::BiInfinite { alpha, omega, .. } => {
                let back = format!("{}:back", c.id);
                let fwd = format!("{}:fwd", c.id);
                nodes.push(Node {
                    id: back.clone(),
                    label: "…".into(),
                    shape: "plaintext",
                });
                for k in -SPAN..=SPAN {
                    nodes.push(Node {
                        id: at(k),
                        label: point_at(c, k).to_string(),
                        shape: "ellipse",
                    });
                }
                nodes.push(Node {
                    id: fwd.clone(),
                    label: "…".into(),
                    shape: "plaintext",
                });
                edges.push(Edge {
                    from: limit_id(*alpha),
                    to: back.clone(),
                    dashed: true,
                });
                edges.push(Edge {
                    from: back,
                    to: at(-SPAN),
                    dashed: false,
                });
                for k in -SPAN..SPAN {
                    edges.push(Edge {
                        from: at(k),
                        to: at(k + 1),
                        dashed: false,
                    });
                }
                edges.push(Edge {
                    from: at(SPAN),
                    to: fwd.clone(),
                    dashed: false,
                });
                edges.push(Edge {
                    from: fwd,
                    to: limit_id(*omega),
                    dashed: true,
                });
            }
            ChainKind::Periodic { cycle } => {
                let n = cycle.len() as i64;
                for (k, v) in cycle.iter().enumerate() {
                    nodes.push(Node {
                        id: at(k as i64),
                        label: format!("{v} (I)"),
                        shape: "circle",
                    });
                }
                for k in 0..n {
                    edges.push(Edge {
                        from: at(k),
                        to: at((k + 1) % n),
                        dashed: false,
                    });
                }
            }
        }
    }
    (nodes, edges)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(system: &SymbolicSystem) -> String {
    let (nodes, edges) = graph(system);
    let mut out = String::from("digraph orbits {\n  rankdir=LR;\n");
    for n in &nodes {
        let _ = writeln!(
            out,
            "  {} [label={}, shape={}];",
            quote(&n.id),
            quote(&n.label),
            n.shape
        );
    }
    for e in &edges {
        let style = if e.dashed { " [style=dashed]" } else { "" };
        let _ = writeln!(out, "  {} -> {}{style};", quote(&e.from), quote(&e.to));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct GraphDocument {
    analysis: SystemReport,
    adjacency: BTreeMap<String, Vec<String>>,
}

pub fn to_json(system: &SymbolicSystem) -> GraphDocument {
    let (nodes, edges) = graph(system);
    let mut adjacency: BTreeMap<String, Vec<String>> =
        nodes.into_iter().map(|n| (n.id, Vec::new())).collect();
    for e in edges {
        adjacency.get_mut(&e.from).expect("known node").push(e.to);
    }
    GraphDocument {
        analysis: system_report(system),
        adjacency,
    }
}
