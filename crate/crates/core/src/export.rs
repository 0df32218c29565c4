//! Lattice and trace emission: JSON documents, DOT graphs, plain tables.

use std::fmt::Write as _;

use serde::Serialize;

use crate::batyrev::BatyrevTrace;
use crate::linalg::Subspace;
use crate::stratification::StratumLattice;

#[derive(Debug, Clone, Serialize)]
pub struct LatticeElementDoc {
    pub index: usize,
    pub dim: usize,
    pub subspace: Subspace,
    pub pointwise_stabilizer_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeDoc {
    pub model: String,
    pub kind: String,
    pub ambient_dim: usize,
    pub elements: Vec<LatticeElementDoc>,
    /// Pairs `[i, j]` with `elements[i] ⊋ elements[j]`.
    pub containments: Vec<[usize; 2]>,
    /// Covering pairs `[lower, upper]`.
    pub hasse_edges: Vec<[usize; 2]>,
}

pub fn lattice_doc(model: &str, kind: &str, lattice: &StratumLattice) -> LatticeDoc {
    let n = lattice.len();
    let elements = (0..n)
        .map(|i| LatticeElementDoc {
            index: i,
            dim: lattice.element(i).dim(),
            subspace: lattice.element(i).clone(),
            pointwise_stabilizer_order: lattice.pointwise_stab(i).order(),
        })
        .collect();
    let containments = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && lattice.contains(i, j))
        .map(|(i, j)| [i, j])
        .collect();
    LatticeDoc {
        model: model.into(),
        kind: kind.into(),
        ambient_dim: lattice.ambient_dim(),
        elements,
        containments,
        hasse_edges: lattice.hasse_edges().into_iter().map(|(a, b)| [a, b]).collect(),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram in DOT, smallest strata at the bottom.
pub fn lattice_dot(model: &str, kind: &str, lattice: &StratumLattice) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(&format!("{model} {kind}")));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    for i in 0..lattice.len() {
        let e = lattice.element(i);
        let _ = writeln!(
            out,
            "  n{i} [label=\"{}\\ndim {} | stab {}\"];",
            escape(&e.describe()),
            e.dim(),
            lattice.pointwise_stab(i).order()
        );
    }
    for (lo, hi) in lattice.hasse_edges() {
        let _ = writeln!(out, "  n{lo} -> n{hi};");
    }
    out.push_str("}\n");
    out
}

pub fn lattice_table(lattice: &StratumLattice) -> String {
    let mut out = String::from("index  dim  stab  subspace\n");
    for i in 0..lattice.len() {
        let e = lattice.element(i);
        let _ = writeln!(
            out,
            "{i:>5}  {:>3}  {:>4}  {}",
            e.dim(),
            lattice.pointwise_stab(i).order(),
            e.describe()
        );
    }
    out
}

pub fn trace_table(trace: &BatyrevTrace) -> String {
    if trace.stages.is_empty() {
        return "0 stages (group abelian)\n".into();
    }
    let mut out = String::from("stage  r  centers\n");
    for (i, s) in trace.stages.iter().enumerate() {
        let centers: Vec<String> = s.centers.iter().map(Subspace::describe).collect();
        let _ = writeln!(out, "{:>5}  {}  {}", i + 1, s.r, centers.join("; "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::stratification::stabilizer_lattice;

    #[test]
    fn s3_documents() {
        let l = stabilizer_lattice(&presets::s3_perm3());
        let doc = lattice_doc("s3_perm3", "stabilizer", &l);
        assert_eq!(doc.elements.len(), 4);
        assert_eq!(doc.containments.len(), 3);
        assert_eq!(doc.hasse_edges.len(), 3);
        let dot = lattice_dot("s3_perm3", "stabilizer", &l);
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), 3);
        assert_eq!(lattice_table(&l).lines().count(), 5);
        let json = serde_json::to_value(&doc).unwrap();
        assert_eq!(json["elements"][0]["subspace"]["basis"][0][0], "1");
    }
}
