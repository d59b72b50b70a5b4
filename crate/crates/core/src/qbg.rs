//! The quantum Bruhat graph `QBG(S_{n+1})`.
//!
//! Edges are `x → x·s_α` for positive `α`, labelled `α`: Bruhat if the length
//! goes up by one, quantum if it drops to `ℓ(x) + 1 - 2⟨ρ, α^∨⟩`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::weyl::{Permutation, Root};

/// Largest rank for which [`graph`] materializes the whole graph.
pub const MAX_GRAPH_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Bruhat,
    Quantum,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Bruhat => "bruhat",
            EdgeKind::Quantum => "quantum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QbgEdge {
    pub source: Permutation,
    pub label: Root,
    pub kind: EdgeKind,
    pub target: Permutation,
}

/// Change in length under `x ↦ x·s_(i,j)`, from the entries between positions `i` and `j`.
fn length_delta(x: &Permutation, i: usize, j: usize) -> i64 {
    let (a, b) = (x.apply(i), x.apply(j));
    let (lo, hi) = (a.min(b), a.max(b));
    let between = (i + 1..j)
        .filter(|&m| {
            let v = x.apply(m);
            lo < v && v < hi
        })
        .count() as i64;
    let d = 2 * between + 1;
    if a < b {
        d
    } else {
        -d
    }
}

/// Classifies `x → x·s_α`; `None` when it is not an edge.
pub fn edge_kind(x: &Permutation, alpha: Root) -> Option<EdgeKind> {
    debug_assert!(alpha.is_positive());
    let delta = length_delta(x, alpha.i, alpha.j);
    if delta == 1 {
        Some(EdgeKind::Bruhat)
    } else if delta == 1 - 2 * alpha.rho_pair() as i64 {
        Some(EdgeKind::Quantum)
    } else {
        None
    }
}

/// All positive roots of `A_n`, ordered lexicographically by `(i, j)`.
pub fn positive_roots(n: usize) -> Vec<Root> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 1..=n {
        for j in i + 1..=n + 1 {
            out.push(Root::new(i, j));
        }
    }
    out
}

/// Out-edges of `x`, ordered by label.
pub fn out_edges(x: &Permutation) -> Vec<QbgEdge> {
    positive_roots(x.rank())
        .into_iter()
        .filter_map(|alpha| {
            edge_kind(x, alpha).map(|kind| QbgEdge {
                source: x.clone(),
                label: alpha,
                kind,
                target: x.right_reflect(alpha),
            })
        })
        .collect()
}

/// Every edge of `QBG(S_{n+1})`, sources ordered by (length, window) then by label.
pub fn all_edges(n: usize) -> Result<Vec<QbgEdge>> {
    if n == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    Ok(Permutation::all(n).iter().flat_map(out_edges).collect())
}

/// Follows `labels` from `w`; `None` as soon as a step is not an edge.
pub fn path_end(w: &Permutation, labels: &[Root]) -> Option<Permutation> {
    let mut cur = w.clone();
    for &alpha in labels {
        edge_kind(&cur, alpha.abs())?;
        cur = cur.right_reflect(alpha);
    }
    Some(cur)
}

/// Same walk, also returning the kind of every step.
pub fn path_kinds(w: &Permutation, labels: &[Root]) -> Option<(Permutation, Vec<EdgeKind>)> {
    let mut cur = w.clone();
    let mut kinds = Vec::with_capacity(labels.len());
    for &alpha in labels {
        kinds.push(edge_kind(&cur, alpha.abs())?);
        cur = cur.right_reflect(alpha);
    }
    Some((cur, kinds))
}

/// A materialized graph with adjacency lists.
#[derive(Debug)]
pub struct QbgGraph {
    pub n: usize,
    pub vertices: Vec<Permutation>,
    pub adjacency: HashMap<Permutation, Vec<QbgEdge>>,
}

impl QbgGraph {
    fn build(n: usize) -> Self {
        let vertices = Permutation::all(n);
        let adjacency = vertices.iter().map(|v| (v.clone(), out_edges(v))).collect();
        QbgGraph { n, vertices, adjacency }
    }

    pub fn edges(&self) -> impl Iterator<Item = &QbgEdge> {
        self.vertices.iter().flat_map(|v| self.adjacency[v].iter())
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(Vec::len).sum()
    }
}

/// The memoized graph for rank `n ≤ MAX_GRAPH_RANK`.
pub fn graph(n: usize) -> Result<Arc<QbgGraph>> {
    if n == 0 || n > MAX_GRAPH_RANK {
        return Err(Error::Domain(format!(
            "full graphs are built for 1 <= n <= {MAX_GRAPH_RANK}, got n = {n}"
        )));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QbgGraph>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().expect("qbg cache poisoned");
    Ok(cache.entry(n).or_insert_with(|| Arc::new(QbgGraph::build(n))).clone())
}

/// Tab-separated edge list: source, label `i,j`, kind, target.
pub fn to_tsv(edges: &[QbgEdge]) -> String {
    let mut out = String::new();
    for e in edges {
        writeln!(
            out,
            "{}\t{},{}\t{}\t{}",
            e.source.to_comma_string(),
            e.label.i,
            e.label.j,
            e.kind.as_str(),
            e.target.to_comma_string()
        )
        .unwrap();
    }
    out
}

pub fn to_dot(n: usize, edges: &[QbgEdge]) -> String {
    let mut out = format!("digraph qbg_{n} {{\n");
    for v in Permutation::all(n) {
        writeln!(out, "  \"{v}\" [label=\"{v}\\nl={}\"];", v.length()).unwrap();
    }
    for e in edges {
        let style = match e.kind {
            EdgeKind::Bruhat => "solid",
            EdgeKind::Quantum => "dashed",
        };
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"({},{})\", style={style}];",
            e.source, e.target, e.label.i, e.label.j
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    // recomputes both lengths from scratch
    fn brute_kind(x: &Permutation, alpha: Root) -> Option<EdgeKind> {
        let (lx, ly) = (x.length() as i64, x.right_reflect(alpha).length() as i64);
        if ly == lx + 1 {
            Some(EdgeKind::Bruhat)
        } else if ly == lx + 1 - 2 * (alpha.j - alpha.i) as i64 {
            Some(EdgeKind::Quantum)
        } else {
            None
        }
    }

    #[test]
    fn edge_kind_examples() {
        assert_eq!(edge_kind(&Permutation::identity(2), Root::new(1, 2)), Some(EdgeKind::Bruhat));
        assert_eq!(edge_kind(&perm(&[3, 2, 1]), Root::new(1, 3)), Some(EdgeKind::Quantum));
        assert_eq!(edge_kind(&Permutation::identity(2), Root::new(1, 3)), None);
    }

    #[test]
    fn rank_one_graph() {
        let edges = all_edges(1).unwrap();
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[0].kind, EdgeKind::Bruhat);
        assert_eq!(edges[0].target, perm(&[2, 1]));
        assert_eq!(edges[1].kind, EdgeKind::Quantum);
        assert_eq!(edges[1].target, Permutation::identity(1));
        assert_eq!(graph(1).unwrap().vertices.len(), 2);
        assert!(all_edges(0).is_err());
    }

    #[test]
    fn quantum_edge_in_s3() {
        let edges = all_edges(2).unwrap();
        assert!(edges.iter().any(|e| e.source == perm(&[2, 3, 1])
            && e.label == Root::new(2, 3)
            && e.kind == EdgeKind::Quantum
            && e.target == perm(&[2, 1, 3])));
    }

    #[test]
    fn path_end_examples() {
        let w2 = perm(&[2, 3, 1]);
        assert_eq!(path_end(&w2, &[Root::new(1, 2)]), Some(perm(&[3, 2, 1])));
        assert_eq!(path_end(&w2, &[]), Some(w2.clone()));
        assert_eq!(path_end(&w2, &[Root::new(1, 3)]), None);
    }

    #[test]
    fn agrees_with_brute_force() {
        for n in 1..=4 {
            for x in Permutation::all(n) {
                for alpha in positive_roots(n) {
                    assert_eq!(edge_kind(&x, alpha), brute_kind(&x, alpha), "{x} {alpha}");
                }
            }
        }
    }

    #[test]
    fn longest_theta_edge_is_quantum() {
        for n in 1..=5 {
            let w0 = Permutation::longest(n);
            assert_eq!(edge_kind(&w0, Root::new(1, n + 1)), Some(EdgeKind::Quantum));
            let target = w0.right_reflect(Root::new(1, n + 1));
            assert_eq!(target.length() + 2 * n, w0.length() + 1);
        }
    }

    #[test]
    fn graph_is_memoized_and_sorted() {
        let g = graph(3).unwrap();
        let again = graph(3).unwrap();
        assert!(Arc::ptr_eq(&g, &again));
        assert_eq!(g.vertices.len(), 24);
        let lengths: Vec<usize> = g.vertices.iter().map(Permutation::length).collect();
        assert!(lengths.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(g.edge_count(), all_edges(3).unwrap().len());
        assert!(graph(5).is_err());
    }

    #[test]
    fn tsv_rows() {
        let tsv = to_tsv(&all_edges(1).unwrap());
        assert_eq!(tsv, "1,2\t1,2\tbruhat\t2,1\n2,1\t1,2\tquantum\t1,2\n");
        let dot = to_dot(1, &all_edges(1).unwrap());
        assert!(dot.starts_with("digraph qbg_1 {"));
        assert!(dot.contains("style=dashed"));
    }
}
