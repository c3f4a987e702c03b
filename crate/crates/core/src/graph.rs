//! Height-bounded distant graphs of `Z²`.
//!
//! Vertices are primitive columns up to sign with height at most `H`; two
//! vertices are adjacent when they are the columns of a unimodular matrix.
//! Every predicate here only looks at instances whose vertices are all in
//! range, so a bounded graph never yields a false negative.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::gl2::{vertices_up_to_height, IntMat2, PVertex, ProjMat2};
use crate::involution::{sigma, InvolutionWindow};
use crate::neumann::{element_for_vertex, DescentError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("height bound must be at least 1")]
    ZeroHeight,
    #[error("{0} is not a vertex of the graph")]
    NotInGraph(PVertex),
    #[error("{0} and {1} are not adjacent")]
    NotAnEdge(PVertex, PVertex),
    #[error("vertices do not form a maximal clique")]
    NotAClique,
    #[error("no chain of harmonic quadruples reaches {target} within height {height}")]
    NoChainWithinBound { target: PVertex, height: u64 },
    #[error("no element maps the first clique onto the second")]
    NoSuchMap,
}

/// A maximal clique `{u, v, w}` viewed from its edge `{u, v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCompletion {
    pub vertex: PVertex,
    pub in_range: bool,
}

pub type Clique = [PVertex; 3];
pub type Quad = [PVertex; 4];

#[derive(Debug, Clone)]
pub struct DistantGraph {
    height: u64,
    vertices: Vec<PVertex>,
    index: HashMap<PVertex, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl DistantGraph {
    pub fn build(height: u64) -> Result<Self, GraphError> {
        if height == 0 {
            return Err(GraphError::ZeroHeight);
        }
        let vertices = vertices_up_to_height(height);
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                if vertices[i].is_adjacent(&vertices[j]) {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        Ok(DistantGraph {
            height,
            vertices,
            index,
            adjacency,
        })
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    pub fn vertices(&self) -> &[PVertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, v: &PVertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn index_of(&self, v: &PVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn neighbors(&self, v: &PVertex) -> Result<impl Iterator<Item = &PVertex>, GraphError> {
        let i = self.require(v)?;
        Ok(self.adjacency[i].iter().map(|&j| &self.vertices[j]))
    }

    /// Edges as sorted index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_edge(&self, u: &PVertex, v: &PVertex) -> bool {
        self.contains(u) && self.contains(v) && u.is_adjacent(v)
    }

    fn require(&self, v: &PVertex) -> Result<usize, GraphError> {
        self.index_of(v)
            .ok_or_else(|| GraphError::NotInGraph(v.clone()))
    }

    /// The two triangles on the edge `{u, v}`: third vertices `u + v` and
    /// `u - v`, flagged when they fall outside the height bound.
    pub fn maximal_cliques_of_edge(
        &self,
        u: &PVertex,
        v: &PVertex,
    ) -> Result<[CliqueCompletion; 2], GraphError> {
        if !self.is_edge(u, v) {
            return Err(GraphError::NotAnEdge(u.clone(), v.clone()));
        }
        let completion = |sign: i32| {
            let p = u.p() + v.p() * sign;
            let q = u.q() + v.q() * sign;
            let vertex = PVertex::new(p, q).expect("adjacent columns span a primitive vector");
            CliqueCompletion {
                in_range: self.contains(&vertex),
                vertex,
            }
        };
        Ok([completion(1), completion(-1)])
    }

    pub fn is_harmonic(&self, quad: &Quad) -> Result<bool, GraphError> {
        for v in quad {
            self.require(v)?;
        }
        Ok(is_harmonic(quad))
    }

    /// Harmonic quadruples `Q_1, …, Q_n` with `C ⊂ Q_1`, consecutive
    /// quadruples meeting in a maximal clique and `v ∈ Q_n`. Empty when
    /// `v ∈ C`. Shortest chains are found first.
    pub fn harmonic_chain(&self, clique: &Clique, v: &PVertex) -> Result<Vec<Quad>, GraphError> {
        for x in clique.iter().chain([v]) {
            self.require(x)?;
        }
        if !is_clique(clique) {
            return Err(GraphError::NotAClique);
        }
        if clique.contains(v) {
            return Ok(Vec::new());
        }
        let start = sorted_clique(clique.clone());
        let mut parent: HashMap<Clique, Option<Clique>> = HashMap::from([(start.clone(), None)]);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for (x, y, z) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                let [c0, c1] = self
                    .maximal_cliques_of_edge(&t[x], &t[y])
                    .expect("triangle sides are edges");
                let other = if c0.vertex == t[z] { c1 } else { c0 };
                if !other.in_range {
                    continue;
                }
                let next = sorted_clique([t[x].clone(), t[y].clone(), other.vertex.clone()]);
                if parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next.clone(), Some(t.clone()));
                if other.vertex == *v {
                    return Ok(unwind_chain(&parent, next));
                }
                queue.push_back(next);
            }
        }
        Err(GraphError::NoChainWithinBound {
            target: v.clone(),
            height: self.height,
        })
    }

    /// Adjacency and non-adjacency are preserved for every pair whose
    /// images stay in range.
    pub fn check_automorphism(&self, x: &ProjMat2) -> bool {
        let images: Vec<Option<usize>> = self
            .vertices
            .iter()
            .map(|v| self.index_of(&x.act(v)))
            .collect();
        for (i, xi) in images.iter().enumerate() {
            let Some(xi) = *xi else { continue };
            for (j, xj) in images.iter().enumerate().skip(i + 1) {
                let Some(xj) = *xj else { continue };
                let before = self.vertices[i].is_adjacent(&self.vertices[j]);
                let after = self.vertices[xi].is_adjacent(&self.vertices[xj]);
                if before != after || xi == xj {
                    return false;
                }
            }
        }
        true
    }

    /// Graphviz text, vertices in canonical order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph distant {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"{}\"];", v.label()).unwrap();
        }
        for (i, j) in self.edges() {
            writeln!(out, "  n{i} -- n{j};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// `{"p/q": ["p'/q'", …], …}` in canonical vertex order.
    pub fn to_adjacency_json(&self) -> String {
        let mut map = Map::new();
        for (v, ns) in self.vertices.iter().zip(&self.adjacency) {
            let mut ns: Vec<usize> = ns.clone();
            ns.sort_unstable();
            let list = ns
                .into_iter()
                .map(|j| Value::String(self.vertices[j].to_string()))
                .collect();
            map.insert(v.to_string(), Value::Array(list));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("plain strings");
        s.push('\n');
        s
    }
}

fn sorted_clique(mut c: Clique) -> Clique {
    c.sort();
    c
}

fn unwind_chain(parent: &HashMap<Clique, Option<Clique>>, last: Clique) -> Vec<Quad> {
    let mut triangles = vec![last];
    while let Some(Some(p)) = parent.get(triangles.last().unwrap()) {
        triangles.push(p.clone());
    }
    triangles.reverse();
    triangles
        .windows(2)
        .map(|pair| {
            let extra = pair[1]
                .iter()
                .find(|x| !pair[0].contains(x))
                .expect("neighboring triangles differ in one vertex");
            let [a, b, c] = pair[0].clone();
            [a, b, c, extra.clone()]
        })
        .collect()
}

pub fn is_clique(c: &Clique) -> bool {
    c[0].is_adjacent(&c[1]) && c[1].is_adjacent(&c[2]) && c[0].is_adjacent(&c[2])
}

/// Some labeling makes `(v_i, v_k, v_j, v_l)` a cycle of adjacent vertices
/// with `v_i ~ v_j` or `v_k ~ v_l`.
pub fn is_harmonic(quad: &Quad) -> bool {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if quad[i] == quad[j] {
                return false;
            }
        }
    }
    let adj = |a: usize, b: usize| quad[a].is_adjacent(&quad[b]);
    [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)]
        .into_iter()
        .any(|(i, j, k, l)| {
            adj(i, k) && adj(k, j) && adj(j, l) && adj(l, i) && (adj(i, j) || adj(k, l))
        })
}

pub fn check_automorphism(x: &ProjMat2, height: u64) -> Result<bool, GraphError> {
    Ok(DistantGraph::build(height)?.check_automorphism(x))
}

/// The element sending the ordered clique `c1` onto `c2` vertex by vertex.
pub fn clique_transitivity_map(c1: &Clique, c2: &Clique) -> Result<ProjMat2, GraphError> {
    if !is_clique(c1) || !is_clique(c2) {
        return Err(GraphError::NotAClique);
    }
    let columns = |u: &PVertex, v: &PVertex, s: i32| {
        IntMat2::new(u.p().clone(), v.p() * s, u.q().clone(), v.q() * s)
            .expect("adjacent columns are unimodular")
    };
    let src_inv = columns(&c1[0], &c1[1], 1).inverse();
    for s in [1, -1] {
        let x = ProjMat2::from_int(&columns(&c2[0], &c2[1], s) * &src_inv);
        if c1.iter().zip(c2).all(|(a, b)| &x.act(a) == b) {
            return Ok(x);
        }
    }
    Err(GraphError::NoSuchMap)
}

/// Per-check counts behind [`cayley_vs_distant`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IsoReport {
    pub vertices: usize,
    pub edges: usize,
    pub pairs_checked: usize,
    pub mismatches: Vec<String>,
}

impl IsoReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the Cayley graph of the generated group with the distant graph
/// through `α ↦ α(∞)`, on all vertices of height at most `height`.
pub fn cayley_vs_distant_report(
    w: &InvolutionWindow,
    height: u64,
) -> Result<IsoReport, DescentError> {
    let g = DistantGraph::build(height.max(1)).expect("height at least 1");
    let mut report = IsoReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        ..IsoReport::default()
    };
    let mut elements = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        match element_for_vertex(w, v) {
            Ok(a) => {
                if a.at_infinity() != *v {
                    report
                        .mismatches
                        .push(format!("element for {v} sends ∞ to {}", a.at_infinity()));
                }
                elements.push(Some(a));
            }
            Err(DescentError::OutOfWindow(n)) => return Err(DescentError::OutOfWindow(n)),
            Err(e) => {
                report.mismatches.push(format!("descent to {v}: {e}"));
                elements.push(None);
            }
        }
    }
    let distinct: HashSet<&ProjMat2> = elements.iter().flatten().collect();
    if distinct.len() != elements.iter().flatten().count() {
        report
            .mismatches
            .push("two vertices share an element".into());
    }
    let n = g.vertex_count();
    for i in 0..n {
        let Some(a) = &elements[i] else { continue };
        let a_inv = a.inverse();
        for (j, b) in elements.iter().enumerate().skip(i + 1) {
            let Some(b) = b else { continue };
            let y = a_inv.compose(b);
            let cayley = match y.at_infinity().as_integer() {
                Some(m) => {
                    let m = i64::try_from(m).map_err(|_| DescentError::OutOfWindow(i64::MAX))?;
                    sigma(w, m)? == y
                }
                None => false,
            };
            let distant = g.vertices()[i].is_adjacent(&g.vertices()[j]);
            report.pairs_checked += 1;
            if cayley != distant {
                report.mismatches.push(format!(
                    "{} {}: cayley {cayley} distant {distant}",
                    g.vertices()[i],
                    g.vertices()[j]
                ));
            }
        }
    }
    Ok(report)
}

pub fn cayley_vs_distant(w: &InvolutionWindow, height: u64) -> Result<bool, DescentError> {
    cayley_vs_distant_report(w, height).map(|r| r.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::{nu, tau};
    use crate::involution::assemble_ids;

    fn v(p: i64, q: i64) -> PVertex {
        PVertex::new(p, q).unwrap()
    }

    #[test]
    fn small_graphs() {
        let g = DistantGraph::build(1).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 5);
        assert!(!g.is_edge(&v(1, 1), &v(-1, 1)));
        assert_eq!(DistantGraph::build(2).unwrap().vertex_count(), 8);
        assert_eq!(DistantGraph::build(0).unwrap_err(), GraphError::ZeroHeight);
    }

    #[test]
    fn clique_completions() {
        let g = DistantGraph::build(1).unwrap();
        let c = g.maximal_cliques_of_edge(&v(1, 0), &v(0, 1)).unwrap();
        assert_eq!(
            c[0],
            CliqueCompletion {
                vertex: v(1, 1),
                in_range: true
            }
        );
        assert_eq!(
            c[1],
            CliqueCompletion {
                vertex: v(-1, 1),
                in_range: true
            }
        );

        let g = DistantGraph::build(2).unwrap();
        let c = g.maximal_cliques_of_edge(&v(1, 1), &v(2, 1)).unwrap();
        assert_eq!(
            c[0],
            CliqueCompletion {
                vertex: v(3, 2),
                in_range: false
            }
        );
        assert_eq!(
            c[1],
            CliqueCompletion {
                vertex: v(1, 0),
                in_range: true
            }
        );

        let c = g.maximal_cliques_of_edge(&v(1, 0), &v(2, 1)).unwrap();
        assert_eq!(
            c[0],
            CliqueCompletion {
                vertex: v(3, 1),
                in_range: false
            }
        );
        assert_eq!(
            c[1],
            CliqueCompletion {
                vertex: v(1, 1),
                in_range: true
            }
        );

        assert!(matches!(
            g.maximal_cliques_of_edge(&v(1, 1), &v(-1, 1)),
            Err(GraphError::NotAnEdge(..))
        ));
    }

    #[test]
    fn harmonic_examples() {
        assert!(is_harmonic(&[v(1, 0), v(0, 1), v(1, 1), v(-1, 1)]));
        // (2,1) is adjacent to (1,0) and (1,1) only
        assert!(is_harmonic(&[v(1, 0), v(0, 1), v(1, 1), v(2, 1)]));
        assert!(!is_harmonic(&[v(1, 0), v(0, 1), v(2, 1), v(-2, 1)]));
        assert!(!is_harmonic(&[v(1, 0), v(1, 0), v(1, 1), v(0, 1)]));
    }

    #[test]
    fn chain_examples() {
        let g = DistantGraph::build(2).unwrap();
        let c = [v(1, 0), v(0, 1), v(1, 1)];
        let chain = g.harmonic_chain(&c, &v(2, 1)).unwrap();
        assert_eq!(chain.len(), 1);
        assert!(chain[0].contains(&v(2, 1)));
        assert!(is_harmonic(&chain[0]));
        assert!(g.harmonic_chain(&c, &v(1, 1)).unwrap().is_empty());

        let chain = g.harmonic_chain(&c, &v(-2, 1)).unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain[0].contains(&v(-1, 1)));

        let g1 = DistantGraph::build(1).unwrap();
        assert!(matches!(
            g1.harmonic_chain(&c, &v(-2, 1)),
            Err(GraphError::NotInGraph(_))
        ));
    }

    #[test]
    fn automorphisms() {
        assert!(check_automorphism(&tau(), 3).unwrap());
        assert!(check_automorphism(&nu(), 3).unwrap());
    }

    #[test]
    fn transitivity_examples() {
        let c1 = [v(1, 0), v(0, 1), v(1, 1)];
        let x = clique_transitivity_map(&c1, &[v(0, 1), v(1, 0), v(1, 1)]).unwrap();
        assert_eq!(x, ProjMat2::from_entries(0, 1, 1, 0).unwrap());
        assert!(clique_transitivity_map(&c1, &c1).unwrap().is_identity());
        let x = clique_transitivity_map(&c1, &[v(1, 0), v(1, 1), v(2, 1)]).unwrap();
        assert_eq!(x, tau());
        assert_eq!(
            clique_transitivity_map(&c1, &[v(1, 0), v(0, 1), v(2, 1)]),
            Err(GraphError::NotAClique)
        );
    }

    #[test]
    fn cayley_examples() {
        let w = assemble_ids(&[1, 1, 1]).unwrap();
        let r = cayley_vs_distant_report(&w, 1).unwrap();
        assert!(r.holds(), "{:?}", r.mismatches);
        assert_eq!((r.vertices, r.edges), (4, 5));
        assert!(cayley_vs_distant(&w, 2).unwrap());

        let bad = w.with_entry(0, 0, -1).unwrap();
        assert!(!cayley_vs_distant(&bad, 1).unwrap());
    }

    #[test]
    fn exports() {
        let g = DistantGraph::build(1).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.matches("label=").count(), 4);
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert!(dot.contains("label=\"∞\""));
        let adj: serde_json::Value = serde_json::from_str(&g.to_adjacency_json()).unwrap();
        assert_eq!(adj["1/0"].as_array().unwrap().len(), 3);
        assert_eq!(adj["1/1"].as_array().unwrap().len(), 2);
    }
}
