//! The orbit graph: vertices are degree-N orbits (cone points), with a
//! directed edge o(I) → o(τI) for each orbit member I, which is also the
//! edge's unique label. On the cone the adjacency is concrete: z steps down
//! to z - e or up to z + e_i. Weighting edges by Fourier coefficients turns
//! closedness of a gradient-field function into a cocycle condition: weights
//! sum to zero around every cycle except the degree-0 loop.
//!
//! Cycle sums are checked on a fundamental basis from a spanning tree of the
//! underlying undirected graph; the basis spans the cycle space, so zero
//! sums there give zero sums on every cycle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::multiindex::{enumerate_orbits, enumerate_sorted_tuples, LatticePoint, MultiIndex};

/// Absolute tolerance on fundamental cycle sums.
pub const CYCLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GraphEdge {
    pub src: usize,
    pub dst: usize,
    pub label: MultiIndex,
    pub weight: Option<f64>,
}

/// Directed multigraph on the truncated cone with multi-index edge labels.
#[derive(Debug, Clone)]
pub struct OrbitGraph {
    degree: u32,
    bound: i64,
    vertices: Vec<LatticePoint>,
    vertex_index: BTreeMap<LatticePoint, usize>,
    edges: Vec<GraphEdge>,
}

impl OrbitGraph {
    /// Builds the graph on all cone points with coordinates ≤ bound. Each
    /// out-edge of a vertex comes from one member J of its orbit, pointing
    /// at the orbit of τJ and labeled J; edges whose head leaves the bound
    /// are dropped.
    pub fn build(degree: u32, bound: i64) -> OrbitGraph {
        let vertices = enumerate_orbits(degree, bound);
        let vertex_index: BTreeMap<LatticePoint, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut edges = Vec::new();
        for (src, vertex) in vertices.iter().enumerate() {
            for member in MultiIndex::decode(vertex).orbit() {
                let head = member.shift(1).cone_point();
                if let Some(&dst) = vertex_index.get(&head) {
                    debug_assert!(
                        !edges
                            .iter()
                            .any(|e: &GraphEdge| e.src == src && e.dst == dst),
                        "parallel edge between the same ordered pair"
                    );
                    edges.push(GraphEdge {
                        src,
                        dst,
                        label: member,
                        weight: None,
                    });
                }
            }
        }
        OrbitGraph {
            degree,
            bound,
            vertices,
            vertex_index,
            edges,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn vertex_id(&self, cone_point: &LatticePoint) -> Option<usize> {
        self.vertex_index.get(cone_point).copied()
    }

    pub fn find_edge(&self, src: &LatticePoint, dst: &LatticePoint) -> Option<&GraphEdge> {
        let (src, dst) = (self.vertex_id(src)?, self.vertex_id(dst)?);
        self.edges.iter().find(|e| e.src == src && e.dst == dst)
    }

    /// Attaches ξ̂ at each edge's label (0 when the label is outside the
    /// field's support).
    pub fn assign_weights(&self, coeffs: &CoefficientField) -> Result<OrbitGraph> {
        if coeffs.degree() != self.degree.max(1) && self.degree >= 1 {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: coeffs.degree(),
            });
        }
        let mut graph = self.clone();
        for edge in &mut graph.edges {
            edge.weight = Some(if self.degree == 0 {
                0.0
            } else {
                coeffs.value_at_index(&edge.label)
            });
        }
        Ok(graph)
    }

    /// Sets every weight from an explicit map; labels absent from the map
    /// get 0.
    pub fn assign_weights_from<F: Fn(&MultiIndex) -> f64>(&self, f: F) -> OrbitGraph {
        let mut graph = self.clone();
        for edge in &mut graph.edges {
            edge.weight = Some(f(&edge.label));
        }
        graph
    }

    /// Weak connectivity component count; one per degree on any bound.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for edge in &self.edges {
            let (a, b) = (find(&mut parent, edge.src), find(&mut parent, edge.dst));
            if a != b {
                parent[a] = b;
            }
        }
        (0..self.vertices.len())
            .filter(|&v| find(&mut parent, v) == v)
            .count()
    }

    /// Sums weights around every fundamental cycle (BFS spanning tree per
    /// component, orientation sign +1 along the edge direction). The
    /// degree-0 loop carries no closedness constraint and is excluded.
    pub fn cycle_check(&self) -> Result<CycleReport> {
        if self.edges.iter().any(|e| e.weight.is_none()) {
            return Err(Error::WeightsMissing);
        }
        let weight = |id: usize| self.edges[id].weight.expect("checked");

        // undirected adjacency: (edge id, neighbor, sign when leaving here)
        let mut adjacency: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); self.vertices.len()];
        for (id, edge) in self.edges.iter().enumerate() {
            if edge.src == edge.dst {
                continue; // the degree-0 loop
            }
            adjacency[edge.src].push((id, edge.dst, 1.0));
            adjacency[edge.dst].push((id, edge.src, -1.0));
        }

        let mut potential = vec![f64::NAN; self.vertices.len()];
        let mut tree_edge = vec![usize::MAX; self.vertices.len()];
        let mut in_tree = vec![false; self.edges.len()];
        let mut parent = vec![usize::MAX; self.vertices.len()];
        for root in 0..self.vertices.len() {
            if !potential[root].is_nan() {
                continue;
            }
            potential[root] = 0.0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(id, next, sign) in &adjacency[v] {
                    if potential[next].is_nan() {
                        potential[next] = potential[v] + sign * weight(id);
                        in_tree[id] = true;
                        tree_edge[next] = id;
                        parent[next] = v;
                        queue.push_back(next);
                    }
                }
            }
        }

        let mut cycles_checked = 0usize;
        let mut max_abs_cycle_sum = 0.0f64;
        let mut worst: Option<CycleDescription> = None;
        for (id, edge) in self.edges.iter().enumerate() {
            if in_tree[id] || edge.src == edge.dst {
                continue;
            }
            cycles_checked += 1;
            // follow the edge, then the tree path back from head to tail
            let sum = weight(id) + potential[edge.src] - potential[edge.dst];
            if sum.abs() > max_abs_cycle_sum {
                max_abs_cycle_sum = sum.abs();
                let mut edge_ids = vec![id];
                edge_ids.extend(self.tree_path(edge.dst, edge.src, &parent, &tree_edge));
                worst = Some(CycleDescription { edge_ids, sum });
            }
        }
        Ok(CycleReport {
            ok: max_abs_cycle_sum <= CYCLE_TOL,
            cycles_checked,
            max_abs_cycle_sum,
            worst_cycle: worst,
        })
    }

    /// Tree path between two vertices of one component, as edge ids.
    fn tree_path(
        &self,
        from: usize,
        to: usize,
        parent: &[usize],
        tree_edge: &[usize],
    ) -> Vec<usize> {
        let ancestors = |mut v: usize| {
            let mut path = vec![v];
            while parent[v] != usize::MAX {
                v = parent[v];
                path.push(v);
            }
            path
        };
        let up_from = ancestors(from);
        let up_to = ancestors(to);
        let meet = *up_from
            .iter()
            .find(|v| up_to.contains(v))
            .expect("same component");
        let mut edges = Vec::new();
        for &leg in &[from, to] {
            let mut v = leg;
            while v != meet {
                edges.push(tree_edge[v]);
                v = parent[v];
            }
        }
        edges
    }

    /// Verifies that degree-N multi-indices with sites in the window
    /// correspond one-to-one with edges: exactly one edge per multi-index
    /// whose endpoint orbits are both within bound, none otherwise.
    pub fn edge_bijection_check(&self, window: i64) -> bool {
        for z in enumerate_sorted_tuples(self.degree, -window, window) {
            let index = MultiIndex::decode(&z);
            let src = index.cone_point();
            let dst = index.shift(1).cone_point();
            let both_in = self.vertex_index.contains_key(&src)
                && self.vertex_index.contains_key(&dst);
            let count = self.edges.iter().filter(|e| e.label == index).count();
            if count != usize::from(both_in) {
                return false;
            }
        }
        true
    }

    /// Dump format: one `src | dst | label | weight` line per edge.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for edge in &self.edges {
            let weight = match edge.weight {
                Some(w) => w.to_string(),
                None => "-".into(),
            };
            out.push_str(&format!(
                "{} | {} | {} | {}\n",
                self.vertices[edge.src], self.vertices[edge.dst], edge.label, weight
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct CycleDescription {
    pub edge_ids: Vec<usize>,
    pub sum: f64,
}

#[derive(Debug, Clone)]
pub struct CycleReport {
    pub ok: bool,
    pub cycles_checked: usize,
    pub max_abs_cycle_sum: f64,
    pub worst_cycle: Option<CycleDescription>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgen::{gen_exact, OrbitFunction};
    use crate::field::{expansion_to_coeffs, VectorField, COEFF_TOL};
    use crate::hermite::HermiteExpansion;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lp(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    #[test]
    fn degree0_graph_is_a_loop() {
        let graph = OrbitGraph::build(0, 5);
        assert_eq!(graph.vertices().len(), 1);
        assert_eq!(graph.edges().len(), 1);
        let edge = &graph.edges()[0];
        assert_eq!(edge.src, edge.dst);
        assert!(edge.label.is_zero());
        assert_eq!(graph.component_count(), 1);
    }

    #[test]
    fn degree1_adjacency_is_bidirectional_chain() {
        let bound = 4;
        let graph = OrbitGraph::build(1, bound);
        assert_eq!(graph.vertices().len(), 5);
        for n in 0..bound {
            let up = graph.find_edge(&lp(&[n]), &lp(&[n + 1])).unwrap();
            assert_eq!(up.label, MultiIndex::delta(-n));
            let down = graph.find_edge(&lp(&[n + 1]), &lp(&[n])).unwrap();
            assert_eq!(down.label, MultiIndex::delta(n + 1));
        }
        assert_eq!(graph.edges().len(), 2 * bound as usize);
        assert_eq!(graph.component_count(), 1);
    }

    #[test]
    fn degree2_adjacency_matches_cone_rule() {
        // every edge is z → z-e or z → z+e_i, and every such in-bound pair
        // is an edge
        let bound = 4;
        let graph = OrbitGraph::build(2, bound);
        for edge in graph.edges() {
            let src = &graph.vertices()[edge.src];
            let dst = graph.vertices()[edge.dst].clone();
            let down = src.add_diagonal(-1);
            let ups: Vec<LatticePoint> =
                (0..2).map(|axis| src.add_unit(axis, 1)).collect();
            assert!(
                dst == down || ups.contains(&dst),
                "edge {src} → {dst} breaks the rule"
            );
        }
        for vertex in graph.vertices() {
            let mut expected = Vec::new();
            let down = vertex.add_diagonal(-1);
            if down.is_cone() {
                expected.push(down);
            }
            for axis in 0..2 {
                let up = vertex.add_unit(axis, 1);
                if up.is_cone() && up.coords().iter().all(|&c| c <= bound) {
                    expected.push(up);
                }
            }
            expected.sort();
            expected.dedup();
            let mut actual: Vec<LatticePoint> = graph
                .edges()
                .iter()
                .filter(|e| graph.vertices()[e.src] == *vertex)
                .map(|e| graph.vertices()[e.dst].clone())
                .collect();
            actual.sort();
            assert_eq!(actual, expected, "out-edges of {vertex}");
        }
        assert_eq!(graph.component_count(), 1);
    }

    #[test]
    fn component_counts() {
        assert_eq!(OrbitGraph::build(1, 10).component_count(), 1);
        assert_eq!(OrbitGraph::build(2, 4).component_count(), 1);
        assert_eq!(OrbitGraph::build(0, 1).component_count(), 1);
    }

    fn coeffs_of(exp: &HermiteExpansion, window: i64) -> CoefficientField {
        expansion_to_coeffs(exp, 1, window).unwrap()
    }

    #[test]
    fn weight_assignment_examples() {
        let graph = OrbitGraph::build(1, 4);
        let weighted = graph
            .assign_weights(&coeffs_of(&HermiteExpansion::x(0), 6))
            .unwrap();
        for edge in weighted.edges() {
            let expected = if edge.label == MultiIndex::delta(0) { 1.0 } else { 0.0 };
            assert_eq!(edge.weight, Some(expected));
        }

        let gradient = HermiteExpansion::x(1) - HermiteExpansion::x(0);
        let weighted = graph.assign_weights(&coeffs_of(&gradient, 6)).unwrap();
        let up = weighted.find_edge(&lp(&[0]), &lp(&[1])).unwrap();
        assert_eq!(up.weight, Some(-1.0));
        let down = weighted.find_edge(&lp(&[1]), &lp(&[0])).unwrap();
        assert_eq!(down.weight, Some(1.0));
    }

    #[test]
    fn cycle_check_examples() {
        let graph = OrbitGraph::build(1, 4);

        let gradient = HermiteExpansion::x(1) - HermiteExpansion::x(0);
        let report = graph
            .assign_weights(&coeffs_of(&gradient, 6))
            .unwrap()
            .cycle_check()
            .unwrap();
        assert!(report.ok, "x_1 - x_0 is Y_0-closed: {report:?}");
        assert!(report.cycles_checked >= 4);

        let report = graph
            .assign_weights(&coeffs_of(&HermiteExpansion::x(0), 6))
            .unwrap()
            .cycle_check()
            .unwrap();
        assert!(!report.ok);
        let worst = report.worst_cycle.unwrap();
        assert!((worst.sum.abs() - 1.0).abs() < 1e-12, "cycle 0→1→0 sums to 1");
        assert_eq!(worst.edge_ids.len(), 2);

        let zeros = graph.assign_weights_from(|_| 0.0);
        assert!(zeros.cycle_check().unwrap().ok);
    }

    #[test]
    fn cycle_check_requires_weights() {
        let graph = OrbitGraph::build(1, 3);
        assert!(matches!(graph.cycle_check(), Err(Error::WeightsMissing)));
    }

    #[test]
    fn degree0_loop_excluded() {
        let graph = OrbitGraph::build(0, 1).assign_weights_from(|_| 5.0);
        let report = graph.cycle_check().unwrap();
        assert!(report.ok);
        assert_eq!(report.cycles_checked, 0);
    }

    #[test]
    fn edge_bijection_examples() {
        assert!(OrbitGraph::build(1, 6).edge_bijection_check(5));
        assert!(OrbitGraph::build(2, 4).edge_bijection_check(3));
        assert!(OrbitGraph::build(1, 0).edge_bijection_check(0));
    }

    #[test]
    fn closed_implies_cocycle() {
        // exact functions are closed; their weights must cancel on cycles
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let y0 = VectorField::y0();
        for degree in 1..=2u32 {
            let graph = OrbitGraph::build(degree, 4);
            for _ in 0..10 {
                let cones = enumerate_orbits(degree, 2);
                let c = OrbitFunction::new(
                    degree,
                    (0..3).map(|_| {
                        (
                            cones[rng.gen_range(0..cones.len())].clone(),
                            rng.gen_range(-2.0..2.0),
                        )
                    }),
                )
                .unwrap();
                let xi = gen_exact(&y0, &c, 8).unwrap();
                assert!(y0.is_closed_coeffs(&xi, COEFF_TOL).closed);
                let report = graph.assign_weights(&xi).unwrap().cycle_check().unwrap();
                assert!(report.ok, "closed weights must be a cocycle: {report:?}");
            }
        }
    }

    #[test]
    fn failing_cycles_imply_failing_closedness() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let y0 = VectorField::y0();
        let mut failures_seen = 0;
        for degree in 1..=2u32 {
            let graph = OrbitGraph::build(degree, 6);
            for _ in 0..20 {
                let window = 8;
                let tuples = enumerate_sorted_tuples(degree, -2, 2);
                let xi = CoefficientField::new(
                    degree,
                    window,
                    (0..4).map(|_| {
                        (
                            tuples[rng.gen_range(0..tuples.len())].clone(),
                            rng.gen_range(-2.0..2.0),
                        )
                    }),
                )
                .unwrap();
                let report = graph.assign_weights(&xi).unwrap().cycle_check().unwrap();
                if !report.ok {
                    failures_seen += 1;
                    assert!(
                        !y0.is_closed_coeffs(&xi, COEFF_TOL).closed,
                        "cocycle failure must be a closedness failure"
                    );
                }
            }
        }
        assert!(failures_seen > 10, "fuzz should produce failing fields");
    }

    #[test]
    fn exact_weights_mostly_zero() {
        let y0 = VectorField::y0();
        let c = OrbitFunction::indicator(lp(&[1])).unwrap();
        let xi = gen_exact(&y0, &c, 4).unwrap();
        let graph = OrbitGraph::build(1, 12)
            .assign_weights(&xi)
            .unwrap();
        let nonzero = graph
            .edges()
            .iter()
            .filter(|e| e.weight != Some(0.0))
            .count();
        assert!(nonzero <= 4, "finite c gives finitely many weights");
        assert!(graph.edges().len() >= 24);
    }

    #[test]
    fn dump_format() {
        let graph = OrbitGraph::build(1, 1).assign_weights_from(|_| 1.5);
        let dump = graph.dump();
        assert!(dump.lines().all(|l| l.split(" | ").count() == 4));
        assert!(dump.contains("0 | 1 | 0:1 | 1.5"));
    }
}
