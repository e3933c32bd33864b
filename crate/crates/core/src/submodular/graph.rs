use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;

use super::{GroundSet, Oracle, SetFunction, Subset};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: u32,
    pub target: u32,
    pub weight: f64,
}

/// A weighted directed graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    ground: GroundSet,
    edges: Vec<Edge>,
}

impl DirectedGraph {
    pub fn new(n: u32, edges: Vec<Edge>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        for (k, e) in edges.iter().enumerate() {
            let in_range = |v: u32| (1..=n).contains(&v);
            if !in_range(e.source) || !in_range(e.target) {
                return Err(Error::InvalidInstance(format!(
                    "edge {k}: vertex out of range 1..={n} in {} -> {}",
                    e.source, e.target
                )));
            }
            if e.source == e.target {
                return Err(Error::InvalidInstance(format!("edge {k}: self-loop on {}", e.source)));
            }
            if !(e.weight >= 0.0 && e.weight.is_finite()) {
                return Err(Error::InvalidInstance(format!(
                    "edge {k}: weight must be finite and nonnegative, got {}",
                    e.weight
                )));
            }
        }
        Ok(Self { ground, edges })
    }

    pub fn n(&self) -> u32 {
        self.ground.n()
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Total weight of edges leaving `s`.
    pub fn cut_value(&self, s: Subset) -> Result<f64> {
        self.ground.check(s)?;
        Ok(cut(&self.edges, s))
    }

    /// Cut function scaled by total edge weight, so every value is in `[0, 1]`.
    pub fn normalize(&self) -> Oracle<CutFunction> {
        Oracle::new(CutFunction::new(Arc::new(self.clone())))
    }
}

fn cut(edges: &[Edge], s: Subset) -> f64 {
    edges
        .iter()
        .filter(|e| s.contains(e.source) && !s.contains(e.target))
        .map(|e| e.weight)
        .sum()
}

/// Normalized directed cut: `cut(S) / W`, `W` the total weight (1 for an
/// all-zero graph).
#[derive(Debug, Clone, PartialEq)]
pub struct CutFunction {
    graph: Arc<DirectedGraph>,
    scale: f64,
}

impl CutFunction {
    pub fn new(graph: Arc<DirectedGraph>) -> Self {
        let total = graph.total_weight();
        let scale = if total > 0.0 { total } else { 1.0 };
        Self { graph, scale }
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }
}

impl SetFunction for CutFunction {
    fn ground(&self) -> GroundSet {
        self.graph.ground
    }

    fn value(&self, s: Subset) -> f64 {
        // A partial sum of nonnegative terms never exceeds the full sum in
        // floating point, so this stays in [0, 1]; `min` guards the division.
        (cut(&self.graph.edges, s) / self.scale).min(1.0)
    }
}

/// Random digraph: each ordered pair `(u, v)`, `u != v`, is an edge with
/// probability `density`, weight uniform in `[w_min, w_max]`.
pub fn random_digraph<R: Rng + ?Sized>(
    n: u32,
    density: f64,
    weights: (f64, f64),
    rng: &mut R,
) -> Result<DirectedGraph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Config(format!("edge density must be in [0, 1], got {density}")));
    }
    let (lo, hi) = weights;
    if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Config(format!("weight range must satisfy 0 <= min <= max, got [{lo}, {hi}]")));
    }
    let mut edges = Vec::new();
    for source in 1..=n {
        for target in 1..=n {
            if source == target {
                continue;
            }
            if rng.gen::<f64>() < density {
                let weight = lo + (hi - lo) * rng.gen::<f64>();
                edges.push(Edge { source, target, weight });
            }
        }
    }
    DirectedGraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn edge(source: u32, target: u32, weight: f64) -> Edge {
        Edge { source, target, weight }
    }

    #[test]
    fn single_edge_cut() {
        let g = DirectedGraph::new(2, vec![edge(1, 2, 1.0)]).unwrap();
        assert_eq!(g.cut_value(Subset::from_elements([1])).unwrap(), 1.0);
        assert_eq!(g.cut_value(Subset::from_elements([2])).unwrap(), 0.0);
        assert_eq!(g.cut_value(Subset::EMPTY).unwrap(), 0.0);
        assert_eq!(g.cut_value(Subset::full(2)).unwrap(), 0.0);
    }

    #[test]
    fn invalid_edges_rejected() {
        assert!(matches!(DirectedGraph::new(2, vec![edge(1, 3, 1.0)]), Err(Error::InvalidInstance(_))));
        assert!(matches!(DirectedGraph::new(2, vec![edge(0, 1, 1.0)]), Err(Error::InvalidInstance(_))));
        assert!(matches!(DirectedGraph::new(2, vec![edge(2, 2, 1.0)]), Err(Error::InvalidInstance(_))));
        assert!(matches!(DirectedGraph::new(2, vec![edge(1, 2, -1.0)]), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn normalization() {
        let g = DirectedGraph::new(2, vec![edge(1, 2, 2.0)]).unwrap();
        assert_eq!(g.normalize().evaluate(Subset::from_elements([1])).unwrap(), 1.0);

        let empty = DirectedGraph::new(3, vec![]).unwrap().normalize();
        for s in empty.ground().subsets() {
            assert_eq!(empty.evaluate(s).unwrap(), 0.0);
        }

        // 1->2 and 3->4; S = {1} holds one source, no targets.
        let two = DirectedGraph::new(4, vec![edge(1, 2, 1.0), edge(3, 4, 1.0)]).unwrap();
        assert_eq!(two.normalize().evaluate(Subset::from_elements([1])).unwrap(), 0.5);
    }

    #[test]
    fn empty_and_full_sets_cut_nothing() {
        let mut rng = crate::seed::rng_from_seed(3);
        for _ in 0..20 {
            let g = random_digraph(7, 0.6, (0.0, 2.0), &mut rng).unwrap();
            assert_eq!(g.cut_value(Subset::EMPTY).unwrap(), 0.0);
            assert_eq!(g.cut_value(Subset::full(7)).unwrap(), 0.0);
        }
    }
}
