//! Weighted signed networks.
//!
//! Nodes are dense `u32` indices with a bijective label index. Each node keeps
//! its out-edges sorted by target and its in-edges sorted by source, so every
//! traversal visits neighbours in `NodeId` order and floating-point sums are
//! reproducible regardless of the order edges were inserted.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Whether a rating move created a new edge or replaced an existing weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    EdgeAddition,
    WeightUpdate,
}

#[inline]
fn check_weight(w: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(Error::WeightOutOfRange(w))
    }
}

/// A directed graph with edge weights in `[-1, 1]`, no self-loops and at most
/// one edge per ordered pair.
#[derive(Clone, Debug, Default)]
pub struct Wsn {
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
    out_edges: Vec<Vec<(NodeId, f64)>>,
    in_edges: Vec<Vec<(NodeId, f64)>>,
    edge_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbourhood {
    pub pred: BTreeSet<NodeId>,
    pub succ: BTreeSet<NodeId>,
    pub indeg: usize,
    pub outdeg: usize,
}

impl Wsn {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph with `n` isolated nodes labelled `"0"` .. `"n-1"`.
    pub fn with_nodes(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_node();
        }
        g
    }

    /// Adds a node labelled with its own index (suffixed if that label is taken).
    pub fn add_node(&mut self) -> NodeId {
        let mut label = self.labels.len().to_string();
        while self.label_index.contains_key(&label) {
            label.push('\'');
        }
        self.push_node(label)
    }

    /// Returns the node carrying `label`, creating it if needed.
    pub fn node_for_label(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.label_index.get(label) {
            return id;
        }
        self.push_node(label.to_owned())
    }

    /// Adds a node with a label derived from `prefix` that is unique in the graph.
    pub fn add_labelled_node(&mut self, prefix: &str) -> NodeId {
        let mut label = format!("{prefix}{}", self.labels.len());
        while self.label_index.contains_key(&label) {
            label.push('\'');
        }
        self.push_node(label)
    }

    fn push_node(&mut self, label: String) -> NodeId {
        let id = NodeId::from(self.labels.len());
        self.label_index.insert(label.clone(), id);
        self.labels.push(label);
        self.out_edges.push(Vec::new());
        self.in_edges.push(Vec::new());
        id
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(NodeId::from)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.labels.len()
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    pub fn id_of(&self, label: &str) -> Result<NodeId> {
        self.label_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let out = self.out_edges.get(u.index())?;
        out.binary_search_by_key(&v, |&(t, _)| t)
            .ok()
            .map(|i| out[i].1)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.weight(u, v).is_some()
    }

    /// Incoming edges of `v` as `(source, weight)`, sorted by source.
    pub fn predecessors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.in_edges[v.index()]
    }

    /// Outgoing edges of `u` as `(target, weight)`, sorted by target.
    pub fn successors(&self, u: NodeId) -> &[(NodeId, f64)] {
        &self.out_edges[u.index()]
    }

    pub fn indeg(&self, v: NodeId) -> usize {
        self.in_edges[v.index()].len()
    }

    pub fn outdeg(&self, u: NodeId) -> usize {
        self.out_edges[u.index()].len()
    }

    pub fn neighbourhood(&self, v: NodeId) -> Result<Neighbourhood> {
        self.check_node(v)?;
        let pred: BTreeSet<_> = self.predecessors(v).iter().map(|&(u, _)| u).collect();
        let succ: BTreeSet<_> = self.successors(v).iter().map(|&(u, _)| u).collect();
        Ok(Neighbourhood {
            indeg: pred.len(),
            outdeg: succ.len(),
            pred,
            succ,
        })
    }

    /// All edges as `(source, target, weight)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(u, out)| out.iter().map(move |&(v, w)| (NodeId::from(u), v, w)))
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, w: f64) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        check_weight(w)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let out = &mut self.out_edges[u.index()];
        match out.binary_search_by_key(&v, |&(t, _)| t) {
            Ok(_) => return Err(Error::DuplicateEdge(u, v)),
            Err(pos) => out.insert(pos, (v, w)),
        }
        let inc = &mut self.in_edges[v.index()];
        let pos = inc
            .binary_search_by_key(&u, |&(s, _)| s)
            .expect_err("in/out adjacency out of sync");
        inc.insert(pos, (u, w));
        self.edge_count += 1;
        Ok(())
    }

    pub fn update_weight(&mut self, u: NodeId, v: NodeId, w: f64) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        check_weight(w)?;
        let out = &mut self.out_edges[u.index()];
        let i = out
            .binary_search_by_key(&v, |&(t, _)| t)
            .map_err(|_| Error::MissingEdge(u, v))?;
        out[i].1 = w;
        let inc = &mut self.in_edges[v.index()];
        let j = inc
            .binary_search_by_key(&u, |&(s, _)| s)
            .expect("in/out adjacency out of sync");
        inc[j].1 = w;
        Ok(())
    }

    /// Rates `v` from `u`: adds the edge, or replaces the weight if it exists.
    pub fn set_weight(&mut self, u: NodeId, v: NodeId, w: f64) -> Result<MoveKind> {
        if self.has_edge(u, v) {
            self.update_weight(u, v, w)?;
            Ok(MoveKind::WeightUpdate)
        } else {
            self.add_edge(u, v, w)?;
            Ok(MoveKind::EdgeAddition)
        }
    }

    /// Removes `(u, v)` and returns its weight.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<f64> {
        self.check_node(u)?;
        self.check_node(v)?;
        let out = &mut self.out_edges[u.index()];
        let i = out
            .binary_search_by_key(&v, |&(t, _)| t)
            .map_err(|_| Error::MissingEdge(u, v))?;
        let (_, w) = out.remove(i);
        let inc = &mut self.in_edges[v.index()];
        let j = inc
            .binary_search_by_key(&u, |&(s, _)| s)
            .expect("in/out adjacency out of sync");
        inc.remove(j);
        self.edge_count -= 1;
        Ok(w)
    }
}

/// Half-width of a raw rating scale, e.g. 10 for ratings in `{-10, ..., 10}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatingScale {
    r_max: f64,
}

impl RatingScale {
    pub const UNIT: RatingScale = RatingScale { r_max: 1.0 };

    pub fn new(r_max: f64) -> Result<Self> {
        if r_max.is_finite() && r_max > 0.0 {
            Ok(Self { r_max })
        } else {
            Err(Error::InvalidScale(r_max))
        }
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }
}

/// Maps a raw rating linearly onto `[-1, 1]`.
pub fn normalize_rating(raw: f64, scale: RatingScale) -> Result<f64> {
    if raw.is_nan() || raw.abs() > scale.r_max {
        return Err(Error::RatingOutOfScale {
            raw,
            r_max: scale.r_max,
        });
    }
    Ok(raw / scale.r_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(i: u32) -> NodeId {
        NodeId(i)
    }

    #[test]
    fn add_edge_updates_degrees() {
        let mut g = Wsn::with_nodes(2);
        g.add_edge(n(0), n(1), 0.5).unwrap();
        assert_eq!(g.indeg(n(1)), 1);
        assert_eq!(g.outdeg(n(0)), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(n(0), n(1)), Some(0.5));
    }

    #[test]
    fn add_edge_rejects_bad_input() {
        let mut g = Wsn::with_nodes(3);
        assert!(matches!(
            g.add_edge(n(0), n(1), 1.2),
            Err(Error::WeightOutOfRange(_))
        ));
        assert!(matches!(
            g.add_edge(n(0), n(0), 0.1),
            Err(Error::SelfLoop(_))
        ));
        assert!(matches!(
            g.add_edge(n(0), n(1), f64::NAN),
            Err(Error::WeightOutOfRange(_))
        ));
        g.add_edge(n(0), n(1), 0.1).unwrap();
        assert!(matches!(
            g.add_edge(n(0), n(1), 0.2),
            Err(Error::DuplicateEdge(..))
        ));
        assert!(matches!(
            g.add_edge(n(0), n(7), 0.2),
            Err(Error::UnknownNode(_))
        ));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn update_weight_replaces() {
        let mut g = Wsn::with_nodes(4);
        g.add_edge(n(0), n(1), 1.0).unwrap();
        g.update_weight(n(0), n(1), -1.0).unwrap();
        assert_eq!(g.weight(n(0), n(1)), Some(-1.0));
        assert_eq!(g.predecessors(n(1)), &[(n(0), -1.0)]);
        assert_eq!(g.edge_count(), 1);

        assert!(matches!(
            g.update_weight(n(2), n(3), 0.0),
            Err(Error::MissingEdge(..))
        ));
        assert!(matches!(
            g.update_weight(n(0), n(1), -1.5),
            Err(Error::WeightOutOfRange(_))
        ));

        let before: Vec<_> = g.edges().collect();
        g.update_weight(n(0), n(1), -1.0).unwrap();
        assert_eq!(before, g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn neighbourhood_queries() {
        let mut g = Wsn::with_nodes(3);
        let iso = g.neighbourhood(n(2)).unwrap();
        assert!(iso.pred.is_empty() && iso.succ.is_empty());
        assert_eq!((iso.indeg, iso.outdeg), (0, 0));

        g.add_edge(n(0), n(1), 1.0).unwrap();
        assert_eq!(g.neighbourhood(n(1)).unwrap().pred, BTreeSet::from([n(0)]));
        assert_eq!(g.neighbourhood(n(0)).unwrap().succ, BTreeSet::from([n(1)]));

        g.add_edge(n(1), n(2), 1.0).unwrap();
        g.add_edge(n(2), n(0), 1.0).unwrap();
        for v in g.nodes() {
            let nb = g.neighbourhood(v).unwrap();
            assert_eq!((nb.indeg, nb.outdeg), (1, 1));
        }
        assert!(matches!(g.neighbourhood(n(9)), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn normalize_examples() {
        let s = RatingScale::new(10.0).unwrap();
        assert_eq!(normalize_rating(10.0, s).unwrap(), 1.0);
        assert_eq!(normalize_rating(-10.0, s).unwrap(), -1.0);
        assert_eq!(normalize_rating(3.0, s).unwrap(), 0.3);
        assert!(normalize_rating(10.5, s).is_err());
        assert!(RatingScale::new(0.0).is_err());
    }

    #[test]
    fn labels_are_bijective() {
        let mut g = Wsn::new();
        let a = g.node_for_label("alice");
        let b = g.node_for_label("bob");
        assert_eq!(g.node_for_label("alice"), a);
        assert_eq!(g.id_of("bob").unwrap(), b);
        assert_eq!(g.label(a), "alice");
        let c = g.add_node();
        assert_eq!(g.label(c), "2");
        g.node_for_label("4");
        let d = g.add_node();
        assert_eq!(g.label(d), "4'");
    }

    fn edit_script() -> impl Strategy<Value = Vec<(u32, u32, f64)>> {
        prop::collection::vec((0u32..12, 0u32..12, -1.0f64..=1.0), 0..60)
    }

    proptest! {
        #[test]
        fn degree_sums_match_edge_count(script in edit_script()) {
            let mut g = Wsn::with_nodes(12);
            for (u, v, w) in script {
                let _ = g.set_weight(n(u), n(v), w);
            }
            let indeg: usize = g.nodes().map(|v| g.indeg(v)).sum();
            let outdeg: usize = g.nodes().map(|v| g.outdeg(v)).sum();
            prop_assert_eq!(indeg, g.edge_count());
            prop_assert_eq!(outdeg, g.edge_count());
            prop_assert_eq!(g.edges().count(), g.edge_count());
            for (u, v, w) in g.edges() {
                prop_assert!((-1.0..=1.0).contains(&w));
                prop_assert!(u != v);
                prop_assert_eq!(g.predecessors(v).iter().find(|e| e.0 == u).map(|e| e.1), Some(w));
            }
        }

        #[test]
        fn add_then_remove_is_identity(script in edit_script(), u in 0u32..12, v in 0u32..12, w in -1.0f64..=1.0) {
            let mut g = Wsn::with_nodes(12);
            for (a, b, x) in script {
                let _ = g.set_weight(n(a), n(b), x);
            }
            prop_assume!(u != v && !g.has_edge(n(u), n(v)));
            let before: Vec<_> = g.edges().collect();
            g.add_edge(n(u), n(v), w).unwrap();
            prop_assert_eq!(g.remove_edge(n(u), n(v)).unwrap(), w);
            prop_assert_eq!(before, g.edges().collect::<Vec<_>>());
        }

        #[test]
        fn normalize_is_odd(x in -10.0f64..=10.0) {
            let s = RatingScale::new(10.0).unwrap();
            prop_assert_eq!(normalize_rating(-x, s).unwrap(), -normalize_rating(x, s).unwrap());
        }
    }
}
