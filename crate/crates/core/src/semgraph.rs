//! Conceptual-graph input: concept nodes with semantic attributes, linked by
//! role-labelled relations. Graph files are JSON:
//!
//! ```json
//! { "root": "g",
//!   "nodes": [{"id": "g", "key": "give", "attrs": {"aspect": "perfectif"}},
//!             {"id": "p", "key": "Pierre"}],
//!   "relations": [{"role": "agent", "from": "g", "to": "p"}] }
//! ```

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::{Aspect, Category, Degree, Grammar, PredType, Tense};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attributes {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tense: Option<Tense>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aspect: Option<Aspect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determination: Option<Degree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plural: Option<bool>,
}

impl Attributes {
    pub fn is_empty(&self) -> bool {
        *self == Attributes::default()
    }

    pub fn has_tma(&self) -> bool {
        self.tense.is_some() || self.aspect.is_some()
    }

    pub fn has_determination(&self) -> bool {
        self.determination.is_some() || self.plural.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptNode {
    pub id: String,
    pub key: String,
    #[serde(default, skip_serializing_if = "Attributes::is_empty")]
    pub attrs: Attributes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemRelation {
    pub role: String,
    pub from: String,
    pub to: String,
}

impl fmt::Display for SemRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.from, self.role, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptGraph {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
    pub nodes: Vec<ConceptNode>,
    #[serde(default)]
    pub relations: Vec<SemRelation>,
}

impl ConceptGraph {
    pub fn node(&self, id: &str) -> Option<&ConceptNode> {
        self.nodes.iter().find(|n| n.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph file: {0}")]
    ParseError(String),
    #[error("relation {relation} points to unknown node `{id}`")]
    DanglingEndpoint { relation: String, id: String },
    #[error("node id `{0}` used twice")]
    DuplicateId(String),
    #[error("relation {0} is a self-loop")]
    SelfLoop(String),
    #[error("graph has no nodes")]
    Empty,
}

pub fn parse_graph(document: &str) -> Result<ConceptGraph, GraphError> {
    let g: ConceptGraph = serde_json::from_str(document).map_err(|e| GraphError::ParseError(e.to_string()))?;
    if g.nodes.is_empty() {
        return Err(GraphError::Empty);
    }
    let mut ids = BTreeSet::new();
    for n in &g.nodes {
        if !ids.insert(n.id.as_str()) {
            return Err(GraphError::DuplicateId(n.id.clone()));
        }
    }
    for r in &g.relations {
        for end in [&r.from, &r.to] {
            if !ids.contains(end.as_str()) {
                return Err(GraphError::DanglingEndpoint {
                    relation: r.to_string(),
                    id: end.clone(),
                });
            }
        }
        if r.from == r.to {
            return Err(GraphError::SelfLoop(r.to_string()));
        }
    }
    if let Some(root) = &g.root {
        if !ids.contains(root.as_str()) {
            return Err(GraphError::DanglingEndpoint {
                relation: "root".into(),
                id: root.clone(),
            });
        }
    }
    Ok(g)
}

pub fn serialize_graph(graph: &ConceptGraph) -> String {
    serde_json::to_string_pretty(graph).expect("graphs always serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "issue")]
pub enum Issue {
    MissingLexeme { node: String, key: String },
    AspectOnState { node: String, aspect: Aspect },
    UnknownRole { role: String },
    InvalidDetermination { node: String, reason: String },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::MissingLexeme { node, key } => write!(f, "MissingLexeme: node `{}` has no entry for `{}`", node, key),
            Issue::AspectOnState { node, aspect } => {
                write!(f, "AspectOnState: node `{}` is a state and cannot take aspect {}", node, aspect)
            }
            Issue::UnknownRole { role } => write!(f, "UnknownRole: role `{}` is not declared by the grammar", role),
            Issue::InvalidDetermination { node, reason } => write!(f, "InvalidDetermination: node `{}`: {}", node, reason),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Category of a concept: the category of its first lexical entry.
pub fn concept_category(grammar: &Grammar, key: &str) -> Option<Category> {
    grammar.select_entries(key).first().map(|e| e.category)
}

pub fn validate_graph(graph: &ConceptGraph, grammar: &Grammar) -> ValidationReport {
    let mut issues = Vec::new();
    for n in &graph.nodes {
        let entries = grammar.select_entries(&n.key);
        if entries.is_empty() {
            issues.push(Issue::MissingLexeme {
                node: n.id.clone(),
                key: n.key.clone(),
            });
            continue;
        }
        if let Some(a) = n.attrs.aspect.filter(|a| *a != Aspect::Zero) {
            if entries.iter().all(|e| e.pred_type() == Some(PredType::Etat)) {
                issues.push(Issue::AspectOnState {
                    node: n.id.clone(),
                    aspect: a,
                });
            }
        }
        let category = entries[0].category;
        if n.attrs.plural == Some(true)
            && !matches!(n.attrs.determination, Some(Degree::Defini | Degree::Demonstratif))
        {
            issues.push(Issue::InvalidDetermination {
                node: n.id.clone(),
                reason: "plural needs a definite or demonstrative determination".into(),
            });
        }
        if category == Category::Pred && n.attrs.has_determination() {
            issues.push(Issue::InvalidDetermination {
                node: n.id.clone(),
                reason: "determination on a predicate".into(),
            });
        }
        if category == Category::N && n.attrs.has_tma() {
            issues.push(Issue::InvalidDetermination {
                node: n.id.clone(),
                reason: "tense or aspect on a noun".into(),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for r in &graph.relations {
        if grammar.role(&r.role).is_none() && seen.insert(r.role.clone()) {
            issues.push(Issue::UnknownRole { role: r.role.clone() });
        }
    }
    ValidationReport { issues }
}

/// Spanning tree of the graph from its root. Edges are relation indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverTree {
    pub root: String,
    /// In discovery order.
    pub tree_edges: Vec<usize>,
    /// Ascending.
    pub residual: Vec<usize>,
    /// Nodes in visiting order, root first.
    pub order: Vec<String>,
    /// For every node except the root, the tree edge that discovered it.
    pub discovered_by: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph is disconnected; unreachable: {}", .0.join(", "))]
pub struct DisconnectedGraph(pub Vec<String>);

const ROLE_PRIORITY: [&str; 5] = ["agent", "patient", "recipient", "attribute", "possessor"];

fn role_rank(grammar: &Grammar, role: &str) -> (usize, String) {
    if let Some(i) = ROLE_PRIORITY.iter().position(|r| *r == role) {
        return (i, String::new());
    }
    let circ = grammar
        .roles
        .iter()
        .filter(|r| r.is_circumstantial() && !ROLE_PRIORITY.contains(&r.name.as_str()))
        .position(|r| r.name == role);
    match circ {
        Some(i) => (ROLE_PRIORITY.len() + i, String::new()),
        None => (usize::MAX, role.to_string()),
    }
}

/// Root: the declared one, else the first node whose concept is realized as
/// a predicate, else the first node.
pub fn choose_root(graph: &ConceptGraph, grammar: &Grammar) -> String {
    graph
        .root
        .clone()
        .or_else(|| {
            graph
                .nodes
                .iter()
                .find(|n| concept_category(grammar, &n.key) == Some(Category::Pred))
                .map(|n| n.id.clone())
        })
        .unwrap_or_else(|| graph.nodes[0].id.clone())
}

/// Breadth-first traversal, following relations in either direction.
/// Incident edges are visited by role priority, outgoing before incoming,
/// then neighbour id, then file position.
pub fn cover_tree(graph: &ConceptGraph, grammar: &Grammar) -> Result<CoverTree, DisconnectedGraph> {
    let root = choose_root(graph, grammar);
    let mut visited = BTreeSet::from([root.clone()]);
    let mut queue = VecDeque::from([root.clone()]);
    let mut tree_edges = Vec::new();
    let mut order = Vec::new();
    let mut discovered_by = BTreeMap::new();
    while let Some(u) = queue.pop_front() {
        let mut incident: Vec<(usize, bool, &str)> = graph
            .relations
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                if r.from == u {
                    Some((i, true, r.to.as_str()))
                } else if r.to == u {
                    Some((i, false, r.from.as_str()))
                } else {
                    None
                }
            })
            .collect();
        incident.sort_by(|a, b| {
            let ka = (role_rank(grammar, &graph.relations[a.0].role), !a.1, a.2, a.0);
            let kb = (role_rank(grammar, &graph.relations[b.0].role), !b.1, b.2, b.0);
            ka.cmp(&kb)
        });
        for (i, _, v) in incident {
            if visited.insert(v.to_string()) {
                tree_edges.push(i);
                discovered_by.insert(v.to_string(), i);
                queue.push_back(v.to_string());
            }
        }
        order.push(u);
    }
    let unreachable: Vec<String> = graph
        .nodes
        .iter()
        .filter(|n| !visited.contains(&n.id))
        .map(|n| n.id.clone())
        .collect();
    if !unreachable.is_empty() {
        return Err(DisconnectedGraph(unreachable));
    }
    let in_tree: BTreeSet<usize> = tree_edges.iter().copied().collect();
    let residual = (0..graph.relations.len()).filter(|i| !in_tree.contains(i)).collect();
    Ok(CoverTree {
        root,
        tree_edges,
        residual,
        order,
        discovered_by,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PYE_BA: &str = r#"{
      "nodes": [
        {"id": "g", "key": "give", "attrs": {"tense": "unmarked", "aspect": "perfectif"}},
        {"id": "p", "key": "Pierre"},
        {"id": "r", "key": "Robert"},
        {"id": "b", "key": "book", "attrs": {"determination": "indefini"}},
        {"id": "n", "key": "beautiful"}
      ],
      "relations": [
        {"role": "agent", "from": "g", "to": "p"},
        {"role": "recipient", "from": "g", "to": "r"},
        {"role": "patient", "from": "g", "to": "b"},
        {"role": "attribute", "from": "b", "to": "n"}
      ]
    }"#;

    #[test]
    fn parse_five_nodes() {
        let g = parse_graph(PYE_BA).unwrap();
        assert_eq!(g.nodes.len(), 5);
        assert_eq!(g.relations.len(), 4);
    }

    #[test]
    fn parse_errors() {
        let dangling = r#"{"nodes":[{"id":"a","key":"sleep"}],"relations":[{"role":"agent","from":"a","to":"z"}]}"#;
        assert!(matches!(parse_graph(dangling), Err(GraphError::DanglingEndpoint { .. })));
        let dup = r#"{"nodes":[{"id":"a","key":"sleep"},{"id":"a","key":"I"}]}"#;
        assert_eq!(parse_graph(dup), Err(GraphError::DuplicateId("a".into())));
        let lp = r#"{"nodes":[{"id":"a","key":"sleep"}],"relations":[{"role":"agent","from":"a","to":"a"}]}"#;
        assert!(matches!(parse_graph(lp), Err(GraphError::SelfLoop(_))));
        assert_eq!(parse_graph(r#"{"nodes":[]}"#), Err(GraphError::Empty));
        assert!(matches!(parse_graph("{"), Err(GraphError::ParseError(_))));
        let bad_attr = r#"{"nodes":[{"id":"a","key":"sleep","attrs":{"mood":"x"}}]}"#;
        assert!(matches!(parse_graph(bad_attr), Err(GraphError::ParseError(_))));
    }

    #[test]
    fn single_node() {
        let g = parse_graph(r#"{"nodes":[{"id":"s","key":"sleep"}]}"#).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.relations.is_empty());
    }

    #[test]
    fn round_trip() {
        let g = parse_graph(PYE_BA).unwrap();
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn validation() {
        let gr = Grammar::shipped();
        assert!(validate_graph(&parse_graph(PYE_BA).unwrap(), &gr).is_clean());
        let g = parse_graph(r#"{"nodes":[{"id":"h","key":"have","attrs":{"aspect":"imperfectif"}},{"id":"x","key":"xyzzy"}],
            "relations":[{"role":"owner","from":"h","to":"x"}]}"#)
        .unwrap();
        let r = validate_graph(&g, &gr);
        assert!(r.issues.contains(&Issue::AspectOnState {
            node: "h".into(),
            aspect: Aspect::Imperfectif
        }));
        assert!(r.issues.contains(&Issue::MissingLexeme {
            node: "x".into(),
            key: "xyzzy".into()
        }));
        assert!(r.issues.contains(&Issue::UnknownRole { role: "owner".into() }));
    }

    #[test]
    fn cover_tree_of_pye_ba() {
        let gr = Grammar::shipped();
        let ct = cover_tree(&parse_graph(PYE_BA).unwrap(), &gr).unwrap();
        assert_eq!(ct.root, "g");
        // agent, patient, recipient from g; then the attribute from b
        assert_eq!(ct.tree_edges, vec![0, 2, 1, 3]);
        assert!(ct.residual.is_empty());
    }

    #[test]
    fn chain_and_parallel_edges() {
        let gr = Grammar::shipped();
        let chain = parse_graph(
            r#"{"root":"a","nodes":[{"id":"a","key":"x"},{"id":"b","key":"y"},{"id":"c","key":"z"}],
            "relations":[{"role":"r","from":"a","to":"b"},{"role":"r","from":"b","to":"c"}]}"#,
        )
        .unwrap();
        let ct = cover_tree(&chain, &gr).unwrap();
        assert_eq!((ct.root.as_str(), ct.tree_edges.len(), ct.residual.len()), ("a", 2, 0));

        let par = parse_graph(
            r#"{"nodes":[{"id":"g","key":"give"},{"id":"p","key":"Pierre"}],
            "relations":[{"role":"recipient","from":"g","to":"p"},{"role":"agent","from":"g","to":"p"}]}"#,
        )
        .unwrap();
        let ct = cover_tree(&par, &gr).unwrap();
        assert_eq!(ct.tree_edges, vec![1]);
        assert_eq!(ct.residual, vec![0]);
    }

    #[test]
    fn disconnected() {
        let gr = Grammar::shipped();
        let g = parse_graph(r#"{"nodes":[{"id":"a","key":"sleep"},{"id":"b","key":"I"}]}"#).unwrap();
        assert_eq!(cover_tree(&g, &gr), Err(DisconnectedGraph(vec!["b".into()])));
    }
}
