//! Graph documents: parsing, serialization round trips, validation.

use proptest::prelude::*;

use creole_tag::grammar::Grammar;
use creole_tag::semgraph::{parse_graph, serialize_graph, validate_graph, GraphError, Issue};

fn doc(nodes: &[(&str, &str)], rels: &[(&str, &str, &str)]) -> String {
    let nodes: Vec<_> = nodes.iter().map(|(i, k)| serde_json::json!({"id": i, "key": k})).collect();
    let rels: Vec<_> = rels
        .iter()
        .map(|(r, f, t)| serde_json::json!({"role": r, "from": f, "to": t}))
        .collect();
    serde_json::json!({"nodes": nodes, "relations": rels}).to_string()
}

#[test]
fn structural_errors() {
    assert!(matches!(parse_graph("[]"), Err(GraphError::ParseError(_))));
    assert!(matches!(parse_graph(&doc(&[], &[])), Err(GraphError::Empty)));
    assert!(matches!(
        parse_graph(&doc(&[("a", "sleep")], &[("agent", "a", "b")])),
        Err(GraphError::DanglingEndpoint { .. })
    ));
    assert!(matches!(
        parse_graph(&doc(&[("a", "sleep"), ("a", "I")], &[])),
        Err(GraphError::DuplicateId(_))
    ));
    assert!(matches!(
        parse_graph(&doc(&[("a", "sleep")], &[("agent", "a", "a")])),
        Err(GraphError::SelfLoop(_))
    ));
}

#[test]
fn unknown_attribute_is_rejected() {
    let d = r#"{"nodes":[{"id":"a","key":"sleep","attrs":{"mood":"irrealis"}}],"relations":[]}"#;
    assert!(matches!(parse_graph(d), Err(GraphError::ParseError(_))));
}

#[test]
fn validation_collects_every_issue() {
    let g = Grammar::shipped();
    let d = r#"{"nodes":[
        {"id":"a","key":"tired","attrs":{"aspect":"imperfectif"}},
        {"id":"b","key":"unicorn"},
        {"id":"c","key":"house","attrs":{"tense":"passe"}}],
      "relations":[{"role":"agent","from":"a","to":"b"},{"role":"owner","from":"c","to":"a"}]}"#;
    let report = validate_graph(&parse_graph(d).unwrap(), &g);
    assert!(!report.is_clean());
    let kinds: Vec<&str> = report
        .issues
        .iter()
        .map(|i| match i {
            Issue::MissingLexeme { .. } => "missing",
            Issue::AspectOnState { .. } => "aspect",
            Issue::UnknownRole { .. } => "role",
            Issue::InvalidDetermination { .. } => "det",
        })
        .collect();
    for k in ["missing", "aspect", "role", "det"] {
        assert!(kinds.contains(&k), "{:?}", kinds);
    }
}

fn graph_doc() -> impl Strategy<Value = String> {
    let keys = prop::sample::select(vec!["sleep", "I", "book", "give", "big"]);
    let roles = prop::sample::select(vec!["agent", "patient", "recipient", "attribute"]);
    (prop::collection::vec(keys, 1..6), prop::collection::vec((roles, 0..6usize, 0..6usize), 0..6)).prop_map(
        |(keys, rels)| {
            let n = keys.len();
            let nodes: Vec<(String, &str)> = keys.iter().enumerate().map(|(i, k)| (format!("n{}", i), *k)).collect();
            let rels: Vec<(&str, String, String)> = rels
                .into_iter()
                .filter(|(_, f, t)| f % n != t % n)
                .map(|(r, f, t)| (r, format!("n{}", f % n), format!("n{}", t % n)))
                .collect();
            let nodes: Vec<(&str, &str)> = nodes.iter().map(|(i, k)| (i.as_str(), *k)).collect();
            let rels: Vec<(&str, &str, &str)> = rels.iter().map(|(r, f, t)| (*r, f.as_str(), t.as_str())).collect();
            doc(&nodes, &rels)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn serialization_round_trips(d in graph_doc()) {
        let g = parse_graph(&d).unwrap();
        let again = parse_graph(&serialize_graph(&g)).unwrap();
        prop_assert_eq!(&again, &g);
        prop_assert_eq!(serialize_graph(&again), serialize_graph(&g));
    }
}
