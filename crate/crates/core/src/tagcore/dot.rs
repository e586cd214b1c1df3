//! Graphviz output for derived trees and derivation trees.

use std::fmt::Write;

use super::derivation::{Argument, Derivation, Operation};
use super::tree::{NodeKind, TokenText, TreeNode};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn fs_label(n: &TreeNode) -> String {
    if n.top == n.bottom {
        n.top.to_string()
    } else {
        format!("{} / {}", n.top, n.bottom)
    }
}

/// Derived tree as a `digraph`. Lexical leaves are boxed, foot nodes carry
/// `*` and substitution slots `↓`.
pub fn tree_to_dot(tree: &TreeNode, name: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n  node [shape=plaintext];\n", escape(name));
    let mut counter = 0usize;
    fn go(n: &TreeNode, out: &mut String, counter: &mut usize) -> usize {
        let id = *counter;
        *counter += 1;
        match &n.kind {
            NodeKind::Lex(tok) => {
                let text = match &tok.text {
                    TokenText::Literal(s) if s.is_empty() => "∅".to_string(),
                    TokenText::Literal(s) => s.clone(),
                    TokenText::Var(v) => format!("<{}>", v),
                };
                let _ = writeln!(out, "  n{} [shape=box, label=\"{}\"];", id, escape(&text));
            }
            kind => {
                let mark = match kind {
                    NodeKind::Foot => "*",
                    NodeKind::Substitution => "↓",
                    NodeKind::Anchor => "@",
                    _ => "",
                };
                let _ = writeln!(
                    out,
                    "  n{} [label=\"{}{}\\n{}\"];",
                    id,
                    escape(&n.category),
                    mark,
                    escape(&fs_label(n))
                );
            }
        }
        for c in &n.children {
            let cid = go(c, out, counter);
            let _ = writeln!(out, "  n{} -> n{};", id, cid);
        }
        id
    }
    go(tree, &mut out, &mut counter);
    out.push_str("}\n");
    out
}

/// Derivation tree: one node per elementary tree or lexeme, edges labelled
/// with the operation and Gorn address.
pub fn derivation_to_dot(derivation: &Derivation, name: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n  node [shape=ellipse];\n", escape(name));
    let mut counter = 0usize;
    fn go(d: &Derivation, out: &mut String, counter: &mut usize) -> usize {
        let id = *counter;
        *counter += 1;
        let _ = writeln!(out, "  d{} [label=\"{}\"];", id, escape(&d.base));
        for step in &d.steps {
            let child = match &step.argument {
                Argument::Derived(inner) => go(inner, out, counter),
                Argument::Tree(name) => {
                    let cid = *counter;
                    *counter += 1;
                    let _ = writeln!(out, "  d{} [label=\"{}\"];", cid, escape(name));
                    cid
                }
                Argument::Lexeme(lx) => {
                    let cid = *counter;
                    *counter += 1;
                    let _ = writeln!(out, "  d{} [shape=box, label=\"{}\"];", cid, escape(&lx.lemma));
                    cid
                }
            };
            let op = match step.op {
                Operation::Substitute => "subst",
                Operation::Adjoin => "adjoin",
                Operation::Graft => "graft",
            };
            let _ = writeln!(out, "  d{} -> d{} [label=\"{} @ {}\"];", id, child, op, step.address);
        }
        id
    }
    go(derivation, &mut out, &mut counter);
    out.push_str("}\n");
    out
}
