//! Generation pipeline: plan the graph, realize each sentence as a derived
//! tree, finalize, linearize, and spell the tokens out.

pub mod plan;
mod realize;
pub mod surface;

use serde::Serialize;
use thiserror::Error;

use crate::fstruct::Bindings;
use crate::grammar::{Aspect, Grammar};
use crate::semgraph::ConceptGraph;
use crate::tagcore::{finalize, provenance, Derivation, TokenProvenance, TreeError, TreeNode};

pub use plan::{plan, ClausePlan, Filler, Home, NounPlan, RealizationPlan, Strategy, Unit};
pub use realize::{ANAPHOR, AUX_RELATIVE, GN_GAP, GN_PREDEF, NBAR};
pub use surface::{surface, DanglingAttachment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("MissingLexeme: no lexical entry for `{key}` (node `{node}`)")]
    MissingLexeme { node: String, key: String },
    #[error("AspectOnState: node `{node}` is a state and cannot take aspect {aspect}")]
    AspectOnState { node: String, aspect: Aspect },
    #[error("node `{0}` is a process and needs a non-zero aspect")]
    ZeroAspectOnProcess(String),
    #[error("UnknownRole: role `{0}` is not declared by the grammar")]
    UnknownRole(String),
    #[error("InvalidDetermination: node `{node}`: {reason}")]
    InvalidDetermination { node: String, reason: String },
    #[error("DisconnectedGraph: unreachable nodes {}", .0.join(", "))]
    DisconnectedGraph(Vec<String>),
    #[error("NoFrameFits: no complete frame for node `{0}`")]
    NoFrameFits(String),
    #[error("MissingActant: node `{node}` lacks {role} for frame {frame}")]
    MissingActant { node: String, role: String, frame: String },
    #[error("NoCircumstantTree: node `{node}` has role {role}, which has no circumstant realization")]
    NoCircumstantTree { node: String, role: String },
    #[error("DeterminerClash: node `{0}` is already definite and takes no determination")]
    DeterminerClash(String),
    #[error("UnrealizableRelation: relation {relation} ({description})")]
    UnrealizableRelation { relation: usize, description: String },
    #[error("grammar: {0}")]
    GrammarShape(String),
    #[error("node `{node}`: {error}")]
    Tree { node: String, error: Box<TreeError> },
    #[error("DanglingAttachment: {0}")]
    Surface(#[from] DanglingAttachment),
}

impl GenerationError {
    /// Variant name, as used in golden files for expected failures.
    pub fn kind(&self) -> &'static str {
        match self {
            GenerationError::MissingLexeme { .. } => "MissingLexeme",
            GenerationError::AspectOnState { .. } => "AspectOnState",
            GenerationError::ZeroAspectOnProcess(_) => "ZeroAspectOnProcess",
            GenerationError::UnknownRole(_) => "UnknownRole",
            GenerationError::InvalidDetermination { .. } => "InvalidDetermination",
            GenerationError::DisconnectedGraph(_) => "DisconnectedGraph",
            GenerationError::NoFrameFits(_) => "NoFrameFits",
            GenerationError::MissingActant { .. } => "MissingActant",
            GenerationError::NoCircumstantTree { .. } => "NoCircumstantTree",
            GenerationError::DeterminerClash(_) => "DeterminerClash",
            GenerationError::UnrealizableRelation { .. } => "UnrealizableRelation",
            GenerationError::GrammarShape(_) => "GrammarShape",
            GenerationError::Tree { .. } => "Tree",
            GenerationError::Surface(_) => "DanglingAttachment",
        }
    }

    /// Concept the error is attributed to, when there is one.
    pub fn node(&self) -> Option<&str> {
        match self {
            GenerationError::MissingLexeme { node, .. }
            | GenerationError::AspectOnState { node, .. }
            | GenerationError::InvalidDetermination { node, .. }
            | GenerationError::MissingActant { node, .. }
            | GenerationError::NoCircumstantTree { node, .. }
            | GenerationError::Tree { node, .. } => Some(node),
            GenerationError::ZeroAspectOnProcess(n)
            | GenerationError::NoFrameFits(n)
            | GenerationError::DeterminerClash(n) => Some(n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SentenceResult {
    pub text: String,
    pub derivation: Derivation,
    pub tokens: Vec<TokenProvenance>,
    #[serde(skip)]
    pub tree: TreeNode,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerationResult {
    pub text: String,
    pub sentences: Vec<SentenceResult>,
    pub plan: RealizationPlan,
}

impl GenerationResult {
    pub fn derivations(&self) -> impl Iterator<Item = &Derivation> {
        self.sentences.iter().map(|s| &s.derivation)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results always serialize")
    }
}

pub fn generate(graph: &ConceptGraph, grammar: &Grammar) -> Result<GenerationResult, GenerationError> {
    let plan = plan::plan(graph, grammar)?;
    let mut sentences = Vec::with_capacity(plan.units.len());
    for unit in &plan.units {
        let mut r = realize::Realizer {
            grammar,
            graph,
            plan: &plan,
            env: Bindings::new(),
        };
        let derived = r.unit(unit)?;
        let at = match unit {
            Unit::Clause(ci) => plan.clauses[*ci].head.clone(),
            Unit::Noun(id) => id.clone(),
        };
        let tree = finalize(&derived.tree, &r.env).map_err(|error| GenerationError::Tree { node: at, error: Box::new(error) })?;
        let tokens = provenance(&tree);
        let surface_tokens: Vec<_> = tokens.iter().map(|p| p.token.clone()).collect();
        sentences.push(SentenceResult {
            text: surface(&surface_tokens)?,
            derivation: derived.derivation,
            tokens,
            tree,
        });
    }
    let text = sentences.iter().map(|s| s.text.as_str()).collect::<Vec<_>>().join(". ");
    Ok(GenerationResult { text, sentences, plan })
}
