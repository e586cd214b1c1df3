//! The Creole grammar as data: lexicon, named trees, frames, role mapping,
//! and the TMA, determiner and harmony systems that select among trees.

pub mod determiner;
pub mod harmony;
mod loader;
pub mod tma;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fstruct::{FeatureStructure, FeatureValue};
use crate::tagcore::{ElementaryTree, Lexeme, TreeSource};

pub use determiner::{determiner_trees, Degree, DeterminationSpec, DeterminerSelection, PluralWithoutPostposed};
pub use harmony::{harmony_class, Harm, UnparsableEnding};
pub use tma::{tma_markers, Aspect, PredType, Tense, TmaError, TmaSpec};

/// The grammar shipped with the crate.
pub const SHIPPED_GRAMMAR: &str = include_str!("../../data/creole.grammar");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Category {
    N,
    Pred,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::N => "N",
            Category::Pred => "Pred",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexicalEntry {
    pub lemma: String,
    pub category: Category,
    pub features: FeatureStructure,
    pub frames: Vec<String>,
    pub concept_keys: Vec<String>,
    pub gloss: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elision: Option<String>,
    /// Stored harm wins over the computed one without complaint.
    pub harm_override: bool,
}

impl LexicalEntry {
    pub fn lexeme(&self) -> Lexeme {
        Lexeme {
            lemma: self.lemma.clone(),
            category: self.category.as_str().to_string(),
            features: self.features.clone(),
            elision: self.elision.clone(),
        }
    }

    fn atom(&self, feature: &str) -> Option<&str> {
        self.features.get(feature).and_then(FeatureValue::as_atom)
    }

    pub fn pred_type(&self) -> Option<PredType> {
        self.atom("type").and_then(PredType::parse)
    }

    pub fn harm(&self) -> Option<Harm> {
        self.atom("harm").and_then(|h| h.parse().ok())
    }

    pub fn is_epithet(&self) -> bool {
        self.atom("epithete") == Some("plus")
    }

    /// Pronouns and proper nouns: already definite.
    pub fn is_predefined(&self) -> bool {
        self.atom("det") == Some("def")
    }

    /// Third person singular, for anaphora by `i`.
    pub fn is_third_singular(&self) -> bool {
        matches!(self.atom("pers"), None | Some("3"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Complete,
    Restricted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub role: String,
    pub fonction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameDecl {
    pub name: String,
    pub kind: FrameKind,
    /// Schema tree for complete frames; anchored auxiliary for restricted ones.
    pub tree: String,
    pub slots: Vec<Slot>,
}

impl FrameDecl {
    pub fn slot_for(&self, role: &str) -> Option<&Slot> {
        self.slots.iter().find(|s| s.role == role)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum RoleKind {
    Actant,
    /// Adjoined at GPred: a restricted frame of a verb, or a plain tree.
    CircumstantLexeme { lemma: String, frame: String },
    CircumstantTree { tree: String },
    /// Noun complement adjoined at Nbar, its GN substituted first.
    Complement { tree: String },
    /// Pred adjoined at Nbar.
    Epithet { tree: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoleDecl {
    pub name: String,
    pub kinds: Vec<RoleKind>,
}

impl RoleDecl {
    pub fn is_circumstantial(&self) -> bool {
        self.kinds
            .iter()
            .any(|k| matches!(k, RoleKind::CircumstantLexeme { .. } | RoleKind::CircumstantTree { .. }))
    }

    pub fn circumstant(&self) -> Option<&RoleKind> {
        self.kinds
            .iter()
            .find(|k| matches!(k, RoleKind::CircumstantLexeme { .. } | RoleKind::CircumstantTree { .. }))
    }

    pub fn complement_tree(&self) -> Option<&str> {
        self.kinds.iter().find_map(|k| match k {
            RoleKind::Complement { tree } => Some(tree.as_str()),
            _ => None,
        })
    }

    pub fn epithet_tree(&self) -> Option<&str> {
        self.kinds.iter().find_map(|k| match k {
            RoleKind::Epithet { tree } => Some(tree.as_str()),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("grammar line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("grammar is invalid:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a predicate")]
pub struct NotAPredicate(pub String);

#[derive(Debug, Clone)]
pub struct Grammar {
    pub features: BTreeMap<String, BTreeSet<String>>,
    pub frames: Vec<FrameDecl>,
    pub roles: Vec<RoleDecl>,
    pub lexicon: Vec<LexicalEntry>,
    trees: BTreeMap<String, ElementaryTree>,
    tree_order: Vec<String>,
}

impl Grammar {
    pub fn load(src: &str) -> Result<Grammar, GrammarError> {
        loader::load(src)
    }

    pub fn shipped() -> Grammar {
        Grammar::load(SHIPPED_GRAMMAR).expect("shipped grammar validates")
    }

    /// Entries realizing a concept key, in lexicon order.
    pub fn select_entries(&self, key: &str) -> Vec<&LexicalEntry> {
        self.lexicon
            .iter()
            .filter(|e| e.concept_keys.iter().any(|k| k == key))
            .collect()
    }

    pub fn entry(&self, lemma: &str) -> Option<&LexicalEntry> {
        self.lexicon.iter().find(|e| e.lemma == lemma)
    }

    /// Declared frames, complete ones before restricted ones.
    pub fn frames_of(&self, entry: &LexicalEntry) -> Result<Vec<&FrameDecl>, NotAPredicate> {
        if entry.frames.is_empty() {
            return Err(NotAPredicate(entry.lemma.clone()));
        }
        let mut out: Vec<&FrameDecl> = entry.frames.iter().filter_map(|f| self.frame(f)).collect();
        out.sort_by_key(|f| f.kind == FrameKind::Restricted);
        Ok(out)
    }

    pub fn frame(&self, name: &str) -> Option<&FrameDecl> {
        self.frames.iter().find(|f| f.name == name)
    }

    pub fn role(&self, name: &str) -> Option<&RoleDecl> {
        self.roles.iter().find(|r| r.name == name)
    }

    pub fn tree(&self, name: &str) -> Option<&ElementaryTree> {
        self.trees.get(name)
    }

    /// Tree names in declaration order.
    pub fn tree_names(&self) -> impl Iterator<Item = &str> {
        self.tree_order.iter().map(String::as_str)
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }
}

impl TreeSource for Grammar {
    fn elementary(&self, name: &str) -> Option<&ElementaryTree> {
        self.trees.get(name)
    }
}
