//! Feature-structure TAG machinery: trees, the two composition operations,
//! schema grafting, finalization and linearization.

pub mod derivation;
pub mod dot;
pub mod notation;
pub mod ops;
pub mod tree;

pub use derivation::{replay, Argument, Derivation, DerivedTree, Operation, Step, TreeSource};
pub use notation::{parse_tree, Notation, NotationError};
pub use ops::{
    adjoin, finalize, graft, linearize, provenance, substitute, FailureReason, GraftMaterial, Lexeme,
    TokenProvenance, TreeError,
};
pub use tree::{Attachment, ElementaryTree, Family, GornAddress, LexToken, NodeKind, SurfaceToken, TokenText, TreeNode};
