use std::fmt;

use serde::Serialize;

use crate::fstruct::{Bindings, FeatureStructure, FeatureValue};

/// How a surface token binds to its neighbours when the string is rendered.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Attachment {
    Free,
    /// Joined to the previous token with a hyphen (postposed determiners).
    HyphenLeft,
    /// Joined to the next token with a hyphen (`sé-`).
    HyphenRight,
    /// Elided onto a vowel-final previous token, e.g. `ou` → `'w`.
    CliticLeft { elided: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceToken {
    pub text: String,
    pub attachment: Attachment,
}

impl SurfaceToken {
    pub fn free(text: impl Into<String>) -> Self {
        SurfaceToken {
            text: text.into(),
            attachment: Attachment::Free,
        }
    }

    pub fn new(text: impl Into<String>, attachment: Attachment) -> Self {
        SurfaceToken {
            text: text.into(),
            attachment,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenText {
    Literal(String),
    /// Spelled out from a feature variable once the tree is finalized.
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexToken {
    pub text: TokenText,
    pub attachment: Attachment,
    /// Elementary tree name, or `lexeme:<lemma>` for grafted lexical material.
    pub origin: String,
}

impl LexToken {
    pub fn is_empty_marker(&self) -> bool {
        matches!(&self.text, TokenText::Literal(s) if s.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Internal,
    Anchor,
    Substitution,
    Foot,
    Lex(LexToken),
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Internal => "internal",
            NodeKind::Anchor => "anchor",
            NodeKind::Substitution => "substitution",
            NodeKind::Foot => "foot",
            NodeKind::Lex(_) => "lex",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeNode {
    pub category: String,
    pub top: FeatureStructure,
    pub bottom: FeatureStructure,
    pub kind: NodeKind,
    pub children: Vec<TreeNode>,
}

/// Path of child indices from the root; empty is the root itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GornAddress(pub Vec<usize>);

impl GornAddress {
    pub fn root() -> Self {
        GornAddress(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut path = self.0.clone();
        path.push(i);
        GornAddress(path)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for GornAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl Serialize for GornAddress {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl TreeNode {
    pub fn internal(category: impl Into<String>, fs: FeatureStructure, children: Vec<TreeNode>) -> Self {
        TreeNode {
            category: category.into(),
            top: fs.clone(),
            bottom: fs,
            kind: NodeKind::Internal,
            children,
        }
    }

    pub fn leaf(category: impl Into<String>, kind: NodeKind, fs: FeatureStructure) -> Self {
        TreeNode {
            category: category.into(),
            top: fs.clone(),
            bottom: fs,
            kind,
            children: Vec::new(),
        }
    }

    pub fn lex(text: impl Into<String>, origin: impl Into<String>) -> Self {
        TreeNode::leaf(
            "",
            NodeKind::Lex(LexToken {
                text: TokenText::Literal(text.into()),
                attachment: Attachment::Free,
                origin: origin.into(),
            }),
            FeatureStructure::new(),
        )
    }

    pub fn get(&self, addr: &GornAddress) -> Option<&TreeNode> {
        let mut node = self;
        for &i in &addr.0 {
            node = node.children.get(i)?;
        }
        Some(node)
    }

    pub fn get_mut(&mut self, addr: &GornAddress) -> Option<&mut TreeNode> {
        let mut node = self;
        for &i in &addr.0 {
            node = node.children.get_mut(i)?;
        }
        Some(node)
    }

    /// Preorder walk with addresses.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&GornAddress, &'a TreeNode)) {
        fn go<'a>(n: &'a TreeNode, addr: &mut Vec<usize>, f: &mut impl FnMut(&GornAddress, &'a TreeNode)) {
            f(&GornAddress(addr.clone()), n);
            for (i, c) in n.children.iter().enumerate() {
                addr.push(i);
                go(c, addr, f);
                addr.pop();
            }
        }
        go(self, &mut Vec::new(), f);
    }

    pub fn find(&self, mut pred: impl FnMut(&TreeNode) -> bool) -> Option<GornAddress> {
        let mut found = None;
        self.walk(&mut |a, n| {
            if found.is_none() && pred(n) {
                found = Some(a.clone());
            }
        });
        found
    }

    pub fn find_all(&self, mut pred: impl FnMut(&TreeNode) -> bool) -> Vec<GornAddress> {
        let mut found = Vec::new();
        self.walk(&mut |a, n| {
            if pred(n) {
                found.push(a.clone());
            }
        });
        found
    }

    pub fn count_kind(&self, kind: fn(&NodeKind) -> bool) -> usize {
        self.find_all(|n| kind(&n.kind)).len()
    }

    pub fn foot_address(&self) -> Option<GornAddress> {
        self.find(|n| n.kind == NodeKind::Foot)
    }

    pub fn anchor_address(&self) -> Option<GornAddress> {
        self.find(|n| n.kind == NodeKind::Anchor)
    }

    /// Applies `f` to every feature value and token variable in the tree.
    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> FeatureValue) -> TreeNode {
        let mut map = |v: &FeatureValue| match v {
            FeatureValue::Var(n) => f(n),
            a => a.clone(),
        };
        let kind = match &self.kind {
            NodeKind::Lex(tok) => NodeKind::Lex(LexToken {
                text: match &tok.text {
                    TokenText::Var(n) => match map(&FeatureValue::Var(n.clone())) {
                        FeatureValue::Var(m) => TokenText::Var(m),
                        FeatureValue::Atom(a) => TokenText::Literal(a),
                    },
                    lit => lit.clone(),
                },
                ..tok.clone()
            }),
            k => k.clone(),
        };
        let top = self.top.map_values(&mut map);
        let bottom = self.bottom.map_values(&mut map);
        TreeNode {
            category: self.category.clone(),
            top,
            bottom,
            kind,
            children: self.children.iter().map(|c| c.map_vars(f)).collect(),
        }
    }

    /// Copy with every variable renamed apart using a fresh suffix from `env`.
    pub fn rename_apart(&self, env: &mut Bindings) -> TreeNode {
        let n = env.next_fresh();
        self.map_vars(&mut |v| FeatureValue::Var(format!("{}_{}", base_var_name(v), n)))
    }
}

fn base_var_name(v: &str) -> &str {
    v.split('_').next().unwrap_or(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Initial,
    Auxiliary,
    Schema,
}

impl Family {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "initial" => Some(Family::Initial),
            "auxiliary" => Some(Family::Auxiliary),
            "schema" => Some(Family::Schema),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Initial => "initial",
            Family::Auxiliary => "auxiliary",
            Family::Schema => "schema",
        })
    }
}

/// A named tree as declared in a grammar. Auxiliary trees may also carry an
/// anchor (restricted-frame auxiliaries are grafted before adjunction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryTree {
    pub name: String,
    pub family: Family,
    pub root: TreeNode,
    pub anchor_category: Option<String>,
    pub foot_address: Option<GornAddress>,
}

impl ElementaryTree {
    pub fn new(name: impl Into<String>, family: Family, root: TreeNode) -> Self {
        let anchor_category = root
            .anchor_address()
            .and_then(|a| root.get(&a).map(|n| n.category.clone()));
        let foot_address = root.foot_address();
        ElementaryTree {
            name: name.into(),
            family,
            root,
            anchor_category,
            foot_address,
        }
    }

    /// Structural well-formedness; returns human-readable problems.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let feet = self.root.count_kind(|k| *k == NodeKind::Foot);
        let anchors = self.root.count_kind(|k| *k == NodeKind::Anchor);
        match self.family {
            Family::Initial => {
                if feet > 0 {
                    problems.push(format!("initial tree `{}` has a foot node", self.name));
                }
                if anchors > 0 {
                    problems.push(format!("initial tree `{}` has an anchor; declare it as schema", self.name));
                }
            }
            Family::Schema => {
                if anchors != 1 {
                    problems.push(format!("schema tree `{}` has {} anchors, expected 1", self.name, anchors));
                }
                if feet > 0 {
                    problems.push(format!("schema tree `{}` has a foot node", self.name));
                }
            }
            Family::Auxiliary => {
                if feet != 1 {
                    problems.push(format!("auxiliary tree `{}` has {} foot nodes, expected 1", self.name, feet));
                } else if let Some(foot) = self.foot_address.as_ref().and_then(|a| self.root.get(a)) {
                    if foot.category != self.root.category {
                        problems.push(format!(
                            "auxiliary tree `{}`: foot category {} differs from root category {}",
                            self.name, foot.category, self.root.category
                        ));
                    }
                }
                if anchors > 1 {
                    problems.push(format!("auxiliary tree `{}` has {} anchors", self.name, anchors));
                }
            }
        }
        self.root.walk(&mut |addr, n| {
            let leaf_only = matches!(n.kind, NodeKind::Substitution | NodeKind::Foot | NodeKind::Lex(_));
            if leaf_only && !n.children.is_empty() {
                problems.push(format!(
                    "tree `{}`: {} node at {} has children",
                    self.name,
                    n.kind.name(),
                    addr
                ));
            }
            if n.kind == NodeKind::Anchor && !n.children.is_empty() {
                problems.push(format!("tree `{}`: anchor at {} has children", self.name, addr));
            }
        });
        problems
    }

    pub fn instantiate(&self, env: &mut Bindings) -> TreeNode {
        self.root.rename_apart(env)
    }
}
