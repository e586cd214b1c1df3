//! Substitution, adjunction, grafting, finalization and linearization.
//!
//! Every operation is persistent: the input trees are untouched and the
//! result comes back with an extended copy of the bindings.

use serde::Serialize;
use thiserror::Error;

use super::tree::{Attachment, GornAddress, LexToken, NodeKind, SurfaceToken, TokenText, TreeNode};
use crate::fstruct::{self, Bindings, Clash, FeatureStructure, FeatureValue};

/// Lexical material ready to be grafted on an anchor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lexeme {
    pub lemma: String,
    pub category: String,
    pub features: FeatureStructure,
    /// Elided form used after a vowel-final neighbour (`ou` → `w`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elision: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FailureReason {
    #[error("{0}")]
    Clash(Clash),
    #[error("required feature `{0}` is absent")]
    Absent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("no node at address {0}")]
    AddressInvalid(GornAddress),
    #[error("node at {address} is {found}, expected {expected}")]
    KindMismatch {
        address: GornAddress,
        expected: &'static str,
        found: &'static str,
    },
    #[error("category mismatch at {address}: expected {expected}, found {found}")]
    CategoryMismatch {
        address: GornAddress,
        expected: String,
        found: String,
    },
    #[error("unification failure at {address}: {reason}")]
    Failure {
        address: GornAddress,
        reason: FailureReason,
    },
    #[error("argument tree is not {0}")]
    WrongArgument(&'static str),
    #[error("tree has no anchor")]
    NoAnchor,
    #[error("unfilled slot at {0}")]
    UnfilledSlot(GornAddress),
    #[error("token at {0} is bound to no value")]
    UnboundToken(GornAddress),
    #[error("no elementary tree named `{0}`")]
    NamedTreeAbsent(String),
}

fn failure(address: &GornAddress, clash: Clash) -> TreeError {
    TreeError::Failure {
        address: address.clone(),
        reason: FailureReason::Clash(clash),
    }
}

fn unify_at(
    address: &GornAddress,
    a: &FeatureStructure,
    b: &FeatureStructure,
    env: &Bindings,
) -> Result<(FeatureStructure, Bindings), TreeError> {
    fstruct::unify(a, b, env).map_err(|c| failure(address, c))
}

/// Features a slot demands be present: variables in its top structure.
fn require_vars(
    address: &GornAddress,
    slot_top: &FeatureStructure,
    provided: &[&FeatureStructure],
) -> Result<(), TreeError> {
    for (feature, value) in slot_top.iter() {
        if value.is_var() && !provided.iter().any(|fs| fs.contains(feature)) {
            return Err(TreeError::Failure {
                address: address.clone(),
                reason: FailureReason::Absent(feature.clone()),
            });
        }
    }
    Ok(())
}

fn node_at<'t>(tree: &'t TreeNode, addr: &GornAddress) -> Result<&'t TreeNode, TreeError> {
    tree.get(addr).ok_or_else(|| TreeError::AddressInvalid(addr.clone()))
}

fn check_category(addr: &GornAddress, expected: &str, found: &str) -> Result<(), TreeError> {
    if expected != found {
        return Err(TreeError::CategoryMismatch {
            address: addr.clone(),
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(())
}

fn replace(tree: &TreeNode, addr: &GornAddress, node: TreeNode) -> TreeNode {
    let mut out = tree.clone();
    *out.get_mut(addr).expect("address checked by caller") = node;
    out
}

/// Plugs `arg` into the substitution slot at `addr`. Slot and argument root
/// unify top with top and bottom with bottom.
pub fn substitute(
    target: &TreeNode,
    addr: &GornAddress,
    arg: &TreeNode,
    env: &Bindings,
) -> Result<(TreeNode, Bindings), TreeError> {
    let slot = node_at(target, addr)?;
    if slot.kind != NodeKind::Substitution {
        return Err(TreeError::KindMismatch {
            address: addr.clone(),
            expected: "substitution",
            found: slot.kind.name(),
        });
    }
    check_category(addr, &slot.category, &arg.category)?;
    if arg.foot_address().is_some() {
        return Err(TreeError::WrongArgument("an initial tree"));
    }
    if arg.anchor_address().is_some() {
        return Err(TreeError::WrongArgument("anchored"));
    }
    let (top, env) = unify_at(addr, &slot.top, &arg.top, env)?;
    let (bottom, env) = unify_at(addr, &slot.bottom, &arg.bottom, &env)?;
    require_vars(addr, &slot.top, &[&arg.top, &arg.bottom])?;
    let node = TreeNode {
        top,
        bottom,
        ..arg.clone()
    };
    Ok((replace(target, addr, node), env))
}

/// Standard TAG adjunction of `aux` at `addr`. The site's top unifies with the
/// auxiliary root's top; its bottom with the foot's bottom. Every feature the
/// foot's bottom names must already be present on the site's bottom.
pub fn adjoin(
    target: &TreeNode,
    addr: &GornAddress,
    aux: &TreeNode,
    env: &Bindings,
) -> Result<(TreeNode, Bindings), TreeError> {
    let site = node_at(target, addr)?;
    if site.kind != NodeKind::Internal {
        return Err(TreeError::KindMismatch {
            address: addr.clone(),
            expected: "internal",
            found: site.kind.name(),
        });
    }
    let foot_addr = aux.foot_address().ok_or(TreeError::WrongArgument("auxiliary"))?;
    if aux.anchor_address().is_some() {
        return Err(TreeError::WrongArgument("grafted"));
    }
    check_category(addr, &site.category, &aux.category)?;
    let foot = aux.get(&foot_addr).expect("found above");
    let (root_top, env) = unify_at(addr, &site.top, &aux.top, env)?;
    let (foot_bottom, env) = unify_at(addr, &site.bottom, &foot.bottom, &env)?;
    for feature in foot.bottom.features() {
        if !site.bottom.contains(feature) {
            return Err(TreeError::Failure {
                address: addr.clone(),
                reason: FailureReason::Absent(feature.clone()),
            });
        }
    }
    let new_foot = TreeNode {
        category: site.category.clone(),
        top: foot.top.clone(),
        bottom: foot_bottom,
        kind: NodeKind::Internal,
        children: site.children.clone(),
    };
    let mut spliced = replace(aux, &foot_addr, new_foot);
    spliced.top = root_top;
    Ok((replace(target, addr, spliced), env))
}

/// What goes onto an anchor: a lexeme, or an already built subtree.
#[derive(Debug, Clone, Copy)]
pub enum GraftMaterial<'a> {
    Lexeme(&'a Lexeme),
    Tree(&'a TreeNode),
}

pub fn graft(
    schema: &TreeNode,
    material: GraftMaterial<'_>,
    env: &Bindings,
) -> Result<(TreeNode, Bindings), TreeError> {
    let addr = schema.anchor_address().ok_or(TreeError::NoAnchor)?;
    let anchor = schema.get(&addr).expect("found above");
    let node = match material {
        GraftMaterial::Lexeme(lx) => {
            check_category(&addr, &anchor.category, &lx.category)?;
            let (top, env2) = unify_at(&addr, &anchor.top, &lx.features, env)?;
            let (bottom, env2) = unify_at(&addr, &anchor.bottom, &lx.features, &env2)?;
            require_vars(&addr, &anchor.top, &[&lx.features])?;
            let attachment = match &lx.elision {
                Some(e) => Attachment::CliticLeft { elided: e.clone() },
                None => Attachment::Free,
            };
            let leaf = TreeNode::leaf(
                "",
                NodeKind::Lex(LexToken {
                    text: TokenText::Literal(lx.lemma.clone()),
                    attachment,
                    origin: format!("lexeme:{}", lx.lemma),
                }),
                FeatureStructure::new(),
            );
            let node = TreeNode {
                category: anchor.category.clone(),
                top,
                bottom,
                kind: NodeKind::Internal,
                children: vec![leaf],
            };
            return Ok((replace(schema, &addr, node), env2));
        }
        GraftMaterial::Tree(t) => t,
    };
    check_category(&addr, &anchor.category, &node.category)?;
    if node.anchor_address().is_some() || node.foot_address().is_some() {
        return Err(TreeError::WrongArgument("a complete subtree"));
    }
    let (top, env) = unify_at(&addr, &anchor.top, &node.top, env)?;
    let (bottom, env) = unify_at(&addr, &anchor.bottom, &node.bottom, &env)?;
    require_vars(&addr, &anchor.top, &[&node.top, &node.bottom])?;
    let node = TreeNode {
        top,
        bottom,
        ..node.clone()
    };
    Ok((replace(schema, &addr, node), env))
}

/// Closes a derivation: no open slot may remain, and top and bottom must
/// unify at every node. The result carries one merged, resolved structure per
/// node (stored as both top and bottom) and spelled-out token variables.
pub fn finalize(tree: &TreeNode, env: &Bindings) -> Result<TreeNode, TreeError> {
    let mut env = env.clone();
    let mut merged: Vec<FeatureStructure> = Vec::new();
    let mut err = None;
    tree.walk(&mut |addr, n| {
        if err.is_some() {
            return;
        }
        match n.kind {
            NodeKind::Substitution | NodeKind::Anchor | NodeKind::Foot => {
                err = Some(TreeError::UnfilledSlot(addr.clone()));
                return;
            }
            _ => {}
        }
        match fstruct::unify(&n.top, &n.bottom, &env) {
            Ok((fs, e)) => {
                env = e;
                merged.push(fs);
            }
            Err(c) => err = Some(failure(addr, c)),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }

    fn rebuild(
        n: &TreeNode,
        addr: GornAddress,
        merged: &mut std::slice::Iter<'_, FeatureStructure>,
        env: &Bindings,
    ) -> Result<TreeNode, TreeError> {
        let fs = fstruct::resolve(merged.next().expect("one per node"), env);
        let kind = match &n.kind {
            NodeKind::Lex(tok) => {
                let text = match &tok.text {
                    TokenText::Var(v) => match env.walk(&FeatureValue::Var(v.clone())) {
                        FeatureValue::Atom(a) => TokenText::Literal(a),
                        FeatureValue::Var(_) => return Err(TreeError::UnboundToken(addr)),
                    },
                    lit => lit.clone(),
                };
                NodeKind::Lex(LexToken { text, ..tok.clone() })
            }
            k => k.clone(),
        };
        let children = n
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| rebuild(c, addr.child(i), merged, env))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TreeNode {
            category: n.category.clone(),
            top: fs.clone(),
            bottom: fs,
            kind,
            children,
        })
    }
    rebuild(tree, GornAddress::root(), &mut merged.iter(), &env)
}

/// Left-to-right yield of lexical leaves; empty markers emit nothing.
pub fn linearize(tree: &TreeNode) -> Vec<SurfaceToken> {
    provenance(tree).into_iter().map(|p| p.token).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenProvenance {
    pub token: SurfaceToken,
    pub origin: String,
    pub address: GornAddress,
}

pub fn provenance(tree: &TreeNode) -> Vec<TokenProvenance> {
    let mut out = Vec::new();
    tree.walk(&mut |addr, n| {
        if let NodeKind::Lex(tok) = &n.kind {
            let text = match &tok.text {
                TokenText::Literal(s) => s.clone(),
                TokenText::Var(v) => v.clone(),
            };
            if !text.is_empty() {
                out.push(TokenProvenance {
                    token: SurfaceToken::new(text, tok.attachment.clone()),
                    origin: tok.origin.clone(),
                    address: addr.clone(),
                });
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tagcore::notation::parse_tree;

    fn t(src: &str) -> TreeNode {
        parse_tree(src, "test").unwrap()
    }

    fn words(tree: &TreeNode) -> Vec<String> {
        linearize(tree).into_iter().map(|t| t.text).collect()
    }

    fn addr(p: &[usize]) -> GornAddress {
        GornAddress(p.to_vec())
    }

    #[test]
    fn substitute_requires_slot() {
        let target = t(r#"(S (A "x") (B↓))"#);
        let arg = t(r#"(A "y")"#);
        let err = substitute(&target, &addr(&[0]), &arg, &Bindings::new()).unwrap_err();
        assert!(matches!(err, TreeError::KindMismatch { .. }));
        let err = substitute(&target, &addr(&[1]), &arg, &Bindings::new()).unwrap_err();
        assert!(matches!(err, TreeError::CategoryMismatch { .. }));
        let err = substitute(&target, &addr(&[5]), &arg, &Bindings::new()).unwrap_err();
        assert!(matches!(err, TreeError::AddressInvalid(_)));
    }

    #[test]
    fn substitute_binds_harmony_variable() {
        let det = t(r#"(GN {det=def} (Nbar↓ {harm=A}) (Det -<A>))"#);
        let kay = t(r#"(Nbar bot{harm=la} (N {harm=la} "kay"))"#);
        let (tree, env) = substitute(&det, &addr(&[0]), &kay, &Bindings::new()).unwrap();
        assert_eq!(env.walk(&FeatureValue::var("A")), FeatureValue::atom("la"));
        let fin = finalize(&tree, &env).unwrap();
        let toks = linearize(&fin);
        assert_eq!(toks[1], SurfaceToken::new("la", Attachment::HyphenLeft));
    }

    #[test]
    fn adjoin_respects_saturation_on_foot() {
        let sentence = t(r#"(Ph (GN "i") (GPred {sature=plus} (V "pòté")))"#);
        let aux = t(r#"(GPred {sature=plus} (GPred* {sature=plus}) (GPrep (P "ba") (GN "mwen")))"#);
        let (out, _) = adjoin(&sentence, &addr(&[1]), &aux, &Bindings::new()).unwrap();
        assert_eq!(words(&out), ["i", "pòté", "ba", "mwen"]);

        let unsaturated = t(r#"(Ph (GN "i") (GPred {cadre=transitif} (V "pòté")))"#);
        let err = adjoin(&unsaturated, &addr(&[1]), &aux, &Bindings::new()).unwrap_err();
        assert!(matches!(
            err,
            TreeError::Failure { reason: FailureReason::Absent(ref f), .. } if f == "sature"
        ));
    }

    #[test]
    fn adjoin_category_and_kind_checks() {
        let sentence = t(r#"(Ph (GN "i") (GPred {sature=plus} (V "dòmi")))"#);
        let aux = t(r#"(Nbar (Adj "gwo") (Nbar*))"#);
        assert!(matches!(
            adjoin(&sentence, &addr(&[1]), &aux, &Bindings::new()),
            Err(TreeError::CategoryMismatch { .. })
        ));
        let slot = t(r#"(Ph (GN↓) (GPred "x"))"#);
        let aux = t(r#"(GN (GN*) (X "y"))"#);
        assert!(matches!(
            adjoin(&slot, &addr(&[0]), &aux, &Bindings::new()),
            Err(TreeError::KindMismatch { .. })
        ));
        let not_aux = t(r#"(GPred (X "y"))"#);
        assert!(matches!(
            adjoin(&sentence, &addr(&[1]), &not_aux, &Bindings::new()),
            Err(TreeError::WrongArgument(_))
        ));
    }

    #[test]
    fn graft_lexeme_on_anchor() {
        let schema = t(r#"(Predbar {aspect=imperfectif, cadre=C} (Asp "ka") (Pred@ {type=proces, cadre=C}))"#);
        let domi = Lexeme {
            lemma: "dòmi".into(),
            category: "Pred".into(),
            features: "{cadre=intransitif, type=proces}".parse().unwrap(),
            elision: None,
        };
        let (tree, env) = graft(&schema, GraftMaterial::Lexeme(&domi), &Bindings::new()).unwrap();
        assert_eq!(words(&tree), ["ka", "dòmi"]);
        let fin = finalize(&tree, &env).unwrap();
        assert_eq!(fin.top.to_string(), "{aspect=imperfectif, cadre=intransitif}");

        let ni = Lexeme {
            lemma: "ni".into(),
            category: "Pred".into(),
            features: "{cadre=transitif, type=etat}".parse().unwrap(),
            elision: None,
        };
        assert!(matches!(
            graft(&schema, GraftMaterial::Lexeme(&ni), &Bindings::new()),
            Err(TreeError::Failure { .. })
        ));
    }

    #[test]
    fn graft_requires_variable_features_present() {
        let schema = t(r#"(Predbar {cadre=C} (Pred@ {cadre=C}))"#);
        let bare = Lexeme {
            lemma: "x".into(),
            category: "Pred".into(),
            features: FeatureStructure::new(),
            elision: None,
        };
        assert!(matches!(
            graft(&schema, GraftMaterial::Lexeme(&bare), &Bindings::new()),
            Err(TreeError::Failure { reason: FailureReason::Absent(_), .. })
        ));
    }

    #[test]
    fn finalize_reports_open_slots_and_clashes() {
        let open = t(r#"(Ph (GN↓) (GPred "dòmi"))"#);
        assert_eq!(
            finalize(&open, &Bindings::new()).unwrap_err(),
            TreeError::UnfilledSlot(addr(&[0]))
        );
        let clash = t(r#"(Ph (Predbar top{aspect=zero} bot{aspect=imperfectif} (Asp "ka") (Pred "ni")))"#);
        match finalize(&clash, &Bindings::new()).unwrap_err() {
            TreeError::Failure { address, .. } => assert_eq!(address, addr(&[0])),
            e => panic!("unexpected {:?}", e),
        }
    }

    #[test]
    fn finalize_leaves_unbound_token_as_error() {
        let tree = t(r#"(GN (N "kay") (Det -<A>))"#);
        assert_eq!(
            finalize(&tree, &Bindings::new()).unwrap_err(),
            TreeError::UnboundToken(addr(&[1, 0]))
        );
    }

    #[test]
    fn empty_markers_are_silent() {
        let tree = t(r#"(GN (Det "") (Nbar (N "ravèt")))"#);
        assert_eq!(words(&tree), ["ravèt"]);
    }
}
