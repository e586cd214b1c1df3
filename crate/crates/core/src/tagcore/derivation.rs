use serde::Serialize;

use super::ops::{self, GraftMaterial, Lexeme, TreeError};
use super::tree::{ElementaryTree, GornAddress, TreeNode};
use crate::fstruct::{self, Bindings, FeatureStructure};

/// Lookup of named elementary trees.
pub trait TreeSource {
    fn elementary(&self, name: &str) -> Option<&ElementaryTree>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    Substitute,
    Adjoin,
    Graft,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Argument {
    Tree(String),
    Lexeme(Lexeme),
    Derived(Box<Derivation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub op: Operation,
    pub address: GornAddress,
    pub argument: Argument,
    /// Features written over the argument root's top before the operation.
    #[serde(skip_serializing_if = "FeatureStructure::is_empty")]
    pub overwrite: FeatureStructure,
}

/// A derivation tree: a base elementary tree and the operations applied to it,
/// in order. Arguments are either named trees, lexemes, or nested derivations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub base: String,
    pub steps: Vec<Step>,
}

/// A tree under construction together with the derivation that built it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedTree {
    pub tree: TreeNode,
    pub derivation: Derivation,
}

impl DerivedTree {
    pub fn start(source: &impl TreeSource, name: &str, env: &mut Bindings) -> Result<Self, TreeError> {
        let et = source
            .elementary(name)
            .ok_or_else(|| TreeError::NamedTreeAbsent(name.to_string()))?;
        Ok(DerivedTree {
            tree: et.instantiate(env),
            derivation: Derivation {
                base: name.to_string(),
                steps: Vec::new(),
            },
        })
    }

    fn argument(arg: &DerivedTree) -> Argument {
        if arg.derivation.steps.is_empty() {
            Argument::Tree(arg.derivation.base.clone())
        } else {
            Argument::Derived(Box::new(arg.derivation.clone()))
        }
    }

    fn commit(
        mut self,
        op: Operation,
        address: GornAddress,
        argument: Argument,
        overwrite: FeatureStructure,
        result: Result<(TreeNode, Bindings), TreeError>,
        env: &mut Bindings,
    ) -> Result<Self, TreeError> {
        let (tree, new_env) = result?;
        *env = new_env;
        self.tree = tree;
        self.derivation.steps.push(Step {
            op,
            address,
            argument,
            overwrite,
        });
        Ok(self)
    }

    pub fn substitute(self, address: &GornAddress, arg: &DerivedTree, env: &mut Bindings) -> Result<Self, TreeError> {
        self.substitute_with(address, arg, FeatureStructure::new(), env)
    }

    /// Substitution after writing `overwrite` onto the argument root's top.
    pub fn substitute_with(
        self,
        address: &GornAddress,
        arg: &DerivedTree,
        overwrite: FeatureStructure,
        env: &mut Bindings,
    ) -> Result<Self, TreeError> {
        let arg_tree = apply_overwrite(&arg.tree, &overwrite);
        let result = ops::substitute(&self.tree, address, &arg_tree, env);
        self.commit(Operation::Substitute, address.clone(), Self::argument(arg), overwrite, result, env)
    }

    pub fn adjoin(self, address: &GornAddress, aux: &DerivedTree, env: &mut Bindings) -> Result<Self, TreeError> {
        let result = ops::adjoin(&self.tree, address, &aux.tree, env);
        self.commit(
            Operation::Adjoin,
            address.clone(),
            Self::argument(aux),
            FeatureStructure::new(),
            result,
            env,
        )
    }

    pub fn graft_lexeme(self, lexeme: &Lexeme, env: &mut Bindings) -> Result<Self, TreeError> {
        let address = self.tree.anchor_address().ok_or(TreeError::NoAnchor)?;
        let result = ops::graft(&self.tree, GraftMaterial::Lexeme(lexeme), env);
        self.commit(
            Operation::Graft,
            address,
            Argument::Lexeme(lexeme.clone()),
            FeatureStructure::new(),
            result,
            env,
        )
    }

    pub fn graft_tree(self, arg: &DerivedTree, env: &mut Bindings) -> Result<Self, TreeError> {
        let address = self.tree.anchor_address().ok_or(TreeError::NoAnchor)?;
        let result = ops::graft(&self.tree, GraftMaterial::Tree(&arg.tree), env);
        self.commit(
            Operation::Graft,
            address,
            Self::argument(arg),
            FeatureStructure::new(),
            result,
            env,
        )
    }
}

fn apply_overwrite(tree: &TreeNode, overwrite: &FeatureStructure) -> TreeNode {
    let mut out = tree.clone();
    for (k, v) in overwrite.iter() {
        out.top = fstruct::overwrite(&out.top, k, v.clone());
    }
    out
}

/// Rebuilds the tree a derivation describes. Arguments (nested derivations and
/// named trees) are built in step order before the base tree is instantiated.
/// Builders that follow the same order get identical variable numbering.
pub fn replay(
    derivation: &Derivation,
    source: &impl TreeSource,
    env: &mut Bindings,
) -> Result<TreeNode, TreeError> {
    let mut args = Vec::with_capacity(derivation.steps.len());
    for step in &derivation.steps {
        let arg = match &step.argument {
            Argument::Derived(d) => Some(replay(d, source, env)?),
            Argument::Tree(name) => Some(
                source
                    .elementary(name)
                    .ok_or_else(|| TreeError::NamedTreeAbsent(name.clone()))?
                    .instantiate(env),
            ),
            Argument::Lexeme(_) => None,
        };
        args.push(arg);
    }
    let base = source
        .elementary(&derivation.base)
        .ok_or_else(|| TreeError::NamedTreeAbsent(derivation.base.clone()))?;
    let mut tree = base.instantiate(env);
    for (step, prebuilt) in derivation.steps.iter().zip(args) {
        let arg_tree = prebuilt.map(|t| apply_overwrite(&t, &step.overwrite));
        let (t, e) = match (step.op, &step.argument, &arg_tree) {
            (Operation::Graft, Argument::Lexeme(lx), _) => ops::graft(&tree, GraftMaterial::Lexeme(lx), env)?,
            (Operation::Graft, _, Some(a)) => ops::graft(&tree, GraftMaterial::Tree(a), env)?,
            (Operation::Substitute, _, Some(a)) => ops::substitute(&tree, &step.address, a, env)?,
            (Operation::Adjoin, _, Some(a)) => ops::adjoin(&tree, &step.address, a, env)?,
            (_, _, None) => return Err(TreeError::WrongArgument("a tree")),
        };
        tree = t;
        *env = e;
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tagcore::notation::parse_tree;
    use crate::tagcore::tree::Family;
    use std::collections::BTreeMap;

    struct Src(BTreeMap<String, ElementaryTree>);

    impl TreeSource for Src {
        fn elementary(&self, name: &str) -> Option<&ElementaryTree> {
            self.0.get(name)
        }
    }

    fn src() -> Src {
        let defs = [
            ("det-def", Family::Initial, r#"(GN (Nbar↓ {harm=A}) (Det -<A>))"#),
            ("nbar", Family::Schema, r#"(Nbar bot{harm=A} (N@ {harm=A}))"#),
            ("epithet", Family::Auxiliary, r#"(Nbar bot{harm=H} (Pred@) (Nbar* bot{harm=H}))"#),
        ];
        Src(defs
            .iter()
            .map(|(n, f, s)| (n.to_string(), ElementaryTree::new(*n, *f, parse_tree(s, n).unwrap())))
            .collect())
    }

    fn lx(lemma: &str, cat: &str, fs: &str) -> Lexeme {
        Lexeme {
            lemma: lemma.into(),
            category: cat.into(),
            features: fs.parse().unwrap(),
            elision: None,
        }
    }

    #[test]
    fn replay_reproduces_recorded_tree() {
        let s = src();
        let mut env = Bindings::new();
        let epi = DerivedTree::start(&s, "epithet", &mut env)
            .unwrap()
            .graft_lexeme(&lx("gwo", "Pred", "{type=etat}"), &mut env)
            .unwrap();
        let nbar = DerivedTree::start(&s, "nbar", &mut env)
            .unwrap()
            .graft_lexeme(&lx("pyébwa", "N", "{harm=a}"), &mut env)
            .unwrap();
        let nbar = nbar.adjoin(&GornAddress::root(), &epi, &mut env).unwrap();
        let gn = DerivedTree::start(&s, "det-def", &mut env)
            .unwrap()
            .substitute(&GornAddress(vec![0]), &nbar, &mut env)
            .unwrap();

        let mut env2 = Bindings::new();
        let again = replay(&gn.derivation, &s, &mut env2).unwrap();
        assert_eq!(again, gn.tree);
        assert_eq!(env2, env);
    }

    #[test]
    fn replay_missing_tree() {
        let d = Derivation {
            base: "nope".into(),
            steps: vec![],
        };
        assert_eq!(
            replay(&d, &src(), &mut Bindings::new()).unwrap_err(),
            TreeError::NamedTreeAbsent("nope".into())
        );
    }

    #[test]
    fn replay_empty_derivation_is_the_base_tree() {
        let s = src();
        let d = Derivation {
            base: "det-def".into(),
            steps: vec![],
        };
        let mut env = Bindings::new();
        let t = replay(&d, &s, &mut env).unwrap();
        let mut env2 = Bindings::new();
        assert_eq!(t, s.elementary("det-def").unwrap().instantiate(&mut env2));
    }

    #[test]
    fn failed_step_leaves_env_alone() {
        let s = src();
        let mut env = Bindings::new();
        let gn = DerivedTree::start(&s, "det-def", &mut env).unwrap();
        let before = env.clone();
        let bad = DerivedTree::start(&s, "nbar", &mut env.clone()).unwrap();
        assert!(gn.substitute(&GornAddress(vec![0]), &bad, &mut env).is_err());
        assert_eq!(env, before);
    }
}
