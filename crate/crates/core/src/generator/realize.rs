//! Tree building. Every builder constructs the arguments of a derivation
//! before starting its base tree, the order `replay` follows, so recorded
//! derivations rebuild with identical variable numbering.

use super::plan::{Filler, Home, RealizationPlan, Unit};
use super::GenerationError;
use crate::fstruct::{Bindings, FeatureStructure, FeatureValue};
use crate::grammar::{determiner_trees, DeterminationSpec, Grammar, LexicalEntry, RoleKind, TmaSpec};
use crate::semgraph::ConceptGraph;
use crate::tagcore::{DerivedTree, GornAddress, NodeKind, TreeError, TreeNode};

/// Trees the generator refers to by name; a grammar must provide them.
pub const NBAR: &str = "nbar";
pub const GN_PREDEF: &str = "gn-predef";
pub const GN_GAP: &str = "gn-gap";
pub const AUX_RELATIVE: &str = "aux-relative";
/// Lemma used to resume a third-person singular antecedent.
pub const ANAPHOR: &str = "i";

pub(super) struct Realizer<'a> {
    pub grammar: &'a Grammar,
    pub graph: &'a ConceptGraph,
    pub plan: &'a RealizationPlan,
    pub env: Bindings,
}

fn slot(tree: &TreeNode, category: &str, fonction: Option<&str>) -> Option<GornAddress> {
    tree.find(|n| {
        n.kind == NodeKind::Substitution
            && n.category == category
            && fonction.is_none_or(|f| n.top.get("fonction").and_then(FeatureValue::as_atom) == Some(f))
    })
}

fn fonction_fs(f: &str) -> FeatureStructure {
    FeatureStructure::new().with("fonction", FeatureValue::atom(f))
}

impl<'a> Realizer<'a> {
    fn entry(&self, id: &str) -> &'a LexicalEntry {
        let key = &self.graph.node(id).expect("validated").key;
        self.grammar.select_entries(key)[0]
    }

    fn tree_err(node: &str) -> impl Fn(TreeError) -> GenerationError + '_ {
        move |error| GenerationError::Tree {
            node: node.to_string(),
            error: Box::new(error),
        }
    }

    fn start(&mut self, name: &str, node: &str) -> Result<DerivedTree, GenerationError> {
        DerivedTree::start(self.grammar, name, &mut self.env).map_err(Self::tree_err(node))
    }

    pub fn unit(&mut self, unit: &Unit) -> Result<DerivedTree, GenerationError> {
        match unit {
            Unit::Clause(ci) => self.clause(*ci),
            Unit::Noun(id) => self.np(id, true),
        }
    }

    /// A concept in the position reached through `relation`: in full if that
    /// is its home, otherwise as an anaphor.
    fn mention(&mut self, id: &str, relation: usize) -> Result<DerivedTree, GenerationError> {
        let full = self.plan.homes.get(id) == Some(&Home::Relation(relation));
        self.np(id, full)
    }

    fn determination(&self, id: &str) -> Result<Option<DeterminationSpec>, GenerationError> {
        let attrs = &self.graph.node(id).expect("validated").attrs;
        match attrs.determination {
            None if attrs.plural != Some(true) => Ok(None),
            d => DeterminationSpec::new(d.unwrap_or_default(), attrs.plural.unwrap_or(false))
                .map(Some)
                .map_err(|e| GenerationError::InvalidDetermination {
                    node: id.to_string(),
                    reason: e.to_string(),
                }),
        }
    }

    pub fn np(&mut self, id: &str, full: bool) -> Result<DerivedTree, GenerationError> {
        let entry = self.entry(id);
        let det = self.determination(id)?;
        let nplan = &self.plan.nouns[id];
        if !full {
            let plural = det.is_some_and(|d| d.plural);
            if entry.is_third_singular() && !plural {
                if let Some(pro) = self.grammar.entry(ANAPHOR).filter(|e| e.is_predefined()) {
                    let gn = self.start(GN_PREDEF, id)?;
                    return gn.graft_lexeme(&pro.lexeme(), &mut self.env).map_err(Self::tree_err(id));
                }
            }
        }
        if entry.is_predefined() {
            if det.is_some() {
                return Err(GenerationError::DeterminerClash(id.to_string()));
            }
            if full {
                if let Some(m) = nplan.epithets.iter().chain(&nplan.complements).next() {
                    return Err(GenerationError::UnrealizableRelation {
                        relation: m.relation,
                        description: self.graph.relations[m.relation].to_string(),
                    });
                }
            }
            let gn = self.start(GN_PREDEF, id)?;
            return gn.graft_lexeme(&entry.lexeme(), &mut self.env).map_err(Self::tree_err(id));
        }

        let mut auxes = Vec::new();
        if full {
            for m in &nplan.epithets {
                let name = self.role_tree(&m.role, |k| match k {
                    RoleKind::Epithet { tree } => Some(tree),
                    _ => None,
                })?;
                let pred = self.entry(&m.concept);
                let aux = self.start(&name, &m.concept)?;
                auxes.push(aux.graft_lexeme(&pred.lexeme(), &mut self.env).map_err(Self::tree_err(&m.concept))?);
            }
            for m in &nplan.complements {
                let name = self.role_tree(&m.role, |k| match k {
                    RoleKind::Complement { tree } => Some(tree),
                    _ => None,
                })?;
                let gn = self.mention(&m.concept, m.relation)?;
                let aux = self.start(&name, &m.concept)?;
                let addr = slot(&aux.tree, "GN", None).ok_or_else(|| self.missing_slot(&name))?;
                auxes.push(
                    aux.substitute_with(&addr, &gn, fonction_fs("cpl"), &mut self.env)
                        .map_err(Self::tree_err(&m.concept))?,
                );
            }
            for &ci in &nplan.relatives {
                let ph = self.clause(ci)?;
                let aux = self.start(AUX_RELATIVE, id)?;
                let addr = slot(&aux.tree, "Ph", None).ok_or_else(|| self.missing_slot(AUX_RELATIVE))?;
                auxes.push(aux.substitute(&addr, &ph, &mut self.env).map_err(Self::tree_err(id))?);
            }
        }
        let mut nbar = self
            .start(NBAR, id)?
            .graft_lexeme(&entry.lexeme(), &mut self.env)
            .map_err(Self::tree_err(id))?;
        for aux in &auxes {
            nbar = nbar.adjoin(&GornAddress::root(), aux, &mut self.env).map_err(Self::tree_err(id))?;
        }

        let spec = det.unwrap_or_default();
        let harm = entry.harm().expect("validated N entry");
        let mut last = None;
        for name in determiner_trees(spec, harm).trees {
            let saved = self.env.clone();
            let attempt = self.start(name, id).and_then(|t| {
                let addr = slot(&t.tree, "Nbar", None).ok_or_else(|| self.missing_slot(name))?;
                t.substitute(&addr, &nbar, &mut self.env).map_err(Self::tree_err(id))
            });
            match attempt {
                Ok(gn) => return Ok(gn),
                Err(e) => {
                    self.env = saved;
                    last = Some(e);
                }
            }
        }
        Err(last.expect("at least one determiner tree"))
    }

    fn role_tree(
        &self,
        role: &str,
        pick: impl Fn(&RoleKind) -> Option<&String>,
    ) -> Result<String, GenerationError> {
        self.grammar
            .role(role)
            .and_then(|r| r.kinds.iter().find_map(|k| pick(k).cloned()))
            .ok_or_else(|| GenerationError::UnknownRole(role.to_string()))
    }

    fn missing_slot(&self, tree: &str) -> GenerationError {
        GenerationError::GrammarShape(format!("tree `{}` lacks the expected substitution slot", tree))
    }

    /// Predicate with its tense and aspect: aspect tree, then tense tree.
    pub fn tma(
        &mut self,
        node: &str,
        entry: &LexicalEntry,
        frame: &str,
        spec: TmaSpec,
    ) -> Result<DerivedTree, GenerationError> {
        let mut lexeme = entry.lexeme();
        lexeme.features.insert("cadre", FeatureValue::atom(frame));
        let asp = self
            .start(spec.aspect.tree_name(), node)?
            .graft_lexeme(&lexeme, &mut self.env)
            .map_err(Self::tree_err(node))?;
        self.start(spec.tense.tree_name(), node)?
            .graft_tree(&asp, &mut self.env)
            .map_err(Self::tree_err(node))
    }

    fn circumstant(&mut self, head: &str, role: &str, concept: &str, relation: usize) -> Result<DerivedTree, GenerationError> {
        let kind = self
            .grammar
            .role(role)
            .and_then(|r| r.circumstant())
            .cloned()
            .ok_or_else(|| GenerationError::NoCircumstantTree {
                node: head.to_string(),
                role: role.to_string(),
            })?;
        match kind {
            RoleKind::CircumstantLexeme { lemma, frame } => {
                let entry = self.grammar.entry(&lemma).expect("validated role");
                let decl = self.grammar.frame(&frame).expect("validated role");
                let fonction = decl.slots.first().map(|s| s.fonction.clone()).unwrap_or_default();
                let pred_type = entry.pred_type().expect("validated Pred");
                let spec = TmaSpec::new(Default::default(), crate::grammar::Aspect::default_for(pred_type));
                let pbb = self.tma(head, entry, &frame, spec)?;
                let gn = self.mention(concept, relation)?;
                let aux = self.start(&decl.tree, head)?.graft_tree(&pbb, &mut self.env).map_err(Self::tree_err(head))?;
                let addr = slot(&aux.tree, "GN", Some(&fonction)).ok_or_else(|| self.missing_slot(&decl.tree))?;
                aux.substitute_with(&addr, &gn, fonction_fs(&fonction), &mut self.env)
                    .map_err(Self::tree_err(concept))
            }
            RoleKind::CircumstantTree { tree } => {
                let gn = self.mention(concept, relation)?;
                let aux = self.start(&tree, head)?;
                let addr = slot(&aux.tree, "GN", None).ok_or_else(|| self.missing_slot(&tree))?;
                let f = aux.tree.get(&addr).and_then(|n| n.top.get("fonction")).and_then(FeatureValue::as_atom);
                let overwrite = f.map(fonction_fs).unwrap_or_default();
                aux.substitute_with(&addr, &gn, overwrite, &mut self.env)
                    .map_err(Self::tree_err(concept))
            }
            _ => unreachable!("circumstant() only returns circumstant kinds"),
        }
    }

    pub fn clause(&mut self, ci: usize) -> Result<DerivedTree, GenerationError> {
        let cp = &self.plan.clauses[ci];
        let head = cp.head.as_str();
        let entry = self.entry(head);
        let frame = self.grammar.frame(&cp.frame).expect("planned frame");

        let pbb = self.tma(head, entry, &cp.frame, cp.tma)?;
        let mut gns = Vec::new();
        for a in &cp.actants {
            let gn = match &a.filler {
                Filler::Concept(c) => self.mention(c, a.relation)?,
                Filler::Gap => self.start(GN_GAP, head)?,
            };
            gns.push((a.fonction.clone(), gn));
        }
        let mut auxes = Vec::new();
        for c in &cp.circumstants {
            auxes.push(self.circumstant(head, &c.role, &c.concept, c.relation)?);
        }

        let mut t = self
            .start(&frame.tree, head)?
            .graft_tree(&pbb, &mut self.env)
            .map_err(Self::tree_err(head))?;
        for (fonction, gn) in &gns {
            let addr = slot(&t.tree, "GN", Some(fonction)).ok_or_else(|| self.missing_slot(&frame.tree))?;
            t = t
                .substitute_with(&addr, gn, fonction_fs(fonction), &mut self.env)
                .map_err(Self::tree_err(head))?;
        }
        for aux in &auxes {
            let addr = t
                .tree
                .find(|n| n.category == "GPred" && n.kind == NodeKind::Internal)
                .ok_or_else(|| self.missing_slot(&frame.tree))?;
            t = t.adjoin(&addr, aux, &mut self.env).map_err(Self::tree_err(head))?;
        }
        Ok(t)
    }
}
