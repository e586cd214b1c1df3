//! From a conceptual graph to a realization plan: which predicates head
//! clauses, which frame each takes, how every relation is expressed, and how
//! clauses and noun phrases are distributed over juxtaposed sentences.

use std::collections::BTreeMap;

use serde::Serialize;

use super::GenerationError;
use crate::grammar::{
    tma_markers, Aspect, Category, DeterminationSpec, FrameKind, Grammar, LexicalEntry, Tense, TmaError,
    TmaSpec,
};
use crate::semgraph::{cover_tree, validate_graph, ConceptGraph, CoverTree, Issue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "strategy")]
pub enum Strategy {
    Actant { fonction: String },
    Circumstant,
    Epithet,
    Complement,
    Relative,
    Juxtapose,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Filler {
    Concept(String),
    /// The position relativized by a relative clause.
    Gap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActantPlan {
    pub role: String,
    pub fonction: String,
    pub relation: usize,
    pub filler: Filler,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircumstantPlan {
    pub role: String,
    pub relation: usize,
    pub concept: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClausePlan {
    pub head: String,
    pub lemma: String,
    pub frame: String,
    /// In frame slot order.
    pub actants: Vec<ActantPlan>,
    pub circumstants: Vec<CircumstantPlan>,
    #[serde(skip)]
    pub tma: TmaSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Modifier {
    pub relation: usize,
    pub role: String,
    pub concept: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NounPlan {
    pub concept: String,
    pub lemma: String,
    pub epithets: Vec<Modifier>,
    pub complements: Vec<Modifier>,
    /// Indices into `RealizationPlan::clauses`.
    pub relatives: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Clause(usize),
    Noun(String),
}

/// Where a concept is realized in full; elsewhere it is an anaphor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Home {
    Unit,
    Relation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationPlan {
    pub cover: CoverTree,
    pub clauses: Vec<ClausePlan>,
    pub nouns: BTreeMap<String, NounPlan>,
    /// Sentences in output order.
    pub units: Vec<Unit>,
    /// One per graph relation.
    pub strategies: Vec<Strategy>,
    pub homes: BTreeMap<String, Home>,
}

impl RealizationPlan {
    pub fn clause_of(&self, head: &str) -> Option<usize> {
        self.clauses.iter().position(|c| c.head == head)
    }
}

pub(super) fn issue_error(issue: &Issue) -> GenerationError {
    match issue {
        Issue::MissingLexeme { node, key } => GenerationError::MissingLexeme {
            node: node.clone(),
            key: key.clone(),
        },
        Issue::AspectOnState { node, aspect } => GenerationError::AspectOnState {
            node: node.clone(),
            aspect: *aspect,
        },
        Issue::UnknownRole { role } => GenerationError::UnknownRole(role.clone()),
        Issue::InvalidDetermination { node, reason } => GenerationError::InvalidDetermination {
            node: node.clone(),
            reason: reason.clone(),
        },
    }
}

struct Ctx<'a> {
    graph: &'a ConceptGraph,
    grammar: &'a Grammar,
    entries: BTreeMap<&'a str, &'a LexicalEntry>,
}

impl<'a> Ctx<'a> {
    fn entry(&self, id: &str) -> &'a LexicalEntry {
        self.entries[id]
    }

    fn category(&self, id: &str) -> Category {
        self.entry(id).category
    }

    fn incident(&self, id: &str) -> usize {
        self.graph.relations.iter().filter(|r| r.from == id || r.to == id).count()
    }

    fn unrealizable(&self, i: usize) -> GenerationError {
        GenerationError::UnrealizableRelation {
            relation: i,
            description: self.graph.relations[i].to_string(),
        }
    }

    fn is_epithet_role(&self, role: &str) -> bool {
        self.grammar.role(role).and_then(|r| r.epithet_tree()).is_some()
    }
}

/// A Pred concept realized as an epithet rather than heading a clause.
fn is_epithet_node(ctx: &Ctx<'_>, id: &str, root: &str) -> bool {
    let node = ctx.graph.node(id).expect("validated");
    let entry = ctx.entry(id);
    if entry.category != Category::Pred || !entry.is_epithet() || id == root || node.attrs.has_tma() {
        return false;
    }
    if ctx.incident(id) != 1 {
        return false;
    }
    ctx.graph
        .relations
        .iter()
        .any(|r| r.to == id && ctx.category(&r.from) == Category::N && ctx.is_epithet_role(&r.role))
}

fn tma_for(ctx: &Ctx<'_>, id: &str) -> Result<TmaSpec, GenerationError> {
    let node = ctx.graph.node(id).expect("validated");
    let pred_type = ctx.entry(id).pred_type().expect("validated Pred entry");
    let spec = TmaSpec::new(
        node.attrs.tense.unwrap_or(Tense::Unmarked),
        node.attrs.aspect.unwrap_or_else(|| Aspect::default_for(pred_type)),
    );
    tma_markers(spec, pred_type).map_err(|e| match e {
        TmaError::AspectOnState(aspect) => GenerationError::AspectOnState {
            node: id.to_string(),
            aspect,
        },
        TmaError::ZeroAspectOnProcess => GenerationError::ZeroAspectOnProcess(id.to_string()),
    })?;
    Ok(spec)
}

fn plan_clause(ctx: &Ctx<'_>, id: &str, epithets: &[String]) -> Result<ClausePlan, GenerationError> {
    let entry = ctx.entry(id);
    // (relation, role, concept) available to fill frame slots
    let mut fillers: Vec<(usize, String, String)> = Vec::new();
    let mut has_agent = false;
    for (i, r) in ctx.graph.relations.iter().enumerate() {
        if r.from == id {
            if ctx.category(&r.to) == Category::Pred && !epithets.contains(&r.to) {
                return Err(ctx.unrealizable(i));
            }
            if epithets.contains(&r.to) {
                return Err(ctx.unrealizable(i));
            }
            has_agent |= r.role == "agent";
            fillers.push((i, r.role.clone(), r.to.clone()));
        }
    }
    // a noun attributing this predicate becomes its subject
    for (i, r) in ctx.graph.relations.iter().enumerate() {
        if r.to == id {
            if ctx.category(&r.from) == Category::N && ctx.is_epithet_role(&r.role) && !has_agent {
                has_agent = true;
                fillers.push((i, "agent".to_string(), r.from.clone()));
            } else {
                return Err(ctx.unrealizable(i));
            }
        }
    }

    let frames = ctx.grammar.frames_of(entry).map_err(|_| GenerationError::NoFrameFits(id.to_string()))?;
    let complete: Vec<_> = frames.into_iter().filter(|f| f.kind == FrameKind::Complete).collect();
    if complete.is_empty() {
        return Err(GenerationError::NoFrameFits(id.to_string()));
    }
    let fits = |slots: &[crate::grammar::Slot]| -> Result<(), String> {
        let mut used = vec![false; fillers.len()];
        for s in slots {
            match (0..fillers.len()).find(|&k| !used[k] && fillers[k].1 == s.role) {
                Some(k) => used[k] = true,
                None => return Err(s.role.clone()),
            }
        }
        Ok(())
    };
    let mut best: Option<&crate::grammar::FrameDecl> = None;
    for f in &complete {
        if fits(&f.slots).is_ok() && best.is_none_or(|b| f.slots.len() > b.slots.len()) {
            best = Some(f);
        }
    }
    let frame = match best {
        Some(f) => f,
        None => {
            let first = complete[0];
            let role = fits(&first.slots).expect_err("no frame fits");
            return Err(GenerationError::MissingActant {
                node: id.to_string(),
                role,
                frame: first.name.clone(),
            });
        }
    };

    let mut used = vec![false; fillers.len()];
    let mut actants = Vec::new();
    for s in &frame.slots {
        let k = (0..fillers.len())
            .find(|&k| !used[k] && fillers[k].1 == s.role)
            .expect("frame fits");
        used[k] = true;
        actants.push(ActantPlan {
            role: s.role.clone(),
            fonction: s.fonction.clone(),
            relation: fillers[k].0,
            filler: Filler::Concept(fillers[k].2.clone()),
        });
    }
    let mut circumstants = Vec::new();
    for (k, (rel, role, concept)) in fillers.iter().enumerate() {
        if used[k] {
            continue;
        }
        if ctx.grammar.role(role).and_then(|r| r.circumstant()).is_none() {
            return Err(GenerationError::NoCircumstantTree {
                node: id.to_string(),
                role: role.clone(),
            });
        }
        circumstants.push(CircumstantPlan {
            role: role.clone(),
            relation: *rel,
            concept: concept.clone(),
        });
    }
    Ok(ClausePlan {
        head: id.to_string(),
        lemma: entry.lemma.clone(),
        frame: frame.name.clone(),
        actants,
        circumstants,
        tma: tma_for(ctx, id)?,
    })
}

pub fn plan(graph: &ConceptGraph, grammar: &Grammar) -> Result<RealizationPlan, GenerationError> {
    if let Some(issue) = validate_graph(graph, grammar).issues.first() {
        return Err(issue_error(issue));
    }
    let cover = cover_tree(graph, grammar).map_err(|d| GenerationError::DisconnectedGraph(d.0))?;
    let entries = graph
        .nodes
        .iter()
        .map(|n| (n.id.as_str(), grammar.select_entries(&n.key)[0]))
        .collect();
    let ctx = Ctx {
        graph,
        grammar,
        entries,
    };
    for n in &graph.nodes {
        if ctx.category(&n.id) == Category::N {
            if let Some(d) = n.attrs.determination {
                DeterminationSpec::new(d, n.attrs.plural.unwrap_or(false)).map_err(|e| {
                    GenerationError::InvalidDetermination {
                        node: n.id.clone(),
                        reason: e.to_string(),
                    }
                })?;
            }
        }
    }

    // classify Pred concepts, visiting in traversal order
    let epithets: Vec<String> = cover
        .order
        .iter()
        .filter(|id| is_epithet_node(&ctx, id, &cover.root))
        .cloned()
        .collect();
    let mut clauses = Vec::new();
    for id in &cover.order {
        if ctx.category(id) == Category::Pred && !epithets.contains(id) {
            clauses.push(plan_clause(&ctx, id, &epithets)?);
        }
    }

    let mut nouns: BTreeMap<String, NounPlan> = cover
        .order
        .iter()
        .filter(|id| ctx.category(id) == Category::N)
        .map(|id| {
            (
                id.clone(),
                NounPlan {
                    concept: id.clone(),
                    lemma: ctx.entry(id).lemma.clone(),
                    epithets: Vec::new(),
                    complements: Vec::new(),
                    relatives: Vec::new(),
                },
            )
        })
        .collect();

    let mut strategies: Vec<Option<Strategy>> = vec![None; graph.relations.len()];
    for c in &clauses {
        for a in &c.actants {
            strategies[a.relation] = Some(Strategy::Actant {
                fonction: a.fonction.clone(),
            });
        }
        for ci in &c.circumstants {
            strategies[ci.relation] = Some(Strategy::Circumstant);
        }
    }
    for (i, r) in graph.relations.iter().enumerate() {
        if epithets.contains(&r.to) {
            nouns.get_mut(&r.from).expect("N source").epithets.push(Modifier {
                relation: i,
                role: r.role.clone(),
                concept: r.to.clone(),
            });
            strategies[i] = Some(Strategy::Epithet);
        } else if ctx.category(&r.from) == Category::N && ctx.category(&r.to) == Category::N {
            if grammar.role(&r.role).and_then(|d| d.complement_tree()).is_none() {
                return Err(ctx.unrealizable(i));
            }
            nouns.get_mut(&r.from).expect("N source").complements.push(Modifier {
                relation: i,
                role: r.role.clone(),
                concept: r.to.clone(),
            });
            strategies[i] = Some(Strategy::Complement);
        }
    }

    // placement along the cover tree
    let mut homes = BTreeMap::new();
    let mut units = Vec::new();
    match ctx.category(&cover.root) {
        Category::Pred => units.push(Unit::Clause(0)),
        Category::N => {
            homes.insert(cover.root.clone(), Home::Unit);
            units.push(Unit::Noun(cover.root.clone()));
        }
    }
    for id in cover.order.iter().skip(1) {
        let e = cover.discovered_by[id];
        let rel = &graph.relations[e];
        if epithets.contains(id) {
            continue;
        }
        match ctx.category(id) {
            Category::Pred => {
                let ci = clauses.iter().position(|c| &c.head == id).expect("planned");
                let gap = clauses[ci].actants.iter().position(|a| {
                    a.relation == e
                        && a.fonction != "suj"
                        && rel.from == *id
                        && ctx.category(&rel.to) == Category::N
                        && !ctx.entry(&rel.to).is_predefined()
                });
                match gap {
                    Some(k) => {
                        clauses[ci].actants[k].filler = Filler::Gap;
                        nouns.get_mut(&rel.to).expect("N").relatives.push(ci);
                        strategies[e] = Some(Strategy::Relative);
                    }
                    None => {
                        units.push(Unit::Clause(ci));
                        strategies[e] = Some(Strategy::Juxtapose);
                    }
                }
            }
            Category::N => {
                let dependent = rel.to == *id || (rel.from == *id && ctx.category(&rel.to) == Category::Pred);
                if dependent {
                    homes.insert(id.clone(), Home::Relation(e));
                } else {
                    homes.insert(id.clone(), Home::Unit);
                    units.push(Unit::Noun(id.clone()));
                }
            }
        }
    }

    let strategies = strategies
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| ctx.unrealizable(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RealizationPlan {
        cover,
        clauses,
        nouns,
        units,
        strategies,
        homes,
    })
}
