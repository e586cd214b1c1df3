//! Grammar file reader.
//!
//! ```text
//! file     := (section | comment | blank)*
//! section  := HEADER NEWLINE line*         HEADER: FEATURES FRAMES ROLES LEXICON TREES
//! comment  := "#" ... NEWLINE              also allowed after any line
//!
//! FEATURES  name ":" value+
//! FRAMES    name ("complete" | "restricted") tree (role ":" fonction)+
//! ROLES     name kind ("|" kind)*
//!             kind := "actant" | "circumstant" "lexeme" lemma frame
//!                   | "circumstant" "tree" tree | "complement" tree | "epithet" tree
//! LEXICON   lemma ("N" | "Pred") fs? attr*
//!             attr := "frames=" list | "keys=" list | "elides=" form
//!                   | "gloss=" STRING | "harm-override"
//! TREES     name ("initial" | "auxiliary" | "schema") tree-notation
//! ```
//!
//! A tree definition may span lines: it runs until its parentheses balance.
//! Sections may repeat and appear in any order; lists are comma-separated.

use std::collections::{BTreeMap, BTreeSet};

use super::harmony::{harmony_class, Harm};
use super::{Category, FrameDecl, FrameKind, Grammar, GrammarError, LexicalEntry, RoleDecl, RoleKind, Slot};
use crate::fstruct::{FeatureStructure, FeatureValue};
use crate::tagcore::{parse_tree, ElementaryTree, Family, NodeKind, TreeNode};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Features,
    Frames,
    Roles,
    Lexicon,
    Trees,
}

fn parse_err(line: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Parse {
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Whitespace split that keeps `{...}` and `"..."` groups whole.
fn words(line: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    let mut in_str = false;
    for c in line.chars() {
        match c {
            '"' => in_str = !in_str,
            '{' if !in_str => depth += 1,
            '}' if !in_str => depth = depth.checked_sub(1).ok_or("unbalanced `}`")?,
            c if c.is_whitespace() && !in_str && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if in_str {
        return Err("unterminated string".into());
    }
    if depth != 0 {
        return Err("unbalanced `{`".into());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn paren_balance(s: &str) -> i64 {
    let mut in_str = false;
    let mut n = 0;
    for c in s.chars() {
        match c {
            '"' => in_str = !in_str,
            '(' if !in_str => n += 1,
            ')' if !in_str => n -= 1,
            _ => {}
        }
    }
    n
}

fn list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

struct Raw {
    features: BTreeMap<String, BTreeSet<String>>,
    frames: Vec<FrameDecl>,
    roles: Vec<RoleDecl>,
    lexicon: Vec<(usize, LexicalEntry)>,
    trees: Vec<ElementaryTree>,
}

pub(super) fn load(src: &str) -> Result<Grammar, GrammarError> {
    let raw = parse(src)?;
    validate(raw)
}

fn parse(src: &str) -> Result<Raw, GrammarError> {
    let mut raw = Raw {
        features: BTreeMap::new(),
        frames: Vec::new(),
        roles: Vec::new(),
        lexicon: Vec::new(),
        trees: Vec::new(),
    };
    let mut section = None;
    // tree definition in progress: (start line, name, family, text)
    let mut pending: Option<(usize, String, Family, String)> = None;

    for (idx, full) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(full).trim();

        if let Some((start, name, family, mut text)) = pending.take() {
            text.push('\n');
            text.push_str(line);
            if paren_balance(&text) > 0 {
                pending = Some((start, name, family, text));
            } else {
                raw.trees.push(tree_def(start, name, family, &text)?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let header = match line {
            "FEATURES" => Some(Section::Features),
            "FRAMES" => Some(Section::Frames),
            "ROLES" => Some(Section::Roles),
            "LEXICON" => Some(Section::Lexicon),
            "TREES" => Some(Section::Trees),
            _ => None,
        };
        if header.is_some() {
            section = header;
            continue;
        }
        match section {
            None => return Err(parse_err(lineno, "content before the first section header")),
            Some(Section::Features) => {
                let (name, values) = line
                    .split_once(':')
                    .ok_or_else(|| parse_err(lineno, "expected `feature: value ...`"))?;
                let values: BTreeSet<String> = values.split_whitespace().map(String::from).collect();
                if values.is_empty() {
                    return Err(parse_err(lineno, "feature declares no values"));
                }
                raw.features.entry(name.trim().to_string()).or_default().extend(values);
            }
            Some(Section::Frames) => raw.frames.push(frame_line(lineno, line)?),
            Some(Section::Roles) => raw.roles.push(role_line(lineno, line)?),
            Some(Section::Lexicon) => raw.lexicon.push((lineno, lexicon_line(lineno, line)?)),
            Some(Section::Trees) => {
                let bad = || parse_err(lineno, "expected `name family (tree ...)`");
                let (name, rest) = line.split_once(char::is_whitespace).ok_or_else(bad)?;
                let rest = rest.trim_start();
                let (family, text) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let family = Family::parse(family).ok_or_else(bad)?;
                let name = name.to_string();
                let text = text.trim().to_string();
                if paren_balance(&text) > 0 || text.is_empty() {
                    pending = Some((lineno, name, family, text));
                } else {
                    raw.trees.push(tree_def(lineno, name, family, &text)?);
                }
            }
        }
    }
    if let Some((start, ..)) = pending {
        return Err(parse_err(start, "tree definition never closes"));
    }
    Ok(raw)
}

fn tree_def(line: usize, name: String, family: Family, text: &str) -> Result<ElementaryTree, GrammarError> {
    let root = parse_tree(text, &name).map_err(|e| parse_err(line, format!("tree `{}`: {}", name, e)))?;
    Ok(ElementaryTree::new(name, family, root))
}

fn frame_line(lineno: usize, line: &str) -> Result<FrameDecl, GrammarError> {
    let w: Vec<&str> = line.split_whitespace().collect();
    if w.len() < 4 {
        return Err(parse_err(lineno, "expected `frame complete|restricted tree role:fonction ...`"));
    }
    let kind = match w[1] {
        "complete" => FrameKind::Complete,
        "restricted" => FrameKind::Restricted,
        other => return Err(parse_err(lineno, format!("unknown frame kind `{}`", other))),
    };
    let slots = w[3..]
        .iter()
        .map(|s| {
            s.split_once(':')
                .map(|(r, f)| Slot {
                    role: r.to_string(),
                    fonction: f.to_string(),
                })
                .ok_or_else(|| parse_err(lineno, format!("slot `{}` is not role:fonction", s)))
        })
        .collect::<Result<_, _>>()?;
    Ok(FrameDecl {
        name: w[0].to_string(),
        kind,
        tree: w[2].to_string(),
        slots,
    })
}

fn role_line(lineno: usize, line: &str) -> Result<RoleDecl, GrammarError> {
    let (name, rest) = line
        .split_once(char::is_whitespace)
        .ok_or_else(|| parse_err(lineno, "role without realization"))?;
    let kinds = rest
        .split('|')
        .map(|k| {
            let w: Vec<&str> = k.split_whitespace().collect();
            match w.as_slice() {
                ["actant"] => Ok(RoleKind::Actant),
                ["circumstant", "lexeme", lemma, frame] => Ok(RoleKind::CircumstantLexeme {
                    lemma: lemma.to_string(),
                    frame: frame.to_string(),
                }),
                ["circumstant", "tree", tree] => Ok(RoleKind::CircumstantTree { tree: tree.to_string() }),
                ["complement", tree] => Ok(RoleKind::Complement { tree: tree.to_string() }),
                ["epithet", tree] => Ok(RoleKind::Epithet { tree: tree.to_string() }),
                _ => Err(parse_err(lineno, format!("cannot read role realization `{}`", k.trim()))),
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(RoleDecl {
        name: name.to_string(),
        kinds,
    })
}

fn lexicon_line(lineno: usize, line: &str) -> Result<LexicalEntry, GrammarError> {
    let w = words(line).map_err(|m| parse_err(lineno, m))?;
    if w.len() < 2 {
        return Err(parse_err(lineno, "expected `lemma N|Pred ...`"));
    }
    let category = match w[1].as_str() {
        "N" => Category::N,
        "Pred" => Category::Pred,
        other => return Err(parse_err(lineno, format!("unknown category `{}`", other))),
    };
    let mut entry = LexicalEntry {
        lemma: w[0].clone(),
        category,
        features: FeatureStructure::new(),
        frames: Vec::new(),
        concept_keys: Vec::new(),
        gloss: String::new(),
        elision: None,
        harm_override: false,
    };
    for attr in &w[2..] {
        if attr.starts_with('{') {
            entry.features = attr.parse().map_err(|e| parse_err(lineno, format!("{}", e)))?;
        } else if attr == "harm-override" {
            entry.harm_override = true;
        } else if let Some((k, v)) = attr.split_once('=') {
            match k {
                "frames" => entry.frames = list(v),
                "keys" => entry.concept_keys = list(v),
                "elides" => entry.elision = Some(v.to_string()),
                "gloss" => entry.gloss = v.trim_matches('"').to_string(),
                _ => return Err(parse_err(lineno, format!("unknown attribute `{}`", k))),
            }
        } else {
            return Err(parse_err(lineno, format!("cannot read `{}`", attr)));
        }
    }
    Ok(entry)
}

fn check_fs(
    features: &BTreeMap<String, BTreeSet<String>>,
    fs: &FeatureStructure,
    context: &str,
    problems: &mut Vec<String>,
) {
    for (k, v) in fs.iter() {
        match features.get(k) {
            None => problems.push(format!("{}: undeclared feature `{}`", context, k)),
            Some(values) => {
                if let FeatureValue::Atom(a) = v {
                    if !values.contains(a) {
                        problems.push(format!("{}: `{}` is not a declared value of `{}`", context, a, k));
                    }
                }
            }
        }
    }
}

fn slot_fonctions(tree: &TreeNode) -> Vec<String> {
    let mut out = Vec::new();
    tree.walk(&mut |_, n| {
        if n.kind == NodeKind::Substitution {
            if let Some(f) = n.top.get("fonction").and_then(FeatureValue::as_atom) {
                out.push(f.to_string());
            }
        }
    });
    out
}

fn validate(raw: Raw) -> Result<Grammar, GrammarError> {
    let mut problems = Vec::new();
    let features = &raw.features;

    if raw.trees.is_empty() {
        problems.push("grammar declares no trees".to_string());
    }
    let mut trees = BTreeMap::new();
    let mut tree_order = Vec::new();
    for t in &raw.trees {
        if trees.insert(t.name.clone(), t.clone()).is_some() {
            problems.push(format!("tree `{}` declared twice", t.name));
        } else {
            tree_order.push(t.name.clone());
        }
        problems.extend(t.check());
        t.root.walk(&mut |addr, n| {
            let ctx = format!("tree `{}` at {}", t.name, addr);
            check_fs(features, &n.top, &ctx, &mut problems);
            check_fs(features, &n.bottom, &ctx, &mut problems);
            // temps is introduced only by the tense trees, at Predbarbar
            if matches!(n.category.as_str(), "Pred" | "Predbar")
                && (n.top.contains("temps") || n.bottom.contains("temps"))
            {
                problems.push(format!("{}: temps below Predbarbar", ctx));
            }
        });
    }

    let role_names: BTreeSet<&str> = raw.roles.iter().map(|r| r.name.as_str()).collect();
    for f in &raw.frames {
        match trees.get(&f.tree) {
            None => problems.push(format!("frame `{}` has no tree `{}`", f.name, f.tree)),
            Some(t) => {
                let expected = match f.kind {
                    FrameKind::Complete => t.family == Family::Schema,
                    FrameKind::Restricted => t.family == Family::Auxiliary && t.anchor_category.is_some(),
                };
                if !expected {
                    problems.push(format!(
                        "frame `{}`: tree `{}` must be a {}",
                        f.name,
                        f.tree,
                        match f.kind {
                            FrameKind::Complete => "schema",
                            FrameKind::Restricted => "anchored auxiliary",
                        }
                    ));
                }
                let fonctions = slot_fonctions(&t.root);
                for s in &f.slots {
                    if !fonctions.contains(&s.fonction) {
                        problems.push(format!(
                            "frame `{}`: tree `{}` has no slot with fonction={}",
                            f.name, f.tree, s.fonction
                        ));
                    }
                    if !role_names.contains(s.role.as_str()) {
                        problems.push(format!("frame `{}`: undeclared role `{}`", f.name, s.role));
                    }
                }
            }
        }
    }

    let mut lexicon = Vec::with_capacity(raw.lexicon.len());
    for (line, mut e) in raw.lexicon {
        let ctx = format!("lexicon line {} (`{}`)", line, e.lemma);
        check_fs(features, &e.features, &ctx, &mut problems);
        for fr in &e.frames {
            if !raw.frames.iter().any(|f| &f.name == fr) {
                problems.push(format!("{}: frame `{}` has no declaration", ctx, fr));
            }
        }
        match e.category {
            Category::Pred => {
                if e.pred_type().is_none() {
                    problems.push(format!("{}: Pred entry needs type=proces|etat", ctx));
                }
                if !e.features.contains("epithete") {
                    problems.push(format!("{}: Pred entry needs epithete", ctx));
                }
                if e.frames.is_empty() {
                    problems.push(format!("{}: Pred entry needs at least one frame", ctx));
                }
            }
            Category::N => match (e.harm(), harmony_class(&e.lemma)) {
                (None, Ok(h)) if !e.features.contains("harm") => {
                    e.features.insert("harm", FeatureValue::atom(h.as_str()));
                }
                (None, Err(_)) if !e.features.contains("harm") => {
                    problems.push(format!("{}: cannot compute harm, give it explicitly", ctx));
                }
                (None, _) => problems.push(format!("{}: harm must be one of a, la, an, lan", ctx)),
                (Some(stored), computed) => {
                    let agrees = computed.as_ref().map(|c| *c == stored).unwrap_or(false);
                    if !agrees && !e.harm_override {
                        problems.push(format!(
                            "{}: harm={} disagrees with harmony rule ({}); mark harm-override",
                            ctx,
                            stored,
                            match computed {
                                Ok(c) => Harm::as_str(c).to_string(),
                                Err(err) => err.to_string(),
                            }
                        ));
                    }
                }
            },
        }
        lexicon.push(e);
    }

    for r in &raw.roles {
        for k in &r.kinds {
            match k {
                RoleKind::Actant => {}
                RoleKind::CircumstantLexeme { lemma, frame } => {
                    let entry = lexicon.iter().find(|e| &e.lemma == lemma);
                    match entry {
                        None => problems.push(format!("role `{}`: no lexeme `{}`", r.name, lemma)),
                        Some(e) if !e.frames.contains(frame) => {
                            problems.push(format!("role `{}`: `{}` has no frame `{}`", r.name, lemma, frame))
                        }
                        Some(_) => {}
                    }
                    match raw.frames.iter().find(|f| &f.name == frame) {
                        Some(f) if f.kind == FrameKind::Restricted => {}
                        _ => problems.push(format!("role `{}`: `{}` is not a restricted frame", r.name, frame)),
                    }
                }
                RoleKind::CircumstantTree { tree } | RoleKind::Complement { tree } | RoleKind::Epithet { tree } => {
                    match trees.get(tree) {
                        Some(t) if t.family == Family::Auxiliary => {}
                        Some(_) => problems.push(format!("role `{}`: tree `{}` is not auxiliary", r.name, tree)),
                        None => problems.push(format!("role `{}`: no tree `{}`", r.name, tree)),
                    }
                }
            }
        }
    }

    if !problems.is_empty() {
        return Err(GrammarError::Validation(problems));
    }
    Ok(Grammar {
        features: raw.features,
        frames: raw.frames,
        roles: raw.roles,
        lexicon,
        trees,
        tree_order,
    })
}
