//! Flat feature structures with unification, overwrite and variable binding.
//!
//! Values follow the Prolog convention used in the grammar files: a value
//! whose first character is an uppercase letter is a variable, anything else
//! is an atom.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureValue {
    Atom(String),
    Var(String),
}

impl FeatureValue {
    pub fn atom(s: impl Into<String>) -> Self {
        FeatureValue::Atom(s.into())
    }

    pub fn var(s: impl Into<String>) -> Self {
        FeatureValue::Var(s.into())
    }

    /// Reads a bare value token: uppercase initial means variable.
    pub fn parse(s: &str) -> Option<Self> {
        let first = s.chars().next()?;
        if first.is_uppercase() {
            Some(FeatureValue::Var(s.to_string()))
        } else {
            Some(FeatureValue::Atom(s.to_string()))
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, FeatureValue::Var(_))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            FeatureValue::Atom(a) => Some(a),
            FeatureValue::Var(_) => None,
        }
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Atom(s) | FeatureValue::Var(s) => f.write_str(s),
        }
    }
}

/// A depth-one map from feature names to values. Iteration order is
/// lexicographic by feature name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeatureStructure {
    entries: BTreeMap<String, FeatureValue>,
}

impl FeatureStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, feature: &str) -> Option<&FeatureValue> {
        self.entries.get(feature)
    }

    pub fn contains(&self, feature: &str) -> bool {
        self.entries.contains_key(feature)
    }

    pub fn insert(&mut self, feature: impl Into<String>, value: FeatureValue) {
        self.entries.insert(feature.into(), value);
    }

    pub fn with(mut self, feature: impl Into<String>, value: FeatureValue) -> Self {
        self.insert(feature, value);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &FeatureValue)> {
        self.entries.iter()
    }

    pub fn features(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.entries.values().filter_map(|v| match v {
            FeatureValue::Var(n) => Some(n.as_str()),
            FeatureValue::Atom(_) => None,
        })
    }

    pub(crate) fn map_values(&self, mut f: impl FnMut(&FeatureValue) -> FeatureValue) -> Self {
        FeatureStructure {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }
}

impl<K: Into<String>> FromIterator<(K, FeatureValue)> for FeatureStructure {
    fn from_iter<I: IntoIterator<Item = (K, FeatureValue)>>(iter: I) -> Self {
        FeatureStructure {
            entries: iter.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", k, v)?;
        }
        f.write_str("}")
    }
}

impl Serialize for FeatureStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed feature structure: {0}")]
pub struct FsParseError(pub String);

impl FromStr for FeatureStructure {
    type Err = FsParseError;

    /// Parses the rendering produced by `Display`, e.g. `{harm=A, type=etat}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| FsParseError(s.to_string()))?;
        let mut fs = FeatureStructure::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| FsParseError(part.to_string()))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || fs.contains(k) {
                return Err(FsParseError(part.to_string()));
            }
            let value = FeatureValue::parse(v).ok_or_else(|| FsParseError(part.to_string()))?;
            fs.insert(k, value);
        }
        Ok(fs)
    }
}

/// Variable bindings threaded through unification. Also owns the counter
/// used to rename variables apart when elementary trees are instantiated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    map: BTreeMap<String, FeatureValue>,
    fresh: u64,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn lookup(&self, var: &str) -> Option<&FeatureValue> {
        self.map.get(var)
    }

    /// Binds `var` directly. Binding a variable to itself is a no-op.
    pub fn bind(&mut self, var: impl Into<String>, value: FeatureValue) {
        let var = var.into();
        if value == FeatureValue::Var(var.clone()) {
            return;
        }
        self.map.insert(var, value);
    }

    /// Follows a binding chain to an atom or an unbound variable.
    pub fn walk(&self, value: &FeatureValue) -> FeatureValue {
        let mut current = value;
        // chains are acyclic: bind() only ever targets walked, distinct values
        while let FeatureValue::Var(name) = current {
            match self.map.get(name) {
                Some(next) => current = next,
                None => break,
            }
        }
        current.clone()
    }

    pub fn next_fresh(&mut self) -> u64 {
        self.fresh += 1;
        self.fresh
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("feature clash on `{feature}`: {left} vs {right}")]
pub struct Clash {
    pub feature: String,
    pub left: FeatureValue,
    pub right: FeatureValue,
}

/// Unifies two values under `env`, extending it in place.
pub fn unify_values(
    feature: &str,
    x: &FeatureValue,
    y: &FeatureValue,
    env: &mut Bindings,
) -> Result<FeatureValue, Clash> {
    let wx = env.walk(x);
    let wy = env.walk(y);
    match (&wx, &wy) {
        (FeatureValue::Atom(p), FeatureValue::Atom(q)) => {
            if p == q {
                Ok(wx)
            } else {
                Err(Clash {
                    feature: feature.to_string(),
                    left: wx.clone(),
                    right: wy.clone(),
                })
            }
        }
        (FeatureValue::Var(v), FeatureValue::Var(w)) if v == w => Ok(wx),
        (FeatureValue::Var(v), _) => {
            env.bind(v.clone(), wy.clone());
            Ok(wy)
        }
        (_, FeatureValue::Var(w)) => {
            env.bind(w.clone(), wx.clone());
            Ok(wx)
        }
    }
}

/// Non-destructive unification. On a clash nothing is returned but the
/// clash; `env` is untouched.
pub fn unify(
    a: &FeatureStructure,
    b: &FeatureStructure,
    env: &Bindings,
) -> Result<(FeatureStructure, Bindings), Clash> {
    let mut env = env.clone();
    let mut out = a.clone();
    for (feature, bv) in b.iter() {
        let merged = match a.get(feature) {
            Some(av) => unify_values(feature, av, bv, &mut env)?,
            None => bv.clone(),
        };
        out.insert(feature.clone(), merged);
    }
    Ok((out, env))
}

pub fn overwrite(fs: &FeatureStructure, feature: &str, value: FeatureValue) -> FeatureStructure {
    fs.clone().with(feature, value)
}

pub fn remove(fs: &FeatureStructure, feature: &str) -> FeatureStructure {
    let mut out = fs.clone();
    out.entries.remove(feature);
    out
}

pub fn resolve(fs: &FeatureStructure, env: &Bindings) -> FeatureStructure {
    fs.map_values(|v| env.walk(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FeatureStructure {
        s.parse().unwrap()
    }

    #[test]
    fn unify_identical_atoms() {
        let (r, _) = unify(&fs("{type=proces}"), &fs("{type=proces}"), &Bindings::new()).unwrap();
        assert_eq!(r, fs("{type=proces}"));
    }

    #[test]
    fn state_process_clash() {
        let err = unify(&fs("{type=etat}"), &fs("{type=proces}"), &Bindings::new()).unwrap_err();
        assert_eq!(err.feature, "type");
    }

    #[test]
    fn var_binds_against_atom() {
        let (r, env) = unify(&fs("{harm=A}"), &fs("{harm=la}"), &Bindings::new()).unwrap();
        assert_eq!(resolve(&r, &env), fs("{harm=la}"));
        assert_eq!(env.lookup("A"), Some(&FeatureValue::atom("la")));
    }

    #[test]
    fn absent_features_are_adopted() {
        let (r, _) = unify(&fs("{cadre=transitif}"), &fs("{type=proces}"), &Bindings::new()).unwrap();
        assert_eq!(r, fs("{cadre=transitif, type=proces}"));
    }

    #[test]
    fn overwrite_and_remove() {
        assert_eq!(
            overwrite(&FeatureStructure::new(), "temps", FeatureValue::atom("passe")),
            fs("{temps=passe}")
        );
        assert_eq!(
            overwrite(&fs("{aspect=imperfectif}"), "aspect", FeatureValue::atom("zero")),
            fs("{aspect=zero}")
        );
        let orig = fs("{cadre=attributif}");
        let sat = overwrite(&orig, "sature", FeatureValue::atom("plus"));
        assert_eq!(sat, fs("{cadre=attributif, sature=plus}"));
        assert_eq!(orig, fs("{cadre=attributif}"));
        assert_eq!(remove(&fs("{cadre=intransitif}"), "cadre"), fs("{}"));
        assert_eq!(remove(&fs("{}"), "cadre"), fs("{}"));
        assert_eq!(remove(&fs("{temps=passe, aspect=zero}"), "temps"), fs("{aspect=zero}"));
    }

    #[test]
    fn resolve_walks_chains() {
        let mut env = Bindings::new();
        env.bind("A", FeatureValue::atom("an"));
        assert_eq!(resolve(&fs("{harm=A}"), &env), fs("{harm=an}"));
        assert_eq!(resolve(&fs("{det=def}"), &Bindings::new()), fs("{det=def}"));

        let mut env = Bindings::new();
        env.bind("A", FeatureValue::var("B"));
        env.bind("B", FeatureValue::atom("la"));
        assert_eq!(resolve(&fs("{harm=A}"), &env), fs("{harm=la}"));
    }

    #[test]
    fn unbound_vars_persist() {
        assert_eq!(resolve(&fs("{harm=A}"), &Bindings::new()), fs("{harm=A}"));
    }

    #[test]
    fn display_is_sorted() {
        let f: FeatureStructure = [
            ("temps", FeatureValue::atom("passe")),
            ("aspect", FeatureValue::var("X")),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.to_string(), "{aspect=X, temps=passe}");
    }

    #[test]
    fn parse_rejects_duplicates() {
        assert!("{a=b, a=c}".parse::<FeatureStructure>().is_err());
        assert!("a=b".parse::<FeatureStructure>().is_err());
    }
}
