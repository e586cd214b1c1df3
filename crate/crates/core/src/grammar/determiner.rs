//! Degrees of determination and the determiner trees realizing them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::harmony::Harm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Degree {
    #[default]
    Generique,
    Indefini,
    Defini,
    Demonstratif,
}

impl Degree {
    pub fn as_str(self) -> &'static str {
        match self {
            Degree::Generique => "generique",
            Degree::Indefini => "indefini",
            Degree::Defini => "defini",
            Degree::Demonstratif => "demonstratif",
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DeterminationSpec {
    pub degree: Degree,
    pub plural: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("plural is only expressed on definite and demonstrative noun phrases, not {0}")]
pub struct PluralWithoutPostposed(pub Degree);

impl DeterminationSpec {
    pub fn new(degree: Degree, plural: bool) -> Result<Self, PluralWithoutPostposed> {
        if plural && !matches!(degree, Degree::Defini | Degree::Demonstratif) {
            return Err(PluralWithoutPostposed(degree));
        }
        Ok(DeterminationSpec { degree, plural })
    }
}

/// Candidate determiner trees, in the order to try them, and the markers
/// they will spell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminerSelection {
    pub trees: Vec<&'static str>,
    pub preposed: Option<&'static str>,
    pub postposed: Option<String>,
}

/// Postposed markers come in two trees each: hyphenated straight after the
/// noun, or free after noun complements (the `-cpl` variant).
pub fn determiner_trees(spec: DeterminationSpec, harm: Harm) -> DeterminerSelection {
    let (trees, preposed, postposed): (Vec<&'static str>, _, _) = match (spec.degree, spec.plural) {
        (Degree::Generique, _) => (vec!["det-gen"], None, None),
        (Degree::Indefini, _) => (vec!["det-indef"], Some("an"), None),
        (Degree::Defini, false) => (vec!["det-def", "det-def-cpl"], None, Some(harm.to_string())),
        (Degree::Defini, true) => (vec!["det-def-pl", "det-def-pl-cpl"], Some("sé"), Some(harm.to_string())),
        (Degree::Demonstratif, false) => (vec!["det-dem", "det-dem-cpl"], None, Some("tala".to_string())),
        (Degree::Demonstratif, true) => (vec!["det-dem-pl", "det-dem-pl-cpl"], Some("sé"), Some("tala".to_string())),
    };
    DeterminerSelection {
        trees,
        preposed,
        postposed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plural_indefinite_rejected() {
        assert!(DeterminationSpec::new(Degree::Indefini, true).is_err());
        assert!(DeterminationSpec::new(Degree::Generique, true).is_err());
        assert!(DeterminationSpec::new(Degree::Demonstratif, true).is_ok());
    }

    #[test]
    fn selections() {
        let s = determiner_trees(DeterminationSpec::new(Degree::Indefini, false).unwrap(), Harm::La);
        assert_eq!(s.preposed, Some("an"));
        let s = determiner_trees(DeterminationSpec::new(Degree::Demonstratif, true).unwrap(), Harm::La);
        assert_eq!((s.preposed, s.postposed.as_deref()), (Some("sé"), Some("tala")));
        let s = determiner_trees(DeterminationSpec::new(Degree::Defini, false).unwrap(), Harm::An);
        assert_eq!(s.postposed.as_deref(), Some("an"));
        assert_eq!(s.trees[0], "det-def");
    }
}
