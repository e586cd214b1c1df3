//! Tense/aspect particles. Tense (`té` or nothing) precedes aspect (`ka`,
//! `ké` or nothing); states only take tense.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    #[default]
    Unmarked,
    Passe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aspect {
    Zero,
    Perfectif,
    Imperfectif,
    Prospectif,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredType {
    Proces,
    Etat,
}

impl Tense {
    pub const ALL: [Tense; 2] = [Tense::Unmarked, Tense::Passe];

    pub fn as_str(self) -> &'static str {
        match self {
            Tense::Unmarked => "unmarked",
            Tense::Passe => "passe",
        }
    }

    pub fn tree_name(self) -> &'static str {
        match self {
            Tense::Unmarked => "tps-unmarked",
            Tense::Passe => "tps-passe",
        }
    }
}

impl Aspect {
    pub const ALL: [Aspect; 4] = [Aspect::Zero, Aspect::Perfectif, Aspect::Imperfectif, Aspect::Prospectif];

    pub fn as_str(self) -> &'static str {
        match self {
            Aspect::Zero => "zero",
            Aspect::Perfectif => "perfectif",
            Aspect::Imperfectif => "imperfectif",
            Aspect::Prospectif => "prospectif",
        }
    }

    pub fn tree_name(self) -> &'static str {
        match self {
            Aspect::Zero => "asp-zero",
            Aspect::Perfectif => "asp-perfectif",
            Aspect::Imperfectif => "asp-imperfectif",
            Aspect::Prospectif => "asp-prospectif",
        }
    }

    /// Default aspect for a predicate with no aspect attribute.
    pub fn default_for(t: PredType) -> Aspect {
        match t {
            PredType::Proces => Aspect::Perfectif,
            PredType::Etat => Aspect::Zero,
        }
    }
}

impl PredType {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "proces" => Some(PredType::Proces),
            "etat" => Some(PredType::Etat),
            _ => None,
        }
    }
}

impl fmt::Display for Tense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TmaSpec {
    pub tense: Tense,
    pub aspect: Aspect,
}

impl TmaSpec {
    pub fn new(tense: Tense, aspect: Aspect) -> Self {
        TmaSpec { tense, aspect }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TmaError {
    #[error("aspect {0} on a state predicate")]
    AspectOnState(Aspect),
    #[error("zero aspect on a process predicate")]
    ZeroAspectOnProcess,
}

pub fn tma_markers(spec: TmaSpec, pred_type: PredType) -> Result<Vec<&'static str>, TmaError> {
    let aspect = match (pred_type, spec.aspect) {
        (PredType::Etat, Aspect::Zero) => None,
        (PredType::Etat, a) => return Err(TmaError::AspectOnState(a)),
        (PredType::Proces, Aspect::Zero) => return Err(TmaError::ZeroAspectOnProcess),
        (PredType::Proces, Aspect::Perfectif) => None,
        (PredType::Proces, Aspect::Imperfectif) => Some("ka"),
        (PredType::Proces, Aspect::Prospectif) => Some("ké"),
    };
    let tense = match spec.tense {
        Tense::Unmarked => None,
        Tense::Passe => Some("té"),
    };
    Ok(tense.into_iter().chain(aspect).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn table_cells() {
        let p = PredType::Proces;
        assert_eq!(tma_markers(TmaSpec::new(Tense::Unmarked, Aspect::Imperfectif), p), Ok(vec!["ka"]));
        assert_eq!(tma_markers(TmaSpec::new(Tense::Passe, Aspect::Prospectif), p), Ok(vec!["té", "ké"]));
        assert_eq!(tma_markers(TmaSpec::new(Tense::Unmarked, Aspect::Perfectif), p), Ok(vec![]));
        assert_eq!(
            tma_markers(TmaSpec::new(Tense::Unmarked, Aspect::Imperfectif), PredType::Etat),
            Err(TmaError::AspectOnState(Aspect::Imperfectif))
        );
    }

    #[test]
    fn reachable_sequences() {
        let collect = |t: PredType| -> BTreeSet<Vec<&str>> {
            Tense::ALL
                .iter()
                .flat_map(|&te| Aspect::ALL.iter().map(move |&a| TmaSpec::new(te, a)))
                .filter_map(|s| tma_markers(s, t).ok())
                .collect()
        };
        let proces: BTreeSet<Vec<&str>> = [
            vec![],
            vec!["ka"],
            vec!["ké"],
            vec!["té"],
            vec!["té", "ka"],
            vec!["té", "ké"],
        ]
        .into_iter()
        .collect();
        assert_eq!(collect(PredType::Proces), proces);
        let etat: BTreeSet<Vec<&str>> = [vec![], vec!["té"]].into_iter().collect();
        assert_eq!(collect(PredType::Etat), etat);
    }
}
