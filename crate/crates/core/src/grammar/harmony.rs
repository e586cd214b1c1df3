//! Consonantal and nasal harmony of the postposed definite marker.
//!
//! Two binary decisions on the end of the word pick one of `-a`, `-la`,
//! `-an`, `-lan`: does it end in a vowel or in a consonant (semivowels `y`,
//! `w` count as consonants), and is its last vowel nasal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Harm {
    A,
    La,
    An,
    Lan,
}

impl Harm {
    pub const ALL: [Harm; 4] = [Harm::A, Harm::La, Harm::An, Harm::Lan];

    pub fn as_str(self) -> &'static str {
        match self {
            Harm::A => "a",
            Harm::La => "la",
            Harm::An => "an",
            Harm::Lan => "lan",
        }
    }
}

impl fmt::Display for Harm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Harm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Harm::ALL
            .into_iter()
            .find(|h| h.as_str() == s)
            .ok_or_else(|| format!("not a harmony class: {}", s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot read the ending of `{0}`; give harm explicitly")]
pub struct UnparsableEnding(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Grapheme {
    Vowel { nasal: bool },
    Consonant,
}

const VOWELS: &[char] = &['a', 'e', 'é', 'è', 'i', 'o', 'ò', 'u'];
const CONSONANTS: &str = "bcdfghjklmnpqrstvwxyz";

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

fn segment(word: &str) -> Option<Vec<Grapheme>> {
    let chars: Vec<char> = word.chars().flat_map(char::to_lowercase).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        if c == 'o' && next == Some('u') {
            out.push(Grapheme::Vowel { nasal: false });
            i += 2;
        } else if matches!(c, 'a' | 'e' | 'o') && next == Some('n') {
            // an/en/on is a nasal vowel unless a vowel or a second n follows
            let after = chars.get(i + 2).copied();
            let nasal = match after {
                None => true,
                Some(a) => !is_vowel(a) && a != 'n',
            };
            if nasal {
                out.push(Grapheme::Vowel { nasal: true });
                i += 2;
            } else {
                out.push(Grapheme::Vowel { nasal: false });
                i += 1;
            }
        } else if is_vowel(c) {
            out.push(Grapheme::Vowel { nasal: false });
            i += 1;
        } else if CONSONANTS.contains(c) {
            out.push(Grapheme::Consonant);
            i += 1;
        } else {
            return None;
        }
    }
    Some(out)
}

pub fn harmony_class(lemma: &str) -> Result<Harm, UnparsableEnding> {
    let unparsable = || UnparsableEnding(lemma.to_string());
    let graphemes = segment(lemma).ok_or_else(unparsable)?;
    let last = *graphemes.last().ok_or_else(unparsable)?;
    let nasal = graphemes
        .iter()
        .rev()
        .find_map(|g| match g {
            Grapheme::Vowel { nasal } => Some(*nasal),
            Grapheme::Consonant => None,
        })
        .ok_or_else(unparsable)?;
    let vowel_final = matches!(last, Grapheme::Vowel { .. });
    Ok(match (vowel_final, nasal) {
        (true, false) => Harm::A,
        (false, false) => Harm::La,
        (true, true) => Harm::An,
        (false, true) => Harm::Lan,
    })
}
