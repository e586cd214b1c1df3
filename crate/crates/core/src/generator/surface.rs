//! Token sequences to orthographic strings.

use thiserror::Error;

use crate::tagcore::{Attachment, SurfaceToken};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("token {index} (`{text}`) has no neighbour to attach to")]
pub struct DanglingAttachment {
    pub index: usize,
    pub text: String,
}

fn vowel_final(s: &str) -> bool {
    s.chars()
        .last()
        .is_some_and(|c| "aeiouéèò".contains(c.to_lowercase().next().unwrap_or(c)))
}

/// Spaces between free tokens, hyphens for attached determiners and `sé-`,
/// elision of clitics after a vowel-final word (`ba` + `ou` → `ba'w`).
/// A clitic with no vowel-final left neighbour keeps its full form.
pub fn surface(tokens: &[SurfaceToken]) -> Result<String, DanglingAttachment> {
    let dangling = |i: usize| DanglingAttachment {
        index: i,
        text: tokens[i].text.clone(),
    };
    let mut out = String::new();
    let mut glue = false;
    for (i, tok) in tokens.iter().enumerate() {
        match &tok.attachment {
            Attachment::HyphenLeft => {
                if i == 0 || glue {
                    return Err(dangling(i));
                }
                out.push('-');
                out.push_str(&tok.text);
            }
            Attachment::CliticLeft { elided } if i > 0 && !glue && vowel_final(&tokens[i - 1].text) => {
                out.push('\'');
                out.push_str(elided);
            }
            _ => {
                if i > 0 && !glue {
                    out.push(' ');
                }
                out.push_str(&tok.text);
            }
        }
        glue = false;
        if tok.attachment == Attachment::HyphenRight {
            if i + 1 == tokens.len() {
                return Err(dangling(i));
            }
            out.push('-');
            glue = true;
        }
    }
    Ok(out)
}
