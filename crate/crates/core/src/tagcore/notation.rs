//! Bracketed tree notation.
//!
//! ```text
//! tree    := "(" CATEGORY marker? fspec* child* ")"
//! marker  := "↓" | "*" | "@"          substitution, foot, anchor
//! fspec   := ("top" | "bot")? "{" (feat ("," feat)*)? "}"
//! feat    := NAME "=" VALUE            VALUE with uppercase initial is a variable
//! child   := tree | token
//! token   := "-"? (STRING | "<" VAR ">") "-"?
//! ```
//!
//! A bare `{...}` sets both top and bottom. A leading `-` on a token attaches
//! it to the left neighbour with a hyphen, a trailing `-` to the right one.
//! `<A>` spells the token from the value bound to `A`.

use std::fmt;

use thiserror::Error;

use super::tree::{Attachment, LexToken, NodeKind, TokenText, TreeNode};
use crate::fstruct::{FeatureStructure, FeatureValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("tree notation, offset {offset}: {message}")]
pub struct NotationError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eq,
    Lt,
    Gt,
    Dash,
    Marker(char),
    Str(String),
    Word(String),
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, NotationError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '-' => Some(Tok::Dash),
            '↓' | '*' | '@' => Some(Tok::Marker(c)),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((i, t));
            chars.next();
            continue;
        }
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some((_, '"')) => break,
                    Some((_, ch)) => s.push(ch),
                    None => {
                        return Err(NotationError {
                            offset: i,
                            message: "unterminated string".into(),
                        })
                    }
                }
            }
            out.push((i, Tok::Str(s)));
        } else if is_word_char(c) {
            let mut s = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if !is_word_char(ch) {
                    break;
                }
                s.push(ch);
                chars.next();
            }
            out.push((i, Tok::Word(s)));
        } else {
            return Err(NotationError {
                offset: i,
                message: format!("unexpected character `{}`", c),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    origin: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, NotationError> {
        Err(NotationError {
            offset: self.offset(),
            message: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), NotationError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            other => self.err(format!("expected {:?}, found {:?}", want, other)),
        }
    }

    fn word(&mut self) -> Result<String, NotationError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            other => self.err(format!("expected a name, found {:?}", other)),
        }
    }

    fn fs(&mut self) -> Result<FeatureStructure, NotationError> {
        self.expect(Tok::LBrace)?;
        let mut fs = FeatureStructure::new();
        if self.peek() == Some(&Tok::RBrace) {
            self.pos += 1;
            return Ok(fs);
        }
        loop {
            let name = self.word()?;
            self.expect(Tok::Eq)?;
            let value = self.word()?;
            if fs.contains(&name) {
                return self.err(format!("feature `{}` given twice", name));
            }
            fs.insert(name, FeatureValue::parse(&value).expect("non-empty word"));
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrace) => break,
                other => {
                    self.pos -= 1;
                    return self.err(format!("expected `,` or `}}`, found {:?}", other));
                }
            }
        }
        Ok(fs)
    }

    fn token(&mut self) -> Result<TreeNode, NotationError> {
        let left = if self.peek() == Some(&Tok::Dash) {
            self.pos += 1;
            true
        } else {
            false
        };
        let text = match self.next() {
            Some(Tok::Str(s)) => TokenText::Literal(s),
            Some(Tok::Lt) => {
                let v = self.word()?;
                if !v.starts_with(char::is_uppercase) {
                    return self.err("token variable must start with an uppercase letter");
                }
                self.expect(Tok::Gt)?;
                TokenText::Var(v)
            }
            other => {
                self.pos -= 1;
                return self.err(format!("expected a token, found {:?}", other));
            }
        };
        let right = if self.peek() == Some(&Tok::Dash) {
            self.pos += 1;
            true
        } else {
            false
        };
        let attachment = match (left, right) {
            (false, false) => Attachment::Free,
            (true, false) => Attachment::HyphenLeft,
            (false, true) => Attachment::HyphenRight,
            (true, true) => return self.err("token cannot attach on both sides"),
        };
        Ok(TreeNode::leaf(
            "",
            NodeKind::Lex(LexToken {
                text,
                attachment,
                origin: self.origin.to_string(),
            }),
            FeatureStructure::new(),
        ))
    }

    fn tree(&mut self) -> Result<TreeNode, NotationError> {
        self.expect(Tok::LParen)?;
        let category = self.word()?;
        let kind = match self.peek() {
            Some(Tok::Marker('↓')) => NodeKind::Substitution,
            Some(Tok::Marker('*')) => NodeKind::Foot,
            Some(Tok::Marker('@')) => NodeKind::Anchor,
            _ => NodeKind::Internal,
        };
        if kind != NodeKind::Internal {
            self.pos += 1;
        }
        let mut top = FeatureStructure::new();
        let mut bottom = FeatureStructure::new();
        loop {
            match (self.peek(), self.peek2()) {
                (Some(Tok::LBrace), _) => {
                    let fs = self.fs()?;
                    top = merge(top, &fs);
                    bottom = merge(bottom, &fs);
                }
                (Some(Tok::Word(w)), Some(Tok::LBrace)) if w == "top" || w == "bot" => {
                    let which = w.clone();
                    self.pos += 1;
                    let fs = self.fs()?;
                    if which == "top" {
                        top = merge(top, &fs);
                    } else {
                        bottom = merge(bottom, &fs);
                    }
                }
                _ => break,
            }
        }
        let mut children = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::RParen) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::LParen) => children.push(self.tree()?),
                Some(Tok::Dash) | Some(Tok::Str(_)) | Some(Tok::Lt) => children.push(self.token()?),
                other => return self.err(format!("unexpected {:?} in node {}", other, category)),
            }
        }
        Ok(TreeNode {
            category,
            top,
            bottom,
            kind,
            children,
        })
    }
}

fn merge(mut into: FeatureStructure, from: &FeatureStructure) -> FeatureStructure {
    for (k, v) in from.iter() {
        into.insert(k.clone(), v.clone());
    }
    into
}

/// Parses one tree expression. `origin` labels the lexical tokens it contains.
pub fn parse_tree(src: &str, origin: &str) -> Result<TreeNode, NotationError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
        origin,
    };
    let t = p.tree()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input after tree");
    }
    Ok(t)
}

/// Renders a tree in the notation above (token origins are not rendered).
pub struct Notation<'a>(pub &'a TreeNode);

impl fmt::Display for Notation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0;
        if let NodeKind::Lex(tok) = &n.kind {
            if tok.attachment == Attachment::HyphenLeft {
                f.write_str("-")?;
            }
            match &tok.text {
                TokenText::Literal(s) => write!(f, "\"{}\"", s)?,
                TokenText::Var(v) => write!(f, "<{}>", v)?,
            }
            if tok.attachment == Attachment::HyphenRight {
                f.write_str("-")?;
            }
            return Ok(());
        }
        write!(f, "({}", n.category)?;
        match n.kind {
            NodeKind::Substitution => f.write_str("↓")?,
            NodeKind::Foot => f.write_str("*")?,
            NodeKind::Anchor => f.write_str("@")?,
            _ => {}
        }
        if n.top == n.bottom {
            if !n.top.is_empty() {
                write!(f, " {}", n.top)?;
            }
        } else {
            if !n.top.is_empty() {
                write!(f, " top{}", n.top)?;
            }
            if !n.bottom.is_empty() {
                write!(f, " bot{}", n.bottom)?;
            }
        }
        for c in &n.children {
            write!(f, " {}", Notation(c))?;
        }
        f.write_str(")")
    }
}
