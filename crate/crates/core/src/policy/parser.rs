//! Recursive-descent parser for infix policies.
//!
//! ```text
//! expr   := term ("or" term)*
//! term   := factor ("and" factor)*
//! factor := ATTR | "(" expr ")" | NUMBER "of" "(" expr ("," expr)* ")"
//! ```
//!
//! A run of the same operator at one level becomes a single n-ary gate, so
//! `a and b and c` is one 3-of-3 gate while `(a and b) and c` nests.

use super::tree::{AccessNode, AccessTree};
use crate::error::PolicyError;

const KEYWORDS: [&str; 3] = ["and", "or", "of"];

pub(crate) fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Attr(String),
    Number(usize),
    And,
    Or,
    Of,
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug)]
struct Lexeme {
    token: Token,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Lexeme>, PolicyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b',' => Token::Comma,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    return Err(syntax(i, &["whitespace or delimiter after number"]));
                }
                let n = text[start..i]
                    .parse()
                    .map_err(|_| syntax(start, &["threshold that fits in usize"]))?;
                out.push(Lexeme {
                    token: Token::Number(n),
                    pos: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let token = match word {
                    "and" => Token::And,
                    "or" => Token::Or,
                    "of" => Token::Of,
                    _ => Token::Attr(word.to_string()),
                };
                out.push(Lexeme { token, pos: start });
                continue;
            }
            _ => return Err(syntax(i, &["attribute", "number", "'('"])),
        };
        out.push(Lexeme { token, pos: start });
        i += 1;
    }
    out.push(Lexeme {
        token: Token::End,
        pos: text.len(),
    });
    Ok(out)
}

fn syntax(position: usize, expected: &[&str]) -> PolicyError {
    PolicyError::SyntaxError {
        position,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

struct Parser {
    tokens: Vec<Lexeme>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].token
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].token.clone();
        if t != Token::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, label: &str) -> Result<(), PolicyError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), &[label]))
        }
    }

    fn expr(&mut self) -> Result<AccessNode, PolicyError> {
        let mut terms = vec![self.term()?];
        while *self.peek() == Token::Or {
            self.bump();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            AccessNode::or(terms)
        })
    }

    fn term(&mut self) -> Result<AccessNode, PolicyError> {
        let mut factors = vec![self.factor()?];
        while *self.peek() == Token::And {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            AccessNode::and(factors)
        })
    }

    fn factor(&mut self) -> Result<AccessNode, PolicyError> {
        let pos = self.pos();
        match self.bump() {
            Token::Attr(name) => Ok(AccessNode::Leaf(name)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Token::Number(k) => {
                self.expect(Token::Of, "'of'")?;
                self.expect(Token::LParen, "'('")?;
                let mut children = vec![self.expr()?];
                loop {
                    match self.peek() {
                        Token::Comma => {
                            self.bump();
                            children.push(self.expr()?);
                        }
                        Token::RParen => {
                            self.bump();
                            break;
                        }
                        _ => return Err(syntax(self.pos(), &["','", "')'"])),
                    }
                }
                if k < 1 || k > children.len() {
                    return Err(PolicyError::ThresholdOutOfRange {
                        threshold: k,
                        children: children.len(),
                    });
                }
                Ok(AccessNode::gate(k, children))
            }
            _ => Err(syntax(pos, &["attribute", "'('", "number"])),
        }
    }
}

/// Parses an infix policy such as `(a and b) or c` or `2 of (a, b, c)`.
pub fn parse_policy(text: &str) -> Result<AccessTree, PolicyError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        at: 0,
    };
    let root = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(syntax(parser.pos(), &["'and'", "'or'", "end of input"]));
    }
    AccessTree::new(root)
}
