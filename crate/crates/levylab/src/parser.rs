//! Concrete syntax for formulas.
//!
//! Grammar, loosest to tightest: `->` (right-associative), `or`, `and`, `not`;
//! quantifier bodies extend maximally rightward; `#` starts a line comment.
//!
//! ```text
//! formula := disjunction [ "->" formula ]
//! disjunction := conjunction { "or" conjunction }
//! conjunction := negation { "and" negation }
//! negation := "not" negation | quantifier | primary
//! quantifier := ("forall" | "exists") IDENT [ "in" IDENT ] "." formula
//!             | ("forallOrd" | "existsOrd") IDENT "." formula
//! primary := "(" formula ")" | IDENT "(" [ IDENT { "," IDENT } ] ")"
//!          | IDENT "in" IDENT | IDENT "=" IDENT
//! ```

use std::fmt;

use crate::ast::{Formula, Variable, KEYWORDS};
use crate::registry::Registry;

/// Source position of a token, 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Parse failures. Every input yields either a formula or one of these;
/// malformed input never panics.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{position}: expected {expected}, found {found}")]
    SyntaxError {
        position: Position,
        expected: String,
        found: String,
    },
    #[error("{position}: unknown predicate `{name}`")]
    UnknownPredicate { name: String, position: Position },
    #[error("{position}: predicate `{name}` applied to {got} arguments, expected {want}")]
    ArityMismatch {
        name: String,
        got: usize,
        want: usize,
        position: Position,
    },
    #[error("{position}: bounded quantifier binds `{variable}` with itself as the bound")]
    ScopeError {
        variable: Variable,
        position: Position,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Word(String),
    LParen,
    RParen,
    Dot,
    Comma,
    Equal,
    Arrow,
    Eof,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::Dot => "`.`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Equal => "`=`".to_string(),
            TokenKind::Arrow => "`->`".to_string(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    position: Position,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.char_indices().peekable();
    while let Some(&(offset, ch)) = chars.peek() {
        let position = Position {
            offset,
            line,
            column,
        };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            '#' => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                chars.next();
                column += 1;
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    position,
                });
            }
            ')' => {
                chars.next();
                column += 1;
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    position,
                });
            }
            '.' => {
                chars.next();
                column += 1;
                tokens.push(Token {
                    kind: TokenKind::Dot,
                    position,
                });
            }
            ',' => {
                chars.next();
                column += 1;
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    position,
                });
            }
            '=' => {
                chars.next();
                column += 1;
                tokens.push(Token {
                    kind: TokenKind::Equal,
                    position,
                });
            }
            '-' => {
                chars.next();
                column += 1;
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        column += 1;
                        tokens.push(Token {
                            kind: TokenKind::Arrow,
                            position,
                        });
                    }
                    _ => {
                        return Err(ParseError::SyntaxError {
                            position,
                            expected: "`->`".to_string(),
                            found: "`-`".to_string(),
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Word(word),
                    position,
                });
            }
            other => {
                return Err(ParseError::SyntaxError {
                    position,
                    expected: "a token".to_string(),
                    found: format!("`{other}`"),
                })
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        position: Position {
            offset: text.len(),
            line,
            column,
        },
    });
    Ok(tokens)
}

// Nesting cap keeping adversarial paren bombs from exhausting the stack,
// including the 2 MiB test-thread default; real formulas nest under 30.
const MAX_DEPTH: usize = 200;

struct Parser<'a> {
    tokens: Vec<Token>,
    index: usize,
    depth: usize,
    registry: &'a Registry,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.index]
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.index].clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        token
    }

    fn error(&self, expected: &str) -> ParseError {
        let token = self.peek();
        ParseError::SyntaxError {
            position: token.position,
            expected: expected.to_string(),
            found: token.kind.describe(),
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            Err(self.error(expected))
        }
    }

    fn peek_word(&self) -> Option<&str> {
        match &self.peek().kind {
            TokenKind::Word(w) => Some(w.as_str()),
            _ => None,
        }
    }

    fn expect_variable(&mut self) -> Result<(Variable, Position), ParseError> {
        match self.peek_word() {
            Some(w) if !KEYWORDS.contains(&w) => {
                let position = self.peek().position;
                let name = w.to_string();
                self.advance();
                Ok((Variable::new(name), position))
            }
            _ => Err(self.error("a variable name")),
        }
    }

    fn descend<T>(
        &mut self,
        go: impl FnOnce(&mut Self) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        if self.depth >= MAX_DEPTH {
            return Err(ParseError::SyntaxError {
                position: self.peek().position,
                expected: format!("nesting not deeper than {MAX_DEPTH}"),
                found: "deeper nesting".to_string(),
            });
        }
        self.depth += 1;
        let result = go(self);
        self.depth -= 1;
        result
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.descend(Self::implication)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.peek().kind == TokenKind::Arrow {
            self.advance();
            let right = self.formula()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.peek_word() == Some("or") {
            self.advance();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.negation()?;
        while self.peek_word() == Some("and") {
            self.advance();
            let right = self.negation()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn negation(&mut self) -> Result<Formula, ParseError> {
        match self.peek_word() {
            Some("not") => {
                self.advance();
                Ok(Formula::not(self.descend(Self::negation)?))
            }
            Some("forall") | Some("exists") => self.set_quantifier(),
            Some("forallOrd") | Some("existsOrd") => self.ord_quantifier(),
            _ => self.primary(),
        }
    }

    fn set_quantifier(&mut self) -> Result<Formula, ParseError> {
        let universal = self.peek_word() == Some("forall");
        self.advance();
        let (var, var_position) = self.expect_variable()?;
        let bound = if self.peek_word() == Some("in") {
            self.advance();
            let (bound, _) = self.expect_variable()?;
            Some(bound)
        } else {
            None
        };
        self.expect(TokenKind::Dot, "`.`")?;
        let body = self.formula()?;
        match bound {
            Some(bound) if bound == var => Err(ParseError::ScopeError {
                variable: var,
                position: var_position,
            }),
            Some(bound) if universal => Ok(Formula::bounded_forall(var, bound, body)),
            Some(bound) => Ok(Formula::bounded_exists(var, bound, body)),
            None if universal => Ok(Formula::forall(var, body)),
            None => Ok(Formula::exists(var, body)),
        }
    }

    fn ord_quantifier(&mut self) -> Result<Formula, ParseError> {
        let universal = self.peek_word() == Some("forallOrd");
        self.advance();
        let (var, _) = self.expect_variable()?;
        self.expect(TokenKind::Dot, "`.`")?;
        let body = self.formula()?;
        if universal {
            Ok(Formula::ord_forall(var, body))
        } else {
            Ok(Formula::ord_exists(var, body))
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match &self.peek().kind {
            TokenKind::LParen => {
                self.advance();
                let inner = self.formula()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::Word(w) if !KEYWORDS.contains(&w.as_str()) => self.atom(),
            _ => Err(self.error("a formula")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let (name, name_position) = match self.peek_word() {
            Some(w) => (w.to_string(), self.peek().position),
            None => return Err(self.error("an identifier")),
        };
        self.advance();
        match &self.peek().kind {
            TokenKind::LParen => {
                self.advance();
                let mut args = Vec::new();
                if self.peek().kind != TokenKind::RParen {
                    loop {
                        let (arg, _) = self.expect_variable()?;
                        args.push(arg);
                        if self.peek().kind == TokenKind::Comma {
                            self.advance();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(TokenKind::RParen, "`)`")?;
                let info = self.registry.get(&name).ok_or(ParseError::UnknownPredicate {
                    name: name.clone(),
                    position: name_position,
                })?;
                if info.arity() != args.len() {
                    return Err(ParseError::ArityMismatch {
                        name,
                        got: args.len(),
                        want: info.arity(),
                        position: name_position,
                    });
                }
                Ok(Formula::Defined(name, args))
            }
            TokenKind::Equal => {
                self.advance();
                let (right, _) = self.expect_variable()?;
                Ok(Formula::Equal(Variable::new(name), right))
            }
            TokenKind::Word(w) if w == "in" => {
                self.advance();
                let (right, _) = self.expect_variable()?;
                Ok(Formula::Member(Variable::new(name), right))
            }
            _ => Err(self.error("`in`, `=`, or `(`")),
        }
    }
}

/// Parses formula source text against a registry. Free variables are
/// permitted and treated as parameters.
pub fn parse(text: &str, registry: &Registry) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        index: 0,
        depth: 0,
        registry,
    };
    let formula = parser.formula()?;
    parser.expect(TokenKind::Eof, "end of input")?;
    Ok(formula)
}
